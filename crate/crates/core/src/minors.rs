//! Type A oracle: products of `x_i(t)`, their minors, and comparison with `φ_{V_k}`.

use serde::Serialize;
use thiserror::Error;

use crate::cartan_weyl::{CartanMatrix, ReducedWord};
use crate::laurent::{LaurentError, LaurentPoly, VarTable};
use crate::shuffle::{g_v, phi_eval, ShuffleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinorError {
    #[error("Cartan matrix is not of type A")]
    NotTypeA,
    #[error("minor spec mismatch: {0}")]
    SizeMismatch(String),
    #[error("k = {k}: phi gives {phi}, minor gives {minor}")]
    Mismatch {
        k: usize,
        phi: String,
        minor: String,
    },
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Square matrix over Laurent polynomials, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PolyMatrix {
    pub rows: Vec<Vec<LaurentPoly>>,
}

impl PolyMatrix {
    pub fn identity(vars: &VarTable, m: usize) -> Self {
        let rows = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if i == j {
                            LaurentPoly::one(vars)
                        } else {
                            LaurentPoly::zero(vars)
                        }
                    })
                    .collect()
            })
            .collect();
        PolyMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.rows[i - 1][j - 1]
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        let m = self.size();
        let vars = self.rows[0][0].vars().clone();
        let mut out = PolyMatrix::identity(&vars, m);
        for i in 0..m {
            for j in 0..m {
                let mut acc = LaurentPoly::zero(&vars);
                for k in 0..m {
                    if !self.rows[i][k].is_zero() && !other.rows[k][j].is_zero() {
                        acc = &acc + &(&self.rows[i][k] * &other.rows[k][j]);
                    }
                }
                out.rows[i][j] = acc;
            }
        }
        out
    }

    pub fn is_unitriangular(&self) -> bool {
        (0..self.size())
            .all(|i| self.rows[i][i].is_one() && (0..i).all(|j| self.rows[i][j].is_zero()))
    }
}

/// `x_{j_1}(t_1) ⋯ x_{j_p}(t_p)`, each factor the identity plus `t` at `(j, j+1)`.
pub fn x_product(
    c: &CartanMatrix,
    letters: &[usize],
    vars: &VarTable,
) -> Result<PolyMatrix, MinorError> {
    if !c.is_type_a() {
        return Err(MinorError::NotTypeA);
    }
    if letters.len() != vars.len() {
        return Err(LaurentError::ArityMismatch {
            expected: letters.len(),
            found: vars.len(),
        }
        .into());
    }
    let m = c.rank() + 1;
    let mut x = PolyMatrix::identity(vars, m);
    for (q, &j) in letters.iter().enumerate() {
        let mut f = PolyMatrix::identity(vars, m);
        f.rows[j - 1][j] = LaurentPoly::var(vars, q);
        x = x.mul(&f);
    }
    Ok(x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorSpec {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Laplace expansion along the first row.
pub fn det_cofactor(a: &[Vec<LaurentPoly>], vars: &VarTable) -> LaurentPoly {
    let n = a.len();
    if n == 0 {
        return LaurentPoly::one(vars);
    }
    let mut acc = LaurentPoly::zero(vars);
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let sub: Vec<Vec<LaurentPoly>> = a[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &a[0][j] * &det_cofactor(&sub, vars);
        acc = if j % 2 == 0 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}

/// Fraction-free elimination with row swaps.
pub fn det_bareiss(a: &[Vec<LaurentPoly>], vars: &VarTable) -> Result<LaurentPoly, MinorError> {
    let n = a.len();
    let mut m: Vec<Vec<LaurentPoly>> = a.to_vec();
    let mut sign = false;
    let mut prev = LaurentPoly::one(vars);
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Ok(LaurentPoly::zero(vars));
            };
            m.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let d = if n == 0 {
        LaurentPoly::one(vars)
    } else {
        m[n - 1][n - 1].clone()
    };
    Ok(if sign { -&d } else { d })
}

pub fn minor(x: &PolyMatrix, spec: &MinorSpec) -> Result<LaurentPoly, MinorError> {
    let m = x.size();
    if spec.rows.len() != spec.cols.len() {
        return Err(MinorError::SizeMismatch(format!(
            "{} rows, {} columns",
            spec.rows.len(),
            spec.cols.len()
        )));
    }
    if let Some(bad) = spec
        .rows
        .iter()
        .chain(&spec.cols)
        .find(|&&i| i == 0 || i > m)
    {
        return Err(MinorError::SizeMismatch(format!(
            "index {bad} outside 1..={m}"
        )));
    }
    let vars = x.rows[0][0].vars().clone();
    let sub: Vec<Vec<LaurentPoly>> = spec
        .rows
        .iter()
        .map(|&i| spec.cols.iter().map(|&j| x.entry(i, j).clone()).collect())
        .collect();
    if sub.len() < 5 {
        Ok(det_cofactor(&sub, &vars))
    } else {
        det_bareiss(&sub, &vars)
    }
}

/// `I = {1..i_k}`, `J = s_{i_1} ⋯ s_{i_k}(I)` with `s_{i_k}` applied first.
pub fn minor_spec_for_vk(
    c: &CartanMatrix,
    w: &ReducedWord,
    k: usize,
) -> Result<MinorSpec, MinorError> {
    if !c.is_type_a() {
        return Err(MinorError::NotTypeA);
    }
    let rows: Vec<usize> = (1..=w.letter(k)).collect();
    let mut cols = rows.clone();
    for t in (1..=k).rev() {
        let i = w.letter(t);
        for x in cols.iter_mut() {
            if *x == i {
                *x = i + 1;
            } else if *x == i + 1 {
                *x = i;
            }
        }
    }
    cols.sort_unstable();
    Ok(MinorSpec { rows, cols })
}

/// Letters of `w` as printed, with variables `t_r, …, t_1` in the same order.
pub fn word_pattern(w: &ReducedWord) -> (Vec<usize>, VarTable) {
    let vars = VarTable::new((1..=w.len()).rev().map(|q| format!("t{q}"))).expect("distinct names");
    (w.printed(), vars)
}

/// Checks `φ_{V_k}(x(t)) = D_{I,J}(x(t))` and returns the common value.
pub fn cross_validate(
    c: &CartanMatrix,
    w: &ReducedWord,
    k: usize,
    letters: &[usize],
    vars: &VarTable,
) -> Result<LaurentPoly, MinorError> {
    let spec = minor_spec_for_vk(c, w, k)?;
    let d = minor(&x_product(c, letters, vars)?, &spec)?;
    let phi = phi_eval(&g_v(c, w, k)?, letters, vars)?;
    if phi == d {
        Ok(d)
    } else {
        Err(MinorError::Mismatch {
            k,
            phi: phi.to_string(),
            minor: d.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a4() -> (CartanMatrix, ReducedWord) {
        let c = CartanMatrix::type_a(4);
        let w = ReducedWord::new(&c, &[3, 4, 2, 1, 3, 4, 2, 1]).unwrap();
        (c, w)
    }

    fn parse(vars: &VarTable, s: &str) -> LaurentPoly {
        // sums of products of single variables
        let mut acc = LaurentPoly::zero(vars);
        for term in s.split('+') {
            let mut m = LaurentPoly::one(vars);
            for name in term.split('*') {
                m = &m * &LaurentPoly::var(vars, vars.index_of(name.trim()).unwrap());
            }
            acc = &acc + &m;
        }
        acc
    }

    #[test]
    fn product_entries() {
        let (c, w) = a4();
        let (letters, vars) = word_pattern(&w);
        let x = x_product(&c, &letters, &vars).unwrap();
        assert!(x.is_unitriangular());
        assert_eq!(x.entry(1, 2), &parse(&vars, "t5+t1"));
        assert_eq!(x.entry(2, 5), &parse(&vars, "t6*t4*t3"));
        assert_eq!(x.entry(3, 5), &parse(&vars, "t8*t7+t8*t3+t4*t3"));
    }

    #[test]
    fn specs_for_vk() {
        let (c, w) = a4();
        let spec = minor_spec_for_vk(&c, &w, 4).unwrap();
        assert_eq!(
            spec,
            MinorSpec {
                rows: vec![1, 2, 3],
                cols: vec![2, 3, 5]
            }
        );
        let spec = minor_spec_for_vk(&c, &w, 7).unwrap();
        assert_eq!(
            spec,
            MinorSpec {
                rows: vec![1, 2, 3, 4],
                cols: vec![2, 3, 4, 5]
            }
        );
    }

    #[test]
    fn identity_minor_and_errors() {
        let c = CartanMatrix::type_a(2);
        let vars = VarTable::indexed("t", 0);
        let x = x_product(&c, &[], &vars).unwrap();
        assert!(minor(
            &x,
            &MinorSpec {
                rows: vec![1, 3],
                cols: vec![1, 3]
            }
        )
        .unwrap()
        .is_one());
        assert!(matches!(
            minor(
                &x,
                &MinorSpec {
                    rows: vec![1],
                    cols: vec![1, 2]
                }
            ),
            Err(MinorError::SizeMismatch(_))
        ));
        let d = CartanMatrix::from_edges(3, &[(1, 2, 2)]).unwrap();
        assert_eq!(x_product(&d, &[], &vars), Err(MinorError::NotTypeA));
    }

    #[test]
    fn all_eight_identities() {
        let (c, w) = a4();
        let (letters, vars) = word_pattern(&w);
        let printed = [
            "t5+t1",
            "t6*t5+t6*t1+t2*t1",
            "t7+t3",
            "t8*t7*t6*t5+t8*t7*t6*t1+t8*t7*t2*t1+t8*t6*t3*t5+t8*t6*t3*t1+t8*t3*t2*t1+t4*t3*t2*t1",
            "t5*t2",
            "t6*t5*t4*t3*t2",
            "t7*t4*t2*t1",
            "t8*t7*t6*t5*t4*t2",
        ];
        for (k, p) in printed.iter().enumerate() {
            assert_eq!(
                cross_validate(&c, &w, k + 1, &letters, &vars).unwrap(),
                parse(&vars, p),
                "k = {}",
                k + 1
            );
        }
    }

    fn vars_for(n: usize) -> VarTable {
        VarTable::indexed("t", n)
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor(entries in prop::collection::vec(prop::collection::vec((0i32..2, -2i64..3), 3), 16)) {
            let vars = vars_for(3);
            let a: Vec<Vec<LaurentPoly>> = entries
                .chunks(4)
                .map(|row| row.iter().map(|e| {
                    LaurentPoly::from_terms(&vars, e.iter().enumerate().map(|(i, &(p, c))| {
                        let mut exp = vec![0; 3];
                        exp[i] = p;
                        (exp, c.into())
                    })).unwrap()
                }).collect())
                .collect();
            prop_assert_eq!(det_bareiss(&a, &vars).unwrap(), det_cofactor(&a, &vars));
        }

        #[test]
        fn random_a3_words_cross_validate(raw in prop::collection::vec(1usize..4, 0..7)) {
            let c = CartanMatrix::type_a(3);
            let mut seq = Vec::new();
            for x in raw {
                seq.push(x);
                if ReducedWord::from_sequence(&c, &seq).is_err() {
                    seq.pop();
                }
            }
            let w = ReducedWord::from_sequence(&c, &seq).unwrap();
            let (letters, vars) = word_pattern(&w);
            for k in 1..=w.len() {
                cross_validate(&c, &w, k, &letters, &vars).unwrap();
            }
        }
    }
}
