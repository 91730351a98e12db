//! Weighted monomial bases (Newton polytopes), flag membership and exact
//! matrix realizations of operators on those bases.

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::exactpoly::{diffop_apply, DiffOp, ExponentVector, Polynomial};
use crate::{Error, Rational, Result};

/// Weights `f_i ≥ 1` defining the grading `f·p` of a monomial `t^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicVector(pub Vec<u32>);

impl CharacteristicVector {
    pub fn ones(d: usize) -> Self {
        CharacteristicVector(vec![1; d])
    }

    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::InvalidParameter("characteristic vector entries must be ≥ 1".into()));
        }
        Ok(CharacteristicVector(weights))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Weighted degree `f·p` of a monomial.
pub fn weighted_degree(m: &ExponentVector, f: &CharacteristicVector) -> Result<u64> {
    if m.dim() != f.dim() {
        return Err(Error::LengthMismatch(m.dim(), f.dim()));
    }
    Ok(m.0.iter().zip(&f.0).map(|(&p, &w)| p as u64 * w as u64).sum())
}

/// Ordered monomial basis of the space `{ t^p : f·p ≤ n }`.
///
/// Ordering: weighted degree ascending, ties broken lexicographically on the
/// reversed exponent vector (last variable most significant). Index lookup is
/// the exact inverse of enumeration.
#[derive(Clone, Debug)]
pub struct WeightedBasis {
    pub d: usize,
    pub f: CharacteristicVector,
    pub n: u64,
    monomials: Vec<ExponentVector>,
    index: HashMap<ExponentVector, usize>,
}

impl WeightedBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &ExponentVector {
        &self.monomials[i]
    }

    pub fn monomials(&self) -> &[ExponentVector] {
        &self.monomials
    }

    pub fn index_of(&self, m: &ExponentVector) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn weighted_degree(&self, i: usize) -> u64 {
        weighted_degree(&self.monomials[i], &self.f).expect("basis monomial has basis dimension")
    }

    /// Basis monomial as a polynomial with unit coefficient.
    pub fn monomial_poly(&self, i: usize) -> Polynomial {
        Polynomial::monomial(self.d, self.monomials[i].clone(), num_traits::One::one())
    }
}

/// Enumerates the complete weighted basis for dimension `d`, weights `f`
/// and maximal weighted degree `n`.
pub fn enumerate_basis(d: usize, f: &CharacteristicVector, n: u64) -> Result<WeightedBasis> {
    if f.dim() != d {
        return Err(Error::LengthMismatch(f.dim(), d));
    }
    let mut monomials = Vec::new();
    let mut current = vec![0u32; d];
    fn rec(
        var: usize,
        budget: u64,
        f: &CharacteristicVector,
        current: &mut Vec<u32>,
        out: &mut Vec<ExponentVector>,
    ) {
        if var == f.dim() {
            out.push(ExponentVector(current.clone()));
            return;
        }
        let w = f.0[var] as u64;
        let max = budget / w;
        for e in 0..=max {
            current[var] = e as u32;
            rec(var + 1, budget - e * w, f, current, out);
        }
        current[var] = 0;
    }
    rec(0, n, f, &mut current, &mut monomials);
    // weighted degree ascending, then lex on reversed exponents
    monomials.sort_by(|a, b| {
        let wa = weighted_degree(a, f).unwrap();
        let wb = weighted_degree(b, f).unwrap();
        wa.cmp(&wb).then_with(|| {
            let ra: Vec<u32> = a.0.iter().rev().copied().collect();
            let rb: Vec<u32> = b.0.iter().rev().copied().collect();
            ra.cmp(&rb)
        })
    });
    let index = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    Ok(WeightedBasis { d, f: f.clone(), n, monomials, index })
}

/// Number of lattice points of the Newton polytope `f·p ≤ n`.
pub fn basis_dimension(d: usize, f: &CharacteristicVector, n: u64) -> Result<u64> {
    if f.dim() != d {
        return Err(Error::LengthMismatch(f.dim(), d));
    }
    fn rec(var: usize, budget: u64, f: &CharacteristicVector) -> u64 {
        if var == f.dim() {
            return 1;
        }
        let w = f.0[var] as u64;
        (0..=budget / w).map(|e| rec(var + 1, budget - e * w, f)).sum()
    }
    Ok(rec(0, n, f))
}

/// Exact matrix of an operator on a weighted basis: column `j` holds the
/// coordinates of `L(m_j)`; image components outside the basis are collected
/// in `remainder`, never dropped.
#[derive(Clone, Debug)]
pub struct OpMatrix {
    pub basis: WeightedBasis,
    /// Sparse columns: `(row, coefficient)` pairs, rows ascending.
    pub columns: Vec<Vec<(usize, Rational)>>,
    /// Per-column image parts outside the basis span.
    pub remainder: Vec<(usize, Polynomial)>,
}

impl OpMatrix {
    pub fn entry(&self, i: usize, j: usize) -> Rational {
        self.columns[j]
            .iter()
            .find(|(r, _)| *r == i)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn remainder_empty(&self) -> bool {
        self.remainder.is_empty()
    }

    pub fn to_dense(&self) -> crate::linalg::RatMat {
        let n = self.basis.len();
        let mut m = crate::linalg::RatMat::zeros(n, n);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col {
                *m.at_mut(*i, j) = c.clone();
            }
        }
        m
    }
}

/// Assembles the matrix of `L` over `basis`.
pub fn matrix_of(l: &DiffOp, basis: &WeightedBasis) -> Result<OpMatrix> {
    if l.dim() != basis.d {
        return Err(Error::DimensionMismatch(l.dim(), basis.d));
    }
    let mut columns = Vec::with_capacity(basis.len());
    let mut remainder = Vec::new();
    for j in 0..basis.len() {
        let image = diffop_apply(l, &basis.monomial_poly(j))?;
        let mut col = Vec::new();
        let mut outside = Polynomial::zero(basis.d);
        for (e, c) in image.terms() {
            match basis.index_of(e) {
                Some(i) => col.push((i, c.clone())),
                None => outside.add_term(e.clone(), c.clone()),
            }
        }
        col.sort_by_key(|(i, _)| *i);
        columns.push(col);
        if !outside.is_zero() {
            remainder.push((j, outside));
        }
    }
    Ok(OpMatrix { basis: basis.clone(), columns, remainder })
}

/// Offending monomial/image pair returned when preservation fails.
#[derive(Clone, Debug, Serialize)]
pub struct FlagWitness {
    pub monomial: String,
    pub image_term: String,
}

/// Outcome of a flag-preservation check, serializable for reports.
#[derive(Clone, Debug, Serialize)]
pub struct FlagReport {
    pub preserved: bool,
    pub n_max: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<FlagWitness>,
}

/// Checks that `L` never raises the weighted degree of any monomial with
/// `f·m ≤ n_max`; on failure reports a witness monomial and image term.
pub fn flag_preserved(l: &DiffOp, f: &CharacteristicVector, n_max: u64) -> Result<FlagReport> {
    if l.dim() != f.dim() {
        return Err(Error::DimensionMismatch(l.dim(), f.dim()));
    }
    let basis = enumerate_basis(f.dim(), f, n_max)?;
    for j in 0..basis.len() {
        let m = basis.monomial(j);
        let wm = weighted_degree(m, f)?;
        let image = diffop_apply(l, &basis.monomial_poly(j))?;
        for (e, c) in image.terms() {
            if weighted_degree(e, f)? > wm {
                let term = Polynomial::monomial(f.dim(), e.clone(), c.clone());
                return Ok(FlagReport {
                    preserved: false,
                    n_max,
                    witness: Some(FlagWitness {
                        monomial: Polynomial::monomial(
                            f.dim(),
                            m.clone(),
                            num_traits::One::one(),
                        )
                        .to_string(),
                        image_term: term.to_string(),
                    }),
                });
            }
        }
    }
    Ok(FlagReport { preserved: true, n_max, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{diffop_from_str, DerivativeIndex};
    use crate::{rat_int, Rational};

    #[test]
    fn basis_counts() {
        let f11 = CharacteristicVector::ones(2);
        assert_eq!(enumerate_basis(2, &f11, 2).unwrap().len(), 6);
        let f12 = CharacteristicVector(vec![1, 2]);
        assert_eq!(enumerate_basis(2, &f12, 4).unwrap().len(), 9);
        let fh4 = CharacteristicVector(vec![1, 5, 8, 12]);
        assert_eq!(enumerate_basis(4, &fh4, 12).unwrap().len(), 30);
    }

    #[test]
    fn dimension_law_binomial() {
        // for f = (1,...,1): C(n+d, d)
        fn binom(n: u64, k: u64) -> u64 {
            let mut acc = 1u64;
            for i in 0..k {
                acc = acc * (n - i) / (i + 1);
            }
            acc
        }
        for d in 1..=6usize {
            let f = CharacteristicVector::ones(d);
            for n in 0..=12u64 {
                assert_eq!(
                    basis_dimension(d, &f, n).unwrap(),
                    binom(n + d as u64, d as u64),
                    "d={d} n={n}"
                );
            }
        }
        // lattice-point enumeration cases
        let f123 = CharacteristicVector(vec![1, 2, 3]);
        assert_eq!(basis_dimension(3, &f123, 6).unwrap(), 23);
        assert_eq!(basis_dimension(5, &CharacteristicVector::ones(5), 0).unwrap(), 1);
    }

    #[test]
    fn weighted_degrees() {
        let f = CharacteristicVector(vec![1, 2, 3]);
        assert_eq!(weighted_degree(&ExponentVector(vec![0, 0, 0]), &f).unwrap(), 0);
        assert_eq!(weighted_degree(&ExponentVector(vec![1, 1, 0]), &f).unwrap(), 3);
        let fh4 = CharacteristicVector(vec![1, 5, 8, 12]);
        assert_eq!(weighted_degree(&ExponentVector(vec![0, 0, 0, 1]), &fh4).unwrap(), 12);
        assert!(weighted_degree(&ExponentVector(vec![1]), &fh4).is_err());
    }

    #[test]
    fn enumeration_ordered_and_invertible() {
        let f = CharacteristicVector(vec![1, 2]);
        let b = enumerate_basis(2, &f, 5).unwrap();
        for i in 0..b.len() {
            assert_eq!(b.index_of(b.monomial(i)), Some(i));
            if i > 0 {
                assert!(b.weighted_degree(i - 1) <= b.weighted_degree(i));
            }
        }
    }

    #[test]
    fn matrix_of_laguerre_type() {
        // L = −2 t d² + (2ωt − c) d with ω = 1, c = 3 on {1, t, t²}
        let l = diffop_from_str("(-2*t1) d1^2 + (2*t1 - 3) d1", 1).unwrap();
        let f = CharacteristicVector::ones(1);
        let basis = enumerate_basis(1, &f, 2).unwrap();
        let m = matrix_of(&l, &basis).unwrap();
        assert!(m.remainder_empty());
        // L(1) = 0; L(t) = 2t − 3; L(t²) = −4t + 4t² − 6t
        assert_eq!(m.entry(0, 1), rat_int(-3));
        assert_eq!(m.entry(1, 1), rat_int(2));
        assert_eq!(m.entry(1, 2), rat_int(-10));
        assert_eq!(m.entry(2, 2), rat_int(4));
        assert_eq!(m.entry(0, 2), Rational::from_integer(0.into()));
    }

    #[test]
    fn g2_matrix_has_empty_remainder() {
        let params = crate::models::ModelParams {
            omega: crate::rat_int(1),
            nu: crate::rat(1, 3),
            mu: crate::rat(1, 5),
            ..Default::default()
        };
        let op = crate::models::build_g2(&params);
        let f = CharacteristicVector(vec![1, 2]);
        let basis = enumerate_basis(2, &f, 3).unwrap();
        let m = matrix_of(&op, &basis).unwrap();
        assert!(m.remainder_empty());
    }

    #[test]
    fn degree_raising_goes_to_remainder() {
        // L = t² d on {1, t} with f = (1): image of t is t²
        let l = DiffOp::term(
            Polynomial::monomial(1, ExponentVector(vec![2]), rat_int(1)),
            DerivativeIndex::unit(1, 0),
        );
        let f = CharacteristicVector::ones(1);
        let basis = enumerate_basis(1, &f, 1).unwrap();
        let m = matrix_of(&l, &basis).unwrap();
        assert_eq!(m.remainder.len(), 1);
        assert_eq!(m.remainder[0].0, 1);
        assert_eq!(m.remainder[0].1.to_string(), "t1^2");

        let report = flag_preserved(&l, &f, 3).unwrap();
        assert!(!report.preserved);
        assert!(report.witness.is_some());
    }
}
