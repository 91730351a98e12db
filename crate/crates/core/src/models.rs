//! Constructors for the gauge-rotated algebraic Hamiltonians of the rational
//! models (O(N), (Z2)^N, Calogero A_{N−1}, BC_N, G2, H3, H4), their QES
//! deformations, and the per-model registry (characteristic vector, gauge
//! convention, spectrum linear form).
//!
//! Conventions. Each operator acts on polynomials in the invariant
//! coordinates of the model's discrete symmetry group and annihilates
//! constants (the gauged ground state). The second-order part is assembled
//! as a double sum over ordered index pairs `A_ij ∂²_ij`; where a symmetric
//! coefficient table is stored upper-triangular, off-diagonal entries are
//! installed on both orderings. The Euler parts of the first-order
//! coefficients carry one factor `gauge_scale · ω · deg` per variable, where
//! `deg` is the Cartesian degree of the invariant; this fixes the spectrum
//! linear forms recorded in the registry and is cross-checked against the
//! Cartesian Hamiltonians by the gauge oracles.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactpoly::{DerivativeIndex, DiffOp, ExponentVector, Polynomial};
use crate::flags::CharacteristicVector;
use crate::{rat_int, Error, Rational, Result};

/// Couplings of a model. Unused entries are ignored by each constructor.
#[derive(Clone, Debug)]
pub struct ModelParams {
    pub omega: Rational,
    pub nu: Rational,
    /// Second coupling of the BC_N model.
    pub nu2: Rational,
    /// Three-body coupling of the G2 (Wolfes) model.
    pub mu: Rational,
    /// Body count for the N-parameterized families.
    pub n_bodies: usize,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            omega: Rational::one(),
            nu: Rational::zero(),
            nu2: Rational::zero(),
            mu: Rational::zero(),
            n_bodies: 3,
        }
    }
}

/// Parameters of the quasi-exactly-solvable deformation
/// `δh = 4(a v² − γ)∂_v − 4akv + 2ωk` in the radial variable `v`.
#[derive(Clone, Debug)]
pub struct QesParams {
    pub a: Rational,
    pub gamma: Rational,
    pub k: u32,
    /// Index of the variable playing the radius squared.
    pub var_index: usize,
}

/// The seven registered model families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    On,
    Z2n,
    Calogero,
    Bcn,
    G2,
    H3,
    H4,
}

impl ModelKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "on" | "o(n)" => Ok(ModelKind::On),
            "z2n" | "z2^n" | "(z2)^n" => Ok(ModelKind::Z2n),
            "calogero" | "an" | "a_n" => Ok(ModelKind::Calogero),
            "bcn" | "bc_n" => Ok(ModelKind::Bcn),
            "g2" => Ok(ModelKind::G2),
            "h3" => Ok(ModelKind::H3),
            "h4" => Ok(ModelKind::H4),
            other => Err(Error::UnknownModel(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::On => "on",
            ModelKind::Z2n => "z2n",
            ModelKind::Calogero => "calogero",
            ModelKind::Bcn => "bcn",
            ModelKind::G2 => "g2",
            ModelKind::H3 => "h3",
            ModelKind::H4 => "h4",
        }
    }
}

/// Registry entry binding a model to its algebraic data and operator.
#[derive(Clone, Debug)]
pub struct Model {
    pub kind: ModelKind,
    /// Algebraic dimension (number of invariant variables).
    pub d: usize,
    pub f: CharacteristicVector,
    /// `c` in `h = c · Ψ0⁻¹ (H − E0) Ψ0`.
    pub gauge_scale: Rational,
    /// Integer weights `w` with `ε(p) = 2ω Σ w_i p_i`.
    pub eps_weights: Vec<i64>,
    /// Operator eigenvalue = `operator_eps_factor · ε(p)`.
    pub operator_eps_factor: i64,
    /// Default degree for flag/spectrum verification.
    pub default_degree: u64,
    pub params: ModelParams,
    pub op: DiffOp,
}

impl Model {
    /// Builds the registry entry for a model family with given parameters.
    pub fn build(kind: ModelKind, params: ModelParams) -> Result<Model> {
        let n = params.n_bodies;
        match kind {
            ModelKind::On => {
                // one-variable Laguerre-type operator with l̃ = ν
                let op = build_on(&params, &params.nu);
                Ok(Model {
                    kind,
                    d: 1,
                    f: CharacteristicVector::ones(1),
                    gauge_scale: Rational::one(),
                    eps_weights: vec![1],
                    operator_eps_factor: 1,
                    default_degree: 8,
                    params,
                    op,
                })
            }
            ModelKind::Z2n => {
                let nus = vec![params.nu.clone(); n];
                let op = build_z2n(n, &nus, &params.omega)?;
                Ok(Model {
                    kind,
                    d: n,
                    f: CharacteristicVector::ones(n),
                    gauge_scale: Rational::one(),
                    eps_weights: vec![1; n],
                    operator_eps_factor: 1,
                    default_degree: 8,
                    params,
                    op,
                })
            }
            ModelKind::Calogero => {
                let op = build_calogero(n, &params)?;
                Ok(Model {
                    kind,
                    d: n - 1,
                    f: CharacteristicVector::ones(n - 1),
                    gauge_scale: rat_int(2),
                    eps_weights: (2..=n as i64).collect(),
                    operator_eps_factor: 1,
                    default_degree: 8,
                    params,
                    op,
                })
            }
            ModelKind::Bcn => {
                let op = build_bcn(n, &params)?;
                Ok(Model {
                    kind,
                    d: n,
                    f: CharacteristicVector::ones(n),
                    gauge_scale: Rational::one(),
                    eps_weights: (1..=n as i64).collect(),
                    operator_eps_factor: 1,
                    default_degree: 8,
                    params,
                    op,
                })
            }
            ModelKind::G2 => Ok(Model {
                kind,
                d: 2,
                f: CharacteristicVector(vec![1, 2]),
                gauge_scale: Rational::one(),
                eps_weights: vec![1, 3],
                operator_eps_factor: 1,
                default_degree: 8,
                op: build_g2(&params),
                params,
            }),
            ModelKind::H3 => Ok(Model {
                kind,
                d: 3,
                f: CharacteristicVector(vec![1, 2, 3]),
                gauge_scale: rat_int(-2),
                eps_weights: vec![1, 3, 5],
                operator_eps_factor: -2,
                default_degree: 10,
                op: build_h3(&params),
                params,
            }),
            ModelKind::H4 => Ok(Model {
                kind,
                d: 4,
                f: CharacteristicVector(vec![1, 5, 8, 12]),
                gauge_scale: rat_int(-2),
                eps_weights: vec![1, 6, 10, 15],
                operator_eps_factor: -2,
                default_degree: 24,
                op: build_h4(&params),
                params,
            }),
        }
    }

    /// Variable names in registry order (radial variable first).
    pub fn var_names(&self) -> Vec<String> {
        match self.kind {
            ModelKind::On => vec!["t".into()],
            ModelKind::Z2n => (1..=self.d).map(|i| format!("t{i}")).collect(),
            ModelKind::Calogero => (2..=self.d + 1).map(|i| format!("t{i}")).collect(),
            ModelKind::Bcn => (1..=self.d).map(|i| format!("s{i}")).collect(),
            ModelKind::G2 => vec!["l1".into(), "l2".into()],
            ModelKind::H3 | ModelKind::H4 => {
                (1..=self.d).map(|i| format!("tau{i}")).collect()
            }
        }
    }

    /// Index of the radial variable (the QES deformation direction).
    pub fn radial_var(&self) -> usize {
        0
    }

    /// The model's spectrum value `ε(p) = 2ω Σ w_i p_i`, exact.
    pub fn epsilon(&self, p: &[u32]) -> Result<Rational> {
        if p.len() != self.d {
            return Err(Error::LengthMismatch(p.len(), self.d));
        }
        let s: i64 = p
            .iter()
            .zip(&self.eps_weights)
            .map(|(&pi, &w)| pi as i64 * w)
            .sum();
        Ok(&self.params.omega * rat_int(2 * s))
    }

    /// Eigenvalue of the registered operator on the `p`-eigenfunction.
    pub fn operator_eigenvalue(&self, p: &[u32]) -> Result<Rational> {
        Ok(self.epsilon(p)? * rat_int(self.operator_eps_factor))
    }
}

fn var(d: usize, i: usize) -> Polynomial {
    Polynomial::var(d, i)
}

fn cpoly(d: usize, c: Rational) -> Polynomial {
    Polynomial::constant(d, c)
}

/// Laguerre-type one-variable operator of the O(N)-symmetric oscillator in
/// `t = r²` after gauging away `r^l̃ exp(−ω r²/2)`:
/// `−2t ∂² + (2ωt − N − 2l̃) ∂`.
pub fn build_on(params: &ModelParams, l_tilde: &Rational) -> DiffOp {
    let d = 1;
    let omega = &params.omega;
    let second = var(d, 0).scale(&rat_int(-2));
    let first = &var(d, 0).scale(&(omega * rat_int(2)))
        - &cpoly(d, rat_int(params.n_bodies as i64) + l_tilde * rat_int(2));
    &DiffOp::term(second, DerivativeIndex(vec![2])) + &DiffOp::first_order(first, 0)
}

/// Sum of one-variable Laguerre-type operators in `t_i = x_i²`:
/// `Σ_i [ −2 t_i ∂_i² + (2ω t_i − 1 − 2ν_i) ∂_i ]`.
pub fn build_z2n(n: usize, nus: &[Rational], omega: &Rational) -> Result<DiffOp> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be ≥ 1".into()));
    }
    if nus.len() != n {
        return Err(Error::LengthMismatch(nus.len(), n));
    }
    let mut op = DiffOp::zero(n);
    for i in 0..n {
        let second = var(n, i).scale(&rat_int(-2));
        let first = &var(n, i).scale(&(omega * rat_int(2)))
            - &cpoly(n, Rational::one() + &nus[i] * rat_int(2));
        op = &op + &DiffOp::term(second, DerivativeIndex::second(n, i, i));
        op = &op + &DiffOp::first_order(first, i);
    }
    Ok(op)
}

/// Calogero coefficient helper: `t_idx` with `t_0 = 1`, `t_1 = 0`, and
/// indices outside `0..=N` contributing zero.
fn calogero_t(d: usize, n: usize, idx: i64) -> Option<Polynomial> {
    if idx == 0 {
        return Some(Polynomial::one(d));
    }
    if idx == 1 || idx < 0 || idx > n as i64 {
        return None;
    }
    Some(var(d, (idx - 2) as usize))
}

/// Gauge-rotated Calogero Hamiltonian (`h = 2Ψ0⁻¹(H−E0)Ψ0`) in the
/// elementary symmetric polynomials `t_k = σ_k(y)` of the relative
/// coordinates, variables `t_2..t_N`:
///
/// `A_ij = (N−i+1)(1−j)/N · t_{i−1} t_{j−1} + Σ_{l≥max(1,j−i)} (2l−j+i) t_{i+l−1} t_{j−l−1}`
/// `B_i  = (1/N)(1+νN)(N−i+2)(N−i+1) t_{i−2} + 2ω i t_i`
pub fn build_calogero(n: usize, params: &ModelParams) -> Result<DiffOp> {
    if n < 2 {
        return Err(Error::InvalidParameter("Calogero requires N ≥ 2".into()));
    }
    let d = n - 1;
    let omega = &params.omega;
    let nu = &params.nu;
    let mut op = DiffOp::zero(d);
    for i in 2..=n as i64 {
        for j in 2..=n as i64 {
            let mut a = Polynomial::zero(d);
            if let (Some(p), Some(q)) = (calogero_t(d, n, i - 1), calogero_t(d, n, j - 1)) {
                let c = Rational::new(
                    (((n as i64) - i + 1) * (1 - j)).into(),
                    (n as i64).into(),
                );
                a = &a + &(&p * &q).scale(&c);
            }
            let mut l = std::cmp::max(1, j - i);
            loop {
                let hi = i + l - 1;
                let lo = j - l - 1;
                if hi > n as i64 || lo < 0 {
                    break;
                }
                if let (Some(p), Some(q)) = (calogero_t(d, n, hi), calogero_t(d, n, lo)) {
                    a = &a + &(&p * &q).scale(&rat_int(2 * l - j + i));
                }
                l += 1;
            }
            if !a.is_zero() {
                let didx = DerivativeIndex::second(d, (i - 2) as usize, (j - 2) as usize);
                op = &op + &DiffOp::term(a, didx);
            }
        }
        let mut b = Polynomial::zero(d);
        if let Some(p) = calogero_t(d, n, i - 2) {
            let c = (Rational::one() + nu * rat_int(n as i64))
                * Rational::new(
                    (((n as i64) - i + 2) * ((n as i64) - i + 1)).into(),
                    (n as i64).into(),
                );
            b = &b + &p.scale(&c);
        }
        b = &b + &var(d, (i - 2) as usize).scale(&(omega * rat_int(2 * i)));
        op = &op + &DiffOp::first_order(b, (i - 2) as usize);
    }
    Ok(op)
}

fn bcn_sigma(d: usize, n: usize, idx: i64) -> Option<Polynomial> {
    if idx == 0 {
        return Some(Polynomial::one(d));
    }
    if idx < 0 || idx > n as i64 {
        return None;
    }
    Some(var(d, (idx - 1) as usize))
}

/// Gauge-rotated BC_N Hamiltonian (`h = Ψ0⁻¹(H−E0)Ψ0`) in `σ_k(x²)`,
/// variables `σ_1..σ_N`:
///
/// `A_ij = −2 Σ_{l≥0} (2l+1+j−i) σ_{i−l−1} σ_{j+l}`
/// `B_i  = 2ω i σ_i − (N−i+1)[1 + 2ν_2 + 2ν(N−i)] σ_{i−1}`
pub fn build_bcn(n: usize, params: &ModelParams) -> Result<DiffOp> {
    if n < 1 {
        return Err(Error::InvalidParameter("BC_N requires N ≥ 1".into()));
    }
    let d = n;
    let omega = &params.omega;
    let nu = &params.nu;
    let nu2 = &params.nu2;
    let mut op = DiffOp::zero(d);
    for i in 1..=n as i64 {
        for j in 1..=n as i64 {
            let mut a = Polynomial::zero(d);
            let mut l = 0i64;
            loop {
                let lo = i - l - 1;
                let hi = j + l;
                if lo < 0 || hi > n as i64 {
                    break;
                }
                if let (Some(p), Some(q)) = (bcn_sigma(d, n, lo), bcn_sigma(d, n, hi)) {
                    a = &a + &(&p * &q).scale(&rat_int(-2 * (2 * l + 1 + j - i)));
                }
                l += 1;
            }
            if !a.is_zero() {
                let didx = DerivativeIndex::second(d, (i - 1) as usize, (j - 1) as usize);
                op = &op + &DiffOp::term(a, didx);
            }
        }
        let mut b = var(d, (i - 1) as usize).scale(&(omega * rat_int(2 * i)));
        if let Some(p) = bcn_sigma(d, n, i - 1) {
            let bracket = Rational::one()
                + nu2 * rat_int(2)
                + nu * rat_int(2 * ((n as i64) - i));
            b = &b + &p.scale(&-(bracket * rat_int((n as i64) - i + 1)));
        }
        op = &op + &DiffOp::first_order(b, (i - 1) as usize);
    }
    Ok(op)
}

/// Algebraic form of the G2 (Wolfes) model in `λ1 = −(y1²+y2²+y1y2)`,
/// `λ2 = [y1 y2 (y1+y2)]²`:
///
/// `h = λ1 ∂²_{11} + 6λ2 ∂²_{12} − (4/3)λ1²λ2 ∂²_{22}
///      + [2ωλ1 + 1 + 3(μ+ν)] ∂_1 + [6ωλ2 − (2/3)(1+2μ)λ1²] ∂_2`
pub fn build_g2(params: &ModelParams) -> DiffOp {
    let d = 2;
    let omega = &params.omega;
    let l1 = var(d, 0);
    let l2 = var(d, 1);
    let mut op = DiffOp::term(l1.clone(), DerivativeIndex::second(d, 0, 0));
    op = &op + &DiffOp::term(l2.scale(&rat_int(6)), DerivativeIndex::second(d, 0, 1));
    op = &op
        + &DiffOp::term(
            (&l1.pow(2) * &l2).scale(&Rational::new((-4).into(), 3.into())),
            DerivativeIndex::second(d, 1, 1),
        );
    let b1 = &l1.scale(&(omega * rat_int(2)))
        + &cpoly(d, Rational::one() + (&params.mu + &params.nu) * rat_int(3));
    op = &op + &DiffOp::first_order(b1, 0);
    let b2 = &l2.scale(&(omega * rat_int(6)))
        - &l1.pow(2).scale(
            &((Rational::one() + &params.mu * rat_int(2)) * Rational::new(2.into(), 3.into())),
        );
    &op + &DiffOp::first_order(b2, 1)
}

/// Upper-triangular coefficient table `(A, B)` of the H3 model.
pub fn h3_coefficient_table(params: &ModelParams) -> (Vec<Vec<Polynomial>>, Vec<Polynomial>) {
    let d = 3;
    let om = &params.omega;
    let nu = &params.nu;
    let t1 = var(d, 0);
    let t2 = var(d, 1);
    let t3 = var(d, 2);
    let r = |n: i64, den: i64| Rational::new(n.into(), den.into());

    let a11 = t1.scale(&rat_int(4));
    let a12 = t2.scale(&rat_int(12));
    let a13 = t3.scale(&rat_int(20));
    // A_22 = −(48/5) τ1² τ2 + (45/2) τ3
    let a22 = &(&t1.pow(2) * &t2).scale(&r(-48, 5)) + &t3.scale(&r(45, 2));
    // A_23 = (16/15) τ1 τ2² − 24 τ1² τ3
    let a23 = &(&t1 * &t2.pow(2)).scale(&r(16, 15)) + &(&t1.pow(2) * &t3).scale(&rat_int(-24));
    // A_33 = −(64/3) τ1 τ2 τ3 + (128/45) τ2³
    let a33 = &(&(&t1 * &t2) * &t3).scale(&r(-64, 3)) + &t2.pow(3).scale(&r(128, 45));

    // B_1 = 6 + 60ν − 4ω τ1
    let b1 = &cpoly(d, rat_int(6) + nu * rat_int(60)) - &t1.scale(&(om * rat_int(4)));
    // B_2 = −(48/5)(1+5ν) τ1² − 12ω τ2
    let b2 = &t1
        .pow(2)
        .scale(&(r(-48, 5) * (Rational::one() + nu * rat_int(5))))
        - &t2.scale(&(om * rat_int(12)));
    // B_3 = −(64/15)(2+5ν) τ1 τ2 − 20ω τ3
    let b3 = &(&t1 * &t2).scale(&(r(-64, 15) * (rat_int(2) + nu * rat_int(5))))
        - &t3.scale(&(om * rat_int(20)));

    (
        vec![
            vec![a11, a12, a13],
            vec![Polynomial::zero(d), a22, a23],
            vec![Polynomial::zero(d), Polynomial::zero(d), a33],
        ],
        vec![b1, b2, b3],
    )
}

/// Assembles an operator from an upper-triangular second-order table and
/// first-order coefficients; off-diagonal entries enter on both orderings of
/// the mixed partial.
fn assemble_symmetric(d: usize, a_upper: &[Vec<Polynomial>], b: &[Polynomial]) -> DiffOp {
    let mut op = DiffOp::zero(d);
    for i in 0..d {
        for j in i..d {
            let a = &a_upper[i][j];
            if a.is_zero() {
                continue;
            }
            let coeff = if i == j { a.clone() } else { a.scale(&rat_int(2)) };
            op = &op + &DiffOp::term(coeff, DerivativeIndex::second(d, i, j));
        }
    }
    for (i, bi) in b.iter().enumerate() {
        if !bi.is_zero() {
            op = &op + &DiffOp::first_order(bi.clone(), i);
        }
    }
    op
}

/// Algebraic form of the H3 rational model in the icosahedral invariants
/// `τ_1, τ_2, τ_3` (degrees 2, 6, 10), gauge `h = −2Ψ0⁻¹(H−E0)Ψ0`.
pub fn build_h3(params: &ModelParams) -> DiffOp {
    let (a, b) = h3_coefficient_table(params);
    assemble_symmetric(3, &a, &b)
}

/// Upper-triangular coefficient table `(A, B)` of the H4 model.
pub fn h4_coefficient_table(params: &ModelParams) -> (Vec<Vec<Polynomial>>, Vec<Polynomial>) {
    let d = 4;
    let om = &params.omega;
    let nu = &params.nu;
    let t1 = var(d, 0);
    let t2 = var(d, 1);
    let t3 = var(d, 2);
    let t4 = var(d, 3);
    let r = |n: i64, den: i64| Rational::new(n.into(), den.into());
    let m = |ps: &[&Polynomial]| -> Polynomial {
        let mut acc = Polynomial::one(d);
        for p in ps {
            acc = &acc * *p;
        }
        acc
    };

    let a11 = t1.scale(&rat_int(4));
    let a12 = t2.scale(&rat_int(24));
    let a13 = t3.scale(&rat_int(40));
    let a14 = t4.scale(&rat_int(60));
    // A_22 = 88 τ1 τ3 + 8 τ1^5 τ2
    let a22 = &m(&[&t1, &t3]).scale(&rat_int(88)) + &m(&[&t1.pow(5), &t2]).scale(&rat_int(8));
    // A_23 = −4 τ1³ τ2² + 24 τ1^5 τ3 − 8 τ4
    let a23 = &(&m(&[&t1.pow(3), &t2.pow(2)]).scale(&rat_int(-4))
        + &m(&[&t1.pow(5), &t3]).scale(&rat_int(24)))
        + &t4.scale(&rat_int(-8));
    // A_24 = 10 τ1² τ2³ + 60 τ1⁴ τ2 τ3 + 40 τ1^5 τ4 − 600 τ3²
    let a24 = &(&m(&[&t1.pow(2), &t2.pow(3)]).scale(&rat_int(10))
        + &m(&[&t1.pow(4), &t2, &t3]).scale(&rat_int(60)))
        + &(&m(&[&t1.pow(5), &t4]).scale(&rat_int(40)) + &t3.pow(2).scale(&rat_int(-600)));
    // A_33 = −(38/3) τ1 τ2³ + 28 τ1³ τ2 τ3 − (8/3) τ1⁴ τ4
    let a33 = &(&m(&[&t1, &t2.pow(3)]).scale(&r(-38, 3))
        + &m(&[&t1.pow(3), &t2, &t3]).scale(&rat_int(28)))
        + &m(&[&t1.pow(4), &t4]).scale(&r(-8, 3));
    // A_34 = 210 τ1² τ2² τ3 + 60 τ1³ τ2 τ4 − 180 τ1⁴ τ3² + 30 τ2⁴
    let a34 = &(&m(&[&t1.pow(2), &t2.pow(2), &t3]).scale(&rat_int(210))
        + &m(&[&t1.pow(3), &t2, &t4]).scale(&rat_int(60)))
        + &(&m(&[&t1.pow(4), &t3.pow(2)]).scale(&rat_int(-180)) + &t2.pow(4).scale(&rat_int(30)));
    // A_44 = −2175 τ1 τ2³ τ3 − 450 τ1² τ2² τ4 − 1350 τ1³ τ2 τ3² − 600 τ1⁴ τ3 τ4
    let a44 = &(&m(&[&t1, &t2.pow(3), &t3]).scale(&rat_int(-2175))
        + &m(&[&t1.pow(2), &t2.pow(2), &t4]).scale(&rat_int(-450)))
        + &(&m(&[&t1.pow(3), &t2, &t3.pow(2)]).scale(&rat_int(-1350))
            + &m(&[&t1.pow(4), &t3, &t4]).scale(&rat_int(-600)));

    // B_1 = 8(1+30ν) − 4ω τ1
    let b1 = &cpoly(d, (Rational::one() + nu * rat_int(30)) * rat_int(8))
        - &t1.scale(&(om * rat_int(4)));
    // B_2 = 12(1+10ν) τ1^5 − 24ω τ2
    let b2 = &t1
        .pow(5)
        .scale(&((Rational::one() + nu * rat_int(10)) * rat_int(12)))
        - &t2.scale(&(om * rat_int(24)));
    // B_3 = 20(1+6ν) τ1³ τ2 − 40ω τ3
    let b3 = &m(&[&t1.pow(3), &t2]).scale(&((Rational::one() + nu * rat_int(6)) * rat_int(20)))
        - &t3.scale(&(om * rat_int(40)));
    // B_4 = 15(1−30ν) τ1² τ2² − 450(1+2ν) τ1⁴ τ3 − 60ω τ4
    let b4 = &(&m(&[&t1.pow(2), &t2.pow(2)])
        .scale(&((Rational::one() - nu * rat_int(30)) * rat_int(15)))
        + &m(&[&t1.pow(4), &t3]).scale(&((Rational::one() + nu * rat_int(2)) * rat_int(-450))))
        + &t4.scale(&(om * rat_int(-60)));

    let z = || Polynomial::zero(d);
    (
        vec![
            vec![a11, a12, a13, a14],
            vec![z(), a22, a23, a24],
            vec![z(), z(), a33, a34],
            vec![z(), z(), z(), a44],
        ],
        vec![b1, b2, b3, b4],
    )
}

/// Algebraic form of the H4 rational model in the invariants
/// `τ_1..τ_4` (degrees 2, 12, 20, 30), gauge `h = −2Ψ0⁻¹(H−E0)Ψ0`.
pub fn build_h4(params: &ModelParams) -> DiffOp {
    let (a, b) = h4_coefficient_table(params);
    assemble_symmetric(4, &a, &b)
}

/// The QES deformation `δh = 4(a v² − γ) ∂_v − 4akv + 2ωk` embedded in the
/// model's variable set at `q.var_index`.
pub fn build_qes_delta(d: usize, omega: &Rational, q: &QesParams) -> Result<DiffOp> {
    if q.var_index >= d {
        return Err(Error::InvalidParameter(format!(
            "QES variable index {} out of range for dimension {d}",
            q.var_index
        )));
    }
    let v = q.var_index;
    let mut sq = ExponentVector::zeros(d);
    sq.0[v] = 2;
    let first =
        &Polynomial::monomial(d, sq, &q.a * rat_int(4)) - &cpoly(d, &q.gamma * rat_int(4));
    let zeroth = &var(d, v).scale(&(&q.a * rat_int(-4 * q.k as i64)))
        + &cpoly(d, omega * rat_int(2 * q.k as i64));
    Ok(&DiffOp::first_order(first, v) + &DiffOp::mult(zeroth))
}

/// The exactly-solvable shift `4γ ∂_v` in the radial variable.
pub fn build_gamma_shift(d: usize, var_index: usize, gamma: &Rational) -> Result<DiffOp> {
    if var_index >= d {
        return Err(Error::InvalidParameter(format!(
            "variable index {var_index} out of range for dimension {d}"
        )));
    }
    Ok(DiffOp::first_order(cpoly(d, gamma * rat_int(4)), var_index))
}
