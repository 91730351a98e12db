//! Numeric validation of the algebraic forms against the Cartesian
//! Hamiltonians: ground-state probes, gauge residuals on invariant monomials,
//! and end-to-end QES eigenfunction residuals, all driven by hyper-dual
//! second derivatives (no finite-difference truncation error).
//!
//! Every Cartesian model here has the shape `H = −(1/2)Δ + V` with
//! `V = (1/2)ω²|x|² + Σ_f (1/2)ν_f(ν_f−1)|α_f|² / (α_f·x)²` and ground state
//! `Ψ0 = Π_f |α_f·x|^{ν_f} · exp(−ω|x|²/2)`, `E0 = ω(Σ_f ν_f + dim/2)`.
//! All Ψ0 evaluations go through log-derivatives; the singular 1/L² parts of
//! `(HΨ0)/Ψ0` cancel per form analytically, leaving the cross-form sum that
//! the probes test for vanishing.

use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactpoly::Polynomial;
use crate::models::{ModelKind, ModelParams};
use crate::{Error, Rational, Result};

/// Second-order truncated Taylor value along two tagged directions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperDual {
    pub re: f64,
    pub d1: f64,
    pub d2: f64,
    pub d12: f64,
}

impl HyperDual {
    pub fn constant(v: f64) -> Self {
        HyperDual { re: v, d1: 0.0, d2: 0.0, d12: 0.0 }
    }

    /// A variable seeded along the tagged directions.
    pub fn variable(v: f64, seed1: bool, seed2: bool) -> Self {
        HyperDual {
            re: v,
            d1: if seed1 { 1.0 } else { 0.0 },
            d2: if seed2 { 1.0 } else { 0.0 },
            d12: 0.0,
        }
    }

    pub fn recip(self) -> Self {
        let inv = 1.0 / self.re;
        let inv2 = inv * inv;
        HyperDual {
            re: inv,
            d1: -self.d1 * inv2,
            d2: -self.d2 * inv2,
            d12: -self.d12 * inv2 + 2.0 * self.d1 * self.d2 * inv2 * inv,
        }
    }

    /// `ln |x|`; derivatives equal those of `ln x` away from zero.
    pub fn ln_abs(self) -> Self {
        let inv = 1.0 / self.re;
        HyperDual {
            re: self.re.abs().ln(),
            d1: self.d1 * inv,
            d2: self.d2 * inv,
            d12: self.d12 * inv - self.d1 * self.d2 * inv * inv,
        }
    }
}

impl std::ops::Add for HyperDual {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        HyperDual {
            re: self.re + o.re,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
            d12: self.d12 + o.d12,
        }
    }
}

impl std::ops::Sub for HyperDual {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        HyperDual {
            re: self.re - o.re,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
            d12: self.d12 - o.d12,
        }
    }
}

impl std::ops::Mul for HyperDual {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        HyperDual {
            re: self.re * o.re,
            d1: self.d1 * o.re + self.re * o.d1,
            d2: self.d2 * o.re + self.re * o.d2,
            d12: self.d12 * o.re + self.d1 * o.d2 + self.d2 * o.d1 + self.re * o.d12,
        }
    }
}

impl std::ops::Div for HyperDual {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)] // division via reciprocal
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl std::ops::Neg for HyperDual {
    type Output = Self;
    fn neg(self) -> Self {
        HyperDual { re: -self.re, d1: -self.d1, d2: -self.d2, d12: -self.d12 }
    }
}

/// Scalar abstraction so invariant maps evaluate over both `f64` and
/// [`HyperDual`].
pub trait Num:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn from_f64(v: f64) -> Self;
    fn ln_abs(self) -> Self;
}

impl Num for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn ln_abs(self) -> Self {
        self.abs().ln()
    }
}

impl Num for HyperDual {
    fn from_f64(v: f64) -> Self {
        HyperDual::constant(v)
    }
    fn ln_abs(self) -> Self {
        HyperDual::ln_abs(self)
    }
}

/// Derivatives of `f` at `x` along coordinates `i`, `j` via hyper-dual
/// arithmetic: `(value, ∂_i f, ∂_j f, ∂²_ij f)`.
pub fn hyperdual_second_partials<F>(f: F, x: &[f64], i: usize, j: usize) -> (f64, f64, f64, f64)
where
    F: Fn(&[HyperDual]) -> HyperDual,
{
    let args: Vec<HyperDual> = x
        .iter()
        .enumerate()
        .map(|(k, &v)| HyperDual::variable(v, k == i, k == j))
        .collect();
    let out = f(&args);
    (out.re, out.d1, out.d2, out.d12)
}

fn rational_f64(r: &Rational) -> f64 {
    r.to_f64().expect("rational fits in f64")
}

/// Evaluates an exact polynomial over any scalar type.
pub fn eval_poly<T: Num>(p: &Polynomial, vals: &[T]) -> T {
    let mut acc = T::from_f64(0.0);
    for (exps, c) in p.terms() {
        let mut m = T::from_f64(rational_f64(c));
        for (i, &e) in exps.0.iter().enumerate() {
            for _ in 0..e {
                m = m * vals[i];
            }
        }
        acc = acc + m;
    }
    acc
}

fn elementary_symmetric<T: Num>(items: &[T], m: usize) -> Vec<T> {
    let mut e = vec![T::from_f64(0.0); m + 1];
    e[0] = T::from_f64(1.0);
    for &y in items {
        for k in (1..=m).rev() {
            e[k] = e[k] + e[k - 1] * y;
        }
    }
    e.remove(0);
    e
}

fn relative_coords<T: Num>(x: &[T]) -> Vec<T> {
    let n = x.len();
    let mut total = T::from_f64(0.0);
    for &v in x {
        total = total + v;
    }
    let shift = total / T::from_f64(n as f64);
    x.iter().map(|&v| v - shift).collect()
}

const PHI_PLUS: f64 = 1.618033988749894848204586834365638118;
const PHI_MINUS: f64 = -0.618033988749894848204586834365638118;

/// A linear form of the ground-state factor with its coupling.
#[derive(Clone, Debug)]
pub struct GaugeForm {
    pub coeffs: Vec<f64>,
    pub coupling: f64,
}

impl GaugeForm {
    fn eval<T: Num>(&self, x: &[T]) -> T {
        let mut acc = T::from_f64(0.0);
        for (c, &v) in self.coeffs.iter().zip(x) {
            if *c != 0.0 {
                acc = acc + T::from_f64(*c) * v;
            }
        }
        acc
    }

    fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// Cartesian counterpart of an algebraic model: potential, ground-state
/// data, invariant maps and singular-locus tester.
#[derive(Clone, Debug)]
pub struct CartesianModel {
    pub kind: ModelKind,
    pub dim: usize,
    pub d_alg: usize,
    pub omega: f64,
    pub forms: Vec<GaugeForm>,
    pub e0: f64,
    /// H3 degree-6 invariant read as printed (constant tail) or with the
    /// tail restored to a degree-6 monomial.
    pub tau2_homogeneous: bool,
}

impl CartesianModel {
    pub fn new(kind: ModelKind, params: &ModelParams, tau2_homogeneous: bool) -> Result<Self> {
        let omega = rational_f64(&params.omega);
        let nu = rational_f64(&params.nu);
        let nu2 = rational_f64(&params.nu2);
        let mu = rational_f64(&params.mu);
        let n = params.n_bodies;
        let mut forms = Vec::new();
        let unit = |i: usize, dim: usize| {
            let mut c = vec![0.0; dim];
            c[i] = 1.0;
            c
        };
        let (dim, d_alg) = match kind {
            ModelKind::Calogero => {
                for i in 0..n {
                    for j in i + 1..n {
                        let mut c = vec![0.0; n];
                        c[i] = 1.0;
                        c[j] = -1.0;
                        forms.push(GaugeForm { coeffs: c, coupling: nu });
                    }
                }
                (n, n - 1)
            }
            ModelKind::Bcn => {
                for i in 0..n {
                    for j in i + 1..n {
                        let mut c = vec![0.0; n];
                        c[i] = 1.0;
                        c[j] = -1.0;
                        forms.push(GaugeForm { coeffs: c.clone(), coupling: nu });
                        c[j] = 1.0;
                        forms.push(GaugeForm { coeffs: c, coupling: nu });
                    }
                }
                for i in 0..n {
                    forms.push(GaugeForm { coeffs: unit(i, n), coupling: nu2 });
                }
                (n, n)
            }
            ModelKind::G2 => {
                for i in 0..3 {
                    for j in i + 1..3 {
                        let mut c = vec![0.0; 3];
                        c[i] = 1.0;
                        c[j] = -1.0;
                        forms.push(GaugeForm { coeffs: c, coupling: nu });
                    }
                }
                for m in 0..3 {
                    let mut c = vec![1.0; 3];
                    c[m] = -2.0;
                    forms.push(GaugeForm { coeffs: c, coupling: mu });
                }
                (3, 2)
            }
            ModelKind::H3 => {
                for i in 0..3 {
                    forms.push(GaugeForm { coeffs: unit(i, 3), coupling: nu });
                }
                // twelve icosahedral forms x_i ± φ+ x_j ± φ− x_k over even
                // permutations of (1,2,3)
                for (i, j, k) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
                    for s1 in [1.0, -1.0] {
                        for s2 in [1.0, -1.0] {
                            let mut c = vec![0.0; 3];
                            c[i] = 1.0;
                            c[j] = s1 * PHI_PLUS;
                            c[k] = s2 * PHI_MINUS;
                            forms.push(GaugeForm { coeffs: c, coupling: nu });
                        }
                    }
                }
                (3, 3)
            }
            other => {
                return Err(Error::InvalidParameter(format!(
                    "no Cartesian counterpart registered for model {}",
                    other.name()
                )))
            }
        };
        let coupling_sum: f64 = forms.iter().map(|f| f.coupling).sum();
        let e0 = omega * (coupling_sum + dim as f64 / 2.0);
        Ok(CartesianModel { kind, dim, d_alg, omega, forms, e0, tau2_homogeneous })
    }

    /// Potential `V(x)` of the Cartesian Hamiltonian.
    pub fn potential(&self, x: &[f64]) -> f64 {
        let mut v = 0.5 * self.omega * self.omega * x.iter().map(|c| c * c).sum::<f64>();
        for f in &self.forms {
            let l = f.eval(x);
            v += 0.5 * f.coupling * (f.coupling - 1.0) * f.norm_sq() / (l * l);
        }
        v
    }

    /// `log Ψ0` evaluated over any scalar type.
    pub fn log_psi0<T: Num>(&self, x: &[T]) -> T {
        let mut acc = T::from_f64(0.0);
        for f in &self.forms {
            acc = acc + T::from_f64(f.coupling) * f.eval(x).ln_abs();
        }
        let mut r2 = T::from_f64(0.0);
        for &v in x {
            r2 = r2 + v * v;
        }
        acc - T::from_f64(self.omega / 2.0) * r2
    }

    /// `(HΨ0)/Ψ0 − E0` with the per-form singular parts cancelled
    /// analytically; identically zero when `Ψ0` is the exact ground state.
    pub fn ground_defect(&self, x: &[f64]) -> f64 {
        let ls: Vec<f64> = self.forms.iter().map(|f| f.eval(x)).collect();
        let mut cross = 0.0;
        for a in 0..self.forms.len() {
            for b in a + 1..self.forms.len() {
                let dot: f64 = self.forms[a]
                    .coeffs
                    .iter()
                    .zip(&self.forms[b].coeffs)
                    .map(|(p, q)| p * q)
                    .sum();
                if dot != 0.0 {
                    cross += self.forms[a].coupling * self.forms[b].coupling * dot
                        / (ls[a] * ls[b]);
                }
            }
        }
        -cross
    }

    /// Gradient of `log Ψ0`, directly from the closed form.
    pub fn grad_log_psi0(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim];
        for f in &self.forms {
            let l = f.eval(x);
            for (k, c) in f.coeffs.iter().enumerate() {
                g[k] += f.coupling * c / l;
            }
        }
        for (k, &v) in x.iter().enumerate() {
            g[k] -= self.omega * v;
        }
        g
    }

    /// Invariant coordinates as functions of the Cartesian point.
    pub fn invariants<T: Num>(&self, x: &[T]) -> Vec<T> {
        match self.kind {
            ModelKind::Calogero => {
                let y = relative_coords(x);
                let mut e = elementary_symmetric(&y, x.len());
                e.remove(0); // drop e_1 = 0; keep σ_2..σ_N
                e
            }
            ModelKind::Bcn => {
                let sq: Vec<T> = x.iter().map(|&v| v * v).collect();
                elementary_symmetric(&sq, x.len())
            }
            ModelKind::G2 => {
                let y = relative_coords(x);
                let l1 = -(y[0] * y[0] + y[1] * y[1] + y[0] * y[1]);
                let prod = y[0] * y[1] * (y[0] + y[1]);
                vec![l1, prod * prod]
            }
            ModelKind::H3 => {
                let t1 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                vec![t1, self.h3_tau2(x), h3_tau3(x)]
            }
            _ => unreachable!("constructor admits only mapped models"),
        }
    }

    fn h3_tau2<T: Num>(&self, x: &[T]) -> T {
        let p = |v: T, k: u32| {
            let mut acc = T::from_f64(1.0);
            for _ in 0..k {
                acc = acc * v;
            }
            acc
        };
        let c0 = T::from_f64(-3.0 / 10.0);
        let cp = T::from_f64(3.0 / 10.0 * (2.0 - 5.0 * PHI_PLUS));
        let cm = T::from_f64(3.0 / 10.0 * (2.0 - 5.0 * PHI_MINUS));
        let sixth = p(x[0], 6) + p(x[1], 6) + p(x[2], 6);
        let cyc = p(x[0], 2) * p(x[1], 4) + p(x[1], 2) * p(x[2], 4) + p(x[2], 2) * p(x[0], 4);
        let acyc = p(x[0], 2) * p(x[2], 4) + p(x[1], 2) * p(x[0], 4) + p(x[2], 2) * p(x[1], 4);
        let tail = if self.tau2_homogeneous {
            T::from_f64(-39.0 / 5.0) * p(x[0], 2) * p(x[1], 2) * p(x[2], 2)
        } else {
            T::from_f64(-39.0 / 5.0)
        };
        c0 * sixth + cp * cyc + cm * acyc + tail
    }
}

fn h3_tau3<T: Num>(x: &[T]) -> T {
    let p = |v: T, k: u32| {
        let mut acc = T::from_f64(1.0);
        for _ in 0..k {
            acc = acc * v;
        }
        acc
    };
    let c10 = T::from_f64(2.0 / 125.0);
    let c82p = T::from_f64(2.0 / 25.0 * (1.0 + 5.0 * PHI_MINUS));
    let c82m = T::from_f64(2.0 / 25.0 * (1.0 + 5.0 * PHI_PLUS));
    let c64p = T::from_f64(4.0 / 25.0 * (1.0 - 5.0 * PHI_MINUS));
    let c64m = T::from_f64(4.0 / 25.0 * (1.0 - 5.0 * PHI_PLUS));
    let c622 = T::from_f64(-112.0 / 25.0);
    let c244 = T::from_f64(212.0 / 25.0);
    let tenth = p(x[0], 10) + p(x[1], 10) + p(x[2], 10);
    let e82 = p(x[0], 8) * p(x[1], 2) + p(x[1], 8) * p(x[2], 2) + p(x[2], 8) * p(x[0], 2);
    let e82r = p(x[0], 8) * p(x[2], 2) + p(x[1], 8) * p(x[0], 2) + p(x[2], 8) * p(x[1], 2);
    let e64 = p(x[0], 6) * p(x[1], 4) + p(x[1], 6) * p(x[2], 4) + p(x[2], 6) * p(x[0], 4);
    let e64r = p(x[0], 6) * p(x[2], 4) + p(x[1], 6) * p(x[0], 4) + p(x[2], 6) * p(x[1], 4);
    let e622 = p(x[0], 6) * p(x[1], 2) * p(x[2], 2)
        + p(x[1], 6) * p(x[2], 2) * p(x[0], 2)
        + p(x[2], 6) * p(x[0], 2) * p(x[1], 2);
    let e244 = p(x[0], 2) * p(x[1], 4) * p(x[2], 4)
        + p(x[1], 2) * p(x[2], 4) * p(x[0], 4)
        + p(x[2], 2) * p(x[0], 4) * p(x[1], 4);
    c10 * tenth + c82p * e82 + c82m * e82r + c64p * e64 + c64m * e64r + c622 * e622 + c244 * e244
}

/// A sampled Cartesian point with its provenance.
#[derive(Clone, Debug, Serialize)]
pub struct SamplePoint {
    pub coords: Vec<f64>,
    pub seed: u64,
    pub index: usize,
}

/// Draws points uniformly from a box, rejecting those within the configured
/// floor of any singular hyperplane. Fixed seed for reproducibility.
pub fn sample_points(model: &CartesianModel, count: usize, seed: u64) -> Vec<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let floor = 0.15;
    let mut index = 0;
    while out.len() < count {
        let coords: Vec<f64> = (0..model.dim).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let ok = model.forms.iter().all(|f| {
            let l: f64 = f.eval(&coords);
            l.abs() / f.norm_sq().sqrt() > floor
        });
        if ok {
            out.push(SamplePoint { coords, seed, index });
            index += 1;
        }
    }
    out
}

/// Outcome of the ground-state constancy probe.
#[derive(Clone, Debug, Serialize)]
pub struct E0Probe {
    pub mean: f64,
    pub max_relative_spread: f64,
    pub closed_form: f64,
}

/// Evaluates `(HΨ0)/Ψ0` at the points; the spread must vanish (≤ 1e−8
/// relative) for a correctly wired model.
pub fn e0_probe(model: &CartesianModel, points: &[SamplePoint]) -> Result<E0Probe> {
    if points.len() < 3 {
        return Err(Error::InvalidParameter("e0 probe needs at least 3 points".into()));
    }
    let values: Vec<f64> = points
        .iter()
        .map(|p| model.e0 + model.ground_defect(&p.coords))
        .collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let scale = mean.abs().max(1.0);
    let spread = values
        .iter()
        .map(|v| (v - mean).abs() / scale)
        .fold(0.0, f64::max);
    Ok(E0Probe { mean, max_relative_spread: spread, closed_form: model.e0 })
}

/// Floating values of the invariant maps at a point.
pub fn invariants_eval(model: &CartesianModel, x: &[f64]) -> Vec<f64> {
    model.invariants(x)
}

/// Maximum relative deviation of `H(Ψ0 · P∘t)` from
/// `Ψ0 (E0 · P∘t + c⁻¹ · h_image∘t)` over the points.
///
/// `h_image` must be the exact algebraic image `h(P)` computed upstream and
/// `c` the model's gauge scale.
pub fn gauge_residual(
    model: &CartesianModel,
    p_alg: &Polynomial,
    h_image: &Polynomial,
    gauge_scale: &Rational,
    points: &[SamplePoint],
) -> Result<(Vec<f64>, f64)> {
    if p_alg.dim() != model.d_alg {
        return Err(Error::DimensionMismatch(p_alg.dim(), model.d_alg));
    }
    let c_inv = 1.0 / rational_f64(gauge_scale);
    let mut residuals = Vec::with_capacity(points.len());
    let mut max_res: f64 = 0.0;
    for pt in points {
        let x = &pt.coords;
        // value, gradient and Laplacian of F = P∘t via hyper-dual sweeps
        let eval_f = |args: &[HyperDual]| -> HyperDual {
            let t = model.invariants(args);
            eval_poly(p_alg, &t)
        };
        let mut f_val = 0.0;
        let mut grad_f = vec![0.0; model.dim];
        let mut lap_f = 0.0;
        for k in 0..model.dim {
            let (v, dk, _, dkk) = hyperdual_second_partials(&eval_f, x, k, k);
            f_val = v;
            grad_f[k] = dk;
            lap_f += dkk;
        }
        let grad_w = model.grad_log_psi0(x);
        let defect = model.ground_defect(x);
        // Ψ0⁻¹ (H − E0) (Ψ0 F) = −(1/2)ΔF − ∇logΨ0·∇F + defect·F
        let lhs = -0.5 * lap_f
            - grad_w.iter().zip(&grad_f).map(|(a, b)| a * b).sum::<f64>()
            + defect * f_val;
        let t_vals = model.invariants(x);
        let rhs = c_inv * eval_poly(h_image, &t_vals);
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        let r = (lhs - rhs).abs() / scale;
        residuals.push(r);
        max_res = max_res.max(r);
    }
    Ok((residuals, max_res))
}

/// Cartesian side of the QES deformation for the Calogero family: the
/// potential correction in `ρ² = Σ y_i²` (relative radius squared) matching
/// the algebraic `δh(a, γ, k)` under the gauge factor
/// `(ρ²)^{−γ} exp(+aρ⁴/8)`.
#[derive(Clone, Debug)]
pub struct QesCartesian {
    pub model: CartesianModel,
    pub a: f64,
    pub gamma: f64,
    pub k: u32,
    /// Multiplier on the ρ⁴ coefficient; 1 for the exact identity, ≠ 1 for
    /// sensitivity controls.
    pub r4_scale: f64,
}

impl QesCartesian {
    fn rho_sq<T: Num>(&self, x: &[T]) -> T {
        let y = relative_coords(x);
        let mut acc = T::from_f64(0.0);
        for &v in &y {
            acc = acc + v * v;
        }
        acc
    }

    /// Potential correction ΔV(ρ²).
    pub fn delta_v(&self, x: &[f64]) -> f64 {
        let n = self.model.dim as f64;
        let d = n - 1.0; // relative dimension
        let coupling_nu: f64 = self.model.forms[0].coupling;
        let ell = coupling_nu * n * (n - 1.0) / 2.0;
        let rho2: f64 = self.rho_sq(x);
        let (a, g, om) = (self.a, self.gamma, self.model.omega);
        let k = self.k as f64;
        a * a / 8.0 * rho2 * rho2 * rho2
            + (-(a * om) / 2.0 * self.r4_scale) * rho2 * rho2
            + a * (k + (d + 2.0 + 2.0 * ell - 4.0 * g) / 4.0) * rho2
            + g * (2.0 * g - d + 2.0 - 2.0 * ell) / rho2
            + om * (k + 2.0 * g)
    }

    /// `H_qes(Ψ)/Ψ − E` residuals at the points for the QES eigenfunction
    /// `Ψ = (ρ²)^{−γ} exp(aρ⁴/8) · P_k(t₂) · Ψ0`, with `E = E0 + λ/2`.
    pub fn residual(
        &self,
        eigenvalue: f64,
        radial_poly: &[f64],
        points: &[SamplePoint],
    ) -> (Vec<f64>, f64) {
        let e_total = self.model.e0 + eigenvalue / 2.0;
        let mut out = Vec::with_capacity(points.len());
        let mut max_res: f64 = 0.0;
        for pt in points {
            let x = &pt.coords;
            let log_psi = |args: &[HyperDual]| -> HyperDual {
                let rho2 = self.rho_sq(args);
                let t = self.model.invariants(args);
                let mut p = HyperDual::constant(0.0);
                let mut pow = HyperDual::constant(1.0);
                for &c in radial_poly {
                    p = p + HyperDual::constant(c) * pow;
                    pow = pow * t[0];
                }
                self.model.log_psi0(args)
                    + HyperDual::constant(-self.gamma) * rho2.ln_abs()
                    + HyperDual::constant(self.a / 8.0) * rho2 * rho2
                    + p.ln_abs()
            };
            let mut grad_sq = 0.0;
            let mut lap = 0.0;
            for k in 0..self.model.dim {
                let (_, dk, _, dkk) = hyperdual_second_partials(&log_psi, x, k, k);
                grad_sq += dk * dk;
                lap += dkk;
            }
            let v = self.model.potential(x) + self.delta_v(x);
            let h_over_psi = -0.5 * (lap + grad_sq) + v;
            let scale = h_over_psi.abs().max(e_total.abs()).max(1.0);
            let r = (h_over_psi - e_total).abs() / scale;
            out.push(r);
            max_res = max_res.max(r);
        }
        (out, max_res)
    }
}

/// Points for the QES residual must also stay away from the radial-polynomial
/// nodes and the origin of the relative radius.
pub fn sample_points_qes(
    qc: &QesCartesian,
    radial_poly: &[f64],
    count: usize,
    seed: u64,
) -> Vec<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let floor = 0.15;
    let mut index = 0;
    while out.len() < count {
        let coords: Vec<f64> = (0..qc.model.dim).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let forms_ok = qc.model.forms.iter().all(|f| {
            let l: f64 = f.eval(&coords);
            l.abs() / f.norm_sq().sqrt() > floor
        });
        if !forms_ok {
            continue;
        }
        let rho2: f64 = qc.rho_sq(&coords);
        if rho2 < 0.3 {
            continue;
        }
        let t = qc.model.invariants(&coords);
        let mut p = 0.0;
        let mut pw = 1.0;
        for &c in radial_poly {
            p += c * pw;
            pw *= t[0];
        }
        if p.abs() < 0.05 {
            continue;
        }
        out.push(SamplePoint { coords, seed, index });
        index += 1;
    }
    out
}
