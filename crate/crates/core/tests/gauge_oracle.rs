//! Independent exact oracle for the model constructors.
//!
//! For each Cartesian Hamiltonian `H = −(1/2)Δ + V` with ground state
//! `Ψ0 = Π_f |L_f|^{ν_f} exp(−ω x²/2)`, the gauge-rotated action on a
//! polynomial `P` of the invariant maps `t(x)` is
//!
//! `s·Ψ0⁻¹(H−E0)Ψ0 P = s·[ −(1/2)Δ P̃ + ω (x·∇P̃) − Σ_f ν_f (∇L_f·∇P̃)/L_f ]`
//!
//! where `P̃ = P ∘ t`. Every division is exact because `P̃` is invariant
//! under the reflection across each `L_f`. The oracle is pure x-space
//! polynomial arithmetic and never touches the model constructors; agreement
//! is asserted as exact polynomial identity in the Cartesian variables.

use num_traits::{One, Zero};
use rqes_core::exactpoly::{diffop_apply, DerivativeIndex, ExponentVector, Polynomial};
use rqes_core::flags::{enumerate_basis, CharacteristicVector};
use rqes_core::models::{build_bcn, build_calogero, build_g2, ModelParams};
use rqes_core::{rat, rat_int, Rational};

fn xvar(n: usize, i: usize) -> Polynomial {
    Polynomial::var(n, i)
}

/// Exact division of `p` by a homogeneous linear form; panics if not exact.
fn divide_exact(p: &Polynomial, form: &Polynomial) -> Polynomial {
    let n = p.dim();
    if p.is_zero() {
        return Polynomial::zero(n);
    }
    // pivot: highest variable with nonzero coefficient in the form
    let mut pivot = None;
    let mut c_p = Rational::zero();
    for (e, c) in form.terms() {
        assert_eq!(e.total_degree(), 1, "form must be linear");
        let v = e.0.iter().position(|&k| k == 1).unwrap();
        if pivot.map(|q| v > q).unwrap_or(true) {
            pivot = Some(v);
            c_p = c.clone();
        }
    }
    let pivot = pivot.expect("form must be nonzero");
    let rest = form - &Polynomial::monomial(n, ExponentVector::unit(n, pivot), c_p.clone());

    // bucket p by pivot degree
    let deg = p
        .terms()
        .map(|(e, _)| e.0[pivot])
        .max()
        .unwrap_or(0) as usize;
    let mut buckets: Vec<Polynomial> = vec![Polynomial::zero(n); deg + 1];
    for (e, c) in p.terms() {
        let k = e.0[pivot] as usize;
        let mut e2 = e.clone();
        e2.0[pivot] = 0;
        buckets[k].add_term(e2, c.clone());
    }
    let inv = Rational::one() / c_p;
    let mut quotient = Polynomial::zero(n);
    for k in (1..=deg).rev() {
        let q_k = buckets[k].scale(&inv);
        // contribute q_k * x_p^{k-1} to the quotient
        for (e, c) in q_k.terms() {
            let mut e2 = e.clone();
            e2.0[pivot] += (k - 1) as u32;
            quotient.add_term(e2, c.clone());
        }
        let spill = &q_k * &rest;
        buckets[k - 1] = &buckets[k - 1] - &spill;
        buckets[k] = Polynomial::zero(n);
    }
    assert!(
        buckets[0].is_zero(),
        "division by linear form not exact (remainder {})",
        buckets[0]
    );
    quotient
}

struct CartesianGauge {
    n: usize,
    scale: Rational,
    omega: Rational,
    /// `(linear form, coupling)` pairs of the ground-state factor.
    forms: Vec<(Polynomial, Rational)>,
    /// Invariant coordinates as x-polynomials.
    maps: Vec<Polynomial>,
}

impl CartesianGauge {
    fn apply(&self, p_alg: &Polynomial) -> Polynomial {
        let pt = p_alg.compose(&self.maps);
        let n = self.n;
        let mut lap = Polynomial::zero(n);
        let mut euler = Polynomial::zero(n);
        for k in 0..n {
            let mut d2 = vec![0u32; n];
            d2[k] = 2;
            lap = &lap + &pt.derivative(&DerivativeIndex(d2));
            let d1 = DerivativeIndex::unit(n, k);
            euler = &euler + &(&xvar(n, k) * &pt.derivative(&d1));
        }
        let mut acc = &lap.scale(&rat(-1, 2)) + &euler.scale(&self.omega);
        for (form, coupling) in &self.forms {
            if coupling.is_zero() {
                continue;
            }
            let mut dot = Polynomial::zero(n);
            for k in 0..n {
                let d1 = DerivativeIndex::unit(n, k);
                let fk = form.derivative(&d1);
                if !fk.is_zero() {
                    dot = &dot + &(&fk * &pt.derivative(&d1));
                }
            }
            acc = &acc - &divide_exact(&dot, form).scale(coupling);
        }
        acc.scale(&self.scale)
    }
}

/// Elementary symmetric polynomials `e_1..e_m` of the given polynomials.
fn elementary_symmetric(items: &[Polynomial], m: usize) -> Vec<Polynomial> {
    let n = items[0].dim();
    let mut e = vec![Polynomial::zero(n); m + 1];
    e[0] = Polynomial::one(n);
    for y in items {
        for k in (1..=m).rev() {
            let add = &e[k - 1] * y;
            e[k] = &e[k] + &add;
        }
    }
    e.remove(0);
    e
}

fn relative_coords(n: usize) -> Vec<Polynomial> {
    // y_i = x_i − (Σ x)/N
    let mut total = Polynomial::zero(n);
    for i in 0..n {
        total = &total + &xvar(n, i);
    }
    let shift = total.scale(&Rational::new(1.into(), (n as i64).into()));
    (0..n).map(|i| &xvar(n, i) - &shift).collect()
}

fn check_model(gauge: &CartesianGauge, op: &rqes_core::exactpoly::DiffOp, d: usize, wdeg: u64) {
    let f = CharacteristicVector::ones(d);
    let basis = enumerate_basis(d, &f, wdeg).unwrap();
    for i in 0..basis.len() {
        let p = basis.monomial_poly(i);
        let via_op = diffop_apply(op, &p).unwrap().compose(&gauge.maps);
        let via_oracle = gauge.apply(&p);
        assert_eq!(
            via_op, via_oracle,
            "gauge oracle mismatch on algebraic monomial #{i}"
        );
    }
}

#[test]
fn calogero_matches_cartesian_gauge_rotation() {
    for n in [2usize, 3, 4] {
        let params = ModelParams {
            omega: rat_int(1),
            nu: rat(1, 3),
            n_bodies: n,
            ..Default::default()
        };
        let op = build_calogero(n, &params).unwrap();
        let y = relative_coords(n);
        let sigmas = elementary_symmetric(&y, n);
        // maps: t_2..t_N = σ_2(y)..σ_N(y)
        let maps = sigmas[1..].to_vec();
        let mut forms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                forms.push((&xvar(n, i) - &xvar(n, j), params.nu.clone()));
            }
        }
        let gauge = CartesianGauge {
            n,
            scale: rat_int(2),
            omega: params.omega.clone(),
            forms,
            maps,
        };
        let wdeg = if n == 4 { 3 } else { 4 };
        check_model(&gauge, &op, n - 1, wdeg);
    }
}

#[test]
fn bcn_matches_cartesian_gauge_rotation() {
    for n in [1usize, 2, 3] {
        let params = ModelParams {
            omega: rat_int(1),
            nu: rat(1, 3),
            nu2: rat(1, 2),
            n_bodies: n,
            ..Default::default()
        };
        let op = build_bcn(n, &params).unwrap();
        let squares: Vec<Polynomial> = (0..n).map(|i| xvar(n, i).pow(2)).collect();
        let maps = elementary_symmetric(&squares, n);
        let mut forms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                forms.push((&xvar(n, i) - &xvar(n, j), params.nu.clone()));
                forms.push((&xvar(n, i) + &xvar(n, j), params.nu.clone()));
            }
        }
        for i in 0..n {
            forms.push((xvar(n, i), params.nu2.clone()));
        }
        let gauge = CartesianGauge {
            n,
            scale: rat_int(1),
            omega: params.omega.clone(),
            forms,
            maps,
        };
        check_model(&gauge, &op, n, 3);
    }
}

#[test]
fn g2_matches_cartesian_gauge_rotation() {
    let n = 3usize;
    let params = ModelParams {
        omega: rat_int(1),
        nu: rat(1, 3),
        mu: rat(1, 5),
        n_bodies: n,
        ..Default::default()
    };
    let op = build_g2(&params);
    let y = relative_coords(n);
    // λ1 = −(y1² + y2² + y1 y2), λ2 = [y1 y2 (y1 + y2)]²
    let l1 = -&(&(&y[0].pow(2) + &y[1].pow(2)) + &(&y[0] * &y[1]));
    let l2 = (&(&y[0] * &y[1]) * &(&y[0] + &y[1])).pow(2);
    let mut forms = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            forms.push((&xvar(n, i) - &xvar(n, j), params.nu.clone()));
        }
    }
    // the three-body lines x_k + x_l − 2 x_m
    for m in 0..n {
        let (k, l) = match m {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let form = &(&xvar(n, k) + &xvar(n, l)) - &xvar(n, m).scale(&rat_int(2));
        forms.push((form, params.mu.clone()));
    }
    let gauge = CartesianGauge {
        n,
        scale: rat_int(1),
        omega: params.omega.clone(),
        forms,
        maps: vec![l1, l2],
    };
    // weighted basis (1,2) up to wdeg 4 gives λ2², λ1²λ2 coverage
    let f = CharacteristicVector(vec![1, 2]);
    let basis = enumerate_basis(2, &f, 4).unwrap();
    for i in 0..basis.len() {
        let p = basis.monomial_poly(i);
        let via_op = diffop_apply(&op, &p).unwrap().compose(&gauge.maps);
        let via_oracle = gauge.apply(&p);
        assert_eq!(via_op, via_oracle, "g2 gauge oracle mismatch on monomial #{i}");
    }
}

// ---------------------------------------------------------------------------
// One-dimensional radial oracle for the O(N)-symmetric reduction: Laurent
// arithmetic in r with the Gaussian handled through its log-derivative.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
struct Laurent(std::collections::BTreeMap<i64, Rational>);

impl Laurent {
    fn zero() -> Self {
        Laurent(std::collections::BTreeMap::new())
    }
    fn mono(k: i64, c: Rational) -> Self {
        let mut m = std::collections::BTreeMap::new();
        if !c.is_zero() {
            m.insert(k, c);
        }
        Laurent(m)
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (k, c) in &other.0 {
            let e = out.entry(*k).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                out.remove(k);
            }
        }
        Laurent(out)
    }
    fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent(self.0.iter().map(|(k, v)| (*k, v * c)).collect())
    }
    fn mul_mono(&self, k: i64, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent(self.0.iter().map(|(e, v)| (e + k, v * c)).collect())
    }
}

#[test]
fn on_matches_radial_gauge_rotation() {
    // H = −(1/2)(∂² + (N−1)/r ∂) + (1/2)ω²r² + c/r², gauge r^l exp(−ωr²/2),
    // c = l(l+N−2)/2, E0 = ω(l + N/2). In t = r² the operator must be
    // −2t∂² + (2ωt − N − 2l)∂ with eigenvalue 2ωp on the degree-p sector.
    for (n, l) in [(1i64, rat_int(0)), (3, rat(1, 2)), (5, rat(2, 3))] {
        let omega = rat_int(1);
        let c = &l * (&l + rat_int(n - 2)) / rat_int(2);
        let e0 = &omega * (&l + rat(n, 2));
        let params = ModelParams {
            omega: omega.clone(),
            n_bodies: n as usize,
            ..Default::default()
        };
        let op = rqes_core::models::build_on(&params, &l);
        for p in 0..=4i64 {
            // Work with w = r^l f, f = r^{2p}, exponents stored relative to
            // r^l: d/dr maps the relative exponent k to k−1 with factor (l+k).
            // The Gaussian enters through its log-derivative −ωr.
            let w = Laurent::mono(2 * p, Rational::one());
            let rel_diff = |q: &Laurent| {
                let mut out = Laurent::zero();
                for (k, v) in &q.0 {
                    out = out.add(&Laurent::mono(k - 1, v * (&l + rat_int(*k))));
                }
                out
            };
            let wp = rel_diff(&w);
            let wpp = rel_diff(&wp);
            // H(fΨ0)/Ψ0 · r^l  =
            //   −1/2 [wpp − 2ω r wp + (ω²r² − ω) w]
            //   −(N−1)/(2r) [wp − ω r w] + (ω² r²/2) w + c w / r²  − E0 w
            let mut acc = wpp.scale(&rat(-1, 2));
            acc = acc.add(&wp.mul_mono(1, &omega));
            acc = acc.add(&w.scale(&(&omega * rat(1, 2))));
            acc = acc.add(&w.mul_mono(2, &(-&omega * &omega * rat(1, 2))));
            acc = acc.add(&wp.mul_mono(-1, &rat(-(n - 1), 2)));
            acc = acc.add(&w.scale(&(rat(n - 1, 2) * &omega)));
            acc = acc.add(&w.mul_mono(2, &(&omega * &omega * rat(1, 2))));
            acc = acc.add(&w.mul_mono(-2, &c));
            acc = acc.add(&w.scale(&-&e0));
            // compare with the candidate operator applied to t^p, mapped t ↦ r²
            let tp = Polynomial::monomial(1, ExponentVector(vec![p as u32]), rat_int(1));
            let image = diffop_apply(&op, &tp).unwrap();
            let mut expected = Laurent::zero();
            for (e, coeff) in image.terms() {
                expected = expected.add(&Laurent::mono(2 * e.0[0] as i64, coeff.clone()));
            }
            assert_eq!(acc, expected, "O(N) radial oracle mismatch at N={n}, p={p}");
        }
    }
}

#[test]
fn z2n_matches_cartesian_gauge_rotation() {
    // per-coordinate forms x_i with couplings ν_i, maps t_i = x_i²
    let n = 3usize;
    let nus = vec![rat(1, 3), rat(1, 2), rat_int(2)];
    let op = rqes_core::models::build_z2n(n, &nus, &rat_int(1)).unwrap();
    let maps: Vec<Polynomial> = (0..n).map(|i| xvar(n, i).pow(2)).collect();
    let forms = (0..n).map(|i| (xvar(n, i), nus[i].clone())).collect();
    let gauge = CartesianGauge {
        n,
        scale: rat_int(1),
        omega: rat_int(1),
        forms,
        maps,
    };
    check_model(&gauge, &op, n, 3);
}

#[test]
fn bcn_at_nu_zero_decouples_into_z2n_sum() {
    // the BC_N operator at ν = 0, pushed to Cartesian squares, acts exactly
    // as the sum of one-coordinate operators with ν_i = ν2
    let n = 3usize;
    let nu2 = rat(1, 2);
    let params = ModelParams {
        omega: rat_int(1),
        nu: rat_int(0),
        nu2: nu2.clone(),
        n_bodies: n,
        ..Default::default()
    };
    let bc = build_bcn(n, &params).unwrap();
    let z2 = rqes_core::models::build_z2n(n, &vec![nu2; n], &rat_int(1)).unwrap();
    // maps from BC variables to (Z2)^N variables: σ_k(t1..tN)
    let us: Vec<Polynomial> = (0..n).map(|i| xvar(n, i)).collect();
    let sigma_maps = elementary_symmetric(&us, n);
    let f = CharacteristicVector::ones(n);
    let basis = enumerate_basis(n, &f, 3).unwrap();
    for i in 0..basis.len() {
        let p = basis.monomial_poly(i);
        let via_bc = diffop_apply(&bc, &p).unwrap().compose(&sigma_maps);
        let via_z2 = diffop_apply(&z2, &p.compose(&sigma_maps)).unwrap();
        assert_eq!(via_bc, via_z2, "BC_N(ν=0) vs (Z2)^N mismatch on monomial #{i}");
    }
}
