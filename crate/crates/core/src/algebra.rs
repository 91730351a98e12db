//! Hidden-algebra generator sets and their structure checks: the gl(d+1)
//! realization by first-order operators, the eleven-generator algebra acting
//! on the (1,2)-graded plane, commutation tables with exact closure solves,
//! and decomposition of Hamiltonians as degree-2 polynomials in generators.

use num_traits::Zero;
use serde::Serialize;

use crate::exactpoly::{
    diffop_commutator, diffop_compose, DerivativeIndex, DiffOp, ExponentVector, Polynomial,
};
use crate::flags::{enumerate_basis, matrix_of, CharacteristicVector};
use crate::linalg::RatMat;
use crate::{rat_int, Error, Rational, Result};

/// A named generator; raising generators are excluded from decompositions.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub op: DiffOp,
    pub raising: bool,
}

/// A finite set of differential-operator generators sharing one dimension,
/// with the representation mark `n`.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub name: String,
    pub dim: usize,
    pub mark: Rational,
    pub members: Vec<Generator>,
}

impl GeneratorSet {
    pub fn non_raising(&self) -> Vec<&Generator> {
        self.members.iter().filter(|g| !g.raising).collect()
    }

    pub fn member(&self, name: &str) -> Option<&Generator> {
        self.members.iter().find(|g| g.name == name)
    }
}

/// The gl(d+1) realization by first-order operators on `d` variables:
/// `J_i⁻ = ∂_i`, `J_ij⁰ = t_i ∂_j`, `J⁰ = Σ t_i ∂_i − n`,
/// `J_i⁺ = t_i J⁰` (raising). Total `(d+1)²` members.
pub fn gl_generators(d: usize, n: &Rational) -> GeneratorSet {
    let mut members = Vec::new();
    for i in 0..d {
        members.push(Generator {
            name: format!("J-_{}", i + 1),
            op: DiffOp::first_order(Polynomial::one(d), i),
            raising: false,
        });
    }
    for i in 0..d {
        for j in 0..d {
            members.push(Generator {
                name: format!("J0_{}{}", i + 1, j + 1),
                op: DiffOp::first_order(Polynomial::var(d, i), j),
                raising: false,
            });
        }
    }
    let mut euler = DiffOp::mult(Polynomial::constant(d, -n.clone()));
    for i in 0..d {
        euler = &euler + &DiffOp::first_order(Polynomial::var(d, i), i);
    }
    members.push(Generator { name: "J0".into(), op: euler.clone(), raising: false });
    for i in 0..d {
        let ti = DiffOp::mult(Polynomial::var(d, i));
        members.push(Generator {
            name: format!("J+_{}", i + 1),
            op: diffop_compose(&ti, &euler).expect("same dimension"),
            raising: true,
        });
    }
    GeneratorSet { name: format!("gl({})", d + 1), dim: d, mark: n.clone(), members }
}

/// The eleven-generator algebra acting on polynomials in `(t, u)` graded by
/// `(1,2)`: seven first-order generators, the grading operator `J0`, and the
/// second-order nilpotent triple `T_i`.
///
/// `T_0 = u ∂_t²`, `T_1 = u ∂_t J0`, `T_2 = u J0 (J0+1)` with
/// `J0 = t∂_t + 2u∂_u − n`; the iterated commutators of `J⁴` with `T_0`
/// reproduce `T_1`, `T_2` up to the scalars −2 and +2 (see tests).
pub fn g2_generators(n: &Rational) -> GeneratorSet {
    let d = 2;
    let t = Polynomial::var(d, 0);
    let u = Polynomial::var(d, 1);
    let third = n / rat_int(3);

    let j1 = DiffOp::first_order(Polynomial::one(d), 0);
    let j2 = &DiffOp::first_order(t.clone(), 0)
        + &DiffOp::mult(Polynomial::constant(d, -third.clone()));
    let j3 = &DiffOp::first_order(u.scale(&rat_int(2)), 1)
        + &DiffOp::mult(Polynomial::constant(d, -third));
    let j4 = {
        let tt = &t * &t;
        let tu = (&t * &u).scale(&rat_int(2));
        &(&DiffOp::first_order(tt, 0) + &DiffOp::first_order(tu, 1))
            + &DiffOp::mult(t.scale(&-n.clone()))
    };
    let r = |i: u32| {
        DiffOp::first_order(
            Polynomial::monomial(d, ExponentVector(vec![i, 0]), num_traits::One::one()),
            1,
        )
    };
    let j0 = &(&DiffOp::first_order(t.clone(), 0)
        + &DiffOp::first_order(u.scale(&rat_int(2)), 1))
        + &DiffOp::mult(Polynomial::constant(d, -n.clone()));
    let t0 = DiffOp::term(u.clone(), DerivativeIndex(vec![2, 0]));
    let u_dt = DiffOp::term(u.clone(), DerivativeIndex(vec![1, 0]));
    let t1 = diffop_compose(&u_dt, &j0).expect("same dimension");
    let j0_plus_1 = &j0 + &DiffOp::mult(Polynomial::one(d));
    let t2 = diffop_compose(
        &DiffOp::mult(u),
        &diffop_compose(&j0, &j0_plus_1).expect("same dimension"),
    )
    .expect("same dimension");

    let members = vec![
        Generator { name: "J1".into(), op: j1, raising: false },
        Generator { name: "J2".into(), op: j2, raising: false },
        Generator { name: "J3".into(), op: j3, raising: false },
        Generator { name: "J4".into(), op: j4, raising: true },
        Generator { name: "R0".into(), op: r(0), raising: false },
        Generator { name: "R1".into(), op: r(1), raising: false },
        Generator { name: "R2".into(), op: r(2), raising: false },
        Generator { name: "J0".into(), op: j0, raising: false },
        Generator { name: "T0".into(), op: t0, raising: false },
        Generator { name: "T1".into(), op: t1, raising: false },
        Generator { name: "T2".into(), op: t2, raising: false },
    ];
    GeneratorSet { name: "g2".into(), dim: d, mark: n.clone(), members }
}

// ---------------------------------------------------------------------------
// Vectorization of operators over (derivative index, monomial) slots.
// ---------------------------------------------------------------------------

type Slot = (DerivativeIndex, ExponentVector);

fn collect_slots(ops: &[&DiffOp]) -> Vec<Slot> {
    let mut seen = std::collections::BTreeSet::new();
    for op in ops {
        for (didx, poly) in op.terms() {
            for (exps, _) in poly.terms() {
                seen.insert((didx.clone(), exps.clone()));
            }
        }
    }
    seen.into_iter().collect()
}

fn vectorize(op: &DiffOp, slots: &[Slot]) -> Vec<Rational> {
    let index: std::collections::BTreeMap<&Slot, usize> =
        slots.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut v = vec![Rational::zero(); slots.len()];
    for (didx, poly) in op.terms() {
        for (exps, c) in poly.terms() {
            if let Some(&i) = index.get(&(didx.clone(), exps.clone())) {
                v[i] = c.clone();
            }
        }
    }
    v
}

/// Expresses `target` in the linear span of `ops` if possible.
fn in_span(ops: &[&DiffOp], target: &DiffOp) -> Option<Vec<Rational>> {
    let mut all: Vec<&DiffOp> = ops.to_vec();
    all.push(target);
    let slots = collect_slots(&all);
    let cols: Vec<Vec<Rational>> = ops.iter().map(|o| vectorize(o, &slots)).collect();
    let mat = RatMat::from_fn(slots.len(), ops.len(), |i, j| cols[j][i].clone());
    let b = vectorize(target, &slots);
    mat.solve(&b).map(|(x, _)| x)
}

/// One commutator entry of a table.
#[derive(Clone, Debug, Serialize)]
pub struct CommutatorEntry {
    pub left: String,
    pub right: String,
    pub closed: bool,
    /// Coefficients over the member list when the bracket closes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<String>>,
    pub bracket: String,
}

/// Full pairwise commutator table with an exact closure report.
#[derive(Clone, Debug, Serialize)]
pub struct CommutationTable {
    pub set: String,
    pub entries: Vec<CommutatorEntry>,
    pub all_closed: bool,
}

/// Computes all pairwise commutators in canonical form and solves exactly
/// for their representation in the span of the members.
pub fn commutation_table(set: &GeneratorSet) -> Result<CommutationTable> {
    let ops: Vec<&DiffOp> = set.members.iter().map(|g| &g.op).collect();
    let mut entries = Vec::new();
    let mut all_closed = true;
    for i in 0..set.members.len() {
        for j in i + 1..set.members.len() {
            let bracket = diffop_commutator(&set.members[i].op, &set.members[j].op)?;
            let coeffs = if bracket.is_zero() {
                Some(vec![Rational::zero(); ops.len()])
            } else {
                in_span(&ops, &bracket)
            };
            let closed = coeffs.is_some();
            all_closed &= closed;
            entries.push(CommutatorEntry {
                left: set.members[i].name.clone(),
                right: set.members[j].name.clone(),
                closed,
                coefficients: coeffs.map(|cs| cs.iter().map(|c| c.to_string()).collect()),
                bracket: bracket.to_string(),
            });
        }
    }
    Ok(CommutationTable { set: set.name.clone(), entries, all_closed })
}

/// Per-generator invariance outcome on a weighted basis.
#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub set: String,
    pub degree: u64,
    pub invariant: bool,
    /// `(generator, escaped image part)` pairs for violations.
    pub violations: Vec<(String, String)>,
}

/// Checks that every member maps the weighted basis of degree `n` into
/// itself. The set's mark must equal `n`; a mismatch is flagged as misuse.
pub fn check_invariance(
    set: &GeneratorSet,
    f: &CharacteristicVector,
    n: u64,
) -> Result<InvarianceReport> {
    if set.mark != Rational::from_integer((n as i64).into()) {
        return Err(Error::MarkMismatch { mark: set.mark.to_string(), degree: n as i64 });
    }
    let basis = enumerate_basis(set.dim, f, n)?;
    let mut violations = Vec::new();
    for g in &set.members {
        let m = matrix_of(&g.op, &basis)?;
        for (col, outside) in &m.remainder {
            violations.push((
                g.name.clone(),
                format!("{} -> {}", basis.monomial_poly(*col), outside),
            ));
        }
    }
    Ok(InvarianceReport {
        set: set.name.clone(),
        degree: n,
        invariant: violations.is_empty(),
        violations,
    })
}

/// Exact decomposition of an operator as a degree-2 polynomial in the
/// non-raising members of a generator set.
#[derive(Clone, Debug)]
pub struct DecompositionResult {
    /// Names of the candidate generators (non-raising, in set order).
    pub basis_names: Vec<String>,
    /// Coefficients of ordered products `G_a ∘ G_b`.
    pub pair_coeffs: Vec<((usize, usize), Rational)>,
    /// Coefficients of single generators.
    pub single_coeffs: Vec<(usize, Rational)>,
    pub constant: Rational,
    /// `target − reconstruction`; zero iff the decomposition is exact.
    pub residual: DiffOp,
    /// Dimension of the affine solution space of the exact linear solve.
    pub solution_dim: usize,
}

impl DecompositionResult {
    pub fn is_exact(&self) -> bool {
        self.residual.is_zero()
    }

    /// Rebuilds `Σ c_ab G_a∘G_b + Σ c_a G_a + c0` over the given set.
    pub fn reconstruct(&self, set: &GeneratorSet) -> Result<DiffOp> {
        let gens = set.non_raising();
        let mut acc = DiffOp::mult(Polynomial::constant(set.dim, self.constant.clone()));
        for ((a, b), c) in &self.pair_coeffs {
            let prod = diffop_compose(&gens[*a].op, &gens[*b].op)?;
            acc = &acc + &prod.scale(c);
        }
        for (a, c) in &self.single_coeffs {
            acc = &acc + &gens[*a].op.scale(c);
        }
        Ok(acc)
    }
}

#[derive(Clone, Copy)]
enum CandidateLabel {
    Pair(usize, usize),
    Single(usize),
    Constant,
}

/// Solves exactly for `L = Σ c_ab G_a∘G_b + Σ c_a G_a + c0` over the
/// non-raising members of `set`. A nonzero residual is a result, not an
/// error; linear dependence among products is expected and reported through
/// `solution_dim`. The solve runs through exact normal equations, so the
/// residual is the true orthogonal defect of `L` against the candidate span.
pub fn decompose_pol2(l: &DiffOp, set: &GeneratorSet) -> Result<DecompositionResult> {
    if l.dim() != set.dim {
        return Err(Error::DimensionMismatch(l.dim(), set.dim));
    }
    let gens = set.non_raising();
    let mut candidates: Vec<DiffOp> = Vec::new();
    let mut labels: Vec<CandidateLabel> = Vec::new();
    for (a, ga) in gens.iter().enumerate() {
        for (b, gb) in gens.iter().enumerate() {
            candidates.push(diffop_compose(&ga.op, &gb.op)?);
            labels.push(CandidateLabel::Pair(a, b));
        }
    }
    for (a, ga) in gens.iter().enumerate() {
        candidates.push(ga.op.clone());
        labels.push(CandidateLabel::Single(a));
    }
    candidates.push(DiffOp::mult(Polynomial::one(set.dim)));
    labels.push(CandidateLabel::Constant);

    let mut refs: Vec<&DiffOp> = candidates.iter().collect();
    refs.push(l);
    let slots = collect_slots(&refs);
    let cols: Vec<Vec<Rational>> = candidates.iter().map(|c| vectorize(c, &slots)).collect();
    let b = vectorize(l, &slots);

    let m = candidates.len();
    let gram = RatMat::from_fn(m, m, |i, j| {
        cols[i].iter().zip(&cols[j]).map(|(x, y)| x * y).sum::<Rational>()
    });
    let rhs: Vec<Rational> = (0..m)
        .map(|i| cols[i].iter().zip(&b).map(|(x, y)| x * y).sum())
        .collect();
    let (x, solution_dim) =
        gram.solve(&rhs).expect("normal equations are always consistent");

    let mut pair_coeffs = Vec::new();
    let mut single_coeffs = Vec::new();
    let mut constant = Rational::zero();
    let mut reconstruction = DiffOp::zero(set.dim);
    for (k, c) in x.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        reconstruction = &reconstruction + &candidates[k].scale(c);
        match labels[k] {
            CandidateLabel::Pair(a, b) => pair_coeffs.push(((a, b), c.clone())),
            CandidateLabel::Single(a) => single_coeffs.push((a, c.clone())),
            CandidateLabel::Constant => constant = c.clone(),
        }
    }
    let residual = l - &reconstruction;
    Ok(DecompositionResult {
        basis_names: gens.iter().map(|g| g.name.clone()).collect(),
        pair_coeffs,
        single_coeffs,
        constant,
        residual,
        solution_dim,
    })
}

/// Iterated commutators `ad_{J4}^i (T0)` of the g2 set, for the nilpotency
/// and closed-form checks.
pub fn g2_iterated_t(set: &GeneratorSet, count: usize) -> Result<Vec<DiffOp>> {
    let j4 = &set.member("J4").expect("g2 set has J4").op;
    let t0 = &set.member("T0").expect("g2 set has T0").op;
    let mut out = vec![t0.clone()];
    for _ in 0..count {
        let next = diffop_commutator(j4, out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{diffop_apply, diffop_from_str, poly_from_str};
    use crate::models::{build_bcn, build_calogero, build_g2, ModelParams};
    use crate::{rat, rat_int};

    #[test]
    fn gl_generator_count() {
        for d in 1..=4usize {
            let set = gl_generators(d, &rat_int(3));
            assert_eq!(set.members.len(), (d + 1) * (d + 1));
            assert_eq!(set.members.iter().filter(|g| g.raising).count(), d);
        }
    }

    #[test]
    fn lowering_raising_bracket() {
        // [J_i⁻, J_j⁺] = δ_ij J⁰ + J_ji⁰
        let d = 2;
        let n = rat(5, 3);
        let set = gl_generators(d, &n);
        for i in 0..d {
            for j in 0..d {
                let lm = &set.member(&format!("J-_{}", i + 1)).unwrap().op;
                let rs = &set.member(&format!("J+_{}", j + 1)).unwrap().op;
                let bracket = diffop_commutator(lm, rs).unwrap();
                let mut expected = DiffOp::first_order(Polynomial::var(d, j), i);
                if i == j {
                    expected = &expected + &set.member("J0").unwrap().op;
                }
                assert_eq!(bracket, expected, "i={i} j={j}");
            }
        }
    }

    #[test]
    fn gl_cartan_brackets() {
        // [J_ij⁰, J_kl⁰] = δ_jk J_il⁰ − δ_li J_kj⁰
        let d = 3;
        let set = gl_generators(d, &rat_int(0));
        let g = |i: usize, j: usize| {
            set.member(&format!("J0_{}{}", i + 1, j + 1)).unwrap().op.clone()
        };
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let bracket = diffop_commutator(&g(i, j), &g(k, l)).unwrap();
                        let mut expected = DiffOp::zero(d);
                        if j == k {
                            expected = &expected + &g(i, l);
                        }
                        if l == i {
                            expected = &expected - &g(k, j);
                        }
                        assert_eq!(bracket, expected);
                    }
                }
            }
        }
    }

    #[test]
    fn raising_kills_top_degree() {
        // J_1⁺ applied to t1^n vanishes at the mark degree
        let set = gl_generators(1, &rat_int(4));
        let j_plus = &set.member("J+_1").unwrap().op;
        let t4 = poly_from_str("t1^4", 1).unwrap();
        assert!(diffop_apply(j_plus, &t4).unwrap().is_zero());
        let t3 = poly_from_str("t1^3", 1).unwrap();
        assert!(!diffop_apply(j_plus, &t3).unwrap().is_zero());
    }

    #[test]
    fn gl_closure_table() {
        for d in [1usize, 2, 3] {
            let set = gl_generators(d, &rat(7, 2));
            let table = commutation_table(&set).unwrap();
            assert!(table.all_closed, "gl({}) table not closed", d + 1);
        }
    }

    #[test]
    fn gl_invariance_at_mark_only() {
        for d in [2usize, 3] {
            for n in [3u64, 5] {
                let set = gl_generators(d, &rat_int(n as i64));
                let f = CharacteristicVector::ones(d);
                let rep = check_invariance(&set, &f, n).unwrap();
                assert!(rep.invariant, "gl({}) not invariant on P_{n}", d + 1);
                // mark/degree mismatch flagged as misuse
                assert!(check_invariance(&set, &f, n + 1).is_err());
                // a set marked one higher escapes from P_{n+1}
                let mut wrong = gl_generators(d, &rat_int(n as i64));
                wrong.mark = rat_int(n as i64 + 1);
                let rep = check_invariance(&wrong, &f, n + 1).unwrap();
                assert!(!rep.invariant);
            }
        }
    }

    #[test]
    fn g2_t_generators_closed_forms_and_nilpotency() {
        let n = rat(5, 2);
        let set = g2_generators(&n);
        let ad = g2_iterated_t(&set, 3).unwrap();
        let t1 = &set.member("T1").unwrap().op;
        let t2 = &set.member("T2").unwrap().op;
        // ad(T0) = −2 T1, ad²(T0) = 2 T2, ad³(T0) = 0
        assert_eq!(ad[1], t1.scale(&rat_int(-2)));
        assert_eq!(ad[2], t2.scale(&rat_int(2)));
        assert!(ad[3].is_zero());
        // pairwise commutativity and order ≤ 2
        let names = ["T0", "T1", "T2"];
        for a in names {
            for b in names {
                let x = &set.member(a).unwrap().op;
                let y = &set.member(b).unwrap().op;
                assert!(diffop_commutator(x, y).unwrap().is_zero());
            }
        }
        for a in names {
            assert!(set.member(a).unwrap().op.order() <= 2);
        }
    }

    #[test]
    fn g2_first_order_part_closes() {
        let n = rat(5, 2);
        let full = g2_generators(&n);
        let first_order = GeneratorSet {
            name: "g2-first-order".into(),
            dim: 2,
            mark: n,
            members: full
                .members
                .iter()
                .filter(|g| {
                    ["J1", "J2", "J3", "J4", "R0", "R1", "R2", "J0"]
                        .contains(&g.name.as_str())
                })
                .cloned()
                .collect(),
        };
        let table = commutation_table(&first_order).unwrap();
        assert!(table.all_closed);
        // [R_i, R_j] = 0
        for e in &table.entries {
            if e.left.starts_with('R') && e.right.starts_with('R') {
                assert_eq!(e.bracket, "0");
            }
        }
    }

    #[test]
    fn g2_full_set_invariance() {
        for n in [3u64, 5] {
            let set = g2_generators(&rat_int(n as i64));
            let f = CharacteristicVector(vec![1, 2]);
            let rep = check_invariance(&set, &f, n).unwrap();
            assert!(rep.invariant, "g2 set not invariant on P_{n}: {:?}", rep.violations);
        }
    }

    #[test]
    fn decompose_laguerre_example() {
        // L = −2t∂² + (2ωt − c)∂ over gl(2) non-raising, ω = 1, c = 3
        let l = diffop_from_str("(-2*t1) d1^2 + (2*t1 - 3) d1", 1).unwrap();
        let set = gl_generators(1, &rat_int(0));
        let dec = decompose_pol2(&l, &set).unwrap();
        assert!(dec.is_exact(), "residual: {}", dec.residual);
        let rebuilt = dec.reconstruct(&set).unwrap();
        assert_eq!(rebuilt, l);
    }

    #[test]
    fn decompose_model_hamiltonians() {
        let params = ModelParams { omega: rat_int(1), nu: rat(1, 3), ..Default::default() };
        for n in [3usize, 4] {
            let p = ModelParams { n_bodies: n, ..params.clone() };
            let h = build_calogero(n, &p).unwrap();
            let set = gl_generators(n - 1, &rat_int(0));
            let dec = decompose_pol2(&h, &set).unwrap();
            assert!(dec.is_exact(), "h_Cal N={n} residual: {}", dec.residual);
        }
        for n in [2usize, 3] {
            let p = ModelParams { n_bodies: n, nu2: rat(1, 2), ..params.clone() };
            let h = build_bcn(n, &p).unwrap();
            let set = gl_generators(n, &rat_int(0));
            let dec = decompose_pol2(&h, &set).unwrap();
            assert!(dec.is_exact(), "h_BC N={n} residual: {}", dec.residual);
        }
    }

    #[test]
    fn decompose_g2_over_quartet() {
        // h_G2 = (J² + 3J³)J¹ − (2/3) J³ R₂ + [3(μ+ν)+1] J¹ + 2ω J² + 3ω J³
        //        − (2/3)(1+2μ) R₂,   with J², J³ at mark 0
        let params = ModelParams {
            omega: rat_int(1),
            nu: rat(1, 3),
            mu: rat(1, 5),
            ..Default::default()
        };
        let h = build_g2(&params);
        let full = g2_generators(&rat_int(0));
        let quartet = GeneratorSet {
            name: "g2-quartet".into(),
            dim: 2,
            mark: rat_int(0),
            members: ["J1", "J2", "J3", "R2"]
                .iter()
                .map(|n| full.member(n).unwrap().clone())
                .collect(),
        };
        let dec = decompose_pol2(&h, &quartet).unwrap();
        assert!(dec.is_exact(), "residual: {}", dec.residual);
        // the expected combination reproduces h exactly
        let g = |n: &str| full.member(n).unwrap().op.clone();
        let mut expected =
            diffop_compose(&(&g("J2") + &g("J3").scale(&rat_int(3))), &g("J1")).unwrap();
        expected = &expected - &diffop_compose(&g("J3"), &g("R2")).unwrap().scale(&rat(2, 3));
        let c1 = rat_int(1) + (rat(1, 5) + rat(1, 3)) * rat_int(3);
        expected = &expected + &g("J1").scale(&c1);
        expected = &expected + &g("J2").scale(&rat_int(2));
        expected = &expected + &g("J3").scale(&rat_int(3));
        let c2 = -(rat_int(1) + rat(2, 5)) * rat(2, 3);
        expected = &expected + &g("R2").scale(&c2);
        assert_eq!(expected, h);
    }

    #[test]
    fn decomposition_round_trip() {
        // a Pol2 combination built from known coefficients, decomposed, rebuilt
        let set = gl_generators(2, &rat_int(0));
        let target = {
            let gens = set.non_raising();
            let mut acc = DiffOp::mult(Polynomial::constant(2, rat(3, 7)));
            for (a, b, num, den) in [(0usize, 3usize, 2i64, 3i64), (1, 4, -1, 2), (5, 0, 5, 1)] {
                let prod = diffop_compose(&gens[a].op, &gens[b].op).unwrap();
                acc = &acc + &prod.scale(&rat(num, den));
            }
            &acc + &gens[2].op.scale(&rat(-4, 5))
        };
        let dec = decompose_pol2(&target, &set).unwrap();
        assert!(dec.is_exact());
        assert_eq!(dec.reconstruct(&set).unwrap(), target);
        assert!(dec.solution_dim > 0); // products are linearly dependent
    }
}
