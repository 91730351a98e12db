//! Exact eigenvalues, degeneracies and polynomial eigenfunctions from graded
//! quotient blocks; QES finite blocks with exact characteristic polynomials
//! and isolated real roots; commutant discovery by structural ansatz.
//!
//! Eigenvalues of a flag-preserving operator are assembled per weighted
//! degree: the induced map on `P_m / P_{m−1}` is block-triangularized by
//! strongly-connected components of its sparsity digraph, and each component
//! contributes the exact rational roots of its characteristic polynomial.
//! Anything without rational roots surfaces as an explicit factor, never as
//! an approximation.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactpoly::{
    diffop_apply, diffop_commutator, DerivativeIndex, DiffOp, ExponentVector, Polynomial,
};
use crate::flags::{
    enumerate_basis, flag_preserved, matrix_of, weighted_degree, CharacteristicVector,
};
use crate::linalg::{charpoly, isolate_real_roots, rational_roots, RatMat};
use crate::{rat, Error, Rational, Result};

/// Exact spectrum of a flag-preserving operator on a weighted basis.
#[derive(Clone, Debug)]
pub struct EigenResult {
    /// Rational eigenvalues with multiplicities, ascending.
    pub eigenvalues: Vec<(Rational, usize)>,
    /// Characteristic-polynomial factors without rational roots
    /// (coefficient lists, constant term first).
    pub irrational_blocks: Vec<Vec<Rational>>,
    /// Eigenfunctions per eigenvalue, normalized so the first nonzero
    /// basis coordinate is one. Only present when requested.
    pub eigenfunctions: Option<Vec<(Rational, Vec<Polynomial>)>>,
    /// Dimension of the underlying basis.
    pub basis_dimension: usize,
}

impl EigenResult {
    pub fn multiset(&self) -> BTreeMap<Rational, usize> {
        self.eigenvalues.iter().cloned().collect()
    }
}

/// Tarjan strongly-connected components of a small digraph, returned in
/// reverse topological order.
fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State {
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn strongconnect(v: usize, adj: &[Vec<usize>], st: &mut State) {
        st.index[v] = Some(st.next);
        st.low[v] = st.next;
        st.next += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for &w in &adj[v] {
            if st.index[w].is_none() {
                strongconnect(w, adj, st);
                st.low[v] = st.low[v].min(st.low[w]);
            } else if st.on_stack[w] {
                st.low[v] = st.low[v].min(st.index[w].unwrap());
            }
        }
        if st.low[v] == st.index[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().unwrap();
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            st.out.push(comp);
        }
    }
    let n = adj.len();
    let mut st = State {
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if st.index[v].is_none() {
            strongconnect(v, adj, &mut st);
        }
    }
    st.out
}

/// Exact spectrum of `L` on the flag `f` up to weighted degree `n`.
/// Refuses (with the witness) if `L` does not preserve the flag.
pub fn exact_eigenvalues(
    l: &DiffOp,
    f: &CharacteristicVector,
    n: u64,
    want_eigenfunctions: bool,
) -> Result<EigenResult> {
    let report = flag_preserved(l, f, n)?;
    if !report.preserved {
        let w = report.witness.unwrap();
        return Err(Error::FlagViolation { monomial: w.monomial, image_term: w.image_term });
    }
    let d = f.dim();
    let basis = enumerate_basis(d, f, n)?;
    // group basis indices by weighted degree
    let mut classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for i in 0..basis.len() {
        classes.entry(basis.weighted_degree(i)).or_default().push(i);
    }
    let mut eigen: BTreeMap<Rational, usize> = BTreeMap::new();
    let mut irrational = Vec::new();
    for (m, members) in &classes {
        // quotient block: same-weighted-degree components of the images
        let local: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(a, &g)| (g, a)).collect();
        let k = members.len();
        let mut block = RatMat::zeros(k, k);
        for (col, &g) in members.iter().enumerate() {
            let image = diffop_apply(l, &basis.monomial_poly(g))?;
            for (e, c) in image.terms() {
                if weighted_degree(e, f)? == *m {
                    let gi = basis.index_of(e).expect("image stays within the flag");
                    let row = local[&gi];
                    *block.at_mut(row, col) = c.clone();
                }
            }
        }
        // block-triangularize by strongly-connected components
        let adj: Vec<Vec<usize>> = (0..k)
            .map(|j| {
                (0..k)
                    .filter(|&i| i != j && !block.at(i, j).is_zero())
                    .collect()
            })
            .collect();
        for comp in tarjan_scc(&adj) {
            if comp.len() == 1 {
                let i = comp[0];
                *eigen.entry(block.at(i, i).clone()).or_insert(0) += 1;
                continue;
            }
            let sub = RatMat::from_fn(comp.len(), comp.len(), |a, b| {
                block.at(comp[a], comp[b]).clone()
            });
            let p = charpoly(&sub);
            let hints: Vec<Rational> =
                (0..comp.len()).map(|a| sub.at(a, a).clone()).collect();
            let (roots, rest) = rational_roots(&p, &hints);
            for r in roots {
                *eigen.entry(r).or_insert(0) += 1;
            }
            if rest.len() > 1 {
                irrational.push(rest);
            }
        }
    }
    let eigenfunctions = if want_eigenfunctions {
        let full = matrix_of(l, &basis)?.to_dense();
        let mut out = Vec::new();
        for lambda in eigen.keys() {
            let mut a = full.clone();
            for i in 0..basis.len() {
                *a.at_mut(i, i) -= lambda;
            }
            let mut funcs = Vec::new();
            for v in a.nullspace() {
                let mut p = Polynomial::zero(d);
                for (i, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        p.add_term(basis.monomial(i).clone(), c.clone());
                    }
                }
                funcs.push(p);
            }
            out.push((lambda.clone(), funcs));
        }
        Some(out)
    } else {
        None
    };
    Ok(EigenResult {
        eigenvalues: eigen.into_iter().collect(),
        irrational_blocks: irrational,
        eigenfunctions,
        basis_dimension: basis.len(),
    })
}

/// Eigenvalue → multiplicity over the flag up to weighted degree `n`.
pub fn degeneracy_table(
    l: &DiffOp,
    f: &CharacteristicVector,
    n: u64,
) -> Result<BTreeMap<Rational, usize>> {
    Ok(exact_eigenvalues(l, f, n, false)?.multiset())
}

/// Finite QES block: the restriction of an operator to `⟨v^0 .. v^k⟩` in a
/// single variable, with its exact characteristic polynomial.
#[derive(Clone, Debug)]
pub struct QesBlock {
    pub k: u32,
    pub var_index: usize,
    /// `(k+1)×(k+1)` matrix, column `p` = image of `v^p`.
    pub matrix: RatMat,
    /// Monic characteristic polynomial, constant term first.
    pub charpoly: Vec<Rational>,
}

impl QesBlock {
    /// Rational eigenvalues with multiplicity plus the root-free factor.
    pub fn rational_eigenvalues(&self) -> (Vec<Rational>, Vec<Rational>) {
        let hints: Vec<Rational> =
            (0..self.matrix.rows).map(|i| self.matrix.at(i, i).clone()).collect();
        rational_roots(&self.charpoly, &hints)
    }

    /// Isolating rational brackets of every real root of the block.
    pub fn root_brackets(&self, width: &Rational) -> Vec<(Rational, Rational)> {
        isolate_real_roots(&self.charpoly, width)
    }
}

/// Restricts `op` (already including any QES deformation) to the span of
/// `v^0..v^k` in variable `var_index`. Errors with a witness if the span is
/// not invariant.
pub fn qes_block(op: &DiffOp, var_index: usize, k: u32) -> Result<QesBlock> {
    let d = op.dim();
    if var_index >= d {
        return Err(Error::InvalidParameter(format!(
            "variable index {var_index} out of range for dimension {d}"
        )));
    }
    let size = (k + 1) as usize;
    let mut matrix = RatMat::zeros(size, size);
    for p in 0..=k {
        let mut e = ExponentVector::zeros(d);
        e.0[var_index] = p;
        let vp = Polynomial::monomial(d, e, Rational::one());
        let image = diffop_apply(op, &vp)?;
        for (exps, c) in image.terms() {
            let deg = exps.0[var_index];
            let pure = exps.0.iter().enumerate().all(|(i, &x)| i == var_index || x == 0);
            if !pure || deg > k {
                return Err(Error::InvarianceViolation(format!(
                    "image of v^{p} contains {}",
                    Polynomial::monomial(d, exps.clone(), c.clone())
                )));
            }
            *matrix.at_mut(deg as usize, p as usize) = c.clone();
        }
    }
    let cp = charpoly(&matrix);
    Ok(QesBlock { k, var_index, matrix, charpoly: cp })
}

/// Structural ansatz for the commutant search: a second-order operator
/// `f = Σ_{i≤j} f_ij ∂²_ij + Σ_i g_i ∂_i` with per-coefficient total-degree
/// bounds and forced structural zeros. Zeroth-order terms are excluded
/// (constants commute trivially).
#[derive(Clone, Debug)]
pub struct CommutantAnsatz {
    pub second_order_degree: u32,
    pub first_order_degree: u32,
    /// Variables `v`: force `f_vj = 0` for all `j`.
    pub zero_second_rows: Vec<usize>,
    /// Variables `v`: force `g_v = 0`.
    pub zero_first: Vec<usize>,
}

/// Basis of the solution space of `[h, f] = 0` within the ansatz.
#[derive(Clone, Debug)]
pub struct CommutantResult {
    pub basis: Vec<DiffOp>,
    pub ansatz_size: usize,
}

/// Exact linear solve for all second-order operators commuting with `h`
/// within the ansatz. An empty basis is a finding, not an error.
pub fn commutant_search(h: &DiffOp, ansatz: &CommutantAnsatz) -> Result<CommutantResult> {
    let d = h.dim();
    let mut candidates: Vec<DiffOp> = Vec::new();
    let all = CharacteristicVector::ones(d);
    let second_monoms = enumerate_basis(d, &all, ansatz.second_order_degree as u64)?;
    let first_monoms = enumerate_basis(d, &all, ansatz.first_order_degree as u64)?;
    for i in 0..d {
        if ansatz.zero_second_rows.contains(&i) {
            continue;
        }
        for j in i..d {
            if ansatz.zero_second_rows.contains(&j) {
                continue;
            }
            for m in 0..second_monoms.len() {
                candidates.push(DiffOp::term(
                    second_monoms.monomial_poly(m),
                    DerivativeIndex::second(d, i, j),
                ));
            }
        }
    }
    for i in 0..d {
        if ansatz.zero_first.contains(&i) {
            continue;
        }
        for m in 0..first_monoms.len() {
            candidates.push(DiffOp::term(
                first_monoms.monomial_poly(m),
                DerivativeIndex::unit(d, i),
            ));
        }
    }
    // [h, Σ c_α e_α] = Σ c_α [h, e_α] = 0: exact nullspace over the slots
    let brackets: Vec<DiffOp> = candidates
        .iter()
        .map(|e| diffop_commutator(h, e))
        .collect::<Result<_>>()?;
    let mut slots = std::collections::BTreeSet::new();
    for b in &brackets {
        for (didx, poly) in b.terms() {
            for (e, _) in poly.terms() {
                slots.insert((didx.clone(), e.clone()));
            }
        }
    }
    let slots: Vec<_> = slots.into_iter().collect();
    let index: BTreeMap<_, usize> = slots.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let mat = {
        let mut m = RatMat::zeros(slots.len(), candidates.len());
        for (j, b) in brackets.iter().enumerate() {
            for (didx, poly) in b.terms() {
                for (e, c) in poly.terms() {
                    let i = index[&(didx.clone(), e.clone())];
                    *m.at_mut(i, j) = c.clone();
                }
            }
        }
        m
    };
    let mut basis = Vec::new();
    for v in mat.nullspace() {
        let mut op = DiffOp::zero(d);
        for (j, c) in v.iter().enumerate() {
            if !c.is_zero() {
                op = &op + &candidates[j].scale(c);
            }
        }
        if !op.is_zero() {
            basis.push(op);
        }
    }
    Ok(CommutantResult { basis, ansatz_size: candidates.len() })
}

// ---------------------------------------------------------------------------
// Report serialization.
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct EigenReportEntry {
    pub value: String,
    pub multiplicity: usize,
}

#[derive(Serialize)]
pub struct EigenReport {
    pub basis_dimension: usize,
    pub eigenvalues: Vec<EigenReportEntry>,
    pub irrational_blocks: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenfunctions: Option<Vec<EigenfunctionEntry>>,
}

#[derive(Serialize)]
pub struct EigenfunctionEntry {
    pub value: String,
    pub functions: Vec<String>,
}

impl EigenResult {
    pub fn to_report(&self) -> EigenReport {
        EigenReport {
            basis_dimension: self.basis_dimension,
            eigenvalues: self
                .eigenvalues
                .iter()
                .map(|(v, m)| EigenReportEntry { value: v.to_string(), multiplicity: *m })
                .collect(),
            irrational_blocks: self
                .irrational_blocks
                .iter()
                .map(|p| p.iter().map(|c| c.to_string()).collect())
                .collect(),
            eigenfunctions: self.eigenfunctions.as_ref().map(|efs| {
                efs.iter()
                    .map(|(v, ps)| EigenfunctionEntry {
                        value: v.to_string(),
                        functions: ps.iter().map(|p| p.to_string()).collect(),
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Serialize)]
pub struct QesBlockReport {
    pub k: u32,
    pub matrix: Vec<Vec<String>>,
    pub charpoly: Vec<String>,
    pub rational_eigenvalues: Vec<String>,
    pub root_brackets: Vec<[String; 2]>,
}

impl QesBlock {
    pub fn to_report(&self, bracket_width: &Rational) -> QesBlockReport {
        let (roots, _) = self.rational_eigenvalues();
        QesBlockReport {
            k: self.k,
            matrix: (0..self.matrix.rows)
                .map(|i| {
                    (0..self.matrix.cols).map(|j| self.matrix.at(i, j).to_string()).collect()
                })
                .collect(),
            charpoly: self.charpoly.iter().map(|c| c.to_string()).collect(),
            rational_eigenvalues: roots.iter().map(|r| r.to_string()).collect(),
            root_brackets: self
                .root_brackets(bracket_width)
                .iter()
                .map(|(a, b)| [a.to_string(), b.to_string()])
                .collect(),
        }
    }
}

/// Verifies an eigenpair exactly: `L P = λ P`.
pub fn verify_eigenpair(l: &DiffOp, p: &Polynomial, lambda: &Rational) -> Result<bool> {
    let image = diffop_apply(l, p)?;
    Ok(image == p.scale(lambda))
}

/// Default bracket width for QES root isolation.
pub fn default_bracket_width() -> Rational {
    rat(1, 1_000_000_000_000)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::diffop_from_str;
    use crate::linalg::poly_eval;
    use crate::models::{build_qes_delta, Model, ModelKind, ModelParams, QesParams};
    use crate::{rat, rat_int};

    fn cal3(omega: i64) -> Model {
        let p = ModelParams {
            omega: rat_int(omega),
            nu: rat(1, 3),
            n_bodies: 3,
            ..Default::default()
        };
        Model::build(ModelKind::Calogero, p).unwrap()
    }

    #[test]
    fn euler_operator_spectrum() {
        // Σ t_i ∂_i on any weighted flag has eigenvalues = total degrees
        let l = diffop_from_str("(t1) d1 + (t2) d2", 2).unwrap();
        let f = CharacteristicVector(vec![1, 2]);
        let res = exact_eigenvalues(&l, &f, 2, true).unwrap();
        // monomials: 1, t1, t1², t2 → Euler degrees 0, 1, 2, 1
        let ms = res.multiset();
        assert_eq!(ms.get(&rat_int(0)), Some(&1));
        assert_eq!(ms.get(&rat_int(1)), Some(&2));
        assert_eq!(ms.get(&rat_int(2)), Some(&1));
        // each eigenfunction verifies exactly
        for (lambda, funcs) in res.eigenfunctions.as_ref().unwrap() {
            for p in funcs {
                assert!(verify_eigenpair(&l, p, lambda).unwrap());
            }
        }
    }

    #[test]
    fn calogero_n3_low_spectrum() {
        // weights (2,3): P2 eigenvalues {0, 4ω, 6ω, 8ω, 10ω, 12ω}, all simple
        let m = cal3(1);
        let res = exact_eigenvalues(&m.op, &m.f, 2, false).unwrap();
        let expect: Vec<(Rational, usize)> =
            [0, 4, 6, 8, 10, 12].iter().map(|&v| (rat_int(v), 1)).collect();
        assert_eq!(res.eigenvalues, expect);
        assert!(res.irrational_blocks.is_empty());
        // first degeneracy at level 12ω: (3,0) and (0,2), visible at n = 3
        let table = degeneracy_table(&m.op, &m.f, 3).unwrap();
        assert_eq!(table.get(&rat_int(12)), Some(&2));
    }

    #[test]
    fn calogero_matches_formula_multiset() {
        let m = cal3(1);
        for n in 0..=5u64 {
            let res = exact_eigenvalues(&m.op, &m.f, n, false).unwrap();
            let mut expected: BTreeMap<Rational, usize> = BTreeMap::new();
            for p2 in 0..=n as u32 {
                for p3 in 0..=(n as u32 - p2) {
                    *expected
                        .entry(m.operator_eigenvalue(&[p2, p3]).unwrap())
                        .or_insert(0) += 1;
                }
            }
            assert_eq!(res.multiset(), expected, "n={n}");
        }
    }

    #[test]
    fn calogero_n2_one_variable_spectrum() {
        // N = 2: one variable in t2, eigenvalues 2ω·2·p = 4ωp
        let p = ModelParams {
            omega: rat_int(1),
            nu: rat(1, 3),
            n_bodies: 2,
            ..Default::default()
        };
        let m = Model::build(ModelKind::Calogero, p).unwrap();
        assert_eq!(m.d, 1);
        let res = exact_eigenvalues(&m.op, &m.f, 4, false).unwrap();
        let expect: Vec<(Rational, usize)> =
            (0..=4i64).map(|k| (rat_int(4 * k), 1)).collect();
        assert_eq!(res.eigenvalues, expect);
    }

    #[test]
    fn eigenfunctions_verify_exactly() {
        let m = cal3(2);
        let res = exact_eigenvalues(&m.op, &m.f, 3, true).unwrap();
        let mut count = 0;
        for (lambda, funcs) in res.eigenfunctions.as_ref().unwrap() {
            assert!(!funcs.is_empty());
            for p in funcs {
                assert!(verify_eigenpair(&m.op, p, lambda).unwrap());
                count += 1;
            }
        }
        assert!(count >= 6);
    }

    #[test]
    fn multisets_scale_linearly_in_omega() {
        // computed spectra at ω = 1 and ω = 3 are related by exact ×3
        let build = |omega: i64| {
            Model::build(
                ModelKind::H3,
                ModelParams { omega: rat_int(omega), nu: rat(1, 3), ..Default::default() },
            )
            .unwrap()
        };
        let m1 = build(1);
        let m3 = build(3);
        let s1 = exact_eigenvalues(&m1.op, &m1.f, 6, false).unwrap();
        let s3 = exact_eigenvalues(&m3.op, &m3.f, 6, false).unwrap();
        let scaled: Vec<(Rational, usize)> = s1
            .eigenvalues
            .iter()
            .map(|(v, m)| (v * rat_int(3), *m))
            .collect();
        assert_eq!(scaled, s3.eigenvalues);
    }

    #[test]
    fn h3_level_five_multiplicity() {
        let m = Model::build(
            ModelKind::H3,
            ModelParams { omega: rat_int(1), nu: rat(1, 3), ..Default::default() },
        )
        .unwrap();
        let res = exact_eigenvalues(&m.op, &m.f, 5, false).unwrap();
        // operator value −2·2ω·5 = −20 from (5,0,0), (2,1,0), (0,0,1)
        assert_eq!(res.multiset().get(&rat_int(-20)), Some(&3));
    }

    #[test]
    fn h4_level_twelve_count() {
        let m = Model::build(
            ModelKind::H4,
            ModelParams { omega: rat_int(1), nu: rat(1, 3), ..Default::default() },
        )
        .unwrap();
        let table = degeneracy_table(&m.op, &m.f, 12).unwrap();
        // ε/2ω = 12: (12,0,0,0), (6,1,0,0), (0,2,0,0), (2,0,1,0) → value −48
        assert_eq!(table.get(&rat_int(-48)), Some(&4));
        // brute-force enumeration agrees
        let mut count = 0;
        for k1 in 0..=12u32 {
            for k2 in 0..=2 {
                for k3 in 0..=1 {
                    for k4 in 0..=1 {
                        let level = k1 + 6 * k2 + 10 * k3 + 15 * k4;
                        let wdeg = k1 + 5 * k2 + 8 * k3 + 12 * k4;
                        if level == 12 && wdeg <= 12 {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(count, 4);
        // level 0 is always simple
        assert_eq!(table.get(&rat_int(0)), Some(&1));
    }

    #[test]
    fn irrational_blocks_counted_toward_dimension() {
        // L = t2 ∂1 + 2 t1 ∂2: the degree-1 quotient block is [[0,2],[1,0]]
        // with characteristic polynomial λ² − 2 (no rational roots)
        let l = diffop_from_str("(t2) d1 + (2*t1) d2", 2).unwrap();
        let f = CharacteristicVector::ones(2);
        let res = exact_eigenvalues(&l, &f, 1, false).unwrap();
        assert_eq!(res.basis_dimension, 3);
        assert_eq!(res.eigenvalues, vec![(rat_int(0), 1)]);
        assert_eq!(res.irrational_blocks.len(), 1);
        // multiplicities plus irrational degrees account for the whole basis
        let rational: usize = res.eigenvalues.iter().map(|(_, m)| m).sum();
        let irrational: usize =
            res.irrational_blocks.iter().map(|p| p.len() - 1).sum();
        assert_eq!(rational + irrational, res.basis_dimension);
        // λ² − 2 exactly
        assert_eq!(res.irrational_blocks[0], vec![rat_int(-2), rat_int(0), rat_int(1)]);
    }

    #[test]
    fn flag_violation_refused_with_witness() {
        let l = diffop_from_str("(t1^2) d1", 1).unwrap();
        let f = CharacteristicVector::ones(1);
        match exact_eigenvalues(&l, &f, 2, false) {
            Err(Error::FlagViolation { .. }) => {}
            other => panic!("expected flag violation, got {other:?}"),
        }
    }

    #[test]
    fn pure_delta_qes_block_charpoly() {
        // k = 1: charpoly (λ − 2ω)² − 16aγ
        let omega = rat_int(1);
        let q = QesParams { a: rat(1, 4), gamma: rat(1, 2), k: 1, var_index: 0 };
        let delta = build_qes_delta(1, &omega, &q).unwrap();
        let block = qes_block(&delta, 0, 1).unwrap();
        // λ² − 4λ + (4 − 2) = λ² − 4λ + 2
        assert_eq!(block.charpoly, vec![rat_int(2), rat_int(-4), rat_int(1)]);
        let brackets = block.root_brackets(&rat(1, 1_000_000));
        assert_eq!(brackets.len(), 2);
        // eigenvalues 2 ± √2: verify the brackets via exact sign change
        for (lo, hi) in &brackets {
            let flo = poly_eval(&block.charpoly, lo);
            let fhi = poly_eval(&block.charpoly, hi);
            assert!(flo.is_zero() || fhi.is_zero() || (flo * fhi) < Rational::zero());
        }
    }

    #[test]
    fn pure_delta_k2_roots_distinct_real() {
        // aγ > 0: the pure-δh block is Jacobi-like, all roots real and
        // distinct; the isolator must return k+1 disjoint brackets
        let omega = rat_int(1);
        let q = QesParams { a: rat(1, 4), gamma: rat(1, 2), k: 2, var_index: 0 };
        let delta = build_qes_delta(1, &omega, &q).unwrap();
        let block = qes_block(&delta, 0, 2).unwrap();
        let brackets = block.root_brackets(&rat(1, 1_000_000));
        assert_eq!(brackets.len(), 3);
        for w in brackets.windows(2) {
            assert!(w[0].1 <= w[1].0, "brackets overlap");
        }
    }

    #[test]
    fn root_brackets_handle_rational_spectra() {
        // a = 0 blocks have exact rational (integer-like) eigenvalues; the
        // bisection isolator must bracket each of them too
        let m = cal3(1);
        let k = 3u32;
        let q = QesParams { a: rat_int(0), gamma: rat(1, 2), k, var_index: 0 };
        let delta = build_qes_delta(m.d, &m.params.omega, &q).unwrap();
        let block = qes_block(&(&m.op + &delta), 0, k).unwrap();
        let brackets = block.root_brackets(&rat(1, 1_000_000));
        assert_eq!(brackets.len(), 4);
        for (p, (lo, hi)) in brackets.iter().enumerate() {
            let expected = rat_int(4 * p as i64 + 2 * k as i64);
            assert!(*lo <= expected && expected <= *hi, "root {expected} not in bracket");
        }
    }

    #[test]
    fn quotient_blocks_are_lower_triangular_in_grading() {
        // flag preservation forces matrix entries (i, j) with
        // wdeg(m_i) > wdeg(m_j) to vanish
        let m = Model::build(
            ModelKind::H3,
            ModelParams { omega: rat_int(1), nu: rat(1, 3), ..Default::default() },
        )
        .unwrap();
        let basis = crate::flags::enumerate_basis(m.d, &m.f, 6).unwrap();
        let mat = crate::flags::matrix_of(&m.op, &basis).unwrap();
        assert!(mat.remainder_empty());
        for j in 0..basis.len() {
            for (i, c) in &mat.columns[j] {
                assert!(
                    basis.weighted_degree(*i) <= basis.weighted_degree(j) || c.is_zero(),
                    "entry ({i},{j}) raises the grading"
                );
            }
        }
    }

    #[test]
    fn qes_block_k0_trivial() {
        let omega = rat_int(1);
        let m = cal3(1);
        let q = QesParams { a: rat(1, 4), gamma: rat(1, 2), k: 0, var_index: 0 };
        let delta = build_qes_delta(m.d, &omega, &q).unwrap();
        let full = &m.op + &delta;
        let block = qes_block(&full, 0, 0).unwrap();
        assert_eq!(block.matrix.at(0, 0), &rat_int(0));
    }

    #[test]
    fn qes_block_a_zero_is_triangular() {
        // a = 0: eigenvalues are the radial diagonal 2ω·i·p + 2ωk of h + δh
        let m = cal3(1);
        let k = 3u32;
        let q = QesParams { a: rat_int(0), gamma: rat(1, 2), k, var_index: 0 };
        let delta = build_qes_delta(m.d, &m.params.omega, &q).unwrap();
        let full = &m.op + &delta;
        let block = qes_block(&full, 0, k).unwrap();
        let (roots, rest) = block.rational_eigenvalues();
        assert_eq!(rest.len(), 1);
        let expected: Vec<Rational> =
            (0..=k as i64).map(|p| rat_int(4 * p + 2 * k as i64)).collect();
        assert_eq!(roots, expected);
    }

    #[test]
    fn qes_invariance_violation_witnessed() {
        let m = cal3(1);
        let q = QesParams { a: rat(1, 4), gamma: rat(1, 2), k: 2, var_index: 0 };
        let delta = build_qes_delta(m.d, &m.params.omega, &q).unwrap();
        let full = &m.op + &delta;
        // the block of size k+2 sees the escape at degree k+1
        match qes_block(&full, 0, 3) {
            Err(Error::InvarianceViolation(msg)) => assert!(msg.contains("t1^4")),
            other => panic!("expected invariance violation, got {other:?}"),
        }
    }

    #[test]
    fn commutant_contains_operator_itself() {
        // one-variable Laguerre h commutes with itself; the ansatz of its own
        // shape must return a nonempty basis of exactly commuting operators
        let h = diffop_from_str("(-2*t1) d1^2 + (2*t1 - 3) d1", 1).unwrap();
        let ansatz = CommutantAnsatz {
            second_order_degree: 1,
            first_order_degree: 1,
            zero_second_rows: vec![],
            zero_first: vec![],
        };
        let res = commutant_search(&h, &ansatz).unwrap();
        assert!(!res.basis.is_empty());
        for f in &res.basis {
            assert!(diffop_commutator(&h, f).unwrap().is_zero());
        }
    }

    #[test]
    fn calogero_radial_integral_found() {
        // structural zeros: radial row and radial first-order coefficient
        let m = cal3(1);
        let ansatz = CommutantAnsatz {
            second_order_degree: 3,
            first_order_degree: 1,
            zero_second_rows: vec![0],
            zero_first: vec![0],
        };
        let res = commutant_search(&m.op, &ansatz).unwrap();
        assert!(!res.basis.is_empty());
        for f in &res.basis {
            assert!(diffop_commutator(&m.op, f).unwrap().is_zero());
        }
        // the angular integral [(4/3)t2³ + 9t3²]∂²_33 + 9(1+2ν)t3 ∂_3 spans
        // the solution space (up to scale)
        let nu = rat(1, 3);
        let c1 = rat_int(9) * (rat_int(1) + nu * rat_int(2));
        let expected = &(&DiffOp::term(
            &Polynomial::var(2, 0).pow(3).scale(&rat(4, 3))
                + &Polynomial::var(2, 1).pow(2).scale(&rat_int(9)),
            DerivativeIndex(vec![0, 2]),
        ) + &DiffOp::first_order(Polynomial::var(2, 1).scale(&c1), 1))
            .clone();
        assert!(diffop_commutator(&m.op, &expected).unwrap().is_zero());
        let found_match = res.basis.iter().any(|f| {
            // proportional to expected?
            let e33 = expected.coefficient(&DerivativeIndex(vec![0, 2]));
            let f33 = f.coefficient(&DerivativeIndex(vec![0, 2]));
            if f33.is_zero() {
                return false;
            }
            // compare f·(leading of e) == e·(leading of f) by cross-scaling
            let le = e33.terms().next().unwrap().1.clone();
            let lf = f33.terms().next().unwrap().1.clone();
            f.scale(&le) == expected.scale(&lf)
        });
        assert!(found_match, "angular integral not in solution basis");
    }
}
