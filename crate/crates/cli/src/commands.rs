//! Subcommand implementations: each consumes a validated `JobSpec` and
//! produces a `Report`.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use rqes_core::algebra::{
    check_invariance, commutation_table, decompose_pol2, g2_generators, g2_iterated_t,
    gl_generators, GeneratorSet,
};
use rqes_core::exactpoly::{diffop_apply, diffop_commutator, Polynomial};
use rqes_core::flags::{enumerate_basis, flag_preserved, CharacteristicVector};
use rqes_core::models::{
    build_qes_delta, Model, ModelKind, ModelParams, QesParams,
};
use rqes_core::spectra::{
    commutant_search, default_bracket_width, exact_eigenvalues, qes_block, CommutantAnsatz,
};
use rqes_core::xcheck::{
    e0_probe, gauge_residual, invariants_eval, sample_points, sample_points_qes, CartesianModel,
    QesCartesian,
};
use rqes_core::{rational_from_str, Rational};

use crate::report::{JobSpec, Report, Verdict, SCHEMA_VERSION};

fn parse_rational(field: &Option<String>, default: i64) -> Result<Rational> {
    match field {
        Some(s) => rational_from_str(s).map_err(|e| anyhow!("{e}")),
        None => Ok(Rational::from_integer(default.into())),
    }
}

fn model_from_job(job: &JobSpec) -> Result<Model> {
    let name = job.model.as_deref().context("--model is required")?;
    let kind = ModelKind::parse(name).map_err(|e| anyhow!("{e}"))?;
    let n_default = match kind {
        ModelKind::Bcn => 2,
        _ => 3,
    };
    let params = ModelParams {
        omega: parse_rational(&job.omega, 1)?,
        nu: parse_rational(&job.nu, 0)?,
        nu2: parse_rational(&job.nu2, 0)?,
        mu: parse_rational(&job.mu, 0)?,
        n_bodies: job.n_bodies.unwrap_or(n_default),
    };
    Model::build(kind, params).map_err(|e| anyhow!("{e}"))
}

fn degree_from_job(job: &JobSpec, model: &Model) -> Result<u64> {
    match job.degree {
        Some(d) if d < 0 => bail!("--degree must be non-negative, got {d}"),
        Some(d) => Ok(d as u64),
        None => Ok(model.default_degree),
    }
}

fn report(job: &JobSpec, verdict: Verdict, result: Value) -> Report {
    Report { schema_version: SCHEMA_VERSION, job: job.clone(), verdict, timing_ms: None, result }
}

/// `spectrum`: exact eigenvalues vs the registered linear form.
pub fn spectrum(job: &JobSpec) -> Result<Report> {
    let model = model_from_job(job)?;
    let degree = degree_from_job(job, &model)?;
    let want_funcs = job.eigenfunctions.unwrap_or(false);
    // a flag violation is a verification failure, not bad input
    let flag = flag_preserved(&model.op, &model.f, degree).map_err(|e| anyhow!("{e}"))?;
    if !flag.preserved {
        let result = json!({
            "model": model.kind.name(),
            "degree": degree,
            "flag_violation": serde_json::to_value(&flag)?,
        });
        return Ok(report(job, Verdict::Fail, result));
    }
    let res = exact_eigenvalues(&model.op, &model.f, degree, want_funcs)
        .map_err(|e| anyhow!("{e}"))?;
    // expected multiset from the spectrum linear form over the flag
    let basis = enumerate_basis(model.d, &model.f, degree).map_err(|e| anyhow!("{e}"))?;
    let mut expected: BTreeMap<Rational, usize> = BTreeMap::new();
    for i in 0..basis.len() {
        let p: Vec<u32> = basis.monomial(i).0.clone();
        *expected
            .entry(model.operator_eigenvalue(&p).map_err(|e| anyhow!("{e}"))?)
            .or_insert(0) += 1;
    }
    let matches = res.multiset() == expected;
    let degeneracies: Vec<Value> = res
        .eigenvalues
        .iter()
        .map(|(v, m)| json!({"value": v.to_string(), "multiplicity": m}))
        .collect();
    let result = json!({
        "model": model.kind.name(),
        "degree": degree,
        "variables": model.var_names(),
        "spectrum": serde_json::to_value(res.to_report())?,
        "degeneracy_table": degeneracies,
        "formula_weights": model.eps_weights,
        "operator_eps_factor": model.operator_eps_factor,
        "matches_linear_form": matches,
    });
    Ok(report(job, if matches { Verdict::Pass } else { Verdict::Fail }, result))
}

/// `flag-check`: preservation of the registered characteristic vector.
pub fn flag_check(job: &JobSpec) -> Result<Report> {
    let model = model_from_job(job)?;
    let degree = degree_from_job(job, &model)?;
    let rep = flag_preserved(&model.op, &model.f, degree).map_err(|e| anyhow!("{e}"))?;
    let verdict = if rep.preserved { Verdict::Pass } else { Verdict::Fail };
    let result = json!({
        "model": model.kind.name(),
        "characteristic_vector": model.f.0,
        "report": serde_json::to_value(&rep)?,
    });
    Ok(report(job, verdict, result))
}

/// `qes`: finite invariant block of `h + δh`, characteristic polynomial,
/// root brackets, and the degree-(k+1) escape witness.
pub fn qes(job: &JobSpec) -> Result<Report> {
    let model = model_from_job(job)?;
    let q = QesParams {
        a: parse_rational(&job.a, 0)?,
        gamma: parse_rational(&job.gamma, 0)?,
        k: job.k.unwrap_or(1),
        var_index: model.radial_var(),
    };
    let delta = build_qes_delta(model.d, &model.params.omega, &q).map_err(|e| anyhow!("{e}"))?;
    let full = &model.op + &delta;
    let block = match qes_block(&full, q.var_index, q.k) {
        Ok(b) => b,
        Err(e) => {
            let result = json!({"model": model.kind.name(), "error": e.to_string()});
            return Ok(report(job, Verdict::Fail, result));
        }
    };
    use num_traits::Zero;
    // escape witness: coefficient of v^{k+2} in the image of v^{k+1}
    let mut e = rqes_core::exactpoly::ExponentVector::zeros(model.d);
    e.0[q.var_index] = q.k + 1;
    let vk1 = Polynomial::monomial(model.d, e, num_traits::One::one());
    let image = diffop_apply(&full, &vk1).map_err(|e| anyhow!("{e}"))?;
    let mut esc = rqes_core::exactpoly::ExponentVector::zeros(model.d);
    esc.0[q.var_index] = q.k + 2;
    let escape_coeff = image.coefficient(&esc);
    let escape_ok = if q.a.is_zero() {
        // at a = 0 the full registered flag stays preserved
        flag_preserved(&full, &model.f, model.default_degree)
            .map_err(|e| anyhow!("{e}"))?
            .preserved
    } else {
        !escape_coeff.is_zero()
    };
    let verdict = if escape_ok { Verdict::Pass } else { Verdict::Fail };
    let result = json!({
        "model": model.kind.name(),
        "radial_variable": model.var_names()[q.var_index],
        "block": serde_json::to_value(block.to_report(&default_bracket_width()))?,
        "escape_coefficient": escape_coeff.to_string(),
        "a_is_zero": q.a.is_zero(),
        "escape_or_flag_ok": escape_ok,
    });
    Ok(report(job, verdict, result))
}

fn generator_set_from_job(job: &JobSpec) -> Result<GeneratorSet> {
    let set = job.set.as_deref().unwrap_or("gl");
    let mark = Rational::from_integer(job.mark.unwrap_or(3).into());
    match set {
        "gl" => {
            let d = job.dim.unwrap_or(2);
            if d == 0 {
                bail!("--dim must be ≥ 1");
            }
            Ok(gl_generators(d, &mark))
        }
        "g2" => Ok(g2_generators(&mark)),
        other => bail!("unknown generator set {other:?} (expected gl or g2)"),
    }
}

/// `algebra`: commutation table, invariance, and the g2 nilpotent triple.
pub fn algebra(job: &JobSpec) -> Result<Report> {
    let set = generator_set_from_job(job)?;
    let is_g2 = set.name == "g2";
    // for g2 the closure statement covers the first-order members only
    let closure_set = if is_g2 {
        GeneratorSet {
            name: "g2-first-order".into(),
            dim: set.dim,
            mark: set.mark.clone(),
            members: set
                .members
                .iter()
                .filter(|g| !g.name.starts_with('T'))
                .cloned()
                .collect(),
        }
    } else {
        set.clone()
    };
    let table = commutation_table(&closure_set).map_err(|e| anyhow!("{e}"))?;
    let degree = match job.mark {
        Some(m) if m >= 0 => m as u64,
        Some(m) => bail!("--mark must be non-negative for invariance checks, got {m}"),
        None => 3,
    };
    let f = if is_g2 {
        CharacteristicVector(vec![1, 2])
    } else {
        CharacteristicVector::ones(set.dim)
    };
    let inv = check_invariance(&set, &f, degree).map_err(|e| anyhow!("{e}"))?;
    let mut ok = table.all_closed && inv.invariant;
    let mut g2_extras = Value::Null;
    if is_g2 {
        let ads = g2_iterated_t(&set, 3).map_err(|e| anyhow!("{e}"))?;
        let t1 = &set.member("T1").unwrap().op;
        let t2 = &set.member("T2").unwrap().op;
        let minus2 = Rational::from_integer((-2).into());
        let two = Rational::from_integer(2.into());
        let closed_form_match = ads[1] == t1.scale(&minus2) && ads[2] == t2.scale(&two);
        let nilpotent = ads[3].is_zero();
        let mut commuting = true;
        for a in ["T0", "T1", "T2"] {
            for b in ["T0", "T1", "T2"] {
                let bracket = diffop_commutator(
                    &set.member(a).unwrap().op,
                    &set.member(b).unwrap().op,
                )
                .map_err(|e| anyhow!("{e}"))?;
                commuting &= bracket.is_zero();
            }
        }
        ok = ok && closed_form_match && nilpotent && commuting;
        g2_extras = json!({
            "t_closed_form_match": closed_form_match,
            "t_iterated_scalars": ["-2", "2"],
            "t_nilpotent_beyond_order_2": nilpotent,
            "t_pairwise_commuting": commuting,
        });
    }
    let result = json!({
        "set": set.name,
        "members": set.members.iter().map(|g| g.name.clone()).collect::<Vec<_>>(),
        "closure": serde_json::to_value(&table)?,
        "invariance": serde_json::to_value(&inv)?,
        "g2_checks": g2_extras,
    });
    Ok(report(job, if ok { Verdict::Pass } else { Verdict::Fail }, result))
}

/// `decompose`: Pol₂ decomposition of a model Hamiltonian over its hidden
/// algebra generators.
pub fn decompose(job: &JobSpec) -> Result<Report> {
    let model = model_from_job(job)?;
    let zero = Rational::from_integer(0.into());
    let set = match model.kind {
        ModelKind::G2 => {
            let full = g2_generators(&zero);
            GeneratorSet {
                name: "g2-quartet".into(),
                dim: 2,
                mark: zero,
                members: ["J1", "J2", "J3", "R2"]
                    .iter()
                    .map(|n| full.member(n).unwrap().clone())
                    .collect(),
            }
        }
        _ => gl_generators(model.d, &zero),
    };
    let dec = decompose_pol2(&model.op, &set).map_err(|e| anyhow!("{e}"))?;
    let pairs: Vec<Value> = dec
        .pair_coeffs
        .iter()
        .map(|((a, b), c)| {
            json!({
                "left": dec.basis_names[*a],
                "right": dec.basis_names[*b],
                "coefficient": c.to_string(),
            })
        })
        .collect();
    let singles: Vec<Value> = dec
        .single_coeffs
        .iter()
        .map(|(a, c)| json!({"generator": dec.basis_names[*a], "coefficient": c.to_string()}))
        .collect();
    let verdict = if dec.is_exact() { Verdict::Pass } else { Verdict::Fail };
    let result = json!({
        "model": model.kind.name(),
        "set": set.name,
        "pair_terms": pairs,
        "single_terms": singles,
        "constant": dec.constant.to_string(),
        "residual": dec.residual.to_string(),
        "exact": dec.is_exact(),
        "solution_space_dimension": dec.solution_dim,
    });
    Ok(report(job, verdict, result))
}

/// `commutant`: basis of second-order operators commuting with the model
/// Hamiltonian within the structural ansatz.
pub fn commutant(job: &JobSpec) -> Result<Report> {
    let model = model_from_job(job)?;
    let ansatz = CommutantAnsatz {
        second_order_degree: job.max_coeff_degree.unwrap_or(2),
        first_order_degree: job.first_order_degree.unwrap_or(
            job.max_coeff_degree.unwrap_or(2).saturating_sub(1).max(1),
        ),
        zero_second_rows: if job.zero_radial.unwrap_or(false) {
            vec![model.radial_var()]
        } else {
            vec![]
        },
        zero_first: if job.zero_radial.unwrap_or(false) {
            vec![model.radial_var()]
        } else {
            vec![]
        },
    };
    let res = commutant_search(&model.op, &ansatz).map_err(|e| anyhow!("{e}"))?;
    let mut all_commute = true;
    for f in &res.basis {
        all_commute &= diffop_commutator(&model.op, f)
            .map_err(|e| anyhow!("{e}"))?
            .is_zero();
    }
    let verdict = if !all_commute {
        Verdict::Fail
    } else if res.basis.is_empty() {
        Verdict::Info
    } else {
        Verdict::Pass
    };
    let result = json!({
        "model": model.kind.name(),
        "ansatz_size": res.ansatz_size,
        "second_order_degree": ansatz.second_order_degree,
        "first_order_degree": ansatz.first_order_degree,
        "zero_radial": job.zero_radial.unwrap_or(false),
        "solution_dimension": res.basis.len(),
        "basis": res.basis.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "all_commute_exactly": all_commute,
    });
    Ok(report(job, verdict, result))
}

/// `xcheck`: numeric Cartesian cross-checks.
pub fn xcheck(job: &JobSpec) -> Result<Report> {
    let model = model_from_job(job)?;
    let tau2_hom = job.tau2_homogeneous.unwrap_or(false);
    let cart = CartesianModel::new(model.kind, &model.params, tau2_hom)
        .map_err(|e| anyhow!("{e}"))?;
    let seed = job.seed.unwrap_or(1);
    let count = job.points.unwrap_or(5).max(3);
    let points = sample_points(&cart, count, seed);
    let check = job.check.as_deref().unwrap_or("all");
    let mut pass = true;
    let mut result = serde_json::Map::new();
    result.insert("model".into(), json!(model.kind.name()));
    result.insert("seed".into(), json!(seed));
    result.insert(
        "points".into(),
        serde_json::to_value(&points).context("points serialize")?,
    );

    if check == "e0" || check == "all" {
        let probe = e0_probe(&cart, &points).map_err(|e| anyhow!("{e}"))?;
        let ok = probe.max_relative_spread <= 1e-8;
        pass &= ok;
        result.insert(
            "e0".into(),
            json!({
                "mean": probe.mean,
                "closed_form": probe.closed_form,
                "max_relative_spread": probe.max_relative_spread,
                "pass": ok,
            }),
        );
    }

    if check == "invariants" || check == "all" {
        let rows: Vec<Value> = points
            .iter()
            .map(|p| {
                let t = invariants_eval(&cart, &p.coords);
                json!({"point": p.index, "values": t})
            })
            .collect();
        let mut tau1_ok = true;
        if model.kind == ModelKind::H3 {
            for p in &points {
                let t = invariants_eval(&cart, &p.coords);
                let r2: f64 = p.coords.iter().map(|c| c * c).sum();
                tau1_ok &= (t[0] - r2).abs() <= 1e-12 * r2.max(1.0);
            }
            pass &= tau1_ok;
        }
        result.insert("invariants".into(), json!({"rows": rows, "tau1_is_r2": tau1_ok}));
    }

    if check == "gauge" || check == "all" {
        let wdeg_max = job.wdeg_max.unwrap_or(if model.kind == ModelKind::H3 { 2 } else { 3 });
        let basis = enumerate_basis(model.d, &model.f, wdeg_max).map_err(|e| anyhow!("{e}"))?;
        let mut rows = Vec::new();
        let mut max_all: f64 = 0.0;
        for i in 0..basis.len() {
            let p = basis.monomial_poly(i);
            let image = diffop_apply(&model.op, &p).map_err(|e| anyhow!("{e}"))?;
            let (_, max) = gauge_residual(&cart, &p, &image, &model.gauge_scale, &points)
                .map_err(|e| anyhow!("{e}"))?;
            max_all = max_all.max(max);
            rows.push(json!({"monomial": p.to_string(), "max_residual": max}));
        }
        let ok = max_all <= 1e-9;
        pass &= ok;
        result.insert(
            "gauge".into(),
            json!({"wdeg_max": wdeg_max, "rows": rows, "max_residual": max_all, "pass": ok}),
        );
        if model.kind == ModelKind::H3 {
            // adjudicate the degree-6 invariant reading on τ2
            let tau2 = Polynomial::var(3, 1);
            let image = diffop_apply(&model.op, &tau2).map_err(|e| anyhow!("{e}"))?;
            let mut verdicts = Vec::new();
            for hom in [false, true] {
                let c = CartesianModel::new(ModelKind::H3, &model.params, hom)
                    .map_err(|e| anyhow!("{e}"))?;
                let pts = sample_points(&c, count, seed);
                let (_, max) = gauge_residual(&c, &tau2, &image, &model.gauge_scale, &pts)
                    .map_err(|e| anyhow!("{e}"))?;
                verdicts.push((hom, max));
            }
            let chosen = verdicts
                .iter()
                .filter(|(_, m)| *m <= 1e-9)
                .map(|(h, _)| if *h { "homogeneous" } else { "as_printed" })
                .collect::<Vec<_>>();
            result.insert(
                "tau2_interpretation".into(),
                json!({
                    "used": if tau2_hom { "homogeneous" } else { "as_printed" },
                    "residual_as_printed": verdicts[0].1,
                    "residual_homogeneous": verdicts[1].1,
                    "consistent_reading": chosen,
                }),
            );
        }
    }

    if (check == "qes" || check == "all") && model.kind == ModelKind::Calogero {
        let q = QesParams {
            a: parse_rational(&job.a, 0)?,
            gamma: parse_rational(&job.gamma, 0)?,
            k: job.k.unwrap_or(1),
            var_index: model.radial_var(),
        };
        use num_traits::ToPrimitive;
        let delta =
            build_qes_delta(model.d, &model.params.omega, &q).map_err(|e| anyhow!("{e}"))?;
        let full = &model.op + &delta;
        let block = qes_block(&full, q.var_index, q.k).map_err(|e| anyhow!("{e}"))?;
        let brackets = block.root_brackets(&default_bracket_width());
        let (lo, hi) = brackets
            .first()
            .context("QES block has no real eigenvalue bracket")?;
        let lambda = (lo.to_f64().unwrap() + hi.to_f64().unwrap()) / 2.0;
        // eigenvector of the lowest root from the block (small dense solve)
        let radial = qes_eigencolumn(&block.matrix, lambda);
        let qc = QesCartesian {
            model: cart.clone(),
            a: parse_rational(&job.a, 0)?.to_f64().unwrap(),
            gamma: parse_rational(&job.gamma, 0)?.to_f64().unwrap(),
            k: q.k,
            r4_scale: 1.0,
        };
        let pts = sample_points_qes(&qc, &radial, count, seed);
        let (rows, max) = qc.residual(lambda, &radial, &pts);
        let ok = max <= 1e-7;
        pass &= ok;
        result.insert(
            "qes".into(),
            json!({
                "k": q.k,
                "eigenvalue_bracket_mid": lambda,
                "residuals": rows,
                "max_residual": max,
                "pass": ok,
            }),
        );
    }

    let verdict = if pass { Verdict::Pass } else { Verdict::Fail };
    Ok(report(job, verdict, Value::Object(result)))
}

/// Numeric null vector of `(M − λI)` for a small block.
fn qes_eigencolumn(m: &rqes_core::linalg::RatMat, lambda: f64) -> Vec<f64> {
    use num_traits::ToPrimitive;
    let n = m.rows;
    let mut a = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = m.at(i, j).to_f64().unwrap();
        }
        a[i][i] -= lambda;
    }
    // Gaussian elimination with partial pivoting, last free variable = 1
    let mut v = vec![0.0f64; n];
    v[n - 1] = 1.0;
    let mut rows: Vec<usize> = (0..n).collect();
    for col in 0..n - 1 {
        let piv = (col..n)
            .max_by(|&p, &q| {
                a[rows[p]][col].abs().partial_cmp(&a[rows[q]][col].abs()).unwrap()
            })
            .unwrap();
        rows.swap(col, piv);
        for r in col + 1..n {
            let f = a[rows[r]][col] / a[rows[col]][col];
            for c in col..n {
                a[rows[r]][c] -= f * a[rows[col]][c];
            }
        }
    }
    for col in (0..n - 1).rev() {
        let mut s = 0.0;
        for c in col + 1..n {
            s += a[rows[col]][c] * v[c];
        }
        v[col] = -s / a[rows[col]][col];
    }
    v
}

/// Simple operator parade used by `run`: applies a model to a polynomial.
pub fn run(job: &JobSpec) -> Result<Report> {
    match job.subcommand.as_str() {
        "spectrum" => spectrum(job),
        "flag-check" => flag_check(job),
        "qes" => qes(job),
        "algebra" => algebra(job),
        "decompose" => decompose(job),
        "commutant" => commutant(job),
        "xcheck" => xcheck(job),
        other => bail!("unknown subcommand {other:?}"),
    }
}
