//! The five experiment commands. Each is a pure function of
//! (config, seed) producing a `ReportEnvelope`; all file IO happens in the
//! caller.

use num_complex::Complex64;
use serde_json::Value;

use torsym_core::catalog::{build_catalog_symbol, catalog_entry};
use torsym_core::expr::parse_symbol_spec;
use torsym_core::fit::{GrowthFit, Verdict};
use torsym_core::index::multi_indices_upto;
use torsym_core::lattice::LatticeSum;
use torsym_core::lbeta::{
    bbeta_build, bound_chain_check, factorial_shift_check, mu_constant, recover_symbol,
};
use torsym_core::orbit::{orbit_derivative_check, orbit_growth_table, taylor_remainder_check};
use torsym_core::quantize::{norm_bound_check, to_matrix};
use torsym_core::rng::SplitMix64;
use torsym_core::symbol::{
    analyticity_fit, build_symbol, order_test, AnalyticityOptions, OrderTestOptions,
};
use torsym_core::{DiscreteSymbol, MultiIndex, TorusGrid, TruncatedOperator};

use crate::config::ExperimentConfig;
use crate::report::{num, obj, ReportEnvelope, Status};

/// A config that parsed but fails a command-specific precondition; mapped
/// to the usage/config exit code.
#[derive(Debug, thiserror::Error)]
#[error("config precondition: {0}")]
pub struct Precondition(pub String);

fn build_from_config(config: &ExperimentConfig, seed: u64) -> anyhow::Result<DiscreteSymbol> {
    let grid = TorusGrid::new(config.dimension, config.grid_points)?;
    if let Some(name) = &config.catalog {
        Ok(build_catalog_symbol(name, grid, config.symbol_cutoff, seed)?)
    } else {
        let expr = config.expression.as_deref().expect("validated: catalog xor expression");
        let spec = parse_symbol_spec(expr)?;
        Ok(build_symbol(&spec, grid, config.symbol_cutoff)?)
    }
}

fn alpha_value(alpha: &MultiIndex) -> Value {
    Value::Array(alpha.components().iter().map(|&a| Value::from(a)).collect())
}

fn growth_fit_value(fit: &GrowthFit) -> Value {
    obj(vec![
        ("a_max", Value::from(fit.a_max)),
        ("c_star", num(fit.c_star)),
        ("degree_max", Value::Array(fit.degree_max.iter().map(|&d| num(d)).collect())),
        ("plateau_slope", num(fit.plateau_slope)),
        ("verdict", Value::String(fit.verdict.as_str().into())),
        (
            "entries",
            Value::Array(
                fit.entries
                    .iter()
                    .map(|e| {
                        obj(vec![
                            ("alpha", alpha_value(&e.alpha)),
                            ("magnitude", num(e.magnitude)),
                            ("c_alpha", num(e.c_alpha)),
                        ])
                    })
                    .collect(),
            ),
        ),
        (
            "options",
            obj(vec![
                ("slope_tol", num(fit.options.slope_tol)),
                ("growth_tol", num(fit.options.growth_tol)),
            ]),
        ),
    ])
}

fn lattice_sum_value(s: &LatticeSum) -> Value {
    obj(vec![
        ("value", num(s.value)),
        ("partial", num(s.partial)),
        ("tail_estimate", num(s.tail_estimate)),
        ("tail_error_bound", num(s.tail_error_bound)),
        ("box_radius", Value::from(s.box_radius)),
    ])
}

/// Order test, symbol-side analyticity fit, orbit-side growth table, and
/// the consistency flag between the two verdicts.
pub fn cmd_classify(config: &ExperimentConfig, seed: u64) -> anyhow::Result<ReportEnvelope> {
    let s = build_from_config(config, seed)?;
    let alphas = multi_indices_upto(config.dimension, 4.min(config.a_max));
    let order = order_test(&s, 0.0, &alphas, OrderTestOptions::default())?;
    let sym = analyticity_fit(&s, config.a_max, AnalyticityOptions::default())?;
    let orb = orbit_growth_table(
        &s,
        config.a_max,
        config.matrix_cutoff,
        AnalyticityOptions::default().fit,
        seed,
    )?;
    let consistent = sym.fit.verdict == orb.fit.verdict;
    let conclusive = sym.fit.verdict != Verdict::Inconclusive && orb.fit.verdict != Verdict::Inconclusive;
    let status = if consistent && conclusive { Status::Pass } else { Status::Finding };

    let expected = config
        .catalog
        .as_deref()
        .and_then(|name| catalog_entry(name, config.dimension).ok())
        .map(|e| Value::Bool(e.uniformly_analytic))
        .unwrap_or(Value::Null);

    let mut csv_rows = Vec::new();
    for (se, oe) in sym.fit.entries.iter().zip(&orb.fit.entries) {
        csv_rows.push(vec![
            format!("\"{}\"", se.alpha),
            crate::report::format_f64(se.magnitude),
            crate::report::format_f64(se.c_alpha),
            crate::report::format_f64(oe.magnitude),
            crate::report::format_f64(oe.c_alpha),
        ]);
    }

    let records = obj(vec![
        (
            "order_test",
            obj(vec![
                ("order_m", num(order.order_m)),
                ("max_ratio", num(order.max_ratio)),
                ("witness_alpha", alpha_value(&order.witness_alpha)),
                ("bounded", Value::Bool(order.bounded)),
                ("j_growth_factor", num(order.j_growth_factor)),
                ("growing_in_j", Value::Bool(order.growing_in_j)),
            ]),
        ),
        ("symbol_fit", growth_fit_value(&sym.fit)),
        ("orbit_fit", growth_fit_value(&orb.fit)),
        ("orbit_max_norm_residual", num(orb.max_norm_residual)),
        ("symbol_verdict", Value::String(sym.fit.verdict.as_str().into())),
        ("orbit_verdict", Value::String(orb.fit.verdict.as_str().into())),
        ("consistent", Value::Bool(consistent)),
        ("expected_uniformly_analytic", expected),
    ]);

    Ok(ReportEnvelope {
        command: "classify".into(),
        config: config.clone(),
        seed,
        records,
        status,
        csv_header: vec!["alpha", "symbol_magnitude", "symbol_c_alpha", "orbit_magnitude", "orbit_c_alpha"],
        csv_rows,
        matrix: None,
    })
}

/// The truncated-norm bound for each requested smoothing exponent `p`.
pub fn cmd_norms(config: &ExperimentConfig, seed: u64) -> anyhow::Result<ReportEnvelope> {
    for &p in &config.p_values {
        if 2 * p as usize <= config.dimension {
            return Err(Precondition(format!(
                "p_values: need p > n/2, got p = {p} with n = {}",
                config.dimension
            ))
            .into());
        }
    }
    let s = build_from_config(config, seed)?;
    let mut status = Status::Pass;
    let mut entries = Vec::new();
    let mut csv_rows = Vec::new();
    for &p in &config.p_values {
        let rec = norm_bound_check(&s, p, config.matrix_cutoff, config.tolerances.norm, seed)?;
        if rec.slack < -1e-8 {
            status = status.merge(Status::Fail);
        }
        csv_rows.push(vec![
            p.to_string(),
            crate::report::format_f64(rec.c_p.value),
            crate::report::format_f64(rec.sup_term),
            crate::report::format_f64(rec.bound),
            crate::report::format_f64(rec.measured),
            crate::report::format_f64(rec.slack),
        ]);
        entries.push(obj(vec![
            ("p", Value::from(rec.p)),
            ("matrix_cutoff", Value::from(rec.matrix_cutoff)),
            ("c_p", lattice_sum_value(&rec.c_p)),
            ("sup_term", num(rec.sup_term)),
            ("bound", num(rec.bound)),
            ("measured", num(rec.measured)),
            ("measured_residual", num(rec.measured_residual)),
            ("slack", num(rec.slack)),
        ]));
    }
    Ok(ReportEnvelope {
        command: "norms".into(),
        config: config.clone(),
        seed,
        records: obj(vec![("bounds", Value::Array(entries))]),
        status,
        csv_header: vec!["p", "c_p", "sup_term", "bound", "measured", "slack"],
        csv_rows,
        matrix: None,
    })
}

/// Finite-difference orbit derivative checks with Richardson ratios, plus
/// Taylor-remainder decay curves.
pub fn cmd_orbit(config: &ExperimentConfig, seed: u64) -> anyhow::Result<ReportEnvelope> {
    let s = build_from_config(config, seed)?;
    let n = config.dimension;
    let k_cut = config.matrix_cutoff;
    let mut rng = SplitMix64::new(seed);
    let y: Vec<f64> = (0..n).map(|_| core::f64::consts::PI * rng.next_sym()).collect();

    let alphas: Vec<MultiIndex> = multi_indices_upto(n, 2)
        .into_iter()
        .filter(|a| a.order() >= 1)
        .collect();
    let (h1, h2) = (1e-2, 5e-3);
    let mut status = Status::Pass;
    let mut records = Vec::new();
    let mut csv_rows = Vec::new();
    for alpha in &alphas {
        let r1 = orbit_derivative_check(&s, alpha, &y, h1, k_cut, seed)?;
        let r2 = orbit_derivative_check(&s, alpha, &y, h2, k_cut, seed)?;
        let scale = r1.exact_norm.max(1.0);
        let flat = r1.identity_error <= config.tolerances.identity * scale
            && r2.identity_error <= config.tolerances.identity * scale;
        let ratio = if r2.identity_error > 0.0 { r1.identity_error / r2.identity_error } else { 0.0 };
        let ratio_ok = (12.0..=20.0).contains(&ratio);
        if !(flat || ratio_ok) {
            status = Status::Finding;
        }
        for r in [&r1, &r2] {
            csv_rows.push(vec![
                format!("\"{}\"", r.alpha),
                crate::report::format_f64(r.h),
                crate::report::format_f64(r.fd_norm),
                crate::report::format_f64(r.exact_norm),
                crate::report::format_f64(r.identity_error),
            ]);
        }
        records.push(obj(vec![
            ("alpha", alpha_value(alpha)),
            ("y", Value::Array(y.iter().map(|&v| num(v)).collect())),
            ("h_coarse", num(h1)),
            ("h_fine", num(h2)),
            ("error_coarse", num(r1.identity_error)),
            ("error_fine", num(r2.identity_error)),
            ("exact_norm", num(r1.exact_norm)),
            ("richardson_ratio", num(ratio)),
            ("flat_orbit", Value::Bool(flat)),
            ("order4_confirmed", Value::Bool(flat || ratio_ok)),
        ]));
    }

    let degrees = [2u32, 4, 6];
    let taylor = taylor_remainder_check(&s, &vec![0.0; n], &degrees, 0.1, 4, k_cut, seed)?;
    let records = obj(vec![
        ("derivative_checks", Value::Array(records)),
        (
            "taylor",
            obj(vec![
                ("degrees", Value::Array(taylor.degrees.iter().map(|&d| Value::from(d)).collect())),
                (
                    "max_remainder",
                    Value::Array(taylor.max_remainder.iter().map(|&r| num(r)).collect()),
                ),
                ("radius", num(taylor.radius)),
                ("samples", Value::from(taylor.samples as u64)),
                ("base_norm", num(taylor.base_norm)),
            ]),
        ),
    ]);
    Ok(ReportEnvelope {
        command: "orbit".into(),
        config: config.clone(),
        seed,
        records,
        status,
        csv_header: vec!["alpha", "h", "fd_norm", "exact_norm", "identity_error"],
        csv_rows,
        matrix: None,
    })
}

/// Truncated Neumann series `lambda^{-1} sum_{m<=M} (-A/lambda)^m`.
fn neumann_inverse(a: &TruncatedOperator, lambda: f64, terms: u32) -> anyhow::Result<TruncatedOperator> {
    let id = TruncatedOperator::identity(*a.grid(), a.cutoff());
    let factor = a.scale(Complex64::new(-1.0 / lambda, 0.0));
    let mut sum = id.clone();
    let mut power = id;
    for _ in 0..terms {
        power = power.compose(&factor)?;
        sum = sum.add_scaled(&power, Complex64::new(1.0, 0.0))?;
    }
    Ok(sum.scale(Complex64::new(1.0 / lambda, 0.0)))
}

/// Invert `lambda I + epsilon Op(a)` by dense factorization, extract the
/// inverse's symbol, classify it, and cross-check against the Neumann
/// series with its geometric error bound.
pub fn cmd_invert(config: &ExperimentConfig, seed: u64) -> anyhow::Result<ReportEnvelope> {
    let s = build_from_config(config, seed)?;
    let k_cut = config.matrix_cutoff;
    let lambda = config.lambda;
    let eps = config.epsilon;
    let a = to_matrix(&s, k_cut)?.scale(Complex64::new(eps, 0.0));
    let a_norm = a.norm_estimate(config.tolerances.norm, seed)?;
    // invertibility margin from the measured perturbation norm (the
    // C_p-based bound is far too coarse for diagonally dominant shifts)
    let margin = lambda.abs() - a_norm.value;
    if margin <= 0.0 {
        return Err(Precondition(format!(
            "lambda = {lambda} does not dominate |epsilon Op(a)| ~ {}",
            a_norm.value
        ))
        .into());
    }

    let b = TruncatedOperator::identity(*a.grid(), k_cut)
        .scale(Complex64::new(lambda, 0.0))
        .add_scaled(&a, Complex64::new(1.0, 0.0))?;
    let (inv, pivot_growth) = b.inverse()?;
    let b_norm = b.norm_estimate(config.tolerances.norm, seed)?.value;
    let inv_norm = inv.norm_estimate(config.tolerances.norm, seed)?.value;
    let cond = b_norm * inv_norm;
    if cond > 1e12 {
        anyhow::bail!("matrix is ill-conditioned: cond ~ {cond:.3e} exceeds 1e12");
    }

    let window = k_cut / 2;
    let j_out = k_cut - window;
    let inv_symbol = inv.extract_symbol_windowed(j_out, window)?;
    let fit = analyticity_fit(&inv_symbol, config.a_max, AnalyticityOptions::default())?;

    let terms = 12u32;
    let r = a_norm.value / lambda.abs();
    let neumann = neumann_inverse(&a, lambda, terms)?;
    let neumann_error = inv.sub(&neumann)?.norm_estimate(config.tolerances.norm, seed)?.value;
    let neumann_bound = r.powi(terms as i32 + 1) / (lambda.abs() * (1.0 - r));
    let neumann_ok = neumann_error <= neumann_bound * (1.0 + 1e-6) + 1e-12;

    let status = if !neumann_ok {
        Status::Fail
    } else if fit.fit.verdict == Verdict::UniformlyAnalytic {
        Status::Pass
    } else {
        Status::Finding
    };

    let csv_rows = fit
        .fit
        .entries
        .iter()
        .map(|e| {
            vec![
                format!("\"{}\"", e.alpha),
                crate::report::format_f64(e.magnitude),
                crate::report::format_f64(e.c_alpha),
            ]
        })
        .collect();

    let records = obj(vec![
        ("lambda", num(lambda)),
        ("epsilon", num(eps)),
        ("perturbation_norm", num(a_norm.value)),
        ("perturbation_norm_residual", num(a_norm.residual)),
        ("invertibility_margin", num(margin)),
        ("condition_number", num(cond)),
        ("pivot_growth", num(pivot_growth)),
        ("extraction_cutoff", Value::from(j_out)),
        ("extraction_window", Value::from(window)),
        ("inverse_symbol_fit", growth_fit_value(&fit.fit)),
        (
            "neumann",
            obj(vec![
                ("terms", Value::from(terms)),
                ("contraction_ratio", num(r)),
                ("error", num(neumann_error)),
                ("error_bound", num(neumann_bound)),
                ("within_bound", Value::Bool(neumann_ok)),
            ]),
        ),
    ]);

    Ok(ReportEnvelope {
        command: "invert".into(),
        config: config.clone(),
        seed,
        records,
        status,
        csv_header: vec!["alpha", "magnitude", "c_alpha"],
        csv_rows,
        matrix: Some(inv),
    })
}

/// The full converse pipeline: build `B^beta`, extract and undo the
/// multiplier, compare with the original symbol, and tabulate the
/// bound-chain and shifted-factorial certificates.
pub fn cmd_recover(config: &ExperimentConfig, seed: u64) -> anyhow::Result<ReportEnvelope> {
    let beta_components =
        config.beta.clone().unwrap_or_else(|| vec![2; config.dimension]);
    if beta_components.iter().all(|&b| b == 0) {
        return Err(Precondition("beta: must be non-zero for the recovery pipeline".into()).into());
    }
    let beta = MultiIndex::new(beta_components);

    let s = build_from_config(config, seed)?;
    let k_cut = config.matrix_cutoff;
    let window = k_cut / 2;
    let j_out = k_cut - window;

    let bs = bbeta_build(&s, &beta)?;
    let matrix = to_matrix(&bs, k_cut)?;
    let extracted = matrix.extract_symbol_windowed(j_out, window)?;
    let recovered = recover_symbol(&extracted, &beta)?;
    let reference = s.restrict(j_out)?.band_limit_entries(window);
    let mut round_trip = 0.0f64;
    for (j, a) in recovered.iter() {
        let b = reference.entry(j)?;
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            round_trip = round_trip.max((x - y).norm());
        }
    }
    let rt_ok = round_trip <= config.tolerances.round_trip;

    let mut chain_entries = Vec::new();
    let mut csv_rows = Vec::new();
    let mut chains_ok = true;
    for alpha in multi_indices_upto(config.dimension, 6.min(config.a_max)) {
        let rec = bound_chain_check(&s, &alpha, k_cut, seed)?;
        let ok = rec.m_alpha <= rec.bound * (1.0 + 1e-6) + 1e-9;
        chains_ok &= ok;
        csv_rows.push(vec![
            format!("\"{}\"", rec.alpha),
            crate::report::format_f64(rec.b_norm),
            crate::report::format_f64(rec.s_sum.value),
            crate::report::format_f64(rec.bound),
            crate::report::format_f64(rec.m_alpha),
            crate::report::format_f64(rec.slack),
        ]);
        chain_entries.push(obj(vec![
            ("alpha", alpha_value(&rec.alpha)),
            ("beta", alpha_value(&rec.beta)),
            ("window", Value::from(rec.window)),
            ("b_norm", num(rec.b_norm)),
            ("b_norm_residual", num(rec.b_norm_residual)),
            ("s_sum", lattice_sum_value(&rec.s_sum)),
            ("bound", num(rec.bound)),
            ("m_alpha", num(rec.m_alpha)),
            ("slack", num(rec.slack)),
            ("holds", Value::Bool(ok)),
        ]));
    }

    let mut mu_entries = Vec::new();
    let mut mu_ok = true;
    for p in [1u32, 2, 3] {
        let mu = mu_constant(p)?;
        let shift = factorial_shift_check(p, &MultiIndex::new(vec![40; config.dimension]))?;
        mu_ok &= shift.holds;
        mu_entries.push(obj(vec![
            ("p", Value::from(mu.p)),
            ("mu", num(mu.mu)),
            ("maximizer", num(mu.maximizer)),
            ("checked_up_to", Value::from(mu.checked_up_to)),
            ("max_log_violation", num(mu.max_log_violation)),
            ("shift_alpha", alpha_value(&shift.alpha)),
            ("shift_holds", Value::Bool(shift.holds)),
        ]));
    }

    let status = if rt_ok && chains_ok && mu_ok { Status::Pass } else { Status::Fail };
    let records = obj(vec![
        ("beta", alpha_value(&beta)),
        ("extraction_cutoff", Value::from(j_out)),
        ("extraction_window", Value::from(window)),
        ("round_trip_error", num(round_trip)),
        ("round_trip_tolerance", num(config.tolerances.round_trip)),
        ("round_trip_ok", Value::Bool(rt_ok)),
        ("bound_chain", Value::Array(chain_entries)),
        ("mu_constants", Value::Array(mu_entries)),
    ]);

    Ok(ReportEnvelope {
        command: "recover".into(),
        config: config.clone(),
        seed,
        records,
        status,
        csv_header: vec!["alpha", "b_norm", "s_sum", "bound", "m_alpha", "slack"],
        csv_rows,
        matrix: Some(matrix),
    })
}

pub fn run(command: &str, config: &ExperimentConfig, seed: u64) -> anyhow::Result<ReportEnvelope> {
    match command {
        "classify" => cmd_classify(config, seed),
        "norms" => cmd_norms(config, seed),
        "orbit" => cmd_orbit(config, seed),
        "invert" => cmd_invert(config, seed),
        "recover" => cmd_recover(config, seed),
        other => Err(Precondition(format!("unknown command {other}")).into()),
    }
}
