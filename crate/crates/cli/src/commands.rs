//! One function per subcommand; each returns the gating verdicts plus the
//! report document and optional CSV/SVG payloads.

use std::collections::BTreeMap;

use anyhow::{anyhow, Context};
use serde_json::{json, Value};

use emproc::brackets::{
    bracket_inequality_check, bracket_weight, build_partition, verify_brackets,
};
use emproc::chaining::{chaining_bound_check, rio_tail_bound, sup_z_statistic};
use emproc::functionals::{bernoulli_chain_check, RiskParams};
use emproc::harness::{run_experiment, FunctionalSpec, RateReport};
use emproc::mixing::{condition_t3_check, feasibility_window};
use emproc::rng::{derive_seed, SplitMix64};
use emproc::weights::theorem1_integrability;

use crate::config::{ConfigFile, Expectations};
use crate::output::{num, rate_report_value, svg_loglog, verdicts_value};

pub struct Outcome {
    pub verdicts: BTreeMap<String, bool>,
    pub report: Value,
    pub csv: Option<String>,
    pub svg: Option<String>,
}

impl Outcome {
    pub fn all_pass(&self) -> bool {
        self.verdicts.values().all(|&v| v)
    }
}

fn expectation_verdicts(
    report: &RateReport,
    expect: &Option<Expectations>,
    prefix: &str,
) -> BTreeMap<String, bool> {
    let mut verdicts = BTreeMap::new();
    if let Some(exp) = expect {
        if let Some([lo, hi]) = exp.slope_range {
            verdicts.insert(
                format!("{prefix}slope_in_range"),
                report.fitted_slope >= lo && report.fitted_slope <= hi,
            );
        }
        if exp.require_scaled_decreasing {
            verdicts.insert(
                format!("{prefix}scaled_median_decreasing"),
                report.verdicts.get("scaled_median_decreasing").copied().unwrap_or(false),
            );
        }
        if exp.require_scaled_monotone {
            verdicts.insert(
                format!("{prefix}scaled_median_monotone"),
                report.verdicts.get("scaled_median_monotone").copied().unwrap_or(false),
            );
        }
    }
    verdicts
}

pub fn rate(cfg: &ConfigFile, want_svg: bool) -> anyhow::Result<Outcome> {
    let experiment =
        cfg.experiment.as_ref().ok_or_else(|| anyhow!("config has no 'experiment' section"))?;
    let report = run_experiment(experiment).context("experiment failed")?;
    let verdicts = expectation_verdicts(&report, &cfg.expect, "");
    let ns: Vec<usize> = report.per_n.iter().map(|p| p.n).collect();
    let medians: Vec<f64> = report.per_n.iter().map(|p| p.raw.median).collect();
    let svg = want_svg.then(|| svg_loglog(&ns, &medians, "median deviation vs n (log-log)"));
    let mut doc = rate_report_value(&report);
    doc["verdicts"] = verdicts_value(&verdicts);
    println!("rate: fitted slope {:.4} (stderr {:.4})", report.fitted_slope, report.slope_stderr);
    for p in &report.per_n {
        println!(
            "  n = {:>8}: median D = {:.6e}, median n^r D = {:.6e}",
            p.n, p.raw.median, p.scaled.median
        );
    }
    Ok(Outcome { verdicts, report: doc, csv: Some(report.to_csv()), svg })
}

pub fn holder(cfg: &ConfigFile) -> anyhow::Result<Outcome> {
    let hc = cfg.holder.as_ref().ok_or_else(|| anyhow!("config has no 'holder' section"))?;
    let report = emproc::harness::holder_bound_experiment(hc).context("holder experiment failed")?;
    let mut verdicts = BTreeMap::new();
    verdicts.insert("holder_bound_fraction_one".to_string(), report.fraction_held == 1.0);
    println!(
        "holder: C = {:.6}, exact value = {:.6}, fraction held = {} ({} checks, min margin {:.3e})",
        report.constant, report.exact_value, report.fraction_held, report.checks, report.min_margin
    );
    let per_n: Vec<Value> =
        report.per_n_fraction.iter().map(|&(n, f)| json!({"n": n, "fraction": num(f)})).collect();
    let doc = json!({
        "constant": num(report.constant),
        "exact_value": num(report.exact_value),
        "fraction_held": num(report.fraction_held),
        "checks": report.checks,
        "min_margin": num(report.min_margin),
        "per_n": per_n,
        "verdicts": verdicts_value(&verdicts),
    });
    Ok(Outcome { verdicts, report: doc, csv: None, svg: None })
}

pub fn conditions(cfg: &ConfigFile) -> anyhow::Result<Outcome> {
    let cc =
        cfg.conditions.as_ref().ok_or_else(|| anyhow!("config has no 'conditions' section"))?;
    let mut verdicts = BTreeMap::new();
    let mut sections = serde_json::Map::new();

    if let Some(ic) = &cc.integrability {
        let rep = theorem1_integrability(&ic.model, &ic.weight, ic.r)
            .context("integrability check failed")?;
        println!(
            "integrability: {} over {} at r = {} -> {} ({})",
            ic.weight.name(),
            ic.model.name(),
            ic.r,
            if rep.holds { "holds" } else { "fails" },
            rep.detail
        );
        verdicts.insert("integrability_holds".into(), rep.holds);
        sections.insert(
            "integrability".into(),
            json!({
                "holds": rep.holds,
                "integral": rep.integral.map(num),
                "method": format!("{:?}", rep.method),
                "detail": rep.detail,
            }),
        );
    }
    if let Some(tc) = &cc.t3 {
        let rep = condition_t3_check(&tc.rate, &tc.tail, tc.tol)
            .context("log-tail condition check failed")?;
        println!(
            "log-tail condition: {} (integral {})",
            if rep.holds { "holds" } else { "fails" },
            rep.integral
        );
        verdicts.insert("t3_holds".into(), rep.holds);
        sections.insert(
            "t3".into(),
            json!({"holds": rep.holds, "integral": num(rep.integral), "detail": rep.detail}),
        );
    }
    if let Some(fc) = &cc.feasibility {
        let w = feasibility_window(fc.alpha, fc.beta_prime, fc.r)
            .context("feasibility window failed")?;
        match w.mz {
            Some((lo, hi)) => println!("feasibility window (rate r): ({lo}, {hi})"),
            None => println!("feasibility window (rate r): empty (lower endpoint {})", w.lower),
        }
        verdicts.insert("feasibility_nonempty".into(), w.mz.is_some());
        sections.insert(
            "feasibility".into(),
            json!({
                "lower": num(w.lower),
                "mz_window": w.mz.map(|(a, b)| json!([num(a), num(b)])),
                "ordinary_window": w.ordinary.map(|(a, b)| json!([num(a), num(b)])),
            }),
        );
    }
    if verdicts.is_empty() {
        return Err(anyhow!("'conditions' section configures no checks"));
    }
    let mut doc = Value::Object(sections);
    doc["verdicts"] = verdicts_value(&verdicts);
    Ok(Outcome { verdicts, report: doc, csv: None, svg: None })
}

pub fn brackets(cfg: &ConfigFile) -> anyhow::Result<Outcome> {
    let bc = cfg.brackets.as_ref().ok_or_else(|| anyhow!("config has no 'brackets' section"))?;
    let w = bracket_weight(&bc.model, &bc.weight).context("bracket weight rejected")?;
    let partition = build_partition(&w, bc.epsilon).context("partition construction failed")?;
    let verification = verify_brackets(&partition, &w, bc.s_grid, bc.arg_grid);
    println!(
        "brackets: m = {} pieces at epsilon = {}, verification {}",
        partition.m(),
        bc.epsilon,
        if verification.holds { "passed" } else { "FAILED" }
    );
    let mut all_hold = true;
    let mut worst_margin = f64::INFINITY;
    for k in 0..bc.replications {
        let mut rng = SplitMix64::new(derive_seed(bc.master_seed, k as u64));
        let uniforms: Vec<f64> = (0..bc.n).map(|_| rng.next_uniform()).collect();
        let rep = bracket_inequality_check(&uniforms, &w, &partition, bc.sup_resolution)?;
        all_hold &= rep.holds;
        worst_margin = worst_margin.min(rep.rhs - rep.lhs);
    }
    println!(
        "bracketing inequality: {} over {} replications at n = {} (min margin {:.4e})",
        if all_hold { "holds" } else { "FAILS" },
        bc.replications,
        bc.n,
        worst_margin
    );
    let mut verdicts = BTreeMap::new();
    verdicts.insert("brackets_verified".into(), verification.holds);
    verdicts.insert("inequality_all_replications".into(), all_hold);
    let doc = json!({
        "epsilon": num(bc.epsilon),
        "pieces": partition.m(),
        "t_points": partition.t_points.iter().map(|&t| num(t)).collect::<Vec<_>>(),
        "max_bracket_integral": num(verification.max_bracket_integral),
        "verification_violation": verification.violation.as_ref().map(|(i, s)| json!([i, s])),
        "inequality_min_margin": num(worst_margin),
        "verdicts": verdicts_value(&verdicts),
    });
    Ok(Outcome { verdicts, report: doc, csv: None, svg: None })
}

pub fn chaining(cfg: &ConfigFile) -> anyhow::Result<Outcome> {
    let cc = cfg.chaining.as_ref().ok_or_else(|| anyhow!("config has no 'chaining' section"))?;
    if cc.n_list.is_empty() || cc.sequences == 0 {
        return Err(anyhow!("'chaining' needs a nonempty n_list and sequences >= 1"));
    }
    let n_max = *cc.n_list.iter().max().unwrap();
    let t_grid: Vec<f64> = (0..cc.t_grid_points)
        .map(|k| k as f64 / (cc.t_grid_points.max(2) - 1) as f64)
        .collect();
    let mut all_hold = true;
    let mut min_slack = f64::INFINITY;
    for s in 0..cc.sequences {
        let mut rng = SplitMix64::new(derive_seed(cc.master_seed, s as u64));
        let uniforms: Vec<f64> = (0..n_max).map(|_| rng.next_uniform()).collect();
        for &n in &cc.n_list {
            let rep = chaining_bound_check(&uniforms, n, &t_grid)?;
            all_hold &= rep.holds;
            min_slack = min_slack.min(rep.min_slack);
        }
    }
    println!(
        "chaining inequality: {} over {} sequences x {} sizes (min slack {:.4e})",
        if all_hold { "holds" } else { "FAILS" },
        cc.sequences,
        cc.n_list.len(),
        min_slack
    );
    let mut verdicts = BTreeMap::new();
    verdicts.insert("chaining_inequality_all".into(), all_hold);

    let mut rio_rows = Vec::new();
    if let Some(rio) = &cc.rio {
        let q_max = *rio.q_list.iter().max().unwrap_or(&0) as usize;
        let mut sups: Vec<Vec<f64>> = Vec::with_capacity(rio.replications);
        for k in 0..rio.replications {
            let mut rng = SplitMix64::new(derive_seed(cc.master_seed ^ 0x9E37_79B9, k as u64));
            let u: Vec<f64> = (0..q_max).map(|_| rng.next_uniform()).collect();
            sups.push(
                rio.q_list
                    .iter()
                    .map(|&q| sup_z_statistic(&u[..q as usize], 0, q as usize).unwrap())
                    .collect(),
            );
        }
        let mut respected = true;
        for (qi, &q) in rio.q_list.iter().enumerate() {
            for &x in &rio.x_list {
                let threshold = x * (q as f64).sqrt();
                let hits = sups.iter().filter(|row| row[qi] >= threshold).count();
                let freq = hits as f64 / rio.replications as f64;
                let bound = rio_tail_bound(q, x, &rio.rate);
                respected &= freq <= bound;
                println!("rio: q = {q:>6}, x = {x}: exceedance {freq:.4} <= bound {bound:.4}");
                rio_rows.push(json!({
                    "q": q, "x": num(x), "exceedance": num(freq), "bound": num(bound),
                }));
            }
        }
        verdicts.insert("rio_bound_respected".into(), respected);
    }
    let doc = json!({
        "n_list": cc.n_list,
        "t_grid_points": cc.t_grid_points,
        "sequences": cc.sequences,
        "min_slack": num(min_slack),
        "rio": rio_rows,
        "verdicts": verdicts_value(&verdicts),
    });
    Ok(Outcome { verdicts, report: doc, csv: None, svg: None })
}

pub fn riskcheck(cfg: &ConfigFile, want_svg: bool) -> anyhow::Result<Outcome> {
    let rc = cfg.riskcheck.as_ref().ok_or_else(|| anyhow!("config has no 'riskcheck' section"))?;
    rc.params.validate().map_err(|e| anyhow!("bad risk params: {e}"))?;
    let mut verdicts = BTreeMap::new();

    // kernel-bound sweep
    let mut all_hold = true;
    let mut checks = 0usize;
    for &p in &rc.p_list {
        for &a in &rc.a_list {
            let params = RiskParams::new(p, a).map_err(|e| anyhow!("bad sweep params: {e}"))?;
            for i in 0..rc.x_points {
                let x = i as f64 / (rc.x_points.max(2) - 1) as f64;
                all_hold &= bernoulli_chain_check(x, &params).holds;
                checks += 1;
            }
        }
    }
    println!(
        "bernoulli kernel bound: {} over {checks} grid points",
        if all_hold { "holds" } else { "FAILS" }
    );
    verdicts.insert("bernoulli_chain_all".into(), all_hold);

    // plug-in rate experiment
    let mut doc = json!({
        "chain_checks": checks,
        "chain_all_hold": all_hold,
    });
    let mut csv = None;
    let mut svg = None;
    if let Some(exp_cfg) = &rc.experiment {
        let mut exp_cfg = exp_cfg.clone();
        if exp_cfg.functional.is_none() {
            exp_cfg.functional = Some(FunctionalSpec::Risk { params: rc.params });
        }
        let report = run_experiment(&exp_cfg).context("risk rate experiment failed")?;
        println!(
            "risk plug-in rate: slope {:.4} (stderr {:.4})",
            report.fitted_slope, report.slope_stderr
        );
        verdicts.extend(expectation_verdicts(&report, &cfg.expect, "risk_"));
        let ns: Vec<usize> = report.per_n.iter().map(|p| p.n).collect();
        let medians: Vec<f64> = report.per_n.iter().map(|p| p.raw.median).collect();
        svg = want_svg.then(|| svg_loglog(&ns, &medians, "risk plug-in error vs n (log-log)"));
        csv = Some(report.to_csv());
        doc["rate"] = rate_report_value(&report);
    }
    doc["verdicts"] = verdicts_value(&verdicts);
    Ok(Outcome { verdicts, report: doc, csv, svg })
}
