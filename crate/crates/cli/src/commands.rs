//! The five commands. Each returns its output even when it also reports a
//! failure, so partial results can still be written.

use std::path::PathBuf;

use maxsat_core::potential::{
    check_finite_w_conditions, coupled_potential, coupled_potential_gradient, hessian_constant, minimize_potential,
    potential, potential_report, FiniteWidthCondition,
};
use maxsat_core::recursion::{coupled_fixed_point, coupled_iterate_from, is_symmetric, is_unimodal};
use maxsat_core::thresholds::{
    ebp_curve, inverse_psi_threshold, locate_jumps, q_of_x, threshold_report, x_upper_star, MapPoint,
};
use maxsat_core::{
    CoupledProfile, CouplingSpec, Error as CoreError, IterationConfig, ParamSystem, ScalarSystem, Slice, ThresholdValue,
};
use rayon::prelude::*;
use serde_json::Value;

use crate::config::{
    builtin_system, Builtin, BuiltSystem, CommandConfig, Format, GridConfig, InjectedBug, RunConfig, SystemConfig,
    ThresholdName,
};
use crate::error::CliError;
use crate::output::{fingerprint, format_float, num, Output, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    PotentialCurve,
    CoupledRun,
    Thresholds,
    ExitCurves,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::PotentialCurve => "potential-curve",
            Command::CoupledRun => "coupled-run",
            Command::Thresholds => "thresholds",
            Command::ExitCurves => "exit-curves",
            Command::Verify => "verify",
        }
    }
}

/// Flag values that override the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub eps: Option<f64>,
    pub n: Option<usize>,
    pub w: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Output of a command and the failure it reports, if any.
#[derive(Debug)]
pub struct Report {
    pub output: Output,
    pub error: Option<CliError>,
}

impl Report {
    fn ok(output: Output) -> Self {
        Report { output, error: None }
    }
}

pub const MIN_CURVE_POINTS: usize = 400;
const DEFAULT_CURVE_POINTS: usize = 1001;
const DEFAULT_EXIT_POINTS: usize = 201;

/// Merged settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub cmd: CommandConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
}

pub fn settings(command: Command, cfg: &RunConfig, ov: &Overrides) -> Result<Settings, CliError> {
    let mut cmd = cfg.command.clone();
    if let Some(name) = &cmd.name {
        if name != command.name() {
            return Err(CliError::Config(format!("config is for command {name:?}, not {:?}", command.name())));
        }
    }
    cmd.eps = ov.eps.or(cmd.eps);
    cmd.n = ov.n.or(cmd.n);
    cmd.w = ov.w.or(cmd.w);
    let out = ov.out.clone().or(cmd.out.clone());
    let default_format = match command {
        Command::Thresholds | Command::Verify => Format::Json,
        _ => Format::Csv,
    };
    let format = ov.format.or(cmd.format).unwrap_or(default_format);
    if let Some(tol) = cmd.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Config(format!("tol must be positive, got {tol}")));
        }
    }
    if cmd.max_iters == Some(0) {
        return Err(CliError::Config("max_iters must be at least 1".into()));
    }
    if let Some(d) = cmd.delta_offset {
        if !(d >= 0.0 && d.is_finite()) {
            return Err(CliError::Config(format!("delta_offset must be non-negative, got {d}")));
        }
    }
    Ok(Settings { cmd, format, out })
}

pub fn run(command: Command, cfg: &RunConfig, ov: &Overrides) -> Result<(Report, Settings), CliError> {
    let st = settings(command, cfg, ov)?;
    let report = match command {
        Command::Verify => verify(cfg.system.as_ref(), &st.cmd)?,
        _ => {
            let sys_cfg =
                cfg.system.as_ref().ok_or_else(|| CliError::Config(format!("{} needs a system", command.name())))?;
            let built = sys_cfg.build()?;
            let mut report = match command {
                Command::PotentialCurve => potential_curve(&built, &st.cmd)?,
                Command::CoupledRun => coupled_run(&built, &st.cmd)?,
                Command::Thresholds => thresholds(&built, &st.cmd)?,
                Command::ExitCurves => exit_curves(&built, &st.cmd)?,
                Command::Verify => unreachable!(),
            };
            stamp(&mut report.output, command, sys_cfg);
            report
        }
    };
    Ok((report, st))
}

fn stamp(out: &mut Output, command: Command, sys: &SystemConfig) {
    out.meta("command", command.name());
    out.meta("system_fingerprint", fingerprint(sys));
    out.meta("tool_version", env!("CARGO_PKG_VERSION"));
}

fn cfg_iter(cmd: &CommandConfig) -> IterationConfig {
    let d = IterationConfig::default();
    IterationConfig { tol: cmd.tol.unwrap_or(d.tol), max_iters: cmd.max_iters.unwrap_or(d.max_iters), ..d }
}

fn check_eps(eps: f64, eps_max: f64) -> Result<f64, CliError> {
    if (0.0..=eps_max).contains(&eps) {
        Ok(eps)
    } else {
        Err(CliError::Config(format!("eps = {eps} outside [0, {eps_max}]")))
    }
}

/// Run `f` on the scalar system the config selects.
fn with_scalar<R>(
    built: &BuiltSystem,
    eps: Option<f64>,
    f: impl FnOnce(&dyn ScalarSystem, Option<f64>) -> Result<R, CliError>,
) -> Result<R, CliError> {
    match built {
        BuiltSystem::Scalar(s) => {
            if eps.is_some() {
                return Err(CliError::Config("eps does not apply to a non-parameterized system".into()));
            }
            f(&**s, None)
        }
        BuiltSystem::Family { sys, default_eps } => {
            let eps = eps
                .or(*default_eps)
                .ok_or_else(|| CliError::Config("eps is required for a parameterized family".into()))?;
            let eps = check_eps(eps, sys.eps_max())?;
            f(&Slice::new(&**sys, eps), Some(eps))
        }
    }
}

fn family(built: &BuiltSystem) -> Result<&(dyn ParamSystem + Send + Sync), CliError> {
    match built {
        BuiltSystem::Family { sys, .. } => Ok(&**sys),
        BuiltSystem::Scalar(_) => Err(CliError::Config("this command needs a parameterized family".into())),
    }
}

fn grid(g: Option<GridConfig>, lo: f64, hi: f64, default_points: usize, min_points: usize) -> Result<Vec<f64>, CliError> {
    let g = g.unwrap_or(GridConfig { start: lo, stop: hi, points: default_points });
    if g.points < min_points.max(2) {
        return Err(CliError::Config(format!("grid needs at least {} points, got {}", min_points.max(2), g.points)));
    }
    if !(g.start.is_finite() && g.stop.is_finite() && g.start < g.stop && g.start >= lo && g.stop <= hi) {
        return Err(CliError::Config(format!("grid [{}, {}] must be increasing inside [{lo}, {hi}]", g.start, g.stop)));
    }
    Ok(g.values())
}

fn verdict_name(v: FiniteWidthCondition) -> &'static str {
    match v {
        FiniteWidthCondition::FiniteByGap => "finite_by_gap",
        FiniteWidthCondition::FiniteByStrictDescent => "finite_by_strict_descent",
        FiniteWidthCondition::FiniteByStability => "finite_by_stability",
        FiniteWidthCondition::Unknown => "unknown",
    }
}

pub fn potential_curve(built: &BuiltSystem, cmd: &CommandConfig) -> Result<Report, CliError> {
    with_scalar(built, cmd.eps, |s, eps| {
        let xs = grid(cmd.x_grid, 0.0, s.x_max(), DEFAULT_CURVE_POINTS, MIN_CURVE_POINTS)?;
        let mut t = Table::new(vec!["series", "x", "u_s"]);
        for &x in &xs {
            t.push(vec!["curve".into(), x.into(), potential(s, x).into()]);
        }
        let rep = potential_report(s, cmd.delta_offset.unwrap_or(0.0));
        for &x in &rep.minimizers {
            t.push(vec!["minimizer".into(), x.into(), potential(s, x).into()]);
        }
        let mut out = Output { table: Some(t), ..Default::default() };
        if let Some(e) = eps {
            out.meta_num("eps", e);
        }
        out.meta_num("x_lower_star", rep.x_lower_star);
        out.meta_num("x_upper_star", rep.x_upper_star);
        out.meta_num("min_value", rep.min_value);
        out.meta_num("delta_gap", rep.delta_gap);
        out.meta_num("k_fg", rep.k_fg);
        out.meta_num("w0", rep.w0);
        out.meta("finite_w", verdict_name(check_finite_w_conditions(s).verdict));
        Ok(Report::ok(out))
    })
}

fn spec_from(cmd: &CommandConfig) -> Result<CouplingSpec, CliError> {
    let n = cmd.n.ok_or_else(|| CliError::Config("N is required".into()))?;
    let w = cmd.w.ok_or_else(|| CliError::Config("w is required".into()))?;
    CouplingSpec::new(n, w).map_err(|e| CliError::Config(format!("coupling: {e}")))
}

fn profile_table(values: &[f64]) -> Table {
    let mut t = Table::new(vec!["i", "x"]);
    for (i, &x) in values.iter().enumerate() {
        t.push(vec![(i + 1).into(), x.into()]);
    }
    t
}

pub fn coupled_run(built: &BuiltSystem, cmd: &CommandConfig) -> Result<Report, CliError> {
    let spec = spec_from(cmd)?;
    let icfg = cfg_iter(cmd);
    with_scalar(built, cmd.eps, |s, eps| {
        let mut out = Output::default();
        if let Some(e) = eps {
            out.meta_num("eps", e);
        }
        out.meta("n", spec.n());
        out.meta("w", spec.w());
        out.meta_num("x_upper_star", minimize_potential(s).x_upper_star);
        match coupled_fixed_point(s, spec, &icfg) {
            Ok(run) => {
                out.meta("converged", true);
                out.meta("iterations", run.iterations);
                out.meta_num("last_step", run.last_step);
                out.meta_num("max", run.profile.max());
                out.meta_num("center_value", run.profile.center_value());
                out.table = Some(profile_table(&run.profile.values));
                Ok(Report::ok(out))
            }
            Err(CoreError::NonConvergence { iterations, last_step, last }) => {
                out.meta("converged", false);
                out.meta("iterations", iterations);
                out.meta_num("last_step", last_step);
                out.meta_num("max", last.iter().copied().fold(0.0, f64::max));
                out.meta_num("center_value", last[spec.center()]);
                out.table = Some(profile_table(&last));
                let msg = format!("{iterations} iterations, last step {}", format_float(last_step));
                Ok(Report { output: out, error: Some(CliError::NonConvergence(msg)) })
            }
            Err(e) => Err(e.into()),
        }
    })
}

fn threshold_value(out: &mut Output, key: &str, v: &ThresholdValue) {
    match v {
        ThresholdValue::Defined(x) => out.meta_num(key, *x),
        ThresholdValue::Undefined(reason) => {
            out.meta(key, "undefined");
            out.meta(&format!("{key}_reason"), reason.clone());
        }
    }
}

pub fn thresholds(built: &BuiltSystem, cmd: &CommandConfig) -> Result<Report, CliError> {
    let sys = family(built)?;
    let r = threshold_report(sys);
    let mut out = Output::default();
    threshold_value(&mut out, "eps_s", &r.eps_s);
    threshold_value(&mut out, "eps_stab", &r.eps_stab);
    threshold_value(&mut out, "eps_c", &r.eps_c);
    threshold_value(&mut out, "eps_maxwell", &r.eps_maxwell);
    out.meta("method_notes", r.method_notes.join("; "));
    if r.eps_c.value().is_none() {
        // Ψ⁻¹(Q(x)) over the fixed-point domain replaces the coupled threshold.
        let mut t = Table::new(vec!["x", "q", "eps_inverse_psi"]);
        let xs = grid(cmd.x_grid, 0.0, sys.x_max(), 101, 2)?;
        for x in xs.into_iter().filter(|&x| x > 0.0) {
            if let (Ok(q), Ok(e)) = (q_of_x(sys, x), inverse_psi_threshold(sys, x)) {
                t.push(vec![x.into(), q.into(), e.into()]);
            }
        }
        out.table = Some(t);
    }
    let requested = cmd.threshold.map(|name| match name {
        ThresholdName::EpsS => ("eps_s", &r.eps_s),
        ThresholdName::EpsStab => ("eps_stab", &r.eps_stab),
        ThresholdName::EpsC => ("eps_c", &r.eps_c),
        ThresholdName::EpsMaxwell => ("eps_maxwell", &r.eps_maxwell),
    });
    let error = match requested {
        Some((name, ThresholdValue::Undefined(reason))) => Some(CliError::Undefined(format!("{name}: {reason}"))),
        _ => None,
    };
    Ok(Report { output: out, error })
}

pub fn exit_curves(built: &BuiltSystem, cmd: &CommandConfig) -> Result<Report, CliError> {
    let sys = family(built)?;
    let eps_max = sys.eps_max();
    let eps_grid = grid(cmd.eps_grid, 0.0, eps_max, DEFAULT_EXIT_POINTS, 2)?;
    let mut t = Table::new(vec!["series", "eps", "exit", "x"]);
    let xs: Vec<f64> =
        grid(cmd.x_grid, 0.0, sys.x_max(), DEFAULT_CURVE_POINTS, 2)?.into_iter().filter(|&x| x > 0.0).collect();
    let ebp = ebp_curve(sys, &xs);
    for s in &ebp.samples {
        t.push(vec!["ebp".into(), s.eps.into(), s.exit.into(), s.x.into()]);
    }
    let map: Vec<MapPoint> = eps_grid
        .par_iter()
        .map(|&eps| {
            let x = x_upper_star(sys, eps);
            MapPoint { eps, x_upper_star: x, exit: sys.exit(x, eps) }
        })
        .collect();
    for p in &map {
        t.push(vec!["map".into(), p.eps.into(), p.exit.into(), p.x_upper_star.into()]);
    }
    let jumps = locate_jumps(sys, &map);
    let mut out = Output::default();
    out.meta("map_jumps", Value::Array(jumps.iter().map(|&j| num(j)).collect()));
    let mut error = None;
    if cmd.n.is_some() || cmd.w.is_some() {
        let spec = spec_from(cmd)?;
        let icfg = cfg_iter(cmd);
        let sc: Vec<(f64, Result<f64, CoreError>)> = eps_grid
            .par_iter()
            .map(|&e| (e, coupled_fixed_point(&Slice::new(sys, e), spec, &icfg).map(|r| r.profile.max())))
            .collect();
        let mut failed = Vec::new();
        let mut sc_points = Vec::new();
        for (e, r) in sc {
            match r {
                Ok(x) => {
                    t.push(vec!["sc-finite".into(), e.into(), sys.exit(x, e).into(), x.into()]);
                    sc_points.push((e, x));
                }
                Err(CoreError::NonConvergence { .. }) => failed.push(e),
                Err(err) => return Err(err.into()),
            }
        }
        out.meta("n", spec.n());
        out.meta("w", spec.w());
        if let Some(j) = largest_step(&sc_points) {
            out.meta_num("sc_jump", j);
        }
        if !failed.is_empty() {
            let list: Vec<String> = failed.iter().map(|&e| format_float(e)).collect();
            error = Some(CliError::NonConvergence(format!("sc-finite at eps = {}", list.join(", "))));
        }
    }
    out.table = Some(t);
    Ok(Report { output: out, error })
}

/// Midpoint of the grid interval with the largest increase of `x`.
fn largest_step(points: &[(f64, f64)]) -> Option<f64> {
    points
        .windows(2)
        .map(|w| (w[1].1 - w[0].1, 0.5 * (w[0].0 + w[1].0)))
        .filter(|(d, _)| *d > 0.0)
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, m)| m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        }
    }
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Low-discrepancy points in `[0, 1)`.
fn golden(k: usize) -> f64 {
    const PHI: f64 = 0.618_033_988_749_894_9;
    (0.5 + k as f64 * PHI).fract()
}

fn profile(spec: CouplingSpec, x_max: f64, offset: usize) -> CoupledProfile {
    let v = (0..spec.m()).map(|i| golden(offset + i) * x_max).collect();
    CoupledProfile { values: v, spec }
}

type SuiteResult = Result<(Status, String), CoreError>;

fn suite_descent(s: &dyn ScalarSystem) -> SuiteResult {
    let bad = (0..1000).map(|k| golden(k) * s.x_max()).find(|&x| {
        let hx = s.h(x).clamp(0.0, s.x_max());
        let (u0, u1) = (potential(s, x), potential(s, hx));
        u1 > u0 + 1e-12 * (1.0 + u0.abs())
    });
    Ok(match bad {
        None => (Status::Pass, "1000 starts".into()),
        Some(x) => (Status::Fail, format!("U_s(h(x)) > U_s(x) at x = {}", format_float(x))),
    })
}

fn suite_minimizers(s: &dyn ScalarSystem) -> SuiteResult {
    let m = minimize_potential(s);
    let worst = m.minimizers.iter().map(|&x| (x - s.h(x)).abs()).fold(0.0, f64::max);
    Ok((pass_if(worst <= 1e-8), format!("max |x - h(x)| = {}", format_float(worst))))
}

fn suite_symmetry(s: &dyn ScalarSystem) -> SuiteResult {
    let spec = CouplingSpec::new(16, 3)?;
    let cfg = IterationConfig { max_iters: 200_000, ..IterationConfig::default() };
    let mut bad = None;
    let mut prev: Option<Vec<f64>> = None;
    let run = coupled_iterate_from(s, CoupledProfile::constant(spec, s.x_max()), false, &cfg, |it, v| {
        let mono = prev.as_ref().is_none_or(|p| v.iter().zip(p).all(|(a, b)| *a <= b + 1e-15));
        if it > 0 && bad.is_none() && !(is_symmetric(v, 1e-12) && is_unimodal(v, 1e-12) && mono) {
            bad = Some(it);
        }
        prev = Some(v.to_vec());
    })?;
    Ok(match bad {
        None => (Status::Pass, format!("{} iterates", run.iterations)),
        Some(it) => (Status::Fail, format!("iterate {it}")),
    })
}

fn suite_identity(s: &dyn ScalarSystem) -> SuiteResult {
    let mut worst = 0.0f64;
    for w in 1..=4 {
        let spec = CouplingSpec::new(12, w)?;
        for k in 0..=10 {
            let x = s.x_max() * k as f64 / 10.0;
            let c = coupled_potential(s, &CoupledProfile::constant(spec, x))?;
            let expect = spec.m() as f64 * potential(s, x) + (w as f64 - 1.0) * s.f_integral(s.g(x));
            worst = worst.max((c - expect).abs());
        }
    }
    Ok((pass_if(worst <= 1e-10), format!("max deviation {}", format_float(worst))))
}

fn suite_sum_bound(s: &dyn ScalarSystem) -> SuiteResult {
    let mut worst = f64::INFINITY;
    for k in 0..50 {
        let spec = CouplingSpec::new(10, 1 + k % 4)?;
        let p = profile(spec, s.x_max(), 17 * k);
        let sum: f64 = p.values.iter().map(|&x| potential(s, x)).sum();
        worst = worst.min(coupled_potential(s, &p)? - sum);
    }
    Ok((pass_if(worst >= -1e-10), format!("min U_c - sum U_s = {}", format_float(worst))))
}

fn suite_gradient(s: &dyn ScalarSystem, bug: Option<InjectedBug>) -> SuiteResult {
    let mut worst = 0.0f64;
    for k in 0..5 {
        let spec = CouplingSpec::new(10, 1 + k % 3)?;
        let mut p = profile(spec, s.x_max(), 31 * k);
        for v in &mut p.values {
            *v = 0.05 * s.x_max() + 0.9 * *v;
        }
        let mut grad = coupled_potential_gradient(s, &p)?;
        if bug == Some(InjectedBug::NegatedGradient) {
            for g in &mut grad {
                *g = -*g;
            }
        }
        let scale = grad.iter().fold(1e-3f64, |a, g| a.max(g.abs()));
        let h = 1e-5 * s.x_max();
        let u = |i: usize, d: f64| {
            let mut a = p.clone();
            a.values[i] += d;
            coupled_potential(s, &a)
        };
        for (i, gi) in grad.iter().enumerate() {
            let fd = (-u(i, 2.0 * h)? + 8.0 * u(i, h)? - 8.0 * u(i, -h)? + u(i, -2.0 * h)?) / (12.0 * h);
            worst = worst.max((fd - gi).abs() / scale);
        }
    }
    Ok((pass_if(worst <= 1e-6), format!("max relative error {}", format_float(worst))))
}

fn suite_hessian(s: &dyn ScalarSystem) -> SuiteResult {
    let k_fg = hessian_constant(s);
    let mut worst = 0.0f64;
    for k in 0..3 {
        let spec = CouplingSpec::new(6, 1 + k)?;
        let p = profile(spec, s.x_max(), 7 * k + 3);
        let h = 1e-6 * s.x_max();
        let mut rows = vec![0.0; p.values.len()];
        for j in 0..p.values.len() {
            let mut a = p.clone();
            let mut b = p.clone();
            a.values[j] = (a.values[j] + h).min(s.x_max());
            b.values[j] = (b.values[j] - h).max(0.0);
            let step = a.values[j] - b.values[j];
            let ga = coupled_potential_gradient(s, &a)?;
            let gb = coupled_potential_gradient(s, &b)?;
            for i in 0..rows.len() {
                rows[i] += ((ga[i] - gb[i]) / step).abs();
            }
        }
        worst = worst.max(rows.into_iter().fold(0.0, f64::max));
    }
    Ok((pass_if(worst <= k_fg * (1.0 + 1e-3)), format!("norm {} vs K {}", format_float(worst), format_float(k_fg))))
}

fn suite_finite_w(s: &dyn ScalarSystem) -> SuiteResult {
    let v = check_finite_w_conditions(s).verdict;
    let status = if v == FiniteWidthCondition::Unknown { Status::Unknown } else { Status::Pass };
    Ok((status, verdict_name(v).into()))
}

fn verify_one(label: &str, s: &dyn ScalarSystem, bug: Option<InjectedBug>, t: &mut Table) -> bool {
    let suites: [(&str, SuiteResult); 8] = [
        ("potential_descent", suite_descent(s)),
        ("minimizers_at_fixed_points", suite_minimizers(s)),
        ("coupled_symmetry_unimodality", suite_symmetry(s)),
        ("coupled_potential_identity", suite_identity(s)),
        ("coupled_sum_bound", suite_sum_bound(s)),
        ("gradient", suite_gradient(s, bug)),
        ("hessian_bound", suite_hessian(s)),
        ("finite_width", suite_finite_w(s)),
    ];
    let mut ok = true;
    for (name, r) in suites {
        let (status, detail) = r.unwrap_or_else(|e| (Status::Fail, e.to_string()));
        ok &= status != Status::Fail;
        t.push(vec![label.into(), name.into(), status.name().into(), detail.into()]);
    }
    ok
}

/// Parameter used for a family when the config gives none.
fn verify_eps(b: Option<Builtin>, sys: &dyn ParamSystem, default_eps: Option<f64>) -> f64 {
    match b {
        Some(Builtin::Example8) => 0.645,
        Some(Builtin::Example9) => 0.55,
        Some(Builtin::Gldpc31_4) => 0.3,
        Some(Builtin::Gldpc63_5) => 0.2,
        _ => default_eps.unwrap_or(0.5 * sys.eps_max()),
    }
}

pub fn verify(system: Option<&SystemConfig>, cmd: &CommandConfig) -> Result<Report, CliError> {
    let targets: Vec<(String, Option<Builtin>, BuiltSystem)> = match system {
        None => Builtin::ALL.iter().map(|&b| (b.name().to_string(), Some(b), builtin_system(b))).collect(),
        Some(sc) => {
            let b = match sc {
                SystemConfig::Builtin { name } => Some(*name),
                _ => None,
            };
            vec![(b.map_or("configured".to_string(), |b| b.name().to_string()), b, sc.build()?)]
        }
    };
    let mut t = Table::new(vec!["system", "suite", "status", "detail"]);
    let mut all = true;
    for (label, b, built) in &targets {
        let eps = match built {
            BuiltSystem::Family { sys, default_eps } => Some(cmd.eps.unwrap_or(verify_eps(*b, &**sys, *default_eps))),
            BuiltSystem::Scalar(_) => None,
        };
        let label = match eps {
            Some(e) => format!("{label}@{e}"),
            None => label.clone(),
        };
        all &= with_scalar(built, eps, |s, _| Ok(verify_one(&label, s, cmd.inject_bug, &mut t)))?;
    }
    let mut out = Output { table: Some(t), ..Default::default() };
    out.meta("command", Command::Verify.name());
    out.meta("tool_version", env!("CARGO_PKG_VERSION"));
    out.meta("all_passed", all);
    if let Some(bug) = cmd.inject_bug {
        out.meta("injected_bug", format!("{bug:?}"));
    }
    let error = (!all).then(|| CliError::VerifyFailed("at least one suite failed".into()));
    Ok(Report { output: out, error })
}
