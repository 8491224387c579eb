//! One function per subcommand, each producing a [`Table`].

use rayon::prelude::*;

use ptone_core::bounds::{
    barta_bound, collar_range, div_field_bound, div_sup_bound, eigen_field, kazdan_source, kazdan_transform,
    theorem17_bound, trial_profile, BartaInput, DiscreteField, RangeStats,
};
use ptone_core::critical::compute_r_star;
use ptone_core::modelspace::{verification_nodes, verify_curvature_bound, Tabulated, WarpingProfile, DEFAULT_VERIFY_NODES};
use ptone_core::radial::{solve_ball_eigenvalue_with, RadialProblem, RadialSolution, SolveOptions};
use ptone_core::rayleigh::{default_initial, minimize_rayleigh, Grid1D, MinimizeOptions};
use ptone_core::surfaces::{band_report, SurfaceBand, RotSurface};

use crate::acceptance::{run_suite, selftest_table, Suite};
use crate::config::{ConfigFile, Defaults, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::output::{Table, Value};

/// Relative slack of the comparison certificate.
pub const CERT_SLACK: f64 = 1e-6;

pub const COMMANDS: [&str; 8] = ["eig", "rstar", "barta", "compare", "surface", "kazdan", "sweep", "selftest"];

fn defaults(command: &str) -> Defaults {
    match command {
        "rstar" => Defaults { p: &[2.0, 3.0], m: &[2], c: &[-1.0, 0.0, 1.0], r: &[1.0] },
        "compare" => Defaults { p: &[2.0, 2.5, 3.0], m: &[2, 3], c: &[0.0], r: &[1.0] },
        "surface" => Defaults { p: &[2.0, 3.0], m: &[2], c: &[0.0], r: &[1.1, 1.2] },
        "selftest" => Defaults { p: &[2.0], m: &[2], c: &[0.0], r: &[1.0] },
        _ => Defaults { p: &[2.0], m: &[2], c: &[0.0], r: &[1.0] },
    }
}

/// Worker pool capped by `PTONE_THREADS`.
pub fn pool() -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("PTONE_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Input(format!("PTONE_THREADS = `{v}` is not a positive integer")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Input(format!("thread pool: {e}")))
}

/// Result of a command: its table and whether an acceptance check failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub failures: Vec<String>,
}

impl Report {
    fn ok(table: Table) -> Self {
        Self { table, failures: Vec::new() }
    }
}

pub fn run(command: &str, file: ConfigFile) -> CliResult<(ExperimentConfig, Report)> {
    if !COMMANDS.contains(&command) {
        return Err(CliError::Input(format!("unknown command `{command}`")));
    }
    let cfg = ExperimentConfig::resolve(file, defaults(command))?;
    let report = match command {
        "eig" => Report::ok(cmd_eig(&cfg)?),
        "rstar" => Report::ok(cmd_rstar(&cfg)?),
        "barta" => Report::ok(cmd_barta(&cfg)?),
        "compare" => cmd_compare(&cfg)?,
        "surface" => Report::ok(cmd_surface(&cfg)?),
        "kazdan" => Report::ok(cmd_kazdan(&cfg)?),
        "sweep" => Report::ok(cmd_sweep(&cfg)?),
        _ => cmd_selftest(&cfg)?,
    };
    Ok((cfg, report))
}

fn solve(cfg: &ExperimentConfig, p: f64, m: u32, c: f64, r: f64) -> CliResult<RadialSolution> {
    let prob = RadialProblem::space_form_ball(p, m, c, r)?;
    Ok(solve_ball_eigenvalue_with(&prob, &SolveOptions::with_tol(cfg.tol).grid(cfg.n))?)
}

/// Evaluates `f` on every grid point in parallel, keeping the sorted order.
fn sweep_points<T: Send>(
    cfg: &ExperimentConfig,
    f: impl Fn((f64, u32, f64, f64)) -> CliResult<T> + Sync + Send,
) -> CliResult<Vec<T>> {
    cfg.points().into_par_iter().map(f).collect::<Vec<_>>().into_iter().collect()
}

fn key(p: f64, m: u32, c: f64, r: f64) -> Vec<Value> {
    vec![p.into(), m.into(), c.into(), r.into()]
}

pub fn cmd_eig(cfg: &ExperimentConfig) -> CliResult<Table> {
    let mut t = Table::new("eig", &["p", "m", "c", "r", "lambda", "residual", "iterations"]);
    for row in sweep_points(cfg, |(p, m, c, r)| {
        let s = solve(cfg, p, m, c, r)?;
        let mut row = key(p, m, c, r);
        row.extend([s.lambda.into(), s.residual.into(), s.iterations.into()]);
        Ok(row)
    })? {
        t.push(row);
    }
    Ok(t)
}

pub fn cmd_rstar(cfg: &ExperimentConfig) -> CliResult<Table> {
    let mut t = Table::new("rstar", &["c", "p", "m", "r", "lambda", "r_star", "min_W_margin"]);
    for row in sweep_points(cfg, |(p, m, c, r)| {
        let rep = compute_r_star(c, &solve(cfg, p, m, c, r)?)?;
        Ok(vec![
            c.into(),
            p.into(),
            m.into(),
            r.into(),
            rep.lambda.into(),
            rep.r_star.into(),
            rep.min_w_margin.into(),
        ])
    })? {
        t.push(row);
    }
    Ok(t)
}

pub fn cmd_barta(cfg: &ExperimentConfig) -> CliResult<Table> {
    let mut t = Table::new(
        "barta",
        &["p", "m", "c", "r", "lambda", "barta_eigen", "div_field", "div_sup", "barta_trial", "mean_curvature_bound", "mean_curvature_admissible"],
    );
    for row in sweep_points(cfg, |(p, m, c, r)| {
        let s = solve(cfg, p, m, c, r)?;
        let prob = &s.problem;
        let eigen = barta_bound(&BartaInput { eta: DiscreteField::from_solution(&s), problem: prob.clone() })?;
        let x = eigen_field(&s)?;
        let div = div_field_bound(&x, prob)?;
        let sup = div_sup_bound(&x, prob)?;
        let trial = barta_bound(&BartaInput { eta: trial_profile(prob, cfg.n), problem: prob.clone() })?;
        let mcb = if m >= 2 { Some(theorem17_bound(m, p, c, r, cfg.h)?) } else { None };
        let mut row = key(p, m, c, r);
        row.extend([
            s.lambda.into(),
            eigen.value.into(),
            div.value.into(),
            sup.value.into(),
            trial.value.into(),
            mcb.map(|b| b.value).into(),
            mcb.map(|b| b.admissible).into(),
        ]);
        Ok(row)
    })? {
        t.push(row);
    }
    Ok(t)
}

fn rayleigh_estimate(prob: &RadialProblem, n: usize) -> CliResult<f64> {
    let grid = Grid1D::for_problem(prob, n)?;
    let init = default_initial(&grid);
    Ok(minimize_rayleigh(&grid, prob.p, &init, &MinimizeOptions::default())?.lambda_est)
}

fn compare_profiles(cfg: &ExperimentConfig, c: f64) -> CliResult<Vec<(String, WarpingProfile)>> {
    let mut out = vec![(format!("space_form(c={c})"), WarpingProfile::space_form(c))];
    if c == 0.0 {
        out.push(("space_form(c=-1)".into(), WarpingProfile::space_form(-1.0)));
    }
    for &eps in &cfg.eps {
        out.push((format!("perturbed(c={c},eps={eps})"), WarpingProfile::perturbed(c, eps)?));
    }
    if let Some(path) = &cfg.profile_csv {
        out.push((format!("tabulated({})", path.display()), WarpingProfile::Tabulated(Tabulated::from_csv(path)?)));
    }
    Ok(out)
}

/// Barta certificate of the transplanted model eigenfunction on warped balls.
pub fn cmd_compare(cfg: &ExperimentConfig) -> CliResult<Report> {
    let mut t = Table::new(
        "compare",
        &[
            "p",
            "m",
            "c",
            "r",
            "profile",
            "admissible",
            "curvature_margin",
            "lambda_model",
            "certificate",
            "certificate_ok",
            "rayleigh_estimate",
        ],
    );
    let rows = sweep_points(cfg, |(p, m, c, r)| {
        let s = solve(cfg, p, m, c, r)?;
        let eta = DiscreteField::from_solution(&s);
        let nodes = verification_nodes(r, DEFAULT_VERIFY_NODES);
        let mut rows = Vec::new();
        for (label, profile) in compare_profiles(cfg, c)? {
            let curv = verify_curvature_bound(&profile, c, &nodes);
            let mut row = key(p, m, c, r);
            row.extend([label.into(), curv.ok.into(), curv.margin.into(), s.lambda.into()]);
            let prob = match RadialProblem::ball(p, m, profile, r) {
                Ok(prob) if curv.ok => prob,
                Ok(_) => {
                    row.extend([Value::Empty, Value::Empty, Value::Empty]);
                    rows.push((row, None));
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            let cert = barta_bound(&BartaInput { eta: eta.clone(), problem: prob.clone() })?.value;
            let ok = cert >= s.lambda - CERT_SLACK * s.lambda;
            row.extend([cert.into(), ok.into(), rayleigh_estimate(&prob, cfg.n)?.into()]);
            rows.push((row, Some(ok)));
        }
        Ok(rows)
    })?;
    let mut failures = Vec::new();
    for (row, ok) in rows.into_iter().flatten() {
        if ok == Some(false) {
            failures.push(format!("compare certificate below model eigenvalue: {}", row[4].render()));
        }
        t.push(row);
    }
    Ok(Report { table: t, failures })
}

pub fn cmd_surface(cfg: &ExperimentConfig) -> CliResult<Table> {
    let mut t = Table::new(
        "surface",
        &["surface", "p", "r", "k", "lambda_model", "rhs", "lambda_band_upper", "modelcontrol_margin", "cor13", "cor15"],
    );
    let mut cases = Vec::new();
    for &p in &cfg.p {
        for &r in &cfg.r {
            for &kind in &cfg.surfaces {
                cases.push((p, r, kind));
            }
        }
    }
    cases.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then((a.2 as u8).cmp(&(b.2 as u8))));
    let rows = cases
        .into_par_iter()
        .map(|(p, r, kind)| -> CliResult<Vec<Value>> {
            let surface = match kind {
                ptone_core::surfaces::SurfaceKind::Plane => RotSurface::plane(),
                ptone_core::surfaces::SurfaceKind::Catenoid => RotSurface::catenoid(),
            };
            let band = SurfaceBand::new(surface, r)?;
            let s = solve(cfg, p, 2, 0.0, r)?;
            let rep = band_report(&band, p, &s)?;
            Ok(vec![
                kind.to_string().into(),
                p.into(),
                r.into(),
                rep.k.into(),
                rep.lambda_model.into(),
                rep.rhs.into(),
                rep.lambda_band_upper.into(),
                rep.modelcontrol_margin.into(),
                rep.cor13.into(),
                rep.cor15.stable.into(),
            ])
        })
        .collect::<Vec<_>>();
    for row in rows {
        t.push(row?);
    }
    Ok(t)
}

pub fn cmd_kazdan(cfg: &ExperimentConfig) -> CliResult<Table> {
    let mut t = Table::new(
        "kazdan",
        &[
            "p",
            "m",
            "c",
            "r",
            "lambda",
            "psi_inf",
            "psi_sup",
            "psi_spread",
            "max_rel_deviation",
            "trial_inf",
            "trial_sup",
            "sandwich",
        ],
    );
    for row in sweep_points(cfg, |(p, m, c, r)| {
        let s = solve(cfg, p, m, c, r)?;
        let prob = &s.problem;
        let range = collar_range(prob, &s.grid);
        let v = kazdan_transform(&DiscreteField::from_solution(&s))?;
        let st = RangeStats::of(&kazdan_source(&v, prob)?, range);
        let mut phi = DiscreteField::from_fn(&s.grid, |t| 1.0 - (t / r).powi(2), |t| -2.0 * t / (r * r))?;
        let last = phi.values.len() - 1;
        phi.values[last] = 0.0;
        let trial = RangeStats::of(&kazdan_source(&kazdan_transform(&phi)?, prob)?, range);
        let mut row = key(p, m, c, r);
        row.extend([
            s.lambda.into(),
            st.inf.into(),
            st.sup.into(),
            st.spread().into(),
            (st.max_deviation(s.lambda) / s.lambda).into(),
            trial.inf.into(),
            trial.sup.into(),
            (trial.inf <= s.lambda && s.lambda <= trial.sup).into(),
        ]);
        Ok(row)
    })? {
        t.push(row);
    }
    Ok(t)
}

/// Eigenvalue, certificates, Rayleigh estimate and critical radius per point.
pub fn cmd_sweep(cfg: &ExperimentConfig) -> CliResult<Table> {
    let mut t = Table::new(
        "sweep",
        &["p", "m", "c", "r", "lambda", "residual", "barta", "div_field", "rayleigh", "rayleigh_rel_gap", "r_star"],
    );
    for row in sweep_points(cfg, |(p, m, c, r)| {
        let s = solve(cfg, p, m, c, r)?;
        let prob = &s.problem;
        let barta = barta_bound(&BartaInput { eta: DiscreteField::from_solution(&s), problem: prob.clone() })?;
        let div = div_field_bound(&eigen_field(&s)?, prob)?;
        let ray = rayleigh_estimate(prob, cfg.n)?;
        // r_star only exists for p ≥ 2 and c ∈ {−1, 0, 1}
        let r_star = compute_r_star(c, &s).ok().map(|rep| rep.r_star);
        let mut row = key(p, m, c, r);
        row.extend([
            s.lambda.into(),
            s.residual.into(),
            barta.value.into(),
            div.value.into(),
            ray.into(),
            ((ray - s.lambda) / s.lambda).into(),
            r_star.into(),
        ]);
        Ok(row)
    })? {
        t.push(row);
    }
    Ok(t)
}

pub fn cmd_selftest(cfg: &ExperimentConfig) -> CliResult<Report> {
    let suite = Suite { seed: cfg.seed, fixtures: cfg.fixtures.clone() };
    let outcomes = run_suite(&suite, cfg.filter.as_deref());
    if outcomes.is_empty() {
        return Err(CliError::Input(format!("filter `{}` selects no criterion", cfg.filter.as_deref().unwrap_or(""))));
    }
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    let failures = outcomes
        .iter()
        .filter(|o| !o.pass)
        .map(|o| format!("criterion {} {}: {}", o.id, o.name, o.detail))
        .collect();
    Ok(Report { table: selftest_table(&outcomes), failures })
}
