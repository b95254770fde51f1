use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cutlocus_core::calibration::{export_field_samples, verify, CalibrationField, VerifyOptions};
use cutlocus_core::cheeger::{lambda0_lower_bound, lambda1_bounds, m_lambda_with, omega_lambda, solve_cheeger};
use cutlocus_core::config::Config;
use cutlocus_core::cutlocus::CutLocusSolver;
use cutlocus_core::geom2d::Domain;
use cutlocus_core::io::{emit_svg, format_sig9, round_value, Cell, Report, Scene, Table};
use cutlocus_core::radial_disk::{critical_lambdas_disk, linspace, sweep, beta0_disk};
use cutlocus_core::{oned, ExecMode, Result};

#[derive(Parser)]
#[command(name = "cutlocus", version, about = "Cheeger sets, cut-locus potentials and calibration fields on planar convex domains")]
struct Cli {
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Disable data-parallel sampling.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct DomainArg {
    /// Domain JSON file; defaults to the unit square centred at the origin.
    #[arg(long)]
    domain: Option<PathBuf>,
}

impl DomainArg {
    fn load(&self) -> Result<Domain> {
        match &self.domain {
            Some(p) => Domain::from_json(&std::fs::read_to_string(p)?),
            None => Ok(Domain::unit_square()),
        }
    }
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    competitors: Option<usize>,
    #[arg(long)]
    band: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cheeger constant and Cheeger set.
    Cheeger {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Cut-locus potential on a grid.
    Potential {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Number of level sets drawn in the SVG.
        #[arg(long, default_value_t = 8)]
        levels: usize,
    },
    /// Optimal set of m(λ, D).
    Omega {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Calibration field samples and streamlines.
    Calibrate {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 32)]
        seeds: usize,
    },
    /// β(λ) sweep on a disk.
    Radial {
        #[arg(long = "R")]
        r: f64,
        #[arg(long)]
        lambda_min: f64,
        #[arg(long)]
        lambda_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Critical values λ0, λ1 on disks over a range of radii.
    RadialCriticals {
        #[arg(long = "R-min")]
        r_min: f64,
        #[arg(long = "R-max")]
        r_max: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-dimensional problem on (−R, R).
    Oned {
        #[arg(long = "R")]
        r: f64,
        #[arg(long)]
        lambda: f64,
    },
    /// Full numerical certificate for one or more λ.
    VerifyAll {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long, value_delimiter = ',', default_values_t = [4.0, 6.0, 10.0])]
        lambda: Vec<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config> {
    let mut cfg = match &cli.config {
        Some(p) => Config::from_file(p)?,
        None => Config::default(),
    };
    if cli.sequential {
        cfg.exec = ExecMode::Sequential;
    }
    Ok(cfg)
}

fn apply_grid(cfg: &mut Config, g: &GridArgs) -> Result<()> {
    if let Some(v) = g.grid {
        cfg.grid = v;
    }
    if let Some(v) = g.seed {
        cfg.seed = v;
    }
    if let Some(v) = g.competitors {
        cfg.competitors = v;
    }
    if let Some(v) = g.band {
        cfg.band = v;
    }
    cfg.validate()
}

fn print_json(v: Value) -> Result<()> {
    let mut v = v;
    round_value(&mut v);
    println!("{}", serde_json::to_string_pretty(&v)?);
    Ok(())
}

fn emit_table(t: &Table, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => t.write(p),
        None => {
            print!("{}", t.to_csv()?);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut cfg = load_config(&cli)?;
    let csv_default = cfg.outputs.csv.clone();
    let svg_default = cfg.outputs.svg.clone();
    let report_default = cfg.outputs.report.clone();
    match &cli.cmd {
        Cmd::Cheeger { domain, report } => {
            let d = domain.load()?;
            let c = solve_cheeger(&d)?;
            println!("h_D = {}", format_sig9(c.h));
            println!("delta_star = {}", format_sig9(c.delta_star));
            println!("cheeger_area = {}", format_sig9(c.cheeger_set.area()));
            println!("cheeger_perimeter = {}", format_sig9(c.cheeger_set.perimeter()));
            println!("lambda_D = {}", format_sig9(c.lambda_d));
            println!("theta_D = {}", format_sig9(c.theta_d));
            if let Some(p) = report.as_ref().or(report_default.as_ref()) {
                Report {
                    inputs: json!({ "domain": d }),
                    config: cfg,
                    checks: vec![],
                    summary: &c,
                }
                .write(p)?;
            }
        }
        Cmd::Potential {
            domain,
            grid,
            out,
            svg,
            levels,
        } => {
            let d = domain.load()?;
            let n = grid.unwrap_or(cfg.grid);
            let solver = CutLocusSolver::with_tolerance(d.clone(), cfg.bisection_tol);
            let g = solver.sample_rho_grid(n, cfg.exec)?;
            let mut t = Table::new(&["x", "y", "rho"]);
            for (x, rho) in g.samples() {
                t.push(vec![x.x.into(), x.y.into(), rho.into()]);
            }
            emit_table(&t, out.as_deref().or(csv_default.as_deref()))?;
            if let Some(p) = svg.as_ref().or(svg_default.as_ref()) {
                let mut scene = Scene::new(d);
                let r = solver.inradius();
                for k in 1..=*levels {
                    let delta = r * k as f64 / (*levels + 1) as f64;
                    scene.arcs.extend(solver.level_arcs(delta)?.into_iter().map(|(_, a)| a));
                }
                emit_svg(&scene, p)?;
            }
        }
        Cmd::Omega { domain, lambda, svg } => {
            let d = domain.load()?;
            let c = solve_cheeger(&d)?;
            let m = m_lambda_with(&d, &c, *lambda)?;
            let omega = omega_lambda(&d, *lambda)?;
            print_json(json!({
                "lambda": lambda,
                "h_D": c.h,
                "m": m.value,
                "area": omega.area(),
                "perimeter": omega.perimeter(),
                "lambda_ratio": omega.lambda_ratio(),
                "optimal": m.optimal_set.is_some(),
            }))?;
            if let Some(p) = svg.as_ref().or(svg_default.as_ref()) {
                let mut scene = Scene::new(d);
                scene.regions.push(omega);
                emit_svg(&scene, p)?;
            }
        }
        Cmd::Calibrate {
            domain,
            lambda,
            grid,
            out,
            svg,
            seeds,
        } => {
            let d = domain.load()?;
            let c = solve_cheeger(&d)?;
            let field = CalibrationField::with_cheeger(d.clone(), c, *lambda, cfg.bisection_tol)?;
            let n = grid.unwrap_or(cfg.grid);
            let samples = export_field_samples(&field, n, cfg.exec)?;
            let mut t = Table::new(&["x", "y", "qx", "qy", "div", "region"]);
            for s in &samples {
                let (qx, qy) = s.q.map_or((f64::NAN, f64::NAN), |q| (q.x, q.y));
                t.push(vec![
                    s.x.x.into(),
                    s.x.y.into(),
                    qx.into(),
                    qy.into(),
                    s.div.into(),
                    Cell::Text(s.region.to_string()),
                ]);
            }
            emit_table(&t, out.as_deref().or(csv_default.as_deref()))?;
            if let Some(p) = svg.as_ref().or(svg_default.as_ref()) {
                let mut scene = Scene::new(d);
                scene.regions.push(field.omega().clone());
                scene.regions.push(field.cheeger_set().clone());
                let step = 2e-3 * field.domain().bbox().diagonal();
                scene.streamlines = field.streamlines(*seeds, step);
                emit_svg(&scene, p)?;
            }
        }
        Cmd::Radial {
            r,
            lambda_min,
            lambda_max,
            steps,
            out,
        } => {
            let sols = sweep(*r, &linspace(*lambda_min, *lambda_max, *steps), cfg.exec)?;
            let mut t = Table::new(&["lambda", "beta", "beta0", "rhoBar", "jump", "branch"]);
            for s in sols {
                t.push(vec![
                    s.lambda.into(),
                    s.beta.into(),
                    beta0_disk(s.lambda, *r).into(),
                    s.rho_bar.into(),
                    s.jump.into(),
                    Cell::Text(format!("{:?}", s.branch)),
                ]);
            }
            emit_table(&t, out.as_deref().or(csv_default.as_deref()))?;
        }
        Cmd::RadialCriticals {
            r_min,
            r_max,
            steps,
            out,
        } => {
            let radii = linspace(*r_min, *r_max, *steps);
            let rows: Vec<_> = radii
                .iter()
                .map(|&r| critical_lambdas_disk(r).map(|l| (r, l)))
                .collect::<Result<_>>()?;
            let mut t = Table::new(&[
                "R",
                "lambda0",
                "lambda1",
                "lambda0_star",
                "h",
                "lambda1_lower",
                "lambda1_upper",
            ]);
            for (r, (l0, l1)) in rows {
                let h = 2.0 / r;
                let (lo, hi) = lambda1_bounds(1.0, h);
                t.push(vec![
                    r.into(),
                    l0.into(),
                    l1.into(),
                    lambda0_lower_bound(h).into(),
                    h.into(),
                    lo.into(),
                    hi.into(),
                ]);
            }
            emit_table(&t, out.as_deref().or(csv_default.as_deref()))?;
        }
        Cmd::Oned { r, lambda } => {
            let s = oned::beta_1d(*lambda, *r)?;
            let (l0, l1) = oned::criticals_1d(*r)?;
            print_json(json!({
                "lambda": s.lambda,
                "R": s.r,
                "alphaC": s.alpha_c,
                "beta": s.beta,
                "beta0": oned::beta0_1d(s.lambda, s.r),
                "branch": s.branch,
                "lambda0": l0,
                "lambda1": l1,
            }))?;
        }
        Cmd::VerifyAll {
            domain,
            lambda,
            grid,
            report,
        } => {
            apply_grid(&mut cfg, grid)?;
            let d = domain.load()?;
            let c = solve_cheeger(&d)?;
            let opts = VerifyOptions::from(&cfg);
            let mut checks = Vec::new();
            let mut reports = Vec::new();
            for &l in lambda {
                let field = CalibrationField::with_cheeger(d.clone(), c.clone(), l, cfg.bisection_tol)?;
                let rep = verify(&field, &opts)?;
                for mut chk in rep.checks(&cfg.tolerances) {
                    println!(
                        "lambda={} {:<13} value={:<16} tol={:<12} {}",
                        format_sig9(l),
                        chk.name,
                        format_sig9(chk.value),
                        format_sig9(chk.tolerance),
                        if chk.pass { "PASS" } else { "FAIL" }
                    );
                    chk.name = format!("{}@lambda={}", chk.name, format_sig9(l));
                    checks.push(chk);
                }
                reports.push(rep);
            }
            let pass = checks.iter().all(|c| c.pass);
            if let Some(p) = report.as_ref().or(report_default.as_ref()) {
                Report {
                    inputs: json!({ "domain": d, "lambda": lambda }),
                    config: cfg.clone(),
                    checks,
                    summary: json!({ "pass": pass, "h_D": c.h, "reports": reports }),
                }
                .write(p)?;
            }
            if !pass {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
