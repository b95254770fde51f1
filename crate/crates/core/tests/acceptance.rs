use std::f64::consts::{PI, SQRT_2};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cutlocus_core::calibration::{random_competitor, verify, CalibrationField, VerifyOptions};
use cutlocus_core::cheeger::{lambda0_lower_bound, lambda1_bounds, m_lambda_with, omega_lambda, solve_cheeger, theta_constant};
use cutlocus_core::cutlocus::CutLocusSolver;
use cutlocus_core::exec::{map_indexed, pairwise_sum};
use cutlocus_core::geom2d::{Domain, Point, Vec2};
use cutlocus_core::radial_disk::{beta0_disk, critical_lambdas_disk, energy, solve_beta_disk, Branch};
use cutlocus_core::{oned, ExecMode};

const SEED: u64 = 20_240_601;

enum Status {
    Pass,
    Fail,
    Warn,
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn run(id: &str, title: &str, budget_s: f64, warn_only: bool, f: impl FnOnce() -> Outcome) -> Status {
    let t = Instant::now();
    let o = f();
    let secs = t.elapsed().as_secs_f64();
    let in_time = secs < budget_s;
    let status = match (o.ok && in_time, warn_only) {
        (true, _) => Status::Pass,
        (false, true) => Status::Warn,
        (false, false) => Status::Fail,
    };
    let tag = match status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Warn => "WARN",
    };
    println!(
        "[{tag}] {id:<3} {title}: {} ({secs:.2} s, budget {budget_s} s{})",
        o.detail,
        if in_time { "" } else { ", over budget" }
    );
    status
}

fn square_rho(x: Point) -> f64 {
    if x.norm() <= 0.5 {
        return 0.5;
    }
    let (a, b) = (x.x.abs(), x.y.abs());
    1.0 - (a + b) + SQRT_2 * ((0.5 - a) * (0.5 - b)).max(0.0).sqrt()
}

fn c1_cheeger_square() -> Outcome {
    let c = solve_cheeger(&Domain::unit_square()).unwrap();
    let err = (c.h - (2.0 + PI.sqrt())).abs();
    let ratio = c.cheeger_set.perimeter() / c.cheeger_set.area();
    let rel = (ratio - c.h).abs() / c.h;
    outcome(err <= 1e-9 && rel <= 1e-8, format!("|h - (2+sqrt(pi))| = {err:.2e}, P/|A| rel err = {rel:.2e}"))
}

fn c2_rho_closed_form() -> Outcome {
    let solver = CutLocusSolver::new(Domain::unit_square());
    let n = 201;
    let corners = [(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)].map(|(x, y)| Vec2::new(x, y));
    let errs = map_indexed(ExecMode::Parallel, n * n, |k| {
        let x = Vec2::new(-0.5 + (k % n) as f64 / (n - 1) as f64, -0.5 + (k / n) as f64 / (n - 1) as f64);
        if corners.iter().any(|c| c.dist(x) < 1e-3) {
            return None;
        }
        Some((solver.rho(x).unwrap() - square_rho(x)).abs())
    });
    let (max, count) = errs.into_iter().flatten().fold((0f64, 0), |(m, c), e| (m.max(e), c + 1));
    outcome(max <= 1e-7, format!("max |rho - closed form| = {max:.2e} over {count} points"))
}

fn c3_duality() -> Outcome {
    let d = Domain::unit_square();
    let cheeger = solve_cheeger(&d).unwrap();
    let solver = CutLocusSolver::new(d.clone());
    let n = 1000;
    let h = 1.0 / n as f64;
    let rho = map_indexed(ExecMode::Parallel, n * n, |k| {
        let x = Vec2::new(-0.5 + ((k % n) as f64 + 0.5) * h, -0.5 + ((k / n) as f64 + 0.5) * h);
        solver.rho(x).unwrap()
    });
    let mut worst = 0f64;
    let mut parts = Vec::new();
    for lambda in [4.0, 6.0, 10.0] {
        let integrand: Vec<f64> = rho.iter().map(|r| (1.0 / r).clamp(cheeger.h, lambda) - lambda).collect();
        let quad = pairwise_sum(&integrand) * h * h;
        let omega = omega_lambda(&d, lambda).unwrap();
        let exact = omega.perimeter() - lambda * omega.area();
        let gap = (quad - exact).abs();
        worst = worst.max(gap);
        parts.push(format!("lambda={lambda}: {gap:.2e}"));
    }
    outcome(worst <= 2e-2, format!("duality gaps {}", parts.join(", ")))
}

fn c4_field_invariants() -> Outcome {
    let field = CalibrationField::new(Domain::unit_square(), 4.0).unwrap();
    let opts = VerifyOptions {
        grid_n: 400,
        competitors: 0,
        ..VerifyOptions::default()
    };
    let r = verify(&field, &opts).unwrap();
    let ok = r.unit_norm_error <= 1e-10
        && r.divergence_error <= 1e-3
        && r.arc_trace_mismatch <= 1e-8
        && r.normal_trace_error <= 1e-6
        && r.unit_norm_samples > 0
        && r.divergence_samples > 0
        && r.arc_trace_samples > 0
        && r.normal_trace_samples > 0;
    outcome(
        ok,
        format!(
            "| |q|-1 | = {:.1e}, div err = {:.1e}, arc trace = {:.1e}, normal trace = {:.1e}",
            r.unit_norm_error, r.divergence_error, r.arc_trace_mismatch, r.normal_trace_error
        ),
    )
}

fn c5_primal() -> Outcome {
    let d = Domain::unit_square();
    let lambda = 4.0;
    let c = solve_cheeger(&d).unwrap();
    let m = m_lambda_with(&d, &c, lambda).unwrap().value;
    let min_excess = (0..100)
        .map(|i| {
            let f = random_competitor(&d, SEED, i);
            f.perimeter() - lambda * f.area() - m
        })
        .fold(f64::INFINITY, f64::min);
    outcome(min_excess >= -1e-9, format!("min P(F) - 4|F| - m = {min_excess:.3e} over 100 competitors"))
}

fn oned_grid_beta(lambda: f64, r: f64) -> f64 {
    let n = 100_000;
    let fmin = (0..=n)
        .map(|i| oned::f(r * i as f64 / n as f64, lambda, r))
        .fold(f64::INFINITY, f64::min);
    fmin.min(2.0 * r)
}

fn branch_switch(pred: impl Fn(f64) -> bool, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn c6_oned() -> Outcome {
    let mut beta_err = 0f64;
    for i in 0..20 {
        for j in 0..20 {
            let lambda = 3.0 * i as f64 / 19.0;
            let r = 0.2 + 3.8 * j as f64 / 19.0;
            let s = oned::beta_1d(lambda, r).unwrap();
            beta_err = beta_err.max((s.beta - oned_grid_beta(lambda, r)).abs());
        }
    }
    let mut crit_err = 0f64;
    for j in 0..20 {
        let r = 0.2 + 3.8 * j as f64 / 19.0;
        let (l0, l1) = oned::criticals_1d(r).unwrap();
        let hi = 2.0 / r + 2.0;
        let b0 = branch_switch(|l| oned::beta_1d(l, r).unwrap().branch == Branch::AllZero, 0.0, hi);
        let b1 = branch_switch(|l| oned::beta_1d(l, r).unwrap().branch != Branch::AllOne, 0.0, hi);
        crit_err = crit_err.max((l0 - b0).abs()).max((l1 - b1).abs());
    }
    let exact = oned::criticals_1d(2.0).unwrap() == (0.4, 1.0);
    outcome(
        beta_err <= 1e-6 && crit_err <= 1e-6 && exact,
        format!("beta vs grid {beta_err:.1e}, criticals vs bisection {crit_err:.1e}, (lambda0, lambda1)(2) exact: {exact}"),
    )
}

/// Minimum of the discretized radial energy: piecewise-linear nonincreasing
/// profile on `nodes` graded cells of `[ρ, 1]`, plus a vertical jump at `ρ`.
fn radial_energy_oracle(rho: f64, lambda: f64, r: f64, nodes: usize) -> f64 {
    let t: Vec<f64> = (0..=nodes)
        .map(|i| rho + (1.0 - rho) * (i as f64 / nodes as f64).powi(2))
        .collect();
    let cells: Vec<(f64, f64)> = t.windows(2).map(|w| (0.5 * (w[0] + w[1]), w[1] - w[0])).collect();
    let slopes = |mu: f64| -> Vec<f64> {
        cells
            .iter()
            .map(|&(tm, _)| r * mu / (tm * tm - mu * mu).sqrt())
            .collect()
    };
    let budget = |s: &[f64]| s.iter().zip(&cells).map(|(s, (_, h))| s * h).sum::<f64>();
    let mut s = slopes(rho);
    if budget(&s) > 1.0 {
        let (mut lo, mut hi) = (0.0, rho);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if budget(&slopes(mid)) > 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        s = slopes(lo);
    }
    let drop = budget(&s);
    let area: f64 = s
        .iter()
        .zip(&cells)
        .map(|(s, (tm, h))| r * (r * r + s * s).sqrt() * tm * h)
        .sum();
    let j = area + rho * r * (1.0 - drop);
    2.0 * PI * j + (1.0 - lambda) * PI * rho * rho * r * r
}

fn c7ab_radial() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0f64;
    for _ in 0..10 {
        let r = rng.gen_range(0.3..5.0);
        let lambda = rng.gen_range(0.0..3.0);
        let rho = rng.gen_range(0.05..0.95);
        let e = energy(rho, lambda, r).unwrap();
        let o = radial_energy_oracle(rho, lambda, r, 10_000);
        worst = worst.max((e - o).abs() / o.abs().max(1e-12));
    }
    let mut bounds_ok = true;
    let mut misses = Vec::new();
    for r in [0.5, 0.8, 1.0, 1.2, 2.0, 3.0, 5.0] {
        let (l0, l1) = critical_lambdas_disk(r).unwrap();
        let h = 2.0 / r;
        let (lo, hi) = lambda1_bounds(1.0, h);
        let tol = 1e-7;
        let ok = l0 >= lambda0_lower_bound(h) - tol && l0 <= h + tol && l1 >= lo - tol && l1 <= hi + tol;
        if !ok {
            misses.push(format!("R={r}: ({l0:.6}, {l1:.6})"));
        }
        bounds_ok &= ok;
    }
    outcome(
        worst <= 1e-3 && bounds_ok,
        format!(
            "E vs profile oracle max rel err {worst:.1e}; critical bounds {}",
            if bounds_ok { "hold".to_string() } else { misses.join(", ") }
        ),
    )
}

fn c7c_lambda1_observation() -> Outcome {
    let mut worst = 0f64;
    let mut parts = Vec::new();
    for r in [1.2, 2.0, 5.0] {
        let (_, l1) = critical_lambdas_disk(r).unwrap();
        let target = (2.0 / r).max(1.0 + 1.0 / r);
        worst = worst.max((l1 - target).abs());
        parts.push(format!("R={r}: {l1:.6} vs {target:.6}"));
    }
    outcome(worst <= 1e-3, parts.join(", "))
}

fn c8_strict_gap() -> Outcome {
    let r = 2.0;
    let (l0, l1) = critical_lambdas_disk(r).unwrap();
    let mid = 0.5 * (l0 + l1);
    let gap = beta0_disk(mid, r) - solve_beta_disk(mid, r).unwrap().beta;
    let j_below = solve_beta_disk(0.95, r).unwrap().jump;
    let j_above = solve_beta_disk(1.05, r).unwrap().jump;
    outcome(
        gap >= 1e-3 && j_below <= 1e-8 && j_above >= 1e-3,
        format!("beta0 - beta at {mid:.4} = {gap:.4}, jump(0.95) = {j_below:.1e}, jump(1.05) = {j_above:.4}"),
    )
}

fn random_domain(rng: &mut ChaCha8Rng) -> Domain {
    if rng.gen_bool(0.2) {
        let c = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        return Domain::Disk(cutlocus_core::geom2d::Disk::new(c, rng.gen_range(0.2..2.0)).unwrap());
    }
    let box_ = Domain::Polygon(
        cutlocus_core::geom2d::ConvexPolygon::rectangle(-1.0, -1.0, 1.0, 1.0).unwrap(),
    );
    loop {
        let p = random_competitor(&box_, rng.gen(), rng.gen());
        if p.area() > 0.05 {
            return Domain::Polygon(p);
        }
    }
}

fn c9_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let samples = 1000;
    let mut failures: Vec<String> = Vec::new();
    let domains: Vec<Domain> = (0..25).map(|_| random_domain(&mut rng)).collect();
    let polys: Vec<(&Domain, CutLocusSolver)> = domains
        .iter()
        .filter(|d| matches!(d, Domain::Polygon(_)))
        .map(|d| (d, CutLocusSolver::new(d.clone())))
        .collect();
    let cheegers: Vec<_> = domains.iter().map(|d| solve_cheeger(d).unwrap()).collect();

    let mut bad = 0;
    for _ in 0..samples {
        let (d, s) = &polys[rng.gen_range(0..polys.len())];
        let bb = d.bbox();
        let x = loop {
            let x = Vec2::new(rng.gen_range(bb.min.x..bb.max.x), rng.gen_range(bb.min.y..bb.max.y));
            if d.contains(x, 0.0) {
                break x;
            }
        };
        let lo = d.dist_to_complement(x);
        let a = rng.gen_range(lo..s.inradius());
        let b = rng.gen_range(lo..s.inradius());
        let (d1, d2) = (a.min(b), a.max(b));
        if s.alpha(x, d2).unwrap() < s.alpha(x, d1).unwrap() - 1e-12 {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("alpha monotone: {bad}"));
    }

    let mut bad = 0;
    for _ in 0..samples {
        let (d, s) = &polys[rng.gen_range(0..polys.len())];
        let Domain::Polygon(p) = d else { unreachable!() };
        let a = rng.gen_range(0.0..0.999) * s.inradius();
        let b = rng.gen_range(0.0..0.999) * s.inradius();
        let (d1, d2) = (a.min(b), a.max(b));
        let e1 = p.erode(d1).unwrap();
        let e2 = p.erode(d2).unwrap();
        if e2.area() > e1.area() + 1e-12 || e2.vertices().iter().any(|v| !e1.contains(*v, 1e-9)) {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("erosion monotone: {bad}"));
    }

    let (mut concave_bad, mut nested_bad, mut theta_bad) = (0, 0, 0);
    for _ in 0..samples {
        let k = rng.gen_range(0..domains.len());
        let (d, c) = (&domains[k], &cheegers[k]);
        let mut ls = [0.0; 3].map(|_| rng.gen_range(0.0..c.h + 10.0));
        ls.sort_by(f64::total_cmp);
        let m = ls.map(|l| m_lambda_with(d, c, l).unwrap().value);
        let w = if ls[2] > ls[0] { (ls[1] - ls[0]) / (ls[2] - ls[0]) } else { 0.0 };
        if m[1] < (1.0 - w) * m[0] + w * m[2] - 1e-9 || m[2] > m[0] + 1e-12 {
            concave_bad += 1;
        }

        let lo = rng.gen_range(c.h..c.h + 10.0);
        let hi = rng.gen_range(lo..c.h + 10.0);
        let (a, b) = (omega_lambda(d, lo).unwrap(), omega_lambda(d, hi).unwrap());
        let step = a.perimeter() / 64.0;
        if a.area() > b.area() + 1e-12 || a.sample_boundary(step).iter().any(|x| !b.contains(*x, 1e-9)) {
            nested_bad += 1;
        }
        if theta_constant(&a) > lo / a.lambda_ratio() + 1e-9 {
            theta_bad += 1;
        }
    }
    for (name, n) in [("m concave", concave_bad), ("Omega nested", nested_bad), ("theta bound", theta_bad)] {
        if n > 0 {
            failures.push(format!("{name}: {n}"));
        }
    }

    let mut bad = 0;
    for _ in 0..samples {
        let r = rng.gen_range(0.2..5.0);
        let lambda = rng.gen_range(0.0..2.0 / r + 3.0);
        let beta = solve_beta_disk(lambda, r).unwrap().beta;
        let b0 = beta0_disk(lambda, r);
        let one = oned::beta_1d(lambda, r).unwrap().beta;
        let b0_1d = oned::beta0_1d(lambda, r);
        if beta < b0 - PI * r * r - 1e-9 || beta > b0 + 1e-9 || one < b0_1d - 2.0 * r - 1e-9 || one > b0_1d + 1e-9 {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("sandwich: {bad}"));
    }

    let ok = failures.is_empty();
    outcome(
        ok,
        if ok {
            format!("6 suites x {samples} samples, no violations")
        } else {
            failures.join(", ")
        },
    )
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let results = [
        run("1", "Cheeger constant of the square", 0.1, false, c1_cheeger_square),
        run("2", "rho matches the square closed form", 5.0, false, c2_rho_closed_form),
        run("3", "duality certificate, 1000^2 midpoint rule", 30.0, false, c3_duality),
        run("4", "field invariants at lambda = 4, grid 400", 20.0, false, c4_field_invariants),
        run("5", "primal optimality against 100 competitors", 5.0, false, c5_primal),
        run("6", "1D closed forms against grid oracles", 5.0, false, c6_oned),
        run("7ab", "radial energy oracle and critical bounds", 60.0, false, c7ab_radial),
        run("7c", "lambda1 = max(2/R, 1 + 1/R) observation", 60.0, true, c7c_lambda1_observation),
        run("8", "strict gap and jump onset, R = 2", 5.0, false, c8_strict_gap),
        run("9", "property suites", 30.0, false, c9_properties),
    ];
    if results.iter().any(|s| matches!(s, Status::Fail)) {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
