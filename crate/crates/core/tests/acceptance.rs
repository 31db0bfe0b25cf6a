//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;
use stationary::arclength::{integrate, InitialData, Trajectory};
use stationary::classify::{classify, classify_axis, BehaviorReport, DriverOptions, Verdict};
use stationary::geometry::{stationary_residual, Similarity};
use stationary::phase::{
    classify_equilibrium, family_jacobian, jacobian_at, predicted_limit, project_to_phase, regime_table,
    representative, unstable_direction_p3, unstable_manifold, Family, RegimeTable, StabilityClass,
};
use stationary::singular::{bounds_from_paper, picard_apply, regularity_limit, solve_axis};
use stationary::verifiers::helicoidal::shrinker_scan;
use stationary::verifiers::{helicoidal_nonexistence_scan, isoparametric_suite, ScanGrid, Verdict as V};
use stationary::Alpha;

type Outcome = Result<String, String>;

fn a(v: f64) -> Alpha {
    Alpha::new(v).expect("nonzero alpha")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs `solve` through the binary and returns the worst deviation from
/// the circle `x² + (z − c)² = ρ²` together with the wall time.
fn solve_circle(alpha: &str, c: f64, rho: f64) -> Result<(f64, Duration), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let csv = dir.path().join("curve.csv");
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_stationary"))
        .args(["solve", "--alpha", alpha, "--z0", "1", "--out"])
        .arg(&csv)
        .env_remove("STATIONARY_OUT_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), || format!("solve --alpha {alpha} failed: {}", String::from_utf8_lossy(&out.stderr)))?;
    let text = std::fs::read_to_string(&csv).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for line in text.lines().skip(1) {
        let v: Vec<f64> =
            line.split(',').map(|f| f.parse::<f64>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
        worst = worst.max((v[1] * v[1] + (v[2] - c).powi(2) - rho * rho).abs());
    }
    Ok((worst, elapsed))
}

fn criterion_1() -> Outcome {
    let (d2, t2) = solve_circle("-2", 0.0, 1.0)?;
    let (d4, t4) = solve_circle("-4", 0.5, 0.5)?;
    let msg =
        format!("alpha -2: {d2:.2e} in {:.3} s; alpha -4: {d4:.2e} in {:.3} s", t2.as_secs_f64(), t4.as_secs_f64());
    ensure(d2 < 1e-8 && d4 < 1e-8 && t2 < Duration::from_secs(1) && t4 < Duration::from_secs(1), || msg.clone())?;
    Ok(msg)
}

fn criterion_2() -> Outcome {
    let mut parts = Vec::new();
    for (alpha, u0) in [(1.0, 1.0), (-2.0, 1.0), (-3.0, 2.0)] {
        let (p, _) = solve_axis(a(alpha), u0).map_err(|e| e.to_string())?;
        let lim = regularity_limit(&p).map_err(|e| e.to_string())?;
        let err = (lim - alpha / u0).abs();
        parts.push(format!("({alpha}, {u0}): {err:.1e}"));
        ensure(err < 1e-4, || format!("({alpha}, {u0}): 2u'/r -> {lim}, expected {}", alpha / u0))?;
    }
    Ok(parts.join("; "))
}

fn criterion_3() -> Outcome {
    let alpha = a(1.0);
    let (u0, eps) = (1.0, 0.5);
    let cfg = bounds_from_paper(alpha, u0, eps).map_err(|e| e.to_string())?;
    ensure(cfg.m_bound == 12.0, || format!("M = {}", cfg.m_bound))?;
    let mut rng = StdRng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let u = common::random_profile(&mut rng, u0, eps, cfg.radius);
        let w = common::random_profile(&mut rng, u0, eps, cfg.radius);
        let tu = picard_apply(&u, alpha, u0).map_err(|e| e.to_string())?;
        let tw = picard_apply(&w, alpha, u0).map_err(|e| e.to_string())?;
        worst = worst.max(tu.c1_distance(&tw) / u.c1_distance(&w));
    }
    ensure(worst <= 0.5 + 1e-6, || format!("observed ratio {worst}"))?;
    Ok(format!("M = 12, worst ratio {worst:.3e} over 50 pairs at R = {:.3e}", cfg.radius))
}

/// Expected classes of P1 and P2 in each of the five regimes.
fn expected_table(alpha: f64) -> RegimeTable {
    use StabilityClass::*;
    let (p1, p2) = if alpha > 0.0 {
        (StableNode, UnstableNode)
    } else if alpha > -2.0 {
        (StableSpiral, UnstableSpiral)
    } else if alpha == -2.0 {
        (Center, Center)
    } else if alpha > -4.0 {
        (UnstableSpiral, StableSpiral)
    } else {
        (UnstableNode, StableNode)
    };
    RegimeTable { p1, p2, p3: Saddle }
}

fn criterion_4() -> Outcome {
    let mut worst_res: f64 = 0.0;
    for alpha in [1.0, -1.0, -2.0, -3.0, -4.0, -5.0] {
        let al = a(alpha);
        let t = regime_table(al);
        ensure(t == expected_table(alpha), || format!("alpha {alpha}: {t:?}"))?;
        let (klass, ev) = classify_equilibrium(&family_jacobian(Family::P3, al));
        ensure(klass == StabilityClass::Saddle, || format!("alpha {alpha}: P3 is {klass:?}"))?;
        ensure(ev[0].re == -1.0 && ev[1].re == 1.0 && ev[0].im == 0.0 && ev[1].im == 0.0, || {
            format!("alpha {alpha}: P3 eigenvalues {ev:?}")
        })?;
        // (−α, 2) against the Jacobian evaluated at the point itself
        let v = unstable_direction_p3(al);
        let n = alpha.hypot(2.0);
        let parallel = (v[0] * 2.0 / n - v[1] * (-alpha / n)).abs();
        let j = jacobian_at(&representative(Family::P3), al);
        let jv = j * nalgebra::Vector2::new(v[0], v[1]);
        let res = (jv[0] - v[0]).hypot(jv[1] - v[1]);
        worst_res = worst_res.max(res).max(parallel);
        ensure(res < 1e-12 && parallel < 1e-12, || format!("alpha {alpha}: residual {res:.2e}, cross {parallel:.2e}"))?;
    }
    Ok(format!("six alphas match; P3 eigenvalues exactly -1, 1; eigenvector residual <= {worst_res:.1e}"))
}

const VERDICT_ALPHAS: [f64; 5] = [1.0, -1.0, -1.8, -3.0, -5.0];

fn verdict_runs() -> Result<(Vec<(Trajectory, BehaviorReport)>, Duration), String> {
    let start = Instant::now();
    let runs = VERDICT_ALPHAS
        .iter()
        .map(|&v| classify_axis(a(v), 1.0, &DriverOptions::default()).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((runs, start.elapsed()))
}

fn criterion_5(runs: &[(Trajectory, BehaviorReport)], elapsed: Duration) -> Outcome {
    let mut parts = Vec::new();
    for (alpha, (_, r)) in VERDICT_ALPHAS.iter().zip(runs) {
        let ev = &r.evidence;
        let want = match *alpha {
            x if x > 0.0 => Verdict::EntireGraph,
            x if x > -2.0 => Verdict::OscillatingGraphOutsideCompact,
            x if x > -4.0 => Verdict::ClosedOscillating,
            _ => Verdict::ClosedBigraph,
        };
        ensure(r.verdict == want, || format!("alpha {alpha}: {:?}, expected {want:?} ({:?})", r.verdict, r.reason))?;
        if want == Verdict::OscillatingGraphOutsideCompact {
            ensure(ev.axis_crossings >= 3, || format!("alpha {alpha}: {} crossings", ev.axis_crossings))?;
        }
        if want == Verdict::ClosedBigraph {
            ensure(ev.z_range[0] > 0.0 && ev.self_intersections == 0, || {
                format!("alpha {alpha}: z_min {}, {} self-intersections", ev.z_range[0], ev.self_intersections)
            })?;
        }
        parts.push(format!("{alpha}: {}", serde_json::to_value(r.verdict).unwrap().as_str().unwrap_or("?")));
    }
    ensure(elapsed < Duration::from_secs(10), || format!("took {:.2} s", elapsed.as_secs_f64()))?;
    Ok(format!("{} in {:.2} s", parts.join(", "), elapsed.as_secs_f64()))
}

/// Largest `|λ r_λ − r|` relative to the size of the two terms of the
/// residual, over all samples.
fn dilation_defect(t: &Trajectory, lambda: f64) -> Result<f64, String> {
    let d = t.dilate(lambda).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for (c, cd) in t.samples.iter().zip(&d.samples) {
        let s = c.surface_sample(0.3).map_err(|e| e.to_string())?;
        let sd = cd.surface_sample(0.3).map_err(|e| e.to_string())?;
        let r = stationary_residual(&s, t.alpha).map_err(|e| e.to_string())?;
        let rd = stationary_residual(&sd, t.alpha).map_err(|e| e.to_string())?;
        let p = s.position;
        let size = s.mean_curvature.abs() + (t.alpha.value() * s.normal.dot(&p) / p.norm_squared()).abs();
        worst = worst.max((rd * lambda - r).abs() / size.max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

fn criterion_6(runs: &[(Trajectory, BehaviorReport)]) -> Outcome {
    let mut trajectories: Vec<&Trajectory> = runs.iter().map(|(t, _)| t).collect();
    let extra = [
        integrate(InitialData::axis(1.0).unwrap(), a(-2.0), 50.0).map_err(|e| e.to_string())?,
        integrate(InitialData::axis(1.0).unwrap(), a(-4.0), 50.0).map_err(|e| e.to_string())?,
        integrate(InitialData::plane(1.0).unwrap(), a(1.0), 50.0).map_err(|e| e.to_string())?,
        integrate(InitialData::plane(1.0).unwrap(), a(-3.0), 50.0).map_err(|e| e.to_string())?,
    ];
    trajectories.extend(extra.iter());
    let mut worst: f64 = 0.0;
    for t in &trajectories {
        let r = t.max_residual().map_err(|e| e.to_string())?;
        ensure(r < 1e-7, || format!("alpha {}: residual {r:.2e}", t.alpha))?;
        worst = worst.max(r);
    }
    let mut worst_scale: f64 = 0.0;
    for (t, r) in runs {
        for lambda in [0.5, 2.0] {
            let d = t.dilate(lambda).map_err(|e| e.to_string())?;
            let v = classify(&d).map_err(|e| e.to_string())?.verdict;
            ensure(v == r.verdict, || format!("alpha {}: verdict {v:?} after dilation by {lambda}", t.alpha))?;
            let rel = dilation_defect(t, lambda)?;
            ensure(rel < 1e-8, || format!("alpha {}: residual scaling off by {rel:.2e} at lambda {lambda}", t.alpha))?;
            worst_scale = worst_scale.max(rel);
        }
    }
    Ok(format!(
        "{} trajectories, max residual {worst:.2e}; dilation keeps verdicts, scaling defect {worst_scale:.1e}",
        trajectories.len()
    ))
}

fn criterion_7() -> Outcome {
    let iso = isoparametric_suite().map_err(|e| e.to_string())?;
    for c in &iso.cells {
        let alpha = c.params["alpha"].as_f64().unwrap();
        let s = &c.params["surface"];
        let v3 = |k: &str| -> [f64; 3] { std::array::from_fn(|i| s[k][i].as_f64().unwrap()) };
        let norm = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let stationary = match s["kind"].as_str().unwrap() {
            "plane" => {
                let (p, n) = (v3("point"), v3("normal"));
                (p[0] * n[0] + p[1] * n[1] + p[2] * n[2]).abs() < 1e-12
            }
            "sphere" => {
                let (d, r) = (norm(v3("center")), s["radius"].as_f64().unwrap());
                (alpha == -2.0 && d < 1e-12) || (alpha == -4.0 && (d - r).abs() < 1e-12)
            }
            _ => false,
        };
        let want = if stationary { V::Stationary } else { V::NotStationary };
        ensure(c.verdict == want, || format!("isoparametric {}: {:?}", c.params, c.verdict))?;
    }
    let grid = ScanGrid::default();
    let hel = helicoidal_nonexistence_scan(&grid).map_err(|e| e.to_string())?;
    for c in &hel.cells {
        ensure(c.params["h"].as_f64() != Some(0.0), || "helicoidal scan includes h = 0".into())?;
        ensure(c.verdict == V::Blocked && c.blocking_coefficient.is_some(), || {
            format!("helicoidal {}: {:?}", c.params, c.verdict)
        })?;
    }
    let shr = shrinker_scan(&grid).map_err(|e| e.to_string())?;
    let mut forced = 0;
    for c in shr.cells.iter().filter(|c| c.params["h"].as_f64() != Some(0.0)) {
        let q1 = c.params["q1"].as_f64().unwrap();
        let want = if q1 != 0.0 { V::Q1ForcedZero } else { V::Consistent };
        ensure(c.verdict == want, || format!("shrinker {}: {:?}", c.params, c.verdict))?;
        forced += usize::from(c.verdict == V::Q1ForcedZero);
    }
    Ok(format!(
        "isoparametric {} cells, helicoidal {} cells blocked, shrinker q1 = 0 forced in {forced} cells with q1 != 0",
        iso.cells.len(),
        hel.cells.len()
    ))
}

fn criterion_8(runs: &[(Trajectory, BehaviorReport)]) -> Outcome {
    let mut worst_analytic: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    let mut worst_end: f64 = 0.0;
    for (t, _) in runs {
        let p = project_to_phase(t).map_err(|e| e.to_string())?;
        let analytic = p.max_misalignment();
        let (fd, checked) = common::five_point_misalignment(&p, t.alpha, 1e-2);
        ensure(analytic < 1e-6 && fd < 1e-6 && checked > 0, || {
            format!("alpha {}: alignment {analytic:.2e}, five-point {fd:.2e} over {checked} points", t.alpha)
        })?;
        let end = unstable_manifold(t.alpha, 1.0).map_err(|e| e.to_string())?.last();
        let target = predicted_limit(t.alpha).ok_or("no predicted limit")?;
        let d = end.distance(&target);
        ensure(d < 1e-4, || format!("alpha {}: manifold ends {d:.2e} from {target:?}", t.alpha))?;
        worst_analytic = worst_analytic.max(analytic);
        worst_fd = worst_fd.max(fd);
        worst_end = worst_end.max(d);
    }
    Ok(format!(
        "alignment {worst_analytic:.1e} (five-point {worst_fd:.1e}); manifold ends within {worst_end:.1e} of its limit"
    ))
}

fn main() -> ExitCode {
    let verdicts = verdict_runs();
    let mut results: Vec<Outcome> = vec![criterion_1(), criterion_2(), criterion_3(), criterion_4()];
    match &verdicts {
        Ok((runs, elapsed)) => {
            results.push(criterion_5(runs, *elapsed));
            results.push(criterion_6(runs));
            results.push(criterion_7());
            results.push(criterion_8(runs));
        }
        Err(e) => {
            results.push(Err(format!("classification failed: {e}")));
            results.push(Err("needs the criterion 5 trajectories".into()));
            results.push(criterion_7());
            results.push(Err("needs the criterion 5 trajectories".into()));
        }
    }
    let mut failed = 0;
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok(msg) => println!("criterion {}: PASS {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
