//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p siegel-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use siegel_core::mordell::{
    functional_equation_residual, phi_quadrature, phi_quadrature_through, phi_rational, transform_rhs,
    transformation_residual,
};
use siegel_core::pcf::{pcf_ray_closed_form, pcf_ray_integral, pcf_recurrence_residual, pcf_u, pcf_u_at_origin};
use siegel_core::riemann_siegel::{
    completed_zeta, completed_zeta_direct, eta_series_oracle, eta_series_terms, f_upper_classical, f_upper_pcf, zeta,
};
use siegel_core::{c64, Complex64, Error, Method, MordellArgs, PcfArgs, QuadratureConfig, RationalTau, Result};

struct Outcome {
    passed: bool,
    summary: String,
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |m, r| if r.is_nan() { f64::INFINITY } else { m.max(r) })
}

fn form_equivalence(cfg: &QuadratureConfig) -> Result<Outcome> {
    let points = [c64(2.0, 0.0), c64(3.0, 0.0), c64(0.5, 0.0), c64(0.5, 3.0), c64(0.5, 10.0), c64(-0.3, 2.0)];
    let mut worst = 0.0f64;
    for s in points {
        let classical = f_upper_classical(s, cfg)?.value;
        let kernel = f_upper_pcf(s, cfg)?.value;
        worst = worst.max((kernel - classical).norm() / (1.0 + classical.norm()));
    }
    Ok(Outcome {
        passed: worst <= 1e-7,
        summary: format!("max |F_pcf - F_classical|/(1+|F|) = {worst:.2e} (tol 1e-7) over 6 points"),
    })
}

fn zeta_correctness(cfg: &QuadratureConfig) -> Result<Outcome> {
    let mut worst = [0.0f64; 2];
    for i in 0..5 {
        for j in 0..5 {
            let s = c64(0.25 + 1.75 * i as f64 / 4.0, 30.0 * j as f64 / 4.0);
            let oracle = eta_series_oracle(s, eta_series_terms(s))?;
            for (k, m) in [Method::Classical, Method::Pcf].into_iter().enumerate() {
                worst[k] = worst[k].max(rel(zeta(s, cfg, m)?.value, oracle));
            }
        }
    }
    let mut spot = 0.0f64;
    for (s, want) in [(2.0, 1.644_934_066_8), (0.5, -1.460_354_508_8)] {
        for m in [Method::Classical, Method::Pcf] {
            let v = zeta(c64(s, 0.0), cfg, m)?.value;
            spot = spot.max((v - c64(want, 0.0)).norm() / want.abs());
        }
    }
    // the spot values carry ten decimals
    let passed = worst[0] <= 1e-7 && worst[1] <= 1e-7 && spot <= 1e-10;
    Ok(Outcome {
        passed,
        summary: format!(
            "5x5 grid rel err classical {:.2e}, pcf {:.2e} (tol 1e-7); spots zeta(2), zeta(1/2) {:.2e} (tol 1e-10)",
            worst[0], worst[1], spot
        ),
    })
}

fn mordell_closed_form(cfg: &QuadratureConfig) -> Result<Outcome> {
    let parts = [1u32, 2, 3, 5];
    let xs = [c64(0.0, 0.0), c64(0.3, 0.0), c64(0.0, 1.0), c64(1.0, 0.5)];
    let mut worst = 0.0f64;
    let (mut compared, mut degenerate) = (0, 0);
    for m in parts {
        for n in parts {
            let rt = RationalTau::new(m, n)?;
            for x in xs {
                let closed = match phi_rational(x, rt) {
                    Ok(v) => v,
                    Err(Error::DegenerateRationalPoint { .. }) => {
                        degenerate += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let quad = phi_quadrature(MordellArgs::new(x, c64(rt.value(), 0.0))?, cfg)?.value;
                worst = worst.max((closed - quad).norm() / (1.0 + closed.norm()));
                compared += 1;
            }
        }
    }
    let spot_want = c64(0.146_446_609_4, -0.353_553_390_6);
    let spot = (phi_rational(c64(0.0, 0.0), RationalTau::new(1, 1)?)? - spot_want)
        .norm()
        .max((phi_quadrature(MordellArgs::new(c64(0.0, 0.0), c64(1.0, 0.0))?, cfg)?.value - spot_want).norm());
    Ok(Outcome {
        passed: worst <= 1e-9 && spot <= 1e-10,
        summary: format!(
            "max |closed - quad|/(1+|Phi|) = {worst:.2e} (tol 1e-9) over {compared} points, {degenerate} degenerate skipped; Phi(0,1) spot {spot:.1e}"
        ),
    })
}

fn functional_equations(cfg: &QuadratureConfig) -> Result<Outcome> {
    let taus = [c64(1.0, 0.0), c64(2.0, 1.0), c64(0.5, 0.0), c64(0.1, 0.3)];
    let xs = [c64(0.0, 0.0), c64(1.0, 1.0)];
    let (mut fe, mut tr) = (0.0f64, 0.0f64);
    for tau in taus {
        for x in xs {
            let a = MordellArgs::new(x, tau)?;
            fe = fe.max(functional_equation_residual(a, cfg)?);
            tr = tr.max(transformation_residual(a, cfg)?);
        }
    }
    Ok(Outcome {
        passed: fe <= 1e-8 && tr <= 1e-8,
        summary: format!("functional equation {fe:.2e}, transformation {tr:.2e} (tol 1e-8) over 8 points"),
    })
}

fn parabolic_cylinder(cfg: &QuadratureConfig) -> Result<Outcome> {
    let mut recurrence = 0.0f64;
    for a in [1.0, 1.5, 2.0, 2.5] {
        for z in [c64(-3.0, 0.0), c64(-1.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0), c64(3.0, 0.0), c64(0.0, 2.0), c64(1.0, 1.0)] {
            recurrence = recurrence.max(pcf_recurrence_residual(c64(a, 0.0), z, cfg)?);
        }
    }
    let mut origin = 0.0f64;
    for a in [c64(0.0, 0.0), c64(0.5, 0.0), c64(1.0, 0.0), c64(2.0, 0.0), c64(1.0, 1.0)] {
        origin = origin.max(rel(pcf_u(PcfArgs::new(a, c64(0.0, 0.0)), cfg)?, pcf_u_at_origin(a)?));
    }
    let mut ray = 0.0f64;
    for s in [c64(1.0, 0.0), c64(2.0, 1.0), c64(3.0, 0.0)] {
        for u in [c64(0.5, 0.0), c64(0.5, 1.0), c64(1.0, 0.0)] {
            ray = ray.max(rel(pcf_ray_integral(s, u, cfg)?.value, pcf_ray_closed_form(s, u, cfg)?));
        }
    }
    Ok(Outcome {
        passed: recurrence <= 1e-8 && origin <= 1e-10 && ray <= 1e-8,
        summary: format!(
            "recurrence {recurrence:.2e} (tol 1e-8), U(a,0) {origin:.2e} (tol 1e-10), ray identity {ray:.2e} (tol 1e-8)"
        ),
    })
}

/// Critical-line zero bracketed by the oracle's sign change.
fn oracle_zero() -> Result<f64> {
    let cfg = QuadratureConfig::default();
    let completed = |t: f64| -> Result<f64> { Ok(completed_zeta(c64(0.5, t), &cfg, Method::Oracle)?.value.re) };
    let (mut lo, mut hi) = (14.0, 14.3);
    let (flo, fhi) = (completed(lo)?, completed(hi)?);
    assert!(flo * fhi < 0.0, "no sign change in [14, 14.3]");
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if completed(mid)? * flo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn symmetry_and_reality(cfg: &QuadratureConfig) -> Result<Outcome> {
    let points = [c64(2.0, 0.0), c64(0.3, 4.0), c64(0.8, -7.0), c64(1.5, 12.0), c64(-0.5, 3.0)];
    let methods = [Method::Classical, Method::Pcf];
    let mut reflection = 0.0f64;
    for s in points {
        for m in methods {
            let here = completed_zeta_direct(s, cfg, m)?.value;
            let there = completed_zeta_direct(1.0 - s.conj(), cfg, m)?.value;
            reflection = reflection.max(rel(there.conj(), here));
        }
    }
    let mut reality = 0.0f64;
    for t in [0.0, 1.0, 5.0, 14.134725, 20.0] {
        for m in methods {
            let v = completed_zeta_direct(c64(0.5, t), cfg, m)?.value;
            reality = reality.max(v.im.abs() / (1.0 + v.norm()));
        }
    }
    let located = oracle_zero()?;
    let zero = max_of(
        methods
            .into_iter()
            .map(|m| completed_zeta(c64(0.5, 14.134725), cfg, m).map(|r| r.value.norm()))
            .collect::<Result<Vec<_>>>()?,
    );
    Ok(Outcome {
        passed: reflection <= 1e-8 && reality <= 1e-8 && zero <= 1e-4 && (located - 14.134725).abs() < 1e-6,
        summary: format!(
            "reflection {reflection:.2e} (tol 1e-8), critical-line Im {reality:.2e} (tol 1e-8), |completed(1/2+14.134725i)| {zero:.2e} (tol 1e-4), oracle zero at t = {located:.9}"
        ),
    })
}

fn acceleration(cfg: &QuadratureConfig) -> Result<Outcome> {
    let cfg = cfg.with_rel_tol(1e-9);
    let a = MordellArgs::new(c64(0.0, 0.0), c64(0.01, 0.0))?;
    let direct = phi_quadrature(a, &cfg)?;
    let fast = transform_rhs(a, &cfg)?;
    let ratio = direct.nodes_used as f64 / fast.nodes_used as f64;
    let agree = rel(fast.value, direct.value);
    Ok(Outcome {
        passed: ratio >= 5.0 && agree <= 1e-8,
        summary: format!(
            "nodes direct {} / transformed {} = {ratio:.1} (need >= 5), agreement {agree:.2e} (tol 1e-8)",
            direct.nodes_used, fast.nodes_used
        ),
    })
}

fn path_independence(cfg: &QuadratureConfig) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut count = 0;
    for tau in [c64(1.0, 0.0), c64(2.0, 1.0), c64(0.5, 0.0), c64(0.7, 0.4)] {
        for x in [c64(0.0, 0.0), c64(0.3, 0.0), c64(1.0, 0.5), c64(0.0, 1.0)] {
            let a = MordellArgs::new(x, tau)?;
            let mid = phi_quadrature_through(a, 0.5, cfg)?.value;
            for c in [0.3, 0.7] {
                worst = worst.max(rel(phi_quadrature_through(a, c, cfg)?.value, mid));
            }
            count += 1;
        }
    }
    Ok(Outcome {
        passed: worst <= 1e-9,
        summary: format!("max relative change across crossings 0.3/0.5/0.7 = {worst:.2e} (tol 1e-9) over {count} points"),
    })
}

type Criterion = (&'static str, Duration, fn(&QuadratureConfig) -> Result<Outcome>);

fn main() -> ExitCode {
    let cfg = QuadratureConfig::default();
    let criteria: [Criterion; 8] = [
        ("form equivalence", Duration::from_secs(10), form_equivalence),
        ("zeta vs oracle", Duration::from_secs(60), zeta_correctness),
        ("Mordell closed form", Duration::from_secs(30), mordell_closed_form),
        ("functional equation and transformation", Duration::from_secs(20), functional_equations),
        ("parabolic cylinder function", Duration::from_secs(20), parabolic_cylinder),
        ("symmetry and reality", Duration::from_secs(10), symmetry_and_reality),
        ("convergence acceleration", Duration::from_secs(10), acceleration),
        ("path independence", Duration::from_secs(5), path_independence),
    ];
    let mut failures = 0;
    for (k, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run(&cfg);
        let elapsed = start.elapsed();
        let (passed, summary) = match result {
            Ok(o) => (o.passed && elapsed <= budget, o.summary),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "criterion {} {} {name}: {summary}; {:.2} s (budget {} s)",
            k + 1,
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
