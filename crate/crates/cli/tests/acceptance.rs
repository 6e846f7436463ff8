//! Acceptance gate: every criterion at its pinned tolerance, one
//! PASS/FAIL line each, non-zero exit if any fails.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use soilmpt::forward::{delta_v, delta_v0_soil_only, scaling_rate_study, Hold, Mode, ObjectModel, Variant};
use soilmpt::greens::{g0, grad_g0, grad_gs, gs, hess_g0, hess_gs, GreensChoice, HalfSpaceContext};
use soilmpt::model::{log_space, Scenario, SoilParams};
use soilmpt::mpt::{
    decomposition_check, load_signature, parse_signature, save_signature, sphere_polarizability, sphere_signature,
};
use soilmpt::quadrature::{hankel_transform, QuadratureSettings, SpectralKernel};
use soilmpt::sources::coil_field;
use soilmpt::{Error, Vec3};
use std::f64::consts::PI;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn settings() -> QuadratureSettings {
    QuadratureSettings::default()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn laplace_limit() -> Outcome {
    let ctx = HalfSpaceContext::new(SoilParams::FREE_SPACE, 1e5);
    let tight = settings().with_rel_tol(1e-12);
    let (mut wg, mut wd, mut wh) = (0.0f64, 0.0f64, 0.0f64);
    for x1 in [0.0, 0.05, 0.1, 0.15, 0.3] {
        for x3 in [0.05, 0.1, 0.15, 0.2, 0.25] {
            for y3 in [-0.1, -0.2, -0.3, -0.4, -0.5] {
                let x = [x1, 0.5 * x1, x3];
                let y = [0.0, 0.0, y3];
                let g = gs(&x, &y, &ctx, &tight).unwrap().value;
                wg = wg.max(rel(g, c(g0(&x, &y).unwrap())));
                let d = grad_gs(&x, &y, &ctx, &tight).unwrap().value;
                let d0 = grad_g0(&x, &y).unwrap();
                let n0 = d0.iter().map(|v| v * v).sum::<f64>().sqrt();
                wd = wd.max((0..3).map(|i| (d[i] - d0[i]).norm()).fold(0.0, f64::max) / n0);
                let h = hess_gs(&x, &y, &ctx, &tight).unwrap().value;
                let h0 = hess_g0(&x, &y).unwrap();
                wh = wh.max((h - h0.to_complex()).frobenius() / h0.frobenius());
            }
        }
    }
    outcome(
        wg <= 1e-9 && wd <= 1e-8 && wh <= 1e-7,
        format!("worst relative error G {wg:.2e} (1e-9), grad {wd:.2e} (1e-8), Hessian {wh:.2e} (1e-7) over 125 pairs"),
    )
}

fn hankel_closed_forms() -> Outcome {
    let s = settings().with_rel_tol(1e-12);
    let mut worst = 0.0f64;
    for h in [0.1, 0.6, 2.0] {
        for rho in [0.0, 0.3, 1.0] {
            let k = SpectralKernel::new(move |kappa: f64| c((-kappa * h).exp()), h);
            let r = (h * h + rho * rho).sqrt();
            let i0 = hankel_transform(&k, 0, rho, &s).unwrap().value;
            worst = worst.max(rel(i0, c(1.0 / r)));
            let i1 = hankel_transform(&k, 1, rho, &s).unwrap().value;
            let e1 = if rho == 0.0 { i1.norm() * h } else { rel(i1, c((1.0 - h / r) / rho)) };
            worst = worst.max(e1);
        }
    }
    outcome(worst <= 1e-10, format!("worst relative error {worst:.2e} (1e-10) over 18 integrals"))
}

fn hessian_structure() -> Outcome {
    let soil = SoilParams::new(1.6, 1.0006);
    let s = settings().with_rel_tol(1e-12);
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut wt, mut wa, mut wf) = (0.0f64, 0.0f64, 0.0f64);
    for omega in [1e4, 1e5, 1e6] {
        let ctx = HalfSpaceContext::new(soil, omega);
        for _ in 0..50 {
            let x: Vec3 = [rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3), rng.gen_range(0.05..0.3)];
            let z: Vec3 = [rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1), rng.gen_range(-0.6..-0.1)];
            let h = hess_gs(&x, &z, &ctx, &s).unwrap().value;
            let n = h.frobenius();
            wt = wt.max(h.trace().norm() / n);
            wa = wa.max(h.max_asymmetry() / n);
            let r = ((x[0] - z[0]).powi(2) + (x[1] - z[1]).powi(2) + (x[2] - z[2]).powi(2)).sqrt();
            let d = 1e-4 * r;
            let mut err = 0.0f64;
            for j in 0..3 {
                let (mut xp, mut xm) = (x, x);
                xp[j] += d;
                xm[j] -= d;
                let gp = grad_gs(&xp, &z, &ctx, &s).unwrap().value;
                let gm = grad_gs(&xm, &z, &ctx, &s).unwrap().value;
                for i in 0..3 {
                    err += ((gp[i] - gm[i]) / (2.0 * d) - h.0[i][j]).norm_sqr();
                }
            }
            wf = wf.max(err.sqrt() / n);
        }
    }
    outcome(
        wt <= 1e-8 && wa <= 1e-9 && wf <= 1e-4,
        format!("worst |trace|/|H| {wt:.2e} (1e-8), asymmetry {wa:.2e} (1e-9), finite difference {wf:.2e} (1e-4) over 150 cases"),
    )
}

fn sphere_endpoints() -> Outcome {
    let alpha = 0.1;
    let mut ws = 0.0f64;
    for mu in [2.0, 10.0, 100.0] {
        let m = sphere_polarizability(alpha, 1e6, mu, 1e-8).unwrap();
        ws = ws.max(rel(m, c(4.0 * PI * alpha.powi(3) * (mu - 1.0) / (mu + 2.0))));
    }
    let pec = rel(sphere_polarizability(alpha, 1e6, 1.0, 1e12).unwrap(), c(-2.0 * PI * alpha.powi(3)));
    let mut sign_ok = true;
    for mu in [1.0, 2.0, 10.0, 100.0] {
        let n0 = 4.0 * PI * alpha.powi(3) * (mu - 1.0) / (mu + 2.0);
        for w in log_space(1e2, 1e8, 60) {
            let m = sphere_polarizability(alpha, 1e6, mu, w).unwrap();
            sign_ok &= m.im >= 0.0 && m.re - n0 <= 1e-12 * n0.abs().max(alpha.powi(3));
        }
    }
    outcome(
        ws <= 1e-6 && pec <= 1e-4 && sign_ok,
        format!("static {ws:.2e} (1e-6), PEC at omega 1e12 {pec:.2e} (1e-4), sign pattern over 60 frequencies {}", if sign_ok { "holds" } else { "violated" }),
    )
}

fn fixed_nu_collapse() -> Outcome {
    let mut worst = 0.0f64;
    for &(alpha, sigma, mu, w) in &[
        (0.1, 1e6, 1.0, 1e3),
        (0.1, 1e6, 1.0, 1e5),
        (0.05, 5.8e7, 1.0, 1e4),
        (0.02, 3.5e7, 1.0, 1e6),
        (0.1, 1e6, 2.0, 1e4),
        (0.01, 1e7, 10.0, 1e5),
        (0.2, 1e5, 1.0, 1e2),
        (0.03, 4.1e7, 50.0, 3e4),
        (0.1, 1e6, 100.0, 1e6),
        (0.005, 6e7, 1.0, 2e5),
    ] {
        let a = sphere_polarizability(alpha, sigma, mu, w).unwrap() / alpha.powi(3);
        let b = sphere_polarizability(alpha / 2.0, sigma, mu, 4.0 * w).unwrap() / (alpha / 2.0).powi(3);
        worst = worst.max(rel(b, a));
    }
    let study = scaling_rate_study(
        &Scenario::reference_sphere(),
        &[0.1, 0.05, 0.025, 0.0125],
        Hold::FixedNu,
        1e5,
        Mode::Integrated,
        &settings(),
    )
    .unwrap();
    outcome(
        worst <= 1e-10 && (study.slope - 3.0).abs() <= 0.01,
        format!("worst m/alpha^3 change {worst:.2e} (1e-10), fixed-nu slope {:.5} (3.00 +- 0.01)", study.slope),
    )
}

fn no_soil_collapse() -> Outcome {
    let mut s = Scenario::reference_sphere();
    s.soil = SoilParams::FREE_SPACE;
    let obj = ObjectModel::from_params(&s.object, None).unwrap();
    let mut worst = 0.0f64;
    for w in log_space(1e3, 1e6, 10) {
        let v = |var| delta_v(&s, &obj, w, var, Mode::Integrated, &settings()).unwrap().value;
        let (a, b, f) = (v(Variant::Vs), v(Variant::Vs0), v(Variant::Vfs));
        worst = worst.max(rel(a, f)).max(rel(b, f)).max(rel(a, b));
    }
    outcome(worst <= 1e-8, format!("worst pairwise relative difference {worst:.2e} (1e-8) over 10 frequencies"))
}

fn soil_trends() -> Outcome {
    let at = |sigma: f64, mu: f64, w: f64| {
        let mut s = Scenario::reference_sphere();
        s.soil = SoilParams::new(sigma, mu);
        delta_v0_soil_only(&s, w, &settings()).unwrap().value.norm()
    };
    let mut pass = true;
    let mut notes = Vec::new();
    for w in [1e5, 1e6] {
        let v: Vec<f64> = [0.01, 0.1, 1.0].iter().map(|&sg| at(sg, 1.0, w)).collect();
        let inc = v[0] < v[1] && v[1] < v[2];
        let mus: Vec<f64> = [1.0006, 1.021, 1.076].iter().map(|&m| at(1.6, m, w)).collect();
        let mu_spread = mus.iter().cloned().fold(f64::MIN, f64::max) - mus.iter().cloned().fold(f64::MAX, f64::min);
        let sigma_spread = (at(1.6, 1.0006, w) - at(0.16, 1.0006, w)).abs();
        let smaller = mu_spread < sigma_spread;
        pass &= inc && smaller;
        notes.push(format!(
            "omega {w:.0e}: sigma trend {}, mu spread {mu_spread:.3e} vs sigma decade {sigma_spread:.3e} {}",
            if inc { "increasing" } else { "NOT increasing" },
            if smaller { "smaller" } else { "NOT smaller" }
        ));
    }
    outcome(pass, notes.join("; "))
}

fn monotonicity() -> Outcome {
    let v = |f: &dyn Fn(&mut Scenario)| {
        let mut s = Scenario::reference_sphere();
        f(&mut s);
        let obj = ObjectModel::from_params(&s.object, None).unwrap();
        delta_v(&s, &obj, 1e5, Variant::Vs, Mode::Integrated, &settings()).unwrap().value.norm()
    };
    let depths: Vec<f64> = [0.2, 0.3, 0.4, 0.5].iter().map(|&d| v(&|s| s.object.z[2] = -d)).collect();
    let sizes: Vec<f64> = [0.0125, 0.025, 0.05, 0.1].iter().map(|&a| v(&|s| s.object.alpha = a)).collect();
    let dec = depths.windows(2).all(|w| w[1] < w[0]);
    let inc = sizes.windows(2).all(|w| w[1] > w[0]);
    outcome(dec && inc, format!("|Vs| over depths {}, over sizes {}", list(&depths), list(&sizes)))
}

fn variant_gap() -> Outcome {
    let gaps: Vec<f64> = [1.6, 0.16, 0.016]
        .iter()
        .map(|&sigma| {
            let mut s = Scenario::reference_sphere();
            s.soil.sigma_s = sigma;
            let obj = ObjectModel::from_params(&s.object, None).unwrap();
            let vs = delta_v(&s, &obj, 1e5, Variant::Vs, Mode::Integrated, &settings()).unwrap().value;
            let vs0 = delta_v(&s, &obj, 1e5, Variant::Vs0, Mode::Integrated, &settings()).unwrap().value;
            (vs - vs0).norm() / vs.norm()
        })
        .collect();
    outcome(gaps.windows(2).all(|w| w[1] < w[0]), format!("|Vs - Vs0|/|Vs| for sigma 1.6, 0.16, 0.016: {}", list(&gaps)))
}

fn interface_continuity() -> Outcome {
    let s = Scenario::reference_sphere();
    let soil = SoilParams::new(1.6, s.soil.mu_rs);
    let ctx = HalfSpaceContext::new(soil, 1e5);
    let tight = settings().with_rel_tol(1e-12);
    let at = |x1: f64, x3: f64| coil_field(&s.excite, &ctx, &[x1, 0.0, x3], GreensChoice::HalfSpace, &tight).unwrap();
    let (mut raw, mut lim) = (0.0f64, 0.0f64);
    let d = 1e-4;
    for x1 in [0.0, 0.1, 0.135, 0.2, 0.5] {
        let (up, dn) = (at(x1, d), at(x1, -d));
        let scale = (up[0].norm_sqr() + up[1].norm_sqr() + up[2].norm_sqr()).sqrt();
        let mismatch = |u: &[Complex64; 3], l: &[Complex64; 3]| {
            let t = (u[0] - l[0]).norm().hypot((u[1] - l[1]).norm());
            let n = (u[2] - l[2] * soil.mu_rs).norm();
            t.max(n) / scale
        };
        raw = raw.max(mismatch(&up, &dn));
        // one-sided limits by linear extrapolation from ±δ, ±2δ
        let (u2, d2) = (at(x1, 2.0 * d), at(x1, -2.0 * d));
        let ul: [Complex64; 3] = std::array::from_fn(|i| 2.0 * up[i] - u2[i]);
        let dl: [Complex64; 3] = std::array::from_fn(|i| 2.0 * dn[i] - d2[i]);
        lim = lim.max(mismatch(&ul, &dl));
    }
    outcome(
        raw <= 1e-4,
        format!("mismatch between x3 = +-1e-4: {raw:.2e} (1e-4); extrapolated one-sided limits agree to {lim:.2e}"),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |p: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_soilmpt"))
            .args(["sweep-frequency", "--variants", "Vs,Vs0,Vfs", "--mode", "integrated", "--parallel", p, "--out"])
            .arg(dir.path().join(format!("p{p}.csv")))
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let read = |ext: &str| fs::read(dir.path().join(format!("p{p}.{ext}"))).unwrap();
        (read("csv"), read("svg"), read("dat"))
    };
    let a = run("1");
    let b = run("8");
    let rows = String::from_utf8_lossy(&a.0).lines().filter(|l| !l.starts_with('#')).count() - 1;
    outcome(
        a == b && rows == 60,
        format!("{rows} rows; csv {}, svg {}, dat {}", same(&a.0, &b.0), same(&a.1, &b.1), same(&a.2, &b.2)),
    )
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
}

fn same(a: &[u8], b: &[u8]) -> &'static str {
    if a == b {
        "identical"
    } else {
        "DIFFER"
    }
}

fn signature_round_trip() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sphere.csv");
    let sig = sphere_signature(0.1, 1e6, 1.0, &log_space(1e2, 1e8, 40)).unwrap();
    save_signature(&sig, &path).unwrap();
    let back = load_signature(&path).unwrap();
    let report = decomposition_check(&back);
    let header = "omega,ReM11,ReM12,ReM13,ReM21,ReM22,ReM23,ReM31,ReM32,ReM33,ImM11,ImM12,ImM13,ImM21,ImM22,ImM23,ImM31,ImM32,ImM33";
    let good = "1e3,-1,0,0,0,-1,0,0,0,-1,1,0,0,0,1,0,0,0,1";
    let asym = "2e3,-1,0.5,0,0,-1,0,0,0,-1,1,0,0,0,1,0,0,0,1";
    let asym_err = parse_signature(&format!("{header}\n{good}\n{asym}\n"));
    let indef = "2e3,-1,0,0,-1,0,-1,1,0,0,-1,0,1";
    let short_header = "omega,ReM11,ReM12,ReM13,ReM22,ReM23,ReM33,ImM11,ImM12,ImM13,ImM22,ImM23,ImM33";
    let indef_err =
        parse_signature(&format!("# provenance\n{short_header}\n1e3,-1,0,0,-1,0,-1,1,0,0,1,0,1\n{indef}\n"));
    let asym_ok = matches!(asym_err, Err(Error::Invariant { row: 3, .. }));
    let indef_ok = matches!(indef_err, Err(Error::Invariant { row: 4, .. }));
    outcome(
        back == sig && report.is_clean() && asym_ok && indef_ok,
        format!(
            "round trip {}, {} decomposition violations, asymmetric entry -> {:?}, Im-indefinite entry -> {:?}",
            if back == sig { "exact" } else { "NOT exact" },
            report.violations.len(),
            asym_err.err(),
            indef_err.err()
        ),
    )
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 12] = [
        ("laplace-limit identity", Duration::from_secs(30), laplace_limit),
        ("hankel closed forms", Duration::from_secs(5), hankel_closed_forms),
        ("half-space Hessian harmonicity and symmetry", Duration::from_secs(120), hessian_structure),
        ("sphere MPT endpoints", Duration::from_secs(10), sphere_endpoints),
        ("fixed-nu alpha^3 collapse", Duration::from_secs(10), fixed_nu_collapse),
        ("no-soil collapse of variants", Duration::from_secs(120), no_soil_collapse),
        ("soil trends", Duration::from_secs(300), soil_trends),
        ("depth and size monotonicity", Duration::from_secs(300), monotonicity),
        ("variant gap closes with conductivity", Duration::from_secs(180), variant_gap),
        ("interface continuity", Duration::from_secs(60), interface_continuity),
        ("determinism across --parallel", Duration::from_secs(600), determinism),
        ("signature round trip and validation", Duration::from_secs(5), signature_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        let took = t.elapsed();
        let pass = o.pass && took <= *budget;
        failed += usize::from(!pass);
        println!(
            "criterion {:>2} {}: {name} | {} | {:.2} s of {} s",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
