//! Command dispatch.

use crate::args::{Cli, Command, CommonArgs, SweepArgs};
use crate::plot::{emit_plot, PlotSpec};
use crate::table::{num, Table};
use crate::CliError;
use sha2::{Digest, Sha256};
use soilmpt::forward::{scaling_rate_study, sweep, Mode, ObjectModel, RecordStatus, Variant, VoltageRecord};
use soilmpt::model::{log_space, validate_scenario, ObjectShape, Scenario, SoilParams};
use soilmpt::mpt::{decomposition_check, load_signature, save_signature, sphere_signature, MptSignature};
use soilmpt::quadrature::QuadratureSettings;
use std::fs;
use std::path::{Path, PathBuf};

pub const RECORD_COLUMNS: [&str; 9] =
    ["omega", "variant", "ReV", "ImV", "ReV_over_omega", "ImV_over_omega", "nu", "epsilon", "status"];

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::SweepFrequency(a) => run_sweep(&a.common, &a.variants, "sweep-frequency", None, |s| Ok(vec![s])),
        Command::SweepDepth { sweep, depths } => {
            run_sweep(&sweep.common, &sweep.variants, "sweep-depth", Some("depth"), |s| {
                Ok(depths
                    .iter()
                    .map(|&d| {
                        let mut t = s.clone();
                        t.object.z[2] = -d;
                        t
                    })
                    .collect())
            })
        }
        Command::SweepSize { sweep: SweepArgs { common, variants }, alphas } => {
            run_sweep(&common, &variants, "sweep-size", Some("alpha"), |s| {
                if !matches!(s.object.shape, ObjectShape::Sphere) {
                    return Err(CliError::Validation("sweep-size needs a sphere object".into()));
                }
                Ok(alphas
                    .iter()
                    .map(|&a| {
                        let mut t = s.clone();
                        t.object.alpha = a;
                        t
                    })
                    .collect())
            })
        }
        Command::SoilResponse { common, sigmas, murs } => {
            run_sweep(&common, &[Variant::V0SoilOnly], "soil-response", Some("sigma_s,mu_rs"), |s| {
                Ok(sigmas
                    .iter()
                    .flat_map(|&sg| murs.iter().map(move |&mu| (sg, mu)))
                    .map(|(sg, mu)| {
                        let mut t = s.clone();
                        t.soil = SoilParams::new(sg, mu);
                        t
                    })
                    .collect())
            })
        }
        Command::MptSphere { alpha, sigma, mur, omin, omax, n, out } => {
            if !(omin > 0.0 && omax > omin && n >= 2) {
                return Err(CliError::Validation("need 0 < omin < omax and n >= 2".into()));
            }
            let sig = sphere_signature(alpha, sigma, mur, &log_space(omin, omax, n))?;
            save_signature(&sig, &out)?;
            println!("wrote {} entries to {}", sig.entries().len(), out.display());
            Ok(())
        }
        Command::Validate { scenario, signature } => validate(scenario.as_deref(), signature.as_deref()),
        Command::RateStudy { scenario, out, alphas, hold, omega, mode, tol } => {
            let settings = checked_settings(&tol.settings())?;
            let (s, hash) = load_scenario(scenario.as_deref())?;
            let study = scaling_rate_study(&s, &alphas, hold, omega, mode, &settings)?;
            let mut t = Table::new(&["alpha", "sigma_star", "ReV", "ImV", "absV"]);
            t.meta = metadata("rate-study", &hash, &settings, mode);
            t.meta.push(format!("hold {hold:?} omega {}", num(omega)));
            t.meta.push(format!(
                "slope {} intercept {} residual {}",
                num(study.slope),
                num(study.intercept),
                num(study.residual)
            ));
            for i in 0..study.alphas.len() {
                let v = study.values[i];
                t.rows.push(vec![num(study.alphas[i]), num(study.sigma_stars[i]), num(v.re), num(v.im), num(v.norm())]);
            }
            t.write_csv(&out)?;
            println!("slope {:.4} (rms residual {:.2e})", study.slope, study.residual);
            Ok(())
        }
    }
}

fn checked_settings(s: &QuadratureSettings) -> Result<QuadratureSettings, CliError> {
    s.validate()?;
    Ok(*s)
}

/// The scenario and the SHA-256 of its bytes; the built-in reference
/// scenario when no path is given.
fn load_scenario(path: Option<&Path>) -> Result<(Scenario, String), CliError> {
    let (s, bytes) = match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?;
            let s = Scenario::from_json(&text)
                .map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?;
            (s, text.into_bytes())
        }
        None => {
            let s = Scenario::reference_sphere();
            let json = s.to_json();
            (s, json.into_bytes())
        }
    };
    check_scenario(&s)?;
    Ok((s, hex(&Sha256::digest(&bytes))))
}

fn check_scenario(s: &Scenario) -> Result<(), CliError> {
    let v = validate_scenario(s);
    if v.is_empty() {
        return Ok(());
    }
    Err(CliError::Validation(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\n")))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn metadata(command: &str, hash: &str, t: &QuadratureSettings, mode: Mode) -> Vec<String> {
    vec![
        format!("soilmpt {} {command}", env!("CARGO_PKG_VERSION")),
        format!("scenario_sha256 {hash}"),
        format!(
            "tolerances rel_tol={} abs_tol={} max_intervals={} accel_terms={} strategy={:?}",
            num(t.rel_tol),
            num(t.abs_tol),
            t.max_intervals,
            t.accel_terms,
            t.strategy
        ),
        format!("mode {mode:?}"),
    ]
}

fn record_cells(r: &VoltageRecord) -> Vec<String> {
    let status = match &r.status {
        RecordStatus::Ok => "ok".to_string(),
        RecordStatus::Failed(m) => format!("failed: {m}"),
    };
    vec![
        num(r.omega),
        r.variant.to_string(),
        num(r.value.re),
        num(r.value.im),
        num(r.value_over_omega.re),
        num(r.value_over_omega.im),
        num(r.diagnostics.nu),
        num(r.diagnostics.epsilon),
        status,
    ]
}

fn base_dir(path: Option<&Path>) -> Option<PathBuf> {
    path.and_then(|p| p.parent()).map(Path::to_path_buf)
}

/// Runs a frequency sweep for every scenario produced by `expand`. The
/// parameter columns named in `params` (comma separated) lead each row.
fn run_sweep(
    a: &CommonArgs,
    variants: &[Variant],
    command: &str,
    params: Option<&str>,
    expand: impl FnOnce(Scenario) -> Result<Vec<Scenario>, CliError>,
) -> Result<(), CliError> {
    let settings = checked_settings(&a.tol.settings())?;
    let (mut base, hash) = load_scenario(a.scenario.as_deref())?;
    if let (Some(lo), Some(hi), Some(n)) = (a.omin, a.omax, a.n) {
        if !(lo > 0.0 && hi >= lo && n >= 1 && (n == 1 || hi > lo)) {
            return Err(CliError::Validation("need 0 < omin <= omax, n >= 1, and omin < omax when n > 1".into()));
        }
        base.frequencies = log_space(lo, hi, n);
    }
    let dir = base_dir(a.scenario.as_deref());
    let scenarios = expand(base)?;
    let param_names: Vec<&str> = params.map(|p| p.split(',').collect()).unwrap_or_default();

    let mut plans: Vec<(Vec<String>, Scenario, ObjectModel)> = Vec::new();
    for s in scenarios {
        check_scenario(&s)?;
        let prefix = match command {
            "sweep-depth" => vec![num(-s.object.z[2])],
            "sweep-size" => vec![num(s.object.alpha)],
            "soil-response" => vec![num(s.soil.sigma_s), num(s.soil.mu_rs)],
            _ => vec![],
        };
        let object = ObjectModel::from_params(&s.object, dir.as_deref())?;
        plans.push((prefix, s, object));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.parallel)
        .build()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    let results: Vec<Vec<VoltageRecord>> =
        pool.install(|| plans.iter().map(|(_, s, obj)| sweep(s, obj, variants, a.mode, &settings)).collect());

    let headers: Vec<&str> = param_names.iter().copied().chain(RECORD_COLUMNS).collect();
    let mut t = Table::new(&headers);
    t.meta = metadata(command, &hash, &settings, a.mode);
    let mut failed = 0;
    for ((prefix, _, _), records) in plans.iter().zip(&results) {
        for r in records {
            failed += usize::from(!r.status.is_ok());
            t.rows.push(prefix.iter().cloned().chain(record_cells(r)).collect());
        }
    }
    t.write_csv(&a.out)?;
    let dat = a.out.with_extension("dat");
    fs::write(&dat, t.to_dat("omega")?).map_err(|e| CliError::Io(format!("{}: {e}", dat.display())))?;
    if !a.no_plot {
        match emit_plot(&a.out, &PlotSpec::frequency(&a.plot_y), &a.out.with_extension("svg")) {
            Err(CliError::EmptyInput) if failed > 0 => {}
            other => other?,
        }
    }
    if failed > 0 {
        return Err(CliError::Numerical(format!(
            "{failed} of {} records failed; see the status column of {}",
            t.rows.len(),
            a.out.display()
        )));
    }
    println!("wrote {} rows to {}", t.rows.len(), a.out.display());
    Ok(())
}

fn signature_violations(sig: &MptSignature) -> Vec<String> {
    decomposition_check(sig)
        .violations
        .iter()
        .map(|v| format!("entry {} (omega {}): {:?}: {}", v.index, num(v.omega), v.kind, v.detail))
        .collect()
}

fn validate(scenario: Option<&Path>, signature: Option<&Path>) -> Result<(), CliError> {
    let mut problems = Vec::new();
    if let Some(p) = scenario {
        match load_scenario(Some(p)) {
            Err(e) => problems.push(e.to_string()),
            Ok((s, _)) => match ObjectModel::from_params(&s.object, base_dir(Some(p)).as_deref()) {
                Err(e) => problems.push(format!("object.shape: {e}")),
                Ok(ObjectModel::Signature(sig)) => problems.extend(signature_violations(&sig)),
                Ok(_) => {}
            },
        }
    }
    if let Some(p) = signature {
        match load_signature(p) {
            Err(e) => problems.push(format!("{}: {e}", p.display())),
            Ok(sig) => problems.extend(signature_violations(&sig)),
        }
    }
    if problems.is_empty() {
        println!("ok");
        Ok(())
    } else {
        Err(CliError::Validation(problems.join("\n")))
    }
}
