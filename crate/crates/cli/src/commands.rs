use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use kgl_core::germs::{validate as validate_spec, Germ, GermSpec};
use kgl_core::kcone::{PeriodicFunction, DEFAULT_GRID, DEFAULT_TOL};
use kgl_core::matrix::{eigen_data, trace_dichotomy};
use kgl_core::potential::{AddWSquare, Calibration, Potential};
use kgl_core::scaled::{to_scaled_point, ScaledPoint};
use kgl_core::verification::{self, containment, lelong, levi, sampling::rng, SamplingMargins, VerificationReport};
use kgl_core::{Error, InvariantFunction};
use num_complex::Complex64;

use crate::plot;

pub const ALL_SUITES: [&str; 5] = ["invariance", "levi", "foliation", "containment", "lelong"];

/// Containment defaults per family.
pub const ENOKI_R2: f64 = 2.0;
pub const ENOKI_N_MAX: usize = 20;
pub const INTERMEDIATE_R: f64 = 0.5;
pub const INTERMEDIATE_R_PRIME: f64 = 1.0;
pub const INTERMEDIATE_N: (usize, usize) = (4, 40);
pub const IH_BAND: (f64, f64, f64) = (1.0, std::f64::consts::E, 1.0);
pub const IH_N_MAX: usize = 10;

/// Lelong defaults: radii decades and the tolerance on the estimate.
pub const LELONG_DECADES: (i32, i32) = (2, 6);
pub const LELONG_TOL_ONE: f64 = 1e-3;
pub const LELONG_TOL_ZERO: f64 = 1e-2;

pub type CmdResult = Result<u8, Error>;

/// Inline JSON when it looks like an object, otherwise a path.
fn read_source(arg: &str) -> Result<String, Error> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| Error::InvalidArgument(format!("cannot read {arg}: {e}")))
    }
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn load_germ(arg: &str) -> Result<Germ, Error> {
    validate_spec(&GermSpec::from_json(&read_source(arg)?)?)
}

fn load_psi(arg: Option<&str>) -> Result<Option<PeriodicFunction>, Error> {
    arg.map(|a| Ok(PeriodicFunction::from_json(&read_source(a)?)?)).transpose()
}

/// `psi` period that `u` requires for `germ`, if any.
pub fn psi_period(germ: &Germ) -> Result<Option<f64>, Error> {
    Ok(match germ {
        Germ::Enoki(_) => None,
        Germ::Intermediate(g) => Some((g.p() as f64).ln()),
        Germ::InoueHirzebruch(g) => Some(eigen_data(&g.matrix())?.lambda1.ln()),
    })
}

/// `u` for the germ, with `psi = 0` by default for the families that need one.
pub fn build_function(
    germ: &Germ,
    psi: Option<PeriodicFunction>,
    tol: Option<f64>,
) -> Result<InvariantFunction, Error> {
    let psi = match (psi, psi_period(germ)?) {
        (None, Some(period)) => Some(PeriodicFunction::zero(period)),
        (psi, _) => psi,
    };
    InvariantFunction::build_with(germ, psi, DEFAULT_GRID, tol.unwrap_or(DEFAULT_TOL))
}

pub fn validate(germ: &str) -> CmdResult {
    let text = read_source(germ)?;
    let out = match GermSpec::from_json(&text).and_then(|s| validate_spec(&s)) {
        Ok(_) => json!({ "valid": true }),
        Err(Error::Invalid(vs)) => {
            json!({ "valid": false, "errors": vs.iter().map(|v| v.name()).collect::<Vec<_>>() })
        }
        Err(e @ Error::Parse(_)) => {
            json!({ "valid": false, "errors": ["Parse"], "message": e.to_string() })
        }
        Err(e) => json!({ "valid": false, "errors": [format!("{e:?}")], "message": e.to_string() }),
    };
    print_json(&out);
    Ok(if out["valid"] == true { 0 } else { 2 })
}

pub fn analyze(germ: &str) -> CmdResult {
    let g = load_germ(germ)?;
    let spec = serde_json::to_value(g.to_spec()).expect("serializable");
    let out = match &g {
        Germ::Enoki(e) => json!({ "family": "enoki", "params": spec, "c": e.alpha().norm().ln() }),
        Germ::Intermediate(m) => json!({
            "family": "intermediate",
            "params": spec,
            "top_exponent": m.top_exponent(),
            "c": -(m.p() as f64).ln(),
        }),
        Germ::InoueHirzebruch(h) => {
            let m = h.matrix();
            let ed = eigen_data(&m)?;
            json!({
                "family": "ih",
                "word": h.word().to_string(),
                "matrix": m.rows(),
                "det": m.det() as i64,
                "trace": m.trace() as i64,
                "disc": m.discriminant() as i64,
                "eigen": ed,
                "lambda1": ed.lambda1,
                "classification": trace_dichotomy(h.word())?,
                "c": -ed.lambda1.ln(),
            })
        }
    };
    print_json(&out);
    Ok(0)
}

pub struct VerifyConfig {
    pub germ: String,
    pub psi: Option<String>,
    pub suites: Option<Vec<String>>,
    pub samples: usize,
    pub seed: u64,
    pub tol: Option<f64>,
    pub out: PathBuf,
    pub dump: bool,
    pub tamper: bool,
}

/// One suite on `u` for `germ`.
pub fn run_suite(
    name: &str,
    germ: &Germ,
    u: &dyn Potential,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport, Error> {
    let m = SamplingMargins::default();
    let origin: ScaledPoint = to_scaled_point([Complex64::new(0.0, 0.0); 2]);
    match name {
        "invariance" => verification::invariance_residual(u, germ, samples, seed, &m),
        "levi" => verification::levi_psd_check(u, samples, levi::DEFAULT_STEP, seed, &m),
        "foliation" => verification::foliation_check(u, samples, levi::DEFAULT_STEP, seed, &m),
        "containment" => match germ {
            Germ::Enoki(g) => containment::enoki_containment(g, ENOKI_R2, ENOKI_N_MAX, samples, seed),
            Germ::Intermediate(g) => containment::intermediate_containment(
                g,
                INTERMEDIATE_R,
                INTERMEDIATE_R_PRIME,
                INTERMEDIATE_N.0,
                INTERMEDIATE_N.1,
                samples,
                seed,
            ),
            Germ::InoueHirzebruch(g) => {
                let ed = eigen_data(&g.matrix())?;
                let (c1, delta, c2) = IH_BAND;
                containment::ih_box_check(g, &ed, c1, delta, c2, IH_N_MAX, samples, seed)
            }
        },
        "lelong" => {
            let radii = lelong::decade_radii(LELONG_DECADES.0, LELONG_DECADES.1);
            let (expected, tol) = match germ {
                Germ::Enoki(_) => (1.0, LELONG_TOL_ONE),
                _ => (0.0, LELONG_TOL_ZERO),
            };
            lelong::lelong_report(u, &origin, &radii, expected, tol)
        }
        other => {
            Err(Error::InvalidArgument(format!("unknown suite {other:?}; expected one of {}", ALL_SUITES.join(","))))
        }
    }
}

pub fn verify(cfg: &VerifyConfig) -> CmdResult {
    let germ = load_germ(&cfg.germ)?;
    let suites: Vec<String> = match &cfg.suites {
        Some(s) => s.iter().map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect(),
        None => ALL_SUITES.iter().map(|s| s.to_string()).collect(),
    };
    if let Some(bad) = suites.iter().find(|s| !ALL_SUITES.contains(&s.as_str())) {
        return Err(Error::InvalidArgument(format!("unknown suite {bad:?}")));
    }
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("--samples must be positive".into()));
    }
    if let Some(t) = cfg.tol {
        if !(t > 0.0) {
            return Err(Error::InvalidArgument("--tol must be positive".into()));
        }
    }
    // cone membership is decided before any suite runs
    let base = build_function(&germ, load_psi(cfg.psi.as_deref())?, cfg.tol)?;
    let tampered = AddWSquare { base: &base };
    let u: &dyn Potential = if cfg.tamper { &tampered } else { &base };

    fs::create_dir_all(&cfg.out)
        .map_err(|e| Error::InvalidArgument(format!("cannot create {}: {e}", cfg.out.display())))?;
    let mut all_pass = true;
    let mut summary = serde_json::Map::new();
    for name in &suites {
        let report = run_suite(name, &germ, u, cfg.samples, cfg.seed)?;
        eprintln!("{}", report.summary());
        all_pass &= report.pass;
        summary.insert(name.clone(), json!(report.pass));
        write(&cfg.out.join(format!("{name}.json")), &(report.to_json() + "\n"))?;
    }
    if cfg.dump {
        dump_samples(&cfg.out.join("samples.csv"), u, cfg.samples, cfg.seed)?;
    }
    print_json(&json!({ "pass": all_pass, "suites": Value::Object(summary) }));
    Ok(if all_pass { 0 } else { 1 })
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

/// The sampler's points for `seed` with their values of `u`.
fn dump_samples(path: &Path, u: &dyn Potential, n: usize, seed: u64) -> Result<(), Error> {
    let io = |e: csv::Error| Error::InvalidArgument(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["re_z", "im_z", "re_w", "im_w", "u"]).map_err(io)?;
    let mut r = rng(seed);
    let m = SamplingMargins::default();
    for _ in 0..n {
        let p = u.sample(&mut r, &m);
        let (z, w_) = (p[0].to_complex(), p[1].to_complex());
        let v = u.eval(&p)?;
        w.write_record([z.re, z.im, w_.re, w_.im, v].map(|x| x.to_string())).map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(e.to_string()))
}

pub fn kcone(psi: &str, grid: usize, tol: Option<f64>) -> CmdResult {
    let psi = PeriodicFunction::from_json(&read_source(psi)?)?;
    if grid == 0 {
        return Err(Error::InvalidArgument("--grid must be positive".into()));
    }
    let m = psi.membership(grid, tol.unwrap_or(DEFAULT_TOL));
    print_json(&json!({
        "period": psi.period,
        "min_value": m.min_value,
        "lipschitz": m.lipschitz,
        "threshold": m.threshold,
        "pass": m.pass,
        "max_scale": finite(psi.max_scale(grid)),
    }));
    Ok(if m.pass { 0 } else { 1 })
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn lelong(
    germ: Option<&str>,
    psi: Option<&str>,
    calibration: Option<&str>,
    center: Option<Vec<f64>>,
    radii: Option<Vec<f64>>,
) -> CmdResult {
    let center = match center.as_deref() {
        Some([a, b, c, d]) => to_scaled_point([Complex64::new(*a, *b), Complex64::new(*c, *d)]),
        Some(_) => return Err(Error::InvalidArgument("--center takes four numbers".into())),
        None => to_scaled_point([Complex64::new(0.0, 0.0); 2]),
    };
    let radii = radii.unwrap_or_else(|| lelong::decade_radii(LELONG_DECADES.0, LELONG_DECADES.1));
    let est = match (germ, calibration) {
        (Some(g), _) => {
            let u = build_function(&load_germ(g)?, load_psi(psi)?, None)?;
            lelong::lelong_estimate(&u, &center, &radii)?
        }
        (None, Some(name)) => {
            let c = Calibration::from_name(name)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown calibration {name:?}")))?;
            lelong::lelong_estimate(&c, &center, &radii)?
        }
        (None, None) => return Err(Error::InvalidArgument("need --germ or --calibration".into())),
    };
    print_json(&est);
    Ok(0)
}

pub fn plot(germ: &str, psi: Option<&str>, out: &Path) -> CmdResult {
    let germ = load_germ(germ)?;
    let u = build_function(&germ, load_psi(psi)?, None)?;
    fs::create_dir_all(out).map_err(|e| Error::InvalidArgument(format!("cannot create {}: {e}", out.display())))?;
    let mut written = Vec::new();
    for (name, svg) in plot::figures(&u) {
        let path = out.join(name);
        write(&path, &svg)?;
        written.push(path.display().to_string());
    }
    print_json(&json!({ "written": written }));
    Ok(0)
}
