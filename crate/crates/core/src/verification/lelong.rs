//! Lelong numbers from the growth of the maximum on small spheres.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::scaled::{ScaledComplex, ScaledPoint};
use crate::verification::report::VerificationReport;

pub const MIN_RADIUS: f64 = 1e-8;
const HOPF_STEPS: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LelongEstimate {
    pub radii: Vec<f64>,
    pub maxima: Vec<f64>,
    pub slopes: Vec<f64>,
    pub nu_hat: f64,
}

/// 512 unit vectors `(cos eta e^{i a}, sin eta e^{i b})` on a Hopf grid;
/// `eta` includes both coordinate axes.
fn sphere_directions() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(HOPF_STEPS.pow(3));
    for i in 0..HOPF_STEPS {
        let eta = FRAC_PI_2 * i as f64 / (HOPF_STEPS - 1) as f64;
        for j in 0..HOPF_STEPS {
            for k in 0..HOPF_STEPS {
                let a = TAU * j as f64 / HOPF_STEPS as f64;
                let b = TAU * (k as f64 + 0.5) / HOPF_STEPS as f64;
                out.push((eta, a, b));
            }
        }
    }
    out
}

fn sphere_point(center: &ScaledPoint, r: f64, (eta, a, b): (f64, f64, f64)) -> ScaledPoint {
    // exact axes: cos(pi/2) is not zero in floating point
    let (c, s) = if eta == 0.0 {
        (1.0, 0.0)
    } else if eta == FRAC_PI_2 {
        (0.0, 1.0)
    } else {
        (eta.cos(), eta.sin())
    };
    let coord = |m: f64, t: f64| {
        if m == 0.0 {
            ScaledComplex::ZERO
        } else {
            ScaledComplex::from_polar(r.ln() + m.ln(), t)
        }
    };
    let d = [coord(c, a), coord(s, b)];
    if center[0].is_zero() && center[1].is_zero() {
        d
    } else {
        [center[0] + d[0], center[1] + d[1]]
    }
}

/// Max of `u` over 512 points of each sphere `|x - center| = r`, the slopes
/// of successive maxima against `log r`, and the last slope.
pub fn lelong_estimate(u: &dyn Potential, center: &ScaledPoint, radii: &[f64]) -> Result<LelongEstimate> {
    if radii.len() < 2 {
        return Err(Error::InvalidArgument("need at least two radii".into()));
    }
    if radii.windows(2).any(|w| !(w[1] < w[0])) || !(radii[radii.len() - 1] >= MIN_RADIUS) {
        return Err(Error::InvalidArgument(format!("radii must be strictly decreasing with minimum >= {MIN_RADIUS}")));
    }
    let dirs = sphere_directions();
    let mut maxima = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut m = f64::NEG_INFINITY;
        for &d in &dirs {
            let v = u.eval(&sphere_point(center, r, d))?;
            if v.is_nan() {
                return Err(Error::OutOfDomain(format!("u is NaN on the sphere of radius {r}")));
            }
            m = m.max(v);
        }
        if m == f64::NEG_INFINITY {
            return Err(Error::OutOfDomain(format!("u = -inf on the sphere of radius {r}")));
        }
        maxima.push(m);
    }
    let slopes: Vec<f64> =
        (0..radii.len() - 1).map(|k| (maxima[k + 1] - maxima[k]) / (radii[k + 1].ln() - radii[k].ln())).collect();
    Ok(LelongEstimate { radii: radii.to_vec(), maxima, nu_hat: *slopes.last().expect("two radii"), slopes })
}

/// Decades `10^{-from}, ..., 10^{-to}`.
pub fn decade_radii(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|k| 10f64.powi(-k)).collect()
}

/// Pass iff `|nu_hat - expected| <= tol`.
pub fn lelong_report(
    u: &dyn Potential,
    center: &ScaledPoint,
    radii: &[f64],
    expected: f64,
    tol: f64,
) -> Result<VerificationReport> {
    let est = lelong_estimate(u, center, radii)?;
    Ok(VerificationReport::max_residual(
        "lelong",
        u.label(),
        sphere_directions().len(),
        None,
        (est.nu_hat - expected).abs(),
        tol,
    )
    .with_detail("nu_hat", est.nu_hat)
    .with_detail("expected", expected)
    .with_detail("radii", est.radii)
    .with_detail("maxima", est.maxima)
    .with_detail("slopes", est.slopes))
}
