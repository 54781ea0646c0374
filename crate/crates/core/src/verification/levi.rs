//! Finite-difference Levi forms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::scaled::ScaledComplex;
use crate::verification::report::VerificationReport;
use crate::verification::sampling::{rng, SamplingMargins};

pub const DEFAULT_STEP: f64 = 1e-3;
pub const LEVI_TOL: f64 = 1e-4;
pub const FOLIATION_TOL: f64 = 1e-6;
pub const LEAF_TOL: f64 = 1e-10;

/// Hermitian matrix `[[u_{z zbar}, u_{z wbar}], [conj, u_{w wbar}]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeviForm {
    pub zz: f64,
    pub ww: f64,
    pub zw: Complex64,
}

impl LeviForm {
    pub fn eigenvalues(&self) -> [f64; 2] {
        let mean = 0.5 * (self.zz + self.ww);
        let rad = (0.5 * (self.zz - self.ww)).hypot(self.zw.norm());
        [mean - rad, mean + rad]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

/// Levi form of `u` in its own chart at chart coordinates `c`, from
/// fourth-order central differences with step `h * step_scale(c)`.
///
/// With `z = x + iy` and `w = xi + i eta`:
/// `u_{z zbar} = (u_xx + u_yy)/4`, `u_{w wbar} = (u_xixi + u_etaeta)/4`,
/// `u_{z wbar} = ((u_xxi + u_yeta) + i (u_xeta - u_yxi))/4`.
pub fn levi_form(u: &dyn Potential, c: [f64; 4], h: f64) -> Result<LeviForm> {
    let chart = u.chart();
    let step = h * u.step_scale(&c);
    let f = |dir: [f64; 4], t: f64| -> Result<f64> {
        let q = [c[0] + t * dir[0], c[1] + t * dir[1], c[2] + t * dir[2], c[3] + t * dir[3]];
        let v = u.eval(&chart.to_point(&q))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::OutOfDomain(format!("non-finite value {v} in stencil")))
        }
    };
    let center = f([0.0; 4], 0.0)?;
    // second directional derivative along dir
    let d2 = |dir: [f64; 4]| -> Result<f64> {
        let s = step;
        Ok((-f(dir, 2.0 * s)? + 16.0 * f(dir, s)? - 30.0 * center + 16.0 * f(dir, -s)? - f(dir, -2.0 * s)?)
            / (12.0 * s * s))
    };
    let e = |i: usize| {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        v
    };
    let mixed = |i: usize, j: usize| -> Result<f64> {
        let mut plus = e(i);
        plus[j] = 1.0;
        let mut minus = e(i);
        minus[j] = -1.0;
        Ok(0.25 * (d2(plus)? - d2(minus)?))
    };
    let (hxx, hyy, hxixi, hetaeta) = (d2(e(0))?, d2(e(1))?, d2(e(2))?, d2(e(3))?);
    let (hxxi, hyeta, hxeta, hyxi) = (mixed(0, 2)?, mixed(1, 3)?, mixed(0, 3)?, mixed(1, 2)?);
    Ok(LeviForm {
        zz: 0.25 * (hxx + hyy),
        ww: 0.25 * (hxixi + hetaeta),
        zw: Complex64::new(0.25 * (hxxi + hyeta), 0.25 * (hxeta - hyxi)),
    })
}

/// Minimum Levi eigenvalue over random domain samples; pass iff `>= -1e-4`.
pub fn levi_psd_check(
    u: &dyn Potential,
    samples: usize,
    h: f64,
    seed: u64,
    margins: &SamplingMargins,
) -> Result<VerificationReport> {
    let mut r = rng(seed);
    let chart = u.chart();
    let (mut min_eig, mut max_eig) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..samples {
        let p = u.sample(&mut r, margins);
        let ev = levi_form(u, chart.from_point(&p), h)?.eigenvalues();
        min_eig = min_eig.min(ev[0]);
        max_eig = max_eig.max(ev[1]);
    }
    Ok(VerificationReport::min_value("levi_psd", u.label(), samples, Some(seed), min_eig, LEVI_TOL)
        .with_detail("max_eigenvalue", max_eig)
        .with_detail("step", h))
}

/// Max `|u_{z wbar}|` in the foliation-adapted chart (pass iff `<= 1e-6`),
/// plus, for functions constant along `alpha zeta + beta omega = const`,
/// the variation of `u` along sampled leaf segments (pass iff `<= 1e-10`).
pub fn foliation_check(
    u: &dyn Potential,
    samples: usize,
    h: f64,
    seed: u64,
    margins: &SamplingMargins,
) -> Result<VerificationReport> {
    let mut r = rng(seed);
    let chart = u.chart();
    let mut max_mixed = 0.0f64;
    let mut leaf_variation = 0.0f64;
    let leaf = u.log_leaf_direction();
    for _ in 0..samples {
        let p = u.sample(&mut r, margins);
        let form = levi_form(u, chart.from_point(&p), h)?;
        max_mixed = max_mixed.max(form.zw.norm());
        if let Some([dz, dw]) = leaf {
            let base = u.eval(&p)?;
            for k in 1..=8 {
                // complex leaf parameter t = s e^{i theta}
                let t = Complex64::from_polar(0.25 * k as f64, 0.8 * k as f64);
                let zeta = Complex64::new(p[0].log_mod(), p[0].arg()) + t * dz;
                let omega = Complex64::new(p[1].log_mod(), p[1].arg()) + t * dw;
                let q = [ScaledComplex::from_polar(zeta.re, zeta.im), ScaledComplex::from_polar(omega.re, omega.im)];
                leaf_variation = leaf_variation.max((u.eval(&q)? - base).abs());
            }
        }
    }
    let mut report =
        VerificationReport::max_residual("foliation", u.label(), samples, Some(seed), max_mixed, FOLIATION_TOL)
            .with_detail("step", h);
    if leaf.is_some() {
        report = report
            .with_detail("leaf_variation", leaf_variation)
            .with_detail("leaf_tolerance", LEAF_TOL)
            .and_pass(leaf_variation <= LEAF_TOL);
    }
    Ok(report)
}
