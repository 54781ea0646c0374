//! Invariant plurisubharmonic functions of the three germ families.
//!
//! Every family has the shape `u = G(l)` for a pluriharmonic `l`:
//!
//! | family        | `l`                               | `G(s)`                               | `u o f - u` |
//! |---------------|-----------------------------------|--------------------------------------|-------------|
//! | Enoki         | `log|z|`                          | `s`                                  | `log|alpha|`|
//! | intermediate  | `log|z|`                          | `-log(-s) - psi(log(-s))`            | `-log p`    |
//! | IH            | `alpha log|z| + beta log|w|`      | `-log(-s) - psi(log(-s))`            | `-log lambda`|
//!
//! with `psi` periodic of period `log p` (intermediate) or `log lambda` (IH).

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::germs::{Germ, Point};
use crate::kcone::{PeriodicFunction, DEFAULT_GRID, DEFAULT_TOL};
use crate::matrix::{eigen_data, EigenData};
use crate::potential::{random_arg, Chart, Potential};
use crate::scaled::{to_scaled_point, ScaledComplex, ScaledPoint};
use crate::verification::sampling::SamplingMargins;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Enoki,
    Intermediate,
    Ih,
}

/// Where `u` is defined.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// All of `C^2`.
    Whole,
    /// `{|z| < 1}`.
    UnitDiscTimesPlane,
    /// `{alpha log|z| + beta log|w| < 0}`.
    NegativePhi { alpha: f64, beta: f64 },
}

/// The constant `c` in `u o f = u + c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Automorphy {
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantFunction {
    pub family: Family,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<PeriodicFunction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigen: Option<EigenData>,
    #[serde(rename = "c")]
    pub automorphy_constant: f64,
    pub domain: Domain,
    #[serde(skip)]
    label: String,
}

/// Relative tolerance for matching the period of `psi`.
const PERIOD_RTOL: f64 = 1e-12;

impl InvariantFunction {
    /// Builds `u` for `germ`, checking `psi` against the cone with the
    /// default grid and tolerance.
    pub fn build(germ: &Germ, psi: Option<PeriodicFunction>) -> Result<Self> {
        Self::build_with(germ, psi, DEFAULT_GRID, DEFAULT_TOL)
    }

    pub fn build_with(germ: &Germ, psi: Option<PeriodicFunction>, grid_n: usize, tol: f64) -> Result<Self> {
        let check_psi = |psi: Option<PeriodicFunction>, period: f64| -> Result<PeriodicFunction> {
            let psi = psi.ok_or(Error::MissingPsi)?;
            if !((psi.period - period).abs() <= PERIOD_RTOL * period) {
                return Err(Error::PeriodMismatch { expected: period, got: psi.period });
            }
            let m = psi.membership(grid_n, tol);
            if !m.pass {
                return Err(Error::NotInCone { min_value: m.min_value });
            }
            Ok(psi)
        };
        let label = serde_json::to_string(&germ.to_spec()).expect("spec serializes");
        match germ {
            Germ::Enoki(g) => {
                if psi.is_some() {
                    return Err(Error::UnexpectedPsi);
                }
                Ok(Self {
                    family: Family::Enoki,
                    psi: None,
                    eigen: None,
                    automorphy_constant: g.alpha().norm().ln(),
                    domain: Domain::Whole,
                    label,
                })
            }
            Germ::Intermediate(g) => {
                let p = g.p() as f64;
                let psi = check_psi(psi, p.ln())?;
                Ok(Self {
                    family: Family::Intermediate,
                    psi: Some(psi),
                    eigen: None,
                    automorphy_constant: -p.ln(),
                    domain: Domain::UnitDiscTimesPlane,
                    label,
                })
            }
            Germ::InoueHirzebruch(g) => {
                let ed = eigen_data(&g.matrix())?;
                let psi = check_psi(psi, ed.lambda1.ln())?;
                Ok(Self {
                    family: Family::Ih,
                    psi: Some(psi),
                    eigen: Some(ed),
                    automorphy_constant: -ed.lambda1.ln(),
                    domain: Domain::NegativePhi { alpha: ed.alpha(), beta: ed.beta() },
                    label,
                })
            }
        }
    }

    pub fn automorphy_spec(&self) -> Automorphy {
        Automorphy { constant: self.automorphy_constant }
    }

    /// The pluriharmonic argument `l` of `u = G(l)`.
    pub fn leaf_value(&self, p: &ScaledPoint) -> f64 {
        match self.family {
            Family::Enoki | Family::Intermediate => p[0].log_mod(),
            Family::Ih => {
                let ed = self.eigen.as_ref().expect("ih carries eigen data");
                if p[0].is_zero() || p[1].is_zero() {
                    f64::NEG_INFINITY
                } else {
                    ed.alpha() * p[0].log_mod() + ed.beta() * p[1].log_mod()
                }
            }
        }
    }

    /// `G(s) = -log(-s) - psi(log(-s))` for `s < 0`, or `s` for Enoki.
    pub fn profile(&self, s: f64) -> f64 {
        match &self.psi {
            None => s,
            Some(psi) => {
                if s == f64::NEG_INFINITY {
                    return f64::NEG_INFINITY;
                }
                let t = (-s).ln();
                -t - psi.eval(t, 0)
            }
        }
    }

    pub fn eval_u(&self, p: &ScaledPoint) -> Result<f64> {
        let s = self.leaf_value(p);
        match self.family {
            Family::Enoki => Ok(s),
            Family::Intermediate if s >= 0.0 => {
                Err(Error::OutOfDomain(format!("intermediate u needs |z| < 1, got log|z| = {s}")))
            }
            Family::Ih if s >= 0.0 => Err(Error::OutOfDomain(format!("ih u needs phi < 0, got phi = {s}"))),
            _ => Ok(self.profile(s)),
        }
    }

    pub fn eval_point(&self, p: Point) -> Result<f64> {
        self.eval_u(&to_scaled_point(p))
    }
}

impl Potential for InvariantFunction {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn eval(&self, p: &ScaledPoint) -> Result<f64> {
        self.eval_u(p)
    }

    fn chart(&self) -> Chart {
        match (&self.family, &self.eigen) {
            (Family::Ih, Some(ed)) => Chart::eigen(ed),
            _ => Chart::LogZ,
        }
    }

    fn step_scale(&self, coords: &[f64; 4]) -> f64 {
        match self.family {
            Family::Enoki => 1.0,
            // log|z| in the log chart, Re xi = phi in the eigen chart
            Family::Intermediate | Family::Ih => coords[0].abs().min(1.0),
        }
    }

    fn automorphy_constant(&self) -> Option<f64> {
        Some(self.automorphy_constant)
    }

    fn log_leaf_direction(&self) -> Option<[f64; 2]> {
        self.eigen.as_ref().map(|ed| [ed.beta(), -ed.alpha()])
    }

    fn sample(&self, rng: &mut ChaCha8Rng, m: &SamplingMargins) -> ScaledPoint {
        match (&self.family, &self.eigen) {
            (Family::Ih, Some(ed)) => {
                let phi1 = rng.gen_range(m.phi1_min..=m.phi1_max);
                let phi2 = rng.gen_range(m.phi2_min..=m.phi2_max);
                let [x, y] = crate::verification::sampling::invert_phi(ed, phi1, phi2);
                [ScaledComplex::from_polar(x, random_arg(rng)), ScaledComplex::from_polar(y, random_arg(rng))]
            }
            _ => {
                let r = rng.gen_range(m.z_min..=m.z_max);
                let w = m.w_max * rng.gen::<f64>().sqrt();
                [ScaledComplex::from_polar(r.ln(), random_arg(rng)), ScaledComplex::from_polar(w.ln(), random_arg(rng))]
            }
        }
    }
}
