//! Real-valued functions on open subsets of `C^2` that the verification
//! suites can probe, together with the holomorphic chart in which they are
//! differentiated.
//!
//! Plurisubharmonicity and the vanishing of a mixed derivative along a
//! holomorphic foliation are invariant under holomorphic changes of
//! coordinates, so each function may pick the chart in which it is best
//! conditioned: `z = exp(zeta)` near the axis `z = 0`, or the eigen chart
//! `(xi, tau) = (alpha zeta + beta omega, alpha_2 zeta + beta_2 omega)` of an
//! Inoue-Hirzebruch matrix, whose leaves are `{xi = const}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::matrix::EigenData;
use crate::scaled::{ScaledComplex, ScaledPoint};
use crate::verification::sampling::SamplingMargins;

pub fn random_arg(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-PI..PI)
}

/// Real coordinates `(x, y, xi, eta)` of a holomorphic chart, with
/// `z`-coordinate `x + iy` and `w`-coordinate `xi + i eta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Chart {
    /// `(z, w)` themselves.
    Flat,
    /// `z = exp(x + iy)`, `w = xi + i eta`.
    LogZ,
    /// `(log z, log w) = inv * (xi_c, tau_c)` for the complex eigen
    /// coordinates; `inv` inverts `[[alpha, beta], [alpha_2, beta_2]]`.
    Eigen { fwd: [[f64; 2]; 2], inv: [[f64; 2]; 2] },
}

impl Chart {
    pub fn eigen(ed: &EigenData) -> Self {
        let fwd = [ed.v1, ed.v2];
        let det = fwd[0][0] * fwd[1][1] - fwd[0][1] * fwd[1][0];
        let inv = [[fwd[1][1] / det, -fwd[0][1] / det], [-fwd[1][0] / det, fwd[0][0] / det]];
        Chart::Eigen { fwd, inv }
    }

    pub fn to_point(&self, c: &[f64; 4]) -> ScaledPoint {
        match self {
            Chart::Flat => [Complex64::new(c[0], c[1]).into(), Complex64::new(c[2], c[3]).into()],
            Chart::LogZ => [ScaledComplex::from_polar(c[0], c[1]), Complex64::new(c[2], c[3]).into()],
            Chart::Eigen { inv, .. } => {
                let re = [inv[0][0] * c[0] + inv[0][1] * c[2], inv[1][0] * c[0] + inv[1][1] * c[2]];
                let im = [inv[0][0] * c[1] + inv[0][1] * c[3], inv[1][0] * c[1] + inv[1][1] * c[3]];
                [ScaledComplex::from_polar(re[0], im[0]), ScaledComplex::from_polar(re[1], im[1])]
            }
        }
    }

    /// Chart coordinates of a point; for log charts the argument branch is
    /// the principal one.
    pub fn from_point(&self, p: &ScaledPoint) -> [f64; 4] {
        match self {
            Chart::Flat => {
                let (z, w) = (p[0].to_complex(), p[1].to_complex());
                [z.re, z.im, w.re, w.im]
            }
            Chart::LogZ => {
                let w = p[1].to_complex();
                [p[0].log_mod(), p[0].arg(), w.re, w.im]
            }
            Chart::Eigen { fwd, .. } => {
                let re = [p[0].log_mod(), p[1].log_mod()];
                let im = [p[0].arg(), p[1].arg()];
                [
                    fwd[0][0] * re[0] + fwd[0][1] * re[1],
                    fwd[0][0] * im[0] + fwd[0][1] * im[1],
                    fwd[1][0] * re[0] + fwd[1][1] * re[1],
                    fwd[1][0] * im[0] + fwd[1][1] * im[1],
                ]
            }
        }
    }
}

/// A candidate plurisubharmonic function.
pub trait Potential {
    fn label(&self) -> String;

    fn eval(&self, p: &ScaledPoint) -> Result<f64>;

    fn chart(&self) -> Chart {
        Chart::Flat
    }

    /// Local length scale at chart coordinates; finite-difference steps are
    /// `h * step_scale`.
    fn step_scale(&self, _coords: &[f64; 4]) -> f64 {
        1.0
    }

    /// `c` in `u o f = u + c`, when the function is built for a germ.
    fn automorphy_constant(&self) -> Option<f64> {
        None
    }

    /// Direction `(d_zeta, d_omega)` in log coordinates along which `u` is
    /// constant, for functions of `alpha Re zeta + beta Re omega`.
    fn log_leaf_direction(&self) -> Option<[f64; 2]> {
        None
    }

    /// Random point of the domain, away from singular loci.
    fn sample(&self, rng: &mut ChaCha8Rng, m: &SamplingMargins) -> ScaledPoint;
}

/// Reference functions with known Levi forms and Lelong numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Calibration {
    /// `|z|^2 + |w|^2`: Levi form is the identity.
    FlatSquare,
    /// `-|z|^2`: Levi eigenvalues `-1` and `0`.
    NegativeZSquare,
    /// `log|z|`: pluriharmonic off `z = 0`, Lelong number 1 at the origin.
    LogModZ,
    /// `Re(z) Re(w)`: `u_{z w-bar} = 1/4`.
    ReZReW,
    /// `u = 0`.
    Zero,
}

impl Calibration {
    pub fn name(&self) -> &'static str {
        match self {
            Calibration::FlatSquare => "|z|^2+|w|^2",
            Calibration::NegativeZSquare => "-|z|^2",
            Calibration::LogModZ => "log|z|",
            Calibration::ReZReW => "Re(z)Re(w)",
            Calibration::Zero => "0",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "flat" | "|z|^2+|w|^2" => Some(Self::FlatSquare),
            "neg-z2" | "-|z|^2" => Some(Self::NegativeZSquare),
            "log-z" | "log|z|" => Some(Self::LogModZ),
            "re-z-re-w" | "Re(z)Re(w)" => Some(Self::ReZReW),
            "zero" | "0" => Some(Self::Zero),
            _ => None,
        }
    }
}

impl Potential for Calibration {
    fn label(&self) -> String {
        format!("calibration:{}", self.name())
    }

    fn eval(&self, p: &ScaledPoint) -> Result<f64> {
        let sq = |c: &ScaledComplex| (2.0 * c.log_mod()).exp();
        Ok(match self {
            Calibration::FlatSquare => sq(&p[0]) + sq(&p[1]),
            Calibration::NegativeZSquare => -sq(&p[0]),
            Calibration::LogModZ => p[0].log_mod(),
            Calibration::ReZReW => p[0].to_complex().re * p[1].to_complex().re,
            Calibration::Zero => 0.0,
        })
    }

    fn sample(&self, rng: &mut ChaCha8Rng, m: &SamplingMargins) -> ScaledPoint {
        let r = rng.gen_range(m.z_min..=m.z_max);
        let s = rng.gen_range(m.z_min..=m.z_max);
        [ScaledComplex::from_polar(r.ln(), random_arg(rng)), ScaledComplex::from_polar(s.ln(), random_arg(rng))]
    }
}

/// `u + 0.1 |w|^2`, a deliberately broken variant used to show the suites
/// are not vacuous.
pub struct AddWSquare<'a> {
    pub base: &'a dyn Potential,
}

impl Potential for AddWSquare<'_> {
    fn label(&self) -> String {
        format!("{}+0.1|w|^2", self.base.label())
    }

    fn eval(&self, p: &ScaledPoint) -> Result<f64> {
        Ok(self.base.eval(p)? + 0.1 * (2.0 * p[1].log_mod()).exp())
    }

    fn chart(&self) -> Chart {
        self.base.chart()
    }

    fn step_scale(&self, coords: &[f64; 4]) -> f64 {
        self.base.step_scale(coords)
    }

    fn automorphy_constant(&self) -> Option<f64> {
        self.base.automorphy_constant()
    }

    fn log_leaf_direction(&self) -> Option<[f64; 2]> {
        self.base.log_leaf_direction()
    }

    fn sample(&self, rng: &mut ChaCha8Rng, m: &SamplingMargins) -> ScaledPoint {
        self.base.sample(rng, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{eigen_data, IntMatrix2};

    #[test]
    fn chart_roundtrip() {
        let ed = eigen_data(&IntMatrix2::S).unwrap();
        let p = [ScaledComplex::from_polar(-0.7, 0.3), ScaledComplex::from_polar(-1.9, -2.2)];
        for chart in [Chart::Flat, Chart::LogZ, Chart::eigen(&ed)] {
            let q = chart.to_point(&chart.from_point(&p));
            for k in 0..2 {
                assert!((q[k].log_mod() - p[k].log_mod()).abs() < 1e-14, "{chart:?}");
                assert!((q[k].arg() - p[k].arg()).abs() < 1e-14, "{chart:?}");
            }
        }
    }

    #[test]
    fn eigen_chart_first_coordinate_is_phi() {
        let ed = eigen_data(&IntMatrix2::S).unwrap();
        let p = [ScaledComplex::from_polar(-0.5, 1.0), ScaledComplex::from_polar(-0.25, 0.0)];
        let c = Chart::eigen(&ed).from_point(&p);
        assert!((c[0] - (-0.5 - 0.25 * ed.beta())).abs() < 1e-15);
    }
}
