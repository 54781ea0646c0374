use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::EigenData;
use crate::potential::random_arg;
use crate::scaled::{ScaledComplex, ScaledPoint};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Share of containment samples placed on the region boundary.
pub const BOUNDARY_SHARE: f64 = 0.7;

/// Sampling windows that keep finite differences away from singular loci.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingMargins {
    pub z_min: f64,
    pub z_max: f64,
    pub w_max: f64,
    pub phi1_min: f64,
    pub phi1_max: f64,
    pub phi2_min: f64,
    pub phi2_max: f64,
}

impl Default for SamplingMargins {
    fn default() -> Self {
        Self { z_min: 0.05, z_max: 0.9, w_max: 10.0, phi1_min: -10.0, phi1_max: -0.1, phi2_min: -5.0, phi2_max: 5.0 }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Log-moduli `(log|z|, log|w|)` with `phi_1 = phi1` and `phi_2 = phi2`.
pub fn invert_phi(ed: &EigenData, phi1: f64, phi2: f64) -> [f64; 2] {
    let [a1, b1] = ed.v1;
    let [a2, b2] = ed.v2;
    let cross = ed.cross();
    [(phi2 * b1 - phi1 * b2) / cross, (a2 * phi1 - a1 * phi2) / cross]
}

/// Log-modulus of a point uniform (by area) in the disc of radius `r`.
fn disc_log_radius(rng: &mut ChaCha8Rng, r: f64) -> f64 {
    // 1 - U lies in (0, 1]
    r.ln() + 0.5 * (1.0 - rng.gen::<f64>()).ln()
}

/// Point of the closed polydisc `P(r1, r2)`, on its boundary with
/// probability [`BOUNDARY_SHARE`] (one or both coordinates on their circle).
pub fn polydisc_point(rng: &mut ChaCha8Rng, r1: f64, r2: f64) -> ScaledPoint {
    let (on_z, on_w) = if rng.gen::<f64>() < BOUNDARY_SHARE {
        match rng.gen_range(0..3) {
            0 => (true, false),
            1 => (false, true),
            _ => (true, true),
        }
    } else {
        (false, false)
    };
    let lz = if on_z { r1.ln() } else { disc_log_radius(rng, r1) };
    let lw = if on_w { r2.ln() } else { disc_log_radius(rng, r2) };
    [ScaledComplex::from_polar(lz, random_arg(rng)), ScaledComplex::from_polar(lw, random_arg(rng))]
}

/// `(phi_1, phi_2)` in `[-c1 delta, -c1] x [-c2, c2]`, on an edge with
/// probability [`BOUNDARY_SHARE`].
pub fn band_phi(rng: &mut ChaCha8Rng, c1: f64, delta: f64, c2: f64) -> [f64; 2] {
    let mut phi1 = rng.gen_range(-c1 * delta..=-c1);
    let mut phi2 = rng.gen_range(-c2..=c2);
    if rng.gen::<f64>() < BOUNDARY_SHARE {
        match rng.gen_range(0..4) {
            0 => phi1 = -c1 * delta,
            1 => phi1 = -c1,
            2 => phi2 = -c2,
            _ => phi2 = c2,
        }
    }
    [phi1, phi2]
}

/// Point of the band `D(c1, delta, c2)` for the given eigen data.
pub fn band_point(rng: &mut ChaCha8Rng, ed: &EigenData, c1: f64, delta: f64, c2: f64) -> ScaledPoint {
    let [phi1, phi2] = band_phi(rng, c1, delta, c2);
    let [x, y] = invert_phi(ed, phi1, phi2);
    [ScaledComplex::from_polar(x, random_arg(rng)), ScaledComplex::from_polar(y, random_arg(rng))]
}
