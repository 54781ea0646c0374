use crate::error::{Error, Result};
use crate::germs::Germ;
use crate::potential::Potential;
use crate::verification::report::VerificationReport;
use crate::verification::sampling::{rng, SamplingMargins};

pub const INVARIANCE_TOL: f64 = 1e-9;

/// `max |u(f(x)) - u(x) - c|` over in-domain samples of `u`.
pub fn invariance_residual(
    u: &dyn Potential,
    germ: &Germ,
    samples: usize,
    seed: u64,
    margins: &SamplingMargins,
) -> Result<VerificationReport> {
    let c = u
        .automorphy_constant()
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no automorphy constant", u.label())))?;
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x = u.sample(&mut r, margins);
        let y = germ.eval_scaled(&x)?;
        let res = (u.eval(&y)? - u.eval(&x)? - c).abs();
        worst = worst.max(if res.is_nan() { f64::INFINITY } else { res });
    }
    Ok(VerificationReport::max_residual("invariance", u.label(), samples, Some(seed), worst, INVARIANCE_TOL)
        .with_detail("c", c))
}
