//! Iteration containments: images of polydiscs and bands under `f^n`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::germs::{EnokiGerm, Germ, IHGerm, IntermediateGerm, Polynomial};
use crate::matrix::EigenData;
use crate::scaled::{log_sum_exp, ScaledComplex, ScaledPoint};
use crate::verification::report::VerificationReport;
use crate::verification::sampling::{band_point, invert_phi, polydisc_point, rng};

pub const ENOKI_MAX_ITERATES: usize = 60;
const C1_SCAN: usize = 512;
const C1_RTOL: f64 = 1e-8;

/// `max_{|z| = 1} |Q(z)/z|`, which by the maximum principle bounds
/// `|Q(z)| <= C1 |z|` on the closed unit disc.
pub fn compute_c1(q: &Polynomial) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let f = |t: f64| q.eval_quotient(Complex64::from_polar(1.0, t)).norm();
    let dt = TAU / C1_SCAN as f64;
    let vals: Vec<f64> = (0..C1_SCAN).map(|k| f(k as f64 * dt)).collect();
    let mut best = vals.iter().cloned().fold(0.0, f64::max);
    for k in 0..C1_SCAN {
        let (prev, next) = (vals[(k + C1_SCAN - 1) % C1_SCAN], vals[(k + 1) % C1_SCAN]);
        if vals[k] >= prev && vals[k] >= next {
            best = best.max(golden_max(&f, (k as f64 - 1.0) * dt, (k as f64 + 1.0) * dt));
        }
    }
    best
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut best = f1.max(f2);
    for _ in 0..200 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
        let prev = best;
        best = best.max(f1).max(f2);
        if b - a < 1e-12 && (best - prev).abs() <= C1_RTOL * best {
            break;
        }
    }
    best
}

/// Log-scale bounds `(log rho_1(n), log rho_2(n))` of the polydisc that
/// contains `f^n(P(1, R2))`, for `n = 0..=n_max`.
///
/// Exponent sums are accumulated step by step, in the same order as the
/// log-polar iteration, so that the bound stays valid after rounding.
pub fn enoki_bounds(germ: &EnokiGerm, r2: f64, n_max: usize) -> Vec<[f64; 2]> {
    let la = ScaledComplex::from(germ.alpha()).log_mod();
    let c1 = compute_c1(germ.q());
    let tail = (c1 / (1.0 - la.exp())).ln();
    let mut out = Vec::with_capacity(n_max + 1);
    out.push([0.0, r2.ln()]);
    // zb = n log|alpha|, first = n(n-1)/2 log|alpha| + log(R2 + C1)
    let (mut zb, mut first) = (0.0f64, (r2 + c1).ln());
    for _ in 1..=n_max {
        first += zb;
        let second = zb + tail;
        zb += la;
        out.push([zb, log_sum_exp(first, second)]);
    }
    out
}

pub fn enoki_containment(
    germ: &EnokiGerm,
    r2: f64,
    n_max: usize,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut r = rng(seed);
    let starts: Vec<ScaledPoint> = (0..samples).map(|_| polydisc_point(&mut r, 1.0, r2)).collect();
    enoki_containment_at(germ, r2, n_max, &starts, Some(seed))
}

/// Worst log-scale margin `log rho_i(n) - log|f^n(x)_i|` over the given
/// starting points of `P(1, R2)` and `n <= n_max`.
pub fn enoki_containment_at(
    germ: &EnokiGerm,
    r2: f64,
    n_max: usize,
    starts: &[ScaledPoint],
    seed: Option<u64>,
) -> Result<VerificationReport> {
    if !(r2 > 0.0) {
        return Err(Error::InvalidArgument(format!("R2 must be positive, got {r2}")));
    }
    if n_max > ENOKI_MAX_ITERATES {
        return Err(Error::InvalidArgument(format!("n_max must be at most {ENOKI_MAX_ITERATES}, got {n_max}")));
    }
    let bounds = enoki_bounds(germ, r2, n_max);
    let wrapped = Germ::Enoki(germ.clone());
    let mut by_n = vec![f64::INFINITY; n_max + 1];
    for x in starts {
        for (n, y) in wrapped.iterate(*x, n_max)?.iter().enumerate() {
            let m = (bounds[n][0] - y[0].log_mod()).min(bounds[n][1] - y[1].log_mod());
            by_n[n] = by_n[n].min(if m.is_nan() { f64::NEG_INFINITY } else { m });
        }
    }
    let worst = by_n.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(VerificationReport::worst_margin("enoki_containment", spec_label(&wrapped), starts.len(), seed, worst)
        .with_detail("c1", compute_c1(germ.q()))
        .with_detail("r2", r2)
        .with_detail("n_max", n_max)
        .with_detail("margins_by_n", finite_or_null(&by_n))
        .with_detail("log_bounds", bounds.iter().map(|b| finite_or_null(b)).collect::<Vec<_>>()))
}

pub fn intermediate_containment(
    germ: &IntermediateGerm,
    r: f64,
    r_prime: f64,
    n_min: usize,
    n_max: usize,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut g = rng(seed);
    let starts: Vec<ScaledPoint> = (0..samples).map(|_| polydisc_point(&mut g, r, r_prime)).collect();
    intermediate_containment_at(germ, r, r_prime, n_min, n_max, &starts, Some(seed))
}

/// Checks `log(|z|^2 + |w|^{2p}) < log(2 C1) + p^n log r` for the images of
/// the given points of `P(r, r')` and `n` in `[n_min, n_max]`. Reports the
/// empirical threshold: the least `n0` with containment for every
/// `n0 <= n <= n_max`. Passes iff the threshold is `n_min`.
pub fn intermediate_containment_at(
    germ: &IntermediateGerm,
    r: f64,
    r_prime: f64,
    n_min: usize,
    n_max: usize,
    starts: &[ScaledPoint],
    seed: Option<u64>,
) -> Result<VerificationReport> {
    if !(r > 0.0 && r < 1.0) || !(r_prime > 0.0) || n_min > n_max {
        return Err(Error::InvalidArgument(format!(
            "need 0 < r < 1, r' > 0, n_min <= n_max; got r = {r}, r' = {r_prime}, [{n_min}, {n_max}]"
        )));
    }
    let c1 = compute_c1(&germ.q());
    if c1 == 0.0 {
        return Err(Error::Degenerate("C1 = 0".into()));
    }
    let p = germ.p() as f64;
    let wrapped = Germ::Intermediate(germ.clone());
    let mut by_n = vec![f64::INFINITY; n_max - n_min + 1];
    for x in starts {
        let orbit = wrapped.iterate(*x, n_max)?;
        for n in n_min..=n_max {
            let y = &orbit[n];
            let lhs = log_sum_exp(2.0 * y[0].log_mod(), 2.0 * p * y[1].log_mod());
            let rhs = (2.0 * c1).ln() + p.powi(n as i32) * r.ln();
            let m = rhs - lhs;
            let slot = &mut by_n[n - n_min];
            *slot = slot.min(if m.is_nan() { f64::NEG_INFINITY } else { m });
        }
    }
    let threshold = (n_min..=n_max).rev().take_while(|n| by_n[n - n_min] > 0.0).last();
    let worst_after = match threshold {
        Some(n0) => by_n[n0 - n_min..].iter().cloned().fold(f64::INFINITY, f64::min),
        None => by_n[n_max - n_min],
    };
    let worst = by_n.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(VerificationReport::worst_margin("intermediate_containment", spec_label(&wrapped), starts.len(), seed, worst)
        .and_pass(worst > 0.0)
        .with_detail("c1", c1)
        .with_detail("r", r)
        .with_detail("r_prime", r_prime)
        .with_detail("n_min", n_min)
        .with_detail("n_max", n_max)
        .with_detail("threshold", threshold)
        .with_detail("worst_margin_after_threshold", finite_or_null(&[worst_after])[0].clone())
        .with_detail("margins_by_n", finite_or_null(&by_n)))
}

/// Log-moduli bounds of `f^n(D(c1, delta, c2))`:
/// `[[zlo, zhi], [wlo, whi]]`, from `phi_1 in lambda^n [-c1 delta, -c1]`
/// and `phi_2 in lambda^{-n} [-c2, c2]`.
pub fn ih_box(ed: &EigenData, c1: f64, delta: f64, c2: f64, n: usize) -> [[f64; 2]; 2] {
    let up = ed.lambda1.powi(n as i32);
    let down = ed.lambda2.abs().powi(n as i32);
    let mut b = [[f64::INFINITY, f64::NEG_INFINITY]; 2];
    for phi1 in [-up * c1 * delta, -up * c1] {
        for phi2 in [-down * c2, down * c2] {
            let l = invert_phi(ed, phi1, phi2);
            for k in 0..2 {
                b[k][0] = b[k][0].min(l[k]);
                b[k][1] = b[k][1].max(l[k]);
            }
        }
    }
    b
}

#[allow(clippy::too_many_arguments)]
pub fn ih_box_check(
    germ: &IHGerm,
    ed: &EigenData,
    c1: f64,
    delta: f64,
    c2: f64,
    n_max: usize,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    check_band(c1, delta, c2)?;
    let mut g = rng(seed);
    let starts: Vec<ScaledPoint> = (0..samples).map(|_| band_point(&mut g, ed, c1, delta, c2)).collect();
    ih_box_check_at(germ, ed, c1, delta, c2, n_max, &starts, Some(seed))
}

fn check_band(c1: f64, delta: f64, c2: f64) -> Result<()> {
    if c1 > 0.0 && c2 > 0.0 && delta >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("need c1, c2 > 0 and delta >= 1; got ({c1}, {delta}, {c2})")))
    }
}

/// Maps the given points of the band by the exact log-space dynamics and
/// checks the four modulus bounds and `|f^n(x)|^2 <= r_n^2` with
/// `r_n^2 = exp(2 zhi) + exp(2 whi)`, all in log scale.
#[allow(clippy::too_many_arguments)]
pub fn ih_box_check_at(
    germ: &IHGerm,
    ed: &EigenData,
    c1: f64,
    delta: f64,
    c2: f64,
    n_max: usize,
    starts: &[ScaledPoint],
    seed: Option<u64>,
) -> Result<VerificationReport> {
    check_band(c1, delta, c2)?;
    let boxes: Vec<_> = (0..=n_max).map(|n| ih_box(ed, c1, delta, c2, n)).collect();
    let mut by_n = vec![f64::INFINITY; n_max + 1];
    for x in starts {
        let mut y = *x;
        for n in 0..=n_max {
            if n > 0 {
                y = germ.eval_log(&y);
            }
            let [[zlo, zhi], [wlo, whi]] = boxes[n];
            let (lz, lw) = (y[0].log_mod(), y[1].log_mod());
            let ball = log_sum_exp(2.0 * zhi, 2.0 * whi) - log_sum_exp(2.0 * lz, 2.0 * lw);
            let m = [zhi - lz, lz - zlo, whi - lw, lw - wlo, ball].into_iter().fold(f64::INFINITY, f64::min);
            by_n[n] = by_n[n].min(if m.is_nan() { f64::NEG_INFINITY } else { m });
        }
    }
    let worst = by_n.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(VerificationReport::worst_margin(
        "ih_box",
        spec_label(&Germ::InoueHirzebruch(germ.clone())),
        starts.len(),
        seed,
        worst,
    )
    .with_detail("c1", c1)
    .with_detail("delta", delta)
    .with_detail("c2", c2)
    .with_detail("beta", ed.beta())
    .with_detail("n_max", n_max)
    .with_detail("margins_by_n", finite_or_null(&by_n)))
}

fn spec_label(g: &Germ) -> String {
    serde_json::to_string(&g.to_spec()).expect("spec serializes")
}

/// JSON has no infinities; an unbounded margin (a zero coordinate) is `null`.
fn finite_or_null(v: &[f64]) -> Vec<serde_json::Value> {
    v.iter().map(|x| if x.is_finite() { (*x).into() } else { serde_json::Value::Null }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germs::{validate, GermSpec};
    use crate::matrix::eigen_data;
    use crate::scaled::to_complex_point;

    fn enoki(q: &str) -> EnokiGerm {
        let text = format!(r#"{{"family":"enoki","alpha":[0.5,0],"s":1,"Q":{q}}}"#);
        match validate(&GermSpec::from_json(&text).unwrap()).unwrap() {
            Germ::Enoki(g) => g,
            _ => unreachable!(),
        }
    }

    fn poly(terms: &[(u32, f64)]) -> Polynomial {
        let t: Vec<_> = terms.iter().map(|&(k, c)| (k, Complex64::new(c, 0.0))).collect();
        Polynomial::from_terms(&t)
    }

    #[test]
    fn c1_examples() {
        assert!((compute_c1(&poly(&[(1, 1.0)])) - 1.0).abs() < 1e-12);
        assert!((compute_c1(&poly(&[(2, 0.5)])) - 0.5).abs() < 1e-12);
        assert!((compute_c1(&poly(&[(1, 1.0), (2, 1.0)])) - 2.0).abs() < 2e-8);
        assert_eq!(compute_c1(&Polynomial::zero()), 0.0);
        // maximum between grid nodes: |1 + e^{i(t - t0)}| peaks at t0
        let t0 = 0.5 * TAU / C1_SCAN as f64;
        let q = Polynomial::from_terms(&[(1, Complex64::new(1.0, 0.0)), (2, Complex64::from_polar(1.0, -t0))]);
        assert!((compute_c1(&q) - 2.0).abs() < 2e-8);
    }

    #[test]
    fn enoki_bound_example() {
        let g = enoki("[[1,0]]");
        let b = enoki_bounds(&g, 2.0, 3);
        assert!((b[3][0].exp() - 0.125).abs() < 1e-15);
        assert!((b[3][1].exp() - 0.875).abs() < 1e-14);
        assert_eq!(b[0], [0.0, 2f64.ln()]);
    }

    #[test]
    fn enoki_containment_passes_and_margins_grow() {
        let g = enoki("[[1,0]]");
        let rep = enoki_containment(&g, 2.0, 20, 2000, 7).unwrap();
        assert!(rep.pass, "{}", rep.value);
        let m: Vec<f64> = rep.details["margins_by_n"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
        for n in 2..20 {
            assert!(m[n + 1] >= m[n], "n = {n}: {} < {}", m[n + 1], m[n]);
        }
    }

    #[test]
    fn enoki_images_checked_directly() {
        // oracle: plain complex iteration for n = 3
        let g = enoki("[[1,0]]");
        let mut r = rng(3);
        for _ in 0..500 {
            let x = polydisc_point(&mut r, 1.0, 2.0);
            let mut p = to_complex_point(&x);
            for _ in 0..3 {
                p = g.eval(p);
            }
            assert!(p[0].norm() <= 0.125 + 1e-15 && p[1].norm() <= 0.875 + 1e-14);
        }
    }

    #[test]
    fn enoki_degenerate_q() {
        let g = enoki("[]");
        let rep = enoki_containment(&g, 2.0, 20, 2000, 8).unwrap();
        assert!(rep.pass, "{}", rep.value);
        let b = enoki_bounds(&g, 2.0, 4);
        assert!((b[4][1] - (6.0 * 0.5f64.ln() + 2f64.ln())).abs() < 1e-14);
    }

    #[test]
    fn enoki_identity_case() {
        let rep = enoki_containment(&enoki("[[1,0]]"), 2.0, 0, 200, 1).unwrap();
        assert!(rep.pass);
        assert!(enoki_containment(&enoki("[[1,0]]"), 2.0, 61, 10, 1).is_err());
    }

    fn intermediate() -> IntermediateGerm {
        match Germ::from_json(r#"{"family":"intermediate","p":2,"s":1,"lambda":[1,0],"low":[[1,0]]}"#).unwrap() {
            Germ::Intermediate(g) => g,
            _ => unreachable!(),
        }
    }

    #[test]
    fn intermediate_passes_from_four() {
        let g = intermediate();
        let rep = intermediate_containment(&g, 0.5, 1.0, 4, 40, 1000, 5).unwrap();
        assert!(rep.pass, "{}", rep.value);
        assert_eq!(rep.details["threshold"], 4);
    }

    #[test]
    fn intermediate_threshold_reported() {
        let g = intermediate();
        let rep = intermediate_containment(&g, 0.5, 1.0, 0, 10, 1000, 5).unwrap();
        let t = rep.details["threshold"].as_u64().unwrap();
        assert!(t <= 4);
        assert_eq!(rep.pass, t == 0);
    }

    #[test]
    fn intermediate_single_axis_sample() {
        let g = intermediate();
        let x = [ScaledComplex::from_real(0.5), ScaledComplex::ZERO];
        let rep = intermediate_containment_at(&g, 0.5, 1.0, 4, 10, &[x], None).unwrap();
        assert!(rep.pass);
    }

    fn ih(word: &str) -> (IHGerm, EigenData) {
        match Germ::from_json(&format!(r#"{{"family":"ih","word":"{word}"}}"#)).unwrap() {
            Germ::InoueHirzebruch(g) => {
                let ed = eigen_data(&g.matrix()).unwrap();
                (g, ed)
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn ih_box_passes_with_positive_margins() {
        for w in ["S", "SST"] {
            let (g, ed) = ih(w);
            let rep = ih_box_check(&g, &ed, 1.0, 1f64.exp(), 1.0, 10, 1000, 6).unwrap();
            assert!(rep.pass && rep.value > 0.0, "{w}: {}", rep.value);
        }
    }

    #[test]
    fn ih_box_at_zero_is_the_band() {
        let (g, ed) = ih("S");
        let rep = ih_box_check(&g, &ed, 1.0, 2.0, 1.0, 0, 1000, 6).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn ih_box_rejects_perturbed_eigenvector() {
        let (g, ed) = ih("S");
        let bad = ed.with_beta_shift(0.05);
        let rep = ih_box_check(&g, &bad, 1.0, 1f64.exp(), 1.0, 10, 1000, 6).unwrap();
        assert!(!rep.pass, "{}", rep.value);
    }
}
