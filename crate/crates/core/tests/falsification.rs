//! Every suite must reject at least one broken input.

use kgl_core::germs::Germ;
use kgl_core::matrix::eigen_data;
use kgl_core::potential::{AddWSquare, Calibration};
use kgl_core::verification::levi::DEFAULT_STEP;
use kgl_core::verification::{foliation_check, ih_box_check, invariance_residual, levi_psd_check, SamplingMargins};
use kgl_core::{Error, InvariantFunction, PeriodicFunction};

const SEED: u64 = 0xC0FFEE;

fn intermediate() -> Germ {
    Germ::from_json(r#"{"family":"intermediate","p":2,"s":1,"lambda":[1,0],"low":[[1,0]]}"#).unwrap()
}

#[test]
fn added_w_square_breaks_invariance_for_every_family() {
    let m = SamplingMargins::default();
    let lambda = (1.0 + 5f64.sqrt()) / 2.0;
    let cases = [
        (Germ::from_json(r#"{"family":"enoki","alpha":[0.5,0],"s":1,"Q":[[1,0]]}"#).unwrap(), None),
        (intermediate(), Some(PeriodicFunction::zero(2f64.ln()))),
        (Germ::from_json(r#"{"family":"ih","word":"S"}"#).unwrap(), Some(PeriodicFunction::zero(lambda.ln()))),
    ];
    for (g, psi) in cases {
        let u = InvariantFunction::build(&g, psi).unwrap();
        assert!(invariance_residual(&u, &g, 500, SEED, &m).unwrap().pass);
        let t = AddWSquare { base: &u };
        let rep = invariance_residual(&t, &g, 500, SEED, &m).unwrap();
        assert!(!rep.pass && rep.value > 0.01, "{}: {}", g.family(), rep.value);
    }
}

#[test]
fn over_scaled_psi_is_refused() {
    let ln2 = 2f64.ln();
    let eps = PeriodicFunction::sine(ln2, 1, 1.0).max_scale(8192);
    let over = PeriodicFunction::sine(ln2, 1, 1.01 * eps);
    assert!(matches!(InvariantFunction::build(&intermediate(), Some(over)), Err(Error::NotInCone { .. })));
    let under = PeriodicFunction::sine(ln2, 1, 0.99 * eps);
    assert!(InvariantFunction::build(&intermediate(), Some(under)).is_ok());
}

#[test]
fn calibration_counterexamples() {
    let m = SamplingMargins::default();
    assert!(!levi_psd_check(&Calibration::NegativeZSquare, 200, DEFAULT_STEP, SEED, &m).unwrap().pass);
    assert!(!foliation_check(&Calibration::ReZReW, 200, DEFAULT_STEP, SEED, &m).unwrap().pass);
}

#[test]
fn perturbed_eigenvector_leaves_the_box() {
    for w in ["S", "SST"] {
        let g = match Germ::from_json(&format!(r#"{{"family":"ih","word":"{w}"}}"#)).unwrap() {
            Germ::InoueHirzebruch(g) => g,
            _ => unreachable!(),
        };
        let ed = eigen_data(&g.matrix()).unwrap();
        let e = std::f64::consts::E;
        assert!(ih_box_check(&g, &ed, 1.0, e, 1.0, 10, 1000, SEED).unwrap().pass, "{w}");
        let bad = ed.with_beta_shift(0.05);
        assert!(!ih_box_check(&g, &bad, 1.0, e, 1.0, 10, 1000, SEED).unwrap().pass, "{w}");
    }
}
