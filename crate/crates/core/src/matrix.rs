//! Integer and spectral analysis of Inoue-Hirzebruch matrices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::germs::{IHGerm, IHWord, Letter};
use crate::scaled::ScaledPoint;
use crate::verification::report::VerificationReport;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `[[a, b], [c, d]]` with nonnegative entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntMatrix2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl IntMatrix2 {
    pub const S: Self = Self { a: 0, b: 1, c: 1, d: 1 };
    pub const T: Self = Self { a: 1, b: 1, c: 0, d: 1 };
    pub const IDENTITY: Self = Self { a: 1, b: 0, c: 0, d: 1 };

    pub fn det(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }

    pub fn trace(&self) -> i128 {
        self.a as i128 + self.d as i128
    }

    /// `trace^2 - 4 det`.
    pub fn discriminant(&self) -> i128 {
        let t = self.trace();
        t * t - 4 * self.det()
    }

    /// Product with overflow detection against the signed 63-bit range.
    pub fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        let dot = |x: u64, y: u64, u: u64, v: u64| -> Option<u64> {
            let s = x.checked_mul(y)?.checked_add(u.checked_mul(v)?)?;
            (s <= i64::MAX as u64).then_some(s)
        };
        Some(Self {
            a: dot(self.a, rhs.a, self.b, rhs.c)?,
            b: dot(self.a, rhs.b, self.b, rhs.d)?,
            c: dot(self.c, rhs.a, self.d, rhs.c)?,
            d: dot(self.c, rhs.b, self.d, rhs.d)?,
        })
    }

    pub fn rows(&self) -> [[u64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }
}

impl From<Letter> for IntMatrix2 {
    fn from(l: Letter) -> Self {
        match l {
            Letter::S => Self::S,
            Letter::T => Self::T,
        }
    }
}

/// `M(l_1) M(l_2) ... M(l_k)`, read left to right.
pub fn word_to_matrix(word: &IHWord) -> Result<IntMatrix2> {
    word.letters()
        .iter()
        .try_fold(IntMatrix2::IDENTITY, |acc, &l| acc.checked_mul(&IntMatrix2::from(l)))
        .ok_or(Error::Overflow)
}

/// Exact integer square root (floor).
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_perfect_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n as u128);
    r * r == n as u128
}

/// Spectral data of `A^t`. Eigenvectors are normalized to first coordinate 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenData {
    pub lambda1: f64,
    pub lambda2: f64,
    pub v1: [f64; 2],
    pub v2: [f64; 2],
    pub det: i64,
    pub disc: i64,
}

impl EigenData {
    pub fn alpha(&self) -> f64 {
        self.v1[0]
    }
    pub fn beta(&self) -> f64 {
        self.v1[1]
    }

    pub fn vector(&self, index: usize) -> [f64; 2] {
        if index == 1 {
            self.v1
        } else {
            self.v2
        }
    }

    pub fn lambda(&self, index: usize) -> f64 {
        if index == 1 {
            self.lambda1
        } else {
            self.lambda2
        }
    }

    /// `alpha_2 beta_1 - alpha_1 beta_2`, positive under the sign convention.
    pub fn cross(&self) -> f64 {
        self.v2[0] * self.v1[1] - self.v1[0] * self.v2[1]
    }

    /// Copy with `beta_1` shifted; used to build falsification inputs.
    pub fn with_beta_shift(&self, delta: f64) -> Self {
        let mut out = *self;
        out.v1[1] += delta;
        out
    }

    /// `max_i ||A^t v_i - lambda_i v_i||_inf`.
    pub fn residual(&self, m: &IntMatrix2) -> f64 {
        let at = [[m.a as f64, m.c as f64], [m.b as f64, m.d as f64]];
        [(self.v1, self.lambda1), (self.v2, self.lambda2)]
            .iter()
            .flat_map(|(v, l)| (0..2).map(move |r| (at[r][0] * v[0] + at[r][1] * v[1] - l * v[r]).abs()))
            .fold(0.0, f64::max)
    }
}

/// Eigenvalues and sign-normalized eigenvectors of `A^t`.
pub fn eigen_data(m: &IntMatrix2) -> Result<EigenData> {
    let disc = m.discriminant();
    if disc <= 0 {
        return Err(Error::DegenerateSpectrum(disc));
    }
    let det = m.det();
    let tr = m.trace() as f64;
    let lambda1 = (tr + (disc as f64).sqrt()) / 2.0;
    // product of the roots is det; avoids cancellation in (tr - sqrt(disc))/2
    let lambda2 = det as f64 / lambda1;
    // A^t = [[a, c], [b, d]]: first row gives a + c beta = lambda
    let second = |lambda: f64| -> f64 {
        if m.c != 0 {
            (lambda - m.a as f64) / m.c as f64
        } else {
            m.b as f64 / (lambda - m.d as f64)
        }
    };
    Ok(EigenData {
        lambda1,
        lambda2,
        v1: [1.0, second(lambda1)],
        v2: [1.0, second(lambda2)],
        det: det as i64,
        disc: disc as i64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TraceClass {
    /// `trace(A) > 2`.
    StrictlyExpanding,
    /// `A` is `[[0,1],[1,1]]` or `[[0,1],[1,2]]`.
    ListedException,
    /// `trace(A) <= 2` and `A` is a cyclic rotation of a listed exception.
    CyclicException,
}

const LISTED: [IntMatrix2; 2] = [IntMatrix2 { a: 0, b: 1, c: 1, d: 1 }, IntMatrix2 { a: 0, b: 1, c: 1, d: 2 }];

pub fn trace_dichotomy(word: &IHWord) -> Result<TraceClass> {
    let m = word_to_matrix(word)?;
    if m.trace() > 2 {
        return Ok(TraceClass::StrictlyExpanding);
    }
    if LISTED.contains(&m) {
        return Ok(TraceClass::ListedException);
    }
    // trace <= 2 leaves only S, ST and TS, and TS rotates to ST
    for k in 1..word.len() {
        let r = word_to_matrix(&word.rotate(k))?;
        if LISTED.contains(&r) {
            return Ok(TraceClass::CyclicException);
        }
    }
    unreachable!("word {word} has trace {} but no listed rotation", m.trace())
}

/// `alpha_i log|z| + beta_i log|w|` for a point with nonzero coordinates.
pub fn phi(ed: &EigenData, index: usize, point: [Complex64; 2]) -> Result<f64> {
    if point.iter().any(|z| z.re == 0.0 && z.im == 0.0) {
        return Err(Error::ZeroCoordinate);
    }
    let v = ed.vector(index);
    Ok(v[0] * point[0].norm().ln() + v[1] * point[1].norm().ln())
}

/// `phi_i` from log-moduli. A zero coordinate gives `-inf` for `phi_1`
/// (both weights positive); for `phi_2` it is undefined and yields NaN.
pub fn phi_scaled(ed: &EigenData, index: usize, point: &ScaledPoint) -> f64 {
    let v = ed.vector(index);
    v[0] * point[0].log_mod() + v[1] * point[1].log_mod()
}

/// `phi_i` on log-moduli given directly.
pub fn phi_log(ed: &EigenData, index: usize, log_mods: [f64; 2]) -> f64 {
    let v = ed.vector(index);
    v[0] * log_mods[0] + v[1] * log_mods[1]
}

pub const PHI_EQUIVARIANCE_TOL: f64 = 1e-10;

/// Random log-space sample points: log-moduli uniform in `[-1, 0]`,
/// arguments uniform in `(-pi, pi]`.
pub fn log_space_samples(n: usize, seed: u64) -> Vec<ScaledPoint> {
    use crate::scaled::ScaledComplex;
    use std::f64::consts::PI;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut coord = || ScaledComplex::from_polar(-rng.gen::<f64>(), rng.gen_range(-PI..PI));
            [coord(), coord()]
        })
        .collect()
}

/// Max over samples and `i` of `|phi_i(f(x)) - lambda_i phi_i(x)|`.
pub fn verify_phi_equivariance(germ: &IHGerm, ed: &EigenData, samples: &[ScaledPoint]) -> VerificationReport {
    let mut worst = 0.0f64;
    for x in samples {
        let y = germ.eval_log(x);
        for i in [1, 2] {
            let r = (phi_scaled(ed, i, &y) - ed.lambda(i) * phi_scaled(ed, i, x)).abs();
            worst = worst.max(if r.is_nan() { f64::INFINITY } else { r });
        }
    }
    VerificationReport::max_residual(
        "phi_equivariance",
        format!("ih:{}", germ.word()),
        samples.len(),
        None,
        worst,
        PHI_EQUIVARIANCE_TOL,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn word(s: &str) -> IHWord {
        IHWord::parse(s).unwrap()
    }

    /// Naive product for the oracle side.
    fn naive_product(w: &str) -> [[i128; 2]; 2] {
        let mut acc = [[1i128, 0], [0, 1]];
        for ch in w.chars() {
            let m = if ch == 'S' { [[0, 1], [1, 1]] } else { [[1, 1], [0, 1]] };
            let mut out = [[0i128; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] = (0..2).map(|k| acc[i][k] * m[k][j]).sum();
                }
            }
            acc = out;
        }
        acc
    }

    fn as_i128(m: IntMatrix2) -> [[i128; 2]; 2] {
        [[m.a as i128, m.b as i128], [m.c as i128, m.d as i128]]
    }

    #[test]
    fn word_matrix_examples() {
        assert_eq!(word_to_matrix(&word("S")).unwrap(), IntMatrix2 { a: 0, b: 1, c: 1, d: 1 });
        assert_eq!(word_to_matrix(&word("SS")).unwrap(), IntMatrix2 { a: 1, b: 1, c: 1, d: 2 });
        assert_eq!(word_to_matrix(&word("TS")).unwrap(), IntMatrix2 { a: 1, b: 2, c: 1, d: 1 });
        for w in ["S", "SS", "TS", "STTS", "SSTSTTTS"] {
            assert_eq!(as_i128(word_to_matrix(&word(w)).unwrap()), naive_product(w));
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(word_to_matrix(&word(&"S".repeat(95))), Err(Error::Overflow)));
        assert!(word_to_matrix(&word(&"S".repeat(80))).is_ok());
    }

    #[test]
    fn eigen_examples() {
        let sqrt5 = 5f64.sqrt();
        let ed = eigen_data(&IntMatrix2::S).unwrap();
        let golden = (1.0 + sqrt5) / 2.0;
        assert!((ed.lambda1 - golden).abs() < 1e-15);
        assert!((ed.lambda2 + 1.0 / golden).abs() < 1e-15);
        assert!((ed.v1[1] - golden).abs() < 1e-15);
        assert!((ed.v2[1] + 0.618033988749895).abs() < 1e-15);
        assert_eq!((ed.det, ed.disc), (-1, 5));

        let ed = eigen_data(&word_to_matrix(&word("SS")).unwrap()).unwrap();
        assert!((ed.lambda1 - (3.0 + sqrt5) / 2.0).abs() < 1e-15);

        let ed = eigen_data(&word_to_matrix(&word("TS")).unwrap()).unwrap();
        assert!((ed.lambda1 - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        assert_eq!(ed.det, -1);
    }

    #[test]
    fn degenerate_spectrum_rejected() {
        assert!(matches!(eigen_data(&IntMatrix2::IDENTITY), Err(Error::DegenerateSpectrum(0))));
    }

    #[test]
    fn perfect_squares() {
        for k in 0..2000u128 {
            assert!(is_perfect_square((k * k) as i128));
            if k > 1 {
                assert!(!is_perfect_square((k * k + 1) as i128));
            }
        }
        assert!(!is_perfect_square(-4));
        let big = (1u128 << 62) + 7;
        assert!(is_perfect_square((big * big) as i128));
        assert!(!is_perfect_square((big * big - 1) as i128));
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace_dichotomy(&word("S")).unwrap(), TraceClass::ListedException);
        assert_eq!(trace_dichotomy(&word("ST")).unwrap(), TraceClass::ListedException);
        assert_eq!(trace_dichotomy(&word("SS")).unwrap(), TraceClass::StrictlyExpanding);
        assert_eq!(trace_dichotomy(&word("TS")).unwrap(), TraceClass::CyclicException);
    }

    fn all_words(len: usize) -> impl Iterator<Item = String> {
        (0..1u32 << len).map(move |bits| (0..len).map(|i| if bits >> i & 1 == 1 { 'S' } else { 'T' }).collect())
    }

    #[test]
    fn expanding_for_two_s_letters() {
        for len in 3..=8 {
            for w in all_words(len) {
                if w.matches('S').count() >= 2 {
                    assert_eq!(trace_dichotomy(&word(&w)).unwrap(), TraceClass::StrictlyExpanding, "{w}");
                }
            }
        }
    }

    #[test]
    fn classification_total_on_short_words() {
        for len in 1..=10 {
            for w in all_words(len).filter(|w| w.contains('S')) {
                trace_dichotomy(&word(&w)).unwrap();
            }
        }
    }

    #[test]
    fn phi_examples() {
        let ed = eigen_data(&IntMatrix2::S).unwrap();
        let e = Complex64::new((-1.0f64).exp(), 0.0);
        assert!((phi(&ed, 1, [e, e]).unwrap() + 2.618033988749895).abs() < 1e-15);
        assert!((phi(&ed, 2, [e, e]).unwrap() + 0.381966011250105).abs() < 1e-15);
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(phi(&ed, 1, [one, one]).unwrap(), 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert!(matches!(phi(&ed, 1, [zero, one]), Err(Error::ZeroCoordinate)));
    }

    #[test]
    fn equivariance_examples() {
        for w in ["S", "SST"] {
            let g = IHGerm::new(word(w)).unwrap();
            let ed = eigen_data(&g.matrix()).unwrap();
            let rep = verify_phi_equivariance(&g, &ed, &log_space_samples(1000, 7));
            assert!(rep.pass, "{w}: {}", rep.value);
            assert!(rep.value <= 1e-12, "{w}: {}", rep.value);
        }
        let g = IHGerm::new(word("S")).unwrap();
        let ed = eigen_data(&g.matrix()).unwrap().with_beta_shift(0.01);
        let rep = verify_phi_equivariance(&g, &ed, &log_space_samples(1000, 7));
        assert!(!rep.pass);
        assert!(rep.value > 1e-3);
    }

    fn word_strategy() -> impl Strategy<Value = String> {
        proptest::collection::vec(prop_oneof![Just('S'), Just('T')], 1..=12)
            .prop_filter("needs an S", |v| v.contains(&'S'))
            .prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn eigen_structure(w in word_strategy()) {
            let m = word_to_matrix(&word(&w)).unwrap();
            prop_assert!(m.det() == 1 || m.det() == -1);
            prop_assert!(!is_perfect_square(m.discriminant()));
            let ed = eigen_data(&m).unwrap();
            prop_assert!(ed.lambda1 > 1.0 + 1e-9);
            prop_assert!(ed.v1[0] > 0.0 && ed.v1[1] > 0.0);
            prop_assert!(ed.v2[0] > 0.0 && ed.v2[1] < 0.0);
            prop_assert!(ed.residual(&m) <= 1e-12, "residual {}", ed.residual(&m));
        }
    }
}
