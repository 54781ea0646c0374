//! The three normal-form families of contracting germs:
//!
//! * Enoki: `f(z, w) = (alpha z, w z^s + Q(z))`
//! * intermediate: `f(z, w) = (z^p, lambda w z^s + Q(z))` on `Delta x C`
//! * Inoue-Hirzebruch: `f(z, w) = (z^a w^b, z^c w^d)`

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::matrix::{word_to_matrix, IntMatrix2};
use crate::scaled::{to_scaled_point, ScaledComplex, ScaledPoint};

pub type Point = [Complex64; 2];

fn c(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn is_nonzero(z: Complex64) -> bool {
    z.re != 0.0 || z.im != 0.0
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Polynomial without constant term: `coeffs[i]` multiplies `z^(i+1)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds `sum_k coeff_k z^exp_k` for exponents `>= 1`.
    pub fn from_terms(terms: &[(u32, Complex64)]) -> Self {
        let len = terms.iter().map(|(e, _)| *e as usize).max().unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        for &(e, a) in terms {
            assert!(e >= 1, "constant terms are not representable");
            coeffs[e as usize - 1] += a;
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Index of the highest nonzero coefficient; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|a| is_nonzero(*a)).map_or(0, |i| i + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.degree() == 0
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        // Horner on Q(z)/z, then one extra factor z
        let mut acc = Complex64::new(0.0, 0.0);
        for a in self.coeffs.iter().rev() {
            acc = acc * z + a;
        }
        acc * z
    }

    /// Evaluates `Q(z)/z`, which is holomorphic on the closed disc.
    pub fn eval_quotient(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in self.coeffs.iter().rev() {
            acc = acc * z + a;
        }
        acc
    }

    pub fn eval_scaled(&self, z: ScaledComplex) -> ScaledComplex {
        let mut acc = ScaledComplex::ZERO;
        for (i, a) in self.coeffs.iter().enumerate() {
            if is_nonzero(*a) {
                acc = acc + ScaledComplex::from(*a) * z.powu(i as u64 + 1);
            }
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnokiGerm {
    alpha: Complex64,
    s: u32,
    q: Polynomial,
}

impl EnokiGerm {
    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn q(&self) -> &Polynomial {
        &self.q
    }

    pub fn eval(&self, [z, w]: Point) -> Point {
        [self.alpha * z, w * z.powu(self.s) + self.q.eval(z)]
    }

    pub fn eval_scaled(&self, [z, w]: &ScaledPoint) -> ScaledPoint {
        let alpha = ScaledComplex::from(self.alpha);
        [alpha * *z, *w * z.powu(self.s as u64) + self.q.eval_scaled(*z)]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntermediateGerm {
    p: u32,
    s: u32,
    lambda: Complex64,
    low: Vec<Complex64>,
    a: Complex64,
}

impl IntermediateGerm {
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }
    pub fn low(&self) -> &[Complex64] {
        &self.low
    }
    pub fn a(&self) -> Complex64 {
        self.a
    }

    /// Exponent `ps/(p-1)` of the `a` term when it is an integer.
    pub fn top_exponent(&self) -> Option<u32> {
        let num = self.p as u64 * self.s as u64;
        let den = self.p as u64 - 1;
        num.is_multiple_of(den).then_some((num / den) as u32)
    }

    /// The full polynomial `Q(z) = sum a_m z^m + a z^(ps/(p-1))`.
    pub fn q(&self) -> Polynomial {
        let mut terms: Vec<(u32, Complex64)> = self.low.iter().enumerate().map(|(i, a)| (i as u32 + 1, *a)).collect();
        if is_nonzero(self.a) {
            if let Some(e) = self.top_exponent() {
                terms.push((e, self.a));
            }
        }
        Polynomial::from_terms(&terms)
    }

    pub fn eval(&self, [z, w]: Point) -> Result<Point> {
        if z.norm() >= 1.0 {
            return Err(Error::DomainViolation(format!("intermediate germ requires |z| < 1, got |z| = {}", z.norm())));
        }
        Ok([z.powu(self.p), self.lambda * w * z.powu(self.s) + self.q().eval(z)])
    }

    pub fn eval_scaled(&self, [z, w]: &ScaledPoint) -> Result<ScaledPoint> {
        if z.log_mod() >= 0.0 {
            return Err(Error::DomainViolation(format!(
                "intermediate germ requires |z| < 1, got log|z| = {}",
                z.log_mod()
            )));
        }
        let lambda = ScaledComplex::from(self.lambda);
        Ok([z.powu(self.p as u64), lambda * *w * z.powu(self.s as u64) + self.q().eval_scaled(*z)])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    /// `[[0, 1], [1, 1]]`
    S,
    /// `[[1, 1], [0, 1]]`
    T,
}

/// A nonempty word over `{S, T}` with at least one `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IHWord {
    letters: Vec<Letter>,
}

impl IHWord {
    pub fn new(letters: Vec<Letter>) -> std::result::Result<Self, Vec<Violation>> {
        let mut v = Vec::new();
        if letters.is_empty() {
            v.push(Violation::EmptyWord);
        }
        if !letters.contains(&Letter::S) {
            v.push(Violation::NoSFactor);
        }
        if v.is_empty() {
            Ok(Self { letters })
        } else {
            Err(v)
        }
    }

    pub fn parse(s: &str) -> std::result::Result<Self, Vec<Violation>> {
        let mut letters = Vec::with_capacity(s.len());
        let mut bad = false;
        for ch in s.trim().chars() {
            match ch {
                'S' | 's' => letters.push(Letter::S),
                'T' | 't' => letters.push(Letter::T),
                _ => bad = true,
            }
        }
        match (Self::new(letters), bad) {
            (Ok(w), false) => Ok(w),
            (Ok(_), true) => Err(vec![Violation::InvalidLetter]),
            (Err(mut v), true) => {
                v.insert(0, Violation::InvalidLetter);
                Err(v)
            }
            (Err(v), false) => Err(v),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The word read cyclically from position `k`.
    pub fn rotate(&self, k: usize) -> Self {
        let mut letters = self.letters.clone();
        letters.rotate_left(k % self.letters.len());
        Self { letters }
    }
}

impl fmt::Display for IHWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            f.write_str(match l {
                Letter::S => "S",
                Letter::T => "T",
            })?;
        }
        Ok(())
    }
}

impl FromStr for IHWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s).map_err(Error::Invalid)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IHGerm {
    word: IHWord,
    matrix: IntMatrix2,
}

impl IHGerm {
    pub fn new(word: IHWord) -> Result<Self> {
        let matrix = word_to_matrix(&word)?;
        Ok(Self { word, matrix })
    }

    pub fn word(&self) -> &IHWord {
        &self.word
    }

    pub fn matrix(&self) -> IntMatrix2 {
        self.matrix
    }

    pub fn eval(&self, [z, w]: Point) -> Point {
        let m = self.matrix;
        let mono = |x: u64, y: u64| z.powu(x as u32) * w.powu(y as u32);
        [mono(m.a, m.b), mono(m.c, m.d)]
    }

    /// The monomial map in log-polar coordinates: log-moduli (and arguments,
    /// modulo `2 pi`) transform by the integer matrix `A`. Zero coordinates
    /// are absorbing wherever their exponent is positive.
    pub fn eval_log(&self, [z, w]: &ScaledPoint) -> ScaledPoint {
        let m = self.matrix;
        [z.powu(m.a) * w.powu(m.b), z.powu(m.c) * w.powu(m.d)]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Germ {
    Enoki(EnokiGerm),
    Intermediate(IntermediateGerm),
    InoueHirzebruch(IHGerm),
}

/// Raw parameter record as read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum GermSpec {
    Enoki {
        alpha: [f64; 2],
        s: i64,
        #[serde(rename = "Q", default)]
        q: Vec<[f64; 2]>,
    },
    Intermediate {
        p: i64,
        s: i64,
        lambda: [f64; 2],
        #[serde(default)]
        low: Vec<[f64; 2]>,
        #[serde(default)]
        a: [f64; 2],
    },
    Ih {
        word: String,
    },
}

impl GermSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Checks every normal-form condition of the record and returns the germ, or
/// the full list of violated conditions.
pub fn validate(spec: &GermSpec) -> Result<Germ> {
    let mut v = Vec::new();
    let germ = match spec {
        GermSpec::Enoki { alpha, s, q } => {
            let finite = alpha.iter().chain(q.iter().flatten()).all(|x| x.is_finite());
            if !finite {
                v.push(Violation::NonFinite);
            }
            let alpha = c(*alpha);
            let modulus = alpha.norm();
            if finite && !(modulus > 0.0 && modulus < 1.0) {
                v.push(Violation::AlphaOutOfDisc);
            }
            if *s < 1 {
                v.push(Violation::ExponentTooSmall);
            }
            let q = Polynomial::new(q.iter().copied().map(c).collect());
            if (q.degree() as i64) > (*s).max(0) {
                v.push(Violation::DegreeTooHigh);
            }
            v.is_empty().then_some(Germ::Enoki(EnokiGerm { alpha, s: *s as u32, q }))
        }
        GermSpec::Intermediate { p, s, lambda, low, a } => {
            let finite = lambda.iter().chain(a.iter()).chain(low.iter().flatten()).all(|x| x.is_finite());
            if !finite {
                v.push(Violation::NonFinite);
            }
            if *p < 2 {
                v.push(Violation::DegreeTooSmall);
            }
            if *s < 1 {
                v.push(Violation::ExponentTooSmall);
            }
            let lambda = c(*lambda);
            if !is_nonzero(lambda) {
                v.push(Violation::ZeroLambda);
            }
            let low: Vec<Complex64> = low.iter().copied().map(c).collect();
            let low_degree = low.iter().rposition(|x| is_nonzero(*x)).map_or(0, |i| i + 1);
            if (low_degree as i64) > (*s).max(0) {
                v.push(Violation::DegreeTooHigh);
            }
            if *p >= 2 {
                let g = low
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| is_nonzero(**x))
                    .fold(*p as u64, |g, (i, _)| gcd(g, i as u64 + 1));
                if g != 1 {
                    v.push(Violation::GcdCondition);
                }
            }
            let a = c(*a);
            if is_nonzero(a) && *p >= 2 && *s >= 1 {
                let divides = *s % (*p - 1) == 0;
                if !divides || lambda != Complex64::new(1.0, 0.0) {
                    v.push(Violation::ForbiddenA);
                }
                if (*p * *s) % (*p - 1) != 0 {
                    v.push(Violation::NonIntegerExponent);
                }
            }
            v.is_empty().then(|| {
                let mut low = low;
                low.truncate(low_degree);
                Germ::Intermediate(IntermediateGerm { p: *p as u32, s: *s as u32, lambda, low, a })
            })
        }
        GermSpec::Ih { word } => match IHWord::parse(word) {
            Ok(w) => match IHGerm::new(w) {
                Ok(g) => Some(Germ::InoueHirzebruch(g)),
                Err(Error::Overflow) => {
                    v.push(Violation::Overflow);
                    None
                }
                Err(e) => return Err(e),
            },
            Err(mut violations) => {
                v.append(&mut violations);
                None
            }
        },
    };
    germ.ok_or(Error::Invalid(v))
}

impl Germ {
    pub fn from_json(text: &str) -> Result<Self> {
        validate(&GermSpec::from_json(text)?)
    }

    pub fn family(&self) -> &'static str {
        match self {
            Germ::Enoki(_) => "enoki",
            Germ::Intermediate(_) => "intermediate",
            Germ::InoueHirzebruch(_) => "ih",
        }
    }

    /// Normalized parameter record; round-trips through [`validate`].
    pub fn to_spec(&self) -> GermSpec {
        match self {
            Germ::Enoki(g) => GermSpec::Enoki {
                alpha: pair(g.alpha),
                s: g.s as i64,
                q: g.q.coeffs().iter().copied().map(pair).collect(),
            },
            Germ::Intermediate(g) => GermSpec::Intermediate {
                p: g.p as i64,
                s: g.s as i64,
                lambda: pair(g.lambda),
                low: g.low.iter().copied().map(pair).collect(),
                a: pair(g.a),
            },
            Germ::InoueHirzebruch(g) => GermSpec::Ih { word: g.word.to_string() },
        }
    }

    pub fn eval(&self, p: Point) -> Result<Point> {
        match self {
            Germ::Enoki(g) => Ok(g.eval(p)),
            Germ::Intermediate(g) => g.eval(p),
            Germ::InoueHirzebruch(g) => Ok(g.eval(p)),
        }
    }

    pub fn eval_scaled(&self, p: &ScaledPoint) -> Result<ScaledPoint> {
        match self {
            Germ::Enoki(g) => Ok(g.eval_scaled(p)),
            Germ::Intermediate(g) => g.eval_scaled(p),
            Germ::InoueHirzebruch(g) => Ok(g.eval_log(p)),
        }
    }

    /// Trajectory `[x, f(x), ..., f^n(x)]` computed in log-polar arithmetic.
    pub fn iterate(&self, start: ScaledPoint, n: usize) -> Result<Vec<ScaledPoint>> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(start);
        let mut x = start;
        for _ in 0..n {
            x = self.eval_scaled(&x)?;
            out.push(x);
        }
        Ok(out)
    }

    pub fn iterate_point(&self, start: Point, n: usize) -> Result<Vec<ScaledPoint>> {
        self.iterate(to_scaled_point(start), n)
    }
}
