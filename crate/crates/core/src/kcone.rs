//! Periodic functions `psi` and membership in the convex set
//! `K_alpha = { psi alpha-periodic : -psi'' + psi' + 1 >= 0 }`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

pub const DEFAULT_GRID: usize = 8192;
pub const DEFAULT_TOL: f64 = 1e-9;

/// `psi(t) = a0 + sum_k a_k cos(w_k t) + b_k sin(w_k t)` with `w_k = 2 pi k / period`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicFunction {
    pub period: f64,
    #[serde(default)]
    pub a0: f64,
    #[serde(default)]
    pub harmonics: Vec<[f64; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Membership {
    /// Grid minimum of `g = -psi'' + psi' + 1`.
    pub min_value: f64,
    /// Lipschitz bound used for the grid correction.
    pub lipschitz: f64,
    /// Pass threshold `-tol - L * period / grid_n`.
    pub threshold: f64,
    pub pass: bool,
}

impl PeriodicFunction {
    pub fn zero(period: f64) -> Self {
        Self { period, a0: 0.0, harmonics: Vec::new() }
    }

    /// `amplitude * sin(2 pi k t / period)`.
    pub fn sine(period: f64, k: usize, amplitude: f64) -> Self {
        let mut harmonics = vec![[0.0, 0.0]; k];
        harmonics[k - 1] = [0.0, amplitude];
        Self { period, a0: 0.0, harmonics }
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn frequency(&self, k: usize) -> f64 {
        TAU * k as f64 / self.period
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            period: self.period,
            a0: c * self.a0,
            harmonics: self.harmonics.iter().map(|[a, b]| [c * a, c * b]).collect(),
        }
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self { a0: self.a0 + c, ..self.clone() }
    }

    /// Pointwise sum; both terms must share the period.
    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.period, other.period, "periods differ");
        let n = self.harmonics.len().max(other.harmonics.len());
        let get = |h: &[[f64; 2]], k: usize| h.get(k).copied().unwrap_or([0.0, 0.0]);
        Self {
            period: self.period,
            a0: self.a0 + other.a0,
            harmonics: (0..n)
                .map(|k| {
                    let (x, y) = (get(&self.harmonics, k), get(&other.harmonics, k));
                    [x[0] + y[0], x[1] + y[1]]
                })
                .collect(),
        }
    }

    /// Derivative of any order in closed form.
    pub fn eval(&self, t: f64, order: u32) -> f64 {
        let mut acc = if order == 0 { self.a0 } else { 0.0 };
        for (i, &[a, b]) in self.harmonics.iter().enumerate() {
            let w = self.frequency(i + 1);
            let (s, c) = (w * t).sin_cos();
            // d/dt (a cos + b sin) = w (b cos - a sin)
            let (cc, ss) = match order % 4 {
                0 => (a, b),
                1 => (b, -a),
                2 => (-a, -b),
                _ => (-b, a),
            };
            acc += w.powi(order as i32) * (cc * c + ss * s);
        }
        acc
    }

    /// `g(t) = -psi''(t) + psi'(t) + 1`.
    pub fn cone_integrand(&self, t: f64) -> f64 {
        -self.eval(t, 2) + self.eval(t, 1) + 1.0
    }

    /// Bound on `|g'|`: `sum_k |c_k| (w_k^3 + w_k^2)`.
    pub fn lipschitz_bound(&self) -> f64 {
        self.harmonics
            .iter()
            .enumerate()
            .map(|(i, [a, b])| {
                let w = self.frequency(i + 1);
                a.hypot(*b) * (w.powi(3) + w.powi(2))
            })
            .sum()
    }

    fn grid(&self, grid_n: usize) -> impl Iterator<Item = f64> + '_ {
        let h = self.period / grid_n as f64;
        (0..grid_n).map(move |j| j as f64 * h)
    }

    /// Certified grid check of `-psi'' + psi' + 1 >= 0` over one period.
    pub fn membership(&self, grid_n: usize, tol: f64) -> Membership {
        let min_value = self.grid(grid_n).map(|t| self.cone_integrand(t)).fold(f64::INFINITY, f64::min);
        let lipschitz = self.lipschitz_bound();
        let threshold = -tol - lipschitz * (self.period / grid_n as f64);
        Membership { min_value, lipschitz, threshold, pass: min_value >= threshold }
    }

    /// Largest `eps` with `eps * self` in `K_alpha`: `1 / max(phi'' - phi')`,
    /// or infinity when that maximum is not positive.
    pub fn max_scale(&self, grid_n: usize) -> f64 {
        let m = |t: f64| self.eval(t, 2) - self.eval(t, 1);
        let (mut best_t, mut best) = (0.0, f64::NEG_INFINITY);
        for t in self.grid(grid_n) {
            let v = m(t);
            if v > best {
                best = v;
                best_t = t;
            }
        }
        // Newton on m'(t) = phi''' - phi'' from the grid maximizer
        let h = self.period / grid_n as f64;
        let mut t = best_t;
        for _ in 0..8 {
            let d1 = self.eval(t, 3) - self.eval(t, 2);
            let d2 = self.eval(t, 4) - self.eval(t, 3);
            if d2 >= 0.0 {
                break;
            }
            let next = t - d1 / d2;
            if (next - best_t).abs() > h {
                break;
            }
            t = next;
        }
        best = best.max(m(t));
        if best > 0.0 {
            1.0 / best
        } else {
            f64::INFINITY
        }
    }
}
