//! Formal Fatou coordinate in the coordinate `u = −1/(a2 z)`.
//!
//! In `u` the germ reads `u ↦ u + 1 + γ/u + O(u⁻²)`. The Abel equation
//! `Φ(u′) = Φ(u) + 1` has a formal solution
//! `Φ(u) = u − γ log u + Σ_{m≥1} c_m u^{−m}` that is an asymptotic expansion
//! of both the attracting and the repelling Fatou coordinate (with `log u`
//! replaced by `log(−u)` on the repelling side, which only moves the constant).

use num_complex::Complex64;

use crate::error::{Error, Result};

type Series = Vec<Complex64>;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn mul(a: &[Complex64], b: &[Complex64], order: usize) -> Series {
    let mut out = vec![zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if *x == zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1/a` for a series with `a[0] ≠ 0`.
fn inv(a: &[Complex64], order: usize) -> Series {
    let mut out = vec![zero(); order + 1];
    out[0] = a[0].inv();
    for n in 1..=order {
        let mut s = zero();
        for k in 1..=n.min(a.len() - 1) {
            s += a[k] * out[n - k];
        }
        out[n] = -s * out[0];
    }
    out
}

/// `log(1 + q)` for a series with `q[0] = 0`.
fn log1p(q: &[Complex64], order: usize) -> Series {
    let mut out = vec![zero(); order + 1];
    let mut power = q.to_vec();
    power.resize(order + 1, zero());
    for j in 1..=order {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        for (o, p) in out.iter_mut().zip(&power) {
            *o += p * (sign / j as f64);
        }
        power = mul(&power, q, order);
    }
    out
}

/// The truncated formal Fatou coordinate of a germ.
#[derive(Clone, Debug)]
pub struct FormalFatou {
    pub gamma: Complex64,
    /// `c_1 … c_K` (index 0 holds `c_1`).
    pub coeffs: Vec<Complex64>,
}

impl FormalFatou {
    /// Builds the expansion of order `terms` from Taylor coefficients
    /// `a_0 … a_{terms+3}` of the germ (`a_1 = 1`, `a_2 ≠ 0`).
    pub fn from_taylor(a: &[Complex64], terms: usize) -> Result<Self> {
        if a.len() < terms + 4 {
            return Err(Error::InvalidParameter(format!(
                "need {} Taylor coefficients for {terms} series terms",
                terms + 4
            )));
        }
        let a2 = a[2];
        if a2.norm() < crate::germ::DEGENERATE_A2 {
            return Err(Error::DegenerateGerm(a2.norm()));
        }
        let order = terms + 1;
        // With t = 1/u and z = −t/a2: u′ = u·G(t), G = 1/(1 + Σ_k a_{k+1} (−t/a2)^k).
        let scale = -a2.inv();
        let mut p = vec![Complex64::new(1.0, 0.0); 1];
        let mut pow = Complex64::new(1.0, 0.0);
        for k in 1..=order + 1 {
            pow *= scale;
            p.push(a[k + 1] * pow);
        }
        let g = inv(&p, order + 1);
        // D(t) = u′ − u = Σ_{k≥1} g_k t^{k−1}
        let d: Series = g[1..].to_vec();
        let gamma = d[1];
        // t′ = t/(1 + t D)
        let mut td = vec![zero(); order + 1];
        for (k, x) in d.iter().enumerate().take(order) {
            td[k + 1] = *x;
        }
        let log_term = log1p(&td, order);
        let mut one_plus_td = td.clone();
        one_plus_td[0] += 1.0;
        let ratio = inv(&one_plus_td, order);
        let mut t_next = vec![zero(); order + 1];
        t_next[1..=order].copy_from_slice(&ratio[..order]);
        let mut t_powers: Vec<Series> = Vec::with_capacity(terms + 1);
        let mut tp = t_next.clone();
        t_powers.push(tp.clone());
        for _ in 1..terms {
            tp = mul(&tp, &t_next, order);
            t_powers.push(tp.clone());
        }

        // Residual R(t) = D − 1 − γ log(1 + tD) + Σ c_m (t′^m − t^m); solve order by order.
        let mut residual: Series = (0..=order)
            .map(|k| d.get(k).copied().unwrap_or_else(zero) - log_term[k] * gamma)
            .collect();
        residual[0] -= 1.0;
        let mut coeffs = Vec::with_capacity(terms);
        for m in 1..=terms {
            // adding c_m changes the t^{m+1} coefficient by −m c_m
            let cm = residual[m + 1] / m as f64;
            for (k, r) in residual.iter_mut().enumerate() {
                let mut delta = t_powers[m - 1][k];
                if k == m {
                    delta -= 1.0;
                }
                *r += cm * delta;
            }
            coeffs.push(cm);
        }
        Ok(FormalFatou { gamma, coeffs })
    }

    /// `Σ c_m u^{−m}`, optionally truncated to the first `terms` terms.
    pub fn tail(&self, u: Complex64, terms: usize) -> Complex64 {
        let t = u.inv();
        self.coeffs[..terms.min(self.coeffs.len())]
            .iter()
            .rev()
            .fold(zero(), |acc, c| (acc + c) * t)
    }

    /// Attracting coordinate `u − γ log_p u + Σ c_m u^{−m}`.
    pub fn attracting(&self, u: Complex64) -> Complex64 {
        u - self.gamma * log_p(u) + self.tail(u, self.coeffs.len())
    }

    /// Repelling coordinate `u − γ log_p(−u) + Σ c_m u^{−m}`.
    pub fn repelling(&self, u: Complex64) -> Complex64 {
        u - self.gamma * log_p(-u) + self.tail(u, self.coeffs.len())
    }

    /// d/du of either coordinate.
    pub fn derivative(&self, u: Complex64) -> Complex64 {
        let t = u.inv();
        let mut s = zero();
        let mut tp = t;
        for (m, c) in self.coeffs.iter().enumerate() {
            tp *= t;
            s -= c * tp * (m + 1) as f64;
        }
        1.0 - self.gamma * t + s
    }

    /// Magnitude of the last retained term at `|u| = radius`.
    pub fn last_term(&self, radius: f64) -> f64 {
        let k = self.coeffs.len();
        self.coeffs[k - 1].norm() / radius.powi(k as i32)
    }

    /// Smallest `|u|` at which the last retained terms drop below `eps`.
    pub fn radius_for(&self, eps: f64) -> f64 {
        let k = self.coeffs.len();
        let mut r: f64 = 1.0;
        for m in k.saturating_sub(2)..k {
            let c = self.coeffs[m].norm();
            if c > 0.0 {
                r = r.max((c / eps).powf(1.0 / (m + 1) as f64));
            }
        }
        r
    }
}

/// Principal logarithm; points on the negative real axis with a signed zero
/// imaginary part are nudged to the upper side.
pub fn log_p(u: Complex64) -> Complex64 {
    if u.im == 0.0 && u.re < 0.0 {
        Complex64::new(-u.re, 0.0).ln() + Complex64::new(0.0, std::f64::consts::PI)
    } else {
        u.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quad_taylor(n: usize) -> Vec<Complex64> {
        let mut a = vec![c(0.0, 0.0); n + 1];
        a[1] = c(1.0, 0.0);
        a[2] = c(1.0, 0.0);
        a
    }

    #[test]
    fn quad_expansion_satisfies_abel_equation() {
        let terms = 12;
        let ff = FormalFatou::from_taylor(&quad_taylor(terms + 3), terms).unwrap();
        assert!((ff.gamma - 1.0).norm() < 1e-15);
        // u′ for z + z² with a2 = 1: u′ = u/(1 + z) = u²/(u − 1).
        for u in [c(60.0, 0.0), c(40.0, 25.0), c(50.0, -30.0)] {
            let up = u * u / (u - 1.0);
            let lhs = ff.attracting(up) - ff.attracting(u) - 1.0;
            assert!(lhs.norm() < 1e-15 * 60.0, "{u}: {lhs}");
        }
    }

    #[test]
    fn tail_reduces_abel_residual() {
        let ff = FormalFatou::from_taylor(&quad_taylor(6), 3).unwrap();
        let u = c(1e3, 0.0);
        let up = u * u / (u - 1.0);
        let without_tail = (up - log_p(up)) - (u - log_p(u)) - 1.0;
        let with_tail = ff.attracting(up) - ff.attracting(u) - 1.0;
        assert!(with_tail.norm() < without_tail.norm() * 1e-3);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let ff = FormalFatou::from_taylor(&quad_taylor(11), 8).unwrap();
        let u = c(30.0, 7.0);
        let h = 1e-5;
        let fd = (ff.attracting(u + h) - ff.attracting(u - h)) / (2.0 * h);
        assert!((fd - ff.derivative(u)).norm() < 1e-9);
    }

    #[test]
    fn log_branch_on_the_cut() {
        assert!((log_p(c(-1.0, 0.0)) - c(0.0, std::f64::consts::PI)).norm() < 1e-15);
        assert!((log_p(c(-1.0, -0.0)) - c(0.0, std::f64::consts::PI)).norm() < 1e-15);
    }
}
