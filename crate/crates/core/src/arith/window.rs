//! Built-in smooth windows supported on `[1, 2]` and their Fourier transforms
//! `g_hat(xi) = int g(x) e(-x xi) dx`.
//!
//! Two windows are provided: a `C^inf` bump `exp(4 - 1/(x-1) - 1/(2-x))` and a
//! plateau equal to 1 on `[5/4, 7/4]` with `C^4` degree-9 ramps. Transforms are
//! computed by composite Gauss-Legendre quadrature; tail bounds for truncated
//! Poisson sums come from integrating by parts `k <= 4` times, with the
//! `L^1` norms of the derivatives computed once by quadrature.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    Bump,
    Plateau,
}

const RAMP: f64 = 0.25;
// smootherstep of order 4: 126t^5 - 420t^6 + 540t^7 - 315t^8 + 70t^9
const RAMP_COEFFS: [(i32, f64); 5] =
    [(5, 126.0), (6, -420.0), (7, 540.0), (8, -315.0), (9, 70.0)];

impl Window {
    pub const ALL: [Window; 2] = [Window::Bump, Window::Plateau];

    pub fn name(self) -> &'static str {
        match self {
            Window::Bump => "bump",
            Window::Plateau => "plateau",
        }
    }

    pub fn parse(s: &str) -> crate::Result<Self> {
        match s {
            "bump" => Ok(Window::Bump),
            "plateau" => Ok(Window::Plateau),
            _ => Err(crate::Error::Parse(format!("unknown window {s:?}"))),
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        self.derivative(0, x)
    }

    /// `k`-th derivative, `k <= 4`.
    pub fn derivative(self, k: u32, x: f64) -> f64 {
        assert!(k <= 4, "window derivatives are tabulated up to order 4");
        if x <= 1.0 || x >= 2.0 {
            return 0.0;
        }
        match self {
            Window::Bump => bump_derivative(k, x),
            Window::Plateau => plateau_derivative(k, x),
        }
    }

    /// Breakpoints of the piecewise definition, used to split quadrature.
    fn knots(self) -> &'static [f64] {
        match self {
            Window::Bump => &[1.0, 2.0],
            Window::Plateau => &[1.0, 1.0 + RAMP, 2.0 - RAMP, 2.0],
        }
    }

    pub fn fourier(self, xi: f64) -> Complex64 {
        let panels_per_unit = 32 + (xi.abs() * 6.0).ceil() as usize;
        integrate(self.knots(), panels_per_unit, |x| {
            let g = self.eval(x);
            if g == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let (s, c) = (-TAU * x * xi).sin_cos();
            Complex64::new(g * c, g * s)
        })
    }

    /// `g_hat(0) = int g`, cached.
    pub fn mass(self) -> f64 {
        self.norms()[0]
    }

    /// `int |g^(k)|` for `k = 0..=4`, cached.
    pub fn norms(self) -> &'static [f64; 5] {
        static BUMP: OnceLock<[f64; 5]> = OnceLock::new();
        static PLATEAU: OnceLock<[f64; 5]> = OnceLock::new();
        let cell = match self {
            Window::Bump => &BUMP,
            Window::Plateau => &PLATEAU,
        };
        cell.get_or_init(|| {
            let mut out = [0.0; 5];
            for (k, slot) in out.iter_mut().enumerate() {
                *slot = integrate(self.knots(), 4096, |x| {
                    Complex64::new(self.derivative(k as u32, x).abs(), 0.0)
                })
                .re;
            }
            out
        })
    }

    /// Pointwise bound `|g_hat(xi)| <= min_k ||g^(k)||_1 / (2 pi |xi|)^k`.
    pub fn fourier_bound(self, xi: f64) -> f64 {
        let n = self.norms();
        let w = TAU * xi.abs();
        (0..5).map(|k| n[k] / w.powi(k as i32)).fold(f64::INFINITY, f64::min)
    }

    /// Bound for `sum_{|h| > big_h} |g_hat(h * scale)|`.
    pub fn tail_bound(self, big_h: u64, scale: f64) -> f64 {
        let n = self.norms();
        let w = TAU * scale.abs();
        let hh = big_h.max(1) as f64;
        // sum_{h > H} h^-k <= H^(1-k) / (k-1), plus the h = H+1 term when H = 0
        let mut best = f64::INFINITY;
        for k in 2..5 {
            let per = n[k] / w.powi(k as i32);
            let mut tail = per * hh.powi(1 - k as i32) / (k as f64 - 1.0);
            if big_h == 0 {
                tail += self.fourier_bound(scale);
            }
            best = best.min(2.0 * tail);
        }
        best
    }
}

fn bump_derivative(k: u32, x: f64) -> f64 {
    let a = x - 1.0;
    let b = 2.0 - x;
    let g = (4.0 - 1.0 / a - 1.0 / b).exp();
    if g == 0.0 {
        return 0.0;
    }
    // u^(j) = (-1)^(j+1) j! a^-(j+1) - j! b^-(j+1)
    let du = |j: i32| -> f64 {
        let fact = (1..=j).product::<i32>() as f64;
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        sign * fact * a.powi(-(j + 1)) - fact * b.powi(-(j + 1))
    };
    let (u1, u2, u3, u4) = (du(1), du(2), du(3), du(4));
    let factor = match k {
        0 => 1.0,
        1 => u1,
        2 => u2 + u1 * u1,
        3 => u3 + 3.0 * u1 * u2 + u1.powi(3),
        4 => u4 + 4.0 * u1 * u3 + 3.0 * u2 * u2 + 6.0 * u1 * u1 * u2 + u1.powi(4),
        _ => unreachable!(),
    };
    let v = factor * g;
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

fn ramp_derivative(k: u32, t: f64) -> f64 {
    RAMP_COEFFS
        .iter()
        .filter(|&&(e, _)| e >= k as i32)
        .map(|&(e, c)| {
            let falling: f64 = (0..k as i32).map(|i| (e - i) as f64).product();
            c * falling * t.powi(e - k as i32)
        })
        .sum()
}

fn plateau_derivative(k: u32, x: f64) -> f64 {
    if x < 1.0 + RAMP {
        ramp_derivative(k, (x - 1.0) / RAMP) / RAMP.powi(k as i32)
    } else if x > 2.0 - RAMP {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sign * ramp_derivative(k, (2.0 - x) / RAMP) / RAMP.powi(k as i32)
    } else if k == 0 {
        1.0
    } else {
        0.0
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(16))
}

fn integrate(knots: &[f64], panels_per_unit: usize, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let (nodes, weights) = gl16();
    let mut acc = Complex64::new(0.0, 0.0);
    for seg in knots.windows(2) {
        let (lo, hi) = (seg[0], seg[1]);
        let panels = ((hi - lo) * panels_per_unit as f64).ceil().max(1.0) as usize;
        let width = (hi - lo) / panels as f64;
        for j in 0..panels {
            let mid = lo + (j as f64 + 0.5) * width;
            let half = width / 2.0;
            let mut part = Complex64::new(0.0, 0.0);
            for (x, w) in nodes.iter().zip(weights) {
                part += f(mid + half * x) * *w;
            }
            acc += part * half;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exact_on_polynomials() {
        let (x, w) = gauss_legendre(16);
        let int = |k: i32| x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum::<f64>();
        assert!((int(0) - 2.0).abs() < 1e-14);
        assert!((int(30) - 2.0 / 31.0).abs() < 1e-14);
        assert!(int(7).abs() < 1e-14);
    }

    #[test]
    fn plateau_shape() {
        let g = Window::Plateau;
        assert_eq!(g.eval(1.5), 1.0);
        assert_eq!(g.eval(0.5), 0.0);
        assert!((g.eval(1.125) - 0.5).abs() < 1e-12);
        // symmetric ramps integrate to RAMP/2 each
        assert!((g.mass() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for g in Window::ALL {
            for &x in &[1.1, 1.2, 1.4, 1.6, 1.83] {
                for k in 0..4 {
                    let h = 1e-5;
                    let fd = (g.derivative(k, x + h) - g.derivative(k, x - h)) / (2.0 * h);
                    let exact = g.derivative(k + 1, x);
                    let scale = 1.0 + exact.abs();
                    assert!((fd - exact).abs() < 1e-4 * scale, "{g:?} k={k} x={x}: {fd} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn transform_at_zero_is_mass_and_decays() {
        for g in Window::ALL {
            let z = g.fourier(0.0);
            assert!((z.re - g.mass()).abs() < 1e-13 && z.im.abs() < 1e-13);
            for &xi in &[3.0, 10.0, 40.0] {
                assert!(g.fourier(xi).norm() <= g.fourier_bound(xi) * (1.0 + 1e-9) + 1e-15);
            }
        }
        // the bump is real and symmetric about 3/2, so e(3 xi / 2) g_hat(xi) is real
        let xi = 2.7;
        let rotated = Window::Bump.fourier(xi) * crate::arith::modular::e_real(1.5 * xi);
        assert!(rotated.im.abs() < 1e-13);
    }
}
