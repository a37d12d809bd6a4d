//! Quadrature for the constants `a` and `b` of a cut-off function `h` on the
//! Riemann sphere.
//!
//! Both integrals are written in log-polar coordinates `t = e^{s + i theta}`,
//! where the measure and the kernel `log|t|^2 = 2s` are smooth. The chart at
//! infinity is `s -> -s`, so one tensor grid in `(s, theta)` covers both
//! charts away from the two poles, whose contribution decays exponentially.
//!
//! ```text
//! a = -(1/4pi) int s (G_ss + G_thth) ds dth,   G = h^2
//! b = -(1/2pi) int s (G_s^2 + G_th^2) ds dth,  G = h
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Smallest accepted number of radial intervals.
pub const MIN_GRID: usize = 64;
/// Tolerance for the refinement check.
pub const QUAD_TOL: f64 = 1e-6;
/// Half-width of the `s` interval.
const S_MAX: f64 = 30.0;
/// Finite-difference step in `s` and `theta`.
const FD_STEP: f64 = 1e-3;

type Evaluator = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// A real function on `C`, extended to the sphere with `h(0) = 0`, `h(inf) = 1`.
#[derive(Clone)]
pub struct HPreset {
    name: String,
    radial: bool,
    f: Arc<Evaluator>,
}

impl fmt::Debug for HPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HPreset")
            .field("name", &self.name)
            .field("radial", &self.radial)
            .finish()
    }
}

impl HPreset {
    /// `f(x, y)` evaluates `h(x + iy)`. `radial` promises rotation invariance.
    pub fn new(
        name: impl Into<String>,
        radial: bool,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        HPreset {
            name: name.into(),
            radial,
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_radial(&self) -> bool {
        self.radial
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.f)(x, y)
    }

    /// `h` in the chart `u = 1/t`, exact at `u = 0`.
    pub fn eval_at_infinity_chart(&self, x: f64, y: f64) -> f64 {
        let r2 = x * x + y * y;
        if r2 == 0.0 {
            return 1.0;
        }
        self.eval(x / r2, -y / r2)
    }

    /// `t -> h(e^{i alpha} t)`.
    pub fn rotated(&self, alpha: f64) -> HPreset {
        let f = Arc::clone(&self.f);
        let (c, s) = (alpha.cos(), alpha.sin());
        HPreset {
            name: format!("{}@rot{}", self.name, alpha),
            radial: self.radial,
            f: Arc::new(move |x, y| f(c * x - s * y, s * x + c * y)),
        }
    }

    /// `h` in log-polar coordinates.
    fn polar(&self, s: f64, theta: f64) -> f64 {
        let r = s.exp();
        self.eval(r * theta.cos(), r * theta.sin())
    }

    /// Boundary values and a second-difference smoothness probe at both poles.
    pub fn validate(&self) -> Result<()> {
        let h0 = self.eval(0.0, 0.0);
        if h0 != 0.0 {
            return Err(Error::OutOfRange(format!("{}: h(0) = {}", self.name, h0)));
        }
        let far = self.eval_at_infinity_chart(1e-9, 0.0);
        if (far - 1.0).abs() > 1e-6 {
            return Err(Error::OutOfRange(format!(
                "{}: h(inf) = {}",
                self.name, far
            )));
        }
        for (chart, g) in [
            (
                "t",
                Box::new(|x, y| self.eval(x, y)) as Box<dyn Fn(f64, f64) -> f64 + '_>,
            ),
            ("u", Box::new(|x, y| self.eval_at_infinity_chart(x, y))),
        ] {
            let q = |d: f64| {
                (0..8)
                    .map(|j| {
                        let phi = PI * j as f64 / 8.0;
                        let (x, y) = (d * phi.cos(), d * phi.sin());
                        (g(x, y) + g(-x, -y) - 2.0 * g(0.0, 0.0)).abs() / (d * d)
                    })
                    .fold(0.0, f64::max)
            };
            let (coarse, fine) = (q(1e-2), q(1e-3));
            if fine > 2.0 * coarse + 1.0 {
                return Err(Error::OutOfRange(format!(
                    "{}: not smooth at the origin of the {} chart",
                    self.name, chart
                )));
            }
        }
        Ok(())
    }

    pub fn by_name(name: &str) -> Result<HPreset> {
        presets()
            .into_iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::OutOfRange(format!("unknown preset `{}`", name)))
    }
}

fn rational1(x: f64, y: f64) -> f64 {
    let r2 = x * x + y * y;
    r2 / (1.0 + r2)
}

/// The built-in cut-off functions.
pub fn presets() -> Vec<HPreset> {
    vec![
        HPreset::new("rational1", true, rational1),
        HPreset::new("rational1_sq", true, |x, y| rational1(x, y).powi(2)),
        HPreset::new("rational2", true, |x, y| {
            let r4 = (x * x + y * y).powi(2);
            r4 / (1.0 + r4)
        }),
        HPreset::new("skew", false, |x, y| {
            let r2 = x * x + y * y;
            rational1(x, y) + 0.1 * x * r2 / (1.0 + r2).powi(2)
        }),
    ]
}

/// Radial reduction or full `(s, theta)` grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    Radial,
    Tensor,
}

#[derive(Clone, Copy)]
enum Integrand {
    A,
    B,
}

fn d1(g: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = FD_STEP;
    (g(x - 2.0 * h) - 8.0 * g(x - h) + 8.0 * g(x + h) - g(x + 2.0 * h)) / (12.0 * h)
}

fn d2(g: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = FD_STEP;
    (-g(x - 2.0 * h) + 16.0 * g(x - h) - 30.0 * g(x) + 16.0 * g(x + h) - g(x + 2.0 * h))
        / (12.0 * h * h)
}

/// Integrand of `a` or `b` at one grid point, without the kernel and the
/// normalizing constant. `radial` drops the `theta` derivatives.
fn density(h: &HPreset, which: Integrand, s: f64, theta: f64, radial: bool) -> f64 {
    match which {
        Integrand::A => {
            let sq = |s: f64, th: f64| h.polar(s, th).powi(2);
            let mut v = d2(|u| sq(u, theta), s);
            if !radial {
                v += d2(|u| sq(s, u), theta);
            }
            v
        }
        Integrand::B => {
            let gs = d1(|u| h.polar(u, theta), s);
            let mut v = gs * gs;
            if !radial {
                let gt = d1(|u| h.polar(s, u), theta);
                v += gt * gt;
            }
            v
        }
    }
}

fn theta_points(n: usize) -> usize {
    (n / 16).clamp(32, 256)
}

fn integrate(
    h: &HPreset,
    which: Integrand,
    n: usize,
    method: Method,
    kernel: &(dyn Fn(f64) -> f64 + Sync),
) -> f64 {
    let radial = match method {
        Method::Auto => h.radial,
        Method::Radial => true,
        Method::Tensor => false,
    };
    let ds = 2.0 * S_MAX / n as f64;
    let weight = |j: usize| if j == 0 || j == n { 0.5 * ds } else { ds };
    // angular integral divided by 2pi
    let angular_mean: Box<dyn Fn(f64) -> f64 + Sync> = if radial {
        Box::new(|s| density(h, which, s, 0.0, true))
    } else {
        let m = theta_points(n);
        Box::new(move |s| {
            (0..m)
                .map(|k| density(h, which, s, 2.0 * PI * k as f64 / m as f64, false))
                .sum::<f64>()
                / m as f64
        })
    };
    let sum: f64 = (0..=n)
        .into_par_iter()
        .map(|j| {
            let s = -S_MAX + j as f64 * ds;
            let k = kernel(s);
            if k == 0.0 {
                return 0.0;
            }
            weight(j) * k * angular_mean(s)
        })
        .sum();
    match which {
        Integrand::A => -0.5 * sum,
        Integrand::B => -sum,
    }
}

fn refined(
    h: &HPreset,
    which: Integrand,
    grid: usize,
    method: Method,
    kernel: &(dyn Fn(f64) -> f64 + Sync),
) -> Result<f64> {
    if grid < MIN_GRID {
        return Err(Error::OutOfRange(format!(
            "grid {} below minimum {}",
            grid, MIN_GRID
        )));
    }
    let coarse = integrate(h, which, grid, method, kernel);
    let fine = integrate(h, which, 2 * grid, method, kernel);
    if (coarse - fine).abs() > QUAD_TOL * fine.abs().max(1.0) {
        return Err(Error::NonConvergence {
            coarse,
            fine,
            tol: QUAD_TOL,
        });
    }
    Ok(fine)
}

/// `a(h)`, refined from `grid` to `2 grid` radial intervals.
pub fn quadrature_a(h: &HPreset, grid: usize) -> Result<f64> {
    quadrature_a_with(h, grid, Method::Auto)
}

pub fn quadrature_a_with(h: &HPreset, grid: usize, method: Method) -> Result<f64> {
    refined(h, Integrand::A, grid, method, &|s| s)
}

/// `b(h)`, refined like [`quadrature_a`].
pub fn quadrature_b(h: &HPreset, grid: usize) -> Result<f64> {
    quadrature_b_with(h, grid, Method::Auto)
}

pub fn quadrature_b_with(h: &HPreset, grid: usize, method: Method) -> Result<f64> {
    refined(h, Integrand::B, grid, method, &|s| s)
}

/// `b` with the kernel `log|t|` replaced by `kernel(log|t|)`.
pub fn quadrature_b_with_kernel(
    h: &HPreset,
    grid: usize,
    method: Method,
    kernel: &(dyn Fn(f64) -> f64 + Sync),
) -> Result<f64> {
    refined(h, Integrand::B, grid, method, kernel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        for p in presets() {
            p.validate().unwrap();
        }
        let kink = HPreset::new("kink", true, |x, y| {
            let r = (x * x + y * y).sqrt();
            r / (1.0 + r)
        });
        assert!(kink.validate().is_err());
        let bad_origin = HPreset::new("shifted", true, |x, y| 0.5 + 0.5 * rational1(x, y));
        assert!(bad_origin.validate().is_err());
        assert!(HPreset::by_name("nope").is_err());
    }

    #[test]
    fn a_is_one_half() {
        for p in presets() {
            let a = quadrature_a(&p, 1024).unwrap();
            assert!((a - 0.5).abs() < 1e-6, "{}: {}", p.name(), a);
        }
    }

    #[test]
    fn radial_and_tensor_agree() {
        let p = HPreset::by_name("rational1_sq").unwrap();
        let r = quadrature_a_with(&p, 512, Method::Radial).unwrap();
        let t = quadrature_a_with(&p, 512, Method::Tensor).unwrap();
        assert!((r - t).abs() < 1e-8);
    }

    #[test]
    fn b_values() {
        // G = sigma(2s)^2 integrates in closed form to -1/6
        let b = quadrature_b(&HPreset::by_name("rational1_sq").unwrap(), 1024).unwrap();
        assert!((b + 1.0 / 6.0).abs() < 1e-8, "{}", b);
        // symmetric profiles give zero
        for name in ["rational1", "rational2"] {
            let b = quadrature_b(&HPreset::by_name(name).unwrap(), 1024).unwrap();
            assert!(b.abs() < 1e-8, "{}: {}", name, b);
        }
    }

    #[test]
    fn b_zero_kernel() {
        let p = HPreset::by_name("skew").unwrap();
        assert_eq!(
            quadrature_b_with_kernel(&p, 256, Method::Auto, &|_| 0.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn b_rotation() {
        let p = HPreset::by_name("rational1_sq").unwrap();
        let base = quadrature_b(&p, 512).unwrap();
        let rot = quadrature_b_with(&p.rotated(0.7), 512, Method::Tensor).unwrap();
        assert!((base - rot).abs() < 1e-8);
    }

    #[test]
    fn coarse_grid_rejected() {
        let p = HPreset::by_name("rational2").unwrap();
        assert!(matches!(quadrature_a(&p, 8), Err(Error::OutOfRange(_))));
        assert!(matches!(
            quadrature_a(&p, 64),
            Err(Error::NonConvergence { .. })
        ));
    }
}
