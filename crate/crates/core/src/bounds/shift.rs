//! Minimization over the free energy shift `g`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{LinearOperator, StateVector};

/// Grid size of the coarse scan that precedes golden-section refinement.
pub const SHIFT_GRID_POINTS: usize = 256;
/// Absolute tolerance on `g` for golden-section refinement.
pub const SHIFT_TOLERANCE: f64 = 1e-8;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Minimum of a shift objective.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftMinimum {
    pub g: f64,
    pub value: f64,
}

/// `‖(X + g)²φ‖² = c0 + c1 g + c2 g² + c3 g³ + g⁴` for a normalized `φ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftQuartic {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl ShiftQuartic {
    /// Coefficients for `X = op − h` from the vectors `u = X²φ`, `v = Xφ`.
    pub fn new<Op: LinearOperator + ?Sized>(op: &Op, h: f64, phi: &StateVector) -> Result<Self> {
        phi.ensure_normalized()?;
        if op.dim() != phi.dim() {
            return Err(Error::DimensionMismatch {
                left: op.dim(),
                right: phi.dim(),
            });
        }
        let shifted = |x: &StateVector| {
            let mut y = op.apply(x);
            y.axpy(Complex64::new(-h, 0.0), x);
            y
        };
        let v = shifted(phi);
        let u = shifted(&v);
        let vv = v.norm().powi(2);
        Ok(Self {
            c0: u.norm().powi(2),
            c1: 4.0 * u.inner(&v).re,
            c2: 4.0 * vv + 2.0 * u.inner(phi).re,
            c3: 4.0 * v.inner(phi).re,
        })
    }

    pub fn eval(&self, g: f64) -> f64 {
        (((g + self.c3) * g + self.c2) * g + self.c1) * g + self.c0
    }

    /// The quartic in `−g`, i.e. the objective for `op − g`.
    pub fn reflected(&self) -> Self {
        Self {
            c0: self.c0,
            c1: -self.c1,
            c2: self.c2,
            c3: -self.c3,
        }
    }

    fn derivative(&self, g: f64) -> f64 {
        ((4.0 * g + 3.0 * self.c3) * g + 2.0 * self.c2) * g + self.c1
    }

    /// `sqrt` of the quartic, clamped at zero against rounding.
    pub fn norm_at(&self, g: f64) -> f64 {
        self.eval(g).max(0.0).sqrt()
    }

    /// Global minimizer from the real roots of the cubic derivative.
    ///
    /// Each root is polished by bisection on the derivative. When the cubic
    /// is close to having a double root the grid scheme is used instead.
    pub fn minimize(&self) -> ShiftMinimum {
        let Some(roots) = self.critical_points() else {
            let radius = self.root_radius();
            return grid_golden_minimize(|g| self.norm_at(g), -radius, radius);
        };
        let (g, _) = roots
            .into_iter()
            .map(|r| {
                let r = self.polish(r);
                (r, self.eval(r))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("a real cubic has a real root");
        ShiftMinimum {
            g,
            value: self.norm_at(g),
        }
    }

    /// Cauchy bound on the roots of the derivative.
    fn root_radius(&self) -> f64 {
        let (a, b, c) = (0.75 * self.c3, 0.5 * self.c2, 0.25 * self.c1);
        1.0 + a.abs().max(b.abs()).max(c.abs())
    }

    /// Real roots of `g³ + a g² + b g + c` with `a = 3c3/4`, `b = c2/2`,
    /// `c = c1/4`; `None` if the discriminant is too close to zero.
    fn critical_points(&self) -> Option<Vec<f64>> {
        let (a, b, c) = (0.75 * self.c3, 0.5 * self.c2, 0.25 * self.c1);
        // depressed cubic y³ + p y + q with g = y − a/3
        let p = b - a * a / 3.0;
        let q = 2.0 * a.powi(3) / 27.0 - a * b / 3.0 + c;
        let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
        let scale = (q / 2.0)
            .powi(2)
            .max((p / 3.0).abs().powi(3))
            .max(f64::MIN_POSITIVE);
        let shift = a / 3.0;
        if p.abs() <= 1e-14 * (1.0 + a * a + b.abs())
            && q.abs() <= 1e-14 * (1.0 + c.abs() + a.abs().powi(3))
        {
            return Some(vec![-shift]);
        }
        if disc.abs() <= 1e-10 * scale {
            return None;
        }
        if disc > 0.0 {
            let s = disc.sqrt();
            let y = (-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt();
            Some(vec![y - shift])
        } else {
            let r = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (p * r)).clamp(-1.0, 1.0);
            let phi = arg.acos() / 3.0;
            Some(
                (0..3)
                    .map(|k| r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift)
                    .collect(),
            )
        }
    }

    /// One bisection pass on the derivative around an approximate root.
    fn polish(&self, root: f64) -> f64 {
        let mut width = 1e-6 * (1.0 + root.abs());
        let (mut lo, mut hi) = (root - width, root + width);
        while self.derivative(lo).signum() == self.derivative(hi).signum() {
            width *= 4.0;
            if width > 1e-2 * (1.0 + root.abs()) {
                return root;
            }
            lo = root - width;
            hi = root + width;
        }
        let lo_sign = self.derivative(lo).signum();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if self.derivative(mid).signum() == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// `argmin_g ‖(op − h + g)²φ‖` and the minimum value.
pub fn minimize_shift_quartic<Op: LinearOperator + ?Sized>(
    op: &Op,
    h: f64,
    phi: &StateVector,
) -> Result<ShiftMinimum> {
    Ok(ShiftQuartic::new(op, h, phi)?.minimize())
}

/// `min_g ‖(A − h + g)²φ‖ + ‖(B − g)²φ‖` over `g ∈ [−radius, radius]`.
///
/// A coarse grid locates the basin and golden-section search refines it.
pub fn minimize_upper_shift<Op: LinearOperator + ?Sized>(
    a: &Op,
    b: &Op,
    h: f64,
    phi: &StateVector,
    radius: f64,
) -> Result<ShiftMinimum> {
    let qa = ShiftQuartic::new(a, h, phi)?;
    let qb = ShiftQuartic::new(b, 0.0, phi)?.reflected();
    let radius = radius.abs().max(1.0);
    Ok(grid_golden_minimize(
        |g| qa.norm_at(g) + qb.norm_at(g),
        -radius,
        radius,
    ))
}

/// Grid scan of `f` on `[lo, hi]` followed by golden-section search in the
/// bracket around the best grid point.
pub fn grid_golden_minimize(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> ShiftMinimum {
    let step = (hi - lo) / (SHIFT_GRID_POINTS - 1) as f64;
    let (best, _) = (0..SHIFT_GRID_POINTS)
        .map(|i| (i, f(lo + step * i as f64)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("non-empty grid");
    let mut a = lo + step * best.saturating_sub(1) as f64;
    let mut b = lo + step * (best + 1).min(SHIFT_GRID_POINTS - 1) as f64;
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > SHIFT_TOLERANCE {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    let g = 0.5 * (a + b);
    ShiftMinimum { g, value: f(g) }
}
