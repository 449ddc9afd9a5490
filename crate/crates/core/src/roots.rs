//! Safeguarded scalar root finding.
//!
//! Newton steps are taken while they stay inside the current bracket and
//! shrink the residual fast enough; otherwise the step falls back to
//! bisection. The bracket is maintained on every iteration, so the method
//! converges whenever the initial bracket has a sign change.

/// Stopping criteria for [`newton_bisect`].
#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Stop once `|f(x)| <= f_tol`.
    pub f_tol: f64,
    /// Stop once the bracket is narrower than `x_tol`.
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            f_tol: 1e-12,
            x_tol: 1e-15,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub f: f64,
    pub iterations: usize,
}

/// Finds a root of `f` inside `[lo, hi]`.
///
/// `f_and_df` returns the function value and its derivative. Returns `None`
/// when `f(lo)` and `f(hi)` have the same strict sign.
pub fn newton_bisect<F>(mut f_and_df: F, lo: f64, hi: f64, opts: RootOptions) -> Option<Root>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (fa, _) = f_and_df(a);
    if fa.abs() <= opts.f_tol {
        return Some(Root { x: a, f: fa, iterations: 0 });
    }
    let (fb, _) = f_and_df(b);
    if fb.abs() <= opts.f_tol {
        return Some(Root { x: b, f: fb, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    // orient so that f(a) < 0 < f(b)
    let flipped = fa > 0.0;

    let mut x = 0.5 * (a + b);
    let mut last_step = b - a;
    for iter in 1..=opts.max_iter {
        let (mut fx, dfx) = f_and_df(x);
        if flipped {
            fx = -fx;
        }
        if fx.abs() <= opts.f_tol {
            return Some(Root {
                x,
                f: if flipped { -fx } else { fx },
                iterations: iter,
            });
        }
        if fx < 0.0 {
            a = x;
        } else {
            b = x;
        }
        if b - a <= opts.x_tol {
            return Some(Root {
                x,
                f: if flipped { -fx } else { fx },
                iterations: iter,
            });
        }

        let slope = if flipped { -dfx } else { dfx };
        let newton = if slope != 0.0 && slope.is_finite() {
            x - fx / slope
        } else {
            f64::NAN
        };
        // accept Newton only if it lands strictly inside the bracket and
        // the step is at most half the previous one
        let step = (newton - x).abs();
        if newton > a && newton < b && step <= 0.5 * last_step {
            last_step = step;
            x = newton;
        } else {
            last_step = b - a;
            x = 0.5 * (a + b);
        }
    }
    let (fx, _) = f_and_df(x);
    Some(Root {
        x,
        f: fx,
        iterations: opts.max_iter,
    })
}

/// Plain bisection on a monotone or sign-changing function.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, opts: RootOptions) -> Option<Root>
where
    F: FnMut(f64) -> f64,
{
    newton_bisect(|x| (f(x), f64::NAN), lo, hi, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let root = newton_bisect(|x| (x * x - 2.0, 2.0 * x), 0.0, 2.0, RootOptions::default())
            .unwrap();
        assert!((root.x - 2f64.sqrt()).abs() < 1e-12);
        assert!(root.iterations < 20);
    }

    #[test]
    fn decreasing_function() {
        let root = newton_bisect(|x| (1.0 - x, -1.0), 0.0, 3.0, RootOptions::default()).unwrap();
        assert!((root.x - 1.0).abs() < 1e-14);
    }

    #[test]
    fn no_sign_change() {
        assert!(newton_bisect(|x| (x * x + 1.0, 2.0 * x), -1.0, 1.0, RootOptions::default())
            .is_none());
    }

    #[test]
    fn bad_derivative_falls_back_to_bisection() {
        // derivative deliberately wrong
        let root = newton_bisect(|x| (x.powi(3) - 0.125, 1e-30), 0.0, 1.0, RootOptions::default())
            .unwrap();
        assert!((root.x - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bisection_only() {
        let root = bisect(|x| x.cos() - x, 0.0, 1.0, RootOptions::default()).unwrap();
        assert!((root.x.cos() - root.x).abs() < 1e-12);
    }
}
