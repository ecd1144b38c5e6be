//! One-dimensional minimization on a closed interval.

const GOLDEN: f64 = 0.381_966_011_250_105_1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub f: f64,
    pub evaluations: usize,
}

/// Brent's method (golden section with parabolic steps) for a minimum of `f`
/// inside the bracket `a < x < b`, stopping when the bracket is narrower than
/// about `4·tol`.
pub fn brent(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, x0: f64, tol: f64) -> Minimum {
    let (mut a, mut b) = (a.min(b), a.max(b));
    let (mut x, mut w, mut v) = (x0, x0, x0);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut evaluations = 1;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for _ in 0..200 {
        let xm = 0.5 * (a + b);
        let tol1 = tol + 1e-15 * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u);
        evaluations += 1;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    Minimum { x, f: fx, evaluations }
}

/// Global minimum of `f` on [lo, hi]: a uniform grid locates the basins,
/// Brent refines every grid-local minimum, and when `df` is supplied each
/// stationary point is polished by safeguarded secant steps on the
/// derivative, which resolves it far below the √ε limit of function
/// comparisons.
pub fn minimize_on_interval(
    mut f: impl FnMut(f64) -> f64,
    df: Option<&dyn Fn(f64) -> f64>,
    lo: f64,
    hi: f64,
    grid: usize,
    tol: f64,
) -> Minimum {
    let grid = grid.max(3);
    let step = (hi - lo) / (grid - 1) as f64;
    let samples: Vec<(f64, f64)> = (0..grid)
        .map(|k| {
            let x = if k == grid - 1 { hi } else { lo + k as f64 * step };
            (x, f(x))
        })
        .collect();
    let mut evaluations = grid;
    let mut best = Minimum {
        x: samples[0].0,
        f: samples[0].1,
        evaluations: 0,
    };
    for k in 0..grid {
        let left = samples[k.saturating_sub(1)];
        let right = samples[(k + 1).min(grid - 1)];
        if samples[k].1 > left.1 || samples[k].1 > right.1 {
            continue;
        }
        let mut local = Minimum {
            x: samples[k].0,
            f: samples[k].1,
            evaluations: 0,
        };
        let m = brent(&mut f, left.0, right.0, samples[k].0, tol.max(1e-12));
        evaluations += m.evaluations;
        if m.f <= local.f {
            local = m;
        }
        if let Some(df) = df {
            if let Some(x) = polish(df, local.x, left.0, right.0, tol) {
                let fx = f(x);
                evaluations += 1;
                if fx <= local.f {
                    local = Minimum { x, f: fx, evaluations: 0 };
                }
            }
        }
        if local.f < best.f {
            best = local;
        }
    }
    best.evaluations = evaluations;
    best
}

/// Root of `df` near `x` where df changes sign from − to +, or `None` if no
/// such bracket is found within [a, b].
fn polish(df: &dyn Fn(f64) -> f64, x: f64, a: f64, b: f64, tol: f64) -> Option<f64> {
    let mut h = tol.max(1e-12) * 16.0;
    let (mut lo, mut hi);
    loop {
        lo = (x - h).max(a);
        hi = (x + h).min(b);
        if df(lo) < 0.0 && df(hi) > 0.0 {
            break;
        }
        if lo == a && hi == b {
            return None;
        }
        h *= 8.0;
    }
    let (mut flo, mut fhi) = (df(lo), df(hi));
    // Illinois variant of regula falsi.
    let mut side = 0i8;
    for _ in 0..100 {
        let m = (lo * fhi - hi * flo) / (fhi - flo);
        let m = if m > lo && m < hi { m } else { 0.5 * (lo + hi) };
        let fm = df(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm < 0.0 {
            lo = m;
            flo = fm;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = m;
            fhi = fm;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
        if hi - lo <= 1e-15 * (1.0 + x.abs()) {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}
