//! Derivative-free maximizers used by the squeezing searches.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of `f` on `[lo, hi]`, stopping when
/// the bracket is narrower than `tol`. Returns `(argmax, max)`; the endpoints
/// are also evaluated so a monotone `f` returns its boundary value.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    [(mid, f(mid)), (lo, f(lo)), (hi, f(hi)), (c, fc), (d, fd)]
        .into_iter()
        .fold((mid, f64::NEG_INFINITY), |best, cand| {
            if cand.1 > best.1 {
                cand
            } else {
                best
            }
        })
}

/// Result of [`maximize_on_unit_square`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptimum {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// Maximize `f` over `[0,1]²`: a `grid_n × grid_n` scan followed by
/// coordinate-wise golden-section passes around the best cell until no
/// coordinate moves by more than `step_tol`.
///
/// Candidates only replace the incumbent when they improve it, so the result
/// is never worse than the best grid point.
pub fn maximize_on_unit_square<F>(mut f: F, grid_n: usize, step_tol: f64) -> GridOptimum
where
    F: FnMut(f64, f64) -> f64,
{
    let grid_n = grid_n.max(2);
    let h = 1.0 / (grid_n - 1) as f64;
    let mut best = GridOptimum {
        x: 0.0,
        y: 0.0,
        value: f64::NEG_INFINITY,
    };
    for i in 0..grid_n {
        for j in 0..grid_n {
            let (x, y) = (i as f64 * h, j as f64 * h);
            let v = f(x, y);
            if v > best.value {
                best = GridOptimum { x, y, value: v };
            }
        }
    }

    let mut radius = h;
    for _ in 0..200 {
        let start = best;
        let (x, vx) = golden_section_max(
            |x| f(x, best.y),
            (best.x - radius).max(0.0),
            (best.x + radius).min(1.0),
            step_tol * 0.1,
        );
        if vx > best.value {
            best.x = x;
            best.value = vx;
        }
        let (y, vy) = golden_section_max(
            |y| f(best.x, y),
            (best.y - radius).max(0.0),
            (best.y + radius).min(1.0),
            step_tol * 0.1,
        );
        if vy > best.value {
            best.y = y;
            best.value = vy;
        }
        let step = (best.x - start.x).abs().max((best.y - start.y).abs());
        if step < step_tol {
            break;
        }
        radius = radius.max(2.0 * step).min(1.0);
    }
    best
}
