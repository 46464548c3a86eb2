//! Bracketed one-dimensional searches used to refine scan-grid events.

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2
const MAX_ITER: usize = 200;

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Stops once the bracket is narrower than `rel_tol * max(|a|, |b|)`.
/// Returns the best abscissa seen together with its value. `f` need not be
/// differentiable; a V-shaped minimum such as `|cos x|` at `pi / 2` is fine.
pub fn golden_section_min<F: Fn(f64) -> f64>(
    f: F,
    mut a: f64,
    mut b: f64,
    rel_tol: f64,
) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..MAX_ITER {
        if (b - a).abs() <= rel_tol * a.abs().max(b.abs()) {
            break;
        }
        if fc <= fd {
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
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Bisection for the first point where `f` drops to `level`, given
/// `f(lo) > level >= f(hi)`. Returns the upper end of the final bracket so
/// the returned abscissa always satisfies `f(x) <= level`.
pub fn bisect_down_crossing<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    level: f64,
    rel_tol: f64,
) -> (f64, f64) {
    let mut f_hi = f(hi);
    for _ in 0..MAX_ITER {
        if hi - lo <= rel_tol * hi.abs() {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid <= level {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
        }
    }
    (hi, f_hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_section_min(|x| (x - 1.3) * (x - 1.3) + 0.2, 0.0, 3.0, 1e-10);
        assert!((x - 1.3).abs() < 1e-5);
        assert!((fx - 0.2).abs() < 1e-10);
    }

    #[test]
    fn golden_resolves_v_shaped_zero() {
        let (x, fx) = golden_section_min(|x: f64| x.cos().abs(), 1.4, 1.7, 1e-12);
        assert!((x - PI / 2.0).abs() < 1e-11);
        assert!(fx < 1e-11);
    }

    #[test]
    fn bisection_lands_below_level() {
        let f = |x: f64| (-x * x / 8.0).exp();
        let (x, fx) = bisect_down_crossing(f, 2.0, 3.0, (-1.0f64).exp(), 1e-14);
        assert!((x - 8f64.sqrt()).abs() < 1e-12);
        assert!(fx <= (-1.0f64).exp());
    }
}
