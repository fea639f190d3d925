//! One-dimensional quadrature and maximisation helpers.

use alloc::vec::Vec;

use crate::math;

/// Composite Simpson rule with `panels` sub-intervals (rounded up to even).
pub fn composite_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(2) + panels % 2;
    let h = (b - a) / panels as f64;
    let mut terms = Vec::with_capacity(panels + 1);
    for i in 0..=panels {
        let w = if i == 0 || i == panels {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        terms.push(w * f(a + i as f64 * h));
    }
    math::pairwise_sum(&terms) * h / 3.0
}

/// Adaptive Simpson quadrature to relative tolerance `rel_tol`, using at most
/// `max_panels` leaf intervals. Returns the estimate and whether it converged.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_panels: usize,
) -> (f64, bool) {
    struct Segment {
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        depth: u32,
    }
    let simpson = |fa: f64, fm: f64, fb: f64, h: f64| h / 6.0 * (fa + 4.0 * fm + fb);

    // coarse start so a sharply peaked integrand is not missed
    const START: usize = 16;
    let h0 = (b - a) / START as f64;
    let mut stack: Vec<Segment> = (0..START)
        .rev()
        .map(|i| {
            let sa = a + i as f64 * h0;
            let sb = if i + 1 == START { b } else { sa + h0 };
            let (fa, fm, fb) = (f(sa), f(0.5 * (sa + sb)), f(sb));
            Segment {
                a: sa,
                b: sb,
                fa,
                fm,
                fb,
                whole: simpson(fa, fm, fb, sb - sa),
                depth: 0,
            }
        })
        .collect();
    let scale: f64 = stack
        .iter()
        .map(|s| s.whole.abs())
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);

    let mut accepted = Vec::new();
    let mut converged = true;
    let max_depth = usize::BITS - max_panels.max(START).leading_zeros();
    while let Some(s) = stack.pop() {
        let m = 0.5 * (s.a + s.b);
        let (lm, rm) = (f(0.5 * (s.a + m)), f(0.5 * (m + s.b)));
        let left = simpson(s.fa, lm, s.fm, m - s.a);
        let right = simpson(s.fm, rm, s.fb, s.b - m);
        let delta = left + right - s.whole;
        let width_share = (s.b - s.a) / (b - a);
        let budget_left = accepted.len() + stack.len() + 2 >= max_panels;
        if delta.abs() <= 15.0 * rel_tol * scale * width_share
            || s.depth >= max_depth
            || budget_left
        {
            if delta.abs() > 15.0 * rel_tol * scale * width_share {
                converged = false;
            }
            accepted.push(left + right + delta / 15.0);
        } else {
            stack.push(Segment {
                a: m,
                b: s.b,
                fa: s.fm,
                fm: rm,
                fb: s.fb,
                whole: right,
                depth: s.depth + 1,
            });
            stack.push(Segment {
                a: s.a,
                b: m,
                fa: s.fa,
                fm: lm,
                fb: s.fm,
                whole: left,
                depth: s.depth + 1,
            });
        }
    }
    (math::pairwise_sum(&accepted), converged)
}

/// Golden-section search for a maximiser of `f` on `[a, b]` to abscissa tolerance `tol`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (math::sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_on_cubics() {
        let v = composite_simpson(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 2);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_simpson_on_gaussian() {
        let (v, ok) = adaptive_simpson(|x| math::exp(-x * x / 2.0), -12.0, 12.0, 1e-12, 1 << 14);
        assert!(ok);
        let exact = math::sqrt(2.0 * core::f64::consts::PI);
        assert!((v - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, 0.0, 1.0, 1e-9);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-15);
    }
}
