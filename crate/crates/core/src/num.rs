//! Small numeric helpers shared by the planners and the checker.

/// Relative slack applied to time and rate comparisons.
///
/// Event times are derived from integer bit counts divided by real rates, so
/// two routes to the same instant can disagree in the last few ulps.
pub(crate) const REL_EPS: f64 = 1e-9;

/// `a <= b` up to [`REL_EPS`] relative to the magnitude of `b` (at least 1).
#[inline]
pub(crate) fn approx_le(a: f64, b: f64) -> bool {
    a <= b + REL_EPS * libm::fabs(b).max(1.0)
}

/// Compensated (Neumaier) summation.
pub(crate) fn stable_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if libm::fabs(sum) >= libm::fabs(v) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Ceiling of `fraction * n`, ignoring float noise just above an integer.
///
/// `0.3 * 10.0` evaluates to `3.0000000000000004`; the threshold there is 3.
pub(crate) fn ceil_fraction(fraction: f64, n: usize) -> usize {
    let x = fraction * n as f64;
    let nearest = libm::round(x);
    if libm::fabs(x - nearest) <= 1e-9 * nearest.max(1.0) {
        nearest as usize
    } else {
        libm::ceil(x) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_fraction_absorbs_noise() {
        assert_eq!(ceil_fraction(0.3, 10), 3);
        assert_eq!(ceil_fraction(0.31, 10), 4);
        assert_eq!(ceil_fraction(0.5, 4), 2);
        assert_eq!(ceil_fraction(1.0, 255), 255);
        assert_eq!(ceil_fraction(0.001, 8), 1);
    }

    #[test]
    fn stable_sum_is_exact_on_small_cases() {
        assert_eq!(stable_sum([1.0, 1e100, 1.0, -1e100]), 2.0);
    }
}
