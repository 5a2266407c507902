/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `failures` out of `trials` at quantile `z`.
pub fn wilson_interval(failures: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(
        trials > 0 && failures <= trials,
        "{failures} failures in {trials} trials"
    );
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // Clamp the rounding residue at the endpoints so the interval always contains p.
    (
        (center - half).max(0.0).min(p),
        (center + half).min(1.0).max(p),
    )
}

/// Logical error rate at one physical error rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LerPoint {
    pub p_f: f64,
    pub trials: u64,
    pub failures: u64,
    pub ler: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl LerPoint {
    pub fn from_counts(p_f: f64, trials: u64, failures: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(failures, trials, Z95);
        Self {
            p_f,
            trials,
            failures,
            ler: failures as f64 / trials as f64,
            ci_low,
            ci_high,
        }
    }

    /// True when the two 95% intervals are disjoint.
    pub fn separated_from(&self, other: &LerPoint) -> bool {
        self.ci_high < other.ci_low || other.ci_high < self.ci_low
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_failures_upper_bound() {
        for n in [1_000u64, 100_000, 1_000_000] {
            let (lo, hi) = wilson_interval(0, n, Z95);
            assert_eq!(lo, 0.0);
            let z2 = Z95 * Z95;
            assert!((hi - z2 / (n as f64 + z2)).abs() < 1e-15);
            assert!((hi * n as f64 - 3.84).abs() < 0.02);
        }
    }

    #[test]
    fn known_interval() {
        // 10 of 100 at 95%: textbook Wilson bounds.
        let (lo, hi) = wilson_interval(10, 100, Z95);
        assert!((lo - 0.05522).abs() < 1e-5, "{lo}");
        assert!((hi - 0.17436).abs() < 1e-5, "{hi}");
    }

    #[test]
    fn all_failures_reach_one() {
        let (lo, hi) = wilson_interval(50, 50, Z95);
        assert_eq!(hi, 1.0);
        assert!(lo < 1.0);
    }

    #[test]
    fn separation() {
        let a = LerPoint::from_counts(1e-3, 100_000, 10);
        let b = LerPoint::from_counts(1e-3, 100_000, 200);
        assert!(a.separated_from(&b) && b.separated_from(&a));
        assert!(!a.separated_from(&LerPoint::from_counts(1e-3, 100_000, 15)));
    }

    proptest! {
        #[test]
        fn interval_contains_estimate(trials in 1u64..1_000_000, frac in 0.0f64..=1.0) {
            let failures = ((trials as f64) * frac).floor() as u64;
            let pt = LerPoint::from_counts(0.01, trials, failures);
            prop_assert!(0.0 <= pt.ci_low && pt.ci_low <= pt.ler);
            prop_assert!(pt.ler <= pt.ci_high && pt.ci_high <= 1.0);
        }
    }
}
