//! Log-domain positives. The constant chain multiplies factors like
//! `e^{(eta0+2) rho}` with `rho` in the tens and exponents rescaled by the
//! calibrated constants, far past `f64` range in both directions; carrying
//! natural logs keeps every comparison exact.

/// A strictly positive quantity stored as its natural log.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogVal {
    pub ln: f64,
}

impl LogVal {
    pub fn of(v: f64) -> Self {
        debug_assert!(v > 0.0, "LogVal needs a positive value, got {v}");
        Self { ln: v.ln() }
    }

    pub fn from_ln(ln: f64) -> Self {
        Self { ln }
    }

    pub fn value(self) -> f64 {
        self.ln.exp()
    }

    pub fn log10(self) -> f64 {
        self.ln / std::f64::consts::LN_10
    }

    pub fn mul(self, other: LogVal) -> LogVal {
        Self { ln: self.ln + other.ln }
    }

    pub fn div(self, other: LogVal) -> LogVal {
        Self { ln: self.ln - other.ln }
    }

    pub fn powi(self, k: i32) -> LogVal {
        Self { ln: self.ln * k as f64 }
    }

    /// `self + other` computed stably in the log domain.
    pub fn add(self, other: LogVal) -> LogVal {
        let (hi, lo) = if self.ln >= other.ln { (self.ln, other.ln) } else { (other.ln, self.ln) };
        Self { ln: hi + (lo - hi).exp().ln_1p() }
    }

    /// `self + 1`.
    pub fn add_one(self) -> LogVal {
        self.add(LogVal::from_ln(0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_matches_f64_in_range() {
        let a = LogVal::of(3.5);
        let b = LogVal::of(0.2);
        assert!((a.mul(b).value() - 0.7).abs() < 1e-14);
        assert!((a.div(b).value() - 17.5).abs() < 1e-13);
        assert!((a.add(b).value() - 3.7).abs() < 1e-14);
        assert!((a.powi(3).value() - 42.875).abs() < 1e-12);
        assert!((b.add_one().value() - 1.2).abs() < 1e-14);
    }

    #[test]
    fn survives_extreme_ranges() {
        let huge = LogVal::from_ln(5000.0);
        let tiny = LogVal::from_ln(-5000.0);
        let prod = huge.mul(tiny);
        assert!((prod.value() - 1.0).abs() < 1e-12);
        assert!(huge.add(tiny).ln == 5000.0);
        assert!(tiny.add_one().ln.abs() < 1e-12, "1 + tiny is 1");
    }
}
