use std::f64::consts::LN_2;

/// A value v ∈ [0, 1] held as (ln v, ln(1 − v)) so that both v ≈ 0 and
/// v ≈ 1 keep full relative precision deep into the polarization tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bhat {
    ln_v: f64,
    ln_c: f64,
}

/// ln(1 − eˣ) for x ≤ 0.
fn ln_one_minus_exp(x: f64) -> f64 {
    if x >= 0.0 {
        f64::NEG_INFINITY
    } else if x > -LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

impl Bhat {
    pub const ZERO: Bhat = Bhat {
        ln_v: f64::NEG_INFINITY,
        ln_c: 0.0,
    };
    pub const ONE: Bhat = Bhat {
        ln_v: 0.0,
        ln_c: f64::NEG_INFINITY,
    };

    pub fn new(v: f64) -> Self {
        let v = v.clamp(0.0, 1.0);
        Self {
            ln_v: v.ln(),
            ln_c: (-v).ln_1p(),
        }
    }

    /// From ln v and ln(1 − v) computed independently. The smaller of v and
    /// 1 − v carries the precision, so it fixes the other.
    pub fn from_logs(ln_v: f64, ln_c: f64) -> Self {
        let (ln_v, ln_c) = (ln_v.min(0.0), ln_c.min(0.0));
        if ln_c < -LN_2 {
            Self {
                ln_v: ln_one_minus_exp(ln_c),
                ln_c,
            }
        } else if ln_v < -LN_2 {
            Self {
                ln_v,
                ln_c: ln_one_minus_exp(ln_v),
            }
        } else {
            Self { ln_v, ln_c }
        }
    }

    pub fn value(self) -> f64 {
        self.ln_v.exp()
    }

    pub fn complement(self) -> f64 {
        self.ln_c.exp()
    }

    pub fn ln(self) -> f64 {
        self.ln_v
    }

    pub fn ln_complement(self) -> f64 {
        self.ln_c
    }

    pub fn log2(self) -> f64 {
        self.ln_v / LN_2
    }

    pub fn log2_complement(self) -> f64 {
        self.ln_c / LN_2
    }

    /// v².
    pub fn square(self) -> Self {
        Self::from_logs(2.0 * self.ln_v, self.ln_c + self.value().ln_1p())
    }

    /// min(1, 2u − l²) with `self` = u and l ≤ u.
    pub fn minus_upper(self, lower: Bhat) -> Self {
        let ln_v = self.ln_v + (2.0 - (2.0 * lower.ln_v - self.ln_v).exp()).ln();
        // 1 − 2u + l² = 2(1−u) − (1−l)(1+l)
        let ln_pos = LN_2 + self.ln_c;
        let ln_neg = lower.ln_c + lower.value().ln_1p();
        if ln_pos == f64::NEG_INFINITY || ln_neg >= ln_pos {
            return Self::ONE;
        }
        let ln_c = ln_pos + ln_one_minus_exp(ln_neg - ln_pos);
        Self::from_logs(ln_v, ln_c)
    }

    /// l·√(2 − l²).
    pub fn minus_lower_commuting(self) -> Self {
        let ln_v = self.ln_v + 0.5 * (2.0 - (2.0 * self.ln_v).exp()).ln();
        // With t = 1 − l²: 1 − l√(2−l²) = 1 − √(1−t²) = t² / (1 + √(1 − t²)).
        let ln_t = self.ln_c + self.value().ln_1p();
        let t = ln_t.exp();
        let ln_c = 2.0 * ln_t - (1.0 + (1.0 - t * t).max(0.0).sqrt()).ln();
        Self::from_logs(ln_v, ln_c)
    }
}
