//! Text forms of exact rationals.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{Int, Rat};

/// A rational as a pair of decimal strings, for JSON output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatRepr {
    pub num: String,
    pub den: String,
}

impl From<&Rat> for RatRepr {
    fn from(r: &Rat) -> Self {
        Self {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

impl RatRepr {
    /// Parses the pair back; `None` on malformed digits or a zero denominator.
    pub fn to_rat(&self) -> Option<Rat> {
        let num: Int = self.num.parse().ok()?;
        let den: Int = self.den.parse().ok()?;
        (!den.is_zero()).then(|| Rat::new(num, den))
    }
}

/// Decimal expansion of `r` truncated toward zero after `digits` places.
pub fn decimal(r: &Rat, digits: usize) -> String {
    let scale = num_traits::pow(Int::from(10), digits);
    let scaled = (r.numer().abs() * &scale) / r.denom();
    let sign = if r.is_negative() && !scaled.is_zero() {
        "-"
    } else {
        ""
    };
    let int_part = &scaled / &scale;
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = (&scaled % &scale).to_string();
    format!("{sign}{int_part}.{}{frac}", "0".repeat(digits - frac.len()))
}
