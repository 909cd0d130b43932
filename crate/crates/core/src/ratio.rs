//! Exact non-negative rationals for augmentation factors and thresholds.
//!
//! Capacities like `(1+eps)B` and thresholds like `eps*W/4` are generally
//! not integers. To keep every algorithm decision bit-exact and
//! platform-independent, the crate never converts these to floating point:
//! a [`Ratio`] stores a reduced `num/den` pair and all comparisons against
//! integer weights cross-multiply in 128-bit arithmetic.

use std::fmt;
use std::str::FromStr;

/// A non-negative rational number `num/den` in lowest terms, `den >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl Ratio {
    /// Builds `num/den` reduced to lowest terms. Panics if `den == 0`.
    pub fn new(num: u64, den: u64) -> Ratio {
        assert!(den != 0, "ratio denominator must be nonzero");
        let g = gcd(num, den);
        Ratio { num: num / g, den: den / g }
    }

    pub fn zero() -> Ratio {
        Ratio { num: 0, den: 1 }
    }

    pub fn one() -> Ratio {
        Ratio { num: 1, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// True iff the value lies strictly between 0 and 1.
    pub fn in_unit_interval(&self) -> bool {
        self.num > 0 && self.num < self.den
    }

    /// `self / k`. Panics if `k == 0`.
    pub fn div_int(&self, k: u64) -> Ratio {
        assert!(k != 0);
        // num/(den*k); u64 overflow is unrealistic for the parameter ranges
        // used here but checked arithmetic keeps it honest.
        Ratio::new(self.num, self.den.checked_mul(k).expect("ratio denominator overflow"))
    }

    /// `1 + self`.
    pub fn one_plus(&self) -> Ratio {
        Ratio::new(self.den.checked_add(self.num).expect("ratio numerator overflow"), self.den)
    }

    /// `1 - self`. Panics if `self > 1`.
    pub fn one_minus(&self) -> Ratio {
        assert!(self.num <= self.den, "one_minus under zero");
        Ratio::new(self.den - self.num, self.den)
    }

    /// Exact test `x <= self * y`.
    pub fn scale_ge(&self, x: u64, y: u64) -> bool {
        (x as u128) * (self.den as u128) <= (self.num as u128) * (y as u128)
    }

    /// Exact test `x >= self * y`.
    pub fn scale_le(&self, x: u64, y: u64) -> bool {
        (x as u128) * (self.den as u128) >= (self.num as u128) * (y as u128)
    }

    /// Exact test `x < self * y`.
    pub fn scale_gt(&self, x: u64, y: u64) -> bool {
        (x as u128) * (self.den as u128) < (self.num as u128) * (y as u128)
    }

    /// Exact comparison of `self` with `a/b`. Panics if `b == 0`.
    pub fn cmp_frac(&self, a: u64, b: u64) -> std::cmp::Ordering {
        assert!(b != 0);
        ((self.num as u128) * (b as u128)).cmp(&((a as u128) * (self.den as u128)))
    }

    /// Value rounded down to an integer.
    pub fn floor(&self) -> u64 {
        self.num / self.den
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Ratio {
    type Err = String;

    /// Parses `"p/q"` or a plain decimal like `"0.5"` / `"1"`.
    fn from_str(s: &str) -> Result<Ratio, String> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let num: u64 = p.trim().parse().map_err(|_| format!("bad numerator in '{s}'"))?;
            let den: u64 = q.trim().parse().map_err(|_| format!("bad denominator in '{s}'"))?;
            if den == 0 {
                return Err(format!("zero denominator in '{s}'"));
            }
            Ok(Ratio::new(num, den))
        } else if let Some((int, frac)) = s.split_once('.') {
            let int: u64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| format!("bad integer part in '{s}'"))?
            };
            if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(format!("bad fractional part in '{s}'"));
            }
            let scale = 10u64.pow(frac.len() as u32);
            let frac: u64 = frac.parse().map_err(|_| format!("bad fractional part in '{s}'"))?;
            let num = int
                .checked_mul(scale)
                .and_then(|v| v.checked_add(frac))
                .ok_or_else(|| format!("value out of range in '{s}'"))?;
            Ok(Ratio::new(num, scale))
        } else {
            let num: u64 = s.parse().map_err(|_| format!("bad rational '{s}'"))?;
            Ok(Ratio::new(num, 1))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    #[test]
    fn reduces_to_lowest_terms() {
        let r = Ratio::new(2, 4);
        assert_eq!((r.num(), r.den()), (1, 2));
        assert_eq!(r, Ratio::new(50, 100));
    }

    #[test]
    fn parses_fraction_and_decimal_forms() {
        assert_eq!("1/2".parse::<Ratio>().unwrap(), Ratio::new(1, 2));
        assert_eq!("0.5".parse::<Ratio>().unwrap(), Ratio::new(1, 2));
        assert_eq!("0.3".parse::<Ratio>().unwrap(), Ratio::new(3, 10));
        assert_eq!(".25".parse::<Ratio>().unwrap(), Ratio::new(1, 4));
        assert_eq!("1".parse::<Ratio>().unwrap(), Ratio::one());
        assert!("1/0".parse::<Ratio>().is_err());
        assert!("x".parse::<Ratio>().is_err());
    }

    #[test]
    fn display_is_reduced_fraction() {
        assert_eq!("0.5".parse::<Ratio>().unwrap().to_string(), "1/2");
    }

    #[test]
    fn scaled_comparisons_are_exact() {
        let eps = Ratio::new(1, 3);
        // 1 <= (1/3)*3 and 2 > (1/3)*3, with no rounding.
        assert!(eps.scale_ge(1, 3));
        assert!(!eps.scale_ge(2, 3));
        assert!(eps.scale_le(1, 3));
        assert!(eps.scale_le(2, 3));
        assert!(eps.scale_gt(0, 3));
        assert!(!eps.scale_gt(1, 3));
    }

    #[test]
    fn derived_factors() {
        let eps = Ratio::new(1, 2);
        assert_eq!(eps.one_plus(), Ratio::new(3, 2));
        assert_eq!(eps.one_minus(), Ratio::new(1, 2));
        assert_eq!(eps.div_int(2), Ratio::new(1, 4));
        assert_eq!(Ratio::new(3, 2).floor(), 1);
    }

    #[test]
    fn frac_comparison() {
        let r = Ratio::new(8, 100); // 2/25
        assert_eq!(r.cmp_frac(8, 100), Ordering::Equal);
        assert_eq!(r.cmp_frac(1, 10), Ordering::Less);
        assert_eq!(r.cmp_frac(1, 20), Ordering::Greater);
    }
}
