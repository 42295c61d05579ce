//! Outward-rounded decimal text for interval endpoints and integer counts
//! written in scientific shorthand (`4e18`, `1.5e6`).
//!
//! `format_down(x)` returns a decimal string whose exact value is `<= x`,
//! `format_up(x)` one whose value is `>= x`. Both print 17 significant digits
//! of the neighbouring double: half a unit in the 17th digit is smaller than
//! the gap to that neighbour, so the decimal lands strictly on the outer side.

use crate::error::{Error, Result};

pub fn format_down(x: f64) -> String {
    if x == 0.0 || x.is_infinite() {
        return plain(x);
    }
    trim(format!("{:.16e}", x.next_down()))
}

pub fn format_up(x: f64) -> String {
    if x == 0.0 || x.is_infinite() {
        return plain(x);
    }
    trim(format!("{:.16e}", x.next_up()))
}

/// A double `<=` the decimal value of `s`.
pub fn parse_down(s: &str) -> Result<f64> {
    let v = parse(s)?;
    Ok(if v == 0.0 || v.is_infinite() { v } else { v.next_down() })
}

/// A double `>=` the decimal value of `s`.
pub fn parse_up(s: &str) -> Result<f64> {
    let v = parse(s)?;
    Ok(if v == 0.0 || v.is_infinite() { v } else { v.next_up() })
}

fn parse(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        t => t.parse::<f64>().map_err(|_| Error::Parse {
            line: 0,
            message: format!("not a decimal number: {s:?}"),
        }),
    }
}

fn plain(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        "0".into()
    }
}

fn trim(s: String) -> String {
    // "1.8405180000000000e0" -> "1.840518e0"
    match s.split_once('e') {
        Some((mantissa, exp)) if mantissa.contains('.') => {
            let m = mantissa.trim_end_matches('0').trim_end_matches('.');
            format!("{m}e{exp}")
        }
        _ => s,
    }
}

/// Parse an exact non-negative integer given as digits, `<m>e<n>` with a
/// decimal mantissa (`4e18`, `1.5e6`) or the census-table form `<k>d<n>`.
pub fn parse_count(s: &str) -> Result<u64> {
    let err = || Error::Parse { line: 0, message: format!("not an exact integer: {s:?}") };
    let t = s.trim().replace('_', "");
    let (mantissa, exp) = match t.split_once(['e', 'E', 'd']) {
        Some((m, e)) => (m.to_string(), e.parse::<u32>().map_err(|_| err())?),
        None => (t.clone(), 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((&mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let frac_digits = frac_part.trim_end_matches('0');
    let shift = exp.checked_sub(frac_digits.len() as u32).ok_or_else(err)?;
    let digits = format!("{int_part}{frac_digits}");
    let base: u64 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| err())? };
    10u64
        .checked_pow(shift)
        .and_then(|p| base.checked_mul(p))
        .ok_or_else(err)
}

/// Serde adapter writing an `f64` lower bound as a decimal string below it.
pub mod serde_down {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_down(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_down(&text).map_err(D::Error::custom)
    }
}

/// Serde adapter writing an `f64` upper bound as a decimal string above it.
pub mod serde_up {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_up(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_up(&text).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    /// Exact comparison of a decimal string against a double via big integers.
    fn cmp_decimal(s: &str, x: f64) -> std::cmp::Ordering {
        let (m, e) = s.split_once('e').unwrap();
        let e: i32 = e.parse().unwrap();
        let neg = m.starts_with('-');
        let m = m.trim_start_matches('-');
        let (ip, fp) = m.split_once('.').unwrap_or((m, ""));
        let mut num: BigInt = format!("{ip}{fp}").parse().unwrap();
        if neg {
            num = -num;
        }
        let dec_exp = e - fp.len() as i32;
        // x = mant * 2^bexp
        let bits = x.to_bits();
        let bexp = ((bits >> 52) & 0x7ff) as i32;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, bexp) = if bexp == 0 { (frac, -1074) } else { (frac | (1 << 52), bexp - 1075) };
        let mut xm = BigInt::from(mant);
        if x < 0.0 {
            xm = -xm;
        }
        // compare num * 10^dec_exp with xm * 2^bexp, scaled to integers
        let mut lhs = num;
        let mut rhs = xm;
        if dec_exp >= 0 {
            lhs *= BigInt::from(10).pow(dec_exp as u32);
        } else {
            rhs *= BigInt::from(10).pow((-dec_exp) as u32);
        }
        if bexp >= 0 {
            rhs <<= bexp as usize;
        } else {
            lhs <<= (-bexp) as usize;
        }
        lhs.cmp(&rhs)
    }

    #[test]
    fn fixed_examples() {
        assert_eq!(format_down(0.0), "0");
        assert_eq!(format_up(f64::INFINITY), "inf");
        assert!(format_down(1.840503).starts_with("1.84050299999"));
        assert!(format_up(2.288513).starts_with("2.28851300000"));
    }

    proptest! {
        #[test]
        fn outward_decimal(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(x.is_finite() && x != 0.0);
            let d = format_down(x);
            let u = format_up(x);
            prop_assert_eq!(cmp_decimal(&d, x), std::cmp::Ordering::Less);
            prop_assert_eq!(cmp_decimal(&u, x), std::cmp::Ordering::Greater);
            prop_assert!(parse_down(&d).unwrap() <= x);
            prop_assert!(parse_up(&u).unwrap() >= x);
        }
    }

    #[test]
    fn counts() {
        assert_eq!(parse_count("1000000").unwrap(), 1_000_000);
        assert_eq!(parse_count("4e18").unwrap(), 4_000_000_000_000_000_000);
        assert_eq!(parse_count("1.5e3").unwrap(), 1500);
        assert_eq!(parse_count("1001d12").unwrap(), 1_001_000_000_000_000);
        assert!(parse_count("1.55e1").is_err());
        assert!(parse_count("2e19").is_err());
        assert!(parse_count("abc").is_err());
    }
}
