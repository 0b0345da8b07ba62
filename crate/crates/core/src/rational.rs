//! Exact rational helpers shared by the model, the reader/writer and the
//! analysis. Floating point never enters a comparison; it is not used at all.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Parses a decimal literal (`12`, `-0.006`, `1.5e3`) or a fraction (`1/3`).
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }

    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num::pow(ten, scale as usize);
    } else {
        value /= num::pow(ten, (-scale) as usize);
    }
    Some(if negative { -value } else { value })
}

/// Writes a rational as a plain decimal when its expansion terminates,
/// otherwise as `numer/denom`.
pub fn to_decimal_string(r: &Rational) -> String {
    if is_integer(r) {
        return r.numer().to_string();
    }
    let mut denom = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&denom % &two).is_zero() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let places = twos.max(fives);
    let scaled = (r * Rational::from_integer(num::pow(BigInt::from(10), places))).to_integer();
    place_point(&scaled, places)
}

fn place_point(scaled: &BigInt, places: usize) -> String {
    let negative = scaled.sign() == Sign::Minus;
    let digits = scaled.abs().to_string();
    let body = if places == 0 {
        digits
    } else if digits.len() > places {
        let (i, f) = digits.split_at(digits.len() - places);
        format!("{i}.{f}")
    } else {
        format!("0.{}{}", "0".repeat(places - digits.len()), digits)
    };
    let body = if body.contains('.') {
        body.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        body
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Rounds to `digits` significant decimal digits (half away from zero) and
/// drops trailing zeros.
pub fn format_significant(r: &Rational, digits: u32) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let v = r.abs();
    let ten = Rational::from_integer(BigInt::from(10));

    // 10^e <= v < 10^(e+1)
    let mut e: i64 = v.numer().to_string().len() as i64 - v.denom().to_string().len() as i64;
    while pow10(&ten, e) > v {
        e -= 1;
    }
    while pow10(&ten, e + 1) <= v {
        e += 1;
    }

    let shift = digits as i64 - 1 - e;
    let scaled = &v * pow10(&ten, shift);
    let mut n = round_half_up(&scaled);
    let mut shift = shift;
    if n.to_string().len() > digits as usize {
        n /= BigInt::from(10);
        shift -= 1;
    }
    let text = if shift >= 0 {
        place_point(&n, shift as usize)
    } else {
        (n * num::pow(BigInt::from(10), (-shift) as usize)).to_string()
    };
    if negative {
        format!("-{text}")
    } else {
        text
    }
}

fn pow10(ten: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num::pow(ten.clone(), e as usize)
    } else {
        Rational::one() / num::pow(ten.clone(), (-e) as usize)
    }
}

fn round_half_up(v: &Rational) -> BigInt {
    let floor = v.floor();
    let frac = v - &floor;
    let mut n = floor.to_integer();
    if frac >= ratio(1, 2) {
        n += 1;
    }
    n
}

/// Renders a utilization fraction (1 = 100%) as a percentage with four
/// significant digits.
pub fn format_percent(fraction: &Rational) -> String {
    format!("{}%", format_significant(&(fraction * int(100)), 4))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_literals() {
        assert_eq!(parse_decimal("0.006"), Some(ratio(6, 1000)));
        assert_eq!(parse_decimal("99"), Some(int(99)));
        assert_eq!(parse_decimal("-5"), Some(int(-5)));
        assert_eq!(parse_decimal("1.5e3"), Some(int(1500)));
        assert_eq!(parse_decimal("25E-2"), Some(ratio(1, 4)));
        assert_eq!(parse_decimal(".5"), Some(ratio(1, 2)));
        assert_eq!(parse_decimal("1/3"), Some(ratio(1, 3)));
        assert_eq!(parse_decimal("1/0"), None);
        assert_eq!(parse_decimal("ten"), None);
        assert_eq!(parse_decimal(""), None);
        assert_eq!(parse_decimal("."), None);
    }

    #[test]
    fn decimal_strings() {
        assert_eq!(to_decimal_string(&ratio(6, 1000)), "0.006");
        assert_eq!(to_decimal_string(&int(6000)), "6000");
        assert_eq!(to_decimal_string(&ratio(-1, 4)), "-0.25");
        assert_eq!(to_decimal_string(&ratio(1, 3)), "1/3");
        assert_eq!(to_decimal_string(&ratio(1, 2)), "0.5");
    }

    #[test]
    fn percent_formatting() {
        assert_eq!(format_percent(&ratio(1, 100_000)), "0.001%");
        assert_eq!(format_percent(&ratio(108, 125)), "86.4%");
        assert_eq!(format_percent(&int(2)), "200%");
        assert_eq!(format_percent(&ratio(99, 100)), "99%");
        assert_eq!(format_percent(&Rational::zero()), "0%");
        assert_eq!(format_percent(&ratio(1, 172_800)), "0.0005787%");
        assert_eq!(format_percent(&ratio(1, 43_200)), "0.002315%");
        assert_eq!(format_percent(&int(123)), "12300%");
        assert_eq!(format_percent(&ratio(99_999, 100_000)), "100%");
    }

    #[test]
    fn significant_digits_carry() {
        assert_eq!(format_significant(&ratio(99_995, 1000), 4), "100");
        assert_eq!(format_significant(&ratio(12_345, 1), 4), "12350");
        assert_eq!(format_significant(&ratio(-1, 3), 4), "-0.3333");
    }
}
