//! Textual form of rationals: `a` or `a/b` with `b > 1`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::Rational;

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    parse_rational_at(text, 0)
}

/// Parses a rational literal; `offset` is added to reported error positions.
pub(crate) fn parse_rational_at(text: &str, offset: usize) -> Result<Rational> {
    let t = text.trim();
    let lead = text.len() - text.trim_start().len() + offset;
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let numer =
        parse_integer(num).ok_or_else(|| Error::parse(lead, format!("bad integer `{num}`")))?;
    let denom = match den {
        None => BigInt::one(),
        Some(d) => {
            let d = parse_integer(d)
                .filter(|d| d.is_positive())
                .ok_or_else(|| Error::parse(lead, format!("bad denominator in `{t}`")))?;
            d
        }
    };
    Ok(Rational::new(numer, denom))
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s
        .strip_prefix('-')
        .or_else(|| s.strip_prefix('+'))
        .unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert_eq!(format_rational(&parse_rational("-7").unwrap()), "-7");
        assert_eq!(format_rational(&parse_rational("0/5").unwrap()), "0");
        assert_eq!(format_rational(&parse_rational("-1/3").unwrap()), "-1/3");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("").is_err());
    }
}
