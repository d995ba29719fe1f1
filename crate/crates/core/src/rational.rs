//! Exact rational scalars and their string form.

use num_rational::Ratio;

/// Exact rational used for scalar results (pairings, invariants).
pub type Rational = Ratio<i128>;

/// Formats as `num/den`, or just `num` when the denominator is one.
pub fn to_string(r: &Rational) -> String {
    r.to_string()
}

/// Parses `num` or `num/den`.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().ok()?;
            let d: i128 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<i128>().ok().map(Rational::from_integer),
    }
}

pub(crate) fn serialize<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&to_string(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        for r in [Rational::new(-34, 7), Rational::from_integer(2), Rational::new(0, 5)] {
            assert_eq!(parse(&to_string(&r)), Some(r));
        }
        assert_eq!(to_string(&Rational::new(6, 3)), "2");
        assert_eq!(parse("1/0"), None);
    }
}
