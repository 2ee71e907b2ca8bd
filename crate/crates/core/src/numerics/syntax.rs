//! Text form of scalars: integers, decimals, `p/q`, and `a+b*sqrt(d)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::exact::{Exact, Rational};
use crate::error::{Error, Result};

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_rational(p)?;
        let q = parse_rational(q)?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(p / q);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mant, exp) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| err())?),
        None => (body, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| err())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(digits);
    if scale >= 0 {
        r *= Rational::from_integer(ten.pow(scale as u32));
    } else {
        r /= Rational::from_integer(ten.pow((-scale) as u32));
    }
    Ok(if neg { -r } else { r })
}

/// Parse `q`, `sqrt(d)`, `b*sqrt(d)`, `sqrt(d)/c`, and sums `a ± …` thereof.
pub fn parse_exact(s: &str) -> Result<Exact> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if !t.contains("sqrt") {
        return Ok(Exact::from_rational(parse_rational(&t)?));
    }
    // split into signed terms at top-level + / - (not after 'e' or '(')
    let mut terms: Vec<String> = vec![];
    let mut cur = String::new();
    let mut depth = 0;
    for (i, c) in t.char_indices() {
        let prev = t[..i].chars().last();
        if (c == '+' || c == '-') && depth == 0 && i > 0 && !matches!(prev, Some('e' | 'E' | '*' | '/')) {
            terms.push(std::mem::take(&mut cur));
        }
        if c == '(' {
            depth += 1;
        }
        if c == ')' {
            depth -= 1;
        }
        cur.push(c);
    }
    terms.push(cur);
    let mut total: Option<Exact> = None;
    for term in terms {
        let v = parse_term(&term)?;
        total = Some(match total {
            None => v,
            Some(acc) if acc.compatible(&v) || acc.is_rational() || v.is_rational() => {
                add_mixed(&acc, &v).ok_or_else(|| Error::Parse(format!("mixed radicands in {s:?}")))?
            }
            Some(_) => return Err(Error::Parse(format!("mixed radicands in {s:?}"))),
        });
    }
    total.ok_or_else(|| Error::Parse(format!("empty scalar {s:?}")))
}

fn add_mixed(a: &Exact, b: &Exact) -> Option<Exact> {
    let d = if a.is_rational() { b.radicand() } else { a.radicand() };
    if !a.is_rational() && !b.is_rational() && a.radicand() != b.radicand() {
        return None;
    }
    Some(Exact::quadratic(
        a.rational_part() + b.rational_part(),
        a.surd_coefficient() + b.surd_coefficient(),
        d.max(1),
    ))
}

fn parse_term(term: &str) -> Result<Exact> {
    let err = || Error::Parse(format!("bad scalar term {term:?}"));
    let Some(pos) = term.find("sqrt(") else {
        return Ok(Exact::from_rational(parse_rational(term)?));
    };
    let close = term[pos..].find(')').ok_or_else(err)? + pos;
    let radicand: u64 = term[pos + 5..close].parse().map_err(|_| err())?;
    let before = term[..pos].trim_end_matches('*');
    let coeff = match before {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        c => parse_rational(c)?,
    };
    let after = &term[close + 1..];
    let coeff = match after {
        "" => coeff,
        a if a.starts_with('/') => coeff / parse_rational(&a[1..])?,
        a if a.starts_with('*') => coeff * parse_rational(&a[1..])?,
        _ => return Err(err()),
    };
    Ok(Exact::quadratic(Rational::zero(), coeff, radicand))
}

/// Canonical text form, re-readable by [`parse_exact`].
pub fn format_exact(x: &Exact) -> String {
    x.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::exact::rat;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_exact("3").unwrap(), Exact::int(3));
        assert_eq!(parse_exact("-0.25").unwrap(), Exact::frac(-1, 4));
        assert_eq!(parse_exact("2/6").unwrap(), Exact::frac(1, 3));
        assert_eq!(parse_exact("1e-2").unwrap(), Exact::frac(1, 100));
        assert_eq!(parse_exact("1+sqrt(2)").unwrap(), Exact::quadratic(rat(1, 1), rat(1, 1), 2));
        assert_eq!(parse_exact("1/2 - 3/4*sqrt(8)").unwrap(), Exact::quadratic(rat(1, 2), rat(-3, 2), 2));
        assert_eq!(parse_exact("sqrt(2)/4").unwrap(), Exact::quadratic(rat(0, 1), rat(1, 4), 2));
        assert_eq!(parse_exact("sqrt(9)").unwrap(), Exact::int(3));
        assert!(parse_exact("sqrt(2)+sqrt(3)").is_err());
        assert!(parse_exact("abc").is_err());
    }

    #[test]
    fn round_trip() {
        for s in ["7/3", "-2", "1+sqrt(2)", "-1/3+2/5*sqrt(7)", "sqrt(3)/2"] {
            let x = parse_exact(s).unwrap();
            assert_eq!(parse_exact(&format_exact(&x)).unwrap(), x);
        }
    }
}
