use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use hyperjac::{Constant, CurveSpec, Family};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// y^2 = x^d + c
    Additive,
    /// y^2 = x^d + cx
    Linear,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Additive => Family::AdditiveConstant,
            FamilyArg::Linear => Family::LinearTwist,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// Curve family
    #[arg(long, value_enum, default_value = "additive")]
    pub family: FamilyArg,
    /// Degree d of the trinomial
    #[arg(long, required_unless_present = "curve")]
    pub d: Option<u32>,
    /// Nonzero rational constant, e.g. 3, -1 or 2/3
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub c: String,
    /// Shorthand such as "x^10+c", "x^7+cx" or "x^9-2"
    #[arg(long, conflicts_with_all = ["family", "d"])]
    pub curve: Option<String>,
}

pub fn parse_constant(s: &str) -> Result<Constant> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: i64 = num
        .parse()
        .with_context(|| format!("invalid constant {s:?}"))?;
    let den: i64 = den
        .parse()
        .with_context(|| format!("invalid constant {s:?}"))?;
    Ok(Constant::new(num, den)?)
}

impl CurveArgs {
    pub fn spec(&self) -> Result<CurveSpec> {
        let default_c = parse_constant(&self.c)?;
        if let Some(text) = &self.curve {
            return parse_shorthand(text, default_c);
        }
        let d = self.d.context("--d is required")?;
        let family: Family = self.family.into();
        if family == Family::LinearTwist && d % 2 == 0 {
            bail!("d must be odd for the linear twist family, got {d}");
        }
        Ok(CurveSpec::new(family, d, default_c)?)
    }
}

/// Parses `x^D+c`, `x^D+cx`, optionally prefixed by `y^2=`, where `c` is
/// either the letter `c` (taken from `--c`) or a rational literal.
pub fn parse_shorthand(text: &str, default_c: Constant) -> Result<CurveSpec> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let body = compact
        .strip_prefix("y^2=")
        .unwrap_or(&compact)
        .strip_prefix("x^")
        .with_context(|| format!("expected x^D+c or x^D+cx, got {text:?}"))?;
    let split = body
        .find(['+', '-'])
        .with_context(|| format!("missing constant term in {text:?}"))?;
    let d: u32 = body[..split]
        .parse()
        .with_context(|| format!("invalid degree in {text:?}"))?;
    let (sign, mut rest) = (&body[split..split + 1], &body[split + 1..]);
    let family = match rest.strip_suffix('x') {
        Some(r) => {
            rest = r;
            Family::LinearTwist
        }
        None => Family::AdditiveConstant,
    };
    let rest = rest
        .trim_start_matches('(')
        .trim_end_matches(')')
        .trim_end_matches('*');
    let c = match rest {
        "c" | "" => default_c,
        lit => parse_constant(lit)?,
    };
    let c = if sign == "-" {
        Constant::new(-c.num, c.den)?
    } else {
        c
    };
    if family == Family::LinearTwist && d.is_multiple_of(2) {
        bail!("d must be odd for the linear twist family, got {d}");
    }
    Ok(CurveSpec::new(family, d, c)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Constant {
        Constant::integer(1).unwrap()
    }

    #[test]
    fn shorthand_forms() {
        assert_eq!(
            parse_shorthand("x^10+c", one()).unwrap(),
            CurveSpec::additive(10, 1).unwrap()
        );
        assert_eq!(
            parse_shorthand("y^2 = x^7 + cx", one()).unwrap(),
            CurveSpec::linear(7, 1).unwrap()
        );
        assert_eq!(
            parse_shorthand("x^9-2", one()).unwrap(),
            CurveSpec::additive(9, -2).unwrap()
        );
        assert_eq!(
            parse_shorthand("x^5+3x", one()).unwrap(),
            CurveSpec::linear(5, 3).unwrap()
        );
        let half = parse_shorthand("x^6+(1/2)", one()).unwrap();
        assert_eq!(half.c, Constant::new(1, 2).unwrap());
        assert!(parse_shorthand("x^8+cx", one()).is_err());
        assert!(parse_shorthand("x^8", one()).is_err());
        assert!(parse_shorthand("z^8+c", one()).is_err());
    }

    #[test]
    fn constants() {
        assert_eq!(
            parse_constant("-3").unwrap(),
            Constant::integer(-3).unwrap()
        );
        assert_eq!(parse_constant("4/6").unwrap(), Constant::new(2, 3).unwrap());
        assert!(parse_constant("0").is_err());
        assert!(parse_constant("c").is_err());
    }
}
