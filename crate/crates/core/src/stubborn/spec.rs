//! The group-spec language: `gamma:k`, `gbar:k@m`, `e:k`,
//! `wreath(<spec>,r)` and `prod(<spec>;<spec>;…)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupSpec {
    /// `Γ_{2^k} ⊂ Sp(2^k)`.
    Gamma(u32),
    /// `Γ̄_{2^k}` with the circle truncated at angles of level `m`.
    GammaBar(u32, u32),
    /// `E_{2^k}` acting regularly on `2^k` coordinates.
    E(u32),
    /// `P ≀ E_{2^r}`.
    Wreath(Box<GroupSpec>, u32),
    /// Block sum of the factors.
    Product(Vec<GroupSpec>),
}

impl GroupSpec {
    /// Rank `n` of the ambient `Sp(n)`, or `None` on overflow.
    pub fn rank(&self) -> Option<usize> {
        match self {
            GroupSpec::Gamma(k) | GroupSpec::GammaBar(k, _) | GroupSpec::E(k) => {
                1usize.checked_shl(*k).filter(|&v| v != 0 && *k < 32)
            }
            GroupSpec::Wreath(inner, r) => inner
                .rank()?
                .checked_mul(1usize.checked_shl(*r).filter(|_| *r < 32)?),
            GroupSpec::Product(parts) => parts
                .iter()
                .try_fold(0usize, |acc, p| acc.checked_add(p.rank()?)),
        }
    }

    /// The `k` of a `gamma` or `gbar` leaf.
    pub fn leaf_k(&self) -> Option<u32> {
        match self {
            GroupSpec::Gamma(k) | GroupSpec::GammaBar(k, _) => Some(*k),
            _ => None,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Gamma(k) => write!(f, "gamma:{k}"),
            GroupSpec::GammaBar(k, m) => write!(f, "gbar:{k}@{m}"),
            GroupSpec::E(k) => write!(f, "e:{k}"),
            GroupSpec::Wreath(inner, r) => write!(f, "wreath({inner},{r})"),
            GroupSpec::Product(parts) => {
                write!(f, "prod(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(parse_err(self.pos, format!("expected `{token}`")))
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let digits = self.rest().chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return Err(parse_err(self.pos, "expected a number"));
        }
        let start = self.pos;
        self.pos += digits;
        self.src[start..self.pos]
            .parse()
            .map_err(|_| parse_err(start, "number too large"))
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("gamma:") {
            Ok(GroupSpec::Gamma(self.number()?))
        } else if self.eat("gbar:") {
            let k = self.number()?;
            self.expect("@")?;
            Ok(GroupSpec::GammaBar(k, self.number()?))
        } else if self.eat("e:") {
            Ok(GroupSpec::E(self.number()?))
        } else if self.eat("wreath(") {
            let inner = self.spec()?;
            self.expect(",")?;
            let r = self.number()?;
            self.expect(")")?;
            Ok(GroupSpec::Wreath(Box::new(inner), r))
        } else if self.eat("prod(") {
            let mut parts = vec![self.spec()?];
            while self.eat(";") {
                parts.push(self.spec()?);
            }
            self.expect(")")?;
            Ok(GroupSpec::Product(parts))
        } else {
            Err(parse_err(
                start,
                "expected `gamma:`, `gbar:`, `e:`, `wreath(` or `prod(`",
            ))
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(parse_err(p.pos, "trailing input"));
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for text in [
            "gamma:1",
            "gbar:2@3",
            "e:3",
            "wreath(gamma:1,1)",
            "prod(gamma:0;wreath(e:1,2);gbar:0@2)",
        ] {
            let spec: GroupSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        let spec: GroupSpec = " wreath( gamma:1 , 1 ) ".parse().unwrap();
        assert_eq!(spec.rank(), Some(4));
        let spec: GroupSpec = "prod(gamma:2;e:1)".parse().unwrap();
        assert_eq!(spec.rank(), Some(6));
    }

    #[test]
    fn errors_carry_positions() {
        let pos = |s: &str| match s.parse::<GroupSpec>() {
            Err(Error::Parse { pos, .. }) => pos,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(pos("gama:1"), 0);
        assert_eq!(pos("gamma:x"), 6);
        assert_eq!(pos("wreath(gamma:1;1)"), 14);
        assert_eq!(pos("prod(gamma:1;e:2"), 16);
        assert_eq!(pos("gamma:1 junk"), 8);
        assert_eq!(pos("gbar:1"), 6);
    }
}
