//! Exact arithmetic in the Prüfer 2-group `Z[1/2]/Z` and in the discrete
//! torus `(Z/2^∞)^n`, truncated at finite depth where enumeration is needed.
//!
//! Multiplicative torus notation maps to additive angles: `-1 ↔ 1/2`,
//! `i ↔ 1/4`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_rank, parse_err, Error, Result};

/// Largest level an angle may carry; keeps `2^level` inside a `u64`.
pub const MAX_LEVEL: u32 = 62;

/// Default truncation depth for enumerating infinite objects.
pub const DEFAULT_DEPTH: u32 = 4;

/// An element `numerator / 2^level` of `Z[1/2]/Z`, kept canonical:
/// the numerator is odd, or the angle is `0` with level `0`.
///
/// Field order gives the canonical `(level, numerator)` ordering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicAngle {
    level: u32,
    numerator: u64,
}

impl DyadicAngle {
    pub const ZERO: DyadicAngle = DyadicAngle {
        level: 0,
        numerator: 0,
    };
    pub const HALF: DyadicAngle = DyadicAngle {
        level: 1,
        numerator: 1,
    };
    pub const QUARTER: DyadicAngle = DyadicAngle {
        level: 2,
        numerator: 1,
    };

    /// `numerator / 2^level` reduced mod 1. Negative numerators wrap.
    pub fn new(numerator: i64, level: u32) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::BoundExceeded {
                what: "angle level",
                limit: MAX_LEVEL as usize,
                actual: level as usize,
            });
        }
        let modulus = 1i128 << level;
        let n = (numerator as i128).rem_euclid(modulus) as u64;
        Ok(Self::reduce(n, level))
    }

    fn reduce(mut numerator: u64, mut level: u32) -> Self {
        if numerator == 0 {
            return Self::ZERO;
        }
        let tz = numerator.trailing_zeros().min(level);
        numerator >>= tz;
        level -= tz;
        if level == 0 {
            return Self::ZERO;
        }
        DyadicAngle { level, numerator }
    }

    pub fn numerator(self) -> u64 {
        self.numerator
    }

    pub fn level(self) -> u32 {
        self.level
    }

    pub fn is_zero(self) -> bool {
        self.numerator == 0
    }

    /// Additive order, always `2^level`.
    pub fn order(self) -> u64 {
        1u64 << self.level
    }

    /// Numerator over the common denominator `2^level` (which must be at
    /// least this angle's level).
    pub fn numerator_at(self, level: u32) -> u64 {
        debug_assert!(level >= self.level);
        self.numerator << (level - self.level)
    }

    pub fn add(self, other: Self) -> Self {
        let level = self.level.max(other.level);
        let mask = (1u64 << level) - 1;
        let n = (self.numerator_at(level) + other.numerator_at(level)) & mask;
        Self::reduce(n, level)
    }

    pub fn neg(self) -> Self {
        if self.is_zero() {
            return self;
        }
        DyadicAngle {
            level: self.level,
            numerator: (1u64 << self.level) - self.numerator,
        }
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    /// Integer multiple `k·self`.
    pub fn scale(self, k: i64) -> Self {
        if self.is_zero() {
            return self;
        }
        let modulus = 1i128 << self.level;
        let n = ((self.numerator as i128) * (k as i128 % modulus)).rem_euclid(modulus) as u64;
        Self::reduce(n, self.level)
    }

    pub fn double(self) -> Self {
        self.scale(2)
    }

    /// The preimage `self / 2^j` with the same numerator, one of the `2^j`
    /// solutions of `2^j·x = self`.
    pub fn div_pow2(self, j: u32) -> Result<Self> {
        if self.is_zero() {
            return Ok(self);
        }
        Self::new(self.numerator as i64, self.level + j)
    }

    /// All angles of level at most `depth`, in ascending numerator order over
    /// the denominator `2^depth`.
    pub fn all_at_depth(depth: u32) -> impl Iterator<Item = DyadicAngle> {
        (0..(1u64 << depth)).map(move |n| Self::reduce(n, depth))
    }
}

impl fmt::Display for DyadicAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.numerator, 1u64 << self.level)
        }
    }
}

impl FromStr for DyadicAngle {
    type Err = Error;

    /// Accepts `0`, `a/b` with `b` a power of two, and `a/2^m`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some((num, den)) = s.split_once('/') else {
            let n: i64 = s
                .parse()
                .map_err(|_| parse_err(0, format!("bad angle `{s}`")))?;
            return Self::new(n, 0);
        };
        let n: i64 = num
            .trim()
            .parse()
            .map_err(|_| parse_err(0, format!("bad numerator in `{s}`")))?;
        let den = den.trim();
        let level = if let Some(exp) = den.strip_prefix("2^") {
            exp.parse::<u32>()
                .map_err(|_| parse_err(num.len() + 1, format!("bad exponent in `{s}`")))?
        } else {
            let d: u64 = den
                .parse()
                .map_err(|_| parse_err(num.len() + 1, format!("bad denominator in `{s}`")))?;
            if d == 0 || !d.is_power_of_two() {
                return Err(parse_err(
                    num.len() + 1,
                    format!("denominator of `{s}` is not a power of two"),
                ));
            }
            d.trailing_zeros()
        };
        Self::new(n, level)
    }
}

/// A point of the rank-`n` discrete torus. Addition is coordinatewise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusPoint {
    coords: Vec<DyadicAngle>,
}

impl TorusPoint {
    pub fn new(coords: Vec<DyadicAngle>) -> Self {
        TorusPoint { coords }
    }

    pub fn zero(rank: usize) -> Self {
        TorusPoint {
            coords: vec![DyadicAngle::ZERO; rank],
        }
    }

    /// The point with `1/2` (that is, `-1`) at the given coordinates.
    pub fn minus_ones(rank: usize, positions: &[usize]) -> Self {
        let mut p = Self::zero(rank);
        for &i in positions {
            p.coords[i] = DyadicAngle::HALF;
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[DyadicAngle] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn max_level(&self) -> u32 {
        self.coords.iter().map(|c| c.level()).max().unwrap_or(0)
    }

    /// Least `k ≥ 1` with `k·t = 0`.
    pub fn order(&self) -> u64 {
        1u64 << self.max_level()
    }

    pub fn checked_add(&self, other: &TorusPoint) -> Result<TorusPoint> {
        check_rank(self.rank(), other.rank())?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.add(*b))
                .collect(),
        }
    }

    pub fn checked_sub(&self, other: &TorusPoint) -> Result<TorusPoint> {
        check_rank(self.rank(), other.rank())?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn neg(&self) -> TorusPoint {
        TorusPoint {
            coords: self.coords.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> TorusPoint {
        TorusPoint {
            coords: self.coords.iter().map(|c| c.scale(k)).collect(),
        }
    }

    /// Numerators over the common denominator `2^level`.
    pub fn numerators_at(&self, level: u32) -> Vec<u64> {
        self.coords.iter().map(|c| c.numerator_at(level)).collect()
    }

    /// Rebuilds a point from numerators over `2^level`.
    pub fn from_numerators(nums: &[u64], level: u32) -> Result<TorusPoint> {
        let mask = if level == 64 { u64::MAX } else { (1u64 << level) - 1 };
        nums.iter()
            .map(|&n| DyadicAngle::new((n & mask) as i64, level))
            .collect::<Result<Vec<_>>>()
            .map(TorusPoint::new)
    }

    /// Every point of level at most `depth`, in canonical sorted order.
    pub fn all_at_depth(rank: usize, depth: u32) -> Vec<TorusPoint> {
        let per_coord: Vec<DyadicAngle> = {
            let mut v: Vec<_> = DyadicAngle::all_at_depth(depth).collect();
            v.sort();
            v
        };
        let mut out = vec![TorusPoint::zero(0)];
        for _ in 0..rank {
            let mut next = Vec::with_capacity(out.len() * per_coord.len());
            for p in &out {
                for a in &per_coord {
                    let mut c = p.coords.clone();
                    c.push(*a);
                    next.push(TorusPoint::new(c));
                }
            }
            out = next;
        }
        out
    }
}

/// Coordinatewise sum mod 1.
pub fn torus_add(a: &TorusPoint, b: &TorusPoint) -> Result<TorusPoint> {
    a.checked_add(b)
}

/// Least `k ≥ 1` with `k·t = 0`.
pub fn point_order(t: &TorusPoint) -> u64 {
    t.order()
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for TorusPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| parse_err(0, format!("torus point `{t}` must be parenthesised")))?;
        if inner.trim().is_empty() {
            return Ok(TorusPoint::zero(0));
        }
        inner
            .split(',')
            .map(DyadicAngle::from_str)
            .collect::<Result<Vec<_>>>()
            .map(TorusPoint::new)
    }
}

/// A finite subgroup of the discrete torus, stored with its full sorted
/// element list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusSubgroup {
    rank: usize,
    generators: Vec<TorusPoint>,
    elements: Vec<TorusPoint>,
}

impl TorusSubgroup {
    pub fn generated(rank: usize, generators: Vec<TorusPoint>) -> Result<Self> {
        for g in &generators {
            check_rank(rank, g.rank())?;
        }
        let mut seen: BTreeSet<TorusPoint> = BTreeSet::new();
        let zero = TorusPoint::zero(rank);
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        while let Some(p) = frontier.pop() {
            for g in &generators {
                let q = p.add_unchecked(g);
                if seen.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        Ok(TorusSubgroup {
            rank,
            generators,
            elements: seen.into_iter().collect(),
        })
    }

    pub fn trivial(rank: usize) -> Self {
        TorusSubgroup {
            rank,
            generators: Vec::new(),
            elements: vec![TorusPoint::zero(rank)],
        }
    }

    /// The full 2-torsion `(Z/2)^n`, i.e. all `±1` diagonal points.
    pub fn two_torsion(rank: usize) -> Self {
        let gens = (0..rank).map(|i| TorusPoint::minus_ones(rank, &[i])).collect();
        Self::generated(rank, gens).expect("ranks agree")
    }

    /// The elementary abelian subgroup generated by `(-1,-1,1,…)`,
    /// `(1,1,-1,-1,1,…)`, …; rank `⌊n/2⌋`. An odd final coordinate is left
    /// free.
    pub fn paired_minus_ones(rank: usize) -> Self {
        let gens = (0..rank / 2)
            .map(|i| TorusPoint::minus_ones(rank, &[2 * i, 2 * i + 1]))
            .collect();
        Self::generated(rank, gens).expect("ranks agree")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[TorusPoint] {
        &self.generators
    }

    pub fn elements(&self) -> &[TorusPoint] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, t: &TorusPoint) -> bool {
        self.elements.binary_search(t).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &TorusSubgroup) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }
}

/// Full closure of the generators, sorted canonically.
pub fn subgroup_elements(s: &TorusSubgroup) -> Vec<TorusPoint> {
    s.elements.clone()
}
