//! The discrete torus normalizer in `Sp(n)`: monomial matrices whose entries
//! are the units `ζ_θ` and `ζ_θ·j` with dyadic `θ`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_rank, parse_err, Error, Result};
use crate::linalg::{solvable, Mod2k};
use crate::torus::{DyadicAngle, TorusPoint, TorusSubgroup};
use crate::weyl::{is_reflection, SignedPerm, WeylSubgroup};

/// `ζ_θ` or `ζ_θ·j`, where `ζ_θ = exp(2πiθ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnitCoef {
    pub angle: DyadicAngle,
    pub j: bool,
}

impl UnitCoef {
    pub const ONE: UnitCoef = UnitCoef {
        angle: DyadicAngle::ZERO,
        j: false,
    };
    pub const MINUS_ONE: UnitCoef = UnitCoef {
        angle: DyadicAngle::HALF,
        j: false,
    };
    pub const I: UnitCoef = UnitCoef {
        angle: DyadicAngle::QUARTER,
        j: false,
    };
    pub const J: UnitCoef = UnitCoef {
        angle: DyadicAngle::ZERO,
        j: true,
    };
    pub const K: UnitCoef = UnitCoef {
        angle: DyadicAngle::QUARTER,
        j: true,
    };

    pub fn zeta(angle: DyadicAngle) -> Self {
        UnitCoef { angle, j: false }
    }

    pub fn zeta_j(angle: DyadicAngle) -> Self {
        UnitCoef { angle, j: true }
    }

    pub fn mul(self, other: UnitCoef) -> UnitCoef {
        match (self.j, other.j) {
            (false, _) => UnitCoef {
                angle: self.angle.add(other.angle),
                j: other.j,
            },
            (true, false) => UnitCoef {
                angle: self.angle.sub(other.angle),
                j: true,
            },
            (true, true) => UnitCoef {
                angle: self.angle.sub(other.angle).add(DyadicAngle::HALF),
                j: false,
            },
        }
    }

    pub fn inverse(self) -> UnitCoef {
        if self.j {
            UnitCoef {
                angle: self.angle.add(DyadicAngle::HALF),
                j: true,
            }
        } else {
            UnitCoef {
                angle: self.angle.neg(),
                j: false,
            }
        }
    }

    pub fn is_one(self) -> bool {
        !self.j && self.angle.is_zero()
    }

    /// Units with integer quaternion coordinates: exactly `Q(8)`.
    pub fn is_lipschitz(self) -> bool {
        self.angle.level() <= 2
    }

    /// Coordinates `(a, b, c, d)` of `a + bi + cj + dk`, for Lipschitz units.
    pub fn quaternion(self) -> Option<[i64; 4]> {
        if !self.is_lipschitz() {
            return None;
        }
        let (cos, sin) = match self.angle.numerator_at(2) {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        Some(if self.j {
            [0, 0, cos, sin]
        } else {
            [cos, sin, 0, 0]
        })
    }

    /// The eight Lipschitz units.
    pub fn q8() -> Vec<UnitCoef> {
        let mut out = Vec::new();
        for k in 0..4 {
            let a = DyadicAngle::new(k, 2).expect("valid angle");
            out.push(UnitCoef::zeta(a));
            out.push(UnitCoef::zeta_j(a));
        }
        out.sort();
        out
    }
}

impl fmt::Display for UnitCoef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z({})", self.angle)?;
        if self.j {
            write!(f, "j")?;
        }
        Ok(())
    }
}

impl FromStr for UnitCoef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, j) = match s.strip_suffix('j') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let inner = body
            .strip_prefix("z(")
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| parse_err(0, format!("expected `z(θ)` or `z(θ)j`, got `{s}`")))?;
        Ok(UnitCoef {
            angle: inner.parse()?,
            j,
        })
    }
}

/// A monomial matrix over the dyadic units: column `c` carries `coefs[c]`
/// in row `perm[c]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonomialMatrix {
    perm: Vec<u8>,
    coefs: Vec<UnitCoef>,
}

impl MonomialMatrix {
    pub fn identity(n: usize) -> Self {
        Self::diagonal(vec![UnitCoef::ONE; n])
    }

    pub fn diagonal(coefs: Vec<UnitCoef>) -> Self {
        MonomialMatrix {
            perm: (0..coefs.len() as u8).collect(),
            coefs,
        }
    }

    /// Scalar matrix `u·I`.
    pub fn scalar(n: usize, u: UnitCoef) -> Self {
        Self::diagonal(vec![u; n])
    }

    pub fn from_parts(perm: &[usize], coefs: Vec<UnitCoef>) -> Result<Self> {
        check_rank(perm.len(), coefs.len())?;
        // Validates the permutation.
        SignedPerm::from_parts(perm, &vec![false; perm.len()])?;
        Ok(MonomialMatrix {
            perm: perm.iter().map(|&p| p as u8).collect(),
            coefs,
        })
    }

    pub fn permutation(perm: &[usize]) -> Result<Self> {
        Self::from_parts(perm, vec![UnitCoef::ONE; perm.len()])
    }

    /// The torus element `diag(ζ_{t_1}, …, ζ_{t_n})`.
    pub fn torus(t: &TorusPoint) -> Self {
        Self::diagonal(t.coords().iter().map(|&a| UnitCoef::zeta(a)).collect())
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> Vec<usize> {
        self.perm.iter().map(|&p| p as usize).collect()
    }

    pub fn coefs(&self) -> &[UnitCoef] {
        &self.coefs
    }

    /// `(row, coefficient)` of column `c`.
    pub fn column(&self, c: usize) -> (usize, UnitCoef) {
        (self.perm[c] as usize, self.coefs[c])
    }

    pub fn mul(&self, other: &MonomialMatrix) -> Result<MonomialMatrix> {
        check_rank(self.rank(), other.rank())?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &MonomialMatrix) -> MonomialMatrix {
        let n = self.rank();
        let mut perm = Vec::with_capacity(n);
        let mut coefs = Vec::with_capacity(n);
        for c in 0..n {
            let k = other.perm[c] as usize;
            perm.push(self.perm[k]);
            coefs.push(self.coefs[k].mul(other.coefs[c]));
        }
        MonomialMatrix { perm, coefs }
    }

    pub fn inverse(&self) -> MonomialMatrix {
        let n = self.rank();
        let mut perm = vec![0u8; n];
        let mut coefs = vec![UnitCoef::ONE; n];
        for c in 0..n {
            let r = self.perm[c] as usize;
            perm[r] = c as u8;
            coefs[r] = self.coefs[c].inverse();
        }
        MonomialMatrix { perm, coefs }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p as usize == i)
            && self.coefs.iter().all(|c| c.is_one())
    }

    pub fn pow(&self, mut k: u64) -> MonomialMatrix {
        let mut acc = MonomialMatrix::identity(self.rank());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative order. Entries stay at level at most one more than
    /// the input's, so the order is finite and bounded by `2n·2^{level+1}`.
    pub fn order(&self) -> u64 {
        let mut k = 1;
        let mut acc = self.clone();
        while !acc.is_identity() {
            acc = acc.mul_unchecked(self);
            k += 1;
        }
        k
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p as usize == i)
    }

    /// The torus point, if this is a diagonal matrix without `j`.
    pub fn torus_part(&self) -> Option<TorusPoint> {
        if self.is_diagonal() && self.coefs.iter().all(|c| !c.j) {
            Some(TorusPoint::new(self.coefs.iter().map(|c| c.angle).collect()))
        } else {
            None
        }
    }

    pub fn is_lipschitz(&self) -> bool {
        self.coefs.iter().all(|c| c.is_lipschitz())
    }

    pub fn max_level(&self) -> u32 {
        self.coefs.iter().map(|c| c.angle.level()).max().unwrap_or(0)
    }

    /// Block sum `self ⊕ other`.
    pub fn block_sum(&self, other: &MonomialMatrix) -> MonomialMatrix {
        let shift = self.rank() as u8;
        let mut perm = self.perm.clone();
        perm.extend(other.perm.iter().map(|&p| p + shift));
        let mut coefs = self.coefs.clone();
        coefs.extend_from_slice(&other.coefs);
        MonomialMatrix { perm, coefs }
    }
}

/// Matrix product.
pub fn mono_mul(a: &MonomialMatrix, b: &MonomialMatrix) -> Result<MonomialMatrix> {
    a.mul(b)
}

/// The image in `W(Sp(n))`; row `i` is negated when its entry carries `j`.
pub fn weyl_image(m: &MonomialMatrix) -> SignedPerm {
    let mut signs = 0u32;
    for (c, &r) in m.perm.iter().enumerate() {
        if m.coefs[c].j {
            signs |= 1 << r;
        }
    }
    SignedPerm::from_raw(m.perm.clone(), signs)
}

/// The lift of `w` with entries `ζ_0`, carrying `j` in the negated rows.
pub fn base_lift(w: &SignedPerm) -> MonomialMatrix {
    let n = w.rank();
    let perm: Vec<u8> = (0..n).map(|c| w.image(c) as u8).collect();
    let coefs = perm
        .iter()
        .map(|&r| {
            if w.is_negated(r as usize) {
                UnitCoef::J
            } else {
                UnitCoef::ONE
            }
        })
        .collect();
    MonomialMatrix { perm, coefs }
}

/// Largest lift enumeration served, in matrices.
pub const MAX_LIFTS: usize = 1 << 20;

/// All `2^{mn}` lifts `base·t`, `t` of level at most `depth`, in the order
/// of the sorted torus points.
pub fn lifts(w: &SignedPerm, depth: u32) -> Result<Vec<MonomialMatrix>> {
    let n = w.rank();
    let bits = depth as usize * n;
    if bits > MAX_LIFTS.trailing_zeros() as usize {
        return Err(Error::BoundExceeded {
            what: "lift count (log2)",
            limit: MAX_LIFTS.trailing_zeros() as usize,
            actual: bits,
        });
    }
    let base = base_lift(w);
    Ok(TorusPoint::all_at_depth(n, depth)
        .iter()
        .map(|t| base.mul_unchecked(&MonomialMatrix::torus(t)))
        .collect())
}

impl fmt::Display for MonomialMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in 0..self.rank() {
            if c > 0 {
                write!(f, " ")?;
            }
            write!(f, "{},{}:{}", self.perm[c] + 1, c + 1, self.coefs[c])?;
        }
        Ok(())
    }
}

impl FromStr for MonomialMatrix {
    type Err = Error;

    /// Whitespace-separated `row,col:coef` entries, one per column.
    fn from_str(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut pos = 0;
        for token in s.split_whitespace() {
            let at = s[pos..].find(token).map_or(pos, |k| pos + k);
            pos = at + token.len();
            let (rc, coef) = token
                .split_once(':')
                .ok_or_else(|| parse_err(at, "expected `row,col:coef`"))?;
            let (r, c) = rc
                .split_once(',')
                .ok_or_else(|| parse_err(at, "expected `row,col`"))?;
            let r: usize = r.parse().map_err(|_| parse_err(at, "bad row"))?;
            let c: usize = c.parse().map_err(|_| parse_err(at, "bad column"))?;
            let coef: UnitCoef = coef.parse().map_err(|e| match e {
                Error::Parse { msg, .. } => parse_err(at, msg),
                other => other,
            })?;
            entries.push((at, r, c, coef));
        }
        let n = entries.len();
        let mut perm = vec![usize::MAX; n];
        let mut coefs = vec![UnitCoef::ONE; n];
        for (at, r, c, coef) in entries {
            if r == 0 || c == 0 || r > n || c > n {
                return Err(parse_err(at, format!("index out of range 1..={n}")));
            }
            if perm[c - 1] != usize::MAX {
                return Err(parse_err(at, format!("column {c} repeated")));
            }
            perm[c - 1] = r - 1;
            coefs[c - 1] = coef;
        }
        MonomialMatrix::from_parts(&perm, coefs)
    }
}

/// Which of the four singular sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SingularKind {
    Fixed,
    Hyperplane,
    Coset,
    Union,
}

impl SingularKind {
    pub const ALL: [SingularKind; 4] = [
        SingularKind::Fixed,
        SingularKind::Hyperplane,
        SingularKind::Coset,
        SingularKind::Union,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            SingularKind::Fixed => "F",
            SingularKind::Hyperplane => "H",
            SingularKind::Coset => "K",
            SingularKind::Union => "sigma",
        }
    }
}

pub const DEFAULT_J_TEST: u32 = 2;

/// Membership tests for `F(s)`, `H(s)`, `K(s)` and `σ(s)` of a reflection,
/// restricted to points of level at most `depth`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SingularSets {
    s: SignedPerm,
    depth: u32,
    j_test: u32,
    kappa0: TorusPoint,
}

/// Integer matrix of `w - I` (with `sign = -1`) or `w + I` (`sign = 1`).
fn shifted_matrix(w: &SignedPerm, sign: i64) -> Vec<Vec<i64>> {
    let mut m = w.matrix();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] += sign;
    }
    m
}

fn reduce_matrix(ring: Mod2k, m: &[Vec<i64>], scale: i64) -> Vec<Vec<u64>> {
    m.iter()
        .map(|row| row.iter().map(|&x| ring.reduce_i64(x * scale)).collect())
        .collect()
}

impl SingularSets {
    pub fn new(s: &SignedPerm, depth: u32) -> Result<Self> {
        Self::with_j_test(s, depth, DEFAULT_J_TEST)
    }

    pub fn with_j_test(s: &SignedPerm, depth: u32, j_test: u32) -> Result<Self> {
        if !is_reflection(s) {
            return Err(Error::NotAReflection(s.to_string()));
        }
        if depth == 0 || depth + j_test >= crate::torus::MAX_LEVEL {
            return Err(Error::InvalidParameter(format!(
                "depth {depth} with {j_test} test levels is out of range"
            )));
        }
        let b = base_lift(s);
        let kappa0 = b
            .mul_unchecked(&b)
            .torus_part()
            .expect("a reflection squares into the torus");
        Ok(SingularSets {
            s: s.clone(),
            depth,
            j_test,
            kappa0,
        })
    }

    pub fn reflection(&self) -> &SignedPerm {
        &self.s
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Square of the base lift; `K(s)` is its coset modulo `im(1+s)`.
    pub fn kappa0(&self) -> &TorusPoint {
        &self.kappa0
    }

    fn in_range(&self, t: &TorusPoint) -> bool {
        t.rank() == self.s.rank() && t.max_level() <= self.depth
    }

    pub fn in_fixed(&self, t: &TorusPoint) -> bool {
        self.in_range(t) && &self.s.act_unchecked(t) == t
    }

    /// `t = 2^J u` for some `u` fixed by `s`. Taking `u_0 = t / 2^J`, the
    /// candidates are `u_0 + T[2^J]`, so the test is whether `(s-1)u_0`
    /// lies in `(s-1)T[2^J]`.
    pub fn in_hyperplane(&self, t: &TorusPoint) -> bool {
        if !self.in_fixed(t) {
            return false;
        }
        let j = self.j_test;
        let level = t.max_level();
        let u0 = TorusPoint::new(
            t.coords()
                .iter()
                .map(|a| a.div_pow2(j).expect("level checked at construction"))
                .collect(),
        );
        let d = self.s.act_unchecked(&u0).checked_sub(&u0).expect("same rank");
        let ring = Mod2k::new(level + j).expect("level in range");
        let a = reduce_matrix(ring, &shifted_matrix(&self.s, -1), 1 << level);
        let b: Vec<u64> = d.numerators_at(level + j);
        solvable(ring, &a, self.s.rank(), &b)
    }

    /// `t ∈ κ_0 + (1+s)T`. Solvability modulo `2^{L+J}` for `L` the level of
    /// `t - κ_0` is exact because the elementary divisors of `1+s` for a
    /// reflection are at most 2.
    pub fn in_coset(&self, t: &TorusPoint) -> bool {
        if !self.in_range(t) {
            return false;
        }
        let d = t.checked_sub(&self.kappa0).expect("same rank");
        let level = d.max_level() + self.j_test;
        let ring = Mod2k::new(level.max(1)).expect("level in range");
        let a = reduce_matrix(ring, &shifted_matrix(&self.s, 1), 1);
        solvable(ring, &a, self.s.rank(), &d.numerators_at(level.max(1)))
    }

    pub fn in_union(&self, t: &TorusPoint) -> bool {
        self.in_hyperplane(t) || self.in_coset(t)
    }

    pub fn contains(&self, kind: SingularKind, t: &TorusPoint) -> bool {
        match kind {
            SingularKind::Fixed => self.in_fixed(t),
            SingularKind::Hyperplane => self.in_hyperplane(t),
            SingularKind::Coset => self.in_coset(t),
            SingularKind::Union => self.in_union(t),
        }
    }

    pub fn contains_all(&self, kind: SingularKind, a: &TorusSubgroup) -> bool {
        a.elements().iter().all(|t| self.contains(kind, t))
    }

    /// Every member of level at most `depth`, sorted.
    pub fn members(&self, kind: SingularKind) -> Result<Vec<TorusPoint>> {
        let bits = self.depth as usize * self.s.rank();
        if bits > 20 {
            return Err(Error::BoundExceeded {
                what: "singular-set enumeration (log2 points)",
                limit: 20,
                actual: bits,
            });
        }
        Ok(TorusPoint::all_at_depth(self.s.rank(), self.depth)
            .into_iter()
            .filter(|t| self.contains(kind, t))
            .collect())
    }
}

/// Membership predicates of the singular sets of `s` at `depth`.
pub fn singular_sets(s: &SignedPerm, depth: u32) -> Result<SingularSets> {
    SingularSets::new(s, depth)
}

/// Default bound on the order of a subgroup handed to [`split_check`].
pub const DEFAULT_SPLIT_BOUND: usize = 16;

/// Why no complement exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitObstruction {
    /// No lift of `element` has the element's order; `powers` lists
    /// `x^{ord}` over all lifts `x`.
    Element {
        element: SignedPerm,
        order: usize,
        powers: Vec<TorusPoint>,
    },
    /// Every element has well-ordered lifts, but no choice of generator
    /// lifts closes up to a group of the right order.
    Exhaustive { combinations: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitVerdict {
    /// Lifts of the generators spanning a complement, and its elements.
    Split {
        generator_lifts: Vec<MonomialMatrix>,
        complement: Vec<MonomialMatrix>,
    },
    NonSplit(SplitObstruction),
}

impl SplitVerdict {
    pub fn is_split(&self) -> bool {
        matches!(self, SplitVerdict::Split { .. })
    }
}

/// Bound on the generator-lift combinations tried.
const MAX_SPLIT_COMBINATIONS: u64 = 1 << 22;

/// Closure of `gens`, giving up once it exceeds `limit` elements.
fn bounded_closure(n: usize, gens: &[MonomialMatrix], limit: usize) -> Option<Vec<MonomialMatrix>> {
    let mut seen: HashSet<MonomialMatrix> = HashSet::from([MonomialMatrix::identity(n)]);
    let mut frontier = vec![MonomialMatrix::identity(n)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul_unchecked(g);
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return None;
                }
                frontier.push(y);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    Some(out)
}

/// Whether `Ň(T) → W` splits over `wsub` using lifts of level at most
/// `depth`.
pub fn split_check(wsub: &WeylSubgroup, depth: u32) -> Result<SplitVerdict> {
    split_check_bounded(wsub, depth, DEFAULT_SPLIT_BOUND)
}

pub fn split_check_bounded(wsub: &WeylSubgroup, depth: u32, bound: usize) -> Result<SplitVerdict> {
    if wsub.order() > bound {
        return Err(Error::BoundExceeded {
            what: "split_check subgroup order",
            limit: bound,
            actual: wsub.order(),
        });
    }
    let n = wsub.rank();
    for w in wsub.elements() {
        let ord = w.order();
        let all = lifts(w, depth)?;
        if !all.iter().any(|x| x.pow(ord as u64).is_identity()) {
            let mut powers: Vec<TorusPoint> = all
                .iter()
                .map(|x| {
                    x.pow(ord as u64)
                        .torus_part()
                        .expect("w^ord = 1 so x^ord lies in the torus")
                })
                .collect();
            powers.sort();
            powers.dedup();
            return Ok(SplitVerdict::NonSplit(SplitObstruction::Element {
                element: w.clone(),
                order: ord,
                powers,
            }));
        }
    }
    let gens = wsub.generators();
    let candidates: Vec<Vec<MonomialMatrix>> = gens
        .iter()
        .map(|g| {
            let ord = g.order() as u64;
            Ok(lifts(g, depth)?
                .into_iter()
                .filter(|x| x.pow(ord).is_identity())
                .collect())
        })
        .collect::<Result<_>>()?;
    let total = candidates
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .filter(|&t| t <= MAX_SPLIT_COMBINATIONS)
        .ok_or(Error::BoundExceeded {
            what: "split_check lift combinations",
            limit: MAX_SPLIT_COMBINATIONS as usize,
            actual: usize::MAX,
        })?;
    let mut index = vec![0usize; gens.len()];
    let mut tried = 0u64;
    loop {
        tried += 1;
        let chosen: Vec<MonomialMatrix> = index
            .iter()
            .zip(&candidates)
            .map(|(&i, c)| c[i].clone())
            .collect();
        if let Some(group) = bounded_closure(n, &chosen, wsub.order()) {
            if group.len() == wsub.order() {
                return Ok(SplitVerdict::Split {
                    generator_lifts: chosen,
                    complement: group,
                });
            }
        }
        // Odometer step.
        let mut k = 0;
        loop {
            if k == index.len() {
                debug_assert_eq!(tried, total);
                return Ok(SplitVerdict::NonSplit(SplitObstruction::Exhaustive {
                    combinations: tried,
                }));
            }
            index[k] += 1;
            if index[k] < candidates[k].len() {
                break;
            }
            index[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> TorusPoint {
        s.parse().unwrap()
    }

    fn ang(a: i64, l: u32) -> DyadicAngle {
        DyadicAngle::new(a, l).unwrap()
    }

    /// Hamilton product on coordinates, for checking the unit law.
    fn hamilton(p: [i64; 4], q: [i64; 4]) -> [i64; 4] {
        let [a1, b1, c1, d1] = p;
        let [a2, b2, c2, d2] = q;
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ]
    }

    #[test]
    fn unit_law_matches_hamilton_product_on_q8() {
        let q8 = UnitCoef::q8();
        assert_eq!(q8.len(), 8);
        for &x in &q8 {
            for &y in &q8 {
                let xy = x.mul(y);
                assert!(q8.contains(&xy));
                assert_eq!(
                    xy.quaternion().unwrap(),
                    hamilton(x.quaternion().unwrap(), y.quaternion().unwrap())
                );
                for &z in &q8 {
                    assert_eq!(xy.mul(z), x.mul(y.mul(z)));
                }
            }
        }
        let (i, j, k) = (UnitCoef::I, UnitCoef::J, UnitCoef::K);
        for u in [i, j, k] {
            assert_eq!(u.mul(u), UnitCoef::MINUS_ONE);
        }
        assert_eq!(i.mul(j), k);
    }

    #[test]
    fn j_units_square_to_minus_one() {
        for a in DyadicAngle::all_at_depth(5) {
            let u = UnitCoef::zeta_j(a);
            assert_eq!(u.mul(u), UnitCoef::MINUS_ONE);
            assert!(u.mul(u.inverse()).is_one());
        }
    }

    #[test]
    fn product_examples() {
        let swap = MonomialMatrix::permutation(&[1, 0]).unwrap();
        assert!(swap.mul(&swap).unwrap().is_identity());
        let dj = MonomialMatrix::diagonal(vec![UnitCoef::J]);
        assert_eq!(
            dj.mul(&dj).unwrap(),
            MonomialMatrix::diagonal(vec![UnitCoef::MINUS_ONE])
        );
        let tw = MonomialMatrix::from_parts(
            &[1, 0],
            vec![UnitCoef::zeta(ang(1, 3)), UnitCoef::zeta(ang(-1, 3))],
        )
        .unwrap();
        assert!(tw.mul(&tw).unwrap().is_identity());
        assert!(swap.mul(&MonomialMatrix::identity(3)).is_err());
    }

    #[test]
    fn weyl_image_examples() {
        let t = MonomialMatrix::torus(&pt("(1/4, 1/8)"));
        assert!(weyl_image(&t).is_identity());
        let d = MonomialMatrix::diagonal(vec![UnitCoef::J, UnitCoef::ONE]);
        assert_eq!(weyl_image(&d), SignedPerm::sign_flip(2, 0));
        let swap = MonomialMatrix::permutation(&[1, 0]).unwrap();
        assert_eq!(weyl_image(&swap), SignedPerm::transposition(2, 0, 1));
    }

    #[test]
    fn lift_examples() {
        let l = lifts(&SignedPerm::identity(1), 1).unwrap();
        assert_eq!(
            l,
            vec![
                MonomialMatrix::diagonal(vec![UnitCoef::ONE]),
                MonomialMatrix::diagonal(vec![UnitCoef::MINUS_ONE])
            ]
        );
        for m in 1..=4 {
            for x in lifts(&SignedPerm::sign_flip(1, 0), m).unwrap() {
                assert_eq!(x.mul(&x).unwrap(), MonomialMatrix::diagonal(vec![UnitCoef::MINUS_ONE]));
            }
        }
        let l = lifts(&SignedPerm::transposition(2, 0, 1), 1).unwrap();
        assert_eq!(l.len(), 4);
        assert!(l.iter().all(|x| weyl_image(x) == SignedPerm::transposition(2, 0, 1)));
    }

    #[test]
    fn text_round_trip() {
        let m: MonomialMatrix = "2,1:z(1/8) 1,2:z(0)j".parse().unwrap();
        assert_eq!(m.to_string(), "2,1:z(1/8) 1,2:z(0)j");
        assert_eq!(m.column(0), (1, UnitCoef::zeta(ang(1, 3))));
        assert!("1,1:z(0) 1,2:z(0)".parse::<MonomialMatrix>().is_err());
        match "1,1:q".parse::<MonomialMatrix>() {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 0),
            other => panic!("{other:?}"),
        }
    }

    /// Oracle for `H(s)`: search `u` of level up to `level + j` with
    /// `2^j u = t` and `s u = u`.
    fn hyperplane_oracle(s: &SignedPerm, t: &TorusPoint, j: u32) -> bool {
        let level = t.max_level() + j;
        TorusPoint::all_at_depth(s.rank(), level)
            .iter()
            .any(|u| &s.act_unchecked(u) == u && u.scale(1 << j) == *t)
    }

    /// Oracle for `K(s)` at depth `m`: squares of every lift at depth
    /// `m + 1`, kept when of level at most `m`.
    fn coset_oracle(s: &SignedPerm, m: u32) -> Vec<TorusPoint> {
        let mut out: Vec<TorusPoint> = lifts(s, m + 1)
            .unwrap()
            .iter()
            .map(|x| x.mul(x).unwrap().torus_part().unwrap())
            .filter(|t| t.max_level() <= m)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn singular_set_examples() {
        let plain = SignedPerm::transposition(2, 0, 1);
        let twisted = SignedPerm::twisted_transposition(2, 0, 1);
        for m in [2, 3] {
            let ss = singular_sets(&plain, m).unwrap();
            let f = ss.members(SingularKind::Fixed).unwrap();
            assert!(f.iter().all(|t| t.coords()[0] == t.coords()[1]));
            assert_eq!(f.len(), 1 << m);
            assert_eq!(ss.members(SingularKind::Hyperplane).unwrap(), f);
            assert_eq!(ss.members(SingularKind::Union).unwrap(), f);

            let ss = singular_sets(&twisted, m).unwrap();
            let f = ss.members(SingularKind::Fixed).unwrap();
            assert!(f.iter().all(|t| t.coords()[0] == t.coords()[1].neg()));
            assert_eq!(ss.members(SingularKind::Hyperplane).unwrap(), f);
            assert_eq!(ss.members(SingularKind::Union).unwrap(), f);
        }
        let flip = SignedPerm::sign_flip(1, 0);
        let ss = singular_sets(&flip, 3).unwrap();
        assert_eq!(ss.members(SingularKind::Fixed).unwrap(), vec![pt("(0)"), pt("(1/2)")]);
        assert_eq!(ss.members(SingularKind::Hyperplane).unwrap(), vec![pt("(0)")]);
        assert_eq!(ss.members(SingularKind::Coset).unwrap(), vec![pt("(1/2)")]);
        assert_eq!(ss.members(SingularKind::Union).unwrap(), vec![pt("(0)"), pt("(1/2)")]);
        assert!(singular_sets(&SignedPerm::identity(2), 3).is_err());
    }

    #[test]
    fn singular_sets_match_oracles() {
        for n in 1..=3 {
            let m = if n == 3 { 2 } else { 3 };
            for s in crate::weyl::reflections(n) {
                let ss = singular_sets(&s, m).unwrap();
                assert_eq!(ss.members(SingularKind::Coset).unwrap(), coset_oracle(&s, m), "{s}");
                for t in TorusPoint::all_at_depth(n, m) {
                    assert_eq!(
                        ss.in_hyperplane(&t),
                        ss.in_fixed(&t) && hyperplane_oracle(&s, &t, DEFAULT_J_TEST),
                        "{s} {t}"
                    );
                }
            }
        }
    }

    #[test]
    fn singular_sets_are_depth_stable() {
        for n in 1..=3 {
            for s in crate::weyl::reflections(n) {
                for m in 1..=2 {
                    let lo = singular_sets(&s, m).unwrap();
                    let hi = singular_sets(&s, m + 1).unwrap();
                    for t in TorusPoint::all_at_depth(n, m) {
                        for kind in SingularKind::ALL {
                            assert_eq!(lo.contains(kind, &t), hi.contains(kind, &t));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn coset_is_independent_of_base_lift() {
        // Any lift x = base·t gives x^2 = κ0 + (1+s)t, which must lie in the
        // same coset.
        for s in crate::weyl::reflections(3) {
            let ss = singular_sets(&s, 3).unwrap();
            for t in ["(1/8, 1/4, 1/2)", "(3/8, 0, 1/8)", "(1/2, 1/2, 1/4)"] {
                let x = base_lift(&s).mul(&MonomialMatrix::torus(&pt(t))).unwrap();
                let k = x.mul(&x).unwrap().torus_part().unwrap();
                assert!(ss.in_coset(&k));
            }
        }
    }

    #[test]
    fn split_examples() {
        let w = WeylSubgroup::generated(2, vec![SignedPerm::transposition(2, 0, 1)]).unwrap();
        match split_check(&w, 3).unwrap() {
            SplitVerdict::Split { complement, .. } => {
                assert_eq!(complement.len(), 2);
                assert!(complement.contains(&MonomialMatrix::permutation(&[1, 0]).unwrap()));
            }
            other => panic!("{other:?}"),
        }
        assert!(split_check(&WeylSubgroup::trivial(2), 3).unwrap().is_split());

        let m = WeylSubgroup::generated(
            2,
            vec![
                SignedPerm::transposition(2, 0, 1),
                SignedPerm::twisted_transposition(2, 0, 1),
            ],
        )
        .unwrap();
        assert_eq!(m.order(), 4);
        match split_check(&m, 3).unwrap() {
            SplitVerdict::NonSplit(SplitObstruction::Element { element, powers, .. }) => {
                assert_eq!(element, SignedPerm::signs_only(2, &[0, 1]));
                assert_eq!(powers, vec![pt("(1/2, 1/2)")]);
            }
            other => panic!("{other:?}"),
        }
        assert!(split_check(&WeylSubgroup::full(3), 3).is_err());
    }
}
