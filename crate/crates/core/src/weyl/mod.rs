//! The Weyl group `W(Sp(n)) = (Z/2)^n ⋊ Σ_n` as signed permutations, its
//! action on the discrete torus and the subgroup machinery built on it.

mod quillen;

pub use quillen::{
    quillen_morphism_count, quillen_objects, quillen_oracle_class_count, QuillenClass,
    QuillenObjects, MAX_QUILLEN_RANK,
};

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_rank, parse_err, Error, Result};
use crate::torus::{TorusPoint, TorusSubgroup};

/// A signed permutation of `{1..n}`: permute coordinates, then negate the
/// coordinates whose sign bit is set.
///
/// `(w·t)_i = ±t_{π⁻¹(i)}` with the sign taken from bit `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedPerm {
    perm: Vec<u8>,
    signs: u32,
}

impl SignedPerm {
    pub const MAX_RANK: usize = 16;

    pub fn identity(n: usize) -> Self {
        SignedPerm {
            perm: (0..n as u8).collect(),
            signs: 0,
        }
    }

    /// `perm[j]` is the (0-based) image of `j`; `negated[i]` flips the sign
    /// of output coordinate `i`.
    pub fn from_parts(perm: &[usize], negated: &[bool]) -> Result<Self> {
        let n = perm.len();
        check_rank(n, negated.len())?;
        if n > Self::MAX_RANK {
            return Err(Error::BoundExceeded {
                what: "signed permutation rank",
                limit: Self::MAX_RANK,
                actual: n,
            });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidParameter(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            seen[p] = true;
        }
        let signs = negated
            .iter()
            .enumerate()
            .fold(0u32, |m, (i, &b)| if b { m | 1 << i } else { m });
        Ok(SignedPerm {
            perm: perm.iter().map(|&p| p as u8).collect(),
            signs,
        })
    }

    pub(crate) fn from_raw(perm: Vec<u8>, signs: u32) -> Self {
        SignedPerm { perm, signs }
    }

    /// Negation of coordinate `i`.
    pub fn sign_flip(n: usize, i: usize) -> Self {
        SignedPerm {
            perm: (0..n as u8).collect(),
            signs: 1 << i,
        }
    }

    /// `τ_{i,j}` with no signs.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut perm: Vec<u8> = (0..n as u8).collect();
        perm.swap(i, j);
        SignedPerm { perm, signs: 0 }
    }

    /// `τ_{i,j}` followed by negating both coordinates `i` and `j`.
    pub fn twisted_transposition(n: usize, i: usize, j: usize) -> Self {
        let mut w = Self::transposition(n, i, j);
        w.signs = (1 << i) | (1 << j);
        w
    }

    /// Sign vector only, identity permutation.
    pub fn signs_only(n: usize, negated: &[usize]) -> Self {
        SignedPerm {
            perm: (0..n as u8).collect(),
            signs: negated.iter().fold(0, |m, &i| m | 1 << i),
        }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn image(&self, j: usize) -> usize {
        self.perm[j] as usize
    }

    pub fn perm(&self) -> Vec<usize> {
        self.perm.iter().map(|&p| p as usize).collect()
    }

    pub fn is_negated(&self, i: usize) -> bool {
        self.signs >> i & 1 == 1
    }

    pub fn sign_mask(&self) -> u32 {
        self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.signs == 0 && self.perm.iter().enumerate().all(|(i, &p)| p as usize == i)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SignedPerm) -> Result<SignedPerm> {
        check_rank(self.rank(), other.rank())?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &SignedPerm) -> SignedPerm {
        let perm: Vec<u8> = other.perm.iter().map(|&j| self.perm[j as usize]).collect();
        let mut moved = 0u32;
        for (j, &pj) in self.perm.iter().enumerate() {
            if other.signs >> j & 1 == 1 {
                moved |= 1 << pj;
            }
        }
        SignedPerm {
            perm,
            signs: self.signs ^ moved,
        }
    }

    pub fn inverse(&self) -> SignedPerm {
        let n = self.rank();
        let mut perm = vec![0u8; n];
        let mut signs = 0u32;
        for (j, &pj) in self.perm.iter().enumerate() {
            perm[pj as usize] = j as u8;
            if self.signs >> pj & 1 == 1 {
                signs |= 1 << j;
            }
        }
        SignedPerm { perm, signs }
    }

    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut acc = self.clone();
        while !acc.is_identity() {
            acc = acc.compose_unchecked(self);
            k += 1;
        }
        k
    }

    /// Cycles of the underlying permutation (0-based, each starting at its
    /// least element) with the product of the signs met along the cycle.
    pub fn signed_cycles(&self) -> Vec<(Vec<usize>, bool)> {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut negative = false;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j);
                j = self.perm[j] as usize;
                negative ^= self.is_negated(j);
            }
            out.push((cycle, negative));
        }
        out
    }

    /// Dimension of the rational fixed subspace: the number of cycles whose
    /// sign product is `+1`.
    pub fn fixed_dimension(&self) -> usize {
        self.signed_cycles().iter().filter(|(_, neg)| !neg).count()
    }

    pub fn is_even_permutation(&self) -> bool {
        self.signed_cycles()
            .iter()
            .filter(|(c, _)| c.len() % 2 == 0)
            .count()
            % 2
            == 0
    }

    /// The signed permutation matrix: column `j` is `±e_{π(j)}`.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut m = vec![vec![0i64; n]; n];
        for j in 0..n {
            let i = self.image(j);
            m[i][j] = if self.is_negated(i) { -1 } else { 1 };
        }
        m
    }

    pub(crate) fn act_unchecked(&self, t: &TorusPoint) -> TorusPoint {
        let src = t.coords();
        let mut out = src.to_vec();
        for (j, &i) in self.perm.iter().enumerate() {
            let c = src[j];
            out[i as usize] = if self.is_negated(i as usize) { c.neg() } else { c };
        }
        TorusPoint::new(out)
    }
}

/// Permute-then-sign action on the discrete torus.
pub fn act(w: &SignedPerm, t: &TorusPoint) -> Result<TorusPoint> {
    check_rank(w.rank(), t.rank())?;
    Ok(w.act_unchecked(t))
}

/// Whether `w` is a reflection: fixed subspace of codimension one.
pub fn is_reflection(w: &SignedPerm) -> bool {
    w.rank() > 0 && w.fixed_dimension() + 1 == w.rank()
}

/// All `n²` reflections of `W(Sp(n))`, sorted.
pub fn reflections(n: usize) -> Vec<SignedPerm> {
    let mut out: Vec<SignedPerm> = (0..n).map(|i| SignedPerm::sign_flip(n, i)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(SignedPerm::transposition(n, i, j));
            out.push(SignedPerm::twisted_transposition(n, i, j));
        }
    }
    out.sort();
    out
}

/// The homomorphism `W → (Z/2)²`: (product of signs, parity of the
/// permutation), as bits.
pub fn pi_projection(w: &SignedPerm) -> (u8, u8) {
    (
        (w.signs.count_ones() % 2) as u8,
        u8::from(!w.is_even_permutation()),
    )
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (cycle, _) in self.signed_cycles() {
            if cycle.len() < 2 {
                continue;
            }
            any = true;
            write!(f, "(")?;
            for (k, c) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", c + 1)?;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        write!(f, "|")?;
        for i in 0..self.rank() {
            write!(f, "{}", if self.is_negated(i) { '-' } else { '+' })?;
        }
        Ok(())
    }
}

/// Parses cycle notation (1-based) into a permutation of `{0..n-1}`.
pub(crate) fn parse_cycles(text: &str, n: usize, offset: usize) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut seen = vec![false; n];
    let mut rest = text.trim();
    let mut pos = offset;
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| parse_err(pos, "expected `(`"))?;
        let close = open
            .find(')')
            .ok_or_else(|| parse_err(pos, "unclosed cycle"))?;
        let body = &open[..close];
        let items: Vec<usize> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .ok()
                    .filter(|&v| v >= 1 && v <= n)
                    .map(|v| v - 1)
                    .ok_or_else(|| parse_err(pos, format!("bad cycle entry `{s}`")))
            })
            .collect::<Result<_>>()?;
        for &x in &items {
            if seen[x] {
                return Err(parse_err(pos, format!("{} repeated in cycles", x + 1)));
            }
            seen[x] = true;
        }
        for (k, &x) in items.iter().enumerate() {
            perm[x] = items[(k + 1) % items.len()];
        }
        let consumed = close + 2;
        pos += consumed;
        rest = rest[consumed..].trim_start();
    }
    Ok(perm)
}

impl FromStr for SignedPerm {
    type Err = Error;

    /// `"(1 2)|+-+"`: cycles, then one sign per coordinate.
    fn from_str(s: &str) -> Result<Self> {
        let (cycles, signs) = s
            .split_once('|')
            .ok_or_else(|| parse_err(0, "expected `cycles|signs`"))?;
        let signs = signs.trim();
        let negated: Vec<bool> = signs
            .chars()
            .enumerate()
            .map(|(k, c)| match c {
                '+' => Ok(false),
                '-' => Ok(true),
                _ => Err(parse_err(cycles.len() + 1 + k, format!("bad sign `{c}`"))),
            })
            .collect::<Result<_>>()?;
        let n = negated.len();
        let perm = parse_cycles(cycles, n, 0)?;
        SignedPerm::from_parts(&perm, &negated)
    }
}

/// A subgroup of `W(Sp(n))` with its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylSubgroup {
    rank: usize,
    generators: Vec<SignedPerm>,
    elements: Vec<SignedPerm>,
}

fn closure_from(
    rank: usize,
    mut seen: HashSet<SignedPerm>,
    generators: &[SignedPerm],
) -> HashSet<SignedPerm> {
    if seen.is_empty() {
        seen.insert(SignedPerm::identity(rank));
    }
    let mut frontier: Vec<SignedPerm> = seen.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = x.compose_unchecked(g);
            if !seen.contains(&y) {
                seen.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    seen
}

impl WeylSubgroup {
    /// Closure of the generators under composition.
    pub fn generated(rank: usize, generators: Vec<SignedPerm>) -> Result<Self> {
        for g in &generators {
            check_rank(rank, g.rank())?;
        }
        let seen = closure_from(rank, HashSet::new(), &generators);
        let mut elements: Vec<SignedPerm> = seen.into_iter().collect();
        elements.sort();
        Ok(WeylSubgroup {
            rank,
            generators,
            elements,
        })
    }

    /// Wraps a subset already known to be a subgroup. A generating set is
    /// chosen greedily and its closure must reproduce the subset.
    pub fn from_elements(rank: usize, mut elements: Vec<SignedPerm>) -> Result<Self> {
        for e in &elements {
            check_rank(rank, e.rank())?;
        }
        elements.sort();
        elements.dedup();
        let mut generators = Vec::new();
        let mut span: HashSet<SignedPerm> = HashSet::from([SignedPerm::identity(rank)]);
        for e in &elements {
            if !span.contains(e) {
                generators.push(e.clone());
                span = closure_from(rank, span, &generators);
            }
        }
        if span.len() != elements.len() || !elements.iter().all(|e| span.contains(e)) {
            return Err(Error::InvalidParameter(
                "element list is not closed under composition".into(),
            ));
        }
        Ok(WeylSubgroup {
            rank,
            generators,
            elements,
        })
    }

    /// The whole group `W(Sp(n))`.
    pub fn full(n: usize) -> Self {
        let mut gens = Vec::new();
        if n > 0 {
            gens.push(SignedPerm::sign_flip(n, 0));
        }
        for i in 0..n.saturating_sub(1) {
            gens.push(SignedPerm::transposition(n, i, i + 1));
        }
        Self::generated(n, gens).expect("ranks agree")
    }

    pub fn trivial(n: usize) -> Self {
        WeylSubgroup {
            rank: n,
            generators: Vec::new(),
            elements: vec![SignedPerm::identity(n)],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[SignedPerm] {
        &self.generators
    }

    pub fn elements(&self) -> &[SignedPerm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, w: &SignedPerm) -> bool {
        self.elements.binary_search(w).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &WeylSubgroup) -> bool {
        self.rank == other.rank && self.elements.iter().all(|e| other.contains(e))
    }

    pub fn same_elements(&self, other: &WeylSubgroup) -> bool {
        self.elements == other.elements
    }

    /// Subgroup of the elements satisfying `keep`. The predicate must cut
    /// out a subgroup.
    pub fn filter(&self, keep: impl Fn(&SignedPerm) -> bool) -> Result<WeylSubgroup> {
        let elements = self.elements.iter().filter(|w| keep(w)).cloned().collect();
        Self::from_elements(self.rank, elements)
    }

    /// Normality in `ambient`, checked on all of `ambient`'s generators.
    pub fn is_normal_in(&self, ambient: &WeylSubgroup) -> bool {
        ambient.generators.iter().all(|g| {
            let gi = g.inverse();
            self.elements
                .iter()
                .all(|h| self.contains(&g.compose_unchecked(h).compose_unchecked(&gi)))
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..]
                .iter()
                .all(|b| a.compose_unchecked(b) == b.compose_unchecked(a))
        })
    }

    pub fn is_elementary_abelian(&self) -> bool {
        self.is_abelian() && self.elements.iter().all(|w| w.compose_unchecked(w).is_identity())
    }

    pub fn reflections(&self) -> Vec<SignedPerm> {
        self.elements.iter().filter(|w| is_reflection(w)).cloned().collect()
    }
}

/// One of the normal subgroups of 2-power index, the preimage of a subgroup
/// of `(Z/2)²` under [`pi_projection`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LabeledSubgroup {
    /// 1 through 5.
    pub label: u8,
    /// The image subgroup of `(Z/2)²`: `1`, `Z_1`, `Z_2`, `D` or `(Z/2)^2`.
    pub image: &'static str,
    pub group: WeylSubgroup,
}

const IMAGES: [(&str, &[(u8, u8)]); 5] = [
    ("1", &[(0, 0)]),
    ("Z_1", &[(0, 0), (1, 0)]),
    ("Z_2", &[(0, 0), (0, 1)]),
    ("D", &[(0, 0), (1, 1)]),
    ("(Z/2)^2", &[(0, 0), (1, 0), (0, 1), (1, 1)]),
];

/// The five normal subgroups of `W(Sp(n))` of 2-power index, labeled
/// (1) through (5). Requires `n ≥ 3`.
pub fn index2power_normal_subgroups(n: usize) -> Result<Vec<LabeledSubgroup>> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "the 2-power index census needs n ≥ 3, got {n}"
        )));
    }
    let w = WeylSubgroup::full(n);
    IMAGES
        .iter()
        .enumerate()
        .map(|(k, (name, image))| {
            let group = w.filter(|x| image.contains(&pi_projection(x)))?;
            Ok(LabeledSubgroup {
                label: k as u8 + 1,
                image: name,
                group,
            })
        })
        .collect()
}

/// The subgroup generated by the reflections contained in `h`.
pub fn reflection_closure(h: &WeylSubgroup) -> WeylSubgroup {
    WeylSubgroup::generated(h.rank(), h.reflections()).expect("ranks agree")
}

/// `{w ∈ H : w·a = a for all a ∈ A}`.
pub fn pointwise_stabilizer(h: &WeylSubgroup, a: &TorusSubgroup) -> Result<WeylSubgroup> {
    check_rank(h.rank(), a.rank())?;
    h.filter(|w| a.elements().iter().all(|x| &w.act_unchecked(x) == x))
}
