//! Oliver's 2-stubborn subgroups of `Sp(n)` as explicit groups of monomial
//! matrices, with their diagonal and torus parts.

mod commutant;
mod spec;

pub use commutant::{
    commutant_dimension, commutant_dimension_in, group_commutant, Ambient, CommutantBound,
};
pub use spec::GroupSpec;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{check_rank, Error, Result};
use crate::normalizer::{MonomialMatrix, UnitCoef};
use crate::torus::DyadicAngle;
use crate::weyl::SignedPerm;

pub const MAX_SPEC_RANK: usize = 16;
pub const MAX_GROUP_ORDER: usize = 1 << 18;
pub const GBAR_DEPTHS: std::ops::RangeInclusive<u32> = 2..=4;

/// `σ_r` on `{0, …, 2^k - 1}`: `s ↦ s XOR 2^r`, i.e. `s ± 2^r` according
/// to bit `r`.
pub fn sigma_r(r: u32, k: u32) -> Result<Vec<usize>> {
    if r >= k || k as usize > MAX_SPEC_RANK.trailing_zeros() as usize {
        return Err(Error::InvalidParameter(format!(
            "σ_r needs 0 ≤ r < k ≤ 4, got r = {r}, k = {k}"
        )));
    }
    Ok((0..1usize << k).map(|s| s ^ (1 << r)).collect())
}

/// `σ_r` as a signed permutation with no signs, for display.
pub fn sigma_r_perm(r: u32, k: u32) -> Result<SignedPerm> {
    let p = sigma_r(r, k)?;
    SignedPerm::from_parts(&p, &vec![false; p.len()])
}

/// `A_r = diag((-1)^{bit_r(s)})`.
pub fn a_r(r: u32, k: u32) -> MonomialMatrix {
    MonomialMatrix::diagonal(
        (0..1usize << k)
            .map(|s| {
                if s >> r & 1 == 1 {
                    UnitCoef::MINUS_ONE
                } else {
                    UnitCoef::ONE
                }
            })
            .collect(),
    )
}

/// Permutation matrix of `σ_r`.
pub fn b_r(r: u32, k: u32) -> Result<MonomialMatrix> {
    MonomialMatrix::permutation(&sigma_r(r, k)?)
}

/// A finite group of monomial matrices with its sorted elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialGroup {
    rank: usize,
    generators: Vec<MonomialMatrix>,
    elements: Vec<MonomialMatrix>,
    spec: Option<GroupSpec>,
}

fn closure(
    rank: usize,
    mut seen: HashSet<MonomialMatrix>,
    generators: &[MonomialMatrix],
    cap: usize,
) -> Result<HashSet<MonomialMatrix>> {
    if seen.is_empty() {
        seen.insert(MonomialMatrix::identity(rank));
    }
    let mut frontier: Vec<MonomialMatrix> = seen.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = x.mul_unchecked(g);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::BoundExceeded {
                        what: "group order",
                        limit: cap,
                        actual: seen.len() + 1,
                    });
                }
                seen.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    Ok(seen)
}

/// Invariants used to compare isomorphism types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInvariants {
    pub order: usize,
    pub exponent: u64,
    pub center_order: usize,
    pub derived_order: usize,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl MonomialGroup {
    pub fn generated(rank: usize, generators: Vec<MonomialMatrix>) -> Result<Self> {
        Self::generated_capped(rank, generators, MAX_GROUP_ORDER)
    }

    pub fn generated_capped(rank: usize, generators: Vec<MonomialMatrix>, cap: usize) -> Result<Self> {
        for g in &generators {
            check_rank(rank, g.rank())?;
        }
        let seen = closure(rank, HashSet::new(), &generators, cap)?;
        let mut elements: Vec<_> = seen.into_iter().collect();
        elements.sort();
        Ok(MonomialGroup {
            rank,
            generators,
            elements,
            spec: None,
        })
    }

    /// Wraps a subset known to be a subgroup; generators are chosen
    /// greedily and must reproduce it.
    pub fn from_elements(rank: usize, mut elements: Vec<MonomialMatrix>) -> Result<Self> {
        for e in &elements {
            check_rank(rank, e.rank())?;
        }
        elements.sort();
        elements.dedup();
        let mut generators = Vec::new();
        let mut span: HashSet<MonomialMatrix> = HashSet::from([MonomialMatrix::identity(rank)]);
        for e in &elements {
            if !span.contains(e) {
                generators.push(e.clone());
                span = closure(rank, span, &generators, elements.len().max(1))?;
            }
        }
        if span.len() != elements.len() {
            return Err(Error::InvalidParameter(
                "element list is not closed under multiplication".into(),
            ));
        }
        Ok(MonomialGroup {
            rank,
            generators,
            elements,
            spec: None,
        })
    }

    pub fn trivial(rank: usize) -> Self {
        MonomialGroup {
            rank,
            generators: Vec::new(),
            elements: vec![MonomialMatrix::identity(rank)],
            spec: None,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[MonomialMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[MonomialMatrix] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn spec(&self) -> Option<&GroupSpec> {
        self.spec.as_ref()
    }

    pub fn contains(&self, m: &MonomialMatrix) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &MonomialGroup) -> bool {
        self.rank == other.rank && self.elements.iter().all(|e| other.contains(e))
    }

    /// Subgroup of the elements satisfying `keep`; the predicate must cut
    /// out a subgroup.
    pub fn filter(&self, keep: impl Fn(&MonomialMatrix) -> bool) -> Result<MonomialGroup> {
        let elements = self.elements.iter().filter(|m| keep(m)).cloned().collect();
        Self::from_elements(self.rank, elements)
    }

    pub fn is_normal_in(&self, ambient: &MonomialGroup) -> bool {
        ambient.generators.iter().all(|g| {
            let gi = g.inverse();
            self.generators
                .iter()
                .all(|h| self.contains(&g.mul_unchecked(h).mul_unchecked(&gi)))
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|a| {
            self.generators
                .iter()
                .all(|b| a.mul_unchecked(b) == b.mul_unchecked(a))
        })
    }

    pub fn exponent(&self) -> u64 {
        self.elements
            .iter()
            .map(MonomialMatrix::order)
            .fold(1, |acc, o| acc / gcd(acc, o) * o)
    }

    pub fn center(&self) -> MonomialGroup {
        self.filter(|z| {
            self.generators
                .iter()
                .all(|g| z.mul_unchecked(g) == g.mul_unchecked(z))
        })
        .expect("the center is a subgroup")
    }

    /// Normal closure of the commutators of generators.
    pub fn derived_subgroup(&self) -> MonomialGroup {
        let mut seeds = Vec::new();
        for a in &self.generators {
            for b in &self.generators {
                let c = a
                    .mul_unchecked(b)
                    .mul_unchecked(&a.inverse())
                    .mul_unchecked(&b.inverse());
                if !c.is_identity() {
                    seeds.push(c);
                }
            }
        }
        let mut h = MonomialGroup::generated(self.rank, seeds).expect("subgroup of a finite group");
        loop {
            let mut extra = Vec::new();
            for g in &self.generators {
                let gi = g.inverse();
                for x in &h.generators {
                    let y = g.mul_unchecked(x).mul_unchecked(&gi);
                    if !h.contains(&y) {
                        extra.push(y);
                    }
                }
            }
            if extra.is_empty() {
                return h;
            }
            let mut gens = h.generators.clone();
            gens.extend(extra);
            h = MonomialGroup::generated(self.rank, gens).expect("subgroup of a finite group");
        }
    }

    pub fn invariants(&self) -> GroupInvariants {
        GroupInvariants {
            order: self.order(),
            exponent: self.exponent(),
            center_order: self.center().order(),
            derived_order: self.derived_subgroup().order(),
        }
    }
}

fn check_spec(spec: &GroupSpec) -> Result<usize> {
    let rank = spec.rank().unwrap_or(usize::MAX);
    if rank > MAX_SPEC_RANK {
        return Err(Error::BoundExceeded {
            what: "group-spec rank",
            limit: MAX_SPEC_RANK,
            actual: rank,
        });
    }
    fn depths(spec: &GroupSpec) -> Result<()> {
        match spec {
            GroupSpec::GammaBar(_, m) if !GBAR_DEPTHS.contains(m) => {
                Err(Error::InvalidParameter(format!(
                    "gbar depth must lie in {}..={}, got {m}",
                    GBAR_DEPTHS.start(),
                    GBAR_DEPTHS.end()
                )))
            }
            GroupSpec::Wreath(inner, _) => depths(inner),
            GroupSpec::Product(parts) => parts.iter().try_for_each(depths),
            _ => Ok(()),
        }
    }
    depths(spec)?;
    Ok(rank)
}

/// `g` placed in the block starting at `offset` of a rank `total` matrix.
fn embed(g: &MonomialMatrix, offset: usize, total: usize) -> MonomialMatrix {
    let before = MonomialMatrix::identity(offset);
    let after = MonomialMatrix::identity(total - offset - g.rank());
    before.block_sum(g).block_sum(&after)
}

fn leaf_generators(k: u32, top: Option<UnitCoef>) -> Result<Vec<MonomialMatrix>> {
    let n = 1usize << k;
    let mut gens = Vec::new();
    if let Some(u) = top {
        gens.push(MonomialMatrix::scalar(n, u));
        gens.push(MonomialMatrix::scalar(n, UnitCoef::J));
        gens.extend((0..k).map(|r| a_r(r, k)));
    }
    for r in 0..k {
        gens.push(b_r(r, k)?);
    }
    Ok(gens)
}

/// Generators of the group a spec describes, with its rank.
pub fn spec_generators(spec: &GroupSpec) -> Result<(usize, Vec<MonomialMatrix>)> {
    check_spec(spec)?;
    match spec {
        GroupSpec::Gamma(k) => Ok((1 << k, leaf_generators(*k, Some(UnitCoef::I))?)),
        GroupSpec::GammaBar(k, m) => {
            let top = UnitCoef::zeta(DyadicAngle::new(1, *m)?);
            Ok((1 << k, leaf_generators(*k, Some(top))?))
        }
        GroupSpec::E(k) => Ok((1 << k, leaf_generators(*k, None)?)),
        GroupSpec::Wreath(inner, r) => {
            let (b, inner_gens) = spec_generators(inner)?;
            let total = b << r;
            let mut gens: Vec<MonomialMatrix> =
                inner_gens.iter().map(|g| embed(g, 0, total)).collect();
            for s in 0..*r {
                let sigma = sigma_r(s, *r)?;
                let perm: Vec<usize> = (0..total).map(|c| sigma[c / b] * b + c % b).collect();
                gens.push(MonomialMatrix::permutation(&perm)?);
            }
            Ok((total, gens))
        }
        GroupSpec::Product(parts) => {
            let pieces = parts
                .iter()
                .map(spec_generators)
                .collect::<Result<Vec<_>>>()?;
            let total: usize = pieces.iter().map(|(n, _)| n).sum();
            let mut gens = Vec::new();
            let mut offset = 0;
            for (n, g) in pieces {
                gens.extend(g.iter().map(|x| embed(x, offset, total)));
                offset += n;
            }
            Ok((total, gens))
        }
    }
}

/// The group a spec describes.
pub fn build(spec: &GroupSpec) -> Result<MonomialGroup> {
    let (rank, gens) = spec_generators(spec)?;
    let mut g = MonomialGroup::generated(rank, gens)?;
    g.spec = Some(spec.clone());
    Ok(g)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructuralParts {
    /// Diagonal elements.
    pub diagonal: MonomialGroup,
    /// Diagonal elements without `j`, inside the torus.
    pub torus: MonomialGroup,
    pub center: MonomialGroup,
}

pub fn structural_parts(p: &MonomialGroup) -> StructuralParts {
    let diagonal = p
        .filter(MonomialMatrix::is_diagonal)
        .expect("diagonal elements form a subgroup");
    let torus = diagonal
        .filter(|m| m.torus_part().is_some())
        .expect("torus elements form a subgroup");
    StructuralParts {
        diagonal,
        torus,
        center: p.center(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PdSplit {
    pub split: bool,
    /// The `B_r`, generating the candidate complement.
    pub witness: Vec<MonomialMatrix>,
    pub complement_order: usize,
    pub reason: String,
}

/// Whether `P_D → P → (Z/2)^k` splits, with `⟨B_0, …, B_{k-1}⟩` as the
/// candidate complement.
pub fn pd_split_check(p: &MonomialGroup) -> Result<PdSplit> {
    let k = p
        .spec()
        .and_then(GroupSpec::leaf_k)
        .ok_or_else(|| Error::InvalidParameter("pd_split_check needs a gamma or gbar leaf".into()))?;
    let witness: Vec<MonomialMatrix> = (0..k).map(|r| b_r(r, k)).collect::<Result<_>>()?;
    let c = MonomialGroup::generated(p.rank(), witness.clone())?;
    let pd = structural_parts(p).diagonal;
    let inside = c.is_subgroup_of(p);
    let meets_trivially = c.elements().iter().filter(|x| pd.contains(x)).count() == 1;
    let fills = pd.order() * c.order() == p.order();
    let split = inside && meets_trivially && fills && c.order() == 1 << k;
    let reason = format!(
        "|P| = {}, |P_D| = {}, |complement| = {}, contained: {inside}, meets P_D trivially: {meets_trivially}",
        p.order(),
        pd.order(),
        c.order()
    );
    Ok(PdSplit {
        split,
        witness,
        complement_order: c.order(),
        reason,
    })
}

pub const MAX_AMBIENT_ORDER: usize = 1 << 16;

/// Every monomial matrix of rank `n` with entries `ζ_θ` or `ζ_θ j`, `θ` of
/// level at most `depth`.
pub fn monomial_ambient(n: usize, depth: u32) -> Result<Vec<MonomialMatrix>> {
    let units: Vec<UnitCoef> = DyadicAngle::all_at_depth(depth)
        .flat_map(|a| [UnitCoef::zeta(a), UnitCoef::zeta_j(a)])
        .collect();
    let size = (1..=n)
        .try_fold(1usize, |acc, k| acc.checked_mul(k))
        .and_then(|f| units.len().checked_pow(n as u32).and_then(|u| u.checked_mul(f)));
    match size {
        Some(s) if s <= MAX_AMBIENT_ORDER => {}
        _ => {
            return Err(Error::BoundExceeded {
                what: "monomial ambient order",
                limit: MAX_AMBIENT_ORDER,
                actual: size.unwrap_or(usize::MAX),
            })
        }
    }
    let perms: Vec<Vec<usize>> = crate::weyl::WeylSubgroup::full(n)
        .elements()
        .iter()
        .filter(|w| w.sign_mask() == 0)
        .map(SignedPerm::perm)
        .collect();
    let mut out = Vec::new();
    for p in perms {
        let mut idx = vec![0usize; n];
        loop {
            let coefs = idx.iter().map(|&i| units[i]).collect();
            out.push(MonomialMatrix::from_parts(&p, coefs)?);
            let mut c = 0;
            while c < n {
                idx[c] += 1;
                if idx[c] < units.len() {
                    break;
                }
                idx[c] = 0;
                c += 1;
            }
            if c == n {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormalizerReport {
    pub normalizer: MonomialGroup,
    pub contains_p: bool,
    /// `|N| / |P|` when `P ⊆ N`; a lower bound for the true quotient.
    pub quotient_order: Option<usize>,
    /// Always true: only the monomial part of the normalizer is computed.
    pub partial: bool,
}

/// Elements of the depth-`m` monomial group normalizing `P`.
pub fn normalizer_in_monomial(p: &MonomialGroup, depth: u32) -> Result<NormalizerReport> {
    let ambient = monomial_ambient(p.rank(), depth)?;
    let elements: Vec<MonomialMatrix> = ambient
        .into_iter()
        .filter(|g| {
            let gi = g.inverse();
            p.generators()
                .iter()
                .all(|h| p.contains(&g.mul_unchecked(h).mul_unchecked(&gi)))
        })
        .collect();
    let normalizer = MonomialGroup::from_elements(p.rank(), elements)?;
    let contains_p = p.is_subgroup_of(&normalizer);
    Ok(NormalizerReport {
        quotient_order: contains_p.then(|| normalizer.order() / p.order()),
        contains_p,
        normalizer,
        partial: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(text: &str) -> MonomialGroup {
        build(&text.parse().unwrap()).unwrap()
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_r_perm(0, 1).unwrap().to_string(), "(1 2)|++");
        assert_eq!(sigma_r_perm(1, 2).unwrap().to_string(), "(1 3)(2 4)|++++");
        assert_eq!(sigma_r_perm(0, 2).unwrap().to_string(), "(1 2)(3 4)|++++");
        assert!(sigma_r(2, 2).is_err());
    }

    #[test]
    fn sigma_matches_formula() {
        // 1-based: s + 2^r when s ≡ 1..2^r mod 2^{r+1}, else s - 2^r.
        for k in 1..=4 {
            for r in 0..k {
                let p = sigma_r(r, k).unwrap();
                for s in 1..=(1usize << k) {
                    let m = (s - 1) % (1 << (r + 1));
                    let expect = if m < 1 << r { s + (1 << r) } else { s - (1 << r) };
                    assert_eq!(p[s - 1] + 1, expect);
                }
            }
        }
    }

    #[test]
    fn gamma_orders() {
        for k in 0..=3u32 {
            assert_eq!(g(&format!("gamma:{k}")).order(), 1 << (2 * k + 3));
        }
        assert_eq!(g("gbar:1@3").order(), 1 << (4 + 2));
        assert!(build(&"gbar:1@1".parse().unwrap()).is_err());
        assert!(build(&"wreath(gamma:2,3)".parse().unwrap()).is_err());
    }

    #[test]
    fn elementary_abelian_regular() {
        for k in 0..=3u32 {
            let e = g(&format!("e:{k}"));
            assert_eq!(e.order(), 1 << k);
            assert!(e.is_abelian());
            let n = 1usize << k;
            // Regular: each point is sent to each point by exactly one element.
            for target in 0..n {
                let hits = e.elements().iter().filter(|m| m.perm()[0] == target).count();
                assert_eq!(hits, 1);
            }
        }
    }

    #[test]
    fn wreath_and_product_orders() {
        assert_eq!(g("wreath(gamma:0,1)").order(), 8 * 8 * 2);
        assert_eq!(g("wreath(gamma:1,1)").order(), 32 * 32 * 2);
        assert_eq!(g("wreath(gamma:0,2)").order(), 8usize.pow(4) * 4);
        assert_eq!(g("wreath(e:1,1)").order(), 2 * 2 * 2);
        assert_eq!(g("prod(gamma:0;gamma:1)").order(), 8 * 32);
    }

    #[test]
    fn structural_examples() {
        let p = g("gamma:1");
        let parts = structural_parts(&p);
        assert_eq!(parts.diagonal.order(), 16);
        assert_eq!(parts.torus.order(), 8);
        assert_eq!(structural_parts(&g("gamma:0")).center.order(), 2);

        // Q(8) × Z/2 realized as diag(u, ±1).
        let reference = MonomialGroup::generated(
            2,
            vec![
                MonomialMatrix::diagonal(vec![UnitCoef::I, UnitCoef::ONE]),
                MonomialMatrix::diagonal(vec![UnitCoef::J, UnitCoef::ONE]),
                MonomialMatrix::diagonal(vec![UnitCoef::ONE, UnitCoef::MINUS_ONE]),
            ],
        )
        .unwrap();
        assert_eq!(parts.diagonal.invariants(), reference.invariants());

        // Q(8) × (Z/2)² in rank 4.
        let d = |u: [UnitCoef; 4]| MonomialMatrix::diagonal(u.to_vec());
        let (one, m) = (UnitCoef::ONE, UnitCoef::MINUS_ONE);
        let reference = MonomialGroup::generated(
            4,
            vec![
                d([UnitCoef::I, one, one, one]),
                d([UnitCoef::J, one, one, one]),
                d([one, m, one, one]),
                d([one, one, m, one]),
            ],
        )
        .unwrap();
        let pd = structural_parts(&g("gamma:2")).diagonal;
        assert_eq!(pd.invariants(), reference.invariants());
        assert_eq!(
            (pd.order(), pd.exponent(), pd.center().order(), pd.derived_subgroup().order()),
            (32, 4, 8, 2)
        );
    }

    #[test]
    fn structural_parts_are_normal() {
        for text in ["gamma:0", "gamma:1", "gamma:2", "gbar:1@3", "wreath(gamma:0,1)", "prod(gamma:0;gamma:1)"] {
            let p = g(text);
            let parts = structural_parts(&p);
            assert!(parts.diagonal.is_normal_in(&p), "{text}");
            assert!(parts.torus.is_normal_in(&p), "{text}");
            assert!(parts.center.is_subgroup_of(&parts.diagonal), "{text}");
        }
        // A bare E leaf is abelian and not diagonal, so only normality holds.
        let e = g("prod(gamma:0;e:1)");
        let parts = structural_parts(&e);
        assert!(parts.diagonal.is_normal_in(&e));
        assert!(!parts.center.is_subgroup_of(&parts.diagonal));
    }

    #[test]
    fn pd_split_examples() {
        for k in 0..=2 {
            let r = pd_split_check(&g(&format!("gamma:{k}"))).unwrap();
            assert!(r.split, "{}", r.reason);
            assert_eq!(r.complement_order, 1 << k);
            assert_eq!(r.witness.len(), k);
        }
        assert!(pd_split_check(&g("wreath(gamma:0,1)")).is_err());
    }

    #[test]
    fn commutant_examples() {
        let parts = structural_parts(&g("gamma:1"));
        assert_eq!(commutant_dimension(2, parts.diagonal.generators()).unwrap(), 2);
        assert_eq!(commutant_dimension(2, parts.torus.generators()).unwrap(), 4);
        // Generators suffice.
        assert_eq!(commutant_dimension(2, parts.diagonal.elements()).unwrap(), 2);
    }

    #[test]
    fn gbar_commutant_is_a_bound() {
        let p = g("gbar:1@3");
        let b = group_commutant(&p, Ambient::QuaternionLinear).unwrap();
        assert!(!b.exact);
        assert!(b.dimension <= commutant_dimension(2, g("gamma:1").generators()).unwrap());
    }

    #[test]
    fn normalizer_examples() {
        let diag = MonomialGroup::generated(
            2,
            vec![
                MonomialMatrix::diagonal(vec![UnitCoef::MINUS_ONE, UnitCoef::ONE]),
                MonomialMatrix::diagonal(vec![UnitCoef::ONE, UnitCoef::MINUS_ONE]),
            ],
        )
        .unwrap();
        let r = normalizer_in_monomial(&diag, 1).unwrap();
        assert_eq!(r.normalizer.order(), monomial_ambient(2, 1).unwrap().len());
        assert!(r.partial);

        let triv = MonomialGroup::trivial(2);
        let r = normalizer_in_monomial(&triv, 1).unwrap();
        assert_eq!(r.normalizer.order(), 2 * 16);

        let p = g("gamma:1");
        let r = normalizer_in_monomial(&p, 2).unwrap();
        assert!(r.contains_p);
        assert!(r.quotient_order.unwrap() >= 1);
    }
}
