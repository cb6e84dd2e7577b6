//! Conjugacy classes of elementary abelian 2-subgroups of the diagonal
//! 2-torsion `(Z/2)^n`, up to the Weyl action.
//!
//! On 2-torsion the Weyl group acts through `Σ_n`. A rank `r` subgroup `E`
//! is determined, up to that action and up to `GL(E)`, by the multiset of
//! the `n` coordinate characters `E → Z/2`, which must span `E^∨`.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::f2_rank;

/// Largest rank for which the class enumeration is offered.
pub const MAX_QUILLEN_RANK: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuillenClass {
    pub rank: usize,
    /// Orbit-minimal multiplicity vector: entry `c` counts coordinates with
    /// character `c ∈ F_2^r`.
    pub multiplicities: Vec<usize>,
    /// Nonzero multiplicities sorted decreasingly; the trivial character
    /// is listed separately.
    pub partition: Vec<usize>,
    pub trivial_multiplicity: usize,
    /// Basis of a representative subgroup, as bit masks over the `n`
    /// coordinates (bit `i` set means `-1` in coordinate `i`).
    pub basis: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuillenObjects {
    pub n: usize,
    pub classes: Vec<QuillenClass>,
    /// `counts[r - 1]` is the number of classes of rank `r`.
    pub counts: Vec<usize>,
}

impl QuillenObjects {
    pub fn total(&self) -> usize {
        self.classes.len()
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    if n > MAX_QUILLEN_RANK {
        return Err(Error::BoundExceeded {
            what: "Quillen enumeration rank",
            limit: MAX_QUILLEN_RANK,
            actual: n,
        });
    }
    Ok(())
}

/// All multiplicity vectors of length `slots` summing to `n`.
fn compositions(n: usize, slots: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == slots {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            go(left - k, slots, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, slots, &mut Vec::with_capacity(slots), &mut out);
    out
}

/// Generators of `GL_r(F_2)` as permutations of `F_2^r`: adjacent basis
/// swaps and the transvection `e_1 ↦ e_1 + e_2`.
fn gl_generators(r: usize) -> Vec<Vec<usize>> {
    let size = 1usize << r;
    let apply = |f: &dyn Fn(usize) -> usize| -> Vec<usize> { (0..size).map(f).collect() };
    let mut gens = Vec::new();
    for k in 0..r.saturating_sub(1) {
        gens.push(apply(&|v| {
            let a = v >> k & 1;
            let b = v >> (k + 1) & 1;
            let cleared = v & !(0b11 << k);
            cleared | a << (k + 1) | b << k
        }));
    }
    if r >= 2 {
        // Matrix image of v: the coefficient of e_1 is added to e_2.
        gens.push(apply(&|v| v ^ ((v & 1) << 1)));
    }
    gens
}

fn permute(mult: &[usize], g: &[usize]) -> Vec<usize> {
    let mut out = vec![0; mult.len()];
    for (c, &m) in mult.iter().enumerate() {
        out[g[c]] += m;
    }
    out
}

fn spans(mult: &[usize], r: usize) -> bool {
    let rows: Vec<Vec<u64>> = mult
        .iter()
        .enumerate()
        .filter(|(c, &m)| m > 0 && *c != 0)
        .map(|(c, _)| (0..r).map(|k| (c >> k & 1) as u64).collect())
        .collect();
    f2_rank(rows, r) == r
}

fn class_from(rank: usize, mult: Vec<usize>) -> QuillenClass {
    let mut columns = Vec::new();
    for (c, &m) in mult.iter().enumerate() {
        columns.extend(std::iter::repeat_n(c, m));
    }
    let basis = (0..rank)
        .map(|k| {
            columns
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, &c)| acc | ((c as u32 >> k & 1) << i))
        })
        .collect();
    let mut partition: Vec<usize> = mult[1..].iter().copied().filter(|&m| m > 0).collect();
    partition.sort_unstable_by(|a, b| b.cmp(a));
    QuillenClass {
        rank,
        trivial_multiplicity: mult[0],
        partition,
        multiplicities: mult,
        basis,
    }
}

/// Classes of nontrivial elementary abelian subgroups of `(Z/2)^n` up to
/// the Weyl action, by orbit enumeration of character multisets.
pub fn quillen_objects(n: usize) -> Result<QuillenObjects> {
    check_n(n)?;
    let mut classes = Vec::new();
    let mut counts = Vec::new();
    for r in 1..=n {
        let gens = gl_generators(r);
        let mut visited: HashSet<Vec<usize>> = HashSet::new();
        let mut found = 0;
        for mult in compositions(n, 1 << r) {
            if visited.contains(&mult) || !spans(&mult, r) {
                continue;
            }
            let mut orbit = vec![mult.clone()];
            visited.insert(mult.clone());
            let mut k = 0;
            while k < orbit.len() {
                for g in &gens {
                    let y = permute(&orbit[k], g);
                    if visited.insert(y.clone()) {
                        orbit.push(y);
                    }
                }
                k += 1;
            }
            let least = orbit.into_iter().min().expect("orbit is nonempty");
            classes.push(class_from(r, least));
            found += 1;
        }
        counts.push(found);
    }
    classes.sort_by(|a, b| (a.rank, &a.multiplicities).cmp(&(b.rank, &b.multiplicities)));
    Ok(QuillenObjects { n, classes, counts })
}

/// Elements of the span of the masks.
pub(crate) fn span_masks(basis: &[u32]) -> Vec<u32> {
    let mut elems = vec![0u32];
    for &b in basis {
        if !elems.contains(&b) {
            let shifted: Vec<u32> = elems.iter().map(|e| e ^ b).collect();
            elems.extend(shifted);
        }
    }
    elems.sort_unstable();
    elems
}

fn permute_mask(mask: u32, perm: &[usize]) -> u32 {
    perm.iter()
        .enumerate()
        .fold(0, |acc, (i, &p)| acc | ((mask >> i & 1) << p))
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            if k.is_multiple_of(2) {
                p.swap(i, k - 1);
            } else {
                p.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut p, &mut out);
    out
}

/// Independent count: every nontrivial subgroup of `(Z/2)^n`, reduced to
/// its `Σ_n`-minimal sorted element list. Returns counts per rank.
pub fn quillen_oracle_class_count(n: usize) -> Result<Vec<usize>> {
    check_n(n)?;
    let perms = all_perms(n);
    let mut subgroups: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut frontier: Vec<Vec<u32>> = vec![vec![0]];
    // Grow subgroups by one generator at a time.
    while let Some(h) = frontier.pop() {
        for v in 1u32..(1 << n) {
            if h.binary_search(&v).is_ok() {
                continue;
            }
            let mut bigger = h.clone();
            bigger.extend(h.iter().map(|e| e ^ v));
            bigger.sort_unstable();
            if subgroups.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let mut classes: BTreeSet<Vec<u32>> = BTreeSet::new();
    for h in &subgroups {
        let canon = perms
            .iter()
            .map(|p| {
                let mut img: Vec<u32> = h.iter().map(|&e| permute_mask(e, p)).collect();
                img.sort_unstable();
                img
            })
            .min()
            .expect("at least one permutation");
        classes.insert(canon);
    }
    let mut counts = vec![0; n];
    for c in &classes {
        counts[c.len().trailing_zeros() as usize - 1] += 1;
    }
    Ok(counts)
}

/// Number of distinct injections `E → E'` induced by the Weyl action, for
/// sources of rank at most 2. Subgroups are given by basis masks.
pub fn quillen_morphism_count(n: usize, source: &[u32], target: &[u32]) -> Result<usize> {
    check_n(n)?;
    let src = span_masks(source);
    let tgt = span_masks(target);
    let rank = src.len().trailing_zeros() as usize;
    if rank > 2 {
        return Err(Error::BoundExceeded {
            what: "Quillen morphism source rank",
            limit: 2,
            actual: rank,
        });
    }
    let full = (1u64 << n) - 1;
    if src.iter().chain(&tgt).any(|&m| u64::from(m) > full) {
        return Err(Error::InvalidParameter("mask exceeds the rank".into()));
    }
    let mut maps: HashSet<Vec<u32>> = HashSet::new();
    for p in all_perms(n) {
        let img: Vec<u32> = src.iter().map(|&e| permute_mask(e, &p)).collect();
        if img.iter().all(|e| tgt.binary_search(e).is_ok()) {
            maps.insert(img);
        }
    }
    Ok(maps.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranks() {
        let q = quillen_objects(1).unwrap();
        assert_eq!(q.counts, vec![1]);
        assert_eq!(q.classes[0].basis, vec![1]);

        let q = quillen_objects(3).unwrap();
        assert_eq!(q.counts, vec![3, 3, 1]);
        let rank1: Vec<Vec<usize>> = q
            .classes
            .iter()
            .filter(|c| c.rank == 1)
            .map(|c| c.partition.clone())
            .collect();
        assert_eq!(rank1, vec![vec![3], vec![2], vec![1]]);
    }

    #[test]
    fn orbit_enumeration_matches_oracle() {
        for n in 1..=5 {
            let q = quillen_objects(n).unwrap();
            assert_eq!(q.counts, quillen_oracle_class_count(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn representatives_have_the_right_rank() {
        for n in 1..=4 {
            for c in quillen_objects(n).unwrap().classes {
                assert_eq!(span_masks(&c.basis).len(), 1 << c.rank);
                assert_eq!(c.multiplicities.iter().sum::<usize>(), n);
            }
        }
    }

    #[test]
    fn morphism_counts() {
        // The center has only the identity.
        assert_eq!(quillen_morphism_count(3, &[0b111], &[0b111]).unwrap(), 1);
        // A coordinate line maps onto each coordinate line of the torus.
        assert_eq!(
            quillen_morphism_count(3, &[0b001], &[0b001, 0b010, 0b100]).unwrap(),
            3
        );
        // Automorphisms of ⟨e1, e2⟩ realized by Σ_3: the swap only.
        assert_eq!(
            quillen_morphism_count(3, &[0b001, 0b010], &[0b001, 0b010]).unwrap(),
            2
        );
        assert!(quillen_morphism_count(3, &[1, 2, 4], &[1, 2, 4]).is_err());
    }

    #[test]
    fn bounds() {
        assert!(quillen_objects(0).is_err());
        assert!(quillen_objects(MAX_QUILLEN_RANK + 1).is_err());
    }
}
