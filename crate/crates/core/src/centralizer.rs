//! Weyl groups of centralizers of torus subgroups and the connectedness
//! pipeline built from them.

use serde::{Deserialize, Serialize};

use crate::error::{check_rank, Error, Result};
use crate::normalizer::{singular_sets, split_check, SingularKind, SplitObstruction, SplitVerdict};
use crate::torus::{TorusPoint, TorusSubgroup};
use crate::weyl::{
    index2power_normal_subgroups, is_reflection, pointwise_stabilizer, reflection_closure,
    SignedPerm, WeylSubgroup,
};

/// `W(A)`: elements of `w` fixing `a` pointwise.
pub fn weyl_of_centralizer(w: &WeylSubgroup, a: &TorusSubgroup) -> Result<WeylSubgroup> {
    pointwise_stabilizer(w, a)
}

/// Reflections of `W(A)` whose singular set contains every element of `a`.
pub fn contained_reflections(
    w: &WeylSubgroup,
    a: &TorusSubgroup,
    depth: u32,
) -> Result<Vec<(SignedPerm, bool)>> {
    let wa = weyl_of_centralizer(w, a)?;
    wa.reflections()
        .into_iter()
        .map(|s| {
            let inside = singular_sets(&s, depth)?.contains_all(SingularKind::Union, a);
            Ok((s, inside))
        })
        .collect()
}

/// `W(A)_1`: generated by the reflections `s` of `W(A)` with `A ⊆ σ(s)`.
pub fn weyl_of_identity_component(
    w: &WeylSubgroup,
    a: &TorusSubgroup,
    depth: u32,
) -> Result<WeylSubgroup> {
    check_rank(w.rank(), a.rank())?;
    let gens = contained_reflections(w, a, depth)?
        .into_iter()
        .filter_map(|(s, inside)| inside.then_some(s))
        .collect();
    WeylSubgroup::generated(w.rank(), gens)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CentralizerReport {
    pub subgroup: TorusSubgroup,
    pub centralizer: WeylSubgroup,
    pub identity_component: WeylSubgroup,
    /// Each reflection of the centralizer Weyl group, with whether `A`
    /// lies in its singular set.
    pub reflections: Vec<(SignedPerm, bool)>,
}

pub fn centralizer_report(
    w: &WeylSubgroup,
    a: &TorusSubgroup,
    depth: u32,
) -> Result<CentralizerReport> {
    let centralizer = weyl_of_centralizer(w, a)?;
    let reflections = contained_reflections(w, a, depth)?;
    let gens = reflections
        .iter()
        .filter(|(_, inside)| *inside)
        .map(|(s, _)| s.clone())
        .collect();
    Ok(CentralizerReport {
        subgroup: a.clone(),
        identity_component: WeylSubgroup::generated(w.rank(), gens)?,
        centralizer,
        reflections,
    })
}

/// Which pair family a reflection fixing `V` belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairFamily {
    /// `τ_{2i-1,2i}` with no signs.
    Plain(usize),
    /// `τ_{2i-1,2i}` negating both coordinates.
    Twisted(usize),
}

/// Classifies a reflection as one of the pair families, pairing
/// coordinates `(1,2), (3,4), …`.
pub fn pair_family(s: &SignedPerm) -> Option<PairFamily> {
    let n = s.rank();
    (0..n / 2).find_map(|i| {
        let (a, b) = (2 * i, 2 * i + 1);
        if *s == SignedPerm::transposition(n, a, b) {
            Some(PairFamily::Plain(i))
        } else if *s == SignedPerm::twisted_transposition(n, a, b) {
            Some(PairFamily::Twisted(i))
        } else {
            None
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: char,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineVerdict {
    pub n: usize,
    pub depth: u32,
    pub steps: Vec<StepRecord>,
    pub centralizer_order: usize,
    pub identity_component_order: usize,
}

impl PipelineVerdict {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.passed)
    }
}

pub const MAX_PIPELINE_RANK: usize = 6;

fn step(step: char, name: &str, passed: bool, detail: String) -> StepRecord {
    StepRecord {
        step,
        name: name.to_string(),
        passed,
        detail,
    }
}

/// The finite group theory of the connectedness argument, step by step:
/// (a) census and reflection filtering, (b) the subgroup `V`, (c) `W_C`,
/// (d) its reflections, (e) `W_{C_0}`, (f) non-splitness over a pair.
pub fn connectedness_pipeline(n: usize, depth: u32) -> Result<PipelineVerdict> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "the connectedness pipeline needs n ≥ 3, got {n}"
        )));
    }
    if n > MAX_PIPELINE_RANK {
        return Err(Error::BoundExceeded {
            what: "pipeline rank",
            limit: MAX_PIPELINE_RANK,
            actual: n,
        });
    }
    let m = n / 2;
    let mut steps = Vec::new();

    let census = index2power_normal_subgroups(n)?;
    let survivors: Vec<u8> = census
        .iter()
        .filter(|s| reflection_closure(&s.group).same_elements(&s.group))
        .map(|s| s.label)
        .collect();
    let orders: Vec<usize> = census.iter().map(|s| s.group.order()).collect();
    steps.push(step(
        'a',
        "census and reflection filtering",
        census.len() == 5 && survivors == [3, 5],
        format!("orders {orders:?}, reflection-generated labels {survivors:?}"),
    ));

    let v = TorusSubgroup::paired_minus_ones(n);
    let half = crate::torus::DyadicAngle::HALF;
    let v_ok = v.order() == 1 << m
        && v.elements().iter().all(|t| {
            let c = t.coords();
            (0..m).all(|i| c[2 * i] == c[2 * i + 1] && (c[2 * i].is_zero() || c[2 * i] == half))
                && (n.is_multiple_of(2) || c[n - 1].is_zero())
        });
    steps.push(step(
        'b',
        "paired subgroup V",
        v_ok,
        format!("|V| = {}", v.order()),
    ));

    let w0 = census[2].group.clone();
    let wc = weyl_of_centralizer(&w0, &v)?;
    let even_signs = wc.filter(|x| x.perm() == (0..n).collect::<Vec<_>>())?;
    let perm_image: std::collections::BTreeSet<Vec<usize>> =
        wc.elements().iter().map(|x| x.perm()).collect();
    let pair_swaps = WeylSubgroup::generated(
        n,
        (0..m)
            .map(|i| SignedPerm::transposition(n, 2 * i, 2 * i + 1))
            .collect(),
    )?;
    let swaps_image: std::collections::BTreeSet<Vec<usize>> =
        pair_swaps.elements().iter().map(|x| x.perm()).collect();
    let c_ok = wc.order() == 1 << (n - 1 + m)
        && even_signs.order() == 1 << (n - 1)
        && even_signs.is_normal_in(&wc)
        && perm_image == swaps_image;
    steps.push(step(
        'c',
        "centralizer Weyl group",
        c_ok,
        format!(
            "|W_C| = {}, sign kernel {}, permutation image {}",
            wc.order(),
            even_signs.order(),
            perm_image.len()
        ),
    ));

    let refl = wc.reflections();
    let families: Vec<Option<PairFamily>> = refl.iter().map(pair_family).collect();
    let plain = families
        .iter()
        .filter(|f| matches!(f, Some(PairFamily::Plain(_))))
        .count();
    let twisted = families
        .iter()
        .filter(|f| matches!(f, Some(PairFamily::Twisted(_))))
        .count();
    steps.push(step(
        'd',
        "reflection families",
        families.iter().all(Option::is_some) && plain == m && twisted == m,
        format!("{} reflections: {plain} plain, {twisted} twisted", refl.len()),
    ));

    let wc0 = weyl_of_identity_component(&w0, &v, depth)?;
    let e_ok = wc0.order() == 1 << (2 * m) && wc0.is_elementary_abelian() && wc0.is_subgroup_of(&wc);
    steps.push(step(
        'e',
        "identity component Weyl group",
        e_ok,
        format!(
            "|W_C0| = {}, elementary abelian: {}",
            wc0.order(),
            wc0.is_elementary_abelian()
        ),
    ));

    let pair = WeylSubgroup::generated(
        n,
        vec![
            SignedPerm::transposition(n, 0, 1),
            SignedPerm::twisted_transposition(n, 0, 1),
        ],
    )?;
    let f_detail;
    let f_ok = match split_check(&pair, depth)? {
        SplitVerdict::NonSplit(SplitObstruction::Element {
            element, powers, ..
        }) => {
            // The pair coordinates of every square are (1/2, 1/2); the
            // remaining coordinates are free.
            let half_pair = |p: &TorusPoint| p.coords()[..2] == [half, half];
            f_detail = format!(
                "non-split: all {} squares of lifts of {element} are (1/2, 1/2) on the pair",
                powers.len()
            );
            element == SignedPerm::signs_only(n, &[0, 1]) && powers.iter().all(half_pair)
        }
        other => {
            f_detail = format!("unexpected verdict {other:?}");
            false
        }
    };
    steps.push(step('f', "non-split pair extension", f_ok, f_detail));

    debug_assert!(refl.iter().all(is_reflection));
    Ok(PipelineVerdict {
        n,
        depth,
        steps,
        centralizer_order: wc.order(),
        identity_component_order: wc0.order(),
    })
}
