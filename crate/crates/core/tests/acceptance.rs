//! Acceptance checks, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the terminal.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use sympn_core::centralizer::{weyl_of_centralizer, weyl_of_identity_component};
use sympn_core::cohomology::{
    elementary_regular, h1, h_cyclic, shapiro_reduce, wreath_permutation, FiniteAction,
};
use sympn_core::invariants::{
    f2_invariant_dims, f2_target_dims, invariant_dims_direct, molien, target_series,
};
use sympn_core::normalizer::{split_check, singular_sets, SingularKind, SplitObstruction, SplitVerdict};
use sympn_core::report::{pair_reflections, run_suite, Status, SuiteParams, SUITES};
use sympn_core::stubborn::{build, commutant_dimension, pd_split_check, structural_parts, GroupSpec};
use sympn_core::torus::{DyadicAngle, TorusSubgroup};
use sympn_core::weyl::{
    index2power_normal_subgroups, quillen_objects, quillen_oracle_class_count, reflection_closure,
    SignedPerm, WeylSubgroup,
};

/// Wall-clock limits.
const CENSUS_LIMIT: Duration = Duration::from_secs(5);
const CENTRALIZER_LIMIT_N5: Duration = Duration::from_secs(30);
/// Depth used for lifts and singular sets where one depth suffices.
const DEPTH: u32 = 3;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn census() -> Outcome {
    let mut details = Vec::new();
    for n in 3..=5usize {
        let start = Instant::now();
        let groups = index2power_normal_subgroups(n).map_err(err)?;
        let elapsed = start.elapsed();
        let w = WeylSubgroup::full(n).order();
        let orders: Vec<usize> = groups.iter().map(|g| g.group.order()).collect();
        let labels: Vec<u8> = groups.iter().map(|g| g.label).collect();
        ensure(labels == [1, 2, 3, 4, 5], || format!("n = {n}: labels {labels:?}"))?;
        ensure(orders == [w / 4, w / 2, w / 2, w / 2, w], || format!("n = {n}: orders {orders:?}"))?;
        ensure(elapsed < CENSUS_LIMIT, || format!("n = {n}: took {elapsed:?}"))?;
        details.push(format!("n={n} {orders:?}"));
    }
    Ok(details.join("; "))
}

fn reflection_filtering() -> Outcome {
    for n in 3..=5usize {
        let fixed: Vec<u8> = index2power_normal_subgroups(n)
            .map_err(err)?
            .iter()
            .filter(|g| reflection_closure(&g.group).same_elements(&g.group))
            .map(|g| g.label)
            .collect();
        ensure(fixed == [3, 5], || format!("n = {n}: fixed labels {fixed:?}"))?;
    }
    Ok("labels 3 and 5 for n = 3, 4, 5".into())
}

fn centralizers() -> Outcome {
    let mut details = Vec::new();
    for n in 3..=5usize {
        let start = Instant::now();
        let m = n / 2;
        let w0 = index2power_normal_subgroups(n).map_err(err)?.remove(2).group;
        let v = TorusSubgroup::paired_minus_ones(n);
        let wc = weyl_of_centralizer(&w0, &v).map_err(err)?;
        let wc0 = weyl_of_identity_component(&w0, &v, DEPTH).map_err(err)?;
        let elapsed = start.elapsed();
        ensure(wc.order() == 1 << (n - 1 + m), || format!("n = {n}: |W_C| = {}", wc.order()))?;
        ensure(wc0.order() == 1 << (2 * m) && wc0.is_elementary_abelian(), || {
            format!("n = {n}: |W_C0| = {}", wc0.order())
        })?;
        if n == 5 {
            ensure(elapsed < CENTRALIZER_LIMIT_N5, || format!("n = 5 took {elapsed:?}"))?;
        }
        details.push(format!("n={n} |W_C|={} |W_C0|={}", wc.order(), wc0.order()));
    }
    Ok(details.join("; "))
}

fn singular() -> Outcome {
    let mut count = 0;
    for n in 2..=4usize {
        let v = TorusSubgroup::paired_minus_ones(n);
        for s in pair_reflections(n) {
            let mut verdicts = Vec::new();
            for depth in [3, 4] {
                let sets = singular_sets(&s, depth).map_err(err)?;
                let sigma = sets.members(SingularKind::Union).map_err(err)?;
                let fixed = sets.members(SingularKind::Fixed).map_err(err)?;
                let inside = sets.contains_all(SingularKind::Union, &v);
                verdicts.push((sigma == fixed, inside));
            }
            ensure(verdicts.iter().all(|&(eq, inside)| eq && inside), || {
                format!("n = {n}, s = {s}: {verdicts:?}")
            })?;
            ensure(verdicts[0] == verdicts[1], || format!("n = {n}, s = {s}: depths disagree"))?;
            count += 1;
        }
    }
    Ok(format!("{count} reflections, σ = F and V ⊆ σ at depths 3 and 4"))
}

fn non_split() -> Outcome {
    let w = WeylSubgroup::generated(
        2,
        vec![SignedPerm::transposition(2, 0, 1), SignedPerm::twisted_transposition(2, 0, 1)],
    )
    .map_err(err)?;
    let half = DyadicAngle::HALF;
    match split_check(&w, DEPTH).map_err(err)? {
        SplitVerdict::NonSplit(SplitObstruction::Element { element, order, powers }) => {
            ensure(element == SignedPerm::signs_only(2, &[0, 1]) && order == 2, || {
                format!("certificate element {element} of order {order}")
            })?;
            ensure(
                !powers.is_empty() && powers.iter().all(|p| p.coords() == [half, half]),
                || format!("squares {powers:?}"),
            )?;
            Ok(format!("all lifts of {element} square to (1/2, 1/2)"))
        }
        other => Err(format!("verdict {other:?}")),
    }
}

fn is_regular(p: &sympn_core::stubborn::MonomialGroup) -> bool {
    let mut hit = vec![false; p.rank()];
    p.elements().iter().all(|g| !std::mem::replace(&mut hit[g.perm()[0]], true))
        && hit.iter().all(|&h| h)
}

fn stubborn() -> Outcome {
    for k in 0..=2u32 {
        let g = build(&GroupSpec::Gamma(k)).map_err(err)?;
        ensure(g.order() == 1 << (2 * k + 3), || format!("|Γ| = {} at k = {k}", g.order()))?;
        let s = pd_split_check(&g).map_err(err)?;
        ensure(s.split, || format!("k = {k}: {}", s.reason))?;
    }
    for k in 0..=3u32 {
        let e = build(&GroupSpec::E(k)).map_err(err)?;
        ensure(e.order() == 1 << k && is_regular(&e), || format!("E at k = {k}"))?;
    }
    Ok("Γ orders 8, 32, 128, all split; E regular for k ≤ 3".into())
}

fn commutants() -> Outcome {
    let mut details = Vec::new();
    for k in 0..=2u32 {
        let n = 1usize << k;
        let parts = structural_parts(&build(&GroupSpec::Gamma(k)).map_err(err)?);
        let ct = commutant_dimension(n, parts.torus.generators()).map_err(err)?;
        let cd = commutant_dimension(n, parts.diagonal.generators()).map_err(err)?;
        ensure(ct == 2 * n && cd == n, || format!("k = {k}: C(P_T) = {ct}, C(P_D) = {cd}"))?;
        details.push(format!("n={n} ({ct},{cd})"));
    }
    Ok(details.join("; "))
}

fn diag1(u: i64) -> Vec<Vec<i64>> {
    vec![vec![u]]
}

/// Every cyclic action on `Z/2^e` (`e ≤ 10`) and on every module of
/// order at most `2^4` with at most two exponents below 3, against the
/// cyclic formula.
fn cyclic_oracle_cases() -> Result<usize, String> {
    let mut tested = 0;
    for e in 1..=10u32 {
        for k in [1usize, 2, 4, 8] {
            for u in 0..1i64 << e {
                let Ok(a) = FiniteAction::cyclic(k, vec![e], diag1(u)) else {
                    continue;
                };
                let c = h_cyclic(k, &[e], &diag1(u)).map_err(err)?;
                ensure(h1(&a) == c.h1, || format!("Z/2^{e}, k = {k}, u = {u}"))?;
                tested += 1;
            }
        }
    }
    for exps in [vec![1, 1], vec![1, 2], vec![2, 2], vec![1, 3], vec![1, 1, 1]] {
        let d = exps.len();
        let modulus = 1i64 << exps.iter().max().unwrap();
        let total = (modulus as u64).pow((d * d) as u32);
        for code in 0..total {
            let mut c = code;
            let m: Vec<Vec<i64>> = (0..d)
                .map(|_| {
                    (0..d)
                        .map(|_| {
                            let x = (c % modulus as u64) as i64;
                            c /= modulus as u64;
                            x
                        })
                        .collect()
                })
                .collect();
            for k in [2usize, 4] {
                let Ok(a) = FiniteAction::cyclic(k, exps.clone(), m.clone()) else {
                    continue;
                };
                let cc = h_cyclic(k, &exps, &m).map_err(err)?;
                ensure(h1(&a) == cc.h1, || format!("{exps:?}, k = {k}, σ = {m:?}"))?;
                tested += 1;
            }
        }
    }
    Ok(tested)
}

fn cohomology() -> Outcome {
    let cyclic = cyclic_oracle_cases()?;
    let mut wreaths = 0;
    for k in 0..=3u32 {
        for r in 0..=k.min(2) {
            let size = 1usize << (k - r);
            let gens = wreath_permutation(size, &elementary_regular(k - r), r);
            let a = FiniteAction::permutation_module(1 << k, gens, 1).map_err(err)?;
            let blocks: Vec<Vec<usize>> =
                (0..1usize << r).map(|b| (b * size..(b + 1) * size).collect()).collect();
            let red = shapiro_reduce(&a, &blocks).map_err(err)?;
            ensure(h1(&a) == h1(&red), || format!("wreath k = {k}, r = {r}"))?;
            wreaths += 1;
        }
        let reg = FiniteAction::permutation_module(1 << k, elementary_regular(k), 1).map_err(err)?;
        ensure(h1(&reg).is_trivial(), || format!("regular module k = {k}: {}", h1(&reg)))?;
    }
    let report = run_suite(
        "cohomology-vanishing",
        &SuiteParams {
            k: Some(2),
            ..Default::default()
        },
    )
    .map_err(err)?;
    let inversion: Vec<_> = report.checks.iter().filter(|c| c.id.starts_with("inversion-h1")).collect();
    ensure(inversion.len() == 1 && inversion[0].status == Status::Flagged, || {
        format!("inversion records {inversion:?}")
    })?;
    ensure(report.passed(), || report.to_table())?;
    Ok(format!(
        "{cyclic} cyclic actions, {wreaths} wreath reductions, inversion case flagged ({})",
        inversion[0].computed
    ))
}

fn invariant_rings() -> Outcome {
    for n in 1..=4usize {
        let w = WeylSubgroup::full(n);
        ensure(molien(&w, 16) == target_series(n, 16), || format!("Molien n = {n}"))?;
    }
    for n in 1..=2usize {
        let w = WeylSubgroup::full(n);
        let m = molien(&w, 10).integer_coefficients().ok_or("non-integral Molien series")?;
        let d: Vec<i64> = invariant_dims_direct(&w, 10)
            .map_err(err)?
            .into_iter()
            .map(|x| x as i64)
            .collect();
        ensure(m == d, || format!("direct n = {n}: {m:?} vs {d:?}"))?;
    }
    for n in 1..=3usize {
        let f: Vec<i64> = f2_invariant_dims(n, 24)
            .map_err(err)?
            .into_iter()
            .map(|x| x as i64)
            .collect();
        ensure(f == f2_target_dims(n, 24), || format!("F_2 n = {n}: {f:?}"))?;
    }
    Ok("Molien = target (n ≤ 4), = direct (n ≤ 2), F_2 counts (n ≤ 3)".into())
}

fn quillen() -> Outcome {
    let q3 = quillen_objects(3).map_err(err)?;
    ensure(q3.counts.first() == Some(&3), || format!("rank-1 count {:?}", q3.counts))?;
    for n in 1..=4usize {
        let q = quillen_objects(n).map_err(err)?;
        let oracle = quillen_oracle_class_count(n).map_err(err)?;
        ensure(q.counts == oracle, || format!("n = {n}: {:?} vs {oracle:?}", q.counts))?;
    }
    Ok(format!("n=3 counts {:?}", q3.counts))
}

fn determinism() -> Outcome {
    let params = SuiteParams::default();
    for suite in SUITES {
        let a = run_suite(suite, &params).map_err(err)?.to_json();
        let b = run_suite(suite, &params).map_err(err)?.to_json();
        ensure(a == b, || format!("{suite} differs between runs"))?;
    }
    Ok(format!("{} suites byte-identical", SUITES.len()))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "normal-subgroup census", census),
        (2, "reflection filtering", reflection_filtering),
        (3, "centralizer Weyl groups", centralizers),
        (4, "singular sets", singular),
        (5, "non-split pair extension", non_split),
        (6, "stubborn structure", stubborn),
        (7, "commutant centralizers", commutants),
        (8, "cohomology oracle equivalence", cohomology),
        (9, "invariant rings", invariant_rings),
        (10, "Quillen skeleton", quillen),
        (11, "report determinism", determinism),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} [{ms} ms]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {detail} [{ms} ms]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
