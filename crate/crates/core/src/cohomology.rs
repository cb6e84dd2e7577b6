//! Low-degree cohomology of finite groups with coefficients in finite
//! abelian 2-groups `⊕ Z/2^{e_i}`.
//!
//! The group is given by generating permutations and the module by an
//! integer matrix for each generator; both are closed up to every group
//! element, checking the group law along the way.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::linalg::{kernel_subquotient, Mod2k};
use crate::weyl::parse_cycles;

pub const MAX_GROUP_ORDER: usize = 512;
/// Bound on `Σ e_i`, i.e. `log2 |M|`.
pub const MAX_MODULE_LOG: u32 = 24;

type Perm = Vec<u32>;
type Matrix = Vec<Vec<i64>>;

/// A finite abelian 2-group `⊕ Z/2^{a_i}`, trivial factors dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroupShape {
    exponents: Vec<u32>,
}

impl AbelianGroupShape {
    pub fn from_exponents(mut exponents: Vec<u32>) -> Self {
        exponents.retain(|&e| e > 0);
        exponents.sort_unstable();
        AbelianGroupShape { exponents }
    }

    pub fn trivial() -> Self {
        AbelianGroupShape { exponents: Vec::new() }
    }

    /// `(Z/2^e)^count`.
    pub fn homogeneous(e: u32, count: usize) -> Self {
        Self::from_exponents(vec![e; count])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Elementary divisors `2^{a_i}`, increasing.
    pub fn divisors(&self) -> Vec<u64> {
        self.exponents.iter().map(|&e| 1u64 << e).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn log2_order(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Shape of a finite abelian 2-group from the number of its elements
    /// killed by each power of 2.
    pub fn from_torsion_counts(counts: &[usize]) -> Self {
        // counts[i] = |M[2^i]|; the number of cyclic factors of order at
        // least 2^{i+1} is log2(counts[i+1] / counts[i]).
        let logs: Vec<u32> = counts.iter().map(|c| c.trailing_zeros()).collect();
        let mut exps = Vec::new();
        for i in 0..logs.len().saturating_sub(1) {
            let at_least = logs[i + 1] - logs[i];
            let next = if i + 2 < logs.len() {
                logs[i + 2] - logs[i + 1]
            } else {
                0
            };
            exps.extend(std::iter::repeat_n(i as u32 + 1, (at_least - next) as usize));
        }
        Self::from_exponents(exps)
    }
}

impl fmt::Display for AbelianGroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "0");
        }
        let mut runs: Vec<(u32, usize)> = Vec::new();
        for &e in &self.exponents {
            match runs.last_mut() {
                Some((x, c)) if *x == e => *c += 1,
                _ => runs.push((e, 1)),
            }
        }
        for (i, (e, c)) in runs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *c > 1 {
                write!(f, "(Z/{})^{c}", 1u64 << e)?;
            } else {
                write!(f, "Z/{}", 1u64 << e)?;
            }
        }
        Ok(())
    }
}

/// A finite permutation group acting on `⊕ Z/2^{e_i}` by integer matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAction {
    degree: usize,
    /// Sorted; the identity comes first.
    elements: Vec<Perm>,
    /// Indices of the generators in `elements`.
    generators: Vec<usize>,
    exponents: Vec<u32>,
    /// Reduced action matrix of each element; row `i` modulo `2^{e_i}`.
    matrices: Vec<Matrix>,
}

fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn reduce(m: &Matrix, exps: &[u32]) -> Matrix {
    m.iter()
        .zip(exps)
        .map(|(row, &e)| row.iter().map(|&x| x.rem_euclid(1 << e)).collect())
        .collect()
}

fn mat_mul(a: &Matrix, b: &Matrix, exps: &[u32]) -> Matrix {
    let n = exps.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        let modulus = 1i64 << exps[i];
        for j in 0..n {
            let mut acc = 0i64;
            for k in 0..n {
                acc = (acc + a[i][k] * b[k][j]).rem_euclid(modulus);
            }
            out[i][j] = acc;
        }
    }
    out
}

fn identity_matrix(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn check_module(exps: &[u32]) -> Result<()> {
    let total: u32 = exps.iter().sum();
    if total > MAX_MODULE_LOG {
        return Err(Error::BoundExceeded {
            what: "module size (log2)",
            limit: MAX_MODULE_LOG as usize,
            actual: total as usize,
        });
    }
    if exps.contains(&0) {
        return Err(Error::InvalidParameter("module divisors must be at least 2".into()));
    }
    Ok(())
}

/// Whether `m` defines an endomorphism of `⊕ Z/2^{e_i}`: entry `(i, j)`
/// must be divisible by `2^{e_i - e_j}` when `e_i > e_j`.
fn is_homomorphism(m: &Matrix, exps: &[u32]) -> bool {
    let n = exps.len();
    m.len() == n
        && m.iter().all(|r| r.len() == n)
        && (0..n).all(|i| {
            (0..n).all(|j| exps[i] <= exps[j] || m[i][j] % (1 << (exps[i] - exps[j])) == 0)
        })
}

impl FiniteAction {
    /// Closes the generators (permutations of `0..degree`, images listed)
    /// and their action matrices to the whole group.
    pub fn new(
        degree: usize,
        generators: Vec<Vec<usize>>,
        exponents: Vec<u32>,
        matrices: Vec<Matrix>,
    ) -> Result<Self> {
        check_module(&exponents)?;
        if generators.len() != matrices.len() {
            return Err(Error::InvalidAction(format!(
                "{} generators but {} matrices",
                generators.len(),
                matrices.len()
            )));
        }
        let mut gens: Vec<Perm> = Vec::new();
        for g in &generators {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InvalidAction(format!("{g:?} is not a permutation of {degree} points")));
            }
            gens.push(g.iter().map(|&x| x as u32).collect());
        }
        let mut gen_mats = Vec::new();
        for m in &matrices {
            if !is_homomorphism(m, &exponents) {
                return Err(Error::InvalidAction(format!(
                    "matrix {m:?} is not an endomorphism of the module"
                )));
            }
            gen_mats.push(reduce(m, &exponents));
        }
        let n = exponents.len();
        let id: Perm = (0..degree as u32).collect();
        let mut found: BTreeMap<Perm, Matrix> = BTreeMap::from([(id.clone(), identity_matrix(n))]);
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            let ax = found[&x].clone();
            for (g, ag) in gens.iter().zip(&gen_mats) {
                let y = compose(&x, g);
                let ay = mat_mul(&ax, ag, &exponents);
                match found.get(&y) {
                    Some(existing) if *existing != ay => {
                        return Err(Error::InvalidAction(
                            "generator matrices do not satisfy the group's relations".into(),
                        ));
                    }
                    Some(_) => {}
                    None => {
                        if found.len() >= MAX_GROUP_ORDER {
                            return Err(Error::BoundExceeded {
                                what: "group order",
                                limit: MAX_GROUP_ORDER,
                                actual: found.len() + 1,
                            });
                        }
                        found.insert(y.clone(), ay);
                        frontier.push(y);
                    }
                }
            }
        }
        let elements: Vec<Perm> = found.keys().cloned().collect();
        let matrices = found.into_values().collect();
        let generators = gens
            .iter()
            .map(|g| elements.binary_search(g).expect("closed"))
            .collect();
        Ok(FiniteAction {
            degree,
            elements,
            generators,
            exponents,
            matrices,
        })
    }

    /// `(Z/2^e)^degree` permuted by the group: `g·e_i = e_{g(i)}`.
    pub fn permutation_module(degree: usize, generators: Vec<Vec<usize>>, e: u32) -> Result<Self> {
        let matrices = generators
            .iter()
            .map(|g| {
                let mut m = vec![vec![0i64; degree]; degree];
                for (i, &gi) in g.iter().enumerate() {
                    if gi < degree {
                        m[gi][i] = 1;
                    }
                }
                m
            })
            .collect();
        Self::new(degree, generators, vec![e; degree], matrices)
    }

    /// `Z/k` generated by a `k`-cycle acting through `sigma`.
    pub fn cyclic(k: usize, exponents: Vec<u32>, sigma: Matrix) -> Result<Self> {
        let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
        Self::new(k, vec![cycle], exponents, vec![sigma])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn module_shape(&self) -> AbelianGroupShape {
        AbelianGroupShape::from_exponents(self.exponents.clone())
    }

    pub fn elements(&self) -> &[Vec<u32>] {
        &self.elements
    }

    pub fn generator_perms(&self) -> Vec<&[u32]> {
        self.generators.iter().map(|&g| self.elements[g].as_slice()).collect()
    }

    pub fn generator_matrices(&self) -> Vec<&Matrix> {
        self.generators.iter().map(|&g| &self.matrices[g]).collect()
    }

    /// `(element, matrix)` for every group element.
    pub fn action(&self) -> impl Iterator<Item = (&[u32], &Matrix)> {
        self.elements
            .iter()
            .map(Vec::as_slice)
            .zip(self.matrices.iter())
    }

    fn index(&self, p: &Perm) -> usize {
        self.elements.binary_search(p).expect("element of the group")
    }

    fn ring(&self) -> Mod2k {
        let e = self.exponents.iter().copied().max().unwrap_or(1);
        Mod2k::new(e.max(1)).expect("bounded exponent")
    }

    /// Generators of `Rel`: `2^{e_i}·e_i` in each of `blocks` copies of the
    /// module, lifted to `(Z/2^E)^{blocks·n}`.
    fn relations(&self, blocks: usize, ring: Mod2k) -> Vec<Vec<u64>> {
        let n = self.exponents.len();
        let e_max = ring.exponent();
        let mut out = Vec::new();
        for b in 0..blocks {
            for (i, &e) in self.exponents.iter().enumerate() {
                if e < e_max {
                    let mut v = vec![0u64; blocks * n];
                    v[b * n + i] = 1 << e;
                    out.push(v);
                }
            }
        }
        out
    }

    /// Scale factor turning "≡ 0 mod 2^{e_i}" into "≡ 0 mod 2^E".
    fn row_scale(&self, i: usize, ring: Mod2k) -> i64 {
        1 << (ring.exponent() - self.exponents[i])
    }
}

/// Generators of `E_{2^k}` acting regularly on `0..2^k`: `x ↦ x XOR 2^r`.
pub fn elementary_regular(k: u32) -> Vec<Vec<usize>> {
    let n = 1usize << k;
    (0..k).map(|r| (0..n).map(|x| x ^ (1 << r)).collect()).collect()
}

/// Generators of `K ≀ E_{2^r}` on `2^r` blocks of `degree` points: the
/// generators of `K` acting on block 0, then the block translations.
pub fn wreath_permutation(degree: usize, inner: &[Vec<usize>], r: u32) -> Vec<Vec<usize>> {
    let blocks = 1usize << r;
    let total = degree * blocks;
    let mut out: Vec<Vec<usize>> = inner
        .iter()
        .map(|g| (0..total).map(|x| if x < degree { g[x] } else { x }).collect())
        .collect();
    for b in elementary_regular(r) {
        out.push((0..total).map(|x| b[x / degree] * degree + x % degree).collect());
    }
    out
}

/// `M^G`.
pub fn h0(a: &FiniteAction) -> AbelianGroupShape {
    let ring = a.ring();
    let n = a.exponents.len();
    let mut rows = Vec::new();
    for m in a.generator_matrices() {
        for i in 0..n {
            let s = a.row_scale(i, ring);
            rows.push(
                (0..n)
                    .map(|j| ring.reduce_i64(s * (m[i][j] - i64::from(i == j))))
                    .collect(),
            );
        }
    }
    let exps = kernel_subquotient(ring, rows, n, &a.relations(1, ring)).expect("relations lie in the kernel");
    AbelianGroupShape::from_exponents(exps)
}

/// `H¹(G; M)` as crossed homomorphisms modulo principal ones.
///
/// A crossed homomorphism is determined by its values `y_s` on the
/// generators: along a spanning tree of the Cayley graph,
/// `f(gs) = f(g) + g·f(s)` expresses every `f(g)` linearly in `y`, and the
/// remaining edges give the constraints. Imposing the identity on all
/// edges `(g, s)` is equivalent to imposing it on all pairs, by induction
/// on word length.
pub fn h1(a: &FiniteAction) -> AbelianGroupShape {
    let ring = a.ring();
    let n = a.exponents.len();
    let k = a.generators.len();
    let cols = k * n;
    if cols == 0 {
        return AbelianGroupShape::trivial();
    }
    let order = a.order();
    // t[g] is the n × cols matrix with f(g) = t[g]·y.
    let mut t: Vec<Option<Vec<Vec<i64>>>> = vec![None; order];
    t[0] = Some(vec![vec![0; cols]; n]);
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut queue = std::collections::VecDeque::from([0usize]);
    let modulus = 1i64 << ring.exponent();
    while let Some(g) = queue.pop_front() {
        let tg = t[g].clone().expect("visited");
        let ag = &a.matrices[g];
        for (s_idx, &s) in a.generators.iter().enumerate() {
            let h = a.index(&compose(&a.elements[g], &a.elements[s]));
            // f(g) + g·y_s
            let mut rhs = tg.clone();
            for i in 0..n {
                for j in 0..n {
                    let c = ag[i][j];
                    if c != 0 {
                        let col = s_idx * n + j;
                        rhs[i][col] = (rhs[i][col] + c).rem_euclid(modulus);
                    }
                }
            }
            match &t[h] {
                None => {
                    t[h] = Some(rhs);
                    queue.push_back(h);
                }
                Some(th) => {
                    for i in 0..n {
                        let scale = a.row_scale(i, ring);
                        let row: Vec<u64> = (0..cols)
                            .map(|c| ring.reduce_i64(scale * (th[i][c] - rhs[i][c])))
                            .collect();
                        if row.iter().any(|&x| x != 0) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    // Principal crossed homomorphisms: y_s = s·m - m.
    let mut gens = a.relations(k, ring);
    for j in 0..n {
        let mut v = vec![0u64; cols];
        for (s_idx, &s) in a.generators.iter().enumerate() {
            for i in 0..n {
                let x = a.matrices[s][i][j] - i64::from(i == j);
                v[s_idx * n + i] = ring.reduce_i64(x);
            }
        }
        gens.push(v);
    }
    let exps = kernel_subquotient(ring, rows, cols, &gens).expect("coboundaries are cocycles");
    AbelianGroupShape::from_exponents(exps)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicCohomology {
    pub h0: AbelianGroupShape,
    pub h1: AbelianGroupShape,
    pub h2: AbelianGroupShape,
}

/// Cohomology of `Z/k` acting through `sigma` on `⊕ Z/2^{e_i}`, from the
/// periodic resolution: `H¹ = ker N / im(σ-1)`, `H² = ker(σ-1) / im N`.
pub fn h_cyclic(k: usize, exponents: &[u32], sigma: &Matrix) -> Result<CyclicCohomology> {
    check_module(exponents)?;
    if k == 0 {
        return Err(Error::InvalidParameter("cyclic order must be positive".into()));
    }
    if !is_homomorphism(sigma, exponents) {
        return Err(Error::InvalidAction("σ is not an endomorphism of the module".into()));
    }
    let n = exponents.len();
    let sigma = reduce(sigma, exponents);
    let mut powers = vec![identity_matrix(n)];
    for _ in 1..k {
        let next = mat_mul(powers.last().expect("nonempty"), &sigma, exponents);
        powers.push(next);
    }
    if mat_mul(&powers[k - 1], &sigma, exponents) != identity_matrix(n) {
        return Err(Error::InvalidAction(format!("σ does not have order dividing {k}")));
    }
    let ring = Mod2k::new(exponents.iter().copied().max().unwrap_or(1)).expect("bounded");
    let e_max = ring.exponent();
    let norm: Matrix = (0..n)
        .map(|i| (0..n).map(|j| powers.iter().map(|p| p[i][j]).sum()).collect())
        .collect();
    let minus: Matrix = (0..n)
        .map(|i| (0..n).map(|j| sigma[i][j] - i64::from(i == j)).collect())
        .collect();
    let constraint = |m: &Matrix| -> Vec<Vec<u64>> {
        (0..n)
            .map(|i| {
                let s = 1i64 << (e_max - exponents[i]);
                (0..n).map(|j| ring.reduce_i64(s * m[i][j])).collect()
            })
            .collect()
    };
    let image = |m: &Matrix| -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = (0..n)
            .map(|j| (0..n).map(|i| ring.reduce_i64(m[i][j])).collect())
            .collect();
        for (i, &e) in exponents.iter().enumerate() {
            if e < e_max {
                let mut v = vec![0; n];
                v[i] = 1 << e;
                out.push(v);
            }
        }
        out
    };
    let rel = image(&vec![vec![0; n]; n]);
    let sub = |ker: &Matrix, im: &[Vec<u64>]| {
        kernel_subquotient(ring, constraint(ker), n, im)
            .map(AbelianGroupShape::from_exponents)
            .expect("N(σ-1) = 0")
    };
    Ok(CyclicCohomology {
        h0: sub(&minus, &rel),
        h1: sub(&norm, &image(&minus)),
        h2: sub(&minus, &image(&norm)),
    })
}

/// The block stabilizer's action on the first block.
///
/// `blocks` partitions the module coordinates; every group element must
/// carry each block onto a block, transitively. By Shapiro's lemma the
/// result has the same `H¹`.
pub fn shapiro_reduce(a: &FiniteAction, blocks: &[Vec<usize>]) -> Result<FiniteAction> {
    let n = a.exponents.len();
    let mut owner = vec![usize::MAX; n];
    for (b, block) in blocks.iter().enumerate() {
        for &c in block {
            if c >= n || owner[c] != usize::MAX {
                return Err(Error::InvalidAction(format!(
                    "blocks must partition the {n} module coordinates"
                )));
            }
            owner[c] = b;
        }
    }
    if owner.contains(&usize::MAX) || blocks.iter().any(Vec::is_empty) {
        return Err(Error::InvalidAction(format!(
            "blocks must partition the {n} module coordinates"
        )));
    }
    // Image block of each block under each element.
    let mut image_of = vec![vec![0usize; blocks.len()]; a.order()];
    for (g, m) in a.matrices.iter().enumerate() {
        for (b, block) in blocks.iter().enumerate() {
            let mut target: Option<usize> = None;
            for &c in block {
                for r in 0..n {
                    if m[r][c] != 0 {
                        match target {
                            None => target = Some(owner[r]),
                            Some(t) if t != owner[r] => {
                                return Err(Error::InvalidAction(
                                    "the action does not respect the blocks".into(),
                                ))
                            }
                            _ => {}
                        }
                    }
                }
            }
            image_of[g][b] = target.ok_or_else(|| {
                Error::InvalidAction("an element kills a whole block".into())
            })?;
        }
    }
    let reached: HashSet<usize> = image_of.iter().map(|im| im[0]).collect();
    if reached.len() != blocks.len() {
        return Err(Error::InvalidAction("blocks are not permuted transitively".into()));
    }
    for im in &image_of {
        let distinct: HashSet<usize> = im.iter().copied().collect();
        if distinct.len() != blocks.len() {
            return Err(Error::InvalidAction("the action does not permute the blocks".into()));
        }
    }
    let block0 = &blocks[0];
    let stab: Vec<usize> = (0..a.order()).filter(|&g| image_of[g][0] == 0).collect();
    // Greedy generating set of the stabilizer.
    let mut gens: Vec<usize> = Vec::new();
    let mut span: HashSet<Perm> = HashSet::from([a.elements[0].clone()]);
    for &g in &stab {
        if span.contains(&a.elements[g]) {
            continue;
        }
        gens.push(g);
        let mut frontier: Vec<Perm> = span.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for &s in &gens {
                let y = compose(&x, &a.elements[s]);
                if span.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
    }
    let exps: Vec<u32> = block0.iter().map(|&c| a.exponents[c]).collect();
    let perms = gens
        .iter()
        .map(|&g| a.elements[g].iter().map(|&x| x as usize).collect())
        .collect();
    let mats = gens
        .iter()
        .map(|&g| {
            block0
                .iter()
                .map(|&r| block0.iter().map(|&c| a.matrices[g][r][c]).collect())
                .collect()
        })
        .collect();
    FiniteAction::new(a.degree, perms, exps, mats)
}

/// Parsed cohomology input: an action and optional Shapiro blocks.
#[derive(Clone, Debug)]
pub struct CohomologyInput {
    pub action: FiniteAction,
    pub blocks: Option<Vec<Vec<usize>>>,
}

fn parse_ints(text: &str, at: usize) -> Result<Vec<i64>> {
    text.split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|_| parse_err(at, format!("bad integer `{t}`"))))
        .collect()
}

/// Parses the text format:
///
/// ```text
/// degree: 2
/// module: 2 2
/// gen: (1 2) | 0 1; 1 0
/// blocks: 1 | 2
/// ```
///
/// `module` lists the divisors `2^{e_i}`; each `gen` line is a permutation
/// in cycle notation followed by the rows of its action matrix. `#` starts
/// a comment. Positions in errors are byte offsets into the input.
pub fn parse_action(text: &str) -> Result<CohomologyInput> {
    let mut degree: Option<usize> = None;
    let mut exps: Option<Vec<u32>> = None;
    let mut gens: Vec<(usize, String, String)> = Vec::new();
    let mut blocks: Option<(usize, String)> = None;
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let line_start = offset;
        offset += raw.len();
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| parse_err(line_start, "expected `key: value`"))?;
        let at = line_start + key.len() + 1;
        match key.trim() {
            "degree" => {
                degree = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|_| parse_err(at, "bad degree"))?,
                )
            }
            "module" => {
                let divs = parse_ints(value, at)?;
                let mut e = Vec::new();
                for d in divs {
                    if d < 2 || d & (d - 1) != 0 {
                        return Err(parse_err(at, format!("divisor {d} is not a power of 2 above 1")));
                    }
                    e.push(d.trailing_zeros());
                }
                exps = Some(e);
            }
            "gen" => {
                let (perm, mat) = value
                    .split_once('|')
                    .ok_or_else(|| parse_err(at, "expected `cycles | matrix rows`"))?;
                gens.push((at, perm.to_string(), mat.to_string()));
            }
            "blocks" => blocks = Some((at, value.to_string())),
            other => return Err(parse_err(line_start, format!("unknown key `{other}`"))),
        }
    }
    let degree = degree.ok_or_else(|| parse_err(0, "missing `degree`"))?;
    let exps = exps.ok_or_else(|| parse_err(0, "missing `module`"))?;
    let n = exps.len();
    let mut perms = Vec::new();
    let mut mats = Vec::new();
    for (at, perm, mat) in gens {
        perms.push(parse_cycles(&perm, degree, at)?);
        let rows: Vec<Vec<i64>> = mat
            .split(';')
            .map(|r| parse_ints(r, at))
            .collect::<Result<_>>()?;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(parse_err(at, format!("matrix must be {n} × {n}")));
        }
        mats.push(rows);
    }
    let action = FiniteAction::new(degree, perms, exps, mats)?;
    let blocks = match blocks {
        None => None,
        Some((at, text)) => Some(
            text.split('|')
                .map(|b| {
                    parse_ints(b, at)?
                        .into_iter()
                        .map(|c| {
                            usize::try_from(c - 1)
                                .ok()
                                .filter(|&c| c < n)
                                .ok_or_else(|| parse_err(at, format!("block entry {c} out of range")))
                        })
                        .collect()
                })
                .collect::<Result<_>>()?,
        ),
    };
    Ok(CohomologyInput { action, blocks })
}

impl fmt::Display for FiniteAction {
    /// The text format read by [`parse_action`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degree: {}", self.degree)?;
        let divs: Vec<String> = self.exponents.iter().map(|&e| (1u64 << e).to_string()).collect();
        writeln!(f, "module: {}", divs.join(" "))?;
        for (p, m) in self.generator_perms().into_iter().zip(self.generator_matrices()) {
            let perm: Vec<usize> = p.iter().map(|&x| x as usize).collect();
            let sp = crate::weyl::SignedPerm::from_parts(&perm, &vec![false; perm.len()])
                .map_err(|_| fmt::Error)?;
            let cycles = sp.to_string();
            let cycles = cycles.split('|').next().unwrap_or("()");
            let rows: Vec<String> = m
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            writeln!(f, "gen: {cycles} | {}", rows.join("; "))?;
        }
        Ok(())
    }
}
