//! Exact linear algebra used across the crate: row spaces over the
//! rationals (fraction-free, integer rows) and diagonalization over the
//! chain ring `Z/2^e`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Incremental row echelon basis over `Q`, stored as primitive integer rows.
#[derive(Clone, Debug, Default)]
pub struct RationalRowSpace {
    width: usize,
    rows: BTreeMap<usize, Vec<i128>>,
}

impl RationalRowSpace {
    pub fn new(width: usize) -> Self {
        RationalRowSpace {
            width,
            rows: BTreeMap::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn nullity(&self) -> usize {
        self.width - self.rank()
    }

    /// Adds a row; returns whether it was independent of the rows so far.
    pub fn insert(&mut self, row: &[i64]) -> Result<bool> {
        debug_assert_eq!(row.len(), self.width);
        let mut v: Vec<i128> = row.iter().map(|&x| x as i128).collect();
        for (&p, basis) in &self.rows {
            let c = v[p];
            if c == 0 {
                continue;
            }
            let b = basis[p];
            for (x, y) in v.iter_mut().zip(basis) {
                *x = b
                    .checked_mul(*x)
                    .and_then(|l| c.checked_mul(*y).and_then(|r| l.checked_sub(r)))
                    .ok_or(Error::Overflow("rational elimination"))?;
            }
            normalize(&mut v);
        }
        match v.iter().position(|&x| x != 0) {
            Some(p) => {
                normalize(&mut v);
                self.rows.insert(p, v);
                Ok(true)
            }
            None => Ok(false),
        }
    }
}

fn normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, &x| gcd(g, x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
    if let Some(&lead) = v.iter().find(|&&x| x != 0) {
        if lead < 0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Rank over `Q` of a list of integer rows.
pub fn rational_rank(rows: &[Vec<i64>], width: usize) -> Result<usize> {
    let mut space = RationalRowSpace::new(width);
    for r in rows {
        space.insert(r)?;
    }
    Ok(space.rank())
}

/// Arithmetic in `Z/2^e`, `1 ≤ e ≤ 63`. Elements are reduced `u64`s.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mod2k {
    e: u32,
    mask: u64,
}

impl Mod2k {
    pub fn new(e: u32) -> Result<Self> {
        if !(1..=63).contains(&e) {
            return Err(Error::InvalidParameter(format!(
                "modulus exponent {e} outside 1..=63"
            )));
        }
        Ok(Mod2k {
            e,
            mask: (1u64 << e) - 1,
        })
    }

    pub fn exponent(self) -> u32 {
        self.e
    }

    pub fn reduce_i64(self, x: i64) -> u64 {
        (x as u64) & self.mask
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        a.wrapping_add(b) & self.mask
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        a.wrapping_sub(b) & self.mask
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        a.wrapping_mul(b) & self.mask
    }

    /// 2-adic valuation, `e` for zero.
    pub fn val(self, a: u64) -> u32 {
        if a == 0 {
            self.e
        } else {
            a.trailing_zeros()
        }
    }

    fn unit_inverse(self, u: u64) -> u64 {
        debug_assert!(u & 1 == 1);
        let mut x = u;
        for _ in 0..6 {
            x = x.wrapping_mul(2u64.wrapping_sub(u.wrapping_mul(x)));
        }
        x & self.mask
    }
}

/// Result of diagonalizing a matrix over `Z/2^e` by row operations and
/// column operations, `U·A·V = diag(2^{s_0}, …)`. Only `V⁻¹` is recorded,
/// and only on request.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    ring: Mod2k,
    rows: usize,
    cols: usize,
    /// Valuations of the pivots, in pivot order.
    pivots: Vec<u32>,
    v_inv: Option<Vec<Vec<u64>>>,
}

impl Diagonalization {
    /// Diagonalizes `a` (`rows × cols`). Column transforms are recorded only
    /// when `track` is set.
    pub fn new(ring: Mod2k, mut a: Vec<Vec<u64>>, cols: usize, track: bool) -> Self {
        let rows = a.len();
        a.retain(|r| r.iter().any(|&x| x != 0));
        let mut v_inv = track.then(|| identity(cols));
        let mut pivots = Vec::new();
        // Column permutation, applied lazily via an index map.
        let mut col_of: Vec<usize> = (0..cols).collect();
        let mut k = 0usize;
        while k < cols && !a.is_empty() {
            // pivot of minimal valuation among remaining rows and columns
            let mut best: Option<(u32, usize, usize)> = None;
            'search: for (i, row) in a.iter().enumerate() {
                for (jj, &c) in col_of[k..].iter().enumerate() {
                    let x = row[c];
                    if x != 0 {
                        let s = x.trailing_zeros();
                        if best.is_none_or(|(bs, _, _)| s < bs) {
                            best = Some((s, i, k + jj));
                            if s == 0 {
                                break 'search;
                            }
                        }
                    }
                }
            }
            let Some((s, i, j)) = best else { break };
            col_of.swap(k, j);
            if let Some(vi) = v_inv.as_mut() {
                vi.swap(k, j);
            }
            let mut prow = a.swap_remove(i);
            let pc = col_of[k];
            let unit = prow[pc] >> s;
            let inv = ring.unit_inverse(unit);
            for x in prow.iter_mut() {
                *x = ring.mul(*x, inv);
            }
            // clear the pivot column in the remaining rows
            a.retain_mut(|row| {
                let x = row[pc];
                if x != 0 {
                    let f = x >> s;
                    for (y, &p) in row.iter_mut().zip(&prow) {
                        if p != 0 {
                            *y = ring.sub(*y, ring.mul(f, p));
                        }
                    }
                }
                row.iter().any(|&x| x != 0)
            });
            // clear the pivot row by column operations
            if let Some(vi) = v_inv.as_mut() {
                for jj in (k + 1)..cols {
                    let x = prow[col_of[jj]];
                    if x == 0 {
                        continue;
                    }
                    let f = x >> s;
                    let (lo, hi) = vi.split_at_mut(jj);
                    let rk = &mut lo[k];
                    let rj = &hi[0];
                    for (a, &b) in rk.iter_mut().zip(rj) {
                        *a = ring.add(*a, ring.mul(f, b));
                    }
                }
            }
            pivots.push(s);
            k += 1;
        }
        Diagonalization {
            ring,
            rows,
            cols,
            pivots,
            v_inv,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Valuation of diagonal slot `k` for every column, `e` for slots with
    /// no pivot.
    fn column_valuations(&self) -> Vec<u32> {
        (0..self.cols)
            .map(|k| self.pivots.get(k).copied().unwrap_or(self.ring.exponent()))
            .collect()
    }

    /// Exponents of the cyclic factors of the cokernel `R^rows / A·R^cols`.
    pub fn cokernel_exponents(&self) -> Vec<u32> {
        let e = self.ring.exponent();
        let mut out: Vec<u32> = self.pivots.iter().copied().filter(|&s| s > 0).collect();
        out.extend(std::iter::repeat_n(e, self.rows - self.rank()));
        out.sort_unstable();
        out
    }

    /// `log2` of the cokernel order.
    pub fn cokernel_log_order(&self) -> u64 {
        self.cokernel_exponents().iter().map(|&x| x as u64).sum()
    }
}

fn identity(n: usize) -> Vec<Vec<u64>> {
    (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect()
}

/// Exponents `[a_1 ≤ a_2 ≤ …]` of `ker(A) / ⟨gens⟩` over `Z/2^e`, where the
/// kernel is taken in `(Z/2^e)^cols` and every generator must lie in it.
pub fn kernel_subquotient(
    ring: Mod2k,
    constraints: Vec<Vec<u64>>,
    cols: usize,
    gens: &[Vec<u64>],
) -> Result<Vec<u32>> {
    let e = ring.exponent();
    let d = Diagonalization::new(ring, constraints, cols, true);
    let vals = d.column_valuations();
    let v_inv = d.v_inv.as_ref().expect("tracked");
    // kernel in y = V⁻¹x coordinates is ⊕ 2^{e-s_k}R ≅ ⊕ Z/2^{s_k}
    let live: Vec<usize> = (0..cols).filter(|&k| vals[k] > 0).collect();
    let mut relations: Vec<Vec<u64>> = live
        .iter()
        .enumerate()
        .map(|(r, &k)| {
            let mut row = vec![0u64; live.len()];
            row[r] = if vals[k] >= e { 0 } else { 1u64 << vals[k] };
            row
        })
        .collect();
    for g in gens {
        debug_assert_eq!(g.len(), cols);
        let y: Vec<u64> = v_inv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(g)
                    .fold(0u64, |acc, (&a, &b)| ring.add(acc, ring.mul(a, b)))
            })
            .collect();
        for k in 0..cols {
            let shift = e - vals[k];
            if shift > 0 && y[k] & ((1u64 << shift) - 1) != 0 {
                return Err(Error::InvalidParameter(
                    "subquotient generator lies outside the kernel".into(),
                ));
            }
        }
        for (r, &k) in live.iter().enumerate() {
            relations[r].push(y[k] >> (e - vals[k]));
        }
    }
    let width = relations.first().map_or(0, |r| r.len());
    let q = Diagonalization::new(ring, relations, width, false);
    // rows here are the live kernel slots
    Ok(q.cokernel_exponents())
}

/// Whether `A·x = b` has a solution over `Z/2^e`.
pub fn solvable(ring: Mod2k, a: &[Vec<u64>], cols: usize, b: &[u64]) -> bool {
    let base = Diagonalization::new(ring, a.to_vec(), cols, false);
    let aug: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let ext = Diagonalization::new(ring, aug, cols + 1, false);
    base.cokernel_log_order() == ext.cokernel_log_order()
}

/// Whole-matrix rank over `F_2`.
pub fn f2_rank(rows: Vec<Vec<u64>>, cols: usize) -> usize {
    let ring = Mod2k::new(1).expect("valid");
    Diagonalization::new(ring, rows, cols, false).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_rank_basic() {
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rational_rank(&rows, 3).unwrap(), 2);
        let rows = vec![vec![2, 0], vec![0, 3]];
        assert_eq!(rational_rank(&rows, 2).unwrap(), 2);
    }

    #[test]
    fn unit_inverse_mod_2k() {
        let r = Mod2k::new(20).unwrap();
        for u in (1u64..200).step_by(2) {
            assert_eq!(r.mul(u, r.unit_inverse(u)), 1);
        }
    }

    #[test]
    fn cokernel_of_diagonal() {
        // Z/16 modulo 2·Z/16 and 4·Z/16
        let r = Mod2k::new(4).unwrap();
        let d = Diagonalization::new(r, vec![vec![2, 0], vec![0, 4]], 2, false);
        assert_eq!(d.cokernel_exponents(), vec![1, 2]);
        let d = Diagonalization::new(r, vec![vec![6, 4]], 2, false);
        assert_eq!(d.cokernel_exponents(), vec![1]);
    }

    #[test]
    fn subquotient_of_z4_inversion() {
        // H^1(Z/2; Z/4 with inversion) = ker(N)/im(σ-1) with N = 0, σ-1 = -2
        let r = Mod2k::new(2).unwrap();
        let shape = kernel_subquotient(r, vec![vec![0]], 1, &[vec![r.reduce_i64(-2)]]).unwrap();
        assert_eq!(shape, vec![1]);
        // fixed points of inversion on Z/4: kernel of (σ-1) = {0, 2}
        let shape = kernel_subquotient(r, vec![vec![r.reduce_i64(-2)]], 1, &[]).unwrap();
        assert_eq!(shape, vec![1]);
    }

    #[test]
    fn solvability() {
        let r = Mod2k::new(3).unwrap();
        let a = vec![vec![2, 0], vec![0, 0]];
        assert!(solvable(r, &a, 2, &[4, 0]));
        assert!(!solvable(r, &a, 2, &[1, 0]));
        assert!(!solvable(r, &a, 2, &[0, 2]));
    }
}
