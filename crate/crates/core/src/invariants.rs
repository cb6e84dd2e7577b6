//! Poincaré series of invariant rings of signed-permutation groups.
//!
//! Two gradings are in play. [`Grading::Series`] puts each torus
//! coordinate `t_i` in degree 1, so the symplectic Pontryagin class `x_{4i}`
//! sits at degree `2i`. [`Grading::Cohomological`] is the topologist's
//! degree: `q_i = x_4` of each `BSp(1)` factor sits in degree 4.

use std::collections::HashMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{f2_rank, RationalRowSpace};
use crate::weyl::WeylSubgroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Grading {
    Series,
    Cohomological,
}

/// A power series truncated after degree `D`, with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coefficients: Vec<Rational64>,
    grading: Grading,
}

impl PowerSeries {
    pub fn zero(truncation: usize, grading: Grading) -> Self {
        PowerSeries {
            coefficients: vec![Rational64::zero(); truncation + 1],
            grading,
        }
    }

    pub fn one(truncation: usize, grading: Grading) -> Self {
        let mut s = Self::zero(truncation, grading);
        s.coefficients[0] = Rational64::one();
        s
    }

    pub fn from_integers(coefs: &[i64], grading: Grading) -> Self {
        PowerSeries {
            coefficients: coefs.iter().map(|&c| Rational64::from_integer(c)).collect(),
            grading,
        }
    }

    /// `1 / (1 - ε q^step)` truncated at `truncation`.
    pub fn geometric(step: usize, negative: bool, truncation: usize, grading: Grading) -> Self {
        let mut s = Self::zero(truncation, grading);
        let mut sign = 1;
        for d in (0..=truncation).step_by(step.max(1)) {
            s.coefficients[d] = Rational64::from_integer(sign);
            if negative {
                sign = -sign;
            }
            if step == 0 {
                break;
            }
        }
        s
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn coefficients(&self) -> &[Rational64] {
        &self.coefficients
    }

    pub fn coefficient(&self, d: usize) -> Rational64 {
        self.coefficients.get(d).copied().unwrap_or_else(Rational64::zero)
    }

    /// The coefficients, if they are all integers.
    pub fn integer_coefficients(&self) -> Option<Vec<i64>> {
        self.coefficients
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    fn check(&self, other: &PowerSeries) -> Result<()> {
        if self.grading != other.grading || self.truncation() != other.truncation() {
            return Err(Error::InvalidParameter(
                "series differ in grading or truncation".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &PowerSeries) -> Result<PowerSeries> {
        self.check(other)?;
        Ok(PowerSeries {
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
            grading: self.grading,
        })
    }

    pub fn mul(&self, other: &PowerSeries) -> Result<PowerSeries> {
        self.check(other)?;
        let d = self.truncation();
        let mut out = Self::zero(d, self.grading);
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients[..=d - i].iter().enumerate() {
                out.coefficients[i + j] += a * b;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: Rational64) -> PowerSeries {
        PowerSeries {
            coefficients: self.coefficients.iter().map(|a| a * c).collect(),
            grading: self.grading,
        }
    }
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .bytes()
        .map(|b| DIGITS[(b - b'0') as usize])
        .collect()
}

impl fmt::Display for PowerSeries {
    /// `1 + 0·q + 1·q² + …`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, c) in self.coefficients.iter().enumerate() {
            if d > 0 {
                write!(f, " + ")?;
            }
            match d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·q")?,
                _ => write!(f, "{c}·q{}", superscript(d))?,
            }
        }
        write!(f, " + …")
    }
}

/// `(1/|H|) Σ_w 1/det(1 - q·w)`, series grading.
pub fn molien(h: &WeylSubgroup, truncation: usize) -> PowerSeries {
    let mut total = PowerSeries::zero(truncation, Grading::Series);
    // Group elements with equal signed cycle type contribute equally.
    let mut types: HashMap<Vec<(usize, bool)>, i64> = HashMap::new();
    for w in h.elements() {
        let mut t: Vec<(usize, bool)> = w
            .signed_cycles()
            .into_iter()
            .map(|(c, neg)| (c.len(), neg))
            .collect();
        t.sort_unstable();
        *types.entry(t).or_insert(0) += 1;
    }
    let mut types: Vec<_> = types.into_iter().collect();
    types.sort_unstable();
    for (t, count) in types {
        let mut term = PowerSeries::one(truncation, Grading::Series);
        for (len, neg) in t {
            // 1/(1 - ε q^ℓ) with ε the sign product; ε = -1 gives 1/(1 + q^ℓ).
            let g = PowerSeries::geometric(len, neg, truncation, Grading::Series);
            term = term.mul(&g).expect("same shape");
        }
        total = total
            .add(&term.scale(Rational64::from_integer(count)))
            .expect("same shape");
    }
    total.scale(Rational64::new(1, h.order() as i64))
}

/// `Π_{i=1..n} 1/(1 - q^{2i})`, series grading.
pub fn target_series(n: usize, truncation: usize) -> PowerSeries {
    (1..=n).fold(PowerSeries::one(truncation, Grading::Series), |acc, i| {
        acc.mul(&PowerSeries::geometric(2 * i, false, truncation, Grading::Series))
            .expect("same shape")
    })
}

/// Exponent vectors of the degree-`d` monomials in `n` variables, in
/// lexicographic order.
fn monomials(n: usize, d: usize) -> Vec<Vec<u8>> {
    fn rec(n: usize, d: usize, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if prefix.len() + 1 == n {
            prefix.push(d as u8);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a as u8);
            rec(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

pub const MAX_DIRECT_MONOMIALS: usize = 4096;
pub const MAX_DIRECT_GROUP: usize = 1 << 12;

/// Dimension of the degree-`d` invariants for each `d ≤ D` (series
/// grading), spanned by Reynolds averages of monomials.
pub fn invariant_dims_direct(h: &WeylSubgroup, truncation: usize) -> Result<Vec<usize>> {
    let n = h.rank();
    if h.order() > MAX_DIRECT_GROUP {
        return Err(Error::BoundExceeded {
            what: "group order",
            limit: MAX_DIRECT_GROUP,
            actual: h.order(),
        });
    }
    let mut dims = Vec::with_capacity(truncation + 1);
    for d in 0..=truncation {
        let basis = monomials(n, d);
        if basis.len() > MAX_DIRECT_MONOMIALS {
            return Err(Error::BoundExceeded {
                what: "monomials in one degree",
                limit: MAX_DIRECT_MONOMIALS,
                actual: basis.len(),
            });
        }
        let index: HashMap<&[u8], usize> =
            basis.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
        let mut space = RationalRowSpace::new(basis.len());
        let mut done: Vec<bool> = vec![false; basis.len()];
        for (mi, m) in basis.iter().enumerate() {
            if done[mi] {
                continue;
            }
            // w sends t_j to ±t_{w(j)}; |H| times the average of w·m.
            let mut row = vec![0i64; basis.len()];
            for w in h.elements() {
                let mut image = vec![0u8; n];
                let mut sign = 1i64;
                for (j, &a) in m.iter().enumerate() {
                    image[w.image(j)] += a;
                    if w.is_negated(w.image(j)) && a % 2 == 1 {
                        sign = -sign;
                    }
                }
                let k = index[image.as_slice()];
                done[k] = true;
                row[k] += sign;
            }
            space.insert(&row)?;
        }
        dims.push(space.rank());
    }
    Ok(dims)
}

pub const MAX_F2_RANK: usize = 4;
pub const MAX_F2_DEGREE: usize = 32;

/// Dimensions over `F_2` of `F_2[q_1, …, q_n]^{Σ_n}` in each cohomological
/// degree `0..=D`, `q_i` in degree 4. Computed as the common kernel of
/// `g - 1` for the generators `(1 2)` and `(1 2 … n)` of `Σ_n`.
pub fn f2_invariant_dims(n: usize, truncation: usize) -> Result<Vec<usize>> {
    if n > MAX_F2_RANK {
        return Err(Error::BoundExceeded {
            what: "rank",
            limit: MAX_F2_RANK,
            actual: n,
        });
    }
    if truncation > MAX_F2_DEGREE {
        return Err(Error::BoundExceeded {
            what: "cohomological degree",
            limit: MAX_F2_DEGREE,
            actual: truncation,
        });
    }
    let mut gens: Vec<Vec<usize>> = Vec::new();
    if n >= 2 {
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        gens.push(swap);
        gens.push((0..n).map(|i| (i + 1) % n).collect());
    }
    let mut dims = Vec::with_capacity(truncation + 1);
    for deg in 0..=truncation {
        if deg % 4 != 0 {
            dims.push(0);
            continue;
        }
        let basis = monomials(n, deg / 4);
        let index: HashMap<&[u8], usize> =
            basis.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
        // Row (g, k) of the stacked g - 1, scanned as columns of monomials.
        let mut rows = Vec::new();
        for g in &gens {
            let mut mat = vec![vec![0u64; basis.len()]; basis.len()];
            for (c, m) in basis.iter().enumerate() {
                let mut image = vec![0u8; n];
                for (j, &a) in m.iter().enumerate() {
                    image[g[j]] = a;
                }
                mat[index[image.as_slice()]][c] ^= 1;
                mat[c][c] ^= 1;
            }
            rows.extend(mat);
        }
        dims.push(basis.len() - f2_rank(rows, basis.len()));
    }
    Ok(dims)
}

/// Number of `Σ_n`-orbits of degree-`deg` monomials (cohomological
/// grading), i.e. of orbit sums.
pub fn f2_orbit_sum_count(n: usize, deg: usize) -> usize {
    if !deg.is_multiple_of(4) {
        return 0;
    }
    monomials(n, deg / 4)
        .into_iter()
        .filter(|m| m.windows(2).all(|w| w[0] >= w[1]))
        .count()
}

/// Coefficients of `Π_{i=1..n} 1/(1 - q^{4i})` in cohomological grading.
pub fn f2_target_dims(n: usize, truncation: usize) -> Vec<i64> {
    (1..=n)
        .fold(PowerSeries::one(truncation, Grading::Cohomological), |acc, i| {
            acc.mul(&PowerSeries::geometric(4 * i, false, truncation, Grading::Cohomological))
                .expect("same shape")
        })
        .integer_coefficients()
        .expect("integral product")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::WeylSubgroup;

    fn ints(s: &PowerSeries) -> Vec<i64> {
        s.integer_coefficients().unwrap()
    }

    #[test]
    fn molien_examples() {
        assert_eq!(ints(&molien(&WeylSubgroup::full(1), 6)), vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(ints(&molien(&WeylSubgroup::trivial(1), 4)), vec![1; 5]);
        let m2 = molien(&WeylSubgroup::full(2), 12);
        assert_eq!(m2, target_series(2, 12));
        assert_eq!(ints(&target_series(2, 4))[4], 2);
        assert_eq!(ints(&target_series(3, 0)), vec![1]);
    }

    #[test]
    fn direct_examples() {
        let d1 = invariant_dims_direct(&WeylSubgroup::full(1), 4).unwrap();
        assert_eq!(d1, vec![1, 0, 1, 0, 1]);
        let d2 = invariant_dims_direct(&WeylSubgroup::full(2), 4).unwrap();
        assert_eq!(d2[0], 1);
        assert_eq!(d2[2], 1);
        assert_eq!(d2[4], 2);
    }

    #[test]
    fn f2_examples() {
        let d = f2_invariant_dims(2, 8).unwrap();
        assert_eq!(d[0], 1);
        assert_eq!(d[8], 2);
        assert_eq!(f2_invariant_dims(3, 4).unwrap()[4], 1);
        assert_eq!(f2_orbit_sum_count(2, 8), 2);
        assert_eq!(f2_target_dims(2, 8), vec![1, 0, 0, 0, 1, 0, 0, 0, 2]);
    }

    #[test]
    fn display() {
        let s = molien(&WeylSubgroup::full(1), 2);
        assert_eq!(s.to_string(), "1 + 0·q + 1·q² + …");
    }
}
