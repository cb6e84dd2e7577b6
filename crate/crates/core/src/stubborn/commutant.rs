//! Commutants of sets of Lipschitz monomial matrices, by exact rational
//! nullspace computation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RationalRowSpace;
use crate::normalizer::{MonomialMatrix, UnitCoef};

use super::MonomialGroup;

/// Where the commuting matrices `X` live.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ambient {
    /// `X ∈ M_n(H)`, i.e. real `4n × 4n` matrices commuting with the right
    /// scalar action. `4n²` unknowns.
    QuaternionLinear,
    /// Any real `4n × 4n` matrix, against the left-regular realification
    /// of each quaternionic matrix. `16n²` unknowns.
    Real,
}

type Quat = [i64; 4];

fn hamilton(p: Quat, q: Quat) -> Quat {
    let [a, b, c, d] = p;
    let [w, x, y, z] = q;
    [
        a * w - b * x - c * y - d * z,
        a * x + b * w + c * z - d * y,
        a * y - b * z + c * w + d * x,
        a * z + b * y - c * x + d * w,
    ]
}

const BASIS: [Quat; 4] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

/// `[row][col]` matrix of `x ↦ q·x` (left) or `x ↦ x·q` (right).
fn mult_matrix(q: Quat, left: bool) -> [[i64; 4]; 4] {
    let mut m = [[0; 4]; 4];
    for (col, e) in BASIS.iter().enumerate() {
        let img = if left { hamilton(q, *e) } else { hamilton(*e, q) };
        for row in 0..4 {
            m[row][col] = img[row];
        }
    }
    m
}

fn quats(m: &MonomialMatrix) -> Result<Vec<Quat>> {
    m.coefs()
        .iter()
        .map(|c: &UnitCoef| {
            c.quaternion()
                .ok_or_else(|| Error::NonLipschitz(format!("entry {c} in {m}")))
        })
        .collect()
}

fn add_rows_quaternion(space: &mut RationalRowSpace, n: usize, m: &MonomialMatrix) -> Result<()> {
    let q = quats(m)?;
    let perm = m.perm();
    let mut inv = vec![0; n];
    for (c, &r) in perm.iter().enumerate() {
        inv[r] = c;
    }
    let var = |r: usize, c: usize, t: usize| (r * n + c) * 4 + t;
    // (XM)_{r,c} = X_{r,π(c)} m_c and (MX)_{r,c} = m_{π⁻¹r} X_{π⁻¹r,c}.
    for r in 0..n {
        for c in 0..n {
            let right = mult_matrix(q[c], false);
            let k = inv[r];
            let left = mult_matrix(q[k], true);
            for t in 0..4 {
                let mut row = vec![0i64; 4 * n * n];
                for s in 0..4 {
                    row[var(r, perm[c], s)] += right[t][s];
                    row[var(k, c, s)] -= left[t][s];
                }
                space.insert(&row)?;
                if space.nullity() == 0 {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

fn add_rows_real(space: &mut RationalRowSpace, n: usize, m: &MonomialMatrix) -> Result<()> {
    let q = quats(m)?;
    let perm = m.perm();
    let dim = 4 * n;
    // Column b of the realification has its support in the block of row
    // π(b/4), with entries from L_{m_{b/4}}.
    let column = |b: usize| -> Vec<(usize, i64)> {
        let c = b / 4;
        let l = mult_matrix(q[c], true);
        (0..4)
            .filter(|&t| l[t][b % 4] != 0)
            .map(|t| (perm[c] * 4 + t, l[t][b % 4]))
            .collect()
    };
    let columns: Vec<Vec<(usize, i64)>> = (0..dim).map(column).collect();
    let mut rows_of: Vec<Vec<(usize, i64)>> = vec![Vec::new(); dim];
    for (b, col) in columns.iter().enumerate() {
        for &(a, v) in col {
            rows_of[a].push((b, v));
        }
    }
    // (XR - RX)[a][b] = Σ_k X[a][k] R[k][b] - Σ_k R[a][k] X[k][b].
    for a in 0..dim {
        for b in 0..dim {
            let mut row = vec![0i64; dim * dim];
            for &(k, v) in &columns[b] {
                row[a * dim + k] += v;
            }
            for &(k, v) in &rows_of[a] {
                row[k * dim + b] -= v;
            }
            space.insert(&row)?;
            if space.nullity() == 0 {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Real dimension of `{X : XM = MX for all M ∈ S}` inside `ambient`.
pub fn commutant_dimension_in(n: usize, set: &[MonomialMatrix], ambient: Ambient) -> Result<usize> {
    for m in set {
        crate::error::check_rank(n, m.rank())?;
    }
    let width = match ambient {
        Ambient::QuaternionLinear => 4 * n * n,
        Ambient::Real => 16 * n * n,
    };
    let mut space = RationalRowSpace::new(width);
    for m in set {
        match ambient {
            Ambient::QuaternionLinear => add_rows_quaternion(&mut space, n, m)?,
            Ambient::Real => add_rows_real(&mut space, n, m)?,
        }
        if space.nullity() == 0 {
            break;
        }
    }
    Ok(space.nullity())
}

/// Quaternion-linear commutant dimension: the real dimension of the
/// centralizer of `S` in `M_n(H)`.
pub fn commutant_dimension(n: usize, set: &[MonomialMatrix]) -> Result<usize> {
    commutant_dimension_in(n, set, Ambient::QuaternionLinear)
}

/// Commutant of a group through its generators. For groups with
/// non-Lipschitz entries, the Lipschitz elements form a subgroup whose
/// commutant bounds the true one from above; `exact` records which case
/// applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutantBound {
    pub dimension: usize,
    pub exact: bool,
}

pub fn group_commutant(p: &MonomialGroup, ambient: Ambient) -> Result<CommutantBound> {
    if p.generators().iter().all(MonomialMatrix::is_lipschitz) {
        return Ok(CommutantBound {
            dimension: commutant_dimension_in(p.rank(), p.generators(), ambient)?,
            exact: true,
        });
    }
    let lipschitz = p.filter(MonomialMatrix::is_lipschitz)?;
    Ok(CommutantBound {
        dimension: commutant_dimension_in(p.rank(), lipschitz.generators(), ambient)?,
        exact: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_and_right_regular_matrices_commute() {
        // Left and right multiplications commute by associativity.
        let units = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 0, 0]];
        for p in units {
            for q in units {
                let l = mult_matrix(p, true);
                let r = mult_matrix(q, false);
                for i in 0..4 {
                    for j in 0..4 {
                        let lr: i64 = (0..4).map(|k| l[i][k] * r[k][j]).sum();
                        let rl: i64 = (0..4).map(|k| r[i][k] * l[k][j]).sum();
                        assert_eq!(lr, rl);
                    }
                }
            }
        }
    }

    #[test]
    fn empty_set() {
        for n in 1..=3 {
            assert_eq!(commutant_dimension_in(n, &[], Ambient::Real).unwrap(), 16 * n * n);
            assert_eq!(commutant_dimension(n, &[]).unwrap(), 4 * n * n);
        }
    }

    #[test]
    fn scalar_units() {
        let i = MonomialMatrix::scalar(1, UnitCoef::I);
        let j = MonomialMatrix::scalar(1, UnitCoef::J);
        // Quaternions commuting with i: the complex numbers.
        assert_eq!(commutant_dimension(1, std::slice::from_ref(&i)).unwrap(), 2);
        assert_eq!(commutant_dimension(1, &[i.clone(), j.clone()]).unwrap(), 1);
        // Real endomorphisms of H commuting with left multiplication by Q(8):
        // right multiplications, a copy of H.
        assert_eq!(commutant_dimension_in(1, &[i, j], Ambient::Real).unwrap(), 4);
    }

    #[test]
    fn non_lipschitz_rejected() {
        let z = UnitCoef::zeta(crate::torus::DyadicAngle::new(1, 3).unwrap());
        let m = MonomialMatrix::scalar(1, z);
        assert!(matches!(commutant_dimension(1, &[m]), Err(Error::NonLipschitz(_))));
    }
}
