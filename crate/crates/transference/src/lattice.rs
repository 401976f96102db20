//! Lattice construction and exhaustive point search.
//!
//! The primal lattice of a target matrix `Θ` is spanned by the columns of
//! `(I_m 0; -Θ I_n)`, its dual by `(I_m ᵀΘ; 0 I_n)`; both are unimodular by
//! construction. Searches enumerate the free integer block exhaustively and
//! complete the other block by nearest-integer rounding, which is exact for
//! existence because the residual coordinates decouple.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::box_calculus::{BoxSpec, BOUNDARY_SLACK};
use crate::error::{Error, Result};

/// Default bound on the number of enumerated candidate vectors.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// Tolerance for "is this solved coordinate an integer" checks.
const INTEGRALITY_TOL: f64 = 1e-9;

/// The `n × m` real matrix `Θ`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetMatrix {
    m: usize,
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl TargetMatrix {
    pub fn new(m: usize, n: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if m + n < 2 {
            return Err(Error::DimensionTooSmall(m + n));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch(format!(
                "expected {n} rows of length {m}"
            )));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        Ok(Self { m, n, rows })
    }

    pub fn zero(m: usize, n: usize) -> Result<Self> {
        Self::new(m, n, vec![vec![0.0; m]; n])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.m + self.n
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    /// `ᵀΘ` as a target matrix with the roles of `m` and `n` swapped.
    pub fn transpose(&self) -> TargetMatrix {
        let rows = (0..self.m)
            .map(|j| (0..self.n).map(|i| self.rows[i][j]).collect())
            .collect();
        TargetMatrix {
            m: self.n,
            n: self.m,
            rows,
        }
    }

    /// `Θ x` for an integer vector `x` of length `m`.
    pub fn apply(&self, x: &[i64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(x).map(|(&a, &b)| a * b as f64).sum())
            .collect()
    }

    /// Reorders the columns so that column `k` of the result is column
    /// `order[k]` of `self`.
    pub fn permute_columns(&self, order: &[usize]) -> TargetMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| order.iter().map(|&j| r[j]).collect())
            .collect();
        TargetMatrix {
            m: self.m,
            n: self.n,
            rows,
        }
    }
}

/// Deletes the first `p` columns of `Θ`.
///
/// The caller is responsible for permuting columns first so that "first `p`"
/// matches the `p` smallest λ entries (see [`crate::box_calculus::HatResult`]).
pub fn truncate(theta: &TargetMatrix, p: usize) -> Result<TargetMatrix> {
    if p >= theta.m {
        return Err(Error::TruncationTooDeep { p, m: theta.m });
    }
    let rows = theta.rows.iter().map(|r| r[p..].to_vec()).collect();
    Ok(TargetMatrix {
        m: theta.m - p,
        n: theta.n,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisKind {
    Primal,
    Dual,
    PrimalTruncated,
    DualTruncated,
}

/// A unimodular column basis for one of the four lattices in play.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeBasis {
    pub dim: usize,
    pub columns: DMatrix<f64>,
    pub kind: BasisKind,
}

impl LatticeBasis {
    /// Maps integer coordinates to the embedded lattice vector.
    pub fn embed(&self, coords: &[i64]) -> Vec<f64> {
        (0..self.dim)
            .map(|r| {
                coords
                    .iter()
                    .enumerate()
                    .map(|(c, &k)| self.columns[(r, c)] * k as f64)
                    .sum()
            })
            .collect()
    }
}

/// A nonzero lattice point together with its integer preimage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticePoint {
    /// The `(a, b)` integer vector the basis was applied to.
    pub integer_coords: Vec<i64>,
    /// The embedded vector `z`.
    pub embedded: Vec<f64>,
    /// Whether the first block of the relevant vector is nonzero.
    pub nonzero_x: bool,
}

/// `(I_m 0; -Θ I_n)`, determinant 1.
pub fn primal_basis(theta: &TargetMatrix) -> LatticeBasis {
    let d = theta.d();
    let mut cols = DMatrix::<f64>::identity(d, d);
    for j in 0..theta.m {
        for i in 0..theta.n {
            cols[(theta.m + i, j)] = -theta.rows[i][j];
        }
    }
    LatticeBasis {
        dim: d,
        columns: cols,
        kind: BasisKind::Primal,
    }
}

/// `(I_m ᵀΘ; 0 I_n)`, determinant 1.
pub fn dual_basis(theta: &TargetMatrix) -> LatticeBasis {
    let d = theta.d();
    let mut cols = DMatrix::<f64>::identity(d, d);
    for i in 0..theta.n {
        for j in 0..theta.m {
            cols[(j, theta.m + i)] = theta.rows[i][j];
        }
    }
    LatticeBasis {
        dim: d,
        columns: cols,
        kind: BasisKind::Dual,
    }
}

/// Nearest integer with halves rounded toward zero. At an exact tie both
/// neighbors give the same residual magnitude, so membership does not depend
/// on the choice.
fn nearest_toward_zero(v: f64) -> i64 {
    let fl = v.floor();
    let frac = v - fl;
    let k = if frac > 0.5 {
        fl + 1.0
    } else if frac < 0.5 {
        fl
    } else if v > 0.0 {
        fl
    } else {
        fl + 1.0
    };
    k as i64
}

fn within(value: f64, bound: f64) -> bool {
    value.abs() <= bound * (1.0 + BOUNDARY_SLACK)
}

/// Enumerates integer vectors with `|v_j| <= radii[j]` in a fixed
/// smallest-first order (each coordinate runs 0, 1, -1, 2, -2, ... with the
/// first coordinate varying fastest), calling `f` on every candidate
/// including the origin. `f` returns true to stop the walk.
fn enumerate_box(radii: &[i64], f: &mut impl FnMut(&[i64]) -> bool) -> bool {
    fn rec(radii: &[i64], idx: usize, current: &mut [i64], f: &mut impl FnMut(&[i64]) -> bool) -> bool {
        let r = radii[idx];
        let mut v = 0i64;
        loop {
            current[idx] = v;
            let stop = if idx == 0 {
                f(current)
            } else {
                rec(radii, idx - 1, current, f)
            };
            if stop {
                return true;
            }
            v = if v > 0 { -v } else { -v + 1 };
            if v > r {
                break;
            }
        }
        false
    }
    if radii.is_empty() {
        return f(&[]);
    }
    let mut current = vec![0i64; radii.len()];
    rec(radii, radii.len() - 1, &mut current, f)
}

fn search_radii(weights: &[f64]) -> Vec<i64> {
    weights
        .iter()
        .map(|&w| (w * (1.0 + BOUNDARY_SLACK)).floor().max(0.0) as i64)
        .collect()
}

fn enumeration_volume(radii: &[i64]) -> f64 {
    radii.iter().map(|&r| (2 * r + 1) as f64).product()
}

/// Exhaustive search for a nonzero point of `Λ(Θ)` inside the box.
///
/// Enumerates the free block `a ∈ Z^m` with `|a_j| ≤ ⌊λ_j⌋` and completes
/// `b` by nearest rounding of `Θa`. With `require_nonzero_x = false` the
/// pure-`b` points (`a = 0`) are admitted as well.
pub fn find_primal_point(
    theta: &TargetMatrix,
    bx: &BoxSpec,
    require_nonzero_x: bool,
    cap: u64,
) -> Result<Option<LatticePoint>> {
    check_dims(theta, bx)?;
    let radii = search_radii(bx.lambda().values());
    let volume = enumeration_volume(&radii);
    if volume > cap as f64 {
        return Err(Error::CapExceeded { volume, cap });
    }

    let mu = bx.mu().values();
    let mut found: Option<LatticePoint> = None;
    enumerate_box(&radii, &mut |a| {
        if a.iter().all(|&v| v == 0) {
            if !require_nonzero_x {
                // a = 0: any nonzero integer b inside the μ-block works.
                if let Some(i) = mu.iter().position(|&w| w * (1.0 + BOUNDARY_SLACK) >= 1.0) {
                    let mut coords = vec![0i64; theta.m() + theta.n()];
                    coords[theta.m() + i] = 1;
                    let mut z = vec![0.0; theta.d()];
                    z[theta.m() + i] = 1.0;
                    found = Some(LatticePoint {
                        integer_coords: coords,
                        embedded: z,
                        nonzero_x: false,
                    });
                    return true;
                }
            }
            return false;
        }
        let v = theta.apply(a);
        let b: Vec<i64> = v.iter().map(|&vi| nearest_toward_zero(vi)).collect();
        let ok = v
            .iter()
            .zip(&b)
            .zip(mu)
            .all(|((&vi, &bi), &mui)| within(vi - bi as f64, mui));
        if ok {
            let mut coords = a.to_vec();
            coords.extend_from_slice(&b);
            let mut z: Vec<f64> = a.iter().map(|&ai| ai as f64).collect();
            z.extend(v.iter().zip(&b).map(|(&vi, &bi)| bi as f64 - vi));
            found = Some(LatticePoint {
                integer_coords: coords,
                embedded: z,
                nonzero_x: true,
            });
            return true;
        }
        false
    });
    Ok(found)
}

/// Mirror image of [`find_primal_point`] for `Λ*(Θ)`, whose points are
/// `(a + ᵀΘb, b)`: the μ-block is now the free one. "Nonzero x" means the
/// first `m` coordinates of the embedded vector are not all zero.
pub fn find_dual_point(
    theta: &TargetMatrix,
    bx: &BoxSpec,
    require_nonzero_x: bool,
    cap: u64,
) -> Result<Option<LatticePoint>> {
    check_dims(theta, bx)?;
    let radii = search_radii(bx.mu().values());
    let volume = enumeration_volume(&radii);
    if volume > cap as f64 {
        return Err(Error::CapExceeded { volume, cap });
    }

    let lambda = bx.lambda().values();
    let tt = theta.transpose();
    let mut found: Option<LatticePoint> = None;
    enumerate_box(&radii, &mut |b| {
        if b.iter().all(|&v| v == 0) {
            // b = 0: any nonzero integer a inside the λ-block works, and has
            // a nonzero first block by construction.
            if let Some(j) = lambda
                .iter()
                .position(|&w| w * (1.0 + BOUNDARY_SLACK) >= 1.0)
            {
                let mut coords = vec![0i64; theta.m() + theta.n()];
                coords[j] = 1;
                let mut z = vec![0.0; theta.d()];
                z[j] = 1.0;
                found = Some(LatticePoint {
                    integer_coords: coords,
                    embedded: z,
                    nonzero_x: true,
                });
                return true;
            }
            return false;
        }
        let w = tt.apply(b); // ᵀΘ b, length m
        let mut a: Vec<i64> = w.iter().map(|&wj| -nearest_toward_zero(wj)).collect();
        let mut ok = w
            .iter()
            .zip(&a)
            .zip(lambda)
            .all(|((&wj, &aj), &lj)| within(wj + aj as f64, lj));
        if ok && require_nonzero_x {
            let residual_zero = w.iter().zip(&a).all(|(&wj, &aj)| wj + aj as f64 == 0.0);
            if residual_zero {
                // ᵀΘb is exactly integral; shift one coordinate by 1 if the
                // box allows a unit residual there.
                match lambda.iter().position(|&lj| lj * (1.0 + BOUNDARY_SLACK) >= 1.0) {
                    Some(j) => a[j] += 1,
                    None => ok = false,
                }
            }
        }
        if ok {
            let mut coords = a.clone();
            coords.extend_from_slice(b);
            let mut z: Vec<f64> = w.iter().zip(&a).map(|(&wj, &aj)| aj as f64 + wj).collect();
            z.extend(b.iter().map(|&bi| bi as f64));
            let nonzero_x = z[..theta.m()].iter().any(|&v| v != 0.0);
            found = Some(LatticePoint {
                integer_coords: coords,
                embedded: z,
                nonzero_x,
            });
            return true;
        }
        false
    });
    Ok(found)
}

fn check_dims(theta: &TargetMatrix, bx: &BoxSpec) -> Result<()> {
    if bx.m() != theta.m() || bx.n() != theta.n() {
        return Err(Error::DimensionMismatch(format!(
            "box split ({}, {}) does not match matrix ({}, {})",
            bx.m(),
            bx.n(),
            theta.m(),
            theta.n()
        )));
    }
    Ok(())
}

/// First crucial fact behind the truncated chain: the zero-padded copy of
/// `Λ(Θ↓)` is a sublattice of `Λ(Θ)`.
pub fn verify_sublattice_embedding(theta: &TargetMatrix, p: usize) -> Result<bool> {
    let down = truncate(theta, p)?;
    Ok(verify_sublattice_embedding_against(theta, &down, p))
}

/// Same check against an explicitly supplied truncated matrix, so negative
/// controls can feed a corrupted `Θ↓`.
pub fn verify_sublattice_embedding_against(
    theta: &TargetMatrix,
    theta_down: &TargetMatrix,
    p: usize,
) -> bool {
    let full = primal_basis(theta);
    let down = primal_basis(theta_down);
    let lu = full.columns.clone().lu();
    for col in 0..down.dim {
        let mut padded = nalgebra::DVector::<f64>::zeros(full.dim);
        for r in 0..down.dim {
            padded[p + r] = down.columns[(r, col)];
        }
        match lu.solve(&padded) {
            Some(c) => {
                if c.iter().any(|&v| (v - v.round()).abs() > INTEGRALITY_TOL) {
                    return false;
                }
            }
            None => return false,
        }
    }
    true
}

/// Second crucial fact: dropping the first `p` coordinates projects `Λ*(Θ)`
/// exactly onto `Λ*(Θ↓)`. Each projected basis vector must have integer
/// coordinates in the truncated dual basis, and those integer coordinate
/// vectors must generate all of `Z^{d-p}`.
pub fn verify_projection(theta: &TargetMatrix, p: usize) -> Result<bool> {
    let down = truncate(theta, p)?;
    Ok(verify_projection_against(theta, &down, p))
}

pub fn verify_projection_against(
    theta: &TargetMatrix,
    theta_down: &TargetMatrix,
    p: usize,
) -> bool {
    let full = dual_basis(theta);
    let down = dual_basis(theta_down);
    let k = down.dim;
    let lu = down.columns.clone().lu();
    let mut int_cols: Vec<Vec<i64>> = Vec::new();
    for col in 0..full.dim {
        let mut projected = nalgebra::DVector::<f64>::zeros(k);
        for r in 0..k {
            projected[r] = full.columns[(p + r, col)];
        }
        match lu.solve(&projected) {
            Some(c) => {
                let mut ints = Vec::with_capacity(k);
                for &v in c.iter() {
                    if (v - v.round()).abs() > INTEGRALITY_TOL {
                        return false;
                    }
                    ints.push(v.round() as i64);
                }
                if ints.iter().any(|&v| v != 0) {
                    int_cols.push(ints);
                }
            }
            None => return false,
        }
    }
    generates_full_integer_lattice(int_cols, k)
}

/// Checks that the given integer columns generate `Z^k`, via column-style
/// Hermite reduction.
fn generates_full_integer_lattice(mut cols: Vec<Vec<i64>>, k: usize) -> bool {
    if cols.len() < k {
        return false;
    }
    for row in 0..k {
        loop {
            let mut nonzero: Vec<usize> = (row..cols.len()).filter(|&c| cols[c][row] != 0).collect();
            if nonzero.is_empty() {
                return false;
            }
            if nonzero.len() == 1 {
                cols.swap(row, nonzero[0]);
                break;
            }
            nonzero.sort_by_key(|&c| cols[c][row].abs());
            let pivot = nonzero[0];
            for &c in &nonzero[1..] {
                let q = cols[c][row] / cols[pivot][row];
                for r in 0..k {
                    cols[c][r] -= q * cols[pivot][r];
                }
            }
        }
    }
    (0..k).all(|r| cols[r][r].abs() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::box_calculus::WeightTuple;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn theta_2x1(a: f64, b: f64) -> TargetMatrix {
        TargetMatrix::new(2, 1, vec![vec![a, b]]).unwrap()
    }

    fn bx(lambda: &[f64], mu: &[f64]) -> BoxSpec {
        BoxSpec::new(
            WeightTuple::new(lambda.to_vec()).unwrap(),
            WeightTuple::new(mu.to_vec()).unwrap(),
        )
        .unwrap()
    }

    fn random_theta(rng: &mut ChaCha8Rng, m: usize, n: usize) -> TargetMatrix {
        let rows = (0..n)
            .map(|_| (0..m).map(|_| rng.gen::<f64>()).collect())
            .collect();
        TargetMatrix::new(m, n, rows).unwrap()
    }

    #[test]
    fn primal_basis_layout() {
        let t = theta_2x1(0.5, 1.0 / 3.0);
        let b = primal_basis(&t);
        assert_eq!(b.embed(&[1, 0, 0]), vec![1.0, 0.0, -0.5]);
        assert_eq!(b.embed(&[0, 1, 0]), vec![0.0, 1.0, -1.0 / 3.0]);
        assert_eq!(b.embed(&[0, 0, 1]), vec![0.0, 0.0, 1.0]);

        let z = TargetMatrix::zero(2, 2).unwrap();
        assert_eq!(primal_basis(&z).columns, DMatrix::identity(4, 4));
        assert_eq!(dual_basis(&z).columns, DMatrix::identity(4, 4));
    }

    #[test]
    fn bases_are_unimodular_and_dual() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let t = random_theta(&mut rng, 2, 2);
            let p = primal_basis(&t);
            let q = dual_basis(&t);
            assert!((p.columns.determinant() - 1.0).abs() < 1e-12);
            assert!((q.columns.determinant() - 1.0).abs() < 1e-12);
            let prod = p.columns.transpose() * &q.columns;
            let id = DMatrix::<f64>::identity(4, 4);
            assert!((prod - id).abs().max() <= 1e-12);
        }
    }

    #[test]
    fn truncate_deletes_columns() {
        let t = TargetMatrix::new(3, 1, vec![vec![0.1, 0.2, 0.3]]).unwrap();
        let down = truncate(&t, 2).unwrap();
        assert_eq!(down.m(), 1);
        assert_eq!(down.rows(), &[vec![0.3]]);
        assert_eq!(truncate(&t, 0).unwrap(), t);
        assert!(matches!(
            truncate(&t, 3),
            Err(Error::TruncationTooDeep { .. })
        ));
        assert_eq!(primal_basis(&down).dim, t.d() - 2);
    }

    #[test]
    fn primal_search_integer_point() {
        let t = TargetMatrix::zero(2, 1).unwrap();
        let hit = find_primal_point(&t, &bx(&[1.0, 1.0], &[0.5]), true, 1000)
            .unwrap()
            .unwrap();
        assert!(hit.nonzero_x);
        assert!(bx(&[1.0, 1.0], &[0.5]).contains(&hit.embedded));

        // only the origin fits
        assert!(find_primal_point(&t, &bx(&[0.9, 0.9], &[0.9]), false, 1000)
            .unwrap()
            .is_none());
    }

    #[test]
    fn primal_search_exact_rational_hit() {
        let t = theta_2x1(0.5, 1.0 / 3.0);
        let hit = find_primal_point(&t, &bx(&[2.0, 2.0], &[0.1]), true, 1000)
            .unwrap()
            .unwrap();
        // Θa must be integral for some |a| <= 2; a = (2, 0) works.
        assert!(bx(&[2.0, 2.0], &[0.1]).contains(&hit.embedded));
    }

    #[test]
    fn dual_search_basic() {
        let t = TargetMatrix::zero(2, 1).unwrap();
        let hit = find_dual_point(&t, &bx(&[1.5, 0.2], &[0.3]), false, 1000)
            .unwrap()
            .unwrap();
        assert_eq!(hit.embedded, vec![1.0, 0.0, 0.0]);
        assert!(hit.nonzero_x);

        assert!(find_dual_point(&t, &bx(&[0.9, 0.9], &[0.9]), false, 1000)
            .unwrap()
            .is_none());
    }

    #[test]
    fn cap_is_a_distinct_error() {
        let t = TargetMatrix::zero(2, 1).unwrap();
        assert!(matches!(
            find_primal_point(&t, &bx(&[1e6, 1e6], &[0.5]), false, 1000),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn embedding_and_projection_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let m = rng.gen_range(2..4usize);
            let n = rng.gen_range(1..3usize);
            let t = random_theta(&mut rng, m, n);
            let p = rng.gen_range(0..m);
            assert!(verify_sublattice_embedding(&t, p).unwrap());
            assert!(verify_projection(&t, p).unwrap());
        }
    }

    #[test]
    fn corrupted_truncation_fails_checks() {
        let t = TargetMatrix::new(3, 1, vec![vec![0.15, 0.55, 0.85]]).unwrap();
        let mut bad = truncate(&t, 1).unwrap();
        bad.rows[0][0] += 0.5;
        assert!(!verify_sublattice_embedding_against(&t, &bad, 1));
        assert!(!verify_projection_against(&t, &bad, 1));
    }

    #[test]
    fn pairing_is_integral() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let t = random_theta(&mut rng, 2, 1);
            let p = primal_basis(&t);
            let q = dual_basis(&t);
            for _ in 0..10 {
                let zc: Vec<i64> = (0..3).map(|_| rng.gen_range(-5..=5)).collect();
                let wc: Vec<i64> = (0..3).map(|_| rng.gen_range(-5..=5)).collect();
                let z = p.embed(&zc);
                let w = q.embed(&wc);
                let dot: f64 = z.iter().zip(&w).map(|(a, b)| a * b).sum();
                assert!((dot - dot.round()).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn monotone_in_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let t = random_theta(&mut rng, 2, 1);
            let lam = [rng.gen::<f64>() * 3.0 + 0.1, rng.gen::<f64>() * 3.0 + 0.1];
            let mu = [rng.gen::<f64>() * 1.5 + 0.05];
            let small = bx(&lam, &mu);
            if find_primal_point(&t, &small, false, 100_000)
                .unwrap()
                .is_some()
            {
                let big = small.scaled(1.0 + rng.gen::<f64>());
                assert!(find_primal_point(&t, &big, false, 1_000_000)
                    .unwrap()
                    .is_some());
            }
        }
    }
}
