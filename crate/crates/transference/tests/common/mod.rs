//! Naive unpruned oracles shared by the integration suites. These redo the
//! searches with plain nested loops and no completion shortcuts, so the
//! production code can be compared against them exactly.

#![allow(dead_code)]

use transference::box_calculus::BoxSpec;
use transference::lattice::TargetMatrix;

pub const SLACK: f64 = 1e-12;

pub fn radii(weights: &[f64]) -> Vec<i64> {
    weights
        .iter()
        .map(|&w| (w * (1.0 + SLACK)).floor().max(0.0) as i64)
        .collect()
}

pub fn enumeration_volume(r: &[i64]) -> f64 {
    r.iter().map(|&v| (2 * v + 1) as f64).product()
}

/// Same smallest-first coordinate order the production search uses:
/// 0, 1, -1, 2, -2, ... with the first coordinate varying fastest.
fn walk(r: &[i64], f: &mut impl FnMut(&[i64]) -> bool) -> bool {
    fn rec(r: &[i64], idx: usize, cur: &mut [i64], f: &mut impl FnMut(&[i64]) -> bool) -> bool {
        let mut v = 0i64;
        loop {
            cur[idx] = v;
            let stop = if idx == 0 { f(cur) } else { rec(r, idx - 1, cur, f) };
            if stop {
                return true;
            }
            v = if v > 0 { -v } else { -v + 1 };
            if v > r[idx] {
                break;
            }
        }
        false
    }
    if r.is_empty() {
        return f(&[]);
    }
    rec(r, r.len() - 1, &mut vec![0i64; r.len()], f)
}

/// All integers inside `[center - width, center + width]`, then the one
/// closest to `center`, ties toward zero. Returns None when the interval
/// holds no integer.
fn best_in_interval(center: f64, width: f64) -> Option<i64> {
    let w = width * (1.0 + SLACK);
    let lo = (center - w).ceil() as i64;
    let hi = (center + w).floor() as i64;
    let mut best: Option<i64> = None;
    for k in lo..=hi {
        let better = match best {
            None => true,
            Some(b) => {
                let (dk, db) = ((center - k as f64).abs(), (center - b as f64).abs());
                dk < db || (dk == db && k.abs() < b.abs())
            }
        };
        if better {
            best = Some(k);
        }
    }
    best
}

/// Unpruned primal search: loops the whole `a` box and, per `a`, the whole
/// feasible `b` interval coordinate by coordinate. Returns the integer
/// coordinates of the first point found, skipping `a = 0`.
pub fn naive_primal(theta: &TargetMatrix, bx: &BoxSpec) -> Option<Vec<i64>> {
    let r = radii(bx.lambda().values());
    let mu = bx.mu().values().to_vec();
    let mut found = None;
    walk(&r, &mut |a| {
        if a.iter().all(|&v| v == 0) {
            return false;
        }
        let v = theta.apply(a);
        let mut b = Vec::with_capacity(mu.len());
        for (&vi, &mui) in v.iter().zip(&mu) {
            match best_in_interval(vi, mui) {
                Some(k) => b.push(k),
                None => return false,
            }
        }
        let mut coords = a.to_vec();
        coords.extend_from_slice(&b);
        found = Some(coords);
        true
    });
    found
}

/// Unpruned dual search, mirror image: free `b` block, per-coordinate `a`
/// interval around `-ᵀΘb`.
pub fn naive_dual(theta: &TargetMatrix, bx: &BoxSpec) -> Option<Vec<i64>> {
    let r = radii(bx.mu().values());
    let lambda = bx.lambda().values().to_vec();
    let tt = theta.transpose();
    let mut found = None;
    walk(&r, &mut |b| {
        if b.iter().all(|&v| v == 0) {
            return false;
        }
        let w = tt.apply(b);
        let mut a = Vec::with_capacity(lambda.len());
        for (&wj, &lj) in w.iter().zip(&lambda) {
            match best_in_interval(-wj, lj) {
                Some(k) => a.push(k),
                None => return false,
            }
        }
        let mut coords = a;
        coords.extend_from_slice(b);
        found = Some(coords);
        true
    });
    found
}

/// Unpruned ψ(t): every nonzero `x` with `|x| ≤ ⌊t⌋`, every `y` in a window
/// around `Θx`, worst coordinate distance.
pub fn naive_ordinary_psi(theta: &TargetMatrix, t: f64) -> f64 {
    let radius = t.floor().max(1.0) as i64;
    let r = vec![radius; theta.m()];
    let mut best = f64::INFINITY;
    walk(&r, &mut |x| {
        if x.iter().all(|&v| v == 0) {
            return false;
        }
        let v = theta.apply(x);
        let mut worst = 0.0f64;
        for &vi in &v {
            let mut d = f64::INFINITY;
            let lo = vi.floor() as i64 - 1;
            for y in lo..=lo + 3 {
                d = d.min((vi - y as f64).abs());
            }
            worst = worst.max(d);
        }
        best = best.min(worst);
        false
    });
    best
}

/// Unpruned ψ×(t): every nonzero `x` with `Π'(x) ≤ t` (checked after the
/// fact rather than by pruning), geometric mean of the distances.
pub fn naive_multiplicative_psi(theta: &TargetMatrix, t: f64) -> f64 {
    let m = theta.m();
    let budget = t.powi(m as i32) * (1.0 + 1e-12);
    let radius = budget.floor() as i64;
    let r = vec![radius; m];
    let mut best = f64::INFINITY;
    walk(&r, &mut |x| {
        if x.iter().all(|&v| v == 0) {
            return false;
        }
        let clipped: f64 = x.iter().map(|&v| (v.abs().max(1)) as f64).product();
        if clipped > budget {
            return false;
        }
        let v = theta.apply(x);
        let mut prod = 1.0f64;
        for &vi in &v {
            let mut d = f64::INFINITY;
            let lo = vi.floor() as i64 - 1;
            for y in lo..=lo + 3 {
                d = d.min((vi - y as f64).abs());
            }
            prod *= d;
        }
        best = best.min(prod.powf(1.0 / theta.n() as f64));
        false
    });
    best
}
