//! Finite-scale estimators of the ordinary and multiplicative Diophantine
//! exponents.
//!
//! At each scale `t` the estimators compute the best achievable residual
//! `ψ(t) = min max_i ‖(Θx)_i‖` over `0 < |x| ≤ t` (ordinary) or
//! `ψ×(t) = min Π(Θx - y)` over `Π'(x) ≤ t` (multiplicative), by exhaustive
//! enumeration with nearest-integer completion. A geometric grid of scales
//! yields a trace whose tail maximum of `γ_t = -log ψ / log t` is the
//! finite-scale proxy for the supremum in the definitions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::lattice::{LatticePoint, TargetMatrix};

/// Residuals below this are treated as an exact hit (rational dependence),
/// which maps to the infinity flag rather than a huge exponent.
pub const ZERO_PSI: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExponentKind {
    Ordinary,
    Multiplicative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatrixSide {
    Theta,
    ThetaTranspose,
}

/// Best achievable error at one scale, with the witness that achieves it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxRecord {
    pub t: f64,
    pub psi: f64,
    pub witness: LatticePoint,
    /// `-log(psi) / log(t)`; absent when `psi` is an exact hit or `t ≤ 1`.
    pub gamma_t: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExponentValue {
    Finite(f64),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    pub kind: ExponentKind,
    pub side: MatrixSide,
    pub trace: Vec<ApproxRecord>,
    pub estimate: ExponentValue,
    pub tail_window: usize,
}

/// Geometric scale grid `t_k = t0 · ratio^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t0: f64,
    pub ratio: f64,
    pub steps: usize,
    pub tail_window: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            t0: 2.0,
            ratio: 2.0,
            steps: 12,
            tail_window: 4,
        }
    }
}

/// A cap error together with the records gathered before it struck.
#[derive(Debug, Error)]
#[error("{error} (after {} completed scales)", partial.len())]
pub struct TraceError {
    pub error: Error,
    pub partial: Vec<ApproxRecord>,
}

fn dist_to_int(v: f64) -> (i64, f64) {
    let k = v.round();
    (k as i64, (v - k).abs())
}

fn gamma_at(t: f64, psi: f64) -> Option<f64> {
    if psi > ZERO_PSI && t > 1.0 {
        Some(-psi.ln() / t.ln())
    } else {
        None
    }
}

fn record(theta: &TargetMatrix, t: f64, psi: f64, x: Vec<i64>, y: Vec<i64>) -> ApproxRecord {
    let v = theta.apply(&x);
    let mut embedded: Vec<f64> = x.iter().map(|&a| a as f64).collect();
    embedded.extend(y.iter().zip(&v).map(|(&yi, &vi)| yi as f64 - vi));
    let mut coords = x;
    coords.extend_from_slice(&y);
    ApproxRecord {
        t,
        psi,
        witness: LatticePoint {
            integer_coords: coords,
            embedded,
            nonzero_x: true,
        },
        gamma_t: gamma_at(t, psi),
    }
}

/// `ψ(t)`: exhaustive over `x ∈ Z^m`, `0 < |x| ≤ ⌊t⌋`, with `y` the
/// componentwise nearest integer to `Θx`.
pub fn ordinary_minimum(
    theta: &TargetMatrix,
    t: f64,
    cap: u64,
) -> Result<ApproxRecord, Error> {
    let m = theta.m();
    let radius = t.floor().max(1.0) as i64;
    let volume = ((2 * radius + 1) as f64).powi(m as i32);
    if volume > cap as f64 {
        return Err(Error::CapExceeded { volume, cap });
    }

    let mut best = f64::INFINITY;
    let mut best_x: Vec<i64> = Vec::new();
    let mut best_y: Vec<i64> = Vec::new();
    let mut x = vec![0i64; m];
    loop {
        if x.iter().any(|&v| v != 0) {
            let v = theta.apply(&x);
            let mut worst = 0.0f64;
            for &vi in &v {
                let (_, dist) = dist_to_int(vi);
                worst = worst.max(dist);
                if worst >= best {
                    break;
                }
            }
            if worst < best {
                best = worst;
                best_x = x.clone();
                best_y = v.iter().map(|&vi| dist_to_int(vi).0).collect();
                if best == 0.0 {
                    break;
                }
            }
        }
        if !advance(&mut x, radius) {
            break;
        }
    }
    Ok(record(theta, t, best, best_x, best_y))
}

/// Odometer over `[-r, r]^m`; returns false once exhausted.
fn advance(x: &mut [i64], r: i64) -> bool {
    for v in x.iter_mut().rev() {
        if *v < r {
            *v += 1;
            return true;
        }
        *v = -r;
    }
    false
}

/// `ψ×(t)`: exhaustive over `x ≠ 0` with `Π'(x) ≤ t`, pruned by the running
/// product of `max(1, |x_j|)`; `y` is again the nearest integer vector,
/// which minimizes the product because the coordinates decouple.
pub fn multiplicative_minimum(
    theta: &TargetMatrix,
    t: f64,
    cap: u64,
) -> Result<ApproxRecord, Error> {
    let m = theta.m();
    let n = theta.n();
    // Π'(x) ≤ t means ∏ max(1, |x_j|) ≤ t^m.
    let budget = t.powi(m as i32) * (1.0 + 1e-12);

    struct Search<'a> {
        theta: &'a TargetMatrix,
        n: usize,
        budget: f64,
        cap: u64,
        evaluated: u64,
        best: f64,
        best_x: Vec<i64>,
        best_y: Vec<i64>,
    }

    impl Search<'_> {
        fn go(&mut self, x: &mut Vec<i64>, used: f64) -> Result<bool, Error> {
            if x.len() == self.theta.m() {
                if x.iter().all(|&v| v == 0) {
                    return Ok(false);
                }
                self.evaluated += 1;
                if self.evaluated > self.cap {
                    return Err(Error::CapExceeded {
                        volume: self.evaluated as f64,
                        cap: self.cap,
                    });
                }
                let v = self.theta.apply(x);
                let mut prod = 1.0f64;
                for &vi in &v {
                    prod *= dist_to_int(vi).1;
                }
                let psi = prod.powf(1.0 / self.n as f64);
                if psi < self.best {
                    self.best = psi;
                    self.best_x = x.clone();
                    self.best_y = v.iter().map(|&vi| dist_to_int(vi).0).collect();
                    if self.best == 0.0 {
                        return Ok(true);
                    }
                }
                return Ok(false);
            }
            let r = (self.budget / used).floor() as i64;
            let mut v = 0i64;
            loop {
                x.push(v);
                let stop = self.go(x, used * (v.abs().max(1)) as f64)?;
                x.pop();
                if stop {
                    return Ok(true);
                }
                v = if v > 0 { -v } else { -v + 1 };
                if v > r {
                    break;
                }
            }
            Ok(false)
        }
    }

    let mut search = Search {
        theta,
        n,
        budget,
        cap,
        evaluated: 0,
        best: f64::INFINITY,
        best_x: Vec::new(),
        best_y: Vec::new(),
    };
    let mut x = Vec::with_capacity(m);
    search.go(&mut x, 1.0)?;
    let (best, bx, by) = (search.best, search.best_x, search.best_y);
    Ok(record(theta, t, best, bx, by))
}

/// Runs the chosen minimum over the grid and condenses the trace into an
/// estimate: the max of `γ_t` over the last `tail_window` records, or the
/// infinity flag as soon as any scale achieves an exact hit.
pub fn estimate_exponent(
    theta: &TargetMatrix,
    kind: ExponentKind,
    side: MatrixSide,
    grid: &GridSpec,
    cap: u64,
) -> Result<ExponentEstimate, TraceError> {
    let mut trace = Vec::with_capacity(grid.steps);
    let mut t = grid.t0;
    for _ in 0..grid.steps {
        let rec = match kind {
            ExponentKind::Ordinary => ordinary_minimum(theta, t, cap),
            ExponentKind::Multiplicative => multiplicative_minimum(theta, t, cap),
        };
        match rec {
            Ok(r) => trace.push(r),
            Err(error) => {
                return Err(TraceError {
                    error,
                    partial: trace,
                })
            }
        }
        t *= grid.ratio;
    }
    Ok(condense(kind, side, trace, grid.tail_window))
}

fn condense(
    kind: ExponentKind,
    side: MatrixSide,
    trace: Vec<ApproxRecord>,
    tail_window: usize,
) -> ExponentEstimate {
    let estimate = if trace.iter().any(|r| r.psi <= ZERO_PSI) {
        ExponentValue::Infinite
    } else {
        let tail = trace.len().saturating_sub(tail_window);
        let max = trace[tail..]
            .iter()
            .filter_map(|r| r.gamma_t)
            .fold(f64::NEG_INFINITY, f64::max);
        ExponentValue::Finite(max)
    };
    ExponentEstimate {
        kind,
        side,
        trace,
        estimate,
        tail_window,
    }
}

/// CSV rows `(t, psi, gamma_t, witness coords)` for the trace.
pub fn trace_csv(est: &ExponentEstimate) -> String {
    let mut out = String::from("t,psi,gamma_t,witness\n");
    for r in &est.trace {
        let gamma = r.gamma_t.map(|g| g.to_string()).unwrap_or_default();
        let witness: Vec<String> = r.witness.integer_coords.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("{},{},{},{}\n", r.t, r.psi, gamma, witness.join(" ")));
    }
    out
}
