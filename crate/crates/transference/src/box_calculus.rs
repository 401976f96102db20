//! Scalar functionals and weight-tuple transforms.
//!
//! Everything here operates on plain weight vectors: the sup-norm, the
//! geometric mean `Π` and its clipped variant `Π'`, pseudocompounds and dual
//! weights of axis-aligned parallelepipeds, the hat normalization that lifts
//! sub-unit weights to 1 while preserving the geometric mean, and the
//! `(t, γ) ↔ (s, δ)` parameter mapping between the primal and dual
//! one-parameter box families.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for product-equality checks.
pub const PRODUCT_REL_TOL: f64 = 1e-9;

/// Relative slack used when testing box membership, so that lattice points
/// sitting exactly on a face are not lost to rounding.
pub const BOUNDARY_SLACK: f64 = 1e-12;

fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// A vector of strictly positive finite weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightTuple {
    values: Vec<f64>,
}

impl WeightTuple {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyVector);
        }
        for &v in &values {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::NonPositiveWeight(v));
            }
        }
        Ok(Self { values })
    }

    pub fn uniform(value: f64, len: usize) -> Result<Self> {
        Self::new(vec![value; len])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Product of all entries.
    pub fn product(&self) -> f64 {
        self.values.iter().product()
    }

    /// `Π` of the entries (all positive, so no absolute values needed).
    pub fn geo_mean(&self) -> f64 {
        self.product().powf(1.0 / self.len() as f64)
    }

    pub fn scaled(&self, c: f64) -> WeightTuple {
        WeightTuple {
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn permuted(&self, order: &[usize]) -> WeightTuple {
        WeightTuple {
            values: order.iter().map(|&j| self.values[j]).collect(),
        }
    }
}

/// An origin-centered axis-aligned parallelepiped split into a λ-block of
/// size `m` and a μ-block of size `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    lambda: WeightTuple,
    mu: WeightTuple,
}

impl BoxSpec {
    pub fn new(lambda: WeightTuple, mu: WeightTuple) -> Result<Self> {
        let d = lambda.len() + mu.len();
        // d = 2 is allowed so truncated boxes stay representable.
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        Ok(Self { lambda, mu })
    }

    /// The box `P(t, γ)`: half-width `t` on the λ-block, `t^{-γ}` on the μ-block.
    pub fn primal_family(t: f64, gamma: f64, m: usize, n: usize) -> Result<Self> {
        Self::new(
            WeightTuple::uniform(t, m)?,
            WeightTuple::uniform(t.powf(-gamma), n)?,
        )
    }

    /// The box `Q(s, δ)`: half-width `s^{-δ}` on the λ-block, `s` on the μ-block.
    pub fn dual_family(s: f64, delta: f64, m: usize, n: usize) -> Result<Self> {
        Self::new(
            WeightTuple::uniform(s.powf(-delta), m)?,
            WeightTuple::uniform(s, n)?,
        )
    }

    pub fn lambda(&self) -> &WeightTuple {
        &self.lambda
    }

    pub fn mu(&self) -> &WeightTuple {
        &self.mu
    }

    pub fn m(&self) -> usize {
        self.lambda.len()
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn d(&self) -> usize {
        self.m() + self.n()
    }

    /// All `d` half-widths, λ-block first.
    pub fn half_widths(&self) -> Vec<f64> {
        let mut w = self.lambda.values().to_vec();
        w.extend_from_slice(self.mu.values());
        w
    }

    /// Per-coordinate membership with boundary slack.
    pub fn contains(&self, z: &[f64]) -> bool {
        if z.len() != self.d() {
            return false;
        }
        z.iter()
            .zip(self.half_widths())
            .all(|(&zi, wi)| zi.abs() <= wi * (1.0 + BOUNDARY_SLACK))
    }

    pub fn scaled(&self, c: f64) -> BoxSpec {
        BoxSpec {
            lambda: self.lambda.scaled(c),
            mu: self.mu.scaled(c),
        }
    }
}

/// Result of hat-normalizing a weight tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct HatResult {
    /// The normalized tuple, in the original index order.
    pub hat: WeightTuple,
    /// Number of sorted prefix entries that were lifted to 1.
    pub pivot_p: usize,
    /// `(λ_{j1}·…·λ_{jp})^{-1/(m-p)}`, equal to 1 exactly when `pivot_p = 0`.
    pub kappa: f64,
    /// Stable ascending sort order of the input entries.
    pub sort_order: Vec<usize>,
}

/// `max |z_i|`.
pub fn sup_norm(z: &[f64]) -> Result<f64> {
    if z.is_empty() {
        return Err(Error::EmptyVector);
    }
    Ok(z.iter().map(|v| v.abs()).fold(0.0, f64::max))
}

/// `Π(z) = (∏ |z_i|)^{1/k}`; zero as soon as any coordinate is zero.
pub fn geo_mean(z: &[f64]) -> Result<f64> {
    if z.is_empty() {
        return Err(Error::EmptyVector);
    }
    let prod: f64 = z.iter().map(|v| v.abs()).product();
    Ok(prod.powf(1.0 / z.len() as f64))
}

/// `Π'(z) = (∏ max(1, |z_i|))^{1/k}`, always at least 1.
pub fn clipped_geo_mean(z: &[f64]) -> Result<f64> {
    if z.is_empty() {
        return Err(Error::EmptyVector);
    }
    let prod: f64 = z.iter().map(|v| v.abs().max(1.0)).product();
    Ok(prod.powf(1.0 / z.len() as f64))
}

/// The pseudocompound: coordinate `i` gets half-width `(∏ η_j) / η_i`,
/// preserving the `(m, n)` split.
pub fn pseudocompound(b: &BoxSpec) -> BoxSpec {
    let total: f64 = b.lambda.product() * b.mu.product();
    let lambda = WeightTuple {
        values: b.lambda.values().iter().map(|&v| total / v).collect(),
    };
    let mu = WeightTuple {
        values: b.mu.values().iter().map(|&v| total / v).collect(),
    };
    BoxSpec { lambda, mu }
}

/// Inverse of [`pseudocompound`]: recovers `η` from `η*` via
/// `η_i = (∏ η*_j)^{1/(d-1)} / η*_i`.
pub fn inverse_pseudocompound(b: &BoxSpec) -> BoxSpec {
    let d = b.d() as f64;
    let total = (b.lambda.product() * b.mu.product()).powf(1.0 / (d - 1.0));
    let lambda = WeightTuple {
        values: b.lambda.values().iter().map(|&v| total / v).collect(),
    };
    let mu = WeightTuple {
        values: b.mu.values().iter().map(|&v| total / v).collect(),
    };
    BoxSpec { lambda, mu }
}

/// `λ*_j = λ_j^{-1} ∏λ ∏μ` and `μ*_i = μ_i^{-1} ∏λ ∏μ`.
///
/// Algebraic mirror of [`pseudocompound`]: `P(λ, μ)* = P(λ*, μ*)` holds
/// exactly, with both code paths performing the same arithmetic.
pub fn dual_weights(lambda: &WeightTuple, mu: &WeightTuple) -> (WeightTuple, WeightTuple) {
    let total = lambda.product() * mu.product();
    let ls = WeightTuple {
        values: lambda.values().iter().map(|&v| total / v).collect(),
    };
    let ms = WeightTuple {
        values: mu.values().iter().map(|&v| total / v).collect(),
    };
    (ls, ms)
}

/// Hat normalization of a weight tuple with `Π(λ) ≥ 1`.
///
/// Sorting ascending (stable, so ties keep their original order), `p` is the
/// greatest index with `λ_{j1}·…·λ_{jp} < 1`. The first `p` sorted entries
/// become 1 and the rest are multiplied by `(λ_{j1}·…·λ_{jp})^{1/(m-p)}`,
/// which preserves the geometric mean and makes every entry at least 1.
pub fn hat_normalize(lambda: &WeightTuple) -> Result<HatResult> {
    let m = lambda.len();
    let pi = lambda.geo_mean();
    if pi < 1.0 - PRODUCT_REL_TOL {
        return Err(Error::ProductBelowOne(pi));
    }

    let mut sort_order: Vec<usize> = (0..m).collect();
    sort_order.sort_by(|&a, &b| lambda.values()[a].partial_cmp(&lambda.values()[b]).unwrap());

    let sorted: Vec<f64> = sort_order.iter().map(|&j| lambda.values()[j]).collect();
    if sorted[0] >= 1.0 {
        return Ok(HatResult {
            hat: lambda.clone(),
            pivot_p: 0,
            kappa: 1.0,
            sort_order,
        });
    }

    let mut p = 0;
    let mut prefix = 1.0;
    let mut prefix_p = 1.0;
    for (i, &v) in sorted.iter().enumerate() {
        prefix *= v;
        if prefix < 1.0 {
            p = i + 1;
            prefix_p = prefix;
        }
    }
    // Π(λ) ≥ 1 forces p < m; rounding in the full product may still claim
    // p = m when Π(λ) sits right at 1, so clamp.
    if p >= m {
        p = m - 1;
        prefix_p = sorted[..p].iter().product();
    }

    let shrink = prefix_p.powf(1.0 / (m - p) as f64);
    let kappa = 1.0 / shrink;
    let mut hat = lambda.values().to_vec();
    for (i, &j) in sort_order.iter().enumerate() {
        hat[j] = if i < p { 1.0 } else { lambda.values()[j] * shrink };
    }
    Ok(HatResult {
        hat: WeightTuple { values: hat },
        pivot_p: p,
        kappa,
        sort_order,
    })
}

/// One point of the `(t, γ) ↔ (s, δ)` correspondence between the primal and
/// dual box families, together with the dimensions it was computed for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub t: f64,
    pub gamma: f64,
    pub s: f64,
    pub delta: f64,
    pub m: usize,
    pub n: usize,
}

impl ParamPoint {
    pub fn primal_box(&self) -> Result<BoxSpec> {
        BoxSpec::primal_family(self.t, self.gamma, self.m, self.n)
    }

    pub fn dual_box(&self) -> Result<BoxSpec> {
        BoxSpec::dual_family(self.s, self.delta, self.m, self.n)
    }
}

/// Maps `(s, δ)` to the `(t, γ)` for which `Q(s, δ)` is the pseudocompound
/// of `P(t, γ)`:
///
/// `t = s^{((n-1)δ + n)/(d-1)}`, `γ = (mδ + m - 1)/((n-1)δ + n)`.
pub fn param_map(s: f64, delta: f64, m: usize, n: usize) -> Result<ParamPoint> {
    if !(s > 1.0) {
        return Err(Error::DegenerateScale(s));
    }
    let (mf, nf) = (m as f64, n as f64);
    let d = mf + nf;
    let denom = (nf - 1.0) * delta + nf;
    let t = s.powf(denom / (d - 1.0));
    let gamma = (mf * delta + mf - 1.0) / denom;
    Ok(ParamPoint {
        t,
        gamma,
        s,
        delta,
        m,
        n,
    })
}

/// The two one-parameter families of weighted boxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `F(t, γ)`: `Π(λ) = t`, `Π(μ) = t^{-γ}`, `min λ_j ≥ 1`.
    F,
    /// `G(s, δ)`: `Π(λ) = s^{-δ}`, `Π(μ) = s`, `min μ_i ≥ 1`.
    G,
}

/// Checks membership of a box in `F(t, γ)` or `G(s, δ)`. For the `G` family
/// the arguments `(t, gamma)` play the role of `(s, δ)`.
pub fn family_membership(b: &BoxSpec, t: f64, gamma: f64, kind: Family) -> bool {
    family_membership_with_tol(b, t, gamma, kind, PRODUCT_REL_TOL)
}

pub fn family_membership_with_tol(
    b: &BoxSpec,
    t: f64,
    gamma: f64,
    kind: Family,
    tol: f64,
) -> bool {
    let pl = b.lambda.geo_mean();
    let pm = b.mu.geo_mean();
    match kind {
        Family::F => {
            rel_eq(pl, t, tol) && rel_eq(pm, t.powf(-gamma), tol) && b.lambda.min() >= 1.0 - tol
        }
        Family::G => {
            rel_eq(pl, t.powf(-gamma), tol) && rel_eq(pm, t, tol) && b.mu.min() >= 1.0 - tol
        }
    }
}
