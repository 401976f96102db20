//! Reproducible instance generation: random target matrices, random weight
//! tuples with product constraints, and the named algebraic presets.
//!
//! Everything is driven by a seeded ChaCha stream, so a `(seed, counter)`
//! pair pins down the whole batch and reruns are bit-identical.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::box_calculus::{BoxSpec, WeightTuple};
use crate::error::{Error, Result};
use crate::lattice::TargetMatrix;

/// Default target for `∏λ · ∏μ`, chosen slightly above 1 so the dual box is
/// large enough for a guaranteed hypothesis hit on most instances.
pub const DEFAULT_PRODUCT_TARGET: f64 = 1.2;

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform in `[0, 1)`.
pub fn random_theta(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Result<TargetMatrix> {
    let rows = (0..n)
        .map(|_| (0..m).map(|_| rng.gen::<f64>()).collect())
        .collect();
    TargetMatrix::new(m, n, rows)
}

/// `len` weights with log-uniform spread, rescaled so their product is
/// exactly `product`.
pub fn random_weights(rng: &mut ChaCha8Rng, len: usize, product: f64) -> Result<WeightTuple> {
    let raw: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0f64).exp()).collect();
    let raw_product: f64 = raw.iter().product();
    let fix = (product / raw_product).powf(1.0 / len as f64);
    WeightTuple::new(raw.iter().map(|v| v * fix).collect())
}

/// One classical-transference instance: a matrix and a box whose total
/// weight product meets the target.
#[derive(Debug, Clone)]
pub struct MahlerInstance {
    pub theta: TargetMatrix,
    pub bx: BoxSpec,
    pub seed_index: usize,
}

/// One multiplicative-transference instance with `Π(λ) ≥ 1`.
#[derive(Debug, Clone)]
pub struct MultInstance {
    pub theta: TargetMatrix,
    pub lambda: WeightTuple,
    pub mu: WeightTuple,
    pub seed_index: usize,
}

/// Generates instances with `d ∈ {3, 4, 5}` cycling over all valid
/// `(m, n)` splits.
pub fn mahler_instances(count: usize, seed: u64) -> Result<Vec<MahlerInstance>> {
    let splits: Vec<(usize, usize)> = (3..=5usize)
        .flat_map(|d| (1..d).map(move |m| (m, d - m)))
        .collect();
    let mut rng = rng_for(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let (m, n) = splits[i % splits.len()];
        let theta = random_theta(&mut rng, m, n)?;
        let lambda = random_weights(&mut rng, m, DEFAULT_PRODUCT_TARGET.powf(m as f64 / (m + n) as f64))?;
        let mu = random_weights(&mut rng, n, DEFAULT_PRODUCT_TARGET.powf(n as f64 / (m + n) as f64))?;
        out.push(MahlerInstance {
            theta,
            bx: BoxSpec::new(lambda, mu)?,
            seed_index: i,
        });
    }
    Ok(out)
}

/// Generates instances over `(m, n) ∈ {(2,1), (1,2), (2,2), (3,1)}` with
/// `Π(λ) ≥ 1` and `∏λ·∏μ` at the default target.
pub fn mult_instances(count: usize, seed: u64) -> Result<Vec<MultInstance>> {
    let splits = [(2usize, 1usize), (1, 2), (2, 2), (3, 1)];
    let mut rng = rng_for(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let (m, n) = splits[i % splits.len()];
        let theta = random_theta(&mut rng, m, n)?;
        // ∏λ = L^m with L = Π(λ) drawn in [1, 2], then ∏μ makes the total
        // product hit the target.
        let big_l: f64 = rng.gen_range(1.0..2.0);
        let lambda = random_weights(&mut rng, m, big_l.powf(m as f64))?;
        let mu = random_weights(&mut rng, n, DEFAULT_PRODUCT_TARGET / lambda.product())?;
        out.push(MultInstance {
            theta,
            lambda,
            mu,
            seed_index: i,
        });
    }
    Ok(out)
}

/// Named algebraic presets materialized to full double precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// `m = 2, n = 1`, `Θ = (√2-1, √3-1)`: a badly approximable algebraic pair.
    Sqrt23Row,
    /// `m = 1, n = 2`, `Θ = (√2-1, √3-1)ᵀ`.
    Sqrt23Col,
    /// `m = 2, n = 1`, `Θ = (1/2, 1/3)`: rational, so every exponent is infinite.
    RationalRow,
    /// `m = 2, n = 1`, zero matrix.
    ZeroRow,
}

impl Preset {
    pub fn parse(id: &str) -> Option<Preset> {
        match id {
            "sqrt23-row" => Some(Preset::Sqrt23Row),
            "sqrt23-col" => Some(Preset::Sqrt23Col),
            "rational-row" => Some(Preset::RationalRow),
            "zero-row" => Some(Preset::ZeroRow),
            _ => None,
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Preset::Sqrt23Row => "sqrt23-row",
            Preset::Sqrt23Col => "sqrt23-col",
            Preset::RationalRow => "rational-row",
            Preset::ZeroRow => "zero-row",
        }
    }

    pub fn matrix(&self) -> TargetMatrix {
        let (r2, r3) = (2f64.sqrt() - 1.0, 3f64.sqrt() - 1.0);
        match self {
            Preset::Sqrt23Row => TargetMatrix::new(2, 1, vec![vec![r2, r3]]),
            Preset::Sqrt23Col => TargetMatrix::new(1, 2, vec![vec![r2], vec![r3]]),
            Preset::RationalRow => TargetMatrix::new(2, 1, vec![vec![0.5, 1.0 / 3.0]]),
            Preset::ZeroRow => TargetMatrix::zero(2, 1),
        }
        .expect("preset dimensions are valid")
    }

    pub fn all() -> &'static [Preset] {
        &[
            Preset::Sqrt23Row,
            Preset::Sqrt23Col,
            Preset::RationalRow,
            Preset::ZeroRow,
        ]
    }
}

/// Matrix file schema: `{"m": 2, "n": 1, "theta": [[0.5, 0.333]]}` with
/// `n` rows of length `m`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ThetaFile {
    pub m: usize,
    pub n: usize,
    pub theta: Vec<Vec<f64>>,
}

impl ThetaFile {
    pub fn into_matrix(self) -> Result<TargetMatrix> {
        TargetMatrix::new(self.m, self.n, self.theta)
    }

    pub fn from_matrix(theta: &TargetMatrix) -> Self {
        ThetaFile {
            m: theta.m(),
            n: theta.n(),
            theta: theta.rows().to_vec(),
        }
    }
}

pub fn parse_theta_json(text: &str) -> Result<TargetMatrix> {
    let file: ThetaFile = serde_json::from_str(text)
        .map_err(|e| Error::DimensionMismatch(format!("bad matrix JSON: {e}")))?;
    file.into_matrix()
}
