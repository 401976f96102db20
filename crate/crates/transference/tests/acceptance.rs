//! The acceptance gate: one test per criterion, each printing a single
//! pass/fail line (visible with `--nocapture`) before asserting.

mod common;

use std::time::{Duration, Instant};

use transference::box_calculus::{
    dual_weights, hat_normalize, param_map, pseudocompound, BoxSpec,
};
use transference::exponents::{
    estimate_exponent, multiplicative_minimum, ordinary_minimum, ExponentKind, ExponentValue,
    GridSpec, MatrixSide,
};
use transference::instances::{
    mahler_instances, mult_instances, random_theta, random_weights, rng_for, Preset,
};
use transference::lattice::{
    dual_basis, find_primal_point, primal_basis, DEFAULT_CAP,
};
use transference::theorems::{
    check_exponent_transfer, check_mahler, check_mahler_with_constant, check_mult_transference,
    check_proof_chain, Verdict,
};
use transference::Error;

const REL_12: f64 = 1e-12;
const REL_10: f64 = 1e-10;
const BIG_CAP: u64 = 1_000_000_000;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn report(name: &str, pass: bool, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    let in_time = elapsed <= budget;
    println!(
        "criterion {name}: {} ({elapsed:.2?} of {budget:?} budget)",
        if pass && in_time { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {name} failed");
    assert!(in_time, "criterion {name} overran its {budget:?} budget: {elapsed:?}");
}

#[test]
fn criterion_1_algebra_suite() {
    let started = Instant::now();
    let mut rng = rng_for(11);
    let mut ok = true;
    for i in 0..1000 {
        let (m, n) = [(2usize, 1usize), (1, 2), (2, 2), (3, 1), (2, 3)][i % 5];
        let product: f64 = 0.2 + 3.0 * (i as f64 / 1000.0);
        let lambda = random_weights(&mut rng, m, product).unwrap();
        let mu = random_weights(&mut rng, n, 1.0 / product.sqrt()).unwrap();
        let bx = BoxSpec::new(lambda.clone(), mu.clone()).unwrap();

        // the two routes to the dual box agree
        let via_compound = pseudocompound(&bx).half_widths();
        let (ls, ms) = dual_weights(&lambda, &mu);
        let via_weights = BoxSpec::new(ls, ms).unwrap().half_widths();
        ok &= via_compound
            .iter()
            .zip(&via_weights)
            .all(|(a, b)| rel_close(*a, *b, REL_12));

        // (η*)* = (∏η)^{d-2} η
        let d = bx.d() as i32;
        let eta: Vec<f64> = bx.half_widths();
        let total: f64 = eta.iter().product();
        let twice = pseudocompound(&pseudocompound(&bx)).half_widths();
        ok &= twice
            .iter()
            .zip(&eta)
            .all(|(a, e)| rel_close(*a, total.powi(d - 2) * e, REL_10));
    }
    report("1 algebra suite", ok, started, Duration::from_secs(5));
}

#[test]
fn criterion_2_hat_suite() {
    let started = Instant::now();
    let mut rng = rng_for(22);
    let mut ok = true;
    for i in 0..1000 {
        let m = 2 + i % 3;
        // Π(λ) ≥ 1
        let pi: f64 = 1.0 + 2.0 * (i as f64 / 1000.0);
        let lambda = random_weights(&mut rng, m, pi.powi(m as i32)).unwrap();
        let hat = hat_normalize(&lambda).unwrap();
        ok &= hat.hat.min() >= 1.0 - REL_10;
        ok &= hat.kappa >= 1.0;
        ok &= rel_close(hat.hat.geo_mean(), lambda.geo_mean(), REL_10);
        let clipped =
            transference::box_calculus::clipped_geo_mean(hat.hat.values()).unwrap();
        ok &= rel_close(clipped, hat.hat.geo_mean(), REL_10);
        // idempotence
        let again = hat_normalize(&hat.hat).unwrap();
        ok &= again.pivot_p == 0
            && again
                .hat
                .values()
                .iter()
                .zip(hat.hat.values())
                .all(|(a, b)| rel_close(*a, *b, REL_10));
    }
    report("2 hat suite", ok, started, Duration::from_secs(2));
}

#[test]
fn criterion_3_classical_transference_empirical() {
    let started = Instant::now();
    let instances = mahler_instances(300, 33).unwrap();
    let mut nonvacuous = 0;
    let mut violations = 0;
    for inst in &instances {
        let report = check_mahler(&inst.theta, &inst.bx, DEFAULT_CAP).unwrap();
        match report.verdict {
            Verdict::Verified => nonvacuous += 1,
            Verdict::Violation => violations += 1,
            _ => {}
        }
    }
    let mut sabotage_violations = 0;
    for inst in instances.iter().take(40) {
        let report = check_mahler_with_constant(&inst.theta, &inst.bx, 0.3, DEFAULT_CAP).unwrap();
        if report.verdict == Verdict::Violation {
            sabotage_violations += 1;
        }
    }
    let ok = violations == 0
        && nonvacuous * 10 >= instances.len() * 8
        && sabotage_violations >= 1;
    println!(
        "  (classical transference: {nonvacuous}/{} non-vacuous, {violations} violations, {sabotage_violations} sabotage violations)",
        instances.len()
    );
    report("3 classical transference empirical", ok, started, Duration::from_secs(120));
}

#[test]
fn criterion_4_multiplicative_transference_empirical() {
    let started = Instant::now();
    let instances = mult_instances(300, 44).unwrap();
    let mut violations = 0;
    let mut chain_failures = 0;
    let mut nontrivial = 0;
    for inst in &instances {
        let report =
            check_mult_transference(&inst.theta, &inst.lambda, &inst.mu, DEFAULT_CAP).unwrap();
        if report.verdict == Verdict::Violation {
            violations += 1;
        }
        match check_proof_chain(&inst.theta, &inst.lambda, &inst.mu, DEFAULT_CAP) {
            Err(Error::TrivialBranch) => {}
            Err(e) => panic!("chain error on instance {}: {e}", inst.seed_index),
            Ok(chain) => {
                nontrivial += 1;
                if !chain.all_steps_pass() || chain.steps.len() < 5 {
                    chain_failures += 1;
                    println!("  chain failure on instance {}: {:#?}", inst.seed_index, chain.steps);
                }
            }
        }
    }
    let ok = violations == 0 && chain_failures == 0 && nontrivial > 0;
    println!(
        "  (multiplicative transference: {violations} violations, {nontrivial} nontrivial chains, {chain_failures} chain failures)"
    );
    report("4 multiplicative transference empirical", ok, started, Duration::from_secs(180));
}

#[test]
fn criterion_5_parameter_mapping() {
    let started = Instant::now();
    let mut rng = rng_for(55);
    let mut ok = true;
    for &(m, n) in &[(2usize, 1usize), (1, 2), (2, 2), (3, 1)] {
        for _ in 0..100 {
            use rand::Rng;
            let s: f64 = rng.gen_range(1.5..50.0);
            let delta: f64 = rng.gen_range(0.05..3.0);
            let pp = param_map(s, delta, m, n).unwrap();
            let q = pp.dual_box().unwrap().half_widths();
            let compound = pseudocompound(&pp.primal_box().unwrap()).half_widths();
            ok &= q
                .iter()
                .zip(&compound)
                .all(|(a, b)| rel_close(*a, *b, REL_12));
        }
    }
    report("5 parameter mapping", ok, started, Duration::from_secs(1));
}

#[test]
fn criterion_6_duality() {
    let started = Instant::now();
    let mut rng = rng_for(66);
    let mut ok = true;
    let mut pairings = 0;
    for i in 0..100 {
        let (m, n) = [(2usize, 1usize), (1, 2), (2, 2), (3, 1), (3, 2)][i % 5];
        let theta = random_theta(&mut rng, m, n).unwrap();
        let b = primal_basis(&theta);
        let bs = dual_basis(&theta);
        let gram = b.columns.transpose() * &bs.columns;
        let d = m + n;
        for r in 0..d {
            for c in 0..d {
                let expected = if r == c { 1.0 } else { 0.0 };
                ok &= (gram[(r, c)] - expected).abs() <= REL_12;
            }
        }
        // random pairings of lattice vectors are integers
        use rand::Rng;
        for _ in 0..10 {
            let u: Vec<i64> = (0..d).map(|_| rng.gen_range(-50i64..=50)).collect();
            let v: Vec<i64> = (0..d).map(|_| rng.gen_range(-50i64..=50)).collect();
            let zu = b.embed(&u);
            let zv = bs.embed(&v);
            let dot: f64 = zu.iter().zip(&zv).map(|(a, b)| a * b).sum();
            ok &= (dot - dot.round()).abs() <= 1e-9;
            pairings += 1;
        }
    }
    assert_eq!(pairings, 1000);
    report("6 duality", ok, started, Duration::from_secs(30));
}

#[test]
fn criterion_7_exponent_estimators() {
    let started = Instant::now();
    let mut ok = true;

    // rational and zero matrices are flagged infinite by t = 16
    let short = GridSpec {
        t0: 2.0,
        ratio: 2.0,
        steps: 4,
        tail_window: 2,
    };
    for preset in [Preset::RationalRow, Preset::ZeroRow] {
        let est = estimate_exponent(
            &preset.matrix(),
            ExponentKind::Ordinary,
            MatrixSide::Theta,
            &short,
            DEFAULT_CAP,
        )
        .unwrap();
        ok &= est.estimate == ExponentValue::Infinite;
    }

    // ordinary estimate for the algebraic pair lands near the target m/n = 2
    let grid = GridSpec {
        t0: 2.0,
        ratio: 2.0,
        steps: 13,
        tail_window: 4,
    };
    let theta = Preset::Sqrt23Row.matrix();
    let est = estimate_exponent(&theta, ExponentKind::Ordinary, MatrixSide::Theta, &grid, BIG_CAP)
        .unwrap();
    let value = match est.estimate {
        ExponentValue::Finite(v) => v,
        ExponentValue::Infinite => f64::NAN,
    };
    ok &= (1.7..=2.6).contains(&value);
    println!("  (sqrt23-row ordinary estimate: {value:.4})");

    // the trace agrees with the brute-force oracle at small scales
    for r in est.trace.iter().take(4) {
        ok &= r.psi == common::naive_ordinary_psi(&theta, r.t);
    }

    // ψ× ≤ ψ and γ× ≥ γ on every shared scale
    let mut t = 2.0;
    for _ in 0..9 {
        let ord = ordinary_minimum(&theta, t, BIG_CAP).unwrap();
        let mult = multiplicative_minimum(&theta, t, BIG_CAP).unwrap();
        ok &= mult.psi <= ord.psi;
        if let (Some(go), Some(gm)) = (ord.gamma_t, mult.gamma_t) {
            ok &= gm >= go;
        }
        t *= 2.0;
    }
    report("7 exponent estimators", ok, started, Duration::from_secs(120));
}

#[test]
fn criterion_8_per_scale_transfer() {
    let started = Instant::now();
    let mut rng = rng_for(88);
    let mut ok = true;
    let mut checked_total = 0;
    for i in 0..20 {
        let (m, n) = if i < 10 { (2, 1) } else { (1, 2) };
        let theta = random_theta(&mut rng, m, n).unwrap();
        for kind in [ExponentKind::Ordinary, ExponentKind::Multiplicative] {
            let out = check_exponent_transfer(&theta, kind, 2.0, 1.1, 50, BIG_CAP).unwrap();
            ok &= out.failures.is_empty();
            checked_total += out.scales_checked;
        }
    }
    println!("  (per-scale transfer: {checked_total} scales checked across 20 matrices)");
    ok &= checked_total > 0;
    report("8 per-scale transfer", ok, started, Duration::from_secs(300));
}

#[test]
fn criterion_9_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = rng_for(99);
    let mut ok = true;
    let mut compared = 0;
    for i in 0..300 {
        let (m, n) = [(2usize, 1usize), (1, 2), (2, 2), (3, 1)][i % 4];
        let theta = random_theta(&mut rng, m, n).unwrap();
        let lambda = random_weights(&mut rng, m, 6.0f64.powi(m as i32)).unwrap();
        let mu = random_weights(&mut rng, n, 0.6f64.powi(n as i32)).unwrap();
        let bx = BoxSpec::new(lambda, mu).unwrap();
        if common::enumeration_volume(&common::radii(bx.lambda().values())) > 1e5 {
            continue;
        }
        let pruned = find_primal_point(&theta, &bx, true, DEFAULT_CAP).unwrap();
        let naive = common::naive_primal(&theta, &bx);
        ok &= pruned.map(|p| p.integer_coords) == naive;
        compared += 1;
    }
    println!("  (oracle equivalence: {compared} instances under the volume limit)");
    ok &= compared >= 200;
    report("9 oracle equivalence", ok, started, Duration::from_secs(60));
}
