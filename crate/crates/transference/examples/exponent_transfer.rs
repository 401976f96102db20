//! The per-scale implication behind the exponent inequalities: at every
//! scale, the best dual approximation defines a parameter point whose mapped
//! primal box must contain a lattice point. Also prints the bound formula
//! both estimates should respect.

use transference::exponents::ExponentKind;
use transference::instances::{random_theta, rng_for};
use transference::lattice::DEFAULT_CAP;
use transference::theorems::{check_exponent_transfer, dyson_rhs};

fn main() -> transference::Result<()> {
    let mut rng = rng_for(99);
    for (m, n) in [(2usize, 1usize), (1, 2)] {
        let theta = random_theta(&mut rng, m, n)?;
        for kind in [ExponentKind::Ordinary, ExponentKind::Multiplicative] {
            let out = check_exponent_transfer(&theta, kind, 2.0, 2.0, 8, DEFAULT_CAP)?;
            println!(
                "(m, n) = ({m}, {n}) {kind:?}: {} scales checked, {} skipped, {} failures",
                out.scales_checked,
                out.skipped,
                out.failures.len()
            );
        }
    }

    println!("\nbound formula (n omega + n - 1) / ((m - 1) omega + m):");
    for omega in [2.0, 3.0, 5.0] {
        println!(
            "  m=2 n=1, omega = {omega}: transposed exponent >= {:.4}",
            dyson_rhs(omega, 2, 1)
        );
    }
    Ok(())
}
