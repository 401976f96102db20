//! Classical transference on a batch of random instances: a nonzero dual
//! point in the pseudocompound forces a nonzero primal point in the c-scaled
//! box. Also runs a sabotage pass with a deliberately shrunken constant to
//! show the check has teeth.

use transference::instances::mahler_instances;
use transference::lattice::DEFAULT_CAP;
use transference::theorems::{check_mahler, check_mahler_with_constant, Verdict};

fn main() -> transference::Result<()> {
    let instances = mahler_instances(60, 2024)?;
    let mut tally = [0usize; 4];
    for inst in &instances {
        let report = check_mahler(&inst.theta, &inst.bx, DEFAULT_CAP)?;
        let slot = match report.verdict {
            Verdict::Verified => 0,
            Verdict::Vacuous => 1,
            Verdict::Violation => 2,
            Verdict::Inconclusive => 3,
        };
        tally[slot] += 1;
    }
    println!(
        "honest constant: {} verified, {} vacuous, {} violations, {} inconclusive",
        tally[0], tally[1], tally[2], tally[3]
    );

    let mut sabotage_violations = 0;
    for inst in &instances {
        let report = check_mahler_with_constant(&inst.theta, &inst.bx, 0.3, DEFAULT_CAP)?;
        if report.verdict == Verdict::Violation {
            sabotage_violations += 1;
        }
    }
    println!("sabotaged constant 0.3: {sabotage_violations} violations (expected > 0)");
    Ok(())
}
