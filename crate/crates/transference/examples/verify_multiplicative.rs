//! The multiplicative transference theorem on random instances, then the
//! proof chain step by step on one nontrivial instance.

use transference::instances::mult_instances;
use transference::lattice::DEFAULT_CAP;
use transference::theorems::{check_mult_transference, check_proof_chain, Verdict};
use transference::Error;

fn main() -> transference::Result<()> {
    let instances = mult_instances(40, 7)?;
    let mut verified = 0;
    let mut vacuous = 0;
    for inst in &instances {
        let report = check_mult_transference(&inst.theta, &inst.lambda, &inst.mu, DEFAULT_CAP)?;
        match report.verdict {
            Verdict::Verified => verified += 1,
            Verdict::Vacuous => vacuous += 1,
            v => println!("instance {}: {:?}", inst.seed_index, v),
        }
    }
    println!("{verified} verified, {vacuous} vacuous out of {}", instances.len());

    // walk the chain on the first instance whose lambda block actually needs
    // hat normalization (some entry below 1)
    for inst in &instances {
        match check_proof_chain(&inst.theta, &inst.lambda, &inst.mu, DEFAULT_CAP) {
            Err(Error::TrivialBranch) => continue,
            Err(e) => return Err(e),
            Ok(report) => {
                println!("\nchain on instance {} ({:?}):", inst.seed_index, report.verdict);
                for step in &report.steps {
                    println!(
                        "  [{}] {} - {}",
                        if step.pass { "ok" } else { "!!" },
                        step.name,
                        step.detail
                    );
                }
                break;
            }
        }
    }
    Ok(())
}
