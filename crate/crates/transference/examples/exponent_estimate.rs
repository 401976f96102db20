//! Finite-scale exponent estimation on the algebraic presets: the trace of
//! best approximations, the condensed estimate, and the infinity flag on a
//! rational matrix.

use transference::exponents::{
    estimate_exponent, ExponentKind, ExponentValue, GridSpec, MatrixSide,
};
use transference::instances::Preset;
use transference::lattice::DEFAULT_CAP;

fn main() {
    let grid = GridSpec {
        steps: 10,
        ..GridSpec::default()
    };
    for preset in [Preset::Sqrt23Row, Preset::RationalRow] {
        let theta = preset.matrix();
        println!("== {} ==", preset.id());
        let est = estimate_exponent(
            &theta,
            ExponentKind::Ordinary,
            MatrixSide::Theta,
            &grid,
            DEFAULT_CAP,
        )
        .expect("grid fits under the default cap");
        for r in &est.trace {
            println!(
                "  t = {:7.1}  psi = {:.3e}  gamma_t = {:?}",
                r.t, r.psi, r.gamma_t
            );
        }
        match est.estimate {
            ExponentValue::Finite(v) => println!("  ordinary estimate: {v:.4}\n"),
            ExponentValue::Infinite => println!("  exact hit found: exponent is infinite\n"),
        }
    }

    // the multiplicative variant on the same algebraic pair, smaller grid
    let small = GridSpec { steps: 8, ..grid };
    let est = estimate_exponent(
        &Preset::Sqrt23Row.matrix(),
        ExponentKind::Multiplicative,
        MatrixSide::Theta,
        &small,
        DEFAULT_CAP,
    )
    .expect("grid fits under the default cap");
    if let ExponentValue::Finite(v) = est.estimate {
        println!("sqrt23-row multiplicative estimate: {v:.4}");
    }
}
