//! The lattice pair of a target matrix: bases, the integral duality pairing,
//! and exhaustive point searches in a weighted box.

use transference::box_calculus::{BoxSpec, WeightTuple};
use transference::lattice::{
    dual_basis, find_dual_point, find_primal_point, primal_basis, TargetMatrix, DEFAULT_CAP,
};

fn main() -> transference::Result<()> {
    let theta = TargetMatrix::new(2, 1, vec![vec![2f64.sqrt() - 1.0, 3f64.sqrt() - 1.0]])?;
    let primal = primal_basis(&theta);
    let dual = dual_basis(&theta);
    println!("primal basis columns:\n{}", primal.columns);
    println!("dual basis columns:\n{}", dual.columns);

    // every pairing <primal column, dual column> is an integer
    let pairing = primal.columns.transpose() * &dual.columns;
    println!("pairing matrix (integer entries):\n{pairing}");

    let bx = BoxSpec::new(
        WeightTuple::new(vec![5.0, 5.0])?,
        WeightTuple::new(vec![0.2])?,
    )?;
    match find_primal_point(&theta, &bx, false, DEFAULT_CAP)? {
        Some(pt) => println!(
            "primal point: coords {:?} embeds to {:?}",
            pt.integer_coords, pt.embedded
        ),
        None => println!("primal box is empty"),
    }

    let dual_bx = BoxSpec::new(
        WeightTuple::new(vec![0.7, 0.7])?,
        WeightTuple::new(vec![6.0])?,
    )?;
    match find_dual_point(&theta, &dual_bx, false, DEFAULT_CAP)? {
        Some(pt) => println!(
            "dual point:   coords {:?} embeds to {:?}",
            pt.integer_coords, pt.embedded
        ),
        None => println!("dual box is empty"),
    }
    Ok(())
}
