//! Weight functionals, pseudocompounds, dual weights and hat normalization
//! on a small hand-picked box.

use transference::box_calculus::{
    clipped_geo_mean, dual_weights, geo_mean, hat_normalize, param_map, pseudocompound, sup_norm,
    BoxSpec, WeightTuple,
};

fn main() -> transference::Result<()> {
    let z = [0.3, -2.0, 0.5];
    println!("z          = {z:?}");
    println!("|z|        = {}", sup_norm(&z)?);
    println!("Pi(z)      = {}", geo_mean(&z)?);
    println!("Pi'(z)     = {}", clipped_geo_mean(&z)?);

    let lambda = WeightTuple::new(vec![0.5, 3.0])?;
    let mu = WeightTuple::new(vec![0.8])?;
    let bx = BoxSpec::new(lambda.clone(), mu.clone())?;
    println!("\nbox half-widths        {:?}", bx.half_widths());
    println!("pseudocompound widths  {:?}", pseudocompound(&bx).half_widths());

    let (ls, ms) = dual_weights(&lambda, &mu);
    println!("dual weights  lambda* = {:?}  mu* = {:?}", ls.values(), ms.values());

    // min lambda < 1 <= Pi(lambda), the case hat normalization exists for
    let hat = hat_normalize(&lambda)?;
    println!(
        "\nhat(lambda) = {:?}  p = {}  kappa = {}",
        hat.hat.values(),
        hat.pivot_p,
        hat.kappa
    );
    println!(
        "Pi preserved: {} -> {}",
        lambda.geo_mean(),
        hat.hat.geo_mean()
    );

    let pp = param_map(100.0, 1.0, 2, 1)?;
    println!("\nparam map (s=100, delta=1, m=2, n=1): t = {}, gamma = {}", pp.t, pp.gamma);
    println!("primal box {:?}", pp.primal_box()?.half_widths());
    println!("dual box   {:?}", pp.dual_box()?.half_widths());
    Ok(())
}
