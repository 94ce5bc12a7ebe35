//! EM, LD, SLD and permute-and-flip on one hand-built utility vector with a
//! made-up sensitivity profile that grows with utility.

use std::sync::Arc;

use dampen::mechanism::{
    expected_error, exponential_distribution, local_dampening_distribution,
    select_permute_and_flip, shifted_local_dampening_distribution, SelectionProblem,
};
use dampen::rng::rng_from_seed;
use dampen::sensitivity::{bound_sensitivity, Monotonicity, SensitivityFunction};

fn main() -> dampen::Result<()> {
    let utilities = [40.0, 38.0, 25.0, 10.0, 3.0];
    let (gs, size) = (20.0, 30);
    let problem = SelectionProblem::new(
        &utilities[..],
        (0..utilities.len()).collect(),
        Arc::new(|u: &[f64], r: &usize| u[*r]),
        gs,
        size,
    )?;
    let raw = SensitivityFunction::new(|u: &[f64], t, r: &usize| 1.0 + u[*r] / 40.0 * t as f64)
        .declare_admissible(true)
        .declare_monotonicity(Monotonicity::NonDecreasing);
    let delta = bound_sensitivity(&raw, gs, size);

    let mut rng = rng_from_seed(5);
    for eps in [0.1, 1.0, 10.0] {
        let em = expected_error(&exponential_distribution(&problem, eps)?, &problem)?;
        let ld = expected_error(
            &local_dampening_distribution(&problem, &delta, eps)?,
            &problem,
        )?;
        let sld = expected_error(
            &shifted_local_dampening_distribution(&problem, &delta, eps)?,
            &problem,
        )?;
        let runs = 20_000;
        let pf = (0..runs)
            .map(|_| select_permute_and_flip(&problem, eps, &mut rng).map(|r| 40.0 - utilities[r]))
            .sum::<dampen::Result<f64>>()?
            / runs as f64;
        println!("ε = {eps:>4}: EM {em:7.3}  LD {ld:7.3}  SLD {sld:7.3}  PF ≈ {pf:7.3}");
    }
    Ok(())
}
