//! Private median of bounded values: exact expected error of each mechanism
//! and one sampled release per mechanism.

use dampen::mechanism::Mechanism;
use dampen::percentile::{NumericVector, PercentileQuery, PercentileSelection};
use dampen::rng::rng_from_seed;

fn main() -> dampen::Result<()> {
    let values = [87.0, 90.0, 83.0, 61.0, 91.0, 61.0, 66.0, 72.0, 75.0, 80.0];
    let x = NumericVector::new(&values, 100.0)?;
    let selection = PercentileSelection::new(&x, PercentileQuery::median(), None);
    let mut rng = rng_from_seed(1);
    for eps in [0.1, 1.0, 10.0] {
        print!("ε = {eps:>4}:");
        for mechanism in [Mechanism::Em, Mechanism::Ld, Mechanism::Sld] {
            let error = selection.expected_error(mechanism, eps)?;
            let released = *selection.distribution(mechanism, eps)?.sample(&mut rng);
            print!("  {mechanism} E[err] {error:7.3} (sample label {released})");
        }
        println!();
    }
    Ok(())
}
