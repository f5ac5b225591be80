//! Smooth binary forms over F_2 approach 3/8; plane quintics approach
//! 21/64.

use cycle_sieve::density::{density_experiment, DensityConfig};
use cycle_sieve::field::make_field;

fn main() -> cycle_sieve::Result<()> {
    let f2 = make_field(2, 1)?;
    for (n, d) in [(1, 6), (1, 8), (1, 10), (1, 12), (2, 3), (2, 4), (2, 5)] {
        let rep = density_experiment(&DensityConfig::new(&f2, n, d))?;
        let limit = rep.predicted_limit_float.map(|f| f.0).unwrap_or(f64::NAN);
        println!(
            "n = {n} d = {d:>2}: empirical {:.6}  truncated {:.6}  limit {:.6}",
            rep.empirical_value(),
            rep.predicted_truncated_float.0,
            limit
        );
    }
    Ok(())
}
