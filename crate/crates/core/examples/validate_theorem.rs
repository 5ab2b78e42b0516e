//! Monte Carlo bias and variance of SMOTE- and LoRAS-style estimates.

use loras::theory::{theoretical_variance, validate_theorem, Estimator, LocalDistribution};

fn main() -> loras::Result<()> {
    let dist = LocalDistribution::new(vec![0.0; 10], 1.0, 30.0, 0.005)?;
    let report = validate_theorem(&dist, 10, 200_000, 42)?;

    for r in [&report.smote, &report.loras] {
        println!(
            "{:?}: var {:.4} (closed form {:.4}), max |z| {:.2}",
            r.estimator,
            r.empirical_var.iter().sum::<f64>() / r.empirical_var.len() as f64,
            r.theoretical_var[0],
            r.mean_z_scores.iter().map(|z| z.abs()).fold(0.0, f64::max)
        );
    }
    println!("variance ratio loras/smote {:.3}, all checks pass: {}", report.variance_ratio, report.passed);

    println!("closed-form LoRAS variance by number of combined points:");
    for f in [2, 3, 5, 10, 50] {
        println!("  {f:>3}: {:.4}", theoretical_variance(&dist, Estimator::Loras, f)?[0]);
    }
    Ok(())
}
