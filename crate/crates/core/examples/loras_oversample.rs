//! Oversample the minority class with LoRAS and inspect how one synthetic
//! point was formed.

use loras::dataset::class_split;
use loras::samplers::{loras_oversample_traced, LorasOverrides};
use loras::synthetic::two_gaussians;

fn main() -> loras::Result<()> {
    let data = two_gaussians(600, 40, 5, 2.0, 3);
    let split = class_split(&data);
    let params = LorasOverrides {
        exact_balance: true,
        ..Default::default()
    }
    .resolve(&data, &split)?;

    let (set, trace) = loras_oversample_traced(&data, &split, &params, 42)?;
    println!(
        "{} minority + {} synthetic vs {} majority",
        split.minority_count(),
        set.len(),
        split.majority_count()
    );

    let sel = &trace.selections[0];
    println!("first sample {:.4}", set.samples.row(0));
    println!("parent row {}", set.provenance[0].parent);
    for (sp, w) in trace.selected_points(0).iter().zip(&sel.weights) {
        println!("  weight {w:.4} on shadow of row {}", sp.parent);
    }
    Ok(())
}
