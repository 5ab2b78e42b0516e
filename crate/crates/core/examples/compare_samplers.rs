//! Run every sampler on the same data and summarize the output.

use loras::dataset::class_split;
use loras::samplers::{Sampler, SamplerKind};
use loras::synthetic::two_gaussians;

fn main() -> loras::Result<()> {
    let data = two_gaussians(800, 50, 2, 1.5, 11);
    let split = class_split(&data);
    let minority = data.select_features(&split.minority_idx);
    let centroid = minority.mean_axis(ndarray::Axis(0)).unwrap();

    println!("{:<12} {:>6} {:>10} {:>10}", "sampler", "rows", "mean x", "mean y");
    for kind in SamplerKind::ALL {
        let set = Sampler::from_kind(kind).oversample(&data, &split, 7)?;
        let mean = set.samples.mean_axis(ndarray::Axis(0)).unwrap();
        println!("{:<12} {:>6} {:>10.3} {:>10.3}", kind, set.len(), mean[0], mean[1]);
        for w in &set.warnings {
            println!("  warning: {w}");
        }
    }
    println!("{:<12} {:>6} {:>10.3} {:>10.3}", "minority", split.minority_count(), centroid[0], centroid[1]);
    Ok(())
}
