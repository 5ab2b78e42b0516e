//! Project data and LoRAS output onto the first two principal components of
//! the original data, as plot-ready CSV on stdout.

use loras::dataset::class_split;
use loras::embedding::Pca;
use loras::samplers::{loras_oversample, resolve_defaults};
use loras::synthetic::two_gaussians;

fn main() -> loras::Result<()> {
    let data = two_gaussians(300, 25, 6, 2.0, 8);
    let split = class_split(&data);
    let set = loras_oversample(&data, &split, &resolve_defaults(&data, &split)?, 1)?;

    let pca = Pca::fit(data.features(), 2)?;
    let total: f64 = pca.explained_variance.iter().sum();
    eprintln!("explained variance {:.3?} (sum {total:.3})", pca.explained_variance);

    println!("x,y,class,origin");
    for (i, p) in pca.transform(data.features()).rows().into_iter().enumerate() {
        println!("{},{},{},original", p[0], p[1], data.labels()[i]);
    }
    for p in pca.transform(set.samples.view()).rows() {
        println!("{},{},1,loras", p[0], p[1]);
    }
    Ok(())
}
