//! Class balance, small-dataset verdict and resolved LoRAS defaults.
//!
//! cargo run --example dataset_stats [path.csv label_column positive_label]

use loras::dataset::{class_split, is_small_dataset, load_csv};
use loras::samplers::resolve_defaults;
use loras::synthetic::abalone_shaped;

fn main() -> loras::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let data = match args.as_slice() {
        [path, label, positive] => load_csv(path, label, positive)?,
        _ => abalone_shaped(1),
    };
    let split = class_split(&data);
    let params = resolve_defaults(&data, &split)?;

    println!("rows {} x features {}", data.n(), data.f_count());
    println!("minority {} / majority {}", split.minority_count(), split.majority_count());
    println!("imbalance ratio {}", split.ratio_display());
    println!("small dataset: {}", is_small_dataset(data.n(), data.f_count()));
    println!("{params:#?}");
    Ok(())
}
