//! Minority neighborhoods in feature space versus in a 2-D t-SNE embedding.

use loras::dataset::class_split;
use loras::embedding::{tsne_embed, TsneConfig};
use loras::neighbors::{minority_neighborhoods, EmbeddingChoice};
use loras::synthetic::two_gaussians;

fn main() -> loras::Result<()> {
    let data = two_gaussians(400, 60, 20, 3.0, 5);
    let split = class_split(&data);

    let emb = tsne_embed(
        data.select_features(&split.minority_idx).view(),
        &TsneConfig {
            perplexity: 10.0,
            ..Default::default()
        },
    )?;
    println!(
        "KL {:.4} -> {:.4} over {} iterations",
        emb.kl_trace[0],
        emb.kl_trace.last().unwrap(),
        emb.kl_trace.len()
    );

    let regular = minority_neighborhoods(&data, &split, 5, EmbeddingChoice::Regular, 10.0, 0)?;
    let tsne = minority_neighborhoods(&data, &split, 5, EmbeddingChoice::TEmbedding, 10.0, 0)?;
    let mut shared = 0;
    for (a, b) in regular.items.iter().zip(&tsne.items) {
        shared += a.members.iter().filter(|m| b.members.contains(m)).count() - 1;
    }
    println!(
        "{:.1}% of neighbors agree between the two spaces",
        100.0 * shared as f64 / (5 * regular.items.len()) as f64
    );
    println!("row {} neighbors: regular {:?}", regular.items[0].parent, regular.items[0].members);
    println!("row {} neighbors: t-SNE   {:?}", tsne.items[0].parent, tsne.items[0].members);
    Ok(())
}
