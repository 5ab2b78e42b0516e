//! Low-dimensional embeddings: exact t-SNE for neighborhood search and a
//! power-iteration PCA projector for diagnostics.

mod pca;
mod tsne;

pub use pca::{pca_project, Pca};
pub use tsne::{
    conditional_affinities, joint_affinities, kl_divergence, squared_distances, tsne_embed, Embedding2D,
    TsneConfig,
};
