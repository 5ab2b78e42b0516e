//! 5 x 10 stratified cross validation of the baseline, SMOTE and LoRAS with
//! kNN and logistic regression.

use loras::dataset::stratified_folds;
use loras::evaluate::{audit_leakage, run_benchmark, Classifier};
use loras::samplers::{Sampler, SamplerKind};
use loras::synthetic::two_gaussians;

fn main() -> loras::Result<()> {
    let data = two_gaussians(2000, 74, 8, 2.0, 26);
    let plan = stratified_folds(&data, 5, 10, 1)?;
    let samplers = [
        None,
        Some(Sampler::from_kind(SamplerKind::Smote)),
        Some(Sampler::from_kind(SamplerKind::Loras)),
    ];
    let report = run_benchmark(&data, &samplers, &[Classifier::knn(), Classifier::logreg()], &plan, 7)?;

    for res in &report.results {
        let f1 = res.pooled_metric("f1");
        let ba = res.pooled_metric("balanced_accuracy");
        println!(
            "{:<6} {:<7} f1 {:.3} ± {:.3}  balanced accuracy {:.3} ± {:.3}  clean: {}",
            res.sampler,
            res.classifier,
            f1.mean,
            f1.sd,
            ba.mean,
            ba.sd,
            audit_leakage(res, data.n()).clean()
        );
    }
    print!("\n{}", report.to_csv());
    Ok(())
}
