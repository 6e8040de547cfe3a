//! Fit a description on a small target class, score new points, and round-trip
//! the model through its file format.
//!
//! ```bash
//! cargo run -p lp-svdd --example train_and_score
//! ```

use lp_svdd::data::Dataset;
use lp_svdd::kernel::KernelSpec;
use lp_svdd::model::{fit_with_preprocessing, LpSvddModel, PreprocessingMode};
use lp_svdd::solver::SolverConfig;
use ndarray::array;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A tight 2-D target blob plus two labelled anomalies.
    let train = Dataset::new(
        array![
            [0.1, 0.2],
            [-0.2, 0.1],
            [0.0, -0.15],
            [0.25, 0.05],
            [-0.1, -0.2],
            [0.15, -0.1],
            [3.0, 3.1],
            [2.8, 3.3],
        ],
        vec![1, 1, 1, 1, 1, 1, -1, -1],
        None,
    )?;

    // Raw coordinates keep this 2-D walkthrough geometric; the standardize +
    // unit-norm pipeline used by `fit` is meant for the dataset protocol.
    let kernel = KernelSpec::gaussian(0.8)?;
    // A strong error penalty keeps the recovered radius close to the data.
    let (model, report) = fit_with_preprocessing(
        &train,
        2.0,
        20.0,
        20.0,
        kernel,
        &SolverConfig::default(),
        PreprocessingMode::Raw,
    )?;

    println!(
        "fit: converged={} iterations={} support_vectors={} R^2={:.6}",
        report.dual.converged,
        report.dual.iterations,
        model.support_count(),
        model.squared_radius
    );
    println!(
        "duality gap {:.3e}, kkt residual {:.3e}",
        report.duality_gap, report.dual.kkt_residual
    );

    for (name, point) in [
        ("center of the blob", array![0.0, 0.0]),
        ("just outside", array![0.5, 0.4]),
        ("far away", array![5.0, -4.0]),
    ] {
        let score = model.score(point.view())?;
        let verdict = model.predict(point.view(), 0.0)?;
        println!(
            "{name:>20}: f(z) - R^2 = {:+.6} -> {}",
            score - model.squared_radius,
            if verdict == 1 { "target" } else { "novel" }
        );
    }

    // Persist and reload; scores are preserved bit-for-bit.
    let path = std::env::temp_dir().join("lp_svdd_example_model.json");
    model.save(&path)?;
    let loaded = LpSvddModel::load(&path)?;
    let z = array![0.4, -0.3];
    assert_eq!(model.score(z.view())?, loaded.score(z.view())?);
    println!("model round-tripped through {}", path.display());
    Ok(())
}
