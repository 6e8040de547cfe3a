//! Sweep the slack-norm exponent on a 2-D synthetic sample and export one
//! decision-boundary grid per p for contour plotting (level set 0 of
//! f(z) − R²).
//!
//! ```bash
//! cargo run -p lp-svdd --example decision_boundary
//! ```

use lp_svdd::data::synth_gaussian_2d;
use lp_svdd::kernel::{width_heuristic, KernelSpec};
use lp_svdd::model::{fit_with_preprocessing, PreprocessingMode};
use lp_svdd::solver::SolverConfig;
use std::io::Write;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // 100 normally distributed 2-D samples, mean 2 and std 3 per direction.
    let data = synth_gaussian_2d(100, 2.0, 3.0, 1)?;
    // Raw coordinates keep the plot in data space.
    let width = width_heuristic(data.features())?;
    let spec = KernelSpec::gaussian(width)?;
    println!("heuristic width: {width:.4}");

    let out_dir = std::env::temp_dir();
    for p in [16.0 / 15.0, 8.0 / 7.0, 4.0 / 3.0, 2.0, 3.0] {
        let (model, report) = fit_with_preprocessing(
            &data,
            p,
            1.0,
            1.0,
            spec,
            &SolverConfig::default(),
            PreprocessingMode::Raw,
        )?;
        let enclosed = data
            .features()
            .outer_iter()
            .filter(|row| model.score(*row).unwrap() <= model.squared_radius)
            .count();
        println!(
            "p = {p:<8.4} support vectors {:>3}, enclosed {enclosed:>3}/100, R^2 = {:+.4}, mean slack {:.4}",
            model.support_count(),
            model.squared_radius,
            report.slacks.mean().unwrap_or(0.0),
        );

        let path = out_dir.join(format!("boundary_p_{p:.4}.csv"));
        let mut file = std::fs::File::create(&path)?;
        writeln!(file, "x,y,score_minus_r2")?;
        let resolution = 60;
        for yi in 0..resolution {
            let y = -8.0 + 20.0 * yi as f64 / (resolution - 1) as f64;
            for xi in 0..resolution {
                let x = -8.0 + 20.0 * xi as f64 / (resolution - 1) as f64;
                let score = model.score(ndarray::array![x, y].view())?;
                writeln!(file, "{x},{y},{}", score - model.squared_radius)?;
            }
        }
        println!("    grid written to {}", path.display());
    }
    println!("plot each CSV's zero level set to see the boundary evolve with p");
    Ok(())
}
