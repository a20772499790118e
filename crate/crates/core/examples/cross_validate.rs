//! Nested stratified cross-validation over a small grid, printed in every
//! report format.

use isbci::dataio::{gen_synthetic, SyntheticConfig};
use isbci::eval::{kappa, report, run_cv_pipeline, CvConfig, Grid, ReportFormat};

fn main() -> isbci::Result<()> {
    let cfg = CvConfig {
        k_folds: 5,
        grid: Grid {
            n_rf: vec![4, 8],
            k_bag: vec![2, 4],
            hidden: vec![16],
        },
        ..Default::default()
    };
    let mut results = Vec::new();
    for (name, separation) in [("easy", 1.5), ("hard", 0.3)] {
        let set = gen_synthetic(&SyntheticConfig {
            n_per_class: 40,
            channels: 6,
            separation,
            ..Default::default()
        })?;
        let r = run_cv_pipeline(&set, &cfg, name)?;
        println!("{name}: kappa {:.3}", kappa(r.mean, r.n_classes));
        results.push(r);
    }
    for format in [ReportFormat::Text, ReportFormat::Csv, ReportFormat::Structured] {
        println!("--- {format:?}\n{}", report(&results, format)?);
    }
    Ok(())
}
