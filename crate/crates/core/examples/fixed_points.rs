// Isolated fixed points with their stability, and plateaus of fixed points.

use crawlgait::analysis::{attractor_bracket, fixed_points};
use crawlgait::scenarios::{dynamics, ScenarioId};
use crawlgait::solver::SolverConfig;

fn main() -> crawlgait::Result<()> {
    let cfg = SolverConfig::default();
    for id in [ScenarioId::ExStrib, ScenarioId::ExDry, ScenarioId::ExDrystar, ScenarioId::SmoothDry] {
        let d = dynamics(id, &Default::default())?;
        let bracket = attractor_bracket(&d, &cfg, 1e-6, 10_000)?;
        let report = fixed_points(&d, &bracket, 256, 1e-4, &cfg)?;
        println!("{} (grid spacing {:.1e}):", id.name(), report.grid_resolution);
        for p in &report.points {
            println!("  point {:+.6} {}", p.v, p.class);
        }
        for (a, b) in &report.plateaus {
            println!("  plateau [{a:+.6}, {b:+.6}]");
        }
    }
    Ok(())
}
