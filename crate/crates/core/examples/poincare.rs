// Iterates the period map from several starting velocities.

use crawlgait::scenarios::{dynamics, ScenarioId};
use crawlgait::solver::{Integrator, SolverConfig};

fn main() -> crawlgait::Result<()> {
    let d = dynamics(ScenarioId::ExStrib, &Default::default())?;
    let map = Integrator::new(&d, SolverConfig::default())?;
    for v0 in [-2.0, -0.9, 0.5, 1.5] {
        let it = map.iterates(v0, 8)?;
        let shown: Vec<String> = it.iter().map(|v| format!("{v:+.2e}")).collect();
        println!("v0 = {v0:+}: {}", shown.join(" "));
    }
    Ok(())
}
