// Brackets the attracting set of every built-in scenario.

use crawlgait::analysis::{attractor_bracket, DEFAULT_BRACKET_TOL, DEFAULT_MAX_ITERATIONS};
use crawlgait::scenarios::{dynamics, ALL_SCENARIOS};
use crawlgait::solver::SolverConfig;

fn main() -> crawlgait::Result<()> {
    let cfg = SolverConfig::default();
    for id in ALL_SCENARIOS {
        let d = dynamics(id, &Default::default())?;
        match attractor_bracket(&d, &cfg, DEFAULT_BRACKET_TOL, DEFAULT_MAX_ITERATIONS) {
            Ok(r) => println!(
                "{:11} [{:+.6}, {:+.6}] after {} iterations",
                id.name(),
                r.alpha,
                r.beta,
                r.iterations
            ),
            Err(e) => println!("{:11} {e}", id.name()),
        }
    }
    Ok(())
}
