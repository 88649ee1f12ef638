// Dissipativity and the uniqueness prediction for each scenario, then a
// slope steep enough to break dissipativity.

use crawlgait::analysis::{classify_dynamics, dissipativity_check};
use crawlgait::scenarios::{dynamics, ScenarioId, ScenarioParams, ALL_SCENARIOS};

fn main() -> crawlgait::Result<()> {
    for id in ALL_SCENARIOS {
        let d = dynamics(id, &Default::default())?;
        let diss = dissipativity_check(&d)?;
        let c = classify_dynamics(&d);
        println!(
            "{:11} dissipative {:5} I+ {:+.3} I- {:+.3}  {} unique: {}",
            id.name(),
            diss.pass,
            diss.i_plus,
            diss.i_minus,
            c.theorem,
            c.uniqueness_predicted
        );
        for r in &c.reasons {
            println!("    {r}");
        }
    }
    for load in [-0.5, -1.9, -2.5] {
        let params = ScenarioParams { load: Some(load), ..Default::default() };
        let d = dynamics(ScenarioId::SlopeDry, &params)?;
        println!("slope load {load:+}: dissipative {}", dissipativity_check(&d)?.pass);
    }
    Ok(())
}
