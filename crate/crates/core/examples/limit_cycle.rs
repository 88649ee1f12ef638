// Periodic orbits and the net displacement they produce per cycle.

use crawlgait::analysis::{attractor_bracket, limit_cycle};
use crawlgait::scenarios::{dynamics, ScenarioId};
use crawlgait::solver::SolverConfig;

fn main() -> crawlgait::Result<()> {
    let cfg = SolverConfig::default();

    let comp = dynamics(ScenarioId::ExComp, &Default::default())?;
    let v = attractor_bracket(&comp, &cfg, 1e-9, 10_000)?.alpha;
    let c = limit_cycle(&comp, v, &cfg, 1e-6)?;
    println!("ex-comp: v(0) = {v:.6}, gamma = {:.6} (pi/2 = {:.6})", c.gamma, std::f64::consts::FRAC_PI_2);

    let incomp = dynamics(ScenarioId::ExIncomp, &Default::default())?;
    let v = attractor_bracket(&incomp, &cfg, 1e-9, 10_000)?.alpha;
    println!("ex-incomp: gamma = {:.2e}", limit_cycle(&incomp, v, &cfg, 1e-6)?.gamma);

    // a whole family of cycles, one per starting velocity in [-1, 0]
    let star = dynamics(ScenarioId::ExDrystar, &Default::default())?;
    for u0 in [-1.0, -0.75, -0.5, -0.25, 0.0] {
        let c = limit_cycle(&star, u0, &cfg, 1e-6)?;
        println!("ex-drystar from {u0:+.2}: average velocity {:+.6}", c.average_velocity);
    }

    match limit_cycle(&comp, 1.0, &cfg, 1e-6) {
        Err(e) => println!("not periodic: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
