// A three-cell continuous body whose middle cell is frictionless and
// stretches; it moves exactly like the two-mass dry crawler.

use crawlgait::friction::FrictionLaw;
use crawlgait::models::{reduce_continuous, Cell, ContinuousCrawler};
use crawlgait::scenarios::{dynamics, ScenarioId};
use crawlgait::signals::PeriodicSignal;

fn main() -> crawlgait::Result<()> {
    let still = PeriodicSignal::constant(1.0, 0.0);
    let cell = |start: f64, phidot: PeriodicSignal, mu: f64| -> crawlgait::Result<Cell> {
        Ok(Cell { start, end: start + 1.0, density: 1.0 / 3.0, phidot, phi0: 1.0, law: FrictionLaw::coulomb(1.0, mu)? })
    };
    let body = ContinuousCrawler::new(
        1.0,
        vec![
            cell(0.0, still.clone(), 1.0)?,
            cell(1.0, PeriodicSignal::parse("2*square(t;1,1)", 1.0)?, 0.0)?,
            cell(2.0, still.clone(), 1.0)?,
        ],
        still,
        8,
    )?;
    println!("mass {}, domain {:?}, phi range {:?}", body.mass(), body.domain(), body.phi_range());
    for xi in [0.0, 1.0, 1.5, 2.0, 3.0] {
        println!("  relative velocity at xi = {xi}, t = 0.25: {:+.3}", body.relative_velocity(0.25, xi)?);
    }

    let cont = reduce_continuous(&body)?;
    let disc = dynamics(ScenarioId::ExDry, &Default::default())?;
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        for j in 0..50 {
            let (t, v) = (i as f64 / 50.0, -3.0 + 6.0 * j as f64 / 49.0);
            let (a, b) = (cont.g(t, v), disc.g(t, v));
            worst = worst.max((a.lo - b.lo).abs()).max((a.hi - b.hi).abs());
        }
    }
    println!("largest difference from the two-mass model: {worst:.1e}");
    Ok(())
}
