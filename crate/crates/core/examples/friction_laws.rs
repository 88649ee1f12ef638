// Friction laws as set-valued graphs and their resolvents.

use crawlgait::friction::{eval_law, resolvent_monotone, FrictionLaw, Perturbation};
use crawlgait::signals::PeriodicSignal;

fn main() -> crawlgait::Result<()> {
    let k = |x: f64| PeriodicSignal::constant(1.0, x);
    let laws = [
        ("dry", FrictionLaw::dry(k(1.0), k(2.0))?),
        ("viscous", FrictionLaw::viscous(k(0.5))?),
        ("bingham", FrictionLaw::bingham(k(0.5), k(1.0), k(1.0))?),
        ("stribeck", FrictionLaw::stribeck(k(1.0), k(1.0), Perturbation::stribeck(0.5, 1.0)?)?),
    ];
    for (name, law) in &laws {
        let samples: Vec<String> = [-2.0, -0.5, 0.0, 0.5, 2.0]
            .iter()
            .map(|&u| {
                let f = eval_law(law, 0.0, u);
                if f.is_single() { format!("{:+.3}", f.lo) } else { format!("[{:+.3}, {:+.3}]", f.lo, f.hi) }
            })
            .collect();
        println!("{name:9} class {:?}: F(u) at u = -2, -0.5, 0, 0.5, 2 -> {}", law.class(), samples.join("  "));
    }

    // the resolvent of dry friction is a soft threshold
    let (_, dry) = &laws[0];
    for r in [-3.0, -1.0, 0.5, 1.5, 3.0] {
        println!("dry resolvent, lambda 1: J({r:+}) = {:+.3}", resolvent_monotone(dry, 0.0, 1.0, r)?);
    }
    Ok(())
}
