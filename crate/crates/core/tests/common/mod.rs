//! Random crawler models shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use crawlgait::friction::FrictionLaw;
use crawlgait::models::{reduce_discrete, DiscreteCrawler, ReducedDynamics};
use crawlgait::signals::PeriodicSignal;
use rand::rngs::StdRng;
use rand::Rng;

pub const PERIOD: f64 = 2.0 * PI;

/// Barycentric trigonometric shape velocities: `Σ m_i w_i = 0` and each
/// `w_i` has zero mean.
pub fn random_shapes(rng: &mut StdRng, masses: &[f64]) -> Vec<PeriodicSignal> {
    let total: f64 = masses.iter().sum();
    let k = rng.gen_range(1..=2);
    let mut a: Vec<f64> = masses.iter().map(|_| rng.gen_range(-1.5..1.5)).collect();
    let mut b: Vec<f64> = masses.iter().map(|_| rng.gen_range(-1.5..1.5)).collect();
    let abar = masses.iter().zip(&a).map(|(m, x)| m * x).sum::<f64>() / total;
    let bbar = masses.iter().zip(&b).map(|(m, x)| m * x).sum::<f64>() / total;
    a.iter_mut().for_each(|x| *x -= abar);
    b.iter_mut().for_each(|x| *x -= bbar);
    a.iter()
        .zip(&b)
        .map(|(a, b)| PeriodicSignal::parse(&format!("({a})*cos({k}*t) + ({b})*sin({k}*t)"), PERIOD).unwrap())
        .collect()
}

fn constant(x: f64) -> PeriodicSignal {
    PeriodicSignal::constant(PERIOD, x)
}

/// A monotone friction law: dry, anisotropic dry, viscous or Bingham.
pub fn random_monotone_law(rng: &mut StdRng) -> FrictionLaw {
    let kind = rng.gen_range(0..4);
    let mut mu = || rng.gen_range(0.5..2.0);
    match kind {
        0 => FrictionLaw::coulomb(PERIOD, mu()).unwrap(),
        1 => FrictionLaw::dry(constant(mu()), constant(mu())).unwrap(),
        2 => FrictionLaw::viscous(constant(mu())).unwrap(),
        _ => FrictionLaw::bingham(constant(mu()), constant(mu()), constant(mu())).unwrap(),
    }
}

/// Two to four masses with monotone laws and a small constant load.
pub fn random_monotone_model(rng: &mut StdRng) -> ReducedDynamics {
    let n = rng.gen_range(2..=4);
    let masses: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    let w = random_shapes(rng, &masses);
    let laws = (0..n).map(|_| random_monotone_law(rng)).collect();
    let load = constant(rng.gen_range(-0.2..0.2));
    reduce_discrete(&DiscreteCrawler::new(PERIOD, masses, w, laws, load).unwrap()).unwrap()
}

/// Constant viscous friction on every mass, no load.
pub fn random_viscous_model(rng: &mut StdRng) -> ReducedDynamics {
    let n = rng.gen_range(2..=4);
    let masses: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    let w = random_shapes(rng, &masses);
    let laws = (0..n)
        .map(|_| FrictionLaw::viscous(constant(rng.gen_range(0.2..3.0))).unwrap())
        .collect();
    reduce_discrete(&DiscreteCrawler::new(PERIOD, masses, w, laws, constant(0.0)).unwrap()).unwrap()
}

/// Anisotropic constant dry friction on every mass, no load.
pub fn random_dry_model(rng: &mut StdRng) -> ReducedDynamics {
    let n = rng.gen_range(2..=4);
    let masses: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    let w = random_shapes(rng, &masses);
    let laws = (0..n)
        .map(|_| FrictionLaw::dry(constant(rng.gen_range(0.2..2.0)), constant(rng.gen_range(0.2..2.0))).unwrap())
        .collect();
    reduce_discrete(&DiscreteCrawler::new(PERIOD, masses, w, laws, constant(0.0)).unwrap()).unwrap()
}
