// Order statistics of the negated shape velocities and their smallest gaps.

use crawlgait::analysis::{gamma_order_stats, DEFAULT_GAMMA_GRID};
use crawlgait::signals::PeriodicSignal;

fn main() -> crawlgait::Result<()> {
    let square = [PeriodicSignal::parse("-1*square(t;1,1)", 1.0)?, PeriodicSignal::parse("square(t;1,1)", 1.0)?];
    let tau = std::f64::consts::TAU;
    let smooth = [PeriodicSignal::parse("cos(t)", tau)?, PeriodicSignal::parse("-1*cos(t)", tau)?];
    let three = [
        PeriodicSignal::parse("sin(t)", tau)?,
        PeriodicSignal::parse("0.5*cos(t)", tau)?,
        PeriodicSignal::parse("-1*sin(t) - 0.5*cos(t)", tau)?,
    ];
    for (name, w) in [("square pair", &square[..]), ("cosine pair", &smooth[..]), ("three masses", &three[..])] {
        let d = gamma_order_stats(w, DEFAULT_GAMMA_GRID)?;
        println!("{name:13} min gaps {:?}  continuous {:?}", d.min_gap, d.continuous);
        for msg in &d.warnings {
            println!("  warning: {msg}");
        }
    }
    Ok(())
}
