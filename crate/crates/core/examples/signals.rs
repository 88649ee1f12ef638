// Periodic input signals: parsing, evaluation at jumps, breakpoints and means.

use std::collections::HashMap;

use crawlgait::signals::{parse_signal, PeriodicSignal};

fn main() -> crawlgait::Result<()> {
    let square = PeriodicSignal::parse("square(t;1,1)", 1.0)?;
    let triangle = PeriodicSignal::parse("triangle(t;1,0.25)", 1.0)?;
    for t in [0.0, 0.25, 0.5, 0.75] {
        println!("t = {t:4}: square {:+.3}  triangle {:+.3}", square.eval(t), triangle.eval(t));
    }
    // right-continuous at the jump, with the left limit still reachable
    println!("square at 0.5: {} (left limit {})", square.eval(0.5), square.eval_within(0.5, 0.49));

    let bindings = HashMap::from([("alpha".to_string(), 2.0)]);
    let gait = parse_signal("alpha*cos(t) + 0.5*square(2*t;6.283185307179586,1)", std::f64::consts::TAU, &bindings)?;
    let times: Vec<String> = gait.breakpoints().times().map(|t| format!("{t:.4}")).collect();
    println!("breakpoints: [{}]", times.join(", "));
    println!("mean over a period: {:.2e}", gait.mean_over_period());
    println!("range: {:?}, lipschitz ~ {:.3}", gait.range(), gait.lipschitz());

    let table = PeriodicSignal::table(1.0, vec![(0.0, 0.0), (0.25, 1.0), (0.75, -1.0)])?;
    println!("table at 0.5: {}", table.eval(0.5));

    match PeriodicSignal::parse("sin(t", 1.0) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
