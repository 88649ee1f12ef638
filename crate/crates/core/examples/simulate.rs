// Integrates a scenario and prints a coarse view of the trajectory.

use crawlgait::scenarios::{dynamics, ScenarioId};
use crawlgait::solver::{integrate, SolverConfig};

fn main() -> crawlgait::Result<()> {
    let d = dynamics(ScenarioId::ExDrystar, &Default::default())?;
    let traj = integrate(&d, -1.0, 0.0, 2.0 * d.period(), &SolverConfig::default())?;
    let stride = traj.len() / 16;
    println!("{:>8} {:>10} {:>10}  stuck", "t", "v", "x");
    for k in (0..traj.len()).step_by(stride) {
        println!("{:8.4} {:10.6} {:10.6}  {:?}", traj.t[k], traj.v[k], traj.x[k], traj.stick[k]);
    }
    println!("final v {:.9}, displacement {:.9}", traj.final_v(), traj.displacement());

    let mut csv = Vec::new();
    traj.write_csv(&mut csv)?;
    println!("csv: {} bytes, header {:?}", csv.len(), String::from_utf8_lossy(&csv).lines().next());
    Ok(())
}
