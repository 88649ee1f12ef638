// Builds a run from JSON and executes commands as the binary would.

use crawlgait::cli::{run_command, Command};
use crawlgait::config::RunConfig;

const MODEL: &str = r#"{
    "model": {
        "type": "discrete",
        "T": 6.283185307179586,
        "masses": [1, 1, 1],
        "w": ["sin(t)", "0.5*cos(t)", "-1*sin(t) - 0.5*cos(t)"],
        "laws": [
            {"type": "bingham", "mu_v": 0.5, "mu_plus": 1, "mu_minus": 2},
            {"type": "dry", "mu": 1},
            {"type": "viscous", "mu_v": "1 + 0.5*cos(t)"}
        ],
        "B": 0
    },
    "solver": {"steps_per_period": 2048}
}"#;

fn main() -> crawlgait::Result<()> {
    let cfg = RunConfig::from_json(MODEL)?;
    let out = std::env::temp_dir().join("crawlgait-example");
    for command in [Command::Check, Command::Attractor] {
        let code = run_command(&cfg, command, &out)?;
        println!("{} -> exit {code}", command.name());
    }
    println!("artifacts in {}", out.display());

    match RunConfig::from_json(r#"{"scenario": "ex-dry", "bogus": 1}"#) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
