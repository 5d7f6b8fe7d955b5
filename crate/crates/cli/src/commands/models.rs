//! `models` subcommand: inspect the bundled systems.

use clap::Subcommand;

use crate::config::FileConfig;
use crate::CliError;

use super::ModelArgs;

#[derive(Subcommand, Debug)]
pub enum ModelsCmd {
    /// List the bundled models
    List,
    /// Print a model's reactions, parameters and critical values
    Show {
        #[command(flatten)]
        model: ModelArgs,
    },
}

pub fn run(cmd: &ModelsCmd, file: &FileConfig) -> Result<(), CliError> {
    match cmd {
        ModelsCmd::List => {
            println!("hill            birth k x^2/(A^2 + x^2), death eps x");
            println!("autocatalytic   birth k x^2, competition (k/C) x^3, death eps x");
            Ok(())
        }
        ModelsCmd::Show { model } => {
            let choice = model.choice(file, "hill");
            let m = choice.build(None)?;
            let cp = m.critical_params()?;
            let reactions: Vec<serde_json::Value> = m
                .reactions()
                .iter()
                .map(|r| serde_json::json!({"label": r.label, "step": r.step}))
                .collect();
            let params = m.params();
            let doc = serde_json::json!({
                "name": m.label(),
                "params": {"k": params.k, "C": params.c, "A": params.a, "epsilon": params.eps},
                "reactions": reactions,
                "critical": {
                    "eps_c": cp.eps_c,
                    "x_c": cp.x_c,
                    "eps_end": cp.eps_end,
                },
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("static json"));
            Ok(())
        }
    }
}
