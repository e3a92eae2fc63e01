use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use phda::colimit::colimit;
use phda::completion::complete;
use phda::homotopy::classes_to;
use phda::io::{load_diagram, load_model, load_morphism, model_to_json, morphism_to_json, IoError};
use phda::lifting::{construct_lift, is_covering, is_open, LiftError, LiftVerdict};
use phda::model::CellId;
use phda::paths::enumerate_paths;
use phda::unfolding::{is_tree, unfold};

#[derive(Parser)]
#[command(name = "phda", version, about = "Partial higher dimensional automata toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a model file.
    Validate { model: PathBuf },
    /// Print the completion of a model.
    Complete { model: PathBuf },
    /// List paths from the initial state.
    Paths {
        model: PathBuf,
        #[arg(long)]
        to: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Group the paths to a cell into confluent homotopy classes.
    Homotopy {
        model: PathBuf,
        #[arg(long)]
        to: String,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Decide whether a model is a tree.
    IsTree { model: PathBuf },
    /// Unfold a model up to a depth.
    Unfold {
        model: PathBuf,
        #[arg(long)]
        depth: usize,
        /// Write the state-to-cell map and the truncation flag here.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Compute the colimit of a diagram of path shapes.
    Colimit {
        diagram: PathBuf,
        /// Write the injections here.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Check that a morphism is open.
    CheckOpen {
        morphism: PathBuf,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Check that a morphism is a covering.
    CheckCovering {
        morphism: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Lift `g` (out of a tree) along the open map `f`.
    Lift { g: PathBuf, f: PathBuf },
    /// Print a model in Graphviz format.
    Dot { model: PathBuf },
}

enum Outcome {
    Yes,
    No,
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn write_sidecar(path: &Option<PathBuf>, v: Value) -> Result<(), String> {
    if let Some(p) = path {
        std::fs::write(p, serde_json::to_string_pretty(&v).expect("json"))
            .map_err(|e| format!("cannot write {}: {e}", p.display()))?;
    }
    Ok(())
}

fn lift_verdict(v: &LiftVerdict, what: &str) -> Outcome {
    print_json(&serde_json::to_value(v).expect("json"));
    match &v.counterexample {
        None => {
            eprintln!("{what}: yes ({} squares)", v.squares);
            Outcome::Yes
        }
        Some(sq) => {
            eprintln!(
                "{what}: no, {} has {} lift(s) at {}",
                sq.extension, sq.lifts, sq.path
            );
            Outcome::No
        }
    }
}

fn io_error(e: IoError) -> String {
    if let IoError::Validation { violations, .. } = &e {
        print_json(&json!({ "error": e.to_string(), "violations": violations }));
    } else {
        print_json(&json!({ "error": e.to_string() }));
    }
    e.to_string()
}

fn run(cli: Cli) -> Result<Outcome, String> {
    match cli.command {
        Command::Validate { model } => {
            let x = load_model(&model).map_err(io_error)?;
            print_json(&json!({ "valid": true, "cells": x.len(), "is_hda": x.is_hda() }));
            eprintln!("{}: valid, {} cells", model.display(), x.len());
            Ok(Outcome::Yes)
        }
        Command::Complete { model } => {
            let x = load_model(&model).map_err(io_error)?;
            let c = complete(&x);
            println!("{}", model_to_json(&c.hda));
            eprintln!("completion has {} cells (input {})", c.hda.len(), x.len());
            Ok(Outcome::Yes)
        }
        Command::Paths { model, to, max_len } => {
            let x = load_model(&model).map_err(io_error)?;
            let paths: Vec<Value> = enumerate_paths(&x, max_len)
                .into_iter()
                .filter(|p| to.as_deref().is_none_or(|t| p.end().as_str() == t))
                .map(|p| json!({ "text": p.to_string(), "cells": p.cells, "steps": p.steps }))
                .collect();
            eprintln!("{} path(s)", paths.len());
            print_json(&Value::Array(paths));
            Ok(Outcome::Yes)
        }
        Command::Homotopy { model, to, max_len } => {
            let x = load_model(&model).map_err(io_error)?;
            let bound = max_len.unwrap_or(x.len());
            let classes = classes_to(&x, &CellId::new(&to), bound).map_err(|e| e.to_string())?;
            let out: Vec<Value> = classes
                .iter()
                .map(|c| {
                    json!({
                        "representative": c.representative.to_string(),
                        "members": c.members.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            eprintln!("{} class(es) of paths to {to}", classes.len());
            print_json(&Value::Array(out));
            Ok(Outcome::Yes)
        }
        Command::IsTree { model } => {
            let x = load_model(&model).map_err(io_error)?;
            let v = is_tree(&x);
            print_json(&serde_json::to_value(&v).expect("json"));
            eprintln!("is tree: {}", v.is_tree);
            Ok(if v.is_tree { Outcome::Yes } else { Outcome::No })
        }
        Command::Unfold {
            model,
            depth,
            sidecar,
        } => {
            let x = load_model(&model).map_err(io_error)?;
            let u = unfold(&x, depth).map_err(|e| e.to_string())?;
            println!("{}", model_to_json(&u.tree));
            write_sidecar(&sidecar, json!({ "unf": u.unf.map, "truncated": u.truncated }))?;
            eprintln!("{} states, truncated: {}", u.tree.len(), u.truncated);
            Ok(Outcome::Yes)
        }
        Command::Colimit { diagram, sidecar } => {
            let d = load_diagram(&diagram).map_err(io_error)?;
            let c = colimit(&d).map_err(|e| e.to_string())?;
            println!("{}", model_to_json(&c.apex));
            let inj: BTreeMap<&String, _> = c.injections.iter().map(|(u, f)| (u, &f.map)).collect();
            write_sidecar(&sidecar, json!({ "injections": inj }))?;
            eprintln!("colimit has {} cells", c.apex.len());
            Ok(Outcome::Yes)
        }
        Command::CheckOpen {
            morphism,
            exhaustive,
            max_len,
        } => {
            let f = load_morphism(&morphism).map_err(io_error)?;
            Ok(lift_verdict(&is_open(&f, max_len, exhaustive), "open"))
        }
        Command::CheckCovering { morphism, max_len } => {
            let f = load_morphism(&morphism).map_err(io_error)?;
            Ok(lift_verdict(&is_covering(&f, max_len), "covering"))
        }
        Command::Lift { g, f } => {
            let g = load_morphism(&g).map_err(io_error)?;
            let f = load_morphism(&f).map_err(io_error)?;
            let f = if Arc::ptr_eq(&f.target, &g.target) || f.target == g.target {
                phda::Morphism {
                    target: g.target.clone(),
                    ..f
                }
            } else {
                return Err(LiftError::Mismatch.to_string());
            };
            match construct_lift(&g, &f) {
                Ok(h) => {
                    println!("{}", morphism_to_json(&h));
                    eprintln!("lift found");
                    Ok(Outcome::Yes)
                }
                Err(LiftError::NotOpen(why)) => {
                    print_json(&json!({ "lift": null, "reason": why }));
                    eprintln!("no lift: {why}");
                    Ok(Outcome::No)
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Dot { model } => {
            let x = load_model(&model).map_err(io_error)?;
            print!("{}", phda::io::export_dot(&x));
            Ok(Outcome::Yes)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Yes) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
