//! Folds `--config` files into the argument list before clap sees it.

use std::collections::BTreeMap;
use std::path::Path;

use clap::CommandFactory;
use hadamard_lattice::io::{parse_key_values, read_text};

use crate::Cli;

const GLOBAL_VALUE_FLAGS: [&str; 2] = ["--jobs", "--config"];

/// Long option names of one subcommand, and whether each takes a value.
fn subcommand_options(name: &str) -> Option<BTreeMap<String, bool>> {
    let cmd = Cli::command();
    let sub = cmd.find_subcommand(name)?;
    Some(
        sub.get_arguments()
            .filter_map(|a| a.get_long().map(|l| (l.to_string(), a.get_action().takes_values())))
            .filter(|(l, _)| l != "help" && l != "version" && l != "config")
            .collect(),
    )
}

fn subcommand_names() -> Vec<String> {
    Cli::command().get_subcommands().map(|s| s.get_name().to_string()).collect()
}

fn config_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--" {
            return None;
        }
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Index of the subcommand token, skipping global options.
fn subcommand_position(argv: &[String], names: &[String]) -> Option<usize> {
    let mut i = 1;
    while i < argv.len() {
        let a = &argv[i];
        if GLOBAL_VALUE_FLAGS.contains(&a.as_str()) {
            i += 2;
            continue;
        }
        if a.starts_with('-') {
            if GLOBAL_VALUE_FLAGS.iter().any(|f| a.starts_with(&format!("{f}="))) {
                i += 1;
                continue;
            }
            return None;
        }
        return names.contains(a).then_some(i);
    }
    None
}

pub fn merge_config(argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = read_text(Path::new(&path)).map_err(|e| e.to_string())?;
    let names = subcommand_names();
    let mut allowed: Vec<String> = vec!["command".into(), "jobs".into()];
    for n in &names {
        for key in subcommand_options(n).unwrap_or_default().into_keys() {
            allowed.push(key.replace('-', "_"));
            allowed.push(key);
        }
    }
    allowed.sort();
    allowed.dedup();
    let allowed_refs: Vec<&str> = allowed.iter().map(String::as_str).collect();
    let kv = parse_key_values(&text, &allowed_refs).map_err(|e| format!("{path}: {e}"))?;

    let pos = subcommand_position(&argv, &names);
    let sub = match (pos, kv.get("command")) {
        (Some(p), _) => argv[p].clone(),
        (None, Some(c)) if names.contains(c) => c.clone(),
        (None, Some(c)) => return Err(format!("{path}: unknown command {c:?} (expected one of {})", names.join(", "))),
        (None, None) => return Ok(argv),
    };
    let opts = subcommand_options(&sub).unwrap_or_default();

    let mut injected = Vec::new();
    let mut global = Vec::new();
    for (key, value) in &kv {
        let long = key.replace('_', "-");
        match long.as_str() {
            "command" => {}
            "jobs" => global.extend(["--jobs".to_string(), value.clone()]),
            _ => match opts.get(&long) {
                None => return Err(format!("{path}: key {key:?} is not an option of `{sub}`")),
                Some(true) => injected.extend([format!("--{long}"), value.clone()]),
                Some(false) => match value.as_str() {
                    "true" | "yes" | "1" => injected.push(format!("--{long}")),
                    "false" | "no" | "0" => {}
                    _ => return Err(format!("{path}: flag {key:?} needs true or false")),
                },
            },
        }
    }

    let mut out = vec![argv[0].clone()];
    out.extend(global);
    match pos {
        Some(p) => {
            out.extend(argv[1..=p].iter().cloned());
            out.extend(injected);
            out.extend(argv[p + 1..].iter().cloned());
        }
        None => {
            out.extend(argv[1..].iter().cloned());
            out.push(sub);
            out.extend(injected);
        }
    }
    Ok(out)
}
