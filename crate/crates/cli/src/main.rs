//! `plconf` — resolve, validate, enumerate and score collaborative
//! product-line configurations from the command line.
//!
//! Exit status: 0 for a valid outcome, 2 for an invalid one, 1 for any
//! input or usage error (always reported on stderr).

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use plconf::engine::default_iteration_cap;
use plconf::report::{render, render_satisfaction, render_trace_lines};
use plconf::validity::ValidityReport;
use plconf::{
    check_validity, enumerate_valid, parse_literal_set, parse_model, parse_stakeholder_config, parse_stakeholder_json,
    resolve_session_with_cap, score, FeatureModel, Format, Literal, ManagerRule, StakeholderConfig,
};

const MAX_ITERS_VAR: &str = "IRATEPLC_MAX_ITERS";

#[derive(Parser, Debug)]
#[command(
    name = "plconf",
    version,
    about = "Importance-rated collaborative product-line configuration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Merge stakeholder choices, resolve conflicts and report satisfaction.
    Resolve {
        #[command(flatten)]
        common: Common,
        /// Directory of choice files (read in file-name order) or a JSON file.
        #[arg(long)]
        configs: PathBuf,
        /// most-complete, simplest or priority:<stakeholder>.
        #[arg(long, default_value = "most-complete")]
        rule: String,
        /// Print one JSON object per iteration before the report.
        #[arg(long)]
        trace: bool,
    },
    /// Check a literal-set file against the model.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Literal set, e.g. `A, ¬B, C`.
        literals: PathBuf,
    },
    /// List every full product of the model (at most 30 features).
    Enumerate {
        #[command(flatten)]
        common: Common,
    },
    /// Satisfaction statistics of a final configuration.
    Score {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        configs: PathBuf,
        /// The final literal set.
        literals: PathBuf,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    model: PathBuf,
    /// json or table.
    #[arg(long, default_value = "json")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn format(&self) -> Result<Format> {
        Ok(self.format.parse()?)
    }

    fn emit(&self, document: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, document).with_context(|| format!("{}: cannot write", path.display())),
            None => {
                print!("{document}");
                Ok(())
            }
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("{}: cannot read", path.display()))
}

fn load_model(path: &Path) -> Result<FeatureModel> {
    parse_model(&read(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "json")
}

fn load_configs(path: &Path, model: &FeatureModel) -> Result<Vec<StakeholderConfig>> {
    let files = if path.is_dir() {
        let mut files = Vec::new();
        for entry in fs::read_dir(path).with_context(|| format!("{}: cannot list", path.display()))? {
            let entry = entry?;
            let hidden = entry.file_name().to_string_lossy().starts_with('.');
            if entry.file_type()?.is_file() && !hidden {
                files.push(entry.path());
            }
        }
        files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
        files
    } else {
        vec![path.to_path_buf()]
    };

    let mut configs = Vec::new();
    for file in &files {
        let text = read(file)?;
        let parsed = if is_json(file) {
            parse_stakeholder_json(&text, model)
        } else {
            parse_stakeholder_config(&text, model).map(|c| vec![c])
        };
        configs.extend(parsed.map_err(|e| anyhow!("{}: {e}", file.display()))?);
    }
    if configs.is_empty() {
        bail!("{}: no stakeholder configurations found", path.display());
    }
    let mut seen = HashSet::new();
    if let Some(dup) = configs.iter().find(|c| !seen.insert(c.stakeholder())) {
        bail!(
            "{}: stakeholder `{}` appears more than once",
            path.display(),
            dup.stakeholder()
        );
    }
    Ok(configs)
}

fn load_literals(path: &Path, model: &FeatureModel) -> Result<Vec<Literal>> {
    parse_literal_set(&read(path)?, model).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn iteration_cap(model: &FeatureModel) -> Result<usize> {
    match std::env::var(MAX_ITERS_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| anyhow!("{MAX_ITERS_VAR}: expected a non-negative integer, got `{v}`")),
        Err(_) => Ok(default_iteration_cap(model)),
    }
}

fn status(valid: bool) -> ExitCode {
    if valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn validity_table(report: &ValidityReport) -> String {
    let mut out = format!("valid: {}\n", report.valid);
    for v in &report.violations {
        let lits: Vec<String> = v.literals.iter().map(ToString::to_string).collect();
        let _ = write!(out, "  {:?}: {}", v.kind, lits.join(", "));
        if let Some(c) = v.constraint {
            let _ = write!(out, " (constraint #{c})");
        }
        out.push('\n');
    }
    out
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Resolve {
            common,
            configs,
            rule,
            trace,
        } => {
            let format = common.format()?;
            let rule: ManagerRule = rule.parse()?;
            let model = load_model(&common.model)?;
            let configs = load_configs(&configs, &model)?;
            let outcome = resolve_session_with_cap(&model, &configs, &rule, iteration_cap(&model)?)?;
            if trace {
                print!("{}", render_trace_lines(&outcome));
            }
            let report = score(&configs, &outcome.final_config);
            common.emit(&render(&report, &outcome, format))?;
            Ok(status(outcome.valid))
        }
        Command::Validate { common, literals } => {
            let format = common.format()?;
            let model = load_model(&common.model)?;
            let literals = load_literals(&literals, &model)?;
            let report = check_validity(&literals, &model)?;
            let doc = match format {
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
                Format::Table => validity_table(&report),
            };
            common.emit(&doc)?;
            Ok(status(report.valid))
        }
        Command::Enumerate { common } => {
            let format = common.format()?;
            let model = load_model(&common.model)?;
            let products = enumerate_valid(&model).map_err(|e| anyhow!("{}: {e}", common.model.display()))?;
            let doc = match format {
                Format::Json => {
                    let lists: Vec<Vec<&String>> = products.iter().map(|p| p.selected.iter().collect()).collect();
                    let value = serde_json::json!({ "count": products.len(), "configurations": lists });
                    serde_json::to_string_pretty(&value)? + "\n"
                }
                Format::Table => {
                    let mut out = format!("{} configurations\n", products.len());
                    for p in &products {
                        let names: Vec<&str> = p.selected.iter().map(String::as_str).collect();
                        let _ = writeln!(out, "{}", names.join(", "));
                    }
                    out
                }
            };
            common.emit(&doc)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Score {
            common,
            configs,
            literals,
        } => {
            let format = common.format()?;
            let model = load_model(&common.model)?;
            let configs = load_configs(&configs, &model)?;
            let literals = load_literals(&literals, &model)?;
            common.emit(&render_satisfaction(&score(&configs, &literals), format))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
