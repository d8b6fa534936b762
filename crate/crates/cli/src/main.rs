use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jetbound::catalog::{find_case, list_cases, load_cases, CaseSpec, CatalogError};
use jetbound_cli::{
    list_lines, report_text, run_cases, table_text, verify_lines, ReportDocument, CASE_SCHEMA,
};

/// Divisibility bounds for stabilisers of regular sections.
#[derive(Debug, Parser)]
#[command(name = "jetbound", version)]
struct Cli {
    /// Write a JSON report document to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Read cases from this TOML file instead of the built-in set.
    #[arg(long, global = true, value_name = "PATH")]
    cases: Option<PathBuf>,
    /// Number of worker threads.
    #[arg(long, global = true, value_name = "N", default_value_t = 1)]
    parallel: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the cases with their expected bounds.
    List,
    /// Run one case and print every intermediate.
    Run {
        case_id: String,
    },
    /// Print the computed bound of every `thm*` case.
    Table,
    /// Run every case and compare against the expected bounds.
    Verify {
        /// Accept mismatches of cases whose expected value is cited only.
        #[arg(long)]
        allow_cited_mismatch: bool,
    },
    /// Print the case-file schema.
    Schema,
}

const USAGE: u8 = 2;
const MISMATCH: u8 = 1;

fn load(cli: &Cli) -> Result<Vec<CaseSpec>, CatalogError> {
    match &cli.cases {
        Some(p) => load_cases(p),
        None => Ok(list_cases()),
    }
}

fn write_json(cli: &Cli, doc: &ReportDocument) -> Result<(), String> {
    if let Some(path) = &cli.json {
        std::fs::write(path, doc.to_json()).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.parallel == 0 {
        eprintln!("error: --parallel must be at least 1");
        return ExitCode::from(USAGE);
    }
    if let Command::Schema = cli.command {
        print!("{CASE_SCHEMA}");
        return ExitCode::SUCCESS;
    }
    let specs = match load(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
    };
    let (code, doc) = match &cli.command {
        Command::Schema => unreachable!("handled above"),
        Command::List => {
            for line in list_lines(&specs) {
                println!("{line}");
            }
            return ExitCode::SUCCESS;
        }
        Command::Run { case_id } => {
            let spec = match find_case(&specs, case_id) {
                Ok(s) => s.clone(),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(USAGE);
                }
            };
            let outcome = run_cases(std::slice::from_ref(&spec), 1).remove(0);
            match outcome.result {
                Ok(r) => {
                    print!("{}", report_text(&spec, &r));
                    let code = if r.matches { 0 } else { MISMATCH };
                    (code, ReportDocument::new(vec![r]))
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(MISMATCH);
                }
            }
        }
        Command::Table => {
            let outcomes = run_cases(&specs, cli.parallel);
            print!("{}", table_text(&outcomes));
            let reports: Vec<_> = outcomes.into_iter().filter_map(|o| o.result.ok()).collect();
            (0, ReportDocument::new(reports))
        }
        Command::Verify { allow_cited_mismatch } => {
            let outcomes = run_cases(&specs, cli.parallel);
            let (lines, ok) = verify_lines(&outcomes, *allow_cited_mismatch);
            for line in lines {
                println!("{line}");
            }
            let reports: Vec<_> = outcomes.into_iter().filter_map(|o| o.result.ok()).collect();
            (if ok { 0 } else { MISMATCH }, ReportDocument::new(reports))
        }
    };
    if let Err(e) = write_json(&cli, &doc) {
        eprintln!("error: {e}");
        return ExitCode::from(USAGE);
    }
    ExitCode::from(code)
}
