//! Command-line front end for the `fsbi` binary.

pub mod args;
pub mod commands;
pub mod error;

pub use args::{Cli, Command};
pub use error::{code, CliError, CliResult};

/// Runs one parsed invocation on a pool sized by `--threads`.
pub fn run(cli: &Cli) -> CliResult<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Dwt(a) => commands::dwt(g, a),
        Command::Generate(a) => commands::generate(g, a),
        Command::Train(a) => commands::train_cmd(g, a),
        Command::Score(a) => commands::score(g, a),
        Command::Aggregate(a) => commands::aggregate_cmd(a),
        Command::Auc(a) => commands::auc_cmd(a),
        Command::Synth(a) => commands::synth(g, a),
    }
}
