use std::process::ExitCode;

use clap::Parser;
use lfref_cli::args::Cli;
use lfref_cli::error::Status;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Status::Usage } else { Status::Ok }.into();
        }
    };
    match lfref_cli::init_threads().and_then(|()| lfref_cli::run(&cli)) {
        Ok(()) => Status::Ok.into(),
        Err(e) => {
            log::error!("{e}");
            e.status.into()
        }
    }
}
