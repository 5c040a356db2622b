use std::fmt::Write as _;

use lfref_core::io::load_stack;
use lfref_core::metrics::{fmt_sig9, stack_loss, LossParams};

use super::write_text;
use crate::args::LossArgs;
use crate::error::{Classify, CliError, CliResult};

pub const LOSS_SCHEMA: &str = "# lfref loss v1";

pub fn run(args: &LossArgs) -> CliResult<()> {
    let params = LossParams {
        beta: args.beta,
        gamma: args.gamma,
        ..LossParams::default()
    };
    params.validate().map_err(CliError::usage)?;
    let pred = load_stack(&args.pred).input()?;
    let truth = load_stack(&args.truth).input()?;
    let rows = stack_loss(&pred, &truth, &params).input()?;

    let mut csv = String::new();
    writeln!(csv, "{LOSS_SCHEMA}").unwrap();
    writeln!(csv, "alpha,mse,psi1,gamma_psi2,total").unwrap();
    for (alpha, c) in pred.alphas().iter().zip(&rows) {
        writeln!(
            csv,
            "{},{},{},{},{}",
            fmt_sig9(alpha),
            fmt_sig9(c.mse),
            fmt_sig9(c.psi1),
            fmt_sig9(c.gamma_psi2),
            fmt_sig9(c.total())
        )
        .unwrap();
    }
    match &args.out {
        Some(path) => write_text(path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}
