use std::fs;
use std::process::ExitCode;

use clap::Parser;
use quartic_cli::args::Cli;
use quartic_cli::canonical::to_canonical_string;
use quartic_cli::commands::run;
use quartic_cli::input_hash;
use quartic_core::Error;

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => return fail(&e),
    };
    let text = to_canonical_string(out.value);
    let Some(dir) = &cli.out else {
        print!("{text}");
        return ExitCode::SUCCESS;
    };
    // the output directory does not change the result, so it stays out of the hash
    let invocation = format!("{:?}", Cli { out: None, ..cli.clone() });
    let path = dir.join(format!("{}-{}.json", out.name, input_hash(&invocation, &out.inputs)));
    let written = fs::create_dir_all(dir).and_then(|_| fs::write(&path, text));
    if let Err(e) = written {
        return fail(&Error::Input(format!("{}: {e}", path.display())));
    }
    println!("{}", path.display());
    ExitCode::SUCCESS
}
