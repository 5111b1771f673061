use clap::Parser;
use dstprot::{run, Cli, Failure};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => print!("{text}"),
        Err(failure) => {
            if let Failure::Internal { output: Some(text), .. } = &failure {
                print!("{text}");
            }
            eprintln!("error: {}", failure.message());
            std::process::exit(failure.exit_code());
        }
    }
}
