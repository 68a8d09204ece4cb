use clap::Parser;

use trigsum::cli::{exit_code, Cli};

fn main() {
    let cli = Cli::parse();
    match cli.run() {
        Ok(output) => println!("{output}"),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code(&err));
        }
    }
}
