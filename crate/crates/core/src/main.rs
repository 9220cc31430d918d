use clap::Parser;
use su2torsion::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
