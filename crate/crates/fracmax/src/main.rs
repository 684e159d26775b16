use clap::Parser;

fn main() {
    let cli = fracmax::Cli::parse();
    std::process::exit(fracmax::run(&cli).code());
}
