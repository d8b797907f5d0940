use clap::Parser;

fn main() {
    let cli = durwait_cli::cli::Cli::parse();
    if let Err(e) = durwait_cli::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
