use clap::Parser;

fn main() {
    let cli = qraman_cli::Cli::parse();
    std::process::exit(qraman_cli::run(cli));
}
