mod broadcast_cmd;
mod dynamics_cmd;
mod input;
mod limit_cmd;
mod relent_cmd;
mod report;

use clap::{Parser, Subcommand};

/// Numerical experiments around relative entropy, broadcasting, and the
/// small-hbar correspondence between quantum and classical descriptions.
#[derive(Parser)]
#[command(name = "entrocast", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Property checks for the quantum relative entropy on random states.
    Relent(relent_cmd::RelentArgs),
    /// Broadcasting attempts with an entropy-gap certificate.
    Broadcast(broadcast_cmd::BroadcastArgs),
    /// Moment sweeps tracking the classical limit of relative entropy.
    ClassicalLimit(limit_cmd::LimitArgs),
    /// Kernel deviations and quantum-vs-classical evolution reports.
    Dynamics(dynamics_cmd::DynamicsArgs),
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Relent(args) => relent_cmd::run(&args),
        Command::Broadcast(args) => broadcast_cmd::run(&args),
        Command::ClassicalLimit(args) => limit_cmd::run(&args),
        Command::Dynamics(args) => dynamics_cmd::run(&args),
    };
    std::process::exit(code);
}
