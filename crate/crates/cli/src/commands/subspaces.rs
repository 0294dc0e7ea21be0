//! `lctl subspaces` — compare how many sparse subspaces a synthesis model
//! must enumerate against the analysis directions a transform provides.

use lctl::metrics::subspace_counts;

use crate::commands::CliError;

#[derive(Debug, clap::Args)]
pub struct SubspacesArgs {
    /// Dictionary atoms / signal dimensionality
    #[arg(long)]
    pub n: u64,

    /// Sparsity level (active atoms per sample)
    #[arg(long)]
    pub k: u64,

    /// Transform rows (analysis directions)
    #[arg(long)]
    pub p: u64,
}

pub fn run(args: SubspacesArgs) -> Result<(), CliError> {
    let counts = subspace_counts(args.n, args.k, args.p)?;
    println!(
        "synthesis subspaces (Stirling estimate k*log2(n/k)): {:.4}, rounded up: {}",
        counts.synthesis,
        counts.synthesis.ceil() as u64
    );
    println!("analysis directions: {}", counts.analysis);
    Ok(())
}
