//! Randomized cross-check and timing harness. Every instance is solved by
//! all solvers that can afford its size; any disagreement is reported with
//! the instance's seed and turns into exit code 2.

use std::time::Instant;

use anyhow::Result;
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rectfit::{
    brute_force_fit_counted, iterative_fit_counted, linear_fit_counted, RectFit, Sample, Score,
    StreamEngine,
};
use serde_json::json;

#[derive(Args)]
pub struct BenchArgs {
    /// Samples per instance.
    #[arg(long, default_value_t = 1000, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub n: usize,
    /// Number of random instances.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub instances: u64,
    /// Base seed; instance i runs on seed + i.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Largest n the cubic reference solver still participates at.
    #[arg(long, default_value_t = 512)]
    pub max_brute: usize,
    /// Largest n the quadratic sweep still participates at.
    #[arg(long, default_value_t = 8192)]
    pub max_sweep: usize,
}

pub fn run(args: &BenchArgs) -> Result<u8> {
    let mut disagreements = 0u64;
    for i in 0..args.instances {
        let seed = args.seed.wrapping_add(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let arrivals: Vec<(f64, i64)> = (0..args.n)
            .map(|_| (rng.gen_range(-1e6..1e6), rng.gen_range(-10i64..=10)))
            .collect();
        let mut sorted: Vec<Sample<i64>> = arrivals
            .iter()
            .enumerate()
            .map(|(id, &(x, z))| Ok(Sample::new(Score::new(x)?, z, id as u64)))
            .collect::<Result<_, rectfit::FitError>>()?;
        sorted.sort_by_key(|s| (s.x, s.id));

        let mut fits: Vec<(&str, RectFit<i64>)> = Vec::new();
        let mut timings = serde_json::Map::new();
        let mut counters = serde_json::Map::new();

        let t = Instant::now();
        let (reference, ops) = linear_fit_counted(&sorted)?;
        timings.insert("linear".into(), json!(t.elapsed().as_nanos() as u64));
        counters.insert("linear_ops".into(), json!(ops));
        fits.push(("linear", reference));

        if args.n <= args.max_sweep {
            let t = Instant::now();
            let (fit, visited) = iterative_fit_counted(&sorted)?;
            timings.insert("iterative".into(), json!(t.elapsed().as_nanos() as u64));
            counters.insert("sweep_visits".into(), json!(visited));
            fits.push(("iterative", fit));
        }
        if args.n <= args.max_brute {
            let t = Instant::now();
            let (fit, adds) = brute_force_fit_counted(&sorted)?;
            timings.insert("brute".into(), json!(t.elapsed().as_nanos() as u64));
            counters.insert("brute_adds".into(), json!(adds));
            fits.push(("brute", fit));
        }

        let t = Instant::now();
        let mut engine = StreamEngine::new();
        for &(x, z) in &arrivals {
            engine.insert(Score::new(x)?, z)?;
        }
        timings.insert("stream".into(), json!(t.elapsed().as_nanos() as u64));
        counters.insert("stream_merges".into(), json!(engine.merge_invocations()));
        fits.push(("stream", engine.current_fit()));

        let dissenters: Vec<&str> = fits
            .iter()
            .filter(|(_, fit)| *fit != reference)
            .map(|(name, _)| *name)
            .collect();
        let agree = dissenters.is_empty();
        if !agree {
            disagreements += 1;
            eprintln!(
                "bench: solvers disagree on instance seed {seed} (n={}): {}",
                args.n,
                dissenters.join(", ")
            );
        }
        println!(
            "{}",
            json!({
                "n": args.n,
                "seed": seed,
                "agree": agree,
                "l1": reference.l1,
                "timings_ns": timings,
                "counters": counters,
            })
        );
    }
    Ok(if disagreements > 0 { 2 } else { 0 })
}
