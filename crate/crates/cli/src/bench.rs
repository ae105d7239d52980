use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Result};
use ppbwt::{AlphabetConfig, Pbwt, Symbol};
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

pub struct Shape {
    pub sigma_s: u32,
    pub sigma_p: u32,
    pub density: f64,
    pub queries: usize,
    pub pattern_len: usize,
    pub seed: u64,
    pub sample_rate: usize,
}

const PARAM_BASE: Symbol = 1 << 20;

pub fn run(out: &mut impl Write, sizes: &[usize], shape: &Shape) -> Result<ExitCode> {
    if shape.sigma_s == 0 && shape.sigma_p == 0 {
        bail!("the alphabet needs at least one symbol");
    }
    if !(0.0..=1.0).contains(&shape.density) {
        bail!("--density must lie in [0, 1]");
    }
    let density = match (shape.sigma_s, shape.sigma_p) {
        (0, _) => 1.0,
        (_, 0) => 0.0,
        _ => shape.density,
    };
    let statics: Vec<Symbol> = (1..=shape.sigma_s).collect();
    let params: Vec<Symbol> = (PARAM_BASE..PARAM_BASE + shape.sigma_p).collect();
    let cfg = AlphabetConfig::new(0, statics.clone(), params.clone())?;
    writeln!(out, "n,sigma_s,sigma_p,build_ms,count_us,locate_us,heap_bytes,iter_per_n")?;
    let mut rng = SmallRng::seed_from_u64(shape.seed);
    for &n in sizes {
        let text: Vec<Symbol> = (0..n)
            .map(|_| {
                if rng.gen_bool(density) {
                    params[rng.gen_range(0..params.len())]
                } else {
                    statics[rng.gen_range(0..statics.len())]
                }
            })
            .collect();
        let start = Instant::now();
        let idx = Pbwt::build(&text, cfg.clone(), shape.sample_rate)?;
        let build = start.elapsed();

        let m = shape.pattern_len.min(n).max(1);
        let patterns: Vec<Vec<Symbol>> = (0..shape.queries)
            .map(|_| {
                if n == 0 {
                    return vec![statics.first().copied().unwrap_or(params[0])];
                }
                let s = rng.gen_range(0..=n - m);
                text[s..s + m].to_vec()
            })
            .collect();
        let start = Instant::now();
        let mut total = 0;
        for w in &patterns {
            total += idx.count(w)?;
        }
        let count_us = per_query(start, patterns.len());
        let start = Instant::now();
        for w in &patterns {
            total += idx.locate(w, Some(16))?.len();
        }
        let locate_us = per_query(start, patterns.len());
        std::hint::black_box(total);
        writeln!(
            out,
            "{},{},{},{:.3},{:.3},{:.3},{},{:.4}",
            idx.len(),
            idx.sigma_s(),
            idx.sigma_p(),
            build.as_secs_f64() * 1e3,
            count_us,
            locate_us,
            idx.heap_bytes(),
            idx.iter_count() as f64 / idx.len() as f64
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn per_query(start: Instant, queries: usize) -> f64 {
    start.elapsed().as_secs_f64() * 1e6 / queries.max(1) as f64
}
