use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use ppbwt::oracle::OracleIndex;
use ppbwt::pcore::symbols_of;
use ppbwt::{AlphabetConfig, Error, FceVal, Pbwt, Symbol};
use serde_json::json;

use crate::{Format, InputArgs, QueryArgs};

pub fn read_text(input: &InputArgs) -> Result<(Vec<Symbol>, AlphabetConfig)> {
    let raw = fs::read_to_string(&input.input)
        .with_context(|| format!("reading {}", input.input.display()))?;
    let body = if input.trim { raw.trim_end_matches(['\n', '\r']) } else { raw.as_str() };
    let text = symbols_of(body);
    let cfg = if input.alphabet == "infer" {
        AlphabetConfig::infer(&text)?
    } else {
        let src = fs::read_to_string(&input.alphabet)
            .with_context(|| format!("reading alphabet {}", input.alphabet))?;
        AlphabetConfig::parse(&src)?
    };
    if let Some(p) = text.iter().position(|&c| c == cfg.sentinel()) {
        bail!("input position {} holds the sentinel code {}", p + 1, cfg.sentinel());
    }
    Ok((text, cfg))
}

fn join(v: impl IntoIterator<Item = impl ToString>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn build(
    out: &mut impl Write,
    input: &InputArgs,
    output: &Path,
    capacity: Option<usize>,
    dump: bool,
    format: Format,
) -> Result<ExitCode> {
    let (text, cfg) = read_text(input)?;
    let capacity = capacity.unwrap_or(text.len() + 1);
    if capacity < text.len() + 1 {
        bail!("capacity {capacity} is smaller than the input length plus the sentinel");
    }
    let mut idx = Pbwt::with_sample_rate(cfg, capacity, input.sample_rate)?;
    for (p, &c) in text.iter().enumerate().rev() {
        idx.prepend(c).with_context(|| format!("prepending input position {}", p + 1))?;
    }
    let file = fs::File::create(output).with_context(|| format!("creating {}", output.display()))?;
    let mut w = BufWriter::new(file);
    idx.write_to(&mut w)?;
    w.flush()?;

    let r_inv = || (1..=idx.len()).map(|i| idx.suffix_position(i)).collect::<ppbwt::Result<Vec<_>>>();
    match format {
        Format::Text => {
            writeln!(
                out,
                "n={} sigma_s={} sigma_p={} iter_count={} k={}",
                idx.len(),
                idx.sigma_s(),
                idx.sigma_p(),
                idx.iter_count(),
                idx.k()
            )?;
            if dump {
                writeln!(out, "F: {}", join(idx.f_array()))?;
                writeln!(out, "L: {}", join(idx.l_array()))?;
                writeln!(out, "LCP: {}", join(idx.lcp_array()))?;
                writeln!(out, "SA: {}", join(r_inv()?))?;
            }
        }
        Format::Json => {
            let mut rec = json!({
                "n": idx.len(),
                "sigma_s": idx.sigma_s(),
                "sigma_p": idx.sigma_p(),
                "iter_count": idx.iter_count(),
                "k": idx.k(),
            });
            if dump {
                let show = |v: Vec<FceVal>| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
                rec["f"] = json!(show(idx.f_array()));
                rec["l"] = json!(show(idx.l_array()));
                rec["lcp"] = json!(idx.lcp_array());
                rec["sa"] = json!(r_inv()?);
            }
            writeln!(out, "{rec}")?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn load(path: &Path) -> Result<Pbwt> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Pbwt::from_bytes(&bytes).with_context(|| format!("loading {}", path.display()))
}

pub fn query(out: &mut impl Write, q: &QueryArgs, limit: Option<usize>, positions: bool) -> Result<ExitCode> {
    let idx = load(&q.index)?;
    let mut patterns = q.patterns.clone();
    if let Some(f) = &q.patterns_file {
        let src = fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
        patterns.extend(src.lines().map(str::to_string));
    }
    if patterns.is_empty() {
        bail!("no pattern given");
    }
    for p in &patterns {
        let w = symbols_of(p);
        let (count, found) = match idx.interval(&w) {
            Ok(iv) => {
                let found = if positions {
                    let mut v = idx.locate(&w, limit)?;
                    v.sort_unstable();
                    v
                } else {
                    Vec::new()
                };
                (iv.len(), found)
            }
            Err(Error::UnknownSymbol(c)) => {
                eprintln!("note: pattern {p:?} uses code {c}, which is not in the alphabet; it cannot occur");
                (0, Vec::new())
            }
            Err(e) => return Err(e).with_context(|| format!("pattern {p:?}")),
        };
        match (q.format, positions) {
            (Format::Text, false) => writeln!(out, "{count}")?,
            (Format::Text, true) => writeln!(out, "{}", found.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))?,
            (Format::Json, false) => writeln!(out, "{}", json!({ "pattern": p, "count": count }))?,
            (Format::Json, true) => {
                writeln!(out, "{}", json!({ "pattern": p, "count": count, "positions": found }))?
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// First difference between the index and the brute-force reference, as
/// `(array, rank, expected, got)`.
fn first_mismatch(idx: &Pbwt, o: &OracleIndex) -> ppbwt::Result<Option<(&'static str, usize, String, String)>> {
    fn diff<T: PartialEq + ToString>(name: &'static str, want: &[T], got: &[T]) -> Option<(&'static str, usize, String, String)> {
        want.iter()
            .zip(got)
            .position(|(a, b)| a != b)
            .map(|i| (name, i + 1, want[i].to_string(), got[i].to_string()))
    }
    let r_inv = (1..=idx.len()).map(|i| idx.suffix_position(i)).collect::<ppbwt::Result<Vec<_>>>()?;
    Ok(diff("F", &o.f, &idx.f_array())
        .or_else(|| diff("L", &o.l, &idx.l_array()))
        .or_else(|| diff("LCP", &o.lcp, &idx.lcp_array()))
        .or_else(|| diff("SA", &o.r_inv, &r_inv))
        .or_else(|| (o.k() != idx.k()).then(|| ("k", 0, o.k().to_string(), idx.k().to_string()))))
}

pub fn verify(out: &mut impl Write, input: &InputArgs, every: usize) -> Result<ExitCode> {
    if every == 0 {
        bail!("--every must be at least 1");
    }
    let (text, cfg) = read_text(input)?;
    let mut idx = Pbwt::with_sample_rate(cfg.clone(), text.len() + 1, input.sample_rate)?;
    let mut checked = 0;
    for p in (0..text.len()).rev() {
        idx.prepend(text[p])?;
        let step = text.len() - p;
        if step % every != 0 && p != 0 {
            continue;
        }
        let mut suffix = text[p..].to_vec();
        suffix.push(cfg.sentinel());
        let o = OracleIndex::build(&suffix, &cfg)?;
        checked += 1;
        if let Some((array, rank, want, got)) = first_mismatch(&idx, &o)? {
            let shown: String = text[p..].iter().map(|&c| char::from_u32(c).unwrap_or('\u{fffd}')).collect();
            writeln!(
                out,
                "MISMATCH after prepending input position {}: {array}[{rank}] expected {want}, got {got}",
                p + 1
            )?;
            writeln!(out, "reproduce with the text {shown:?} (codes {:?})", &text[p..])?;
            return Ok(ExitCode::from(1));
        }
    }
    writeln!(out, "OK n={} checked={checked} iter_count={}", idx.len(), idx.iter_count())?;
    Ok(ExitCode::SUCCESS)
}
