//! Brute-force reference: sorts every p-encoded suffix explicitly and reads
//! F, L, LCP∞ and the suffix ranks straight off the definitions. Quadratic
//! space and `O(n² log n)` time; used as ground truth by the tests and by the
//! `verify` command.

use crate::error::{Error, Result};
use crate::pcore::{AlphabetConfig, FceVal, PEncSym, Symbol, SymbolKind};

#[derive(Clone, Debug)]
pub struct OracleIndex {
    pub text: Vec<Symbol>,
    /// `(start, ⟨T[start..]⟩)` in increasing order, starts 1-based.
    pub sorted: Vec<(usize, Vec<PEncSym>)>,
    /// `r_inv[i - 1]` is the start of the rank-`i` suffix.
    pub r_inv: Vec<usize>,
    /// `r[p - 1]` is the rank of the suffix starting at `p`.
    pub r: Vec<usize>,
    pub f: Vec<FceVal>,
    pub l: Vec<FceVal>,
    pub lcp: Vec<usize>,
}

impl OracleIndex {
    /// `text` must end with the sentinel, which occurs nowhere else.
    pub fn build(text: &[Symbol], cfg: &AlphabetConfig) -> Result<Self> {
        let sentinel = cfg.sentinel();
        if text.last() != Some(&sentinel) || text[..text.len() - 1].contains(&sentinel) {
            return Err(Error::InvalidInput(
                "text must end with the sentinel and contain it exactly once".into(),
            ));
        }
        let n = text.len();
        let prev = previous_occurrences(text, cfg)?;
        let mut sorted: Vec<(usize, Vec<PEncSym>)> = (0..n)
            .map(|j| (j + 1, encode_from(text, &prev, cfg, j)))
            .collect();
        sorted.sort_by(|a, b| a.1.cmp(&b.1));

        let r_inv: Vec<usize> = sorted.iter().map(|(p, _)| *p).collect();
        let mut r = vec![0; n];
        for (rank, &p) in r_inv.iter().enumerate() {
            r[p - 1] = rank + 1;
        }
        let fce_at: Vec<FceVal> = (0..n)
            .map(|j| fce_from_encoding(&sorted[r[j] - 1].1, text[j], cfg))
            .collect();
        let f = r_inv.iter().map(|&p| fce_at[p - 1]).collect();
        let l = r_inv
            .iter()
            .map(|&p| if p == 1 { FceVal::Static(sentinel) } else { fce_at[p - 2] })
            .collect();
        let lcp = (0..n)
            .map(|i| if i == 0 { 0 } else { naive_lcpinf(&sorted[i - 1].1, &sorted[i].1) })
            .collect();
        Ok(OracleIndex { text: text.to_vec(), sorted, r_inv, r, f, l, lcp })
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    /// Rank of the whole text.
    pub fn k(&self) -> usize {
        self.r[0]
    }

    /// Ranks whose p-encoded suffix starts with `⟨w⟩`, as an inclusive range.
    pub fn interval(&self, w: &[Symbol], cfg: &AlphabetConfig) -> Result<Option<(usize, usize)>> {
        let pw = crate::pcore::penc(w, cfg)?;
        let ranks: Vec<usize> = self
            .sorted
            .iter()
            .enumerate()
            .filter(|(_, (_, enc))| enc.len() >= pw.len() && enc[..pw.len()] == pw[..])
            .map(|(i, _)| i + 1)
            .collect();
        Ok(ranks.first().map(|&a| (a, *ranks.last().unwrap())))
    }
}

/// 0-based index of the previous occurrence of each parameter symbol.
fn previous_occurrences(text: &[Symbol], cfg: &AlphabetConfig) -> Result<Vec<Option<usize>>> {
    let mut last = std::collections::HashMap::new();
    text.iter()
        .enumerate()
        .map(|(i, &c)| {
            Ok(match cfg.kind(c)? {
                SymbolKind::Static => None,
                SymbolKind::Param => last.insert(c, i),
            })
        })
        .collect()
}

/// `⟨text[j..]⟩` (0-based) from the previous-occurrence table.
fn encode_from(
    text: &[Symbol],
    prev: &[Option<usize>],
    cfg: &AlphabetConfig,
    j: usize,
) -> Vec<PEncSym> {
    (j..text.len()).map(|i| encode_window(text, prev, cfg, j, i)).collect()
}

fn fce_from_encoding(enc: &[PEncSym], first: Symbol, cfg: &AlphabetConfig) -> FceVal {
    match enc.first() {
        None => FceVal::Static(cfg.sentinel()),
        Some(PEncSym::Static(_)) => FceVal::Static(first),
        Some(_) => {
            // the second occurrence of enc[0] is the position whose distance
            // points back to index 0
            let until = enc
                .iter()
                .enumerate()
                .skip(1)
                .find(|&(h, &s)| s == PEncSym::Dist(h))
                .map_or(enc.len(), |(h, _)| h);
            FceVal::PRank(enc[..until].iter().filter(|&&s| s == PEncSym::Inf).count())
        }
    }
}

/// Number of `Inf` symbols in the longest common prefix.
pub fn naive_lcpinf(x: &[PEncSym], y: &[PEncSym]) -> usize {
    x.iter()
        .zip(y)
        .take_while(|(a, b)| a == b)
        .filter(|(a, _)| **a == PEncSym::Inf)
        .count()
}

/// 1-based start positions of the windows of `text` that p-match `w`.
pub fn naive_locate(text: &[Symbol], w: &[Symbol], cfg: &AlphabetConfig) -> Result<Vec<usize>> {
    let pw = crate::pcore::penc(w, cfg)?;
    if w.is_empty() {
        return Ok((1..=text.len()).collect());
    }
    if w.len() > text.len() {
        return Ok(Vec::new());
    }
    let prev = previous_occurrences(text, cfg)?;
    let m = w.len();
    Ok((0..=text.len() - m)
        .filter(|&j| (0..m).all(|t| encode_window(text, &prev, cfg, j, j + t) == pw[t]))
        .map(|j| j + 1)
        .collect())
}

pub fn naive_count(text: &[Symbol], w: &[Symbol], cfg: &AlphabetConfig) -> Result<usize> {
    Ok(naive_locate(text, w, cfg)?.len())
}

fn encode_window(
    text: &[Symbol],
    prev: &[Option<usize>],
    cfg: &AlphabetConfig,
    start: usize,
    i: usize,
) -> PEncSym {
    match (cfg.kind_of(text[i]), prev[i]) {
        (Some(SymbolKind::Param), Some(p)) if p >= start => PEncSym::Dist(i - p),
        (Some(SymbolKind::Param), _) => PEncSym::Inf,
        _ => PEncSym::Static(text[i]),
    }
}
