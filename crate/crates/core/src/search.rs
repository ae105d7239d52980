//! Backward search over a [`Pbwt`]: counting, and locating through sampled
//! suffix lengths.

use std::collections::BTreeSet;
use std::collections::HashMap;

use crate::dynseq::{DynBits, DynSeq};
use crate::error::{Error, Result};
use crate::pbwt::{Interval, Pbwt};
use crate::pcore::{AlphabetConfig, FceVal, Symbol, SymbolKind};

/// Per-position data of a query pattern, 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternProfile {
    pub symbols: Vec<Symbol>,
    pub kinds: Vec<SymbolKind>,
    /// `fce(w[i..])`
    pub fce: Vec<FceVal>,
    /// `|w[i+1..]|_p`
    pub e: Vec<usize>,
    /// `w[i]` is a parameter occurring again in `w[i+1..]`.
    pub repeat: Vec<bool>,
}

impl PatternProfile {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Profiles `w` in one right-to-left pass.
pub fn pattern_profile(w: &[Symbol], cfg: &AlphabetConfig) -> Result<PatternProfile> {
    let m = w.len();
    let mut kinds = vec![SymbolKind::Static; m];
    let mut fce = vec![FceVal::Static(cfg.sentinel()); m];
    let mut e = vec![0; m];
    let mut repeat = vec![false; m];
    // leftmost occurrence of each parameter in the current suffix
    let mut first: HashMap<Symbol, usize> = HashMap::new();
    let mut firsts: BTreeSet<usize> = BTreeSet::new();
    for i in (0..m).rev() {
        let c = w[i];
        if c == cfg.sentinel() {
            return Err(Error::SentinelSymbol(c));
        }
        kinds[i] = cfg.kind(c)?;
        e[i] = firsts.len();
        if kinds[i] == SymbolKind::Static {
            fce[i] = FceVal::Static(c);
            continue;
        }
        match first.insert(c, i) {
            Some(nx) => {
                repeat[i] = true;
                fce[i] = FceVal::PRank(firsts.range(..=nx).count());
                firsts.remove(&nx);
            }
            None => fce[i] = FceVal::PRank(e[i] + 1),
        }
        firsts.insert(i);
    }
    Ok(PatternProfile { symbols: w.to_vec(), kinds, fce, e, repeat })
}

/// The `w[i..]`-interval from the `w[i+1..]`-interval `iv`.
pub fn bws_step(idx: &Pbwt, iv: Interval, i: usize, prof: &PatternProfile) -> Interval {
    if iv.is_empty() {
        return Interval::EMPTY;
    }
    let narrow = |v: FceVal| match idx.l_fnq(v, iv.l).filter(|&q| q <= iv.r) {
        Some(a) => {
            let b = idx.l_fpq(v, iv.r).expect("an occurrence lies in the interval");
            Interval::new(idx.lf_get(a), idx.lf_get(b))
        }
        None => Interval::EMPTY,
    };
    match prof.kinds[i] {
        SymbolKind::Static => narrow(FceVal::Static(prof.symbols[i])),
        SymbolKind::Param if prof.repeat[i] => narrow(prof.fce[i]),
        SymbolKind::Param => {
            let e = prof.e[i];
            let width = idx.count_greater(iv.l, iv.r, e);
            if width == 0 {
                return Interval::EMPTY;
            }
            let s0 = idx.l_fnq_ge(e + 1, iv.l).expect("width > 0");
            let le = idx.mi(s0, e).l;
            let l1 = idx.mi(idx.lf_get(s0), e + 1).l;
            let l = l1 + idx.count_greater(le, iv.l - 1, e);
            Interval::new(l, l + width - 1)
        }
    }
}

/// Sampled suffix lengths, keyed by rank.
#[derive(Clone, Debug)]
pub struct Locator {
    pub(crate) rate: usize,
    pub(crate) bits: DynBits,
    pub(crate) values: DynSeq,
}

impl Locator {
    pub fn new(rate: usize, capacity: usize) -> Self {
        Locator { rate, bits: DynBits::new(), values: DynSeq::new(capacity as u64) }
    }

    /// Records the new suffix of length `len`, placed at rank `rank`.
    pub fn note_prepend(&mut self, rank: usize, len: usize) -> Result<()> {
        let sampled = len.is_multiple_of(self.rate);
        self.bits.insert(rank, sampled)?;
        if sampled {
            let at = self.bits.ones_before(rank - 1) + 1;
            self.values.insert(at, len as u64)?;
        }
        Ok(())
    }

    pub fn rate(&self) -> usize {
        self.rate
    }

    pub fn samples(&self) -> usize {
        self.values.len()
    }

    /// Sampled length at rank `i`, if any.
    pub fn sample_at(&self, i: usize) -> Option<usize> {
        if self.bits.get_at(i - 1) {
            let j = self.bits.ones_before(i - 1);
            Some(self.values.value_at(j) as usize)
        } else {
            None
        }
    }

    pub fn heap_bytes(&self) -> usize {
        self.bits.heap_bytes() + self.values.heap_bytes()
    }
}

impl Pbwt {
    /// Rank interval of the suffixes prefixed by `w` up to renaming of
    /// parameters. The empty pattern matches every rank.
    pub fn interval(&self, w: &[Symbol]) -> Result<Interval> {
        let prof = pattern_profile(w, &self.cfg)?;
        Ok(self.interval_of(&prof))
    }

    pub fn interval_of(&self, prof: &PatternProfile) -> Interval {
        let mut iv = Interval::new(1, self.n);
        for i in (0..prof.len()).rev() {
            iv = bws_step(self, iv, i, prof);
            if iv.is_empty() {
                break;
            }
        }
        iv
    }

    pub fn count(&self, w: &[Symbol]) -> Result<usize> {
        Ok(self.interval(w)?.len())
    }

    /// Start position of the rank-`i` suffix and the number of LF steps
    /// taken to find it.
    pub fn suffix_position_steps(&self, i: usize) -> Result<(usize, usize)> {
        if i == 0 || i > self.n {
            return Err(Error::OutOfRange { index: i, len: self.n });
        }
        let (mut j, mut t) = (i, 0);
        loop {
            if j == self.k {
                return Ok((t + 1, t));
            }
            if let Some(len) = self.locator.sample_at(j) {
                return Ok((self.n - (len - t) + 1, t));
            }
            j = self.lf_get(j);
            t += 1;
        }
    }

    pub fn suffix_position(&self, i: usize) -> Result<usize> {
        Ok(self.suffix_position_steps(i)?.0)
    }

    /// Start positions of the occurrences of `w`, in rank order, at most
    /// `limit` of them.
    pub fn locate(&self, w: &[Symbol], limit: Option<usize>) -> Result<Vec<usize>> {
        let iv = self.interval(w)?;
        let take = limit.unwrap_or(usize::MAX).min(iv.len());
        (iv.l..iv.l + take).map(|i| self.suffix_position(i)).collect()
    }

    pub fn locator(&self) -> &Locator {
        &self.locator
    }
}
