//! The online pBWT: F, L and LCP∞ of a p-string maintained while symbols are
//! prepended one at a time.
//!
//! Ranks are 1-based throughout. L is kept split into a bit vector telling
//! static entries from parameter entries, the static subsequence and the
//! parameter-rank subsequence; threshold queries only ever touch the latter.

use std::collections::BTreeSet;

use crate::dynseq::{DynBits, DynSeq};
use crate::dynwm::{DynWaveletMatrix, Pred};
use crate::error::{Error, Result};
use crate::pcore::{extended_pair, AlphabetConfig, FceVal, Symbol, SymbolKind};
use crate::search::Locator;

pub const DEFAULT_SAMPLE_RATE: usize = 32;

/// 1-based inclusive rank interval; empty when `l > r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub l: usize,
    pub r: usize,
}

impl Interval {
    pub const EMPTY: Interval = Interval { l: 1, r: 0 };

    pub fn new(l: usize, r: usize) -> Self {
        Interval { l, r }
    }

    pub fn is_empty(&self) -> bool {
        self.l > self.r
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.r - self.l + 1
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.l <= i && i <= self.r
    }
}

#[derive(Clone, Debug)]
pub struct Pbwt {
    pub(crate) cfg: AlphabetConfig,
    pub(crate) capacity: usize,
    /// Offset of parameter ranks in the integer coding of F.
    pub(crate) sigma: u64,
    pub(crate) f: DynSeq,
    pub(crate) lb: DynBits,
    pub(crate) lx: DynSeq,
    pub(crate) ly: DynWaveletMatrix,
    pub(crate) lcp: DynWaveletMatrix,
    pub(crate) z: DynSeq,
    pub(crate) sset: BTreeSet<Symbol>,
    pub(crate) k: usize,
    pub(crate) n: usize,
    pub(crate) iter_count: u64,
    pub(crate) locator: Locator,
}

/// Largest parameter rank (and lcp∞ value) a text of `capacity` symbols can
/// produce under `cfg`.
pub(crate) fn rank_cap(cfg: &AlphabetConfig, capacity: usize) -> u64 {
    (cfg.params().count().min(capacity) as u64).max(1)
}

impl Pbwt {
    /// Index of the text `$`, able to grow to `capacity` symbols including
    /// the sentinel.
    pub fn new(cfg: AlphabetConfig, capacity: usize) -> Result<Self> {
        Self::with_sample_rate(cfg, capacity, DEFAULT_SAMPLE_RATE)
    }

    pub fn with_sample_rate(cfg: AlphabetConfig, capacity: usize, sample_rate: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidInput("capacity must be at least 1".into()));
        }
        if sample_rate == 0 {
            return Err(Error::InvalidInput("sample rate must be at least 1".into()));
        }
        let sigma = cfg.sigma_max() as u64;
        let pmax = rank_cap(&cfg, capacity);
        let sentinel = cfg.sentinel();
        let mut f = DynSeq::new(sigma + pmax);
        f.push(sentinel as u64)?;
        let mut lx = DynSeq::new(sigma);
        lx.push(sentinel as u64)?;
        let mut lcp = DynWaveletMatrix::new(pmax);
        lcp.push(0)?;
        let mut locator = Locator::new(sample_rate, capacity);
        locator.note_prepend(1, 1)?;
        Ok(Pbwt {
            capacity,
            sigma,
            f,
            lb: DynBits::from_bits([false]),
            lx,
            ly: DynWaveletMatrix::new(pmax),
            lcp,
            z: DynSeq::new(sigma),
            sset: BTreeSet::from([sentinel]),
            k: 1,
            n: 1,
            iter_count: 0,
            locator,
            cfg,
        })
    }

    /// Online build of `text` followed by the sentinel.
    pub fn build(text: &[Symbol], cfg: AlphabetConfig, sample_rate: usize) -> Result<Self> {
        let mut idx = Self::with_sample_rate(cfg, text.len() + 1, sample_rate)?;
        for &c in text.iter().rev() {
            idx.prepend(c)?;
        }
        Ok(idx)
    }

    pub fn alphabet(&self) -> &AlphabetConfig {
        &self.cfg
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Rank of the whole text.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Total Algorithm-2 style loop iterations spent on parameter prepends.
    pub fn iter_count(&self) -> u64 {
        self.iter_count
    }

    pub fn sample_rate(&self) -> usize {
        self.locator.rate
    }

    /// Distinct static symbols in the text, not counting the sentinel.
    pub fn sigma_s(&self) -> usize {
        self.sset.len() - 1
    }

    /// Distinct parameter symbols in the text.
    pub fn sigma_p(&self) -> usize {
        self.z.len()
    }

    /// Parameter symbols in order of leftmost occurrence.
    pub fn leftmost_params(&self) -> Vec<Symbol> {
        self.z.to_vec().into_iter().map(|c| c as Symbol).collect()
    }

    pub fn heap_bytes(&self) -> usize {
        self.f.heap_bytes()
            + self.lb.heap_bytes()
            + self.lx.heap_bytes()
            + self.ly.heap_bytes()
            + self.lcp.heap_bytes()
            + self.z.heap_bytes()
            + self.sset.len() * std::mem::size_of::<Symbol>()
            + self.locator.heap_bytes()
    }

    fn check_rank(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::OutOfRange { index: i, len: self.n })
        } else {
            Ok(())
        }
    }

    pub(crate) fn encode(&self, v: FceVal) -> u64 {
        match v {
            FceVal::Static(c) => c as u64,
            FceVal::PRank(r) => self.sigma + r as u64,
        }
    }

    pub(crate) fn decode(&self, x: u64) -> FceVal {
        if x > self.sigma {
            FceVal::PRank((x - self.sigma) as usize)
        } else {
            FceVal::Static(x as Symbol)
        }
    }

    pub fn f_at(&self, i: usize) -> Result<FceVal> {
        self.check_rank(i)?;
        Ok(self.f_get(i))
    }

    pub fn l_at(&self, i: usize) -> Result<FceVal> {
        self.check_rank(i)?;
        Ok(self.l_get(i))
    }

    pub fn lcpinf_at(&self, i: usize) -> Result<usize> {
        self.check_rank(i)?;
        Ok(self.lcp_get(i))
    }

    pub fn f_array(&self) -> Vec<FceVal> {
        self.f.to_vec().into_iter().map(|x| self.decode(x)).collect()
    }

    pub fn l_array(&self) -> Vec<FceVal> {
        let (mut xs, mut ys) = (self.lx.to_vec().into_iter(), self.ly.to_vec().into_iter());
        self.lb
            .iter()
            .map(|b| {
                if b {
                    FceVal::PRank(ys.next().expect("|Y| = ones of B") as usize)
                } else {
                    FceVal::Static(xs.next().expect("|X| = zeros of B") as Symbol)
                }
            })
            .collect()
    }

    pub fn lcp_array(&self) -> Vec<usize> {
        self.lcp.to_vec().into_iter().map(|v| v as usize).collect()
    }

    fn f_get(&self, i: usize) -> FceVal {
        self.decode(self.f.value_at(i - 1))
    }

    fn lcp_get(&self, i: usize) -> usize {
        self.lcp.access(i).expect("rank checked") as usize
    }

    pub(crate) fn l_get(&self, i: usize) -> FceVal {
        if self.lb.get_at(i - 1) {
            let iy = self.lb.ones_before(i - 1) + 1;
            FceVal::PRank(self.ly.access(iy).expect("Y position") as usize)
        } else {
            let ix = self.lb.zeros_before(i - 1);
            FceVal::Static(self.lx.value_at(ix) as Symbol)
        }
    }

    /// Occurrences of `v` in `L[1..i]`.
    fn l_rank(&self, v: FceVal, i: usize) -> usize {
        match v {
            FceVal::Static(c) => self.lx.count_in(c as u64, 0, self.lb.zeros_before(i)),
            FceVal::PRank(r) => {
                self.ly.rank(r as u64, self.lb.ones_before(i)).expect("Y prefix")
            }
        }
    }

    fn l_select(&self, v: FceVal, j: usize) -> Option<usize> {
        match v {
            FceVal::Static(c) => {
                self.lx.select(c as u64, j).and_then(|p| self.lb.select(false, p))
            }
            FceVal::PRank(r) => self.ly.select(r as u64, j).and_then(|p| self.lb.select(true, p)),
        }
    }

    fn l_insert(&mut self, i: usize, v: FceVal) -> Result<()> {
        match v {
            FceVal::Static(c) => {
                let ix = self.lb.zeros_before(i - 1) + 1;
                self.lx.insert(ix, c as u64)?;
                self.lb.insert(i, false)
            }
            FceVal::PRank(r) => {
                let iy = self.lb.ones_before(i - 1) + 1;
                self.ly.insert(iy, r as u64)?;
                self.lb.insert(i, true)
            }
        }
    }

    fn l_delete(&mut self, i: usize) -> Result<FceVal> {
        let param = self.lb.delete(i)?;
        Ok(if param {
            let iy = self.lb.ones_before(i - 1) + 1;
            FceVal::PRank(self.ly.delete(iy)? as usize)
        } else {
            let ix = self.lb.zeros_before(i - 1) + 1;
            FceVal::Static(self.lx.delete(ix)? as Symbol)
        })
    }

    /// Largest parameter entry `q <= i` of L satisfying `pred`.
    fn y_fpq(&self, pred: Pred, i: usize) -> Option<usize> {
        let iy = self.lb.ones_before(i);
        self.ly
            .fpq(pred, iy)
            .expect("Y prefix")
            .and_then(|p| self.lb.select(true, p))
    }

    /// Smallest parameter entry `q >= i` of L satisfying `pred`.
    fn y_fnq(&self, pred: Pred, i: usize) -> Option<usize> {
        let iy = self.lb.ones_before(i - 1) + 1;
        self.ly
            .fnq(pred, iy)
            .expect("Y suffix")
            .and_then(|p| self.lb.select(true, p))
    }

    /// Largest static entry `q <= i` of L equal to `c`.
    fn x_fpq(&self, c: Symbol, i: usize) -> Option<usize> {
        let ix = self.lb.zeros_before(i);
        self.lx
            .fpq_eq(c as u64, ix)
            .expect("X prefix")
            .and_then(|p| self.lb.select(false, p))
    }

    /// Smallest static entry `q >= i` of L equal to `c`.
    fn x_fnq(&self, c: Symbol, i: usize) -> Option<usize> {
        let ix = self.lb.zeros_before(i - 1) + 1;
        self.lx
            .fnq_eq(c as u64, ix)
            .expect("X suffix")
            .and_then(|p| self.lb.select(false, p))
    }

    /// Parameter entries in `L[l..r]` whose rank exceeds `e`.
    pub(crate) fn count_greater(&self, l: usize, r: usize, e: usize) -> usize {
        if l > r {
            return 0;
        }
        let (a, b) = (self.lb.ones_before(l - 1) + 1, self.lb.ones_before(r));
        self.ly.range_count_greater(a, b, e as u64).expect("Y range")
    }

    /// Smallest `q >= i` with `L[q] = v`.
    pub(crate) fn l_fnq(&self, v: FceVal, i: usize) -> Option<usize> {
        match v {
            FceVal::Static(c) => self.x_fnq(c, i),
            FceVal::PRank(r) => self.y_fnq(Pred::Eq(r as u64), i),
        }
    }

    /// Largest `q <= i` with `L[q] = v`.
    pub(crate) fn l_fpq(&self, v: FceVal, i: usize) -> Option<usize> {
        match v {
            FceVal::Static(c) => self.x_fpq(c, i),
            FceVal::PRank(r) => self.y_fpq(Pred::Eq(r as u64), i),
        }
    }

    /// Smallest parameter entry `q >= i` with rank at least `e`.
    pub(crate) fn l_fnq_ge(&self, e: usize, i: usize) -> Option<usize> {
        self.y_fnq(Pred::Ge(e as u64), i)
    }

    pub fn lf(&self, i: usize) -> Result<usize> {
        self.check_rank(i)?;
        Ok(self.lf_get(i))
    }

    pub fn fl(&self, i: usize) -> Result<usize> {
        self.check_rank(i)?;
        Ok(self.fl_get(i))
    }

    pub(crate) fn lf_get(&self, i: usize) -> usize {
        let v = self.l_get(i);
        self.f
            .select(self.encode(v), self.l_rank(v, i))
            .expect("F is a permutation of L")
    }

    pub(crate) fn fl_get(&self, i: usize) -> usize {
        let v = self.f_get(i);
        let j = self.f.count_in(self.encode(v), 0, i);
        self.l_select(v, j).expect("F is a permutation of L")
    }

    /// Maximal interval around rank `i` whose suffixes share at least `e`
    /// infinities of common prefix with the rank-`i` suffix.
    pub fn get_mi(&self, i: usize, e: usize) -> Result<Interval> {
        self.check_rank(i)?;
        Ok(self.mi(i, e))
    }

    pub(crate) fn mi(&self, i: usize, e: usize) -> Interval {
        if e == 0 {
            return Interval::new(1, self.n);
        }
        let t = Pred::Lt(e as u64);
        let l = self.lcp.fpq(t, i).expect("rank in range").unwrap_or(1);
        let r = self
            .lcp
            .fnq(t, i + 1)
            .expect("rank in range")
            .map_or(self.n, |q| q - 1);
        Interval::new(l, r)
    }

    /// fce of `cT` for a parameter `c`.
    pub fn fce_of_prepended(&self, c: Symbol) -> Result<FceVal> {
        if self.cfg.kind(c)? != SymbolKind::Param {
            return Err(Error::InvalidInput(format!("symbol {c} is not a parameter")));
        }
        Ok(FceVal::PRank(self.z.select(c as u64, 1).unwrap_or(self.z.len() + 1)))
    }

    /// Rank `cT` takes among the suffixes of `cT`, for a static `c`.
    pub fn khat_static(&self, c: Symbol) -> Result<usize> {
        if self.cfg.kind(c)? != SymbolKind::Static {
            return Err(Error::InvalidInput(format!("symbol {c} is not static")));
        }
        if c == self.cfg.sentinel() {
            return Err(Error::SentinelSymbol(c));
        }
        if let Some(p) = self.x_fpq(c, self.k) {
            return Ok(1 + self.lf_get(p));
        }
        let b = *self.sset.range(..c).next_back().expect("the sentinel is always present") as u64;
        let last = self.f.count_in(b, 0, self.n);
        Ok(1 + self.f.select(b, last).expect("b occurs in F"))
    }

    /// Rank `cT` takes among the suffixes of `cT`, for a parameter `c` with
    /// `fce(cT) = fce_hat`. Counts loop iterations into `iter_count`.
    pub fn khat_param(&mut self, fce_hat: FceVal) -> Result<usize> {
        let f = fce_hat
            .prank()
            .ok_or_else(|| Error::InvalidInput("fce of a parameter prepend must be a rank".into()))?;
        if self.z.is_empty() {
            return Ok(self.n + 1);
        }
        let next = if self.k < self.n { self.lcp_get(self.k + 1) } else { 0 };
        let start = f.min(self.lcp_get(self.k).max(next));
        for e in (1..=start).rev() {
            self.iter_count += 1;
            let iv = self.mi(self.k, e);
            let found = if e == f { self.at_fce(e, iv) } else { self.below_fce(e, iv) };
            if let Some(kh) = found {
                return Ok(kh);
            }
        }
        self.iter_count += 1;
        self.below_fce(0, Interval::new(1, self.n))
            .ok_or_else(|| Error::Internal("no neighbour found for a parameter prepend".into()))
    }

    fn at_fce(&self, e: usize, iv: Interval) -> Option<usize> {
        let eq = Pred::Eq(e as u64);
        if let Some(q) = self.y_fpq(eq, self.k).filter(|&q| iv.contains(q)) {
            return Some(1 + self.lf_get(q));
        }
        if let Some(q) = self.y_fnq(eq, self.k).filter(|&q| iv.contains(q)) {
            return Some(self.lf_get(q));
        }
        if let Some(q) = self.y_fnq(Pred::Ge(e as u64 + 1), iv.l).filter(|&q| iv.contains(q)) {
            return Some(self.mi(self.lf_get(q), e + 1).l);
        }
        None
    }

    fn below_fce(&self, e: usize, iv: Interval) -> Option<usize> {
        let above = Pred::Ge(e as u64 + 1);
        if let Some(q) = self.y_fpq(above, self.k).filter(|&q| iv.contains(q)) {
            let inner = self.mi(q, e + 1);
            let q2 = self.y_fpq(Pred::Ge(e as u64 + 2), inner.r);
            return Some(match q2.filter(|&q2| inner.contains(q2)) {
                Some(q2) => 1 + self.mi(self.lf_get(q2), e + 2).r,
                None => 1 + self.lf_get(q),
            });
        }
        if let Some(q) = self.y_fnq(above, self.k).filter(|&q| iv.contains(q)) {
            let inner = self.mi(q, e + 1);
            let q2 = self.y_fnq(Pred::Eq(e as u64 + 1), inner.l);
            return Some(match q2.filter(|&q2| inner.contains(q2)) {
                Some(q2) => self.lf_get(q2),
                None => self.mi(self.lf_get(q), e + 2).l,
            });
        }
        self.y_fpq(Pred::Eq(e as u64), iv.r)
            .filter(|&q| iv.contains(q))
            .map(|q| 1 + self.lf_get(q))
    }

    /// lcp∞ of the new suffix with the current rank-`q` suffix.
    fn lcp_with_new(&self, q: usize, fce_hat: FceVal) -> usize {
        if q == 1 {
            return 0;
        }
        let fq = self.fl_get(q);
        let (a, b) = (self.k.min(fq), self.k.max(fq));
        let e = self.lcp.range_min(a + 1, b).expect("ranks in range") as usize;
        let fy = self.f_get(q);
        let res = if self.k < fq {
            extended_pair(fce_hat, fy, e)
        } else {
            extended_pair(fy, fce_hat, e)
        };
        res.lcpinf
    }

    /// Extends the text on the left by `c`.
    pub fn prepend(&mut self, c: Symbol) -> Result<()> {
        let kind = self.cfg.kind(c)?;
        if c == self.cfg.sentinel() {
            return Err(Error::SentinelSymbol(c));
        }
        if self.n + 1 > self.capacity {
            return Err(Error::CapacityExceeded(self.capacity));
        }
        let (fce_hat, kh) = match kind {
            SymbolKind::Static => (FceVal::Static(c), self.khat_static(c)?),
            SymbolKind::Param => {
                let v = self.fce_of_prepended(c)?;
                (v, self.khat_param(v)?)
            }
        };
        let pred = self.lcp_with_new(kh - 1, fce_hat);
        let succ = (kh <= self.n).then(|| self.lcp_with_new(kh, fce_hat));

        self.l_delete(self.k)?;
        self.l_insert(self.k, fce_hat)?;
        self.l_insert(kh, FceVal::Static(self.cfg.sentinel()))?;
        self.f.insert(kh, self.encode(fce_hat))?;
        if let Some(v) = succ {
            self.lcp.set(kh, v as u64)?;
        }
        self.lcp.insert(kh, pred as u64)?;
        match kind {
            SymbolKind::Param => {
                if let Some(p) = self.z.select(c as u64, 1) {
                    self.z.delete(p)?;
                }
                self.z.insert(1, c as u64)?;
            }
            SymbolKind::Static => {
                self.sset.insert(c);
            }
        }
        self.locator.note_prepend(kh, self.n + 1)?;
        self.k = kh;
        self.n += 1;
        Ok(())
    }

    /// Checks the structural invariants that hold for every reachable state.
    pub fn check_invariants(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Internal(m.to_string()));
        let n = self.n;
        if self.f.len() != n || self.lb.len() != n || self.lcp.len() != n {
            return bad("array lengths differ from n");
        }
        if self.lx.len() + self.ly.len() != n || self.ly.len() != self.lb.count_ones() {
            return bad("split L is inconsistent");
        }
        if self.l_get(self.k) != FceVal::Static(self.cfg.sentinel()) {
            return bad("L[k] is not the sentinel");
        }
        if self.lcp_get(1) != 0 {
            return bad("LCP[1] is not 0");
        }
        let mut fs = self.f_array();
        let mut ls = self.l_array();
        fs.sort();
        ls.sort();
        if fs != ls {
            return bad("F is not a permutation of L");
        }
        let mut seen = vec![false; n + 1];
        for i in 1..=n {
            let j = self.lf_get(i);
            if seen[j] || self.fl_get(j) != i {
                return bad("LF is not a bijection inverted by FL");
            }
            seen[j] = true;
        }
        Ok(())
    }
}
