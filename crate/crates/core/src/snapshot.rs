//! Binary snapshots of a [`Pbwt`].
//!
//! Every field is a little-endian `u64`. Layout:
//!
//! ```text
//! magic "PPBWTSNP"  version
//! sigma  n  k  sample_rate  capacity  iter_count  sentinel
//! statics[]  params[]  F[]  L[]  LCP[]  Z[]  SSet[]  sample_bits[]  V[]
//! ```
//!
//! Each `name[]` is a length followed by that many values. F and L hold the
//! integer coding of their entries (static code `c` as `c`, parameter rank
//! `r` as `sigma + r`), and the sample bits are stored one per word.

use std::collections::BTreeSet;
use std::io::{Read, Write};

use crate::dynseq::{DynBits, DynSeq};
use crate::dynwm::DynWaveletMatrix;
use crate::error::{Error, Result};
use crate::pbwt::{rank_cap, Pbwt};
use crate::pcore::{AlphabetConfig, FceVal, Symbol, SymbolKind};
use crate::search::Locator;

const MAGIC: u64 = u64::from_le_bytes(*b"PPBWTSNP");
const VERSION: u64 = 1;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSnapshot(msg.into())
}

struct Cursor<'a> {
    buf: &'a [u8],
}

impl Cursor<'_> {
    fn word(&mut self) -> Result<u64> {
        if self.buf.len() < 8 {
            return Err(invalid("truncated"));
        }
        let (head, rest) = self.buf.split_at(8);
        self.buf = rest;
        Ok(u64::from_le_bytes(head.try_into().expect("8 bytes")))
    }

    fn usize(&mut self) -> Result<usize> {
        usize::try_from(self.word()?).map_err(|_| invalid("value does not fit in usize"))
    }

    fn array(&mut self) -> Result<Vec<u64>> {
        let len = self.usize()?;
        if len > self.buf.len() / 8 {
            return Err(invalid("array length exceeds the remaining data"));
        }
        (0..len).map(|_| self.word()).collect()
    }
}

fn put(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_array(out: &mut Vec<u8>, vs: impl ExactSizeIterator<Item = u64>) {
    put(out, vs.len() as u64);
    for v in vs {
        put(out, v);
    }
}

impl Pbwt {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for v in [
            MAGIC,
            VERSION,
            self.sigma,
            self.n as u64,
            self.k as u64,
            self.locator.rate as u64,
            self.capacity as u64,
            self.iter_count,
            self.cfg.sentinel() as u64,
        ] {
            put(&mut out, v);
        }
        let statics: Vec<u64> = self.cfg.statics().map(u64::from).collect();
        let params: Vec<u64> = self.cfg.params().map(u64::from).collect();
        put_array(&mut out, statics.into_iter());
        put_array(&mut out, params.into_iter());
        put_array(&mut out, self.f.to_vec().into_iter());
        let l: Vec<u64> = self.l_array().into_iter().map(|v| self.encode(v)).collect();
        put_array(&mut out, l.into_iter());
        put_array(&mut out, self.lcp.to_vec().into_iter());
        put_array(&mut out, self.z.to_vec().into_iter());
        put_array(&mut out, self.sset.iter().map(|&c| c as u64).collect::<Vec<_>>().into_iter());
        put_array(&mut out, self.locator.bits.iter().map(u64::from).collect::<Vec<_>>().into_iter());
        put_array(&mut out, self.locator.values.to_vec().into_iter());
        out
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        Self::from_bytes(&buf)
    }

    /// Parses a snapshot and checks that it describes a reachable state.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut c = Cursor { buf: bytes };
        if c.word()? != MAGIC {
            return Err(invalid("bad magic"));
        }
        let version = c.word()?;
        if version != VERSION {
            return Err(invalid(format!("unsupported version {version}")));
        }
        let sigma = c.word()?;
        let n = c.usize()?;
        let k = c.usize()?;
        let rate = c.usize()?;
        let capacity = c.usize()?;
        let iter_count = c.word()?;
        let sentinel = code(c.word()?)?;
        let statics = c.array()?;
        let params = c.array()?;
        let cfg = AlphabetConfig::new(
            sentinel,
            statics.iter().map(|&v| code(v)).collect::<Result<Vec<_>>>()?,
            params.iter().map(|&v| code(v)).collect::<Result<Vec<_>>>()?,
        )
        .map_err(|e| invalid(format!("alphabet: {e}")))?;
        if cfg.sigma_max() as u64 != sigma {
            return Err(invalid("sigma does not match the alphabet"));
        }
        if n == 0 || n > capacity || k == 0 || k > n || rate == 0 {
            return Err(invalid("header values out of range"));
        }
        let pmax = rank_cap(&cfg, capacity);
        let f = c.array()?;
        let l = c.array()?;
        let lcp = c.array()?;
        let z = c.array()?;
        let sset = c.array()?;
        let bits = c.array()?;
        let values = c.array()?;
        if !c.buf.is_empty() {
            return Err(invalid("trailing data"));
        }
        if f.len() != n || l.len() != n || lcp.len() != n || bits.len() != n {
            return Err(invalid("array lengths differ from n"));
        }
        let entry = |x: u64| -> Result<FceVal> {
            if x > sigma {
                let r = x - sigma;
                if r > pmax {
                    return Err(invalid("parameter rank out of range"));
                }
                Ok(FceVal::PRank(r as usize))
            } else if cfg.kind_of(x as Symbol) == Some(SymbolKind::Static) {
                Ok(FceVal::Static(x as Symbol))
            } else {
                Err(invalid(format!("F/L entry {x} is not a static code")))
            }
        };
        let fv: Vec<FceVal> = f.iter().map(|&x| entry(x)).collect::<Result<_>>()?;
        let lv: Vec<FceVal> = l.iter().map(|&x| entry(x)).collect::<Result<_>>()?;
        if lcp.iter().any(|&v| v > pmax) {
            return Err(invalid("LCP value out of range"));
        }
        let mut zset = BTreeSet::new();
        for &p in &z {
            if cfg.kind_of(code(p)?) != Some(SymbolKind::Param) || !zset.insert(p) {
                return Err(invalid("Z must list distinct parameter codes"));
            }
        }
        let mut sset_v = BTreeSet::new();
        for &s in &sset {
            if cfg.kind_of(code(s)?) != Some(SymbolKind::Static) || !sset_v.insert(s as Symbol) {
                return Err(invalid("SSet must list distinct static codes"));
            }
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(invalid("sample bits must be 0 or 1"));
        }
        let ones = bits.iter().filter(|&&b| b == 1).count();
        if values.len() != ones || values.iter().any(|&v| v as usize > n) {
            return Err(invalid("sample values do not match the sample bits"));
        }

        let mut lx = DynSeq::new(sigma);
        let mut ly = DynWaveletMatrix::new(pmax);
        let mut lb = DynBits::new();
        for v in &lv {
            match *v {
                FceVal::Static(s) => {
                    lx.push(s as u64)?;
                    lb.push(false);
                }
                FceVal::PRank(r) => {
                    ly.push(r as u64)?;
                    lb.push(true);
                }
            }
        }
        let mut locator = Locator::new(rate, capacity);
        locator.bits = DynBits::from_bits(bits.iter().map(|&b| b == 1));
        locator.values = DynSeq::from_values(capacity as u64, values.iter().copied())
            .map_err(|_| invalid("sample value out of range"))?;
        let idx = Pbwt {
            sigma,
            f: DynSeq::from_values(sigma + pmax, f.iter().copied())?,
            lb,
            lx,
            ly,
            lcp: DynWaveletMatrix::from_values(pmax, lcp.iter().copied())?,
            z: DynSeq::from_values(sigma, z.iter().copied())?,
            sset: sset_v,
            k,
            n,
            iter_count,
            locator,
            capacity,
            cfg,
        };
        if fv.first() != Some(&FceVal::Static(sentinel)) {
            return Err(invalid("F[1] is not the sentinel"));
        }
        idx.check_invariants().map_err(|e| invalid(e.to_string()))?;
        let text = idx.recover_text()?;
        let mut again = Pbwt::with_sample_rate(idx.cfg.clone(), capacity, rate)?;
        for &c in text.iter().rev() {
            again.prepend(c)?;
        }
        if again.to_bytes() != bytes {
            return Err(invalid("contents differ from a rebuild of the recovered text"));
        }
        Ok(idx)
    }

    /// Recovers the text from an LF walk, with parameters named so that
    /// their leftmost-occurrence order is `Z`. Fails unless the walk is a
    /// single cycle from rank 1 to `k` and F describes a valid p-string.
    pub(crate) fn recover_text(&self) -> Result<Vec<Symbol>> {
        let zs = self.leftmost_params();
        let mut text = Vec::with_capacity(self.n - 1);
        // placeholders for parameters, leftmost occurrence first
        let mut order: Vec<usize> = Vec::new();
        let mut j = 1;
        for len in 1..=self.n {
            if (len == self.n) != (j == self.k) {
                return Err(invalid("LF walk does not end at k"));
            }
            if len > 1 {
                match self.f_at(j)? {
                    FceVal::Static(c) if c == self.cfg.sentinel() => {
                        return Err(invalid("sentinel inside the text"));
                    }
                    FceVal::Static(c) => text.push(Err(c)),
                    FceVal::PRank(r) if r <= order.len() => {
                        let p = order.remove(r - 1);
                        order.insert(0, p);
                        text.push(Ok(p));
                    }
                    FceVal::PRank(r) if r == order.len() + 1 => {
                        order.insert(0, order.len());
                        text.push(Ok(order[0]));
                    }
                    FceVal::PRank(_) => return Err(invalid("F rank exceeds the distinct parameters")),
                }
            }
            j = self.lf_get(j);
        }
        if j != 1 {
            return Err(invalid("LF walk is not a single cycle"));
        }
        if order.len() != zs.len() {
            return Err(invalid("Z disagrees with F"));
        }
        let mut name = vec![0; order.len()];
        for (slot, &p) in order.iter().enumerate() {
            name[p] = zs[slot];
        }
        Ok(text
            .into_iter()
            .rev()
            .map(|s| match s {
                Ok(p) => name[p],
                Err(c) => c,
            })
            .collect())
    }

}

fn code(v: u64) -> Result<Symbol> {
    Symbol::try_from(v).map_err(|_| invalid("symbol code out of range"))
}
