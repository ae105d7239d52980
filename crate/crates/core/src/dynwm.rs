//! Dynamic wavelet matrix: a [`DynSeq`] plus range-minimum, find
//! previous/next under a value predicate, and range counting.
//!
//! Every query walks the bit levels once downwards along the query value's
//! path and once upwards, so each costs `O(levels)` bit-vector operations.
//! For a threshold predicate the lower walk records, per level, the
//! best position among the elements that branch away from the query value on
//! the satisfying side; the upper walk lifts the best candidate level by level
//! and merges it with the recorded ones. All candidates compared on a level lie
//! in the same wavelet node, whose order is the original sequence order.

use crate::dynseq::DynSeq;
use crate::error::{Error, Result};

/// Value predicate for [`DynWaveletMatrix::fpq`] and [`DynWaveletMatrix::fnq`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pred {
    Eq(u64),
    Lt(u64),
    Ge(u64),
}

impl Pred {
    pub fn holds(self, v: u64) -> bool {
        match self {
            Pred::Eq(c) => v == c,
            Pred::Lt(c) => v < c,
            Pred::Ge(c) => v >= c,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DynWaveletMatrix {
    seq: DynSeq,
}

impl DynWaveletMatrix {
    pub fn new(cap: u64) -> Self {
        DynWaveletMatrix { seq: DynSeq::new(cap) }
    }

    pub fn from_values(cap: u64, values: impl IntoIterator<Item = u64>) -> Result<Self> {
        Ok(DynWaveletMatrix { seq: DynSeq::from_values(cap, values)? })
    }

    pub fn cap(&self) -> u64 {
        self.seq.cap()
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn levels(&self) -> usize {
        self.seq.width()
    }

    pub fn heap_bytes(&self) -> usize {
        self.seq.heap_bytes()
    }

    pub fn access(&self, i: usize) -> Result<u64> {
        self.seq.access(i)
    }

    pub fn insert(&mut self, i: usize, c: u64) -> Result<()> {
        self.seq.insert(i, c)
    }

    pub fn push(&mut self, c: u64) -> Result<()> {
        self.seq.push(c)
    }

    pub fn delete(&mut self, i: usize) -> Result<u64> {
        self.seq.delete(i)
    }

    pub fn set(&mut self, i: usize, c: u64) -> Result<u64> {
        self.seq.set(i, c)
    }

    pub fn rank(&self, c: u64, i: usize) -> Result<usize> {
        self.seq.rank(c, i)
    }

    pub fn select(&self, c: u64, j: usize) -> Option<usize> {
        self.seq.select(c, j)
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.seq.to_vec()
    }

    fn check_range(&self, i: usize, j: usize) -> Result<()> {
        if i == 0 || i > j || j > self.len() {
            Err(Error::OutOfRange { index: if i == 0 { i } else { j }, len: self.len() })
        } else {
            Ok(())
        }
    }

    /// Leftmost position of the minimum of `s[i..j]`.
    pub fn rmq(&self, i: usize, j: usize) -> Result<usize> {
        let v = self.range_min(i, j)?;
        Ok(self
            .seq
            .fnq_eq(v, i)?
            .expect("the minimum occurs in its own range"))
    }

    /// Minimum value of `s[i..j]`.
    pub fn range_min(&self, i: usize, j: usize) -> Result<u64> {
        self.check_range(i, j)?;
        let seq = &self.seq;
        let (mut s, mut e) = (i - 1, j);
        let mut v = 0u64;
        for (lvl, bits) in seq.levels.iter().enumerate() {
            let (zs, ze) = (bits.zeros_before(s), bits.zeros_before(e));
            if ze > zs {
                v <<= 1;
                s = zs;
                e = ze;
            } else {
                v = (v << 1) | 1;
                s = seq.zeros[lvl] + (s - zs);
                e = seq.zeros[lvl] + (e - ze);
            }
        }
        Ok(v)
    }

    /// Largest `j <= i` whose value satisfies `pred`. `i = 0` yields `None`.
    pub fn fpq(&self, pred: Pred, i: usize) -> Result<Option<usize>> {
        if i > self.len() {
            return Err(Error::OutOfRange { index: i, len: self.len() });
        }
        Ok(match pred {
            Pred::Eq(c) => self.seq.fpq_eq(c, i)?,
            Pred::Lt(c) => self.threshold_extreme(c, false, 0, i, true),
            Pred::Ge(c) => self.threshold_extreme(c, true, 0, i, true),
        })
    }

    /// Smallest `j >= i` whose value satisfies `pred`. `i = len + 1` yields
    /// `None`.
    pub fn fnq(&self, pred: Pred, i: usize) -> Result<Option<usize>> {
        if i == 0 || i > self.len() + 1 {
            return Err(Error::OutOfRange { index: i, len: self.len() });
        }
        Ok(match pred {
            Pred::Eq(c) => self.seq.fnq_eq(c, i)?,
            Pred::Lt(c) => self.threshold_extreme(c, false, i - 1, self.len(), false),
            Pred::Ge(c) => self.threshold_extreme(c, true, i - 1, self.len(), false),
        })
    }

    /// Number of positions `p` in `[l..r]` with `s[p] > v`; empty when `l > r`.
    pub fn range_count_greater(&self, l: usize, r: usize, v: u64) -> Result<usize> {
        if l > r {
            return Ok(0);
        }
        self.check_range(l, r)?;
        let at_most = match v.checked_add(1) {
            Some(t) => self.count_less(l - 1, r, t),
            None => r - l + 1,
        };
        Ok(r - l + 1 - at_most)
    }

    /// Elements `< c` in the 0-based range `[s, e)`.
    fn count_less(&self, mut s: usize, mut e: usize, c: u64) -> usize {
        let seq = &self.seq;
        if c > seq.max_repr() {
            return e - s;
        }
        let mut acc = 0;
        for (lvl, bits) in seq.levels.iter().enumerate() {
            if e <= s {
                break;
            }
            let (zs, ze) = (bits.zeros_before(s), bits.zeros_before(e));
            if seq.bit_at(c, lvl) {
                acc += ze - zs;
                s = seq.zeros[lvl] + (s - zs);
                e = seq.zeros[lvl] + (e - ze);
            } else {
                s = zs;
                e = ze;
            }
        }
        acc
    }

    /// Last (or first) 0-based position in `[s, e)` whose value is `>= c`
    /// (`ge`) or `< c` (`!ge`), as a 1-based position.
    fn threshold_extreme(&self, c: u64, ge: bool, s: usize, e: usize, last: bool) -> Option<usize> {
        if s >= e {
            return None;
        }
        let edge = |s: usize, e: usize| if last { e - 1 } else { s };
        let seq = &self.seq;
        let everything = if ge { c == 0 } else { c > seq.max_repr() };
        let nothing = if ge { c > seq.max_repr() } else { c == 0 };
        if everything {
            return Some(edge(s, e) + 1);
        }
        if nothing {
            return None;
        }
        let width = seq.width();
        let mut cands = [None::<usize>; 64];
        let (mut s, mut e) = (s, e);
        let mut depth = width;
        #[allow(clippy::needless_range_loop)]
        for lvl in 0..width {
            let bits = &seq.levels[lvl];
            let b = seq.bit_at(c, lvl);
            let (zs, ze) = (bits.zeros_before(s), bits.zeros_before(e));
            let (os, oe) = (s - zs, e - ze);
            // elements leaving c's path on the satisfying side
            if b != ge {
                let (cs, ce) = if ge { (os, oe) } else { (zs, ze) };
                if ce > cs {
                    cands[lvl] = Some(bits.nth(ge, if last { ce - 1 } else { cs }));
                }
            }
            if b {
                s = seq.zeros[lvl] + os;
                e = seq.zeros[lvl] + oe;
            } else {
                s = zs;
                e = ze;
            }
            if s >= e {
                depth = lvl + 1;
                break;
            }
        }
        // elements equal to c satisfy `>= c`
        let mut best = if ge && depth == width && e > s { Some(edge(s, e)) } else { None };
        for lvl in (0..depth).rev() {
            best = best.map(|p| seq.lift_one(c, p, lvl));
            best = match (best, cands[lvl]) {
                (Some(a), Some(b)) => Some(if last { a.max(b) } else { a.min(b) }),
                (a, b) => a.or(b),
            };
        }
        best.map(|p| p + 1)
    }
}
