//! Dynamic sequences with random access, insertion, deletion, rank and
//! select.
//!
//! [`DynBits`] is a treap whose nodes are fixed-capacity bit blocks, with
//! per-subtree length and popcount. [`DynSeq`] stores integer codes as a
//! stack of `DynBits` levels, one per bit of the code (most significant bit
//! first), rearranged level by level the way a wavelet matrix is. Both cost
//! `O(log n)` per bit level and operation.
//!
//! Public positions are 1-based, matching the rest of the crate: `access(i)`
//! needs `1 <= i <= len`, `rank(c, i)` counts over `[1..i]` with `rank(c, 0) =
//! 0`, and `select(c, j)` returns the position of the `j`-th occurrence.

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};

const WORDS: usize = 8;
const BLOCK_BITS: usize = WORDS * 64;
const NIL: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Block {
    words: [u64; WORDS],
    len: u16,
}

impl Block {
    fn empty() -> Self {
        Block { words: [0; WORDS], len: 0 }
    }

    fn ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Ones in `[0, i)`.
    fn rank1(&self, i: usize) -> usize {
        let full: usize = self.words[..i / 64].iter().map(|w| w.count_ones() as usize).sum();
        let rem = i % 64;
        if rem == 0 {
            full
        } else {
            full + (self.words[i / 64] & ((1u64 << rem) - 1)).count_ones() as usize
        }
    }

    /// Position of the `k`-th (0-based) bit equal to `bit`.
    fn select(&self, bit: bool, mut k: usize) -> usize {
        for (wi, &raw) in self.words.iter().enumerate() {
            let mut w = if bit { raw } else { !raw };
            if wi == (self.len as usize) / 64 {
                let rem = self.len as usize % 64;
                w &= if rem == 0 { 0 } else { (1u64 << rem) - 1 };
            } else if wi > (self.len as usize) / 64 {
                break;
            }
            let c = w.count_ones() as usize;
            if k < c {
                for _ in 0..k {
                    w &= w - 1;
                }
                return wi * 64 + w.trailing_zeros() as usize;
            }
            k -= c;
        }
        unreachable!("select past the end of a block")
    }

    fn insert(&mut self, i: usize, bit: bool) {
        debug_assert!((self.len as usize) < BLOCK_BITS && i <= self.len as usize);
        let wi = i / 64;
        let last = (self.len as usize) / 64;
        for k in (wi + 1..=last.min(WORDS - 1)).rev() {
            self.words[k] = (self.words[k] << 1) | (self.words[k - 1] >> 63);
        }
        let off = i % 64;
        let w = self.words[wi];
        let low_mask = if off == 0 { 0 } else { (1u64 << off) - 1 };
        let low = w & low_mask;
        let high = (w & !low_mask) << 1;
        self.words[wi] = low | high | ((bit as u64) << off);
        self.len += 1;
    }

    fn remove(&mut self, i: usize) -> bool {
        debug_assert!(i < self.len as usize);
        let bit = self.get(i);
        let wi = i / 64;
        let off = i % 64;
        let w = self.words[wi];
        let low_mask = if off == 0 { 0 } else { (1u64 << off) - 1 };
        let low = w & low_mask;
        let high = (w >> 1) & !low_mask;
        self.words[wi] = low | high;
        let last = (self.len as usize - 1) / 64;
        for k in wi..last {
            self.words[k] |= self.words[k + 1] << 63;
            self.words[k + 1] >>= 1;
        }
        self.len -= 1;
        bit
    }

    /// Moves the upper half into a new block.
    fn split_off(&mut self) -> Block {
        let keep = self.len as usize / 2;
        let mut upper = Block::empty();
        for i in keep..self.len as usize {
            let b = self.get(i);
            upper.insert(upper.len as usize, b);
        }
        for i in keep..BLOCK_BITS {
            self.words[i / 64] &= !(1u64 << (i % 64));
        }
        self.len = keep as u16;
        upper
    }
}

#[derive(Clone, Debug)]
struct Node {
    left: u32,
    right: u32,
    prio: u32,
    block: Block,
    sub_len: usize,
    sub_ones: usize,
}

/// Dynamic bit vector.
#[derive(Clone, Debug)]
pub struct DynBits {
    nodes: Vec<Node>,
    free: Vec<u32>,
    root: u32,
    rng: SmallRng,
}

impl Default for DynBits {
    fn default() -> Self {
        Self::new()
    }
}

impl DynBits {
    pub fn new() -> Self {
        DynBits {
            nodes: Vec::new(),
            free: Vec::new(),
            root: NIL,
            rng: SmallRng::seed_from_u64(0x5eed_b175),
        }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut out = Self::new();
        for b in bits {
            out.push(b);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.sub_len(self.root)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn count_ones(&self) -> usize {
        self.sub_ones(self.root)
    }

    pub fn count_zeros(&self) -> usize {
        self.len() - self.count_ones()
    }

    /// Approximate heap footprint in bytes.
    pub fn heap_bytes(&self) -> usize {
        self.nodes.capacity() * std::mem::size_of::<Node>()
            + self.free.capacity() * std::mem::size_of::<u32>()
    }

    pub fn access(&self, i: usize) -> Result<bool> {
        self.check(i, self.len())?;
        Ok(self.get_at(i - 1))
    }

    pub fn insert(&mut self, i: usize, bit: bool) -> Result<()> {
        self.check(i, self.len() + 1)?;
        self.insert0(i - 1, bit);
        Ok(())
    }

    pub fn delete(&mut self, i: usize) -> Result<bool> {
        self.check(i, self.len())?;
        Ok(self.remove0(i - 1))
    }

    pub fn push(&mut self, bit: bool) {
        self.insert0(self.len(), bit);
    }

    /// Occurrences of `bit` in `[1..i]`.
    pub fn rank(&self, bit: bool, i: usize) -> Result<usize> {
        if i > self.len() {
            return Err(Error::OutOfRange { index: i, len: self.len() });
        }
        let ones = self.ones_before(i);
        Ok(if bit { ones } else { i - ones })
    }

    /// Position of the `j`-th occurrence of `bit`, if any.
    pub fn select(&self, bit: bool, j: usize) -> Option<usize> {
        let total = if bit { self.count_ones() } else { self.count_zeros() };
        if j == 0 || j > total {
            return None;
        }
        Some(self.nth(bit, j - 1) + 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        let mut out = Vec::with_capacity(self.len());
        self.collect_into(self.root, &mut out);
        out.into_iter()
    }

    fn collect_into(&self, t: u32, out: &mut Vec<bool>) {
        if t == NIL {
            return;
        }
        let node = &self.nodes[t as usize];
        self.collect_into(node.left, out);
        out.extend((0..node.block.len as usize).map(|i| node.block.get(i)));
        self.collect_into(node.right, out);
    }

    fn check(&self, i: usize, hi: usize) -> Result<()> {
        if i == 0 || i > hi {
            Err(Error::OutOfRange { index: i, len: self.len() })
        } else {
            Ok(())
        }
    }

    fn sub_len(&self, t: u32) -> usize {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].sub_len
        }
    }

    fn sub_ones(&self, t: u32) -> usize {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].sub_ones
        }
    }

    fn pull(&mut self, t: u32) {
        let (l, r) = {
            let n = &self.nodes[t as usize];
            (n.left, n.right)
        };
        let len = self.sub_len(l) + self.sub_len(r);
        let ones = self.sub_ones(l) + self.sub_ones(r);
        let n = &mut self.nodes[t as usize];
        n.sub_len = len + n.block.len as usize;
        n.sub_ones = ones + n.block.ones();
    }

    fn alloc(&mut self, block: Block) -> u32 {
        let prio = self.rng.gen();
        let node = Node {
            left: NIL,
            right: NIL,
            prio,
            sub_len: block.len as usize,
            sub_ones: block.ones(),
            block,
        };
        if let Some(id) = self.free.pop() {
            self.nodes[id as usize] = node;
            id
        } else {
            self.nodes.push(node);
            (self.nodes.len() - 1) as u32
        }
    }

    /// Splits `t` into the blocks covering `[0, k)` and the rest; `k` must be
    /// a block boundary.
    fn split(&mut self, t: u32, k: usize) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        let (l, r, blen) = {
            let n = &self.nodes[t as usize];
            (n.left, n.right, n.block.len as usize)
        };
        let ls = self.sub_len(l);
        if k <= ls {
            let (a, b) = self.split(l, k);
            self.nodes[t as usize].left = b;
            self.pull(t);
            (a, t)
        } else {
            let (a, b) = self.split(r, k - ls - blen);
            self.nodes[t as usize].right = a;
            self.pull(t);
            (t, b)
        }
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.nodes[a as usize].prio > self.nodes[b as usize].prio {
            let ar = self.nodes[a as usize].right;
            let m = self.merge(ar, b);
            self.nodes[a as usize].right = m;
            self.pull(a);
            a
        } else {
            let bl = self.nodes[b as usize].left;
            let m = self.merge(a, bl);
            self.nodes[b as usize].left = m;
            self.pull(b);
            b
        }
    }

    /// Node holding 0-based position `i` (or the end position when
    /// `for_insert`), its offset within the block, the path of node ids from
    /// the root, and the global start of the block.
    fn locate(&self, mut i: usize, for_insert: bool) -> (Vec<u32>, usize, usize) {
        let mut path = Vec::with_capacity(32);
        let mut t = self.root;
        let mut start = 0;
        loop {
            path.push(t);
            let n = &self.nodes[t as usize];
            let ls = self.sub_len(n.left);
            let blen = n.block.len as usize;
            if i < ls || (i == ls && for_insert && n.left != NIL && blen == BLOCK_BITS) {
                t = n.left;
            } else if i < ls + blen || (for_insert && i == ls + blen && (n.right == NIL || blen < BLOCK_BITS)) {
                return (path, i - ls, start + ls);
            } else {
                i -= ls + blen;
                start += ls + blen;
                t = n.right;
            }
        }
    }

    pub(crate) fn get_at(&self, mut i: usize) -> bool {
        let mut t = self.root;
        loop {
            let n = &self.nodes[t as usize];
            let ls = self.sub_len(n.left);
            if i < ls {
                t = n.left;
            } else if i < ls + n.block.len as usize {
                return n.block.get(i - ls);
            } else {
                i -= ls + n.block.len as usize;
                t = n.right;
            }
        }
    }

    /// Ones in `[0, i)`.
    pub(crate) fn ones_before(&self, mut i: usize) -> usize {
        let mut t = self.root;
        let mut acc = 0;
        while t != NIL && i > 0 {
            let n = &self.nodes[t as usize];
            let ls = self.sub_len(n.left);
            if i <= ls {
                t = n.left;
                continue;
            }
            acc += self.sub_ones(n.left);
            i -= ls;
            let blen = n.block.len as usize;
            if i <= blen {
                return acc + n.block.rank1(i);
            }
            acc += n.block.ones();
            i -= blen;
            t = n.right;
        }
        acc
    }

    pub(crate) fn zeros_before(&self, i: usize) -> usize {
        i - self.ones_before(i)
    }

    /// 0-based position of the 0-based `k`-th `bit`.
    pub(crate) fn nth(&self, bit: bool, mut k: usize) -> usize {
        let mut t = self.root;
        let mut pos = 0;
        loop {
            let n = &self.nodes[t as usize];
            let lcount = if bit {
                self.sub_ones(n.left)
            } else {
                self.sub_len(n.left) - self.sub_ones(n.left)
            };
            if k < lcount {
                t = n.left;
                continue;
            }
            k -= lcount;
            pos += self.sub_len(n.left);
            let ones = n.block.ones();
            let here = if bit { ones } else { n.block.len as usize - ones };
            if k < here {
                return pos + n.block.select(bit, k);
            }
            k -= here;
            pos += n.block.len as usize;
            t = n.right;
        }
    }

    pub(crate) fn insert0(&mut self, i: usize, bit: bool) {
        if self.root == NIL {
            let mut block = Block::empty();
            block.insert(0, bit);
            self.root = self.alloc(block);
            return;
        }
        let (path, off, start) = self.locate(i, true);
        let t = *path.last().unwrap();
        if self.nodes[t as usize].block.len as usize == BLOCK_BITS {
            let upper = self.nodes[t as usize].block.split_off();
            let moved_len = upper.len as usize;
            let moved_ones = upper.ones();
            for &p in &path {
                let n = &mut self.nodes[p as usize];
                n.sub_len -= moved_len;
                n.sub_ones -= moved_ones;
            }
            let boundary = start + self.nodes[t as usize].block.len as usize;
            let fresh = self.alloc(upper);
            let (a, b) = self.split(self.root, boundary);
            let ab = self.merge(a, fresh);
            self.root = self.merge(ab, b);
            self.insert0(i, bit);
            return;
        }
        self.nodes[t as usize].block.insert(off, bit);
        for &p in &path {
            let n = &mut self.nodes[p as usize];
            n.sub_len += 1;
            n.sub_ones += bit as usize;
        }
    }

    pub(crate) fn remove0(&mut self, i: usize) -> bool {
        let (path, off, _) = self.locate(i, false);
        let t = *path.last().unwrap();
        let bit = self.nodes[t as usize].block.remove(off);
        for &p in &path {
            let n = &mut self.nodes[p as usize];
            n.sub_len -= 1;
            n.sub_ones -= bit as usize;
        }
        if self.nodes[t as usize].block.len == 0 {
            let (l, r) = {
                let n = &self.nodes[t as usize];
                (n.left, n.right)
            };
            let m = self.merge(l, r);
            if path.len() == 1 {
                self.root = m;
            } else {
                let parent = path[path.len() - 2] as usize;
                if self.nodes[parent].left == t {
                    self.nodes[parent].left = m;
                } else {
                    self.nodes[parent].right = m;
                }
            }
            self.free.push(t);
        }
        bit
    }
}

/// Number of bit levels needed to store codes in `[0..cap]`.
pub(crate) fn levels_for(cap: u64) -> usize {
    (64 - cap.leading_zeros() as usize).max(1)
}

/// Dynamic sequence of integer codes in `[0..cap]`.
#[derive(Clone, Debug)]
pub struct DynSeq {
    pub(crate) levels: Vec<DynBits>,
    pub(crate) zeros: Vec<usize>,
    cap: u64,
    len: usize,
}

impl DynSeq {
    pub fn new(cap: u64) -> Self {
        let width = levels_for(cap);
        DynSeq {
            levels: (0..width).map(|_| DynBits::new()).collect(),
            zeros: vec![0; width],
            cap,
            len: 0,
        }
    }

    pub fn from_values(cap: u64, values: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut out = Self::new(cap);
        for v in values {
            out.push(v)?;
        }
        Ok(out)
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn heap_bytes(&self) -> usize {
        self.levels.iter().map(DynBits::heap_bytes).sum()
    }

    #[inline]
    pub(crate) fn width(&self) -> usize {
        self.levels.len()
    }

    #[inline]
    pub(crate) fn bit_at(&self, v: u64, level: usize) -> bool {
        (v >> (self.width() - 1 - level)) & 1 == 1
    }

    /// Largest value representable with the current number of levels.
    pub(crate) fn max_repr(&self) -> u64 {
        if self.width() >= 64 {
            u64::MAX
        } else {
            (1u64 << self.width()) - 1
        }
    }

    fn check(&self, i: usize, hi: usize) -> Result<()> {
        if i == 0 || i > hi {
            Err(Error::OutOfRange { index: i, len: self.len })
        } else {
            Ok(())
        }
    }

    pub fn access(&self, i: usize) -> Result<u64> {
        self.check(i, self.len)?;
        Ok(self.value_at(i - 1))
    }

    pub(crate) fn value_at(&self, mut p: usize) -> u64 {
        let mut v = 0u64;
        for (lvl, bits) in self.levels.iter().enumerate() {
            let b = bits.get_at(p);
            v = (v << 1) | b as u64;
            p = if b {
                self.zeros[lvl] + bits.ones_before(p)
            } else {
                bits.zeros_before(p)
            };
        }
        v
    }

    pub fn push(&mut self, c: u64) -> Result<()> {
        self.insert(self.len + 1, c)
    }

    pub fn insert(&mut self, i: usize, c: u64) -> Result<()> {
        self.check(i, self.len + 1)?;
        if c > self.cap {
            return Err(Error::ValueTooLarge { value: c, cap: self.cap });
        }
        let mut p = i - 1;
        for lvl in 0..self.width() {
            let b = self.bit_at(c, lvl);
            let bits = &mut self.levels[lvl];
            bits.insert0(p, b);
            if b {
                p = self.zeros[lvl] + bits.ones_before(p);
            } else {
                self.zeros[lvl] += 1;
                p = bits.zeros_before(p);
            }
        }
        self.len += 1;
        Ok(())
    }

    pub fn delete(&mut self, i: usize) -> Result<u64> {
        self.check(i, self.len)?;
        let mut p = i - 1;
        let mut v = 0u64;
        for lvl in 0..self.width() {
            let bits = &mut self.levels[lvl];
            let b = bits.get_at(p);
            v = (v << 1) | b as u64;
            let next = if b {
                self.zeros[lvl] + bits.ones_before(p)
            } else {
                bits.zeros_before(p)
            };
            bits.remove0(p);
            if !b {
                self.zeros[lvl] -= 1;
            }
            p = next;
        }
        self.len -= 1;
        Ok(v)
    }

    /// Replaces the value at `i`, returning the old one.
    pub fn set(&mut self, i: usize, c: u64) -> Result<u64> {
        if c > self.cap {
            return Err(Error::ValueTooLarge { value: c, cap: self.cap });
        }
        let old = self.delete(i)?;
        self.insert(i, c)?;
        Ok(old)
    }

    /// Occurrences of `c` in `[1..i]`.
    pub fn rank(&self, c: u64, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(Error::OutOfRange { index: i, len: self.len });
        }
        Ok(self.count_in(c, 0, i))
    }

    /// Occurrences of `c` in the 0-based half-open range `[s, e)`.
    pub(crate) fn count_in(&self, c: u64, mut s: usize, mut e: usize) -> usize {
        if c > self.max_repr() {
            return 0;
        }
        for (lvl, bits) in self.levels.iter().enumerate() {
            if e <= s {
                return 0;
            }
            if self.bit_at(c, lvl) {
                s = self.zeros[lvl] + bits.ones_before(s);
                e = self.zeros[lvl] + bits.ones_before(e);
            } else {
                s = bits.zeros_before(s);
                e = bits.zeros_before(e);
            }
        }
        e.saturating_sub(s)
    }

    /// Position of the `j`-th occurrence of `c`, if it exists.
    pub fn select(&self, c: u64, j: usize) -> Option<usize> {
        if j == 0 || c > self.max_repr() {
            return None;
        }
        // start of c's run at the bottom level
        let mut s = 0;
        let mut e = self.len;
        for (lvl, bits) in self.levels.iter().enumerate() {
            if self.bit_at(c, lvl) {
                s = self.zeros[lvl] + bits.ones_before(s);
                e = self.zeros[lvl] + bits.ones_before(e);
            } else {
                s = bits.zeros_before(s);
                e = bits.zeros_before(e);
            }
        }
        if s + j > e {
            return None;
        }
        Some(self.lift(c, s + j - 1, self.width()) + 1)
    }

    /// Maps a 0-based position on level `from` (the bottom is
    /// `self.width()`) of an element whose code prefix agrees with `c` back to
    /// a top-level position.
    pub(crate) fn lift(&self, c: u64, mut p: usize, from: usize) -> usize {
        for lvl in (0..from).rev() {
            p = self.lift_one(c, p, lvl);
        }
        p
    }

    /// One step of [`Self::lift`]: maps a position on level `lvl + 1` to level `lvl`.
    #[inline]
    pub(crate) fn lift_one(&self, c: u64, p: usize, lvl: usize) -> usize {
        let bits = &self.levels[lvl];
        if self.bit_at(c, lvl) {
            bits.nth(true, p - self.zeros[lvl])
        } else {
            bits.nth(false, p)
        }
    }

    /// Largest `j <= i` with `s[j] = c`.
    pub fn fpq_eq(&self, c: u64, i: usize) -> Result<Option<usize>> {
        let r = self.rank(c, i)?;
        Ok(if r == 0 { None } else { self.select(c, r) })
    }

    /// Smallest `j >= i` with `s[j] = c`; `i = len + 1` is accepted and
    /// yields `None`.
    pub fn fnq_eq(&self, c: u64, i: usize) -> Result<Option<usize>> {
        self.check(i, self.len + 1)?;
        let r = self.count_in(c, 0, i - 1);
        Ok(self.select(c, r + 1))
    }

    pub fn to_vec(&self) -> Vec<u64> {
        (0..self.len).map(|p| self.value_at(p)).collect()
    }
}
