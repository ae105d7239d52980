//! Parameterized strings: alphabet classification, the prev-∞ encoding,
//! first-character encoding (`fce`) and the order/lcp∞ case analysis for
//! left-extended pairs of strings.
//!
//! Symbols are plain `u32` codes. Whether a code is a static symbol or a
//! parameter symbol is decided by an [`AlphabetConfig`], never by the code
//! itself.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

pub type Symbol = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Static,
    Param,
}

/// Symbol classification for a text and its patterns.
///
/// A code is valid only if it is the sentinel or listed as static or
/// parameter. The sentinel is static and strictly smaller than every other
/// static code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphabetConfig {
    sentinel: Symbol,
    kinds: BTreeMap<Symbol, SymbolKind>,
}

impl AlphabetConfig {
    pub fn new(
        sentinel: Symbol,
        statics: impl IntoIterator<Item = Symbol>,
        params: impl IntoIterator<Item = Symbol>,
    ) -> Result<Self> {
        let mut kinds = BTreeMap::new();
        kinds.insert(sentinel, SymbolKind::Static);
        for c in statics {
            if c == sentinel {
                continue;
            }
            if c < sentinel {
                return Err(Error::InvalidAlphabet(format!(
                    "static code {c} is smaller than the sentinel {sentinel}"
                )));
            }
            kinds.insert(c, SymbolKind::Static);
        }
        for c in params {
            if c == sentinel {
                return Err(Error::InvalidAlphabet(format!(
                    "sentinel {sentinel} cannot be a parameter symbol"
                )));
            }
            if kinds.insert(c, SymbolKind::Param) == Some(SymbolKind::Static) {
                return Err(Error::InvalidAlphabet(format!(
                    "code {c} is listed as both static and parameter"
                )));
            }
        }
        Ok(Self { sentinel, kinds })
    }

    /// Builds a configuration from characters, using their code points.
    pub fn from_chars(sentinel: char, statics: &str, params: &str) -> Result<Self> {
        Self::new(
            sentinel as Symbol,
            statics.chars().map(|c| c as Symbol),
            params.chars().map(|c| c as Symbol),
        )
    }

    /// Inference rule used when no configuration is given: the 26 ASCII
    /// lowercase letters are parameters (whether or not they occur), every
    /// other code of `text` is static, and the sentinel is code 0 (which
    /// therefore must not occur in the text).
    pub fn infer(text: &[Symbol]) -> Result<Self> {
        if text.contains(&0) {
            return Err(Error::InvalidAlphabet(
                "code 0 is reserved for the sentinel when inferring the alphabet".into(),
            ));
        }
        let is_param = |c: &Symbol| (b'a' as Symbol..=b'z' as Symbol).contains(c);
        let statics = text.iter().copied().filter(|c| !is_param(c));
        Self::new(0, statics.collect::<Vec<_>>(), b'a' as Symbol..=b'z' as Symbol)
    }

    /// Parses the line-based configuration format:
    ///
    /// ```text
    /// # comment
    /// sentinel 0
    /// static 1 2 a b
    /// param x y z 1000
    /// ```
    ///
    /// A token made only of ASCII digits is a decimal code; any other token
    /// must be a single character and stands for its code point.
    pub fn parse(src: &str) -> Result<Self> {
        let mut sentinel = None;
        let mut statics = Vec::new();
        let mut params = Vec::new();
        for (lineno, raw) in src.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let key = tokens.next().unwrap_or_default();
            let codes = tokens
                .map(parse_symbol_token)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::InvalidAlphabet(format!("line {}: {e}", lineno + 1)))?;
            match key {
                "sentinel" => {
                    if codes.len() != 1 || sentinel.is_some() {
                        return Err(Error::InvalidAlphabet(format!(
                            "line {}: exactly one sentinel code expected",
                            lineno + 1
                        )));
                    }
                    sentinel = Some(codes[0]);
                }
                "static" => statics.extend(codes),
                "param" => params.extend(codes),
                other => {
                    return Err(Error::InvalidAlphabet(format!(
                        "line {}: unknown directive `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        let sentinel =
            sentinel.ok_or_else(|| Error::InvalidAlphabet("missing `sentinel` line".into()))?;
        Self::new(sentinel, statics, params)
    }

    pub fn sentinel(&self) -> Symbol {
        self.sentinel
    }

    /// Largest code of the alphabet.
    pub fn sigma_max(&self) -> Symbol {
        *self.kinds.keys().next_back().expect("sentinel is always present")
    }

    pub fn kind_of(&self, c: Symbol) -> Option<SymbolKind> {
        self.kinds.get(&c).copied()
    }

    pub fn kind(&self, c: Symbol) -> Result<SymbolKind> {
        self.kind_of(c).ok_or(Error::UnknownSymbol(c))
    }

    pub fn is_param(&self, c: Symbol) -> Result<bool> {
        Ok(self.kind(c)? == SymbolKind::Param)
    }

    pub fn statics(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.codes_of(SymbolKind::Static)
    }

    pub fn params(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.codes_of(SymbolKind::Param)
    }

    fn codes_of(&self, kind: SymbolKind) -> impl Iterator<Item = Symbol> + '_ {
        self.kinds
            .iter()
            .filter(move |(_, k)| **k == kind)
            .map(|(c, _)| *c)
    }
}

impl fmt::Display for AlphabetConfig {
    /// Writes the configuration in the format accepted by [`AlphabetConfig::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sentinel {}", self.sentinel)?;
        for (key, kind) in [("static", SymbolKind::Static), ("param", SymbolKind::Param)] {
            let codes: Vec<String> = self
                .codes_of(kind)
                .filter(|&c| c != self.sentinel)
                .map(|c| c.to_string())
                .collect();
            if !codes.is_empty() {
                writeln!(f, "{key} {}", codes.join(" "))?;
            }
        }
        Ok(())
    }
}

fn parse_symbol_token(tok: &str) -> Result<Symbol> {
    if tok.bytes().all(|b| b.is_ascii_digit()) {
        return tok
            .parse()
            .map_err(|_| Error::InvalidInput(format!("code `{tok}` does not fit in 32 bits")));
    }
    let mut chars = tok.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c as Symbol),
        _ => Err(Error::InvalidInput(format!(
            "`{tok}` is neither a decimal code nor a single character"
        ))),
    }
}

/// Code points of a string, one symbol per `char`.
pub fn symbols_of(s: &str) -> Vec<Symbol> {
    s.chars().map(|c| c as Symbol).collect()
}

/// One symbol of a p-encoded string.
///
/// The derived order is the one the suffix sorting relies on: static codes
/// by value, then every finite distance, then `Inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PEncSym {
    Static(Symbol),
    Dist(usize),
    Inf,
}

/// Value of `fce` and the alphabet of the F and L arrays.
///
/// Static codes sort below every parameter rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FceVal {
    Static(Symbol),
    PRank(usize),
}

impl FceVal {
    pub fn prank(self) -> Option<usize> {
        match self {
            FceVal::PRank(r) => Some(r),
            FceVal::Static(_) => None,
        }
    }
}

impl fmt::Display for FceVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FceVal::Static(c) => match char::from_u32(c) {
                Some(ch) if !ch.is_control() && !ch.is_whitespace() => write!(f, "{ch}"),
                _ => write!(f, "#{c}"),
            },
            FceVal::PRank(r) => write!(f, "{r}"),
        }
    }
}

/// lcp∞ and relative order of a left-extended pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtendedPairResult {
    pub lcpinf: usize,
    /// Set when the extended strings sort in the opposite order of their tails.
    pub flipped: bool,
}

/// Prev-∞ encoding: static symbols are kept, a parameter occurrence becomes
/// the distance to its previous occurrence, or `Inf` if there is none.
pub fn penc(w: &[Symbol], cfg: &AlphabetConfig) -> Result<Vec<PEncSym>> {
    let mut last: HashMap<Symbol, usize> = HashMap::new();
    w.iter()
        .enumerate()
        .map(|(i, &c)| {
            Ok(match cfg.kind(c)? {
                SymbolKind::Static => PEncSym::Static(c),
                SymbolKind::Param => match last.insert(c, i) {
                    Some(j) => PEncSym::Dist(i - j),
                    None => PEncSym::Inf,
                },
            })
        })
        .collect()
}

/// Number of distinct parameter symbols in `w`.
pub fn pcount(w: &[Symbol], cfg: &AlphabetConfig) -> Result<usize> {
    let mut seen = std::collections::HashSet::new();
    for &c in w {
        if cfg.is_param(c)? {
            seen.insert(c);
        }
    }
    Ok(seen.len())
}

/// First-character encoding of `w`. For a leading parameter this is its rank
/// when parameters are ordered by leftmost occurrence in `w[2..]`, where a
/// parameter absent from `w[2..]` ranks last.
pub fn fce(w: &[Symbol], cfg: &AlphabetConfig) -> Result<FceVal> {
    for &c in w {
        cfg.kind(c)?;
    }
    let Some(&first) = w.first() else {
        return Ok(FceVal::Static(cfg.sentinel()));
    };
    if !cfg.is_param(first)? {
        return Ok(FceVal::Static(first));
    }
    let end = w[1..]
        .iter()
        .position(|&c| c == first)
        .map_or(w.len(), |p| p + 2);
    Ok(FceVal::PRank(pcount(&w[..end], cfg)?))
}

/// lcp∞ and order of `⟨x⟩`, `⟨y⟩` from their first-character encodings and
/// `e = lcp∞(⟨x[2..]⟩, ⟨y[2..]⟩)`, assuming `⟨x[2..]⟩ < ⟨y[2..]⟩`.
pub fn extended_pair(fce_x: FceVal, fce_y: FceVal, e: usize) -> ExtendedPairResult {
    let (lcpinf, flipped) = match (fce_x, fce_y) {
        (FceVal::PRank(a), FceVal::PRank(b)) => {
            if a == b && a <= e {
                (e, false)
            } else if a <= e && a < b {
                (a, false)
            } else if b <= e && b < a {
                (b, true)
            } else {
                (e + 1, false)
            }
        }
        _ if fce_x == fce_y => (e, false),
        _ => (0, fce_x > fce_y),
    };
    ExtendedPairResult { lcpinf, flipped }
}

/// Parameterized match: equal length and equal p-encodings.
pub fn pmatch(x: &[Symbol], y: &[Symbol], cfg: &AlphabetConfig) -> Result<bool> {
    if x.len() != y.len() {
        return Ok(false);
    }
    Ok(penc(x, cfg)? == penc(y, cfg)?)
}
