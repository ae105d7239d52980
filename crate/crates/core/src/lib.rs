//! Online-constructible index for parameterized pattern matching.
//!
//! A [`Pbwt`] grows by prepending symbols and answers count and locate
//! queries at every stage.

pub mod dynseq;
pub mod dynwm;
pub mod error;
pub mod oracle;
pub mod pbwt;
pub mod pcore;
pub mod search;
pub mod snapshot;

pub use error::{Error, Result};
pub use pbwt::{Interval, Pbwt, DEFAULT_SAMPLE_RATE};
pub use pcore::{AlphabetConfig, FceVal, PEncSym, Symbol, SymbolKind};
pub use search::{bws_step, pattern_profile, Locator, PatternProfile};
