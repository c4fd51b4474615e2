//! Tokenization that keeps IPv4 addresses, email addresses, web URLs and
//! dates intact.
//!
//! A document is scanned for the four special sequence kinds; each match is
//! either kept as a single tagged token or cut out of the text, and the rest
//! is split into word tokens. Behaviour is driven by a [`Config`], which can
//! be loaded from a small XML file (see [`config`]).
//!
//! ```
//! use seqtok::{tokenize, Config, TokenKind};
//!
//! let tokens = tokenize("mail qalhajja@kfu.edu.sa on 16/07/1982", &Config::default());
//! let kinds: Vec<TokenKind> = tokens.iter().map(|t| t.kind()).collect();
//! assert_eq!(kinds, [TokenKind::Word, TokenKind::Email, TokenKind::Word, TokenKind::Date]);
//! ```

pub mod config;
pub mod model;
pub mod rabin_karp;
pub mod recognize;
pub mod stats;
pub mod tokenizer;

pub use config::{default_config, parse_config, ConfigError};
pub use model::{Action, Config, KindCounts, KindSet, SequenceRule, Span, SpanError, StatsReport, Token, TokenKind};
pub use rabin_karp::{find_all, find_anchors, fingerprint, roll, AnchorSet, FingerprintParams, RabinKarp};
pub use recognize::{best_match, is_start_boundary, recognize_date, recognize_email, recognize_ip, recognize_url};
pub use stats::{compute_stats, render_stats, StatsBuilder, StatsFormat};
pub use tokenizer::{filter_text, filter_text_with, render_tokens, scan_special, tokenize, tokenize_with, ScanStrategy};
