//! Shared vocabulary: spans, token kinds, tokens, rules, configuration and
//! statistics reports.

use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// Half-open byte range `[start, end)` into a UTF-8 source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    start: usize,
    end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpanError {
    #[error("empty or reversed span {start}..{end}")]
    Empty { start: usize, end: usize },
    #[error("span {start}..{end} exceeds source length {len}")]
    OutOfBounds { start: usize, end: usize, len: usize },
    #[error("span {start}..{end} does not fall on character boundaries")]
    NotCharBoundary { start: usize, end: usize },
}

impl Span {
    pub fn new(start: usize, end: usize) -> Result<Self, SpanError> {
        if start >= end {
            return Err(SpanError::Empty { start, end });
        }
        Ok(Span { start, end })
    }

    /// Callers guarantee `start < end`.
    pub(crate) fn new_unchecked(start: usize, end: usize) -> Self {
        debug_assert!(start < end);
        Span { start, end }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The slice of `source` covered by this span, if it is in bounds and on
    /// character boundaries.
    pub fn slice<'a>(&self, source: &'a str) -> Result<&'a str, SpanError> {
        if self.end > source.len() {
            return Err(SpanError::OutOfBounds { start: self.start, end: self.end, len: source.len() });
        }
        source
            .get(self.start..self.end)
            .ok_or(SpanError::NotCharBoundary { start: self.start, end: self.end })
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TokenKind {
    Word,
    Ip,
    Email,
    Url,
    Date,
}

impl TokenKind {
    /// The four special kinds, in declaration order.
    pub const SPECIAL: [TokenKind; 4] = [TokenKind::Ip, TokenKind::Email, TokenKind::Url, TokenKind::Date];

    /// Special kinds ordered by tie-break priority (highest first).
    pub const PRIORITY: [TokenKind; 4] = [TokenKind::Url, TokenKind::Email, TokenKind::Ip, TokenKind::Date];

    pub fn is_special(self) -> bool {
        self != TokenKind::Word
    }

    /// Lowercase name used in configuration files and JSON output.
    pub fn name(self) -> &'static str {
        match self {
            TokenKind::Word => "word",
            TokenKind::Ip => "ip",
            TokenKind::Email => "email",
            TokenKind::Url => "url",
            TokenKind::Date => "date",
        }
    }

    /// Special kind for a configuration `type` attribute value.
    pub fn from_name(name: &str) -> Option<TokenKind> {
        match name {
            "ip" => Some(TokenKind::Ip),
            "email" => Some(TokenKind::Email),
            "url" => Some(TokenKind::Url),
            "date" => Some(TokenKind::Date),
            _ => None,
        }
    }

    fn bit(self) -> u8 {
        match self {
            TokenKind::Word => 0,
            TokenKind::Ip => 1,
            TokenKind::Email => 2,
            TokenKind::Url => 4,
            TokenKind::Date => 8,
        }
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of special token kinds. `Word` is never a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct KindSet(u8);

impl KindSet {
    pub const EMPTY: KindSet = KindSet(0);
    pub const ALL: KindSet = KindSet(0b1111);

    pub fn insert(&mut self, kind: TokenKind) {
        self.0 |= kind.bit();
    }

    pub fn with(mut self, kind: TokenKind) -> Self {
        self.insert(kind);
        self
    }

    pub fn contains(self, kind: TokenKind) -> bool {
        kind.is_special() && self.0 & kind.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: KindSet) -> KindSet {
        KindSet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = TokenKind> {
        TokenKind::SPECIAL.into_iter().filter(move |k| self.contains(*k))
    }
}

impl FromIterator<TokenKind> for KindSet {
    fn from_iter<I: IntoIterator<Item = TokenKind>>(iter: I) -> Self {
        let mut set = KindSet::EMPTY;
        for k in iter {
            set.insert(k);
        }
        set
    }
}

/// A recognized unit of text.
///
/// Word tokens hold only word characters unless punctuation keeping is on, in
/// which case a run of punctuation is also emitted as a `Word`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    kind: TokenKind,
    span: Span,
    text: String,
}

impl Token {
    /// Builds a token whose text is copied out of `source` at `span`.
    pub fn from_source(kind: TokenKind, span: Span, source: &str) -> Result<Self, SpanError> {
        let text = span.slice(source)?.to_string();
        Ok(Token { kind, span, text })
    }

    pub fn kind(&self) -> TokenKind {
        self.kind
    }

    pub fn span(&self) -> Span {
        self.span
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Action {
    /// Keep the sequence as a single tagged token.
    #[default]
    Preserve,
    /// Excise the sequence from the output.
    Remove,
}

impl Action {
    pub fn name(self) -> &'static str {
        match self {
            Action::Preserve => "preserve",
            Action::Remove => "remove",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SequenceRule {
    pub kind: TokenKind,
    pub enabled: bool,
    pub action: Action,
}

/// Tokenizer configuration: one rule per special kind plus global options.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    // Indexed by position in `TokenKind::SPECIAL`.
    rules: [SequenceRule; 4],
    pub keep_punctuation: bool,
    pub tag_output: bool,
    pub output_path: Option<PathBuf>,
    pub stats_enabled: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            rules: TokenKind::SPECIAL.map(|kind| SequenceRule { kind, enabled: true, action: Action::Preserve }),
            keep_punctuation: false,
            tag_output: false,
            output_path: None,
            stats_enabled: true,
        }
    }
}

fn rule_index(kind: TokenKind) -> usize {
    match kind {
        TokenKind::Ip => 0,
        TokenKind::Email => 1,
        TokenKind::Url => 2,
        TokenKind::Date => 3,
        TokenKind::Word => panic!("Word has no sequence rule"),
    }
}

impl Config {
    /// Rule for a special kind.
    ///
    /// # Panics
    ///
    /// Panics when called with `TokenKind::Word`.
    pub fn rule(&self, kind: TokenKind) -> SequenceRule {
        self.rules[rule_index(kind)]
    }

    pub fn rules(&self) -> &[SequenceRule; 4] {
        &self.rules
    }

    pub fn set_rule(&mut self, kind: TokenKind, enabled: bool, action: Action) {
        self.rules[rule_index(kind)] = SequenceRule { kind, enabled, action };
    }

    pub fn set_enabled(&mut self, kind: TokenKind, enabled: bool) {
        self.rules[rule_index(kind)].enabled = enabled;
    }

    pub fn set_action(&mut self, kind: TokenKind, action: Action) {
        self.rules[rule_index(kind)].action = action;
    }

    pub fn enabled_kinds(&self) -> KindSet {
        self.rules.iter().filter(|r| r.enabled).map(|r| r.kind).collect()
    }

    /// Enabled kinds whose action is `Remove`.
    pub fn removed_kinds(&self) -> KindSet {
        self.rules.iter().filter(|r| r.enabled && r.action == Action::Remove).map(|r| r.kind).collect()
    }
}

/// Occurrence counts for each special kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KindCounts {
    pub ip: usize,
    pub email: usize,
    pub url: usize,
    pub date: usize,
}

impl KindCounts {
    pub fn get(&self, kind: TokenKind) -> usize {
        match kind {
            TokenKind::Ip => self.ip,
            TokenKind::Email => self.email,
            TokenKind::Url => self.url,
            TokenKind::Date => self.date,
            TokenKind::Word => 0,
        }
    }

    pub(crate) fn bump(&mut self, kind: TokenKind) {
        match kind {
            TokenKind::Ip => self.ip += 1,
            TokenKind::Email => self.email += 1,
            TokenKind::Url => self.url += 1,
            TokenKind::Date => self.date += 1,
            TokenKind::Word => {}
        }
    }

    pub fn sum(&self) -> usize {
        self.ip + self.email + self.url + self.date
    }
}

/// Summary statistics over a token stream.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StatsReport {
    pub total_tokens: usize,
    pub word_tokens: usize,
    pub per_kind: KindCounts,
    pub unique_tokens: usize,
    /// At most ten `(term, count)` pairs, by descending count then ascending term.
    pub top_terms: Vec<(String, usize)>,
}
