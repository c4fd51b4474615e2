//! Token-stream statistics and their text/JSON renderings.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::model::{StatsReport, Token, TokenKind};

pub const TOP_TERMS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StatsFormat {
    #[default]
    Text,
    Json,
}

/// Incremental counterpart of [`compute_stats`], for token streams that are
/// produced piecewise.
#[derive(Debug, Default)]
pub struct StatsBuilder {
    report: StatsReport,
    freq: HashMap<String, usize>,
}

impl StatsBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, token: &Token) {
        self.report.total_tokens += 1;
        match token.kind() {
            TokenKind::Word => self.report.word_tokens += 1,
            kind => self.report.per_kind.bump(kind),
        }
        match self.freq.get_mut(token.text()) {
            Some(n) => *n += 1,
            None => {
                self.freq.insert(token.text().to_string(), 1);
            }
        }
    }

    pub fn extend<'a>(&mut self, tokens: impl IntoIterator<Item = &'a Token>) {
        for t in tokens {
            self.add(t);
        }
    }

    pub fn finish(self) -> StatsReport {
        let StatsBuilder { mut report, freq } = self;
        report.unique_tokens = freq.len();
        let mut terms: Vec<(String, usize)> = freq.into_iter().collect();
        terms.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        terms.truncate(TOP_TERMS);
        report.top_terms = terms;
        report
    }
}

pub fn compute_stats(tokens: &[Token]) -> StatsReport {
    let mut b = StatsBuilder::new();
    b.extend(tokens);
    b.finish()
}

#[derive(Serialize)]
struct JsonTerm<'a> {
    term: &'a str,
    count: usize,
}

// Field order is the wire order.
#[derive(Serialize)]
struct JsonReport<'a> {
    total_tokens: usize,
    word_tokens: usize,
    ip: usize,
    email: usize,
    url: usize,
    date: usize,
    unique_tokens: usize,
    top_terms: Vec<JsonTerm<'a>>,
}

pub fn render_stats(report: &StatsReport, format: StatsFormat) -> String {
    match format {
        StatsFormat::Json => render_json(report),
        StatsFormat::Text => render_text(report),
    }
}

fn render_json(report: &StatsReport) -> String {
    let json = JsonReport {
        total_tokens: report.total_tokens,
        word_tokens: report.word_tokens,
        ip: report.per_kind.ip,
        email: report.per_kind.email,
        url: report.per_kind.url,
        date: report.per_kind.date,
        unique_tokens: report.unique_tokens,
        top_terms: report.top_terms.iter().map(|(term, count)| JsonTerm { term, count: *count }).collect(),
    };
    let mut s = serde_json::to_string(&json).expect("report serializes");
    s.push('\n');
    s
}

fn render_text(report: &StatsReport) -> String {
    let rows = [
        ("total tokens", report.total_tokens),
        ("word tokens", report.word_tokens),
        ("ip", report.per_kind.ip),
        ("email", report.per_kind.email),
        ("url", report.per_kind.url),
        ("date", report.per_kind.date),
        ("unique tokens", report.unique_tokens),
    ];
    let term_width = report.top_terms.iter().map(|(t, _)| t.chars().count() + 2).max().unwrap_or(0);
    let width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max(term_width) + 2;
    let mut out = String::new();
    for (label, n) in rows {
        let _ = writeln!(out, "{label:<width$}{n}");
    }
    out.push_str("top terms\n");
    for (term, n) in &report.top_terms {
        let pad = width.saturating_sub(term.chars().count() + 2);
        let _ = writeln!(out, "  {term}{:pad$}{n}", "");
    }
    out
}
