//! Document scanning: special-sequence detection, word splitting, removal
//! filtering and token-file rendering.

use std::sync::LazyLock;

use crate::model::{Action, Config, KindSet, Span, Token, TokenKind};
use crate::rabin_karp::AnchorSet;
use crate::recognize::{best_match, is_start_boundary, is_word_char};

/// Anchored left-walks give up after this many bytes.
pub const MAX_LEFT_WALK: usize = 512;

static STANDARD_ANCHORS: LazyLock<AnchorSet> = LazyLock::new(AnchorSet::standard);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ScanStrategy {
    /// Consult every recognizer at every start boundary, left to right.
    Direct,
    /// Locate anchor literals with the fingerprint matcher, expand each one to
    /// a candidate start, and run recognizers only there.
    #[default]
    Anchored,
}

/// Leftmost-first, longest, priority-ordered special matches.
pub fn scan_special(text: &str, enabled: KindSet, strategy: ScanStrategy) -> Vec<(TokenKind, Span)> {
    if enabled.is_empty() {
        return Vec::new();
    }
    match strategy {
        ScanStrategy::Direct => scan_direct(text, enabled),
        ScanStrategy::Anchored => scan_anchored(text, enabled),
    }
}

fn may_start_match(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'_' | b'%' | b'+' | b'-')
}

fn scan_direct(text: &str, enabled: KindSet) -> Vec<(TokenKind, Span)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        if may_start_match(bytes[pos]) && is_start_boundary(text, pos) {
            if let Some((kind, span)) = best_match(text, pos, enabled) {
                out.push((kind, span));
                pos = span.end();
                continue;
            }
        }
        pos += 1;
    }
    out
}

/// Characters a kind's match may contain between its start and its first anchor.
fn lead_char(kind: TokenKind, b: u8) -> bool {
    match kind {
        TokenKind::Email => b.is_ascii_alphanumeric() || matches!(b, b'.' | b'_' | b'%' | b'+' | b'-'),
        TokenKind::Ip | TokenKind::Date => b.is_ascii_digit(),
        TokenKind::Url | TokenKind::Word => false,
    }
}

/// Nearest start boundary at or left of an anchor from which a match of
/// `kind` could reach it.
fn candidate_start(text: &str, kind: TokenKind, anchor: usize) -> Option<usize> {
    if kind == TokenKind::Url {
        return is_start_boundary(text, anchor).then_some(anchor);
    }
    let bytes = text.as_bytes();
    let floor = anchor.saturating_sub(MAX_LEFT_WALK);
    let mut pos = anchor;
    while pos > floor {
        pos -= 1;
        if !lead_char(kind, bytes[pos]) {
            return None;
        }
        if is_start_boundary(text, pos) {
            return Some(pos);
        }
    }
    None
}

fn scan_anchored(text: &str, enabled: KindSet) -> Vec<(TokenKind, Span)> {
    let mut starts: Vec<(usize, TokenKind)> = STANDARD_ANCHORS
        .find(text.as_bytes(), enabled)
        .into_iter()
        .filter_map(|(kind, off)| candidate_start(text, kind, off).map(|s| (s, kind)))
        .collect();
    starts.sort_unstable();
    starts.dedup();

    let mut out = Vec::new();
    let mut cursor = 0;
    let mut i = 0;
    while i < starts.len() {
        let start = starts[i].0;
        let mut kinds = KindSet::EMPTY;
        while i < starts.len() && starts[i].0 == start {
            kinds.insert(starts[i].1);
            i += 1;
        }
        if start < cursor {
            continue;
        }
        if let Some((kind, span)) = best_match(text, start, kinds) {
            out.push((kind, span));
            cursor = span.end();
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CharClass {
    Word,
    Punct,
    Space,
}

fn classify(c: char) -> CharClass {
    if is_word_char(c) {
        CharClass::Word
    } else if c.is_whitespace() {
        CharClass::Space
    } else {
        CharClass::Punct
    }
}

/// Appends the word (and optionally punctuation) runs of `text[from..to]`.
fn split_plain(text: &str, from: usize, to: usize, keep_punctuation: bool, out: &mut Vec<Token>) {
    let mut run: Option<(CharClass, usize)> = None;
    let flush = |run: Option<(CharClass, usize)>, end: usize, out: &mut Vec<Token>| {
        if let Some((class, start)) = run {
            if class == CharClass::Word || (class == CharClass::Punct && keep_punctuation) {
                out.push(Token::from_source(TokenKind::Word, Span::new_unchecked(start, end), text).expect("run on char boundaries"));
            }
        }
    };
    for (i, c) in text[from..to].char_indices() {
        let class = classify(c);
        match run {
            Some((current, _)) if current == class => {}
            _ => {
                flush(run, from + i, out);
                run = Some((class, from + i));
            }
        }
    }
    flush(run, to, out);
}

/// Tokenizes with the default (anchored) strategy.
pub fn tokenize(text: &str, config: &Config) -> Vec<Token> {
    tokenize_with(text, config, ScanStrategy::default())
}

pub fn tokenize_with(text: &str, config: &Config, strategy: ScanStrategy) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut gap = 0;
    for (kind, span) in scan_special(text, config.enabled_kinds(), strategy) {
        split_plain(text, gap, span.start(), config.keep_punctuation, &mut tokens);
        if config.rule(kind).action == Action::Preserve {
            tokens.push(Token::from_source(kind, span, text).expect("recognizer spans are ASCII"));
        }
        gap = span.end();
    }
    split_plain(text, gap, text.len(), config.keep_punctuation, &mut tokens);
    tokens
}

/// Removes every remove-action match from `text`.
pub fn filter_text(text: &str, config: &Config) -> String {
    filter_text_with(text, config, ScanStrategy::default())
}

/// Cuts each removed match out of the text and repairs the whitespace around
/// the cut: blanks on both sides collapse to one space, a cut between two
/// non-blank characters gets one space, and blanks left touching the start or
/// end of the text are dropped.
pub fn filter_text_with(text: &str, config: &Config, strategy: ScanStrategy) -> String {
    let removed = config.removed_kinds();
    if removed.is_empty() {
        return text.to_string();
    }
    let mut out = String::with_capacity(text.len());
    let mut cursor = 0;
    for (kind, span) in scan_special(text, config.enabled_kinds(), strategy) {
        if !removed.contains(kind) {
            continue;
        }
        out.push_str(&text[cursor..span.start()]);
        let rest = &text[span.end()..];
        let blank_len = rest.len() - rest.trim_start().len();
        cursor = span.end();
        if out.is_empty() {
            cursor += blank_len;
        } else if rest.is_empty() {
            out.truncate(out.trim_end().len());
        } else {
            let left_blank = out.ends_with(char::is_whitespace);
            let right_blank = blank_len > 0;
            if left_blank && right_blank {
                out.truncate(out.trim_end().len());
                cursor += blank_len;
                if cursor < text.len() {
                    out.push(' ');
                }
            } else if !left_blank && !right_blank {
                out.push(' ');
            }
        }
    }
    out.push_str(&text[cursor..]);
    out
}

fn tag(kind: TokenKind) -> Option<&'static str> {
    match kind {
        TokenKind::Word => None,
        TokenKind::Ip => Some("<IP> "),
        TokenKind::Email => Some("<EMAIL> "),
        TokenKind::Url => Some("<URL> "),
        TokenKind::Date => Some("<DATE> "),
    }
}

/// One token per line, `\n`-terminated; special kinds get a `<KIND> ` prefix
/// when `tag_output` is set.
pub fn render_tokens(tokens: &[Token], tag_output: bool) -> String {
    let mut out = String::new();
    for t in tokens {
        if tag_output {
            if let Some(prefix) = tag(t.kind()) {
                out.push_str(prefix);
            }
        }
        out.push_str(t.text());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn only(kind: TokenKind, action: Action) -> Config {
        let mut c = Config::default();
        for k in TokenKind::SPECIAL {
            c.set_enabled(k, k == kind);
        }
        c.set_action(kind, action);
        c
    }

    fn all(action: Action) -> Config {
        let mut c = Config::default();
        for k in TokenKind::SPECIAL {
            c.set_action(k, action);
        }
        c
    }

    fn pairs(tokens: &[Token]) -> Vec<(TokenKind, &str)> {
        tokens.iter().map(|t| (t.kind(), t.text())).collect()
    }

    #[test]
    fn scan_special_examples() {
        for strategy in [ScanStrategy::Direct, ScanStrategy::Anchored] {
            assert_eq!(
                scan_special("ip 192.168.0.1 end", KindSet::ALL, strategy),
                vec![(TokenKind::Ip, Span::new(3, 14).unwrap())]
            );
            assert!(scan_special("", KindSet::ALL, strategy).is_empty());
        }
        let doc = "a@b.co http://b.co 1.2.3.4";
        let direct = scan_special(doc, KindSet::ALL, ScanStrategy::Direct);
        assert_eq!(direct.len(), 3);
        assert_eq!(direct, scan_special(doc, KindSet::ALL, ScanStrategy::Anchored));
    }

    #[test]
    fn anchored_finds_date_after_slash_boundary() {
        let doc = "1/16/07/1982";
        let want = vec![(TokenKind::Date, Span::new(2, 12).unwrap())];
        assert_eq!(scan_special(doc, KindSet::ALL, ScanStrategy::Direct), want);
        assert_eq!(scan_special(doc, KindSet::ALL, ScanStrategy::Anchored), want);
    }

    #[test]
    fn anchored_walk_is_capped() {
        let local = "a".repeat(MAX_LEFT_WALK + 10);
        let doc = format!("{local}@x.co");
        assert!(scan_special(&doc, KindSet::ALL, ScanStrategy::Anchored).is_empty());
        assert!(scan_special(&doc, KindSet::ALL, ScanStrategy::Direct).is_empty());
    }

    #[test]
    fn tokenize_examples() {
        let doc = "Contact qalhajja@kfu.edu.sa today";
        let kept = tokenize(doc, &only(TokenKind::Email, Action::Preserve));
        assert_eq!(
            pairs(&kept),
            vec![(TokenKind::Word, "Contact"), (TokenKind::Email, "qalhajja@kfu.edu.sa"), (TokenKind::Word, "today")]
        );
        let removed = tokenize(doc, &only(TokenKind::Email, Action::Remove));
        assert_eq!(pairs(&removed), vec![(TokenKind::Word, "Contact"), (TokenKind::Word, "today")]);
        for cfg in [Config::default(), all(Action::Remove)] {
            assert_eq!(pairs(&tokenize("one two", &cfg)), vec![(TokenKind::Word, "one"), (TokenKind::Word, "two")]);
        }
    }

    #[test]
    fn punctuation_is_dropped_unless_kept() {
        let doc = "Hi, there -- (ok)!";
        let mut cfg = Config::default();
        let words: Vec<_> = tokenize(doc, &cfg).iter().map(|t| t.text().to_string()).collect();
        assert_eq!(words, ["Hi", "there", "ok"]);
        cfg.keep_punctuation = true;
        let words: Vec<_> = tokenize(doc, &cfg).iter().map(|t| t.text().to_string()).collect();
        assert_eq!(words, ["Hi", ",", "there", "--", "(", "ok", ")!"]);
    }

    #[test]
    fn unicode_words() {
        let doc = "café 東京 naïve—ok";
        let words: Vec<_> = tokenize(doc, &Config::default()).iter().map(|t| t.text().to_string()).collect();
        assert_eq!(words, ["café", "東京", "naïve", "ok"]);
    }

    #[test]
    fn disabled_kinds_are_plain_words() {
        let mut cfg = Config::default();
        for k in TokenKind::SPECIAL {
            cfg.set_enabled(k, false);
        }
        let words: Vec<_> = tokenize("at 192.168.0.1 now", &cfg).iter().map(|t| t.text().to_string()).collect();
        assert_eq!(words, ["at", "192", "168", "0", "1", "now"]);
        assert_eq!(filter_text("at 192.168.0.1 now", &cfg), "at 192.168.0.1 now");
    }

    #[test]
    fn filter_examples() {
        assert_eq!(filter_text("IP 192.168.0.1 end", &only(TokenKind::Ip, Action::Remove)), "IP end");
        assert_eq!(filter_text("no specials here", &all(Action::Remove)), "no specials here");
        assert_eq!(filter_text("IP 192.168.0.1 end", &only(TokenKind::Ip, Action::Preserve)), "IP 192.168.0.1 end");
        assert_eq!(filter_text("192.168.0.1 end", &all(Action::Remove)), "end");
        assert_eq!(filter_text("end 192.168.0.1", &all(Action::Remove)), "end");
        assert_eq!(filter_text("a,1.2.3.4,b", &all(Action::Remove)), "a, ,b");
        assert_eq!(filter_text("a 1.2.3.4,b", &all(Action::Remove)), "a ,b");
        assert_eq!(filter_text("a\n\n16/07/1982  b", &all(Action::Remove)), "a b");
        assert_eq!(filter_text("1.2.3.4 5.6.7.8", &all(Action::Remove)), "");
        let once = filter_text("x 1.2.3.4 a@b.co, y", &all(Action::Remove));
        assert_eq!(once, "x , y");
        assert_eq!(filter_text(&once, &all(Action::Remove)), once);
    }

    #[test]
    fn render_examples() {
        let src = "a 1.2.3.4";
        let toks = vec![
            Token::from_source(TokenKind::Word, Span::new(0, 1).unwrap(), src).unwrap(),
            Token::from_source(TokenKind::Ip, Span::new(2, 9).unwrap(), src).unwrap(),
        ];
        assert_eq!(render_tokens(&toks, true), "a\n<IP> 1.2.3.4\n");
        assert_eq!(render_tokens(&toks, false), "a\n1.2.3.4\n");
        assert_eq!(render_tokens(&[], true), "");
        assert_eq!(render_tokens(&toks[..1], false), "a\n");
    }
}
