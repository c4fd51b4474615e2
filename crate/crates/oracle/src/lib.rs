//! Slow, obviously-correct reference implementations.
//!
//! Nothing here shares code with the `seqtok` crate. Recognizers are defined
//! by enumerating every candidate length and testing it against regular
//! expressions plus numeric range checks; scanning, filtering and counting are
//! written in the most direct way available. Tests compare the real
//! implementation against these.

use std::collections::HashMap;
use std::sync::LazyLock;

use regex::Regex;

pub mod corpus;

/// Special sequence categories, listed in tie-break priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Url,
    Email,
    Ip,
    Date,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Url, Kind::Email, Kind::Ip, Kind::Date];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Url => "url",
            Kind::Email => "email",
            Kind::Ip => "ip",
            Kind::Date => "date",
        }
    }
}

const CLOSERS: &str = ".,;:!?)";
const BLOCKERS: &str = ".@-_%+";
const BAD_FOLLOWERS: &str = "-_%+";

static IP_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^([0-9]{1,3})\.([0-9]{1,3})\.([0-9]{1,3})\.([0-9]{1,3})$").unwrap());
static EMAIL_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^([A-Za-z0-9._%+-]{1,64})@([A-Za-z0-9.-]+)$").unwrap());
static LABEL_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[A-Za-z0-9]([A-Za-z0-9-]{0,61}[A-Za-z0-9])?$").unwrap());
static FINAL_LABEL_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[A-Za-z]{2,63}$").unwrap());
static SCHEME_URL_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(?i:https|http|ftp)://([A-Za-z0-9.-]+)(:[0-9]+)?(/[A-Za-z0-9._~!$&'()*+,;=:@%/?#-]*)?$")
        .unwrap()
});
static WWW_URL_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(?i:www)\.([A-Za-z0-9.-]+)(/[A-Za-z0-9._~!$&'()*+,;=:@%/?#-]*)?$").unwrap()
});
static DATE_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^([0-9]{1,2})([/.-])([0-9]{1,2})([/.-])([0-9]{4}|[0-9]{2})$").unwrap()
});

pub fn is_ip(s: &str) -> bool {
    match IP_RE.captures(s) {
        Some(c) => (1..=4).all(|i| c[i].parse::<u32>().unwrap() <= 255),
        None => false,
    }
}

pub fn is_domain(s: &str) -> bool {
    let labels: Vec<&str> = s.split('.').collect();
    if labels.len() < 2 {
        return false;
    }
    let last = labels[labels.len() - 1];
    labels.iter().all(|l| LABEL_RE.is_match(l)) && FINAL_LABEL_RE.is_match(last)
}

pub fn is_email(s: &str) -> bool {
    let Some(c) = EMAIL_RE.captures(s) else {
        return false;
    };
    let local = &c[1];
    !local.starts_with('.') && !local.ends_with('.') && !local.contains("..") && is_domain(&c[2])
}

pub fn is_url(s: &str) -> bool {
    if let Some(c) = SCHEME_URL_RE.captures(s) {
        let host = &c[1];
        return is_domain(host) || is_ip(host);
    }
    if let Some(c) = WWW_URL_RE.captures(s) {
        return is_domain(&c[1]);
    }
    false
}

pub fn is_date(s: &str) -> bool {
    let Some(c) = DATE_RE.captures(s) else {
        return false;
    };
    let day: u32 = c[1].parse().unwrap();
    let month: u32 = c[3].parse().unwrap();
    c[2] == c[4] && (1..=31).contains(&day) && (1..=12).contains(&month)
}

pub fn grammar(kind: Kind, s: &str) -> bool {
    match kind {
        Kind::Url => is_url(s),
        Kind::Email => is_email(s),
        Kind::Ip => is_ip(s),
        Kind::Date => is_date(s),
    }
}

pub fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

pub fn boundary(text: &str, pos: usize) -> bool {
    if pos == 0 {
        return true;
    }
    if !text.is_char_boundary(pos) {
        return false;
    }
    let prev = text[..pos].chars().next_back().unwrap();
    !is_word_char(prev) && !BLOCKERS.contains(prev)
}

fn follower_ok(kind: Kind, text: &str, end: usize) -> bool {
    let rest = &text[end..];
    let mut it = rest.chars();
    let Some(next) = it.next() else {
        return true;
    };
    if is_word_char(next) || BAD_FOLLOWERS.contains(next) {
        return false;
    }
    if matches!(kind, Kind::Ip | Kind::Date) && next == '.' {
        if let Some(after) = it.next() {
            if after.is_ascii_digit() {
                return false;
            }
        }
    }
    true
}

/// Longest match of `kind` starting at `pos`, as an end offset.
///
/// Candidates never extend past the next whitespace character: none of the
/// grammars admit whitespace, so longer candidates are rejected anyway.
pub fn longest(kind: Kind, text: &str, pos: usize) -> Option<usize> {
    if !text.is_char_boundary(pos) {
        return None;
    }
    let mut end = text[pos..].find(char::is_whitespace).map_or(text.len(), |i| pos + i);
    while end > pos {
        if text.is_char_boundary(end) {
            let cand = &text[pos..end];
            let closer_ok = match kind {
                Kind::Url | Kind::Email => !cand.ends_with(|c| CLOSERS.contains(c)),
                _ => true,
            };
            if closer_ok && grammar(kind, cand) && follower_ok(kind, text, end) {
                return Some(end);
            }
        }
        end -= 1;
    }
    None
}

pub fn best(text: &str, pos: usize, kinds: &[Kind]) -> Option<(Kind, usize)> {
    let mut found: Option<(Kind, usize)> = None;
    for kind in Kind::ALL {
        if !kinds.contains(&kind) {
            continue;
        }
        if let Some(end) = longest(kind, text, pos) {
            // ALL is in priority order, so only a strictly longer match wins.
            if found.is_none_or(|(_, e)| end > e) {
                found = Some((kind, end));
            }
        }
    }
    found
}

/// Leftmost-first, longest, priority-ordered scan over every position.
pub fn scan(text: &str, kinds: &[Kind]) -> Vec<(Kind, usize, usize)> {
    let mut out = Vec::new();
    let mut cursor = 0;
    for pos in 0..=text.len() {
        if pos < cursor || !boundary(text, pos) {
            continue;
        }
        if let Some((kind, end)) = best(text, pos, kinds) {
            out.push((kind, pos, end));
            cursor = end;
        }
    }
    out
}

/// Reference token stream as `(kind name, text)` pairs; `"word"` for words.
///
/// `rules` lists each enabled kind with `true` for preserve, `false` for remove.
pub fn tokenize(text: &str, rules: &[(Kind, bool)], keep_punctuation: bool) -> Vec<(String, String)> {
    let kinds: Vec<Kind> = rules.iter().map(|r| r.0).collect();
    let specials = scan(text, &kinds);
    let mut out = Vec::new();
    let mut gap_start = 0;
    let push_gap = |gap: &str, out: &mut Vec<(String, String)>| {
        let mut cur = String::new();
        let mut cur_is_word = false;
        for c in gap.chars() {
            let class = if is_word_char(c) {
                Some(true)
            } else if c.is_whitespace() || !keep_punctuation {
                None
            } else {
                Some(false)
            };
            match class {
                Some(w) if !cur.is_empty() && w == cur_is_word => cur.push(c),
                Some(w) => {
                    if !cur.is_empty() {
                        out.push(("word".to_string(), std::mem::take(&mut cur)));
                    }
                    cur.push(c);
                    cur_is_word = w;
                }
                None => {
                    if !cur.is_empty() {
                        out.push(("word".to_string(), std::mem::take(&mut cur)));
                    }
                }
            }
        }
        if !cur.is_empty() {
            out.push(("word".to_string(), cur));
        }
    };
    for (kind, start, end) in specials {
        push_gap(&text[gap_start..start], &mut out);
        let preserve = rules.iter().find(|r| r.0 == kind).unwrap().1;
        if preserve {
            out.push((kind.name().to_string(), text[start..end].to_string()));
        }
        gap_start = end;
    }
    push_gap(&text[gap_start..], &mut out);
    out
}

/// Reference removal: excise every removed span, then fix up whitespace at
/// each cut (collapse when both sides are blank, insert one space when
/// neither is, drop blanks that would touch either end of the text).
pub fn filter(text: &str, rules: &[(Kind, bool)]) -> String {
    let kinds: Vec<Kind> = rules.iter().map(|r| r.0).collect();
    let specials = scan(text, &kinds);
    let mut out = String::new();
    let mut cursor = 0;
    for (kind, start, end) in specials {
        let preserve = rules.iter().find(|r| r.0 == kind).unwrap().1;
        if preserve {
            continue;
        }
        out.push_str(&text[cursor..start]);
        let rest = &text[end..];
        let left_blank = out.chars().next_back().is_some_and(char::is_whitespace);
        let right_blank = rest.chars().next().is_some_and(char::is_whitespace);
        if out.is_empty() {
            cursor = end + (rest.len() - rest.trim_start().len());
            continue;
        }
        if rest.is_empty() {
            let kept = out.trim_end().len();
            out.truncate(kept);
            cursor = end;
            continue;
        }
        cursor = end;
        if left_blank && right_blank {
            let kept = out.trim_end().len();
            out.truncate(kept);
            cursor = end + (rest.len() - rest.trim_start().len());
            if cursor < text.len() {
                out.push(' ');
            }
        } else if !left_blank && !right_blank {
            out.push(' ');
        }
    }
    out.push_str(&text[cursor..]);
    out
}

pub fn naive_find_all(pattern: &[u8], text: &[u8]) -> Vec<usize> {
    let mut out = Vec::new();
    if pattern.is_empty() || pattern.len() > text.len() {
        return out;
    }
    for i in 0..=text.len() - pattern.len() {
        if &text[i..i + pattern.len()] == pattern {
            out.push(i);
        }
    }
    out
}

/// Polynomial fingerprint evaluated with 128-bit Horner steps, reducing every step.
pub fn naive_fingerprint(bytes: &[u8], base: u64, modulus: u64) -> u64 {
    let mut h: u128 = 0;
    for &b in bytes {
        h = (h * base as u128 + b as u128) % modulus as u128;
    }
    h as u64
}

pub fn frequency_map<'a>(terms: impl IntoIterator<Item = &'a str>) -> HashMap<String, usize> {
    let mut map = HashMap::new();
    for t in terms {
        *map.entry(t.to_string()).or_insert(0) += 1;
    }
    map
}
