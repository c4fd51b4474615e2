//! Finite-state recognizers for the four special sequence kinds.
//!
//! Each recognizer answers one question: does a match of its kind begin at
//! byte offset `pos`, and if so, where does the longest one end? All grammars
//! are ASCII-only. A match must also end at a token edge: the character after
//! it may not be a word character or one of `- _ % +`, and for IPv4 addresses
//! and dates it may not be a `.` followed by a digit. Email and URL matches
//! never end in one of the closers `. , ; : ! ? )`.

use crate::model::{KindSet, Span, TokenKind};

const MAX_LOCAL_PART: usize = 64;
const MAX_LABEL: usize = 63;

/// Word characters: ASCII alphanumerics and any non-ASCII letter or digit.
pub fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_closer(b: u8) -> bool {
    matches!(b, b'.' | b',' | b';' | b':' | b'!' | b'?' | b')')
}

fn is_local_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'.' | b'_' | b'%' | b'+' | b'-')
}

fn is_host_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'.' | b'-')
}

pub(crate) fn is_path_char(b: u8) -> bool {
    b.is_ascii_alphanumeric()
        || matches!(
            b,
            b'.' | b'_'
                | b'~'
                | b'!'
                | b'$'
                | b'&'
                | b'\''
                | b'('
                | b')'
                | b'*'
                | b'+'
                | b','
                | b';'
                | b'='
                | b':'
                | b'@'
                | b'%'
                | b'/'
                | b'?'
                | b'#'
                | b'-'
        )
}

fn char_before(text: &str, pos: usize) -> Option<char> {
    text[..pos].chars().next_back()
}

fn char_at(text: &str, pos: usize) -> Option<char> {
    text[pos..].chars().next()
}

/// True when a special match may start at `pos`: either the start of the text,
/// or the preceding character is neither a word character nor one of
/// `. @ - _ % +`. Offsets inside a multi-byte character are never boundaries.
pub fn is_start_boundary(text: &str, pos: usize) -> bool {
    if pos == 0 {
        return true;
    }
    if pos > text.len() || !text.is_char_boundary(pos) {
        return false;
    }
    let prev = text.as_bytes()[pos - 1];
    if prev.is_ascii() {
        return !prev.is_ascii_alphanumeric() && !matches!(prev, b'.' | b'@' | b'-' | b'_' | b'%' | b'+');
    }
    char_before(text, pos).is_some_and(|c| !is_word_char(c))
}

/// Whether a match ending at `end` is properly terminated.
fn ends_cleanly(text: &str, end: usize, numeric: bool) -> bool {
    let bytes = text.as_bytes();
    let Some(&next) = bytes.get(end) else {
        return true;
    };
    if !next.is_ascii() {
        return char_at(text, end).is_some_and(|c| !is_word_char(c));
    }
    if next.is_ascii_alphanumeric() || matches!(next, b'-' | b'_' | b'%' | b'+') {
        return false;
    }
    !(numeric && next == b'.' && bytes.get(end + 1).is_some_and(u8::is_ascii_digit))
}

fn digit_run(bytes: &[u8], from: usize) -> usize {
    bytes.get(from..).map_or(0, |rest| rest.iter().take_while(|b| b.is_ascii_digit()).count())
}

fn parse_small(digits: &[u8]) -> u32 {
    digits.iter().fold(0, |acc, d| acc * 10 + u32::from(d - b'0'))
}

/// Parses four dot-separated decimal groups starting at `pos` and returns the
/// end offset. Each group is the full digit run at its position.
fn ipv4_end(bytes: &[u8], pos: usize) -> Option<usize> {
    let mut i = pos;
    for group in 0..4 {
        let n = digit_run(bytes, i);
        if n == 0 || n > 3 || parse_small(&bytes[i..i + n]) > 255 {
            return None;
        }
        i += n;
        if group < 3 {
            if bytes.get(i) != Some(&b'.') {
                return None;
            }
            i += 1;
        }
    }
    Some(i)
}

pub fn recognize_ip(text: &str, pos: usize) -> Option<Span> {
    let end = ipv4_end(text.as_bytes(), pos)?;
    ends_cleanly(text, end, true).then(|| Span::new_unchecked(pos, end))
}

pub fn recognize_date(text: &str, pos: usize) -> Option<Span> {
    let bytes = text.as_bytes();
    let day_len = digit_run(bytes, pos);
    if !(1..=2).contains(&day_len) || !(1..=31).contains(&parse_small(&bytes[pos..pos + day_len])) {
        return None;
    }
    let mut i = pos + day_len;
    let sep = *bytes.get(i).filter(|b| matches!(b, b'/' | b'-' | b'.'))?;
    i += 1;
    let month_len = digit_run(bytes, i);
    if !(1..=2).contains(&month_len) || !(1..=12).contains(&parse_small(&bytes[i..i + month_len])) {
        return None;
    }
    i += month_len;
    if bytes.get(i) != Some(&sep) {
        return None;
    }
    i += 1;
    let year_len = digit_run(bytes, i);
    if year_len != 2 && year_len != 4 {
        return None;
    }
    let end = i + year_len;
    ends_cleanly(text, end, true).then(|| Span::new_unchecked(pos, end))
}

/// Label-by-label validity of every dotted prefix of a host-character run.
struct HostPrefixes {
    /// `(end offset, is valid domain, is valid IPv4)` for each label end.
    ends: Vec<(usize, bool, bool)>,
}

impl HostPrefixes {
    fn scan(bytes: &[u8], start: usize, run_end: usize) -> Self {
        let mut ends = Vec::new();
        let mut labels_ok = true;
        let mut numeric_ok = true;
        let mut label_count = 0usize;
        let mut label_start = start;
        let mut i = start;
        while i <= run_end {
            if i == run_end || bytes[i] == b'.' {
                let label = &bytes[label_start..i];
                label_count += 1;
                let label_ok = !label.is_empty()
                    && label.len() <= MAX_LABEL
                    && label[0] != b'-'
                    && label[label.len() - 1] != b'-';
                labels_ok &= label_ok;
                let final_ok = (2..=MAX_LABEL).contains(&label.len()) && label.iter().all(u8::is_ascii_alphabetic);
                let domain = labels_ok && label_count >= 2 && final_ok;
                numeric_ok &= (1..=3).contains(&label.len())
                    && label.iter().all(u8::is_ascii_digit)
                    && parse_small(label) <= 255;
                let ipv4 = numeric_ok && label_count == 4;
                ends.push((i, domain, ipv4));
                label_start = i + 1;
            }
            i += 1;
        }
        HostPrefixes { ends }
    }
}

pub fn recognize_email(text: &str, pos: usize) -> Option<Span> {
    let bytes = text.as_bytes();
    let local_len = bytes.get(pos..)?.iter().take_while(|b| is_local_char(**b)).count();
    if local_len == 0 || local_len > MAX_LOCAL_PART {
        return None;
    }
    let local = &bytes[pos..pos + local_len];
    if local[0] == b'.' || local[local_len - 1] == b'.' || local.windows(2).any(|w| w == b"..") {
        return None;
    }
    let at = pos + local_len;
    if bytes.get(at) != Some(&b'@') {
        return None;
    }
    let host_start = at + 1;
    let run_end = host_start + bytes[host_start..].iter().take_while(|b| is_host_char(**b)).count();
    HostPrefixes::scan(bytes, host_start, run_end)
        .ends
        .iter()
        .rev()
        .find(|(end, domain, _)| *domain && ends_cleanly(text, *end, false))
        .map(|(end, _, _)| Span::new_unchecked(pos, *end))
}

fn starts_with_ignore_case(bytes: &[u8], pos: usize, prefix: &[u8]) -> bool {
    bytes.get(pos..pos + prefix.len()).is_some_and(|s| s.eq_ignore_ascii_case(prefix))
}

pub fn recognize_url(text: &str, pos: usize) -> Option<Span> {
    let bytes = text.as_bytes();
    let (host_start, scheme_form) = if let Some(p) = [&b"https://"[..], b"http://", b"ftp://"]
        .into_iter()
        .find(|p| starts_with_ignore_case(bytes, pos, p))
    {
        (pos + p.len(), true)
    } else if starts_with_ignore_case(bytes, pos, b"www.") {
        (pos + 4, false)
    } else {
        return None;
    };
    let run_end = host_start + bytes[host_start..].iter().take_while(|b| is_host_char(**b)).count();
    let prefixes = HostPrefixes::scan(bytes, host_start, run_end);
    let valid_host = |domain: bool, ipv4: bool| domain || (scheme_form && ipv4);
    let accept = |end: usize| !is_closer(bytes[end - 1]) && ends_cleanly(text, end, false);

    let full_host_ok = prefixes.ends.last().is_some_and(|&(end, d, ip)| end == run_end && valid_host(d, ip));
    if full_host_ok {
        let mut tail_start = run_end;
        let mut port_end = None;
        if scheme_form && bytes.get(run_end) == Some(&b':') {
            let digits = digit_run(bytes, run_end + 1);
            if digits > 0 {
                tail_start = run_end + 1 + digits;
                port_end = Some(tail_start);
            }
        }
        if bytes.get(tail_start) == Some(&b'/') {
            let path_end = tail_start + 1 + bytes[tail_start + 1..].iter().take_while(|b| is_path_char(**b)).count();
            if let Some(end) = (tail_start + 1..=path_end).rev().find(|&e| accept(e)) {
                return Some(Span::new_unchecked(pos, end));
            }
        }
        if let Some(end) = port_end.filter(|&e| accept(e)) {
            return Some(Span::new_unchecked(pos, end));
        }
        if accept(run_end) {
            return Some(Span::new_unchecked(pos, run_end));
        }
    }
    prefixes
        .ends
        .iter()
        .rev()
        .filter(|&&(end, _, _)| end < run_end)
        .find(|&&(end, d, ip)| valid_host(d, ip) && accept(end))
        .map(|&(end, _, _)| Span::new_unchecked(pos, end))
}

/// Runs the recognizer for a single special kind.
///
/// # Panics
///
/// Panics when called with `TokenKind::Word`.
pub fn recognize(kind: TokenKind, text: &str, pos: usize) -> Option<Span> {
    match kind {
        TokenKind::Ip => recognize_ip(text, pos),
        TokenKind::Email => recognize_email(text, pos),
        TokenKind::Url => recognize_url(text, pos),
        TokenKind::Date => recognize_date(text, pos),
        TokenKind::Word => panic!("Word has no recognizer"),
    }
}

/// Longest match among the enabled kinds at `pos`; equal lengths resolve as
/// Url > Email > Ip > Date.
pub fn best_match(text: &str, pos: usize, enabled: KindSet) -> Option<(TokenKind, Span)> {
    let mut best: Option<(TokenKind, Span)> = None;
    for kind in TokenKind::PRIORITY {
        if !enabled.contains(kind) {
            continue;
        }
        if let Some(span) = recognize(kind, text, pos) {
            if best.is_none_or(|(_, b)| span.end() > b.end()) {
                best = Some((kind, span));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(s: usize, e: usize) -> Option<Span> {
        Some(Span::new(s, e).unwrap())
    }

    #[test]
    fn boundaries() {
        assert!(is_start_boundary("192.168.0.1", 0));
        assert!(!is_start_boundary("x192.168.0.1", 1));
        assert!(is_start_boundary("(192.168.0.1", 1));
        for blocker in ['.', '@', '-', '_', '%', '+'] {
            assert!(!is_start_boundary(&format!("{blocker}1.2.3.4"), 1));
        }
        assert!(!is_start_boundary("é1.2.3.4", 2));
        assert!(!is_start_boundary("é", 1));
        assert!(is_start_boundary("—1.2.3.4", 3));
        assert!(is_start_boundary("ab ", 3));
    }

    #[test]
    fn ip_examples() {
        assert_eq!(recognize_ip("192.168.0.1", 0), span(0, 11));
        assert_eq!(recognize_ip("256.1.1.1", 0), None);
        assert_eq!(recognize_ip("1.2.3.4.5", 0), None);
        assert_eq!(recognize_ip("010.0.0.7", 0), span(0, 9));
        assert_eq!(recognize_ip("1.2.3.4.", 0), span(0, 7));
        assert_eq!(recognize_ip("1.2.3.4.x", 0), span(0, 7));
        assert_eq!(recognize_ip("1.2.3.4x", 0), None);
        assert_eq!(recognize_ip("1.2.3.4-", 0), None);
        assert_eq!(recognize_ip("1.2.3.4é", 0), None);
        assert_eq!(recognize_ip("1.2.3", 0), None);
        assert_eq!(recognize_ip("1234.1.1.1", 0), None);
        assert_eq!(recognize_ip("999.1.1.1", 0), None);
    }

    #[test]
    fn email_examples() {
        assert_eq!(recognize_email("qalhajja@kfu.edu.sa", 0), span(0, 19));
        assert_eq!(recognize_email("@kfu.edu.sa", 0), None);
        assert_eq!(recognize_email("mail a.b@x.co.", 5), span(5, 13));
        assert_eq!(recognize_email(".a@x.co", 0), None);
        assert_eq!(recognize_email("a.@x.co", 0), None);
        assert_eq!(recognize_email("a..b@x.co", 0), None);
        assert_eq!(recognize_email("a@x.c", 0), None);
        assert_eq!(recognize_email("a@x.c0m", 0), None);
        assert_eq!(recognize_email("a@-x.com", 0), None);
        assert_eq!(recognize_email("a@x-.com", 0), None);
        assert_eq!(recognize_email("a@x.co.1", 0), span(0, 6));
        assert_eq!(recognize_email("a@x.cox1", 0), None);
        assert_eq!(recognize_email("a@b.co-", 0), None);
        assert_eq!(recognize_email(&format!("{}@x.co", "a".repeat(64)), 0), span(0, 69));
        assert_eq!(recognize_email(&format!("{}@x.co", "a".repeat(65)), 0), None);
        assert_eq!(recognize_email(&format!("a@{}.co", "b".repeat(63)), 0), span(0, 68));
        assert_eq!(recognize_email(&format!("a@{}.co", "b".repeat(64)), 0), None);
    }

    #[test]
    fn url_examples() {
        assert_eq!(recognize_url("http://www.kfu.edu.sa", 0), span(0, 21));
        assert_eq!(recognize_url("http://", 0), None);
        assert_eq!(recognize_url("see www.kfu.edu.sa/a,b.", 4), span(4, 22));
        assert_eq!(recognize_url("HTTPS://Example.COM/x", 0), span(0, 21));
        assert_eq!(recognize_url("http://192.168.0.1/x", 0), span(0, 20));
        assert_eq!(recognize_url("www.192.168.0.1", 0), None);
        assert_eq!(recognize_url("http://a.co:8080/p?q=1#f", 0), span(0, 24));
        assert_eq!(recognize_url("http://a.co:80x", 0), span(0, 11));
        assert_eq!(recognize_url("http://a.co:", 0), span(0, 11));
        assert_eq!(recognize_url("Visit http://x.yz.", 6), span(6, 17));
        assert_eq!(recognize_url("(http://x.yz/a)", 1), span(1, 14));
        assert_eq!(recognize_url("http://1.2.3.4.5", 0), span(0, 14));
        assert_eq!(recognize_url("ftp://files.example.org/", 0), span(0, 24));
        assert_eq!(recognize_url("www.x", 0), None);
    }

    #[test]
    fn date_examples() {
        assert_eq!(recognize_date("16/07/1982", 0), span(0, 10));
        assert_eq!(recognize_date("32/07/1982", 0), None);
        assert_eq!(recognize_date("5-9-82", 0), span(0, 6));
        assert_eq!(recognize_date("31.02.2020", 0), span(0, 10));
        assert_eq!(recognize_date("16/07-1982", 0), None);
        assert_eq!(recognize_date("16/13/1982", 0), None);
        assert_eq!(recognize_date("00/12/1982", 0), None);
        assert_eq!(recognize_date("16/07/198", 0), None);
        assert_eq!(recognize_date("16/07/19823", 0), None);
        assert_eq!(recognize_date("10.10.10.10", 0), None);
        assert_eq!(recognize_date("16/07/1982/", 0), span(0, 10));
    }

    #[test]
    fn best_match_examples() {
        let url = best_match("http://192.168.0.1/x", 0, KindSet::ALL);
        assert_eq!(url, Some((TokenKind::Url, Span::new(0, 20).unwrap())));
        assert_eq!(best_match("192.168.0.1", 0, KindSet::EMPTY.with(TokenKind::Email)), None);
        let date = best_match("16/07/1982", 0, KindSet::ALL);
        assert_eq!(date, Some((TokenKind::Date, Span::new(0, 10).unwrap())));
        let ip = best_match("10.10.10.10", 0, KindSet::ALL);
        assert_eq!(ip, Some((TokenKind::Ip, Span::new(0, 11).unwrap())));
        // An email whose local part looks like an address outruns the IP.
        let email = best_match("1.2.3.4@x.co", 0, KindSet::ALL);
        assert_eq!(email, Some((TokenKind::Email, Span::new(0, 12).unwrap())));
    }
}
