//! Rabin–Karp fingerprint matching.
//!
//! Strings are represented by their polynomial fingerprint
//! `Σ s[i]·b^(m−1−i) mod q`. Sliding a window one byte to the right updates the
//! fingerprint in constant time, so a text can be searched for every pattern
//! of a given length in a single pass. Every fingerprint hit is confirmed by a
//! byte comparison before it is reported.

use std::cell::Cell;

use thiserror::Error;

use crate::model::{KindSet, TokenKind};

/// 2^61 − 1, a Mersenne prime.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FingerprintError {
    #[error("cannot fingerprint an empty byte string")]
    EmptyInput,
    #[error("modulus {0} is not a prime below 2^62")]
    BadModulus(u64),
    #[error("base {base} must lie in 2..{modulus}")]
    BadBase { base: u64, modulus: u64 },
}

/// Radix and prime modulus of the fingerprint polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FingerprintParams {
    base: u64,
    modulus: u64,
}

impl Default for FingerprintParams {
    fn default() -> Self {
        FingerprintParams { base: 256, modulus: MERSENNE_61 }
    }
}

impl FingerprintParams {
    pub fn new(base: u64, modulus: u64) -> Result<Self, FingerprintError> {
        if modulus >= 1 << 62 || !is_prime(modulus) {
            return Err(FingerprintError::BadModulus(modulus));
        }
        if base < 2 || base >= modulus {
            return Err(FingerprintError::BadBase { base, modulus });
        }
        Ok(FingerprintParams { base, modulus })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    fn reduce(&self, x: u128) -> u64 {
        if self.modulus == MERSENNE_61 {
            let m = MERSENNE_61 as u128;
            let s = (x & m) + (x >> 61);
            let s = ((s & m) + (s >> 61)) as u64;
            if s >= MERSENNE_61 {
                s - MERSENNE_61
            } else {
                s
            }
        } else {
            (x % self.modulus as u128) as u64
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    pub fn fingerprint(&self, bytes: &[u8]) -> Result<u64, FingerprintError> {
        if bytes.is_empty() {
            return Err(FingerprintError::EmptyInput);
        }
        Ok(bytes.iter().fold(0, |h, &b| self.push(h, b)))
    }

    #[inline]
    fn push(&self, h: u64, b: u8) -> u64 {
        self.reduce(h as u128 * self.base as u128 + b as u128)
    }

    /// `b^(window_len − 1) mod q`, the weight of the leading byte of a window.
    pub fn high_power(&self, window_len: usize) -> u64 {
        let mut exp = window_len.saturating_sub(1) as u64;
        let mut acc = 1 % self.modulus;
        let mut sq = self.base % self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            exp >>= 1;
        }
        acc
    }

    /// Fingerprint of the window shifted one byte to the right.
    pub fn roll(&self, prev: u64, outgoing: u8, incoming: u8, window_len: usize) -> u64 {
        self.roll_with(prev, self.mul(outgoing as u64, self.high_power(window_len)), incoming)
    }

    /// `outgoing_weight` is `outgoing · b^(m−1) mod q`.
    #[inline]
    fn roll_with(&self, prev: u64, outgoing_weight: u64, incoming: u8) -> u64 {
        let without = if prev >= outgoing_weight {
            prev - outgoing_weight
        } else {
            prev + self.modulus - outgoing_weight
        };
        self.push(without, incoming)
    }
}

pub fn fingerprint(bytes: &[u8], params: &FingerprintParams) -> Result<u64, FingerprintError> {
    params.fingerprint(bytes)
}

pub fn roll(prev: u64, outgoing: u8, incoming: u8, params: &FingerprintParams, window_len: usize) -> u64 {
    params.roll(prev, outgoing, incoming, window_len)
}

/// Deterministic Miller–Rabin; the witness set is exact for all 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in WITNESSES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

thread_local! {
    static SCAN_READS: Cell<u64> = const { Cell::new(0) };
}

/// Text bytes read by rolling passes on this thread since the last reset.
/// Verification reads after a fingerprint hit are not counted.
pub fn scan_byte_reads() -> u64 {
    SCAN_READS.with(Cell::get)
}

pub fn reset_scan_byte_reads() {
    SCAN_READS.with(|c| c.set(0));
}

fn record_reads(n: u64) {
    if cfg!(debug_assertions) {
        SCAN_READS.with(|c| c.set(c.get() + n));
    }
}

/// `(h·256 + b) mod (2^61 − 1)` for `h < 2^61 − 1`, without widening.
#[inline(always)]
fn push_m61_256(h: u64, b: u8) -> u64 {
    let s = ((h << 8) & MERSENNE_61) + (h >> 53) + b as u64;
    if s >= MERSENNE_61 {
        s - MERSENNE_61
    } else {
        s
    }
}

/// Slides a window of `len` bytes over `text`, calling `visit(offset, hash)`
/// for each window position. Bytes are ASCII-lowercased first when `fold` is set.
fn rolling_pass(
    params: &FingerprintParams,
    weights: &[u64; 256],
    len: usize,
    fold: bool,
    text: &[u8],
    visit: impl FnMut(usize, u64),
) {
    if len == 0 || len > text.len() {
        return;
    }
    let fast = params.base == 256 && params.modulus == MERSENNE_61;
    match (fast, fold) {
        (true, true) => roll_loop::<true>(MERSENNE_61, weights, len, text, push_m61_256, visit),
        (true, false) => roll_loop::<false>(MERSENNE_61, weights, len, text, push_m61_256, visit),
        (false, true) => roll_loop::<true>(params.modulus, weights, len, text, |h, b| params.push(h, b), visit),
        (false, false) => roll_loop::<false>(params.modulus, weights, len, text, |h, b| params.push(h, b), visit),
    }
    record_reads(len as u64 + 2 * (text.len() - len) as u64);
}

#[inline(always)]
fn roll_loop<const FOLD: bool>(
    modulus: u64,
    weights: &[u64; 256],
    len: usize,
    text: &[u8],
    push: impl Fn(u64, u8) -> u64,
    mut visit: impl FnMut(usize, u64),
) {
    let norm = |b: u8| if FOLD { b.to_ascii_lowercase() } else { b };
    let mut h = text[..len].iter().fold(0, |h, &b| push(h, norm(b)));
    visit(0, h);
    for (i, (&out, &inc)) in text.iter().zip(&text[len..]).enumerate() {
        let w = weights[norm(out) as usize];
        let without = if h >= w { h - w } else { h + modulus - w };
        h = push(without, norm(inc));
        visit(i + 1, h);
    }
}

fn outgoing_weights(params: &FingerprintParams, len: usize) -> [u64; 256] {
    let hp = params.high_power(len);
    std::array::from_fn(|b| params.mul(b as u64, hp))
}

/// Single-pattern matcher.
#[derive(Debug, Clone)]
pub struct RabinKarp {
    params: FingerprintParams,
    pattern: Vec<u8>,
    hash: u64,
    weights: [u64; 256],
}

impl RabinKarp {
    pub fn new(pattern: &[u8]) -> Result<Self, FingerprintError> {
        Self::with_params(pattern, FingerprintParams::default())
    }

    pub fn with_params(pattern: &[u8], params: FingerprintParams) -> Result<Self, FingerprintError> {
        let hash = params.fingerprint(pattern)?;
        Ok(RabinKarp { params, pattern: pattern.to_vec(), hash, weights: outgoing_weights(&params, pattern.len()) })
    }

    /// Every start offset of the pattern in `text`, ascending, overlaps included.
    pub fn find_all(&self, text: &[u8]) -> Vec<usize> {
        let m = self.pattern.len();
        let mut out = Vec::new();
        rolling_pass(&self.params, &self.weights, m, false, text, |i, h| {
            if h == self.hash && text[i..i + m] == self.pattern[..] {
                out.push(i);
            }
        });
        out
    }

    /// The first occurrence, if any.
    pub fn find(&self, text: &[u8]) -> Option<usize> {
        self.find_all(text).into_iter().next()
    }
}

pub fn find_all(pattern: &[u8], text: &[u8]) -> Result<Vec<usize>, FingerprintError> {
    Ok(RabinKarp::new(pattern)?.find_all(text))
}

/// A literal that must occur inside every match of its kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anchor {
    pub kind: TokenKind,
    pub literal: Vec<u8>,
    /// Match ASCII letters without regard to case.
    pub fold_case: bool,
}

/// Literals sharing a case rule. One window of the shortest literal's length
/// is rolled for the whole group; a fingerprint hit on a literal's prefix is
/// confirmed against the full literal.
#[derive(Debug, Clone)]
struct AnchorGroup {
    window: usize,
    fold_case: bool,
    /// Outgoing-byte weights, indexed by the raw (unfolded) byte.
    weights: [u64; 256],
    /// `(prefix fingerprint, index into anchors)`.
    members: Vec<(u64, usize)>,
}

/// Trigger literals per special kind.
#[derive(Debug, Clone)]
pub struct AnchorSet {
    params: FingerprintParams,
    anchors: Vec<Anchor>,
    groups: Vec<AnchorGroup>,
}

impl AnchorSet {
    /// Builds the set. Literals are lowercased when `fold_case` is set.
    ///
    /// # Errors
    ///
    /// Fails on an empty literal.
    pub fn new(anchors: Vec<Anchor>, params: FingerprintParams) -> Result<Self, FingerprintError> {
        let anchors: Vec<Anchor> = anchors
            .into_iter()
            .map(|mut a| {
                if a.fold_case {
                    a.literal.make_ascii_lowercase();
                }
                a
            })
            .collect();
        if anchors.iter().any(|a| a.literal.is_empty()) {
            return Err(FingerprintError::EmptyInput);
        }
        let mut groups = Vec::new();
        for fold_case in [false, true] {
            let Some(window) = anchors.iter().filter(|a| a.fold_case == fold_case).map(|a| a.literal.len()).min() else {
                continue;
            };
            let members = anchors
                .iter()
                .enumerate()
                .filter(|(_, a)| a.fold_case == fold_case)
                .map(|(idx, a)| params.fingerprint(&a.literal[..window]).map(|h| (h, idx)))
                .collect::<Result<Vec<_>, _>>()?;
            let hp = params.high_power(window);
            let weights = std::array::from_fn(|b| {
                let b = if fold_case { (b as u8).to_ascii_lowercase() } else { b as u8 };
                params.mul(b as u64, hp)
            });
            groups.push(AnchorGroup { window, fold_case, weights, members });
        }
        Ok(AnchorSet { params, anchors, groups })
    }

    /// The trigger set used by the anchored scanner: `@` for emails, the four
    /// URL prefixes (case-insensitive), `.` for IPv4 addresses, and the three
    /// date separators.
    pub fn standard() -> Self {
        let lit = |kind, s: &str, fold_case| Anchor { kind, literal: s.as_bytes().to_vec(), fold_case };
        let anchors = vec![
            lit(TokenKind::Email, "@", false),
            lit(TokenKind::Url, "http://", true),
            lit(TokenKind::Url, "https://", true),
            lit(TokenKind::Url, "ftp://", true),
            lit(TokenKind::Url, "www.", true),
            lit(TokenKind::Ip, ".", false),
            lit(TokenKind::Date, "/", false),
            lit(TokenKind::Date, "-", false),
            lit(TokenKind::Date, ".", false),
        ];
        AnchorSet::new(anchors, FingerprintParams::default()).expect("standard anchors are non-empty")
    }

    pub fn anchors(&self) -> &[Anchor] {
        &self.anchors
    }

    /// Distinct literal lengths, ascending.
    pub fn lengths(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.anchors.iter().map(|a| a.literal.len()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Every occurrence of an enabled kind's literals, ordered by offset and
    /// then by kind. Both case groups roll together in one pass over the text.
    pub fn find(&self, text: &[u8], enabled: KindSet) -> Vec<(TokenKind, usize)> {
        let lanes: Vec<Lane<'_>> = self
            .groups
            .iter()
            .filter(|g| g.window <= text.len())
            .filter_map(|g| Lane::new(g, &self.anchors, enabled))
            .collect();
        let mut out = Vec::new();
        let fast = self.params.base == 256 && self.params.modulus == MERSENNE_61;
        let modulus = self.params.modulus;
        let slow = |h, b| self.params.push(h, b);
        // Fixed lane counts keep every rolling state in a register.
        macro_rules! fused {
            ($n:literal) => {{
                let lanes: &[Lane<'_>; $n] = lanes.as_slice().try_into().expect("lane count");
                if fast {
                    fused_pass(modulus, text, lanes, push_m61_256, &mut out)
                } else {
                    fused_pass(modulus, text, lanes, slow, &mut out)
                }
            }};
        }
        // At most one group per case rule.
        match lanes.len() {
            0 => {}
            1 => fused!(1),
            _ => fused!(2),
        }
        out.sort_unstable_by_key(|&(kind, off)| (off, kind));
        out.dedup();
        out
    }
}

/// Rolling state of one anchor group during a scan.
struct Lane<'a> {
    len: usize,
    fold: bool,
    weights: &'a [u64; 256],
    /// One bit per member fingerprint's low byte: most windows are rejected
    /// with a single test.
    filter: [u64; 4],
    members: Vec<(u64, &'a Anchor)>,
}

impl<'a> Lane<'a> {
    fn new(group: &'a AnchorGroup, anchors: &'a [Anchor], enabled: KindSet) -> Option<Self> {
        let members: Vec<(u64, &Anchor)> = group
            .members
            .iter()
            .map(|&(h, i)| (h, &anchors[i]))
            .filter(|(_, a)| enabled.contains(a.kind))
            .collect();
        if members.is_empty() {
            return None;
        }
        let mut filter = [0u64; 4];
        for &(h, _) in &members {
            filter[(h as usize >> 6) & 3] |= 1 << (h & 63);
        }
        Some(Lane { len: group.window, fold: group.fold_case, weights: &group.weights, filter, members })
    }

    #[cold]
    fn confirm(&self, text: &[u8], start: usize, hash: u64, out: &mut Vec<(TokenKind, usize)>) {
        for &(h, anchor) in &self.members {
            if h != hash {
                continue;
            }
            let Some(window) = text.get(start..start + anchor.literal.len()) else {
                continue;
            };
            let same = if anchor.fold_case {
                window.eq_ignore_ascii_case(&anchor.literal)
            } else {
                window == &anchor.literal[..]
            };
            if same {
                out.push((anchor.kind, start));
            }
        }
    }
}

#[inline(always)]
fn fused_pass<const N: usize>(
    modulus: u64,
    text: &[u8],
    lanes: &[Lane<'_>; N],
    push: impl Fn(u64, u8) -> u64,
    out: &mut Vec<(TokenKind, usize)>,
) {
    let mut hashes = [0u64; N];
    for (i, &b) in text.iter().enumerate() {
        let lower = b.to_ascii_lowercase();
        for (lane, h) in lanes.iter().zip(hashes.iter_mut()) {
            if i >= lane.len {
                let w = lane.weights[text[i - lane.len] as usize];
                *h = if *h >= w { *h - w } else { *h + modulus - w };
            }
            *h = push(*h, if lane.fold { lower } else { b });
            if i + 1 >= lane.len && lane.filter[(*h as usize >> 6) & 3] >> (*h & 63) & 1 != 0 {
                lane.confirm(text, i + 1 - lane.len, *h, out);
            }
        }
    }
    for lane in lanes.iter() {
        record_reads(lane.len as u64 + 2 * (text.len() - lane.len) as u64);
    }
}

pub fn find_anchors(text: &[u8], anchors: &AnchorSet, enabled: KindSet) -> Vec<(TokenKind, usize)> {
    anchors.find(text, enabled)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fingerprint_examples() {
        let p = FingerprintParams::default();
        assert_eq!(fingerprint(b"abc", &p).unwrap(), 6_382_179);
        assert_eq!(fingerprint(b"a", &p).unwrap(), 97);
        assert_eq!(fingerprint(b"hello", &p), fingerprint(b"hello", &p));
        assert_eq!(fingerprint(b"", &p), Err(FingerprintError::EmptyInput));
    }

    #[test]
    fn roll_examples() {
        let p = FingerprintParams::default();
        let ab = p.fingerprint(b"ab").unwrap();
        assert_eq!(roll(ab, b'a', b'c', &p, 2), p.fingerprint(b"bc").unwrap());
        let x = p.fingerprint(b"x").unwrap();
        assert_eq!(roll(x, b'x', b'y', &p, 1), b'y' as u64);
    }

    #[test]
    fn small_prime_modulus_wraps() {
        let p = FingerprintParams::new(256, 257).unwrap();
        let h = p.fingerprint(b"abcdef").unwrap();
        assert!(h < 257);
        let rolled = p.roll(p.fingerprint(b"abcde").unwrap(), b'a', b'f', 5);
        assert_eq!(rolled, p.fingerprint(b"bcdef").unwrap());
    }

    #[test]
    fn params_validation() {
        assert!(FingerprintParams::new(256, MERSENNE_61).is_ok());
        assert_eq!(FingerprintParams::new(256, 100), Err(FingerprintError::BadModulus(100)));
        assert!(FingerprintParams::new(1, 101).is_err());
        assert!(FingerprintParams::new(101, 101).is_err());
        assert!(is_prime(2) && is_prime(97) && !is_prime(1) && !is_prime(561));
    }

    #[test]
    fn find_all_examples() {
        assert_eq!(find_all(b"ab", b"abab").unwrap(), vec![0, 2]);
        assert_eq!(find_all(b"aa", b"aaaa").unwrap(), vec![0, 1, 2]);
        assert_eq!(find_all(b"abcd", b"abc").unwrap(), Vec::<usize>::new());
        assert!(find_all(b"", b"abc").is_err());
        assert_eq!(RabinKarp::new(b"b").unwrap().find(b"abab"), Some(1));
    }

    #[test]
    fn find_anchors_examples() {
        let set = AnchorSet::standard();
        assert_eq!(set.lengths(), vec![1, 4, 6, 7, 8]);
        let email = KindSet::EMPTY.with(TokenKind::Email);
        assert_eq!(find_anchors(b"a@b", &set, email), vec![(TokenKind::Email, 1)]);
        assert!(find_anchors(b"x", &set, KindSet::ALL).is_empty());
        let url_ip = KindSet::EMPTY.with(TokenKind::Url).with(TokenKind::Ip);
        assert_eq!(find_anchors(b"http://a.b", &set, url_ip), vec![(TokenKind::Url, 0), (TokenKind::Ip, 8)]);
        assert_eq!(
            find_anchors(b"1.2", &set, KindSet::ALL),
            vec![(TokenKind::Ip, 1), (TokenKind::Date, 1)]
        );
        assert_eq!(
            find_anchors(b"HTTPS://X WwW.y", &set, KindSet::ALL),
            vec![
                (TokenKind::Url, 0),
                (TokenKind::Date, 6),
                (TokenKind::Date, 7),
                (TokenKind::Url, 10),
                (TokenKind::Ip, 13),
                (TokenKind::Date, 13)
            ]
        );
    }

    #[cfg(debug_assertions)]
    #[test]
    fn rolling_pass_reads_each_byte_a_bounded_number_of_times() {
        let text = vec![b'z'; 10_000];
        reset_scan_byte_reads();
        RabinKarp::new(b"abcdefg").unwrap().find_all(&text);
        let reads = scan_byte_reads();
        assert!(reads <= 2 * text.len() as u64, "{reads} reads for {} bytes", text.len());

        reset_scan_byte_reads();
        let set = AnchorSet::standard();
        set.find(&text, KindSet::ALL);
        let groups = set.lengths().len() as u64;
        assert!(scan_byte_reads() <= 2 * groups * text.len() as u64);
    }
}
