//! Random document generation for property and acceptance tests.

use rand::seq::IndexedRandom;
use rand::Rng;

/// The four example literals, one per kind: IP, email, URL, date.
pub const REFERENCE_LITERALS: [&str; 4] = ["192.168.0.1", "qalhajja@kfu.edu.sa", "http://www.kfu.edu.sa", "16/07/1982"];

pub const NEAR_MISSES: &[&str] = &[
    "256.1.1.1",
    "1.2.3.4.5",
    "http://",
    "999.1.1.1",
    "a@b",
    "@kfu.edu.sa",
    "32/07/1982",
    "16/13/1982",
    "16/07-1982",
    "www.x",
    "1.2.3",
    "a..b@x.co",
    "x192.168.0.1",
    "1.2.3.4x",
    "a@x.c0m",
    "http://a",
    "16/07/198",
];

pub const EXTRAS: &[&str] = &[
    "www.kfu.edu.sa/a,b.",
    "5-9-82",
    "10.0.0.1",
    "HTTPS://Example.COM/path?q=1",
    "ftp://files.example.org:21/x",
    "user.name+tag@mail.example.com",
    "31.12.99",
    "http://192.168.0.1/x",
    "1/16/07/1982",
    "a.b@x.co.",
    "(see http://x.yz/a)",
    "010.000.1.255",
    "café",
    "東京",
    "naïve",
];

const SEPARATORS: &[&str] = &[
    " ", " ", " ", "  ", "\n", ", ", ". ", "(", ")", "-", "/", ".", "@", ":", ";", "+", "_", "%", "!", "?", "é",
    "\t", "",
];

fn word<R: Rng + ?Sized>(rng: &mut R) -> String {
    let len = rng.random_range(1..=8);
    if rng.random_bool(0.3) {
        (0..len.min(4)).map(|_| char::from(b'0' + rng.random_range(0..10))).collect()
    } else {
        (0..len).map(|_| char::from(b'a' + rng.random_range(0..26))).collect()
    }
}

/// A document of 5–30 pieces (literals, near-misses, words) joined by random
/// separators, some empty so that pieces fuse.
pub fn document<R: Rng + ?Sized>(rng: &mut R) -> String {
    let pieces = rng.random_range(5..=30);
    let mut doc = String::new();
    for i in 0..pieces {
        if i > 0 {
            doc.push_str(SEPARATORS.choose(rng).unwrap());
        }
        match rng.random_range(0..10) {
            0 | 1 => doc.push_str(REFERENCE_LITERALS.choose(rng).unwrap()),
            2 | 3 => doc.push_str(NEAR_MISSES.choose(rng).unwrap()),
            4 => doc.push_str(EXTRAS.choose(rng).unwrap()),
            _ => doc.push_str(&word(rng)),
        }
    }
    doc
}

const FRAGMENTS: &[&str] = &["http://", "https://", "ftp://", "www.", ".com", ".sa", "@", "192", "255", "16", "07", "1982"];
const SYMBOLS: &[u8] = b".@/-: ";

/// A string of at most `max_len` bytes over letters, digits and `. @ / - :`
/// and space, built from single characters and short fragments.
pub fn alphabet_string<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> String {
    let target = rng.random_range(0..=max_len);
    let mut s = String::new();
    while s.len() < target {
        let roll = rng.random_range(0..100);
        if roll < 15 {
            s.push_str(FRAGMENTS.choose(rng).unwrap());
        } else if roll < 45 {
            let c = if rng.random_bool(0.8) { b'a' + rng.random_range(0..26) } else { b'A' + rng.random_range(0..26) };
            s.push(char::from(c));
        } else if roll < 75 {
            s.push(char::from(b'0' + rng.random_range(0..10)));
        } else {
            s.push(char::from(*SYMBOLS.choose(rng).unwrap()));
        }
    }
    s.truncate(max_len);
    s
}
