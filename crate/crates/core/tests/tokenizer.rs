use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use seqtok::{
    compute_stats, filter_text_with, scan_special, tokenize_with, Action, Config, KindSet, ScanStrategy, Token,
    TokenKind,
};
use seqtok_oracle::{self as oracle, corpus, Kind};

fn to_oracle(kind: TokenKind) -> Kind {
    match kind {
        TokenKind::Url => Kind::Url,
        TokenKind::Email => Kind::Email,
        TokenKind::Ip => Kind::Ip,
        TokenKind::Date => Kind::Date,
        TokenKind::Word => unreachable!(),
    }
}

fn random_config(rng: &mut StdRng) -> Config {
    let mut c = Config::default();
    for kind in TokenKind::SPECIAL {
        let action = if rng.random_bool(0.5) { Action::Remove } else { Action::Preserve };
        c.set_rule(kind, rng.random_bool(0.8), action);
    }
    c.keep_punctuation = rng.random_bool(0.3);
    c
}

fn all_remove() -> Config {
    let mut c = Config::default();
    for kind in TokenKind::SPECIAL {
        c.set_action(kind, Action::Remove);
    }
    c
}

fn oracle_rules(c: &Config) -> Vec<(Kind, bool)> {
    c.rules().iter().filter(|r| r.enabled).map(|r| (to_oracle(r.kind), r.action == Action::Preserve)).collect()
}

fn as_pairs(tokens: &[Token]) -> Vec<(String, String)> {
    tokens.iter().map(|t| (t.kind().name().to_string(), t.text().to_string())).collect()
}

fn check_stream(text: &str, tokens: &[Token]) {
    let mut last_end = 0;
    for t in tokens {
        assert!(t.span().start() >= last_end, "overlap or disorder in {text:?}");
        assert_eq!(&text[t.span().start()..t.span().end()], t.text());
        last_end = t.span().end();
    }
}

#[test]
fn strategies_agree_and_match_reference_tokenizer() {
    let mut rng = StdRng::seed_from_u64(21);
    for _ in 0..3_000 {
        let doc = corpus::document(&mut rng);
        let cfg = random_config(&mut rng);
        let direct = tokenize_with(&doc, &cfg, ScanStrategy::Direct);
        let anchored = tokenize_with(&doc, &cfg, ScanStrategy::Anchored);
        assert_eq!(direct, anchored, "{doc:?}");
        check_stream(&doc, &direct);
        assert_eq!(as_pairs(&direct), oracle::tokenize(&doc, &oracle_rules(&cfg), cfg.keep_punctuation), "{doc:?}");
    }
}

#[test]
fn filter_matches_reference_and_is_idempotent() {
    let mut rng = StdRng::seed_from_u64(22);
    for _ in 0..3_000 {
        let doc = corpus::document(&mut rng);
        let cfg = random_config(&mut rng);
        for strategy in [ScanStrategy::Direct, ScanStrategy::Anchored] {
            let once = filter_text_with(&doc, &cfg, strategy);
            assert_eq!(once, oracle::filter(&doc, &oracle_rules(&cfg)), "{doc:?}");
            assert_eq!(filter_text_with(&once, &cfg, strategy), once, "{doc:?}");
        }
    }
}

#[test]
fn removing_everything_leaves_no_residue() {
    let mut rng = StdRng::seed_from_u64(23);
    let cfg = all_remove();
    for _ in 0..3_000 {
        let doc = corpus::document(&mut rng);
        let out = filter_text_with(&doc, &cfg, ScanStrategy::Anchored);
        assert!(scan_special(&out, KindSet::ALL, ScanStrategy::Direct).is_empty(), "{doc:?} -> {out:?}");
    }
}

#[test]
fn all_disabled_is_plain_word_splitting() {
    let mut rng = StdRng::seed_from_u64(24);
    let mut cfg = Config::default();
    for kind in TokenKind::SPECIAL {
        cfg.set_enabled(kind, false);
    }
    for _ in 0..500 {
        let doc = corpus::document(&mut rng);
        let words: Vec<String> =
            doc.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty()).map(str::to_string).collect();
        let got: Vec<String> = tokenize_with(&doc, &cfg, ScanStrategy::Anchored).iter().map(|t| t.text().to_string()).collect();
        assert_eq!(got, words);
        assert_eq!(filter_text_with(&doc, &cfg, ScanStrategy::Anchored), doc);
    }
}

#[test]
fn stats_identity_over_corpus() {
    let mut rng = StdRng::seed_from_u64(25);
    for _ in 0..1_000 {
        let doc = corpus::document(&mut rng);
        let tokens = tokenize_with(&doc, &random_config(&mut rng), ScanStrategy::Anchored);
        let report = compute_stats(&tokens);
        assert_eq!(report.total_tokens, report.word_tokens + report.per_kind.sum());
        let freq = oracle::frequency_map(tokens.iter().map(|t| t.text()));
        assert_eq!(report.unique_tokens, freq.len());
        for (term, n) in &report.top_terms {
            assert_eq!(freq[term], *n);
        }
        assert!(report.top_terms.windows(2).all(|w| w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0)));
        let top_sum: usize = report.top_terms.iter().map(|t| t.1).sum();
        assert!(top_sum <= report.total_tokens);
    }
}

proptest! {
    #[test]
    fn strategies_agree_on_arbitrary_text(doc in "([a-z0-9 ./@:()-]|http://|www\\.|192\\.168\\.0\\.1|16/07/1982|é){0,30}") {
        prop_assert_eq!(
            scan_special(&doc, KindSet::ALL, ScanStrategy::Direct),
            scan_special(&doc, KindSet::ALL, ScanStrategy::Anchored)
        );
    }

    #[test]
    fn tokenize_is_deterministic(doc in "\\PC{0,60}") {
        let cfg = Config::default();
        let a = tokenize_with(&doc, &cfg, ScanStrategy::Anchored);
        check_stream(&doc, &a);
        prop_assert_eq!(a, tokenize_with(&doc, &cfg, ScanStrategy::Anchored));
    }

    #[test]
    fn filter_idempotent_on_arbitrary_text(doc in "([a-z0-9 ./@:,+_%-]|http://|a@b\\.co|1\\.2\\.3\\.4|5-9-82|\n){0,30}") {
        let cfg = all_remove();
        let once = filter_text_with(&doc, &cfg, ScanStrategy::Direct);
        prop_assert_eq!(filter_text_with(&once, &cfg, ScanStrategy::Direct), once.clone());
        prop_assert!(scan_special(&once, KindSet::ALL, ScanStrategy::Direct).is_empty());
    }
}
