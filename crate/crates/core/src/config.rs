//! XML configuration files.
//!
//! ```xml
//! <tokenizer-config>
//!   <sequences>
//!     <sequence type="ip" enabled="true" action="remove"/>
//!   </sequences>
//!   <options keep-punctuation="false" tag-output="true" stats="true"/>
//!   <output path="out/tokens.txt"/>
//! </tokenizer-config>
//! ```
//!
//! Every child of the root is optional and may appear at most once. Sequence
//! types not listed stay enabled with the `preserve` action. Parsing is
//! strict: unknown elements or attributes, text content, DOCTYPE declarations,
//! CDATA sections, processing instructions, entity references outside
//! attribute values, and namespaces are all rejected.

use std::borrow::Cow;
use std::fmt::Write as _;
use std::path::PathBuf;

use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use thiserror::Error;

use crate::model::{Action, Config, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: malformed XML: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {what} is not allowed in configuration files")]
    Forbidden { line: usize, what: &'static str },
    #[error("line {line}: unexpected element <{name}> in <{parent}>")]
    UnknownElement { line: usize, name: String, parent: String },
    #[error("line {line}: unknown attribute `{name}` on <{element}>")]
    UnknownAttribute { line: usize, element: String, name: String },
    #[error("line {line}: missing attribute `{name}` on <{element}>")]
    MissingAttribute { line: usize, element: &'static str, name: &'static str },
    #[error("line {line}: invalid value `{value}` for `{name}` on <{element}>")]
    InvalidValue { line: usize, element: &'static str, name: String, value: String },
    #[error("line {line}: unknown sequence type `{name}`")]
    UnknownSequenceType { line: usize, name: String },
    #[error("line {line}: duplicate sequence element for type `{kind}`")]
    DuplicateSequence { line: usize, kind: TokenKind },
    #[error("line {line}: duplicate <{name}> element")]
    DuplicateElement { line: usize, name: &'static str },
    #[error("line {line}: unexpected text content")]
    UnexpectedText { line: usize },
    #[error("missing <tokenizer-config> root element")]
    MissingRoot,
}

impl ConfigError {
    /// 1-based line of the offending construct, when known.
    pub fn line(&self) -> Option<usize> {
        match self {
            ConfigError::Malformed { line, .. }
            | ConfigError::Forbidden { line, .. }
            | ConfigError::UnknownElement { line, .. }
            | ConfigError::UnknownAttribute { line, .. }
            | ConfigError::MissingAttribute { line, .. }
            | ConfigError::InvalidValue { line, .. }
            | ConfigError::UnknownSequenceType { line, .. }
            | ConfigError::DuplicateSequence { line, .. }
            | ConfigError::DuplicateElement { line, .. }
            | ConfigError::UnexpectedText { line } => Some(*line),
            ConfigError::MissingRoot => None,
        }
    }
}

/// All four kinds enabled with `preserve`, punctuation dropped, untagged
/// output, statistics on, no output path.
pub fn default_config() -> Config {
    Config::default()
}

const ROOT: &str = "tokenizer-config";

#[derive(Clone, Copy, PartialEq, Eq)]
enum Element {
    Root,
    Sequences,
    Sequence,
    Options,
    Output,
}

impl Element {
    fn name(self) -> &'static str {
        match self {
            Element::Root => ROOT,
            Element::Sequences => "sequences",
            Element::Sequence => "sequence",
            Element::Options => "options",
            Element::Output => "output",
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    reader: Reader<&'a [u8]>,
    config: Config,
    stack: Vec<Element>,
    seen_root: bool,
    seen: Vec<Element>,
    seen_kinds: Vec<TokenKind>,
}

fn line_at(src: &str, offset: u64) -> usize {
    let end = (offset as usize).min(src.len());
    src.as_bytes()[..end].iter().filter(|&&b| b == b'\n').count() + 1
}

fn parse_bool(value: &str, element: &'static str, name: &str, line: usize) -> Result<bool, ConfigError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(ConfigError::InvalidValue { line, element, name: name.to_string(), value: value.to_string() }),
    }
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            reader: Reader::from_str(src),
            config: default_config(),
            stack: Vec::new(),
            seen_root: false,
            seen: Vec::new(),
            seen_kinds: Vec::new(),
        }
    }

    fn malformed(&self, message: impl ToString) -> ConfigError {
        ConfigError::Malformed { line: line_at(self.src, self.reader.error_position()), message: message.to_string() }
    }

    fn run(mut self) -> Result<Config, ConfigError> {
        loop {
            let line = line_at(self.src, self.reader.buffer_position());
            let event = self.reader.read_event().map_err(|e| self.malformed(e))?;
            match event {
                Event::Start(e) => {
                    let el = self.open(&e, line)?;
                    self.stack.push(el);
                }
                Event::Empty(e) => {
                    self.open(&e, line)?;
                }
                Event::End(_) => {
                    self.stack.pop();
                }
                Event::Text(t) => {
                    if !t.iter().all(u8::is_ascii_whitespace) {
                        return Err(ConfigError::UnexpectedText { line });
                    }
                }
                Event::Comment(_) | Event::Decl(_) => {}
                Event::CData(_) => return Err(ConfigError::Forbidden { line, what: "CDATA section" }),
                Event::PI(_) => return Err(ConfigError::Forbidden { line, what: "processing instruction" }),
                Event::DocType(_) => return Err(ConfigError::Forbidden { line, what: "DOCTYPE declaration" }),
                Event::GeneralRef(_) => return Err(ConfigError::UnexpectedText { line }),
                Event::Eof => break,
            }
        }
        if let Some(open) = self.stack.last() {
            let message = format!("unclosed <{}>", open.name());
            return Err(ConfigError::Malformed { line: line_at(self.src, self.src.len() as u64), message });
        }
        if !self.seen_root {
            return Err(ConfigError::MissingRoot);
        }
        Ok(self.config)
    }

    fn open(&mut self, e: &BytesStart<'_>, line: usize) -> Result<Element, ConfigError> {
        let raw = e.name();
        let name = String::from_utf8_lossy(raw.as_ref()).into_owned();
        if name.contains(':') {
            return Err(ConfigError::Forbidden { line, what: "namespaced element" });
        }
        let parent = self.stack.last().copied();
        let el = match (parent, name.as_str()) {
            (None, ROOT) if !self.seen_root => Element::Root,
            (Some(Element::Root), "sequences") => Element::Sequences,
            (Some(Element::Sequences), "sequence") => Element::Sequence,
            (Some(Element::Root), "options") => Element::Options,
            (Some(Element::Root), "output") => Element::Output,
            _ => {
                let parent = parent.map_or("document", Element::name).to_string();
                return Err(ConfigError::UnknownElement { line, name, parent });
            }
        };
        if el == Element::Root {
            self.seen_root = true;
        } else if el != Element::Sequence {
            if self.seen.contains(&el) {
                return Err(ConfigError::DuplicateElement { line, name: el.name() });
            }
            self.seen.push(el);
        }
        let attrs = self.attributes(e, el, line)?;
        match el {
            Element::Root | Element::Sequences => self.expect_no_attributes(el, &attrs, line)?,
            Element::Sequence => self.apply_sequence(&attrs, line)?,
            Element::Options => self.apply_options(&attrs, line)?,
            Element::Output => self.apply_output(&attrs, line)?,
        }
        Ok(el)
    }

    fn attributes(&self, e: &BytesStart<'_>, el: Element, line: usize) -> Result<Vec<(String, String)>, ConfigError> {
        let mut out = Vec::new();
        for attr in e.attributes() {
            let attr = attr.map_err(|err| ConfigError::Malformed { line, message: err.to_string() })?;
            let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
            if key == "xmlns" || key.contains(':') {
                return Err(ConfigError::Forbidden { line, what: "namespace attribute" });
            }
            let value: Cow<'_, str> = attr
                .decode_and_unescape_value(self.reader.decoder())
                .map_err(|err| ConfigError::Malformed { line, message: err.to_string() })?;
            out.push((key, value.into_owned()));
        }
        let allowed: &[&str] = match el {
            Element::Root | Element::Sequences => &[],
            Element::Sequence => &["type", "enabled", "action"],
            Element::Options => &["keep-punctuation", "tag-output", "stats"],
            Element::Output => &["path"],
        };
        if let Some((key, _)) = out.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(ConfigError::UnknownAttribute { line, element: el.name().to_string(), name: key.clone() });
        }
        Ok(out)
    }

    fn expect_no_attributes(&self, el: Element, attrs: &[(String, String)], line: usize) -> Result<(), ConfigError> {
        match attrs.first() {
            Some((k, _)) => Err(ConfigError::UnknownAttribute { line, element: el.name().to_string(), name: k.clone() }),
            None => Ok(()),
        }
    }

    fn apply_sequence(&mut self, attrs: &[(String, String)], line: usize) -> Result<(), ConfigError> {
        let get = |name: &str| attrs.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str());
        let type_name = get("type").ok_or(ConfigError::MissingAttribute { line, element: "sequence", name: "type" })?;
        let kind = TokenKind::from_name(type_name)
            .ok_or_else(|| ConfigError::UnknownSequenceType { line, name: type_name.to_string() })?;
        if self.seen_kinds.contains(&kind) {
            return Err(ConfigError::DuplicateSequence { line, kind });
        }
        self.seen_kinds.push(kind);
        let enabled = match get("enabled") {
            Some(v) => parse_bool(v, "sequence", "enabled", line)?,
            None => true,
        };
        let action = match get("action") {
            None | Some("preserve") => Action::Preserve,
            Some("remove") => Action::Remove,
            Some(v) => {
                return Err(ConfigError::InvalidValue {
                    line,
                    element: "sequence",
                    name: "action".to_string(),
                    value: v.to_string(),
                })
            }
        };
        self.config.set_rule(kind, enabled, action);
        Ok(())
    }

    fn apply_options(&mut self, attrs: &[(String, String)], line: usize) -> Result<(), ConfigError> {
        for (key, value) in attrs {
            let flag = parse_bool(value, "options", key, line)?;
            match key.as_str() {
                "keep-punctuation" => self.config.keep_punctuation = flag,
                "tag-output" => self.config.tag_output = flag,
                _ => self.config.stats_enabled = flag,
            }
        }
        Ok(())
    }

    fn apply_output(&mut self, attrs: &[(String, String)], line: usize) -> Result<(), ConfigError> {
        match attrs.iter().find(|(k, _)| k == "path") {
            Some((_, path)) if !path.is_empty() => {
                self.config.output_path = Some(PathBuf::from(path));
                Ok(())
            }
            Some((_, path)) => Err(ConfigError::InvalidValue {
                line,
                element: "output",
                name: "path".to_string(),
                value: path.clone(),
            }),
            None => Err(ConfigError::MissingAttribute { line, element: "output", name: "path" }),
        }
    }
}

pub fn parse_config(document: &str) -> Result<Config, ConfigError> {
    Parser::new(document).run()
}

/// Serializes every field of `config` explicitly. Paths that are not valid
/// UTF-8 are written lossily.
pub fn to_xml(config: &Config) -> String {
    let mut out = String::from("<tokenizer-config>\n  <sequences>\n");
    for rule in config.rules() {
        let _ = writeln!(
            out,
            "    <sequence type=\"{}\" enabled=\"{}\" action=\"{}\"/>",
            rule.kind.name(),
            rule.enabled,
            rule.action.name()
        );
    }
    out.push_str("  </sequences>\n");
    let _ = writeln!(
        out,
        "  <options keep-punctuation=\"{}\" tag-output=\"{}\" stats=\"{}\"/>",
        config.keep_punctuation, config.tag_output, config.stats_enabled
    );
    if let Some(path) = &config.output_path {
        let _ = writeln!(out, "  <output path=\"{}\"/>", escape(path.to_string_lossy()));
    }
    out.push_str("</tokenizer-config>\n");
    out
}
