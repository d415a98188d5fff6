//! Text entry points: band-set JSON, flat `key=value` configuration files
//! and substitution words.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::sequences::Word;
use crate::sets::BandSet;

/// Longest accepted configuration key.
pub const MAX_KEY_LEN: usize = 64;

#[derive(Deserialize)]
#[serde(untagged)]
enum BandSetDoc {
    Bare(Vec<(f64, f64)>),
    Wrapped { bands: Vec<(f64, f64)> },
}

/// Parses a band set from JSON.
///
/// Accepts either a bare `[[lo, hi], ...]` array or any object carrying a
/// `"bands"` field of that shape (so `spectrum` output can be fed back in).
/// Intervals are sorted and merged; reversed or non-finite ends are errors.
pub fn parse_band_set_json(text: &str) -> Result<BandSet> {
    let doc: BandSetDoc = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("band set JSON: {e}")))?;
    let raw = match doc {
        BandSetDoc::Bare(v) => v,
        BandSetDoc::Wrapped { bands } => bands,
    };
    BandSet::new(raw)
}

/// Parses a substitution word, ignoring surrounding whitespace.
pub fn parse_word(text: &str) -> Result<Word> {
    Word::from_str(text.trim())
}

/// Flat configuration read from `key = value` lines.
///
/// Keys are case-sensitive; `_` and `-` are interchangeable and stored as `-`
/// so that `tau_min` and `--tau-min` name the same setting.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(&normalize_key(key)).map(String::as_str)
    }

    /// Typed lookup; `Ok(None)` when the key is absent.
    pub fn get_parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| Error::Parse(format!("config key `{key}`: {e}"))),
        }
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>> {
        match self.get(key) {
            None => Ok(None),
            Some("true" | "yes" | "on" | "1") => Ok(Some(true)),
            Some("false" | "no" | "off" | "0") => Ok(Some(false)),
            Some(other) => Err(Error::Parse(format!(
                "config key `{key}`: expected a boolean, got {other:?}"
            ))),
        }
    }
}

fn normalize_key(k: &str) -> String {
    k.replace('_', "-")
}

/// Parses a flat configuration file.
///
/// One `key = value` pair per line. Blank lines and lines starting with `#`
/// are skipped; a `#` after the value starts a trailing comment. A repeated
/// key is an error rather than a silent override.
pub fn parse_config(text: &str) -> Result<Config> {
    let mut entries = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let content = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        }
        .trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(Error::Parse(format!("line {line_no}: expected key=value")));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k.len() > MAX_KEY_LEN {
            return Err(Error::Parse(format!("line {line_no}: bad key length")));
        }
        if !k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(Error::Parse(format!("line {line_no}: invalid key {k:?}")));
        }
        if v.is_empty() {
            return Err(Error::Parse(format!("line {line_no}: empty value for `{k}`")));
        }
        let key = normalize_key(k);
        if entries.insert(key, v.to_string()).is_some() {
            return Err(Error::Parse(format!("line {line_no}: duplicate key `{k}`")));
        }
    }
    Ok(Config { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn band_set_forms() {
        let b = parse_band_set_json("[[0.5, 1.0], [-1, 0]]").unwrap();
        assert_eq!(b.intervals(), &[(-1.0, 0.0), (0.5, 1.0)]);
        let w = parse_band_set_json(r#"{"band_count": 1, "bands": [[0, 2]]}"#).unwrap();
        assert_eq!(w.intervals(), &[(0.0, 2.0)]);
        assert_eq!(parse_band_set_json("[]").unwrap().len(), 0);
    }

    #[test]
    fn band_set_rejects() {
        for bad in ["", "[[1]]", "[[2, 1]]", r#"{"intervals": []}"#, "[[0, 1e999]]", "[0, 1]"] {
            assert!(parse_band_set_json(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn config_basics() {
        let c = parse_config("# run\npa = 1.0\n\ntau_min=0.3  # low end\noracle = yes\n").unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.get_parsed::<f64>("pa").unwrap(), Some(1.0));
        assert_eq!(c.get_parsed::<f64>("tau-min").unwrap(), Some(0.3));
        assert_eq!(c.get_bool("oracle").unwrap(), Some(true));
        assert_eq!(c.get_parsed::<u32>("gen").unwrap(), None);
        assert!(c.get_parsed::<u32>("pa").is_err());
    }

    #[test]
    fn config_rejects() {
        for bad in ["pa", "=1", "pa=", "p a=1", "pa=1\npa=2", "tau-min=1\ntau_min=2"] {
            assert!(parse_config(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn word_trims() {
        assert_eq!(parse_word(" abaab\n").unwrap().to_string(), "abaab");
        assert!(parse_word("abc").is_err());
        assert!(parse_word("").unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn band_set_json_round_trip(v in prop::collection::vec((-1e6..1e6f64, 0.0..10.0f64), 0..20)) {
            let b = BandSet::new(v.into_iter().map(|(lo, w)| (lo, lo + w)).collect()).unwrap();
            let text = serde_json::to_string(&b).unwrap();
            prop_assert_eq!(parse_band_set_json(&text).unwrap(), b);
        }

        #[test]
        fn config_round_trip(m in prop::collection::btree_map("[a-z][a-z0-9-]{0,10}", "[A-Za-z0-9.+-]{1,12}", 0..10)) {
            let text: String = m.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
            let c = parse_config(&text).unwrap();
            prop_assert_eq!(c.entries(), &m);
        }

        #[test]
        fn word_round_trip(s in "[ab]{0,64}") {
            prop_assert_eq!(parse_word(&s).unwrap().to_string(), s);
        }

        #[test]
        fn parsers_never_panic(s in ".{0,80}") {
            let _ = parse_band_set_json(&s);
            let _ = parse_config(&s);
            let _ = parse_word(&s);
        }
    }
}
