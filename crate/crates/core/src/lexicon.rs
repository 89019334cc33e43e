//! Token segmentation and chunk classification.
//!
//! Words are not sorted into nouns, adjectives and so on. Every surface
//! phrase is filed under one of three functional families:
//!
//! * **data** chunks carry information (attributes, attribute spaces, verbs,
//!   measurements, entities),
//! * **structure** chunks relate data chunks to each other ("be", "have",
//!   "of", "'s", punctuation, conjunctions),
//! * **pointer** chunks point at targets (demonstratives, interrogatives,
//!   prepositions).
//!
//! The lexicon itself is data: a JSON array of `{phrase, major, minor,
//! space_hint?}` objects. A seed covering the built-in vocabulary ships with
//! the crate and can be extended.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

const SEED: &str = include_str!("../data/lexicon.seed.json");

/// Interrogative keys every lexicon must be able to answer.
pub const REQUIRED_INTERROGATIVES: [&str; 8] = [
    "color",
    "person",
    "possession",
    "selection",
    "quantity",
    "kind",
    "spatial-position",
    "generic",
];

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("lexicon parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("lexicon io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("duplicate phrase {0:?}")]
    DuplicatePhrase(String),
    #[error("empty phrase")]
    EmptyPhrase,
    #[error("unknown minor class {minor:?} for major class {major:?}")]
    UnknownMinor { major: String, minor: String },
    #[error("unknown major class {0:?}")]
    UnknownMajor(String),
    #[error("{phrase:?}: {minor:?} entries require a space_hint")]
    MissingSpaceHint { phrase: String, minor: String },
    #[error("{phrase:?}: entity entries carry no space_hint")]
    UnexpectedSpaceHint { phrase: String },
    #[error("no interrogative registered for {0:?}")]
    MissingInterrogative(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DataKind {
    BasicAttribute,
    ExtendedAttribute,
    AttributeSpace,
    Verb,
    Measurement,
    EntityExplicitDynamic,
    EntityExplicitStatic,
    EntityImplicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureKind {
    Be,
    Have,
    Of,
    Possessive,
    DoAux,
    Punctuation,
    Conjunction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointerKind {
    Demonstrative,
    Interrogative,
    Preposition,
}

/// A `(major, minor)` pair. The enum nesting makes a mismatched pair
/// unrepresentable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChunkKind {
    Data(DataKind),
    Structure(StructureKind),
    Pointer(PointerKind),
}

impl ChunkKind {
    pub fn major(&self) -> &'static str {
        match self {
            ChunkKind::Data(_) => "Data",
            ChunkKind::Structure(_) => "Structure",
            ChunkKind::Pointer(_) => "Pointer",
        }
    }

    pub fn minor(&self) -> &'static str {
        match self {
            ChunkKind::Data(d) => match d {
                DataKind::BasicAttribute => "BasicAttribute",
                DataKind::ExtendedAttribute => "ExtendedAttribute",
                DataKind::AttributeSpace => "AttributeSpace",
                DataKind::Verb => "Verb",
                DataKind::Measurement => "Measurement",
                DataKind::EntityExplicitDynamic => "EntityExplicitDynamic",
                DataKind::EntityExplicitStatic => "EntityExplicitStatic",
                DataKind::EntityImplicit => "EntityImplicit",
            },
            ChunkKind::Structure(s) => match s {
                StructureKind::Be => "Be",
                StructureKind::Have => "Have",
                StructureKind::Of => "Of",
                StructureKind::Possessive => "Possessive",
                StructureKind::DoAux => "DoAux",
                StructureKind::Punctuation => "Punctuation",
                StructureKind::Conjunction => "Conjunction",
            },
            ChunkKind::Pointer(p) => match p {
                PointerKind::Demonstrative => "Demonstrative",
                PointerKind::Interrogative => "Interrogative",
                PointerKind::Preposition => "Preposition",
            },
        }
    }

    pub fn parse(major: &str, minor: &str) -> Result<Self, LexiconError> {
        let unknown = || LexiconError::UnknownMinor {
            major: major.to_string(),
            minor: minor.to_string(),
        };
        let kind = match major {
            "Data" => ChunkKind::Data(match minor {
                "BasicAttribute" => DataKind::BasicAttribute,
                "ExtendedAttribute" => DataKind::ExtendedAttribute,
                "AttributeSpace" => DataKind::AttributeSpace,
                "Verb" => DataKind::Verb,
                "Measurement" => DataKind::Measurement,
                "EntityExplicitDynamic" => DataKind::EntityExplicitDynamic,
                "EntityExplicitStatic" => DataKind::EntityExplicitStatic,
                "EntityImplicit" => DataKind::EntityImplicit,
                _ => return Err(unknown()),
            }),
            "Structure" => ChunkKind::Structure(match minor {
                "Be" => StructureKind::Be,
                "Have" => StructureKind::Have,
                "Of" => StructureKind::Of,
                "Possessive" => StructureKind::Possessive,
                "DoAux" => StructureKind::DoAux,
                "Punctuation" => StructureKind::Punctuation,
                "Conjunction" => StructureKind::Conjunction,
                _ => return Err(unknown()),
            }),
            "Pointer" => ChunkKind::Pointer(match minor {
                "Demonstrative" => PointerKind::Demonstrative,
                "Interrogative" => PointerKind::Interrogative,
                "Preposition" => PointerKind::Preposition,
                _ => return Err(unknown()),
            }),
            other => return Err(LexiconError::UnknownMajor(other.to_string())),
        };
        Ok(kind)
    }

    pub fn is_entity(&self) -> bool {
        matches!(
            self,
            ChunkKind::Data(
                DataKind::EntityExplicitDynamic
                    | DataKind::EntityExplicitStatic
                    | DataKind::EntityImplicit
            )
        )
    }
}

impl fmt::Display for ChunkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.major(), self.minor())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChunkClass {
    pub kind: ChunkKind,
    /// Attribute space the phrase belongs to ("red" -> color).
    pub space_hint: Option<String>,
}

impl ChunkClass {
    pub fn new(kind: ChunkKind, space_hint: Option<&str>) -> Self {
        Self {
            kind,
            space_hint: space_hint.map(str::to_string),
        }
    }

    pub fn hint(&self) -> Option<&str> {
        self.space_hint.as_deref()
    }
}

/// One row of the lexicon file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub phrase: String,
    pub major: String,
    pub minor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space_hint: Option<String>,
}

impl LexiconEntry {
    fn class(&self) -> Result<ChunkClass, LexiconError> {
        let kind = ChunkKind::parse(&self.major, &self.minor)?;
        let hint = self
            .space_hint
            .as_deref()
            .map(str::trim)
            .filter(|h| !h.is_empty());
        let needs_hint = matches!(
            kind,
            ChunkKind::Data(DataKind::BasicAttribute) | ChunkKind::Pointer(PointerKind::Preposition)
        );
        if needs_hint && hint.is_none() {
            return Err(LexiconError::MissingSpaceHint {
                phrase: self.phrase.clone(),
                minor: self.minor.clone(),
            });
        }
        if kind.is_entity() && hint.is_some() {
            return Err(LexiconError::UnexpectedSpaceHint {
                phrase: self.phrase.clone(),
            });
        }
        Ok(ChunkClass::new(kind, hint))
    }
}

/// A segmented token with its byte offset in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub start: usize,
}

/// A classified token group. `class` is `None` for words the lexicon does
/// not know; those usually turn out to be names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    pub surface: String,
    pub class: Option<ChunkClass>,
    /// Set when the surface is a plural of a known data entry ("crowns").
    pub plural: bool,
}

impl Chunk {
    pub fn new(surface: impl Into<String>, class: Option<ChunkClass>) -> Self {
        Self {
            surface: surface.into(),
            class,
            plural: false,
        }
    }

    pub fn norm(&self) -> String {
        self.surface.to_lowercase()
    }

    pub fn kind(&self) -> Option<ChunkKind> {
        self.class.as_ref().map(|c| c.kind)
    }

    pub fn hint(&self) -> Option<&str> {
        self.class.as_ref().and_then(|c| c.hint())
    }

    pub fn is(&self, kind: ChunkKind) -> bool {
        self.kind() == Some(kind)
    }

    pub fn is_unknown(&self) -> bool {
        self.class.is_none()
    }

    /// Data chunks, plus unknown words which are treated as names.
    pub fn is_data(&self) -> bool {
        matches!(self.kind(), None | Some(ChunkKind::Data(_)))
    }

    pub fn is_structure(&self, s: StructureKind) -> bool {
        self.is(ChunkKind::Structure(s))
    }

    pub fn is_pointer(&self, p: PointerKind) -> bool {
        self.is(ChunkKind::Pointer(p))
    }

    pub fn is_data_kind(&self, d: DataKind) -> bool {
        self.is(ChunkKind::Data(d))
    }

    pub fn is_terminal(&self) -> bool {
        self.is_structure(StructureKind::Punctuation)
            && matches!(self.surface.as_str(), "." | "?" | "!")
    }
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: HashMap<String, ChunkClass>,
    /// First token -> candidate phrases (token lists), longest first.
    by_first: HashMap<String, Vec<Vec<String>>>,
    interrogatives: BTreeMap<String, String>,
    order: Vec<String>,
}

impl Lexicon {
    /// The vocabulary shipped with the crate.
    pub fn seed() -> Self {
        Self::from_json(SEED).expect("bundled lexicon seed is valid")
    }

    pub fn seed_entries() -> Vec<LexiconEntry> {
        serde_json::from_str(SEED).expect("bundled lexicon seed is valid")
    }

    pub fn from_json(text: &str) -> Result<Self, LexiconError> {
        let entries: Vec<LexiconEntry> = serde_json::from_str(text)?;
        Self::from_entries(entries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_entries(entries: impl IntoIterator<Item = LexiconEntry>) -> Result<Self, LexiconError> {
        let mut lex = Lexicon {
            entries: HashMap::new(),
            by_first: HashMap::new(),
            interrogatives: BTreeMap::new(),
            order: Vec::new(),
        };
        lex.extend(entries)?;
        for key in REQUIRED_INTERROGATIVES {
            if !lex.interrogatives.contains_key(key) {
                return Err(LexiconError::MissingInterrogative(key.to_string()));
            }
        }
        Ok(lex)
    }

    /// Adds entries; a phrase that already exists is an error.
    pub fn extend(&mut self, entries: impl IntoIterator<Item = LexiconEntry>) -> Result<(), LexiconError> {
        for entry in entries {
            let class = entry.class()?;
            let tokens: Vec<String> = entry
                .phrase
                .split_whitespace()
                .map(str::to_lowercase)
                .collect();
            if tokens.is_empty() {
                return Err(LexiconError::EmptyPhrase);
            }
            let phrase = tokens.join(" ");
            if self.entries.contains_key(&phrase) {
                return Err(LexiconError::DuplicatePhrase(phrase));
            }
            if class.kind == ChunkKind::Pointer(PointerKind::Interrogative) {
                if let Some(hint) = class.hint() {
                    self.interrogatives
                        .entry(hint.to_string())
                        .or_insert_with(|| phrase.clone());
                }
            }
            let bucket = self.by_first.entry(tokens[0].clone()).or_default();
            bucket.push(tokens);
            bucket.sort_by_key(|b| std::cmp::Reverse(b.len()));
            self.order.push(phrase.clone());
            self.entries.insert(phrase, class);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, phrase: &str) -> Option<&ChunkClass> {
        let key = phrase
            .split_whitespace()
            .map(str::to_lowercase)
            .collect::<Vec<_>>()
            .join(" ");
        self.entries.get(&key)
    }

    /// Entries in insertion order, for export.
    pub fn entries(&self) -> Vec<LexiconEntry> {
        self.order
            .iter()
            .map(|phrase| {
                let class = &self.entries[phrase];
                LexiconEntry {
                    phrase: phrase.clone(),
                    major: class.kind.major().to_string(),
                    minor: class.kind.minor().to_string(),
                    space_hint: class.space_hint.clone(),
                }
            })
            .collect()
    }

    /// Interrogative phrase registered for a key such as "color" or "person".
    pub fn interrogative(&self, key: &str) -> Option<&str> {
        self.interrogatives.get(key).map(String::as_str)
    }

    pub fn interrogative_map(&self) -> &BTreeMap<String, String> {
        &self.interrogatives
    }

    /// Whether the word is a common noun that takes an article when
    /// rendered ("the fridge"), as opposed to a name ("Jack").
    pub fn takes_article(&self, word: &str) -> bool {
        let class = self.lookup(word).or_else(|| {
            singular_candidates(&word.to_lowercase())
                .into_iter()
                .find_map(|s| self.lookup(&s))
        });
        matches!(
            class.map(|c| c.kind),
            Some(ChunkKind::Data(
                DataKind::EntityExplicitDynamic
                    | DataKind::EntityExplicitStatic
                    | DataKind::EntityImplicit
                    | DataKind::ExtendedAttribute
                    | DataKind::AttributeSpace
            ))
        )
    }

    fn plural_class(&self, lower: &str) -> Option<&ChunkClass> {
        singular_candidates(lower).into_iter().find_map(|stem| {
            self.entries.get(&stem).filter(|c| {
                matches!(
                    c.kind,
                    ChunkKind::Data(
                        DataKind::EntityExplicitDynamic
                            | DataKind::EntityExplicitStatic
                            | DataKind::EntityImplicit
                            | DataKind::ExtendedAttribute
                            | DataKind::AttributeSpace
                    )
                )
            })
        })
    }
}

fn singular_candidates(lower: &str) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(stem) = lower.strip_suffix("ies") {
        out.push(format!("{stem}y"));
    }
    if let Some(stem) = lower.strip_suffix("es") {
        out.push(stem.to_string());
    }
    if let Some(stem) = lower.strip_suffix('s') {
        if !stem.ends_with('s') {
            out.push(stem.to_string());
        }
    }
    out.retain(|s| !s.is_empty());
    out
}

/// Plural surface form for a noun, by the regular English suffix rule.
pub fn pluralize(word: &str) -> String {
    let lower = word.to_lowercase();
    if ["s", "x", "z", "ch", "sh"].iter().any(|s| lower.ends_with(s)) {
        format!("{word}es")
    } else if lower.ends_with('y')
        && !lower.ends_with("ay")
        && !lower.ends_with("ey")
        && !lower.ends_with("oy")
        && !lower.ends_with("uy")
    {
        format!("{}ies", &word[..word.len() - 1])
    } else {
        format!("{word}s")
    }
}

const SPLIT_PUNCT: [char; 4] = [',', '.', '?', '!'];

/// Splits an utterance into whitespace-separated tokens with `, . ? !`
/// broken out as standalone tokens. Decimal points and digit-group commas
/// ("3.5", "1,000") stay inside their number.
pub fn segment(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut current: Option<usize> = None;
    let flush = |tokens: &mut Vec<Token>, start: Option<usize>, end: usize| {
        if let Some(s) = start {
            tokens.push(Token {
                text: text[s..end].to_string(),
                start: s,
            });
        }
    };
    for (i, &(pos, ch)) in chars.iter().enumerate() {
        if ch.is_whitespace() {
            flush(&mut tokens, current.take(), pos);
            continue;
        }
        if SPLIT_PUNCT.contains(&ch) {
            let between_digits = matches!(ch, '.' | ',')
                && i > 0
                && chars[i - 1].1.is_ascii_digit()
                && chars.get(i + 1).is_some_and(|(_, c)| c.is_ascii_digit())
                && current.is_some();
            if !between_digits {
                flush(&mut tokens, current.take(), pos);
                tokens.push(Token {
                    text: ch.to_string(),
                    start: pos,
                });
                continue;
            }
        }
        if current.is_none() {
            current = Some(pos);
        }
    }
    flush(&mut tokens, current, text.len());
    tokens
}

fn split_possessive(token: &str) -> Option<(&str, &str)> {
    for suffix in ["'s", "\u{2019}s"] {
        if let Some(stem) = token.strip_suffix(suffix) {
            if !stem.is_empty() {
                return Some((stem, &token[stem.len()..]));
            }
        }
    }
    None
}

/// Classifies tokens by longest-match phrase lookup, left to right.
///
/// A trailing `'s` is split into its own possessive chunk, numerals are
/// quantity measurements, and a regular plural of a known data entry takes
/// that entry's class. Anything else is carried forward unclassified.
pub fn classify<S: AsRef<str>>(tokens: &[S], lex: &Lexicon) -> Vec<Chunk> {
    let mut words: Vec<String> = Vec::with_capacity(tokens.len());
    for t in tokens {
        let t = t.as_ref();
        match split_possessive(t) {
            Some((stem, suffix)) if lex.lookup(t).is_none() => {
                words.push(stem.to_string());
                words.push(suffix.to_string());
            }
            _ => words.push(t.to_string()),
        }
    }
    let lower: Vec<String> = words
        .iter()
        .map(|w| w.to_lowercase().replace('\u{2019}', "'"))
        .collect();

    let mut chunks = Vec::new();
    let mut i = 0;
    while i < words.len() {
        let matched = lex.by_first.get(&lower[i]).and_then(|candidates| {
            candidates
                .iter()
                .find(|phrase| lower.get(i..i + phrase.len()) == Some(&phrase[..]))
        });
        if let Some(phrase) = matched {
            let n = phrase.len();
            let class = lex.entries.get(&phrase.join(" ")).cloned();
            chunks.push(Chunk::new(words[i..i + n].join(" "), class));
            i += n;
            continue;
        }
        let word = &lower[i];
        let chunk = if !word.is_empty() && word.chars().all(|c| c.is_ascii_digit()) {
            Chunk::new(
                words[i].clone(),
                Some(ChunkClass::new(ChunkKind::Data(DataKind::Measurement), Some("quantity"))),
            )
        } else if let Some(class) = lex.plural_class(word) {
            Chunk {
                surface: words[i].clone(),
                class: Some(class.clone()),
                plural: true,
            }
        } else {
            Chunk::new(words[i].clone(), None)
        };
        chunks.push(chunk);
        i += 1;
    }
    chunks
}

/// `segment` followed by `classify`.
pub fn analyze(text: &str, lex: &Lexicon) -> Vec<Chunk> {
    let tokens: Vec<String> = segment(text).into_iter().map(|t| t.text).collect();
    classify(&tokens, lex)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(s: &str) -> Vec<String> {
        segment(s).into_iter().map(|t| t.text).collect()
    }

    #[test]
    fn segments_dialogue_turns() {
        assert_eq!(
            texts("Nana, do we have any apple?"),
            ["Nana", ",", "do", "we", "have", "any", "apple", "?"]
        );
        assert_eq!(texts("Give me an apple."), ["Give", "me", "an", "apple", "."]);
        assert!(texts("").is_empty());
        assert!(texts("   \t ").is_empty());
        assert_eq!(texts("It is 3.5 degrees, ok?"), ["It", "is", "3.5", "degrees", ",", "ok", "?"]);
    }

    #[test]
    fn classifies_basic_words() {
        let lex = Lexicon::seed();
        let red = classify(&["red"], &lex);
        assert_eq!(red.len(), 1);
        assert_eq!(red[0].kind(), Some(ChunkKind::Data(DataKind::BasicAttribute)));
        assert_eq!(red[0].hint(), Some("color"));

        let is = classify(&["is"], &lex);
        assert_eq!(is[0].kind(), Some(ChunkKind::Structure(StructureKind::Be)));
    }

    #[test]
    fn longest_match_wins() {
        let lex = Lexicon::seed();
        let chunks = classify(&["on", "the", "left", "side", "of"], &lex);
        assert_eq!(chunks.len(), 1);
        assert_eq!(chunks[0].kind(), Some(ChunkKind::Pointer(PointerKind::Preposition)));
        assert_eq!(chunks[0].hint(), Some("spatial-position"));

        let chunks = classify(&["on", "the", "sofa"], &lex);
        assert_eq!(chunks.len(), 3);
    }

    #[test]
    fn possessive_and_plural_handling() {
        let lex = Lexicon::seed();
        let chunks = analyze("The dog's name is Wirete.", &lex);
        let surfaces: Vec<_> = chunks.iter().map(|c| c.surface.as_str()).collect();
        assert_eq!(surfaces, ["The", "dog", "'s", "name", "is", "Wirete", "."]);
        assert!(chunks[2].is_structure(StructureKind::Possessive));
        assert!(chunks[5].is_unknown());

        let crowns = analyze("twelve crowns", &lex);
        assert!(crowns[1].plural);
        assert!(crowns[1].is_data_kind(DataKind::EntityExplicitDynamic));
        assert!(analyze("3", &lex)[0].is_data_kind(DataKind::Measurement));
    }

    #[test]
    fn quantity_words_are_measurements() {
        let lex = Lexicon::seed();
        for w in ["a", "an", "any", "twelve"] {
            let c = &classify(&[w], &lex)[0];
            assert!(c.is_data_kind(DataKind::Measurement), "{w}");
        }
        let c = &classify(&["do"], &lex)[0];
        assert!(c.is_structure(StructureKind::DoAux));
    }

    #[test]
    fn interrogative_map_is_complete() {
        let lex = Lexicon::seed();
        let expected = [
            ("color", "what color"),
            ("person", "who"),
            ("possession", "whose"),
            ("selection", "which"),
            ("quantity", "how many"),
            ("kind", "what kind of"),
            ("spatial-position", "where"),
            ("generic", "what"),
        ];
        for (key, phrase) in expected {
            assert_eq!(lex.interrogative(key), Some(phrase));
        }
    }

    #[test]
    fn rejects_invalid_entries() {
        let dup = r#"[{"phrase":"red","major":"Data","minor":"BasicAttribute","space_hint":"color"},
                      {"phrase":"Red","major":"Data","minor":"BasicAttribute","space_hint":"color"}]"#;
        assert!(matches!(Lexicon::from_json(dup), Err(LexiconError::DuplicatePhrase(_))));

        let no_hint = r#"[{"phrase":"red","major":"Data","minor":"BasicAttribute"}]"#;
        assert!(matches!(Lexicon::from_json(no_hint), Err(LexiconError::MissingSpaceHint { .. })));

        let entity_hint =
            r#"[{"phrase":"cat","major":"Data","minor":"EntityExplicitDynamic","space_hint":"pet"}]"#;
        assert!(matches!(Lexicon::from_json(entity_hint), Err(LexiconError::UnexpectedSpaceHint { .. })));

        let bad_pair = r#"[{"phrase":"cat","major":"Structure","minor":"Verb"}]"#;
        assert!(matches!(Lexicon::from_json(bad_pair), Err(LexiconError::UnknownMinor { .. })));

        let no_interrogatives = r#"[{"phrase":"cat","major":"Data","minor":"EntityExplicitDynamic"}]"#;
        assert!(matches!(
            Lexicon::from_json(no_interrogatives),
            Err(LexiconError::MissingInterrogative(_))
        ));
    }

    #[test]
    fn seed_round_trips_through_entries() {
        let lex = Lexicon::seed();
        let again = Lexicon::from_entries(lex.entries()).unwrap();
        assert_eq!(again.len(), lex.len());
        assert_eq!(Lexicon::seed_entries().len(), lex.len());
    }

    #[test]
    fn plural_forms() {
        assert_eq!(pluralize("apple"), "apples");
        assert_eq!(pluralize("box"), "boxes");
        assert_eq!(pluralize("cherry"), "cherries");
        assert_eq!(pluralize("toy"), "toys");
    }
}
