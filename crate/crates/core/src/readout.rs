//! Reading the knowledge base back out as sentences.
//!
//! Defining reading (DRM) states what a node's attributes are, set reading
//! (SRM) states which attribute spaces a node has, and process reading (PRM)
//! states who does what to whom.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ids::NodeId;
use crate::lexicon::Lexicon;
use crate::memory::{AttributeRecord, AttributeValue, Memory, Timestamp};
use crate::spm::{capitalize, SpwTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ReadingMode {
    Drm,
    Srm,
    Prm,
}

impl fmt::Display for ReadingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReadingMode::Drm => "DRM",
            ReadingMode::Srm => "SRM",
            ReadingMode::Prm => "PRM",
        })
    }
}

impl std::str::FromStr for ReadingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_lowercase().as_str() {
            "drm" => Ok(ReadingMode::Drm),
            "srm" => Ok(ReadingMode::Srm),
            "prm" => Ok(ReadingMode::Prm),
            other => Err(format!("unknown reading mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReadoutError {
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("a process reading needs an active role")]
    MissingActiveRole,
    #[error("a process reading needs a verb")]
    MissingVerb,
}

/// One generated sentence with the parts it was built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Readout {
    pub mode: ReadingMode,
    pub subjects: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asc: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verb: Option<String>,
    pub objects: Vec<String>,
    pub sentence: String,
}

impl fmt::Display for Readout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.sentence)
    }
}

/// How far a set reading follows inclusion edges.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SetDepth {
    /// "Queen Elizabeth has pet"
    #[default]
    Spaces,
    /// "Queen Elizabeth has cat and dog"
    Members,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReadOptions {
    /// Leave the attribute space out when the value already names it
    /// ("Apple is red").
    pub brief: bool,
    pub depth: SetDepth,
    /// Read the records valid at this instant instead of the open ones.
    pub at: Option<Timestamp>,
}

pub fn join_and<S: AsRef<str>>(items: &[S]) -> String {
    match items {
        [] => String::new(),
        [one] => one.as_ref().to_string(),
        [init @ .., last] => {
            let head: Vec<&str> = init.iter().map(AsRef::as_ref).collect();
            format!("{} and {}", head.join(", "), last.as_ref())
        }
    }
}

pub fn possessive(name: &str) -> String {
    format!("{name}'s")
}

/// Surface form of a stored value.
pub fn render_value(value: &AttributeValue) -> String {
    match value {
        AttributeValue::Word(w) => w.clone(),
        AttributeValue::Position { relation, sapp } => {
            format!("{} {}", SpwTable::default().relation_word(*relation), sapp.name())
        }
        AttributeValue::Measure { value, unit } => format!("{value} {unit}"),
        AttributeValue::Flag(b) => if *b { "yes" } else { "no" }.to_string(),
    }
}

fn be(plural: bool) -> &'static str {
    if plural {
        "are"
    } else {
        "is"
    }
}

fn resolve<'a>(memory: &'a Memory, name: &str) -> Result<&'a NodeId, ReadoutError> {
    memory.find(name).ok_or_else(|| ReadoutError::UnknownNode(name.to_string()))
}

fn records<'a>(memory: &'a Memory, node: &NodeId, at: Option<Timestamp>) -> Vec<&'a AttributeRecord> {
    let Some(sheet) = memory.sheet(node) else {
        return Vec::new();
    };
    match at {
        None => sheet.current(),
        Some(t) => {
            let mut out: Vec<&AttributeRecord> = sheet
                .spaces()
                .into_iter()
                .filter_map(|s| sheet.at(s, t))
                .collect();
            out.sort_by(|a, b| a.space.cmp(&b.space));
            out
        }
    }
}

fn is_brief(lex: &Lexicon, space: &str, value: &AttributeValue) -> bool {
    match value {
        AttributeValue::Word(w) => lex.lookup(w).and_then(|c| c.hint()) == Some(space),
        _ => false,
    }
}

/// "A's L is V", or "A is V" without an ASC. Number agreement follows
/// both sides.
pub fn defining(subjects: Vec<String>, asc: Option<&str>, objects: Vec<String>) -> Readout {
    let plural = subjects.len() > 1 || objects.len() > 1;
    let lead = join_and(&subjects);
    let sentence = match asc {
        Some(a) => format!("{} {a} {} {}", possessive(&lead), be(plural), join_and(&objects)),
        None => format!("{lead} {} {}", be(plural), join_and(&objects)),
    };
    Readout {
        mode: ReadingMode::Drm,
        subjects,
        asc: asc.map(str::to_string),
        verb: None,
        objects,
        sentence: capitalize(&sentence),
    }
}

/// Defining readings of a node: its attribute records, its inclusion
/// edges grouped by space, and the virtual edges in both directions.
pub fn read_defining(memory: &Memory, lex: &Lexicon, node: &str, opts: ReadOptions) -> Result<Vec<Readout>, ReadoutError> {
    let node = resolve(memory, node)?;
    let name = node.name().to_string();
    let mut out = Vec::new();
    for r in records(memory, node, opts.at) {
        let value = render_value(&r.value);
        if opts.brief && is_brief(lex, &r.space, &r.value) {
            out.push(defining(vec![name.clone()], None, vec![value]));
        } else {
            out.push(defining(vec![name.clone()], Some(&r.space), vec![value]));
        }
    }
    let mut grouped: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for (space, child) in memory.graph.solid_children(node) {
        grouped.entry(space).or_default().push(child.name().to_string());
    }
    for (space, children) in grouped {
        out.push(defining(vec![name.clone()], Some(space), children));
    }
    for (space, to) in memory.graph.dashed_out(node) {
        out.push(defining(vec![name.clone()], Some(space), vec![to.name().to_string()]));
    }
    for (from, space) in memory.graph.dashed_in(node) {
        out.push(defining(
            vec![name.clone()],
            None,
            vec![format!("{space} of {}", from.name())],
        ));
    }
    Ok(out)
}

/// One defining reading over conjoined subjects that share a value in
/// `space` ("Tail and paw's color are black"). Returns `None` when the
/// subjects disagree or one has no value.
pub fn read_defining_many(
    memory: &Memory,
    nodes: &[&str],
    space: &str,
    at: Option<Timestamp>,
) -> Result<Option<Readout>, ReadoutError> {
    let mut names = Vec::new();
    let mut shared: Option<String> = None;
    for n in nodes {
        let node = resolve(memory, n)?;
        names.push(node.name().to_string());
        let record = match at {
            None => memory.current(node, space),
            Some(t) => memory.attribute_at(node, space, t),
        };
        let Some(record) = record else {
            return Ok(None);
        };
        let value = render_value(&record.value);
        match &shared {
            Some(v) if *v != value => return Ok(None),
            _ => shared = Some(value),
        }
    }
    Ok(shared.map(|v| defining(names, Some(space), vec![v])))
}

fn srm(subject: &str, objects: Vec<String>) -> Readout {
    Readout {
        mode: ReadingMode::Srm,
        subjects: vec![subject.to_string()],
        asc: None,
        verb: Some("has".into()),
        sentence: capitalize(&format!("{subject} has {}", join_and(&objects))),
        objects,
    }
}

/// Set readings of a node: which attribute spaces (or, at member depth,
/// which included nodes) it has.
pub fn read_set(memory: &Memory, node: &str, opts: ReadOptions) -> Result<Vec<Readout>, ReadoutError> {
    let node = resolve(memory, node)?;
    let name = node.name();
    let mut seen: Vec<String> = Vec::new();
    let mut out = Vec::new();
    let mut push = |objects: Vec<String>, out: &mut Vec<Readout>| {
        let key = objects.join("\u{1f}");
        if !seen.contains(&key) {
            seen.push(key);
            out.push(srm(name, objects));
        }
    };
    for r in records(memory, node, opts.at) {
        push(vec![r.space.clone()], &mut out);
    }
    let mut grouped: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for (space, child) in memory.graph.solid_children(node) {
        grouped.entry(space).or_default().push(child.name().to_string());
    }
    for (space, children) in grouped {
        match opts.depth {
            SetDepth::Spaces => push(vec![space.to_string()], &mut out),
            SetDepth::Members => push(children, &mut out),
        }
    }
    for (space, _) in memory.graph.dashed_out(node) {
        push(vec![space.to_string()], &mut out);
    }
    Ok(out)
}

/// "Queen read the book." Common-noun passives take "the".
pub fn read_process(lex: &Lexicon, active: &[&str], verb: &str, passive: Option<&str>) -> Result<Readout, ReadoutError> {
    let active: Vec<String> = active
        .iter()
        .map(|a| a.trim().to_string())
        .filter(|a| !a.is_empty())
        .collect();
    if active.is_empty() {
        return Err(ReadoutError::MissingActiveRole);
    }
    let verb = verb.trim();
    if verb.is_empty() {
        return Err(ReadoutError::MissingVerb);
    }
    let mut sentence = format!("{} {verb}", join_and(&active));
    let mut objects = Vec::new();
    if let Some(p) = passive.map(str::trim).filter(|p| !p.is_empty()) {
        if lex.takes_article(p) {
            sentence.push_str(&format!(" the {p}"));
        } else {
            sentence.push_str(&format!(" {p}"));
        }
        objects.push(p.to_string());
    }
    Ok(Readout {
        mode: ReadingMode::Prm,
        subjects: active,
        asc: None,
        verb: Some(verb.to_string()),
        objects,
        sentence: capitalize(&sentence),
    })
}

/// Process readings of a node: its virtual edges labeled by a verb
/// ("Queen read the book").
pub fn read_processes(memory: &Memory, lex: &Lexicon, node: &str) -> Result<Vec<Readout>, ReadoutError> {
    let node = resolve(memory, node)?;
    let mut out = Vec::new();
    for (space, to) in memory.graph.dashed_out(node) {
        let is_verb = lex
            .lookup(space)
            .is_some_and(|c| c.kind == crate::lexicon::ChunkKind::Data(crate::lexicon::DataKind::Verb));
        if is_verb {
            out.push(read_process(lex, &[node.name()], space, Some(to.name()))?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::Relation;
    use chrono::{TimeZone, Utc};

    fn kb() -> Memory {
        let t = Utc.with_ymd_and_hms(2020, 10, 1, 12, 0, 0).unwrap();
        let mut m = Memory::new();
        m.update_attribute("apple", "color", AttributeValue::word("red"), None, t).unwrap();
        m.update_attribute("apple", "spatial-position", AttributeValue::position(Relation::Inside, "fridge"), None, t)
            .unwrap();
        m.graph.assert_inclusion("Queen Elizabeth", "pet", "cat").unwrap();
        m.graph.assert_inclusion("Queen Elizabeth", "pet", "dog").unwrap();
        m.graph.assert_virtual("dog", "friend", "cat", true).unwrap();
        m
    }

    fn sentences(r: Vec<Readout>) -> Vec<String> {
        r.into_iter().map(|r| r.sentence).collect()
    }

    #[test]
    fn defining_reading_of_records() {
        let lex = Lexicon::seed();
        let out = sentences(read_defining(&kb(), &lex, "apple", ReadOptions::default()).unwrap());
        assert!(out.contains(&"Apple's color is red".to_string()), "{out:?}");
        assert!(out.contains(&"Apple's spatial-position is in fridge".to_string()));
    }

    #[test]
    fn brief_form_drops_the_space() {
        let lex = Lexicon::seed();
        let opts = ReadOptions {
            brief: true,
            ..Default::default()
        };
        let out = sentences(read_defining(&kb(), &lex, "apple", opts).unwrap());
        assert!(out.contains(&"Apple is red".to_string()), "{out:?}");
    }

    #[test]
    fn grouped_children_agree_in_number() {
        let lex = Lexicon::seed();
        let out = sentences(read_defining(&kb(), &lex, "Queen Elizabeth", ReadOptions::default()).unwrap());
        assert_eq!(out, vec!["Queen Elizabeth's pet are cat and dog"]);
    }

    #[test]
    fn virtual_edges_read_both_ways() {
        let lex = Lexicon::seed();
        let out = sentences(read_defining(&kb(), &lex, "dog", ReadOptions::default()).unwrap());
        assert!(out.contains(&"Dog's friend is cat".to_string()));
        assert!(out.contains(&"Dog is friend of cat".to_string()));
    }

    #[test]
    fn set_reading_depths() {
        let m = kb();
        let spaces = sentences(read_set(&m, "Queen Elizabeth", ReadOptions::default()).unwrap());
        assert_eq!(spaces, vec!["Queen Elizabeth has pet"]);
        let opts = ReadOptions {
            depth: SetDepth::Members,
            ..Default::default()
        };
        let members = sentences(read_set(&m, "Queen Elizabeth", opts).unwrap());
        assert_eq!(members, vec!["Queen Elizabeth has cat and dog"]);
    }

    #[test]
    fn process_reading_needs_an_active_role() {
        let lex = Lexicon::seed();
        let r = read_process(&lex, &["Queen"], "read", Some("book")).unwrap();
        assert_eq!(r.sentence, "Queen read the book");
        assert_eq!(read_process(&lex, &[], "read", None), Err(ReadoutError::MissingActiveRole));
    }

    #[test]
    fn unknown_node_is_an_error() {
        let lex = Lexicon::seed();
        assert_eq!(
            read_defining(&kb(), &lex, "unicorn", ReadOptions::default()),
            Err(ReadoutError::UnknownNode("unicorn".into()))
        );
    }

    #[test]
    fn process_readings_follow_verb_edges() {
        let lex = Lexicon::seed();
        let mut m = Memory::new();
        m.graph.assert_virtual("Queen", "read", "book", false).unwrap();
        m.graph.assert_virtual("Queen", "son", "Charles", false).unwrap();
        let rs = read_processes(&m, &lex, "queen").unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].sentence, "Queen read the book");
        assert_eq!(rs[0].mode, ReadingMode::Prm);
    }
}
