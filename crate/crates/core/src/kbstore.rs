//! Knowledge-base files (`.kb.json`).
//!
//! A file holds the lexicon reference, the memory-graph, the memory-sheets,
//! the SPM, distribution models and dialogue defaults. Loading re-checks
//! every structural invariant and reports the offending line; saving is
//! canonical (sorted keys, sorted collections, SN order kept for SPM
//! layers) so equal knowledge bases serialize to equal bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use chrono::Duration;
use serde::{Deserialize, Serialize};

use crate::dialogue::{Clock, DialogueContext, DialogueError};
use crate::ids::NodeId;
use crate::lexicon::{Lexicon, LexiconEntry, LexiconError};
use crate::measurement::DistributionModel;
use crate::memory::{AttributeRecord, EntityKind, Memory, Timestamp};
use crate::spm::{Direction, Spm};

pub const FORMAT_VERSION: &str = "1";

const QUEEN: &str = include_str!("../data/queen.kb.json");
const HOUSE: &str = include_str!("../data/house.kb.json");

#[derive(Debug, thiserror::Error)]
pub enum KbError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{0}")]
    Validation(Diagnostic),
    #[error("lexicon: {0}")]
    Lexicon(#[from] LexiconError),
    #[error("io error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl KbError {
    pub fn line(&self) -> Option<usize> {
        match self {
            KbError::Parse { line, .. } => Some(*line),
            KbError::Validation(d) => d.line,
            _ => None,
        }
    }
}

/// A violated invariant and where the file states it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub invariant: &'static str,
    pub message: String,
    pub line: Option<usize>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {} ({})", self.message, self.invariant),
            None => write!(f, "{} ({})", self.message, self.invariant),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconRef {
    /// "seed" for the bundled vocabulary, otherwise a path relative to the
    /// knowledge-base file.
    pub base: String,
    #[serde(default)]
    pub extra: Vec<LexiconEntry>,
}

impl Default for LexiconRef {
    fn default() -> Self {
        Self {
            base: "seed".into(),
            extra: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntityDoc {
    pub name: NodeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<EntityKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolidEdgeDoc {
    pub parent: NodeId,
    pub space: String,
    pub child: NodeId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DashedEdgeDoc {
    pub from: NodeId,
    pub space: String,
    pub to: NodeId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheetDoc {
    pub entity: NodeId,
    pub records: Vec<AttributeRecord>,
}

/// One adjacency-matrix row; `null` cells are empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixRow {
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
    pub front: Option<NodeId>,
    pub back: Option<NodeId>,
    pub up: Option<NodeId>,
    pub down: Option<NodeId>,
}

impl MatrixRow {
    fn cells(&self) -> [(Direction, &Option<NodeId>); 6] {
        [
            (Direction::Left, &self.left),
            (Direction::Right, &self.right),
            (Direction::Front, &self.front),
            (Direction::Back, &self.back),
            (Direction::Up, &self.up),
            (Direction::Down, &self.down),
        ]
    }
}

fn direction_key(d: Direction) -> &'static str {
    match d {
        Direction::Left => "left",
        Direction::Right => "right",
        Direction::Front => "front",
        Direction::Back => "back",
        Direction::Up => "up",
        Direction::Down => "down",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerDoc {
    pub layer: i32,
    /// Vertices in serial-number order.
    pub vertices: Vec<NodeId>,
    pub matrix: BTreeMap<NodeId, MatrixRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScopeDoc {
    pub child: NodeId,
    pub parent: NodeId,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpmDoc {
    #[serde(default)]
    pub layers: Vec<LayerDoc>,
    #[serde(default)]
    pub scope_tree: Vec<ScopeDoc>,
}

/// Dialogue defaults stored with the knowledge base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextDoc {
    pub owner: NodeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owner_root: Option<NodeId>,
    pub speaker: NodeId,
    pub addressee: NodeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<NodeId>,
    #[serde(default)]
    pub vice_centers: Vec<NodeId>,
    /// First turn timestamp; the system clock is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_timestamp")]
    pub clock_start: Option<Timestamp>,
    /// Seconds the clock advances per turn (0 keeps it fixed).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clock_step_seconds: Option<i64>,
    /// Observer positions for participants without a spatial record.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub anchors: BTreeMap<NodeId, NodeId>,
}

mod opt_timestamp {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::memory::{format_timestamp, Timestamp};

    pub fn serialize<S: Serializer>(t: &Option<Timestamp>, serializer: S) -> Result<S::Ok, S::Error> {
        match t {
            Some(t) => serializer.serialize_str(&format_timestamp(t)),
            None => serializer.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Option<Timestamp>, D::Error> {
        let s: Option<String> = Option::deserialize(deserializer)?;
        s.map(|s| {
            chrono::DateTime::parse_from_rfc3339(&s)
                .map(|t| t.with_timezone(&chrono::Utc))
                .map_err(serde::de::Error::custom)
        })
        .transpose()
    }
}

/// The on-disk document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KbDocument {
    pub version: String,
    #[serde(default)]
    pub lexicon: LexiconRef,
    #[serde(default)]
    pub entities: Vec<EntityDoc>,
    #[serde(default)]
    pub solid_edges: Vec<SolidEdgeDoc>,
    #[serde(default)]
    pub dashed_edges: Vec<DashedEdgeDoc>,
    #[serde(default)]
    pub sheets: Vec<SheetDoc>,
    #[serde(default)]
    pub spm: SpmDoc,
    #[serde(default)]
    pub measurement_models: Vec<DistributionModel>,
    pub context: ContextDoc,
}

/// A loaded, validated knowledge base.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    pub lexicon_ref: LexiconRef,
    pub lexicon: Lexicon,
    pub memory: Memory,
    pub spm: Spm,
    pub models: Vec<DistributionModel>,
    pub context: ContextDoc,
}

/// Finds the line of the last needle, searching for each needle after the
/// previous one.
fn locate(text: &str, needles: &[String]) -> Option<usize> {
    let mut pos = 0;
    for needle in needles {
        pos += text[pos..].find(needle.as_str())? + needle.len();
    }
    Some(text[..pos].matches('\n').count() + 1)
}

fn quoted(key: &str, value: &str) -> String {
    format!("\"{key}\": {}", serde_json::to_string(value).unwrap_or_default())
}

struct Checker<'a> {
    text: &'a str,
}

impl Checker<'_> {
    fn fail(&self, invariant: &'static str, message: impl Into<String>, needles: &[String]) -> KbError {
        KbError::Validation(Diagnostic {
            invariant,
            message: message.into(),
            line: locate(self.text, needles),
        })
    }
}

impl KnowledgeBase {
    /// The Queen Elizabeth memory-graph.
    pub fn queen() -> Self {
        Self::from_json(QUEEN, None).expect("bundled queen.kb.json is valid")
    }

    /// The living-room SPM with the apple dialogue defaults.
    pub fn house() -> Self {
        Self::from_json(HOUSE, None).expect("bundled house.kb.json is valid")
    }

    /// Text of a bundled file by short name ("queen" or "house").
    pub fn bundled_text(name: &str) -> Option<&'static str> {
        match name {
            "queen" => Some(QUEEN),
            "house" => Some(HOUSE),
            _ => None,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, KbError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| KbError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, path.parent())
    }

    /// Parses and validates a document. Relative lexicon paths resolve
    /// against `base_dir`.
    pub fn from_json(text: &str, base_dir: Option<&Path>) -> Result<Self, KbError> {
        let doc: KbDocument = serde_json::from_str(text).map_err(|e| KbError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_document(doc, text, base_dir)
    }

    fn from_document(doc: KbDocument, text: &str, base_dir: Option<&Path>) -> Result<Self, KbError> {
        let check = Checker { text };
        if doc.version != FORMAT_VERSION {
            return Err(check.fail(
                "version",
                format!("unsupported format version {:?}", doc.version),
                &[quoted("version", &doc.version)],
            ));
        }

        let mut lexicon = if doc.lexicon.base == "seed" {
            Lexicon::seed()
        } else {
            let path = base_dir.unwrap_or(Path::new(".")).join(&doc.lexicon.base);
            Lexicon::load(path)?
        };
        lexicon.extend(doc.lexicon.extra.iter().cloned())?;

        let mut memory = Memory::new();
        let mut declared = BTreeSet::new();
        for e in &doc.entities {
            if !declared.insert(e.name.clone()) {
                return Err(check.fail(
                    "unique entities",
                    format!("entity {} is declared twice", e.name),
                    &["\"entities\"".into(), quoted("name", e.name.name()), quoted("name", e.name.name())],
                ));
            }
            memory.graph.add_node(e.name.clone(), e.kind);
        }
        let undeclared = |n: &NodeId, section: &str, key: &str| {
            check.fail(
                "references resolve",
                format!("{n} is not a declared entity"),
                &[format!("\"{section}\""), quoted(key, n.name())],
            )
        };

        for e in &doc.solid_edges {
            for (n, key) in [(&e.parent, "parent"), (&e.child, "child")] {
                if !declared.contains(n) {
                    return Err(undeclared(n, "solid_edges", key));
                }
            }
            memory
                .graph
                .assert_inclusion(e.parent.clone(), &e.space, e.child.clone())
                .map_err(|err| {
                    check.fail(
                        "acyclic inclusion",
                        err.to_string(),
                        &["\"solid_edges\"".into(), quoted("child", e.child.name())],
                    )
                })?;
        }
        for e in &doc.dashed_edges {
            for (n, key) in [(&e.from, "from"), (&e.to, "to")] {
                if !declared.contains(n) {
                    return Err(undeclared(n, "dashed_edges", key));
                }
            }
            memory
                .graph
                .assert_virtual(e.from.clone(), &e.space, e.to.clone(), false)
                .map_err(|err| {
                    check.fail(
                        "no self loops",
                        err.to_string(),
                        &["\"dashed_edges\"".into(), quoted("from", e.from.name())],
                    )
                })?;
        }

        let spm = Self::build_spm(&doc.spm, &declared, &check)?;

        for sheet in &doc.sheets {
            let at = || vec!["\"sheets\"".to_string(), quoted("entity", sheet.entity.name())];
            if !declared.contains(&sheet.entity) {
                return Err(undeclared(&sheet.entity, "sheets", "entity"));
            }
            for record in &sheet.records {
                if let Some((_, sapp)) = record.value.as_position() {
                    if !spm.contains(sapp) {
                        let mut needles = at();
                        needles.push(quoted("sapp", sapp.name()));
                        return Err(check.fail(
                            "references resolve",
                            format!("{sapp} is not an SPM vertex"),
                            &needles,
                        ));
                    }
                }
                memory
                    .insert_record(sheet.entity.clone(), record.clone())
                    .map_err(|err| {
                        let mut needles = at();
                        needles.push(quoted("space", &record.space));
                        check.fail("disjoint record intervals", err.to_string(), &needles)
                    })?;
            }
        }

        let ctx = &doc.context;
        let mut people = vec![(&ctx.owner, "owner"), (&ctx.speaker, "speaker"), (&ctx.addressee, "addressee")];
        if let Some(c) = &ctx.center {
            people.push((c, "center"));
        }
        for (n, key) in people {
            if !declared.contains(n) {
                return Err(undeclared(n, "context", key));
            }
        }
        for v in &ctx.vice_centers {
            if !declared.contains(v) {
                return Err(check.fail(
                    "references resolve",
                    format!("{v} is not a declared entity"),
                    &["\"vice_centers\"".into(), serde_json::to_string(v.name()).unwrap_or_default()],
                ));
            }
        }
        if ctx.speaker == ctx.addressee {
            return Err(check.fail(
                "distinct participants",
                format!("speaker and addressee are both {}", ctx.speaker),
                &["\"context\"".into(), quoted("speaker", ctx.speaker.name())],
            ));
        }
        if let Some(root) = &ctx.owner_root {
            if !spm.contains(root) {
                return Err(check.fail(
                    "references resolve",
                    format!("owner_root {root} is not an SPM vertex"),
                    &["\"context\"".into(), quoted("owner_root", root.name())],
                ));
            }
        }
        for (who, sapp) in &ctx.anchors {
            if !declared.contains(who) || !spm.contains(sapp) {
                return Err(check.fail(
                    "references resolve",
                    format!("anchor {who} -> {sapp} does not resolve"),
                    &["\"anchors\"".into(), serde_json::to_string(who.name()).unwrap_or_default()],
                ));
            }
        }
        memory.graph.center = ctx.center.clone();
        memory.graph.vice_centers = ctx.vice_centers.iter().cloned().collect();

        Ok(Self {
            lexicon_ref: doc.lexicon,
            lexicon,
            memory,
            spm,
            models: doc.measurement_models,
            context: doc.context,
        })
    }

    fn build_spm(doc: &SpmDoc, declared: &BTreeSet<NodeId>, check: &Checker<'_>) -> Result<Spm, KbError> {
        let parents: BTreeMap<&NodeId, &NodeId> = doc.scope_tree.iter().map(|s| (&s.child, &s.parent)).collect();
        let mut layers: Vec<&LayerDoc> = doc.layers.iter().collect();
        layers.sort_by_key(|l| std::cmp::Reverse(l.layer));
        let mut spm = Spm::new();
        for layer in &layers {
            for v in &layer.vertices {
                if !declared.contains(v) {
                    return Err(check.fail(
                        "references resolve",
                        format!("SPM vertex {v} is not a declared entity"),
                        &["\"layers\"".into(), serde_json::to_string(v.name()).unwrap_or_default()],
                    ));
                }
                spm.add_sapp(v.clone(), layer.layer, parents.get(v).copied())
                    .map_err(|err| {
                        check.fail(
                            "scope tree layering",
                            err.to_string(),
                            &["\"scope_tree\"".into(), quoted("child", v.name())],
                        )
                    })?;
            }
        }
        for s in &doc.scope_tree {
            if !spm.contains(&s.child) {
                return Err(check.fail(
                    "references resolve",
                    format!("scope tree child {} is not an SPM vertex", s.child),
                    &["\"scope_tree\"".into(), quoted("child", s.child.name())],
                ));
            }
        }
        for layer in &layers {
            for (vertex, row) in &layer.matrix {
                let row_needles = |key: Option<&str>| {
                    let mut n = vec![
                        "\"matrix\"".to_string(),
                        format!("{}: {{", serde_json::to_string(vertex.name()).unwrap_or_default()),
                    ];
                    if let Some(k) = key {
                        n.push(format!("\"{k}\""));
                    }
                    n
                };
                if spm.layer_of(vertex) != Some(layer.layer) {
                    return Err(check.fail(
                        "matrix rows name layer vertices",
                        format!("{vertex} is not a vertex of layer {}", layer.layer),
                        &row_needles(None),
                    ));
                }
                for (d, cell) in row.cells() {
                    if let Some(n) = cell {
                        spm.set_cell_unchecked(vertex, d, n).map_err(|err| {
                            check.fail("references resolve", err.to_string(), &row_needles(Some(direction_key(d))))
                        })?;
                    }
                }
            }
        }
        spm.validate().map_err(|err| {
            let needles = match &err {
                crate::spm::SpmError::Asymmetric { vertex, direction, .. } => vec![
                    "\"matrix\"".to_string(),
                    format!("{}: {{", serde_json::to_string(vertex.name()).unwrap_or_default()),
                    format!("\"{}\"", direction_key(*direction)),
                ],
                _ => vec!["\"spm\"".to_string()],
            };
            check.fail("adjacency symmetry", err.to_string(), &needles)
        })?;
        Ok(spm)
    }

    /// Canonical document for the current state.
    pub fn to_document(&self) -> KbDocument {
        let g = &self.memory.graph;
        let entities = g
            .nodes()
            .map(|(name, kind)| EntityDoc {
                name: name.clone(),
                kind,
            })
            .collect();
        let solid_edges = g
            .solid_edges()
            .into_iter()
            .map(|e| SolidEdgeDoc {
                parent: e.from,
                space: e.space,
                child: e.to,
            })
            .collect();
        let dashed_edges = g
            .dashed_edges()
            .into_iter()
            .map(|e| DashedEdgeDoc {
                from: e.from,
                space: e.space,
                to: e.to,
            })
            .collect();
        let sheets = self
            .memory
            .sheets()
            .filter(|s| !s.records.is_empty())
            .map(|s| {
                let mut records = s.records.clone();
                records.sort_by(|a, b| (&a.space, a.cts).cmp(&(&b.space, b.cts)));
                SheetDoc {
                    entity: s.entity.clone(),
                    records,
                }
            })
            .collect();
        let layers = self
            .spm
            .layers()
            .into_iter()
            .map(|layer| {
                let vertices: Vec<NodeId> = self.spm.layer_vertices(layer).into_iter().cloned().collect();
                let matrix = vertices
                    .iter()
                    .map(|v| {
                        let cell = |d| self.spm.cell(v, d).cloned();
                        let row = MatrixRow {
                            left: cell(Direction::Left),
                            right: cell(Direction::Right),
                            front: cell(Direction::Front),
                            back: cell(Direction::Back),
                            up: cell(Direction::Up),
                            down: cell(Direction::Down),
                        };
                        (v.clone(), row)
                    })
                    .collect();
                LayerDoc { layer, vertices, matrix }
            })
            .collect();
        let scope_tree = self
            .spm
            .scope_tree()
            .parent
            .iter()
            .map(|(child, parent)| ScopeDoc {
                child: child.clone(),
                parent: parent.clone(),
            })
            .collect();
        let mut models = self.models.clone();
        models.sort_by(|a, b| a.space().cmp(b.space()));
        let mut context = self.context.clone();
        context.center = g.center.clone();
        context.vice_centers = g.vice_centers.iter().cloned().collect();
        KbDocument {
            version: FORMAT_VERSION.into(),
            lexicon: self.lexicon_ref.clone(),
            entities,
            solid_edges,
            dashed_edges,
            sheets,
            spm: SpmDoc { layers, scope_tree },
            measurement_models: models,
            context,
        }
    }

    /// Canonical JSON text, newline-terminated.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self.to_document()).expect("knowledge base serializes");
        let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
        text.push('\n');
        text
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), KbError> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|source| KbError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// A dialogue context from the stored defaults.
    pub fn dialogue_context(&self) -> Result<DialogueContext, DialogueError> {
        let c = &self.context;
        let mut ctx = DialogueContext::new(c.speaker.clone(), c.addressee.clone(), c.owner.clone())?;
        ctx.owner_root = c.owner_root.clone();
        ctx.spm_anchor = c.anchors.clone();
        ctx.clock = match (c.clock_start, c.clock_step_seconds) {
            (Some(t), Some(step)) if step != 0 => Clock::Tick {
                next: t,
                step: Duration::seconds(step),
            },
            (Some(t), _) => Clock::Fixed(t),
            (None, _) => Clock::System,
        };
        Ok(ctx)
    }

    pub fn model(&self, space: &str) -> Option<&DistributionModel> {
        self.models.iter().find(|m| m.space() == space)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files_are_canonical() {
        for name in ["queen", "house"] {
            let text = KnowledgeBase::bundled_text(name).unwrap();
            let kb = KnowledgeBase::from_json(text, None).unwrap();
            assert_eq!(kb.to_json(), text, "{name}.kb.json is not in canonical form");
        }
    }

    #[test]
    fn locate_walks_needles_in_order() {
        let text = "{\n  \"a\": 1,\n  \"b\": {\n    \"a\": 2\n  }\n}";
        assert_eq!(locate(text, &["\"b\"".into(), "\"a\"".into()]), Some(4));
        assert_eq!(locate(text, &["\"zzz\"".into()]), None);
    }

    #[test]
    fn version_mismatch_is_reported() {
        let text = KnowledgeBase::bundled_text("queen").unwrap().replacen("\"version\": \"1\"", "\"version\": \"9\"", 1);
        let err = KnowledgeBase::from_json(&text, None).unwrap_err();
        assert!(matches!(&err, KbError::Validation(d) if d.invariant == "version"));
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = KnowledgeBase::from_json("{\n  \"version\": \n}", None).unwrap_err();
        assert!(matches!(err, KbError::Parse { line: 3, .. }));
    }

    #[test]
    fn asymmetric_matrix_names_the_cell() {
        let text = KnowledgeBase::bundled_text("house").unwrap();
        let broken = text.replacen("\"left\": \"Sofa\"", "\"left\": null", 1);
        assert_ne!(broken, text);
        let err = KnowledgeBase::from_json(&broken, None).unwrap_err();
        let KbError::Validation(d) = &err else { panic!("{err}") };
        assert_eq!(d.invariant, "adjacency symmetry");
        let line = d.line.unwrap();
        assert!(broken.lines().nth(line - 1).unwrap().contains("\"right\""), "{err}");
    }

    #[test]
    fn undeclared_reference_is_rejected() {
        let text = KnowledgeBase::bundled_text("queen").unwrap();
        let broken = text.replacen("\"child\": \"crown\"", "\"child\": \"sceptre\"", 1);
        let err = KnowledgeBase::from_json(&broken, None).unwrap_err();
        let KbError::Validation(d) = &err else { panic!("{err}") };
        assert_eq!(d.invariant, "references resolve");
        assert!(broken.lines().nth(d.line.unwrap() - 1).unwrap().contains("sceptre"));
    }

    #[test]
    fn inclusion_cycle_is_rejected() {
        let text = KnowledgeBase::bundled_text("queen").unwrap();
        let mut doc: KbDocument = serde_json::from_str(text).unwrap();
        doc.solid_edges.push(SolidEdgeDoc {
            parent: "cat".into(),
            space: "owner".into(),
            child: "Queen Elizabeth".into(),
        });
        let broken = serde_json::to_string_pretty(&doc).unwrap();
        let err = KnowledgeBase::from_json(&broken, None).unwrap_err();
        assert!(matches!(&err, KbError::Validation(d) if d.invariant == "acyclic inclusion"), "{err}");
    }

    #[test]
    fn same_participants_are_rejected() {
        let text = KnowledgeBase::bundled_text("house").unwrap();
        let broken = text.replacen("\"addressee\": \"Nana\"", "\"addressee\": \"jack\"", 1);
        let err = KnowledgeBase::from_json(&broken, None).unwrap_err();
        assert!(matches!(&err, KbError::Validation(d) if d.invariant == "distinct participants"));
    }

    #[test]
    fn house_matrix_and_context() {
        let kb = KnowledgeBase::house();
        let n = NodeId::new;
        assert_eq!(kb.spm.cell(&n("Table"), Direction::Back), Some(&n("Sofa")));
        assert_eq!(kb.spm.cell(&n("Fridge"), Direction::Left), Some(&n("Sofa")));
        assert_eq!(kb.spm.parent(&n("Sofa")), Some(&n("House")));
        let ctx = kb.dialogue_context().unwrap();
        assert!(matches!(ctx.clock, Clock::Tick { .. }));
        assert!(kb.model("temperature").is_some());
    }

    #[test]
    fn save_to_unwritable_path_is_io_error() {
        let kb = KnowledgeBase::queen();
        let err = kb.save("/nonexistent-dir/x.kb.json").unwrap_err();
        assert!(matches!(err, KbError::Io { .. }));
    }

    #[test]
    fn save_and_load_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("queen.kb.json");
        KnowledgeBase::queen().save(&path).unwrap();
        let again = KnowledgeBase::load(&path).unwrap();
        assert_eq!(again.to_json(), KnowledgeBase::bundled_text("queen").unwrap());
        assert!(again.memory.graph.node_count() >= 9);
    }
}
