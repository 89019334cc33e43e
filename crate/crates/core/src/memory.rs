//! The knowledge store: memory-sheets with validity intervals and the
//! memory-graph of solid (inclusion) and dashed (virtual) edges.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ids::NodeId;
use crate::spm::Direction;

pub type Timestamp = DateTime<Utc>;

/// Attribute space holding spatial-position records.
pub const SPATIAL_POSITION: &str = "spatial-position";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MemoryError {
    #[error("{0} cannot relate to itself")]
    SelfLoop(NodeId),
    #[error("{parent} ⊃ {child} would close a cycle: {child} already includes {parent}")]
    Cycle { parent: NodeId, child: NodeId },
    #[error("update of {entity}.{space} at {at} precedes the open record created at {open_cts}")]
    StaleTimestamp {
        entity: NodeId,
        space: String,
        at: Timestamp,
        open_cts: Timestamp,
    },
    #[error("{entity}.{space}: record interval is empty or reversed (cts {cts})")]
    InvalidInterval {
        entity: NodeId,
        space: String,
        cts: Timestamp,
    },
    #[error("{entity}.{space}: record intervals overlap")]
    OverlappingRecords { entity: NodeId, space: String },
    #[error("{entity}.{space}: more than one open record")]
    MultipleOpen { entity: NodeId, space: String },
}

/// Termination timestamp; `Open` while the record is still current.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tts {
    Open,
    At(Timestamp),
}

impl Tts {
    pub fn is_open(&self) -> bool {
        matches!(self, Tts::Open)
    }

    /// Whether `t` falls before this termination point.
    pub fn is_after(&self, t: Timestamp) -> bool {
        match self {
            Tts::Open => true,
            Tts::At(end) => t < *end,
        }
    }
}

impl fmt::Display for Tts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tts::Open => f.write_str("OPEN"),
            Tts::At(t) => f.write_str(&format_timestamp(t)),
        }
    }
}

impl Serialize for Tts {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Tts {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s == "OPEN" {
            return Ok(Tts::Open);
        }
        DateTime::parse_from_rfc3339(&s)
            .map(|t| Tts::At(t.with_timezone(&Utc)))
            .map_err(serde::de::Error::custom)
    }
}

/// ISO-8601 UTC with second precision, the canonical on-disk form.
pub fn format_timestamp(t: &Timestamp) -> String {
    t.to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

pub mod iso_timestamp {
    use super::*;

    pub fn serialize<S: Serializer>(t: &Timestamp, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_timestamp(t))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Timestamp, D::Error> {
        let s = String::deserialize(deserializer)?;
        DateTime::parse_from_rfc3339(&s)
            .map(|t| t.with_timezone(&Utc))
            .map_err(serde::de::Error::custom)
    }
}

/// How an entity sits relative to a positioning point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Inside,
    Left,
    Right,
    Front,
    Back,
    Up,
    Down,
}

impl Relation {
    pub fn direction(&self) -> Option<Direction> {
        match self {
            Relation::Inside => None,
            Relation::Left => Some(Direction::Left),
            Relation::Right => Some(Direction::Right),
            Relation::Front => Some(Direction::Front),
            Relation::Back => Some(Direction::Back),
            Relation::Up => Some(Direction::Up),
            Relation::Down => Some(Direction::Down),
        }
    }
}

impl From<Direction> for Relation {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Left => Relation::Left,
            Direction::Right => Relation::Right,
            Direction::Front => Relation::Front,
            Direction::Back => Relation::Back,
            Direction::Up => Relation::Up,
            Direction::Down => Relation::Down,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributeValue {
    Word(String),
    Position { relation: Relation, sapp: NodeId },
    Measure { value: f64, unit: String },
    Flag(bool),
}

impl AttributeValue {
    pub fn word(w: impl Into<String>) -> Self {
        AttributeValue::Word(w.into())
    }

    pub fn position(relation: Relation, sapp: impl Into<NodeId>) -> Self {
        AttributeValue::Position {
            relation,
            sapp: sapp.into(),
        }
    }

    pub fn as_position(&self) -> Option<(Relation, &NodeId)> {
        match self {
            AttributeValue::Position { relation, sapp } => Some((*relation, sapp)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeRecord {
    pub space: String,
    pub value: AttributeValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantity: Option<u64>,
    #[serde(with = "iso_timestamp")]
    pub cts: Timestamp,
    pub tts: Tts,
}

impl AttributeRecord {
    pub fn contains(&self, t: Timestamp) -> bool {
        self.cts <= t && self.tts.is_after(t)
    }

    fn overlaps(&self, other: &AttributeRecord) -> bool {
        let starts_before_other_ends = other.tts.is_after(self.cts);
        let other_starts_before_end = self.tts.is_after(other.cts);
        starts_before_other_ends && other_starts_before_end
    }
}

/// An entity's attribute table. Records of one space never overlap in time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemorySheet {
    pub entity: NodeId,
    pub records: Vec<AttributeRecord>,
}

impl MemorySheet {
    pub fn new(entity: NodeId) -> Self {
        Self {
            entity,
            records: Vec::new(),
        }
    }

    pub fn spaces(&self) -> BTreeSet<&str> {
        self.records.iter().map(|r| r.space.as_str()).collect()
    }

    pub fn history<'a>(&'a self, space: &'a str) -> impl Iterator<Item = &'a AttributeRecord> + 'a {
        self.records.iter().filter(move |r| r.space == space)
    }

    pub fn open_record(&self, space: &str) -> Option<&AttributeRecord> {
        self.records.iter().find(|r| r.space == space && r.tts.is_open())
    }

    pub fn at(&self, space: &str, t: Timestamp) -> Option<&AttributeRecord> {
        self.records.iter().find(|r| r.space == space && r.contains(t))
    }

    /// Records currently open, ordered by space.
    pub fn current(&self) -> Vec<&AttributeRecord> {
        let mut out: Vec<_> = self.records.iter().filter(|r| r.tts.is_open()).collect();
        out.sort_by(|a, b| a.space.cmp(&b.space));
        out
    }

    fn sort(&mut self) {
        self.records
            .sort_by(|a, b| a.space.cmp(&b.space).then(a.cts.cmp(&b.cts)));
    }

    /// Checks interval well-formedness, disjointness and the single open
    /// record rule.
    pub fn validate(&self) -> Result<(), MemoryError> {
        for r in &self.records {
            if let Tts::At(end) = r.tts {
                if end <= r.cts {
                    return Err(MemoryError::InvalidInterval {
                        entity: self.entity.clone(),
                        space: r.space.clone(),
                        cts: r.cts,
                    });
                }
            }
        }
        for space in self.spaces() {
            let recs: Vec<_> = self.history(space).collect();
            if recs.iter().filter(|r| r.tts.is_open()).count() > 1 {
                return Err(MemoryError::MultipleOpen {
                    entity: self.entity.clone(),
                    space: space.to_string(),
                });
            }
            for (i, a) in recs.iter().enumerate() {
                for b in &recs[i + 1..] {
                    if a.overlaps(b) {
                        return Err(MemoryError::OverlappingRecords {
                            entity: self.entity.clone(),
                            space: space.to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Person,
    Dynamic,
    Static,
    Implicit,
    Concept,
}

/// A labeled directed edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: NodeId,
    pub space: String,
    pub to: NodeId,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MemoryGraph {
    nodes: BTreeMap<NodeId, Option<EntityKind>>,
    solid: BTreeMap<NodeId, BTreeSet<(String, NodeId)>>,
    dashed: BTreeMap<NodeId, BTreeSet<(String, NodeId)>>,
    pub center: Option<NodeId>,
    pub vice_centers: BTreeSet<NodeId>,
}

impl MemoryGraph {
    pub fn add_node(&mut self, node: NodeId, kind: Option<EntityKind>) {
        let slot = self.nodes.entry(node).or_insert(None);
        if kind.is_some() {
            *slot = kind;
        }
    }

    pub fn contains(&self, node: &NodeId) -> bool {
        self.nodes.contains_key(node)
    }

    /// The declared spelling of a node, if present.
    pub fn node(&self, name: &str) -> Option<&NodeId> {
        self.nodes.get_key_value(&NodeId::new(name)).map(|(k, _)| k)
    }

    pub fn kind(&self, node: &NodeId) -> Option<EntityKind> {
        self.nodes.get(node).copied().flatten()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&NodeId, Option<EntityKind>)> {
        self.nodes.iter().map(|(n, k)| (n, *k))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn solid_edges(&self) -> Vec<Edge> {
        flatten(&self.solid)
    }

    pub fn dashed_edges(&self) -> Vec<Edge> {
        flatten(&self.dashed)
    }

    pub fn solid_children(&self, node: &NodeId) -> impl Iterator<Item = (&str, &NodeId)> {
        self.solid
            .get(node)
            .into_iter()
            .flatten()
            .map(|(s, n)| (s.as_str(), n))
    }

    pub fn dashed_out(&self, node: &NodeId) -> impl Iterator<Item = (&str, &NodeId)> {
        self.dashed
            .get(node)
            .into_iter()
            .flatten()
            .map(|(s, n)| (s.as_str(), n))
    }

    /// Dashed edges pointing at `node`, as `(source, space)`.
    pub fn dashed_in<'a>(&'a self, node: &NodeId) -> impl Iterator<Item = (&'a NodeId, &'a str)> + 'a {
        let node = node.clone();
        self.dashed.iter().flat_map(move |(from, targets)| {
            let node = node.clone();
            targets
                .iter()
                .filter(move |(_, to)| *to == node)
                .map(move |(space, _)| (from, space.as_str()))
        })
    }

    pub fn solid_parents<'a>(&'a self, node: &NodeId) -> impl Iterator<Item = (&'a NodeId, &'a str)> + 'a {
        let node = node.clone();
        self.solid.iter().flat_map(move |(from, targets)| {
            let node = node.clone();
            targets
                .iter()
                .filter(move |(_, to)| *to == node)
                .map(move |(space, _)| (from, space.as_str()))
        })
    }

    /// Adds `parent ⊃ child` under attribute space `space`.
    pub fn assert_inclusion(
        &mut self,
        parent: impl Into<NodeId>,
        space: &str,
        child: impl Into<NodeId>,
    ) -> Result<(), MemoryError> {
        let (parent, child) = (parent.into(), child.into());
        if parent == child {
            return Err(MemoryError::SelfLoop(parent));
        }
        if self.query_inclusion(&child, &parent) {
            return Err(MemoryError::Cycle { parent, child });
        }
        self.add_node(parent.clone(), None);
        self.add_node(child.clone(), None);
        self.solid
            .entry(parent)
            .or_default()
            .insert((space.to_string(), child));
        Ok(())
    }

    /// Adds a virtual (non-hierarchical) edge, and its reverse when
    /// `bidirectional` is set.
    pub fn assert_virtual(
        &mut self,
        from: impl Into<NodeId>,
        space: &str,
        to: impl Into<NodeId>,
        bidirectional: bool,
    ) -> Result<(), MemoryError> {
        let (from, to) = (from.into(), to.into());
        if from == to {
            return Err(MemoryError::SelfLoop(from));
        }
        self.add_node(from.clone(), None);
        self.add_node(to.clone(), None);
        if bidirectional {
            self.dashed
                .entry(to.clone())
                .or_default()
                .insert((space.to_string(), from.clone()));
        }
        self.dashed
            .entry(from)
            .or_default()
            .insert((space.to_string(), to));
        Ok(())
    }

    /// Strict, transitive inclusion over solid edges only.
    pub fn query_inclusion(&self, parent: &NodeId, child: &NodeId) -> bool {
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<&NodeId> = VecDeque::new();
        queue.push_back(parent);
        while let Some(node) = queue.pop_front() {
            for (_, next) in self.solid_children(node) {
                if next == child {
                    return true;
                }
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        false
    }

    /// A node that directly includes every one of `nodes`, preferring edges
    /// labeled `kind`.
    pub fn common_parent(&self, nodes: &[NodeId]) -> Option<&NodeId> {
        let first = nodes.first()?;
        let mut candidates: Vec<(&NodeId, &str)> = self.solid_parents(first).collect();
        candidates.retain(|(p, _)| {
            nodes
                .iter()
                .all(|n| self.solid_children(p).any(|(_, c)| c == n))
        });
        candidates.sort_by_key(|(p, space)| (*space != "kind", (*p).clone()));
        candidates.first().map(|(p, _)| *p)
    }

    /// Topological order of all nodes over solid edges; `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<NodeId>> {
        let mut indegree: BTreeMap<&NodeId, usize> = self.nodes.keys().map(|n| (n, 0)).collect();
        for targets in self.solid.values() {
            for (_, to) in targets {
                *indegree.entry(to).or_default() += 1;
            }
        }
        let mut ready: VecDeque<&NodeId> = indegree
            .iter()
            .filter(|(_, d)| **d == 0)
            .map(|(n, _)| *n)
            .collect();
        let mut order = Vec::new();
        while let Some(n) = ready.pop_front() {
            order.push(n.clone());
            for (_, to) in self.solid_children(n) {
                let d = indegree.get_mut(to).expect("edge endpoint is a node");
                *d -= 1;
                if *d == 0 {
                    ready.push_back(to);
                }
            }
        }
        (order.len() == indegree.len()).then_some(order)
    }
}

fn flatten(map: &BTreeMap<NodeId, BTreeSet<(String, NodeId)>>) -> Vec<Edge> {
    map.iter()
        .flat_map(|(from, targets)| {
            targets.iter().map(move |(space, to)| Edge {
                from: from.clone(),
                space: space.clone(),
                to: to.clone(),
            })
        })
        .collect()
}

/// Outcome of `update_attribute`: the record that was closed (if any) and
/// the new open record.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeUpdate {
    pub entity: NodeId,
    pub closed: Option<AttributeRecord>,
    pub opened: AttributeRecord,
}

/// Memory-graph plus the memory-sheets of its entities.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Memory {
    pub graph: MemoryGraph,
    sheets: BTreeMap<NodeId, MemorySheet>,
}

impl Memory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Resolves a name to a known node, accepting a regular plural.
    pub fn find(&self, name: &str) -> Option<&NodeId> {
        self.graph.node(name).or_else(|| {
            let lower = name.to_lowercase();
            ["es", "s"]
                .iter()
                .filter_map(|suffix| lower.strip_suffix(suffix))
                .find_map(|stem| self.graph.node(stem))
        })
    }

    pub fn sheet(&self, entity: &NodeId) -> Option<&MemorySheet> {
        self.sheets.get(entity)
    }

    pub fn sheets(&self) -> impl Iterator<Item = &MemorySheet> {
        self.sheets.values()
    }

    /// Closes the open record of `(entity, space)` at `at` and opens a new one.
    ///
    /// An update at exactly the open record's creation time replaces that
    /// record, since closing it would leave an empty interval.
    pub fn update_attribute(
        &mut self,
        entity: impl Into<NodeId>,
        space: &str,
        value: AttributeValue,
        quantity: Option<u64>,
        at: Timestamp,
    ) -> Result<AttributeUpdate, MemoryError> {
        let entity = entity.into();
        self.graph.add_node(entity.clone(), None);
        let sheet = self
            .sheets
            .entry(entity.clone())
            .or_insert_with(|| MemorySheet::new(entity.clone()));
        let opened = AttributeRecord {
            space: space.to_string(),
            value,
            quantity,
            cts: at,
            tts: Tts::Open,
        };
        let open_idx = sheet
            .records
            .iter()
            .position(|r| r.space == space && r.tts.is_open());
        let closed = match open_idx {
            Some(i) => {
                let open_cts = sheet.records[i].cts;
                if at < open_cts {
                    return Err(MemoryError::StaleTimestamp {
                        entity,
                        space: space.to_string(),
                        at,
                        open_cts,
                    });
                }
                if at == open_cts {
                    let old = sheet.records.remove(i);
                    Some(old)
                } else {
                    sheet.records[i].tts = Tts::At(at);
                    Some(sheet.records[i].clone())
                }
            }
            None => None,
        };
        sheet.records.push(opened.clone());
        sheet.sort();
        Ok(AttributeUpdate {
            entity,
            closed,
            opened,
        })
    }

    /// Inserts a historical record verbatim; used when loading files.
    pub fn insert_record(&mut self, entity: NodeId, record: AttributeRecord) -> Result<(), MemoryError> {
        self.graph.add_node(entity.clone(), None);
        let sheet = self
            .sheets
            .entry(entity.clone())
            .or_insert_with(|| MemorySheet::new(entity));
        sheet.records.push(record);
        sheet.sort();
        if let Err(e) = sheet.validate() {
            sheet.records.pop();
            sheet.sort();
            return Err(e);
        }
        Ok(())
    }

    /// The record of `(entity, space)` valid at `t`.
    pub fn attribute_at(&self, entity: &NodeId, space: &str, t: Timestamp) -> Option<&AttributeRecord> {
        self.sheets.get(entity)?.at(space, t)
    }

    /// The open record of `(entity, space)`.
    pub fn current(&self, entity: &NodeId, space: &str) -> Option<&AttributeRecord> {
        self.sheets.get(entity)?.open_record(space)
    }

    pub fn validate(&self) -> Result<(), MemoryError> {
        for sheet in self.sheets.values() {
            sheet.validate()?;
        }
        Ok(())
    }
}
