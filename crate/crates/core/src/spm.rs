//! Spatial projection map.
//!
//! Static entities used as positioning points (SAPPs) are the vertices.
//! Within a layer they are linked by six relative directions, stored as an
//! adjacency matrix with one neighbor per cell. Between layers a scope tree
//! records containment: a vertex's scope is the union of its children's.
//! Dynamic entities are never vertices; they anchor to a SAPP through a
//! spatial-position record in their memory-sheet.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::ids::NodeId;
use crate::lexicon::{pluralize, Lexicon};
use crate::memory::{Memory, Relation, SPATIAL_POSITION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Left,
    Right,
    Front,
    Back,
    Up,
    Down,
}

impl Direction {
    /// Column order of the adjacency matrix.
    pub const ALL: [Direction; 6] = [
        Direction::Left,
        Direction::Right,
        Direction::Front,
        Direction::Back,
        Direction::Up,
        Direction::Down,
    ];

    pub fn inverse(self) -> Direction {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
            Direction::Front => Direction::Back,
            Direction::Back => Direction::Front,
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::Left => "Left side",
            Direction::Right => "Right side",
            Direction::Front => "Front side",
            Direction::Back => "Back side",
            Direction::Up => "Upside",
            Direction::Down => "Downside",
        }
    }

    pub fn parse(s: &str) -> Option<Direction> {
        match s.trim().to_lowercase().as_str() {
            "left" | "left side" => Some(Direction::Left),
            "right" | "right side" => Some(Direction::Right),
            "front" | "front side" => Some(Direction::Front),
            "back" | "back side" | "backside" => Some(Direction::Back),
            "up" | "upside" => Some(Direction::Up),
            "down" | "downside" => Some(Direction::Down),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpmError {
    #[error("vertex {0} already exists")]
    DuplicateVertex(NodeId),
    #[error("parent {parent} (layer {parent_layer}) must sit above {child} (layer {child_layer})")]
    LayerOrder {
        child: NodeId,
        child_layer: i32,
        parent: NodeId,
        parent_layer: i32,
    },
    #[error("unknown vertex {0}")]
    UnknownVertex(NodeId),
    #[error("{subject} and {object} are not in the same layer")]
    LayerMismatch { subject: NodeId, object: NodeId },
    #[error("{0} cannot be its own neighbor")]
    SelfRelation(NodeId),
    #[error("{vertex}: {direction} is already bound to {existing}")]
    Conflict {
        vertex: NodeId,
        direction: Direction,
        existing: NodeId,
    },
    #[error("{vertex}: {direction} -> {neighbor} has no inverse cell pointing back")]
    Asymmetric {
        vertex: NodeId,
        direction: Direction,
        neighbor: NodeId,
    },
    #[error("{0} has no spatial-position record and no parent")]
    Unlocatable(NodeId),
}

#[derive(Debug, Clone, PartialEq)]
struct Vertex {
    layer: i32,
    cells: [Option<NodeId>; 6],
}

/// Containment between layers: child SAPP -> parent SAPP.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScopeTree {
    pub parent: BTreeMap<NodeId, NodeId>,
    pub layer_of: BTreeMap<NodeId, i32>,
}

/// One connected piece of a layer with its adjacency matrix rows, in
/// vertex insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgraph {
    pub vertices: Vec<NodeId>,
    pub matrix: Vec<[Option<NodeId>; 6]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpmLayerGraph {
    pub layer: i32,
    pub subgraphs: Vec<Subgraph>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Spm {
    vertices: IndexMap<NodeId, Vertex>,
    scope: ScopeTree,
}

impl Spm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, v: &NodeId) -> bool {
        self.vertices.contains_key(v)
    }

    pub fn vertex(&self, name: &str) -> Option<&NodeId> {
        self.vertices.get_key_value(&NodeId::new(name)).map(|(k, _)| k)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &NodeId> {
        self.vertices.keys()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn layer_of(&self, v: &NodeId) -> Option<i32> {
        self.vertices.get(v).map(|x| x.layer)
    }

    pub fn layers(&self) -> BTreeSet<i32> {
        self.vertices.values().map(|v| v.layer).collect()
    }

    pub fn parent(&self, v: &NodeId) -> Option<&NodeId> {
        self.scope.parent.get(v)
    }

    pub fn children(&self, v: &NodeId) -> Vec<&NodeId> {
        self.vertices
            .keys()
            .filter(|c| self.scope.parent.get(*c) == Some(v))
            .collect()
    }

    pub fn scope_tree(&self) -> &ScopeTree {
        &self.scope
    }

    /// Adds a SAPP to `layer`, optionally under a parent in a higher layer.
    pub fn add_sapp(&mut self, id: impl Into<NodeId>, layer: i32, parent: Option<&NodeId>) -> Result<(), SpmError> {
        let id = id.into();
        if self.vertices.contains_key(&id) {
            return Err(SpmError::DuplicateVertex(id));
        }
        if let Some(p) = parent {
            let parent_layer = self.layer_of(p).ok_or_else(|| SpmError::UnknownVertex(p.clone()))?;
            if parent_layer <= layer {
                return Err(SpmError::LayerOrder {
                    child: id,
                    child_layer: layer,
                    parent: p.clone(),
                    parent_layer,
                });
            }
            self.scope.parent.insert(id.clone(), p.clone());
        }
        self.scope.layer_of.insert(id.clone(), layer);
        self.vertices.insert(
            id,
            Vertex {
                layer,
                cells: Default::default(),
            },
        );
        Ok(())
    }

    /// Records that `object` lies on the `d` side of `subject`, and the
    /// inverse cell on `object`, as one step.
    pub fn set_direction(&mut self, subject: &NodeId, d: Direction, object: &NodeId) -> Result<(), SpmError> {
        if subject == object {
            return Err(SpmError::SelfRelation(subject.clone()));
        }
        let s_layer = self.layer_of(subject).ok_or_else(|| SpmError::UnknownVertex(subject.clone()))?;
        let o_layer = self.layer_of(object).ok_or_else(|| SpmError::UnknownVertex(object.clone()))?;
        if s_layer != o_layer {
            return Err(SpmError::LayerMismatch {
                subject: subject.clone(),
                object: object.clone(),
            });
        }
        for (vertex, dir, expected) in [(subject, d, object), (object, d.inverse(), subject)] {
            if let Some(existing) = &self.vertices[vertex].cells[dir.index()] {
                if existing != expected {
                    return Err(SpmError::Conflict {
                        vertex: vertex.clone(),
                        direction: dir,
                        existing: existing.clone(),
                    });
                }
            }
        }
        let subject_key = self.vertex_key(subject);
        let object_key = self.vertex_key(object);
        self.vertices[subject].cells[d.index()] = Some(object_key);
        self.vertices[object].cells[d.inverse().index()] = Some(subject_key);
        Ok(())
    }

    /// Writes a single matrix cell without touching its inverse. Files are
    /// loaded this way and then checked with [`Spm::validate`].
    pub fn set_cell_unchecked(&mut self, subject: &NodeId, d: Direction, object: &NodeId) -> Result<(), SpmError> {
        let object_key = self
            .vertices
            .get_key_value(object)
            .map(|(k, _)| k.clone())
            .ok_or_else(|| SpmError::UnknownVertex(object.clone()))?;
        let v = self
            .vertices
            .get_mut(subject)
            .ok_or_else(|| SpmError::UnknownVertex(subject.clone()))?;
        v.cells[d.index()] = Some(object_key);
        Ok(())
    }

    fn vertex_key(&self, v: &NodeId) -> NodeId {
        self.vertices
            .get_key_value(v)
            .map(|(k, _)| k.clone())
            .unwrap_or_else(|| v.clone())
    }

    pub fn cell(&self, v: &NodeId, d: Direction) -> Option<&NodeId> {
        self.vertices.get(v)?.cells[d.index()].as_ref()
    }

    /// The six matrix cells of `v`; empty cells map to `None`.
    pub fn neighbors(&self, v: &NodeId) -> Result<BTreeMap<Direction, Option<NodeId>>, SpmError> {
        let vertex = self.vertices.get(v).ok_or_else(|| SpmError::UnknownVertex(v.clone()))?;
        Ok(Direction::ALL
            .iter()
            .map(|d| (*d, vertex.cells[d.index()].clone()))
            .collect())
    }

    /// Leaf SAPPs under `v`; a leaf's scope is itself.
    pub fn scope_of(&self, v: &NodeId) -> Result<BTreeSet<NodeId>, SpmError> {
        if !self.contains(v) {
            return Err(SpmError::UnknownVertex(v.clone()));
        }
        let mut out = BTreeSet::new();
        let mut stack = vec![self.vertex_key(v)];
        while let Some(n) = stack.pop() {
            let kids = self.children(&n);
            if kids.is_empty() {
                out.insert(n);
            } else {
                stack.extend(kids.into_iter().cloned());
            }
        }
        Ok(out)
    }

    /// Whether `v` is `root` or lies under it in the scope tree.
    pub fn is_within(&self, v: &NodeId, root: &NodeId) -> bool {
        let mut cur = Some(v);
        while let Some(n) = cur {
            if n == root {
                return true;
            }
            cur = self.parent(n);
        }
        false
    }

    /// Vertices of `layer` in insertion (serial number) order.
    pub fn layer_vertices(&self, layer: i32) -> Vec<&NodeId> {
        self.vertices
            .iter()
            .filter(|(_, v)| v.layer == layer)
            .map(|(k, _)| k)
            .collect()
    }

    pub fn layer(&self, layer: i32) -> SpmLayerGraph {
        let members: Vec<&NodeId> = self
            .vertices
            .iter()
            .filter(|(_, v)| v.layer == layer)
            .map(|(k, _)| k)
            .collect();
        let mut assigned: BTreeSet<&NodeId> = BTreeSet::new();
        let mut subgraphs = Vec::new();
        for start in &members {
            if assigned.contains(start) {
                continue;
            }
            let mut component: BTreeSet<&NodeId> = BTreeSet::new();
            let mut stack = vec![*start];
            while let Some(n) = stack.pop() {
                if !component.insert(n) {
                    continue;
                }
                for cell in self.vertices[n].cells.iter().flatten() {
                    if let Some((k, _)) = self.vertices.get_key_value(cell) {
                        stack.push(k);
                    }
                }
            }
            let vertices: Vec<NodeId> = members
                .iter()
                .filter(|m| component.contains(*m))
                .map(|m| (*m).clone())
                .collect();
            assigned.extend(component);
            let matrix = vertices.iter().map(|v| self.vertices[v].cells.clone()).collect();
            subgraphs.push(Subgraph { vertices, matrix });
        }
        SpmLayerGraph { layer, subgraphs }
    }

    /// Re-checks every structural invariant.
    pub fn validate(&self) -> Result<(), SpmError> {
        for (name, v) in &self.vertices {
            for d in Direction::ALL {
                if let Some(n) = &v.cells[d.index()] {
                    let other = self.vertices.get(n).ok_or_else(|| SpmError::UnknownVertex(n.clone()))?;
                    if n == name {
                        return Err(SpmError::SelfRelation(n.clone()));
                    }
                    if other.layer != v.layer {
                        return Err(SpmError::LayerMismatch {
                            subject: name.clone(),
                            object: n.clone(),
                        });
                    }
                    if other.cells[d.inverse().index()].as_ref() != Some(name) {
                        return Err(SpmError::Asymmetric {
                            vertex: name.clone(),
                            direction: d,
                            neighbor: n.clone(),
                        });
                    }
                }
            }
        }
        for (child, parent) in &self.scope.parent {
            let child_layer = self.layer_of(child).ok_or_else(|| SpmError::UnknownVertex(child.clone()))?;
            let parent_layer = self.layer_of(parent).ok_or_else(|| SpmError::UnknownVertex(parent.clone()))?;
            if parent_layer <= child_layer {
                return Err(SpmError::LayerOrder {
                    child: child.clone(),
                    child_layer,
                    parent: parent.clone(),
                    parent_layer,
                });
            }
        }
        Ok(())
    }

    /// Text tables of every subgraph of `layer`, laid out like an adjacency
    /// matrix with `Φ` for empty cells. When `memory` is given, empty cells
    /// occupied by an anchored dynamic entity show it with an `(a)` mark.
    pub fn render_layer(&self, layer: i32, memory: Option<&Memory>) -> String {
        let mut out = String::new();
        let graph = self.layer(layer);
        let mut footnote = false;
        for (j, sub) in graph.subgraphs.iter().enumerate() {
            let names: Vec<&str> = sub.vertices.iter().map(NodeId::name).collect();
            out.push_str(&format!(
                "Layer {layer}, subgraph {}: {{{}}}\n",
                j + 1,
                names.join(", ")
            ));
            let mut header = vec!["SN".to_string(), "V \\ E".to_string()];
            header.extend(Direction::ALL.iter().map(|d| d.label().to_string()));
            let mut rows = vec![header];
            for (i, (v, cells)) in sub.vertices.iter().zip(&sub.matrix).enumerate() {
                let mut row = vec![(i + 1).to_string(), v.name().to_string()];
                for d in Direction::ALL {
                    let text = match &cells[d.index()] {
                        Some(n) => n.name().to_string(),
                        None => match memory.and_then(|m| occupant(m, v, d)) {
                            Some(o) => {
                                footnote = true;
                                format!("{o} (a)")
                            }
                            None => "Φ".to_string(),
                        },
                    };
                    row.push(text);
                }
                rows.push(row);
            }
            out.push_str(&format_table(&rows));
        }
        if footnote {
            out.push_str("(a) dynamic entity, not a vertex of the layer\n");
        }
        out
    }

    /// Scope tree as an indented outline.
    pub fn render_tree(&self) -> String {
        fn walk(spm: &Spm, v: &NodeId, depth: usize, out: &mut String) {
            out.push_str(&format!(
                "{}{} (layer {})\n",
                "  ".repeat(depth),
                v.name(),
                spm.layer_of(v).unwrap_or_default()
            ));
            for c in spm.children(v) {
                walk(spm, c, depth + 1, out);
            }
        }
        let mut out = String::new();
        for root in self.vertices.keys().filter(|v| self.parent(v).is_none()) {
            walk(self, root, 0, &mut out);
        }
        out
    }
}

fn occupant(memory: &Memory, vertex: &NodeId, d: Direction) -> Option<String> {
    let names: Vec<String> = memory
        .sheets()
        .filter_map(|sheet| {
            let (rel, sapp) = sheet.open_record(SPATIAL_POSITION)?.value.as_position()?;
            (sapp == vertex && rel.direction() == Some(d)).then(|| sheet.entity.name().to_string())
        })
        .collect();
    (!names.is_empty()).then(|| names.join(", "))
}

fn format_table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, cell)| format!("{cell}{}", " ".repeat(widths[i] - cell.chars().count())))
            .collect();
        out.push_str(line.join(" | ").trim_end());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScopeRelation {
    Inside,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpwCategory {
    Scope(ScopeRelation),
    Direction(Direction),
    Distance,
    Other,
}

/// Spatial-positioning words by category. The first word listed for a
/// category is the one generated.
#[derive(Debug, Clone)]
pub struct SpwTable {
    inside: Vec<&'static str>,
    outside: Vec<&'static str>,
    directions: [Vec<&'static str>; 6],
    distance: Vec<&'static str>,
    other: Vec<&'static str>,
}

impl Default for SpwTable {
    fn default() -> Self {
        Self {
            inside: vec!["in", "at", "inside", "within", "among"],
            outside: vec!["out of", "outside", "beyond"],
            directions: [
                vec!["on the left side of", "on the left side"],
                vec!["on the right side of", "on the right side"],
                vec!["before", "in front of"],
                vec!["behind", "after"],
                vec!["on", "above", "up", "over"],
                vec!["under", "below", "beneath"],
            ],
            distance: vec!["by", "beside", "alongside", "nearby", "around", "close to", "next to"],
            other: vec!["against", "toward"],
        }
    }
}

impl SpwTable {
    pub fn direction_word(&self, d: Direction) -> &'static str {
        self.directions[d.index()][0]
    }

    pub fn direction_words(&self, d: Direction) -> &[&'static str] {
        &self.directions[d.index()]
    }

    pub fn scope_word(&self) -> &'static str {
        self.inside[0]
    }

    pub fn category(&self, word: &str) -> Option<SpwCategory> {
        let w = word.trim().to_lowercase();
        let w = w.as_str();
        if self.inside.contains(&w) {
            return Some(SpwCategory::Scope(ScopeRelation::Inside));
        }
        if self.outside.contains(&w) {
            return Some(SpwCategory::Scope(ScopeRelation::Outside));
        }
        for d in Direction::ALL {
            if self.directions[d.index()].contains(&w) {
                return Some(SpwCategory::Direction(d));
            }
        }
        if self.distance.contains(&w) {
            return Some(SpwCategory::Distance);
        }
        if self.other.contains(&w) {
            return Some(SpwCategory::Other);
        }
        None
    }

    pub fn relation_word(&self, r: Relation) -> &'static str {
        match r.direction() {
            Some(d) => self.direction_word(d),
            None => self.scope_word(),
        }
    }

    /// Relation named by a positioning word, if it is one we store.
    pub fn relation_for(&self, word: &str) -> Option<Relation> {
        match self.category(word)? {
            SpwCategory::Scope(ScopeRelation::Inside) => Some(Relation::Inside),
            SpwCategory::Direction(d) => Some(d.into()),
            _ => None,
        }
    }
}

/// Direction-based (adjacent SAPP in the same layer) or scope-based
/// (parent SAPP) position expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpressionType {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositionStatement {
    pub target: NodeId,
    pub spw: &'static str,
    pub sapp: NodeId,
    pub expression: ExpressionType,
    /// More than one unit of the target is stored at the position.
    pub plural: bool,
}

impl PositionStatement {
    /// "The cat is on the fridge." `determiner` replaces the article in
    /// front of the target, e.g. "my" for the listener's own house.
    pub fn render(&self, lex: &Lexicon, determiner: Option<&str>) -> String {
        let subject = noun_phrase(lex, self.target.name(), self.plural, determiner);
        let be = if self.plural { "are" } else { "is" };
        let place = noun_phrase(lex, self.sapp.name(), false, None);
        capitalize(&format!("{subject} {be} {} {place}.", self.spw))
    }
}

/// "the fridge" for common nouns, the bare name otherwise.
pub fn noun_phrase(lex: &Lexicon, name: &str, plural: bool, determiner: Option<&str>) -> String {
    if lex.takes_article(name) {
        let noun = name.to_lowercase();
        let noun = if plural { pluralize(&noun) } else { noun };
        format!("{} {noun}", determiner.unwrap_or("the"))
    } else {
        name.to_string()
    }
}

pub fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Where an entity sits: its own vertex, or the SAPP its current
/// spatial-position record points at.
#[derive(Debug, Clone, PartialEq)]
pub struct Anchor {
    pub sapp: NodeId,
    pub relation: Option<Relation>,
    pub quantity: Option<u64>,
}

pub fn anchor_of(spm: &Spm, memory: &Memory, entity: &NodeId) -> Option<Anchor> {
    if let Some(v) = spm.vertex(entity.name()) {
        return Some(Anchor {
            sapp: v.clone(),
            relation: None,
            quantity: None,
        });
    }
    let record = memory.current(entity, SPATIAL_POSITION)?;
    let (relation, sapp) = record.value.as_position()?;
    let sapp = spm.vertex(sapp.name())?.clone();
    Some(Anchor {
        sapp,
        relation: Some(relation),
        quantity: record.quantity,
    })
}

/// Positions `target` relative to the SPM as seen by `observer`, an
/// entity anchored through its own vertex or spatial-position record.
pub fn express_position(
    spm: &Spm,
    memory: &Memory,
    target: &NodeId,
    observer: Option<&NodeId>,
) -> Result<PositionStatement, SpmError> {
    let observer_sapp = observer.and_then(|o| anchor_of(spm, memory, o)).map(|a| a.sapp);
    express_position_from(spm, memory, target, observer_sapp.as_ref())
}

/// Positions `target` relative to the SPM for an observer standing at the
/// SAPP `observer`.
///
/// The direction form is used when the observer is in the same layer as
/// the target (or no observer is given) and a direction relation exists;
/// otherwise the scope form names the enclosing SAPP. Among several adjacent
/// SAPPs the observer's own is preferred, then matrix column order.
pub fn express_position_from(
    spm: &Spm,
    memory: &Memory,
    target: &NodeId,
    observer: Option<&NodeId>,
) -> Result<PositionStatement, SpmError> {
    let spw = SpwTable::default();
    let anchor = anchor_of(spm, memory, target).ok_or_else(|| SpmError::Unlocatable(target.clone()))?;
    let target_name = memory
        .graph
        .node(target.name())
        .or_else(|| spm.vertex(target.name()))
        .cloned()
        .unwrap_or_else(|| target.clone());
    let plural = anchor.quantity.is_some_and(|q| q > 1);

    let mut direction_candidates: Vec<(&'static str, NodeId)> = Vec::new();
    let scope_candidate: Option<NodeId> = match anchor.relation {
        None => {
            for d in Direction::ALL {
                if let Some(n) = spm.cell(&anchor.sapp, d) {
                    direction_candidates.push((spw.direction_word(d.inverse()), n.clone()));
                }
            }
            spm.parent(&anchor.sapp).cloned()
        }
        Some(Relation::Inside) => Some(anchor.sapp.clone()),
        Some(rel) => {
            direction_candidates.push((spw.relation_word(rel), anchor.sapp.clone()));
            spm.parent(&anchor.sapp).cloned()
        }
    };

    let same_layer = match observer {
        None => true,
        Some(o) => spm.layer_of(o).is_some() && spm.layer_of(o) == spm.layer_of(&anchor.sapp),
    };
    let direction_pick = || {
        let preferred = observer.and_then(|o| direction_candidates.iter().find(|(_, s)| s == o));
        preferred.or(direction_candidates.first()).cloned()
    };
    let type_a = |(word, sapp): (&'static str, NodeId)| PositionStatement {
        target: target_name.clone(),
        spw: word,
        sapp,
        expression: ExpressionType::A,
        plural,
    };
    let type_b = |sapp: NodeId| PositionStatement {
        target: target_name.clone(),
        spw: spw.scope_word(),
        sapp,
        expression: ExpressionType::B,
        plural,
    };

    if same_layer {
        if let Some(c) = direction_pick() {
            return Ok(type_a(c));
        }
    }
    if let Some(p) = scope_candidate {
        return Ok(type_b(p));
    }
    if let Some(c) = direction_pick() {
        return Ok(type_a(c));
    }
    Err(SpmError::Unlocatable(target.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> NodeId {
        NodeId::new(s)
    }

    fn living_room() -> Spm {
        let mut spm = Spm::new();
        spm.add_sapp("**community", 2, None).unwrap();
        spm.add_sapp("House", 1, Some(&n("**community"))).unwrap();
        for v in ["Table", "Fridge", "Sofa"] {
            spm.add_sapp(v, 0, Some(&n("House"))).unwrap();
        }
        spm.set_direction(&n("Table"), Direction::Back, &n("Sofa")).unwrap();
        spm.set_direction(&n("Sofa"), Direction::Right, &n("Fridge")).unwrap();
        spm
    }

    #[test]
    fn inverse_is_an_involution() {
        for d in Direction::ALL {
            assert_ne!(d, d.inverse());
            assert_eq!(d, d.inverse().inverse());
        }
    }

    #[test]
    fn add_sapp_checks_duplicates_and_layers() {
        let mut spm = living_room();
        assert_eq!(
            spm.add_sapp("Fridge", 0, Some(&n("House"))),
            Err(SpmError::DuplicateVertex(n("Fridge")))
        );
        assert!(matches!(
            spm.add_sapp("Garage", 1, Some(&n("Fridge"))),
            Err(SpmError::LayerOrder { .. })
        ));
        assert!(matches!(
            spm.add_sapp("Shed", 0, Some(&n("Nowhere"))),
            Err(SpmError::UnknownVertex(_))
        ));
    }

    #[test]
    fn set_direction_writes_both_cells() {
        let spm = living_room();
        assert_eq!(spm.cell(&n("Sofa"), Direction::Front), Some(&n("Table")));
        assert_eq!(spm.cell(&n("Fridge"), Direction::Left), Some(&n("Sofa")));
        spm.validate().unwrap();
    }

    #[test]
    fn occupied_cells_conflict() {
        let mut spm = living_room();
        let err = spm.set_direction(&n("Table"), Direction::Back, &n("Fridge")).unwrap_err();
        assert!(matches!(err, SpmError::Conflict { .. }));
        // the inverse cell of the object is checked as well
        spm.add_sapp("Lamp", 0, None).unwrap();
        let err = spm.set_direction(&n("Lamp"), Direction::Back, &n("Sofa")).unwrap_err();
        assert!(matches!(err, SpmError::Conflict { .. }));
        // re-asserting an existing relation is a no-op
        spm.set_direction(&n("Sofa"), Direction::Front, &n("Table")).unwrap();
        assert!(matches!(
            spm.set_direction(&n("House"), Direction::Left, &n("Table")),
            Err(SpmError::LayerMismatch { .. })
        ));
    }

    #[test]
    fn neighbors_and_scope() {
        let spm = living_room();
        let table = spm.neighbors(&n("Table")).unwrap();
        assert_eq!(table[&Direction::Back], Some(n("Sofa")));
        assert_eq!(table.values().filter(|c| c.is_some()).count(), 1);
        let sofa = spm.neighbors(&n("Sofa")).unwrap();
        assert_eq!(sofa[&Direction::Right], Some(n("Fridge")));
        assert_eq!(sofa[&Direction::Front], Some(n("Table")));
        assert_eq!(spm.neighbors(&n("Ghost")), Err(SpmError::UnknownVertex(n("Ghost"))));

        let house = spm.scope_of(&n("House")).unwrap();
        assert_eq!(house, BTreeSet::from([n("Table"), n("Fridge"), n("Sofa")]));
        assert_eq!(spm.scope_of(&n("Fridge")).unwrap(), BTreeSet::from([n("Fridge")]));
        assert!(spm.is_within(&n("Sofa"), &n("**community")));
        assert!(!spm.is_within(&n("House"), &n("Sofa")));
    }

    #[test]
    fn asymmetric_cells_fail_validation() {
        let mut spm = living_room();
        spm.set_cell_unchecked(&n("Table"), Direction::Left, &n("Fridge")).unwrap();
        assert!(matches!(spm.validate(), Err(SpmError::Asymmetric { .. })));
    }

    #[test]
    fn layer_splits_into_connected_subgraphs() {
        let mut spm = living_room();
        spm.add_sapp("Bed", 0, Some(&n("House"))).unwrap();
        let layer = spm.layer(0);
        assert_eq!(layer.subgraphs.len(), 2);
        assert_eq!(layer.subgraphs[0].vertices, vec![n("Table"), n("Fridge"), n("Sofa")]);
        assert_eq!(layer.subgraphs[1].vertices, vec![n("Bed")]);
    }

    #[test]
    fn spw_categories_do_not_mix() {
        let t = SpwTable::default();
        assert_eq!(t.category("in"), Some(SpwCategory::Scope(ScopeRelation::Inside)));
        assert_eq!(t.category("behind"), Some(SpwCategory::Direction(Direction::Back)));
        assert_eq!(t.category("beside"), Some(SpwCategory::Distance));
        for d in Direction::ALL {
            assert!(!t.direction_words(d).is_empty());
            assert_eq!(t.category(t.direction_word(d)), Some(SpwCategory::Direction(d)));
        }
    }

    #[test]
    fn render_uses_phi_for_empty_cells() {
        let text = living_room().render_layer(0, None);
        assert!(text.contains("Table  | Φ"));
        assert!(text.lines().count() >= 4);
    }
}
