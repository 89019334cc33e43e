//! Turn-by-turn dialogue understanding.
//!
//! An utterance goes through segmentation, task classification, object
//! resolution (pronouns, vocatives, names), task planning and execution
//! against the knowledge base. Verifications and searches only read the
//! knowledge base; actions and descriptions write to it.

use std::collections::BTreeMap;

use chrono::Duration;
use serde::{Deserialize, Serialize};

use crate::ids::NodeId;
use crate::lexicon::{analyze, Chunk, ChunkKind, DataKind, Lexicon, PointerKind, StructureKind};
use crate::measurement::{eval_quantity, numeral, QuantityEval};
use crate::memory::{iso_timestamp, AttributeUpdate, AttributeValue, Memory, Relation, Timestamp, SPATIAL_POSITION};
use crate::readout::{defining, ReadingMode};
use crate::spm::{anchor_of, express_position_from, Spm, SpwTable};
use crate::tasks::{np_end, TaskError, TaskSentence, TaskType};

pub const YES: &str = "Yes.";
pub const NO: &str = "No.";
pub const SURE: &str = "Sure.";
pub const UNKNOWN: &str = "I don't know.";
pub const REFUSAL: &str = "Sorry, I can't do that.";
pub const ACKNOWLEDGED: &str = "OK.";
pub const CLARIFY: &str = "Sorry, could you say that again?";
pub const CONTRADICTION: &str = "Sorry, that contradicts what I know.";

/// Verbs that move the object to the recipient.
const DELIVERY_VERBS: [&str; 2] = ["give", "bring"];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DialogueError {
    #[error("speaker and addressee are both {0}")]
    SameParticipant(NodeId),
    #[error("{0:?} does not name anything I know")]
    UnresolvedEntity(String),
    #[error(transparent)]
    Task(#[from] TaskError),
}

/// Source of the timestamps written by a turn.
#[derive(Debug, Clone, PartialEq)]
pub enum Clock {
    Fixed(Timestamp),
    /// Starts at `next` and advances by `step` after every reading.
    Tick { next: Timestamp, step: Duration },
    System,
}

impl Clock {
    pub fn now(&mut self) -> Timestamp {
        match self {
            Clock::Fixed(t) => *t,
            Clock::Tick { next, step } => {
                let t = *next;
                *next = t + *step;
                t
            }
            Clock::System => chrono::Utc::now(),
        }
    }

    pub fn peek(&self) -> Timestamp {
        match self {
            Clock::Fixed(t) | Clock::Tick { next: t, .. } => *t,
            Clock::System => chrono::Utc::now(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DialogueContext {
    pub speaker: NodeId,
    pub addressee: NodeId,
    /// Everything inside `owner_root` belongs to `owner` unless an explicit
    /// inclusion edge says otherwise.
    pub owner: NodeId,
    pub owner_root: Option<NodeId>,
    pub clock: Clock,
    /// Where participants without a spatial-position record stand.
    pub spm_anchor: BTreeMap<NodeId, NodeId>,
}

impl DialogueContext {
    pub fn new(speaker: impl Into<NodeId>, addressee: impl Into<NodeId>, owner: impl Into<NodeId>) -> Result<Self, DialogueError> {
        let (speaker, addressee) = (speaker.into(), addressee.into());
        if speaker == addressee {
            return Err(DialogueError::SameParticipant(speaker));
        }
        Ok(Self {
            speaker,
            addressee,
            owner: owner.into(),
            owner_root: None,
            clock: Clock::System,
            spm_anchor: BTreeMap::new(),
        })
    }

    pub fn with_owner_root(mut self, root: impl Into<NodeId>) -> Self {
        self.owner_root = Some(root.into());
        self
    }

    pub fn with_clock(mut self, clock: Clock) -> Self {
        self.clock = clock;
        self
    }

    /// Swaps in new participants, keeping ownership and clock.
    pub fn set_participants(&mut self, speaker: NodeId, addressee: NodeId) -> Result<(), DialogueError> {
        if speaker == addressee {
            return Err(DialogueError::SameParticipant(speaker));
        }
        self.speaker = speaker;
        self.addressee = addressee;
        Ok(())
    }

    fn observer_sapp(&self, spm: &Spm, memory: &Memory) -> Option<NodeId> {
        self.spm_anchor
            .get(&self.speaker)
            .cloned()
            .or_else(|| anchor_of(spm, memory, &self.speaker).map(|a| a.sapp))
    }
}

/// Chunks with the vocative removed, multi-word names merged and each chunk
/// bound to the entity it refers to.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedChunks {
    pub chunks: Vec<Chunk>,
    pub bindings: Vec<Option<NodeId>>,
    pub vocative: Option<String>,
    /// Entity-like words that matched nothing.
    pub unbound: Vec<String>,
}

const SPEAKER_WORDS: [&str; 7] = ["i", "me", "my", "we", "us", "our", "ours"];
const ADDRESSEE_WORDS: [&str; 3] = ["you", "your", "yours"];
const POSSESSIVE_DETERMINERS: [&str; 3] = ["my", "our", "your"];

fn lookup_entity(memory: &Memory, spm: &Spm, name: &str) -> Option<NodeId> {
    memory
        .find(name)
        .cloned()
        .or_else(|| spm.vertex(name).cloned())
}

fn entity_like(c: &Chunk) -> bool {
    c.is_unknown() || c.kind().is_some_and(|k| k.is_entity())
}

pub fn resolve_objects(chunks: &[Chunk], ctx: &DialogueContext, memory: &Memory, spm: &Spm) -> ResolvedChunks {
    let run = chunks.iter().take_while(|c| c.is_unknown()).count();
    let (vocative, start) = if run > 0 && chunks.get(run).is_some_and(|c| c.surface == ",") {
        let words: Vec<&str> = chunks[..run].iter().map(|c| c.surface.as_str()).collect();
        (Some(words.join(" ")), run + 1)
    } else {
        (None, 0)
    };
    let body = &chunks[start..];
    let mut out = Vec::new();
    let mut bindings = Vec::new();
    let mut unbound = Vec::new();
    let mut i = 0;
    while i < body.len() {
        let c = &body[i];
        let norm = c.norm();
        if c.is_pointer(PointerKind::Demonstrative) {
            // "my house": the determiner qualifies the noun that follows
            let qualifies = POSSESSIVE_DETERMINERS.contains(&norm.as_str()) && body.get(i + 1).is_some_and(entity_like);
            let bound = if qualifies {
                None
            } else if SPEAKER_WORDS.contains(&norm.as_str()) {
                Some(ctx.speaker.clone())
            } else if ADDRESSEE_WORDS.contains(&norm.as_str()) {
                Some(ctx.addressee.clone())
            } else {
                None
            };
            out.push(c.clone());
            bindings.push(bound);
            i += 1;
            continue;
        }
        if !entity_like(c) {
            out.push(c.clone());
            bindings.push(None);
            i += 1;
            continue;
        }
        // longest run of name-like chunks that names a known node
        let max = body[i..].iter().take_while(|c| entity_like(c)).count().min(4);
        let mut matched = None;
        for len in (1..=max).rev() {
            let name: Vec<&str> = body[i..i + len].iter().map(|c| c.surface.as_str()).collect();
            if let Some(node) = lookup_entity(memory, spm, &name.join(" ")) {
                matched = Some((len, node));
                break;
            }
        }
        match matched {
            Some((1, node)) => {
                out.push(c.clone());
                bindings.push(Some(node));
                i += 1;
            }
            Some((len, node)) => {
                let surface: Vec<&str> = body[i..i + len].iter().map(|c| c.surface.as_str()).collect();
                out.push(Chunk::new(surface.join(" "), None));
                bindings.push(Some(node));
                i += len;
            }
            None => {
                unbound.push(c.surface.clone());
                out.push(c.clone());
                bindings.push(None);
                i += 1;
            }
        }
    }
    ResolvedChunks {
        chunks: out,
        bindings,
        vocative,
        unbound,
    }
}

/// What a verification checks or a description asserts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Value(AttributeValue),
    /// An edge labeled with the space, from the subject to this node.
    Member(NodeId),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResolvedTask {
    VerifyInclusion { owner: NodeId, object: NodeId },
    VerifyQuantity { object: NodeId, word: String },
    VerifyRelation { subject: NodeId, space: String, claim: Claim },
    SearchAttribute { subject: NodeId, space: String },
    AssertDescription { subject: NodeId, space: String, claim: Claim },
    Action { verb: String, object: NodeId, recipient: NodeId, demand: u64 },
}

fn first_bound(bindings: &[Option<NodeId>], range: std::ops::Range<usize>) -> Option<NodeId> {
    bindings.get(range)?.iter().flatten().next().cloned()
}

fn last_bound(bindings: &[Option<NodeId>], range: std::ops::Range<usize>) -> Option<NodeId> {
    bindings.get(range)?.iter().flatten().last().cloned()
}

fn unresolved(chunks: &[Chunk], range: std::ops::Range<usize>) -> DialogueError {
    let words: Vec<&str> = chunks[range]
        .iter()
        .filter(|c| entity_like(c))
        .map(|c| c.surface.as_str())
        .collect();
    DialogueError::UnresolvedEntity(if words.is_empty() { "?".into() } else { words.join(" ") })
}

fn body_end(chunks: &[Chunk]) -> usize {
    match chunks.last() {
        Some(c) if c.is_terminal() => chunks.len() - 1,
        _ => chunks.len(),
    }
}

fn asc_of(c: &Chunk) -> Option<String> {
    match c.kind() {
        Some(ChunkKind::Data(DataKind::AttributeSpace)) | Some(ChunkKind::Data(DataKind::ExtendedAttribute)) => {
            Some(c.norm())
        }
        _ => None,
    }
}

/// Reads the predicate of a "Be" sentence into a claim about `space`.
fn predicate_claim(
    chunks: &[Chunk],
    bindings: &[Option<NodeId>],
    range: std::ops::Range<usize>,
    subject_asc: Option<String>,
    spm: &Spm,
) -> Option<(String, Claim)> {
    let pred = &chunks[range.clone()];
    let spw = SpwTable::default();
    if let Some(p) = pred.iter().position(|c| c.is_pointer(PointerKind::Preposition)) {
        if let Some(relation) = spw.relation_for(&pred[p].surface) {
            let sapp = first_bound(bindings, range.start + p + 1..range.end)?;
            let sapp = spm.vertex(sapp.name()).cloned().unwrap_or(sapp);
            return Some((SPATIAL_POSITION.into(), Claim::Value(AttributeValue::position(relation, sapp))));
        }
    }
    if let Some(asc) = subject_asc {
        if let Some(node) = first_bound(bindings, range.clone()) {
            return Some((asc, Claim::Member(node)));
        }
        let words: Vec<&str> = pred
            .iter()
            .filter(|c| c.is_data() && !c.is_data_kind(DataKind::Measurement))
            .map(|c| c.surface.as_str())
            .collect();
        return (!words.is_empty()).then(|| (asc, Claim::Value(AttributeValue::word(words.join(" ")))));
    }
    if let Some(attr) = pred.iter().find(|c| c.is_data_kind(DataKind::BasicAttribute)) {
        let space = attr.hint().unwrap_or("attribute").to_string();
        return Some((space, Claim::Value(AttributeValue::word(attr.norm()))));
    }
    let node = first_bound(bindings, range)?;
    Some(("kind".into(), Claim::Member(node)))
}

/// Subject entity and ASC of a noun phrase such as "the dog's name".
fn subject_of(chunks: &[Chunk], bindings: &[Option<NodeId>], range: std::ops::Range<usize>) -> (Option<NodeId>, Option<String>) {
    let subject = first_bound(bindings, range.clone());
    let asc = chunks[range.clone()]
        .iter()
        .zip(&bindings[range])
        .find(|(c, b)| b.is_none() && asc_of(c).is_some())
        .and_then(|(c, _)| asc_of(c));
    (subject, asc)
}

/// Turns a classified, resolved sentence into executable tasks.
pub fn plan_tasks(s: &TaskSentence, bindings: &[Option<NodeId>], ctx: &DialogueContext, spm: &Spm) -> Result<Vec<ResolvedTask>, DialogueError> {
    let c = &s.chunks;
    let end = body_end(c);
    match s.task {
        TaskType::Verification => plan_verification(s, bindings, spm, end),
        TaskType::Search => plan_search(s, bindings, end),
        TaskType::Description if s.imperative => {
            let verb = c[0].norm();
            let recipient = c[1..end]
                .iter()
                .zip(&bindings[1..end])
                .find(|(ch, b)| b.is_some() && ch.is_pointer(PointerKind::Demonstrative))
                .and_then(|(_, b)| b.clone())
                .unwrap_or_else(|| ctx.speaker.clone());
            let object = c[1..end]
                .iter()
                .zip(&bindings[1..end])
                .rfind(|(ch, b)| b.is_some() && !ch.is_pointer(PointerKind::Demonstrative))
                .and_then(|(_, b)| b.clone())
                .ok_or_else(|| unresolved(c, 1..end))?;
            let demand = c[1..end]
                .iter()
                .find(|ch| ch.is_data_kind(DataKind::Measurement))
                .and_then(|m| match m.norm().as_str() {
                    "a" | "an" => Some(1),
                    w => numeral(w),
                })
                .unwrap_or(1);
            Ok(vec![ResolvedTask::Action {
                verb,
                object,
                recipient,
                demand,
            }])
        }
        TaskType::Description => plan_description(s, bindings, spm, end),
    }
}

fn pivot_index(s: &TaskSentence, from: usize, end: usize) -> usize {
    (from..end)
        .find(|i| {
            let ch = &s.chunks[*i];
            match s.mode {
                ReadingMode::Drm => ch.is_structure(StructureKind::Be),
                ReadingMode::Srm => ch.is_structure(StructureKind::Have),
                ReadingMode::Prm => ch.is_data_kind(DataKind::Verb),
            }
        })
        .unwrap_or(end)
}

fn plan_verification(s: &TaskSentence, bindings: &[Option<NodeId>], spm: &Spm, end: usize) -> Result<Vec<ResolvedTask>, DialogueError> {
    let c = &s.chunks;
    match s.mode {
        ReadingMode::Drm => {
            let np = np_end(c, 1).max(2).min(end);
            let (subject, asc) = subject_of(c, bindings, 1..np);
            let subject = subject.ok_or_else(|| unresolved(c, 1..np))?;
            let (space, claim) = predicate_claim(c, bindings, np..end, asc, spm).ok_or_else(|| unresolved(c, np..end))?;
            Ok(vec![ResolvedTask::VerifyRelation { subject, space, claim }])
        }
        ReadingMode::Srm => {
            let have = pivot_index(s, 1, end);
            let owner = first_bound(bindings, 1..have).ok_or_else(|| unresolved(c, 1..have))?;
            let object = last_bound(bindings, have + 1..end).ok_or_else(|| unresolved(c, have + 1..end))?;
            let mut tasks = vec![ResolvedTask::VerifyInclusion {
                owner,
                object: object.clone(),
            }];
            if let Some(m) = c[have + 1..end].iter().find(|ch| ch.is_data_kind(DataKind::Measurement)) {
                tasks.push(ResolvedTask::VerifyQuantity {
                    object,
                    word: m.norm(),
                });
            }
            Ok(tasks)
        }
        ReadingMode::Prm => {
            let v = pivot_index(s, 1, end);
            let subject = first_bound(bindings, 1..v).ok_or_else(|| unresolved(c, 1..v))?;
            let object = last_bound(bindings, v + 1..end).ok_or_else(|| unresolved(c, v + 1..end))?;
            Ok(vec![ResolvedTask::VerifyRelation {
                subject,
                space: c[v].norm(),
                claim: Claim::Member(object),
            }])
        }
    }
}

fn plan_search(s: &TaskSentence, bindings: &[Option<NodeId>], end: usize) -> Result<Vec<ResolvedTask>, DialogueError> {
    let c = &s.chunks;
    let slot = s.missing_slot.unwrap_or(0);
    let key = c[slot].hint().unwrap_or("generic").to_string();
    let after = slot + 1..end;
    let task = match key.as_str() {
        "spatial-position" | "quantity" => {
            let subject = match key.as_str() {
                // "how many apples do we have": the counted noun follows
                "quantity" => c
                    .iter()
                    .enumerate()
                    .skip(slot + 1)
                    .find(|(i, ch)| bindings[*i].is_some() && !ch.is_pointer(PointerKind::Demonstrative))
                    .and_then(|(i, _)| bindings[i].clone()),
                _ => first_bound(bindings, after.clone()),
            };
            let subject = subject.ok_or_else(|| unresolved(c, after.clone()))?;
            ResolvedTask::SearchAttribute { subject, space: key }
        }
        "color" | "taste" | "smell" | "shape" | "somatic sensation" | "temperature" | "size" => {
            let subject = first_bound(bindings, after.clone()).ok_or_else(|| unresolved(c, after.clone()))?;
            ResolvedTask::SearchAttribute { subject, space: key }
        }
        _ => {
            let (subject, asc) = subject_of(c, bindings, after.clone());
            let space = asc.or_else(|| {
                c[after.clone()]
                    .iter()
                    .find(|ch| ch.is_data_kind(DataKind::Verb))
                    .map(Chunk::norm)
            });
            match (subject, space) {
                (Some(subject), Some(space)) => ResolvedTask::SearchAttribute { subject, space },
                _ => return Err(unresolved(c, after)),
            }
        }
    };
    Ok(vec![task])
}

fn plan_description(s: &TaskSentence, bindings: &[Option<NodeId>], spm: &Spm, end: usize) -> Result<Vec<ResolvedTask>, DialogueError> {
    let c = &s.chunks;
    let p = pivot_index(s, 0, end);
    let (subject, asc) = subject_of(c, bindings, 0..p);
    let subject = match subject {
        Some(s) => s,
        None => {
            // a new name becomes a new entity
            let words: Vec<&str> = c[..p].iter().filter(|ch| ch.is_unknown()).map(|ch| ch.surface.as_str()).collect();
            if words.is_empty() {
                return Err(unresolved(c, 0..p));
            }
            NodeId::new(words.join(" "))
        }
    };
    let rest = p + 1..end;
    let (space, claim) = match s.mode {
        ReadingMode::Drm => predicate_claim(c, bindings, rest.clone(), asc, spm).ok_or_else(|| unresolved(c, rest.clone()))?,
        ReadingMode::Srm => {
            let object = last_bound(bindings, rest.clone()).ok_or_else(|| unresolved(c, rest.clone()))?;
            ("possession".to_string(), Claim::Member(object))
        }
        ReadingMode::Prm => {
            let object = last_bound(bindings, rest.clone()).ok_or_else(|| unresolved(c, rest.clone()))?;
            (c[p].norm(), Claim::Member(object))
        }
    };
    Ok(vec![ResolvedTask::AssertDescription { subject, space, claim }])
}

/// A record boundary written by a turn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordChange {
    pub entity: NodeId,
    pub space: String,
    pub old_quantity: Option<u64>,
    pub new_quantity: Option<u64>,
    #[serde(with = "iso_timestamp")]
    pub boundary: Timestamp,
}

impl From<&AttributeUpdate> for RecordChange {
    fn from(u: &AttributeUpdate) -> Self {
        RecordChange {
            entity: u.entity.clone(),
            space: u.opened.space.clone(),
            old_quantity: u.closed.as_ref().and_then(|r| r.quantity),
            new_quantity: u.opened.quantity,
            boundary: u.opened.cts,
        }
    }
}

fn stored_quantity(memory: &Memory, object: &NodeId) -> u64 {
    match memory.current(object, SPATIAL_POSITION) {
        Some(r) => r.quantity.unwrap_or(1),
        None => 0,
    }
}

fn owns(ctx: &DialogueContext, memory: &Memory, spm: &Spm, owner: &NodeId, object: &NodeId) -> bool {
    if memory.graph.query_inclusion(owner, object) {
        return true;
    }
    if *owner != ctx.owner {
        return false;
    }
    match (&ctx.owner_root, anchor_of(spm, memory, object)) {
        (Some(root), Some(anchor)) => spm.is_within(&anchor.sapp, root),
        _ => false,
    }
}

fn claim_holds(memory: &Memory, spm: &Spm, subject: &NodeId, space: &str, claim: &Claim) -> bool {
    match claim {
        Claim::Value(AttributeValue::Position { relation, sapp }) => {
            let Some(anchor) = anchor_of(spm, memory, subject) else {
                return false;
            };
            match relation {
                Relation::Inside => anchor.sapp != *subject && spm.is_within(&anchor.sapp, sapp) || {
                    anchor.sapp == *subject && spm.parent(subject).is_some_and(|p| spm.is_within(p, sapp))
                },
                _ => {
                    anchor.relation == Some(*relation) && anchor.sapp == *sapp
                        || relation.direction().is_some_and(|d| spm.cell(subject, d.inverse()) == Some(sapp))
                }
            }
        }
        Claim::Value(value) => memory
            .current(subject, space)
            .is_some_and(|r| match (&r.value, value) {
                (AttributeValue::Word(a), AttributeValue::Word(b)) => a.eq_ignore_ascii_case(b),
                (a, b) => a == b,
            }),
        Claim::Member(node) => {
            memory.graph.dashed_out(subject).any(|(s, to)| s == space && to == node)
                || memory.graph.solid_children(subject).any(|(s, to)| s == space && to == node)
                || (space == "kind" && memory.graph.query_inclusion(node, subject))
        }
    }
}

fn search_response(
    lex: &Lexicon,
    ctx: &DialogueContext,
    memory: &Memory,
    spm: &Spm,
    subject: &NodeId,
    space: &str,
) -> Option<String> {
    if space == SPATIAL_POSITION {
        let observer = ctx.observer_sapp(spm, memory);
        let statement = express_position_from(spm, memory, subject, observer.as_ref()).ok()?;
        let mine = ctx.speaker == ctx.owner && ctx.owner_root.as_ref() == Some(subject);
        return Some(statement.render(lex, mine.then_some("my")));
    }
    if space == "quantity" {
        let q = stored_quantity(memory, subject);
        return (q > 0).then(|| format!("{q}."));
    }
    let name = subject.name().to_string();
    if let Some(r) = memory.current(subject, space) {
        let value = crate::readout::render_value(&r.value);
        return Some(format!("{}.", defining(vec![name], Some(space), vec![value]).sentence));
    }
    let mut related: Vec<String> = memory
        .graph
        .dashed_out(subject)
        .filter(|(s, _)| *s == space)
        .map(|(_, to)| to.name().to_string())
        .collect();
    related.extend(
        memory
            .graph
            .solid_children(subject)
            .filter(|(s, _)| *s == space)
            .map(|(_, to)| to.name().to_string()),
    );
    if related.is_empty() {
        return None;
    }
    Some(format!("{}.", defining(vec![name], Some(space), related).sentence))
}

/// Runs planned tasks. Returns the response and the records written.
pub fn execute(
    tasks: &[ResolvedTask],
    lex: &Lexicon,
    ctx: &DialogueContext,
    memory: &mut Memory,
    spm: &Spm,
    at: Timestamp,
) -> (String, Vec<RecordChange>) {
    let mut verdicts = Vec::new();
    let mut delta = Vec::new();
    let mut response: Option<String> = None;
    for task in tasks {
        match task {
            ResolvedTask::VerifyInclusion { owner, object } => verdicts.push(owns(ctx, memory, spm, owner, object)),
            ResolvedTask::VerifyQuantity { object, word } => {
                let qty = stored_quantity(memory, object);
                let eval = eval_quantity(word, qty).unwrap_or(QuantityEval::Exists(qty > 0));
                verdicts.push(eval.satisfied_by(qty));
            }
            ResolvedTask::VerifyRelation { subject, space, claim } => {
                verdicts.push(claim_holds(memory, spm, subject, space, claim))
            }
            ResolvedTask::SearchAttribute { subject, space } => {
                response = Some(search_response(lex, ctx, memory, spm, subject, space).unwrap_or_else(|| UNKNOWN.into()));
            }
            ResolvedTask::Action {
                verb,
                object,
                demand,
                ..
            } => {
                let record = memory.current(object, SPATIAL_POSITION).cloned();
                let outcome = match record {
                    Some(r) if DELIVERY_VERBS.contains(&verb.as_str()) => {
                        let have = r.quantity.unwrap_or(1);
                        if *demand <= have && *demand > 0 {
                            memory
                                .update_attribute(object.clone(), SPATIAL_POSITION, r.value.clone(), Some(have - demand), at)
                                .ok()
                        } else {
                            None
                        }
                    }
                    _ => None,
                };
                match outcome {
                    Some(update) => {
                        delta.push(RecordChange::from(&update));
                        response = Some(SURE.into());
                    }
                    None => response = Some(REFUSAL.into()),
                }
            }
            ResolvedTask::AssertDescription { subject, space, claim } => {
                let result = match claim {
                    Claim::Value(value) => memory
                        .update_attribute(subject.clone(), space, value.clone(), None, at)
                        .map(|u| delta.push(RecordChange::from(&u))),
                    Claim::Member(node) if matches!(space.as_str(), "kind" | "possession") => {
                        let (parent, child) = if space == "kind" { (node, subject) } else { (subject, node) };
                        memory.graph.assert_inclusion(parent.clone(), space, child.clone())
                    }
                    Claim::Member(node) => memory.graph.assert_virtual(subject.clone(), space, node.clone(), false),
                };
                response = Some(match result {
                    Ok(()) => ACKNOWLEDGED.into(),
                    Err(_) => CONTRADICTION.into(),
                });
            }
        }
    }
    let text = match response {
        Some(r) => r,
        None if !verdicts.is_empty() && verdicts.iter().all(|v| *v) => YES.into(),
        None => NO.into(),
    };
    (text, delta)
}

/// Everything a turn produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Turn {
    pub utterance: String,
    pub response: String,
    pub delta: Vec<RecordChange>,
    #[serde(with = "iso_timestamp")]
    pub at: Timestamp,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<ResolvedTask>,
}

/// Runs one utterance through the whole pipeline. The clock is read once
/// per call, so every turn consumes one tick.
pub fn process_utterance(
    text: &str,
    ctx: &mut DialogueContext,
    lex: &Lexicon,
    memory: &mut Memory,
    spm: &Spm,
) -> Turn {
    let at = ctx.clock.now();
    let turn = |response: &str, delta: Vec<RecordChange>, tasks: Vec<ResolvedTask>| Turn {
        utterance: text.to_string(),
        response: response.to_string(),
        delta,
        at,
        tasks,
    };
    let chunks = analyze(text, lex);
    let resolved = resolve_objects(&chunks, ctx, memory, spm);
    let sentence = match TaskSentence::from_chunks(resolved.chunks.clone()) {
        Ok(s) => s,
        Err(_) => return turn(CLARIFY, Vec::new(), Vec::new()),
    };
    match plan_tasks(&sentence, &resolved.bindings, ctx, spm) {
        Ok(tasks) => {
            let (response, delta) = execute(&tasks, lex, ctx, memory, spm, at);
            turn(&response, delta, tasks)
        }
        Err(DialogueError::UnresolvedEntity(_)) => {
            let response = match sentence.task {
                TaskType::Verification => NO,
                TaskType::Search => UNKNOWN,
                TaskType::Description if sentence.imperative => REFUSAL,
                TaskType::Description => CLARIFY,
            };
            turn(response, Vec::new(), Vec::new())
        }
        Err(_) => turn(CLARIFY, Vec::new(), Vec::new()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn t(h: u32, m: u32) -> Timestamp {
        chrono::Utc.with_ymd_and_hms(2020, 10, 1, h, m, 0).unwrap()
    }

    fn world() -> (Lexicon, Memory, Spm, DialogueContext) {
        let mut spm = Spm::new();
        spm.add_sapp("House", 1, None).unwrap();
        for v in ["Fridge", "Sofa"] {
            spm.add_sapp(v, 0, Some(&NodeId::new("House"))).unwrap();
        }
        spm.set_direction(&"Sofa".into(), crate::spm::Direction::Right, &"Fridge".into()).unwrap();
        let mut m = Memory::new();
        m.update_attribute("Jack", SPATIAL_POSITION, AttributeValue::position(Relation::Up, "Sofa"), None, t(16, 30))
            .unwrap();
        m.update_attribute("Apple", SPATIAL_POSITION, AttributeValue::position(Relation::Inside, "Fridge"), Some(3), t(11, 0))
            .unwrap();
        let ctx = DialogueContext::new("Jack", "Nana", "Jack")
            .unwrap()
            .with_owner_root("House")
            .with_clock(Clock::Tick {
                next: t(17, 5),
                step: Duration::minutes(1),
            });
        (Lexicon::seed(), m, spm, ctx)
    }

    #[test]
    fn same_participant_is_rejected() {
        assert!(matches!(
            DialogueContext::new("Jack", "jack", "Jack"),
            Err(DialogueError::SameParticipant(_))
        ));
    }

    #[test]
    fn pronouns_and_vocatives_resolve() {
        let (lex, m, spm, ctx) = world();
        let r = resolve_objects(&analyze("Nana, do we have any apple?", &lex), &ctx, &m, &spm);
        assert_eq!(r.vocative.as_deref(), Some("Nana"));
        assert_eq!(r.chunks[0].surface, "do");
        assert_eq!(r.bindings[1], Some(NodeId::new("Jack")));
        assert_eq!(r.bindings[4], Some(NodeId::new("Apple")));
    }

    #[test]
    fn verification_then_action() {
        let (lex, mut m, spm, mut ctx) = world();
        let before = m.clone();
        let first = process_utterance("Nana, do we have any apple?", &mut ctx, &lex, &mut m, &spm);
        assert_eq!(first.response, YES);
        assert_eq!(m, before);
        let second = process_utterance("Give me an apple.", &mut ctx, &lex, &mut m, &spm);
        assert_eq!(second.response, SURE);
        assert_eq!(second.delta.len(), 1);
        assert_eq!(second.delta[0].old_quantity, Some(3));
        assert_eq!(second.delta[0].new_quantity, Some(2));
        assert_eq!(second.delta[0].boundary, t(17, 6));
    }

    #[test]
    fn absent_things_are_denied() {
        let (lex, mut m, spm, mut ctx) = world();
        let turn = process_utterance("do we have any banana?", &mut ctx, &lex, &mut m, &spm);
        assert_eq!(turn.response, NO);
        let turn = process_utterance("Give me twelve apples.", &mut ctx, &lex, &mut m, &spm);
        assert_eq!(turn.response, REFUSAL);
    }

    #[test]
    fn empty_input_asks_again() {
        let (lex, mut m, spm, mut ctx) = world();
        assert_eq!(process_utterance("", &mut ctx, &lex, &mut m, &spm).response, CLARIFY);
    }

    #[test]
    fn where_search_and_assertion() {
        let (lex, mut m, spm, mut ctx) = world();
        let turn = process_utterance("Where is the apple?", &mut ctx, &lex, &mut m, &spm);
        assert_eq!(turn.response, "The apples are in the fridge.");
        let turn = process_utterance("The apple is red.", &mut ctx, &lex, &mut m, &spm);
        assert_eq!(turn.response, ACKNOWLEDGED);
        let turn = process_utterance("Is the apple red?", &mut ctx, &lex, &mut m, &spm);
        assert_eq!(turn.response, YES);
        let turn = process_utterance("What color is the apple?", &mut ctx, &lex, &mut m, &spm);
        assert_eq!(turn.response, "Apple's color is red.");
    }
}
