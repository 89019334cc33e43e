//! Task classification and sentence transformation.
//!
//! Every sentence is a description, verification or search task read in one
//! of the three reading modes. Descriptions can be turned into yes/no
//! verifications (front the "Be", or prepend "do") and into WH searches
//! (replace a data chunk by an interrogative and read outward from it).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lexicon::{analyze, Chunk, ChunkClass, ChunkKind, DataKind, Lexicon, PointerKind, StructureKind};
use crate::memory::MemoryGraph;
use crate::readout::ReadingMode;
use crate::spm::capitalize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TaskType {
    Description,
    Verification,
    Search,
}

impl fmt::Display for TaskType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TaskError {
    #[error("empty sentence")]
    Empty,
    #[error("no Be, Have or verb to classify {0:?} by")]
    UnclassifiableSentence(String),
    #[error("expected a description, got a {0}")]
    NotADescription(TaskType),
    #[error("expected a verification, got a {0}")]
    NotAVerification(TaskType),
    #[error("slot {0} is outside the sentence")]
    SlotOutOfRange(usize),
    #[error("slot {0} is not a data chunk")]
    SlotNotData(usize),
    #[error("slot {0} cannot be searched in this sentence")]
    UnsupportedSlot(usize),
    #[error("malformed verification: {0}")]
    Malformed(String),
}

/// A classified sentence placed in the task grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskSentence {
    /// All chunks, including the terminal punctuation when present.
    pub chunks: Vec<Chunk>,
    pub task: TaskType,
    pub mode: ReadingMode,
    /// Index of the interrogative chunk in a search.
    pub missing_slot: Option<usize>,
    pub terminal: Option<String>,
    /// Subjectless verb-first description ("Give me an apple.").
    pub imperative: bool,
}

const PRONOUNS: [&str; 11] = ["i", "me", "we", "us", "you", "they", "them", "he", "him", "she", "it"];
const PLURAL_PRONOUNS: [&str; 6] = ["i", "we", "us", "you", "they", "them"];
const PLURAL_DETERMINERS: [&str; 2] = ["these", "those"];

fn is_pronoun(c: &Chunk) -> bool {
    c.is_pointer(PointerKind::Demonstrative) && PRONOUNS.contains(&c.norm().as_str())
}

fn is_determiner(c: &Chunk) -> bool {
    c.is_pointer(PointerKind::Demonstrative) && !is_pronoun(c)
}

fn is_head(c: &Chunk) -> bool {
    match c.kind() {
        None => !c.is_terminal(),
        Some(ChunkKind::Data(d)) => matches!(
            d,
            DataKind::EntityExplicitDynamic
                | DataKind::EntityExplicitStatic
                | DataKind::EntityImplicit
                | DataKind::AttributeSpace
                | DataKind::ExtendedAttribute
                | DataKind::BasicAttribute
        ),
        _ => false,
    }
}

/// End (exclusive) of the noun phrase starting at `start`.
///
/// det? measurement* attribute* head, where the head is a pronoun, a run of
/// unknown words (a name), or a noun-like data chunk, optionally extended
/// by "'s NP", "and NP" or "of NP".
pub fn np_end(chunks: &[Chunk], start: usize) -> usize {
    let mut i = start;
    let at = |i: usize| chunks.get(i);
    if at(i).is_some_and(is_determiner) && at(i + 1).is_some_and(|c| is_head(c) || c.is_data_kind(DataKind::Measurement)) {
        i += 1;
    }
    while at(i).is_some_and(|c| c.is_data_kind(DataKind::Measurement)) {
        i += 1;
    }
    while at(i).is_some_and(|c| c.is_data_kind(DataKind::BasicAttribute)) && at(i + 1).is_some_and(is_head) {
        i += 1;
    }
    match at(i) {
        Some(c) if is_pronoun(c) => i += 1,
        Some(c) if c.is_unknown() && !c.is_terminal() => {
            while at(i).is_some_and(|c| c.is_unknown()) {
                i += 1;
            }
        }
        Some(c) if is_head(c) => i += 1,
        _ => return i,
    }
    match at(i) {
        Some(c)
            if c.is_structure(StructureKind::Possessive)
                || c.is_structure(StructureKind::Of)
                || (c.is_structure(StructureKind::Conjunction) && c.norm() == "and") =>
        {
            let next = np_end(chunks, i + 1);
            if next > i + 1 {
                next
            } else {
                i
            }
        }
        _ => i,
    }
}

/// Length of a leading "Name ," vocative.
fn vocative_len(chunks: &[Chunk]) -> usize {
    let run = chunks.iter().take_while(|c| c.is_unknown()).count();
    if run > 0 && chunks.get(run).is_some_and(|c| c.surface == ",") {
        run + 1
    } else {
        0
    }
}

fn terminal_index(chunks: &[Chunk]) -> Option<usize> {
    chunks.last().filter(|c| c.is_terminal()).map(|_| chunks.len() - 1)
}

/// Places a chunk sequence in the task grid. Returns the task, the reading
/// mode and whether the sentence is an imperative.
pub fn classify_sentence(chunks: &[Chunk]) -> Result<(TaskType, ReadingMode, bool), TaskError> {
    if chunks.is_empty() {
        return Err(TaskError::Empty);
    }
    let voc = vocative_len(chunks);
    let body = &chunks[voc..];
    let mode = if body.iter().any(|c| c.is_structure(StructureKind::Be)) {
        ReadingMode::Drm
    } else if body.iter().any(|c| c.is_structure(StructureKind::Have)) {
        ReadingMode::Srm
    } else if body.iter().any(|c| c.is_data_kind(DataKind::Verb)) {
        ReadingMode::Prm
    } else {
        return Err(TaskError::UnclassifiableSentence(render_chunks(chunks)));
    };
    let question = match chunks.last() {
        Some(c) if c.is_terminal() => c.surface == "?",
        _ => true,
    };
    let first = body.first();
    let task = if body.iter().any(|c| c.is_pointer(PointerKind::Interrogative)) {
        TaskType::Search
    } else if question
        && first.is_some_and(|c| c.is_structure(StructureKind::DoAux) || c.is_structure(StructureKind::Be))
    {
        TaskType::Verification
    } else {
        TaskType::Description
    };
    let imperative = task == TaskType::Description && first.is_some_and(|c| c.is_data_kind(DataKind::Verb));
    Ok((task, mode, imperative))
}

/// Joins chunk surfaces with single spaces, attaching "'s" to its owner.
pub fn render_chunks(chunks: &[Chunk]) -> String {
    let mut out = String::new();
    for c in chunks {
        if !out.is_empty() && !c.is_structure(StructureKind::Possessive) {
            out.push(' ');
        }
        out.push_str(&c.surface);
    }
    out
}

impl TaskSentence {
    pub fn from_chunks(chunks: Vec<Chunk>) -> Result<Self, TaskError> {
        let (task, mode, imperative) = classify_sentence(&chunks)?;
        let terminal = terminal_index(&chunks).map(|i| chunks[i].surface.clone());
        let missing_slot = match task {
            TaskType::Search => chunks.iter().position(|c| c.is_pointer(PointerKind::Interrogative)),
            _ => None,
        };
        Ok(Self {
            chunks,
            task,
            mode,
            missing_slot,
            terminal,
            imperative,
        })
    }

    pub fn parse(text: &str, lex: &Lexicon) -> Result<Self, TaskError> {
        Self::from_chunks(analyze(text, lex))
    }

    pub fn render(&self) -> String {
        render_chunks(&self.chunks)
    }

    pub fn words(&self) -> Vec<String> {
        self.chunks.iter().map(|c| c.surface.clone()).collect()
    }
}

impl fmt::Display for TaskSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn chunk(lex: &Lexicon, surface: &str) -> Chunk {
    Chunk::new(surface, lex.lookup(surface).cloned())
}

/// Lower-cases a known word that is leaving sentence-initial position.
fn demote(c: &Chunk) -> Chunk {
    let mut c = c.clone();
    if c.class.is_some() && c.surface != "I" {
        c.surface = c.surface.to_lowercase();
    }
    c
}

fn promote(c: &mut Chunk) {
    c.surface = capitalize(&c.surface);
}

/// The pieces of a description around its mode pivot.
struct Frame {
    voc: usize,
    np1: std::ops::Range<usize>,
    pivot: std::ops::Range<usize>,
    rest: std::ops::Range<usize>,
}

fn frame(s: &TaskSentence) -> Frame {
    let chunks = &s.chunks;
    let voc = vocative_len(chunks);
    let end = terminal_index(chunks).unwrap_or(chunks.len());
    let is_pivot = |c: &Chunk| match s.mode {
        ReadingMode::Drm => c.is_structure(StructureKind::Be),
        ReadingMode::Srm => c.is_structure(StructureKind::Have),
        ReadingMode::Prm => c.is_data_kind(DataKind::Verb),
    };
    let p = (voc..end).find(|i| is_pivot(&chunks[*i])).unwrap_or(end);
    let mut q = p + 1;
    if s.mode == ReadingMode::Prm {
        while q < end && chunks[q].is_data_kind(DataKind::Verb) {
            q += 1;
        }
    }
    let q = q.min(end);
    Frame {
        voc,
        np1: voc..p,
        pivot: p..q,
        rest: q..end,
    }
}

/// Whether a subject takes "does" rather than "do".
fn third_singular(np: &[Chunk]) -> bool {
    if np.is_empty() {
        return false;
    }
    !np.iter().any(|c| {
        c.plural
            || (c.is_structure(StructureKind::Conjunction) && c.norm() == "and")
            || (is_pronoun(c) && PLURAL_PRONOUNS.contains(&c.norm().as_str()))
            || PLURAL_DETERMINERS.contains(&c.norm().as_str())
    })
}

fn do_aux(lex: &Lexicon, np1: &[Chunk]) -> Chunk {
    chunk(lex, if third_singular(np1) { "does" } else { "do" })
}

fn question_mark(lex: &Lexicon) -> Chunk {
    chunk(lex, "?")
}

fn finish(mut out: Vec<Chunk>, voc: usize) -> Result<TaskSentence, TaskError> {
    if voc == 0 {
        if let Some(first) = out.first_mut() {
            promote(first);
        }
    }
    TaskSentence::from_chunks(out)
}

/// Description to yes/no verification: front the "Be" in DRM, prepend a
/// "do" auxiliary in SRM and PRM.
pub fn to_verification(s: &TaskSentence, lex: &Lexicon) -> Result<TaskSentence, TaskError> {
    if s.task != TaskType::Description {
        return Err(TaskError::NotADescription(s.task));
    }
    let f = frame(s);
    let c = &s.chunks;
    let np1: Vec<Chunk> = c[f.np1.clone()]
        .iter()
        .enumerate()
        .map(|(i, ch)| if i == 0 { demote(ch) } else { ch.clone() })
        .collect();
    let mut out: Vec<Chunk> = c[..f.voc].to_vec();
    match s.mode {
        ReadingMode::Drm => {
            out.extend(c[f.pivot.clone()].iter().cloned());
            out.extend(np1);
            out.extend(c[f.rest.clone()].iter().cloned());
        }
        ReadingMode::Srm | ReadingMode::Prm => {
            out.push(do_aux(lex, &np1));
            out.extend(np1);
            for ch in &c[f.pivot.clone()] {
                if ch.is_structure(StructureKind::Have) {
                    out.push(chunk(lex, "have"));
                } else {
                    out.push(if f.np1.is_empty() { demote(ch) } else { ch.clone() });
                }
            }
            out.extend(c[f.rest.clone()].iter().cloned());
        }
    }
    out.push(question_mark(lex));
    finish(out, f.voc)
}

/// Inverse of [`to_verification`].
pub fn strip_to_description(s: &TaskSentence, lex: &Lexicon) -> Result<TaskSentence, TaskError> {
    if s.task != TaskType::Verification {
        return Err(TaskError::NotAVerification(s.task));
    }
    let c = &s.chunks;
    let voc = vocative_len(c);
    let end = terminal_index(c).unwrap_or(c.len());
    let lead = &c[voc];
    let body: Vec<Chunk> = c[voc + 1..end].to_vec();
    let mut out: Vec<Chunk> = c[..voc].to_vec();
    if lead.is_structure(StructureKind::Be) {
        let mut split = np_end(&body, 0);
        // A run of names ("Is Queen Wirete ?") leaves its last word as the
        // complement, since a copula always has one.
        if split == body.len() && split > 1 && body[split - 1].is_unknown() {
            split -= 1;
        }
        if split == 0 {
            return Err(TaskError::Malformed(s.render()));
        }
        out.extend(body[..split].iter().cloned());
        out.push(demote(lead));
        out.extend(body[split..].iter().cloned());
    } else {
        let singular = lead.norm() == "does";
        let mut inflected = false;
        for ch in body {
            if !inflected && ch.is_structure(StructureKind::Have) {
                inflected = true;
                out.push(chunk(lex, if singular { "has" } else { "have" }));
            } else {
                out.push(ch);
            }
        }
    }
    out.push(chunk(lex, "."));
    finish(out, voc)
}

/// Reorders "A 's B" as "the B of A" for reading back from a slot.
fn reverse_possessive(np: &[Chunk], lex: &Lexicon) -> Vec<Chunk> {
    match np.iter().position(|c| c.is_structure(StructureKind::Possessive)) {
        Some(p) if p > 0 && p + 1 < np.len() => {
            let mut out = vec![chunk(lex, "the")];
            out.extend(np[p + 1..].iter().filter(|c| !is_determiner(c)).cloned());
            out.push(chunk(lex, "of"));
            out.extend(np[..p].iter().cloned());
            out
        }
        _ => np.to_vec(),
    }
}

fn interrogative(lex: &Lexicon, key: &str) -> Chunk {
    let phrase = lex
        .interrogative(key)
        .or_else(|| lex.interrogative("generic"))
        .unwrap_or("what");
    Chunk::new(
        phrase,
        Some(ChunkClass::new(ChunkKind::Pointer(PointerKind::Interrogative), Some(key))),
    )
}

fn content(np: &[Chunk]) -> impl Iterator<Item = &Chunk> {
    np.iter().filter(|c| !is_determiner(c) && !c.is_data_kind(DataKind::Measurement))
}

/// The ASC an NP names, e.g. "name" in "the dog's name".
fn np_space(np: &[Chunk]) -> Option<String> {
    let head = np.iter().rev().find(|c| is_head(c))?;
    match head.kind() {
        Some(ChunkKind::Data(DataKind::AttributeSpace)) => Some(head.norm()),
        Some(ChunkKind::Data(DataKind::ExtendedAttribute)) => head.hint().map(str::to_string),
        _ => None,
    }
}

/// Builds the WH phrase replacing `region` (a noun phrase, or a
/// prepositional phrase) when `slot` inside it is missing. The second value
/// is whatever is left of the region after the WH phrase is taken out.
fn wh_phrase(
    lex: &Lexicon,
    region: &[Chunk],
    slot: usize,
    subject_of_action: bool,
    np1: &[Chunk],
    kinds: Option<&MemoryGraph>,
) -> (Vec<Chunk>, Vec<Chunk>) {
    let target = &region[slot];
    if let Some(p) = region[..slot]
        .iter()
        .rposition(|c| c.is_pointer(PointerKind::Preposition) && c.hint() == Some("spatial-position"))
    {
        let pp_end = p + np_end(&region[p + 1..], 0) + 1;
        let mut left = region[..p].to_vec();
        left.extend(region[pp_end.max(slot + 1)..].iter().cloned());
        return (vec![interrogative(lex, "spatial-position")], left);
    }
    if region.get(slot + 1).is_some_and(|c| c.is_structure(StructureKind::Possessive)) {
        let mut wh = vec![interrogative(lex, "possession")];
        wh.extend(content(&region[slot + 2..]).cloned());
        return (wh, Vec::new());
    }
    if target.is_data_kind(DataKind::BasicAttribute) {
        let mut wh = vec![interrogative(lex, target.hint().unwrap_or("generic"))];
        wh.extend(
            content(region)
                .enumerate()
                .filter(|(_, c)| *c != target && is_head(c) && !c.is_data_kind(DataKind::BasicAttribute))
                .map(|(_, c)| c.clone()),
        );
        return (wh, Vec::new());
    }
    if target.is_data_kind(DataKind::Measurement) {
        let mut wh = vec![interrogative(lex, "quantity")];
        wh.extend(content(&region[slot + 1..]).cloned());
        return (wh, Vec::new());
    }
    if subject_of_action {
        return (vec![interrogative(lex, "person")], Vec::new());
    }
    if region.iter().any(|c| c.is_structure(StructureKind::Conjunction) && c.norm() == "and") {
        let members: Vec<crate::ids::NodeId> = content(region)
            .filter(|c| is_head(c))
            .map(|c| crate::ids::NodeId::new(&c.surface))
            .collect();
        let parent = kinds.and_then(|g| g.common_parent(&members));
        return match parent {
            Some(p) => (
                vec![interrogative(lex, "kind"), chunk(lex, &p.name().to_lowercase())],
                Vec::new(),
            ),
            None => (vec![interrogative(lex, "generic")], Vec::new()),
        };
    }
    if region.first().is_some_and(|c| is_determiner(c) && c.hint().is_none()) && is_head(target) && !target.is_unknown() {
        let mut wh = vec![interrogative(lex, "selection")];
        wh.extend(content(region).cloned());
        return (wh, Vec::new());
    }
    let personal = np_space(np1).is_some_and(|s| matches!(s.as_str(), "kinship" | "relation" | "profession" | "title"))
        || (is_pronoun(target) && target.norm() != "it");
    let key = if personal { "person" } else { "generic" };
    (vec![interrogative(lex, key)], Vec::new())
}

/// Description to WH search with the chunk at `slot` missing.
///
/// `kinds` supplies the memory-graph used to name the common kind of a
/// conjoined slot ("coffee and tea" -> "what kind of drink").
pub fn to_search(
    s: &TaskSentence,
    slot: usize,
    lex: &Lexicon,
    kinds: Option<&MemoryGraph>,
) -> Result<TaskSentence, TaskError> {
    if s.task != TaskType::Description {
        return Err(TaskError::NotADescription(s.task));
    }
    let c = &s.chunks;
    let target = c.get(slot).ok_or(TaskError::SlotOutOfRange(slot))?;
    if !(target.is_data() || is_pronoun(target)) || target.is_terminal() {
        return Err(TaskError::SlotNotData(slot));
    }
    let f = frame(s);
    if f.pivot.contains(&slot) || slot < f.voc || s.imperative {
        return Err(TaskError::UnsupportedSlot(slot));
    }
    let np1: Vec<Chunk> = c[f.np1.clone()].to_vec();
    let rest: Vec<Chunk> = c[f.rest.clone()].to_vec();
    let pivot: Vec<Chunk> = c[f.pivot.clone()].to_vec();
    let mut out: Vec<Chunk> = c[..f.voc].to_vec();

    if f.np1.contains(&slot) {
        let action = s.mode != ReadingMode::Drm;
        let (wh, left) = wh_phrase(lex, &np1, slot - f.np1.start, action, &np1, kinds);
        out.extend(wh);
        out.extend(left);
        out.extend(pivot);
        out.extend(rest);
    } else {
        let np1_lower: Vec<Chunk> = np1
            .iter()
            .enumerate()
            .map(|(i, ch)| if i == 0 { demote(ch) } else { ch.clone() })
            .collect();
        let (wh, left) = wh_phrase(lex, &rest, slot - f.rest.start, false, &np1, kinds);
        out.extend(wh);
        match s.mode {
            ReadingMode::Drm => {
                out.extend(pivot);
                out.extend(reverse_possessive(&np1_lower, lex));
            }
            ReadingMode::Srm => {
                out.push(do_aux(lex, &np1));
                out.extend(np1_lower);
                out.push(chunk(lex, "have"));
            }
            ReadingMode::Prm => {
                out.push(do_aux(lex, &np1));
                out.extend(np1_lower);
                out.extend(pivot);
            }
        }
        out.extend(left);
    }
    out.push(question_mark(lex));
    finish(out, f.voc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> TaskSentence {
        TaskSentence::parse(text, &Lexicon::seed()).unwrap()
    }

    fn slot_of(s: &TaskSentence, word: &str) -> usize {
        s.chunks.iter().position(|c| c.surface == word).unwrap()
    }

    #[test]
    fn classifies_the_grid() {
        let cases = [
            ("This apple is red .", TaskType::Description, ReadingMode::Drm),
            ("do we have any apple ?", TaskType::Verification, ReadingMode::Srm),
            ("Give me an apple .", TaskType::Description, ReadingMode::Prm),
            ("Where is the cat ?", TaskType::Search, ReadingMode::Drm),
            ("Who has a black tail ?", TaskType::Search, ReadingMode::Srm),
        ];
        for (text, task, mode) in cases {
            let s = parse(text);
            assert_eq!((s.task, s.mode), (task, mode), "{text}");
        }
        assert!(parse("Give me an apple .").imperative);
        assert!(!parse("Queen read the book .").imperative);
    }

    #[test]
    fn vocative_is_skipped() {
        let s = parse("Nana, do we have any apple?");
        assert_eq!((s.task, s.mode), (TaskType::Verification, ReadingMode::Srm));
    }

    #[test]
    fn unclassifiable_and_empty() {
        let lex = Lexicon::seed();
        assert_eq!(TaskSentence::parse("", &lex), Err(TaskError::Empty));
        assert!(matches!(
            TaskSentence::parse("apple .", &lex),
            Err(TaskError::UnclassifiableSentence(_))
        ));
    }

    #[test]
    fn noun_phrase_extent() {
        let s = parse("the dog's name is Wirete .");
        assert_eq!(np_end(&s.chunks, 0), 4);
        let s = parse("Queen likes coffee and tea .");
        assert_eq!(np_end(&s.chunks, 2), 5);
    }

    #[test]
    fn verification_round_trip() {
        let lex = Lexicon::seed();
        for text in ["This apple is red .", "Queen has twelve crowns .", "They have a dog .", "Queen read the book ."] {
            let d = parse(text);
            let v = to_verification(&d, &lex).unwrap();
            assert_eq!(v.task, TaskType::Verification);
            assert_eq!(v.mode, d.mode);
            let back = strip_to_description(&v, &lex).unwrap();
            assert_eq!(back.render(), text);
        }
        assert_eq!(
            strip_to_description(&parse("Give me an apple ."), &lex),
            Err(TaskError::NotAVerification(TaskType::Description))
        );
    }

    #[test]
    fn search_positions() {
        let lex = Lexicon::seed();
        let d = parse("The cat is on the fridge .");
        let s = to_search(&d, slot_of(&d, "fridge"), &lex, None).unwrap();
        assert_eq!(s.render(), "Where is the cat ?");
        assert_eq!(s.missing_slot, Some(0));
    }

    #[test]
    fn slot_errors() {
        let lex = Lexicon::seed();
        let d = parse("This apple is red .");
        assert_eq!(to_search(&d, 2, &lex, None), Err(TaskError::SlotNotData(2)));
        assert_eq!(to_search(&d, 0, &lex, None), Err(TaskError::SlotNotData(0)));
        let p = parse("Queen read the book .");
        assert_eq!(to_search(&p, 1, &lex, None), Err(TaskError::UnsupportedSlot(1)));
        assert_eq!(to_search(&d, 9, &lex, None), Err(TaskError::SlotOutOfRange(9)));
    }

    #[test]
    fn table_rows() {
        let lex = Lexicon::seed();
        let mut kinds = MemoryGraph::default();
        kinds.assert_inclusion("drink", "kind", "coffee").unwrap();
        kinds.assert_inclusion("drink", "kind", "tea").unwrap();
        let rows: [(&str, Option<&str>, &str, &str); 10] = [
            ("This apple is red .", Some("Is this apple red ?"), "red", "What color is this apple ?"),
            ("The dog's name is Wirete .", Some("Is the dog's name Wirete ?"), "Wirete", "What is the name of the dog ?"),
            ("They are Queen's crowns .", Some("Are they Queen's crowns ?"), "Queen", "Whose crowns are they ?"),
            ("The cat has a black tail .", Some("Does the cat have a black tail ?"), "cat", "Who has a black tail ?"),
            ("Queen has twelve crowns .", Some("Does Queen have twelve crowns ?"), "Queen", "Who has twelve crowns ?"),
            ("Queen has twelve crowns .", None, "twelve", "How many crowns does Queen have ?"),
            ("Wirete run away .", Some("Does Wirete run away ?"), "Wirete", "Who run away ?"),
            ("Queen read the book .", Some("Does Queen read the book ?"), "book", "Which book does Queen read ?"),
            ("Queen likes coffee and tea .", Some("Does Queen likes coffee and tea ?"), "coffee", "What kind of drink does Queen likes ?"),
            ("Charles's mother is Queen Elizabeth .", None, "Queen", "Who is the mother of Charles ?"),
        ];
        for (a, b, slot, c) in rows {
            let d = parse(a);
            if let Some(b) = b {
                assert_eq!(to_verification(&d, &lex).unwrap().render(), b);
            }
            let s = to_search(&d, slot_of(&d, slot), &lex, Some(&kinds)).unwrap();
            assert_eq!(s.render(), c);
        }
    }
}
