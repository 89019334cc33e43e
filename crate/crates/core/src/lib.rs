//! Rule-based natural-language understanding over an explicit knowledge base.
//!
//! Text is split into chunks by a lexicon, stored as a memory graph with
//! time-stamped memory-sheets, placed in space by a spatial projection map,
//! and read back out as sentences. The [`dialogue`] module ties the pieces
//! into a turn-by-turn conversation engine.

pub mod dialogue;
pub mod ids;
pub mod kbstore;
pub mod lexicon;
pub mod measurement;
pub mod memory;
pub mod readout;
pub mod session;
pub mod spm;
pub mod tasks;

pub use ids::NodeId;
pub use kbstore::{KbDocument, KbError, KnowledgeBase};
pub use lexicon::{analyze, classify, segment, Chunk, ChunkClass, ChunkKind, Lexicon, LexiconError};
pub use measurement::{DistributionModel, MeasurementError, QuantityEval};
pub use memory::{AttributeRecord, AttributeValue, Memory, MemoryError, MemoryGraph, MemorySheet, Relation, Tts};
pub use session::{Session, TranscriptEntry};
pub use spm::{express_position, express_position_from, Direction, PositionStatement, Spm, SpmError, SpwTable};
