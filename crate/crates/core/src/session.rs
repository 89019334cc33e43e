//! A conversation over one knowledge base.
//!
//! The session owns its knowledge base, so every turn mutates only its own
//! copy. The transcript keeps who said what and which records changed.

use serde::{Deserialize, Serialize};

use crate::dialogue::{process_utterance, DialogueContext, DialogueError, Turn};
use crate::ids::NodeId;
use crate::kbstore::KnowledgeBase;

/// One transcript line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub speaker: NodeId,
    pub addressee: NodeId,
    #[serde(flatten)]
    pub turn: Turn,
}

impl TranscriptEntry {
    /// Two display lines: the utterance and the reply.
    pub fn lines(&self) -> [String; 2] {
        [
            format!("{}: {}", self.speaker, self.turn.utterance),
            format!("{}: {}", self.addressee, self.turn.response),
        ]
    }
}

#[derive(Debug, Clone)]
pub struct Session {
    pub kb: KnowledgeBase,
    pub ctx: DialogueContext,
    pub transcript: Vec<TranscriptEntry>,
}

impl Session {
    /// Starts a session with the participants stored in the knowledge base.
    pub fn new(kb: KnowledgeBase) -> Result<Self, DialogueError> {
        let ctx = kb.dialogue_context()?;
        Ok(Self {
            kb,
            ctx,
            transcript: Vec::new(),
        })
    }

    /// Starts a session with explicit participants.
    pub fn with_participants(
        kb: KnowledgeBase,
        speaker: Option<NodeId>,
        addressee: Option<NodeId>,
    ) -> Result<Self, DialogueError> {
        let mut session = Self::new(kb)?;
        let speaker = speaker.unwrap_or_else(|| session.ctx.speaker.clone());
        let addressee = addressee.unwrap_or_else(|| session.ctx.addressee.clone());
        session.ctx.set_participants(speaker, addressee)?;
        Ok(session)
    }

    /// Processes one utterance and appends it to the transcript.
    pub fn utter(&mut self, text: &str) -> &TranscriptEntry {
        let KnowledgeBase {
            lexicon, memory, spm, ..
        } = &mut self.kb;
        let turn = process_utterance(text, &mut self.ctx, lexicon, memory, spm);
        self.transcript.push(TranscriptEntry {
            speaker: self.ctx.speaker.clone(),
            addressee: self.ctx.addressee.clone(),
            turn,
        });
        self.transcript.last().expect("just pushed")
    }

    /// The transcript as plain text, two lines per turn.
    pub fn transcript_text(&self) -> String {
        self.transcript
            .iter()
            .flat_map(|e| e.lines())
            .map(|l| l + "\n")
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialogue::{NO, SURE, YES};

    #[test]
    fn house_session_replays_the_apple_dialogue() {
        let mut s = Session::new(KnowledgeBase::house()).unwrap();
        assert_eq!(s.utter("Nana, do we have any apple?").turn.response, YES);
        assert_eq!(s.utter("Give me an apple.").turn.response, SURE);
        assert_eq!(s.utter("do we have any banana?").turn.response, NO);
        assert_eq!(s.transcript.len(), 3);
        let text = s.transcript_text();
        assert!(text.starts_with("Jack: Nana, do we have any apple?\nNana: Yes.\n"), "{text}");
    }

    #[test]
    fn participants_can_be_overridden() {
        let s = Session::with_participants(KnowledgeBase::house(), Some("Nana".into()), Some("Jack".into())).unwrap();
        assert_eq!(s.ctx.speaker, NodeId::new("nana"));
        assert!(Session::with_participants(KnowledgeBase::house(), Some("Nana".into()), None).is_err());
    }
}
