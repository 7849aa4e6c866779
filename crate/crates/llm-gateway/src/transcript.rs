//! Append-only session records.

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

/// Chat participant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Instructions and follow-ups we send.
    User,
    /// Model replies.
    Assistant,
}

impl Role {
    /// The wire name used by the chat-completion schema.
    pub fn wire_name(&self) -> &'static str {
        match self {
            Role::User => "user",
            Role::Assistant => "assistant",
        }
    }
}

/// One message, as sent or received, with its wall-clock timestamp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Turn {
    /// Who spoke.
    pub role: Role,
    /// Verbatim message text.
    pub content: String,
    /// When the turn was recorded.
    pub timestamp: DateTime<Utc>,
}

/// A block of text pulled out of an assistant turn, remembering where
/// it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractedBlock {
    /// Index into [`SessionTranscript::turns`] of the source turn.
    pub turn_index: usize,
    /// The extracted text.
    pub content: String,
}

/// Complete, append-only record of a restructuring session: every turn
/// across every conversation (restarts included), plus the hierarchy
/// and explanation blocks extracted from assistant replies.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SessionTranscript {
    /// All turns, in the order they happened.
    pub turns: Vec<Turn>,
    /// Candidate hierarchy blocks, one per assistant turn that
    /// contained one.
    pub hierarchy_blocks: Vec<ExtractedBlock>,
    /// Non-hierarchy assistant prose, one block per assistant turn
    /// that contained any.
    pub explanation_blocks: Vec<ExtractedBlock>,
}

impl SessionTranscript {
    /// An empty transcript.
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a turn and returns its index. Timestamps are taken at
    /// call time, so appending preserves time order.
    pub fn push(&mut self, role: Role, content: impl Into<String>) -> usize {
        self.turns.push(Turn {
            role,
            content: content.into(),
            timestamp: Utc::now(),
        });
        self.turns.len() - 1
    }

    /// Number of assistant turns recorded.
    pub fn assistant_turn_count(&self) -> usize {
        self.turns.iter().filter(|t| t.role == Role::Assistant).count()
    }

    /// Number of user turns recorded.
    pub fn user_turn_count(&self) -> usize {
        self.turns.iter().filter(|t| t.role == Role::User).count()
    }

    /// All extracted explanation prose joined into one document, in
    /// turn order.
    pub fn joined_explanations(&self) -> String {
        self.explanation_blocks
            .iter()
            .map(|b| b.content.as_str())
            .collect::<Vec<_>>()
            .join("\n\n")
    }

    /// Human-readable rendering, one `[role] content` section per turn.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for turn in &self.turns {
            out.push_str(&format!(
                "[{} {}]\n{}\n\n",
                turn.role.wire_name(),
                turn.timestamp.to_rfc3339(),
                turn.content.trim_end()
            ));
        }
        out
    }
}
