//! Public authenticated broadcast log shared by the two parties.

use serde::Serialize;

use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MessageKind {
    /// The receiver confirms that all quantum data for the round has arrived.
    Receipt,
    /// Secret-dependent information that must only follow a receipt.
    Announcement,
    /// Anything else (measurement results, verdicts).
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Message {
    pub sender: Party,
    pub round: u64,
    pub kind: MessageKind,
    pub payload: Vec<u8>,
}

/// Append-only list of broadcasts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Transcript {
    messages: Vec<Message>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn acknowledge_receipt(&mut self, sender: Party, round: u64) {
        self.messages.push(Message {
            sender,
            round,
            kind: MessageKind::Receipt,
            payload: Vec::new(),
        });
    }

    pub fn receipt_acknowledged(&self, round: u64) -> bool {
        self.messages
            .iter()
            .any(|m| m.round == round && m.kind == MessageKind::Receipt)
    }

    /// Announce round secrets; fails unless the round's receipt is already logged.
    pub fn announce(&mut self, sender: Party, round: u64, payload: Vec<u8>) -> Result<()> {
        if !self.receipt_acknowledged(round) {
            return Err(SimError::TranscriptOrder(format!(
                "announcement for round {round} before receipt"
            )));
        }
        self.messages.push(Message {
            sender,
            round,
            kind: MessageKind::Announcement,
            payload,
        });
        Ok(())
    }

    pub fn broadcast(&mut self, sender: Party, round: u64, payload: Vec<u8>) {
        self.messages.push(Message {
            sender,
            round,
            kind: MessageKind::Plain,
            payload,
        });
    }

    /// Check the log itself: every announcement is preceded by its round's receipt.
    pub fn validate(&self) -> Result<()> {
        for (i, m) in self.messages.iter().enumerate() {
            if m.kind == MessageKind::Announcement
                && !self.messages[..i]
                    .iter()
                    .any(|e| e.round == m.round && e.kind == MessageKind::Receipt)
            {
                return Err(SimError::TranscriptOrder(format!(
                    "message {i} announces round {} before receipt",
                    m.round
                )));
            }
        }
        Ok(())
    }

    /// Raw push used to replay logs from elsewhere; call `validate` afterwards.
    pub fn push_raw(&mut self, message: Message) {
        self.messages.push(message);
    }

    pub fn announcements(&self, round: u64) -> impl Iterator<Item = &Message> {
        self.messages
            .iter()
            .filter(move |m| m.round == round && m.kind == MessageKind::Announcement)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn announcement_requires_receipt() {
        let mut t = Transcript::new();
        assert!(matches!(
            t.announce(Party::Alice, 0, vec![1]),
            Err(SimError::TranscriptOrder(_))
        ));
        t.acknowledge_receipt(Party::Bob, 0);
        t.announce(Party::Alice, 0, vec![1]).unwrap();
        assert!(t.announce(Party::Alice, 1, vec![]).is_err());
        assert_eq!(t.announcements(0).count(), 1);
        t.validate().unwrap();
    }

    #[test]
    fn replayed_log_out_of_order_is_rejected() {
        let mut t = Transcript::new();
        t.push_raw(Message {
            sender: Party::Alice,
            round: 3,
            kind: MessageKind::Announcement,
            payload: vec![],
        });
        t.acknowledge_receipt(Party::Bob, 3);
        assert!(t.validate().is_err());
    }
}
