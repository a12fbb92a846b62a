//! Interactive attribute exploration.
//!
//! The session walks the attribute sets closed under the implications
//! accepted so far, in lectic order. Whenever such a set `P` is not an
//! intent of the working context the question `P ⇒ P′′ \ P` is posed; the
//! expert either accepts it or supplies a counterexample object, which is
//! added to the working context. Once every question is answered the
//! accepted implications form the canonical base of the final context.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::context::{AttributeSet, ContextError, FormalContext};
use crate::cxt::{parse_cxt, write_cxt};
use crate::implications::{close_under, render_implication, Implication};
use crate::lectic::next_closure;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplorationError {
    #[error("no pending question")]
    NoPendingQuestion,
    #[error("not a counterexample: the object satisfies {question}")]
    NotACounterexample { question: String },
    #[error("counterexample violates accepted implication {implication}")]
    ViolatesAcceptedImplication { index: usize, implication: String },
    #[error("exploration is not finished")]
    NotFinished,
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error("bad session log: {0}")]
    Log(String),
}

/// One entry of a session's event log. Replaying the log reproduces the
/// session exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ExplorationEvent {
    Start { cxt: String },
    Accept,
    Counterexample { name: String, attributes: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct ExplorationSession {
    context: FormalContext,
    accepted: Vec<Implication>,
    cursor: Option<AttributeSet>,
    question: Option<Implication>,
    log: Vec<ExplorationEvent>,
}

impl ExplorationSession {
    pub fn start(ctx: &FormalContext) -> Self {
        let mut session = ExplorationSession {
            context: ctx.clone(),
            accepted: Vec::new(),
            cursor: Some(BitSet::empty(ctx.attribute_count())),
            question: None,
            log: vec![ExplorationEvent::Start { cxt: write_cxt(ctx) }],
        };
        session.settle();
        session
    }

    /// Moves the cursor forward until it rests on a set that is not an
    /// intent of the working context, or runs off the end.
    fn settle(&mut self) {
        self.question = None;
        while let Some(candidate) = self.cursor.take() {
            let closed = self.context.attribute_closure(&candidate);
            if closed != candidate {
                self.question = Some(Implication::new(
                    candidate.clone(),
                    closed.difference(&candidate),
                ));
                self.cursor = Some(candidate);
                return;
            }
            self.cursor = next_closure(&candidate, |s| close_under(&self.accepted, s));
        }
    }

    pub fn context(&self) -> &FormalContext {
        &self.context
    }

    pub fn accepted(&self) -> &[Implication] {
        &self.accepted
    }

    pub fn question(&self) -> Option<&Implication> {
        self.question.as_ref()
    }

    pub fn is_finished(&self) -> bool {
        self.question.is_none()
    }

    pub fn log(&self) -> &[ExplorationEvent] {
        &self.log
    }

    /// Confirms the pending question as valid for every possible object.
    pub fn accept(&mut self) -> Result<(), ExplorationError> {
        let question = self.question.take().ok_or(ExplorationError::NoPendingQuestion)?;
        let premise = self.cursor.take().expect("cursor rests on the question");
        self.accepted.push(question);
        self.cursor = next_closure(&premise, |s| close_under(&self.accepted, s));
        self.log.push(ExplorationEvent::Accept);
        self.settle();
        Ok(())
    }

    /// Rejects the pending question by adding an object named `name` whose
    /// attributes are `intent`.
    pub fn reject_with_counterexample(
        &mut self,
        name: &str,
        intent: &AttributeSet,
    ) -> Result<(), ExplorationError> {
        let question = self.question.as_ref().ok_or(ExplorationError::NoPendingQuestion)?;
        self.context.check_attributes(intent)?;
        if question.respected_by(intent) {
            return Err(ExplorationError::NotACounterexample {
                question: render_implication(&self.context, question),
            });
        }
        if let Some((index, imp)) = self
            .accepted
            .iter()
            .enumerate()
            .find(|(_, imp)| !imp.respected_by(intent))
        {
            return Err(ExplorationError::ViolatesAcceptedImplication {
                index,
                implication: render_implication(&self.context, imp),
            });
        }
        self.context = self.context.add_object_with(name, intent)?;
        self.log.push(ExplorationEvent::Counterexample {
            name: name.to_owned(),
            attributes: intent.iter().collect(),
        });
        // the cursor stays put: its premise may still be open
        self.settle();
        Ok(())
    }

    /// Final working context and accepted base.
    pub fn result(&self) -> Result<(FormalContext, Vec<Implication>), ExplorationError> {
        if !self.is_finished() {
            return Err(ExplorationError::NotFinished);
        }
        Ok((self.context.clone(), self.accepted.clone()))
    }

    /// Rebuilds a session from its event log.
    pub fn replay(events: &[ExplorationEvent]) -> Result<Self, ExplorationError> {
        let (first, rest) = events
            .split_first()
            .ok_or_else(|| ExplorationError::Log("empty log".into()))?;
        let ExplorationEvent::Start { cxt } = first else {
            return Err(ExplorationError::Log("log must begin with a start event".into()));
        };
        let mut session = Self::start(&parse_cxt(cxt.as_bytes())?);
        for event in rest {
            match event {
                ExplorationEvent::Start { .. } => {
                    return Err(ExplorationError::Log("repeated start event".into()))
                }
                ExplorationEvent::Accept => session.accept()?,
                ExplorationEvent::Counterexample { name, attributes } => {
                    let intent = BitSet::from_indices(
                        session.context.attribute_count(),
                        attributes.iter().copied(),
                    )
                    .map_err(|i| ExplorationError::Log(format!("attribute index {i} out of range")))?;
                    session.reject_with_counterexample(name, &intent)?;
                }
            }
        }
        Ok(session)
    }

    /// Reads a JSON-lines log.
    pub fn replay_jsonl(text: &str) -> Result<Self, ExplorationError> {
        let events = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<Result<Vec<ExplorationEvent>, _>>()
            .map_err(|e| ExplorationError::Log(e.to_string()))?;
        Self::replay(&events)
    }
}

/// A log event as one JSON line, newline included.
pub fn event_line(event: &ExplorationEvent) -> String {
    let mut line = serde_json::to_string(event).expect("events serialize");
    line.push('\n');
    line
}

/// The question as a sentence for the expert.
pub fn question_sentence(ctx: &FormalContext, question: &Implication) -> String {
    let premise = ctx.attribute_names(&question.premise);
    let conclusion = crate::implications::conclusion_names(ctx, question);
    if premise.is_empty() {
        format!("Is it true that every object has {}?", conclusion.join(", "))
    } else {
        format!(
            "Is it true that every object with {} also has {}?",
            premise.join(", "),
            conclusion.join(", ")
        )
    }
}
