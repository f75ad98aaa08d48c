//! Toolkit for stuttered-speech transcripts written in an inline annotation
//! markup: `/b` (block), `/p` (prolongation), and bracketed repetition groups
//! tagged `/s` (sound repetition), `/r` (word/phrase repetition), or `/i`
//! (interjection), plus `<...>` spans for sensitive information.
//!
//! The crate is organised into four areas:
//!
//! * [`grammar`]: tokenizing, parsing, linting, and canonical serialization
//!   of the markup, plus a JSON AST interchange format.
//! * [`transforms`]: verbatim/semantic text extraction, stuttering-event
//!   extraction, clip-level labels, and redaction of sensitive spans.
//! * [`agreement`]: alignment and diffing of independent annotations of the
//!   same audio, Cohen/Fleiss kappa, majority voting, and confusion tables.
//! * [`textgrid`]: reading and writing Praat TextGrid files (long text
//!   format), conversion to and from transcripts, and a silent-gap lint.
//!
//! All types are immutable values after construction and all operations are
//! pure functions, so everything here is safe to use from multiple threads
//! without synchronization.

pub mod agreement;
pub mod diagnostics;
pub mod grammar;
pub mod textgrid;
pub mod transforms;

pub use diagnostics::{Diagnostic, Location, Severity};
pub use grammar::{
    parse, serialize, validate, BracketGroup, Chunk, EventCode, Fragment, MarkKind, ParseOptions,
    Parsed, Part, PointMark, RuleSet, Segment, Separator, Transcript,
};
pub use transforms::{ClipLabels, EventInstance, RedactionPolicy};
