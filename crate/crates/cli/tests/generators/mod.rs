//! Criterion 5: generative property tests. Each law runs over at least 500
//! generated inputs; strategies build structurally valid values through the
//! same constructors the library exposes.
//!
//! Generated sensitive spans all contain the letter `q` and nothing else in
//! a generated transcript does, so redaction completeness is checkable by
//! plain substring absence.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use stutter_annot_core::agreement::diff;
use stutter_annot_core::grammar::{
    parse, serialize, BracketGroup, Chunk, EventCode, Fragment, ParseOptions, Part, Segment,
    Separator, Transcript,
};
use stutter_annot_core::textgrid::{
    export_transcript, import_transcript, read_textgrid, write_textgrid, Interval, TextGridDoc,
    Tier,
};
use stutter_annot_core::transforms::{
    extract_events, redact, to_semantic, to_verbatim, RedactionPolicy,
};

const CASES: u32 = 512;

fn run_cases<S: Strategy>(strategy: S, check: impl Fn(&S::Value) -> Result<(), TestCaseError>) {
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, |value| check(&value))
        .unwrap_or_else(|e| panic!("property failed: {e}"));
}

// ---- strategies -----------------------------------------------------------

/// Literal chunk text; hyphens allowed (spelled acronyms), `q` reserved for
/// sensitive spans.
fn literal_text() -> impl Strategy<Value = String> {
    proptest::string::string_regex("[a-pr-zA-PR-Z'-]{1,8}").unwrap()
}

/// Fragment text: no hyphens (separators inside brackets), no `q`.
fn fragment_text() -> impl Strategy<Value = String> {
    proptest::string::string_regex("[a-pr-zA-PR-Z']{1,6}").unwrap()
}

fn sensitive_text() -> impl Strategy<Value = String> {
    proptest::string::string_regex("zq[a-p ]{0,6}").unwrap()
}

fn speaker_text() -> impl Strategy<Value = String> {
    proptest::string::string_regex("[a-p]{1,6}").unwrap()
}

fn group_codes() -> impl Strategy<Value = Vec<EventCode>> {
    use EventCode::*;
    prop::sample::select(vec![
        vec![SoundRepetition],
        vec![WordRepetition],
        vec![Interjection],
        vec![SoundRepetition, WordRepetition],
        vec![WordRepetition, SoundRepetition],
        vec![SoundRepetition, Interjection],
        vec![Interjection, SoundRepetition],
        vec![WordRepetition, Interjection],
        vec![Interjection, WordRepetition],
    ])
}

fn fragment(last: bool) -> impl Strategy<Value = Fragment> {
    fragment_text().prop_flat_map(move |text| {
        let len = text.chars().count();
        let separators = if last {
            vec![Separator::Hyphen, Separator::Space, Separator::None]
        } else {
            vec![Separator::Hyphen, Separator::Space]
        };
        (
            Just(text),
            prop::sample::select(separators),
            prop::collection::vec(1..=len, 0..3),
        )
            .prop_map(|(text, trailing_separator, mut offsets)| {
                offsets.sort_unstable();
                Fragment {
                    text,
                    prolongation_offsets: offsets,
                    trailing_separator,
                }
            })
    })
}

fn bracket_group() -> impl Strategy<Value = BracketGroup> {
    (1usize..4).prop_flat_map(|n| {
        let fragments: Vec<_> = (0..n).map(|i| fragment(i + 1 == n).boxed()).collect();
        (fragments, group_codes()).prop_map(|(fragments, codes)| BracketGroup {
            fragments,
            codes,
            attached: false, // normalized by Chunk::from_parts
        })
    })
}

fn part() -> impl Strategy<Value = Part> {
    prop_oneof![
        4 => literal_text().prop_map(Part::Literal),
        1 => Just(Part::block()),
        1 => Just(Part::prolongation()),
        2 => bracket_group().prop_map(Part::Group),
    ]
}

fn chunk() -> impl Strategy<Value = Chunk> {
    prop_oneof![
        8 => prop::collection::vec(part(), 1..4)
            .prop_filter_map("structurally valid chunk", |parts| Chunk::from_parts(parts).ok()),
        1 => sensitive_text()
            .prop_filter_map("valid sensitive chunk", |text| Chunk::sensitive(text).ok()),
    ]
}

fn segment() -> impl Strategy<Value = Segment> {
    (
        prop::collection::vec(chunk(), 0..5),
        prop::option::weighted(0.2, speaker_text()),
    )
        .prop_map(|(chunks, speaker)| {
            let mut segment = Segment::new(chunks);
            segment.speaker = speaker;
            segment
        })
}

/// Plain-text-representable transcripts: no timestamps, no trailing blank
/// segment (parse canonicalizes those away).
fn transcript() -> impl Strategy<Value = Transcript> {
    prop::collection::vec(segment(), 0..5)
        .prop_map(Transcript::new)
        .prop_filter("no trailing blank segment", |t| {
            t.segments
                .last()
                .is_none_or(|s| !(s.chunks.is_empty() && s.speaker.is_none()))
        })
}

/// Timestamped transcripts for TextGrid export: every segment non-empty,
/// times on a millisecond grid, strictly ordered.
fn timestamped_transcript() -> impl Strategy<Value = Transcript> {
    prop::collection::vec(
        (prop::collection::vec(chunk(), 1..4), 1u64..1500, 0u64..400),
        1..5,
    )
    .prop_map(|specs| {
        let mut clock_ms = 0u64;
        let mut segments = Vec::new();
        for (chunks, duration, gap) in specs {
            let start = clock_ms + gap;
            let end = start + duration;
            let mut segment = Segment::new(chunks);
            segment.time_range = Some((start as f64 / 1000.0, end as f64 / 1000.0));
            segments.push(segment);
            clock_ms = end;
        }
        Transcript::new(segments)
    })
}

fn interval_text() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => Just(String::new()),
        4 => proptest::string::string_regex("[a-z ]{1,10}").unwrap(),
        1 => Just("say \"hi\" now".to_string()),
        1 => Just("two\nlines".to_string()),
        1 => Just("  ".to_string()),
    ]
}

fn textgrid_doc() -> impl Strategy<Value = TextGridDoc> {
    prop::collection::vec(
        prop::collection::vec((1u64..2000, interval_text()), 1..6),
        0..3,
    )
    .prop_map(|tier_specs| {
        let mut tiers = Vec::new();
        let mut doc_end_ms = 1000u64;
        for (index, spec) in tier_specs.into_iter().enumerate() {
            let mut cursor_ms = 0u64;
            let mut intervals = Vec::new();
            for (duration, text) in spec {
                let end = cursor_ms + duration;
                intervals.push(Interval::new(
                    cursor_ms as f64 / 1000.0,
                    end as f64 / 1000.0,
                    text,
                ));
                cursor_ms = end;
            }
            doc_end_ms = doc_end_ms.max(cursor_ms);
            tiers.push(Tier {
                name: format!("tier{index}"),
                xmin: 0.0,
                xmax: cursor_ms as f64 / 1000.0,
                intervals,
            });
        }
        TextGridDoc {
            xmin: 0.0,
            xmax: doc_end_ms as f64 / 1000.0,
            tiers,
        }
    })
}

// ---- the properties -------------------------------------------------------

#[test]
fn criterion_5_parse_serialize_round_trip() {
    run_cases(transcript(), |t| {
        let text = serialize(t);
        let parsed = parse(&text, &ParseOptions::default())
            .map_err(|e| TestCaseError::fail(format!("reparse failed: {e:?} on {text:?}")))?;
        prop_assert_eq!(&parsed.transcript, t, "serialized form {:?}", text);
        Ok(())
    });
    println!("acceptance criterion 5 (parse/serialize round trip, {CASES} cases): PASS");
}

#[test]
fn criterion_5_textgrid_read_write_round_trip() {
    run_cases(textgrid_doc(), |doc| {
        let bytes =
            write_textgrid(doc).map_err(|e| TestCaseError::fail(format!("write failed: {e}")))?;
        let reread = read_textgrid(&bytes)
            .map_err(|e| TestCaseError::fail(format!("reread failed: {e}")))?;
        prop_assert_eq!(&reread, doc);
        // and the bytes themselves are a fixpoint
        let rewritten = write_textgrid(&reread)
            .map_err(|e| TestCaseError::fail(format!("rewrite failed: {e}")))?;
        prop_assert_eq!(&rewritten, &bytes);
        Ok(())
    });
    println!("acceptance criterion 5 (TextGrid read/write round trip, {CASES} cases): PASS");
}

#[test]
fn criterion_5_import_export_round_trip() {
    run_cases(timestamped_transcript(), |t| {
        let end = t
            .segments
            .last()
            .and_then(|s| s.time_range)
            .map(|(_, end)| end)
            .unwrap_or(1.0);
        let doc = export_transcript(t, (0.0, end + 0.5))
            .map_err(|e| TestCaseError::fail(format!("export failed: {e}")))?;
        let imported = import_transcript(&doc, "annotation")
            .map_err(|e| TestCaseError::fail(format!("import failed: {e}")))?;
        prop_assert_eq!(&imported.transcript, t);
        // exported tiers tile the document range exactly
        for tier in &doc.tiers {
            let covered: f64 = tier.intervals.iter().map(|iv| iv.xmax - iv.xmin).sum();
            prop_assert!((covered - (doc.xmax - doc.xmin)).abs() < 1e-9);
        }
        Ok(())
    });
    println!("acceptance criterion 5 (import/export round trip, {CASES} cases): PASS");
}

#[test]
fn criterion_5_semantic_is_subsequence_of_verbatim() {
    run_cases(transcript(), |t| {
        let verbatim = to_verbatim(t).join("\n");
        let semantic = to_semantic(t).join("\n");
        let mut verbatim_chars = verbatim.chars();
        let is_subsequence = semantic.chars().all(|c| verbatim_chars.any(|v| v == c));
        prop_assert!(
            is_subsequence,
            "{:?} is not a subsequence of {:?}",
            semantic,
            verbatim
        );
        Ok(())
    });
    println!("acceptance criterion 5 (semantic subsequence of verbatim, {CASES} cases): PASS");
}

#[test]
fn criterion_5_no_markup_leakage() {
    run_cases(transcript(), |t| {
        for rendering in to_verbatim(t).into_iter().chain(to_semantic(t)) {
            for marker in ["/b", "/p", "/s", "/r", "/i"] {
                prop_assert!(
                    !rendering.contains(marker),
                    "{:?} leaked into {:?}",
                    marker,
                    rendering
                );
            }
            prop_assert!(!rendering.contains(['[', ']', '<', '>']));
        }
        Ok(())
    });
    println!("acceptance criterion 5 (no markup leakage, {CASES} cases): PASS");
}

#[test]
fn criterion_5_mark_conservation() {
    run_cases(transcript(), |t| {
        let text = serialize(t);
        let events = extract_events(t);
        for code in EventCode::ALL {
            let written = text.matches(code.marker()).count();
            let extracted = events.iter().filter(|e| e.code == code).count();
            prop_assert_eq!(
                written,
                extracted,
                "{} count mismatch in {:?}",
                code.marker(),
                text
            );
        }
        Ok(())
    });
    println!("acceptance criterion 5 (mark conservation, {CASES} cases): PASS");
}

#[test]
fn criterion_5_redaction_completeness() {
    let placeholder = RedactionPolicy::placeholder("XTOKEN").expect("valid token");
    let policies = [
        placeholder,
        RedactionPolicy::hash(),
        RedactionPolicy::drop_chunk(),
    ];
    run_cases(transcript(), move |t| {
        let originals: Vec<String> = t
            .segments
            .iter()
            .flat_map(|s| s.chunks.iter())
            .filter(|c| c.sensitive)
            .map(|c| c.literal_text())
            .collect();
        for policy in &policies {
            let redacted = redact(t, policy);
            let mut outputs = vec![serialize(&redacted)];
            outputs.extend(to_verbatim(&redacted));
            outputs.extend(to_semantic(&redacted));
            for original in &originals {
                for output in &outputs {
                    prop_assert!(
                        !output.contains(original.as_str()),
                        "sensitive {:?} survived in {:?}",
                        original,
                        output
                    );
                }
            }
        }
        Ok(())
    });
    println!("acceptance criterion 5 (redaction completeness, {CASES} cases): PASS");
}

#[test]
fn criterion_5_diff_of_identical_transcripts_is_empty() {
    run_cases(transcript(), |t| {
        prop_assert!(diff(t, t).is_empty());
        Ok(())
    });
    println!("acceptance criterion 5 (diff(t, t) empty, {CASES} cases): PASS");
}

#[test]
fn property_canonicalization_is_idempotent() {
    // double only chunk-separating spaces; spaces inside brackets or angle
    // marks are content
    fn pad_top_level_spaces(s: &str) -> String {
        let mut out = String::new();
        let mut depth_bracket = false;
        let mut depth_angle = false;
        for c in s.chars() {
            match c {
                '[' => depth_bracket = true,
                ']' => depth_bracket = false,
                '<' => depth_angle = true,
                '>' => depth_angle = false,
                _ => {}
            }
            out.push(c);
            if c == ' ' && !depth_bracket && !depth_angle {
                out.push(' ');
            }
        }
        out
    }
    // noncanonical but parseable variants: padded whitespace, blank lines
    let noisy = transcript().prop_flat_map(|t| {
        let canonical = serialize(&t);
        prop::sample::select(vec![
            pad_top_level_spaces(&canonical),
            format!("{canonical}\n\n"),
            format!("\n{canonical}"),
            canonical,
        ])
    });
    run_cases(noisy, |source| {
        let once = parse(source, &ParseOptions::default())
            .map_err(|e| TestCaseError::fail(format!("parse failed: {e:?}")))?;
        let rendered = serialize(&once.transcript);
        let twice = parse(&rendered, &ParseOptions::default())
            .map_err(|e| TestCaseError::fail(format!("reparse failed: {e:?}")))?;
        prop_assert_eq!(serialize(&twice.transcript), rendered);
        Ok(())
    });
}

#[test]
fn property_event_spans_ordered_and_labels_coherent() {
    use stutter_annot_core::transforms::clip_labels;
    run_cases(transcript(), |t| {
        let events = extract_events(t);
        for window in events.windows(2) {
            if window[0].segment_index == window[1].segment_index {
                prop_assert!(
                    window[0].char_span.0 <= window[1].char_span.0,
                    "spans out of order: {:?} then {:?}",
                    window[0],
                    window[1]
                );
            }
        }
        let verbatim = to_verbatim(t);
        for event in &events {
            let len = verbatim[event.segment_index].chars().count();
            prop_assert!(event.char_span.0 <= event.char_span.1);
            prop_assert!(event.char_span.1 <= len);
        }
        for (seg_idx, labels) in clip_labels(t).iter().enumerate() {
            for code in EventCode::ALL {
                let expected = events
                    .iter()
                    .any(|e| e.segment_index == seg_idx && e.code == code);
                prop_assert_eq!(labels.get(code), expected);
            }
        }
        Ok(())
    });
}
