//! Canonical TextGrid writer: UTF-8 without BOM, LF line endings, 4-space
//! indentation per nesting level, quotes escaped by doubling, and numbers
//! in minimal decimal form with at most six fractional digits. Fixed rules
//! make byte-exact golden files possible; `read(write(doc)) == doc` for any
//! valid document whose times survive six-digit rounding.

use super::{validate_doc, TextGridDoc, TextGridError};

/// Renders a document to canonical long-format bytes.
pub fn write_textgrid(doc: &TextGridDoc) -> Result<Vec<u8>, TextGridError> {
    validate_doc(doc)?;
    let mut out = String::new();
    out.push_str("File type = \"ooTextFile\"\n");
    out.push_str("Object class = \"TextGrid\"\n\n");
    out.push_str(&format!("xmin = {}\n", format_seconds(doc.xmin)));
    out.push_str(&format!("xmax = {}\n", format_seconds(doc.xmax)));
    if doc.tiers.is_empty() {
        out.push_str("tiers? <absent>\n");
        return Ok(out.into_bytes());
    }
    out.push_str("tiers? <exists>\n");
    out.push_str(&format!("size = {}\n", doc.tiers.len()));
    out.push_str("item []:\n");
    for (t, tier) in doc.tiers.iter().enumerate() {
        out.push_str(&format!("    item [{}]:\n", t + 1));
        out.push_str("        class = \"IntervalTier\"\n");
        out.push_str(&format!("        name = \"{}\"\n", escape(&tier.name)));
        out.push_str(&format!("        xmin = {}\n", format_seconds(tier.xmin)));
        out.push_str(&format!("        xmax = {}\n", format_seconds(tier.xmax)));
        out.push_str(&format!(
            "        intervals: size = {}\n",
            tier.intervals.len()
        ));
        for (i, interval) in tier.intervals.iter().enumerate() {
            out.push_str(&format!("        intervals [{}]:\n", i + 1));
            out.push_str(&format!(
                "            xmin = {}\n",
                format_seconds(interval.xmin)
            ));
            out.push_str(&format!(
                "            xmax = {}\n",
                format_seconds(interval.xmax)
            ));
            out.push_str(&format!(
                "            text = \"{}\"\n",
                escape(&interval.text)
            ));
        }
    }
    Ok(out.into_bytes())
}

fn escape(text: &str) -> String {
    text.replace('"', "\"\"")
}

/// Minimal decimal rendering: up to six fractional digits, trailing zeros
/// (and a bare trailing point) removed, so 2.5 stays `2.5` and 1.0 becomes
/// `1`.
pub(crate) fn format_seconds(value: f64) -> String {
    let mut s = format!("{value:.6}");
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::super::{read_textgrid, Interval, Tier};
    use super::*;

    fn sample() -> TextGridDoc {
        TextGridDoc {
            xmin: 0.0,
            xmax: 2.5,
            tiers: vec![Tier {
                name: "words".to_string(),
                xmin: 0.0,
                xmax: 2.5,
                intervals: vec![
                    Interval::new(0.0, 1.2, "M/pommy"),
                    Interval::new(1.2, 2.5, ""),
                ],
            }],
        }
    }

    #[test]
    fn write_then_read_is_identity() {
        let doc = sample();
        let bytes = write_textgrid(&doc).unwrap();
        assert_eq!(read_textgrid(&bytes).unwrap(), doc);
    }

    #[test]
    fn read_then_write_is_identity_on_canonical_bytes() {
        let bytes = write_textgrid(&sample()).unwrap();
        let reparsed = read_textgrid(&bytes).unwrap();
        assert_eq!(write_textgrid(&reparsed).unwrap(), bytes);
    }

    #[test]
    fn number_formatting_is_minimal() {
        assert_eq!(format_seconds(2.5), "2.5");
        assert_eq!(format_seconds(0.0), "0");
        assert_eq!(format_seconds(1.0), "1");
        assert_eq!(format_seconds(1.2), "1.2");
        assert_eq!(format_seconds(0.123456), "0.123456");
        assert_eq!(format_seconds(3.000001), "3.000001");
        let bytes = write_textgrid(&sample()).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.contains("xmax = 2.5\n"));
        assert!(!text.contains("2.500000"));
    }

    #[test]
    fn quotes_are_doubled_and_round_trip() {
        let mut doc = sample();
        doc.tiers[0].intervals[0].text = "say \"hi\" now".to_string();
        let bytes = write_textgrid(&doc).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.contains("text = \"say \"\"hi\"\" now\""));
        assert_eq!(read_textgrid(&bytes).unwrap(), doc);
    }

    #[test]
    fn empty_doc_round_trips() {
        let doc = TextGridDoc {
            xmin: 0.0,
            xmax: 1.0,
            tiers: vec![],
        };
        let bytes = write_textgrid(&doc).unwrap();
        assert_eq!(read_textgrid(&bytes).unwrap(), doc);
    }

    #[test]
    fn invalid_docs_are_rejected() {
        let mut doc = sample();
        doc.tiers[0].intervals[0].xmax = 0.0; // xmin == xmax
        assert!(write_textgrid(&doc).is_err());
    }
}
