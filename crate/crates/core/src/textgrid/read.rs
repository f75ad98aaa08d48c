//! Reader for Praat's long TextGrid text format.
//!
//! Praat writes UTF-16 by default on some platforms, so the byte stream is
//! BOM-sniffed for UTF-8, UTF-16LE, and UTF-16BE. Quoted strings use `""`
//! for a literal quote and may span lines. The short format (bare values,
//! no `key = value` lines) and point tiers are rejected outright.

use super::{validate_doc, Interval, TextGridDoc, TextGridError, Tier};

/// Parses a long-format TextGrid from raw bytes.
pub fn read_textgrid(bytes: &[u8]) -> Result<TextGridDoc, TextGridError> {
    let text = decode(bytes)?;
    let mut reader = Reader::new(&text);

    let file_type = reader.expect_kv("File type")?;
    if file_type != "ooTextFile" {
        return Err(TextGridError::MalformedHeader(format!(
            "File type is {file_type:?}, expected \"ooTextFile\""
        )));
    }
    let class = reader.expect_kv("Object class")?;
    if class != "TextGrid" {
        return Err(TextGridError::MalformedHeader(format!(
            "Object class is {class:?}, expected \"TextGrid\""
        )));
    }

    let xmin = reader.expect_number("xmin")?;
    let xmax = reader.expect_number("xmax")?;
    let tiers_flag = reader.next_content_line()?;
    let mut tiers = Vec::new();
    match tiers_flag.trim() {
        "tiers? <absent>" => {}
        "tiers? <exists>" => {
            let size_line = reader.expect_kv_raw("size")?;
            let count: usize = size_line.trim().parse().map_err(|_| {
                reader.syntax_error(format!("tier count {size_line:?} is not an integer"))
            })?;
            let intro = reader.next_content_line()?;
            if intro.trim() != "item []:" {
                return Err(reader
                    .syntax_error(format!("expected `item []:` before tiers, found {intro:?}")));
            }
            for _ in 0..count {
                tiers.push(read_tier(&mut reader)?);
            }
        }
        other => {
            return Err(reader.syntax_error(format!(
                "expected `tiers? <exists>` or `tiers? <absent>`, found {other:?}"
            )))
        }
    }

    let doc = TextGridDoc { xmin, xmax, tiers };
    validate_doc(&doc)?;
    Ok(doc)
}

fn read_tier(reader: &mut Reader<'_>) -> Result<Tier, TextGridError> {
    let header = reader.next_content_line()?;
    let header = header.trim();
    if !(header.starts_with("item [") && header.ends_with("]:")) {
        return Err(reader.syntax_error(format!("expected `item [k]:`, found {header:?}")));
    }
    let class = reader.expect_kv("class")?;
    if class != "IntervalTier" {
        return Err(TextGridError::UnsupportedTierClass(class));
    }
    let name = reader.expect_kv("name")?;
    let xmin = reader.expect_number("xmin")?;
    let xmax = reader.expect_number("xmax")?;
    let size_line = reader.expect_kv_raw("intervals: size")?;
    let count: usize = size_line.trim().parse().map_err(|_| {
        reader.syntax_error(format!("interval count {size_line:?} is not an integer"))
    })?;
    let mut intervals = Vec::with_capacity(count);
    for _ in 0..count {
        let header = reader.next_content_line()?;
        let header = header.trim();
        if !(header.starts_with("intervals [") && header.ends_with("]:")) {
            return Err(reader.syntax_error(format!("expected `intervals [k]:`, found {header:?}")));
        }
        let ixmin = reader.expect_number("xmin")?;
        let ixmax = reader.expect_number("xmax")?;
        let text = reader.expect_kv("text")?;
        intervals.push(Interval {
            xmin: ixmin,
            xmax: ixmax,
            text,
        });
    }
    Ok(Tier {
        name,
        xmin,
        xmax,
        intervals,
    })
}

fn decode(bytes: &[u8]) -> Result<String, TextGridError> {
    if bytes.starts_with(&[0xFF, 0xFE]) {
        decode_utf16(&bytes[2..], u16::from_le_bytes)
    } else if bytes.starts_with(&[0xFE, 0xFF]) {
        decode_utf16(&bytes[2..], u16::from_be_bytes)
    } else {
        let body = bytes.strip_prefix(&[0xEF, 0xBB, 0xBF][..]).unwrap_or(bytes);
        String::from_utf8(body.to_vec())
            .map_err(|e| TextGridError::Encoding(format!("invalid UTF-8: {e}")))
    }
}

fn decode_utf16(bytes: &[u8], combine: fn([u8; 2]) -> u16) -> Result<String, TextGridError> {
    if !bytes.len().is_multiple_of(2) {
        return Err(TextGridError::Encoding(
            "UTF-16 byte stream has odd length".to_string(),
        ));
    }
    let units: Vec<u16> = bytes
        .chunks_exact(2)
        .map(|pair| combine([pair[0], pair[1]]))
        .collect();
    String::from_utf16(&units).map_err(|e| TextGridError::Encoding(format!("invalid UTF-16: {e}")))
}

struct Reader<'a> {
    lines: Vec<&'a str>,
    /// Next line to read (0-based); error messages use 1-based numbers.
    next: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Reader<'a> {
        Reader {
            lines: text.lines().collect(),
            next: 0,
        }
    }

    fn syntax_error(&self, message: String) -> TextGridError {
        TextGridError::Syntax {
            line: self.next,
            message,
        }
    }

    fn next_content_line(&mut self) -> Result<&'a str, TextGridError> {
        while self.next < self.lines.len() {
            let line = self.lines[self.next];
            self.next += 1;
            if !line.trim().is_empty() {
                return Ok(line);
            }
        }
        Err(TextGridError::Syntax {
            line: self.next,
            message: "unexpected end of file".to_string(),
        })
    }

    /// Like [`Reader::next_content_line`] but keeps blank lines; used while
    /// continuing a quoted string, where an empty line is part of the value.
    fn next_raw_line(&mut self) -> Result<&'a str, TextGridError> {
        if self.next < self.lines.len() {
            let line = self.lines[self.next];
            self.next += 1;
            Ok(line)
        } else {
            Err(TextGridError::Syntax {
                line: self.next,
                message: "unterminated quoted string".to_string(),
            })
        }
    }

    /// Reads `key = value`, returning the raw value text.
    fn expect_kv_raw(&mut self, key: &str) -> Result<String, TextGridError> {
        let line = self.next_content_line()?;
        let trimmed = line.trim();
        let Some(eq) = trimmed.find('=') else {
            // A long-format file always has `=`; a bare value means the
            // short format.
            if trimmed
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_digit() || c == '"')
            {
                return Err(TextGridError::ShortFormat);
            }
            return Err(self.syntax_error(format!("expected `{key} = ...`, found {trimmed:?}")));
        };
        let found_key = trimmed[..eq].trim();
        if found_key != key {
            return Err(self.syntax_error(format!("expected key {key:?}, found {found_key:?}")));
        }
        Ok(trimmed[eq + 1..].trim().to_string())
    }

    /// Reads `key = <number>`.
    fn expect_number(&mut self, key: &str) -> Result<f64, TextGridError> {
        let raw = self.expect_kv_raw(key)?;
        raw.parse()
            .map_err(|_| self.syntax_error(format!("{key} value {raw:?} is not a number")))
    }

    /// Reads `key = "value"` with `""` escapes; the value may span lines.
    fn expect_kv(&mut self, key: &str) -> Result<String, TextGridError> {
        let raw = self.expect_kv_raw(key)?;
        let mut chars: Vec<char> = raw.chars().collect();
        if chars.first() != Some(&'"') {
            return Err(
                self.syntax_error(format!("expected a quoted string for {key}, found {raw:?}"))
            );
        }
        let mut value = String::new();
        let mut i = 1usize;
        loop {
            if i >= chars.len() {
                // the string continues on the next line
                let line = self.next_raw_line()?;
                value.push('\n');
                chars = line.chars().collect();
                i = 0;
                continue;
            }
            if chars[i] == '"' {
                if chars.get(i + 1) == Some(&'"') {
                    value.push('"');
                    i += 2;
                } else {
                    // closing quote; anything after it is trailing space
                    return Ok(value);
                }
            } else {
                value.push(chars[i]);
                i += 1;
            }
        }
    }
}
