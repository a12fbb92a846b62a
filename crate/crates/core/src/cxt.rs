//! Burmeister `.cxt` reader and writer.
//!
//! ```text
//! B
//! <context name, emitted empty>
//! |G|
//! |M|
//! <empty>
//! object names, one per line
//! attribute names, one per line
//! incidence rows of 'X' / '.'
//! ```
//!
//! The reader accepts CRLF line endings and lowercase `x`; the writer always
//! produces LF and `X`.

use crate::bitset::BitSet;
use crate::context::{ContextError, FormalContext, Result};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Split<'a, char>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.split('\n').enumerate(),
            last: 0,
        }
    }

    /// Next line with its 1-based number and the trailing '\r' removed.
    fn next(&mut self) -> Option<(usize, &'a str)> {
        let (i, line) = self.inner.next()?;
        self.last = i + 1;
        Some((i + 1, line.strip_suffix('\r').unwrap_or(line)))
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next().ok_or_else(|| ContextError::DimensionMismatch {
            line: self.last + 1,
            message: format!("unexpected end of file, expected {what}"),
        })
    }
}

fn parse_count(line: usize, text: &str, what: &str) -> Result<usize> {
    text.trim()
        .parse()
        .map_err(|_| ContextError::DimensionMismatch {
            line,
            message: format!("expected {what}, found {text:?}"),
        })
}

/// Parses a Burmeister context file.
pub fn parse_cxt(bytes: &[u8]) -> Result<FormalContext> {
    let text = std::str::from_utf8(bytes).map_err(|_| ContextError::InvalidEncoding)?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut lines = Lines::new(text);

    let header = loop {
        match lines.next() {
            Some((_, "")) => continue,
            Some(l) => break l,
            None => return Err(ContextError::MalformedHeader { line: lines.last }),
        }
    };
    if header.1.trim() != "B" {
        return Err(ContextError::MalformedHeader { line: header.0 });
    }
    // context name, ignored
    lines.expect("context name line")?;
    let (n, text) = lines.expect("object count")?;
    let n_objects = parse_count(n, text, "object count")?;
    let (n, text) = lines.expect("attribute count")?;
    let n_attributes = parse_count(n, text, "attribute count")?;

    // Names are never empty, so blank separator lines can be skipped.
    let mut names = Vec::with_capacity(n_objects + n_attributes);
    while names.len() < n_objects + n_attributes {
        let what = if names.len() < n_objects {
            "object name"
        } else {
            "attribute name"
        };
        let (_, line) = lines.expect(what)?;
        if names.is_empty() && line.is_empty() {
            continue;
        }
        names.push(line.to_owned());
    }
    let attributes = names.split_off(n_objects);
    let objects = names;

    let mut rows = Vec::with_capacity(n_objects);
    for _ in 0..n_objects {
        let (n, line) = lines.expect("incidence row")?;
        let mut row = BitSet::empty(n_attributes);
        let mut width = 0;
        for (col, ch) in line.chars().enumerate() {
            match ch {
                'X' | 'x' => {
                    if col < n_attributes {
                        row.insert(col);
                    }
                }
                '.' => {}
                found => {
                    return Err(ContextError::BadCell {
                        line: n,
                        column: col + 1,
                        found,
                    })
                }
            }
            width += 1;
        }
        if width != n_attributes {
            return Err(ContextError::DimensionMismatch {
                line: n,
                message: format!("row has {width} cells, expected {n_attributes}"),
            });
        }
        rows.push(row);
    }
    while let Some((n, line)) = lines.next() {
        if !line.trim().is_empty() {
            return Err(ContextError::DimensionMismatch {
                line: n,
                message: format!("unexpected content after {n_objects} incidence rows"),
            });
        }
    }

    FormalContext::from_bit_rows(objects, attributes, rows)
}

/// Writes the canonical Burmeister form of a context.
pub fn write_cxt(ctx: &FormalContext) -> String {
    let mut out = String::new();
    out.push_str("B\n\n");
    out.push_str(&format!("{}\n{}\n\n", ctx.object_count(), ctx.attribute_count()));
    for name in ctx.objects().iter().chain(ctx.attributes()) {
        out.push_str(name);
        out.push('\n');
    }
    for g in 0..ctx.object_count() {
        for m in 0..ctx.attribute_count() {
            out.push(if ctx.has(g, m) { 'X' } else { '.' });
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::PLANETS_CXT;

    #[test]
    fn smallest_context() {
        let ctx = parse_cxt(b"B\n\n1\n1\n\ng\nm\nX\n").unwrap();
        assert_eq!(ctx.objects(), ["g"]);
        assert_eq!(ctx.attributes(), ["m"]);
        assert!(ctx.has(0, 0));
        let written = write_cxt(&ctx);
        // eight lines plus the terminating newline
        assert_eq!(written.split('\n').count(), 9);
        assert_eq!(written, "B\n\n1\n1\n\ng\nm\nX\n");
    }

    #[test]
    fn planets_fixture() {
        let ctx = parse_cxt(PLANETS_CXT.as_bytes()).unwrap();
        assert_eq!(ctx.object_count(), 9);
        assert_eq!(ctx.attribute_count(), 7);
        assert_eq!(ctx.cross_count(), 27);
        assert_eq!(write_cxt(&ctx), PLANETS_CXT);
    }

    #[test]
    fn empty_incidence_rows() {
        let ctx = FormalContext::new(vec!["a".into(), "b".into()], vec!["x".into(), "y".into()])
            .unwrap();
        let text = write_cxt(&ctx);
        assert!(text.ends_with("\n..\n..\n"));
    }

    #[test]
    fn canonicalizes_line_endings_and_case() {
        let ctx = parse_cxt(b"\r\nB\r\nname\r\n2\r\n2\r\n\r\na\r\nb\r\nx\r\ny\r\nx.\r\n.X\r\n\r\n").unwrap();
        assert_eq!(write_cxt(&ctx), "B\n\n2\n2\n\na\nb\nx\ny\nX.\n.X\n");
    }

    #[test]
    fn rejects_bad_cell() {
        let err = parse_cxt(b"B\n\n1\n2\n\ng\nm\nn\nX?\n").unwrap_err();
        assert_eq!(
            err,
            ContextError::BadCell {
                line: 9,
                column: 2,
                found: '?'
            }
        );
    }

    #[test]
    fn rejects_bad_header() {
        assert_eq!(
            parse_cxt(b"\nC\n\n1\n1\n\ng\nm\nX\n").unwrap_err(),
            ContextError::MalformedHeader { line: 2 }
        );
        assert!(matches!(
            parse_cxt(b"").unwrap_err(),
            ContextError::MalformedHeader { .. }
        ));
    }

    #[test]
    fn rejects_dimension_mismatch() {
        // short row
        assert!(matches!(
            parse_cxt(b"B\n\n1\n2\n\ng\nm\nn\nX\n").unwrap_err(),
            ContextError::DimensionMismatch { line: 9, .. }
        ));
        // missing row
        assert!(matches!(
            parse_cxt(b"B\n\n2\n1\n\ng\nh\nm\nX\n").unwrap_err(),
            ContextError::DimensionMismatch { .. }
        ));
        // extra row
        assert!(matches!(
            parse_cxt(b"B\n\n1\n1\n\ng\nm\nX\nX\n").unwrap_err(),
            ContextError::DimensionMismatch { line: 9, .. }
        ));
        // bad count
        assert!(matches!(
            parse_cxt(b"B\n\nnine\n1\n").unwrap_err(),
            ContextError::DimensionMismatch { line: 3, .. }
        ));
    }

    #[test]
    fn rejects_duplicates_and_bad_encoding() {
        assert!(matches!(
            parse_cxt(b"B\n\n2\n1\n\ng\ng\nm\nX\n.\n").unwrap_err(),
            ContextError::DuplicateName { .. }
        ));
        assert_eq!(
            parse_cxt(&[b'B', b'\n', 0xff]).unwrap_err(),
            ContextError::InvalidEncoding
        );
    }

    #[test]
    fn zero_sized_contexts_round_trip() {
        for (g, m) in [(0, 0), (0, 3), (2, 0)] {
            let ctx = FormalContext::new(
                (0..g).map(|i| format!("g{i}")).collect(),
                (0..m).map(|i| format!("m{i}")).collect(),
            )
            .unwrap();
            assert_eq!(parse_cxt(write_cxt(&ctx).as_bytes()).unwrap(), ctx);
        }
    }
}
