//! Text formats.
//!
//! Design file:
//!
//! ```text
//! nsqs v=8 blocks=14
//! 0 1 | 2 3
//! ...
//! # key=value
//! ```
//!
//! Rotational spec file (`inf` is the fixed point `p`):
//!
//! ```text
//! rsqs p=19 multipliers=1 base=15
//! inf 1 | 0 8
//! ...
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::construct::RotationalSpec;
use crate::design::{NestedBlock, NestedDesign, Point};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignFile {
    pub design: NestedDesign,
    pub metadata: BTreeMap<String, String>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn header_fields<'a>(
    line_no: usize,
    line: &'a str,
    magic: &str,
    keys: &[&str],
) -> Result<Vec<&'a str>> {
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some(magic) {
        return Err(parse_err(line_no, format!("expected header starting with '{magic}'")));
    }
    let mut out = Vec::with_capacity(keys.len());
    for key in keys {
        let tok = tokens
            .next()
            .ok_or_else(|| parse_err(line_no, format!("header is missing '{key}='")))?;
        let value = tok
            .strip_prefix(key)
            .and_then(|t| t.strip_prefix('='))
            .ok_or_else(|| parse_err(line_no, format!("expected '{key}=', found '{tok}'")))?;
        out.push(value);
    }
    if let Some(extra) = tokens.next() {
        return Err(parse_err(line_no, format!("unexpected header token '{extra}'")));
    }
    Ok(out)
}

fn parse_number(line_no: usize, tok: &str, what: &str) -> Result<u32> {
    tok.parse::<u32>()
        .map_err(|_| parse_err(line_no, format!("invalid {what} '{tok}'")))
}

struct BlockLine {
    block: NestedBlock,
    used_inf: bool,
    used_literal_inf: bool,
}

/// One block line; `inf` resolves to `inf_point`.
fn parse_block_line(line_no: usize, line: &str, inf_point: u32) -> Result<BlockLine> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != 5 || tokens[2] != "|" {
        return Err(parse_err(line_no, format!("expected 'a b | c d', found '{line}'")));
    }
    let (mut used_inf, mut used_literal_inf) = (false, false);
    let mut pts = [0u32; 4];
    for (slot, tok) in [tokens[0], tokens[1], tokens[3], tokens[4]].into_iter().enumerate() {
        pts[slot] = if tok == "inf" {
            used_inf = true;
            inf_point
        } else {
            let x = parse_number(line_no, tok, "point")?;
            used_literal_inf |= x == inf_point;
            x
        };
    }
    let block = NestedBlock::from_points(pts[0], pts[1], pts[2], pts[3])
        .map_err(|e| parse_err(line_no, e.to_string()))?;
    Ok(BlockLine { block, used_inf, used_literal_inf })
}

struct Body<'a> {
    header: (usize, &'a str),
    blocks: Vec<(usize, &'a str)>,
    metadata: BTreeMap<String, String>,
}

fn split_body(text: &str) -> Result<Body<'_>> {
    let mut header = None;
    let mut blocks = Vec::new();
    let mut metadata = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if header.is_none() {
            header = Some((line_no, line));
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            let (k, v) = rest
                .split_once('=')
                .ok_or_else(|| parse_err(line_no, format!("expected '# key=value', found '{line}'")))?;
            metadata.insert(k.trim().to_string(), v.trim().to_string());
            continue;
        }
        if !metadata.is_empty() {
            return Err(parse_err(line_no, "block line after metadata"));
        }
        blocks.push((line_no, line));
    }
    let header = header.ok_or_else(|| parse_err(1, "empty input"))?;
    Ok(Body { header, blocks, metadata })
}

pub fn parse_design_file(text: &str) -> Result<DesignFile> {
    parse_design_body(text, true).map(|(f, _)| f)
}

/// Parse without checking the declared block count, for inspecting damaged
/// files. A malformed final line with no trailing newline (a cut-off write)
/// is dropped. Returns the file and the declared block count.
pub fn parse_design_partial(text: &str) -> Result<(DesignFile, usize)> {
    let complete = text.ends_with('\n');
    match parse_design_body(text, false) {
        Err(Error::Parse { line, .. }) if !complete && line == text.lines().count() && line > 1 => {
            let cut = text.rfind('\n').map_or(0, |i| i + 1);
            parse_design_body(&text[..cut], false)
        }
        r => r,
    }
}

fn parse_design_body(text: &str, strict: bool) -> Result<(DesignFile, usize)> {
    let body = split_body(text)?;
    let (hl, h) = body.header;
    let fields = header_fields(hl, h, "nsqs", &["v", "blocks"])?;
    let v = parse_number(hl, fields[0], "v")?;
    let m = parse_number(hl, fields[1], "block count")? as usize;
    if v == 0 {
        return Err(Error::Schema("v must be positive".into()));
    }
    let inf = v - 1;
    let mut saw_inf = false;
    let mut saw_literal_top = false;
    let mut blocks = Vec::with_capacity(body.blocks.len());
    for (line_no, line) in body.blocks {
        let bl = parse_block_line(line_no, line, inf)?;
        for p in bl.block.quad().points() {
            if p.0 >= v {
                return Err(Error::Schema(format!("line {line_no}: point {} out of range for v={v}", p.0)));
            }
        }
        saw_literal_top |= bl.used_literal_inf;
        saw_inf |= bl.used_inf;
        blocks.push(bl.block);
    }
    if saw_inf && saw_literal_top {
        return Err(Error::Schema(format!("'inf' and literal point {inf} both used")));
    }
    if strict && blocks.len() != m {
        return Err(Error::Schema(format!("header declares {m} blocks, found {}", blocks.len())));
    }
    let design = if saw_inf {
        NestedDesign::with_infinity(v, blocks)?
    } else {
        NestedDesign::new(v, blocks)?
    };
    Ok((DesignFile { design, metadata: body.metadata }, m))
}

pub fn parse_design(text: &str) -> Result<NestedDesign> {
    parse_design_file(text).map(|f| f.design)
}

fn render_point(p: Point, inf: Option<Point>) -> String {
    if Some(p) == inf {
        "inf".to_string()
    } else {
        p.0.to_string()
    }
}

fn write_block(out: &mut String, b: &NestedBlock, inf: Option<Point>) {
    let r = |p| render_point(p, inf);
    let _ = writeln!(
        out,
        "{} {} | {} {}",
        r(b.first().lo()),
        r(b.first().hi()),
        r(b.second().lo()),
        r(b.second().hi())
    );
}

pub fn serialize_design(design: &NestedDesign) -> String {
    serialize_design_file(design, &BTreeMap::new())
}

pub fn serialize_design_file(design: &NestedDesign, metadata: &BTreeMap<String, String>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "nsqs v={} blocks={}", design.v(), design.len());
    let inf = design.infinity();
    for b in design.blocks() {
        write_block(&mut out, b, inf);
    }
    for (k, v) in metadata {
        let _ = writeln!(out, "# {k}={v}");
    }
    out
}

pub fn parse_rotational_spec(text: &str) -> Result<RotationalSpec> {
    let body = split_body(text)?;
    let (hl, h) = body.header;
    let fields = header_fields(hl, h, "rsqs", &["p", "multipliers", "base"])?;
    let p = parse_number(hl, fields[0], "p")?;
    let multipliers = fields[1]
        .split(',')
        .map(|t| parse_number(hl, t, "multiplier"))
        .collect::<Result<Vec<_>>>()?;
    let k = parse_number(hl, fields[2], "base count")? as usize;
    let mut blocks = Vec::with_capacity(body.blocks.len());
    for (line_no, line) in body.blocks {
        let bl = parse_block_line(line_no, line, p)?;
        if bl.used_literal_inf || bl.block.quad().points().iter().any(|q| q.0 > p) {
            return Err(Error::Schema(format!("line {line_no}: points must lie in 0..{p} or be 'inf'")));
        }
        blocks.push(bl.block);
    }
    if blocks.len() != k {
        return Err(Error::Schema(format!("header declares {k} base blocks, found {}", blocks.len())));
    }
    RotationalSpec::new(p, blocks, multipliers)
}

pub fn serialize_rotational_spec(spec: &RotationalSpec) -> String {
    let mut out = String::new();
    let mult: Vec<String> = spec.multipliers().iter().map(u32::to_string).collect();
    let _ = writeln!(
        out,
        "rsqs p={} multipliers={} base={}",
        spec.p(),
        mult.join(","),
        spec.base_blocks().len()
    );
    for b in spec.base_blocks() {
        write_block(&mut out, b, Some(spec.infinity()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_parse_tolerates_truncation() {
        let text = "nsqs v=8 blocks=14\n0 1 | 2 3\n0 1 | 4";
        assert!(matches!(parse_design(text), Err(Error::Parse { line: 3, .. })));
        let (f, declared) = parse_design_partial(text).unwrap();
        assert_eq!((f.design.len(), declared), (1, 14));
        assert!(parse_design_partial("nsqs v=8 blocks=2\n0 1 | 1 2\n").is_err());
    }

    #[test]
    fn one_block() {
        let d = parse_design("nsqs v=4 blocks=1\n0 1 | 2 3\n").unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(serialize_design(&d), "nsqs v=4 blocks=1\n0 1 | 2 3\n");
    }

    #[test]
    fn canonicalizes() {
        let d = parse_design("nsqs v=4 blocks=1\n3 2 | 1 0\n").unwrap();
        assert_eq!(serialize_design(&d), "nsqs v=4 blocks=1\n0 1 | 2 3\n");
    }

    #[test]
    fn overlapping_pairs() {
        let err = parse_design("nsqs v=4 blocks=1\n0 1 | 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn malformed_lines() {
        for text in [
            "nsqs v=4\n0 1 | 2 3\n",
            "nsqs v=4 blocks=1\n0 1 2 3\n",
            "nsqs v=4 blocks=1\n0 x | 2 3\n",
            "sqs v=4 blocks=1\n0 1 | 2 3\n",
            "",
        ] {
            assert!(matches!(parse_design(text), Err(Error::Parse { .. })), "{text:?}");
        }
    }

    #[test]
    fn schema_errors() {
        for text in [
            "nsqs v=4 blocks=1\n0 1 | 2 4\n",
            "nsqs v=4 blocks=2\n0 1 | 2 3\n",
            "nsqs v=5 blocks=2\n0 1 | 2 4\n0 1 | inf 3\n",
        ] {
            assert!(matches!(parse_design(text), Err(Error::Schema(_))), "{text:?}");
        }
    }

    #[test]
    fn infinity_and_metadata() {
        let text = "nsqs v=4 blocks=1\n0 1 | 2 inf\n# source=test\n";
        let f = parse_design_file(text).unwrap();
        assert!(f.design.has_infinity());
        assert_eq!(f.metadata["source"], "test");
        assert_eq!(serialize_design_file(&f.design, &f.metadata), text);
    }

    #[test]
    fn rotational_round_trip() {
        let text = "rsqs p=7 multipliers=1 base=2\n0 1 | 4 6\n0 inf | 2 6\n";
        let spec = parse_rotational_spec(text).unwrap();
        assert_eq!(serialize_rotational_spec(&spec), text);
        assert!(parse_rotational_spec("rsqs p=7 multipliers=1 base=1\n0 7 | 2 6\n").is_err());
    }
}
