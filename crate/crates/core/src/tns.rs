//! Plain-text tensor files (`.tns`, version 1).
//!
//! ```text
//! # optional comment lines, before the header only
//! TNS 1
//! order 4 dim 3 layout dense
//! <dim^order whitespace-separated reals, row-major multi-index order>
//! ```
//!
//! Writers emit 17 significant digits, which round-trips every `f64`.
//! Values are written one trailing-index row (`dim` numbers) per line.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tensor::SymmetricTensor;

pub const MAGIC: &str = "TNS";
pub const VERSION: u32 = 1;

pub fn to_string(t: &SymmetricTensor) -> String {
    let mut out = String::with_capacity(t.values().len() * 25 + 64);
    let _ = writeln!(out, "{MAGIC} {VERSION}");
    let _ = writeln!(out, "order {} dim {} layout dense", t.order(), t.dim());
    for row in t.values().chunks(t.dim()) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_file(path: impl AsRef<Path>, t: &SymmetricTensor) -> Result<()> {
    std::fs::write(path, to_string(t))?;
    Ok(())
}

pub fn read_file(path: impl AsRef<Path>) -> Result<SymmetricTensor> {
    parse(&std::fs::read_to_string(path)?)
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

/// Splits `text` into whitespace-separated tokens with their byte offsets.
fn tokens(text: &str, base: usize) -> impl Iterator<Item = (usize, &str)> {
    text.split_ascii_whitespace()
        .map(move |tok| (base + (tok.as_ptr() as usize - text.as_ptr() as usize), tok))
}

pub fn parse(text: &str) -> Result<SymmetricTensor> {
    let mut pos = 0;
    let mut lines = text.split_inclusive('\n');

    // comments and blank lines, then the magic line
    let header = loop {
        let Some(line) = lines.next() else {
            return Err(parse_err(pos, "missing TNS header"));
        };
        let start = pos;
        pos += line.len();
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        break (start, line);
    };
    let mut magic = tokens(header.1, header.0);
    match (magic.next(), magic.next(), magic.next()) {
        (Some((_, MAGIC)), Some((off, ver)), None) => {
            if ver.parse::<u32>().ok() != Some(VERSION) {
                return Err(parse_err(off, format!("unsupported TNS version '{ver}'")));
            }
        }
        _ => return Err(parse_err(header.0, "expected 'TNS 1'")),
    }

    let Some(shape_line) = lines.next() else {
        return Err(parse_err(pos, "missing shape line"));
    };
    let shape_start = pos;
    pos += shape_line.len();
    let shape: Vec<(usize, &str)> = tokens(shape_line, shape_start).collect();
    let keys = ["order", "dim", "layout"];
    if shape.len() != 6 || (0..3).any(|k| shape[2 * k].1 != keys[k]) {
        return Err(parse_err(shape_start, "expected 'order <m> dim <n> layout dense'"));
    }
    let order: usize = shape[1]
        .1
        .parse()
        .map_err(|_| parse_err(shape[1].0, format!("bad order '{}'", shape[1].1)))?;
    let dim: usize = shape[3]
        .1
        .parse()
        .map_err(|_| parse_err(shape[3].0, format!("bad dim '{}'", shape[3].1)))?;
    if shape[5].1 != "dense" {
        return Err(parse_err(shape[5].0, format!("unsupported layout '{}'", shape[5].1)));
    }
    if order < 2 || order % 2 != 0 {
        return Err(parse_err(shape[1].0, format!("order {order} is not even and >= 2")));
    }
    if dim == 0 {
        return Err(parse_err(shape[3].0, "dim must be positive"));
    }
    let expected = dim
        .checked_pow(order as u32)
        .ok_or_else(|| parse_err(shape[3].0, "tensor too large"))?;

    let body = &text[pos..];
    let mut values = Vec::with_capacity(expected);
    for (off, tok) in tokens(body, pos) {
        if values.len() == expected {
            return Err(parse_err(off, format!("extra value after {expected} entries")));
        }
        let v: f64 = tok
            .parse()
            .map_err(|_| parse_err(off, format!("invalid number '{tok}'")))?;
        values.push(v);
    }
    if values.len() != expected {
        return Err(parse_err(
            text.len(),
            format!("expected {expected} values, found {}", values.len()),
        ));
    }
    SymmetricTensor::from_values(order, dim, values)
}
