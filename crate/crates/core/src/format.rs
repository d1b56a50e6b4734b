//! Line-oriented instance files.
//!
//! Set splitting:
//!
//! ```text
//! # comment
//! n 4
//! f 1 2
//! f 1 3
//! ```
//!
//! Subset sum:
//!
//! ```text
//! values 5 5 10
//! target 15
//! ```
//!
//! `#` starts a comment running to end of line and blank lines are ignored.
//! Element indices are 1-based.

use std::fmt;

use thiserror::Error;

use crate::error::Error;
use crate::types::{SplitInstance, SubsetMask, SubsetSumInstance, MAX_N};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based; 0 when the problem is not tied to a line (missing header).
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("expected `{0}` line")]
    Missing(&'static str),
    #[error("duplicate `{0}` line")]
    Duplicate(&'static str),
    #[error("universe size {0} outside [1, {max}]", max = MAX_N)]
    SizeOutOfRange(u64),
    #[error("index {index} out of range [1, {n}]")]
    IndexOutOfRange { index: u64, n: u32 },
    #[error("index {0} repeated within one set")]
    RepeatedIndex(u64),
    #[error("family set has no elements")]
    EmptySet,
    #[error("{0}")]
    Invalid(Error),
}

impl ParseError {
    fn at(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }
}

/// Either kind of instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Split(SplitInstance),
    SubsetSum(SubsetSumInstance),
}

/// Non-blank, comment-stripped lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn parse_u64(line: usize, word: &str) -> Result<u64, ParseError> {
    word.parse::<u64>().map_err(|_| {
        ParseError::at(
            line,
            ParseErrorKind::Malformed(format!("`{word}` is not a nonnegative integer")),
        )
    })
}

/// Detects the instance kind from its first keyword.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    match content_lines(text).next() {
        Some((_, words)) if matches!(words[0], "values" | "target") => {
            parse_subset_sum_instance(text).map(Instance::SubsetSum)
        }
        _ => parse_split_instance(text).map(Instance::Split),
    }
}

pub fn parse_split_instance(text: &str) -> Result<SplitInstance, ParseError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| ParseError::at(0, ParseErrorKind::Missing("n <size>")))?;
    if header[0] != "n" {
        return Err(ParseError::at(
            header_line,
            ParseErrorKind::Missing("n <size>"),
        ));
    }
    if header.len() != 2 {
        return Err(ParseError::at(
            header_line,
            ParseErrorKind::Malformed("expected `n <size>`".into()),
        ));
    }
    let n = parse_u64(header_line, header[1])?;
    if !(1..=MAX_N as u64).contains(&n) {
        return Err(ParseError::at(
            header_line,
            ParseErrorKind::SizeOutOfRange(n),
        ));
    }
    let n = n as u32;

    let mut family = Vec::new();
    for (line, words) in lines {
        match words[0] {
            "f" => {
                if words.len() == 1 {
                    return Err(ParseError::at(line, ParseErrorKind::EmptySet));
                }
                let mut mask = 0u64;
                for word in &words[1..] {
                    let index = parse_u64(line, word)?;
                    if index == 0 || index > n as u64 {
                        return Err(ParseError::at(
                            line,
                            ParseErrorKind::IndexOutOfRange { index, n },
                        ));
                    }
                    let bit = 1u64 << (index - 1);
                    if mask & bit != 0 {
                        return Err(ParseError::at(line, ParseErrorKind::RepeatedIndex(index)));
                    }
                    mask |= bit;
                }
                family.push(SubsetMask(mask));
            }
            "n" => return Err(ParseError::at(line, ParseErrorKind::Duplicate("n"))),
            other => {
                return Err(ParseError::at(
                    line,
                    ParseErrorKind::Malformed(format!("unknown keyword `{other}`")),
                ))
            }
        }
    }
    SplitInstance::new(n, family).map_err(|e| ParseError::at(0, ParseErrorKind::Invalid(e)))
}

pub fn parse_subset_sum_instance(text: &str) -> Result<SubsetSumInstance, ParseError> {
    let mut values: Option<(usize, Vec<u64>)> = None;
    let mut target: Option<(usize, u64)> = None;
    for (line, words) in content_lines(text) {
        match words[0] {
            "values" => {
                if values.is_some() {
                    return Err(ParseError::at(line, ParseErrorKind::Duplicate("values")));
                }
                let parsed = words[1..]
                    .iter()
                    .map(|w| parse_u64(line, w))
                    .collect::<Result<Vec<_>, _>>()?;
                values = Some((line, parsed));
            }
            "target" => {
                if target.is_some() {
                    return Err(ParseError::at(line, ParseErrorKind::Duplicate("target")));
                }
                if words.len() != 2 {
                    return Err(ParseError::at(
                        line,
                        ParseErrorKind::Malformed("expected `target <B>`".into()),
                    ));
                }
                target = Some((line, parse_u64(line, words[1])?));
            }
            other => {
                return Err(ParseError::at(
                    line,
                    ParseErrorKind::Malformed(format!("unknown keyword `{other}`")),
                ))
            }
        }
    }
    let (values_line, values) =
        values.ok_or_else(|| ParseError::at(0, ParseErrorKind::Missing("values <a1> ... <an>")))?;
    let (target_line, target) =
        target.ok_or_else(|| ParseError::at(0, ParseErrorKind::Missing("target <B>")))?;
    SubsetSumInstance::new(values, target).map_err(|e| {
        let line = if e == Error::ZeroTarget {
            target_line
        } else {
            values_line
        };
        ParseError::at(line, ParseErrorKind::Invalid(e))
    })
}

impl fmt::Display for SplitInstance {
    /// Serializes in the instance text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n())?;
        for set in self.family() {
            f.write_str("f")?;
            for e in set.elements() {
                write!(f, " {e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for SubsetSumInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("values")?;
        for v in self.values() {
            write!(f, " {v}")?;
        }
        writeln!(f)?;
        writeln!(f, "target {}", self.target())
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Split(inst) => inst.fmt(f),
            Instance::SubsetSum(inst) => inst.fmt(f),
        }
    }
}
