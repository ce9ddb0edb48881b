//! Line-oriented text format for structures.
//!
//! ```text
//! # comment
//! KIND blackset
//! VERSION 1
//! DIM 3
//! VEC a 1 0 0
//! VEC b 0 1/2 1
//! SECTION BASIS
//! a
//! b
//! SECTION BLACKS
//! a
//! ```
//!
//! `KIND` is `hilbert`, `pair` or `blackset`. A missing `BASIS` section means
//! the whole space. `G` is required for pairs and `BLACKS` for black sets.
//! Serialization is canonical: the basis and `G` are written as the reduced
//! row echelon form of their span, black points sorted, sections in
//! alphabetical order.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use hg_core::blacksets::BlackSetStructure;
use hg_core::pairs::ProjectionPairStructure;
use hg_core::rational::parse_rational;
use hg_core::{Rational, RationalVector, Subspace};
use num_traits::Zero;
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;
pub const DEFAULT_MAX_DIM: usize = 512;
pub const MAX_DIM_ENV: &str = "HG_MAX_DIM";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("section {section} (line {line}): {message}")]
    Invariant {
        section: &'static str,
        line: usize,
        message: String,
    },
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Hilbert,
    Pair,
    Blackset,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Hilbert => "hilbert",
            Kind::Pair => "pair",
            Kind::Blackset => "blackset",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "hilbert" => Some(Kind::Hilbert),
            "pair" => Some(Kind::Pair),
            "blackset" => Some(Kind::Blackset),
            _ => None,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A structure as read from or written to a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Hilbert(Subspace),
    Pair(ProjectionPairStructure),
    Blackset(BlackSetStructure),
}

impl Structure {
    pub fn kind(&self) -> Kind {
        match self {
            Structure::Hilbert(_) => Kind::Hilbert,
            Structure::Pair(_) => Kind::Pair,
            Structure::Blackset(_) => Kind::Blackset,
        }
    }

    pub fn space(&self) -> &Subspace {
        match self {
            Structure::Hilbert(s) => s,
            Structure::Pair(p) => p.space(),
            Structure::Blackset(b) => b.space(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.space().ambient_dim()
    }

    /// The representative that [`parse_structure`] returns for this
    /// structure's serialization.
    pub fn canonical(&self) -> Structure {
        let space = canonical_subspace(self.space());
        match self {
            Structure::Hilbert(_) => Structure::Hilbert(space),
            Structure::Pair(p) => Structure::Pair(
                ProjectionPairStructure::new(space, canonical_subspace(p.g()))
                    .expect("canonical form spans the same subspaces"),
            ),
            Structure::Blackset(b) => {
                let mut blacks = b.blacks().to_vec();
                blacks.sort();
                Structure::Blackset(
                    BlackSetStructure::new(space, blacks).expect("canonical form spans the same space"),
                )
            }
        }
    }
}

/// Reduced row echelon form of `vectors`, zero rows dropped.
pub fn rref(vectors: &[RationalVector]) -> Vec<RationalVector> {
    let Some(dim) = vectors.first().map(RationalVector::dim) else {
        return Vec::new();
    };
    let mut rows: Vec<Vec<Rational>> = vectors.iter().map(|v| v.coords().to_vec()).collect();
    let mut rank = 0;
    for col in 0..dim {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let piv = rows[rank][col].clone();
        for x in rows[rank].iter_mut() {
            *x = &*x / &piv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows.into_iter()
        .map(|r| RationalVector::new(r).expect("positive dimension"))
        .collect()
}

/// Primitive integer rows spanning `s`, unique for the subspace.
pub fn canonical_rows(s: &Subspace) -> Vec<RationalVector> {
    rref(s.basis()).iter().map(RationalVector::clear_denominators).collect()
}

pub fn canonical_subspace(s: &Subspace) -> Subspace {
    Subspace::span(s.ambient_dim(), &canonical_rows(s)).expect("positive dimension")
}

/// `HG_MAX_DIM`, or the default when unset or unparsable.
pub fn max_dim_from_env() -> usize {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DIM)
}

pub fn parse_structure(text: &str) -> Result<Structure, FormatError> {
    parse_structure_with_limit(text, max_dim_from_env())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Basis,
    G,
    Blacks,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::Basis => "BASIS",
            Section::G => "G",
            Section::Blacks => "BLACKS",
        }
    }
}

struct Entry {
    line: usize,
    column: usize,
    name: String,
}

struct Vector {
    line: usize,
    coords: Vec<Rational>,
}

#[derive(Default)]
struct Raw {
    kind: Option<Kind>,
    dim: Option<(usize, usize)>,
    vectors: HashMap<String, Vector>,
    sections: Vec<(Section, usize, Vec<Entry>)>,
}

/// Tokens of a line with their 1-based columns, comments removed.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub fn parse_structure_with_limit(text: &str, max_dim: usize) -> Result<Structure, FormatError> {
    let mut raw = Raw::default();
    let mut version_seen = false;
    let mut current: Option<usize> = None;
    for (idx, line) in text.lines().enumerate() {
        let ln = idx + 1;
        let toks = tokens(line);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        let arg = |i: usize| toks.get(i).copied();
        let expect_single = |what: &str| -> Result<(usize, &str), FormatError> {
            match (arg(1), arg(2)) {
                (Some(a), None) => Ok(a),
                (None, _) => Err(syntax(ln, col + head.len(), format!("{head} needs {what}"))),
                (Some(_), Some((c, _))) => Err(syntax(ln, c, "unexpected token")),
            }
        };
        match head {
            "KIND" => {
                let (c, v) = expect_single("a kind")?;
                if raw.kind.is_some() {
                    return Err(syntax(ln, col, "duplicate KIND"));
                }
                raw.kind = Some(Kind::parse(v).ok_or_else(|| {
                    syntax(ln, c, format!("unknown kind `{v}` (expected hilbert, pair or blackset)"))
                })?);
                current = None;
            }
            "VERSION" => {
                let (c, v) = expect_single("a number")?;
                if v != FORMAT_VERSION.to_string() {
                    return Err(syntax(ln, c, format!("unsupported version `{v}`")));
                }
                if std::mem::replace(&mut version_seen, true) {
                    return Err(syntax(ln, col, "duplicate VERSION"));
                }
                current = None;
            }
            "DIM" => {
                let (c, v) = expect_single("a dimension")?;
                let d: usize = v
                    .parse()
                    .map_err(|_| syntax(ln, c, format!("invalid dimension `{v}`")))?;
                if d == 0 {
                    return Err(syntax(ln, c, "dimension must be positive"));
                }
                if d > max_dim {
                    return Err(syntax(ln, c, format!("dimension {d} exceeds the limit {max_dim} ({MAX_DIM_ENV})")));
                }
                if raw.dim.is_some() {
                    return Err(syntax(ln, col, "duplicate DIM"));
                }
                raw.dim = Some((d, ln));
                current = None;
            }
            "VEC" => {
                let (c, name) = arg(1).ok_or_else(|| syntax(ln, col + 3, "VEC needs a name"))?;
                if raw.vectors.contains_key(name) {
                    return Err(syntax(ln, c, format!("duplicate vector `{name}`")));
                }
                let coords = toks[2..]
                    .iter()
                    .map(|&(c, t)| parse_rational(t).map_err(|e| syntax(ln, c, e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                if coords.is_empty() {
                    return Err(syntax(ln, c + name.len(), format!("vector `{name}` has no coordinates")));
                }
                raw.vectors.insert(name.to_string(), Vector { line: ln, coords });
                current = None;
            }
            "SECTION" => {
                let (c, v) = expect_single("a section name")?;
                let s = match v {
                    "BASIS" => Section::Basis,
                    "G" => Section::G,
                    "BLACKS" => Section::Blacks,
                    _ => return Err(syntax(ln, c, format!("unknown section `{v}`"))),
                };
                if raw.sections.iter().any(|(t, _, _)| *t == s) {
                    return Err(syntax(ln, c, format!("duplicate section {v}")));
                }
                raw.sections.push((s, ln, Vec::new()));
                current = Some(raw.sections.len() - 1);
            }
            _ => {
                let Some(i) = current else {
                    return Err(syntax(ln, col, format!("unexpected `{head}` outside a section")));
                };
                for &(c, name) in &toks {
                    raw.sections[i].2.push(Entry {
                        line: ln,
                        column: c,
                        name: name.to_string(),
                    });
                }
            }
        }
    }
    build(raw, version_seen)
}

fn build(raw: Raw, version_seen: bool) -> Result<Structure, FormatError> {
    let kind = raw.kind.ok_or_else(|| syntax(1, 1, "missing KIND"))?;
    if !version_seen {
        return Err(syntax(1, 1, "missing VERSION"));
    }
    let (dim, _) = raw.dim.ok_or_else(|| syntax(1, 1, "missing DIM"))?;
    let section = |s: Section| raw.sections.iter().find(|(t, _, _)| *t == s);
    let resolve = |s: Section| -> Result<Option<(usize, Vec<RationalVector>)>, FormatError> {
        let Some((_, header, entries)) = section(s) else {
            return Ok(None);
        };
        let mut out = Vec::with_capacity(entries.len());
        for e in entries {
            let v = raw.vectors.get(&e.name).ok_or_else(|| {
                syntax(e.line, e.column, format!("undefined vector `{}`", e.name))
            })?;
            if v.coords.len() != dim {
                return Err(FormatError::Invariant {
                    section: s.name(),
                    line: e.line,
                    message: format!(
                        "vector `{}` (line {}) has {} coordinates, expected {dim}",
                        e.name,
                        v.line,
                        v.coords.len()
                    ),
                });
            }
            out.push(RationalVector::new(v.coords.clone()).expect("nonempty"));
        }
        Ok(Some((*header, out)))
    };
    let allowed: &[Section] = match kind {
        Kind::Hilbert => &[Section::Basis],
        Kind::Pair => &[Section::Basis, Section::G],
        Kind::Blackset => &[Section::Basis, Section::Blacks],
    };
    for (s, line, _) in &raw.sections {
        if !allowed.contains(s) {
            return Err(syntax(*line, 9, format!("section {} is not allowed for kind {kind}", s.name())));
        }
    }
    let space = match resolve(Section::Basis)? {
        None => Subspace::full(dim).expect("positive dimension"),
        Some((_, gens)) => Subspace::span(dim, &rref_or_zero(&gens)).expect("positive dimension"),
    };
    let space = canonical_subspace(&space);
    let require = |s: Section| -> Result<(usize, Vec<RationalVector>), FormatError> {
        resolve(s)?.ok_or_else(|| syntax(1, 1, format!("kind {kind} requires SECTION {}", s.name())))
    };
    let outside = |s: Section, line: usize, v: &RationalVector| -> Result<(), FormatError> {
        if space.contains(v).expect("dimensions checked") {
            Ok(())
        } else {
            Err(FormatError::Invariant {
                section: s.name(),
                line,
                message: format!("{v} is not in the space spanned by BASIS"),
            })
        }
    };
    Ok(match kind {
        Kind::Hilbert => Structure::Hilbert(space),
        Kind::Pair => {
            let (line, gens) = require(Section::G)?;
            for g in &gens {
                outside(Section::G, line, g)?;
            }
            let g = Subspace::span(dim, &rref_or_zero(&gens)).expect("positive dimension");
            let g = canonical_subspace(&g);
            Structure::Pair(ProjectionPairStructure::new(space, g).expect("G checked against the space"))
        }
        Kind::Blackset => {
            let (line, mut blacks) = require(Section::Blacks)?;
            for b in &blacks {
                outside(Section::Blacks, line, b)?;
            }
            blacks.sort();
            blacks.dedup();
            Structure::Blackset(BlackSetStructure::new(space, blacks).expect("blacks checked against the space"))
        }
    })
}

fn rref_or_zero(gens: &[RationalVector]) -> Vec<RationalVector> {
    rref(gens).iter().map(RationalVector::clear_denominators).collect()
}

/// Canonical text of `s`; equal structures give equal text. Vectors come
/// first, then the sections in alphabetical order.
pub fn serialize_structure(s: &Structure) -> String {
    let space = s.space();
    let mut sections: Vec<(&str, &str, Vec<RationalVector>)> = Vec::new();
    if space.dim() < space.ambient_dim() {
        sections.push(("BASIS", "b", canonical_rows(space)));
    }
    match s {
        Structure::Hilbert(_) => {}
        Structure::Pair(p) => sections.push(("G", "g", canonical_rows(p.g()))),
        Structure::Blackset(b) => {
            let mut blacks = b.blacks().to_vec();
            blacks.sort();
            sections.push(("BLACKS", "n", blacks));
        }
    }
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "KIND {}", s.kind()).expect("writing to a string");
    writeln!(w, "VERSION {FORMAT_VERSION}").expect("writing to a string");
    writeln!(w, "DIM {}", s.ambient_dim()).expect("writing to a string");
    for (_, prefix, vs) in &sections {
        for (i, v) in vs.iter().enumerate() {
            write!(w, "VEC {prefix}{}", i + 1).expect("writing to a string");
            for c in v.coords() {
                write!(w, " {c}").expect("writing to a string");
            }
            w.push('\n');
        }
    }
    for (name, prefix, vs) in &sections {
        writeln!(w, "SECTION {name}").expect("writing to a string");
        for i in 0..vs.len() {
            writeln!(w, "{prefix}{}", i + 1).expect("writing to a string");
        }
    }
    out
}

/// `serialize ∘ parse`.
pub fn canonicalize(text: &str) -> Result<String, FormatError> {
    parse_structure(text).map(|s| serialize_structure(&s))
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid point `{input}`: {message}")]
pub struct PointError {
    pub input: String,
    pub message: String,
}

/// A point written as rationals separated by commas or whitespace.
pub fn parse_point(s: &str) -> Result<RationalVector, PointError> {
    let err = |message: String| PointError {
        input: s.to_string(),
        message,
    };
    let coords = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_rational(t).map_err(|e| err(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    RationalVector::new(coords).map_err(|e| err(e.to_string()))
}

/// One point per non-empty line; `#` starts a comment.
pub fn parse_points(text: &str) -> Result<Vec<RationalVector>, FormatError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        out.push(parse_point(body).map_err(|e| syntax(i + 1, 1, e.message))?);
    }
    Ok(out)
}
