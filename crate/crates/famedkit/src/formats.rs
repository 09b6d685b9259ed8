//! File formats: the JSON gluing table (canonical), the plain-text gluing
//! table accepted on input, and JSON serialisations of orders, matrices,
//! reports and shapes.

use std::fmt;

use famedkit_core::perm::Perm4;
use famedkit_core::tri::{Gluing, IdealTriangulation, TriError};
use serde::{Deserialize, Serialize};

pub const TRI_FORMAT: &str = "famedkit-tri-v1";

#[derive(Debug)]
pub enum FormatError {
    /// Unreadable syntax or wrong top-level structure.
    MalformedDocument(String),
    /// A face slot has no gluing entry.
    UnpairedFace { tet: usize, face: u8 },
    /// The stored target face disagrees with the vertex bijection, or the
    /// partner entry does not invert this one.
    NotInvolution { tet: usize, face: u8 },
    /// A face glued to itself.
    SelfGluedFace { tet: usize, face: u8 },
    /// Structural validation failed in the core.
    Invalid(TriError),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::MalformedDocument(m) => write!(f, "malformed document: {m}"),
            FormatError::UnpairedFace { tet, face } => {
                write!(f, "face {face} of tetrahedron {tet} is unpaired")
            }
            FormatError::NotInvolution { tet, face } => {
                write!(
                    f,
                    "gluing at face {face} of tetrahedron {tet} is not an involution"
                )
            }
            FormatError::SelfGluedFace { tet, face } => {
                write!(f, "face {face} of tetrahedron {tet} is glued to itself")
            }
            FormatError::Invalid(e) => write!(f, "invalid triangulation: {e}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<TriError> for FormatError {
    fn from(e: TriError) -> FormatError {
        match e {
            TriError::NotInvolution { slot } => FormatError::NotInvolution {
                tet: slot.tet,
                face: slot.face,
            },
            TriError::SelfGluedFace { slot } => FormatError::SelfGluedFace {
                tet: slot.tet,
                face: slot.face,
            },
            other => FormatError::Invalid(other),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TriDoc {
    format: String,
    n: usize,
    gluings: Vec<Vec<(usize, u8, [u8; 4])>>,
}


/// Parses a triangulation document: JSON when the first non-blank byte is
/// `{`, the plain-text gluing table otherwise.
pub fn parse_triangulation(document: &str) -> Result<IdealTriangulation, FormatError> {
    let trimmed = document.trim_start();
    if trimmed.starts_with('{') {
        parse_json(document)
    } else {
        parse_text(document)
    }
}

fn parse_json(document: &str) -> Result<IdealTriangulation, FormatError> {
    let doc: TriDoc = serde_json::from_str(document)
        .map_err(|e| FormatError::MalformedDocument(e.to_string()))?;
    if doc.format != TRI_FORMAT {
        return Err(FormatError::MalformedDocument(format!(
            "unknown format tag {:?}",
            doc.format
        )));
    }
    if doc.gluings.len() != doc.n {
        return Err(FormatError::MalformedDocument(format!(
            "expected {} gluing rows, found {}",
            doc.n,
            doc.gluings.len()
        )));
    }
    let mut rows = Vec::with_capacity(doc.n);
    for (t, row) in doc.gluings.iter().enumerate() {
        if row.len() != 4 {
            return Err(FormatError::UnpairedFace {
                tet: t,
                face: row.len() as u8,
            });
        }
        let mut out = [Gluing {
            tet: 0,
            perm: Perm4::IDENTITY,
        }; 4];
        for (f, &(target, target_face, images)) in row.iter().enumerate() {
            let perm = Perm4::new(images).ok_or_else(|| {
                FormatError::MalformedDocument(format!(
                    "entry ({t},{f}): {images:?} is not a permutation of 0..3"
                ))
            })?;
            if perm.apply(f as u8) != target_face {
                return Err(FormatError::NotInvolution { tet: t, face: f as u8 });
            }
            out[f] = Gluing { tet: target, perm };
        }
        rows.push(out);
    }
    IdealTriangulation::new(rows).map_err(FormatError::from)
}

/// Columns of the text table: faces by vertex triple, `012 013 023 123`,
/// i.e. opposite vertices `3 2 1 0`.
const TEXT_COLUMNS: [u8; 4] = [3, 2, 1, 0];

/// A text-table cell: target tetrahedron and the images of the face's
/// vertices in increasing source order.
type TextCell = (usize, [u8; 3]);

fn parse_text(document: &str) -> Result<IdealTriangulation, FormatError> {
    let mut entries: Vec<(usize, Vec<TextCell>)> = Vec::new();
    for raw in document.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line
            .split(|c: char| c == '|' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if tokens.is_empty() {
            continue;
        }
        // Header row ("tet 012 013 ..." or similar labels) is skipped.
        let Ok(tet) = tokens[0].trim_end_matches(':').parse::<usize>() else {
            continue;
        };
        let mut cells = Vec::new();
        for tok in &tokens[1..] {
            cells.push(parse_cell(tok).ok_or_else(|| {
                FormatError::MalformedDocument(format!("bad cell {tok:?} in row {tet}"))
            })?);
        }
        entries.push((tet, cells));
    }
    if entries.is_empty() {
        return Err(FormatError::MalformedDocument(
            "no gluing rows found".into(),
        ));
    }
    let n = entries.iter().map(|(t, _)| *t + 1).max().unwrap();
    let mut rows: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; n];
    for (tet, cells) in entries {
        if cells.len() != 4 {
            return Err(FormatError::MalformedDocument(format!(
                "row {tet} has {} cells, expected 4",
                cells.len()
            )));
        }
        for (col, (target, images)) in cells.into_iter().enumerate() {
            let face = TEXT_COLUMNS[col];
            // The cell lists images of the face's vertices in increasing
            // order; the opposite vertex maps to the missing label.
            let mut perm = [u8::MAX; 4];
            let mut used = [false; 4];
            let mut k = 0;
            for v in 0..4u8 {
                if v != face {
                    let img = images[k];
                    if img > 3 || used[img as usize] {
                        return Err(FormatError::MalformedDocument(format!(
                            "cell in row {tet} column {col} repeats vertex {img}"
                        )));
                    }
                    perm[v as usize] = img;
                    used[img as usize] = true;
                    k += 1;
                }
            }
            let missing = (0..4u8).find(|&v| !used[v as usize]).unwrap();
            perm[face as usize] = missing;
            rows[tet][face as usize] = Some(Gluing {
                tet: target,
                perm: Perm4(perm),
            });
        }
    }
    let mut full = Vec::with_capacity(n);
    for (t, row) in rows.into_iter().enumerate() {
        let mut out = [Gluing {
            tet: 0,
            perm: Perm4::IDENTITY,
        }; 4];
        for (f, g) in row.into_iter().enumerate() {
            out[f] = g.ok_or(FormatError::UnpairedFace {
                tet: t,
                face: f as u8,
            })?;
        }
        full.push(out);
    }
    IdealTriangulation::new(full).map_err(FormatError::from)
}

fn parse_cell(tok: &str) -> Option<TextCell> {
    let open = tok.find('(')?;
    let close = tok.find(')')?;
    if close != tok.len() - 1 || close < open {
        return None;
    }
    let target: usize = tok[..open].parse().ok()?;
    let digits = &tok[open + 1..close];
    if digits.len() != 3 {
        return None;
    }
    let mut images = [0u8; 3];
    for (i, ch) in digits.chars().enumerate() {
        images[i] = ch.to_digit(10)? as u8;
    }
    Some((target, images))
}

/// One gluing entry of the JSON table: target tetrahedron, target face,
/// and the vertex bijection as an image list.
type GluingEntry = (usize, u8, [u8; 4]);

/// Serialises a triangulation in the canonical JSON format.
pub fn write_triangulation(tri: &IdealTriangulation) -> String {
    let gluings: Vec<Vec<GluingEntry>> = tri
        .gluing_rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(f, g)| (g.tet, g.perm.apply(f as u8), g.perm.0))
                .collect()
        })
        .collect();
    let doc = TriDoc {
        format: TRI_FORMAT.into(),
        n: tri.n_tetrahedra(),
        gluings,
    };
    serde_json::to_string(&doc).expect("serialisable")
}

/// Orders serialise as a list of image lists, one per tetrahedron.
pub fn write_orders(orders: &[famedkit_core::Order]) -> serde_json::Value {
    serde_json::json!(orders
        .iter()
        .map(|o| o.perms.iter().map(|p| p.0.to_vec()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

pub fn parse_order(v: &serde_json::Value) -> Option<famedkit_core::Order> {
    let rows = v.as_array()?;
    let mut perms = Vec::with_capacity(rows.len());
    for row in rows {
        let xs = row.as_array()?;
        if xs.len() != 4 {
            return None;
        }
        let mut img = [0u8; 4];
        for (i, x) in xs.iter().enumerate() {
            img[i] = x.as_u64()? as u8;
        }
        perms.push(Perm4::new(img)?);
    }
    Some(famedkit_core::Order { perms })
}
