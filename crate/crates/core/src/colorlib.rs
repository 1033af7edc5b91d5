//! Color libraries: the embedded UW-71 set, ΔE lattice generation, hue/chroma
//! ordering and CSV import/export.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::colorspace::{
    lab_to_hex, lab_to_lch, lab_to_xyz, xyz_to_xyy, LabColor, LchColor, WhitePoint, XyYColor,
};
use crate::numfmt::sig6;

pub const UW71_NAME: &str = "UW-71";

const UW71_CSV: &str = include_str!("../data/uw71.csv");
const UW71_SHA256: &str = "6075818e4c23e6cca6eb938b432c76513998e81af80370dccf4621c60e1a8bc8";

/// Chroma below which a color is treated as achromatic when ordering.
pub const ACHROMATIC_CHROMA: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum LibraryError {
    #[error("embedded color data is corrupt: sha256 {actual}, expected {expected}")]
    Corrupt { expected: String, actual: String },
    #[error("color library is empty")]
    Empty,
    #[error("duplicate color index {0}")]
    DuplicateIndex(usize),
    #[error("color {index}: {message}")]
    Inconsistent { index: usize, message: String },
    #[error("grid spacing must be positive, got {0}")]
    InvalidSpacing(f64),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// One published correction to the printed coordinate table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Erratum {
    pub index: usize,
    pub field: &'static str,
    pub printed: f64,
    pub corrected: f64,
}

/// Row 7 is an L* = 50 color, whose luminance is 100·(66/116)³ = 18.419 like
/// every other L* = 50 row; the printed 8.419 drops the leading digit.
pub const UW71_ERRATA: &[Erratum] = &[Erratum {
    index: 7,
    field: "Y",
    printed: 8.419,
    corrected: 18.419,
}];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorSpec {
    /// 1-based position in the library.
    pub index: usize,
    /// 1-based rank when ordered by hue angle and chroma.
    pub sorted_position: usize,
    pub xyy: XyYColor,
    pub lab: LabColor,
    pub lch: LchColor,
    pub hex: String,
    pub clamped: bool,
}

impl ColorSpec {
    /// Builds a spec whose LCh and hex are derived from `lab`.
    pub fn from_lab(
        index: usize,
        sorted_position: usize,
        xyy: XyYColor,
        lab: LabColor,
        white: WhitePoint,
    ) -> Self {
        let (hex, clamped) = lab_to_hex(lab, white);
        ColorSpec {
            index,
            sorted_position,
            xyy,
            lab,
            lch: lab_to_lch(lab),
            hex,
            clamped,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorLibrary {
    pub name: String,
    pub colors: Vec<ColorSpec>,
    pub white_point: WhitePoint,
}

impl ColorLibrary {
    pub fn new(
        name: impl Into<String>,
        colors: Vec<ColorSpec>,
        white_point: WhitePoint,
    ) -> Result<Self, LibraryError> {
        if colors.is_empty() {
            return Err(LibraryError::Empty);
        }
        let mut seen = HashSet::new();
        for c in &colors {
            if !seen.insert(c.index) {
                return Err(LibraryError::DuplicateIndex(c.index));
            }
        }
        Ok(ColorLibrary {
            name: name.into(),
            colors,
            white_point,
        })
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn hexes(&self) -> Vec<&str> {
        self.colors.iter().map(|c| c.hex.as_str()).collect()
    }

    /// Position in `colors` of the color with the given 1-based index.
    pub fn position_of(&self, index: usize) -> Option<usize> {
        self.colors.iter().position(|c| c.index == index)
    }

    /// Hexcodes shared by more than one color (possible after gamut clamping).
    pub fn duplicate_hexes(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut dups: Vec<String> = self
            .colors
            .iter()
            .filter(|c| !seen.insert(c.hex.as_str()))
            .map(|c| c.hex.clone())
            .collect();
        dups.sort();
        dups.dedup();
        dups
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Deserialize)]
struct TableRow {
    index: usize,
    sorted_position: usize,
    x: f64,
    y: f64,
    #[serde(rename = "Y")]
    luminance: f64,
    #[serde(rename = "L")]
    l: f64,
    a: f64,
    b: f64,
}

/// The 71-color library with coordinates as tabulated, after [`UW71_ERRATA`].
///
/// Lab values and sorted positions are taken from the table verbatim; LCh and
/// hexcodes are derived with the D65 white point.
pub fn load_uw71() -> Result<ColorLibrary, LibraryError> {
    load_embedded(UW71_CSV, UW71_SHA256)
}

fn load_embedded(data: &str, expected_sha: &str) -> Result<ColorLibrary, LibraryError> {
    let actual = sha256_hex(data.as_bytes());
    if actual != expected_sha {
        return Err(LibraryError::Corrupt {
            expected: expected_sha.to_string(),
            actual,
        });
    }
    let white = WhitePoint::D65;
    let mut colors = Vec::with_capacity(71);
    for row in csv::Reader::from_reader(data.as_bytes()).deserialize() {
        let row: TableRow = row?;
        let mut xyy = XyYColor::new(row.x, row.y, row.luminance);
        for e in UW71_ERRATA.iter().filter(|e| e.index == row.index) {
            if e.field == "Y" && xyy.luminance == e.printed {
                xyy.luminance = e.corrected;
            }
        }
        colors.push(ColorSpec::from_lab(
            row.index,
            row.sorted_position,
            xyy,
            LabColor::new(row.l, row.a, row.b),
            white,
        ));
    }
    ColorLibrary::new(UW71_NAME, colors, white)
}

/// The printed (uncorrected) UW-71 coordinate rows as
/// `(index, sorted_position, xyY, Lab)`.
pub fn uw71_printed_rows() -> Vec<(usize, usize, XyYColor, LabColor)> {
    csv::Reader::from_reader(UW71_CSV.as_bytes())
        .deserialize::<TableRow>()
        .map(|r| {
            let r = r.expect("embedded table parses");
            (
                r.index,
                r.sorted_position,
                XyYColor::new(r.x, r.y, r.luminance),
                LabColor::new(r.l, r.a, r.b),
            )
        })
        .collect()
}

/// Parameters of an axis-aligned CIELAB lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub delta_e: f64,
    pub lightness_planes: Vec<f64>,
    /// Lattice points satisfy |a| ≤ extent and |b| ≤ extent.
    pub ab_extent: f64,
}

impl GridSpec {
    pub fn new(delta_e: f64, lightness_planes: Vec<f64>) -> Self {
        GridSpec {
            delta_e,
            lightness_planes,
            ab_extent: 128.0,
        }
    }
}

/// Lattice library in (L, a, b) with spacing `delta_e` on a/b, restricted to
/// the given lightness planes and to colors accepted by `filter`. Colors are
/// ordered lexicographically by (L, a, b).
pub fn generate_grid_library<F>(spec: &GridSpec, filter: F) -> Result<ColorLibrary, LibraryError>
where
    F: Fn(LabColor) -> bool,
{
    if !(spec.delta_e > 0.0 && spec.delta_e.is_finite()) {
        return Err(LibraryError::InvalidSpacing(spec.delta_e));
    }
    let white = WhitePoint::D65;
    // tolerate accumulated rounding at the extent boundary
    let steps = ((spec.ab_extent / spec.delta_e) + 1e-9).floor() as i64;
    let mut planes = spec.lightness_planes.clone();
    planes.sort_by(f64::total_cmp);
    planes.dedup();

    let mut labs = Vec::new();
    for &l in &planes {
        for i in -steps..=steps {
            for j in -steps..=steps {
                let lab = LabColor::new(l, i as f64 * spec.delta_e, j as f64 * spec.delta_e);
                if filter(lab) {
                    labs.push(lab);
                }
            }
        }
    }
    if labs.is_empty() {
        return Err(LibraryError::Empty);
    }
    let colors: Vec<ColorSpec> = labs
        .into_iter()
        .enumerate()
        .map(|(i, lab)| {
            let xyy = xyz_to_xyy(lab_to_xyz(lab, white), white);
            ColorSpec::from_lab(i + 1, 0, xyy, lab, white)
        })
        .collect();
    let mut lib = ColorLibrary::new(format!("grid-dE{}", sig6(spec.delta_e)), colors, white)?;
    let ranks = sort_by_hue_chroma(&lib);
    for (c, r) in lib.colors.iter_mut().zip(ranks) {
        c.sorted_position = r;
    }
    Ok(lib)
}

fn hue_chroma_order(p: &ColorSpec, q: &ColorSpec) -> Ordering {
    let pa = p.lch.c < ACHROMATIC_CHROMA;
    let qa = q.lch.c < ACHROMATIC_CHROMA;
    match (pa, qa) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (true, true) => q.lab.l.total_cmp(&p.lab.l),
        (false, false) => p
            .lch
            .h
            .total_cmp(&q.lch.h)
            .then(p.lch.c.total_cmp(&q.lch.c))
            .then(q.lab.l.total_cmp(&p.lab.l)),
    }
}

/// 1-based hue/chroma rank of every color, aligned with `lib.colors`.
///
/// Achromatic colors come first, lightest first. Chromatic colors follow by
/// ascending hue angle, then ascending chroma, then descending lightness; the
/// sort is stable so remaining ties keep library order.
pub fn sort_by_hue_chroma(lib: &ColorLibrary) -> Vec<usize> {
    let mut order: Vec<usize> = (0..lib.colors.len()).collect();
    order.sort_by(|&i, &j| hue_chroma_order(&lib.colors[i], &lib.colors[j]));
    let mut ranks = vec![0; order.len()];
    for (rank, &i) in order.iter().enumerate() {
        ranks[i] = rank + 1;
    }
    ranks
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    index: usize,
    sorted_position: usize,
    x: String,
    y: String,
    #[serde(rename = "Y")]
    luminance: String,
    #[serde(rename = "L")]
    l: String,
    a: String,
    b: String,
    #[serde(rename = "C")]
    c: String,
    h: String,
    hex: String,
    clamped: bool,
}

/// Write a library as CSV with the header
/// `index,sorted_position,x,y,Y,L,a,b,C,h,hex,clamped`.
pub fn write_library_csv<W: Write>(lib: &ColorLibrary, out: W) -> Result<(), LibraryError> {
    let mut w = csv::Writer::from_writer(out);
    for c in &lib.colors {
        w.serialize(CsvRow {
            index: c.index,
            sorted_position: c.sorted_position,
            x: sig6(c.xyy.x),
            y: sig6(c.xyy.y),
            luminance: sig6(c.xyy.luminance),
            l: sig6(c.lab.l),
            a: sig6(c.lab.a),
            b: sig6(c.lab.b),
            c: sig6(c.lch.c),
            h: sig6(c.lch.h),
            hex: c.hex.clone(),
            clamped: c.clamped,
        })?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn parse_field(index: usize, name: &str, raw: &str) -> Result<f64, LibraryError> {
    raw.trim().parse().map_err(|_| LibraryError::Inconsistent {
        index,
        message: format!("field {name} is not a number: {raw:?}"),
    })
}

fn close6(given: f64, derived: f64) -> bool {
    (given - derived).abs() <= 1e-5 * derived.abs().max(1.0)
}

/// Read a library CSV. Lab is authoritative; the C, h and hex columns must
/// agree with what is derived from it.
pub fn read_library_csv<R: Read>(
    name: &str,
    input: R,
    white: WhitePoint,
) -> Result<ColorLibrary, LibraryError> {
    let mut colors = Vec::new();
    for row in csv::Reader::from_reader(input).deserialize() {
        let row: CsvRow = row?;
        let i = row.index;
        let xyy = XyYColor::new(
            parse_field(i, "x", &row.x)?,
            parse_field(i, "y", &row.y)?,
            parse_field(i, "Y", &row.luminance)?,
        );
        let lab = LabColor::new(
            parse_field(i, "L", &row.l)?,
            parse_field(i, "a", &row.a)?,
            parse_field(i, "b", &row.b)?,
        );
        let spec = ColorSpec::from_lab(i, row.sorted_position, xyy, lab, white);
        let c = parse_field(i, "C", &row.c)?;
        let h = parse_field(i, "h", &row.h)?;
        let hue_ok = close6(h, spec.lch.h) || close6(h + 360.0, spec.lch.h + 360.0);
        if !close6(c, spec.lch.c) || !hue_ok {
            return Err(LibraryError::Inconsistent {
                index: i,
                message: format!(
                    "C/h ({c}, {h}) disagree with Lab-derived ({}, {})",
                    spec.lch.c, spec.lch.h
                ),
            });
        }
        if !row.hex.eq_ignore_ascii_case(&spec.hex) {
            return Err(LibraryError::Inconsistent {
                index: i,
                message: format!("hex {} disagrees with Lab-derived {}", row.hex, spec.hex),
            });
        }
        colors.push(spec);
    }
    ColorLibrary::new(name, colors, white)
}
