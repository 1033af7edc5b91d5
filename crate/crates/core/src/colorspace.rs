//! Conversions among CIE 1931 xyY, CIE XYZ, CIELAB, cylindrical LCh and
//! 8-bit sRGB hexcodes.
//!
//! Tristimulus values use the 0–100 scale throughout. All functions are pure.

use serde::{Deserialize, Serialize};
use std::fmt;

/// CIE 1931 chromaticity plus luminance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XyYColor {
    pub x: f64,
    pub y: f64,
    #[serde(rename = "Y")]
    pub luminance: f64,
}

impl XyYColor {
    pub const fn new(x: f64, y: f64, luminance: f64) -> Self {
        Self { x, y, luminance }
    }

    pub fn is_valid(&self) -> bool {
        self.x >= 0.0 && self.y >= 0.0 && self.x + self.y <= 1.0 && self.luminance >= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XyzColor {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl XyzColor {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }
}

/// CIELAB coordinates: lightness plus the two opponent axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabColor {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl LabColor {
    pub const fn new(l: f64, a: f64, b: f64) -> Self {
        Self { l, a, b }
    }
}

/// CIELAB in cylindrical form. Hue is in degrees, `[0, 360)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LchColor {
    pub l: f64,
    pub c: f64,
    pub h: f64,
}

impl LchColor {
    /// Back to Cartesian CIELAB.
    pub fn to_lab(&self) -> LabColor {
        let rad = self.h.to_radians();
        LabColor::new(self.l, self.c * rad.cos(), self.c * rad.sin())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SrgbColor {
    pub r: u8,
    pub g: u8,
    pub b: u8,
    /// True when at least one channel had to be clamped into gamut.
    pub clamped: bool,
}

impl SrgbColor {
    pub fn hex(&self) -> String {
        format!("#{:02X}{:02X}{:02X}", self.r, self.g, self.b)
    }
}

impl fmt::Display for SrgbColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

/// Reference white, given as chromaticity with `Y = 100`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WhitePoint {
    pub x: f64,
    pub y: f64,
    #[serde(rename = "Y")]
    pub luminance: f64,
}

impl WhitePoint {
    /// CIE Illuminant D65, 2° observer, pinned to the tristimulus
    /// (95.047, 100, 108.883).
    pub const D65: WhitePoint = WhitePoint {
        x: 95.047 / (95.047 + 100.0 + 108.883),
        y: 100.0 / (95.047 + 100.0 + 108.883),
        luminance: 100.0,
    };

    pub fn from_tristimulus(w: XyzColor) -> Self {
        let sum = w.x + w.y + w.z;
        WhitePoint {
            x: w.x / sum,
            y: w.y / sum,
            luminance: w.y,
        }
    }

    pub fn tristimulus(&self) -> XyzColor {
        xyy_to_xyz(XyYColor::new(self.x, self.y, self.luminance))
    }
}

impl Default for WhitePoint {
    fn default() -> Self {
        Self::D65
    }
}

const EPSILON_LAB: f64 = 216.0 / 24389.0; // (6/29)^3
const KAPPA_LAB: f64 = 24389.0 / 27.0; // (29/3)^3
const DELTA_LAB: f64 = 6.0 / 29.0;

pub fn xyy_to_xyz(c: XyYColor) -> XyzColor {
    if c.y == 0.0 {
        return XyzColor::new(0.0, 0.0, 0.0);
    }
    let scale = c.luminance / c.y;
    XyzColor::new(c.x * scale, c.luminance, (1.0 - c.x - c.y) * scale)
}

/// Inverse of [`xyy_to_xyz`]. Black takes the white point's chromaticity.
pub fn xyz_to_xyy(c: XyzColor, w: WhitePoint) -> XyYColor {
    let sum = c.x + c.y + c.z;
    if sum == 0.0 {
        return XyYColor::new(w.x, w.y, 0.0);
    }
    XyYColor::new(c.x / sum, c.y / sum, c.y)
}

fn lab_f(t: f64) -> f64 {
    if t > EPSILON_LAB {
        t.cbrt()
    } else {
        (KAPPA_LAB * t + 16.0) / 116.0
    }
}

fn lab_f_inv(f: f64) -> f64 {
    if f > DELTA_LAB {
        f * f * f
    } else {
        (116.0 * f - 16.0) / KAPPA_LAB
    }
}

pub fn xyz_to_lab(c: XyzColor, w: WhitePoint) -> LabColor {
    let wt = w.tristimulus();
    let fx = lab_f(c.x / wt.x);
    let fy = lab_f(c.y / wt.y);
    let fz = lab_f(c.z / wt.z);
    LabColor::new(116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz))
}

pub fn lab_to_xyz(c: LabColor, w: WhitePoint) -> XyzColor {
    let wt = w.tristimulus();
    let fy = (c.l + 16.0) / 116.0;
    let fx = fy + c.a / 500.0;
    let fz = fy - c.b / 200.0;
    XyzColor::new(
        wt.x * lab_f_inv(fx),
        wt.y * lab_f_inv(fy),
        wt.z * lab_f_inv(fz),
    )
}

pub fn xyy_to_lab(c: XyYColor, w: WhitePoint) -> LabColor {
    xyz_to_lab(xyy_to_xyz(c), w)
}

/// Map an angle in degrees onto `[0, 360)`.
pub fn normalize_degrees(deg: f64) -> f64 {
    let h = deg.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if h >= 360.0 {
        0.0
    } else {
        h
    }
}

pub fn lab_to_lch(c: LabColor) -> LchColor {
    let chroma = c.a.hypot(c.b);
    let h = if chroma == 0.0 {
        0.0
    } else {
        normalize_degrees(c.b.atan2(c.a).to_degrees())
    };
    LchColor {
        l: c.l,
        c: chroma,
        h,
    }
}

// IEC 61966-2-1 XYZ -> linear sRGB (D65), on the 0–1 scale.
const XYZ_TO_LINEAR_SRGB: [[f64; 3]; 3] = [
    [3.2406, -1.5372, -0.4986],
    [-0.9689, 1.8758, 0.0415],
    [0.0557, -0.2040, 1.0570],
];

fn srgb_encode(linear: f64) -> f64 {
    if linear <= 0.003_130_8 {
        12.92 * linear
    } else {
        1.055 * linear.powf(1.0 / 2.4) - 0.055
    }
}

/// Gamma-encoded sRGB channels on the 0–1 scale, before any clamping.
pub fn lab_to_encoded_srgb(c: LabColor, w: WhitePoint) -> [f64; 3] {
    let xyz = lab_to_xyz(c, w);
    let v = [xyz.x / 100.0, xyz.y / 100.0, xyz.z / 100.0];
    let mut out = [0.0; 3];
    for (o, row) in out.iter_mut().zip(XYZ_TO_LINEAR_SRGB.iter()) {
        let linear = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
        *o = srgb_encode(linear);
    }
    out
}

/// Quantize one encoded channel with round-half-up. Returns the code and
/// whether clamping changed it.
fn quantize(v: f64) -> (u8, bool) {
    let code = (v * 255.0 + 0.5).floor();
    if code < 0.0 {
        (0, true)
    } else if code > 255.0 {
        (255, true)
    } else {
        (code as u8, false)
    }
}

pub fn lab_to_srgb(c: LabColor, w: WhitePoint) -> SrgbColor {
    let enc = lab_to_encoded_srgb(c, w);
    let (r, cr) = quantize(enc[0]);
    let (g, cg) = quantize(enc[1]);
    let (b, cb) = quantize(enc[2]);
    SrgbColor {
        r,
        g,
        b,
        clamped: cr || cg || cb,
    }
}

/// `#RRGGBB` for a CIELAB color, plus the gamut-clamping flag.
///
/// A channel counts as clamped only when clamping changes its 8-bit code, so
/// values within half a code step of the gamut boundary are not flagged.
pub fn lab_to_hex(c: LabColor, w: WhitePoint) -> (String, bool) {
    let s = lab_to_srgb(c, w);
    (s.hex(), s.clamped)
}

pub fn in_srgb_gamut(c: LabColor, w: WhitePoint) -> bool {
    !lab_to_srgb(c, w).clamped
}

/// CIE76 color difference.
pub fn delta_e_76(p: LabColor, q: LabColor) -> f64 {
    let dl = p.l - q.l;
    let da = p.a - q.a;
    let db = p.b - q.b;
    (dl * dl + da * da + db * db).sqrt()
}

/// Parse a strict `#RRGGBB` hexcode (either case).
pub fn parse_hex(hex: &str) -> Option<(u8, u8, u8)> {
    let digits = hex.strip_prefix('#')?;
    if digits.len() != 6 || !digits.bytes().all(|b| b.is_ascii_hexdigit()) {
        return None;
    }
    let ch = |i: usize| u8::from_str_radix(&digits[i..i + 2], 16).ok();
    Some((ch(0)?, ch(2)?, ch(4)?))
}
