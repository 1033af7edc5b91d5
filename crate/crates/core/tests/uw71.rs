use std::collections::BTreeMap;

use chroma_assoc::colorlib::{load_uw71, uw71_printed_rows, UW71_ERRATA};
use chroma_assoc::colorspace::{delta_e_76, lab_to_hex, xyy_to_lab, WhitePoint};

// Computed from the tabulated Lab values with an independent numpy
// implementation of Lab -> XYZ -> sRGB (D65, IEC 61966-2-1 matrix).
const HEXES: [&str; 71] = [
    "#2F6EF6", "#3518AD", "#8558F4", "#B62EF2", "#077ACC", "#2E3086", "#746BCA", "#600B84",
    "#A553C8", "#CD26C7", "#4DC7E8", "#1C3D61", "#5E78A1", "#A0BAE6", "#512D5F", "#90689F",
    "#D5A9E4", "#72005E", "#B8509E", "#DB1F9D", "#39F6E0", "#3B8378", "#7EC6BA", "#A2EADE",
    "#000000", "#3B3B3B", "#777777", "#B9B9B9", "#FFFFFF", "#DDDDDD", "#5E2B3A", "#A06776",
    "#E6A8B7", "#C34F74", "#E31B73", "#4BCF8E", "#73F5B0", "#184415", "#55824D", "#96C58C",
    "#BAEAAF", "#443B14", "#83764C", "#C7B88B", "#EDDCAD", "#632B14", "#A8664B", "#F1A78A",
    "#C94E4B", "#E81B4B", "#0E8A19", "#67CF5C", "#8CF47E", "#608219", "#A3C55B", "#C8E97D",
    "#897618", "#D0B85A", "#F7DB7C", "#AC6619", "#F7A75A", "#CC4F1B", "#EA1D1E", "#3EFE44",
    "#73CF10", "#9AF443", "#AAC510", "#D0E942", "#D5B811", "#FCDB42", "#FBA714",
];

#[test]
fn hexcodes_match_frozen_oracle() {
    let lib = load_uw71().unwrap();
    assert_eq!(lib.len(), 71);
    for (c, want) in lib.colors.iter().zip(HEXES) {
        assert_eq!(c.hex, want, "color {}", c.index);
        assert!(!c.clamped, "color {} clamped", c.index);
    }
}

#[test]
fn xyy_reproduces_tabulated_lab() {
    let lib = load_uw71().unwrap();
    for c in &lib.colors {
        let lab = xyy_to_lab(c.xyy, WhitePoint::D65);
        for (got, want) in [(lab.l, c.lab.l), (lab.a, c.lab.a), (lab.b, c.lab.b)] {
            assert!(
                (got - want).abs() <= 0.01,
                "color {}: {got} vs {want}",
                c.index
            );
        }
    }
}

#[test]
fn printed_row_seven_is_off_and_erratum_fixes_it() {
    let printed = uw71_printed_rows();
    let (_, _, xyy, lab) = printed[6];
    assert_eq!(xyy.luminance, 8.419);
    let raw = xyy_to_lab(xyy, WhitePoint::D65);
    assert!((raw.l - lab.l).abs() > 10.0);
    assert_eq!(UW71_ERRATA.len(), 1);
    let lib = load_uw71().unwrap();
    assert_eq!(lib.colors[6].xyy.luminance, 18.419);
}

#[test]
fn lightness_levels_and_multiplicities() {
    let lib = load_uw71().unwrap();
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for c in &lib.colors {
        assert_eq!(c.lab.l.fract(), 0.0);
        *counts.entry(c.lab.l as i64).or_default() += 1;
    }
    let got: Vec<(i64, usize)> = counts.into_iter().collect();
    assert_eq!(
        got,
        [(0, 1), (25, 11), (50, 27), (75, 18), (88, 13), (100, 1)]
    );
    for (_, sp, _, _) in uw71_printed_rows() {
        assert!((1..=71).contains(&sp));
    }
}

#[test]
fn library_round_trips_through_hex_and_lab() {
    let lib = load_uw71().unwrap();
    for c in &lib.colors {
        let (hex, _) = lab_to_hex(c.lab, lib.white_point);
        assert_eq!(hex, c.hex);
        assert!(delta_e_76(c.lch.to_lab(), c.lab) < 1e-9);
        assert!((0.0..360.0).contains(&c.lch.h));
    }
    assert!(lib.duplicate_hexes().is_empty());
}
