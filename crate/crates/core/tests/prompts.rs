use chroma_assoc::colorlib::load_uw71;
use chroma_assoc::estimator::{build_prompt, parse_trial_prompt, RatingProtocol, SYSTEM_PROMPT};
use proptest::prelude::*;

const SINGLE: &str = include_str!("golden/single_apple_FFFFFF.txt");
const ANCHORED: &str = include_str!("golden/anchored_apple_FFFFFF.txt");

#[test]
fn single_prompt_matches_golden() {
    let lib = load_uw71().unwrap();
    let p = build_prompt(
        &RatingProtocol::single_deterministic("m"),
        "apple",
        "#FFFFFF",
        &lib,
    )
    .unwrap();
    assert_eq!(p.user, SINGLE);
    assert_eq!(p.system, SYSTEM_PROMPT);
}

#[test]
fn anchored_prompt_matches_golden() {
    let lib = load_uw71().unwrap();
    let p = build_prompt(
        &RatingProtocol::anchored_deterministic("m"),
        "apple",
        "#FFFFFF",
        &lib,
    )
    .unwrap();
    assert_eq!(p.user, ANCHORED);
}

#[test]
fn stochastic_prompt_equals_single() {
    let lib = load_uw71().unwrap();
    let a = build_prompt(
        &RatingProtocol::single_deterministic("m"),
        "apple",
        "#FFFFFF",
        &lib,
    )
    .unwrap();
    let b = build_prompt(
        &RatingProtocol::stochastic_averaged("m"),
        "apple",
        "#FFFFFF",
        &lib,
    )
    .unwrap();
    assert_eq!(a, b);
}

proptest! {
    #[test]
    fn prompt_is_stable_and_parses_back(
        concept in "[a-z]{1,12}( [a-z]{1,8})?",
        rgb in any::<[u8; 3]>(),
        anchored in any::<bool>(),
    ) {
        let lib = load_uw71().unwrap();
        let hex = format!("#{:02X}{:02X}{:02X}", rgb[0], rgb[1], rgb[2]);
        let protocol = if anchored {
            RatingProtocol::anchored_deterministic("m")
        } else {
            RatingProtocol::single_deterministic("m")
        };
        let a = build_prompt(&protocol, &concept, &hex, &lib).unwrap();
        let b = build_prompt(&protocol, &concept, &hex, &lib).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(parse_trial_prompt(&a.user), Some((concept.clone(), hex.clone())));
        let template = if anchored { ANCHORED } else { SINGLE };
        let expected = template
            .replace("`apple", &format!("`{concept}"))
            .replace("Color: #FFFFFF", &format!("Color: {hex}"));
        prop_assert_eq!(a.user, expected);
    }
}
