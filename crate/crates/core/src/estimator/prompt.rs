use crate::colorlib::ColorLibrary;
use crate::colorspace::parse_hex;

use super::{EstimatorError, RatingProtocol};

pub const SYSTEM_PROMPT: &str = "You are an expert on color-concept associations.";

pub const TASK_DESCRIPTION: &str = "I will give you the hexcode for a color and a concept word. \
Rate on a continuous scale from 0 to 1, using 3 decimal places, how associated the color is with the concept.";

pub const TRIAL_START: &str = "Let's do the rating task \u{2014}";

pub const ANSWER_LINE: &str = "Answer with only the number:";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prompt {
    pub system: String,
    pub user: String,
}

fn anchoring_preamble(concept: &str, hexes: &[&str]) -> String {
    format!(
        "The concept is `{concept}'.\n\
         Before rating, here's the set of all the colors {}.\n\
         Think of which color you associate most with `{concept}.' That color should get a rating of 1.\n\
         Now think of which color you associated least with `{concept}.'\n\
         That color should get a rating of 0. Now let's do the rating task.",
        hexes.join(", ")
    )
}

fn validate_concept(concept: &str) -> Result<(), EstimatorError> {
    if concept.trim().is_empty() || concept.chars().any(char::is_control) {
        return Err(EstimatorError::InvalidInput(format!(
            "concept {concept:?} must be non-empty single-line text"
        )));
    }
    Ok(())
}

pub fn build_prompt(
    protocol: &RatingProtocol,
    concept: &str,
    hex: &str,
    library: &ColorLibrary,
) -> Result<Prompt, EstimatorError> {
    validate_concept(concept)?;
    if parse_hex(hex).is_none() {
        return Err(EstimatorError::InvalidInput(format!(
            "hex {hex:?} is not of the form #RRGGBB"
        )));
    }
    let mut lines = vec![TASK_DESCRIPTION.to_string()];
    if protocol.anchoring {
        lines.push(anchoring_preamble(concept, &library.hexes()));
    }
    lines.push(TRIAL_START.to_string());
    lines.push(format!("Concept: `{concept}'"));
    lines.push(format!("Color: {hex}"));
    lines.push(ANSWER_LINE.to_string());
    Ok(Prompt {
        system: protocol.system_prompt.clone(),
        user: lines.join("\n"),
    })
}

/// Recover `(concept, hex)` from a user prompt produced by [`build_prompt`].
/// Returns `None` when the prompt does not follow the template.
pub fn parse_trial_prompt(user: &str) -> Option<(String, String)> {
    let lines: Vec<&str> = user.lines().collect();
    if lines.first() != Some(&TASK_DESCRIPTION) || lines.len() < 5 {
        return None;
    }
    let tail = &lines[lines.len() - 4..];
    if tail[0] != TRIAL_START || tail[3] != ANSWER_LINE {
        return None;
    }
    let concept = tail[1].strip_prefix("Concept: `")?.strip_suffix('\'')?;
    let hex = tail[2].strip_prefix("Color: ")?;
    validate_concept(concept).ok()?;
    parse_hex(hex)?;
    match lines.len() {
        5 => {}
        10 => {
            let preamble = lines[1..6].join("\n");
            let hexes = preamble
                .lines()
                .nth(1)?
                .strip_prefix("Before rating, here's the set of all the colors ")?
                .strip_suffix('.')?;
            let hexes: Vec<&str> = hexes.split(", ").collect();
            if hexes.iter().any(|h| parse_hex(h).is_none()) {
                return None;
            }
            if preamble != anchoring_preamble(concept, &hexes) {
                return None;
            }
        }
        _ => return None,
    }
    Some((concept.to_string(), hex.to_string()))
}
