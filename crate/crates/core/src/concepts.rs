//! The 70 concepts rated in the study, grouped into 14 categories of five,
//! with the number of human participants per category.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConceptCategory {
    pub name: &'static str,
    pub concepts: [&'static str; 5],
    pub participants: usize,
}

pub const CATEGORIES: [ConceptCategory; 14] = [
    cat(
        "Activities",
        ["driving", "eating", "sleeping", "leisure", "working"],
        52,
    ),
    cat("Animals", ["bear", "bird", "lion", "frog", "fish"], 45),
    cat(
        "Automobiles",
        ["airplane", "car", "boat", "truck", "train"],
        51,
    ),
    cat("Clothes", ["dress", "pants", "shirt", "socks", "shoes"], 48),
    cat(
        "Directions",
        ["above", "below", "beside", "near", "far"],
        44,
    ),
    cat(
        "Emotions",
        ["angry", "disgust", "fearful", "happy", "sad"],
        50,
    ),
    cat(
        "Fruits",
        ["blueberry", "lemon", "mango", "strawberry", "watermelon"],
        46,
    ),
    cat(
        "Fruits2",
        ["apple", "banana", "cherry", "grape", "peach"],
        49,
    ),
    cat(
        "Properties",
        ["comfort", "efficiency", "reliability", "safety", "speed"],
        50,
    ),
    cat("Scenes", ["beach", "field", "ocean", "sky", "sunset"], 45),
    cat("Times of Day", ["dawn", "day", "dusk", "noon", "night"], 46),
    cat("Values", ["evil", "greed", "justice", "love", "peace"], 50),
    cat(
        "Vegetables",
        ["carrot", "celery", "corn", "eggplant", "mushroom"],
        52,
    ),
    cat(
        "Weather",
        ["blizzard", "drought", "hurricane", "lightning", "sandstorm"],
        52,
    ),
];

const fn cat(
    name: &'static str,
    concepts: [&'static str; 5],
    participants: usize,
) -> ConceptCategory {
    ConceptCategory {
        name,
        concepts,
        participants,
    }
}

/// All concepts in category order.
pub fn all_concepts() -> Vec<&'static str> {
    CATEGORIES.iter().flat_map(|c| c.concepts).collect()
}

pub fn category(name: &str) -> Option<&'static ConceptCategory> {
    CATEGORIES
        .iter()
        .find(|c| c.name.eq_ignore_ascii_case(name))
}

pub fn category_of(concept: &str) -> Option<&'static ConceptCategory> {
    CATEGORIES
        .iter()
        .find(|c| c.concepts.iter().any(|x| x.eq_ignore_ascii_case(concept)))
}
