//! Named example scenarios shipped with the tool.

use super::scenario::{parse_scenario, Scenario};
use crate::error::{Error, Result};

pub const BUILTINS: &[(&str, &str)] = &[
    ("three_conics", include_str!("../../../../scenarios/three_conics.json")),
    ("quang_sharp_transcendental", include_str!("../../../../scenarios/quang_sharp_transcendental.json")),
    ("trivial_valuation_remark", include_str!("../../../../scenarios/trivial_valuation_remark.json")),
    ("tangent_line_M2", include_str!("../../../../scenarios/tangent_line_M2.json")),
];

pub fn builtin_text(name: &str) -> Result<&'static str> {
    BUILTINS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))
}

pub fn builtin(name: &str) -> Result<Scenario> {
    parse_scenario(builtin_text(name)?)
}

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|(n, _)| *n)
}
