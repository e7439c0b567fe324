//! Scenarios shipped with the binary, addressable by bare name.

pub const SCENARIOS: &[(&str, &str)] = &[
    ("unit-cosmos", include_str!("../../../scenarios/unit-cosmos.scn")),
    ("gp-dual-numbers", include_str!("../../../scenarios/gp-dual-numbers.scn")),
    ("gp-quiver", include_str!("../../../scenarios/gp-quiver.scn")),
    ("corrupted-composition", include_str!("../../../scenarios/corrupted-composition.scn")),
    ("chain-change-of-base", include_str!("../../../scenarios/chain-change-of-base.scn")),
];

pub fn get(name: &str) -> Option<&'static str> {
    SCENARIOS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}
