//! Shipped example systems, one per construction exercised by the test suites.
//!
//! * `mu4` — scale-4, digits `{0,2}`, frequencies `{0,1}`: the spectral Cantor
//!   measure whose exponentials `e_lambda`, `lambda = sum 4^k l_k`,
//!   `l_k in {0,1}`, form an orthonormal basis.
//! * `l03` — same IFS with frequencies `{0,3}`: two minimal sets `{0}` and
//!   `{-1}`; the union of the two atom families is an orthonormal basis.
//! * `ex411_full` — the 2-d scale-(4,2) system with a 4x4 unitary coefficient
//!   matrix (`xi = i`) whose reduction to the first axis has a cycle point
//!   with two cycle words.
//! * `ex411_reduced` — that 1-d reduction as a digit-independent system with
//!   `alpha = (1, (1+i)/2, 0, (1-i)/2)`.
//! * `ex421` — the 2-d system with an infinite minimal invariant set on the
//!   line `y = -2/3`.
//! * `remmc_walk` — the two-vertex non-injective walk where the word `1010`
//!   ends in one and in two cycle words at once.
//! * `walsh_classical` — the 2x2 matrix `[[1,1],[1,-1]]` generating the
//!   classical Walsh basis of `L^2[0,1]`.
//! * `walsh_isometry_3x2` — a 3x2 isometry with complex third row, a genuinely
//!   overcomplete Parseval case.

use crate::config::{FilterConfig, WalkConfig, WalshConfig};
use crate::frames::WalshSystem;
use crate::{FilterSystem64, WalkGraph64};

pub const MU4_JSON: &str = include_str!("../fixtures/mu4.json");
pub const L03_JSON: &str = include_str!("../fixtures/l03.json");
pub const EX411_FULL_JSON: &str = include_str!("../fixtures/ex411_full.json");
pub const EX411_REDUCED_JSON: &str = include_str!("../fixtures/ex411_reduced.json");
pub const EX421_JSON: &str = include_str!("../fixtures/ex421.json");
pub const REMMC_WALK_JSON: &str = include_str!("../fixtures/remmc_walk.json");
pub const WALSH_CLASSICAL_JSON: &str = include_str!("../fixtures/walsh_classical.json");
pub const WALSH_ISOMETRY_3X2_JSON: &str = include_str!("../fixtures/walsh_isometry_3x2.json");

/// Name/content pairs of every shipped fixture file.
pub const ALL: &[(&str, &str)] = &[
    ("mu4.json", MU4_JSON),
    ("l03.json", L03_JSON),
    ("ex411_full.json", EX411_FULL_JSON),
    ("ex411_reduced.json", EX411_REDUCED_JSON),
    ("ex421.json", EX421_JSON),
    ("remmc_walk.json", REMMC_WALK_JSON),
    ("walsh_classical.json", WALSH_CLASSICAL_JSON),
    ("walsh_isometry_3x2.json", WALSH_ISOMETRY_3X2_JSON),
];

fn filter(json: &str) -> FilterSystem64 {
    FilterConfig::from_json(json)
        .expect("fixture parses")
        .build()
        .expect("fixture builds")
}

pub fn mu4() -> FilterSystem64 {
    filter(MU4_JSON)
}

pub fn l03() -> FilterSystem64 {
    filter(L03_JSON)
}

pub fn ex411_full() -> FilterSystem64 {
    filter(EX411_FULL_JSON)
}

pub fn ex411_reduced() -> FilterSystem64 {
    filter(EX411_REDUCED_JSON)
}

pub fn ex421() -> FilterSystem64 {
    filter(EX421_JSON)
}

pub fn remmc_walk() -> WalkGraph64 {
    WalkConfig::from_json(REMMC_WALK_JSON)
        .expect("fixture parses")
        .build()
        .expect("fixture builds")
}

pub fn walsh_classical() -> WalshSystem<f64> {
    WalshSystem::new(
        WalshConfig::from_json(WALSH_CLASSICAL_JSON)
            .expect("fixture parses")
            .rows(),
    )
    .expect("fixture builds")
}

pub fn walsh_isometry_3x2() -> WalshSystem<f64> {
    WalshSystem::new(
        WalshConfig::from_json(WALSH_ISOMETRY_3X2_JSON)
            .expect("fixture parses")
            .rows(),
    )
    .expect("fixture builds")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::FilterConfig;

    #[test]
    fn all_fixtures_parse_and_round_trip() {
        for (name, json) in ALL {
            if name.starts_with("walsh") {
                let cfg = WalshConfig::from_json(json).unwrap();
                assert_eq!(WalshConfig::from_json(&cfg.to_json()).unwrap(), cfg);
            } else if name.contains("walk") {
                let cfg = WalkConfig::from_json(json).unwrap();
                assert_eq!(WalkConfig::from_json(&cfg.to_json()).unwrap(), cfg);
                cfg.build::<f64>().unwrap();
            } else {
                let cfg = FilterConfig::from_json(json).unwrap();
                assert_eq!(
                    FilterConfig::from_json(&cfg.to_json()).unwrap(),
                    cfg,
                    "{name}"
                );
                cfg.build::<f64>().unwrap();
            }
        }
    }
}
