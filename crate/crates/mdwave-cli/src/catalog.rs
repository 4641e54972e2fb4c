//! Scenarios shipped inside the binary.

use crate::scenario::Scenario;

const BUNDLED: &[(&str, &str)] = &[
    ("01-mode-block", include_str!("../scenarios/01-mode-block.toml")),
    ("02-duhamel-oracle", include_str!("../scenarios/02-duhamel-oracle.toml")),
    ("03-jump", include_str!("../scenarios/03-jump.toml")),
    ("04-ledger-order", include_str!("../scenarios/04-ledger-order.toml")),
    ("05-atom-energy", include_str!("../scenarios/05-atom-energy.toml")),
    ("06-linear-decay", include_str!("../scenarios/06-linear-decay.toml")),
    ("07-delta-approximation", include_str!("../scenarios/07-delta-approximation.toml")),
    ("08-tail-variation", include_str!("../scenarios/08-tail-variation.toml")),
    ("09-dissipativity", include_str!("../scenarios/09-dissipativity.toml")),
    ("10-translation", include_str!("../scenarios/10-translation.toml")),
    ("11-ode-pathology", include_str!("../scenarios/11-ode-pathology.toml")),
    ("12-splitting", include_str!("../scenarios/12-splitting.toml")),
    ("13-cascade", include_str!("../scenarios/13-cascade.toml")),
    ("14-kato-ponce", include_str!("../scenarios/14-kato-ponce.toml")),
    ("15-smoke-3d", include_str!("../scenarios/15-smoke-3d.toml")),
    ("decay", include_str!("../scenarios/decay.toml")),
    ("ode-demo", include_str!("../scenarios/ode-demo.toml")),
    ("pullback", include_str!("../scenarios/pullback.toml")),
    ("gronwall", include_str!("../scenarios/gronwall.toml")),
    ("weak-star", include_str!("../scenarios/weak-star.toml")),
    ("strichartz-envelope", include_str!("../scenarios/strichartz-envelope.toml")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

/// Parsed bundled scenarios in catalog order.
pub fn scenarios() -> Vec<Scenario> {
    BUNDLED.iter().map(|(n, t)| Scenario::parse(t).unwrap_or_else(|e| panic!("bundled scenario {n}: {e:?}"))).collect()
}

/// One line per bundled scenario: name, experiment, criteria, description.
pub fn listing() -> String {
    let mut s = String::new();
    for sc in scenarios() {
        let crit: Vec<String> = sc.criteria.iter().map(u32::to_string).collect();
        let crit = if crit.is_empty() { "-".to_string() } else { crit.join(",") };
        s.push_str(&format!("{:<24} {:<20} {:<8} {}\n", sc.name, sc.experiment.tag(), crit, sc.description));
    }
    s
}
