//! Scenario files shipped with the tool, compiled into the binary.

/// `(name, document)` pairs, sorted by name.
pub const SCENARIOS: &[(&str, &str)] = &[
    ("battery", include_str!("../../../scenarios/battery.json")),
    ("constant_10", include_str!("../../../scenarios/constant_10.json")),
    ("dependent_exp_decay", include_str!("../../../scenarios/dependent_exp_decay.json")),
    ("dependent_exp_linear", include_str!("../../../scenarios/dependent_exp_linear.json")),
    ("dependent_lognormal_decay", include_str!("../../../scenarios/dependent_lognormal_decay.json")),
    ("dependent_lognormal_linear", include_str!("../../../scenarios/dependent_lognormal_linear.json")),
    ("exp_decay_100", include_str!("../../../scenarios/exp_decay_100.json")),
    ("linear_50", include_str!("../../../scenarios/linear_50.json")),
    ("lognormal_constant_50", include_str!("../../../scenarios/lognormal_constant_50.json")),
    ("lognormal_decay_150", include_str!("../../../scenarios/lognormal_decay_150.json")),
    ("lognormal_linear_60", include_str!("../../../scenarios/lognormal_linear_60.json")),
    ("mailbox", include_str!("../../../scenarios/mailbox.json")),
    ("schedule_gamma_arithmetic", include_str!("../../../scenarios/schedule_gamma_arithmetic.json")),
    ("schedule_gamma_geometric", include_str!("../../../scenarios/schedule_gamma_geometric.json")),
    ("schedule_weibull_growing", include_str!("../../../scenarios/schedule_weibull_growing.json")),
    ("schedule_weibull_shrinking", include_str!("../../../scenarios/schedule_weibull_shrinking.json")),
];

/// Document of the bundled scenario `name`.
pub fn bundled(name: &str) -> Option<&'static str> {
    SCENARIOS.iter().find(|(n, _)| *n == name).map(|(_, doc)| *doc)
}
