//! Built-in presets: the reference link and one scenario per figure.

pub const PAPER_2022: &str = include_str!("../presets/paper-2022.conf");

/// `(name, file text)` of every built-in preset.
pub const BUILTIN: &[(&str, &str)] = &[
    ("paper-2022", PAPER_2022),
    ("fig5a", include_str!("../presets/fig5a.conf")),
    ("fig5b", include_str!("../presets/fig5b.conf")),
    ("fig6", include_str!("../presets/fig6.conf")),
    ("fig7", include_str!("../presets/fig7.conf")),
    ("fig8", include_str!("../presets/fig8.conf")),
    ("fig9", include_str!("../presets/fig9.conf")),
    ("fig10", include_str!("../presets/fig10.conf")),
];

pub fn source(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    BUILTIN.iter().map(|(n, _)| *n)
}

/// First comment paragraph of a preset, joined into one line.
pub fn summary(text: &str) -> String {
    text.lines()
        .map_while(|l| l.strip_prefix('#'))
        .map(str::trim)
        .take_while(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{load_preset, parse_config};
    use rbswipt_core::{LinkModel, Parameter};

    #[test]
    fn reference_file_matches_the_built_in_model() {
        let config = parse_config(PAPER_2022).unwrap();
        assert_eq!(config.model, LinkModel::paper_2022());
        assert_eq!(config.sweep, Default::default());
    }

    #[test]
    fn reference_file_sets_every_key() {
        for p in Parameter::ALL {
            if matches!(p, Parameter::Lt | Parameter::F2) {
                continue;
            }
            let prefix = format!("{} =", p.key());
            assert!(
                PAPER_2022.lines().any(|l| l.trim_start().starts_with(&prefix)),
                "{p} missing"
            );
        }
    }

    #[test]
    fn every_preset_loads() {
        for name in names() {
            let c = load_preset(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(c.preset, name);
            assert!(!summary(source(name).unwrap()).is_empty());
        }
        assert_eq!(load_preset("fig8").unwrap().model.gain.l, 0.1e-6);
        assert_eq!(load_preset("fig9").unwrap().model.p_in, 100.0);
    }
}
