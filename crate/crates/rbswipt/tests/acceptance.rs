//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::fmt::Debug;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config as RunnerConfig, TestCaseError, TestRunner};

use rbswipt::config::load_preset;
use rbswipt_core::gain_power::{beam_power, saturation_gain};
use rbswipt_core::ray_optics::{
    free_space, one_trip_matrix, reflector_from_curvature, reflector_matrix, spot_radius_on_gain, thin_lens,
    tim_matrix, RayTransferMatrix, RayVector, ResonatorGeometry,
};
use rbswipt_core::receiver::split_beam;
use rbswipt_core::search::Sense;
use rbswipt_core::sweep::{find_optimum, reduce_max, run_sweep, Axis, SweepSpec};
use rbswipt_core::{LinkModel, Parameter, Quantity};

type Outcome = Result<String, String>;

fn preset(name: &str) -> LinkModel {
    load_preset(name).unwrap_or_else(|e| panic!("preset {name}: {e}")).model
}

/// Largest spot radius over stable link distances in [2, 10] m.
fn max_spot_over_distance(base: &LinkModel, compression: f64) -> Option<f64> {
    let spec = SweepSpec::new("spot", vec![Axis::linear(Parameter::D3, 2.0, 10.0, 121).unwrap()])
        .unwrap()
        .with_override(Parameter::Compression, compression);
    let sweep = run_sweep(base, &spec).unwrap();
    reduce_max(&sweep, Quantity::SpotRadius, 0).unwrap().y[0]
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn beam_compression() -> Outcome {
    let start = Instant::now();
    let base = preset("paper-2022");
    let w1 = max_spot_over_distance(&base, 1.0).ok_or("M = 1 has no stable distance")?;
    let w12 = max_spot_over_distance(&base, 12.0).ok_or("M = 12 has no stable distance")?;
    let elapsed = start.elapsed();
    let ratio = w1 / w12;
    verdict(
        (w1 - 1.2e-3).abs() <= 0.15 * 1.2e-3 && w12 <= 0.15e-3 && ratio >= 8.0 && elapsed < Duration::from_secs(1),
        format!(
            "omega_g(M=1) = {:.3} mm, omega_g(M=12) = {:.3} mm, ratio {ratio:.1}, {:.0} ms",
            w1 * 1e3,
            w12 * 1e3,
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn spot_over_distance() -> Outcome {
    let base = preset("fig5b");
    let w1 = max_spot_over_distance(&base, 1.0).ok_or("M = 1 has no stable distance")?;
    let mut worst_high = 0.0f64;
    for m in [10.0, 11.0, 12.0, 13.0, 14.0] {
        let w = max_spot_over_distance(&base, m).ok_or(format!("M = {m} has no stable distance"))?;
        worst_high = worst_high.max(w);
    }
    verdict(
        worst_high < 0.3e-3 && w1 > 0.45e-3,
        format!(
            "max omega_g: M=1 {:.3} mm, M>=10 at most {:.3} mm",
            w1 * 1e3,
            worst_high * 1e3
        ),
    )
}

fn optimal_reflectivity() -> Outcome {
    let spec = SweepSpec::new("r2", vec![Axis::linear(Parameter::R2, 0.8, 0.999, 200).unwrap()])
        .unwrap()
        .with_override(Parameter::PIn, 100.0);
    let opt = find_optimum(&preset("fig8"), &spec, Quantity::PBeam, Sense::Maximize).map_err(|e| e.to_string())?;
    let r2 = opt.parameters[0].1;
    verdict(
        (0.88..=0.97).contains(&r2),
        format!("argmax r2 = {r2:.4} (P_beam = {:.2} W at 100 W)", opt.value),
    )
}

/// Design point maximising beam power at 150 W over r2 × thickness.
fn design_point() -> Result<LinkModel, String> {
    let spec = SweepSpec::new(
        "design",
        vec![
            Axis::linear(Parameter::R2, 0.7, 0.97, 55).unwrap(),
            Axis::linear(Parameter::L, 0.05e-6, 3e-6, 60).unwrap(),
        ],
    )
    .unwrap()
    .with_override(Parameter::PIn, 150.0);
    let base = preset("paper-2022");
    let opt = find_optimum(&base, &spec, Quantity::PBeam, Sense::Maximize).map_err(|e| e.to_string())?;
    let mut model = base.with(Parameter::PIn, 150.0).map_err(|e| e.to_string())?;
    for (p, v) in opt.parameters {
        model.set(p, v).map_err(|e| e.to_string())?;
    }
    Ok(model)
}

fn design_beam_power(design: &LinkModel) -> Outcome {
    let r2 = design.get(Parameter::R2);
    let l = design.get(Parameter::L);
    let op = design.evaluate().map_err(|e| e.to_string())?;
    let (p, eta) = (op.get(Quantity::PBeam), op.get(Quantity::EtaB));
    verdict(
        (0.7..=0.97).contains(&r2) && (0.05e-6..=3e-6).contains(&l) && p >= 50.0 && eta >= 0.32,
        format!("r2 = {r2:.4}, l = {:.3} um: P_beam = {p:.2} W, eta_b = {eta:.4}", l * 1e6),
    )
}

fn design_harvest(design: &LinkModel) -> Outcome {
    let op = design.with(Parameter::Mu, 0.99).map_err(|e| e.to_string())?.evaluate().map_err(|e| e.to_string())?;
    let (p, eta) = (op.get(Quantity::PEOut), op.get(Quantity::EtaE));
    verdict(
        (p - 16.0).abs() <= 0.2 * 16.0 && (eta - 0.11).abs() <= 0.02,
        format!("P_Eout = {p:.2} W, eta_E = {eta:.4}"),
    )
}

fn design_capacity(design: &LinkModel) -> Outcome {
    let at = |p_in: f64| -> Result<f64, String> {
        let m = design
            .with(Parameter::Mu, 0.99)
            .and_then(|m| m.with(Parameter::PIn, p_in))
            .map_err(|e| e.to_string())?;
        Ok(m.evaluate().map_err(|e| e.to_string())?.get(Quantity::CTilde))
    };
    let c100 = at(100.0)?;
    let curve = (0..=100).map(|i| at(50.0 + i as f64)).collect::<Result<Vec<_>, _>>()?;
    let monotone = curve.windows(2).all(|w| w[1] >= w[0]);
    let rise = curve[100] - curve[0];
    verdict(
        (12.0..=19.0).contains(&c100) && monotone && rise <= 2.0,
        format!("C(100 W) = {c100:.3} bit/s/Hz, monotone = {monotone}, rise over 50-150 W = {rise:.3}"),
    )
}

fn property<S>(name: &str, cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S: Strategy,
    S::Value: Debug,
{
    let mut runner = TestRunner::new(RunnerConfig {
        cases,
        failure_persistence: None,
        ..RunnerConfig::default()
    });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn nonzero(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo..hi, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v })
}

fn element() -> impl Strategy<Value = RayTransferMatrix> {
    prop_oneof![
        (0.0..5.0f64).prop_map(|d| free_space(d).unwrap()),
        nonzero(0.05, 5.0).prop_map(|f| thin_lens(f).unwrap()),
        nonzero(0.05, 50.0).prop_map(|fr| reflector_from_curvature(fr).unwrap()),
    ]
}

/// Self-consistent Gaussian mode radius at the reference plane of a
/// round-trip matrix, from `C q² + (D − A) q − B = 0`.
fn q_mode_radius(rt: &RayTransferMatrix, lambda: f64) -> Option<f64> {
    let (a, b, c, d) = (rt.a, rt.b, rt.c, rt.d);
    let disc = Complex64::new((d - a) * (d - a) + 4.0 * b * c, 0.0).sqrt();
    [1.0, -1.0]
        .into_iter()
        .map(|s| (Complex64::new(a - d, 0.0) + s * disc) / (2.0 * c))
        .map(|q| q.inv().im)
        .find(|im| *im < 0.0)
        .map(|im| (-lambda / (PI * im)).sqrt())
}

/// Round trip starting at the gain medium, heading for the TIM.
fn physical_round_trip(g: &ResonatorGeometry) -> RayTransferMatrix {
    let out = RayTransferMatrix::compose(&[
        free_space(g.d2).unwrap(),
        thin_lens(g.f1).unwrap(),
        free_space(g.lt).unwrap(),
        thin_lens(g.f2).unwrap(),
        free_space(g.d3).unwrap(),
    ]);
    let to_m1 = free_space(g.d1).unwrap();
    to_m1 * reflector_from_curvature(g.fr1).unwrap() * to_m1 * out.reversed()
        * reflector_from_curvature(g.fr2).unwrap()
        * out
}

fn q_oracle_cavities() -> Result<String, String> {
    let mut lines = Vec::new();
    let mut checked = 0;
    for i in 0..40 {
        let t = i as f64 / 39.0;
        let mut model = LinkModel::paper_2022();
        model.geometry.d3 = 2.0 + 8.0 * t;
        model.geometry.fr2 = 12.0 + 18.0 * ((7.0 * t) % 1.0);
        model.geometry.d1 = 0.01 + 0.02 * ((3.0 * t) % 1.0);
        model.set(Parameter::Compression, 1.0 + 9.0 * ((5.0 * t) % 1.0)).unwrap();
        let g = model.geometry;
        let m = one_trip_matrix(&g).unwrap();
        let Ok(w) = spot_radius_on_gain(&m, g.lambda_beam) else { continue };
        let retraced = q_mode_radius(&(m.reversed() * m), g.lambda_beam).ok_or("stable cavity without a mode")?;
        let rel = (w - retraced).abs() / retraced;
        let physical = q_mode_radius(&physical_round_trip(&g), g.lambda_beam)
            .map_or("no confined mode".to_string(), |p| format!("ratio {:.4}", w / p));
        lines.push(format!(
            "      cavity {i:2}: d3 = {:5.2} m, fr2 = {:5.2} m, M = {:4.2}: omega_g = {:.4e} m, retraced q-mode rel. diff {rel:.1e}, physical round trip {physical}",
            g.d3,
            g.fr2,
            g.compression(),
            w
        ));
        if rel > 1e-9 {
            return Err(format!("cavity {i}: closed form {w} vs q-mode {retraced}"));
        }
        checked += 1;
    }
    if checked < 10 {
        return Err(format!("only {checked} stable cavities"));
    }
    Ok(format!("{checked} cavities agree within 1e-9\n{}", lines.join("\n")))
}

fn property_suites() -> Outcome {
    let start = Instant::now();
    let mut report = String::new();
    let suites = || -> Result<(), String> {
        property("det = 1", 1000, prop::collection::vec(element(), 1..8), |chain| {
            let m = RayTransferMatrix::compose(&chain);
            let scale = 1.0 + (m.a * m.d).abs() + (m.b * m.c).abs();
            prop_assert!((m.determinant() - 1.0).abs() <= 1e-9 * scale, "{m:?}");
            Ok(())
        })?;
        property(
            "retro-reflection",
            1000,
            (1e-3..1.0f64, -1.0..1.0f64, -0.1..0.1f64),
            |(f, x, theta)| {
                let m = reflector_matrix(f, f).unwrap();
                prop_assert_eq!(m.apply(RayVector::new(x, theta)), RayVector::new(-x, -theta));
                Ok(())
            },
        )?;
        property(
            "TIM law",
            1000,
            (nonzero(1e-3, 0.1), 1.0..14.0f64, -0.01..0.01f64),
            |(f1, m, x)| {
                let f2 = -f1 / m;
                let out = tim_matrix(f1, f2, f1 + f2).unwrap().apply(RayVector::new(x, 0.0));
                prop_assert!((out.x - x / m).abs() <= 1e-12 * (1.0 + x.abs()));
                prop_assert!(out.theta.abs() <= 1e-9 * x.abs() / f1.abs().min(f2.abs()));
                Ok(())
            },
        )?;
        property(
            "saturation identity",
            1000,
            (0.5..0.9999f64, 0.5..0.9999f64, 0.5..1.0f64, 0.05e-6..3e-6f64, 0.5..4.0f64),
            |(r1, r2, v, l, gamma)| {
                let g = saturation_gain(r1, r2, v, l, gamma).unwrap();
                let balance = (2.0 * gamma * g * l).exp() * r1 * r2 * v * v;
                prop_assert!((balance - 1.0).abs() <= 1e-9, "{balance}");
                Ok(())
            },
        )?;
        property("splitter conservation", 5000, (0.0..500.0f64, 0.0..=1.0f64), |(p, mu)| {
            let (pv, apd) = split_beam(p, mu).unwrap();
            prop_assert_eq!(pv + apd, p);
            Ok(())
        })?;
        property(
            "P_beam piecewise linear",
            1000,
            (0.0..100.0f64, 0.01..0.6f64, 0.0..300.0f64, 0.0..100.0f64),
            |(p_th, eta_s, p, dp)| {
                if p >= p_th {
                    let expected = (p + dp - p_th) * eta_s;
                    prop_assert!((beam_power(p + dp, p_th, eta_s) - expected).abs() <= 1e-9 * (1.0 + expected));
                } else {
                    prop_assert_eq!(beam_power(p, p_th, eta_s), 0.0);
                }
                Ok(())
            },
        )?;
        Ok(())
    };
    suites()?;
    report.push_str("det = 1, retro-reflection, TIM law, saturation identity, splitter conservation, P_beam linearity hold; ");
    let cavities = q_oracle_cavities()?;
    let elapsed = start.elapsed();
    report.push_str(&format!("{:.2} s", elapsed.as_secs_f64()));
    let (summary, detail) = cavities.split_once('\n').unwrap_or((&cavities, ""));
    let text = format!("{report}; q-oracle: {summary}\n{detail}");
    verdict(elapsed < Duration::from_secs(30), text)
}

fn main() -> ExitCode {
    let design = design_point();
    let with_design = |f: fn(&LinkModel) -> Outcome| -> Outcome { design.as_ref().map_err(Clone::clone).and_then(f) };
    let criteria: [(&str, Outcome); 7] = [
        ("beam compression", beam_compression()),
        ("spot radius over link distance", spot_over_distance()),
        ("optimal output coupler at 100 W", optimal_reflectivity()),
        ("high-power design point at 150 W", with_design(design_beam_power)),
        ("harvested power at mu = 0.99", with_design(design_harvest)),
        ("spectral efficiency at mu = 0.99", with_design(design_capacity)),
        ("property suites", property_suites()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in criteria.iter().enumerate() {
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} [{tag}] {name}: {detail}", i + 1);
    }
    if failed == 0 {
        println!("acceptance: all 7 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 7 criteria fail");
        ExitCode::FAILURE
    }
}
