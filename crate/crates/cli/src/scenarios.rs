//! Scenario registry: each scenario emits one experiment's data as a
//! deterministic set of CSV files.

use anyhow::{Context, Result};
use std::fs;
use std::path::{Path, PathBuf};

use ringwalk_core::{
    convolve_steps, crosstalk_matrix, deconvolve_series, evolve_localized, similarity,
    sorter_pipeline, spot_position, CoinState, SorterDesign, Spectrum, StepSeries,
};

use crate::config::{CavityToml, CoinSpec, ScenarioConfig, WalkConfig};
use crate::emit::{emit_spectrum_csv, emit_table_csv};

/// Environment variable overriding the configured output directory.
pub const OUTPUT_DIR_ENV: &str = "RINGWALK_OUTPUT_DIR";

pub struct Scenario {
    pub name: &'static str,
    pub description: &'static str,
}

/// All registered scenarios.
pub const SCENARIOS: &[Scenario] = &[
    Scenario {
        name: "hadamard-symmetric",
        description: "8-step Hadamard walk with a symmetric input polarization",
    },
    Scenario {
        name: "hadamard-asymmetric",
        description: "5-step Hadamard walk with horizontal input polarization",
    },
    Scenario {
        name: "qwp-sweep",
        description: "5-step walks with the coin QWP at 45, 90 and 135 degrees",
    },
    Scenario {
        name: "identity-coin",
        description: "5-step identity-coin walk (ballistic edges only)",
    },
    Scenario {
        name: "not-coin",
        description: "5-step bare q-plate walk (NOT coin, period two)",
    },
    Scenario {
        name: "overlap-correction",
        description: "Hadamard walk with cavity pulse-overlap convolution and its inverse",
    },
    Scenario {
        name: "sorter-crosstalk",
        description: "crosstalk matrices of the 1-copy and 3-copy mode sorters on l in [-7, 7]",
    },
    Scenario {
        name: "sorter-positions",
        description: "simulated vs design spot positions for all three sorter builds",
    },
];

/// Fully-populated default configuration for a registered scenario.
pub fn default_config(name: &str) -> Option<ScenarioConfig> {
    let walk = |coin: Option<(&str, f64)>, init: f64, steps: usize| WalkConfig {
        coin: coin.map(|(kind, angle_deg)| CoinSpec {
            kind: kind.into(),
            angle_deg,
        }),
        sweep_angles_deg: None,
        init_hwp_deg: init,
        q: 0.5,
        steps,
    };
    let base = |walk: Option<WalkConfig>, cavity: Option<CavityToml>| ScenarioConfig {
        scenario: name.into(),
        output_dir: "out".into(),
        walk,
        cavity,
        sorter: None,
    };
    Some(match name {
        "hadamard-symmetric" => base(Some(walk(Some(("quarter", 45.0)), 67.5, 8)), None),
        "hadamard-asymmetric" => base(Some(walk(Some(("quarter", 45.0)), 45.0, 5)), None),
        "qwp-sweep" => {
            let mut w = walk(Some(("quarter", 45.0)), 45.0, 5);
            w.sweep_angles_deg = Some(vec![45.0, 90.0, 135.0]);
            base(Some(w), None)
        }
        "identity-coin" => base(Some(walk(Some(("half", 0.0)), 45.0, 5)), None),
        "not-coin" => base(Some(walk(None, 67.5, 5)), None),
        "overlap-correction" => base(
            Some(walk(Some(("quarter", 45.0)), 67.5, 5)),
            Some(CavityToml::canonical()),
        ),
        "sorter-crosstalk" | "sorter-positions" => base(None, None),
        _ => return None,
    })
}

/// Runs one scenario and returns the emitted file paths.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<PathBuf>> {
    let defaults = default_config(&cfg.scenario)
        .with_context(|| format!("unknown scenario \"{}\"; see list-scenarios", cfg.scenario))?;
    let out_base = std::env::var(OUTPUT_DIR_ENV).unwrap_or_else(|_| cfg.output_dir.clone());
    let outdir = Path::new(&out_base).join(&cfg.scenario);
    fs::create_dir_all(&outdir).with_context(|| format!("creating {}", outdir.display()))?;

    let walk_cfg = cfg.walk.clone().or(defaults.walk);
    let cavity_cfg = cfg.cavity.clone().or(defaults.cavity);

    match cfg.scenario.as_str() {
        "qwp-sweep" => {
            let walk = walk_cfg.context("walk section required")?;
            let angles = walk
                .sweep_angles_deg
                .clone()
                .unwrap_or_else(|| vec![45.0, 90.0, 135.0]);
            let mut files = Vec::new();
            for angle in angles {
                let mut one = walk.clone();
                one.coin = Some(CoinSpec {
                    kind: "quarter".into(),
                    angle_deg: angle,
                });
                let sub = outdir.join(format!("qwp-{:03}", angle.round() as i64));
                fs::create_dir_all(&sub)?;
                files.extend(run_walk_scenario(&one, cavity_cfg.as_ref(), &sub)?);
            }
            Ok(files)
        }
        "sorter-positions" => run_sorter_positions(&outdir),
        "sorter-crosstalk" => run_sorter_crosstalk(&outdir),
        _ => {
            let walk = walk_cfg.context("walk section required")?;
            run_walk_scenario(&walk, cavity_cfg.as_ref(), &outdir)
        }
    }
}

fn run_walk_scenario(
    walk: &WalkConfig,
    cavity: Option<&CavityToml>,
    outdir: &Path,
) -> Result<Vec<PathBuf>> {
    let plate = walk.coin.as_ref().map(CoinSpec::to_plate).transpose()?;
    let qp = walk.qplate()?;
    let init = CoinState::from_init_hwp(walk.init_hwp_deg);
    let states = evolve_localized(0, init, plate.as_ref(), &qp, walk.steps)?;
    let ideal: Vec<Spectrum> = states.iter().map(|s| s.probabilities()).collect();

    let mut files = Vec::new();
    for (n, spec) in ideal.iter().enumerate() {
        let path = outdir.join(format!("step-{n:02}.csv"));
        emit_spectrum_csv(spec, &path)?;
        files.push(path);
    }

    let mut summary_header = String::from("step,variance");
    let mut summary_rows: Vec<Vec<String>> = ideal
        .iter()
        .enumerate()
        .map(|(n, s)| vec![n.to_string(), s.variance().to_string()])
        .collect();

    if let Some(cav) = cavity {
        let cav = cav.to_cavity()?;
        let series = StepSeries::new(ideal.clone());
        let measured = convolve_steps(&series, &cav)?;
        let corrected = deconvolve_series(&measured, &cav)?;
        for (n, spec) in measured.steps().iter().enumerate() {
            let path = outdir.join(format!("measured-step-{n:02}.csv"));
            emit_spectrum_csv(spec, &path)?;
            files.push(path);
        }
        for (n, spec) in corrected.steps().iter().enumerate() {
            let path = outdir.join(format!("corrected-step-{n:02}.csv"));
            emit_spectrum_csv(spec, &path)?;
            files.push(path);
        }
        summary_header
            .push_str(",variance_measured,similarity_measured_vs_ideal,similarity_corrected_vs_ideal");
        for (n, row) in summary_rows.iter_mut().enumerate() {
            let m = &measured.steps()[n];
            let c = &corrected.steps()[n];
            row.push(m.variance().to_string());
            row.push(similarity(m, &ideal[n])?.to_string());
            row.push(similarity(c, &ideal[n])?.to_string());
        }
    }

    let summary = outdir.join("summary.csv");
    emit_table_csv(&summary_header, &summary_rows, &summary)?;
    files.push(summary);
    Ok(files)
}

fn builds() -> [(&'static str, SorterDesign); 3] {
    [
        ("refractive", SorterDesign::refractive()),
        ("one-copy", SorterDesign::one_copy()),
        ("three-copy", SorterDesign::three_copy()),
    ]
}

fn run_sorter_positions(outdir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for (name, design) in builds() {
        let mut rows = Vec::new();
        for l in -5i64..=5 {
            let out = sorter_pipeline(&design.input_mode(l)?, &design)?;
            let mut num = 0.0;
            let mut den = 0.0;
            for iy in 0..out.ny() {
                let y = out.y(iy);
                for ix in 0..out.nx() {
                    let p = out.get(ix, iy).norm_sqr();
                    num += y * p;
                    den += p;
                }
            }
            rows.push(vec![
                l.to_string(),
                (num / den).to_string(),
                spot_position(&design, l).to_string(),
            ]);
        }
        let path = outdir.join(format!("positions-{name}.csv"));
        emit_table_csv("l,simulated_m,design_m", &rows, &path)?;
        files.push(path);
    }
    Ok(files)
}

fn run_sorter_crosstalk(outdir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for (name, design) in builds().into_iter().skip(1) {
        let matrix = crosstalk_matrix(&design, -7, 7)?;
        let mut rows = Vec::new();
        for l_in in matrix.lmin()..=matrix.lmax() {
            for l_out in matrix.lmin()..=matrix.lmax() {
                rows.push(vec![
                    l_in.to_string(),
                    l_out.to_string(),
                    matrix.entry(l_in, l_out).to_string(),
                ]);
            }
        }
        let path = outdir.join(format!("crosstalk-{name}.csv"));
        emit_table_csv("l_in,l_out,fraction", &rows, &path)?;
        files.push(path);
    }
    Ok(files)
}

/// Quick self-checks for the `verify` subcommand. Returns a list of
/// (check name, passed).
pub fn verify_checks() -> Vec<(&'static str, bool)> {
    use ringwalk_core::{
        bs_weight, compose, equal_up_to_global_phase, hwp_operator, qwp_operator, CavityConfig,
        CoinOperator, PulseModel,
    };

    let mut checks = Vec::new();

    let hadamard_identity = equal_up_to_global_phase(
        &qwp_operator(45.0),
        &CoinOperator::hadamard().matmul(&CoinOperator::not_coin()),
        1e-12,
    );
    checks.push(("QWP(45) realizes the Hadamard-NOT product", hadamard_identity));

    let decomposition = [0.0, 45.0, 90.0, 135.0, 180.0].iter().all(|&theta| {
        let lhs = compose(&[
            qwp_operator(45.0),
            hwp_operator(theta / 4.0),
            qwp_operator(45.0),
        ])
        .unwrap();
        let rhs = ringwalk_core::coin_theta(theta).matmul(&CoinOperator::not_coin());
        equal_up_to_global_phase(&lhs, &rhs, 1e-12)
    });
    checks.push(("three-plate coin decomposition", decomposition));

    let cfg = CavityConfig::canonical();
    let weight_sum: f64 = (0..200).map(|n| bs_weight(&cfg, n)).sum();
    checks.push(("round-trip weights sum to one", (weight_sum - 1.0).abs() < 1e-9));

    let pulse = PulseModel::canonical();
    checks.push(("pulse FWHM near 14.3 ns", (pulse.fwhm() - 14.3).abs() < 0.1));

    let walk_norm = {
        let states = evolve_localized(
            0,
            CoinState::from_init_hwp(67.5),
            Some(&ringwalk_core::WaveplateSpec::quarter(45.0)),
            &ringwalk_core::QPlateSpec::half(),
            30,
        )
        .unwrap();
        states.iter().all(|s| (s.norm_sqr() - 1.0).abs() < 1e-10)
    };
    checks.push(("walk evolution conserves norm", walk_norm));

    let spot_law = {
        let d = SorterDesign::refractive();
        (spot_position(&d, 1) - 30.1e-6).abs() / 30.1e-6 < 0.01
    };
    checks.push(("refractive sorter spot pitch near 30.1 um", spot_law));

    checks
}
