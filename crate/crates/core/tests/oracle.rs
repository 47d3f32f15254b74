//! Cross-checks the sparse walk evolution against an independent dense
//! unitary built explicitly in the (site, coin) product basis.

mod common;

use common::max_deviation_vs_dense;
use ringwalk_core::{CoinState, PlateKind, WaveplateSpec};

#[test]
fn evolution_matches_dense_unitary_for_all_coins() {
    let inputs = [
        CoinState::right(),
        CoinState::horizontal(),
        CoinState::from_init_hwp(67.5),
    ];
    let plates = [
        Some(WaveplateSpec::new(PlateKind::Quarter, 45.0)), // Hadamard-like
        Some(WaveplateSpec::new(PlateKind::Quarter, 90.0)), // balanced
        Some(WaveplateSpec::new(PlateKind::Half, 0.0)),     // NOT-like
        None,                                               // bare q-plate walk
    ];
    for plate in &plates {
        for init in &inputs {
            for n in [1usize, 4, 8] {
                let err = max_deviation_vs_dense(plate.as_ref(), init.clone(), n);
                assert!(err < 1e-12, "max amplitude deviation {err} at n={n}");
            }
        }
    }
}
