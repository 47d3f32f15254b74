//! Shared dense-matrix oracle for validating the sparse walk
//! evolution: builds the one-step unitary explicitly in the
//! (site, coin) product basis and powers it by repeated
//! matrix-vector products.

use num_complex::Complex64;
use ringwalk_core::{
    evolve, Coin, CoinOperator, CoinState, QPlateSpec, WalkerState, WaveplateSpec,
};

/// Dense one-step matrix on the lattice [-reach, reach]: unit q-plate
/// shift followed by an optional wave plate, in the basis
/// index = (l + reach) * 2 + coin.
pub fn dense_step(reach: i64, plate: Option<&WaveplateSpec>) -> Vec<Vec<Complex64>> {
    let sites = (2 * reach + 1) as usize;
    let dim = 2 * sites;
    let idx = |l: i64, c: usize| ((l + reach) as usize) * 2 + c;
    let mut shift = vec![vec![Complex64::ZERO; dim]; dim];
    for l in -reach..=reach {
        // (l, R) -> (l+1, L); (l, L) -> (l-1, R); rows that would
        // leave the lattice stay zero and are never exercised.
        if l + 1 <= reach {
            shift[idx(l + 1, 1)][idx(l, 0)] = Complex64::ONE;
        }
        if l - 1 >= -reach {
            shift[idx(l - 1, 0)][idx(l, 1)] = Complex64::ONE;
        }
    }
    let coin = match plate {
        Some(p) => p.operator(),
        None => CoinOperator::identity(),
    };
    let mut full = vec![vec![Complex64::ZERO; dim]; dim];
    for l in -reach..=reach {
        for row in 0..2 {
            for col in 0..2 {
                let c = coin.entry(row, col);
                if c == Complex64::ZERO {
                    continue;
                }
                for src in 0..dim {
                    let s = shift[idx(l, col)][src];
                    if s != Complex64::ZERO {
                        full[idx(l, row)][src] += c * s;
                    }
                }
            }
        }
    }
    full
}

pub fn matvec(m: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn to_vector(state: &WalkerState, reach: i64) -> Vec<Complex64> {
    let mut v = vec![Complex64::ZERO; 2 * (2 * reach + 1) as usize];
    for l in -reach..=reach {
        v[((l + reach) as usize) * 2] = state.amp(l, Coin::R);
        v[((l + reach) as usize) * 2 + 1] = state.amp(l, Coin::L);
    }
    v
}

/// Runs both evolutions for `n` steps and returns the largest
/// per-amplitude deviation seen at any step.
pub fn max_deviation_vs_dense(plate: Option<&WaveplateSpec>, init: CoinState, n: usize) -> f64 {
    let reach = n as i64;
    let qp = QPlateSpec::half();
    let initial = WalkerState::localized(0, init, -reach, reach).unwrap();
    let states = evolve(&initial, plate, &qp, n).unwrap();

    let u = dense_step(reach, plate);
    let mut v = to_vector(&initial, reach);
    let mut worst = 0.0f64;
    for state in &states {
        let expect = to_vector(state, reach);
        let err = v
            .iter()
            .zip(&expect)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        worst = worst.max(err);
        v = matvec(&u, &v);
    }
    worst
}
