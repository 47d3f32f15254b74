//! Walk evolution on a truncated OAM lattice with a polarization coin.
//!
//! One step is a q-plate shift (which also flips the coin) followed by
//! an optional wave plate. Overflow past the lattice truncation is a
//! hard error, never silent clipping.

use num_complex::Complex64;
use statrs::distribution::{Binomial, Discrete};

use crate::coin::{Coin, CoinOperator, CoinState, WaveplateSpec};
use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

/// q-plate charge; 2q is the integer lattice step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QPlateSpec {
    q: f64,
    step: i64,
}

impl QPlateSpec {
    pub fn new(q: f64) -> Result<Self> {
        let two_q = 2.0 * q;
        let rounded = two_q.round();
        if (two_q - rounded).abs() > 1e-9 || rounded == 0.0 {
            return Err(Error::InvalidQPlateCharge { q });
        }
        Ok(QPlateSpec {
            q,
            step: rounded as i64,
        })
    }

    /// The experiment's q = 0.5 plate (unit lattice step).
    pub fn half() -> Self {
        QPlateSpec { q: 0.5, step: 1 }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Lattice step 2q.
    pub fn step(&self) -> i64 {
        self.step
    }
}

/// Complex amplitude table over (OAM index l, coin), l in [lmin, lmax].
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    lmin: i64,
    lmax: i64,
    /// Layout: amps[2 * (l - lmin) + coin].
    amps: Vec<Complex64>,
}

impl WalkerState {
    /// Zero state on the given lattice.
    pub fn zero(lmin: i64, lmax: i64) -> Result<Self> {
        if lmin > lmax {
            return Err(Error::InvalidLatticeBounds { lmin, lmax });
        }
        let sites = (lmax - lmin + 1) as usize;
        Ok(WalkerState {
            lmin,
            lmax,
            amps: vec![Complex64::ZERO; 2 * sites],
        })
    }

    /// Walker localized at `l0` with the given coin state.
    pub fn localized(l0: i64, coin: CoinState, lmin: i64, lmax: i64) -> Result<Self> {
        let mut state = Self::zero(lmin, lmax)?;
        if l0 < lmin || l0 > lmax {
            return Err(Error::SiteOutOfRange { l: l0, lmin, lmax });
        }
        let norm = coin.norm();
        state.set(l0, Coin::R, coin.0[0] / norm);
        state.set(l0, Coin::L, coin.0[1] / norm);
        Ok(state)
    }

    pub fn lmin(&self) -> i64 {
        self.lmin
    }

    pub fn lmax(&self) -> i64 {
        self.lmax
    }

    pub fn amp(&self, l: i64, coin: Coin) -> Complex64 {
        if l < self.lmin || l > self.lmax {
            Complex64::ZERO
        } else {
            self.amps[2 * (l - self.lmin) as usize + coin as usize]
        }
    }

    pub fn set(&mut self, l: i64, coin: Coin, value: Complex64) {
        assert!(l >= self.lmin && l <= self.lmax);
        self.amps[2 * (l - self.lmin) as usize + coin as usize] = value;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Smallest and largest l carrying nonzero amplitude, if any.
    pub fn support(&self) -> Option<(i64, i64)> {
        let mut lo = None;
        let mut hi = None;
        for l in self.lmin..=self.lmax {
            let occupied =
                self.amp(l, Coin::R) != Complex64::ZERO || self.amp(l, Coin::L) != Complex64::ZERO;
            if occupied {
                if lo.is_none() {
                    lo = Some(l);
                }
                hi = Some(l);
            }
        }
        lo.zip(hi)
    }

    /// Born-rule position distribution P(l) = |a_R|^2 + |a_L|^2.
    pub fn probabilities(&self) -> Spectrum {
        let weights: Vec<f64> = (self.lmin..=self.lmax)
            .map(|l| self.amp(l, Coin::R).norm_sqr() + self.amp(l, Coin::L).norm_sqr())
            .collect();
        Spectrum::from_weights(self.lmin, weights).expect("walker state has nonzero norm")
    }

    /// Max amplitude difference to another state on the same lattice.
    pub fn max_abs_diff(&self, other: &WalkerState) -> f64 {
        assert_eq!(self.lmin, other.lmin);
        assert_eq!(self.lmax, other.lmax);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// True iff `other` equals `lambda * self` for a unit-modulus lambda.
    pub fn equal_up_to_global_phase(&self, other: &WalkerState, tol: f64) -> bool {
        assert_eq!(self.lmin, other.lmin);
        assert_eq!(self.lmax, other.lmax);
        let pivot = self
            .amps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(i, _)| i)
            .unwrap();
        if self.amps[pivot].norm() == 0.0 {
            return other.norm_sqr() <= tol * tol;
        }
        let lambda = other.amps[pivot] / self.amps[pivot];
        if lambda.norm() == 0.0 {
            return false;
        }
        let lambda = lambda / lambda.norm();
        self.amps
            .iter()
            .zip(&other.amps)
            .all(|(a, b)| (b - lambda * a).norm() <= tol)
    }

    /// Schmidt-based non-separability of position and coin: 2 s0 s1
    /// from the singular values of the (sites x 2) amplitude matrix.
    /// 0 for product states, 1 when maximally non-separable.
    pub fn nonseparability(&self) -> f64 {
        // Gram matrix G = A^dagger A, a 2x2 Hermitian PSD matrix;
        // s0^2 s1^2 = det G, so 2 s0 s1 = 2 sqrt(det G).
        let mut g00 = 0.0f64;
        let mut g11 = 0.0f64;
        let mut g01 = Complex64::ZERO;
        for l in self.lmin..=self.lmax {
            let r = self.amp(l, Coin::R);
            let lft = self.amp(l, Coin::L);
            g00 += r.norm_sqr();
            g11 += lft.norm_sqr();
            g01 += r.conj() * lft;
        }
        let norm = g00 + g11;
        if norm == 0.0 {
            return 0.0;
        }
        let det = (g00 * g11 - g01.norm_sqr()) / (norm * norm);
        2.0 * det.max(0.0).sqrt()
    }
}

/// Applies the q-plate shift: (l, R) -> (l + 2q, L), (l, L) -> (l - 2q, R).
pub fn shift_apply(state: &WalkerState, qplate: &QPlateSpec) -> Result<WalkerState> {
    let dl = qplate.step();
    let (lmin, lmax) = (state.lmin, state.lmax);
    for l in lmin..=lmax {
        if l + dl > lmax && state.amp(l, Coin::R) != Complex64::ZERO {
            return Err(Error::LatticeOverflow { l, lmin, lmax });
        }
        if l - dl < lmin && state.amp(l, Coin::L) != Complex64::ZERO {
            return Err(Error::LatticeOverflow { l, lmin, lmax });
        }
    }
    let mut out = WalkerState::zero(lmin, lmax)?;
    for l in lmin..=lmax {
        let r = state.amp(l, Coin::R);
        if r != Complex64::ZERO {
            out.set(l + dl, Coin::L, r);
        }
        let lft = state.amp(l, Coin::L);
        if lft != Complex64::ZERO {
            out.set(l - dl, Coin::R, lft);
        }
    }
    Ok(out)
}

/// Applies a coin operator site-locally.
pub fn coin_apply(state: &WalkerState, coin: &CoinOperator) -> WalkerState {
    let mut out = WalkerState::zero(state.lmin, state.lmax).unwrap();
    for l in state.lmin..=state.lmax {
        let v = CoinState::new(state.amp(l, Coin::R), state.amp(l, Coin::L));
        let w = coin.apply(&v);
        out.set(l, Coin::R, w.0[0]);
        out.set(l, Coin::L, w.0[1]);
    }
    out
}

/// One walk step: q-plate shift, then the wave plate (identity when the
/// plate is absent, which is the bare NOT-coin walk).
pub fn step(
    state: &WalkerState,
    plate: Option<&WaveplateSpec>,
    qplate: &QPlateSpec,
) -> Result<WalkerState> {
    let shifted = shift_apply(state, qplate)?;
    Ok(match plate {
        Some(p) => coin_apply(&shifted, &p.operator()),
        None => shifted,
    })
}

/// Runs `n` steps, returning the states after steps 0..=n.
///
/// The initial lattice must accommodate the full light cone; otherwise
/// an `InsufficientLatticeBounds` error is returned up front.
pub fn evolve(
    initial: &WalkerState,
    plate: Option<&WaveplateSpec>,
    qplate: &QPlateSpec,
    n: usize,
) -> Result<Vec<WalkerState>> {
    let reach = qplate.step().abs() * n as i64;
    if let Some((lo, hi)) = initial.support() {
        if lo - reach < initial.lmin || hi + reach > initial.lmax {
            return Err(Error::InsufficientLatticeBounds {
                lmin: initial.lmin,
                lmax: initial.lmax,
                lo,
                hi,
                n,
                step: qplate.step(),
            });
        }
    }
    let mut states = Vec::with_capacity(n + 1);
    states.push(initial.clone());
    for _ in 0..n {
        let next = step(states.last().unwrap(), plate, qplate)?;
        states.push(next);
    }
    Ok(states)
}

/// Convenience: evolve from a walker localized at `l0`, auto-sizing the
/// lattice to [l0 - n|2q|, l0 + n|2q|].
pub fn evolve_localized(
    l0: i64,
    coin: CoinState,
    plate: Option<&WaveplateSpec>,
    qplate: &QPlateSpec,
    n: usize,
) -> Result<Vec<WalkerState>> {
    let reach = qplate.step().abs() * n as i64;
    let initial = WalkerState::localized(l0, coin, l0 - reach, l0 + reach)?;
    evolve(&initial, plate, qplate, n)
}

/// Classical random-walk distribution after `n` unit steps: binomial on
/// the parity sublattice {-n, -n+2, ..., n}.
pub fn classical_rw_distribution(n: usize, p_right: f64) -> Result<Spectrum> {
    if !(0.0..=1.0).contains(&p_right) {
        return Err(Error::InvalidProbability { p: p_right });
    }
    let ni = n as i64;
    let mut weights = vec![0.0f64; 2 * n + 1];
    if n == 0 {
        weights[0] = 1.0;
    } else {
        // P(l) = C(n, k) p^k (1-p)^(n-k) with l = 2k - n.
        let binom = Binomial::new(p_right, n as u64)
            .map_err(|_| Error::InvalidProbability { p: p_right })?;
        for k in 0..=n {
            let l = 2 * k as i64 - ni;
            weights[(l + ni) as usize] = binom.pmf(k as u64);
        }
    }
    Spectrum::from_weights(-ni, weights)
}
