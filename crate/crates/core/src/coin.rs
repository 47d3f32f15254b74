//! Jones-calculus operator algebra on the polarization (coin) space.
//!
//! The coin space is spanned by the circular basis (|R>, |L>) with
//! |R> = [1, 0]. Wave plates, q-plate coin action and the canonical
//! walk coins are all 2x2 unitaries in this basis.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for the unitarity check on built coins.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Coin basis label, circular polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coin {
    /// Right circular, |R> = [1, 0].
    R = 0,
    /// Left circular, |L> = [0, 1].
    L = 1,
}

/// Normalized two-component coin state in the (|R>, |L>) basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinState(pub [Complex64; 2]);

impl CoinState {
    pub fn new(r: Complex64, l: Complex64) -> Self {
        CoinState([r, l])
    }

    pub fn right() -> Self {
        CoinState([Complex64::ONE, Complex64::ZERO])
    }

    pub fn left() -> Self {
        CoinState([Complex64::ZERO, Complex64::ONE])
    }

    /// Horizontal linear polarization, (|R> - |L>)/sqrt(2).
    ///
    /// The relative phase between the circular kets fixes where the lab
    /// frame sits; this choice makes the asymmetric Hadamard walk lean
    /// to negative OAM, matching the measured distributions.
    pub fn horizontal() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        CoinState([Complex64::new(s, 0.0), Complex64::new(-s, 0.0)])
    }

    /// Vertical linear polarization, (|R> + |L>)/sqrt(2).
    pub fn vertical() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        CoinState([Complex64::new(s, 0.0), Complex64::new(s, 0.0)])
    }

    /// State prepared by the initializing half-wave plate at `theta_deg`
    /// acting on a vertically polarized input beam.
    ///
    /// 67.5 degrees prepares the symmetric (diagonal) input, 45 degrees
    /// the asymmetric (horizontal) one.
    pub fn from_init_hwp(theta_deg: f64) -> Self {
        let v = Self::vertical();
        hwp_operator(theta_deg).apply(&v)
    }

    pub fn norm(&self) -> f64 {
        (self.0[0].norm_sqr() + self.0[1].norm_sqr()).sqrt()
    }
}

/// 2x2 complex unitary on the coin space, basis (|R>, |L>).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinOperator {
    entries: [[Complex64; 2]; 2],
}

impl CoinOperator {
    /// Builds an operator from raw entries, checking unitarity.
    pub fn from_entries(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        let op = CoinOperator { entries };
        let dev = op.unitarity_deviation();
        if dev > UNITARITY_TOL {
            return Err(Error::NotUnitary {
                deviation: dev,
                tol: UNITARITY_TOL,
            });
        }
        Ok(op)
    }

    /// Internal constructor for operators unitary by construction.
    pub(crate) fn from_entries_unchecked(entries: [[Complex64; 2]; 2]) -> Self {
        let op = CoinOperator { entries };
        debug_assert!(op.unitarity_deviation() < UNITARITY_TOL);
        op
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    /// Identity coin C_I.
    pub fn identity() -> Self {
        Self::from_entries_unchecked([
            [Complex64::ONE, Complex64::ZERO],
            [Complex64::ZERO, Complex64::ONE],
        ])
    }

    /// NOT coin C_N, the polarization flip built into the q-plate.
    pub fn not_coin() -> Self {
        Self::from_entries_unchecked([
            [Complex64::ZERO, Complex64::ONE],
            [Complex64::ONE, Complex64::ZERO],
        ])
    }

    /// Hadamard coin C_H.
    pub fn hadamard() -> Self {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::from_entries_unchecked([[s, s], [s, -s]])
    }

    /// Balanced coin C_B.
    pub fn balanced() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let re = Complex64::new(s, 0.0);
        let im = Complex64::new(0.0, s);
        Self::from_entries_unchecked([[re, im], [im, re]])
    }

    /// Matrix product `self * rhs` (rhs acts first).
    pub fn matmul(&self, rhs: &CoinOperator) -> CoinOperator {
        let a = &self.entries;
        let b = &rhs.entries;
        let mut out = [[Complex64::ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        CoinOperator { entries: out }
    }

    /// Applies the operator to a coin state.
    pub fn apply(&self, state: &CoinState) -> CoinState {
        let m = &self.entries;
        let v = &state.0;
        CoinState([m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]])
    }

    /// Max-entry deviation of U^dagger U from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let m = &self.entries;
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Complex64::ZERO;
                for (k, row) in m.iter().enumerate() {
                    let _ = k;
                    s += row[i].conj() * row[j];
                }
                let target = if i == j { Complex64::ONE } else { Complex64::ZERO };
                dev = dev.max((s - target).norm());
            }
        }
        dev
    }

    /// Max-entry absolute difference to another operator.
    pub fn max_abs_diff(&self, other: &CoinOperator) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        d
    }
}

/// Quarter-wave plate with fast axis at `theta_deg` from horizontal,
/// Q_theta = (1/sqrt 2) [[1, i e^{-i2theta}], [i e^{i2theta}, 1]].
pub fn qwp_operator(theta_deg: f64) -> CoinOperator {
    let th = theta_deg.to_radians();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let p = Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, 2.0 * th);
    let m = Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, -2.0 * th);
    CoinOperator::from_entries_unchecked([
        [Complex64::new(s, 0.0), m * s],
        [p * s, Complex64::new(s, 0.0)],
    ])
}

/// Half-wave plate with fast axis at `theta_deg` from horizontal,
/// H_theta = [[0, i e^{-i2theta}], [i e^{i2theta}, 0]].
pub fn hwp_operator(theta_deg: f64) -> CoinOperator {
    let th = theta_deg.to_radians();
    let p = Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, 2.0 * th);
    let m = Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, -2.0 * th);
    CoinOperator::from_entries_unchecked([[Complex64::ZERO, m], [p, Complex64::ZERO]])
}

/// One-parameter coin family C_theta = [[cos(t/2), i sin(t/2)], [i sin(t/2), cos(t/2)]].
///
/// C_90 reproduces the balanced coin; C_0 the identity. The family is
/// kept unitary (no 1/sqrt 2 prefactor).
pub fn coin_theta(theta_deg: f64) -> CoinOperator {
    let half = theta_deg.to_radians() / 2.0;
    let c = Complex64::new(half.cos(), 0.0);
    let is = Complex64::new(0.0, half.sin());
    CoinOperator::from_entries_unchecked([[c, is], [is, c]])
}

/// Product of operators applied right-to-left: the first listed acts
/// first on the state.
pub fn compose(ops: &[CoinOperator]) -> Result<CoinOperator> {
    let (first, rest) = ops.split_first().ok_or(Error::EmptyOperatorList)?;
    Ok(rest.iter().fold(*first, |acc, op| op.matmul(&acc)))
}

/// True iff `a` equals `lambda * b` for some unit-modulus `lambda`, to
/// within `tol` per entry. `lambda` is read off the largest-magnitude
/// entry of `b`.
pub fn equal_up_to_global_phase(a: &CoinOperator, b: &CoinOperator, tol: f64) -> bool {
    let mut best = (0usize, 0usize);
    let mut best_mag = -1.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let mag = b.entry(i, j).norm();
            if mag > best_mag {
                best_mag = mag;
                best = (i, j);
            }
        }
    }
    if best_mag == 0.0 {
        return a.max_abs_diff(b) <= tol;
    }
    let lambda = a.entry(best.0, best.1) / b.entry(best.0, best.1);
    let lambda = if lambda.norm() == 0.0 {
        return false;
    } else {
        lambda / lambda.norm()
    };
    let mut dev: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            dev = dev.max((a.entry(i, j) - lambda * b.entry(i, j)).norm());
        }
    }
    dev <= tol
}

/// Wave plate kinds available inside the cavity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlateKind {
    Quarter,
    Half,
}

/// A wave plate and its fast-axis angle, normalized to [0, 180).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveplateSpec {
    pub kind: PlateKind,
    theta_deg: f64,
}

impl WaveplateSpec {
    pub fn new(kind: PlateKind, theta_deg: f64) -> Self {
        WaveplateSpec {
            kind,
            theta_deg: theta_deg.rem_euclid(180.0),
        }
    }

    pub fn quarter(theta_deg: f64) -> Self {
        Self::new(PlateKind::Quarter, theta_deg)
    }

    pub fn half(theta_deg: f64) -> Self {
        Self::new(PlateKind::Half, theta_deg)
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta_deg
    }

    pub fn operator(&self) -> CoinOperator {
        match self.kind {
            PlateKind::Quarter => qwp_operator(self.theta_deg),
            PlateKind::Half => hwp_operator(self.theta_deg),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn qwp_at_45_is_hadamard_times_not() {
        let q = qwp_operator(45.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [[c(s, 0.0), c(s, 0.0)], [c(-s, 0.0), c(s, 0.0)]];
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(q.entry(i, j).re, expect[i][j].re, epsilon = 1e-14);
                assert_abs_diff_eq!(q.entry(i, j).im, expect[i][j].im, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn qwp_at_0_and_90() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q0 = qwp_operator(0.0);
        assert!(q0.max_abs_diff(&CoinOperator::from_entries_unchecked([
            [c(s, 0.0), c(0.0, s)],
            [c(0.0, s), c(s, 0.0)],
        ])) < 1e-14);
        let q90 = qwp_operator(90.0);
        assert!(q90.max_abs_diff(&CoinOperator::from_entries_unchecked([
            [c(s, 0.0), c(0.0, -s)],
            [c(0.0, -s), c(s, 0.0)],
        ])) < 1e-14);
    }

    #[test]
    fn hwp_values() {
        let h0 = hwp_operator(0.0);
        assert!((h0.entry(0, 1) - c(0.0, 1.0)).norm() < 1e-14);
        assert!((h0.entry(1, 0) - c(0.0, 1.0)).norm() < 1e-14);
        assert!(h0.entry(0, 0).norm() < 1e-14);

        let h90 = hwp_operator(90.0);
        assert!((h90.entry(0, 1) - c(0.0, -1.0)).norm() < 1e-14);
        assert!((h90.entry(1, 0) - c(0.0, -1.0)).norm() < 1e-14);

        let h225 = hwp_operator(22.5);
        let quarter = std::f64::consts::FRAC_PI_4;
        let expect01 = c(0.0, 1.0) * Complex64::from_polar(1.0, -quarter);
        let expect10 = c(0.0, 1.0) * Complex64::from_polar(1.0, quarter);
        assert!((h225.entry(0, 1) - expect01).norm() < 1e-14);
        assert!((h225.entry(1, 0) - expect10).norm() < 1e-14);
    }

    #[test]
    fn coin_theta_endpoints() {
        assert!(coin_theta(0.0).max_abs_diff(&CoinOperator::identity()) < 1e-14);
        assert!(coin_theta(90.0).max_abs_diff(&CoinOperator::balanced()) < 1e-14);
        // theta = 180 gives i * NOT
        let c180 = coin_theta(180.0);
        let inot = CoinOperator::from_entries_unchecked([
            [Complex64::ZERO, c(0.0, 1.0)],
            [c(0.0, 1.0), Complex64::ZERO],
        ]);
        assert!(c180.max_abs_diff(&inot) < 1e-14);
    }

    #[test]
    fn builtin_coins_are_unitary() {
        for op in [
            CoinOperator::identity(),
            CoinOperator::not_coin(),
            CoinOperator::hadamard(),
            CoinOperator::balanced(),
            qwp_operator(13.7),
            hwp_operator(101.2),
            coin_theta(33.0),
        ] {
            assert!(op.unitarity_deviation() < UNITARITY_TOL);
        }
    }

    #[test]
    fn compose_not_not_is_identity() {
        let n = CoinOperator::not_coin();
        let prod = compose(&[n, n]).unwrap();
        assert!(prod.max_abs_diff(&CoinOperator::identity()) < 1e-14);
    }

    #[test]
    fn compose_order_is_right_to_left() {
        // [C_N, C_H] means C_H * C_N = Q_45
        let prod = compose(&[CoinOperator::not_coin(), CoinOperator::hadamard()]).unwrap();
        assert!(prod.max_abs_diff(&qwp_operator(45.0)) < 1e-14);
    }

    #[test]
    fn compose_empty_errors() {
        assert_eq!(compose(&[]), Err(Error::EmptyOperatorList));
    }

    #[test]
    fn wave_plate_decomposition_of_coin_theta() {
        // Q_45 H_{theta/4} Q_45 = C_theta C_N up to a global phase
        for theta in [0.0, 45.0, 90.0, 135.0, 180.0] {
            let lhs = compose(&[
                qwp_operator(45.0),
                hwp_operator(theta / 4.0),
                qwp_operator(45.0),
            ])
            .unwrap();
            let rhs = coin_theta(theta).matmul(&CoinOperator::not_coin());
            assert!(
                equal_up_to_global_phase(&lhs, &rhs, 1e-12),
                "failed at theta = {theta}"
            );
        }
    }

    #[test]
    fn global_phase_comparison() {
        // H_0 = i * C_N
        assert!(equal_up_to_global_phase(
            &hwp_operator(0.0),
            &CoinOperator::identity().matmul(&CoinOperator::not_coin()),
            1e-12
        ));
        assert!(!equal_up_to_global_phase(
            &CoinOperator::hadamard(),
            &CoinOperator::balanced(),
            1e-12
        ));
    }

    #[test]
    fn from_entries_rejects_non_unitary() {
        let bad = [[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(
            CoinOperator::from_entries(bad),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn waveplate_angle_normalization() {
        assert_abs_diff_eq!(
            WaveplateSpec::quarter(190.0).theta_deg(),
            10.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            WaveplateSpec::half(-45.0).theta_deg(),
            135.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn init_hwp_states() {
        // HWP at 45 deg prepares horizontal, at 67.5 deg the diagonal state.
        let h = CoinState::from_init_hwp(45.0);
        let ratio = h.0[1] / h.0[0];
        assert!((ratio - c(-1.0, 0.0)).norm() < 1e-12);

        let d = CoinState::from_init_hwp(67.5);
        let ratio = d.0[1] / d.0[0];
        assert!((ratio.norm() - 1.0).abs() < 1e-12);
        // equal-magnitude components with a +-90 degree relative phase
        assert!(ratio.re.abs() < 1e-12);
    }
}
