//! Temporal model of the ring cavity: Gaussian pulse shape,
//! beam-splitter round-trip weighting, detector gate windows, the
//! five-term step-overlap convolution that distorts measured
//! distributions, and its inverse correction.
//!
//! All times are in nanoseconds.

use statrs::function::erf::erf;

use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

/// Gaussian pulse G(t) = a exp(-(t-b)^2 / (2 c^2)) + k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseModel {
    /// Peak amplitude (arbitrary units).
    pub a: f64,
    /// Temporal offset (ns).
    pub b: f64,
    /// Gaussian width (ns).
    pub c: f64,
    /// Baseline offset (arbitrary units).
    pub k: f64,
}

impl PulseModel {
    pub fn new(a: f64, b: f64, c: f64, k: f64) -> Result<Self> {
        if !(a > 0.0) || !(c > 0.0) || !a.is_finite() || !c.is_finite() {
            return Err(Error::InvalidPulseModel {
                reason: format!("require a > 0 and c > 0, got a={a}, c={c}"),
            });
        }
        Ok(PulseModel { a, b, c, k })
    }

    /// The measured laser pulse with offsets dropped:
    /// G(t) = 0.0605 exp(-t^2 / (2 (6.107 ns)^2)).
    pub fn canonical() -> Self {
        PulseModel {
            a: 0.0605,
            b: 0.0,
            c: 6.107,
            k: 0.0,
        }
    }

    /// Pulse value at time t (ns).
    pub fn value(&self, t: f64) -> f64 {
        let z = (t - self.b) / self.c;
        self.a * (-0.5 * z * z).exp() + self.k
    }

    /// Full width at half maximum: 2 sqrt(2 ln 2) c.
    pub fn fwhm(&self) -> f64 {
        2.0 * (2.0 * std::f64::consts::LN_2).sqrt() * self.c
    }

    /// Full width at one-tenth maximum: 2 sqrt(2 ln 10) c.
    pub fn fwtm(&self) -> f64 {
        2.0 * (2.0 * 10.0f64.ln()).sqrt() * self.c
    }

    /// Exact integral of the pulse over [t1, t2] via the error function.
    pub fn integral(&self, t1: f64, t2: f64) -> f64 {
        let s = self.c * std::f64::consts::SQRT_2;
        let gauss = self.a * self.c * (std::f64::consts::PI / 2.0).sqrt()
            * (erf((t2 - self.b) / s) - erf((t1 - self.b) / s));
        gauss + self.k * (t2 - t1)
    }
}

/// Free-function form of [`PulseModel::value`].
pub fn pulse_value(p: &PulseModel, t: f64) -> f64 {
    p.value(t)
}

/// Ring-cavity timing and beam-splitter parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityConfig {
    /// Cavity circulation time (ns).
    pub round_trip_ns: f64,
    /// Beam-splitter transmission fraction, 0 < T < 1.
    pub transmission: f64,
    /// Temporal pulse shape.
    pub pulse: PulseModel,
    /// Modeled full pulse extent PW (ns).
    pub pulse_window_ns: f64,
    /// Detector gate width GW (ns), GW <= PW.
    pub gate_width_ns: f64,
}

impl CavityConfig {
    pub fn new(
        round_trip_ns: f64,
        transmission: f64,
        pulse: PulseModel,
        pulse_window_ns: f64,
        gate_width_ns: f64,
    ) -> Result<Self> {
        if !(round_trip_ns > 0.0) {
            return Err(Error::InvalidCavityConfig {
                reason: format!("round trip must be positive, got {round_trip_ns} ns"),
            });
        }
        if !(transmission > 0.0 && transmission < 1.0) {
            return Err(Error::InvalidCavityConfig {
                reason: format!("transmission must lie in (0, 1), got {transmission}"),
            });
        }
        if !(gate_width_ns > 0.0) || !(pulse_window_ns > 0.0) {
            return Err(Error::InvalidCavityConfig {
                reason: format!(
                    "pulse window ({pulse_window_ns} ns) and gate width ({gate_width_ns} ns) must be positive"
                ),
            });
        }
        if gate_width_ns > pulse_window_ns {
            return Err(Error::GateExceedsWindow {
                gate_ns: gate_width_ns,
                window_ns: pulse_window_ns,
            });
        }
        Ok(CavityConfig {
            round_trip_ns,
            transmission,
            pulse,
            pulse_window_ns,
            gate_width_ns,
        })
    }

    /// The experiment's cavity: 10 ns round trip, 50:50 splitter,
    /// 40 ns modeled pulse window, 10 ns gate.
    pub fn canonical() -> Self {
        CavityConfig::new(10.0, 0.5, PulseModel::canonical(), 40.0, 10.0).unwrap()
    }

    /// Beam-splitter reflection R = 1 - T.
    pub fn reflection(&self) -> f64 {
        1.0 - self.transmission
    }
}

/// Output weighting of the n-th round trip:
/// 0 for n < 0, R for n = 0, T^2 R^(n-1) for n >= 1.
pub fn bs_weight(cfg: &CavityConfig, n: i64) -> f64 {
    let r = cfg.reflection();
    let t = cfg.transmission;
    match n {
        n if n < 0 => 0.0,
        0 => r,
        n => t * t * r.powi((n - 1) as i32),
    }
}

/// Gate offset a = (PW - GW) / 2; the captured main window is
/// [-PW/2 + a, PW/2 - a].
pub fn gate_offset(cfg: &CavityConfig) -> f64 {
    (cfg.pulse_window_ns - cfg.gate_width_ns) / 2.0
}

/// Time window [t1, t2] contributing the step-(n+k) pulse to the n-th
/// gated measurement, k in [-2, 2]. Offsets step in units of the round
/// trip time.
fn window_bounds(cfg: &CavityConfig, k: i64) -> (f64, f64) {
    let a = gate_offset(cfg);
    let u = cfg.round_trip_ns;
    let hi = cfg.pulse_window_ns / 2.0 - a;
    let lo = -cfg.pulse_window_ns / 2.0 + a;
    match k {
        -2 => (hi + u, hi + 2.0 * u),
        -1 => (hi, hi + u),
        0 => (lo, hi),
        1 => (lo - u, lo),
        2 => (lo - 2.0 * u, lo - u),
        _ => unreachable!("stencil is fixed to five terms"),
    }
}

/// The five overlap coefficients [c_{n-2}, c_{n-1}, c_n, c_{n+1},
/// c_{n+2}] for the n-th gated pulse: c_{n+k} = w(n+k) * integral of
/// the pulse over the k-th gate window.
pub fn overlap_coefficients(cfg: &CavityConfig, n: i64) -> [f64; 5] {
    let mut c = [0.0; 5];
    for (i, k) in (-2i64..=2).enumerate() {
        let (t1, t2) = window_bounds(cfg, k);
        c[i] = bs_weight(cfg, n + k) * cfg.pulse.integral(t1, t2);
    }
    c
}

/// Per-step walk distributions indexed by step n = 0..N.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSeries {
    steps: Vec<Spectrum>,
}

impl StepSeries {
    pub fn new(steps: Vec<Spectrum>) -> Self {
        StepSeries { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn get(&self, n: i64) -> Option<&Spectrum> {
        if n < 0 {
            None
        } else {
            self.steps.get(n as usize)
        }
    }

    pub fn steps(&self) -> &[Spectrum] {
        &self.steps
    }

    /// Union of the lattice ranges across all steps.
    fn lattice(&self) -> (i64, i64) {
        let lmin = self.steps.iter().map(Spectrum::lmin).min().unwrap_or(0);
        let lmax = self.steps.iter().map(|s| s.lmax()).max().unwrap_or(0);
        (lmin, lmax)
    }
}

/// Forward overlap model: the measured n-th distribution is
/// sum over k in [-2,2] of c_{n+k} * series(n+k), normalized. Steps
/// outside the series act as zero distributions.
pub fn convolve_steps(series: &StepSeries, cfg: &CavityConfig) -> Result<StepSeries> {
    if series.is_empty() {
        return Err(Error::ZeroTotalWeight);
    }
    let (lmin, lmax) = series.lattice();
    let width = (lmax - lmin + 1) as usize;
    let mut measured = Vec::with_capacity(series.len());
    for n in 0..series.len() as i64 {
        let coeffs = overlap_coefficients(cfg, n);
        let mut weights = vec![0.0f64; width];
        for (i, k) in (-2i64..=2).enumerate() {
            if let Some(dist) = series.get(n + k) {
                for (slot, w) in weights.iter_mut().enumerate() {
                    *w += coeffs[i] * dist.weight(lmin + slot as i64);
                }
            }
        }
        measured.push(Spectrum::from_weights(lmin, weights)?);
    }
    Ok(StepSeries::new(measured))
}

/// Total coefficient weight actually applied at step n: the
/// normalization constant the forward model divides out, recoverable
/// because every input distribution sums to one.
fn applied_coefficient_sum(cfg: &CavityConfig, n: i64, len: i64) -> f64 {
    let coeffs = overlap_coefficients(cfg, n);
    (-2i64..=2)
        .zip(coeffs)
        .filter(|&(k, _)| n + k >= 0 && n + k < len)
        .map(|(_, c)| c)
        .sum()
}

/// Inverts the overlap model for a whole measured series.
///
/// Rearranging the forward model couples every step to its four
/// neighbors, so the inverse is the solution of a banded linear system
/// (one per lattice site) rather than a single division. Negative
/// entries in the solution are background errors and are clamped to
/// zero before renormalizing.
pub fn deconvolve_series(measured: &StepSeries, cfg: &CavityConfig) -> Result<StepSeries> {
    if measured.is_empty() {
        return Err(Error::ZeroTotalWeight);
    }
    let n_steps = measured.len();
    let (lmin, lmax) = measured.lattice();
    let width = (lmax - lmin + 1) as usize;

    // Banded coefficient matrix: row n holds the weights the forward
    // model gives to the true distributions n-2..n+2.
    let mut a = vec![vec![0.0f64; n_steps]; n_steps];
    for n in 0..n_steps as i64 {
        let coeffs = overlap_coefficients(cfg, n);
        if coeffs[2] <= 0.0 {
            return Err(Error::DegenerateGating { n: n as usize });
        }
        for (i, k) in (-2i64..=2).enumerate() {
            let m = n + k;
            if m >= 0 && (m as usize) < n_steps {
                a[n as usize][m as usize] = coeffs[i];
            }
        }
    }

    // Undo the forward model's normalization, then solve per site.
    let scales: Vec<f64> = (0..n_steps as i64)
        .map(|n| applied_coefficient_sum(cfg, n, n_steps as i64))
        .collect();
    let mut solution = vec![vec![0.0f64; width]; n_steps];
    for slot in 0..width {
        let l = lmin + slot as i64;
        let rhs: Vec<f64> = measured
            .steps
            .iter()
            .zip(&scales)
            .map(|(s, scale)| s.weight(l) * scale)
            .collect();
        let x = solve_linear(&a, &rhs).ok_or(Error::DegenerateGating { n: 0 })?;
        for (n, v) in x.into_iter().enumerate() {
            solution[n][slot] = v;
        }
    }

    let mut out = Vec::with_capacity(n_steps);
    for weights in solution {
        let clamped: Vec<f64> = weights.into_iter().map(|w| w.max(0.0)).collect();
        out.push(Spectrum::from_weights(lmin, clamped)?);
    }
    Ok(StepSeries::new(out))
}

/// Inverts the overlap model for one step of a measured series.
pub fn deconvolve_step(measured: &StepSeries, cfg: &CavityConfig, n: usize) -> Result<Spectrum> {
    let series = deconvolve_series(measured, cfg)?;
    series
        .get(n as i64)
        .cloned()
        .ok_or(Error::DegenerateGating { n })
}

/// Dense Gaussian elimination with partial pivoting; the systems here
/// are small (one row per walk step) and strongly diagonally dominant.
fn solve_linear(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            if factor != 0.0 {
                for k in col..=n {
                    m[row][k] -= factor * m[col][k];
                }
            }
        }
    }
    let mut x = vec![0.0f64; n];
    for row in (0..n).rev() {
        let mut acc = m[row][n];
        for col in row + 1..n {
            acc -= m[row][col] * x[col];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}
