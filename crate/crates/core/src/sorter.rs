//! Fourier-optics simulation of the log-polar OAM mode sorter.
//!
//! The sorter maps azimuthal phase windings to transverse spot
//! positions with two phase elements: an unwrapper that conformally
//! maps rings to strips, and a phase corrector in the Fourier plane.
//! A multi-copy (fan-out) variant replicates the unwrapped strip to
//! sharpen the output spots. Detection bins the final-plane intensity
//! into OAM channels.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::grid::{oam_mode, FieldGrid};
use crate::spectrum::Spectrum;

/// Samples per spot spacing in the detection plane. Five samples put
/// every bin edge between pixels, which keeps binning exactly mirror
/// symmetric under l -> -l.
const SAMPLES_PER_SPACING: usize = 5;

/// Default grid resolution (power of two, per FieldGrid).
const DEFAULT_SAMPLES: usize = 1024;

/// Geometry of one sorter build plus its simulation grid defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct SorterDesign {
    /// Unwrapped beam length (m); sets the spot pitch lambda f / d.
    pub d: f64,
    /// Translation parameter of the log-polar map (m).
    pub b: f64,
    /// Transforming focal length (m).
    pub f: f64,
    /// Design wavelength (m).
    pub wavelength: f64,
    /// Number of fan-out copies (odd; 1 disables the fan-out).
    pub copies: usize,
    /// Fan-out angular separation between copies (rad).
    pub omega: f64,
    /// Fan-out amplitude weights per order m = -N..N.
    pub gamma: Vec<f64>,
    /// Fan-out phase offsets per order m = -N..N (rad).
    pub alpha: Vec<f64>,
    /// Simulation samples per axis.
    pub samples: usize,
}

impl SorterDesign {
    /// Builds a design, optimizing the fan-out parameters numerically
    /// when `copies` > 1.
    pub fn new(d: f64, f: f64, wavelength: f64, copies: usize) -> Result<Self> {
        if !(d > 0.0 && f > 0.0 && wavelength > 0.0) {
            return Err(Error::InvalidSorterDesign {
                reason: format!("d, f, wavelength must be positive, got d={d}, f={f}, lambda={wavelength}"),
            });
        }
        if copies == 0 || copies % 2 == 0 {
            return Err(Error::InvalidSorterDesign {
                reason: format!("copy count must be odd and positive, got {copies}"),
            });
        }
        let samples = DEFAULT_SAMPLES;
        // Grid pitch puts SAMPLES_PER_SPACING pixels on each spot
        // spacing of the detection plane (which shares this pitch
        // after the two lens transforms).
        let dx = wavelength * f / (SAMPLES_PER_SPACING as f64 * d);
        let extent = samples as f64 * dx;
        let b = extent / 20.0;
        // Copies separated by exactly one spot pitch: deflection
        // f * omega = d.
        let omega = d / f;
        let orders = copies as i64 / 2;
        let (gamma, alpha) = if copies == 1 {
            (vec![1.0], vec![0.0])
        } else {
            optimize_fanout(orders)
        };
        Ok(SorterDesign {
            d,
            b,
            f,
            wavelength,
            copies,
            omega,
            gamma,
            alpha,
            samples,
        })
    }

    /// Refractive sorter build: d = 10.5 mm, f = 500 mm.
    pub fn refractive() -> Self {
        SorterDesign::new(10.5e-3, 500e-3, 633e-9, 1).unwrap()
    }

    /// Single-copy diffractive build: d = 1.12 mm, f = 100 mm.
    pub fn one_copy() -> Self {
        SorterDesign::new(1.12e-3, 100e-3, 633e-9, 1).unwrap()
    }

    /// Three-copy fan-out build: d = 0.5 mm, f = 100 mm.
    pub fn three_copy() -> Self {
        SorterDesign::new(0.5e-3, 100e-3, 633e-9, 3).unwrap()
    }

    /// Input/element-plane sample pitch (m).
    pub fn grid_pitch(&self) -> f64 {
        self.wavelength * self.f / (SAMPLES_PER_SPACING as f64 * self.d)
    }

    /// Input beam waist used for synthesized modes (m).
    pub fn beam_waist(&self) -> f64 {
        self.samples as f64 * self.grid_pitch() / 20.0
    }

    /// Spot spacing in the detection plane: lambda f / d.
    pub fn spot_spacing(&self) -> f64 {
        self.wavelength * self.f / self.d
    }

    /// Synthesizes the input ring mode for winding `l` on this
    /// design's grid.
    pub fn input_mode(&self, l: i64) -> Result<FieldGrid> {
        let dx = self.grid_pitch();
        oam_mode(
            self.samples,
            self.samples,
            dx,
            dx,
            self.wavelength,
            l,
            self.beam_waist(),
        )
    }
}

/// Unwrapper element phase at (x, y):
/// (d / lambda f) * [y atan2(y, x) - x ln(r/b) + x]; 0 at the origin.
pub fn unwrapper_phase(design: &SorterDesign, x: f64, y: f64) -> f64 {
    let r = x.hypot(y);
    if r == 0.0 {
        return 0.0;
    }
    let scale = design.d / (design.wavelength * design.f);
    scale * (y * y.atan2(x) - x * (r / design.b).ln() + x)
}

/// Corrector element phase at Fourier-plane coordinates (u, v):
/// (d b / lambda f) * exp(-2 pi u / d) * cos(2 pi v / d).
pub fn corrector_phase(design: &SorterDesign, u: f64, v: f64) -> f64 {
    let scale = design.d * design.b / (design.wavelength * design.f);
    scale * (-TAU * u / design.d).exp() * (TAU * v / design.d).cos()
}

/// Fan-out element phase at transverse position x: the argument of
/// sum_m gamma_m exp(i ((2 pi omega / lambda) m x + alpha_m)).
pub fn fanout_phase(design: &SorterDesign, x: f64) -> f64 {
    if design.copies == 1 {
        return 0.0;
    }
    let k = TAU * design.omega / design.wavelength;
    let orders = design.copies as i64 / 2;
    let mut acc = Complex64::ZERO;
    for (i, m) in (-orders..=orders).enumerate() {
        acc += Complex64::from_polar(design.gamma[i], k * m as f64 * x + design.alpha[i]);
    }
    acc.arg()
}

/// Fourier coefficients c_m of exp(i phase(y)) over one fan-out
/// period, for m = -orders..orders. |c_m|^2 is the power diffracted
/// into copy m; arg(c_m) is the phase offset that copy picks up.
fn fanout_orders(design: &SorterDesign, orders: i64) -> Vec<Complex64> {
    let period = design.wavelength / design.omega;
    let n = 4096;
    let k = TAU / period;
    (-orders..=orders)
        .map(|m| {
            let mut acc = Complex64::ZERO;
            for i in 0..n {
                let y = (i as f64 + 0.5) / n as f64 * period;
                let phase = fanout_phase(design, y) - k * m as f64 * y;
                acc += Complex64::from_polar(1.0, phase);
            }
            acc / n as f64
        })
        .collect()
}

/// Finds (gamma, alpha) for a symmetric 2*orders+1 fan-out maximizing
/// the weakest copy's diffraction efficiency. The profile is
/// arg(1 + gamma e^{i(ky + alpha)} + gamma e^{i(-ky + alpha)}), i.e.
/// both side orders share one amplitude and one phase offset.
fn optimize_fanout(orders: i64) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(orders, 1, "only the three-copy fan-out is built");
    let eval = |g: f64, a: f64| -> f64 {
        let n = 2048;
        // Weakest of |c_-1|^2, |c_0|^2, |c_1|^2 for the profile
        // arg(1 + 2 g cos(t) e^{i a}) over one period t in [0, 2 pi).
        let mut c = [Complex64::ZERO; 3];
        for i in 0..n {
            let t = (i as f64 + 0.5) / n as f64 * TAU;
            let field = Complex64::new(1.0, 0.0)
                + Complex64::from_polar(g, t + a)
                + Complex64::from_polar(g, -t + a);
            let ph = field.arg();
            for (j, m) in (-1i64..=1).enumerate() {
                c[j] += Complex64::from_polar(1.0, ph - m as f64 * t);
            }
        }
        c.iter().map(|v| (v / n as f64).norm_sqr()).fold(f64::INFINITY, f64::min)
    };
    let mut best = (1.3, 1.5, eval(1.3, 1.5));
    let mut span_g = 0.5;
    let mut span_a = 0.8;
    for _ in 0..6 {
        let (g0, a0, _) = best;
        for ig in -8i32..=8 {
            for ia in -8i32..=8 {
                let g = g0 + span_g * ig as f64 / 8.0;
                let a = a0 + span_a * ia as f64 / 8.0;
                if g <= 0.0 {
                    continue;
                }
                let score = eval(g, a);
                if score > best.2 {
                    best = (g, a, score);
                }
            }
        }
        span_g /= 8.0;
        span_a /= 8.0;
    }
    let (g, a, _) = best;
    (vec![g, 1.0, g], vec![a, 0.0, a])
}

/// Runs a field through the full sorter: unwrapper (with the fan-out
/// folded in when copies > 1), lens transform, corrector with
/// per-copy phase stitching, and a final lens transform to the
/// detection plane. Power is conserved (phase-only elements between
/// unitary transforms).
pub fn sorter_pipeline(input: &FieldGrid, design: &SorterDesign) -> Result<FieldGrid> {
    let dx = design.grid_pitch();
    if (input.dx() - dx).abs() > 1e-12 * dx || input.nx() != design.samples {
        return Err(Error::InvalidFieldGrid {
            reason: "input grid does not match the design sampling".into(),
        });
    }
    // Nyquist guard on the unwrapper's radial phase gradient at the
    // grid corner: (d / lambda f) ln(r_max / b) must stay below pi/dx.
    let r_max = std::f64::consts::SQRT_2 * input.half_extent_x();
    let grad = design.d / (design.wavelength * design.f) * (r_max / design.b).ln().abs();
    let limit = PI / grad.max(f64::MIN_POSITIVE);
    if dx > limit {
        return Err(Error::SamplingTooCoarse { dx, limit });
    }

    let mut field = input.clone();
    field.apply_phase(|x, y| unwrapper_phase(design, x, y) + fanout_phase(design, y));
    let mut fp = field.lens_ft(design.f)?;
    if design.copies > 1 {
        let orders = design.copies as i64 / 2;
        let coeffs = fanout_orders(design, orders);
        // Order m deflects by m * f * omega = m * d along v and
        // carries the phase of its diffraction coefficient; undo that
        // phase so the copies stitch into one coherent strip.
        let pitch = design.d;
        fp.apply_phase(|u, v| {
            let m = (v / pitch).round() as i64;
            let stitch = if m.abs() <= orders {
                -coeffs[(m + orders) as usize].arg()
            } else {
                0.0
            };
            -corrector_phase(design, u, v) + stitch
        });
    } else {
        fp.apply_phase(|u, v| -corrector_phase(design, u, v));
    }
    fp.lens_ft(design.f)
}

/// OAM-dependent spot position in the detection plane: t = lambda f l / d.
pub fn spot_position(design: &SorterDesign, l: i64) -> f64 {
    design.wavelength * design.f * l as f64 / design.d
}

/// Integrates detection-plane intensity into bins of one spot spacing
/// centered on each spot position, full grid height, normalized over
/// `lmin..=lmax`.
pub fn bin_spectrum(field: &FieldGrid, design: &SorterDesign, lmin: i64, lmax: i64) -> Result<Spectrum> {
    if lmin > lmax {
        return Err(Error::InvalidLatticeBounds { lmin, lmax });
    }
    // Binning assumes the detection plane carries exactly
    // SAMPLES_PER_SPACING pixels per spot spacing, which the two-lens
    // chain guarantees for fields sampled at the design pitch.
    let expected_dy = design.spot_spacing() / SAMPLES_PER_SPACING as f64;
    if (field.dy() - expected_dy).abs() > 1e-9 * expected_dy {
        return Err(Error::InvalidFieldGrid {
            reason: "field pitch does not match the design's detection sampling".into(),
        });
    }
    let ny = field.ny();
    let half = ny as i64 / 2;
    let spp = SAMPLES_PER_SPACING as i64;
    // The outermost bins must fit on the grid.
    if lmin * spp - spp / 2 + half < 0 || lmax * spp + spp / 2 + half >= ny as i64 {
        return Err(Error::BinsExceedGrid { lmin, lmax });
    }
    let mut weights = vec![0.0f64; (lmax - lmin + 1) as usize];
    for iy in 0..ny {
        // Nearest spot index for this row; grid pitch is exactly one
        // fifth of the spot spacing, so the division is exact in
        // units of pixels.
        let rel = iy as i64 - half;
        let l = (rel as f64 / spp as f64).round() as i64;
        if l < lmin || l > lmax {
            continue;
        }
        let mut row_power = 0.0;
        for ix in 0..field.nx() {
            row_power += field.get(ix, iy).norm_sqr();
        }
        weights[(l - lmin) as usize] += row_power * field.dx() * field.dy();
    }
    Spectrum::from_weights(lmin, weights)
}

/// Detected-weight fractions: row = input winding, column = detected
/// bin, both over lmin..=lmax. Rows are normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct CrosstalkMatrix {
    lmin: i64,
    rows: Vec<Vec<f64>>,
}

impl CrosstalkMatrix {
    pub fn lmin(&self) -> i64 {
        self.lmin
    }

    pub fn lmax(&self) -> i64 {
        self.lmin + self.rows.len() as i64 - 1
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Fraction of input `l_in` detected in bin `l_out`.
    pub fn entry(&self, l_in: i64, l_out: i64) -> f64 {
        let row = (l_in - self.lmin) as usize;
        let col = (l_out - self.lmin) as usize;
        self.rows[row][col]
    }

    pub fn row(&self, l_in: i64) -> &[f64] {
        &self.rows[(l_in - self.lmin) as usize]
    }

    /// Fraction detected in the correct bin for input `l`.
    pub fn diagonal(&self, l: i64) -> f64 {
        self.entry(l, l)
    }

    /// Mean over rows of the weight landing outside the correct bin.
    pub fn mean_leakage(&self) -> f64 {
        let n = self.rows.len() as f64;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| 1.0 - row[i])
            .sum::<f64>()
            / n
    }
}

/// Simulates one input mode per row and bins its output.
pub fn crosstalk_matrix(design: &SorterDesign, lmin: i64, lmax: i64) -> Result<CrosstalkMatrix> {
    if lmin > lmax {
        return Err(Error::InvalidLatticeBounds { lmin, lmax });
    }
    let rows: Result<Vec<Vec<f64>>> = (lmin..=lmax)
        .into_par_iter()
        .map(|l| {
            let input = design.input_mode(l)?;
            let out = sorter_pipeline(&input, design)?;
            let spec = bin_spectrum(&out, design, lmin, lmax)?;
            Ok(spec.weights().to_vec())
        })
        .collect();
    Ok(CrosstalkMatrix { lmin, rows: rows? })
}
