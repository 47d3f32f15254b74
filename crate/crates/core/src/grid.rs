//! Sampled complex optical fields and the ideal-lens Fourier transform
//! used to propagate them between sorter planes.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Complex field sampled on a centered rectangular grid.
///
/// Sample (ix, iy) sits at x = (ix - nx/2) dx, y = (iy - ny/2) dy;
/// values are stored row-major as values[iy * nx + ix].
#[derive(Debug, Clone)]
pub struct FieldGrid {
    nx: usize,
    ny: usize,
    dx: f64,
    dy: f64,
    wavelength: f64,
    values: Vec<Complex64>,
}

impl FieldGrid {
    /// All-zero field. Sample counts must be powers of two.
    pub fn zeros(nx: usize, ny: usize, dx: f64, dy: f64, wavelength: f64) -> Result<Self> {
        if nx == 0 || ny == 0 || !nx.is_power_of_two() || !ny.is_power_of_two() {
            return Err(Error::InvalidFieldGrid {
                reason: format!("sample counts must be powers of two, got {nx}x{ny}"),
            });
        }
        if !(dx > 0.0 && dy > 0.0 && wavelength > 0.0) {
            return Err(Error::InvalidFieldGrid {
                reason: format!(
                    "pitch and wavelength must be positive, got dx={dx}, dy={dy}, lambda={wavelength}"
                ),
            });
        }
        Ok(FieldGrid {
            nx,
            ny,
            dx,
            dy,
            wavelength,
            values: vec![Complex64::ZERO; nx * ny],
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dy(&self) -> f64 {
        self.dy
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// x coordinate of column `ix`.
    pub fn x(&self, ix: usize) -> f64 {
        (ix as f64 - (self.nx / 2) as f64) * self.dx
    }

    /// y coordinate of row `iy`.
    pub fn y(&self, iy: usize) -> f64 {
        (iy as f64 - (self.ny / 2) as f64) * self.dy
    }

    pub fn get(&self, ix: usize, iy: usize) -> Complex64 {
        self.values[iy * self.nx + ix]
    }

    pub fn set(&mut self, ix: usize, iy: usize, value: Complex64) {
        self.values[iy * self.nx + ix] = value;
    }

    /// Physical power: sum |E|^2 dx dy.
    pub fn power(&self) -> f64 {
        let cell = self.dx * self.dy;
        self.values.iter().map(|v| v.norm_sqr() * cell).sum()
    }

    /// Grid half-extent along x.
    pub fn half_extent_x(&self) -> f64 {
        (self.nx / 2) as f64 * self.dx
    }

    /// Grid half-extent along y.
    pub fn half_extent_y(&self) -> f64 {
        (self.ny / 2) as f64 * self.dy
    }

    /// Multiplies the field in place by exp(i phase(x, y)).
    pub fn apply_phase<F: Fn(f64, f64) -> f64>(&mut self, phase: F) {
        for iy in 0..self.ny {
            let y = self.y(iy);
            for ix in 0..self.nx {
                let x = self.x(ix);
                let factor = Complex64::from_polar(1.0, phase(x, y));
                self.values[iy * self.nx + ix] *= factor;
            }
        }
    }

    /// Rescales so that power() == 1.
    pub fn normalize_power(&mut self) -> Result<()> {
        let p = self.power();
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::InvalidFieldGrid {
                reason: "cannot normalize a zero-power field".into(),
            });
        }
        let s = 1.0 / p.sqrt();
        for v in &mut self.values {
            *v *= s;
        }
        Ok(())
    }

    /// Ideal-lens Fourier transform: propagates the field through one
    /// focal length, a lens of focal length `f`, and a second focal
    /// length. Output pitch is lambda f / (n dx) per axis; physical
    /// power is conserved exactly (Parseval).
    pub fn lens_ft(&self, f: f64) -> Result<FieldGrid> {
        if !(f > 0.0) {
            return Err(Error::InvalidFieldGrid {
                reason: format!("focal length must be positive, got {f}"),
            });
        }
        let lf = self.wavelength * f;
        let du = lf / (self.nx as f64 * self.dx);
        let dv = lf / (self.ny as f64 * self.dy);
        let mut out = FieldGrid::zeros(self.nx, self.ny, du, dv, self.wavelength)?;

        // Centered-coordinate DFT: shift, transform, shift back.
        let mut buf = self.values.clone();
        fftshift2(&mut buf, self.nx, self.ny);
        fft2(&mut buf, self.nx, self.ny);
        fftshift2(&mut buf, self.nx, self.ny);

        // Continuous-kernel amplitude scale dx dy / (lambda f); the
        // constant 1/i carrier phase is dropped as a global phase.
        let scale = self.dx * self.dy / lf;
        for (o, b) in out.values.iter_mut().zip(buf) {
            *o = b * scale;
        }
        Ok(out)
    }
}

/// In-place 2D FFT (forward, unnormalized), rows then columns.
fn fft2(values: &mut [Complex64], nx: usize, ny: usize) {
    let mut planner = FftPlanner::new();
    let row_fft = planner.plan_fft_forward(nx);
    for row in values.chunks_exact_mut(nx) {
        row_fft.process(row);
    }
    let col_fft = planner.plan_fft_forward(ny);
    let mut col = vec![Complex64::ZERO; ny];
    for ix in 0..nx {
        for iy in 0..ny {
            col[iy] = values[iy * nx + ix];
        }
        col_fft.process(&mut col);
        for iy in 0..ny {
            values[iy * nx + ix] = col[iy];
        }
    }
}

/// Swaps quadrants so the grid center maps to DFT index 0. For the
/// even sizes enforced by `zeros`, the shift is its own inverse.
fn fftshift2(values: &mut [Complex64], nx: usize, ny: usize) {
    let hx = nx / 2;
    let hy = ny / 2;
    for iy in 0..hy {
        for ix in 0..nx {
            let jx = (ix + hx) % nx;
            let a = iy * nx + ix;
            let b = (iy + hy) * nx + jx;
            values.swap(a, b);
        }
    }
}

/// Synthesizes a normalized ring mode with azimuthal winding `l`:
/// (r/w0)^|l| exp(-r^2/w0^2) exp(i l phi) on the given grid geometry.
pub fn oam_mode(
    nx: usize,
    ny: usize,
    dx: f64,
    dy: f64,
    wavelength: f64,
    l: i64,
    w0: f64,
) -> Result<FieldGrid> {
    let mut grid = FieldGrid::zeros(nx, ny, dx, dy, wavelength)?;
    let half = grid.half_extent_x().min(grid.half_extent_y());
    if !(w0 > 0.0) || w0 >= half / 3.0 {
        return Err(Error::WaistTooLarge {
            w0,
            half_extent: half,
        });
    }
    let p = l.unsigned_abs() as i32;
    for iy in 0..ny {
        let y = grid.y(iy);
        for ix in 0..nx {
            let x = grid.x(ix);
            let r = x.hypot(y);
            let amp = (r / w0).powi(p) * (-(r * r) / (w0 * w0)).exp();
            let phi = l as f64 * y.atan2(x);
            grid.set(ix, iy, Complex64::from_polar(amp, phi));
        }
    }
    grid.normalize_power()?;
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    const LAMBDA: f64 = 633e-9;

    #[test]
    fn grid_validation() {
        assert!(FieldGrid::zeros(100, 100, 1e-6, 1e-6, LAMBDA).is_err());
        assert!(FieldGrid::zeros(128, 128, 0.0, 1e-6, LAMBDA).is_err());
        assert!(FieldGrid::zeros(128, 128, 1e-6, 1e-6, LAMBDA).is_ok());
    }

    #[test]
    fn coordinates_are_centered() {
        let g = FieldGrid::zeros(8, 8, 1.0, 2.0, LAMBDA).unwrap();
        assert_eq!(g.x(4), 0.0);
        assert_eq!(g.y(4), 0.0);
        assert_eq!(g.x(0), -4.0);
        assert_eq!(g.y(7), 6.0);
    }

    #[test]
    fn oam_mode_properties() {
        let n = 128;
        let dx = 40e-6;
        let w0 = 4.0 * dx * 8.0 / 8.0; // well inside the waist bound
        let g0 = oam_mode(n, n, dx, dx, LAMBDA, 0, w0).unwrap();
        assert_abs_diff_eq!(g0.power(), 1.0, epsilon = 1e-12);
        // l=0: flat phase, nonzero on axis.
        assert!(g0.get(n / 2, n / 2).norm() > 0.0);

        let g2 = oam_mode(n, n, dx, dx, LAMBDA, 2, w0).unwrap();
        // On-axis zero for l != 0.
        assert_eq!(g2.get(n / 2, n / 2).norm(), 0.0);
        // Winding: phase advances by 2*pi*l around a centered loop.
        let ring = n / 4;
        let a = g2.get(n / 2 + ring, n / 2); // phi = 0
        let b = g2.get(n / 2, n / 2 + ring); // phi = pi/2
        assert_abs_diff_eq!((b.arg() - a.arg()).rem_euclid(2.0 * std::f64::consts::PI), std::f64::consts::PI, epsilon = 1e-9);

        // Opposite charges: same intensity, conjugate phase.
        let gm = oam_mode(n, n, dx, dx, LAMBDA, -2, w0).unwrap();
        for (u, v) in g2.values().iter().zip(gm.values()) {
            assert_abs_diff_eq!(u.norm(), v.norm(), epsilon = 1e-12);
            assert_abs_diff_eq!((u - v.conj()).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn oam_mode_waist_bound() {
        assert!(matches!(
            oam_mode(64, 64, 1e-5, 1e-5, LAMBDA, 0, 1.0),
            Err(Error::WaistTooLarge { .. })
        ));
    }

    #[test]
    fn lens_ft_conserves_power() {
        let n = 256;
        let dx = 30e-6;
        let w0 = 6.0 * dx;
        let g = oam_mode(n, n, dx, dx, LAMBDA, 1, w0).unwrap();
        let f = 0.1;
        let ft = g.lens_ft(f).unwrap();
        assert_relative_eq!(ft.power(), 1.0, max_relative = 1e-9);
        assert_abs_diff_eq!(ft.dx(), LAMBDA * f / (n as f64 * dx), epsilon = 1e-18);
    }

    #[test]
    fn gaussian_transforms_to_gaussian() {
        // FT of a waist-w0 Gaussian is a Gaussian of waist
        // lambda f / (pi w0); compare 1/e^2 intensity radii.
        let n = 512;
        let dx = 20e-6;
        let w0 = 12.0 * dx;
        let g = oam_mode(n, n, dx, dx, LAMBDA, 0, w0).unwrap();
        let f = 0.25;
        let ft = g.lens_ft(f).unwrap();
        let expect_w = LAMBDA * f / (std::f64::consts::PI * w0);
        let peak = ft.get(n / 2, n / 2).norm();
        // Find where the amplitude crosses peak/e along +x.
        let mut radius = 0.0;
        for ix in n / 2..n {
            if ft.get(ix, n / 2).norm() < peak / std::f64::consts::E {
                radius = ft.x(ix);
                break;
            }
        }
        assert_relative_eq!(radius, expect_w, max_relative = 0.1);
    }

    #[test]
    fn double_ft_is_inversion() {
        // Two lens FTs image the field inverted: E(x) -> E(-x).
        let n = 128;
        let dx = 40e-6;
        let g = oam_mode(n, n, dx, dx, LAMBDA, 1, 5.0 * dx).unwrap();
        let f = 0.1;
        let twice = g.lens_ft(f).unwrap().lens_ft(f).unwrap();
        assert_abs_diff_eq!(twice.dx(), g.dx(), epsilon = 1e-18);
        let mut max_diff = 0.0f64;
        for iy in 1..n {
            for ix in 1..n {
                let a = g.get(ix, iy);
                let b = twice.get(n - ix, n - iy);
                max_diff = max_diff.max((a.norm() - b.norm()).abs());
            }
        }
        assert!(max_diff < 1e-9, "inversion mismatch {max_diff}");
    }
}
