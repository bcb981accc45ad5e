//! Real-to-complex 3D FFT on a row-major [x][y][z] field.
//!
//! The half spectrum is stored plane by plane, [kz][x][y], so every kz plane
//! is contiguous and the y/x passes parallelize over planes.

use std::sync::Arc;

use rayon::prelude::*;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

pub(crate) type C64 = Complex<f64>;

pub(crate) struct Fft3 {
    n: [usize; 3],
    nzh: usize,
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    fwd: [Arc<dyn Fft<f64>>; 2],
    inv: [Arc<dyn Fft<f64>>; 2],
    lines: Vec<C64>,
}

impl Fft3 {
    pub(crate) fn new(n: [usize; 3]) -> Self {
        let mut real = RealFftPlanner::<f64>::new();
        let mut cplx = FftPlanner::<f64>::new();
        Self {
            n,
            nzh: n[2] / 2 + 1,
            r2c: real.plan_fft_forward(n[2]),
            c2r: real.plan_fft_inverse(n[2]),
            fwd: [cplx.plan_fft_forward(n[0]), cplx.plan_fft_forward(n[1])],
            inv: [cplx.plan_fft_inverse(n[0]), cplx.plan_fft_inverse(n[1])],
            lines: vec![C64::default(); n[0] * n[1] * (n[2] / 2 + 1)],
        }
    }

    pub(crate) fn spectrum_len(&self) -> usize {
        self.n[0] * self.n[1] * self.nzh
    }

    pub(crate) fn half_len(&self) -> usize {
        self.nzh
    }

    /// Unnormalized forward transform. `input` is used as scratch.
    pub(crate) fn forward(&mut self, input: &mut [f64], spectrum: &mut [C64]) {
        let [nx, ny, nz] = self.n;
        let nzh = self.nzh;
        let r2c = &self.r2c;
        input
            .par_chunks_mut(nz)
            .zip(self.lines.par_chunks_mut(nzh))
            .for_each_init(
                || r2c.make_scratch_vec(),
                |scratch, (inp, out)| {
                    r2c.process_with_scratch(inp, out, scratch).expect("r2c length");
                },
            );
        let lines = &self.lines;
        let fwd = &self.fwd;
        spectrum
            .par_chunks_mut(nx * ny)
            .enumerate()
            .for_each(|(kz, plane)| {
                for (ij, v) in plane.iter_mut().enumerate() {
                    *v = lines[ij * nzh + kz];
                }
                transform_plane(plane, nx, ny, &fwd[1], &fwd[0]);
            });
    }

    /// Normalized inverse transform. `spectrum` is used as scratch.
    pub(crate) fn inverse(&mut self, spectrum: &mut [C64], output: &mut [f64]) {
        let [nx, ny, nz] = self.n;
        let nzh = self.nzh;
        let inv = &self.inv;
        spectrum
            .par_chunks_mut(nx * ny)
            .for_each(|plane| transform_plane(plane, nx, ny, &inv[1], &inv[0]));
        let spec: &[C64] = spectrum;
        self.lines
            .par_chunks_mut(nzh)
            .enumerate()
            .for_each(|(ij, line)| {
                for (kz, v) in line.iter_mut().enumerate() {
                    *v = spec[kz * nx * ny + ij];
                }
                // the DC and Nyquist bins of a real signal are real
                line[0].im = 0.0;
                if nz % 2 == 0 {
                    line[nzh - 1].im = 0.0;
                }
            });
        let c2r = &self.c2r;
        let scale = 1.0 / (nx * ny * nz) as f64;
        self.lines
            .par_chunks_mut(nzh)
            .zip(output.par_chunks_mut(nz))
            .for_each_init(
                || c2r.make_scratch_vec(),
                |scratch, (inp, out)| {
                    c2r.process_with_scratch(inp, out, scratch).expect("c2r length");
                    out.iter_mut().for_each(|v| *v *= scale);
                },
            );
    }
}

/// In-place 2D transform of an [x][y] plane: rows along y, then columns
/// along x through a transpose.
fn transform_plane(plane: &mut [C64], nx: usize, ny: usize, along_y: &Arc<dyn Fft<f64>>, along_x: &Arc<dyn Fft<f64>>) {
    along_y.process(plane);
    let mut t = vec![C64::default(); nx * ny];
    for i in 0..nx {
        for j in 0..ny {
            t[j * nx + i] = plane[i * ny + j];
        }
    }
    along_x.process(&mut t);
    for i in 0..nx {
        for j in 0..ny {
            plane[i * ny + j] = t[j * nx + i];
        }
    }
}

/// Angular wavenumbers of an n-point periodic grid of length 2L, in FFT order.
pub(crate) fn wavenumbers(n: usize, half_width: f64) -> Vec<f64> {
    let dk = std::f64::consts::PI / half_width;
    (0..n)
        .map(|j| {
            let m = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
            m * dk
        })
        .collect()
}
