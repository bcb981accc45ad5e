//! Uniform midpoint grids in trap units, with each axis tagged as part of
//! the transverse or the longitudinal subspace.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regime::tf_radius_zero;
use crate::units::{Geometry, ScaledProblem};

/// Minimum transverse half-width in ρ₀.
pub const MIN_TRANSVERSE_HALF_WIDTH: f64 = 4.0;
/// Minimum longitudinal half-width as a multiple of R_L0.
pub const MIN_LONGITUDINAL_FACTOR: f64 = 1.5;
pub const DEFAULT_TRANSVERSE_HALF_WIDTH: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisRole {
    Transverse,
    Longitudinal,
}

/// Axis 0 is slowest in memory, axis 2 fastest. Point j of axis i sits at
/// −L_i + (j + ½)h_i with h_i = 2L_i/n_i.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub points: [usize; 3],
    /// Half-widths in ρ₀.
    pub half_width: [f64; 3],
    pub roles: [AxisRole; 3],
}

impl Grid {
    pub fn new(points: [usize; 3], half_width: [f64; 3], roles: [AxisRole; 3]) -> Result<Self> {
        for (&n, &l) in points.iter().zip(&half_width) {
            if n < 2 || !n.is_power_of_two() {
                return Err(Error::InvalidInput(format!("grid points must be powers of two ≥ 2, got {n}")));
            }
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidInput(format!("half-width must be positive, got {l}")));
            }
        }
        Ok(Self {
            points,
            half_width,
            roles,
        })
    }

    /// Desk-scale default: 64×64×512 for cigars (long axis last),
    /// 256×256×64 for pancakes (tight axis last).
    pub fn default_for(p: &ScaledProblem) -> Result<Self> {
        let points = match p.geometry {
            Geometry::Cigar => [64, 64, 512],
            Geometry::Pancake => [256, 256, 64],
        };
        Self::for_problem(p, points)
    }

    /// Standard orientation with the given point counts. The longitudinal
    /// half-width is 1.5·max(R_L0, 3r₀), the transverse one 6ρ₀.
    pub fn for_problem(p: &ScaledProblem, points: [usize; 3]) -> Result<Self> {
        let long = MIN_LONGITUDINAL_FACTOR * longitudinal_extent(p)?;
        let (t, l) = (AxisRole::Transverse, AxisRole::Longitudinal);
        let tw = DEFAULT_TRANSVERSE_HALF_WIDTH;
        let grid = match p.geometry {
            Geometry::Cigar => Self::new(points, [tw, tw, long], [t, t, l])?,
            Geometry::Pancake => Self::new(points, [long, long, tw], [l, l, t])?,
        };
        grid.check_covers(p)?;
        Ok(grid)
    }

    /// Axis `i` of the result is axis `perm[i]` of `self`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        Self {
            points: perm.map(|i| self.points[i]),
            half_width: perm.map(|i| self.half_width[i]),
            roles: perm.map(|i| self.roles[i]),
        }
    }

    /// Checks the axis roles match the geometry and that the box covers
    /// ≥ 4ρ₀ transversely and ≥ 1.5·R_L0 longitudinally.
    pub fn check_covers(&self, p: &ScaledProblem) -> Result<()> {
        let n_long = self.longitudinal_axes().len() as u32;
        if n_long != p.d() {
            return Err(Error::GridTooSmall(format!(
                "grid has {n_long} longitudinal axes but the geometry needs {}",
                p.d()
            )));
        }
        let r_l0 = if p.n > 1.0 { tf_radius_zero(p)? } else { 0.0 };
        for i in 0..3 {
            let (need, what) = match self.roles[i] {
                AxisRole::Transverse => (MIN_TRANSVERSE_HALF_WIDTH, "4ρ0".to_string()),
                AxisRole::Longitudinal => (MIN_LONGITUDINAL_FACTOR * r_l0, format!("1.5·R_L0 = {:.3}ρ0", 1.5 * r_l0)),
            };
            if self.half_width[i] < need {
                return Err(Error::GridTooSmall(format!(
                    "axis {i} half-width {:.3}ρ0 is below {what}",
                    self.half_width[i]
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        2.0 * self.half_width[axis] / self.points[axis] as f64
    }

    pub fn coords(&self, axis: usize) -> Vec<f64> {
        let h = self.spacing(axis);
        let l = self.half_width[axis];
        (0..self.points[axis]).map(|j| -l + (j as f64 + 0.5) * h).collect()
    }

    /// Midpoint quadrature weight (cell volume).
    pub fn cell_volume(&self) -> f64 {
        (0..3).map(|i| self.spacing(i)).product()
    }

    pub fn axes_with(&self, role: AxisRole) -> Vec<usize> {
        (0..3).filter(|&i| self.roles[i] == role).collect()
    }

    pub fn transverse_axes(&self) -> Vec<usize> {
        self.axes_with(AxisRole::Transverse)
    }

    pub fn longitudinal_axes(&self) -> Vec<usize> {
        self.axes_with(AxisRole::Longitudinal)
    }

    pub fn strides(&self) -> [usize; 3] {
        [self.points[1] * self.points[2], self.points[2], 1]
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.points[1] + j) * self.points[2] + k
    }

    /// Peak memory of a relaxation in bytes: the real field, a half-spectrum
    /// complex buffer, the potential, and per-thread line scratch.
    pub fn relaxation_memory_bytes(&self) -> u64 {
        let n = self.len() as u64;
        let spectrum = (self.len() / self.points[2] * (self.points[2] / 2 + 1)) as u64;
        8 * (3 * n) + 16 * spectrum
    }

    /// Transverse radius ρ and longitudinal radius r of a grid point.
    pub(crate) fn radii(&self, coords: &[Vec<f64>; 3], idx: [usize; 3]) -> (f64, f64) {
        let mut rho2 = 0.0;
        let mut r2 = 0.0;
        for axis in 0..3 {
            let x = coords[axis][idx[axis]];
            match self.roles[axis] {
                AxisRole::Transverse => rho2 += x * x,
                AxisRole::Longitudinal => r2 += x * x,
            }
        }
        (rho2.sqrt(), r2.sqrt())
    }

    /// Number of points in the subspace spanned by the axes with `role`.
    pub fn subspace_len(&self, role: AxisRole) -> usize {
        self.axes_with(role).iter().map(|&i| self.points[i]).product()
    }

    /// Row-major index of a point within the subspace of `role`.
    pub fn subspace_index(&self, idx: [usize; 3], role: AxisRole) -> usize {
        self.axes_with(role)
            .iter()
            .fold(0, |acc, &i| acc * self.points[i] + idx[i])
    }

    /// Calls `f(flat, [i, j, k])` for every point in memory order.
    pub fn for_each_index<F: FnMut(usize, [usize; 3])>(&self, mut f: F) {
        let [nx, ny, nz] = self.points;
        let mut flat = 0;
        for i in 0..nx {
            for j in 0..ny {
                for k in 0..nz {
                    f(flat, [i, j, k]);
                    flat += 1;
                }
            }
        }
    }

    pub(crate) fn all_coords(&self) -> [Vec<f64>; 3] {
        [self.coords(0), self.coords(1), self.coords(2)]
    }
}

/// max(R_L0, 3r₀), or 3r₀ without interactions.
fn longitudinal_extent(p: &ScaledProblem) -> Result<f64> {
    let r0 = p.r0();
    if p.n > 1.0 {
        Ok(tf_radius_zero(p)?.max(3.0 * r0))
    } else {
        Ok(3.0 * r0)
    }
}
