//! Discrete axisymmetric fields on uniform (r, z) grids with the cylindrical
//! differential operators, residuals and boundary identities used everywhere
//! downstream.
//!
//! Grids are node-centered and non-staggered. The axis is handled by parity
//! ghosts (u^r, u^theta odd; u^z and scalars even across r = 0); z boundaries
//! are either slab walls (z in [0,1]) or periodic (z in [-pi, pi)). All
//! stencils are second order, one-sided at non-periodic boundaries.

use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZMode {
    SlabDirichlet,
    Periodic,
}

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("grid too coarse: n_r = {n_r}, n_z = {n_z} (need >= 8)")]
    GridTooCoarse { n_r: usize, n_z: usize },
    #[error("operation requires {expected:?} mode, grid is {actual:?}")]
    ModeMismatch { expected: ZMode, actual: ZMode },
    #[error("grids do not match")]
    GridMismatch,
    #[error("ball of radius {r0} around (r={r}, z={z}) leaves the domain")]
    BallOutsideDomain { r: f64, z: f64, r0: f64 },
    #[error("field file: {0}")]
    Io(#[from] std::io::Error),
    #[error("field file header: {0}")]
    Header(String),
}

/// Uniform node-centered grid over [0, r_max] x z-extent.
///
/// `n_r` and `n_z` are cell counts; slab grids carry n_z + 1 z-nodes
/// (walls included), periodic grids n_z nodes with wraparound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiGrid {
    pub r_max: f64,
    pub n_r: usize,
    pub n_z: usize,
    pub mode: ZMode,
}

impl AxiGrid {
    pub fn new(r_max: f64, n_r: usize, n_z: usize, mode: ZMode) -> Result<Self, FieldError> {
        if n_r < 8 || n_z < 8 {
            return Err(FieldError::GridTooCoarse { n_r, n_z });
        }
        Ok(AxiGrid { r_max, n_r, n_z, mode })
    }

    pub fn h_r(&self) -> f64 {
        self.r_max / self.n_r as f64
    }

    pub fn z_extent(&self) -> (f64, f64) {
        match self.mode {
            ZMode::SlabDirichlet => (0.0, 1.0),
            ZMode::Periodic => (-std::f64::consts::PI, std::f64::consts::PI),
        }
    }

    pub fn h_z(&self) -> f64 {
        let (lo, hi) = self.z_extent();
        (hi - lo) / self.n_z as f64
    }

    pub fn nodes_r(&self) -> usize {
        self.n_r + 1
    }

    pub fn nodes_z(&self) -> usize {
        match self.mode {
            ZMode::SlabDirichlet => self.n_z + 1,
            ZMode::Periodic => self.n_z,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes_r() * self.nodes_z()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn r(&self, i: usize) -> f64 {
        i as f64 * self.h_r()
    }

    #[inline]
    pub fn z(&self, j: usize) -> f64 {
        self.z_extent().0 + j as f64 * self.h_z()
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.nodes_z() + j
    }
}

/// Radial parity of a quantity across the axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiScalarField {
    pub grid: AxiGrid,
    pub values: Vec<f64>,
}

impl AxiScalarField {
    pub fn zeros(grid: &AxiGrid) -> Self {
        AxiScalarField { grid: grid.clone(), values: vec![0.0; grid.len()] }
    }

    pub fn from_fn(grid: &AxiGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut v = vec![0.0; grid.len()];
        for i in 0..grid.nodes_r() {
            for j in 0..grid.nodes_z() {
                v[grid.idx(i, j)] = f(grid.r(i), grid.z(j));
            }
        }
        AxiScalarField { grid: grid.clone(), values: v }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiVectorField {
    pub grid: AxiGrid,
    pub ur: Vec<f64>,
    pub utheta: Vec<f64>,
    pub uz: Vec<f64>,
}

impl AxiVectorField {
    pub fn zeros(grid: &AxiGrid) -> Self {
        let n = grid.len();
        AxiVectorField {
            grid: grid.clone(),
            ur: vec![0.0; n],
            utheta: vec![0.0; n],
            uz: vec![0.0; n],
        }
    }

    pub fn from_fns(
        grid: &AxiGrid,
        fr: impl Fn(f64, f64) -> f64,
        ft: impl Fn(f64, f64) -> f64,
        fz: impl Fn(f64, f64) -> f64,
    ) -> Self {
        let mut out = Self::zeros(grid);
        for i in 0..grid.nodes_r() {
            for j in 0..grid.nodes_z() {
                let (r, z) = (grid.r(i), grid.z(j));
                let k = grid.idx(i, j);
                out.ur[k] = fr(r, z);
                out.utheta[k] = ft(r, z);
                out.uz[k] = fz(r, z);
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        let m = |v: &Vec<f64>| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        m(&self.ur).max(m(&self.utheta)).max(m(&self.uz))
    }
}

// ---------------------------------------------------------------------------
// Stencils. All take the flat array plus grid and return nodal derivatives.
// ---------------------------------------------------------------------------

pub(crate) struct Stencil<'a> {
    pub grid: &'a AxiGrid,
    pub v: &'a [f64],
    pub parity: Parity,
}

impl<'a> Stencil<'a> {
    pub fn new(grid: &'a AxiGrid, v: &'a [f64], parity: Parity) -> Self {
        Stencil { grid, v, parity }
    }

    #[inline]
    fn val(&self, i: isize, j: usize) -> f64 {
        // radial ghost by parity
        if i < 0 {
            let m = self.v[self.grid.idx((-i) as usize, j)];
            match self.parity {
                Parity::Odd => -m,
                Parity::Even => m,
            }
        } else {
            self.v[self.grid.idx(i as usize, j)]
        }
    }

    #[inline]
    fn zval(&self, i: usize, j: isize) -> f64 {
        let nz = self.grid.nodes_z() as isize;
        match self.grid.mode {
            ZMode::Periodic => self.v[self.grid.idx(i, j.rem_euclid(nz) as usize)],
            ZMode::SlabDirichlet => self.v[self.grid.idx(i, j as usize)],
        }
    }

    /// d/dr, second order (parity ghost at the axis, one-sided at r_max).
    pub fn dr(&self, i: usize, j: usize) -> f64 {
        let h = self.grid.h_r();
        let n = self.grid.n_r;
        if i == n {
            (3.0 * self.val(i as isize, j) - 4.0 * self.val(i as isize - 1, j)
                + self.val(i as isize - 2, j))
                / (2.0 * h)
        } else {
            (self.val(i as isize + 1, j) - self.val(i as isize - 1, j)) / (2.0 * h)
        }
    }

    /// d2/dr2, second order.
    pub fn d2r(&self, i: usize, j: usize) -> f64 {
        let h = self.grid.h_r();
        let n = self.grid.n_r;
        if i == n {
            (2.0 * self.val(i as isize, j) - 5.0 * self.val(i as isize - 1, j)
                + 4.0 * self.val(i as isize - 2, j)
                - self.val(i as isize - 3, j))
                / (h * h)
        } else {
            (self.val(i as isize + 1, j) - 2.0 * self.val(i as isize, j)
                + self.val(i as isize - 1, j))
                / (h * h)
        }
    }

    /// d/dz, second order (wraps in periodic mode, one-sided at slab walls).
    pub fn dz(&self, i: usize, j: usize) -> f64 {
        let h = self.grid.h_z();
        match self.grid.mode {
            ZMode::Periodic => {
                (self.zval(i, j as isize + 1) - self.zval(i, j as isize - 1)) / (2.0 * h)
            }
            ZMode::SlabDirichlet => {
                let n = self.grid.n_z;
                if j == 0 {
                    (-3.0 * self.zval(i, 0) + 4.0 * self.zval(i, 1) - self.zval(i, 2)) / (2.0 * h)
                } else if j == n {
                    (3.0 * self.zval(i, j as isize) - 4.0 * self.zval(i, j as isize - 1)
                        + self.zval(i, j as isize - 2))
                        / (2.0 * h)
                } else {
                    (self.zval(i, j as isize + 1) - self.zval(i, j as isize - 1)) / (2.0 * h)
                }
            }
        }
    }

    /// d2/dz2, second order.
    pub fn d2z(&self, i: usize, j: usize) -> f64 {
        let h = self.grid.h_z();
        match self.grid.mode {
            ZMode::Periodic => {
                (self.zval(i, j as isize + 1) - 2.0 * self.zval(i, j as isize)
                    + self.zval(i, j as isize - 1))
                    / (h * h)
            }
            ZMode::SlabDirichlet => {
                let n = self.grid.n_z;
                if j == 0 {
                    (2.0 * self.zval(i, 0) - 5.0 * self.zval(i, 1) + 4.0 * self.zval(i, 2)
                        - self.zval(i, 3))
                        / (h * h)
                } else if j == n {
                    (2.0 * self.zval(i, j as isize) - 5.0 * self.zval(i, j as isize - 1)
                        + 4.0 * self.zval(i, j as isize - 2)
                        - self.zval(i, j as isize - 3))
                        / (h * h)
                } else {
                    (self.zval(i, j as isize + 1) - 2.0 * self.zval(i, j as isize)
                        + self.zval(i, j as isize - 1))
                        / (h * h)
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

fn check_grid(grid: &AxiGrid) -> Result<(), FieldError> {
    if grid.n_r < 8 || grid.n_z < 8 {
        return Err(FieldError::GridTooCoarse { n_r: grid.n_r, n_z: grid.n_z });
    }
    Ok(())
}

/// Vorticity of an axisymmetric field:
/// w^r = -dz u^th, w^th = dz u^r - dr u^z, w^z = (1/r) dr (r u^th).
pub fn curl_axisym(u: &AxiVectorField) -> Result<AxiVectorField, FieldError> {
    check_grid(&u.grid)?;
    let g = &u.grid;
    let sut = Stencil::new(g, &u.utheta, Parity::Odd);
    let sur = Stencil::new(g, &u.ur, Parity::Odd);
    let suz = Stencil::new(g, &u.uz, Parity::Even);
    let mut w = AxiVectorField::zeros(g);
    for i in 0..g.nodes_r() {
        let r = g.r(i);
        for j in 0..g.nodes_z() {
            let k = g.idx(i, j);
            w.ur[k] = -sut.dz(i, j);
            w.utheta[k] = sur.dz(i, j) - suz.dr(i, j);
            w.uz[k] = if i == 0 {
                2.0 * sut.dr(0, j)
            } else {
                sut.dr(i, j) + u.utheta[k] / r
            };
        }
    }
    Ok(w)
}

/// Cylindrical divergence dr u^r + u^r/r + dz u^z as a residual field.
pub fn divergence_axisym(u: &AxiVectorField) -> Result<AxiScalarField, FieldError> {
    check_grid(&u.grid)?;
    let g = &u.grid;
    let sur = Stencil::new(g, &u.ur, Parity::Odd);
    let suz = Stencil::new(g, &u.uz, Parity::Even);
    let mut d = AxiScalarField::zeros(g);
    for i in 0..g.nodes_r() {
        let r = g.r(i);
        for j in 0..g.nodes_z() {
            let k = g.idx(i, j);
            d.values[k] = if i == 0 {
                2.0 * sur.dr(0, j) + suz.dz(0, j)
            } else {
                sur.dr(i, j) + u.ur[k] / r + suz.dz(i, j)
            };
        }
    }
    Ok(d)
}

/// Gamma = r u^theta.
pub fn gamma_of(u: &AxiVectorField) -> AxiScalarField {
    let g = &u.grid;
    let mut out = AxiScalarField::zeros(g);
    for i in 0..g.nodes_r() {
        let r = g.r(i);
        for j in 0..g.nodes_z() {
            out.values[g.idx(i, j)] = r * u.utheta[g.idx(i, j)];
        }
    }
    out
}

/// Discrete residuals of the wall identities for the vorticity:
/// dz w^r = 0 and w^z = 0 on z in {0, 1}, and int_0^1 w^r dz = 0.
#[derive(Clone, Debug, Serialize)]
pub struct BoundaryReport {
    pub dz_wr_wall_sup: f64,
    pub wz_wall_sup: f64,
    pub int_wr_max: f64,
}

pub fn boundary_identities(u: &AxiVectorField) -> Result<BoundaryReport, FieldError> {
    if u.grid.mode != ZMode::SlabDirichlet {
        return Err(FieldError::ModeMismatch {
            expected: ZMode::SlabDirichlet,
            actual: u.grid.mode,
        });
    }
    let w = curl_axisym(u)?;
    let g = &u.grid;
    let swr = Stencil::new(g, &w.ur, Parity::Odd);
    let mut dz_sup = 0.0_f64;
    let mut wz_sup = 0.0_f64;
    let mut int_max = 0.0_f64;
    let h_z = g.h_z();
    for i in 0..g.nodes_r() {
        for &j in &[0usize, g.n_z] {
            dz_sup = dz_sup.max(swr.dz(i, j).abs());
            wz_sup = wz_sup.max(w.uz[g.idx(i, j)].abs());
        }
        let mut acc = 0.0;
        for j in 0..=g.n_z {
            let wgt = if j == 0 || j == g.n_z { 0.5 } else { 1.0 };
            acc += wgt * w.ur[g.idx(i, j)];
        }
        int_max = int_max.max((acc * h_z).abs());
    }
    Ok(BoundaryReport { dz_wr_wall_sup: dz_sup, wz_wall_sup: wz_sup, int_wr_max: int_max })
}

/// Residual fields of the four steady axisymmetric Navier-Stokes equations
/// (unit viscosity, no forcing). Boundary rows are set to zero; they carry
/// boundary conditions, not equations.
#[derive(Clone, Debug)]
pub struct NsResidual {
    pub r_mom: AxiScalarField,
    pub theta_mom: AxiScalarField,
    pub z_mom: AxiScalarField,
    pub continuity: AxiScalarField,
}

impl NsResidual {
    pub fn max_abs(&self) -> f64 {
        self.r_mom
            .max_abs()
            .max(self.theta_mom.max_abs())
            .max(self.z_mom.max_abs())
            .max(self.continuity.max_abs())
    }
}

pub fn ns_residual(u: &AxiVectorField, p: &AxiScalarField) -> Result<NsResidual, FieldError> {
    if u.grid != p.grid {
        return Err(FieldError::GridMismatch);
    }
    check_grid(&u.grid)?;
    let g = &u.grid;
    let sur = Stencil::new(g, &u.ur, Parity::Odd);
    let sut = Stencil::new(g, &u.utheta, Parity::Odd);
    let suz = Stencil::new(g, &u.uz, Parity::Even);
    let sp = Stencil::new(g, &p.values, Parity::Even);

    let mut res = NsResidual {
        r_mom: AxiScalarField::zeros(g),
        theta_mom: AxiScalarField::zeros(g),
        z_mom: AxiScalarField::zeros(g),
        continuity: AxiScalarField::zeros(g),
    };

    let interior_z = |j: usize| match g.mode {
        ZMode::SlabDirichlet => j > 0 && j < g.n_z,
        ZMode::Periodic => true,
    };

    for i in 0..g.nodes_r() {
        let r = g.r(i);
        for j in 0..g.nodes_z() {
            if i == 0 || i == g.n_r || !interior_z(j) {
                continue;
            }
            let k = g.idx(i, j);
            let adv = |s: &Stencil| u.ur[k] * s.dr(i, j) + u.uz[k] * s.dz(i, j);
            // (d2r + (1/r) dr + d2z - 1/r^2) for odd fields
            let lap_m = |s: &Stencil, v: f64| {
                s.d2r(i, j) + s.dr(i, j) / r + s.d2z(i, j) - v / (r * r)
            };
            let lap0 = |s: &Stencil| s.d2r(i, j) + s.dr(i, j) / r + s.d2z(i, j);
            res.r_mom.values[k] = adv(&sur) - u.utheta[k] * u.utheta[k] / r + sp.dr(i, j)
                - lap_m(&sur, u.ur[k]);
            res.theta_mom.values[k] =
                adv(&sut) + u.ur[k] * u.utheta[k] / r - lap_m(&sut, u.utheta[k]);
            res.z_mom.values[k] = adv(&suz) + sp.dz(i, j) - lap0(&suz);
            res.continuity.values[k] = sur.dr(i, j) + u.ur[k] / r + suz.dz(i, j);
        }
    }
    Ok(res)
}

// ---------------------------------------------------------------------------
// Mean value inequality checks
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct MeanValueReport {
    pub ratio_value_max: f64,
    pub ratio_gradient_max: f64,
    pub n_centers: usize,
}

/// Sampled ratios of the two mean-value inequalities over 3D balls B(x, r0):
/// |u(x)| vs r0^-3 int |u|, and |grad u(x)| vs r0^-3 int |grad u| +
/// r0^-4 int |u - mean|. Zero fields report zero ratios by convention.
pub fn mean_value_check(u: &AxiVectorField, r0: f64) -> Result<MeanValueReport, FieldError> {
    check_grid(&u.grid)?;
    if u.grid.mode != ZMode::SlabDirichlet {
        return Err(FieldError::ModeMismatch {
            expected: ZMode::SlabDirichlet,
            actual: u.grid.mode,
        });
    }
    let g = &u.grid;
    // centers must keep the whole 3D ball inside the slab and inside r <= r_max
    let z_c = 0.5;
    if r0 > 0.5 + 1e-12 || r0 > g.r_max / 4.0 {
        return Err(FieldError::BallOutsideDomain { r: g.r_max / 2.0, z: z_c, r0 });
    }
    let centers: Vec<f64> = (1..=4)
        .map(|k| r0 + k as f64 * (g.r_max - 2.0 * r0) / 5.0)
        .collect();

    let sur = Stencil::new(g, &u.ur, Parity::Odd);
    let sut = Stencil::new(g, &u.utheta, Parity::Odd);
    let suz = Stencil::new(g, &u.uz, Parity::Even);

    let norm_u = |i: usize, j: usize| -> f64 {
        let k = g.idx(i, j);
        (u.ur[k].powi(2) + u.utheta[k].powi(2) + u.uz[k].powi(2)).sqrt()
    };
    // |grad u|^2 with the 1/r curvature terms of the cylindrical frame
    let norm_grad = |i: usize, j: usize| -> f64 {
        let k = g.idx(i, j);
        let r = g.r(i);
        let curv = if i == 0 {
            // u^r/r -> dr u^r, u^th/r -> dr u^th at the axis
            sur.dr(0, j).powi(2) + sut.dr(0, j).powi(2)
        } else {
            (u.ur[k] / r).powi(2) + (u.utheta[k] / r).powi(2)
        };
        (sur.dr(i, j).powi(2)
            + sut.dr(i, j).powi(2)
            + suz.dr(i, j).powi(2)
            + sur.dz(i, j).powi(2)
            + sut.dz(i, j).powi(2)
            + suz.dz(i, j).powi(2)
            + curv)
            .sqrt()
    };

    let h_r = g.h_r();
    let h_z = g.h_z();
    let mut ratio_v: f64 = 0.0;
    let mut ratio_g: f64 = 0.0;
    for &rc in &centers {
        // nearest node to the center
        let ic = (rc / h_r).round() as usize;
        let jc = (z_c / h_z).round() as usize;
        let rc = g.r(ic);
        let zc = g.z(jc);

        // azimuthal arc length inside the ball for a node at (rho, l)
        let arc = |rho: f64, l: f64| -> f64 {
            let d2 = rho * rho + rc * rc + (l - zc) * (l - zc) - r0 * r0;
            if rho == 0.0 || rc == 0.0 {
                return if d2 <= 0.0 { 2.0 * std::f64::consts::PI } else { 0.0 };
            }
            let c = d2 / (2.0 * rho * rc);
            if c >= 1.0 {
                0.0
            } else if c <= -1.0 {
                2.0 * std::f64::consts::PI
            } else {
                2.0 * c.acos()
            }
        };

        let mut int_u = 0.0;
        let mut int_gu = 0.0;
        let mut vol = 0.0;
        // vector mean over the ball (Cartesian components; y-mean from u^theta)
        let mut mean = [0.0_f64; 3];
        let i_lo = ((rc - r0) / h_r).floor().max(0.0) as usize;
        let i_hi = (((rc + r0) / h_r).ceil() as usize).min(g.n_r);
        let j_lo = ((zc - r0) / h_z).floor().max(0.0) as usize;
        let j_hi = (((zc + r0) / h_z).ceil() as usize).min(g.n_z);
        for i in i_lo..=i_hi {
            let rho = g.r(i);
            for j in j_lo..=j_hi {
                let l = g.z(j);
                let a = arc(rho, l);
                if a == 0.0 {
                    continue;
                }
                let wgt = a * rho * h_r * h_z;
                int_u += norm_u(i, j) * wgt;
                int_gu += norm_grad(i, j) * wgt;
                vol += wgt;
                let k = g.idx(i, j);
                // int over the arc of (u^r cos, u^r sin + u^th cos, u^z)
                let half = 0.5 * a;
                let s2 = 2.0 * half.sin();
                mean[0] += u.ur[k] * s2 * rho * h_r * h_z;
                mean[1] += u.utheta[k] * s2 * rho * h_r * h_z;
                mean[2] += u.uz[k] * a * rho * h_r * h_z;
            }
        }
        if vol <= 0.0 {
            return Err(FieldError::BallOutsideDomain { r: rc, z: zc, r0 });
        }
        for m in mean.iter_mut() {
            *m /= vol;
        }
        // int |u - mean| with an 8-point azimuthal rule per node
        let mut int_osc = 0.0;
        for i in i_lo..=i_hi {
            let rho = g.r(i);
            for j in j_lo..=j_hi {
                let l = g.z(j);
                let a = arc(rho, l);
                if a == 0.0 {
                    continue;
                }
                let k = g.idx(i, j);
                let half = 0.5 * a;
                let nq = 8;
                let mut acc = 0.0;
                for q in 0..nq {
                    let phi = -half + (q as f64 + 0.5) * (a / nq as f64);
                    let ux = u.ur[k] * phi.cos() - u.utheta[k] * phi.sin();
                    let uy = u.ur[k] * phi.sin() + u.utheta[k] * phi.cos();
                    let uz = u.uz[k];
                    acc += ((ux - mean[0]).powi(2)
                        + (uy - mean[1]).powi(2)
                        + (uz - mean[2]).powi(2))
                    .sqrt();
                }
                int_osc += acc * (a / nq as f64) * rho * h_r * h_z;
            }
        }

        let denom_v = int_u / r0.powi(3);
        let denom_g = int_gu / r0.powi(3) + int_osc / r0.powi(4);
        if denom_v > 1e-300 {
            ratio_v = ratio_v.max(norm_u(ic, jc) / denom_v);
        }
        if denom_g > 1e-300 {
            ratio_g = ratio_g.max(norm_grad(ic, jc) / denom_g);
        }
    }
    Ok(MeanValueReport { ratio_value_max: ratio_v, ratio_gradient_max: ratio_g, n_centers: centers.len() })
}

// ---------------------------------------------------------------------------
// Field file format: one JSON header line, then raw little-endian f64 data
// for each listed component. Round-trips are bit exact.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct FieldHeader {
    schema: String,
    grid: AxiGrid,
    components: Vec<String>,
}

fn write_array(w: &mut impl Write, a: &[f64]) -> std::io::Result<()> {
    for v in a {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_array(r: &mut impl Read, n: usize) -> std::io::Result<Vec<f64>> {
    let mut buf = vec![0u8; n * 8];
    r.read_exact(&mut buf)?;
    Ok(buf.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
}

fn read_header(r: &mut impl Read) -> Result<FieldHeader, FieldError> {
    let mut line = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        r.read_exact(&mut byte)?;
        if byte[0] == b'\n' {
            break;
        }
        line.push(byte[0]);
        if line.len() > 1 << 16 {
            return Err(FieldError::Header("unterminated header".into()));
        }
    }
    serde_json::from_slice(&line).map_err(|e| FieldError::Header(e.to_string()))
}

pub fn write_vector_field(w: &mut impl Write, u: &AxiVectorField) -> Result<(), FieldError> {
    let header = FieldHeader {
        schema: "axifield-v1".into(),
        grid: u.grid.clone(),
        components: vec!["ur".into(), "utheta".into(), "uz".into()],
    };
    serde_json::to_writer(&mut *w, &header).map_err(|e| FieldError::Header(e.to_string()))?;
    w.write_all(b"\n")?;
    write_array(w, &u.ur)?;
    write_array(w, &u.utheta)?;
    write_array(w, &u.uz)?;
    Ok(())
}

pub fn read_vector_field(r: &mut impl Read) -> Result<AxiVectorField, FieldError> {
    let header = read_header(r)?;
    if header.components != ["ur", "utheta", "uz"] {
        return Err(FieldError::Header(format!("unexpected components {:?}", header.components)));
    }
    let n = header.grid.len();
    Ok(AxiVectorField {
        ur: read_array(r, n)?,
        utheta: read_array(r, n)?,
        uz: read_array(r, n)?,
        grid: header.grid,
    })
}

pub fn write_scalar_field(w: &mut impl Write, f: &AxiScalarField) -> Result<(), FieldError> {
    let header = FieldHeader {
        schema: "axifield-v1".into(),
        grid: f.grid.clone(),
        components: vec!["values".into()],
    };
    serde_json::to_writer(&mut *w, &header).map_err(|e| FieldError::Header(e.to_string()))?;
    w.write_all(b"\n")?;
    write_array(w, &f.values)?;
    Ok(())
}

pub fn read_scalar_field(r: &mut impl Read) -> Result<AxiScalarField, FieldError> {
    let header = read_header(r)?;
    let n = header.grid.len();
    Ok(AxiScalarField { values: read_array(r, n)?, grid: header.grid })
}

/// Write a velocity/pressure pair (the solver's output format).
pub fn write_solution(
    w: &mut impl Write,
    u: &AxiVectorField,
    p: &AxiScalarField,
) -> Result<(), FieldError> {
    let header = FieldHeader {
        schema: "axifield-v1".into(),
        grid: u.grid.clone(),
        components: vec!["ur".into(), "utheta".into(), "uz".into(), "p".into()],
    };
    serde_json::to_writer(&mut *w, &header).map_err(|e| FieldError::Header(e.to_string()))?;
    w.write_all(b"\n")?;
    write_array(w, &u.ur)?;
    write_array(w, &u.utheta)?;
    write_array(w, &u.uz)?;
    write_array(w, &p.values)?;
    Ok(())
}

pub fn read_solution(r: &mut impl Read) -> Result<(AxiVectorField, AxiScalarField), FieldError> {
    let header = read_header(r)?;
    if header.components != ["ur", "utheta", "uz", "p"] {
        return Err(FieldError::Header(format!("unexpected components {:?}", header.components)));
    }
    let n = header.grid.len();
    let u = AxiVectorField {
        ur: read_array(r, n)?,
        utheta: read_array(r, n)?,
        uz: read_array(r, n)?,
        grid: header.grid.clone(),
    };
    let p = AxiScalarField { values: read_array(r, n)?, grid: header.grid };
    Ok((u, p))
}
