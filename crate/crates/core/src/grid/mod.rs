//! Uniform staggered (MAC) mesh.
//!
//! Scalars live at cell centers. The x-velocity lives on vertical faces and
//! the y-velocity on horizontal faces. Cell `(i, j)` spans
//! `[x0 + i dx, x0 + (i+1) dx] x [y0 + j dy, y0 + (j+1) dy]`; x-face `(i, j)`
//! is its west face and y-face `(i, j)` its south face.

mod convection;
mod field;
mod ops;
mod stencil;
mod viscous;

pub use convection::{convective_operator, convective_stencil, ConvectionMode};
pub use field::{CellField, FaceField};
pub use ops::{
    boundary_heat_flux, cell_grad_sq, cell_to_face, diffusion_stencil, div_face_to_cell,
    domain_integral, face_kinetic_to_cells, grad_cell_to_face, kinetic_energy, upwind_div,
    upwind_face_values, varcoef_diffusion,
};
pub use stencil::{Apply, StencilSink};
pub use viscous::{viscous_dissipation, viscous_operator, viscous_stencil};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    /// Full extent in x, m.
    pub lx: f64,
    /// Full extent in y, m.
    pub ly: f64,
    pub dx: f64,
    pub dy: f64,
    /// Lower-left corner, m.
    pub origin: (f64, f64),
}

impl Grid {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64, origin: (f64, f64)) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::Grid(format!("need at least 3x3 cells, got {nx}x{ny}")));
        }
        if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
            return Err(Error::Grid(format!("extents must be positive, got {lx} x {ly}")));
        }
        Ok(Self {
            nx,
            ny,
            lx,
            ly,
            dx: lx / nx as f64,
            dy: ly / ny as f64,
            origin,
        })
    }

    /// Grid on `(-lx/2, lx/2) x (-ly/2, ly/2)`.
    pub fn centered(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        Self::new(nx, ny, lx, ly, (-0.5 * lx, -0.5 * ly))
    }

    pub fn num_cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn num_x_faces(&self) -> usize {
        (self.nx + 1) * self.ny
    }

    pub fn num_y_faces(&self) -> usize {
        self.nx * (self.ny + 1)
    }

    pub fn num_faces(&self) -> usize {
        self.num_x_faces() + self.num_y_faces()
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn x_face(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }

    #[inline]
    pub fn y_face(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.origin.0 + (i as f64 + 0.5) * self.dx,
            self.origin.1 + (j as f64 + 0.5) * self.dy,
        )
    }

    pub fn x_face_center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.origin.0 + i as f64 * self.dx,
            self.origin.1 + (j as f64 + 0.5) * self.dy,
        )
    }

    pub fn y_face_center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.origin.0 + (i as f64 + 0.5) * self.dx,
            self.origin.1 + j as f64 * self.dy,
        )
    }

    pub fn cell_field(&self, value: f64) -> CellField {
        CellField::constant(self.nx, self.ny, value)
    }

    pub fn face_field(&self, value: f64) -> FaceField {
        FaceField::constant(self.nx, self.ny, value)
    }

    pub fn cell_field_from_fn(&self, f: impl Fn(f64, f64) -> f64) -> CellField {
        let mut out = self.cell_field(0.0);
        for j in 0..self.ny {
            for i in 0..self.nx {
                let (x, y) = self.cell_center(i, j);
                out[(i, j)] = f(x, y);
            }
        }
        out
    }

    /// Samples `fx` on x-faces and `fy` on y-faces; boundary-normal faces are set to zero.
    pub fn no_slip_face_field_from_fn(
        &self,
        fx: impl Fn(f64, f64) -> f64,
        fy: impl Fn(f64, f64) -> f64,
    ) -> FaceField {
        let mut out = self.face_field(0.0);
        for j in 0..self.ny {
            for i in 1..self.nx {
                let (x, y) = self.x_face_center(i, j);
                *out.x_mut(i, j) = fx(x, y);
            }
        }
        for j in 1..self.ny {
            for i in 0..self.nx {
                let (x, y) = self.y_face_center(i, j);
                *out.y_mut(i, j) = fy(x, y);
            }
        }
        out
    }
}

/// Boundary condition for a cell-centered scalar on one edge of the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeBc {
    /// Zero normal gradient.
    ZeroGradient,
    /// Prescribed wall value.
    Value(f64),
    /// Prescribed outward normal flux of `-k grad s`, per unit length.
    Flux(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeBcs {
    pub left: EdgeBc,
    pub right: EdgeBc,
    pub bottom: EdgeBc,
    pub top: EdgeBc,
}

impl EdgeBcs {
    pub const fn uniform(bc: EdgeBc) -> Self {
        Self {
            left: bc,
            right: bc,
            bottom: bc,
            top: bc,
        }
    }

    pub const fn zero_gradient() -> Self {
        Self::uniform(EdgeBc::ZeroGradient)
    }
}

/// Temperature condition on one edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThermalBc {
    /// Outward heat flux `q . nu`, W/m^2.
    Neumann(f64),
    /// Wall temperature, K.
    Dirichlet(f64),
}

impl ThermalBc {
    pub const ADIABATIC: Self = ThermalBc::Neumann(0.0);

    fn as_edge(self) -> EdgeBc {
        match self {
            ThermalBc::Neumann(q) => EdgeBc::Flux(q),
            ThermalBc::Dirichlet(t) => EdgeBc::Value(t),
        }
    }
}

/// Boundary conditions of the flow problem. Velocity is no-slip and the
/// density has zero normal gradient on every edge; only the temperature
/// condition varies per edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySpec {
    pub left: ThermalBc,
    pub right: ThermalBc,
    pub bottom: ThermalBc,
    pub top: ThermalBc,
}

impl BoundarySpec {
    pub const fn adiabatic() -> Self {
        Self {
            left: ThermalBc::ADIABATIC,
            right: ThermalBc::ADIABATIC,
            bottom: ThermalBc::ADIABATIC,
            top: ThermalBc::ADIABATIC,
        }
    }

    pub fn temperature_bcs(&self) -> EdgeBcs {
        EdgeBcs {
            left: self.left.as_edge(),
            right: self.right.as_edge(),
            bottom: self.bottom.as_edge(),
            top: self.top.as_edge(),
        }
    }

    pub fn is_adiabatic(&self) -> bool {
        [self.left, self.right, self.bottom, self.top]
            .iter()
            .all(|bc| *bc == ThermalBc::Neumann(0.0))
    }
}
