use std::ops::{Index, IndexMut};

/// Scalar lattice at cell centers, stored row by row (`j * nx + i`).
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    nx: usize,
    ny: usize,
    values: Vec<f64>,
}

impl CellField {
    pub fn constant(nx: usize, ny: usize, value: f64) -> Self {
        Self {
            nx,
            ny,
            values: vec![value; nx * ny],
        }
    }

    pub fn from_vec(nx: usize, ny: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), nx * ny, "cell field length mismatch");
        Self { nx, ny, values }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.values.iter()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            nx: self.nx,
            ny: self.ny,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.shape(), other.shape());
        Self {
            nx: self.nx,
            ny: self.ny,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn norm2(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

impl Index<(usize, usize)> for CellField {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.values[j * self.nx + i]
    }
}

impl IndexMut<(usize, usize)> for CellField {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.values[j * self.nx + i]
    }
}

/// Face-normal components on the staggered faces.
///
/// `x` holds `(nx + 1) * ny` values on vertical faces, `y` holds
/// `nx * (ny + 1)` values on horizontal faces. The concatenation `x ++ y`
/// is the global face numbering used by the linear systems.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceField {
    nx: usize,
    ny: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl FaceField {
    pub fn constant(nx: usize, ny: usize, value: f64) -> Self {
        Self {
            nx,
            ny,
            x: vec![value; (nx + 1) * ny],
            y: vec![value; nx * (ny + 1)],
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    #[inline]
    pub fn x(&self, i: usize, j: usize) -> f64 {
        self.x[j * (self.nx + 1) + i]
    }

    #[inline]
    pub fn y(&self, i: usize, j: usize) -> f64 {
        self.y[j * self.nx + i]
    }

    #[inline]
    pub fn x_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.x[j * (self.nx + 1) + i]
    }

    #[inline]
    pub fn y_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.y[j * self.nx + i]
    }

    /// Global face vector `x ++ y`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.x.len() + self.y.len());
        v.extend_from_slice(&self.x);
        v.extend_from_slice(&self.y);
        v
    }

    pub fn from_vec(nx: usize, ny: usize, v: &[f64]) -> Self {
        let nxf = (nx + 1) * ny;
        assert_eq!(v.len(), nxf + nx * (ny + 1), "face vector length mismatch");
        Self {
            nx,
            ny,
            x: v[..nxf].to_vec(),
            y: v[nxf..].to_vec(),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.shape(), other.shape());
        Self {
            nx: self.nx,
            ny: self.ny,
            x: self.x.iter().zip(&other.x).map(|(&a, &b)| f(a, b)).collect(),
            y: self.y.iter().zip(&other.y).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            nx: self.nx,
            ny: self.ny,
            x: self.x.iter().map(|&a| f(a)).collect(),
            y: self.y.iter().map(|&a| f(a)).collect(),
        }
    }

    pub fn norm2(&self) -> f64 {
        self.x.iter().chain(&self.y).map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.x.iter().chain(&self.y).fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn all_finite(&self) -> bool {
        self.x.iter().chain(&self.y).all(|v| v.is_finite())
    }

    /// Sets the normal component on every boundary face to zero.
    pub fn zero_boundary_normals(&mut self) {
        let (nx, ny) = (self.nx, self.ny);
        for j in 0..ny {
            *self.x_mut(0, j) = 0.0;
            *self.x_mut(nx, j) = 0.0;
        }
        for i in 0..nx {
            *self.y_mut(i, 0) = 0.0;
            *self.y_mut(i, ny) = 0.0;
        }
    }

    /// Dot product with the uniform face measure `dx dy` left to the caller.
    pub fn dot(&self, other: &Self) -> f64 {
        self.x.iter().zip(&other.x).map(|(a, b)| a * b).sum::<f64>()
            + self.y.iter().zip(&other.y).map(|(a, b)| a * b).sum::<f64>()
    }
}
