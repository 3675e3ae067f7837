use super::{Apply, CellField, FaceField, Grid, StencilSink};

// Unknowns are global face indices (x-faces, then y-faces). Boundary-normal
// faces are zero under no-slip and are never referenced as columns; the
// tangential ghost across a wall is the negated interior value.

struct Layout<'a> {
    g: &'a Grid,
    off_y: usize,
}

impl<'a> Layout<'a> {
    fn new(g: &'a Grid) -> Self {
        Self {
            g,
            off_y: g.num_x_faces(),
        }
    }

    fn ux(&self, i: usize, j: usize) -> Option<usize> {
        (i > 0 && i < self.g.nx).then(|| self.g.x_face(i, j))
    }

    fn uy(&self, i: usize, j: usize) -> Option<usize> {
        (j > 0 && j < self.g.ny).then(|| self.off_y + self.g.y_face(i, j))
    }

    /// Coefficients of `d ux/dx` and `d uy/dy` at cell `(i, j)`.
    fn cell_rates(&self, i: usize, j: usize) -> ([(Option<usize>, f64); 2], [(Option<usize>, f64); 2]) {
        let (dx, dy) = (self.g.dx, self.g.dy);
        (
            [(self.ux(i + 1, j), 1.0 / dx), (self.ux(i, j), -1.0 / dx)],
            [(self.uy(i, j + 1), 1.0 / dy), (self.uy(i, j), -1.0 / dy)],
        )
    }

    /// Coefficients of the shear rate `d ux/dy + d uy/dx` at node `(i, j)`.
    fn node_shear(&self, i: usize, j: usize) -> [(Option<usize>, f64); 4] {
        let (nx, ny) = (self.g.nx, self.g.ny);
        let (dx, dy) = (self.g.dx, self.g.dy);
        let mut out = [(None, 0.0); 4];
        if i > 0 && i < nx {
            // ux above minus ux below, reflecting through the wall.
            out[0] = if j < ny {
                (self.ux(i, j), 1.0 / dy)
            } else {
                (self.ux(i, ny - 1), -1.0 / dy)
            };
            out[1] = if j > 0 {
                (self.ux(i, j - 1), -1.0 / dy)
            } else {
                (self.ux(i, 0), 1.0 / dy)
            };
        }
        if j > 0 && j < ny {
            out[2] = if i < nx {
                (self.uy(i, j), 1.0 / dx)
            } else {
                (self.uy(nx - 1, j), -1.0 / dx)
            };
            out[3] = if i > 0 {
                (self.uy(i - 1, j), -1.0 / dx)
            } else {
                (self.uy(0, j), 1.0 / dx)
            };
        }
        out
    }
}

/// Viscosity at node `(i, j)`: mean over the existing adjacent cells.
fn node_eta(g: &Grid, eta: &CellField, i: usize, j: usize) -> f64 {
    let mut sum = 0.0;
    let mut count = 0.0;
    for (ci, cj) in [(i.wrapping_sub(1), j.wrapping_sub(1)), (i, j.wrapping_sub(1)), (i.wrapping_sub(1), j), (i, j)] {
        if ci < g.nx && cj < g.ny {
            sum += eta[(ci, cj)];
            count += 1.0;
        }
    }
    sum / count
}

fn emit<S: StencilSink>(sink: &mut S, row: usize, terms: &[(Option<usize>, f64)], w: f64) {
    for &(col, c) in terms {
        if let Some(col) = col {
            sink.coef(row, col, w * c);
        }
    }
}

/// Emits `scale * (div(eta D(u)) + grad(lambda div u))` on every interior face,
/// `D(u) = grad u + grad u^T`. Rows are global face indices.
pub fn viscous_stencil<S: StencilSink>(
    g: &Grid,
    eta: &CellField,
    lambda: &CellField,
    scale: f64,
    sink: &mut S,
) {
    let lay = Layout::new(g);
    let (nx, ny) = (g.nx, g.ny);
    let (dx, dy) = (g.dx, g.dy);

    // Normal stress tau = (2 eta + lambda) d/dn + lambda d/dt at a cell,
    // differenced across the face.
    let normal = |sink: &mut S, row: usize, ci: usize, cj: usize, along_x: bool, w: f64| {
        let (rx, ry) = lay.cell_rates(ci, cj);
        let (e, l) = (eta[(ci, cj)], lambda[(ci, cj)]);
        let (a, b) = if along_x { (2.0 * e + l, l) } else { (l, 2.0 * e + l) };
        emit(sink, row, &rx, w * a);
        emit(sink, row, &ry, w * b);
    };
    let shear = |sink: &mut S, row: usize, ni: usize, nj: usize, w: f64| {
        let en = node_eta(g, eta, ni, nj);
        emit(sink, row, &lay.node_shear(ni, nj), w * en);
    };

    for j in 0..ny {
        for i in 1..nx {
            let row = g.x_face(i, j);
            normal(sink, row, i, j, true, scale / dx);
            normal(sink, row, i - 1, j, true, -scale / dx);
            shear(sink, row, i, j + 1, scale / dy);
            shear(sink, row, i, j, -scale / dy);
        }
    }
    for j in 1..ny {
        for i in 0..nx {
            let row = lay.off_y + g.y_face(i, j);
            shear(sink, row, i + 1, j, scale / dx);
            shear(sink, row, i, j, -scale / dx);
            normal(sink, row, i, j, false, scale / dy);
            normal(sink, row, i, j - 1, false, -scale / dy);
        }
    }
}

/// `div(eta D(u)) + grad(lambda div u)` on faces; boundary faces are zero.
pub fn viscous_operator(g: &Grid, eta: &CellField, lambda: &CellField, u: &FaceField) -> FaceField {
    let x = u.to_vec();
    let mut out = vec![0.0; x.len()];
    let mut sink = Apply { x: &x, out: &mut out };
    viscous_stencil(g, eta, lambda, 1.0, &mut sink);
    FaceField::from_vec(g.nx, g.ny, &out)
}

/// Pointwise dissipation `eta D(u):grad u + lambda (div u)^2` at cells.
///
/// Normal-rate terms are evaluated at the cell; each node's shear term is
/// shared equally by its four surrounding cells (wall nodes therefore enter
/// with half weight). Its domain sum equals `-<viscous_operator(u), u>`
/// exactly.
pub fn viscous_dissipation(g: &Grid, eta: &CellField, lambda: &CellField, u: &FaceField) -> CellField {
    let lay = Layout::new(g);
    let (nx, ny) = (g.nx, g.ny);
    let x = u.to_vec();
    let eval = |terms: &[(Option<usize>, f64)]| -> f64 {
        terms.iter().map(|&(c, w)| c.map_or(0.0, |c| w * x[c])).sum()
    };

    let mut node = vec![0.0; (nx + 1) * (ny + 1)];
    for nj in 0..=ny {
        for ni in 0..=nx {
            let s = eval(&lay.node_shear(ni, nj));
            if s != 0.0 {
                node[nj * (nx + 1) + ni] = node_eta(g, eta, ni, nj) * s * s;
            }
        }
    }

    let mut out = g.cell_field(0.0);
    for j in 0..ny {
        for i in 0..nx {
            let (rx, ry) = lay.cell_rates(i, j);
            let (exx, eyy) = (eval(&rx), eval(&ry));
            let div = exx + eyy;
            let corners = node[j * (nx + 1) + i]
                + node[j * (nx + 1) + i + 1]
                + node[(j + 1) * (nx + 1) + i]
                + node[(j + 1) * (nx + 1) + i + 1];
            out[(i, j)] = 2.0 * eta[(i, j)] * (exx * exx + eyy * eyy)
                + lambda[(i, j)] * div * div
                + 0.25 * corners;
        }
    }
    out
}
