use super::{CellField, EdgeBc, EdgeBcs, FaceField, Grid, StencilSink, Apply};

/// Normal gradient on every face.
///
/// Interior faces use the two-point difference. On boundary faces a
/// `Value` edge reflects a ghost so the wall carries the prescribed value;
/// `ZeroGradient` and `Flux` edges give zero (a flux condition enters
/// through [`diffusion_stencil`] instead).
pub fn grad_cell_to_face(g: &Grid, s: &CellField, bcs: &EdgeBcs) -> FaceField {
    let (nx, ny) = (g.nx, g.ny);
    let mut out = g.face_field(0.0);
    for j in 0..ny {
        for i in 1..nx {
            *out.x_mut(i, j) = (s[(i, j)] - s[(i - 1, j)]) / g.dx;
        }
        if let EdgeBc::Value(v) = bcs.left {
            *out.x_mut(0, j) = (s[(0, j)] - v) / (0.5 * g.dx);
        }
        if let EdgeBc::Value(v) = bcs.right {
            *out.x_mut(nx, j) = (v - s[(nx - 1, j)]) / (0.5 * g.dx);
        }
    }
    for i in 0..nx {
        for j in 1..ny {
            *out.y_mut(i, j) = (s[(i, j)] - s[(i, j - 1)]) / g.dy;
        }
        if let EdgeBc::Value(v) = bcs.bottom {
            *out.y_mut(i, 0) = (s[(i, 0)] - v) / (0.5 * g.dy);
        }
        if let EdgeBc::Value(v) = bcs.top {
            *out.y_mut(i, ny) = (v - s[(i, ny - 1)]) / (0.5 * g.dy);
        }
    }
    out
}

/// Per-cell flux balance `(f_E - f_W)/dx + (f_N - f_S)/dy`.
pub fn div_face_to_cell(g: &Grid, f: &FaceField) -> CellField {
    let mut out = g.cell_field(0.0);
    for j in 0..g.ny {
        for i in 0..g.nx {
            out[(i, j)] = (f.x(i + 1, j) - f.x(i, j)) / g.dx + (f.y(i, j + 1) - f.y(i, j)) / g.dy;
        }
    }
    out
}

/// Arithmetic mean of the two neighbours; boundary faces copy the adjacent cell.
pub fn cell_to_face(g: &Grid, s: &CellField) -> FaceField {
    let (nx, ny) = (g.nx, g.ny);
    let mut out = g.face_field(0.0);
    for j in 0..ny {
        *out.x_mut(0, j) = s[(0, j)];
        *out.x_mut(nx, j) = s[(nx - 1, j)];
        for i in 1..nx {
            *out.x_mut(i, j) = 0.5 * (s[(i - 1, j)] + s[(i, j)]);
        }
    }
    for i in 0..nx {
        *out.y_mut(i, 0) = s[(i, 0)];
        *out.y_mut(i, ny) = s[(i, ny - 1)];
        for j in 1..ny {
            *out.y_mut(i, j) = 0.5 * (s[(i, j - 1)] + s[(i, j)]);
        }
    }
    out
}

/// Value of `s` on the upwind side of each face with respect to `vel`.
pub fn upwind_face_values(g: &Grid, s: &CellField, vel: &FaceField) -> FaceField {
    let (nx, ny) = (g.nx, g.ny);
    let mut out = g.face_field(0.0);
    for j in 0..ny {
        *out.x_mut(0, j) = s[(0, j)];
        *out.x_mut(nx, j) = s[(nx - 1, j)];
        for i in 1..nx {
            *out.x_mut(i, j) = if vel.x(i, j) >= 0.0 { s[(i - 1, j)] } else { s[(i, j)] };
        }
    }
    for i in 0..nx {
        *out.y_mut(i, 0) = s[(i, 0)];
        *out.y_mut(i, ny) = s[(i, ny - 1)];
        for j in 1..ny {
            *out.y_mut(i, j) = if vel.y(i, j) >= 0.0 { s[(i, j - 1)] } else { s[(i, j)] };
        }
    }
    out
}

/// Conservative first-order upwind divergence of `scalar * vel`.
pub fn upwind_div(g: &Grid, scalar: &CellField, vel: &FaceField) -> CellField {
    let flux = upwind_face_values(g, scalar, vel).zip_map(vel, |s, v| s * v);
    div_face_to_cell(g, &flux)
}

/// Emits `scale * div(coeff grad s)` for every cell.
///
/// Row and column indices are mapped through `row` and `col` so the stencil
/// can be placed inside a larger block system. `coeff` on boundary faces is
/// the coefficient used for `Value` edges.
pub fn diffusion_stencil<S: StencilSink>(
    g: &Grid,
    coeff: &FaceField,
    bcs: &EdgeBcs,
    scale: f64,
    row: impl Fn(usize) -> usize,
    col: impl Fn(usize) -> usize,
    sink: &mut S,
) {
    let (nx, ny) = (g.nx, g.ny);
    let wx = scale / (g.dx * g.dx);
    let wy = scale / (g.dy * g.dy);

    for j in 0..ny {
        for i in 1..nx {
            let (l, r) = (g.cell(i - 1, j), g.cell(i, j));
            let w = wx * coeff.x(i, j);
            sink.coef(row(l), col(r), w);
            sink.coef(row(l), col(l), -w);
            sink.coef(row(r), col(l), w);
            sink.coef(row(r), col(r), -w);
        }
    }
    for j in 1..ny {
        for i in 0..nx {
            let (b, t) = (g.cell(i, j - 1), g.cell(i, j));
            let w = wy * coeff.y(i, j);
            sink.coef(row(b), col(t), w);
            sink.coef(row(b), col(b), -w);
            sink.coef(row(t), col(b), w);
            sink.coef(row(t), col(t), -w);
        }
    }

    let edge = |bc: EdgeBc, c: usize, k: f64, h: f64, sink: &mut S| match bc {
        EdgeBc::ZeroGradient => {}
        EdgeBc::Value(v) => {
            let w = 2.0 * scale * k / (h * h);
            sink.coef(row(c), col(c), -w);
            sink.constant(row(c), w * v);
        }
        EdgeBc::Flux(q) => sink.constant(row(c), -scale * q / h),
    };
    for j in 0..ny {
        edge(bcs.left, g.cell(0, j), coeff.x(0, j), g.dx, sink);
        edge(bcs.right, g.cell(nx - 1, j), coeff.x(nx, j), g.dx, sink);
    }
    for i in 0..nx {
        edge(bcs.bottom, g.cell(i, 0), coeff.y(i, 0), g.dy, sink);
        edge(bcs.top, g.cell(i, ny - 1), coeff.y(i, ny), g.dy, sink);
    }
}

/// `div(coeff grad s)` in flux form.
pub fn varcoef_diffusion(g: &Grid, coeff: &FaceField, s: &CellField, bcs: &EdgeBcs) -> CellField {
    let mut out = vec![0.0; g.num_cells()];
    let mut sink = Apply {
        x: s.as_slice(),
        out: &mut out,
    };
    diffusion_stencil(g, coeff, bcs, 1.0, |c| c, |c| c, &mut sink);
    CellField::from_vec(g.nx, g.ny, out)
}

/// Outward flux `q . nu` integrated over the boundary, each face weighted by
/// `weight` at its adjacent cell (pass `None` for unit weight).
///
/// `Flux` edges use the prescribed value; `Value` edges use the discrete
/// flux `-coeff (s_B - s_cell) / (h/2)` consistent with [`diffusion_stencil`].
pub fn boundary_heat_flux(
    g: &Grid,
    s: &CellField,
    coeff: &CellField,
    bcs: &EdgeBcs,
    weight: Option<&CellField>,
) -> f64 {
    let (nx, ny) = (g.nx, g.ny);
    let face_flux = |bc: EdgeBc, i: usize, j: usize, h: f64| -> f64 {
        let q = match bc {
            EdgeBc::ZeroGradient => 0.0,
            EdgeBc::Flux(q) => q,
            EdgeBc::Value(v) => -coeff[(i, j)] * (v - s[(i, j)]) / (0.5 * h),
        };
        q * weight.map_or(1.0, |w| w[(i, j)])
    };
    let mut total = 0.0;
    for j in 0..ny {
        total += face_flux(bcs.left, 0, j, g.dx) * g.dy;
        total += face_flux(bcs.right, nx - 1, j, g.dx) * g.dy;
    }
    for i in 0..nx {
        total += face_flux(bcs.bottom, i, 0, g.dy) * g.dx;
        total += face_flux(bcs.top, i, ny - 1, g.dy) * g.dx;
    }
    total
}

/// `sum s dx dy` with compensated summation in a fixed order.
pub fn domain_integral(g: &Grid, s: &CellField) -> f64 {
    neumaier_sum(s.iter().copied()) * g.cell_area()
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Cell value of `|u|^2` as the average of the squared face components:
/// `(uW^2 + uE^2)/2 + (uS^2 + uN^2)/2`.
///
/// With face densities taken as arithmetic means, `sum rho_c |u|^2_c`
/// equals `sum rho_f u_f^2` exactly, which is what the kinetic-energy
/// bookkeeping relies on.
pub fn face_kinetic_to_cells(g: &Grid, u: &FaceField) -> CellField {
    let mut out = g.cell_field(0.0);
    for j in 0..g.ny {
        for i in 0..g.nx {
            let (w, e) = (u.x(i, j), u.x(i + 1, j));
            let (s, n) = (u.y(i, j), u.y(i, j + 1));
            out[(i, j)] = 0.5 * (w * w + e * e) + 0.5 * (s * s + n * n);
        }
    }
    out
}

/// `1/2 int rho |u|^2`.
pub fn kinetic_energy(g: &Grid, rho: &CellField, u: &FaceField) -> f64 {
    let u2 = face_kinetic_to_cells(g, u);
    0.5 * domain_integral(g, &rho.zip_map(&u2, |r, v| r * v))
}

/// `|grad s|^2` at cells, averaging the squared face gradients on each axis.
pub fn cell_grad_sq(g: &Grid, s: &CellField, bcs: &EdgeBcs) -> CellField {
    let gr = grad_cell_to_face(g, s, bcs);
    face_kinetic_to_cells(g, &gr)
}
