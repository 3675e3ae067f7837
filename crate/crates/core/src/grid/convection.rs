use super::{Apply, FaceField, Grid, StencilSink};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvectionMode {
    /// First-order upwind in each direction.
    Upwind,
    /// Skew-symmetric central form; conserves kinetic energy up to the
    /// mass-flux divergence term.
    Skew,
}

impl std::str::FromStr for ConvectionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "upwind" => Ok(ConvectionMode::Upwind),
            "skew" => Ok(ConvectionMode::Skew),
            other => Err(format!("unknown convection mode '{other}' (expected upwind or skew)")),
        }
    }
}

impl std::fmt::Display for ConvectionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConvectionMode::Upwind => "upwind",
            ConvectionMode::Skew => "skew",
        })
    }
}

/// Neighbour reference: a face unknown, the reflected tangential ghost
/// (`-u` of the row itself), or a boundary-normal zero.
#[derive(Clone, Copy)]
enum Nb {
    Face(usize),
    Ghost,
    Zero,
}

fn emit_pair<S: StencilSink>(sink: &mut S, row: usize, nb: Nb, c_nb: f64, c_self: &mut f64) {
    match nb {
        Nb::Face(col) => sink.coef(row, col, c_nb),
        Nb::Ghost => *c_self -= c_nb,
        Nb::Zero => {}
    }
}

/// Emits `scale * C(u)` on interior faces, where `C(u)` approximates
/// `(rho u_star) . grad u` given the face mass flux `flux = rho_f u_star`.
///
/// Cell-center and node fluxes are averages of the adjacent face fluxes.
/// In skew mode the operator satisfies
/// `sum_f u_f C(u)_f = -1/2 sum_c div(flux)_c |u|^2_c` exactly, with
/// `|u|^2_c` as in `face_kinetic_to_cells`.
pub fn convective_stencil<S: StencilSink>(
    g: &Grid,
    flux: &FaceField,
    mode: ConvectionMode,
    scale: f64,
    sink: &mut S,
) {
    let (nx, ny) = (g.nx, g.ny);
    let (dx, dy) = (g.dx, g.dy);
    let off_y = g.num_x_faces();

    let row_terms = |sink: &mut S, row: usize, fp: f64, fm: f64, np: Nb, nm: Nb, h: f64, c_self: &mut f64| {
        // fp/fm: flux through the forward/backward half cell; np/nm: neighbours.
        match mode {
            ConvectionMode::Skew => {
                let w = 0.5 * scale / h;
                emit_pair(sink, row, np, w * fp, c_self);
                emit_pair(sink, row, nm, -w * fm, c_self);
                *c_self += w * (fm - fp);
            }
            ConvectionMode::Upwind => {
                let a = 0.5 * (fp + fm);
                let w = scale / h;
                if a >= 0.0 {
                    emit_pair(sink, row, nm, -w * a, c_self);
                    *c_self += w * a;
                } else {
                    emit_pair(sink, row, np, w * a, c_self);
                    *c_self -= w * a;
                }
            }
        }
    };

    for j in 0..ny {
        for i in 1..nx {
            let row = g.x_face(i, j);
            let fe = 0.5 * (flux.x(i, j) + flux.x(i + 1, j));
            let fw = 0.5 * (flux.x(i - 1, j) + flux.x(i, j));
            let fn_ = 0.5 * (flux.y(i - 1, j + 1) + flux.y(i, j + 1));
            let fs = 0.5 * (flux.y(i - 1, j) + flux.y(i, j));
            let e = if i + 1 < nx { Nb::Face(g.x_face(i + 1, j)) } else { Nb::Zero };
            let w = if i > 1 { Nb::Face(g.x_face(i - 1, j)) } else { Nb::Zero };
            let n = if j + 1 < ny { Nb::Face(g.x_face(i, j + 1)) } else { Nb::Ghost };
            let s = if j > 0 { Nb::Face(g.x_face(i, j - 1)) } else { Nb::Ghost };
            let mut c_self = 0.0;
            row_terms(sink, row, fe, fw, e, w, dx, &mut c_self);
            row_terms(sink, row, fn_, fs, n, s, dy, &mut c_self);
            sink.coef(row, row, c_self);
        }
    }
    for j in 1..ny {
        for i in 0..nx {
            let row = off_y + g.y_face(i, j);
            let fn_ = 0.5 * (flux.y(i, j) + flux.y(i, j + 1));
            let fs = 0.5 * (flux.y(i, j - 1) + flux.y(i, j));
            let fe = 0.5 * (flux.x(i + 1, j - 1) + flux.x(i + 1, j));
            let fw = 0.5 * (flux.x(i, j - 1) + flux.x(i, j));
            let n = if j + 1 < ny { Nb::Face(off_y + g.y_face(i, j + 1)) } else { Nb::Zero };
            let s = if j > 1 { Nb::Face(off_y + g.y_face(i, j - 1)) } else { Nb::Zero };
            let e = if i + 1 < nx { Nb::Face(off_y + g.y_face(i + 1, j)) } else { Nb::Ghost };
            let w = if i > 0 { Nb::Face(off_y + g.y_face(i - 1, j)) } else { Nb::Ghost };
            let mut c_self = 0.0;
            row_terms(sink, row, fe, fw, e, w, dx, &mut c_self);
            row_terms(sink, row, fn_, fs, n, s, dy, &mut c_self);
            sink.coef(row, row, c_self);
        }
    }
}

/// Applies the convective operator to `u`; boundary faces are zero.
pub fn convective_operator(g: &Grid, flux: &FaceField, u: &FaceField, mode: ConvectionMode) -> FaceField {
    let x = u.to_vec();
    let mut out = vec![0.0; x.len()];
    let mut sink = Apply { x: &x, out: &mut out };
    convective_stencil(g, flux, mode, 1.0, &mut sink);
    FaceField::from_vec(g.nx, g.ny, &out)
}
