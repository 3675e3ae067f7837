use super::sparse::{dot, norm, CsrMatrix};
use crate::error::{Error, Result};

/// Incomplete LU with zero fill on the pattern of `A`.
#[derive(Debug, Clone)]
pub struct Ilu0 {
    lu: CsrMatrix,
    diag: Vec<usize>,
}

impl Ilu0 {
    pub fn new(a: &CsrMatrix) -> Result<Self> {
        let n = a.n;
        let mut lu = a.clone();
        let mut diag = vec![usize::MAX; n];
        for i in 0..n {
            let (a0, a1) = (lu.row_ptr[i], lu.row_ptr[i + 1]);
            if let Ok(k) = lu.cols[a0..a1].binary_search(&i) {
                diag[i] = a0 + k;
            } else {
                return Err(Error::SingularMatrix(i));
            }
        }
        let mut pos = vec![usize::MAX; n];
        for i in 0..n {
            let (a0, a1) = (lu.row_ptr[i], lu.row_ptr[i + 1]);
            for k in a0..a1 {
                pos[lu.cols[k]] = k;
            }
            for k in a0..a1 {
                let c = lu.cols[k];
                if c >= i {
                    break;
                }
                let d = lu.vals[diag[c]];
                if d == 0.0 {
                    return Err(Error::SingularMatrix(c));
                }
                let l = lu.vals[k] / d;
                lu.vals[k] = l;
                for m in diag[c] + 1..lu.row_ptr[c + 1] {
                    let p = pos[lu.cols[m]];
                    if p != usize::MAX {
                        lu.vals[p] -= l * lu.vals[m];
                    }
                }
            }
            for k in a0..a1 {
                pos[lu.cols[k]] = usize::MAX;
            }
            if lu.vals[diag[i]] == 0.0 {
                return Err(Error::SingularMatrix(i));
            }
        }
        Ok(Self { lu, diag })
    }

    /// Solves `(L U) z = r` in place.
    pub fn apply(&self, z: &mut [f64]) {
        let lu = &self.lu;
        for i in 0..lu.n {
            let mut s = z[i];
            for k in lu.row_ptr[i]..self.diag[i] {
                s -= lu.vals[k] * z[lu.cols[k]];
            }
            z[i] = s;
        }
        for i in (0..lu.n).rev() {
            let mut s = z[i];
            for k in self.diag[i] + 1..lu.row_ptr[i + 1] {
                s -= lu.vals[k] * z[lu.cols[k]];
            }
            z[i] = s / lu.vals[self.diag[i]];
        }
    }
}

/// Outcome of an iterative solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovStats {
    pub iterations: usize,
    pub residual: f64,
}

/// Right-preconditioned BiCGSTAB. `x` holds the initial guess on entry.
pub fn bicgstab(
    a: &CsrMatrix,
    pre: &Ilu0,
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iter: usize,
) -> Result<KrylovStats> {
    let n = a.n;
    let bnorm = norm(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(KrylovStats {
            iterations: 0,
            residual: 0.0,
        });
    }
    let mut r = vec![0.0; n];
    a.matvec(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let mut res = norm(&r) / bnorm;
    if res <= tol {
        return Ok(KrylovStats {
            iterations: 0,
            residual: res,
        });
    }
    let r0 = r.clone();
    let mut p = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut phat = vec![0.0; n];
    let mut shat = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut t = vec![0.0; n];
    let (mut rho, mut alpha, mut omega) = (1.0f64, 1.0f64, 1.0f64);

    for it in 1..=max_iter {
        let rho_new = dot(&r0, &r);
        if rho_new == 0.0 || omega == 0.0 {
            break;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        phat.copy_from_slice(&p);
        pre.apply(&mut phat);
        a.matvec(&phat, &mut v);
        let r0v = dot(&r0, &v);
        if r0v == 0.0 {
            break;
        }
        alpha = rho / r0v;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if norm(&s) / bnorm <= tol {
            for i in 0..n {
                x[i] += alpha * phat[i];
            }
            res = a.relative_residual(x, b);
            if res <= tol {
                return Ok(KrylovStats { iterations: it, residual: res });
            }
            r.copy_from_slice(&s);
            continue;
        }
        shat.copy_from_slice(&s);
        pre.apply(&mut shat);
        a.matvec(&shat, &mut t);
        let tt = dot(&t, &t);
        omega = if tt > 0.0 { dot(&t, &s) / tt } else { 0.0 };
        for i in 0..n {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        res = norm(&r) / bnorm;
        if res <= tol {
            // Guard against drift of the recursively updated residual.
            res = a.relative_residual(x, b);
            if res <= tol {
                return Ok(KrylovStats { iterations: it, residual: res });
            }
            a.matvec(x, &mut r);
            for i in 0..n {
                r[i] = b[i] - r[i];
            }
        }
        if !res.is_finite() {
            break;
        }
    }
    Err(Error::LinearSolver {
        iterations: max_iter,
        residual: res,
    })
}
