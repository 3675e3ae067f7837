use crate::grid::StencilSink;

/// Collects stencil coefficients as triplets plus a constant vector.
#[derive(Debug, Clone, Default)]
pub struct TripletSink {
    pub n: usize,
    pub entries: Vec<(usize, usize, f64)>,
    pub constants: Vec<f64>,
}

impl TripletSink {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            entries: Vec::with_capacity(n * 9),
            constants: vec![0.0; n],
        }
    }

    pub fn into_csr(self) -> (CsrMatrix, Vec<f64>) {
        (CsrMatrix::from_triplets(self.n, &self.entries), self.constants)
    }
}

impl StencilSink for TripletSink {
    #[inline]
    fn coef(&mut self, row: usize, col: usize, value: f64) {
        self.entries.push((row, col, value));
    }

    #[inline]
    fn constant(&mut self, row: usize, value: f64) {
        self.constants[row] += value;
    }
}

/// Square compressed-sparse-row matrix with sorted, unique column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl CsrMatrix {
    /// Builds the matrix, summing duplicate entries. Exact zeros produced
    /// by cancellation are kept so the pattern depends only on the stencil.
    pub fn from_triplets(n: usize, entries: &[(usize, usize, f64)]) -> Self {
        let mut counts = vec![0usize; n + 1];
        for &(r, c, _) in entries {
            assert!(r < n && c < n, "triplet ({r}, {c}) outside {n}x{n}");
            counts[r + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut slots = counts.clone();
        let mut raw = vec![(0usize, 0.0f64); entries.len()];
        for &(r, c, v) in entries {
            raw[slots[r]] = (c, v);
            slots[r] += 1;
        }

        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals = Vec::with_capacity(entries.len());
        row_ptr.push(0);
        for i in 0..n {
            let row = &mut raw[counts[i]..counts[i + 1]];
            row.sort_by_key(|&(c, _)| c);
            let mut k = 0;
            while k < row.len() {
                let c = row[k].0;
                let mut v = 0.0;
                while k < row.len() && row[k].0 == c {
                    v += row[k].1;
                    k += 1;
                }
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Self { n, row_ptr, cols, vals }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            row_ptr: (0..=n).collect(),
            cols: (0..n).collect(),
            vals: vec![1.0; n],
        }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.cols[a..b], &self.vals[a..b])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(0.0, |k| vals[k])
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            y[i] = cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum();
        }
    }

    /// `||b - A x|| / ||b||` (or the absolute residual when `b = 0`).
    pub fn relative_residual(&self, x: &[f64], b: &[f64]) -> f64 {
        let mut ax = vec![0.0; self.n];
        self.matvec(x, &mut ax);
        let r = ax.iter().zip(b).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt();
        let nb = norm(b);
        if nb > 0.0 {
            r / nb
        } else {
            r
        }
    }

    /// Lower and upper bandwidths.
    pub fn bandwidths(&self) -> (usize, usize) {
        let mut kl = 0;
        let mut ku = 0;
        for i in 0..self.n {
            let (cols, _) = self.row(i);
            if let (Some(&first), Some(&last)) = (cols.first(), cols.last()) {
                kl = kl.max(i.saturating_sub(first));
                ku = ku.max(last.saturating_sub(i));
            }
        }
        (kl, ku)
    }

    /// `P A P^T` for the ordering `perm` (new index `k` is old index `perm[k]`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut inv = vec![0; self.n];
        for (k, &p) in perm.iter().enumerate() {
            inv[p] = k;
        }
        let mut entries = Vec::with_capacity(self.nnz());
        for (k, &old) in perm.iter().enumerate() {
            let (cols, vals) = self.row(old);
            for (&c, &v) in cols.iter().zip(vals) {
                entries.push((k, inv[c], v));
            }
        }
        Self::from_triplets(self.n, &entries)
    }

    /// Reverse Cuthill-McKee ordering of the symmetrized pattern.
    pub fn rcm_ordering(&self) -> Vec<usize> {
        let n = self.n;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            for &c in self.row(i).0 {
                if c != i {
                    adj[i].push(c);
                    adj[c].push(i);
                }
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        let degree: Vec<usize> = adj.iter().map(Vec::len).collect();

        let mut order = Vec::with_capacity(n);
        let mut visited = vec![false; n];
        while order.len() < n {
            // Start each component at an unvisited node of minimum degree.
            let start = (0..n)
                .filter(|&i| !visited[i])
                .min_by_key(|&i| (degree[i], i))
                .expect("unvisited node exists");
            visited[start] = true;
            let mut head = order.len();
            order.push(start);
            while head < order.len() {
                let v = order[head];
                head += 1;
                let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
                next.sort_by_key(|&w| (degree[w], w));
                for w in next {
                    visited[w] = true;
                    order.push(w);
                }
            }
        }
        order.reverse();
        order
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
