/// Receiver for the coefficients of an affine discrete operator.
///
/// Operators that are solved implicitly are written once as a stencil
/// emitter; the same emitter either applies the operator to a vector
/// ([`Apply`]) or assembles a matrix (see `linalg::TripletSink`).
pub trait StencilSink {
    /// Adds `value * x[col]` to output row `row`.
    fn coef(&mut self, row: usize, col: usize, value: f64);
    /// Adds a constant to output row `row`.
    fn constant(&mut self, row: usize, value: f64);
}

/// Applies an emitted stencil to `x`, accumulating into `out`.
pub struct Apply<'a> {
    pub x: &'a [f64],
    pub out: &'a mut [f64],
}

impl StencilSink for Apply<'_> {
    #[inline]
    fn coef(&mut self, row: usize, col: usize, value: f64) {
        self.out[row] += value * self.x[col];
    }

    #[inline]
    fn constant(&mut self, row: usize, value: f64) {
        self.out[row] += value;
    }
}
