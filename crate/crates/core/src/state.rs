//! Modal DG coefficients, L²-projection of initial data and trace evaluation.

use crate::basis::{legendre_at_end, legendre_unchecked, QuadratureRule, MAX_DEGREE};
use crate::error::SolverError;
use crate::mesh::Mesh;

/// End of a cell at which a trace is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellSide {
    Left,
    Right,
}

/// Piecewise polynomial solution `u_h(x, t)|_{I_j} = Σ_l u_j^l L_l(s)`.
///
/// Coefficients are stored flat, indexed `[cell][basis][component]`, so each
/// mode of a cell is a contiguous slice of length `n_components`. Mode 0 is the
/// cell average.
#[derive(Debug, Clone, PartialEq)]
pub struct DGState {
    degree: usize,
    n_components: usize,
    n_cells: usize,
    coeffs: Vec<f64>,
    pub time: f64,
}

impl DGState {
    pub fn zeros(degree: usize, n_components: usize, n_cells: usize) -> Result<Self, SolverError> {
        if degree > MAX_DEGREE {
            return Err(SolverError::UnsupportedDegree(degree));
        }
        Ok(Self {
            degree,
            n_components,
            n_cells,
            coeffs: vec![0.0; n_cells * (degree + 1) * n_components],
            time: 0.0,
        })
    }

    pub fn from_coeffs(
        degree: usize,
        n_components: usize,
        n_cells: usize,
        coeffs: Vec<f64>,
    ) -> Result<Self, SolverError> {
        let mut s = Self::zeros(degree, n_components, n_cells)?;
        if coeffs.len() != s.coeffs.len() {
            return Err(SolverError::Config(format!(
                "expected {} coefficients, got {}",
                s.coeffs.len(),
                coeffs.len()
            )));
        }
        s.coeffs = coeffs;
        Ok(s)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_basis(&self) -> usize {
        self.degree + 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    #[inline]
    fn index(&self, j: usize, l: usize, i: usize) -> usize {
        (j * (self.degree + 1) + l) * self.n_components + i
    }

    #[inline]
    pub fn coeff(&self, j: usize, l: usize, i: usize) -> f64 {
        self.coeffs[self.index(j, l, i)]
    }

    #[inline]
    pub fn set_coeff(&mut self, j: usize, l: usize, i: usize, value: f64) {
        let k = self.index(j, l, i);
        self.coeffs[k] = value;
    }

    /// Coefficient vector `u_j^l` over all components.
    #[inline]
    pub fn mode(&self, j: usize, l: usize) -> &[f64] {
        let start = self.index(j, l, 0);
        &self.coeffs[start..start + self.n_components]
    }

    #[inline]
    pub fn mode_mut(&mut self, j: usize, l: usize) -> &mut [f64] {
        let start = self.index(j, l, 0);
        let m = self.n_components;
        &mut self.coeffs[start..start + m]
    }

    /// All coefficients of cell `j`.
    #[inline]
    pub fn cell(&self, j: usize) -> &[f64] {
        let stride = (self.degree + 1) * self.n_components;
        &self.coeffs[j * stride..(j + 1) * stride]
    }

    #[inline]
    pub fn cell_mut(&mut self, j: usize) -> &mut [f64] {
        let stride = (self.degree + 1) * self.n_components;
        &mut self.coeffs[j * stride..(j + 1) * stride]
    }

    /// Cell average `ū_j`.
    #[inline]
    pub fn average(&self, j: usize) -> &[f64] {
        self.mode(j, 0)
    }

    /// `Σ_j Δ ū_j` for every component.
    pub fn total(&self, dx: f64) -> Vec<f64> {
        let mut sum = vec![0.0; self.n_components];
        for j in 0..self.n_cells {
            for (s, &u) in sum.iter_mut().zip(self.average(j)) {
                *s += dx * u;
            }
        }
        sum
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Writes the polynomial value at local coordinate `s` into `out`.
    pub fn eval_into(&self, j: usize, s: f64, out: &mut [f64]) {
        out.fill(0.0);
        for l in 0..=self.degree {
            let (p, _) = legendre_unchecked(l, s);
            for (o, &c) in out.iter_mut().zip(self.mode(j, l)) {
                *o += c * p;
            }
        }
    }

    /// Trace `Σ_l u_j^l L_l(±1)` at one end of cell `j`.
    pub fn trace_into(&self, j: usize, side: CellSide, out: &mut [f64]) {
        out.fill(0.0);
        let right = side == CellSide::Right;
        for l in 0..=self.degree {
            let sign = legendre_at_end(l, right);
            for (o, &c) in out.iter_mut().zip(self.mode(j, l)) {
                *o += sign * c;
            }
        }
    }

    /// Axpy on the coefficient vectors: `self += a * other`.
    pub(crate) fn axpy(&mut self, a: f64, other: &[f64]) {
        for (c, &o) in self.coeffs.iter_mut().zip(other) {
            *c += a * o;
        }
    }
}

/// Evaluates the trace of `state` at one end of cell `j`.
pub fn evaluate_trace(state: &DGState, j: usize, side: CellSide) -> Result<Vec<f64>, SolverError> {
    if j >= state.n_cells() {
        return Err(SolverError::Config(format!(
            "cell index {j} out of range (mesh has {} cells)",
            state.n_cells()
        )));
    }
    let mut out = vec![0.0; state.n_components()];
    state.trace_into(j, side, &mut out);
    Ok(out)
}

/// L²-projection of `u0` onto the degree-`k` broken polynomial space,
/// `u_j^l(0) = (2l + 1)/Δ ∫_{I_j} u0(x) φ_j^l(x) dx`, using the
/// `(k + 1)`-point Gauss rule.
pub fn project_initial(
    u0: impl Fn(f64) -> Vec<f64>,
    mesh: &Mesh,
    degree: usize,
) -> Result<DGState, SolverError> {
    project_with_rule(u0, mesh, degree, &QuadratureRule::for_degree(degree))
}

/// Projection with an explicit quadrature rule.
pub fn project_with_rule(
    u0: impl Fn(f64) -> Vec<f64>,
    mesh: &Mesh,
    degree: usize,
    rule: &QuadratureRule,
) -> Result<DGState, SolverError> {
    let n = mesh.n_cells();
    let dx = mesh.dx();
    let mut state: Option<DGState> = None;
    for j in 0..n {
        let xc = mesh.center(j);
        for (s, w) in rule.iter() {
            let x = xc + 0.5 * dx * s;
            let value = u0(x);
            if value.iter().any(|v| !v.is_finite()) {
                return Err(SolverError::Config(format!(
                    "initial data is not finite at x = {x}: {value:?}"
                )));
            }
            let st = match state.as_mut() {
                Some(st) => st,
                None => state.insert(DGState::zeros(degree, value.len(), n)?),
            };
            if value.len() != st.n_components() {
                return Err(SolverError::Config(format!(
                    "initial data changed dimension at x = {x}"
                )));
            }
            for l in 0..=degree {
                let (p, _) = legendre_unchecked(l, s);
                let factor = 0.5 * (2 * l + 1) as f64 * w * p;
                for (i, v) in value.iter().enumerate() {
                    let k = st.index(j, l, i);
                    st.coeffs[k] += factor * v;
                }
            }
        }
    }
    Ok(state.expect("mesh has at least one cell"))
}
