//! Legendre modal basis and Gauss-Legendre quadrature on the reference cell [-1, 1].
//!
//! Cell `j` is mapped to the reference coordinate `s = 2 (x - x_j) / Δ`, and the
//! local basis is `φ_j^l(x) = L_l(s)`. With this scaling `∫ φ_j^l φ_j^m dx =
//! δ_lm Δ / (2l + 1)`, so the mass matrix is diagonal.

use crate::error::SolverError;

/// Highest polynomial degree supported by the basis and the limiter.
pub const MAX_DEGREE: usize = 2;

/// Legendre polynomial `L_l(s)` and its derivative, for `l <= MAX_DEGREE`.
pub fn legendre_eval(l: usize, s: f64) -> Result<(f64, f64), SolverError> {
    if l > MAX_DEGREE {
        return Err(SolverError::UnsupportedDegree(l));
    }
    if !(-1.0..=1.0).contains(&s) {
        return Err(SolverError::CoordinateOutOfRange(s));
    }
    Ok(legendre_unchecked(l, s))
}

#[inline]
pub(crate) fn legendre_unchecked(l: usize, s: f64) -> (f64, f64) {
    match l {
        0 => (1.0, 0.0),
        1 => (s, 1.0),
        2 => (0.5 * (3.0 * s * s - 1.0), 3.0 * s),
        _ => legendre_recurrence(l, s),
    }
}

/// Bonnet recurrence; used to build quadrature rules of any size.
fn legendre_recurrence(n: usize, s: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, s);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * s * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let dp = if (s * s - 1.0).abs() < f64::EPSILON {
        // endpoint value L_n'(±1) = (±1)^(n+1) n (n+1) / 2
        let sign = if s > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        sign * nf * (nf + 1.0) / 2.0
    } else {
        nf * (s * p - p_prev) / (s * s - 1.0)
    };
    (p, dp)
}

/// Value of `L_l` at the right (`+1`) or left (`-1`) end of the reference cell.
#[inline]
pub fn legendre_at_end(l: usize, right: bool) -> f64 {
    if right || l.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// `n`-point rule, exact for polynomials of degree `2n - 1`.
    pub fn gauss_legendre(n: usize) -> Self {
        assert!(n >= 1, "quadrature needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Chebyshev-like initial guess, then Newton on L_n
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_recurrence(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_recurrence(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// The `(k + 1)`-point rule used for a degree-`k` discretization.
    pub fn for_degree(k: usize) -> Self {
        Self::gauss_legendre(k + 1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Basis values and derivatives tabulated at the nodes of a quadrature rule.
#[derive(Debug, Clone)]
pub(crate) struct BasisTable {
    pub degree: usize,
    pub rule: QuadratureRule,
    /// `values[g * (k+1) + l] = L_l(s_g)`
    pub values: Vec<f64>,
    /// `derivs[g * (k+1) + l] = L_l'(s_g)`
    pub derivs: Vec<f64>,
}

impl BasisTable {
    pub fn new(degree: usize) -> Self {
        let rule = QuadratureRule::for_degree(degree);
        let nb = degree + 1;
        let mut values = vec![0.0; rule.len() * nb];
        let mut derivs = vec![0.0; rule.len() * nb];
        for (g, &s) in rule.nodes.iter().enumerate() {
            for l in 0..nb {
                let (v, d) = legendre_unchecked(l, s);
                values[g * nb + l] = v;
                derivs[g * nb + l] = d;
            }
        }
        Self {
            degree,
            rule,
            values,
            derivs,
        }
    }
}
