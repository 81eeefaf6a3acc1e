//! Schatten p-norms of complex matrices and Hölder-equality dual witnesses.


use crate::error::{Error, Result};
use crate::linalg::{svd, CMat, Kahan};

/// A Schatten exponent in `[1, ∞]`, with `∞` as a first-class value so the
/// conjugation `1 ↔ ∞` is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchattenIndex {
    Finite(f64),
    Infinity,
}

impl SchattenIndex {
    pub fn new(p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::domain(format!("Schatten index p = {p} must be >= 1")));
        }
        if p.is_infinite() {
            Ok(SchattenIndex::Infinity)
        } else {
            Ok(SchattenIndex::Finite(p))
        }
    }

    pub const ONE: SchattenIndex = SchattenIndex::Finite(1.0);
    pub const TWO: SchattenIndex = SchattenIndex::Finite(2.0);

    /// Conjugate index `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> SchattenIndex {
        match self {
            SchattenIndex::Infinity => SchattenIndex::Finite(1.0),
            SchattenIndex::Finite(p) if p == 1.0 => SchattenIndex::Infinity,
            SchattenIndex::Finite(p) => SchattenIndex::Finite(p / (p - 1.0)),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, SchattenIndex::Infinity)
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn recip(self) -> f64 {
        match self {
            SchattenIndex::Infinity => 0.0,
            SchattenIndex::Finite(p) => 1.0 / p,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            SchattenIndex::Infinity => f64::INFINITY,
            SchattenIndex::Finite(p) => p,
        }
    }
}

impl std::fmt::Display for SchattenIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SchattenIndex::Infinity => write!(f, "inf"),
            SchattenIndex::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// `ℓ^p` norm of a nonnegative vector, `max` for `p = ∞`.
pub fn lp_norm(xs: &[f64], p: SchattenIndex) -> f64 {
    match p {
        SchattenIndex::Infinity => xs.iter().cloned().fold(0.0, f64::max),
        SchattenIndex::Finite(p) if p == 1.0 => {
            let mut acc = Kahan::new();
            for &x in xs {
                acc.add(x);
            }
            acc.value()
        }
        SchattenIndex::Finite(p) => {
            let scale = xs.iter().cloned().fold(0.0, f64::max);
            if scale == 0.0 {
                return 0.0;
            }
            let mut acc = Kahan::new();
            for &x in xs {
                acc.add((x / scale).powf(p));
            }
            scale * acc.value().powf(1.0 / p)
        }
    }
}

/// Singular values of `A` in descending order.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return vec![];
    }
    // A single row or column has one singular value, its Euclidean norm;
    // keeping that case exact makes scalar-block norms agree bit-for-bit
    // with direct |t| computations.
    if a.rows() == 1 || a.cols() == 1 {
        let mut acc = Kahan::new();
        for x in a.data() {
            acc.add(x.norm_sqr());
        }
        return vec![acc.value().sqrt()];
    }
    svd(a).s
}

/// Schatten p-norm `(Σ s_i^p)^{1/p}` over singular values.
pub fn schatten(a: &CMat, p: SchattenIndex) -> f64 {
    lp_norm(&singular_values(a), p)
}

/// Hölder-equality witness: for `A ≠ 0` returns `T` with `‖T‖_{p'} = 1` and
/// `Re Tr(A·T) = ‖A‖_p`, built from the SVD `A = UΣV^*` as `T = V g(Σ) U^*`.
pub fn dual_witness(a: &CMat, p: SchattenIndex) -> Result<CMat> {
    let scale = a.max_abs();
    if scale == 0.0 {
        return Err(Error::domain("dual_witness of the zero matrix"));
    }
    let dec = svd(a);
    let k = dec.s.len();
    let smax = dec.s[0];
    let cutoff = 1e-13 * smax;
    let g: Vec<f64> = match p {
        // p = 1: T = V U^*, so that Tr(AT) = Σ s_i and ‖T‖_∞ = 1.
        SchattenIndex::Finite(q) if q == 1.0 => {
            dec.s.iter().map(|&s| if s > cutoff { 1.0 } else { 0.0 }).collect()
        }
        // p = ∞: rank-one witness at the top singular value.
        SchattenIndex::Infinity => {
            let mut v = vec![0.0; k];
            v[0] = 1.0;
            v
        }
        // 1 < p < ∞: g_i = s_i^{p-1} / ‖A‖_p^{p/p'}.
        SchattenIndex::Finite(q) => {
            let norm = lp_norm(&dec.s, p);
            let denom = norm.powf(q - 1.0);
            dec.s
                .iter()
                .map(|&s| if s > cutoff { s.powf(q - 1.0) / denom } else { 0.0 })
                .collect()
        }
    };
    // T = V g U^*
    let mut t = CMat::zeros(a.cols(), a.rows());
    for i in 0..k {
        if g[i] == 0.0 {
            continue;
        }
        let u = dec.u.column(i);
        let v = dec.v.column(i);
        for r in 0..a.cols() {
            for c in 0..a.rows() {
                t[(r, c)] += v[r] * g[i] * u[c].conj();
            }
        }
    }
    Ok(t)
}
