//! The weighted Schatten-sum algebra norms and their duals.
//!
//! The primal norm is ‖u‖ = Σ_π ω(π) d_π^{1+1/p'} ‖û(π)‖_{S^p}; the dual
//! side is the sup of ω(π)^{-1} d_π^{-1/p'} ‖T_π‖_{S^{p'}}. Diagonal
//! averaging over the two-variable algebra turns the pair (p, ω) into
//! (r(p), d^{β(p)}Ω), which is what `delta_norm` evaluates. Sups over
//! infinite duals always come back as a value plus a truncation flag.

use std::sync::Arc;

use num_complex::Complex64;

use crate::coeffs::{CoefficientBundle, DualFunctional};
use crate::duals::{GroupModel, SubgroupDescriptor};
use crate::error::{Error, Result};
use crate::linalg::Kahan;
use crate::matnorm::{dual_witness, lp_norm, schatten, SchattenIndex};
use crate::weights::Weight;

/// The pair (p, ω) defining a weighted p-norm.
#[derive(Debug, Clone)]
pub struct NormParams {
    pub p: SchattenIndex,
    pub weight: Weight,
}

impl NormParams {
    pub fn new(p: SchattenIndex, weight: Weight) -> NormParams {
        NormParams { p, weight }
    }

    pub fn unweighted(p: SchattenIndex) -> NormParams {
        NormParams {
            p,
            weight: Weight::one(),
        }
    }
}

/// A supremum over a truncated dual enumeration: the value, where it was
/// attained, and whether it was still increasing at the horizon.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedSup {
    pub value: f64,
    pub attained_at: usize,
    pub horizon: usize,
    pub still_increasing: bool,
}

fn sup_over(values: impl IntoIterator<Item = f64>) -> TruncatedSup {
    let vals: Vec<f64> = values.into_iter().collect();
    if vals.is_empty() {
        return TruncatedSup {
            value: 0.0,
            attained_at: 0,
            horizon: 0,
            still_increasing: false,
        };
    }
    let best = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // first index within rounding slack of the sup, so plateaus (all
    // values equal up to float noise) do not read as "still increasing"
    let slack = 1e-9 * best.abs().max(1e-300);
    let attained_at = vals
        .iter()
        .position(|&v| v >= best - slack)
        .unwrap_or(vals.len() - 1);
    TruncatedSup {
        value: best,
        attained_at,
        horizon: vals.len(),
        still_increasing: vals.len() > 1 && attained_at == vals.len() - 1,
    }
}

/// ‖u‖ = Σ_π ω(π) d_π^{1+1/p'} ‖û(π)‖_{S^p}, canonical order, compensated
/// summation.
pub fn ap_norm(u: &CoefficientBundle, params: &NormParams) -> Result<f64> {
    let group = u.group();
    let pconj_recip = params.p.conjugate().recip();
    let mut acc = Kahan::new();
    for (id, block) in u.entries() {
        let label = group.label(id)?;
        let w = params.weight.eval_label(&label)?;
        let d = label.dim as f64;
        acc.add(w * d.powf(1.0 + pconj_recip) * schatten(block, params.p));
    }
    Ok(acc.value())
}

/// Dual norm sup_π ω(π)^{-1} d_π^{-1/p'} ‖T_π‖_{S^{p'}} over the first
/// `truncation` dual labels.
pub fn ap_dual_norm(
    t: &DualFunctional,
    params: &NormParams,
    truncation: usize,
) -> Result<TruncatedSup> {
    let group = t.group();
    let pc = params.p.conjugate();
    let mut vals = Vec::new();
    for label in group.enumerate_dual(truncation)? {
        let w = params.weight.eval_label(&label)?;
        let d = label.dim as f64;
        let norm = match t.get(&label.id)? {
            Some(block) => schatten(&block, pc),
            None => 0.0,
        };
        vals.push(norm / (w * d.powf(pc.recip())));
    }
    Ok(sup_over(vals))
}

/// Blockwise Hölder-equality functional: pairs with `u` to exactly
/// ‖u‖_{A^p(G,ω)} while its own dual norm is 1.
pub fn attaining_functional(
    u: &CoefficientBundle,
    params: &NormParams,
) -> Result<DualFunctional> {
    let group = u.group().clone();
    let pconj_recip = params.p.conjugate().recip();
    let mut entries = Vec::new();
    for (id, block) in u.entries() {
        if block.is_zero(1e-300) {
            continue;
        }
        let label = group.label(id)?;
        let w = params.weight.eval_label(&label)?;
        let d = label.dim as f64;
        let witness = dual_witness(block, params.p)?;
        let scale = Complex64::new(w * d.powf(pconj_recip), 0.0);
        entries.push((id.clone(), witness.scale(scale)));
    }
    DualFunctional::from_entries(group, entries)
}

/// Which diagonal-algebra family: the p-family (exponent β) or the
/// row-deformed 2-family (exponent γ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaMode {
    Ap(SchattenIndex),
    Rq(SchattenIndex),
}

/// Parameters of the diagonally averaged algebra: it is again an algebra
/// of the same kind with index r and weight d^exponent · Ω.
#[derive(Debug, Clone, Copy)]
pub struct DeltaParams {
    pub r: SchattenIndex,
    pub r_conj: SchattenIndex,
    /// β(p) on the Ap path, γ(q) on the Rq path.
    pub exponent: f64,
}

/// r(p) from 1/r + |p-2|/(2p) = 1, with β(p) = 4 - 4/p below p = 2 and 2
/// above.
pub fn delta_params(p: SchattenIndex) -> DeltaParams {
    let (r, exponent) = match p {
        SchattenIndex::Infinity => (SchattenIndex::Finite(2.0), 2.0),
        SchattenIndex::Finite(p) => {
            let r = 2.0 * p / (2.0 * p - (p - 2.0).abs());
            let beta = if p < 2.0 { 4.0 - 4.0 / p } else { 2.0 };
            (SchattenIndex::Finite(r), beta)
        }
    };
    DeltaParams {
        r,
        r_conj: r.conjugate(),
        exponent,
    }
}

/// r(q) as above with γ(q) = 3 - 2/q below q = 2 and 1 + 2/q above.
pub fn rq_params(q: SchattenIndex) -> DeltaParams {
    let (r, exponent) = match q {
        SchattenIndex::Infinity => (SchattenIndex::Finite(2.0), 1.0),
        SchattenIndex::Finite(q) => {
            let r = 2.0 * q / (2.0 * q - (q - 2.0).abs());
            let gamma = if q < 2.0 { 3.0 - 2.0 / q } else { 1.0 + 2.0 / q };
            (SchattenIndex::Finite(r), gamma)
        }
    };
    DeltaParams {
        r,
        r_conj: r.conjugate(),
        exponent,
    }
}

impl DeltaMode {
    pub fn params(&self) -> DeltaParams {
        match self {
            DeltaMode::Ap(p) => delta_params(*p),
            DeltaMode::Rq(q) => rq_params(*q),
        }
    }
}

/// Norm of `u` in the diagonally averaged algebra:
/// ap_norm at (r(p), d^{β(p)} Ω).
pub fn delta_norm(u: &CoefficientBundle, mode: DeltaMode, omega: &Weight) -> Result<f64> {
    let dp = mode.params();
    let weight = Weight::dimension(dp.exponent)?.product(&omega.symmetrize());
    ap_norm(u, &NormParams::new(dp.r, weight))
}

/// Norm of the unique diagonal for a finite group:
/// (1/|G|) Σ_π d_π^{2+β(p)} (or 2+γ(q) on the Rq path).
pub fn diagonal_norm_finite(group: &Arc<GroupModel>, mode: DeltaMode) -> Result<f64> {
    let order = group.order().ok_or_else(|| {
        Error::unsupported("diagonal norm is a finite-group quantity")
    })? as f64;
    let expo = 2.0 + mode.params().exponent;
    let mut acc = Kahan::new();
    for label in group.enumerate_dual(usize::MAX - 1)? {
        acc.add((label.dim as f64).powf(expo));
    }
    Ok(acc.value() / order)
}

/// Restriction dual norm: for a functional T on the subgroup dual,
/// sup_π ω(π)^{-1} d_π^{-1/p'} (Σ_{σ⊂π|_H} m(σ,π) ‖T_σ‖_{p'}^{p'})^{1/p'},
/// with a max over σ when p' = ∞.
pub fn restriction_dual_norm(
    t: &DualFunctional,
    group: &Arc<GroupModel>,
    sub: &SubgroupDescriptor,
    params: &NormParams,
    truncation: usize,
) -> Result<TruncatedSup> {
    let sub_model = sub.subgroup_model(group)?;
    if !t.group().same_group(&sub_model) {
        return Err(Error::domain(format!(
            "functional lives on {}, expected the subgroup {}",
            t.group().descriptor(),
            sub_model.descriptor()
        )));
    }
    let pc = params.p.conjugate();
    let mut vals = Vec::new();
    for pi in group.enumerate_dual(truncation)? {
        let w = params.weight.eval_label(&pi)?;
        let d = pi.dim as f64;
        let mut block_norms = Vec::new();
        for (sigma, mult) in group.branching(sub, &pi.id)? {
            let norm = match t.get(&sigma)? {
                Some(block) => schatten(&block, pc),
                None => 0.0,
            };
            for _ in 0..mult {
                block_norms.push(norm);
            }
        }
        let inner = lp_norm(&block_norms, pc);
        vals.push(inner / (w * d.powf(pc.recip())));
    }
    Ok(sup_over(vals))
}

/// The SU(2)-to-torus restriction dual norm in closed form:
/// sup_n (n+1)^{-(1/p'+α)} (Σ_{j=0}^n |t_{n-2j}|^{p'})^{1/p'}.
pub fn su2_torus_dual_norm(
    t: impl Fn(i64) -> Complex64,
    p: SchattenIndex,
    alpha: f64,
    horizon: u32,
) -> TruncatedSup {
    let pc = p.conjugate();
    let vals = (0..=horizon as i64).map(|n| {
        let entries: Vec<f64> = (0..=n).map(|j| t(n - 2 * j).norm()).collect();
        lp_norm(&entries, pc) / ((n + 1) as f64).powf(pc.recip() + alpha)
    });
    sup_over(vals)
}

/// Result of the diagonally-averaged torus-restriction dual norm. On the
/// Ap path the paper proves only an upper bound, and the result says so.
#[derive(Debug, Clone, Copy)]
pub struct DeltaDualNorm {
    pub sup: TruncatedSup,
    pub is_upper_bound: bool,
}

/// One row of the diagonally-averaged torus-restriction dual norm: the
/// contribution of index n to the sup in `su2_torus_delta_dual`.
pub fn su2_torus_delta_dual_row(
    t: &impl Fn(i64) -> Complex64,
    mode: DeltaMode,
    alpha: f64,
    n: i64,
) -> f64 {
    match mode {
        DeltaMode::Ap(p) => {
            let e = if p.as_f64() >= 2.0 {
                1.0 + 2.0 * alpha
            } else {
                2.0 * p.conjugate().recip() + 2.0 * alpha
            };
            let m = (0..=n)
                .map(|k| t(-n + 2 * k).norm())
                .fold(0.0f64, f64::max);
            m / ((n + 1) as f64).powf(e)
        }
        DeltaMode::Rq(_) => {
            let rconj = mode.params().r_conj;
            let entries: Vec<f64> = (0..=n).map(|k| t(-n + 2 * k).norm()).collect();
            lp_norm(&entries, rconj) / ((n + 1) as f64).powf(1.0 + 2.0 * alpha)
        }
    }
}

/// Dual norm of a two-sided sequence in the diagonally averaged
/// restriction algebra.
///
/// Ap mode evaluates the proved upper bound
/// sup_n (n+1)^{-e} max_k |t_{-n+2k}| with e = 1+2α for p ≥ 2 and
/// e = 2/p'+2α for p < 2. Rq mode is exact:
/// sup_n (n+1)^{-1-2α} (Σ_k |t_{-n+2k}|^{r(q)'})^{1/r(q)'}.
pub fn su2_torus_delta_dual(
    t: impl Fn(i64) -> Complex64,
    mode: DeltaMode,
    alpha: f64,
    horizon: u32,
) -> DeltaDualNorm {
    let vals = (0..=horizon as i64).map(|n| su2_torus_delta_dual_row(&t, mode, alpha, n));
    DeltaDualNorm {
        sup: sup_over(vals),
        is_upper_bound: matches!(mode, DeltaMode::Ap(_)),
    }
}

/// Norm of a central bundle: Σ_π ω(π) d_π² |c_π|, independent of p. The
/// agreement with `ap_norm` at any p is asserted to 1e-12 relative.
pub fn central_norm(
    u: &CoefficientBundle,
    p: SchattenIndex,
    omega: &Weight,
) -> Result<f64> {
    if !u.is_central(1e-10) {
        return Err(Error::domain("central_norm requires a central bundle"));
    }
    let group = u.group();
    let mut acc = Kahan::new();
    for (id, block) in u.entries() {
        let label = group.label(id)?;
        let w = omega.eval_label(&label)?;
        let d = label.dim as f64;
        let c = block.trace() / d;
        acc.add(w * d * d * c.norm());
    }
    let value = acc.value();
    let via_ap = ap_norm(u, &NormParams::new(p, omega.clone()))?;
    if (value - via_ap).abs() > 1e-12 * value.max(1.0) {
        return Err(Error::domain(format!(
            "central norm {value} disagrees with ap_norm {via_ap}"
        )));
    }
    Ok(value)
}

/// Structure data of a connected Lie group used by the series thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieStructureData {
    /// d(G): dimension of the group manifold.
    pub dim: u32,
    /// s(G): semisimple rank.
    pub ss_rank: u32,
    /// z(G): dimension of the central torus.
    pub center_dim: u32,
}

impl LieStructureData {
    pub fn new(dim: u32, ss_rank: u32, center_dim: u32) -> Result<LieStructureData> {
        if dim < ss_rank + center_dim {
            return Err(Error::domain(
                "Lie data needs d(G) >= s(G) + z(G)",
            ));
        }
        Ok(LieStructureData {
            dim,
            ss_rank,
            center_dim,
        })
    }

    /// SU(2): (d, s, z) = (3, 1, 0).
    pub fn su2() -> LieStructureData {
        LieStructureData {
            dim: 3,
            ss_rank: 1,
            center_dim: 0,
        }
    }

    /// SU(n): (n²-1, n-1, 0).
    pub fn su_n(n: u32) -> LieStructureData {
        LieStructureData {
            dim: n * n - 1,
            ss_rank: n - 1,
            center_dim: 0,
        }
    }
}
