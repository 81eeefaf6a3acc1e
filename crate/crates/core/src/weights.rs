//! Weights on dual objects: positive functions ω with
//! ω(σ) ≤ ω(π)ω(π') whenever σ ⊂ π ⊗ π'.
//!
//! Shipped families: constants, dimension powers d^α, logarithmic weights
//! (1 + log d)^α, and polynomial weights (1 + τ_S)^α built on the
//! word-length function of a symmetric generating set. Restriction to a
//! subgroup takes an infimum over the parent dual, so a truncation flag
//! travels with the result.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::duals::{GroupModel, IrrepLabel, LabelId, SubgroupDescriptor};
use crate::error::{Error, Result};

/// Tri-state symmetry marker: ω(π̄) = ω(π)?
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Yes,
    No,
    Unknown,
}

#[derive(Clone)]
enum WeightKind {
    Constant(f64),
    Dimension { alpha: f64 },
    LogDimension { alpha: f64 },
    Poly { wl: Arc<WordLength>, alpha: f64 },
    Restricted { table: Arc<BTreeMap<LabelId, f64>> },
    Product(Box<Weight>, Box<Weight>),
    Symmetrized(Box<Weight>),
    Custom(Arc<dyn Fn(&IrrepLabel) -> Result<f64> + Send + Sync>),
}

impl fmt::Debug for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightKind::Constant(c) => write!(f, "Constant({c})"),
            WeightKind::Dimension { alpha } => write!(f, "Dimension({alpha})"),
            WeightKind::LogDimension { alpha } => write!(f, "LogDimension({alpha})"),
            WeightKind::Poly { alpha, .. } => write!(f, "Poly({alpha})"),
            WeightKind::Restricted { .. } => write!(f, "Restricted"),
            WeightKind::Product(a, b) => write!(f, "Product({a:?},{b:?})"),
            WeightKind::Symmetrized(w) => write!(f, "Symmetrized({w:?})"),
            WeightKind::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// A weight on a dual object. Values are memoized per label; evaluators
/// must be deterministic.
#[derive(Debug, Clone)]
pub struct Weight {
    name: String,
    symmetric: Symmetry,
    kind: WeightKind,
    cache: Arc<Mutex<BTreeMap<LabelId, f64>>>,
}

impl Weight {
    fn build(name: String, symmetric: Symmetry, kind: WeightKind) -> Weight {
        Weight {
            name,
            symmetric,
            kind,
            cache: Arc::new(Mutex::new(BTreeMap::new())),
        }
    }

    pub fn constant(c: f64) -> Result<Weight> {
        if !(c > 0.0) {
            return Err(Error::domain("constant weight must be positive"));
        }
        Ok(Weight::build(
            if c == 1.0 { "one".into() } else { format!("const:{c}") },
            Symmetry::Yes,
            WeightKind::Constant(c),
        ))
    }

    pub fn one() -> Weight {
        Weight::constant(1.0).unwrap()
    }

    /// The dimension weight d^α.
    pub fn dimension(alpha: f64) -> Result<Weight> {
        if !(alpha >= 0.0) {
            return Err(Error::domain("dimension weight needs alpha >= 0"));
        }
        Ok(Weight::build(
            format!("dim:{alpha}"),
            Symmetry::Yes,
            WeightKind::Dimension { alpha },
        ))
    }

    /// The logarithmic weight (1 + log d_π)^α.
    pub fn log_dimension(alpha: f64) -> Result<Weight> {
        if !(alpha >= 0.0) {
            return Err(Error::domain("log weight needs alpha >= 0"));
        }
        Ok(Weight::build(
            format!("log:{alpha}"),
            Symmetry::Yes,
            WeightKind::LogDimension { alpha },
        ))
    }

    /// The polynomial weight (1 + τ_S(π))^α over a word-length table.
    pub fn polynomial(wl: Arc<WordLength>, alpha: f64) -> Result<Weight> {
        if !(alpha >= 0.0) {
            return Err(Error::domain("polynomial weight needs alpha >= 0"));
        }
        let name = format!("poly:S={},{alpha}", wl.base_names.join("+"));
        Ok(Weight::build(
            name,
            Symmetry::Yes,
            WeightKind::Poly { wl, alpha },
        ))
    }

    /// Arbitrary evaluator, for tests and experiments.
    pub fn custom(
        name: &str,
        symmetric: Symmetry,
        f: impl Fn(&IrrepLabel) -> Result<f64> + Send + Sync + 'static,
    ) -> Weight {
        Weight::build(name.into(), symmetric, WeightKind::Custom(Arc::new(f)))
    }

    /// The symmetrization Ω(π) = ω(π) ω(π̄).
    pub fn symmetrize(&self) -> Weight {
        Weight::build(
            format!("sym({})", self.name),
            Symmetry::Yes,
            WeightKind::Symmetrized(Box::new(self.clone())),
        )
    }

    /// Pointwise product of two weights (again a weight).
    pub fn product(&self, other: &Weight) -> Weight {
        let symmetric = match (self.symmetric, other.symmetric) {
            (Symmetry::Yes, Symmetry::Yes) => Symmetry::Yes,
            _ => Symmetry::Unknown,
        };
        Weight::build(
            format!("{}*{}", self.name, other.name),
            symmetric,
            WeightKind::Product(Box::new(self.clone()), Box::new(other.clone())),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symmetric(&self) -> Symmetry {
        self.symmetric
    }

    /// Evaluate at a label (with dimension and conjugate attached).
    pub fn eval_label(&self, label: &IrrepLabel) -> Result<f64> {
        if let Some(&v) = self.cache.lock().unwrap().get(&label.id) {
            return Ok(v);
        }
        let v = match &self.kind {
            WeightKind::Constant(c) => *c,
            WeightKind::Dimension { alpha } => (label.dim as f64).powf(*alpha),
            WeightKind::LogDimension { alpha } => (1.0 + (label.dim as f64).ln()).powf(*alpha),
            WeightKind::Poly { wl, alpha } => {
                let tau = wl.tau(&label.id).ok_or_else(|| {
                    Error::domain(format!(
                        "label beyond word-length horizon {} for weight {}",
                        wl.horizon, self.name
                    ))
                })?;
                (1.0 + tau as f64).powf(*alpha)
            }
            WeightKind::Restricted { table } => *table.get(&label.id).ok_or_else(|| {
                Error::domain(format!(
                    "restricted weight {} has no value at this label (beyond horizon)",
                    self.name
                ))
            })?,
            WeightKind::Product(a, b) => a.eval_label(label)? * b.eval_label(label)?,
            WeightKind::Symmetrized(w) => {
                w.eval_label(label)? * w.eval_label(&label.conjugate())?
            }
            WeightKind::Custom(f) => f(label)?,
        };
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain(format!(
                "weight {} produced non-positive value {v}",
                self.name
            )));
        }
        self.cache.lock().unwrap().insert(label.id.clone(), v);
        Ok(v)
    }

    /// Evaluate by label id, resolving dimension/conjugate via the group.
    pub fn eval(&self, group: &GroupModel, id: &LabelId) -> Result<f64> {
        self.eval_label(&group.label(id)?)
    }

    /// Whether the weight values are certified nondecreasing along the
    /// group's canonical dual enumeration, including beyond any horizon.
    /// Used to clear the truncation flag on restricted-weight infima.
    pub fn monotone_along_dual(&self, group: &GroupModel) -> bool {
        match &self.kind {
            WeightKind::Constant(_) => true,
            WeightKind::Dimension { .. } => group.enumeration_dim_monotone(),
            WeightKind::LogDimension { .. } => group.enumeration_dim_monotone(),
            WeightKind::Product(a, b) => {
                a.monotone_along_dual(group) && b.monotone_along_dual(group)
            }
            WeightKind::Symmetrized(w) => w.monotone_along_dual(group),
            _ => false,
        }
    }
}

/// Word-length function τ_S(σ) = min{n : σ ⊂ π_1 ⊗ ... ⊗ π_n, π_i ∈ S},
/// computed by breadth-first search over the fusion graph from the trivial
/// representation (τ(triv) = 0).
#[derive(Debug)]
pub struct WordLength {
    pub base: Vec<LabelId>,
    base_names: Vec<String>,
    values: BTreeMap<LabelId, u32>,
    pub horizon: u32,
    /// Whether every label of the (possibly truncated) dual enumeration
    /// was reached within the horizon.
    pub exhausted: bool,
}

impl WordLength {
    pub fn tau(&self, id: &LabelId) -> Option<u32> {
        self.values.get(id).copied()
    }

    pub fn values(&self) -> &BTreeMap<LabelId, u32> {
        &self.values
    }
}

/// BFS word lengths for a symmetric set S up to the given horizon.
pub fn word_length(
    group: &Arc<GroupModel>,
    base: &[LabelId],
    horizon: u32,
) -> Result<WordLength> {
    if base.is_empty() {
        return Err(Error::domain("word length needs a nonempty generating set"));
    }
    let mut base_labels = Vec::with_capacity(base.len());
    for id in base {
        base_labels.push(group.label(id)?);
    }
    // S must be closed under conjugation
    for l in &base_labels {
        if !base.contains(&l.conj) {
            return Err(Error::domain(format!(
                "generating set is not symmetric: missing conjugate of {}",
                group.label_string(&l.id)?
            )));
        }
    }
    let mut values: BTreeMap<LabelId, u32> = BTreeMap::new();
    values.insert(group.trivial_id(), 0);
    let mut frontier: Vec<LabelId> = vec![group.trivial_id()];
    for level in 1..=horizon {
        let mut next = Vec::new();
        for sigma in &frontier {
            for gen in base {
                for (tau, _) in group.fusion(sigma, gen)?.iter() {
                    if !values.contains_key(tau) {
                        values.insert(tau.clone(), level);
                        next.push(tau.clone());
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    // coverage check against the canonical (truncated) enumeration
    let exhausted = match group.order() {
        Some(_) => group
            .enumerate_dual(usize::MAX - 1)?
            .iter()
            .all(|l| values.contains_key(&l.id)),
        None => match group.su2_trunc() {
            Some(n) => (0..=n).all(|k| values.contains_key(&LabelId::Su2(k))),
            None => false,
        },
    };
    let base_names = base
        .iter()
        .map(|id| group.label_string(id))
        .collect::<Result<Vec<_>>>()?;
    Ok(WordLength {
        base: base.to_vec(),
        base_names,
        values,
        horizon,
        exhausted,
    })
}

/// A restricted weight ω_G|_H(σ) = inf{ω(π) : σ ⊂ π|_H} with an explicit
/// marker for whether the infimum is certified (exhausted dual, or ω
/// monotone along the enumeration) or could still drop beyond the horizon.
#[derive(Debug, Clone)]
pub struct RestrictedWeight {
    pub weight: Weight,
    pub certified: bool,
}

/// Compute the restricted weight on the subgroup dual, scanning parent
/// labels within `horizon`.
pub fn restrict_weight(
    omega: &Weight,
    group: &Arc<GroupModel>,
    sub: &SubgroupDescriptor,
    horizon: usize,
) -> Result<RestrictedWeight> {
    let mut table: BTreeMap<LabelId, f64> = BTreeMap::new();
    for pi in group.enumerate_dual(horizon)? {
        let w = omega.eval_label(&pi)?;
        for (sigma, mult) in group.branching(sub, &pi.id)? {
            if mult == 0 {
                continue;
            }
            table
                .entry(sigma)
                .and_modify(|cur| *cur = cur.min(w))
                .or_insert(w);
        }
    }
    if table.is_empty() {
        return Err(Error::domain(
            "no branching candidates within horizon for restricted weight",
        ));
    }
    let certified = group.dual_is_exhausted(horizon) || omega.monotone_along_dual(group);
    let weight = Weight::build(
        format!("restrict({})", omega.name),
        omega.symmetric,
        WeightKind::Restricted {
            table: Arc::new(table),
        },
    );
    Ok(RestrictedWeight { weight, certified })
}

/// One submultiplicativity violation: ω(σ) > ω(π)ω(π').
#[derive(Debug, Clone)]
pub struct WeightViolation {
    pub pi: LabelId,
    pub pi2: LabelId,
    pub sigma: LabelId,
    pub lhs: f64,
    pub rhs: f64,
}

/// Report of an exhaustive weight-axiom check.
#[derive(Debug)]
pub struct WeightCheckReport {
    pub ok: bool,
    pub violations: Vec<WeightViolation>,
    /// Minimum weight value seen: evidence for boundedness away from zero.
    pub min_value: f64,
    pub pairs_checked: usize,
}

/// Check ω(σ) ≤ ω(π)ω(π') over all fusion triples with inputs among the
/// first `limit` dual labels. Violations are data, not errors.
pub fn check_weight(
    group: &Arc<GroupModel>,
    omega: &Weight,
    limit: usize,
) -> Result<WeightCheckReport> {
    let labels = group.enumerate_dual(limit)?;
    let mut min_value = f64::INFINITY;
    let mut violations = Vec::new();
    let mut pairs = 0usize;
    for a in &labels {
        let wa = omega.eval_label(a)?;
        min_value = min_value.min(wa);
        for b in &labels {
            let wb = omega.eval_label(b)?;
            pairs += 1;
            for (sigma, _) in group.fusion(&a.id, &b.id)?.iter() {
                let ws = omega.eval(group, sigma)?;
                min_value = min_value.min(ws);
                if ws > wa * wb * (1.0 + 1e-12) {
                    violations.push(WeightViolation {
                        pi: a.id.clone(),
                        pi2: b.id.clone(),
                        sigma: sigma.clone(),
                        lhs: ws,
                        rhs: wa * wb,
                    });
                }
            }
        }
    }
    Ok(WeightCheckReport {
        ok: violations.is_empty(),
        violations,
        min_value,
        pairs_checked: pairs,
    })
}

/// Parse a weight descriptor: "one", "dim:a", "log:a", "poly:S=l1+l2,a".
/// The horizon bounds the word-length BFS for polynomial weights.
pub fn parse_weight(group: &Arc<GroupModel>, desc: &str, horizon: u32) -> Result<Weight> {
    let d = desc.trim();
    if d == "one" {
        return Ok(Weight::one());
    }
    if let Some(rest) = d.strip_prefix("dim:") {
        let alpha: f64 = rest
            .parse()
            .map_err(|_| Error::parse(format!("bad exponent in weight {d:?}")))?;
        return Weight::dimension(alpha);
    }
    if let Some(rest) = d.strip_prefix("log:") {
        let alpha: f64 = rest
            .parse()
            .map_err(|_| Error::parse(format!("bad exponent in weight {d:?}")))?;
        return Weight::log_dimension(alpha);
    }
    if let Some(rest) = d.strip_prefix("poly:S=") {
        let (set_part, alpha_part) = rest
            .rsplit_once(',')
            .ok_or_else(|| Error::parse(format!("weight {d:?} needs poly:S=...,alpha")))?;
        let alpha: f64 = alpha_part
            .parse()
            .map_err(|_| Error::parse(format!("bad exponent in weight {d:?}")))?;
        let mut base = Vec::new();
        for name in set_part.split('+') {
            let id = group.parse_label(name)?;
            let conj = group.label(&id)?.conj;
            if !base.contains(&id) {
                base.push(id);
            }
            if !base.contains(&conj) {
                base.push(conj);
            }
        }
        let wl = Arc::new(word_length(group, &base, horizon)?);
        return Weight::polynomial(wl, alpha);
    }
    Err(Error::parse(format!("unknown weight descriptor {d:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_weight_values() {
        let w0 = Weight::dimension(0.0).unwrap();
        let w1 = Weight::dimension(1.0).unwrap();
        let w2 = Weight::dimension(2.0).unwrap();
        let su2 = GroupModel::parse("SU2:N=6").unwrap();
        let pi3 = su2.label(&LabelId::Su2(3)).unwrap();
        assert_eq!(w0.eval_label(&pi3).unwrap(), 1.0);
        assert_eq!(w1.eval_label(&pi3).unwrap(), 4.0);
        let s3 = GroupModel::parse("S3").unwrap();
        let std = s3.label(&s3.parse_label("std").unwrap()).unwrap();
        assert_eq!(w2.eval_label(&std).unwrap(), 4.0);
        assert!(Weight::dimension(-1.0).is_err());
    }

    #[test]
    fn word_length_su2() {
        let g = GroupModel::parse("SU2:N=10").unwrap();
        let wl = word_length(&g, &[LabelId::Su2(1)], 10).unwrap();
        for n in 0..=10u32 {
            assert_eq!(wl.tau(&LabelId::Su2(n)), Some(n), "tau(pi_{n}) = n");
        }
        assert!(wl.exhausted);
        // beyond horizon: unknown
        assert_eq!(wl.tau(&LabelId::Su2(11)), None);
    }

    #[test]
    fn word_length_s3_std() {
        let g = GroupModel::parse("S3").unwrap();
        let std = g.parse_label("std").unwrap();
        let wl = word_length(&g, &[std.clone()], 10).unwrap();
        assert_eq!(wl.tau(&g.trivial_id()), Some(0));
        assert_eq!(wl.tau(&std), Some(1));
        assert_eq!(wl.tau(&g.parse_label("sgn").unwrap()), Some(2));
        assert!(wl.exhausted);
    }

    #[test]
    fn word_length_requires_symmetric_set() {
        let g = GroupModel::parse("Z/8").unwrap();
        // chi1 alone is not symmetric (conjugate is chi7)
        let bad = word_length(&g, &[LabelId::Finite(1)], 10);
        assert!(bad.is_err());
        let ok = word_length(&g, &[LabelId::Finite(1), LabelId::Finite(7)], 10).unwrap();
        assert!(ok.exhausted);
        assert_eq!(ok.tau(&LabelId::Finite(4)), Some(4));
    }

    #[test]
    fn word_length_partial_flag() {
        let g = GroupModel::parse("SU2:N=10").unwrap();
        let wl = word_length(&g, &[LabelId::Su2(1)], 4).unwrap();
        assert!(!wl.exhausted, "horizon 4 cannot reach pi_10");
    }

    #[test]
    fn polynomial_weight_su2_matches_dimension() {
        let g = GroupModel::parse("SU2:N=10").unwrap();
        let wl = Arc::new(word_length(&g, &[LabelId::Su2(1)], 10).unwrap());
        let w = Weight::polynomial(wl, 1.0).unwrap();
        for n in 0..=10u32 {
            let l = g.label(&LabelId::Su2(n)).unwrap();
            assert_eq!(w.eval_label(&l).unwrap(), (n + 1) as f64);
        }
        // beyond horizon -> error
        let l11 = g.label(&LabelId::Su2(11)).unwrap();
        assert!(w.eval_label(&l11).is_err());
    }

    #[test]
    fn polynomial_weight_s3_sgn() {
        let g = GroupModel::parse("S3").unwrap();
        let std = g.parse_label("std").unwrap();
        let wl = Arc::new(word_length(&g, &[std], 10).unwrap());
        let w = Weight::polynomial(wl, 2.0).unwrap();
        let sgn = g.label(&g.parse_label("sgn").unwrap()).unwrap();
        assert_eq!(w.eval_label(&sgn).unwrap(), 9.0);
    }

    #[test]
    fn symmetrize_dimension() {
        let w = Weight::dimension(1.5).unwrap();
        let omega = w.symmetrize();
        let g = GroupModel::parse("SU2:N=4").unwrap();
        let l = g.label(&LabelId::Su2(2)).unwrap();
        assert!((omega.eval_label(&l).unwrap() - 9.0f64.powf(1.5)).abs() < 1e-12);
        assert_eq!(omega.symmetric(), Symmetry::Yes);
        let one = Weight::one().symmetrize();
        assert_eq!(one.eval_label(&l).unwrap(), 1.0);
    }

    #[test]
    fn symmetrize_asymmetric_torus_weight() {
        // ω(χ_k) = 2^{max(k,0)} -> Ω(χ_k) = 2^{|k|}
        let g = GroupModel::parse("T:k=1").unwrap();
        let w = Weight::custom("halfexp", Symmetry::No, |l| {
            let LabelId::Torus(v) = &l.id else {
                return Err(Error::domain("torus label expected"));
            };
            Ok(2.0f64.powi(v[0].max(0) as i32))
        });
        let omega = w.symmetrize();
        for k in [-3i64, -1, 0, 2, 5] {
            let l = g.label(&LabelId::Torus(vec![k])).unwrap();
            assert_eq!(omega.eval_label(&l).unwrap(), 2.0f64.powi(k.unsigned_abs() as i32));
        }
    }

    #[test]
    fn check_dimension_weight_su2() {
        let g = GroupModel::parse("SU2:N=12").unwrap();
        let w = Weight::dimension(1.0).unwrap();
        let report = check_weight(&g, &w, 12).unwrap();
        assert!(report.ok, "d is a weight on SU(2)");
        assert_eq!(report.min_value, 1.0);
    }

    #[test]
    fn check_small_constant_fails() {
        let g = GroupModel::parse("S3").unwrap();
        let w = Weight::constant(0.5).unwrap();
        let report = check_weight(&g, &w, 10).unwrap();
        assert!(!report.ok);
        // violation at triv ⊂ π ⊗ π̄: 1/2 > 1/4
        assert!(report
            .violations
            .iter()
            .any(|v| v.sigma == g.trivial_id() && v.lhs == 0.5 && v.rhs == 0.25));
    }

    #[test]
    fn check_polynomial_weight() {
        let g = GroupModel::parse("SU2:N=8").unwrap();
        let wl = Arc::new(word_length(&g, &[LabelId::Su2(1)], 40).unwrap());
        let w = Weight::polynomial(wl, 1.0).unwrap();
        let report = check_weight(&g, &w, 9).unwrap();
        assert!(report.ok, "subadditivity of tau makes this a weight");
    }

    #[test]
    fn check_shipped_weights_on_catalog() {
        for d in ["S3", "S4", "D4", "Q8", "Z/8", "A4"] {
            let g = GroupModel::parse(d).unwrap();
            for w in [
                Weight::one(),
                Weight::dimension(1.0).unwrap(),
                Weight::dimension(2.0).unwrap(),
                Weight::log_dimension(1.0).unwrap(),
            ] {
                let report = check_weight(&g, &w, 16).unwrap();
                assert!(report.ok, "{} fails on {d}", w.name());
            }
        }
    }

    #[test]
    fn restricted_dimension_weight_on_torus() {
        let g = GroupModel::parse("SU2:N=30").unwrap();
        let w = Weight::dimension(1.0).unwrap();
        let r = restrict_weight(&w, &g, &SubgroupDescriptor::MaximalTorusSu2, 31).unwrap();
        let t = GroupModel::parse("T:k=1").unwrap();
        for k in -20i64..=20 {
            let l = t.label(&LabelId::Torus(vec![k])).unwrap();
            assert_eq!(
                r.weight.eval_label(&l).unwrap(),
                (k.unsigned_abs() + 1) as f64,
                "restricted weight at chi_{k}"
            );
        }
        assert!(r.certified, "dimension weight is monotone along SU(2) dual");
    }

    #[test]
    fn restricted_weight_center() {
        let g = GroupModel::parse("SU2:N=10").unwrap();
        let w = Weight::dimension(1.0).unwrap();
        let r = restrict_weight(&w, &g, &SubgroupDescriptor::CenterSu2, 11).unwrap();
        let z2 = GroupModel::parse("Z/2").unwrap();
        let triv = z2.label(&LabelId::Finite(0)).unwrap();
        let sgn = z2.label(&LabelId::Finite(1)).unwrap();
        assert_eq!(r.weight.eval_label(&triv).unwrap(), 1.0);
        assert_eq!(r.weight.eval_label(&sgn).unwrap(), 2.0);
    }

    #[test]
    fn restricted_constant_weight_is_one() {
        let g = GroupModel::parse("SU2:N=10").unwrap();
        let w = Weight::one();
        let r = restrict_weight(&w, &g, &SubgroupDescriptor::MaximalTorusSu2, 11).unwrap();
        let t = GroupModel::parse("T:k=1").unwrap();
        for k in -5i64..=5 {
            let l = t.label(&LabelId::Torus(vec![k])).unwrap();
            assert_eq!(r.weight.eval_label(&l).unwrap(), 1.0);
        }
        assert!(r.certified);
    }

    #[test]
    fn polynomial_weights_equivalent_for_two_generating_sets() {
        // S = {pi_1} vs S' = {pi_1, pi_2} on SU(2): ratio bounded over n <= 50
        let g = GroupModel::parse("SU2:N=50").unwrap();
        let wl1 = Arc::new(word_length(&g, &[LabelId::Su2(1)], 60).unwrap());
        let wl2 =
            Arc::new(word_length(&g, &[LabelId::Su2(1), LabelId::Su2(2)], 60).unwrap());
        let w1 = Weight::polynomial(wl1, 1.0).unwrap();
        let w2 = Weight::polynomial(wl2, 1.0).unwrap();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for n in 0..=50u32 {
            let l = g.label(&LabelId::Su2(n)).unwrap();
            let ratio = w1.eval_label(&l).unwrap() / w2.eval_label(&l).unwrap();
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        assert!(lo >= 1.0 - 1e-12, "tau_S >= tau_S' when S ⊂ S'");
        assert!(hi <= 2.0 + 1e-12, "tau_S <= 2 tau_S' since pi_2 ⊂ pi_1⊗pi_1");
    }

    #[test]
    fn parse_weight_descriptors() {
        let g = GroupModel::parse("SU2:N=8").unwrap();
        assert_eq!(parse_weight(&g, "one", 10).unwrap().name(), "one");
        let d = parse_weight(&g, "dim:1.5", 10).unwrap();
        let l = g.label(&LabelId::Su2(1)).unwrap();
        assert!((d.eval_label(&l).unwrap() - 2.0f64.powf(1.5)).abs() < 1e-14);
        let p = parse_weight(&g, "poly:S=pi1,1", 12).unwrap();
        assert_eq!(p.eval_label(&g.label(&LabelId::Su2(5)).unwrap()).unwrap(), 6.0);
        let lg = parse_weight(&g, "log:2", 10).unwrap();
        assert!(
            (lg.eval_label(&g.label(&LabelId::Su2(2)).unwrap()).unwrap()
                - (1.0 + 3.0f64.ln()).powi(2))
            .abs()
                < 1e-14
        );
        assert!(parse_weight(&g, "bogus", 10).is_err());
    }
}
