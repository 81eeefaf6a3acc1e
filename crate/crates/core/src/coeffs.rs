//! Trigonometric polynomials as finitely supported Fourier-coefficient
//! bundles, together with the algebraic dual side.
//!
//! A bundle stores û(π) per label; evaluation is u(s) = Σ_π d_π Tr(û(π)π(s))
//! and pointwise multiplication goes through fusion intertwiners, so it
//! works on SU(2) where no transform is available.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::duals::{GroupElement, GroupModel, IrrepLabel, LabelId, ProductSide};
use crate::error::{Error, Result};
use crate::linalg::{CMat, Kahan, C_ZERO};

/// Finitely supported mapping label -> û(π), in canonical dual order.
#[derive(Debug, Clone)]
pub struct CoefficientBundle {
    group: Arc<GroupModel>,
    entries: BTreeMap<LabelId, CMat>,
}

impl CoefficientBundle {
    pub fn new(group: Arc<GroupModel>) -> Self {
        CoefficientBundle {
            group,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(
        group: Arc<GroupModel>,
        entries: impl IntoIterator<Item = (LabelId, CMat)>,
    ) -> Result<Self> {
        let mut b = CoefficientBundle::new(group);
        for (id, m) in entries {
            b.insert(id, m)?;
        }
        Ok(b)
    }

    /// The unit of the algebra: the constant function 1.
    pub fn one(group: Arc<GroupModel>) -> Self {
        let triv = group.trivial_id();
        let mut entries = BTreeMap::new();
        entries.insert(triv, CMat::identity(1));
        CoefficientBundle { group, entries }
    }

    pub fn insert(&mut self, id: LabelId, mat: CMat) -> Result<()> {
        let label = self.group.label(&id)?;
        if mat.rows() != label.dim || mat.cols() != label.dim {
            return Err(Error::domain(format!(
                "coefficient block for {} must be {}x{}, got {}x{}",
                self.group.label_string(&id)?,
                label.dim,
                label.dim,
                mat.rows(),
                mat.cols()
            )));
        }
        self.entries.insert(id, mat);
        Ok(())
    }

    pub fn group(&self) -> &Arc<GroupModel> {
        &self.group
    }

    pub fn entries(&self) -> impl Iterator<Item = (&LabelId, &CMat)> {
        self.entries.iter()
    }

    pub fn get(&self, id: &LabelId) -> Option<&CMat> {
        self.entries.get(id)
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Drop blocks that vanish below `tol` in max-abs.
    pub fn prune(&mut self, tol: f64) {
        self.entries.retain(|_, m| !m.is_zero(tol));
    }

    /// u(s) = Σ_π d_π Tr(û(π) π(s)).
    pub fn evaluate(&self, s: &GroupElement) -> Result<Complex64> {
        let mut re = Kahan::new();
        let mut im = Kahan::new();
        for (id, block) in &self.entries {
            let d = self.group.dim_of(id)? as f64;
            let tr = block.matmul(&self.group.irrep_matrix(id, s)?).trace();
            re.add(d * tr.re);
            im.add(d * tr.im);
        }
        Ok(Complex64::new(re.value(), im.value()))
    }

    /// Pointwise product via the fusion expansion
    /// (uv)^(σ) = Σ_{π,π'} (d_π d_π'/d_σ) Σ_i U_i^* (û(π) ⊗ v̂(π')) U_i,
    /// accumulated in canonical dual order with compensated summation.
    pub fn multiply(&self, other: &CoefficientBundle) -> Result<CoefficientBundle> {
        if !self.group.same_group(&other.group) {
            return Err(Error::domain(format!(
                "cannot multiply bundles over {} and {}",
                self.group.descriptor(),
                other.group.descriptor()
            )));
        }
        let mut contributions: BTreeMap<LabelId, Vec<CMat>> = BTreeMap::new();
        for (pa, ba) in &self.entries {
            let da = self.group.dim_of(pa)? as f64;
            for (pb, bb) in &other.entries {
                let db = self.group.dim_of(pb)? as f64;
                let tensor = ba.kron(bb);
                for (sigma, _) in self.group.fusion(pa, pb)?.iter() {
                    let ds = self.group.dim_of(sigma)? as f64;
                    let scale = Complex64::new(da * db / ds, 0.0);
                    let mut block = CMat::zeros(ds as usize, ds as usize);
                    for u in self.group.intertwiners(pa, pb, sigma)?.iter() {
                        block = block.add(&u.adjoint().matmul(&tensor).matmul(u));
                    }
                    contributions
                        .entry(sigma.clone())
                        .or_default()
                        .push(block.scale(scale));
                }
            }
        }
        let mut out = CoefficientBundle::new(self.group.clone());
        for (sigma, parts) in contributions {
            let d = self.group.dim_of(&sigma)?;
            let mut block = CMat::zeros(d, d);
            for r in 0..d {
                for c in 0..d {
                    let mut re = Kahan::new();
                    let mut im = Kahan::new();
                    for part in &parts {
                        re.add(part[(r, c)].re);
                        im.add(part[(r, c)].im);
                    }
                    block[(r, c)] = Complex64::new(re.value(), im.value());
                }
            }
            if !block.is_zero(1e-14) {
                out.entries.insert(sigma, block);
            }
        }
        Ok(out)
    }

    /// Replace each block by (Tr û(π) / d_π) I: the conjugation average.
    pub fn central_project(&self) -> CoefficientBundle {
        let mut out = CoefficientBundle::new(self.group.clone());
        for (id, block) in &self.entries {
            let d = block.rows();
            let c = block.trace() / d as f64;
            let mut m = CMat::zeros(d, d);
            for i in 0..d {
                m[(i, i)] = c;
            }
            out.entries.insert(id.clone(), m);
        }
        out
    }

    /// Whether every block is a scalar multiple of the identity.
    pub fn is_central(&self, tol: f64) -> bool {
        self.entries.values().all(|block| {
            let d = block.rows();
            let c = block.trace() / d as f64;
            let mut dev = 0.0f64;
            for i in 0..d {
                for j in 0..d {
                    let expect = if i == j { c } else { C_ZERO };
                    dev = dev.max((block[(i, j)] - expect).norm());
                }
            }
            dev <= tol
        })
    }

    /// Averaging over a closed normal subgroup: T_N u(s) = ∫_N u(sn) dn.
    /// In coefficients each block is multiplied by the projection onto
    /// N-fixed vectors, which for irreducible π and normal N keeps or kills
    /// the whole block.
    pub fn quotient_average(&self, n: &NormalSubgroup) -> Result<CoefficientBundle> {
        let mut out = CoefficientBundle::new(self.group.clone());
        match n {
            NormalSubgroup::Factor(side) => {
                // N = H x {e} (or {e} x K): blocks survive exactly when the
                // corresponding factor label is trivial.
                let (h, k) = self.group.factors().ok_or_else(|| {
                    Error::domain("factor subgroup requires a product group")
                })?;
                for (id, block) in &self.entries {
                    let LabelId::Pair(a, b) = id else {
                        return Err(Error::domain("product group with non-pair label"));
                    };
                    let keep = match side {
                        ProductSide::Left => **a == h.trivial_id(),
                        ProductSide::Right => **b == k.trivial_id(),
                    };
                    if keep {
                        out.entries.insert(id.clone(), block.clone());
                    }
                }
                Ok(out)
            }
            NormalSubgroup::Generated(gens) => {
                let members = closure(&self.group, gens)?;
                // normality: g n g^{-1} in N for every group element g
                let order = self.group.order().ok_or_else(|| {
                    Error::unsupported("quotient averaging requires a finite group")
                })?;
                let member_set: std::collections::BTreeSet<usize> =
                    members.iter().copied().collect();
                for g in 0..order {
                    let ge = self.group.element_by_index(g)?;
                    let gi = self.group.inverse_element(&ge)?;
                    for &nn in &members {
                        let ne = self.group.element_by_index(nn)?;
                        let cnj = self
                            .group
                            .mul_elements(&self.group.mul_elements(&ge, &ne)?, &gi)?;
                        if !member_set.contains(&self.group.index_of_element(&cnj)?) {
                            return Err(Error::domain(
                                "subgroup is not normal; quotient averaging undefined",
                            ));
                        }
                    }
                }
                for (id, block) in &self.entries {
                    let d = self.group.dim_of(id)?;
                    let mut q = CMat::zeros(d, d);
                    for &nn in &members {
                        let ne = self.group.element_by_index(nn)?;
                        q = q.add(&self.group.irrep_matrix(id, &ne)?);
                    }
                    q = q.scale(Complex64::new(1.0 / members.len() as f64, 0.0));
                    // q is 0 or I for irreducible blocks; multiply regardless
                    let avg = q.matmul(block);
                    if !avg.is_zero(1e-13) {
                        out.entries.insert(id.clone(), avg);
                    }
                }
                Ok(out)
            }
        }
    }

    /// ⟨u, T⟩ = Σ_π d_π Tr(û(π) T_π).
    pub fn dual_pair(&self, t: &DualFunctional) -> Result<Complex64> {
        if !self.group.same_group(&t.group) {
            return Err(Error::domain("dual pairing across different groups"));
        }
        let mut re = Kahan::new();
        let mut im = Kahan::new();
        for (id, block) in &self.entries {
            let tp = t.get(id)?.ok_or_else(|| {
                Error::domain(format!(
                    "functional has no entry at {} in the bundle support",
                    self.group.label_string(id).unwrap_or_default()
                ))
            })?;
            let d = self.group.dim_of(id)? as f64;
            let tr = block.matmul(&tp).trace();
            re.add(d * tr.re);
            im.add(d * tr.im);
        }
        Ok(Complex64::new(re.value(), im.value()))
    }

    pub fn to_json(&self) -> Result<String> {
        let entries = self
            .entries
            .iter()
            .map(|(id, m)| {
                Ok(EntryJson {
                    label: self.group.label_string(id)?,
                    matrix: m.data().iter().map(|z| [z.re, z.im]).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let doc = BundleJson {
            group: self.group.descriptor().to_string(),
            entries,
        };
        serde_json::to_string_pretty(&doc)
            .map_err(|e| Error::domain(format!("serialization failed: {e}")))
    }

    pub fn from_json(text: &str) -> Result<CoefficientBundle> {
        let doc: BundleJson =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("bad bundle JSON: {e}")))?;
        let group = GroupModel::parse(&doc.group)?;
        let mut bundle = CoefficientBundle::new(group.clone());
        for e in doc.entries {
            let id = group.parse_label(&e.label)?;
            let d = group.dim_of(&id)?;
            if e.matrix.len() != d * d {
                return Err(Error::parse(format!(
                    "matrix for {} has {} entries, expected {}",
                    e.label,
                    e.matrix.len(),
                    d * d
                )));
            }
            let mut m = CMat::zeros(d, d);
            for (k, [re, im]) in e.matrix.iter().enumerate() {
                m[(k / d, k % d)] = Complex64::new(*re, *im);
            }
            bundle.insert(id, m)?;
        }
        Ok(bundle)
    }
}

/// Fourier transform on a finite group: û(π) = (1/|G|) Σ_s f(s) π(s^{-1}).
pub fn transform(
    group: &Arc<GroupModel>,
    f: impl Fn(&GroupElement) -> Complex64,
) -> Result<CoefficientBundle> {
    let order = group.order().ok_or_else(|| {
        Error::unsupported(format!(
            "transform needs exact summation; {} is not finite",
            group.descriptor()
        ))
    })? as f64;
    let elements = group.elements()?;
    let mut bundle = CoefficientBundle::new(group.clone());
    for label in group.enumerate_dual(usize::MAX - 1)? {
        let d = label.dim;
        let mut acc = CMat::zeros(d, d);
        for s in &elements {
            let val = f(s);
            if val == C_ZERO {
                continue;
            }
            let inv = group.inverse_element(s)?;
            acc = acc.add(&group.irrep_matrix(&label.id, &inv)?.scale(val));
        }
        acc = acc.scale(Complex64::new(1.0 / order, 0.0));
        if !acc.is_zero(1e-15) {
            bundle.insert(label.id, acc)?;
        }
    }
    Ok(bundle)
}

/// The indicator function of the identity as a bundle: û(π) = I/|G|.
pub fn point_mass_at_identity(group: &Arc<GroupModel>) -> Result<CoefficientBundle> {
    let order = group
        .order()
        .ok_or_else(|| Error::unsupported("point mass requires a finite group"))?
        as f64;
    let mut bundle = CoefficientBundle::new(group.clone());
    for label in group.enumerate_dual(usize::MAX - 1)? {
        bundle.insert(
            label.id,
            CMat::identity(label.dim).scale(Complex64::new(1.0 / order, 0.0)),
        )?;
    }
    Ok(bundle)
}

/// Random bundle supported on the given labels, entries uniform in the
/// complex unit square. Deterministic for a fixed seeded generator.
pub fn random_bundle<R: Rng + ?Sized>(
    group: &Arc<GroupModel>,
    support: &[IrrepLabel],
    rng: &mut R,
) -> CoefficientBundle {
    let mut bundle = CoefficientBundle::new(group.clone());
    for label in support {
        let d = label.dim;
        let mut m = CMat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = Complex64::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                );
            }
        }
        bundle
            .insert(label.id.clone(), m)
            .expect("support labels belong to the group");
    }
    bundle
}

/// A normal subgroup for quotient averaging.
#[derive(Debug, Clone)]
pub enum NormalSubgroup {
    /// Generated by the given elements inside a finite group.
    Generated(Vec<GroupElement>),
    /// A full factor of a direct product.
    Factor(ProductSide),
}

fn closure(group: &Arc<GroupModel>, gens: &[GroupElement]) -> Result<Vec<usize>> {
    group
        .order()
        .ok_or_else(|| Error::unsupported("subgroup closure requires a finite group"))?;
    let mut seen = std::collections::BTreeSet::new();
    let identity = group.index_of_element(&group.identity())?;
    seen.insert(identity);
    let mut frontier: Vec<usize> = vec![identity];
    for g in gens {
        let i = group.index_of_element(g)?;
        if seen.insert(i) {
            frontier.push(i);
        }
    }
    loop {
        let mut added = Vec::new();
        let current: Vec<usize> = seen.iter().copied().collect();
        for &a in &current {
            for &b in &current {
                let ea = group.element_by_index(a)?;
                let eb = group.element_by_index(b)?;
                let ab = group.index_of_element(&group.mul_elements(&ea, &eb)?)?;
                if seen.insert(ab) {
                    added.push(ab);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        frontier.extend(added);
    }
    Ok(seen.into_iter().collect())
}

/// An element of the algebraic dual: a mapping label -> T_π, finitely
/// listed entries plus an optional closed-form tail rule for families the
/// scans query at unbounded index.
#[derive(Debug, Clone)]
pub struct DualFunctional {
    group: Arc<GroupModel>,
    entries: BTreeMap<LabelId, CMat>,
    tail: Option<TailRule>,
}

#[derive(Debug, Clone)]
pub enum TailRule {
    /// T_π = π(s) for every π: the evaluation functional λ(s).
    Lambda(GroupElement),
    /// SU(2) Lie-derivative tail: T_{π_n} = i diag(n, n-2, ..., 2-n, -n).
    Su2Derivation,
}

impl DualFunctional {
    pub fn from_entries(
        group: Arc<GroupModel>,
        entries: impl IntoIterator<Item = (LabelId, CMat)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (id, m) in entries {
            let label = group.label(&id)?;
            if m.rows() != label.dim || m.cols() != label.dim {
                return Err(Error::domain(format!(
                    "functional block for {} has wrong shape",
                    group.label_string(&id)?
                )));
            }
            map.insert(id, m);
        }
        Ok(DualFunctional {
            group,
            entries: map,
            tail: None,
        })
    }

    /// The evaluation functional λ(s) = (π(s))_π.
    pub fn lambda(group: Arc<GroupModel>, s: GroupElement) -> DualFunctional {
        DualFunctional {
            group,
            entries: BTreeMap::new(),
            tail: Some(TailRule::Lambda(s)),
        }
    }

    /// The SU(2) point-derivation functional D.
    pub fn su2_derivation(group: Arc<GroupModel>) -> Result<DualFunctional> {
        if group.su2_trunc().is_none() {
            return Err(Error::domain("derivation functional requires SU(2)"));
        }
        Ok(DualFunctional {
            group,
            entries: BTreeMap::new(),
            tail: Some(TailRule::Su2Derivation),
        })
    }

    pub fn group(&self) -> &Arc<GroupModel> {
        &self.group
    }

    /// The block at a label, consulting listed entries then the tail rule.
    pub fn get(&self, id: &LabelId) -> Result<Option<CMat>> {
        if let Some(m) = self.entries.get(id) {
            return Ok(Some(m.clone()));
        }
        match &self.tail {
            None => Ok(None),
            Some(TailRule::Lambda(s)) => Ok(Some(self.group.irrep_matrix(id, s)?)),
            Some(TailRule::Su2Derivation) => {
                let LabelId::Su2(n) = id else {
                    return Err(Error::domain("derivation tail on a non-SU(2) label"));
                };
                let n = *n as i64;
                let diag: Vec<Complex64> = (0..=n)
                    .map(|j| Complex64::new(0.0, (n - 2 * j) as f64))
                    .collect();
                Ok(Some(CMat::from_diag(&diag)))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct BundleJson {
    group: String,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    label: String,
    matrix: Vec<[f64; 2]>,
}
