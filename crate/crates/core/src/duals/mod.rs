//! Concrete compact groups: their dual objects, irrep matrices, fusion rules
//! with explicit isometric intertwiners, and branching to supported
//! subgroups.
//!
//! Four kinds of model are available: the finite catalog groups, tori of any
//! rank, SU(2) with an explicit dual truncation, and direct products of
//! models. All values are immutable after construction; fusion and
//! intertwiner tables are memoized behind internal locks.

pub mod catalog;
pub mod su2;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{orthonormal_columns, CMat, C_ZERO};

/// Identifier of an irreducible representation inside its group's dual.
///
/// The `Ord` instance is the canonical dual order: catalog order for finite
/// groups, n = 0,1,2,... for SU(2), max-norm shells (then lexicographic)
/// for tori, and lexicographic pairs for products.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LabelId {
    Finite(usize),
    Su2(u32),
    Torus(Vec<i64>),
    Pair(Box<LabelId>, Box<LabelId>),
}

impl LabelId {
    fn variant_rank(&self) -> u8 {
        match self {
            LabelId::Finite(_) => 0,
            LabelId::Su2(_) => 1,
            LabelId::Torus(_) => 2,
            LabelId::Pair(_, _) => 3,
        }
    }

    pub fn pair(a: LabelId, b: LabelId) -> LabelId {
        LabelId::Pair(Box::new(a), Box::new(b))
    }
}

impl Ord for LabelId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (LabelId::Finite(a), LabelId::Finite(b)) => a.cmp(b),
            (LabelId::Su2(a), LabelId::Su2(b)) => a.cmp(b),
            (LabelId::Torus(a), LabelId::Torus(b)) => {
                let sa = a.iter().map(|x| x.abs()).max().unwrap_or(0);
                let sb = b.iter().map(|x| x.abs()).max().unwrap_or(0);
                sa.cmp(&sb).then_with(|| a.cmp(b))
            }
            (LabelId::Pair(a1, a2), LabelId::Pair(b1, b2)) => {
                a1.cmp(b1).then_with(|| a2.cmp(b2))
            }
            _ => self.variant_rank().cmp(&other.variant_rank()),
        }
    }
}

impl PartialOrd for LabelId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An irrep label together with its dimension and conjugate.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrepLabel {
    pub id: LabelId,
    pub dim: usize,
    pub conj: LabelId,
}

impl IrrepLabel {
    /// The conjugate label as a full `IrrepLabel` (same dimension).
    pub fn conjugate(&self) -> IrrepLabel {
        IrrepLabel {
            id: self.conj.clone(),
            dim: self.dim,
            conj: self.id.clone(),
        }
    }
}

/// A point of the group.
#[derive(Debug, Clone)]
pub enum GroupElement {
    Finite(usize),
    Torus(Vec<f64>),
    /// The SU(2) matrix [[a, b], [-conj(b), conj(a)]].
    Su2 { a: Complex64, b: Complex64 },
    Pair(Box<GroupElement>, Box<GroupElement>),
}

impl GroupElement {
    pub fn pair(a: GroupElement, b: GroupElement) -> GroupElement {
        GroupElement::Pair(Box::new(a), Box::new(b))
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupElement::Finite(i) => write!(f, "g{i}"),
            GroupElement::Torus(v) => {
                let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
                write!(f, "t:{}", parts.join(","))
            }
            GroupElement::Su2 { a, b } => {
                write!(f, "su2:{},{},{},{}", a.re, a.im, b.re, b.im)
            }
            GroupElement::Pair(a, b) => write!(f, "({a};{b})"),
        }
    }
}

/// Normalized Haar measure metadata.
#[derive(Debug, Clone, PartialEq)]
pub enum HaarMeasure {
    /// Exact counting measure over `order` points.
    Counting { order: usize },
    /// Continuous group: no quadrature scheme is committed to; transforms
    /// are unavailable and bundles are built natively in coefficient space.
    Continuous { description: String },
}

#[derive(Debug)]
enum GroupKind {
    Finite(catalog::FiniteGroup),
    Torus { rank: usize },
    Su2 { trunc: u32 },
    Product(Arc<GroupModel>, Arc<GroupModel>),
}

/// A concrete compact group model.
#[derive(Debug)]
pub struct GroupModel {
    kind: GroupKind,
    descriptor: String,
    fusion_cache: Mutex<BTreeMap<(LabelId, LabelId), Arc<Vec<(LabelId, usize)>>>>,
    intertwiner_cache: Mutex<BTreeMap<(LabelId, LabelId, LabelId), Arc<Vec<CMat>>>>,
}

impl GroupModel {
    fn new(kind: GroupKind, descriptor: String) -> Arc<GroupModel> {
        Arc::new(GroupModel {
            kind,
            descriptor,
            fusion_cache: Mutex::new(BTreeMap::new()),
            intertwiner_cache: Mutex::new(BTreeMap::new()),
        })
    }

    /// Parse a group descriptor: "S3", "S4", "A4", "Q8", "Z/8", "D4",
    /// "SU2:N=12", "T:k=1", "prod(S3,Z/2)".
    pub fn parse(descriptor: &str) -> Result<Arc<GroupModel>> {
        let d = descriptor.trim();
        if let Some(inner) = d.strip_prefix("prod(").and_then(|r| r.strip_suffix(')')) {
            let mut depth = 0usize;
            let mut split = None;
            for (i, ch) in inner.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => depth = depth.saturating_sub(1),
                    ',' if depth == 0 => {
                        split = Some(i);
                        break;
                    }
                    _ => {}
                }
            }
            let i = split
                .ok_or_else(|| Error::parse(format!("prod descriptor {d:?} needs two factors")))?;
            let h = GroupModel::parse(&inner[..i])?;
            let k = GroupModel::parse(&inner[i + 1..])?;
            return Ok(GroupModel::product(h, k));
        }
        if let Some(rest) = d.strip_prefix("SU2:N=") {
            let trunc: u32 = rest
                .parse()
                .map_err(|_| Error::parse(format!("bad SU2 truncation in {d:?}")))?;
            return Ok(GroupModel::su2(trunc));
        }
        if let Some(rest) = d.strip_prefix("T:k=") {
            let rank: usize = rest
                .parse()
                .map_err(|_| Error::parse(format!("bad torus rank in {d:?}")))?;
            if rank == 0 {
                return Err(Error::parse("torus rank must be >= 1"));
            }
            return Ok(GroupModel::torus(rank));
        }
        let fg = catalog::by_name(d)?;
        Ok(GroupModel::new(GroupKind::Finite(fg), d.to_string()))
    }

    pub fn su2(trunc: u32) -> Arc<GroupModel> {
        GroupModel::new(GroupKind::Su2 { trunc }, format!("SU2:N={trunc}"))
    }

    pub fn torus(rank: usize) -> Arc<GroupModel> {
        GroupModel::new(GroupKind::Torus { rank }, format!("T:k={rank}"))
    }

    /// Direct product: dual is the Cartesian product of duals via Kronecker
    /// products, fusion multiplicities multiply componentwise.
    pub fn product(h: Arc<GroupModel>, k: Arc<GroupModel>) -> Arc<GroupModel> {
        let descriptor = format!("prod({},{})", h.descriptor, k.descriptor);
        GroupModel::new(GroupKind::Product(h, k), descriptor)
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn same_group(&self, other: &GroupModel) -> bool {
        self.descriptor == other.descriptor
    }

    pub fn haar(&self) -> HaarMeasure {
        match self.order() {
            Some(order) => HaarMeasure::Counting { order },
            None => HaarMeasure::Continuous {
                description: format!("normalized Haar measure on {}", self.descriptor),
            },
        }
    }

    /// Number of elements for finite models (including products of finite
    /// models); `None` for continuous groups.
    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            GroupKind::Finite(g) => Some(g.order),
            GroupKind::Torus { .. } | GroupKind::Su2 { .. } => None,
            GroupKind::Product(h, k) => Some(h.order()? * k.order()?),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn su2_trunc(&self) -> Option<u32> {
        match &self.kind {
            GroupKind::Su2 { trunc } => Some(*trunc),
            _ => None,
        }
    }

    pub fn factors(&self) -> Option<(&Arc<GroupModel>, &Arc<GroupModel>)> {
        match &self.kind {
            GroupKind::Product(h, k) => Some((h, k)),
            _ => None,
        }
    }

    fn finite(&self) -> Result<&catalog::FiniteGroup> {
        match &self.kind {
            GroupKind::Finite(g) => Ok(g),
            _ => Err(Error::unsupported(format!(
                "{} is not a finite catalog group",
                self.descriptor
            ))),
        }
    }

    /// The label of the trivial representation.
    pub fn trivial_id(&self) -> LabelId {
        match &self.kind {
            GroupKind::Finite(_) => LabelId::Finite(0),
            GroupKind::Su2 { .. } => LabelId::Su2(0),
            GroupKind::Torus { rank } => LabelId::Torus(vec![0; *rank]),
            GroupKind::Product(h, k) => LabelId::pair(h.trivial_id(), k.trivial_id()),
        }
    }

    /// Validate a label id against this group and return it with dimension
    /// and conjugate attached.
    pub fn label(&self, id: &LabelId) -> Result<IrrepLabel> {
        match (&self.kind, id) {
            (GroupKind::Finite(g), LabelId::Finite(i)) => {
                if *i >= g.irreps.len() {
                    return Err(Error::domain(format!(
                        "irrep index {i} out of range for {}",
                        self.descriptor
                    )));
                }
                Ok(IrrepLabel {
                    id: id.clone(),
                    dim: g.irreps[*i].dim,
                    conj: LabelId::Finite(g.conj_map[*i]),
                })
            }
            (GroupKind::Su2 { .. }, LabelId::Su2(n)) => Ok(IrrepLabel {
                id: id.clone(),
                dim: *n as usize + 1,
                conj: id.clone(),
            }),
            (GroupKind::Torus { rank }, LabelId::Torus(v)) => {
                if v.len() != *rank {
                    return Err(Error::domain(format!(
                        "torus character rank {} != {rank}",
                        v.len()
                    )));
                }
                Ok(IrrepLabel {
                    id: id.clone(),
                    dim: 1,
                    conj: LabelId::Torus(v.iter().map(|x| -x).collect()),
                })
            }
            (GroupKind::Product(h, k), LabelId::Pair(a, b)) => {
                let la = h.label(a)?;
                let lb = k.label(b)?;
                Ok(IrrepLabel {
                    id: id.clone(),
                    dim: la.dim * lb.dim,
                    conj: LabelId::pair(la.conj, lb.conj),
                })
            }
            _ => Err(Error::domain(format!(
                "label {id:?} does not belong to group {}",
                self.descriptor
            ))),
        }
    }

    pub fn dim_of(&self, id: &LabelId) -> Result<usize> {
        Ok(self.label(id)?.dim)
    }

    /// Enumerate the dual in canonical order. For finite catalog groups the
    /// limit is ignored and the full dual is returned; for SU(2) the model
    /// truncation applies first; for products the limit bounds each factor's
    /// enumeration and the result is the lexicographic cross product.
    pub fn enumerate_dual(&self, limit: usize) -> Result<Vec<IrrepLabel>> {
        if limit == 0 {
            return Err(Error::domain("enumerate_dual limit must be >= 1"));
        }
        let ids: Vec<LabelId> = match &self.kind {
            GroupKind::Finite(g) => (0..g.irreps.len()).map(LabelId::Finite).collect(),
            GroupKind::Su2 { trunc } => {
                let top = (*trunc as usize).min(limit - 1);
                (0..=top as u32).map(LabelId::Su2).collect()
            }
            GroupKind::Torus { rank } => torus_shells(*rank, limit),
            GroupKind::Product(h, k) => {
                let la = h.enumerate_dual(limit)?;
                let lb = k.enumerate_dual(limit)?;
                let mut out = Vec::with_capacity(la.len() * lb.len());
                for a in &la {
                    for b in &lb {
                        out.push(LabelId::pair(a.id.clone(), b.id.clone()));
                    }
                }
                out
            }
        };
        ids.iter().map(|id| self.label(id)).collect()
    }

    /// Whether `enumerate_dual` covers the full dual object at this limit.
    pub fn dual_is_exhausted(&self, limit: usize) -> bool {
        match &self.kind {
            GroupKind::Finite(_) => true,
            GroupKind::Su2 { .. } | GroupKind::Torus { .. } => false,
            GroupKind::Product(h, k) => h.dual_is_exhausted(limit) && k.dual_is_exhausted(limit),
        }
    }

    /// Whether irrep dimensions are nondecreasing along the canonical dual
    /// enumeration, for every horizon. Holds for the catalog groups (duals
    /// listed by dimension), for SU(2) (d = n+1), and for tori (all d = 1);
    /// not claimed for general products.
    pub fn enumeration_dim_monotone(&self) -> bool {
        match &self.kind {
            GroupKind::Finite(g) => g
                .irreps
                .windows(2)
                .all(|w| w[0].dim <= w[1].dim),
            GroupKind::Su2 { .. } | GroupKind::Torus { .. } => true,
            GroupKind::Product(_, _) => false,
        }
    }

    /// The unitary matrix of the irrep `id` at a group element.
    pub fn irrep_matrix(&self, id: &LabelId, g: &GroupElement) -> Result<CMat> {
        match (&self.kind, id, g) {
            (GroupKind::Finite(fg), LabelId::Finite(i), GroupElement::Finite(e)) => {
                if *i >= fg.irreps.len() || *e >= fg.order {
                    return Err(Error::domain("irrep or element index out of range"));
                }
                Ok(fg.irreps[*i].mats[*e].clone())
            }
            (GroupKind::Su2 { .. }, LabelId::Su2(n), GroupElement::Su2 { a, b }) => {
                Ok(su2::irrep_matrix(*n, *a, *b))
            }
            (GroupKind::Torus { rank }, LabelId::Torus(v), GroupElement::Torus(theta)) => {
                if v.len() != *rank || theta.len() != *rank {
                    return Err(Error::domain("torus rank mismatch"));
                }
                let phase: f64 = v.iter().zip(theta).map(|(&m, &t)| m as f64 * t).sum();
                Ok(CMat::from_rows(&[vec![Complex64::new(
                    phase.cos(),
                    phase.sin(),
                )]]))
            }
            (GroupKind::Product(h, k), LabelId::Pair(a, b), GroupElement::Pair(x, y)) => {
                Ok(h.irrep_matrix(a, x)?.kron(&k.irrep_matrix(b, y)?))
            }
            _ => Err(Error::domain(format!(
                "label {id:?} / element mismatch for group {}",
                self.descriptor
            ))),
        }
    }

    pub fn character(&self, id: &LabelId, g: &GroupElement) -> Result<Complex64> {
        Ok(self.irrep_matrix(id, g)?.trace())
    }

    /// Fusion multiplicities of `a ⊗ b`, in canonical label order.
    pub fn fusion(&self, a: &LabelId, b: &LabelId) -> Result<Arc<Vec<(LabelId, usize)>>> {
        self.label(a)?;
        self.label(b)?;
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.fusion_cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let table: Vec<(LabelId, usize)> = match &self.kind {
            GroupKind::Finite(g) => {
                let (LabelId::Finite(ia), LabelId::Finite(ib)) = (a, b) else {
                    unreachable!()
                };
                let mut out = Vec::new();
                for (is, s) in g.irreps.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for e in 0..g.order {
                        acc += g.character(*ia, e) * g.character(*ib, e)
                            * g.character(is, e).conj();
                    }
                    let m = acc.re / g.order as f64;
                    let rounded = m.round();
                    if (m - rounded).abs() > 1e-9 || acc.im.abs() / g.order as f64 > 1e-9 {
                        return Err(Error::domain(format!(
                            "non-integral fusion multiplicity {m} for {} ⊗ {} -> {}",
                            g.irreps[*ia].name, g.irreps[*ib].name, s.name
                        )));
                    }
                    if rounded > 0.0 {
                        out.push((LabelId::Finite(is), rounded as usize));
                    }
                }
                out
            }
            GroupKind::Su2 { .. } => {
                let (LabelId::Su2(m), LabelId::Su2(n)) = (a, b) else {
                    unreachable!()
                };
                (m.abs_diff(*n)..=(m + n))
                    .step_by(2)
                    .map(|k| (LabelId::Su2(k), 1))
                    .collect()
            }
            GroupKind::Torus { .. } => {
                let (LabelId::Torus(u), LabelId::Torus(v)) = (a, b) else {
                    unreachable!()
                };
                let sum: Vec<i64> = u.iter().zip(v).map(|(x, y)| x + y).collect();
                vec![(LabelId::Torus(sum), 1)]
            }
            GroupKind::Product(h, k) => {
                let (LabelId::Pair(a1, a2), LabelId::Pair(b1, b2)) = (a, b) else {
                    unreachable!()
                };
                let fh = h.fusion(a1, b1)?;
                let fk = k.fusion(a2, b2)?;
                let mut out = Vec::new();
                for (s1, m1) in fh.iter() {
                    for (s2, m2) in fk.iter() {
                        out.push((LabelId::pair(s1.clone(), s2.clone()), m1 * m2));
                    }
                }
                out.sort_by(|x, y| x.0.cmp(&y.0));
                out
            }
        };
        // dimension count invariant
        let da = self.dim_of(a)?;
        let db = self.dim_of(b)?;
        let total: usize = table
            .iter()
            .map(|(s, m)| m * self.dim_of(s).unwrap_or(0))
            .sum();
        debug_assert_eq!(total, da * db, "fusion dimension count failed");
        let arc = Arc::new(table);
        self.fusion_cache
            .lock()
            .unwrap()
            .insert(key, arc.clone());
        Ok(arc)
    }

    /// A maximal family of isometric intertwiners H_sigma -> H_a ⊗ H_b with
    /// pairwise orthogonal ranges; empty when the multiplicity is zero.
    pub fn intertwiners(
        &self,
        a: &LabelId,
        b: &LabelId,
        sigma: &LabelId,
    ) -> Result<Arc<Vec<CMat>>> {
        let key = (a.clone(), b.clone(), sigma.clone());
        if let Some(hit) = self.intertwiner_cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let fus = self.fusion(a, b)?;
        let mult = fus
            .iter()
            .find(|(s, _)| s == sigma)
            .map(|(_, m)| *m)
            .unwrap_or(0);
        let list: Vec<CMat> = if mult == 0 {
            Vec::new()
        } else {
            match &self.kind {
                GroupKind::Finite(g) => {
                    let (LabelId::Finite(ia), LabelId::Finite(ib), LabelId::Finite(is)) =
                        (a, b, sigma)
                    else {
                        unreachable!()
                    };
                    finite_intertwiners(g, *ia, *ib, *is, mult)?
                }
                GroupKind::Su2 { .. } => {
                    let (LabelId::Su2(m), LabelId::Su2(n), LabelId::Su2(k)) = (a, b, sigma)
                    else {
                        unreachable!()
                    };
                    vec![su2::intertwiner(*m, *n, *k).expect("fusion said multiplicity 1")]
                }
                GroupKind::Torus { .. } => vec![CMat::identity(1)],
                GroupKind::Product(h, k) => {
                    let (LabelId::Pair(a1, a2), LabelId::Pair(b1, b2), LabelId::Pair(s1, s2)) =
                        (a, b, sigma)
                    else {
                        unreachable!()
                    };
                    let uh = h.intertwiners(a1, b1, s1)?;
                    let uk = k.intertwiners(a2, b2, s2)?;
                    let dims = ProductDims {
                        da1: h.dim_of(a1)?,
                        da2: k.dim_of(a2)?,
                        db1: h.dim_of(b1)?,
                        db2: k.dim_of(b2)?,
                        ds1: h.dim_of(s1)?,
                        ds2: k.dim_of(s2)?,
                    };
                    let mut out = Vec::with_capacity(uh.len() * uk.len());
                    for m1 in uh.iter() {
                        for m2 in uk.iter() {
                            out.push(product_intertwiner(m1, m2, &dims));
                        }
                    }
                    out
                }
            }
        };
        debug_assert_eq!(list.len(), mult);
        let arc = Arc::new(list);
        self.intertwiner_cache
            .lock()
            .unwrap()
            .insert(key, arc.clone());
        Ok(arc)
    }

    /// Branching multiplicities of `pi` restricted to a supported subgroup,
    /// as a map on the subgroup's dual in canonical order.
    pub fn branching(
        &self,
        sub: &SubgroupDescriptor,
        pi: &LabelId,
    ) -> Result<Vec<(LabelId, usize)>> {
        self.label(pi)?;
        match (sub, &self.kind) {
            (SubgroupDescriptor::MaximalTorusSu2, GroupKind::Su2 { .. }) => {
                let LabelId::Su2(n) = pi else { unreachable!() };
                let mut out: Vec<(LabelId, usize)> = (0..=*n)
                    .map(|j| (LabelId::Torus(vec![*n as i64 - 2 * j as i64]), 1))
                    .collect();
                out.sort_by(|x, y| x.0.cmp(&y.0));
                Ok(out)
            }
            (SubgroupDescriptor::CenterSu2, GroupKind::Su2 { .. }) => {
                let LabelId::Su2(n) = pi else { unreachable!() };
                // pi_n(-I) = (-1)^n I, so the restriction is sgn^n with
                // multiplicity n+1.
                let which = (*n % 2) as usize;
                Ok(vec![(LabelId::Finite(which), *n as usize + 1)])
            }
            (SubgroupDescriptor::Factor(side), GroupKind::Product(h, k)) => {
                let LabelId::Pair(s, t) = pi else { unreachable!() };
                match side {
                    ProductSide::Left => Ok(vec![((**s).clone(), k.dim_of(t)?)]),
                    ProductSide::Right => Ok(vec![((**t).clone(), h.dim_of(s)?)]),
                }
            }
            (SubgroupDescriptor::FiniteEmbedded { model, images }, GroupKind::Finite(g)) => {
                let LabelId::Finite(ip) = pi else { unreachable!() };
                let sg = model.finite()?;
                let mut out = Vec::new();
                for (is, s) in sg.irreps.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (h_idx, &g_idx) in images.iter().enumerate() {
                        acc += g.character(*ip, g_idx) * sg.character(is, h_idx).conj();
                    }
                    let m = acc.re / sg.order as f64;
                    let rounded = m.round();
                    if (m - rounded).abs() > 1e-9 {
                        return Err(Error::domain(format!(
                            "non-integral branching multiplicity {m} for {} -> {}",
                            g.irreps[*ip].name, s.name
                        )));
                    }
                    if rounded > 0.0 {
                        out.push((LabelId::Finite(is), rounded as usize));
                    }
                }
                Ok(out)
            }
            _ => Err(Error::unsupported(format!(
                "subgroup {:?} is not supported for group {}",
                sub.kind_name(),
                self.descriptor
            ))),
        }
    }

    /// Identity element.
    pub fn identity(&self) -> GroupElement {
        match &self.kind {
            GroupKind::Finite(g) => GroupElement::Finite(g.identity),
            GroupKind::Torus { rank } => GroupElement::Torus(vec![0.0; *rank]),
            GroupKind::Su2 { .. } => GroupElement::Su2 {
                a: Complex64::new(1.0, 0.0),
                b: C_ZERO,
            },
            GroupKind::Product(h, k) => GroupElement::pair(h.identity(), k.identity()),
        }
    }

    pub fn mul_elements(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        match (&self.kind, x, y) {
            (GroupKind::Finite(g), GroupElement::Finite(a), GroupElement::Finite(b)) => {
                Ok(GroupElement::Finite(g.mul(*a, *b)))
            }
            (GroupKind::Torus { .. }, GroupElement::Torus(a), GroupElement::Torus(b)) => Ok(
                GroupElement::Torus(a.iter().zip(b).map(|(s, t)| s + t).collect()),
            ),
            (
                GroupKind::Su2 { .. },
                GroupElement::Su2 { a: a1, b: b1 },
                GroupElement::Su2 { a: a2, b: b2 },
            ) => Ok(GroupElement::Su2 {
                a: a1 * a2 - b1 * b2.conj(),
                b: a1 * b2 + b1 * a2.conj(),
            }),
            (GroupKind::Product(h, k), GroupElement::Pair(x1, x2), GroupElement::Pair(y1, y2)) => {
                Ok(GroupElement::pair(
                    h.mul_elements(x1, y1)?,
                    k.mul_elements(x2, y2)?,
                ))
            }
            _ => Err(Error::domain("element does not belong to this group")),
        }
    }

    pub fn inverse_element(&self, x: &GroupElement) -> Result<GroupElement> {
        match (&self.kind, x) {
            (GroupKind::Finite(g), GroupElement::Finite(a)) => {
                Ok(GroupElement::Finite(g.inv[*a]))
            }
            (GroupKind::Torus { .. }, GroupElement::Torus(a)) => {
                Ok(GroupElement::Torus(a.iter().map(|t| -t).collect()))
            }
            (GroupKind::Su2 { .. }, GroupElement::Su2 { a, b }) => Ok(GroupElement::Su2 {
                a: a.conj(),
                b: -b,
            }),
            (GroupKind::Product(h, k), GroupElement::Pair(x1, x2)) => Ok(GroupElement::pair(
                h.inverse_element(x1)?,
                k.inverse_element(x2)?,
            )),
            _ => Err(Error::domain("element does not belong to this group")),
        }
    }

    /// Uniformly random element from a seeded generator: finite groups are
    /// uniform over elements, tori uniform over angles, SU(2) via a
    /// normalized 4-vector on the 3-sphere.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        match &self.kind {
            GroupKind::Finite(g) => GroupElement::Finite(rng.random_range(0..g.order)),
            GroupKind::Torus { rank } => GroupElement::Torus(
                (0..*rank)
                    .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                    .collect(),
            ),
            GroupKind::Su2 { .. } => loop {
                let v = [
                    rng.random_range(-1.0..1.0f64),
                    rng.random_range(-1.0..1.0f64),
                    rng.random_range(-1.0..1.0f64),
                    rng.random_range(-1.0..1.0f64),
                ];
                let n2: f64 = v.iter().map(|x| x * x).sum();
                if n2 > 1e-8 && n2 <= 1.0 {
                    let n = n2.sqrt();
                    return GroupElement::Su2 {
                        a: Complex64::new(v[0] / n, v[1] / n),
                        b: Complex64::new(v[2] / n, v[3] / n),
                    };
                }
            },
            GroupKind::Product(h, k) => {
                GroupElement::pair(h.random_element(rng), k.random_element(rng))
            }
        }
    }

    /// Element of a finite(-like) model by flat index, counting through
    /// product factors in row-major order.
    pub fn element_by_index(&self, i: usize) -> Result<GroupElement> {
        match &self.kind {
            GroupKind::Finite(g) => {
                if i < g.order {
                    Ok(GroupElement::Finite(i))
                } else {
                    Err(Error::domain("element index out of range"))
                }
            }
            GroupKind::Product(h, k) => {
                let ko = k
                    .order()
                    .ok_or_else(|| Error::unsupported("element_by_index on continuous group"))?;
                Ok(GroupElement::pair(
                    h.element_by_index(i / ko)?,
                    k.element_by_index(i % ko)?,
                ))
            }
            _ => Err(Error::unsupported(
                "element enumeration requires a finite group",
            )),
        }
    }

    pub fn index_of_element(&self, e: &GroupElement) -> Result<usize> {
        match (&self.kind, e) {
            (GroupKind::Finite(_), GroupElement::Finite(i)) => Ok(*i),
            (GroupKind::Product(h, k), GroupElement::Pair(a, b)) => {
                let ko = k
                    .order()
                    .ok_or_else(|| Error::unsupported("index_of_element on continuous group"))?;
                Ok(h.index_of_element(a)? * ko + k.index_of_element(b)?)
            }
            _ => Err(Error::domain("element does not belong to a finite group")),
        }
    }

    /// All elements of a finite model, in flat-index order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        let order = self
            .order()
            .ok_or_else(|| Error::unsupported("element enumeration requires a finite group"))?;
        (0..order).map(|i| self.element_by_index(i)).collect()
    }

    /// Printable form of a label id.
    pub fn label_string(&self, id: &LabelId) -> Result<String> {
        self.label(id)?;
        Ok(match (&self.kind, id) {
            (GroupKind::Finite(g), LabelId::Finite(i)) => g.irreps[*i].name.clone(),
            (GroupKind::Su2 { .. }, LabelId::Su2(n)) => format!("pi{n}"),
            (GroupKind::Torus { .. }, LabelId::Torus(v)) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("chi({})", parts.join(","))
            }
            (GroupKind::Product(h, k), LabelId::Pair(a, b)) => {
                format!("({},{})", h.label_string(a)?, k.label_string(b)?)
            }
            _ => unreachable!(),
        })
    }

    /// Parse a label id from its printable form.
    pub fn parse_label(&self, s: &str) -> Result<LabelId> {
        let s = s.trim();
        match &self.kind {
            GroupKind::Finite(g) => g
                .irreps
                .iter()
                .position(|r| r.name == s)
                .map(LabelId::Finite)
                .ok_or_else(|| {
                    Error::parse(format!("unknown irrep {s:?} of {}", self.descriptor))
                }),
            GroupKind::Su2 { .. } => {
                let n: u32 = s
                    .strip_prefix("pi")
                    .and_then(|r| r.parse().ok())
                    .ok_or_else(|| Error::parse(format!("bad SU2 label {s:?}")))?;
                Ok(LabelId::Su2(n))
            }
            GroupKind::Torus { rank } => {
                let inner = s
                    .strip_prefix("chi(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::parse(format!("bad torus label {s:?}")))?;
                let v: Vec<i64> = inner
                    .split(',')
                    .map(|p| p.trim().parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::parse(format!("bad torus label {s:?}")))?;
                if v.len() != *rank {
                    return Err(Error::parse(format!(
                        "torus label {s:?} has rank {} != {rank}",
                        v.len()
                    )));
                }
                Ok(LabelId::Torus(v))
            }
            GroupKind::Product(h, k) => {
                let inner = s
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::parse(format!("bad product label {s:?}")))?;
                let mut depth = 0usize;
                let mut split = None;
                for (i, ch) in inner.char_indices() {
                    match ch {
                        '(' => depth += 1,
                        ')' => depth = depth.saturating_sub(1),
                        ',' if depth == 0 => {
                            split = Some(i);
                            break;
                        }
                        _ => {}
                    }
                }
                let i =
                    split.ok_or_else(|| Error::parse(format!("bad product label {s:?}")))?;
                Ok(LabelId::pair(
                    h.parse_label(&inner[..i])?,
                    k.parse_label(&inner[i + 1..])?,
                ))
            }
        }
    }

    /// Parse a group element: finite "g<i>" or an element name, torus
    /// "t:<a1>,..", SU(2) "su2:<re a>,<im a>,<re b>,<im b>" (normalized),
    /// products "(<x>;<y>)".
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        match &self.kind {
            GroupKind::Finite(g) => {
                if let Some(i) = g.element_names.iter().position(|n| n == s) {
                    return Ok(GroupElement::Finite(i));
                }
                let i: usize = s
                    .strip_prefix('g')
                    .and_then(|r| r.parse().ok())
                    .ok_or_else(|| Error::parse(format!("bad element {s:?}")))?;
                if i >= g.order {
                    return Err(Error::parse(format!("element index {i} out of range")));
                }
                Ok(GroupElement::Finite(i))
            }
            GroupKind::Torus { rank } => {
                let inner = s
                    .strip_prefix("t:")
                    .ok_or_else(|| Error::parse(format!("bad torus element {s:?}")))?;
                let v: Vec<f64> = inner
                    .split(',')
                    .map(|p| p.trim().parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::parse(format!("bad torus element {s:?}")))?;
                if v.len() != *rank {
                    return Err(Error::parse("torus element rank mismatch"));
                }
                Ok(GroupElement::Torus(v))
            }
            GroupKind::Su2 { .. } => {
                let inner = s
                    .strip_prefix("su2:")
                    .ok_or_else(|| Error::parse(format!("bad SU2 element {s:?}")))?;
                let v: Vec<f64> = inner
                    .split(',')
                    .map(|p| p.trim().parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::parse(format!("bad SU2 element {s:?}")))?;
                if v.len() != 4 {
                    return Err(Error::parse("SU2 element needs four components"));
                }
                let n2: f64 = v.iter().map(|x| x * x).sum();
                if n2 < 1e-12 {
                    return Err(Error::parse("SU2 element components are all ~0"));
                }
                let n = n2.sqrt();
                Ok(GroupElement::Su2 {
                    a: Complex64::new(v[0] / n, v[1] / n),
                    b: Complex64::new(v[2] / n, v[3] / n),
                })
            }
            GroupKind::Product(h, k) => {
                let inner = s
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::parse(format!("bad product element {s:?}")))?;
                let mut depth = 0usize;
                let mut split = None;
                for (i, ch) in inner.char_indices() {
                    match ch {
                        '(' => depth += 1,
                        ')' => depth = depth.saturating_sub(1),
                        ';' if depth == 0 => {
                            split = Some(i);
                            break;
                        }
                        _ => {}
                    }
                }
                let i =
                    split.ok_or_else(|| Error::parse(format!("bad product element {s:?}")))?;
                Ok(GroupElement::pair(
                    h.parse_element(&inner[..i])?,
                    k.parse_element(&inner[i + 1..])?,
                ))
            }
        }
    }
}

/// Torus dual labels ordered by max-norm shell, lexicographic within a
/// shell, cut to at most `limit` labels.
fn torus_shells(rank: usize, limit: usize) -> Vec<LabelId> {
    fn extend(prefix: &mut Vec<i64>, rank: usize, shell: i64, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == rank {
            if prefix.iter().map(|x| x.abs()).max().unwrap_or(0) == shell {
                out.push(prefix.clone());
            }
            return;
        }
        for x in -shell..=shell {
            prefix.push(x);
            extend(prefix, rank, shell, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(limit);
    let mut shell: i64 = 0;
    while out.len() < limit {
        let mut members: Vec<Vec<i64>> = Vec::new();
        extend(&mut Vec::new(), rank, shell, &mut members);
        members.sort();
        for m in members {
            if out.len() == limit {
                break;
            }
            out.push(LabelId::Torus(m));
        }
        shell += 1;
    }
    out
}

/// Supported subgroup descriptors for branching and restriction.
#[derive(Debug, Clone)]
pub enum SubgroupDescriptor {
    /// The diagonal maximal torus in SU(2).
    MaximalTorusSu2,
    /// The center {±I} of SU(2), modeled as Z/2.
    CenterSu2,
    /// A direct factor of a product group.
    Factor(ProductSide),
    /// A subgroup of a finite catalog group, given by a catalog model for
    /// the subgroup and the list of parent element indices realizing it.
    FiniteEmbedded {
        model: Arc<GroupModel>,
        images: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductSide {
    Left,
    Right,
}

impl SubgroupDescriptor {
    fn kind_name(&self) -> &'static str {
        match self {
            SubgroupDescriptor::MaximalTorusSu2 => "maximal torus of SU(2)",
            SubgroupDescriptor::CenterSu2 => "center of SU(2)",
            SubgroupDescriptor::Factor(_) => "direct factor",
            SubgroupDescriptor::FiniteEmbedded { .. } => "embedded finite subgroup",
        }
    }

    /// Build an embedded-finite-subgroup descriptor, verifying that
    /// `images` realizes `model` as a subgroup of `parent`: injective and
    /// multiplicative.
    pub fn finite_embedded(
        parent: &GroupModel,
        model: Arc<GroupModel>,
        images: Vec<usize>,
    ) -> Result<SubgroupDescriptor> {
        let pg = parent.finite()?;
        let sg = model.finite()?;
        if images.len() != sg.order {
            return Err(Error::domain(format!(
                "embedding image list has {} entries, subgroup has order {}",
                images.len(),
                sg.order
            )));
        }
        for &i in &images {
            if i >= pg.order {
                return Err(Error::domain("embedding image out of range"));
            }
        }
        let mut seen = vec![false; pg.order];
        for &i in &images {
            if seen[i] {
                return Err(Error::domain("embedding is not injective"));
            }
            seen[i] = true;
        }
        for a in 0..sg.order {
            for b in 0..sg.order {
                if images[sg.mul(a, b)] != pg.mul(images[a], images[b]) {
                    return Err(Error::domain("embedding is not a homomorphism"));
                }
            }
        }
        Ok(SubgroupDescriptor::FiniteEmbedded { model, images })
    }

    /// The subgroup as a group model of its own.
    pub fn subgroup_model(&self, parent: &GroupModel) -> Result<Arc<GroupModel>> {
        match self {
            SubgroupDescriptor::MaximalTorusSu2 => {
                parent.su2_trunc().ok_or_else(|| {
                    Error::unsupported("maximal torus subgroup requires an SU(2) parent")
                })?;
                Ok(GroupModel::torus(1))
            }
            SubgroupDescriptor::CenterSu2 => {
                parent.su2_trunc().ok_or_else(|| {
                    Error::unsupported("center subgroup requires an SU(2) parent")
                })?;
                GroupModel::parse("Z/2")
            }
            SubgroupDescriptor::Factor(side) => {
                let (h, k) = parent.factors().ok_or_else(|| {
                    Error::unsupported("factor subgroup requires a product parent")
                })?;
                Ok(match side {
                    ProductSide::Left => h.clone(),
                    ProductSide::Right => k.clone(),
                })
            }
            SubgroupDescriptor::FiniteEmbedded { model, .. } => Ok(model.clone()),
        }
    }
}

struct ProductDims {
    da1: usize,
    da2: usize,
    db1: usize,
    db2: usize,
    ds1: usize,
    ds2: usize,
}

/// Combine factor intertwiners into a product-group intertwiner, permuting
/// tensor slots so that (H_a1 ⊗ H_b1) ⊗ (H_a2 ⊗ H_b2) matches
/// (H_a1 ⊗ H_a2) ⊗ (H_b1 ⊗ H_b2).
fn product_intertwiner(u1: &CMat, u2: &CMat, d: &ProductDims) -> CMat {
    let rows = d.da1 * d.da2 * d.db1 * d.db2;
    let cols = d.ds1 * d.ds2;
    let mut out = CMat::zeros(rows, cols);
    for i1 in 0..d.da1 {
        for j1 in 0..d.db1 {
            for i2 in 0..d.da2 {
                for j2 in 0..d.db2 {
                    let a = i1 * d.da2 + i2; // index in H_a = H_a1 ⊗ H_a2
                    let b = j1 * d.db2 + j2; // index in H_b
                    let row = a * (d.db1 * d.db2) + b;
                    for k1 in 0..d.ds1 {
                        let x1 = u1[(i1 * d.db1 + j1, k1)];
                        if x1 == C_ZERO {
                            continue;
                        }
                        for k2 in 0..d.ds2 {
                            let x2 = u2[(i2 * d.db2 + j2, k2)];
                            if x2 == C_ZERO {
                                continue;
                            }
                            out[(row, k1 * d.ds2 + k2)] = x1 * x2;
                        }
                    }
                }
            }
        }
    }
    out
}

/// Intertwiners for a finite group via the symmetry-adapted projection
/// P_kl = (d_sigma/|G|) Σ_g conj(sigma_kl(g)) (a ⊗ b)(g): an orthonormal
/// basis of range(P_00) seeds the isometries, and P_k0 fills in columns.
fn finite_intertwiners(
    g: &catalog::FiniteGroup,
    ia: usize,
    ib: usize,
    is: usize,
    mult: usize,
) -> Result<Vec<CMat>> {
    let da = g.irreps[ia].dim;
    let db = g.irreps[ib].dim;
    let ds = g.irreps[is].dim;
    let big = da * db;
    let scale = ds as f64 / g.order as f64;

    // rho(g) = a(g) ⊗ b(g), computed once
    let rho: Vec<CMat> = (0..g.order)
        .map(|e| g.irreps[ia].mats[e].kron(&g.irreps[ib].mats[e]))
        .collect();

    let proj = |k: usize, l: usize| -> CMat {
        let mut p = CMat::zeros(big, big);
        for e in 0..g.order {
            let coeff = g.irreps[is].mats[e][(k, l)].conj() * scale;
            if coeff == C_ZERO {
                continue;
            }
            p = p.add(&rho[e].scale(coeff));
        }
        p
    };

    let p00 = proj(0, 0);
    let seeds = orthonormal_columns(&p00, 1e-7);
    if seeds.cols() != mult {
        return Err(Error::domain(format!(
            "isotypic projector rank {} disagrees with multiplicity {mult}",
            seeds.cols()
        )));
    }
    let pk0: Vec<CMat> = (0..ds).map(|k| proj(k, 0)).collect();
    let mut out = Vec::with_capacity(mult);
    for i in 0..mult {
        let w = seeds.column(i);
        let mut u = CMat::zeros(big, ds);
        for (k, p) in pk0.iter().enumerate() {
            let col: Vec<Complex64> = (0..big)
                .map(|r| (0..big).map(|c| p[(r, c)] * w[c]).sum())
                .collect();
            u.set_column(k, &col);
        }
        out.push(u);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn descriptor_roundtrip() {
        for d in ["S3", "S4", "A4", "Q8", "Z/8", "D4", "SU2:N=4", "T:k=1"] {
            let g = GroupModel::parse(d).unwrap();
            assert_eq!(g.descriptor(), d);
        }
        let p = GroupModel::parse("prod(S3,Z/2)").unwrap();
        assert_eq!(p.descriptor(), "prod(S3,Z/2)");
        assert_eq!(p.order(), Some(12));
        assert!(GroupModel::parse("E8").is_err());
    }

    #[test]
    fn s3_dual() {
        let g = GroupModel::parse("S3").unwrap();
        let dual = g.enumerate_dual(10).unwrap();
        let dims: Vec<usize> = dual.iter().map(|l| l.dim).collect();
        assert_eq!(dims, vec![1, 1, 2]);
        let sq: usize = dims.iter().map(|d| d * d).sum();
        assert_eq!(sq, 6);
        assert_eq!(g.label_string(&dual[2].id).unwrap(), "std");
    }

    #[test]
    fn su2_dual_truncation() {
        let g = GroupModel::parse("SU2:N=4").unwrap();
        let dual = g.enumerate_dual(100).unwrap();
        let dims: Vec<usize> = dual.iter().map(|l| l.dim).collect();
        assert_eq!(dims, vec![1, 2, 3, 4, 5]);
        assert_eq!(g.enumerate_dual(3).unwrap().len(), 3);
        assert!(!g.dual_is_exhausted(100));
    }

    #[test]
    fn z2_dual() {
        let g = GroupModel::parse("Z/2").unwrap();
        let dual = g.enumerate_dual(5).unwrap();
        assert_eq!(dual.len(), 2);
        assert!(dual.iter().all(|l| l.dim == 1));
    }

    #[test]
    fn torus_enumeration_shells() {
        let g = GroupModel::parse("T:k=1").unwrap();
        let dual = g.enumerate_dual(5).unwrap();
        let ks: Vec<i64> = dual
            .iter()
            .map(|l| match &l.id {
                LabelId::Torus(v) => v[0],
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(ks, vec![0, -1, 1, -2, 2]);
        // conjugate of chi_k is chi_{-k}
        assert_eq!(dual[1].conj, LabelId::Torus(vec![1]));
    }

    #[test]
    fn product_dual_dims() {
        let g = GroupModel::parse("prod(S3,Z/2)").unwrap();
        let dual = g.enumerate_dual(100).unwrap();
        assert_eq!(dual.len(), 6);
        let sq: usize = dual.iter().map(|l| l.dim * l.dim).sum();
        assert_eq!(sq, 12);
        let su2t = GroupModel::parse("prod(SU2:N=3,T:k=1)").unwrap();
        let d2 = su2t.enumerate_dual(3).unwrap();
        // lexicographic pairs (pi_n, chi_k) with dims n+1; the limit bounds
        // each factor, so 3 SU(2) labels x 3 torus characters
        assert_eq!(d2.len(), 9);
        assert_eq!(d2[0].dim, 1);
        assert!(d2.iter().take(3).all(|l| l.dim == 1));
    }

    #[test]
    fn fusion_su2() {
        let g = GroupModel::parse("SU2:N=4").unwrap();
        let f = g.fusion(&LabelId::Su2(1), &LabelId::Su2(1)).unwrap();
        assert_eq!(
            *f,
            vec![(LabelId::Su2(0), 1), (LabelId::Su2(2), 1)]
        );
        // fusion may exceed the truncation
        let f2 = g.fusion(&LabelId::Su2(4), &LabelId::Su2(4)).unwrap();
        assert_eq!(f2.last().unwrap().0, LabelId::Su2(8));
    }

    #[test]
    fn fusion_s3() {
        let g = GroupModel::parse("S3").unwrap();
        // sgn ⊗ std = std
        let f = g.fusion(&LabelId::Finite(1), &LabelId::Finite(2)).unwrap();
        assert_eq!(*f, vec![(LabelId::Finite(2), 1)]);
        // std ⊗ std = triv + sgn + std
        let f2 = g.fusion(&LabelId::Finite(2), &LabelId::Finite(2)).unwrap();
        assert_eq!(
            *f2,
            vec![
                (LabelId::Finite(0), 1),
                (LabelId::Finite(1), 1),
                (LabelId::Finite(2), 1)
            ]
        );
        // triv ⊗ pi = pi
        for i in 0..3 {
            let f3 = g.fusion(&LabelId::Finite(0), &LabelId::Finite(i)).unwrap();
            assert_eq!(*f3, vec![(LabelId::Finite(i), 1)]);
        }
    }

    fn check_intertwiner_family(g: &GroupModel, a: &LabelId, b: &LabelId) {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fus = g.fusion(a, b).unwrap();
        let da = g.dim_of(a).unwrap();
        let db = g.dim_of(b).unwrap();
        let mut completeness = CMat::zeros(da * db, da * db);
        for (sigma, m) in fus.iter() {
            let us = g.intertwiners(a, b, sigma).unwrap();
            assert_eq!(us.len(), *m);
            let ds = g.dim_of(sigma).unwrap();
            for (i, u) in us.iter().enumerate() {
                let gram = u.adjoint().matmul(u);
                assert!(
                    gram.sub(&CMat::identity(ds)).max_abs() < 1e-10,
                    "not isometric"
                );
                // disjoint ranges
                for v in us.iter().skip(i + 1) {
                    assert!(u.adjoint().matmul(v).max_abs() < 1e-10, "ranges overlap");
                }
                // intertwining at random elements
                for _ in 0..3 {
                    let s = g.random_element(&mut rng);
                    let big = g
                        .irrep_matrix(a, &s)
                        .unwrap()
                        .kron(&g.irrep_matrix(b, &s).unwrap());
                    let lhs = big.matmul(u);
                    let rhs = u.matmul(&g.irrep_matrix(sigma, &s).unwrap());
                    assert!(lhs.sub(&rhs).max_abs() < 1e-9, "intertwining fails");
                }
                completeness = completeness.add(&u.matmul(&u.adjoint()));
            }
        }
        assert!(
            completeness.sub(&CMat::identity(da * db)).max_abs() < 1e-9,
            "intertwiner family incomplete"
        );
    }

    #[test]
    fn intertwiners_finite() {
        let s3 = GroupModel::parse("S3").unwrap();
        check_intertwiner_family(&s3, &LabelId::Finite(2), &LabelId::Finite(2));
        check_intertwiner_family(&s3, &LabelId::Finite(0), &LabelId::Finite(2));
        check_intertwiner_family(&s3, &LabelId::Finite(1), &LabelId::Finite(2));
        let s4 = GroupModel::parse("S4").unwrap();
        check_intertwiner_family(&s4, &LabelId::Finite(3), &LabelId::Finite(3));
        check_intertwiner_family(&s4, &LabelId::Finite(2), &LabelId::Finite(3));
        let q8 = GroupModel::parse("Q8").unwrap();
        check_intertwiner_family(&q8, &LabelId::Finite(4), &LabelId::Finite(4));
    }

    #[test]
    fn intertwiners_product() {
        let g = GroupModel::parse("prod(S3,Z/2)").unwrap();
        let a = LabelId::pair(LabelId::Finite(2), LabelId::Finite(1));
        let b = LabelId::pair(LabelId::Finite(2), LabelId::Finite(1));
        check_intertwiner_family(&g, &a, &b);
    }

    #[test]
    fn branching_su2_torus() {
        let g = GroupModel::parse("SU2:N=6").unwrap();
        let b = g
            .branching(&SubgroupDescriptor::MaximalTorusSu2, &LabelId::Su2(3))
            .unwrap();
        let ks: Vec<(i64, usize)> = b
            .iter()
            .map(|(id, m)| match id {
                LabelId::Torus(v) => (v[0], *m),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(ks, vec![(-1, 1), (1, 1), (-3, 1), (3, 1)]);
    }

    #[test]
    fn branching_su2_center() {
        let g = GroupModel::parse("SU2:N=6").unwrap();
        for n in 0..=6u32 {
            let b = g
                .branching(&SubgroupDescriptor::CenterSu2, &LabelId::Su2(n))
                .unwrap();
            assert_eq!(b.len(), 1);
            let (id, m) = &b[0];
            assert_eq!(*id, LabelId::Finite((n % 2) as usize));
            assert_eq!(*m, n as usize + 1);
        }
    }

    #[test]
    fn branching_product_factor() {
        let g = GroupModel::parse("prod(S3,Z/2)").unwrap();
        let pi = LabelId::pair(LabelId::Finite(2), LabelId::Finite(1));
        let b = g
            .branching(&SubgroupDescriptor::Factor(ProductSide::Left), &pi)
            .unwrap();
        assert_eq!(b, vec![(LabelId::Finite(2), 1)]);
        let b2 = g
            .branching(&SubgroupDescriptor::Factor(ProductSide::Right), &pi)
            .unwrap();
        assert_eq!(b2, vec![(LabelId::Finite(1), 2)]);
    }

    #[test]
    fn branching_embedded_a3_in_s3() {
        let s3 = GroupModel::parse("S3").unwrap();
        let z3 = GroupModel::parse("Z/3").unwrap();
        // A3 = {identity, (012), (021)} = {p012, p120, p201}
        let names = ["p012", "p120", "p201"];
        let images: Vec<usize> = names
            .iter()
            .map(|n| match s3.parse_element(n).unwrap() {
                GroupElement::Finite(i) => i,
                _ => unreachable!(),
            })
            .collect();
        let sub = SubgroupDescriptor::finite_embedded(&s3, z3, images).unwrap();
        // std|_A3 = chi1 + chi2
        let b = s3.branching(&sub, &LabelId::Finite(2)).unwrap();
        assert_eq!(b, vec![(LabelId::Finite(1), 1), (LabelId::Finite(2), 1)]);
        // sum of m * d equals d_pi
        let total: usize = b.iter().map(|(_, m)| m).sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn branching_rejects_bad_embedding() {
        let s3 = GroupModel::parse("S3").unwrap();
        let z3 = GroupModel::parse("Z/3").unwrap();
        // wrong images: not closed under multiplication
        let bad = SubgroupDescriptor::finite_embedded(&s3, z3, vec![0, 1, 2]);
        assert!(bad.is_err());
    }

    #[test]
    fn random_elements_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for d in ["S3", "SU2:N=3", "T:k=2", "prod(Z/2,SU2:N=2)"] {
            let g = GroupModel::parse(d).unwrap();
            for _ in 0..5 {
                let e = g.random_element(&mut rng);
                let dual = g.enumerate_dual(3).unwrap();
                for l in &dual {
                    let m = g.irrep_matrix(&l.id, &e).unwrap();
                    let gram = m.adjoint().matmul(&m);
                    assert!(gram.sub(&CMat::identity(l.dim)).max_abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn group_element_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in ["S4", "SU2:N=2", "T:k=1", "prod(S3,Z/2)"] {
            let g = GroupModel::parse(d).unwrap();
            let dual = g.enumerate_dual(3).unwrap();
            for _ in 0..5 {
                let x = g.random_element(&mut rng);
                let y = g.random_element(&mut rng);
                let xy = g.mul_elements(&x, &y).unwrap();
                let xinv = g.inverse_element(&x).unwrap();
                for l in &dual {
                    let mx = g.irrep_matrix(&l.id, &x).unwrap();
                    let my = g.irrep_matrix(&l.id, &y).unwrap();
                    let mxy = g.irrep_matrix(&l.id, &xy).unwrap();
                    assert!(mx.matmul(&my).sub(&mxy).max_abs() < 1e-10);
                    let minv = g.irrep_matrix(&l.id, &xinv).unwrap();
                    assert!(mx.matmul(&minv).sub(&CMat::identity(l.dim)).max_abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn label_string_roundtrip() {
        let cases = [
            ("S3", vec!["triv", "sgn", "std"]),
            ("SU2:N=5", vec!["pi0", "pi3"]),
            ("T:k=2", vec!["chi(1,-2)"]),
            ("prod(S3,Z/2)", vec!["(std,chi1)"]),
        ];
        for (d, labels) in cases {
            let g = GroupModel::parse(d).unwrap();
            for s in labels {
                let id = g.parse_label(s).unwrap();
                assert_eq!(g.label_string(&id).unwrap(), s);
            }
        }
    }

    #[test]
    fn conjugate_involution() {
        for d in ["S4", "A4", "Q8", "Z/8", "D4", "SU2:N=3", "T:k=1"] {
            let g = GroupModel::parse(d).unwrap();
            for l in g.enumerate_dual(7).unwrap() {
                let c = g.label(&l.conj).unwrap();
                assert_eq!(c.dim, l.dim, "conjugate dim differs");
                assert_eq!(c.conj, l.id, "conjugation is not an involution");
            }
        }
    }

    #[test]
    fn fusion_conjugation_symmetry() {
        for d in ["S4", "Q8", "A4", "D4"] {
            let g = GroupModel::parse(d).unwrap();
            let dual = g.enumerate_dual(10).unwrap();
            for a in &dual {
                for b in &dual {
                    let f = g.fusion(&a.id, &b.id).unwrap();
                    let fc = g.fusion(&a.conj, &b.conj).unwrap();
                    for (s, m) in f.iter() {
                        let sc = g.label(s).unwrap().conj;
                        let mc = fc
                            .iter()
                            .find(|(t, _)| *t == sc)
                            .map(|(_, m)| *m)
                            .unwrap_or(0);
                        assert_eq!(*m, mc, "m(s, a⊗b) != m(s̄, ā⊗b̄) in {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn haar_metadata() {
        assert_eq!(
            GroupModel::parse("S3").unwrap().haar(),
            HaarMeasure::Counting { order: 6 }
        );
        assert!(matches!(
            GroupModel::parse("SU2:N=2").unwrap().haar(),
            HaarMeasure::Continuous { .. }
        ));
    }
}
