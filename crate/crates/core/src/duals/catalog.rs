//! Built-in finite groups with explicitly coded irreducible representations.
//!
//! Every group here ships its full element table, Cayley table and the
//! complete list of irrep matrices, so downstream Fourier computations are
//! exact sums. No general-purpose irrep solver is involved.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMat;

#[derive(Debug, Clone)]
pub struct FiniteIrrep {
    pub name: String,
    pub dim: usize,
    /// One unitary matrix per group element, indexed like the element table.
    pub mats: Vec<CMat>,
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    pub name: String,
    pub order: usize,
    /// Cayley table, row-major: `mult[a * order + b] = a·b`.
    pub mult: Vec<usize>,
    pub inv: Vec<usize>,
    pub identity: usize,
    pub irreps: Vec<FiniteIrrep>,
    /// `conj_map[i]` is the index of the conjugate irrep of irrep `i`.
    pub conj_map: Vec<usize>,
    pub element_names: Vec<String>,
}

impl FiniteGroup {
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    pub fn character(&self, irrep: usize, g: usize) -> Complex64 {
        self.irreps[irrep].mats[g].trace()
    }

    fn finish(
        name: &str,
        mult: Vec<usize>,
        irreps: Vec<FiniteIrrep>,
        element_names: Vec<String>,
    ) -> Result<FiniteGroup> {
        let order = element_names.len();
        // identity: the unique e with e·a = a for all a
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| mult[e * order + a] == a && mult[a * order + e] == a))
            .ok_or_else(|| Error::domain(format!("{name}: no identity in Cayley table")))?;
        let mut inv = vec![usize::MAX; order];
        for a in 0..order {
            inv[a] = (0..order)
                .find(|&b| mult[a * order + b] == identity)
                .ok_or_else(|| Error::domain(format!("{name}: element {a} has no inverse")))?;
        }
        // sanity: dimension count
        let sq: usize = irreps.iter().map(|r| r.dim * r.dim).sum();
        if sq != order {
            return Err(Error::domain(format!(
                "{name}: sum of squared irrep dims {sq} != order {order}"
            )));
        }
        // conjugate pairing via characters
        let nir = irreps.len();
        let mut conj_map = vec![usize::MAX; nir];
        for i in 0..nir {
            let mut best = usize::MAX;
            for j in 0..nir {
                let dev = (0..order)
                    .map(|g| (irreps[j].mats[g].trace() - irreps[i].mats[g].trace().conj()).norm())
                    .fold(0.0, f64::max);
                if dev < 1e-8 {
                    best = j;
                    break;
                }
            }
            if best == usize::MAX {
                return Err(Error::domain(format!(
                    "{name}: irrep {} has no conjugate in the list",
                    irreps[i].name
                )));
            }
            conj_map[i] = best;
        }
        Ok(FiniteGroup {
            name: name.to_string(),
            order,
            mult,
            inv,
            identity,
            irreps,
            conj_map,
            element_names,
        })
    }
}

fn cis(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), theta.sin())
}

fn scalar_rep(name: &str, values: Vec<Complex64>) -> FiniteIrrep {
    FiniteIrrep {
        name: name.to_string(),
        dim: 1,
        mats: values.into_iter().map(|v| CMat::from_rows(&[vec![v]])).collect(),
    }
}

/// Cyclic group Z/n.
pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::parse("Z/0 is not a group"));
    }
    let mut mult = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            mult[a * n + b] = (a + b) % n;
        }
    }
    let irreps = (0..n)
        .map(|k| {
            let vals = (0..n)
                .map(|j| cis(2.0 * PI * (j * k) as f64 / n as f64))
                .collect();
            scalar_rep(&format!("chi{k}"), vals)
        })
        .collect();
    let names = (0..n).map(|j| format!("r{j}")).collect();
    FiniteGroup::finish(&format!("Z/{n}"), mult, irreps, names)
}

/// Dihedral group of order 2n, presented as rotations r^j and reflections
/// r^j s with s r s = r^{-1}. Element index: eps * n + j for r^j s^eps.
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n < 3 {
        return Err(Error::parse(format!("D{n} requires n >= 3")));
    }
    let order = 2 * n;
    let idx = |j: usize, eps: usize| eps * n + j;
    let mut mult = vec![0usize; order * order];
    for j in 0..n {
        for eps in 0..2 {
            for j2 in 0..n {
                for eps2 in 0..2 {
                    // (j,eps)·(j2,eps2) = (j + (-1)^eps j2 mod n, eps+eps2)
                    let jj = if eps == 0 { (j + j2) % n } else { (j + n - j2 % n) % n };
                    mult[idx(j, eps) * order + idx(j2, eps2)] = idx(jj, (eps + eps2) % 2);
                }
            }
        }
    }
    let mut irreps: Vec<FiniteIrrep> = Vec::new();
    let all = |f: &dyn Fn(usize, usize) -> Complex64| -> Vec<Complex64> {
        let mut v = Vec::with_capacity(order);
        for eps in 0..2 {
            for j in 0..n {
                v.push(f(j, eps));
            }
        }
        v
    };
    let one = Complex64::new(1.0, 0.0);
    irreps.push(scalar_rep("triv", all(&|_, _| one)));
    irreps.push(scalar_rep(
        "sgns",
        all(&|_, eps| if eps == 0 { one } else { -one }),
    ));
    if n % 2 == 0 {
        irreps.push(scalar_rep(
            "sgnr",
            all(&|j, _| if j % 2 == 0 { one } else { -one }),
        ));
        irreps.push(scalar_rep(
            "sgnrs",
            all(&|j, eps| if (j + eps) % 2 == 0 { one } else { -one }),
        ));
    }
    let top = if n % 2 == 0 { n / 2 } else { (n + 1) / 2 };
    for h in 1..top {
        let mut mats = Vec::with_capacity(order);
        for eps in 0..2 {
            for j in 0..n {
                let w = cis(2.0 * PI * (h * j) as f64 / n as f64);
                let m = if eps == 0 {
                    CMat::from_diag(&[w, w.conj()])
                } else {
                    let mut m = CMat::zeros(2, 2);
                    m[(0, 1)] = w;
                    m[(1, 0)] = w.conj();
                    m
                };
                mats.push(m);
            }
        }
        irreps.push(FiniteIrrep {
            name: format!("rho{h}"),
            dim: 2,
            mats,
        });
    }
    let mut names = Vec::with_capacity(order);
    for eps in 0..2 {
        for j in 0..n {
            names.push(if eps == 0 {
                format!("r{j}")
            } else {
                format!("r{j}s")
            });
        }
    }
    FiniteGroup::finish(&format!("D{n}"), mult, irreps, names)
}

/// All permutations of 0..m in lexicographic order.
fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..m).collect();
    let mut out = vec![cur.clone()];
    loop {
        // next_permutation
        let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..m).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

fn parity(p: &[usize]) -> i32 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = p[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // (p ∘ q)(i) = p[q[i]]
    q.iter().map(|&i| p[i]).collect()
}

fn perm_name(p: &[usize]) -> String {
    let digits: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("p{}", digits.join(""))
}

/// Orthonormal basis of the orthogonal complement of (1,..,1) in R^m,
/// from Gram-Schmidt over e_i - e_{i+1}.
fn standard_rep_basis(m: usize) -> Vec<Vec<f64>> {
    // b_k has 1/sqrt(k(k+1)) in the first k slots and -k/sqrt(k(k+1)) at slot k.
    (1..m)
        .map(|k| {
            let norm = ((k * (k + 1)) as f64).sqrt();
            let mut v = vec![0.0; m];
            for slot in v.iter_mut().take(k) {
                *slot = 1.0 / norm;
            }
            v[k] = -(k as f64) / norm;
            v
        })
        .collect()
}

/// Matrix of the permutation action on the standard (m-1)-dim irrep basis.
fn standard_rep_matrix(p: &[usize], basis: &[Vec<f64>]) -> CMat {
    let m = p.len();
    let d = basis.len();
    let mut out = vec![vec![0.0f64; d]; d];
    for (l, bl) in basis.iter().enumerate() {
        // P_p (b_l) has coordinates sum_i b_l[i] e_{p(i)}
        let mut image = vec![0.0; m];
        for i in 0..m {
            image[p[i]] += bl[i];
        }
        for (k, bk) in basis.iter().enumerate() {
            out[k][l] = bk.iter().zip(&image).map(|(a, b)| a * b).sum();
        }
    }
    CMat::from_real_rows(&out)
}

/// Action of a permutation of {0,1,2,3} on the three pair-partitions,
/// giving the quotient map S4 -> S3 (kernel the Klein four-group).
fn partition_action(p: &[usize]) -> Vec<usize> {
    // partitions: 0 = {{0,1},{2,3}}, 1 = {{0,2},{1,3}}, 2 = {{0,3},{1,2}}
    // partition containing the pair {0, x}: x=1 -> 0, x=2 -> 1, x=3 -> 2.
    let partner_of_zero = |q: usize| -> usize {
        // q is the element paired with 0 in the image partition
        match q {
            1 => 0,
            2 => 1,
            3 => 2,
            _ => unreachable!(),
        }
    };
    (0..3)
        .map(|part| {
            let mate = part + 1; // 0 is paired with part+1 in partition `part`
            // image pair {p(0), p(mate)}; find the element paired with 0
            let (a, b) = (p[0], p[mate]);
            let other = if a == 0 {
                b
            } else if b == 0 {
                a
            } else {
                // 0 sits in the other pair; its mate is the remaining element
                let used = [a, b];
                (1..4).find(|x| !used.contains(x)).unwrap()
            };
            partner_of_zero(other)
        })
        .collect()
}

/// The symmetric group S3.
pub fn symmetric3() -> Result<FiniteGroup> {
    let perms = permutations(3);
    let order = perms.len();
    let index_of = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
    let mut mult = vec![0usize; order * order];
    for (a, pa) in perms.iter().enumerate() {
        for (b, pb) in perms.iter().enumerate() {
            mult[a * order + b] = index_of(&compose(pa, pb));
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let basis = standard_rep_basis(3);
    let irreps = vec![
        scalar_rep("triv", perms.iter().map(|_| one).collect()),
        scalar_rep(
            "sgn",
            perms.iter().map(|p| one * parity(p) as f64).collect(),
        ),
        FiniteIrrep {
            name: "std".into(),
            dim: 2,
            mats: perms.iter().map(|p| standard_rep_matrix(p, &basis)).collect(),
        },
    ];
    let names = perms.iter().map(|p| perm_name(p)).collect();
    FiniteGroup::finish("S3", mult, irreps, names)
}

/// The symmetric group S4.
pub fn symmetric4() -> Result<FiniteGroup> {
    let perms = permutations(4);
    let order = perms.len();
    let index_of = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
    let mut mult = vec![0usize; order * order];
    for (a, pa) in perms.iter().enumerate() {
        for (b, pb) in perms.iter().enumerate() {
            mult[a * order + b] = index_of(&compose(pa, pb));
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let basis4 = standard_rep_basis(4);
    let basis3 = standard_rep_basis(3);
    let std_mats: Vec<CMat> = perms.iter().map(|p| standard_rep_matrix(p, &basis4)).collect();
    let irreps = vec![
        scalar_rep("triv", perms.iter().map(|_| one).collect()),
        scalar_rep(
            "sgn",
            perms.iter().map(|p| one * parity(p) as f64).collect(),
        ),
        FiniteIrrep {
            name: "dim2".into(),
            dim: 2,
            mats: perms
                .iter()
                .map(|p| standard_rep_matrix(&partition_action(p), &basis3))
                .collect(),
        },
        FiniteIrrep {
            name: "std".into(),
            dim: 3,
            mats: std_mats.clone(),
        },
        FiniteIrrep {
            name: "stdsgn".into(),
            dim: 3,
            mats: perms
                .iter()
                .zip(&std_mats)
                .map(|(p, m)| m.scale(Complex64::new(parity(p) as f64, 0.0)))
                .collect(),
        },
    ];
    let names = perms.iter().map(|p| perm_name(p)).collect();
    FiniteGroup::finish("S4", mult, irreps, names)
}

/// The alternating group A4 (even permutations of 4 points).
pub fn alternating4() -> Result<FiniteGroup> {
    let perms: Vec<Vec<usize>> = permutations(4)
        .into_iter()
        .filter(|p| parity(p) == 1)
        .collect();
    let order = perms.len();
    let index_of = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
    let mut mult = vec![0usize; order * order];
    for (a, pa) in perms.iter().enumerate() {
        for (b, pb) in perms.iter().enumerate() {
            mult[a * order + b] = index_of(&compose(pa, pb));
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let omega = cis(2.0 * PI / 3.0);
    // power of the 3-cycle 0->1->2->0 represented by the partition action
    let cycle_power = |p: &[usize]| -> u32 {
        let q = partition_action(p);
        if q == [0, 1, 2] {
            0
        } else if q == [1, 2, 0] {
            1
        } else {
            2
        }
    };
    let basis4 = standard_rep_basis(4);
    let irreps = vec![
        scalar_rep("triv", perms.iter().map(|_| one).collect()),
        scalar_rep(
            "omega1",
            perms.iter().map(|p| omega.powu(cycle_power(p))).collect(),
        ),
        scalar_rep(
            "omega2",
            perms
                .iter()
                .map(|p| omega.powu(2 * cycle_power(p)))
                .collect(),
        ),
        FiniteIrrep {
            name: "std".into(),
            dim: 3,
            mats: perms.iter().map(|p| standard_rep_matrix(p, &basis4)).collect(),
        },
    ];
    let names = perms.iter().map(|p| perm_name(p)).collect();
    FiniteGroup::finish("A4", mult, irreps, names)
}

/// The quaternion group Q8 = {±1, ±i, ±j, ±k}.
pub fn quaternion8() -> Result<FiniteGroup> {
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    // defining 2-dim representation
    let q_i = CMat::from_rows(&[vec![i, zero], vec![zero, -i]]);
    let q_j = CMat::from_rows(&[vec![zero, one], vec![-one, zero]]);
    let q_k = q_i.matmul(&q_j);
    let unit = CMat::identity(2);
    let reps = [
        unit.clone(),
        unit.scale(-one),
        q_i.clone(),
        q_i.scale(-one),
        q_j.clone(),
        q_j.scale(-one),
        q_k.clone(),
        q_k.scale(-one),
    ];
    let names = ["e", "m1", "i", "mi", "j", "mj", "k", "mk"];
    let order = 8;
    let match_mat = |m: &CMat| -> usize {
        (0..order)
            .find(|&t| reps[t].sub(m).max_abs() < 1e-9)
            .expect("Q8 product fell outside the element list")
    };
    let mut mult = vec![0usize; order * order];
    for a in 0..order {
        for b in 0..order {
            mult[a * order + b] = match_mat(&reps[a].matmul(&reps[b]));
        }
    }
    // sign characters: +1 on ±1 and ±x for the named axis, -1 elsewhere
    let axis_char = |keep: usize| -> Vec<Complex64> {
        (0..order)
            .map(|g| {
                let base = g / 2; // 0:±1, 1:±i, 2:±j, 3:±k
                if base == 0 || base == keep {
                    one
                } else {
                    -one
                }
            })
            .collect()
    };
    let irreps = vec![
        scalar_rep("triv", vec![one; order]),
        scalar_rep("chii", axis_char(1)),
        scalar_rep("chij", axis_char(2)),
        scalar_rep("chik", axis_char(3)),
        FiniteIrrep {
            name: "dim2".into(),
            dim: 2,
            mats: reps.to_vec(),
        },
    ];
    FiniteGroup::finish(
        "Q8",
        mult,
        irreps,
        names.iter().map(|s| s.to_string()).collect(),
    )
}

/// Look up a finite catalog group by name: "S3", "S4", "A4", "Q8", "Z/n", "Dn".
pub fn by_name(name: &str) -> Result<FiniteGroup> {
    match name {
        "S3" => symmetric3(),
        "S4" => symmetric4(),
        "A4" => alternating4(),
        "Q8" => quaternion8(),
        _ => {
            if let Some(rest) = name.strip_prefix("Z/") {
                let n: usize = rest
                    .parse()
                    .map_err(|_| Error::parse(format!("bad cyclic order in {name:?}")))?;
                cyclic(n)
            } else if let Some(rest) = name.strip_prefix('D') {
                let n: usize = rest
                    .parse()
                    .map_err(|_| Error::parse(format!("bad dihedral index in {name:?}")))?;
                dihedral(n)
            } else {
                Err(Error::parse(format!("unknown finite group {name:?}")))
            }
        }
    }
}
