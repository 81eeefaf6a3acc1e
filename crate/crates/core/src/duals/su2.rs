//! SU(2) irreducibles as symmetric powers of the defining representation,
//! realized on the normalized-monomial basis of degree-n homogeneous
//! polynomials in two variables.
//!
//! With basis b_j = x^{n-j} y^j / sqrt((n-j)! j!), j = 0..n, the diagonal
//! torus acts as diag(chi_n, chi_{n-2}, ..., chi_{-n}) and the ladder
//! operators have the familiar sqrt coefficients, which is everything the
//! fusion machinery needs.

use num_complex::Complex64;

use crate::linalg::{eigh, fix_phase, vec_norm, CMat, C_ZERO};

/// Binomial coefficient as f64; exact for the small arguments used here.
fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Matrix of the spin-n/2 irrep (dimension n+1) at the group element
/// [[a, b], [-conj(b), conj(a)]].
pub fn irrep_matrix(n: u32, a: Complex64, b: Complex64) -> CMat {
    let n = n as usize;
    let d = n + 1;
    let c = -b.conj();
    let dd = a.conj();
    // Precompute powers.
    let pows = |z: Complex64, top: usize| -> Vec<Complex64> {
        let mut v = Vec::with_capacity(top + 1);
        let mut cur = Complex64::new(1.0, 0.0);
        for _ in 0..=top {
            v.push(cur);
            cur *= z;
        }
        v
    };
    let pa = pows(a, n);
    let pb = pows(b, n);
    let pc = pows(c, n);
    let pd = pows(dd, n);
    let mut m = CMat::zeros(d, d);
    for j in 0..=n {
        for k in 0..=n {
            // coefficient of x^{n-k} y^k in (a x + c y)^{n-j} (b x + d y)^j
            let mut acc = C_ZERO;
            let r_lo = k.saturating_sub(j);
            let r_hi = k.min(n - j);
            for r in r_lo..=r_hi {
                let s = k - r;
                acc += binomial(n - j, r) * binomial(j, s) * pa[n - j - r] * pc[r] * pb[j - s]
                    * pd[s];
            }
            let scale = (binomial(n, j) / binomial(n, k)).sqrt();
            m[(k, j)] = acc * scale;
        }
    }
    m
}

/// Clebsch-Gordan selection rule: pi_k occurs in pi_m ⊗ pi_n exactly when
/// |m-n| <= k <= m+n and k ≡ m+n (mod 2), always with multiplicity one.
pub fn fusion_allowed(m: u32, n: u32, k: u32) -> bool {
    k >= m.abs_diff(n) && k <= m + n && (k + m + n) % 2 == 0
}

/// Indices of the weight-w subspace of H_m ⊗ H_n, as (r, s) basis pairs
/// with (m - 2r) + (n - 2s) = w, in lexicographic order.
fn weight_pairs(m: u32, n: u32, w: i64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for r in 0..=m {
        let rem = (m as i64 - 2 * r as i64) + n as i64 - w;
        if rem < 0 || rem % 2 != 0 {
            continue;
        }
        let s = rem / 2;
        if s <= n as i64 {
            out.push((r, s as u32));
        }
    }
    out
}

fn ladder_coeff(n: u32, j: u32) -> f64 {
    // F b_j = sqrt((n-j)(j+1)) b_{j+1}; E b_j = sqrt(j(n-j+1)) b_{j-1}
    (((n - j) as f64) * ((j + 1) as f64)).sqrt()
}

/// The isometric intertwiner H_{pi_k} -> H_{pi_m} ⊗ H_{pi_n}: the
/// highest-weight vector is the null vector of the raising operator on the
/// weight-k subspace, and the remaining columns follow by lowering.
///
/// Deterministic: the highest-weight vector has its first nonzero entry
/// (in lexicographic pair order) made real positive.
pub fn intertwiner(m: u32, n: u32, k: u32) -> Option<CMat> {
    if !fusion_allowed(m, n, k) {
        return None;
    }
    let dm = (m + 1) as usize;
    let dn = (n + 1) as usize;
    let tensor_index = |r: u32, s: u32| -> usize { r as usize * dn + s as usize };

    let top = weight_pairs(m, n, k as i64);
    let dim_top = top.len();

    // Highest-weight vector: kernel of E restricted to the weight-k space.
    let hw: Vec<Complex64> = if k == m + n {
        vec![Complex64::new(1.0, 0.0)]
    } else {
        let up = weight_pairs(m, n, k as i64 + 2);
        let mut e = CMat::zeros(up.len(), dim_top);
        for (col, &(r, s)) in top.iter().enumerate() {
            // E(b_r ⊗ b_s) = sqrt(r(m-r+1)) b_{r-1}⊗b_s + sqrt(s(n-s+1)) b_r⊗b_{s-1}
            if r > 0 {
                let row = up.iter().position(|&p| p == (r - 1, s)).unwrap();
                e[(row, col)] += Complex64::new((r as f64 * (m - r + 1) as f64).sqrt(), 0.0);
            }
            if s > 0 {
                let row = up.iter().position(|&p| p == (r, s - 1)).unwrap();
                e[(row, col)] += Complex64::new((s as f64 * (n - s + 1) as f64).sqrt(), 0.0);
            }
        }
        let gram = e.adjoint().matmul(&e);
        let (vals, vecs) = eigh(&gram);
        debug_assert!(vals[0].abs() < 1e-9 * (1.0 + vals[dim_top - 1].abs()));
        vecs.column(0)
    };
    let mut hw = hw;
    let nrm = vec_norm(&hw);
    for x in hw.iter_mut() {
        *x /= nrm;
    }
    fix_phase(&mut hw, 1e-9);

    // Place into the full tensor space and lower k times.
    let mut u = CMat::zeros(dm * dn, (k + 1) as usize);
    let mut cur = vec![C_ZERO; dm * dn];
    for (idx, &(r, s)) in top.iter().enumerate() {
        cur[tensor_index(r, s)] = hw[idx];
    }
    for col in 0..=k {
        u.set_column(col as usize, &cur);
        if col == k {
            break;
        }
        // next = F cur / sqrt((k-col)(col+1))
        let denom = ladder_coeff(k, col);
        let mut next = vec![C_ZERO; dm * dn];
        for r in 0..=m {
            for s in 0..=n {
                let x = cur[tensor_index(r, s)];
                if x == C_ZERO {
                    continue;
                }
                if r < m {
                    next[tensor_index(r + 1, s)] += x * ladder_coeff(m, r);
                }
                if s < n {
                    next[tensor_index(r, s + 1)] += x * ladder_coeff(n, s);
                }
            }
        }
        for x in next.iter_mut() {
            *x /= denom;
        }
        cur = next;
    }
    Some(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_su2(rng: &mut ChaCha8Rng) -> (Complex64, Complex64) {
        loop {
            let v: [f64; 4] = [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            let n2: f64 = v.iter().map(|x| x * x).sum();
            if n2 > 1e-6 && n2 <= 1.0 {
                let n = n2.sqrt();
                return (
                    Complex64::new(v[0] / n, v[1] / n),
                    Complex64::new(v[2] / n, v[3] / n),
                );
            }
        }
    }

    fn mul(
        (a1, b1): (Complex64, Complex64),
        (a2, b2): (Complex64, Complex64),
    ) -> (Complex64, Complex64) {
        // [[a1,b1],[-c(b1),c(a1)]] * [[a2,b2],[-c(b2),c(a2)]]
        (a1 * a2 - b1 * b2.conj(), a1 * b2 + b1 * a2.conj())
    }

    #[test]
    fn identity_and_unitarity() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..8u32 {
            let m = irrep_matrix(n, one, zero);
            assert!(m.sub(&CMat::identity(n as usize + 1)).max_abs() < 1e-13);
            for _ in 0..5 {
                let (a, b) = random_su2(&mut rng);
                let g = irrep_matrix(n, a, b);
                let gram = g.adjoint().matmul(&g);
                assert!(
                    gram.sub(&CMat::identity(n as usize + 1)).max_abs() < 1e-11,
                    "pi_{n} not unitary"
                );
            }
        }
    }

    #[test]
    fn multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1u32, 2, 3, 5, 8] {
            for _ in 0..5 {
                let g = random_su2(&mut rng);
                let h = random_su2(&mut rng);
                let gh = mul(g, h);
                let lhs = irrep_matrix(n, g.0, g.1).matmul(&irrep_matrix(n, h.0, h.1));
                let rhs = irrep_matrix(n, gh.0, gh.1);
                assert!(lhs.sub(&rhs).max_abs() < 1e-10, "pi_{n} not multiplicative");
            }
        }
    }

    #[test]
    fn torus_restriction_is_diagonal() {
        let theta = 0.7351f64;
        let a = Complex64::new(theta.cos(), theta.sin());
        let m = irrep_matrix(3, a, Complex64::new(0.0, 0.0));
        for j in 0..4i64 {
            let w = 3 - 2 * j;
            let expect = Complex64::new((w as f64 * theta).cos(), (w as f64 * theta).sin());
            assert!((m[(j as usize, j as usize)] - expect).norm() < 1e-13);
            for k in 0..4usize {
                if k as i64 != j {
                    assert!(m[(j as usize, k)].norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn fusion_rule() {
        assert!(fusion_allowed(1, 1, 0));
        assert!(fusion_allowed(1, 1, 2));
        assert!(!fusion_allowed(1, 1, 1));
        assert!(!fusion_allowed(1, 1, 4));
        assert!(fusion_allowed(2, 3, 1));
        assert!(!fusion_allowed(2, 3, 2));
    }

    #[test]
    fn antisymmetric_singlet() {
        // pi_1 ⊗ pi_1 -> pi_0: (b_0⊗b_1 - b_1⊗b_0)/sqrt(2) up to phase.
        let u = intertwiner(1, 1, 0).unwrap();
        assert_eq!((u.rows(), u.cols()), (4, 1));
        let col = u.column(0);
        let s = 1.0 / 2.0f64.sqrt();
        // entries in tensor order (0,0),(0,1),(1,0),(1,1)
        let expect = [0.0, s, -s, 0.0];
        // compare up to a global phase
        let phase = col[1] / Complex64::new(expect[1], 0.0);
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        for (got, want) in col.iter().zip(expect) {
            assert!((got - phase * Complex64::new(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn intertwiners_are_isometric_and_intertwine() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 0..=5u32 {
            for n in 0..=5u32 {
                for k in (m.abs_diff(n)..=(m + n)).step_by(2) {
                    let u = intertwiner(m, n, k).unwrap();
                    let gram = u.adjoint().matmul(&u);
                    assert!(
                        gram.sub(&CMat::identity(k as usize + 1)).max_abs() < 1e-10,
                        "({m},{n})->{k} not isometric"
                    );
                    let (a, b) = random_su2(&mut rng);
                    let big = irrep_matrix(m, a, b).kron(&irrep_matrix(n, a, b));
                    let lhs = big.matmul(&u);
                    let rhs = u.matmul(&irrep_matrix(k, a, b));
                    assert!(
                        lhs.sub(&rhs).max_abs() < 1e-9,
                        "({m},{n})->{k} fails intertwining"
                    );
                }
            }
        }
    }

    #[test]
    fn completeness_nine_dims() {
        // 3x3 = 1 + 3 + 5: the three intertwiner ranges fill H_2 ⊗ H_2.
        let mut total = CMat::zeros(9, 9);
        for k in [0u32, 2, 4] {
            let u = intertwiner(2, 2, k).unwrap();
            total = total.add(&u.matmul(&u.adjoint()));
        }
        assert!(total.sub(&CMat::identity(9)).max_abs() < 1e-11);
    }
}
