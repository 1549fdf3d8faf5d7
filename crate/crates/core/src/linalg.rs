//! Dense complex linear algebra helpers shared by the algebra layer.
//!
//! Every rank decision goes through [`rank_threshold`]: a direction counts
//! as zero when its residual after pivoted orthogonalization is at most
//! `epsilon * max(1, s)`, with `s` the largest column norm.
//!
//! Decompositions are done here rather than through the nalgebra complex
//! SVD and Hermitian eigensolver, which can lose digits or fail to converge
//! on the rank-deficient, clustered matrices this crate produces.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C = Complex64;
pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: C = C::new(0.0, 0.0);
pub const ONE: C = C::new(1.0, 0.0);

pub fn rank_threshold(epsilon: f64, sigma_max: f64) -> f64 {
    epsilon * sigma_max.max(1.0)
}

/// Column-pivoted Gram-Schmidt with reorthogonalization, extending the
/// orthonormal columns of `start` by directions from `m`.
///
/// A residual column is dropped once its norm is at most `threshold`.
fn extend_orthonormal(start: CMatrix, m: &CMatrix, threshold: f64) -> CMatrix {
    let mut basis: Vec<nalgebra::DVector<C>> = start.column_iter().map(|c| c.into_owned()).collect();
    let mut rest: Vec<nalgebra::DVector<C>> = m.column_iter().map(|c| c.into_owned()).collect();
    let project_out = |v: &mut nalgebra::DVector<C>, q: &nalgebra::DVector<C>| -> f64 {
        let coeff = q.dotc(v);
        v.axpy(-coeff, q, ONE);
        coeff.norm_sqr()
    };
    for v in rest.iter_mut() {
        for _ in 0..2 {
            for q in &basis {
                project_out(v, q);
            }
        }
    }
    // squared norms are downdated after each projection and recomputed once
    // cancellation has eaten most of the last exact value
    let mut norms: Vec<(f64, f64)> = rest.iter().map(|v| (v.norm_squared(), v.norm_squared())).collect();
    while !rest.is_empty() {
        for (v, (current, exact)) in rest.iter().zip(norms.iter_mut()) {
            if *current <= 1e-2 * *exact {
                *current = v.norm_squared();
                *exact = *current;
            }
        }
        let (k, norm) = norms
            .iter()
            .enumerate()
            .map(|(k, &(n, _))| (k, n.max(0.0).sqrt()))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if norm <= threshold {
            break;
        }
        let mut q = rest.swap_remove(k);
        norms.swap_remove(k);
        // second pass against the accepted basis guards against cancellation
        for b in &basis {
            project_out(&mut q, b);
        }
        let n = q.norm();
        if n <= threshold {
            continue;
        }
        q.unscale_mut(n);
        // one pass suffices here: a column is cleaned again when it is picked
        for (v, (current, _)) in rest.iter_mut().zip(norms.iter_mut()) {
            *current -= project_out(v, &q);
        }
        basis.push(q);
    }
    if basis.is_empty() {
        return CMatrix::zeros(m.nrows(), 0);
    }
    CMatrix::from_columns(&basis)
}

fn max_column_norm(m: &CMatrix) -> f64 {
    m.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn column_space(m: &CMatrix, epsilon: f64) -> CMatrix {
    if m.ncols() == 0 || m.nrows() == 0 {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let thr = rank_threshold(epsilon, max_column_norm(m));
    extend_orthonormal(CMatrix::zeros(m.nrows(), 0), m, thr)
}

/// Orthonormal basis (as columns) of the kernel of `m`.
pub fn nullspace(m: &CMatrix, epsilon: f64) -> CMatrix {
    let n = m.ncols();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMatrix::identity(n, n);
    }
    // the kernel is the orthogonal complement of the row space
    let rows = column_space(&m.adjoint(), epsilon);
    let r = rows.ncols();
    let full = extend_orthonormal(rows, &CMatrix::identity(n, n), 0.5 / (n as f64).sqrt());
    full.columns(r, full.ncols() - r).into_owned()
}

pub fn rank(m: &CMatrix, epsilon: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    column_space(m, epsilon).ncols()
}

/// One-sided Jacobi SVD of a matrix with at least as many rows as columns:
/// returns `(A V, V)` where the columns of `A V` are mutually orthogonal,
/// their norms being the singular values.
fn one_sided_jacobi(m: &CMatrix) -> (CMatrix, CMatrix) {
    let n = m.ncols();
    let mut a = m.clone();
    let mut v = CMatrix::identity(n, n);
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let j = rotation(alpha, beta, gamma);
                rotate_columns(&mut a, p, q, j);
                rotate_columns(&mut v, p, q, j);
            }
        }
        if !rotated {
            break;
        }
    }
    (a, v)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let tall = if m.nrows() >= m.ncols() { m.clone() } else { m.adjoint() };
    let (a, _) = one_sided_jacobi(&tall);
    let mut sv: Vec<f64> = a.column_iter().map(|c| c.norm()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Largest and smallest singular value of a square matrix.
pub fn singular_extremes(m: &CMatrix) -> (f64, f64) {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) => (hi, lo),
        _ => (0.0, 0.0),
    }
}

/// Unitary factor of the polar decomposition of a square matrix.
///
/// Invertible input goes through the scaled Newton iteration
/// `X <- (g X + X^-* / g) / 2`; singular input through a Jacobi SVD with the
/// left singular vectors completed to a basis.
pub fn polar_unitary(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let mut x = m.clone();
    for _ in 0..100 {
        let Some(inv) = x.clone().try_inverse() else {
            return polar_by_svd(m);
        };
        let inv_adj = inv.adjoint();
        let g = ((inv.norm() / x.norm()).sqrt()).clamp(1e-8, 1e8);
        let next = (x.scale(g) + inv_adj.unscale(g)).scale(0.5);
        let delta = (&next - &x).norm();
        x = next;
        if delta <= 1e-15 * (n as f64).sqrt() {
            break;
        }
    }
    x
}

fn polar_by_svd(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let (a, v) = one_sided_jacobi(m);
    let scale = a
        .column_iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let kept: Vec<usize> = (0..n).filter(|&k| a.column(k).norm() > 1e-12 * scale).collect();
    let dropped: Vec<usize> = (0..n).filter(|k| !kept.contains(k)).collect();
    let mut u_kept = a.select_columns(kept.iter());
    for mut c in u_kept.column_iter_mut() {
        let norm = c.norm();
        c.unscale_mut(norm);
    }
    let u = extend_orthonormal(u_kept, &CMatrix::identity(n, n), 0.5 / (n as f64).sqrt());
    let order: Vec<usize> = kept.iter().chain(&dropped).copied().collect();
    u * v.select_columns(order.iter()).adjoint()
}

/// Eigen-decomposition of the Hermitian part of `m`; eigenvalues ascending.
///
/// Cyclic Jacobi rotations; accurate on clustered spectra.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let mut a = (m + m.adjoint()).scale(0.5);
    let mut v = CMatrix::identity(n, n);
    let scale = a.norm();
    for _ in 0..JACOBI_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = v.select_columns(order.iter());
    (values, vectors)
}

const JACOBI_SWEEPS: usize = 60;

/// Entries `(j_pp, j_pq, j_qp, j_qq)` of the unitary that diagonalizes the
/// Hermitian matrix `[[alpha, gamma], [conj(gamma), beta]]`: a phase makes
/// `gamma` real, then a real rotation annihilates it.
fn rotation(alpha: f64, beta: f64, gamma: C) -> (C, C, C, C) {
    let r = gamma.norm();
    let phase = gamma / r;
    let theta = (beta - alpha) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    (C::new(c, 0.0), C::new(s, 0.0), phase.conj() * -s, phase.conj() * c)
}

fn rotate_columns(m: &mut CMatrix, p: usize, q: usize, (jpp, jpq, jqp, jqq): (C, C, C, C)) {
    for k in 0..m.nrows() {
        let (xp, xq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = xp * jpp + xq * jqp;
        m[(k, q)] = xp * jpq + xq * jqq;
    }
}

/// Applies the unitary `J` with `(J* a J)_pq = 0` and accumulates `v J`.
fn jacobi_rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq.norm() == 0.0 {
        return;
    }
    let j = rotation(a[(p, p)].re, a[(q, q)].re, apq);
    let (jpp, jpq, jqp, jqq) = j;
    rotate_columns(a, p, q, j);
    for k in 0..a.ncols() {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C::new(a[(q, q)].re, 0.0);
    rotate_columns(v, p, q, j);
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> C {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C::new(re, im)
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(n, n, |_, _| random_complex(rng));
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `exp(2 pi i * num / den)`.
pub fn root_of_unity(num: i64, den: i64) -> C {
    let k = num.rem_euclid(den);
    // exact values at the quarter turns keep sign patterns clean
    if 4 * k % den == 0 {
        return match 4 * k / den {
            0 => ONE,
            1 => C::new(0.0, 1.0),
            2 => C::new(-1.0, 0.0),
            _ => C::new(0.0, -1.0),
        };
    }
    let theta = 2.0 * std::f64::consts::PI * k as f64 / den as f64;
    C::new(theta.cos(), theta.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn nullspace_of_wide_matrix() {
        let m = CMatrix::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let n = nullspace(&m, 1e-9);
        assert_eq!(n.ncols(), 2);
        assert!((&m * &n).norm() < 1e-12);
        assert!((n.adjoint() * &n - CMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn column_space_drops_dependent_columns() {
        let m = CMatrix::from_row_slice(2, 3, &[ONE, ONE, ZERO, ZERO, ZERO, ZERO]);
        assert_eq!(column_space(&m, 1e-9).ncols(), 1);
        assert_eq!(rank(&m, 1e-9), 1);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let u = haar_unitary(5, &mut rng);
        assert!((u.adjoint() * &u - CMatrix::identity(5, 5)).norm() < 1e-12);
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(root_of_unity(1, 4), C::new(0.0, 1.0));
        assert_eq!(root_of_unity(1, 2), C::new(-1.0, 0.0));
        assert!((root_of_unity(1, 3) - C::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    }

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> CMatrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        CMatrix::from_fn(rows, cols, |_, _| random_complex(&mut rng))
    }

    #[test]
    fn column_space_survives_tiny_noise() {
        // one unit column plus columns at the 1e-16 level
        let mut m = CMatrix::zeros(16, 6);
        m[(5, 2)] = ONE;
        m[(4, 0)] = C::new(1.3e-17, 1.7e-16);
        m[(9, 2)] = C::new(-3.3e-16, -1.1e-16);
        m[(6, 4)] = C::new(-3.3e-16, 1.1e-16);
        let q = column_space(&m, 1e-9);
        assert_eq!(q.ncols(), 1);
        assert!((&m - &q * (q.adjoint() * &m)).norm() < 1e-14);
    }

    #[test]
    fn hermitian_eigen_with_repeated_eigenvalues() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let u = haar_unitary(8, &mut rng);
        let d: Vec<C> = (0..8)
            .map(|k| C::new(if k < 4 { 1.066 } else { -0.138 }, 0.0))
            .collect();
        let h = &u * CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d)) * u.adjoint();
        let (values, vectors) = hermitian_eigen(&h);
        let lambda = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            8,
            values.iter().map(|&l| C::new(l, 0.0)),
        ));
        assert!((&h * &vectors - &vectors * lambda).norm() < 1e-12);
        assert!((vectors.adjoint() * &vectors - CMatrix::identity(8, 8)).norm() < 1e-12);
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn singular_values_match_a_known_spectrum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let (u, v) = (haar_unitary(5, &mut rng), haar_unitary(5, &mut rng));
        let sigma = [3.0, 2.0, 1.0, 1e-9, 0.0];
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            5,
            sigma.iter().map(|&x| C::new(x, 0.0)),
        ));
        let m = &u * d * v.adjoint();
        let sv = singular_values(&m);
        for (got, want) in sv.iter().zip(sigma) {
            assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        }
        assert_eq!(singular_values(&m.columns(0, 3).into_owned()).len(), 3);
        assert_eq!(rank(&m, 1e-6), 3);
    }

    #[test]
    fn polar_factor_is_unitary() {
        let m = random_matrix(4, 4, 4);
        let u = polar_unitary(&m);
        assert!((u.adjoint() * &u - CMatrix::identity(4, 4)).norm() < 1e-12);
        // u* m is the positive factor
        let p = u.adjoint() * &m;
        assert!((&p - p.adjoint()).norm() < 1e-10);
        let mut singular = m.clone();
        singular.set_column(3, &m.column(0).clone_owned());
        let w = polar_unitary(&singular);
        assert!((w.adjoint() * &w - CMatrix::identity(4, 4)).norm() < 1e-12);
        let p = w.adjoint() * &singular;
        assert!((&p - p.adjoint()).norm() < 1e-10);
    }
}
