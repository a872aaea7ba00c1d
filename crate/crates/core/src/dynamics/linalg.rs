//! Small dense complex linear algebra for 4×4 density matrices.
//!
//! Both routines are Jacobi methods. They only rotate pairs with a non-zero
//! coupling, so exact zeros (the block structure of X-states) survive.

use num_complex::Complex64;

pub(crate) type Matrix4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const MAX_SWEEPS: usize = 60;

pub(crate) fn identity() -> Matrix4 {
    let mut m = [[ZERO; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

#[cfg(test)]
pub(crate) fn adjoint(m: &Matrix4) -> Matrix4 {
    let mut out = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = m[j][i].conj();
        }
    }
    out
}

/// Eigenvalues (ascending) and eigenvectors (columns of the returned
/// matrix) of a Hermitian matrix. Only the upper triangle's magnitude and the
/// diagonal's real part are trusted; the input is symmetrised first.
pub(crate) fn hermitian_eigen(m: &Matrix4) -> ([f64; 4], Matrix4) {
    let mut a = *m;
    for i in 0..4 {
        a[i][i] = Complex64::new(a[i][i].re, 0.0);
        for j in (i + 1)..4 {
            let avg = 0.5 * (a[i][j] + a[j][i].conj());
            a[i][j] = avg;
            a[j][i] = avg.conj();
        }
    }
    let mut v = identity();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a[p][q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[p][p].re, a[q][q].re);
                if mag <= 1e-18 * (app.abs() * aqq.abs()).sqrt() || mag < f64::MIN_POSITIVE {
                    a[p][q] = ZERO;
                    a[q][p] = ZERO;
                    continue;
                }
                rotated = true;
                // phase so the pivot becomes real, then a real Jacobi rotation
                let phase = apq / mag;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns p, q of U
                let u_pp = Complex64::new(c, 0.0);
                let u_qp = -s * phase.conj();
                let u_pq = s * phase;
                let u_qq = Complex64::new(c, 0.0);
                // A ← A U (columns p, q)
                for row in a.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = xp * u_pp + xq * u_qp;
                    row[q] = xp * u_pq + xq * u_qq;
                }
                // A ← U† A (rows p, q)
                for col in 0..4 {
                    let (xp, xq) = (a[p][col], a[q][col]);
                    a[p][col] = u_pp.conj() * xp + u_qp.conj() * xq;
                    a[q][col] = u_pq.conj() * xp + u_qq.conj() * xq;
                }
                a[p][q] = ZERO;
                a[q][p] = ZERO;
                a[p][p] = Complex64::new(a[p][p].re, 0.0);
                a[q][q] = Complex64::new(a[q][q].re, 0.0);
                for row in v.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = xp * u_pp + xq * u_qp;
                    row[q] = xp * u_pq + xq * u_qq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[i][i].re.total_cmp(&a[j][j].re));
    let values = order.map(|k| a[k][k].re);
    let mut vectors = [[ZERO; 4]; 4];
    for (new, &old) in order.iter().enumerate() {
        for r in 0..4 {
            vectors[r][new] = v[r][old];
        }
    }
    (values, vectors)
}

/// Singular values (descending) by one-sided Jacobi. Each value is a column
/// norm of the orthogonalised matrix, so small ones keep absolute accuracy
/// near machine precision instead of the square root of it.
pub(crate) fn singular_values(m: &Matrix4) -> [f64; 4] {
    let mut a = *m;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..4 {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for row in a.iter() {
                    alpha += row[p].norm_sqr();
                    beta += row[q].norm_sqr();
                    gamma += row[p].conj() * row[q];
                }
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-16 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = c * xp - s * phase.conj() * xq;
                    row[q] = s * phase * xp + c * xq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv = [0.0; 4];
    for (k, s) in sv.iter_mut().enumerate() {
        *s = a.iter().map(|row| row[k].norm_sqr()).sum::<f64>().sqrt();
    }
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}
