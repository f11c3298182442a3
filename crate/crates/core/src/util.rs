//! Small dense linear algebra and 3-vector helpers shared across modules.

use crate::Real;

pub type V3<R> = [R; 3];

#[inline]
pub fn v3_zero<R: Real>() -> V3<R> {
    [R::zero(); 3]
}

#[inline]
pub fn dot<R: Real>(a: &V3<R>, b: &V3<R>) -> R {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm<R: Real>(a: &V3<R>) -> R {
    dot(a, a).sqrt()
}

#[inline]
pub fn sub<R: Real>(a: &V3<R>, b: &V3<R>) -> V3<R> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale<R: Real>(a: &V3<R>, s: R) -> V3<R> {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn axpy<R: Real>(y: &V3<R>, a: R, x: &V3<R>) -> V3<R> {
    [y[0] + a * x[0], y[1] + a * x[1], y[2] + a * x[2]]
}

#[inline]
pub fn cross<R: Real>(a: &V3<R>, b: &V3<R>) -> V3<R> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn normalize<R: Real>(a: &V3<R>) -> V3<R> {
    let n = norm(a);
    scale(a, R::one() / n)
}

/// Rotation matrix (row-major 3x3) taking `from` to `to`, both unit vectors.
/// Rotates in the plane spanned by the two vectors, fixing its complement.
pub fn rotation_between<R: Real>(from: &V3<R>, to: &V3<R>) -> [[R; 3]; 3] {
    let c = dot(from, to);
    let axis = cross(from, to);
    let s2 = dot(&axis, &axis);
    let mut m = [[R::zero(); 3]; 3];
    if s2 <= R::of(1e-30) {
        // parallel or antiparallel
        if c > R::zero() {
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = R::one();
            }
        } else {
            // 180-degree turn about any axis orthogonal to `from`
            let mut u = if from[0].abs() < R::of(0.9) {
                [R::one(), R::zero(), R::zero()]
            } else {
                [R::zero(), R::one(), R::zero()]
            };
            u = normalize(&axpy(&u, -dot(&u, from), from));
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] = R::of(2.0) * u[i] * u[j] - if i == j { R::one() } else { R::zero() };
                }
            }
        }
        return m;
    }
    // Rodrigues with unnormalized axis: R = c I + [axis]_x + axis axis^T (1-c)/s^2
    let k = (R::one() - c) / s2;
    let ax = axis;
    m[0][0] = c + ax[0] * ax[0] * k;
    m[0][1] = ax[0] * ax[1] * k - ax[2];
    m[0][2] = ax[0] * ax[2] * k + ax[1];
    m[1][0] = ax[1] * ax[0] * k + ax[2];
    m[1][1] = c + ax[1] * ax[1] * k;
    m[1][2] = ax[1] * ax[2] * k - ax[0];
    m[2][0] = ax[2] * ax[0] * k - ax[1];
    m[2][1] = ax[2] * ax[1] * k + ax[0];
    m[2][2] = c + ax[2] * ax[2] * k;
    m
}

#[inline]
pub fn mat_apply<R: Real>(m: &[[R; 3]; 3], v: &V3<R>) -> V3<R> {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

/// Transpose application (inverse for rotations).
#[inline]
pub fn mat_apply_t<R: Real>(m: &[[R; 3]; 3], v: &V3<R>) -> V3<R> {
    [
        m[0][0] * v[0] + m[1][0] * v[1] + m[2][0] * v[2],
        m[0][1] * v[0] + m[1][1] * v[1] + m[2][1] * v[2],
        m[0][2] * v[0] + m[1][2] * v[1] + m[2][2] * v[2],
    ]
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
/// Intended for the small dense systems of the Newton fallback path.
pub fn solve_dense<R: Real>(a: &[Vec<R>], b: &[R]) -> Option<Vec<R>> {
    let n = b.len();
    let mut m: Vec<Vec<R>> = a.iter().cloned().collect();
    let mut x: Vec<R> = b.to_vec();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r][col].abs() > m[piv][col].abs() {
                piv = r;
            }
        }
        if m[piv][col].abs() < R::of(1e-300) {
            return None;
        }
        m.swap(col, piv);
        x.swap(col, piv);
        let d = m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / d;
            if f == R::zero() {
                continue;
            }
            for c in col..n {
                let v = m[col][c];
                m[r][c] = m[r][c] - f * v;
            }
            let xv = x[col];
            x[r] = x[r] - f * xv;
        }
    }
    for col in (0..n).rev() {
        let mut s = x[col];
        for c in col + 1..n {
            s = s - m[col][c] * x[c];
        }
        x[col] = s / m[col][col];
    }
    Some(x)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn sym_eigenvalues<R: Real>(mat: &[Vec<R>]) -> Vec<R> {
    let n = mat.len();
    let mut a: Vec<Vec<R>> = mat.to_vec();
    let eps = R::of(1e-14);
    for _sweep in 0..100 {
        let mut off = R::zero();
        for i in 0..n {
            for j in i + 1..n {
                off = off + a[i][j] * a[i][j];
            }
        }
        let scale: R = (0..n).map(|i| a[i][i] * a[i][i]).sum::<R>() + off;
        if off <= eps * eps * (scale + R::of(1e-300)) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= R::of(1e-300) {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (R::of(2.0) * a[p][q]);
                let t = {
                    let s = if theta >= R::zero() { R::one() } else { -R::one() };
                    s / (theta.abs() + (theta * theta + R::one()).sqrt())
                };
                let c = R::one() / (t * t + R::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<R> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Eigen-decomposition of a symmetric tridiagonal matrix by implicit QL with
/// shifts, tracking one row of the eigenvector matrix (Golub-Welsch usage).
///
/// `diag` and `off` (length n, off[0] unused) are destroyed. Returns
/// `(eigenvalues, first_row)` where `first_row[i]` is the first component of
/// the i-th normalized eigenvector.
pub fn tridiag_ql<R: Real>(diag: &mut [R], off: &mut [R], first_row: &mut [R]) -> bool {
    let n = diag.len();
    if n == 0 {
        return true;
    }
    // shift off-diagonals down: e[i] couples i and i+1
    for i in 1..n {
        off[i - 1] = off[i];
    }
    off[n - 1] = R::zero();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= R::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return false;
            }
            let mut g = (diag[l + 1] - diag[l]) / (R::of(2.0) * off[l]);
            let mut r = (g * g + R::one()).sqrt();
            let sgn = if g >= R::zero() { r } else { -r };
            g = diag[m] - diag[l] + off[l] / (g + sgn);
            let (mut s, mut c) = (R::one(), R::one());
            let mut p = R::zero();
            for i in (l..m).rev() {
                let mut f = s * off[i];
                let b = c * off[i];
                r = (f * f + g * g).sqrt();
                off[i + 1] = r;
                if r == R::zero() {
                    diag[i + 1] = diag[i + 1] - p;
                    off[m] = R::zero();
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + R::of(2.0) * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                // rotate the tracked row
                f = first_row[i + 1];
                first_row[i + 1] = s * first_row[i] + c * f;
                first_row[i] = c * first_row[i] - s * f;
            }
            if r == R::zero() && m > l + 1 {
                continue;
            }
            diag[l] = diag[l] - p;
            off[l] = g;
            off[m] = R::zero();
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_solve_roundtrip() {
        let a: Vec<Vec<f64>> = vec![
            vec![4.0, 1.0, 0.0],
            vec![1.0, 3.0, -1.0],
            vec![0.0, -1.0, 2.0],
        ];
        let x_true = [1.0, -2.0, 0.5];
        let b: Vec<f64> = (0..3)
            .map(|i| (0..3).map(|j| a[i][j] * x_true[j]).sum())
            .collect();
        let x = solve_dense(&a, &b).unwrap();
        for i in 0..3 {
            assert!((x[i] - x_true[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobi_eigenvalues_2x2() {
        let a: Vec<Vec<f64>> = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let ev = sym_eigenvalues(&a);
        assert!((ev[0] - 1.0).abs() < 1e-12);
        assert!((ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_maps_pole() {
        let e3 = [0.0f64, 0.0, 1.0];
        let t = normalize(&[0.3, -0.5, 0.8]);
        let m = rotation_between(&e3, &t);
        let r = mat_apply(&m, &e3);
        for i in 0..3 {
            assert!((r[i] - t[i]).abs() < 1e-14);
        }
        // transpose inverts
        let back = mat_apply_t(&m, &r);
        for i in 0..3 {
            assert!((back[i] - e3[i]).abs() < 1e-14);
        }
    }
}
