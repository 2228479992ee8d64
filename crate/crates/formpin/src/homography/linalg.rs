//! Minimal dense linear algebra for the estimator: 3x3 matrix arithmetic,
//! Gaussian elimination, and a shifted inverse-iteration eigensolver for
//! the 9x9 normal matrix. Small fixed sizes keep this self-contained and
//! easy to cross-check.

pub(crate) type Mat3 = [[f64; 3]; 3];

pub(crate) fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    out
}

pub(crate) fn mat3_det(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Inverse via the adjugate; `None` when the determinant vanishes.
pub(crate) fn mat3_inv(m: &Mat3) -> Option<Mat3> {
    let det = mat3_det(m);
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let adj = [
        [
            m[1][1] * m[2][2] - m[1][2] * m[2][1],
            m[0][2] * m[2][1] - m[0][1] * m[2][2],
            m[0][1] * m[1][2] - m[0][2] * m[1][1],
        ],
        [
            m[1][2] * m[2][0] - m[1][0] * m[2][2],
            m[0][0] * m[2][2] - m[0][2] * m[2][0],
            m[0][2] * m[1][0] - m[0][0] * m[1][2],
        ],
        [
            m[1][0] * m[2][1] - m[1][1] * m[2][0],
            m[0][1] * m[2][0] - m[0][0] * m[2][1],
            m[0][0] * m[1][1] - m[0][1] * m[1][0],
        ],
    ];
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = adj[i][j] / det;
        }
    }
    Some(out)
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub(crate) fn solve_linear<const N: usize>(
    mut a: [[f64; N]; N],
    mut b: [f64; N],
) -> Option<[f64; N]> {
    for col in 0..N {
        let mut pivot = col;
        for row in col + 1..N {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..N {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..N {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0; N];
    for col in (0..N).rev() {
        let mut sum = b[col];
        for k in col + 1..N {
            sum -= a[col][k] * x[k];
        }
        x[col] = sum / a[col][col];
        if !x[col].is_finite() {
            return None;
        }
    }
    Some(x)
}

fn norm9(v: &[f64; 9]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn sym_apply9(m: &[[f64; 9]; 9], v: &[f64; 9]) -> [f64; 9] {
    let mut out = [0.0; 9];
    for (i, row) in m.iter().enumerate() {
        out[i] = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
    }
    out
}

fn rayleigh9(m: &[[f64; 9]; 9], v: &[f64; 9]) -> f64 {
    let mv = sym_apply9(m, v);
    v.iter().zip(mv.iter()).map(|(a, b)| a * b).sum()
}

/// Dot product with Dekker/Neumaier error compensation; near-exact even
/// under heavy cancellation.
fn dot9_compensated(a: &[f64; 9], b: &[f64; 9]) -> f64 {
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for k in 0..9 {
        let p = a[k] * b[k];
        let pe = a[k].mul_add(b[k], -p);
        let t = s + p;
        let se = if s.abs() >= p.abs() {
            (s - t) + p
        } else {
            (p - t) + s
        };
        s = t;
        c += se + pe;
    }
    s + c
}

/// Least-squares refinement of an approximate null vector of the stacked
/// constraint rows (whose normal matrix is `m`).
///
/// Forming the normal matrix squares the conditioning, so an eigenvector
/// of the stored matrix can sit ~eps*cond^2 away from the true null
/// direction. Driving the correction by the actual row residuals, with
/// compensated dot products to survive the cancellation in r = A*v, pulls
/// the error back to ~eps*cond.
pub(crate) fn refine_null_vector(
    m: &[[f64; 9]; 9],
    rows: &[[f64; 9]],
    v0: [f64; 9],
) -> [f64; 9] {
    let trace: f64 = (0..9).map(|i| m[i][i]).sum();
    let shift = 1e-12 * trace.abs().max(1.0);
    let mut a = *m;
    for i in 0..9 {
        a[i][i] += shift;
    }
    let mut v = v0;
    for _ in 0..2 {
        // g = A^T (A v); the residuals are tiny, so the outer accumulation
        // needs no compensation.
        let mut g = [0.0f64; 9];
        for row in rows {
            let r = dot9_compensated(row, &v);
            for i in 0..9 {
                g[i] += row[i] * r;
            }
        }
        let Some(delta) = solve_linear(a, g) else { break };
        let mut w = [0.0f64; 9];
        for i in 0..9 {
            w[i] = v[i] - delta[i];
        }
        let n = norm9(&w);
        if n < 1e-300 || !n.is_finite() {
            break;
        }
        v = w.map(|x| x / n);
    }
    v
}

/// Smallest eigenpair of a symmetric positive semi-definite 9x9 matrix via
/// shifted inverse iteration.
///
/// A tiny diagonal shift (1e-12 of the matrix scale) keeps the solve well
/// posed when the matrix is exactly singular, which is the common case
/// here: the normal matrix of exact correspondences has a true null
/// vector. Iteration is capped at 200 rounds with a 1e-12 direction
/// tolerance; the last iterate is returned if the cap is hit. Everything
/// is deterministic: fixed start vector, no randomness.
pub(crate) fn smallest_eigenpair(m: &[[f64; 9]; 9]) -> Option<([f64; 9], f64)> {
    let trace: f64 = (0..9).map(|i| m[i][i]).sum();
    let scale = trace.abs().max(1.0);
    let shift = 1e-12 * scale;
    let mut a = *m;
    for i in 0..9 {
        a[i][i] += shift;
    }
    let mut v = [1.0 / 3.0; 9];
    for _ in 0..200 {
        let w = solve_linear(a, v)?;
        let n = norm9(&w);
        if n < 1e-300 || !n.is_finite() {
            return None;
        }
        let w = w.map(|x| x / n);
        let mut diff = 0.0f64;
        let mut sum = 0.0f64;
        for i in 0..9 {
            diff += (w[i] - v[i]) * (w[i] - v[i]);
            sum += (w[i] + v[i]) * (w[i] + v[i]);
        }
        v = w;
        // The eigenvector direction is converged when the iterate is fixed
        // up to sign.
        if diff.sqrt().min(sum.sqrt()) < 1e-12 {
            break;
        }
    }
    // Rayleigh-shift polish: with the fixed shift the iterates jitter at a
    // floor set by the solve's conditioning; re-solving with the shift at
    // the current eigenvalue estimate collapses that jitter.
    for _ in 0..2 {
        let rho = rayleigh9(m, &v);
        let mut b = *m;
        for i in 0..9 {
            b[i][i] -= rho;
        }
        let Some(w) = solve_linear(b, v) else { break };
        let n = norm9(&w);
        if n < 1e-300 || !n.is_finite() {
            break;
        }
        v = w.map(|x| x / n);
    }
    Some((v, rayleigh9(m, &v)))
}

/// Smallest eigenvalue of `m` restricted to the complement of `excluded`:
/// deflates by pushing `excluded`'s eigenvalue above the spectrum, then
/// reruns inverse iteration. Used to detect rank deficiency beyond the
/// expected one-dimensional null space.
pub(crate) fn second_smallest_eigenvalue(m: &[[f64; 9]; 9], excluded: &[f64; 9]) -> Option<f64> {
    let trace: f64 = (0..9).map(|i| m[i][i]).sum();
    // For a PSD matrix every eigenvalue is at most the trace, so this
    // shift moves the excluded direction strictly above the rest.
    let bump = 2.0 * trace.abs().max(1.0);
    let mut deflated = *m;
    for i in 0..9 {
        for j in 0..9 {
            deflated[i][j] += bump * excluded[i] * excluded[j];
        }
    }
    let (v, _) = smallest_eigenpair(&deflated)?;
    Some(rayleigh9(m, &v))
}
