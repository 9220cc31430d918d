//! Dense linear algebra helpers shared by the chain-complex and
//! representation-space code. Generic over `f64` and `Complex64`.

use nalgebra::{ComplexField, DMatrix, DVector};

/// Relative threshold used for pivots and singular values.
pub const PIVOT_TOL: f64 = 1e-10;

/// Determinant by Gaussian elimination with full pivoting.
pub fn det<T: ComplexField<RealField = f64> + Copy>(m: &DMatrix<T>) -> T {
    assert_eq!(m.nrows(), m.ncols());
    let n = m.nrows();
    let mut a = m.clone();
    let mut d = T::one();
    for k in 0..n {
        let (mut pi, mut pj, mut best) = (k, k, 0.0);
        for i in k..n {
            for j in k..n {
                let v = a[(i, j)].modulus();
                if v > best {
                    (pi, pj, best) = (i, j, v);
                }
            }
        }
        if best == 0.0 {
            return T::zero();
        }
        if pi != k {
            a.swap_rows(pi, k);
            d = -d;
        }
        if pj != k {
            a.swap_columns(pj, k);
            d = -d;
        }
        let p = a[(k, k)];
        d *= p;
        for i in k + 1..n {
            let f = a[(i, k)] / p;
            if f == T::zero() {
                continue;
            }
            for j in k + 1..n {
                let v = a[(k, j)];
                a[(i, j)] -= f * v;
            }
        }
    }
    d
}

pub fn singular_values<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Numerical rank: singular values above `rel_tol × σ_max`.
pub fn rank<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&top) = s.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * top).count()
}

/// Orthonormal basis of the kernel, as columns. `rank` is supplied by the caller.
pub fn null_space(m: &DMatrix<f64>, rank: usize) -> DMatrix<f64> {
    let n = m.ncols();
    if m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    // pad so that the SVD returns a full set of right singular vectors
    let padded = if m.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].partial_cmp(&svd.singular_values[a]).unwrap());
    let cols: Vec<DVector<f64>> = order[rank..].iter().map(|&i| v_t.row(i).transpose()).collect();
    DMatrix::from_columns(&cols)
}

/// Orthonormal basis of the column space (first `rank` left singular vectors).
pub fn column_space(m: &DMatrix<f64>, rank: usize) -> DMatrix<f64> {
    if rank == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested left singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].partial_cmp(&svd.singular_values[a]).unwrap());
    let cols: Vec<DVector<f64>> = order[..rank].iter().map(|&i| u.column(i).into_owned()).collect();
    DMatrix::from_columns(&cols)
}

/// Greedy column selection: indices of columns forming a basis of the
/// column space, chosen by pivoted Gram–Schmidt (largest residual first).
pub fn independent_columns<T: ComplexField<RealField = f64> + Copy>(m: &DMatrix<T>, rel_tol: f64) -> Vec<usize> {
    let ncols = m.ncols();
    let scale = m.iter().map(|x| x.modulus()).fold(0.0, f64::max);
    if scale == 0.0 || m.nrows() == 0 {
        return Vec::new();
    }
    let mut residual: Vec<DVector<T>> = (0..ncols).map(|j| m.column(j).into_owned()).collect();
    let mut chosen = Vec::new();
    let mut remaining: Vec<usize> = (0..ncols).collect();
    loop {
        let Some((pos, norm)) = remaining
            .iter()
            .enumerate()
            .map(|(p, &j)| (p, residual[j].norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        else {
            break;
        };
        if norm <= rel_tol * scale * (m.nrows() as f64).sqrt() {
            break;
        }
        let j = remaining.remove(pos);
        let q = residual[j].unscale(norm);
        for &k in &remaining {
            let proj = q.dotc(&residual[k]);
            residual[k] -= q.scale(1.0) * proj;
        }
        chosen.push(j);
    }
    chosen.sort_unstable();
    chosen
}

/// Minimum-norm least-squares solution via SVD with relative cutoff.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>, rel_tol: f64) -> DVector<f64> {
    let svd = a.clone().svd(true, true);
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    svd.solve(b, rel_tol * top).expect("both factors computed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn det_matches_nalgebra() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.5, 1.0, 3.0, -2.0, 0.0, 4.0, 1.0]);
        assert!((det(&m) - m.determinant()).abs() < 1e-12);
        let z = DMatrix::from_fn(2, 2, |i, j| Complex64::new(i as f64 + 1.0, j as f64 - 1.0));
        assert!((det(&z) - z.determinant()).norm() < 1e-12);
    }

    #[test]
    fn det_of_singular_is_zero() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(det(&m).abs() < 1e-15);
    }

    #[test]
    fn kernel_and_rank() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0]);
        assert_eq!(rank(&m, 1e-10), 2);
        let k = null_space(&m, 2);
        assert_eq!(k.ncols(), 1);
        assert!((&m * &k).norm() < 1e-12);
    }

    #[test]
    fn column_selection_skips_dependent_columns() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 0.0, 1.0, 2.0, 1.0]);
        let cols = independent_columns(&m, 1e-10);
        assert_eq!(cols.len(), 2);
        assert!(cols.contains(&2));
    }
}
