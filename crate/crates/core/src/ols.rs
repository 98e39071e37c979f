//! Linear least squares via Householder QR with column pivoting.
//!
//! Full-rank problems are solved by back substitution on `R`. When the numerical
//! rank is lower than the column count, the leading `r x n` block of `R` is
//! factored once more (a complete orthogonal decomposition) to return the
//! minimum-norm minimiser.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::DesignMatrix;

/// Diagonal entries of `R` below this fraction of the largest are treated as zero.
pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LsqSolution {
    pub coefficients: Vec<f64>,
    #[serde(default, skip_serializing)]
    pub residuals: Vec<f64>,
    pub rank: usize,
    pub column_names: Vec<String>,
}

impl LsqSolution {
    pub fn sse(&self) -> f64 {
        self.residuals.iter().map(|r| r * r).sum()
    }
}

/// Column-major dense matrix.
#[derive(Debug, Clone)]
struct ColMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl ColMatrix {
    fn from_row_major(rows: usize, cols: usize, x: &[f64]) -> Self {
        let mut data = vec![0.0; rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                data[j * rows + i] = x[i * cols + j];
            }
        }
        ColMatrix { rows, cols, data }
    }

    fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(a * self.rows + i, b * self.rows + i);
        }
    }
}

/// A Householder reflector `I - tau v v^T` acting on rows `k..`; `v[0] = 1`.
struct Reflector {
    k: usize,
    v: Vec<f64>,
    tau: f64,
}

impl Reflector {
    /// Builds the reflector that maps `x` onto `beta e_1`; returns it with `beta`.
    fn new(k: usize, x: &[f64]) -> (Self, f64) {
        let alpha = x[0];
        let tail_sq: f64 = x[1..].iter().map(|v| v * v).sum();
        if tail_sq == 0.0 {
            let v = {
                let mut v = vec![0.0; x.len()];
                v[0] = 1.0;
                v
            };
            return (Reflector { k, v, tau: 0.0 }, alpha);
        }
        let norm = (alpha * alpha + tail_sq).sqrt();
        let beta = if alpha >= 0.0 { -norm } else { norm };
        let scale = 1.0 / (alpha - beta);
        let mut v = Vec::with_capacity(x.len());
        v.push(1.0);
        v.extend(x[1..].iter().map(|e| e * scale));
        let tau = (beta - alpha) / beta;
        (Reflector { k, v, tau }, beta)
    }

    fn apply(&self, y: &mut [f64]) {
        if self.tau == 0.0 {
            return;
        }
        let seg = &mut y[self.k..self.k + self.v.len()];
        let dot: f64 = self.v.iter().zip(seg.iter()).map(|(a, b)| a * b).sum();
        let f = self.tau * dot;
        for (s, v) in seg.iter_mut().zip(&self.v) {
            *s -= f * v;
        }
    }
}

struct PivotedQr {
    r: ColMatrix,
    reflectors: Vec<Reflector>,
    /// `perm[j]` is the original column now in position `j`.
    perm: Vec<usize>,
    rank: usize,
}

fn pivoted_qr(mut a: ColMatrix) -> PivotedQr {
    let (m, n) = (a.rows, a.cols);
    let steps = m.min(n);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut norms: Vec<f64> = (0..n)
        .map(|j| a.col(j).iter().map(|v| v * v).sum::<f64>())
        .collect();
    let mut exact_norms = norms.clone();
    let mut reflectors = Vec::with_capacity(steps);

    for k in 0..steps {
        let p = (k..n)
            .max_by(|&i, &j| norms[i].total_cmp(&norms[j]))
            .expect("non-empty range");
        a.swap_cols(k, p);
        perm.swap(k, p);
        norms.swap(k, p);
        exact_norms.swap(k, p);

        let (refl, beta) = Reflector::new(k, &a.col(k)[k..]);
        {
            let col = a.col_mut(k);
            col[k] = beta;
            for v in &mut col[k + 1..] {
                *v = 0.0;
            }
        }
        for j in k + 1..n {
            refl.apply(a.col_mut(j));
            // downdate the trailing norm; recompute when cancellation sets in
            let rkj = a.get(k, j);
            let updated = norms[j] - rkj * rkj;
            if updated <= 1e-8 * exact_norms[j] {
                let fresh: f64 = a.col(j)[k + 1..].iter().map(|v| v * v).sum();
                norms[j] = fresh;
                exact_norms[j] = fresh;
            } else {
                norms[j] = updated;
            }
        }
        reflectors.push(refl);
    }

    let largest = if steps > 0 { a.get(0, 0).abs() } else { 0.0 };
    let rank = (0..steps)
        .take_while(|&k| largest > 0.0 && a.get(k, k).abs() > RANK_TOLERANCE * largest)
        .count();
    PivotedQr {
        r: a,
        reflectors,
        perm,
        rank,
    }
}

/// Least-squares fit of `y ≈ X beta` on a design matrix.
pub fn solve_lsq(design: &DesignMatrix) -> Result<LsqSolution> {
    let (coefficients, rank) =
        lstsq_with_rank(design.n_rows(), design.n_cols(), &design.x, &design.targets)?;
    let residuals = residuals(design, &coefficients);
    Ok(LsqSolution {
        coefficients,
        residuals,
        rank,
        column_names: design.column_names.clone(),
    })
}

/// `y - X beta`.
pub fn residuals(design: &DesignMatrix, beta: &[f64]) -> Vec<f64> {
    (0..design.n_rows())
        .map(|i| {
            let fit: f64 = design.row(i).iter().zip(beta).map(|(a, b)| a * b).sum();
            design.targets[i] - fit
        })
        .collect()
}

fn check_inputs(m: usize, n: usize, x: &[f64], y: &[f64]) -> Result<()> {
    check_matrix(m, n, x)?;
    if y.len() != m {
        return Err(Error::Numeric(format!("{} targets for {m} rows", y.len())));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite target value".into()));
    }
    Ok(())
}

fn check_matrix(m: usize, n: usize, x: &[f64]) -> Result<()> {
    if m == 0 {
        return Err(Error::EmptyDesign(
            "least-squares problem has no rows".into(),
        ));
    }
    if x.len() != m * n {
        return Err(Error::Numeric(format!(
            "matrix has {} entries, expected {m}x{n}",
            x.len()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite entry in design matrix".into()));
    }
    Ok(())
}

/// A factored matrix for repeated least-squares residuals against the same columns.
pub(crate) struct ColumnSpace {
    qr: Option<PivotedQr>,
    rows: usize,
}

impl ColumnSpace {
    pub(crate) fn new(m: usize, n: usize, x: &[f64]) -> Result<Self> {
        check_matrix(m, n, x)?;
        let qr = (n > 0).then(|| pivoted_qr(ColMatrix::from_row_major(m, n, x)));
        Ok(ColumnSpace { qr, rows: m })
    }

    /// Squared norm of the component of `y` orthogonal to the columns (the minimal SSE).
    pub(crate) fn residual_norm2(&self, mut y: Vec<f64>) -> f64 {
        debug_assert_eq!(y.len(), self.rows);
        let Some(qr) = &self.qr else {
            return y.iter().map(|v| v * v).sum();
        };
        for refl in &qr.reflectors {
            refl.apply(&mut y);
        }
        y[qr.rank..].iter().map(|v| v * v).sum()
    }
}

/// Minimum-norm least-squares solution for a row-major `m x n` matrix.
pub fn lstsq(m: usize, n: usize, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    lstsq_with_rank(m, n, x, y).map(|(beta, _)| beta)
}

fn lstsq_with_rank(m: usize, n: usize, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, usize)> {
    check_inputs(m, n, x, y)?;
    if n == 0 {
        return Ok((Vec::new(), 0));
    }
    let qr = pivoted_qr(ColMatrix::from_row_major(m, n, x));
    let r = qr.rank;
    let mut beta = vec![0.0; n];
    if r == 0 {
        return Ok((beta, 0));
    }

    let mut c = y.to_vec();
    for refl in &qr.reflectors {
        refl.apply(&mut c);
    }

    let z = if r == n {
        back_substitute(&qr.r, &c[..n])
    } else {
        min_norm_trapezoidal(&qr.r, r, n, &c[..r])
    };
    for (j, zj) in z.into_iter().enumerate() {
        beta[qr.perm[j]] = zj;
    }
    Ok((beta, r))
}

fn back_substitute(r: &ColMatrix, c: &[f64]) -> Vec<f64> {
    let n = c.len();
    let mut z = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = c[i];
        for j in i + 1..n {
            s -= r.get(i, j) * z[j];
        }
        z[i] = s / r.get(i, i);
    }
    z
}

/// Minimum-norm solution of `T z = c` where `T` is the leading `r x n` block of `R`.
/// Factors `T^T = W U` so that `z = W U^{-T} c`.
fn min_norm_trapezoidal(rmat: &ColMatrix, r: usize, n: usize, c: &[f64]) -> Vec<f64> {
    // T^T stored column-major as n x r: column i of T^T is row i of T
    let mut tt = ColMatrix {
        rows: n,
        cols: r,
        data: vec![0.0; n * r],
    };
    for i in 0..r {
        for j in i..n {
            tt.data[i * n + j] = rmat.get(i, j);
        }
    }
    let mut refl = Vec::with_capacity(r);
    for k in 0..r {
        let (h, beta) = Reflector::new(k, &tt.col(k)[k..]);
        {
            let col = tt.col_mut(k);
            col[k] = beta;
            for v in &mut col[k + 1..] {
                *v = 0.0;
            }
        }
        for j in k + 1..r {
            h.apply(tt.col_mut(j));
        }
        refl.push(h);
    }
    // forward solve U^T w = c (U upper triangular r x r)
    let mut w = vec![0.0; n];
    for i in 0..r {
        let mut s = c[i];
        for j in 0..i {
            s -= tt.get(j, i) * w[j];
        }
        w[i] = s / tt.get(i, i);
    }
    // z = W [w; 0] = H_0 H_1 ... H_{r-1} [w; 0]
    for h in refl.iter().rev() {
        h.apply(&mut w);
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn design(rows: &[Vec<f64>], y: &[f64]) -> DesignMatrix {
        let p = rows.first().map_or(0, Vec::len);
        DesignMatrix::from_rows(rows, y.to_vec(), (0..p).map(|j| format!("c{j}")).collect())
            .unwrap()
    }

    fn fitted(d: &DesignMatrix, beta: &[f64]) -> Vec<f64> {
        (0..d.n_rows())
            .map(|i| d.row(i).iter().zip(beta).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn exact_line_through_origin() {
        let d = design(&[vec![1.0], vec![2.0], vec![3.0]], &[2.0, 4.0, 6.0]);
        let s = solve_lsq(&d).unwrap();
        assert!((s.coefficients[0] - 2.0).abs() < 1e-14);
        assert!(s.residuals.iter().all(|r| r.abs() < 1e-12));
        assert_eq!(s.rank, 1);
    }

    #[test]
    fn duplicated_column_splits_evenly() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![1.0, i as f64, i as f64]).collect();
        let y: Vec<f64> = (0..20)
            .map(|i| 3.0 + 0.5 * i as f64 + ((i * 7) % 3) as f64)
            .collect();
        let full = design(
            &rows.iter().map(|r| r[..2].to_vec()).collect::<Vec<_>>(),
            &y,
        );
        let dup = design(&rows, &y);
        let a = solve_lsq(&full).unwrap();
        let b = solve_lsq(&dup).unwrap();
        assert_eq!(b.rank, 2);
        assert!((b.coefficients[1] - b.coefficients[2]).abs() < 1e-10);
        for (u, v) in fitted(&full, &a.coefficients)
            .iter()
            .zip(fitted(&dup, &b.coefficients))
        {
            assert!((u - v).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_column_gets_zero_coefficient() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![1.0, 0.0, (i * i) as f64]).collect();
        let y: Vec<f64> = (0..10).map(|i| 1.0 + 2.0 * (i * i) as f64).collect();
        let s = solve_lsq(&design(&rows, &y)).unwrap();
        assert_eq!(s.coefficients[1], 0.0);
        assert!((s.coefficients[2] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn underdetermined_min_norm() {
        // one equation x + y = 2: minimum-norm answer is (1, 1)
        let s = solve_lsq(&design(&[vec![1.0, 1.0]], &[2.0])).unwrap();
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((s.coefficients[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let d = design(&[vec![f64::NAN]], &[1.0]);
        assert!(matches!(solve_lsq(&d), Err(Error::Numeric(_))));
        assert!(matches!(lstsq(0, 2, &[], &[]), Err(Error::EmptyDesign(_))));
    }

    #[test]
    fn residuals_orthogonal_to_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rows: Vec<Vec<f64>> = (0..300)
            .map(|_| (0..8).map(|_| rng.random_range(-10.0..10.0)).collect())
            .collect();
        let y: Vec<f64> = (0..300).map(|_| rng.random_range(-100.0..100.0)).collect();
        let d = design(&rows, &y);
        let s = solve_lsq(&d).unwrap();
        let ynorm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        for j in 0..8 {
            let dot: f64 = (0..300).map(|i| d.row(i)[j] * s.residuals[i]).sum();
            assert!(dot.abs() <= 1e-6 * ynorm, "column {j}: {dot}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn row_permutation_invariance(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 40;
            let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..4).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let a = solve_lsq(&design(&rows, &y)).unwrap();
            let mut idx: Vec<usize> = (0..n).collect();
            idx.reverse();
            idx.rotate_left((seed % n as u64) as usize);
            let prow: Vec<Vec<f64>> = idx.iter().map(|&i| rows[i].clone()).collect();
            let py: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
            let b = solve_lsq(&design(&prow, &py)).unwrap();
            for (u, v) in a.coefficients.iter().zip(&b.coefficients) {
                prop_assert!((u - v).abs() <= 1e-10 * u.abs().max(1.0));
            }
        }

        #[test]
        fn zero_column_keeps_fitted_values(seed in any::<u64>(), at in 0usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows: Vec<Vec<f64>> = (0..30).map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            let y: Vec<f64> = (0..30).map(|_| rng.random_range(-1.0..1.0)).collect();
            let a = solve_lsq(&design(&rows, &y)).unwrap();
            let padded: Vec<Vec<f64>> = rows.iter().map(|r| { let mut r = r.clone(); r.insert(at, 0.0); r }).collect();
            let b = solve_lsq(&design(&padded, &y)).unwrap();
            prop_assert_eq!(b.coefficients[at], 0.0);
            for (u, v) in a.residuals.iter().zip(&b.residuals) {
                prop_assert!((u - v).abs() <= 1e-12);
            }
        }
    }
}
