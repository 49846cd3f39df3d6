//! Exact feasibility of small linear programs in standard form.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::rat::RatMatrix;

/// Whether `{x >= 0 : A x = b}` is non-empty.
///
/// Enumerates basic solutions, which is exact and fine for the handful of variables that
/// cone-intersection and extremality tests produce.
pub fn nonnegative_solution_exists(a: &RatMatrix, b: &[BigRational]) -> bool {
    if b.iter().all(|x| x.is_zero()) {
        return true;
    }
    let aug = a.hstack(&RatMatrix::from_columns(a.rows(), vec![b.to_vec()]));
    let rref = aug.rref();
    if rref.pivots.last() == Some(&a.cols()) {
        return false;
    }
    // independent rows only
    let rank = rref.pivots.len();
    let rows: Vec<Vec<BigRational>> = (0..rank).map(|i| rref.matrix.row(i).to_vec()).collect();
    let reduced = RatMatrix::from_rows(a.cols() + 1, rows);
    let lhs_cols: Vec<Vec<BigRational>> = (0..a.cols()).map(|j| reduced.column(j)).collect();
    let rhs = reduced.column(a.cols());

    let mut chosen = Vec::with_capacity(rank);
    basis_search(&lhs_cols, &rhs, rank, 0, &mut chosen)
}

fn basis_search(
    cols: &[Vec<BigRational>],
    rhs: &[BigRational],
    rank: usize,
    start: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == rank {
        let sub = RatMatrix::from_columns(rank, chosen.iter().map(|&j| cols[j].clone()).collect());
        if let Some(inv) = sub.inverse() {
            let x = inv.mul_vec(rhs);
            return x.iter().all(|v| !v.is_negative());
        }
        return false;
    }
    for j in start..cols.len() {
        if cols.len() - j < rank - chosen.len() {
            break;
        }
        chosen.push(j);
        if basis_search(cols, rhs, rank, j + 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Whether `v` lies in the cone generated by `gens` (all vectors in the same space).
pub fn in_cone(gens: &[Vec<i64>], v: &[i64]) -> bool {
    let dim = v.len();
    if gens.is_empty() {
        return v.iter().all(|&x| x == 0);
    }
    let cols = gens
        .iter()
        .map(|g| g.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let a = RatMatrix::from_columns(dim, cols);
    let b: Vec<BigRational> = v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    nonnegative_solution_exists(&a, &b)
}
