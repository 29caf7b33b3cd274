use num::Zero;

use super::coeff::Rat;

/// Outcome of an exact linear solve.
#[derive(Debug, Clone)]
pub enum Solve {
    Unique(Vec<Rat>),
    /// No assignment satisfies the system; carries the index of a row that
    /// reduced to 0 = nonzero.
    Inconsistent(usize),
    /// Solutions form an affine space of the given positive dimension.
    Underdetermined(usize),
}

/// Gaussian elimination over Q. `rows` is the coefficient matrix, `rhs` the
/// right-hand side; a row per equation.
pub fn solve(mut rows: Vec<Vec<Rat>>, mut rhs: Vec<Rat>) -> Solve {
    assert_eq!(rows.len(), rhs.len());
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        rhs.swap(rank, p);
        let inv = rows[rank][col].clone().recip();
        for c in col..ncols {
            let v = &rows[rank][c] * &inv;
            rows[rank][c] = v;
        }
        rhs[rank] = &rhs[rank] * &inv;
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in col..ncols {
                    let v = &rows[i][c] - &(&rows[rank][c] * &f);
                    rows[i][c] = v;
                }
                let v = &rhs[i] - &(&rhs[rank] * &f);
                rhs[i] = v;
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    for i in rank..rows.len() {
        if !rhs[i].is_zero() {
            return Solve::Inconsistent(i);
        }
    }
    if rank < ncols {
        return Solve::Underdetermined(ncols - rank);
    }
    let mut x = vec![Rat::zero(); ncols];
    for (r, &col) in pivot_cols.iter().enumerate() {
        x[col] = rhs[r].clone();
    }
    Solve::Unique(x)
}

/// Basis of the right kernel of the matrix.
pub fn kernel(mut rows: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].clone().recip();
        for c in col..ncols {
            let v = &rows[rank][c] * &inv;
            rows[rank][c] = v;
        }
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in col..ncols {
                    let v = &rows[i][c] - &(&rows[rank][c] * &f);
                    rows[i][c] = v;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    let free_cols: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![Rat::zero(); ncols];
        v[fc] = Rat::from_integer(1.into());
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -rows[r][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// Rank of the matrix.
pub fn rank(rows: Vec<Vec<Rat>>) -> usize {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    ncols - kernel(rows).len()
}
