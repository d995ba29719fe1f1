//! Exact integer linear algebra on small dense matrices.
//!
//! All arithmetic is checked `i128`; plumbing matrices are tridiagonal-like
//! with small entries, so minors stay far below the overflow bound.

use crate::error::{Error, Result};

pub(crate) type Matrix = Vec<Vec<i128>>;

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow("matrix arithmetic"))
}

fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow("matrix arithmetic"))
}

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow("matrix arithmetic"))
}

pub(crate) fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

/// Determinant by Bareiss fraction-free elimination. The empty matrix has
/// determinant one.
pub(crate) fn determinant(m: &[Vec<i128>]) -> Result<i128> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let mut a: Matrix = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = sub(mul(a[k][k], a[i][j])?, mul(a[i][k], a[k][j])?)?;
                a[i][j] = v / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

/// Returns `(adj, det)` with `m * adj = det * Id`, computed by fraction-free
/// Gauss-Jordan elimination on `[m | Id]`.
pub(crate) fn adjugate(m: &[Vec<i128>]) -> Result<(Matrix, i128)> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| i128::from(i == j)));
            r
        })
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Err(Error::Internal("singular matrix".into())),
            }
        }
        let pivot_row = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let factor = row[k];
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let v = sub(mul(pivot_row[k], row[j])?, mul(factor, pivot_row[j])?)?;
                row[j] = v / prev;
            }
            row[k] = 0;
        }
        prev = pivot_row[k];
    }
    // Left block is now prev * Id where prev = det of the row-permuted matrix;
    // the right block is prev * m^{-1}.
    let det = sign * prev;
    let adj = a
        .into_iter()
        .map(|row| row[n..].iter().map(|&x| sign * x).collect())
        .collect();
    Ok((adj, det))
}

/// Smith normal form `D = U * A * V` of a square integer matrix, with `U^{-1}`
/// tracked alongside so that classes can be lifted back.
#[derive(Debug, Clone)]
pub(crate) struct Smith {
    pub diag: Vec<i128>,
    pub left: Matrix,
    pub left_inv: Matrix,
    #[cfg_attr(not(test), allow(dead_code))]
    pub right: Matrix,
}

pub(crate) fn smith_normal_form(m: &[Vec<i128>]) -> Result<Smith> {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut u = identity(n);
    let mut u_inv = identity(n);
    let mut v = identity(n);

    // row_i += c * row_j, mirrored on U and U^{-1}
    fn row_add(a: &mut Matrix, u: &mut Matrix, u_inv: &mut Matrix, i: usize, j: usize, c: i128) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        for col in 0..a.len() {
            a[i][col] = add(a[i][col], mul(c, a[j][col])?)?;
            u[i][col] = add(u[i][col], mul(c, u[j][col])?)?;
        }
        for row in u_inv.iter_mut() {
            row[j] = sub(row[j], mul(c, row[i])?)?;
        }
        Ok(())
    }
    fn col_add(a: &mut Matrix, v: &mut Matrix, i: usize, j: usize, c: i128) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        for row in 0..a.len() {
            a[row][i] = add(a[row][i], mul(c, a[row][j])?)?;
            v[row][i] = add(v[row][i], mul(c, v[row][j])?)?;
        }
        Ok(())
    }
    fn row_swap(a: &mut Matrix, u: &mut Matrix, u_inv: &mut Matrix, i: usize, j: usize) {
        a.swap(i, j);
        u.swap(i, j);
        for row in u_inv.iter_mut() {
            row.swap(i, j);
        }
    }
    fn col_swap(a: &mut Matrix, v: &mut Matrix, i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    }

    for k in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if a[i][j] != 0
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            row_swap(&mut a, &mut u, &mut u_inv, k, pi);
            col_swap(&mut a, &mut v, k, pj);

            let mut clean = true;
            for i in k + 1..n {
                let q = a[i][k].div_euclid(a[k][k]);
                row_add(&mut a, &mut u, &mut u_inv, i, k, -q)?;
                if a[i][k] != 0 {
                    clean = false;
                }
            }
            for j in k + 1..n {
                let q = a[k][j].div_euclid(a[k][k]);
                col_add(&mut a, &mut v, j, k, -q)?;
                if a[k][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad = (k + 1..n).find(|&i| (k + 1..n).any(|j| a[i][j] % a[k][k] != 0));
            match bad {
                Some(i) => row_add(&mut a, &mut u, &mut u_inv, k, i, 1)?,
                None => break,
            }
        }
        if a[k][k] < 0 {
            for col in 0..n {
                a[k][col] = -a[k][col];
                u[k][col] = -u[k][col];
            }
            for row in u_inv.iter_mut() {
                row[k] = -row[k];
            }
        }
    }
    let diag = (0..n).map(|i| a[i][i]).collect();
    Ok(Smith {
        diag,
        left: u,
        left_inv: u_inv,
        right: v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
        let n = a.len();
        let m = b[0].len();
        (0..n)
            .map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
            .collect()
    }

    fn cofactor_det(m: &Matrix) -> i128 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Matrix = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    fn sample() -> Matrix {
        vec![
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = sample();
        assert_eq!(determinant(&m).unwrap(), cofactor_det(&m));
        let swap_needed = vec![vec![0, 1, 2], vec![1, 0, 3], vec![4, 5, 0]];
        assert_eq!(determinant(&swap_needed).unwrap(), cofactor_det(&swap_needed));
        assert_eq!(determinant(&[]).unwrap(), 1);
    }

    #[test]
    fn adjugate_inverts() {
        let m = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 3]];
        let (adj, det) = adjugate(&m).unwrap();
        assert_eq!(det, cofactor_det(&m));
        let prod = matmul(&m, &adj);
        for (i, row) in prod.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, if i == j { det } else { 0 });
            }
        }
        let p = vec![vec![0, 1], vec![1, 1]];
        let (adj, det) = adjugate(&p).unwrap();
        assert_eq!(det, -1);
        assert_eq!(matmul(&p, &adj), vec![vec![-1, 0], vec![0, -1]]);
    }

    #[test]
    fn smith_of_reference_matrix() {
        let m = sample();
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diag, vec![1, 3, 21, 0]);
        let d = matmul(&matmul(&s.left, &m), &s.right);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, if i == j { s.diag[i] } else { 0 });
            }
        }
        assert_eq!(matmul(&s.left, &s.left_inv), identity(4));
    }
}
