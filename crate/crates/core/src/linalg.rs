//! Small exact linear algebra over ℤ and ℚ: matrix helpers, Gaussian
//! elimination over the rationals and Smith normal form with transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Row-major integer matrix.
pub type IMat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn mat_vec(m: &IMat, v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(m: &IMat) -> IMat {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

pub fn add_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(a: &[i64], k: i64) -> Vec<i64> {
    a.iter().map(|x| x * k).collect()
}

pub fn scale_mat(m: &IMat, k: i64) -> IMat {
    m.iter().map(|r| scale_vec(r, k)).collect()
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn to_rational_matrix(m: &IMat) -> Vec<Vec<BigRational>> {
    m.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_q(m: &IMat) -> usize {
    let mut q = to_rational_matrix(m);
    rref(&mut q).len()
}

/// Basis of the right kernel `{x : m x = 0}` over ℚ.
pub fn kernel_q(m: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square rational matrix.
pub fn inverse_q(m: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return Err(Error::DivisionByZero);
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solve `m x = b` over ℚ for square invertible `m`.
pub fn solve_q(m: &[Vec<BigRational>], b: &[BigRational]) -> Result<Vec<BigRational>> {
    let inv = inverse_q(m)?;
    Ok(inv
        .iter()
        .map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum())
        .collect())
}

pub fn big_to_i64(x: &BigInt, ctx: &str) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Overflow(ctx.to_string()))
}

/// Smith decomposition `U · A · V = D` of an integer matrix.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: Vec<Vec<BigInt>>,
    pub u_inv: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    /// Diagonal of `D`, nonnegative, with each entry dividing the next and
    /// zeros at the end.
    pub diag: Vec<BigInt>,
}

fn big_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn smith_normal_form(a: &IMat, cols: usize) -> Smith {
    let m = a.len();
    let n = cols;
    let mut a: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut u = big_identity(m);
    let mut u_inv = big_identity(m);
    let mut v = big_identity(n);

    let swap_rows = |a: &mut Vec<Vec<BigInt>>,
                     u: &mut Vec<Vec<BigInt>>,
                     ui: &mut Vec<Vec<BigInt>>,
                     i: usize,
                     j: usize| {
        a.swap(i, j);
        u.swap(i, j);
        for row in ui.iter_mut() {
            row.swap(i, j);
        }
    };
    // row_i -= q * row_t
    let row_sub = |a: &mut Vec<Vec<BigInt>>,
                   u: &mut Vec<Vec<BigInt>>,
                   ui: &mut Vec<Vec<BigInt>>,
                   i: usize,
                   t: usize,
                   q: &BigInt| {
        for j in 0..a[i].len() {
            let d = q * &a[t][j];
            a[i][j] -= d;
        }
        for j in 0..u[i].len() {
            let d = q * &u[t][j];
            u[i][j] -= d;
        }
        for row in ui.iter_mut() {
            let d = q * &row[i];
            row[t] += d;
        }
    };
    // col_j -= q * col_t
    let col_sub = |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, j: usize, t: usize, q: &BigInt| {
        for row in a.iter_mut() {
            let d = q * &row[t];
            row[j] -= d;
        }
        for row in v.iter_mut() {
            let d = q * &row[t];
            row[j] -= d;
        }
    };

    let steps = m.min(n);
    'outer: for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'outer;
            };
            if pi != t {
                swap_rows(&mut a, &mut u, &mut u_inv, t, pi);
            }
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                for row in v.iter_mut() {
                    row.swap(t, pj);
                }
            }
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    row_sub(&mut a, &mut u, &mut u_inv, i, t, &q);
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    col_sub(&mut a, &mut v, j, t, &q);
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            let mut bad_row = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !a[i][j].is_multiple_of(&a[t][t]) {
                        bad_row = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad_row {
                Some(i) => {
                    // row_t += row_i
                    let q = -BigInt::one();
                    row_sub(&mut a, &mut u, &mut u_inv, t, i, &q);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
            for row in u_inv.iter_mut() {
                row[t] = -row[t].clone();
            }
        }
    }
    let diag = (0..steps).map(|i| a[i][i].clone()).collect();
    Smith { u, u_inv, v, diag }
}

/// Integer solution of `a x = b`, if one exists.
pub fn solve_z(a: &IMat, cols: usize, b: &[i64]) -> Result<Option<Vec<i64>>> {
    let s = smith_normal_form(a, cols);
    let m = a.len();
    let ub: Vec<BigInt> = s
        .u
        .iter()
        .map(|row| row.iter().zip(b).map(|(x, &y)| x * BigInt::from(y)).sum())
        .collect();
    let mut y = vec![BigInt::zero(); cols];
    for i in 0..m {
        let d = s.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !ub[i].is_zero() {
                return Ok(None);
            }
        } else {
            let (q, r) = ub[i].div_rem(&d);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
    }
    let x: Vec<BigInt> = s
        .v
        .iter()
        .map(|row| row.iter().zip(&y).map(|(p, q)| p * q).sum())
        .collect();
    x.iter()
        .map(|v| big_to_i64(v, "integer solve"))
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(a: &IMat, cols: usize) {
        let s = smith_normal_form(a, cols);
        let m = a.len();
        let ab: Vec<Vec<BigInt>> = a
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let prod = |x: &Vec<Vec<BigInt>>, y: &Vec<Vec<BigInt>>, k: usize, c: usize| -> Vec<Vec<BigInt>> {
            x.iter()
                .map(|row| (0..c).map(|j| (0..k).map(|l| &row[l] * &y[l][j]).sum()).collect())
                .collect()
        };
        let uav = prod(&prod(&s.u, &ab, m, cols), &s.v, cols, cols);
        for i in 0..m {
            for j in 0..cols {
                let expect = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                assert_eq!(uav[i][j], expect);
            }
        }
        let uu = prod(&s.u, &s.u_inv, m, m);
        assert_eq!(uu, big_identity(m));
        for w in s.diag.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    #[test]
    fn smith_small_cases() {
        check_smith(&vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        check_smith(&vec![vec![0, 0], vec![0, 0]], 2);
        check_smith(&vec![vec![1, -1]], 2);
        check_smith(&vec![vec![2, 0], vec![0, 3]], 2);
        let s = smith_normal_form(&vec![vec![2, 0], vec![0, 3]], 2);
        assert_eq!(s.diag, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn integer_solve() {
        let a = vec![vec![1, -1, 0], vec![0, 1, -1]];
        let x = solve_z(&a, 3, &[2, 1]).unwrap().unwrap();
        assert_eq!(mat_vec(&a, &x), vec![2, 1]);
        assert!(solve_z(&vec![vec![2]], 1, &[1]).unwrap().is_none());
    }

    #[test]
    fn rational_kernel() {
        let m = to_rational_matrix(&vec![vec![1, 1, 0], vec![0, 0, 1]]);
        let k = kernel_q(&m, 3);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![rat(-1), rat(1), rat(0)]);
    }
}
