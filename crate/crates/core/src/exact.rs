//! Exact integer linear algebra (fraction-free elimination on `i128`).

use num_integer::Integer;

use crate::error::{Error, Result};

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

/// Bareiss elimination in place. Returns the rank and the sign-adjusted
/// last pivot, which is the determinant when the matrix is square and
/// nonsingular.
fn bareiss(m: &mut [Vec<i128>], cols: usize) -> Result<(usize, i128)> {
    let rows = m.len();
    let mut rank = 0;
    let mut prev = 1i128;
    let mut sign = 1i128;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            sign = -sign;
        }
        let piv = m[rank][c];
        for i in rank + 1..rows {
            let f = m[i][c];
            for j in c..cols {
                let v = sub(mul(piv, m[i][j])?, mul(f, m[rank][j])?)?;
                m[i][j] = v / prev;
            }
        }
        prev = piv;
        rank += 1;
    }
    Ok((rank, sign * prev))
}

/// Rank of an integer matrix.
pub fn rank(rows: &[Vec<i64>], cols: usize) -> Result<usize> {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    Ok(bareiss(&mut m, cols)?.0)
}

/// Determinant of a square integer matrix.
pub fn determinant(rows: &[Vec<i128>]) -> Result<i128> {
    let n = rows.len();
    let mut m = rows.to_vec();
    let (rank, det) = bareiss(&mut m, n)?;
    Ok(if rank < n { 0 } else { det })
}

/// Indices of a maximal linearly independent subset of `rows`, chosen
/// greedily in order.
pub fn independent_rows(rows: &[Vec<i64>], cols: usize) -> Result<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if chosen.len() == cols {
            break;
        }
        basis.push(r.clone());
        if rank(&basis, cols)? == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    Ok(chosen)
}

/// The primitive integer generator of the null space of `rows` when that
/// null space is one-dimensional, otherwise `None`. Sign is arbitrary.
pub fn null_vector(rows: &[Vec<i64>], cols: usize) -> Result<Option<Vec<i128>>> {
    if cols == 0 {
        return Ok(None);
    }
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let (rank, _) = bareiss(&mut m, cols)?;
    if rank + 1 != cols {
        return Ok(None);
    }
    let pivots: Vec<usize> = m[..rank]
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).expect("echelon row is nonzero"))
        .collect();
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("one free column");
    let mut v = vec![0i128; cols];
    v[free] = 1;
    for (r, &c) in pivots.iter().enumerate().rev() {
        let mut s = 0i128;
        for j in c + 1..cols {
            s = s.checked_add(mul(m[r][j], v[j])?).ok_or(Error::Overflow)?;
        }
        let a = m[r][c];
        let g = s.gcd(&a);
        let scale = a / g;
        for x in v.iter_mut() {
            *x = mul(*x, scale)?;
        }
        v[c] = -(s / g);
        let h = v.iter().fold(0i128, |h, &x| h.gcd(&x));
        v.iter_mut().for_each(|x| *x /= h);
    }
    Ok(Some(v))
}
