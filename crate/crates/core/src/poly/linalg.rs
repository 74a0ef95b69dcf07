//! Exact dense linear algebra over the rationals.

use num_traits::{One, Zero};

use super::rat::Rat;
use super::upoly::UPoly;

/// Basis of `{ x : m x = 0 }` for a matrix with `ncols` columns, via reduced row echelon form.
pub fn nullspace(mut m: Vec<Vec<Rat>>, ncols: usize) -> Vec<Vec<Rat>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (a, b) in r.iter_mut().zip(&pivot_row) {
                    *a -= &f * b;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rat::zero(); ncols];
            v[fc] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][fc].clone();
            }
            v
        })
        .collect()
}

/// `det(t·I − m)` by reduction to Hessenberg form.
pub fn charpoly(mut h: Vec<Vec<Rat>>) -> UPoly {
    let n = h.len();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !h[i][m - 1].is_zero()) else {
            continue;
        };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let piv = h[m][m - 1].clone();
        for i in m + 1..n {
            if h[i][m - 1].is_zero() {
                continue;
            }
            let u = &h[i][m - 1] / &piv;
            for j in 0..n {
                let d = &u * &h[m][j];
                h[i][j] -= d;
            }
            for row in h.iter_mut() {
                let d = &u * &row[i];
                row[m] += d;
            }
        }
    }
    let t = UPoly::t();
    let mut ps = vec![UPoly::one()];
    for m in 0..n {
        let mut next = &(&t - &UPoly::constant(h[m][m].clone())) * &ps[m];
        let mut prod = Rat::one();
        for i in (0..m).rev() {
            prod *= &h[i + 1][i];
            if prod.is_zero() {
                break;
            }
            let c = &h[i][m] * &prod;
            next = &next - &ps[i].scale(&c);
        }
        ps.push(next);
    }
    ps.pop().expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::elim::bareiss_det;
    use crate::poly::rat::rat;
    use num_bigint::BigInt;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
    }

    #[test]
    fn nullspace_of_rank_one() {
        let ns = nullspace(m(&[&[1, 2, 3], &[2, 4, 6]]), 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((&v[0] + &v[1] * rat(2) + &v[2] * rat(3)).is_zero());
        }
    }

    #[test]
    fn charpoly_matches_determinant() {
        let a = m(&[&[2, -1, 0, 3], &[1, 0, 4, 1], &[0, 5, -2, 1], &[7, 1, 1, 0]]);
        let p = charpoly(a.clone());
        assert_eq!(p.deg(), 4);
        for t in -3i64..=3 {
            let rows: Vec<Vec<BigInt>> = (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| {
                            let d = if i == j { rat(t) } else { rat(0) };
                            (d - &a[i][j]).to_integer()
                        })
                        .collect()
                })
                .collect();
            assert_eq!(p.eval(&rat(t)), Rat::from_integer(bareiss_det(rows)));
        }
    }
}
