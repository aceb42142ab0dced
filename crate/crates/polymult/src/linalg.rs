//! Internal exact linear algebra: rational Gaussian elimination, an exact
//! phase-1 simplex for LP feasibility, and unimodular integer kernel bases.
//!
//! Everything here is dense and small-scale by design; inputs come from
//! desk-scale polytopes (dimension <= 8, coordinates in the low hundreds).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Point = Vec<i64>;

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Divide by the positive gcd of the nonzero entries (sign preserved).
/// The zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Point {
    let g = v.iter().fold(0i64, |acc, &x| gcd_i64(acc, x));
    if g <= 1 {
        return v.to_vec();
    }
    v.iter().map(|&x| x / g).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn big(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Rank over Q of a set of integer row vectors.
pub fn rank(rows: &[Point]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let n = rows[0].len();
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| big(x)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].clone();
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let factor = &m[i][col] / &inv;
                for j in col..n {
                    let sub = &factor * &m[rank][j];
                    m[i][j] = &m[i][j] - sub;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Solve `basis * c = target` for rational `c`, where `basis` holds column
/// vectors of a full-column-rank integer matrix. Returns `None` if the system
/// is inconsistent.
pub fn solve_in_basis(basis: &[Point], target: &[i64]) -> Option<Vec<BigRational>> {
    let n = target.len();
    let k = basis.len();
    // Augmented [B | target], eliminate.
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| big(b[i])).collect();
            row.push(big(target[i]));
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(piv) = (r..n).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = m[r][col].clone();
        for i in 0..n {
            if i != r && !m[i][col].is_zero() {
                let factor = &m[i][col] / &inv;
                for j in col..=k {
                    let sub = &factor * &m[r][j];
                    m[i][j] = &m[i][j] - sub;
                }
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    // Inconsistent if a zeroed row has nonzero rhs.
    for i in r..n {
        if !m[i][k].is_zero() {
            return None;
        }
    }
    let mut c = vec![BigRational::zero(); k];
    for &(row, col) in &pivots {
        c[col] = &m[row][k] / &m[row][col];
    }
    Some(c)
}

/// Exact LP feasibility of `{lambda >= 0 : A lambda = b}` via phase-1 simplex
/// with Bland's rule (guaranteed termination).
pub fn lp_feasible(a: &[Vec<BigRational>], b: &[BigRational]) -> bool {
    let m = a.len();
    if m == 0 {
        return true;
    }
    let k = a[0].len();
    // Tableau: k structural columns, m artificial columns, rhs. Rows are
    // normalized so the rhs is nonnegative; artificials form the start basis.
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<BigRational> = Vec::with_capacity(k + m + 1);
        let flip = b[i].is_negative();
        for j in 0..k {
            row.push(if flip { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for j in 0..m {
            row.push(if i == j { BigRational::one() } else { BigRational::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (k..k + m).collect();
    let cost = |col: usize| -> i32 { if col >= k { 1 } else { 0 } };
    loop {
        // Reduced cost of column j: cost(j) - sum_i T[i][j] * cost(basis[i]).
        let mut entering = None;
        for j in 0..k + m {
            if basis.contains(&j) {
                continue;
            }
            let mut reduced = BigRational::from_integer(BigInt::from(cost(j)));
            for i in 0..m {
                if cost(basis[i]) != 0 {
                    reduced -= &t[i][j];
                }
            }
            if reduced.is_negative() {
                entering = Some(j);
                break; // Bland: smallest improving index.
            }
        }
        let Some(j) = entering else { break };
        // Ratio test; ties broken by smallest basis index (Bland).
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if t[i][j].is_positive() {
                let ratio = &t[i][k + m] / &t[i][j];
                match leave {
                    None => leave = Some(i),
                    Some(l) => {
                        let best = &t[l][k + m] / &t[l][j];
                        if ratio < best || (ratio == best && basis[i] < basis[l]) {
                            leave = Some(i);
                        }
                    }
                }
            }
        }
        let Some(r) = leave else {
            // Unbounded phase-1 cannot happen (objective bounded below by 0),
            // but guard anyway.
            break;
        };
        // Pivot on (r, j).
        let piv = t[r][j].clone();
        for x in t[r].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..m {
            if i != r && !t[i][j].is_zero() {
                let factor = t[i][j].clone();
                for col in 0..k + m + 1 {
                    let sub = &factor * &t[r][col];
                    t[i][col] = &t[i][col] - sub;
                }
            }
        }
        basis[r] = j;
    }
    let objective: BigRational = (0..m)
        .filter(|&i| cost(basis[i]) != 0)
        .map(|i| t[i][k + m].clone())
        .fold(BigRational::zero(), |acc, x| acc + x);
    objective.is_zero()
}

/// Is `target` in the convex hull of `points`?
pub fn in_convex_hull(points: &[Point], target: &[i64]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = target.len();
    // Rows: n coordinate equations plus the sum-to-one constraint.
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(n + 1);
    for i in 0..n {
        a.push(points.iter().map(|p| big(p[i])).collect());
    }
    a.push(vec![BigRational::one(); points.len()]);
    let mut b: Vec<BigRational> = target.iter().map(|&x| big(x)).collect();
    b.push(BigRational::one());
    lp_feasible(&a, &b)
}

/// Is `target` in `conv(points) + (R_{>=0})^n`? (Membership "on or above"
/// the region generated by the points and the nonnegative orthant.)
pub fn in_hull_plus_orthant(points: &[Point], target: &[i64]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = target.len();
    // target = sum lambda_i p_i + s, lambda >= 0, sum lambda = 1, s >= 0.
    let k = points.len();
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut row: Vec<BigRational> = points.iter().map(|p| big(p[i])).collect();
        for j in 0..n {
            row.push(if i == j { BigRational::one() } else { BigRational::zero() });
        }
        a.push(row);
    }
    let mut last = vec![BigRational::one(); k];
    last.extend(vec![BigRational::zero(); n]);
    a.push(last);
    let mut b: Vec<BigRational> = target.iter().map(|&x| big(x)).collect();
    b.push(BigRational::one());
    lp_feasible(&a, &b)
}

/// Basis of the lattice `{x in Z^n : r . x = 0 for every row r}`, computed by
/// unimodular column operations. The result generates the full intersection
/// lattice (it is saturated), with a deterministic sign/order normalization.
pub fn integer_kernel_basis(rows: &[Point], n: usize) -> Vec<Point> {
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1 } else { 0 }).collect())
        .collect(); // u[j] is the j-th column vector.
    let mut active: Vec<usize> = (0..n).collect();
    for row in rows {
        loop {
            let mut nonzero: Vec<usize> = active
                .iter()
                .copied()
                .filter(|&j| {
                    row.iter()
                        .enumerate()
                        .map(|(i, &r)| r as i128 * u[j][i])
                        .sum::<i128>()
                        != 0
                })
                .collect();
            if nonzero.len() <= 1 {
                if let Some(j) = nonzero.pop() {
                    active.retain(|&x| x != j); // pivot column, consumed by this row
                }
                break;
            }
            let val = |u: &Vec<Vec<i128>>, j: usize| -> i128 {
                row.iter().enumerate().map(|(i, &r)| r as i128 * u[j][i]).sum()
            };
            let &jmin = nonzero
                .iter()
                .min_by_key(|&&j| (val(&u, j).abs(), j))
                .expect("nonempty");
            let vmin = val(&u, jmin);
            for &j in &nonzero {
                if j == jmin {
                    continue;
                }
                let q = val(&u, j).div_euclid(vmin);
                if q != 0 {
                    for i in 0..n {
                        u[j][i] -= q * u[jmin][i];
                    }
                }
            }
        }
    }
    let mut basis: Vec<Point> = active
        .iter()
        .map(|&j| {
            let col: Vec<i64> = u[j].iter().map(|&x| i64::try_from(x).expect("kernel entry fits in i64")).collect();
            match col.iter().find(|&&x| x != 0) {
                Some(&first) if first < 0 => col.iter().map(|&x| -x).collect(),
                _ => col,
            }
        })
        .collect();
    basis.sort();
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_membership() {
        let square = vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2]];
        assert!(in_convex_hull(&square, &[1, 1]));
        assert!(in_convex_hull(&square, &[2, 2]));
        assert!(!in_convex_hull(&square, &[3, 1]));
    }

    #[test]
    fn hull_plus_orthant_membership() {
        let pts = vec![vec![2, 0], vec![0, 3]];
        assert!(in_hull_plus_orthant(&pts, &[2, 0]));
        assert!(in_hull_plus_orthant(&pts, &[5, 5]));
        assert!(in_hull_plus_orthant(&pts, &[1, 2])); // on the segment
        assert!(!in_hull_plus_orthant(&pts, &[1, 1]));
        assert!(!in_hull_plus_orthant(&pts, &[0, 0]));
    }

    #[test]
    fn kernel_basis_of_single_weight() {
        let b = integer_kernel_basis(&[vec![1, 1]], 2);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0][0] + b[0][1], 0);
        let b = integer_kernel_basis(&[vec![0, 0, 1]], 3);
        assert_eq!(b, vec![vec![0, 1, 0], vec![1, 0, 0]]);
        let b = integer_kernel_basis(&[vec![2, 2, 1]], 3);
        assert_eq!(b.len(), 2);
        for v in &b {
            assert_eq!(2 * v[0] + 2 * v[1] + v[2], 0);
        }
    }

    #[test]
    fn rank_of_rows() {
        assert_eq!(rank(&[vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank(&[vec![0, 0]]), 0);
    }
}
