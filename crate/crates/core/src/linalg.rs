//! Exact integer linear systems `A·x = b` over `Z`.
//!
//! Sparse unit-pivot elimination removes most of the system without leaving
//! `Z`: a `±1` pivot expresses one unknown as an integer combination of the
//! others. What survives is solved densely through a column Hermite
//! reduction `A·U = H` with `U` unimodular, so the answer is integral
//! whenever any integral solution exists.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Sparse column: `(row, value)` pairs, rows need not be sorted.
pub type SparseVec = Vec<(usize, BigInt)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSolution {
    pub particular: Vec<BigInt>,
    /// Lattice basis of the integer kernel; empty unless requested.
    pub kernel: Vec<Vec<BigInt>>,
}

// x_col = (rhs - Σ rest) / pivot, exact
struct Pivot {
    col: usize,
    pivot: BigInt,
    rest: Vec<(usize, BigInt)>,
    rhs: BigInt,
}

/// Solve `Σ x_j · columns[j] = target` over the integers.
///
/// Returns `None` when the system has no integral solution.
pub fn solve_integer(
    columns: &[SparseVec],
    target: &SparseVec,
    with_kernel: bool,
) -> Option<IntegerSolution> {
    let ncols = columns.len();
    let mut rows: BTreeMap<usize, BTreeMap<usize, BigInt>> = BTreeMap::new();
    let mut col_rows: Vec<BTreeSet<usize>> = alloc::vec![BTreeSet::new(); ncols];
    for (j, col) in columns.iter().enumerate() {
        for (r, v) in col {
            if v.is_zero() {
                continue;
            }
            let e = rows
                .entry(*r)
                .or_default()
                .entry(j)
                .or_insert_with(BigInt::zero);
            *e += v;
            if e.is_zero() {
                rows.get_mut(r).unwrap().remove(&j);
            } else {
                col_rows[j].insert(*r);
            }
        }
    }
    for set in col_rows.iter_mut() {
        set.retain(|r| rows.get(r).is_some_and(|row| !row.is_empty()));
    }
    let mut rhs: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (r, v) in target {
        *rhs.entry(*r).or_insert_with(BigInt::zero) += v;
        rows.entry(*r).or_default();
    }
    rhs.retain(|_, v| !v.is_zero());

    let mut pivots: Vec<Pivot> = Vec::new();
    let mut eliminated = alloc::vec![false; ncols];

    // singleton rows fix their unknown outright
    let mut queue: Vec<usize> = rows
        .iter()
        .filter(|(_, row)| row.len() == 1)
        .map(|(r, _)| *r)
        .collect();
    while let Some(r) = queue.pop() {
        let Some(row) = rows.get(&r) else { continue };
        if row.len() != 1 {
            continue;
        }
        let (&c, a) = row.iter().next().unwrap();
        let a = a.clone();
        let b = rhs.remove(&r).unwrap_or_else(BigInt::zero);
        let (val, rem) = b.div_rem(&a);
        if !rem.is_zero() {
            return None;
        }
        rows.remove(&r);
        let touched: Vec<usize> = col_rows[c].iter().copied().filter(|&o| o != r).collect();
        for o in touched {
            let orow = rows.get_mut(&o).unwrap();
            let coeff = orow.remove(&c).unwrap();
            if !val.is_zero() {
                let e = rhs.entry(o).or_insert_with(BigInt::zero);
                *e -= &coeff * &val;
                if e.is_zero() {
                    rhs.remove(&o);
                }
            }
            if orow.len() == 1 {
                queue.push(o);
            }
        }
        col_rows[c].clear();
        eliminated[c] = true;
        pivots.push(Pivot {
            col: c,
            pivot: BigInt::one(),
            rest: Vec::new(),
            rhs: val,
        });
    }

    loop {
        // Markowitz: minimise fill (row_len-1)*(col_len-1) over unit entries
        let mut best: Option<(usize, usize, usize)> = None;
        for (&r, row) in rows.iter() {
            let rl = row.len();
            if rl == 0 {
                continue;
            }
            for (&c, v) in row.iter() {
                if v.magnitude().is_one() {
                    let cost = (rl - 1) * (col_rows[c].len() - 1);
                    if best.is_none_or(|(b, _, _)| cost < b) {
                        best = Some((cost, r, c));
                        if cost == 0 {
                            break;
                        }
                    }
                }
            }
            if best.is_some_and(|(b, _, _)| b == 0) {
                break;
            }
        }
        let Some((_, pr, pc)) = best else { break };
        let prow = rows.remove(&pr).unwrap();
        let prhs = rhs.remove(&pr).unwrap_or_else(BigInt::zero);
        let pval = prow[&pc].clone();
        for &c in prow.keys() {
            col_rows[c].remove(&pr);
        }
        let others: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in others {
            let row = rows.get_mut(&r).unwrap();
            let factor = row.remove(&pc).unwrap() * &pval; // pval = ±1, so a/pval = a*pval
            for (&c, v) in prow.iter() {
                if c == pc {
                    continue;
                }
                let e = row.entry(c).or_insert_with(BigInt::zero);
                *e -= &factor * v;
                if e.is_zero() {
                    row.remove(&c);
                    col_rows[c].remove(&r);
                } else {
                    col_rows[c].insert(r);
                }
            }
            if !prhs.is_zero() {
                let e = rhs.entry(r).or_insert_with(BigInt::zero);
                *e -= &factor * &prhs;
                if e.is_zero() {
                    rhs.remove(&r);
                }
            }
        }
        col_rows[pc].clear();
        eliminated[pc] = true;
        pivots.push(Pivot {
            col: pc,
            pivot: pval,
            rest: prow.into_iter().filter(|(c, _)| *c != pc).collect(),
            rhs: prhs,
        });
    }

    // dense residual
    let free_cols: Vec<usize> = (0..ncols).filter(|&c| !eliminated[c]).collect();
    let res_rows: Vec<usize> = rows
        .iter()
        .filter(|(r, row)| !row.is_empty() || rhs.contains_key(r))
        .map(|(r, _)| *r)
        .collect();
    let col_pos: BTreeMap<usize, usize> =
        free_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut dense: Vec<Vec<BigInt>> = res_rows
        .iter()
        .map(|r| {
            let mut v = alloc::vec![BigInt::zero(); free_cols.len()];
            for (c, val) in &rows[r] {
                v[col_pos[c]] = val.clone();
            }
            v
        })
        .collect();
    let b: Vec<BigInt> = res_rows
        .iter()
        .map(|r| rhs.get(r).cloned().unwrap_or_else(BigInt::zero))
        .collect();
    let (y, kernel_dense) = solve_dense(&mut dense, &b, free_cols.len())?;

    let back = |free_vals: &[BigInt], homogeneous: bool| -> Vec<BigInt> {
        let mut x = alloc::vec![BigInt::zero(); ncols];
        for (i, &c) in free_cols.iter().enumerate() {
            x[c] = free_vals[i].clone();
        }
        for p in pivots.iter().rev() {
            let mut acc = if homogeneous {
                BigInt::zero()
            } else {
                p.rhs.clone()
            };
            for (c, v) in &p.rest {
                acc -= v * &x[*c];
            }
            x[p.col] = acc / &p.pivot;
        }
        x
    };
    let particular = back(&y, false);
    let kernel = if with_kernel {
        let mut k: Vec<Vec<BigInt>> = kernel_dense.iter().map(|v| back(v, true)).collect();
        k.retain(|v| v.iter().any(|e| !e.is_zero()));
        k
    } else {
        Vec::new()
    };
    Some(IntegerSolution { particular, kernel })
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Column-echelon solve of a dense system; returns a particular solution and a kernel basis.
fn solve_dense(
    a: &mut [Vec<BigInt>],
    b: &[BigInt],
    n: usize,
) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let m = a.len();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = alloc::vec![BigInt::zero(); n];
            row[i] = BigInt::one();
            row
        })
        .collect();
    // column operation helpers act on a (m×n) and u (n×n) simultaneously
    let col_combine = |a: &mut [Vec<BigInt>],
                       u: &mut [Vec<BigInt>],
                       i: usize,
                       j: usize,
                       p: &BigInt,
                       q: &BigInt,
                       r: &BigInt,
                       s: &BigInt| {
        // (col_i, col_j) <- (p*col_i + q*col_j, r*col_i + s*col_j)
        for row in a.iter_mut().chain(u.iter_mut()) {
            let ci = row[i].clone();
            let cj = row[j].clone();
            row[i] = p * &ci + q * &cj;
            row[j] = r * &ci + s * &cj;
        }
    };
    let mut pivot_rows: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut next = 0usize;
    for i in 0..m {
        if next >= n {
            break;
        }
        for j in (next + 1)..n {
            if a[i][j].is_zero() {
                continue;
            }
            if a[i][next].is_zero() {
                for row in a.iter_mut().chain(u.iter_mut()) {
                    row.swap(next, j);
                }
                continue;
            }
            let (g, x, y) = ext_gcd(&a[i][next], &a[i][j]);
            let p1 = &a[i][next] / &g;
            let q1 = &a[i][j] / &g;
            // [x, -q1; y, p1] has determinant x*p1 + y*q1 = 1
            col_combine(a, &mut u, next, j, &x, &y, &(-&q1), &p1);
        }
        if a[i][next].is_zero() {
            continue;
        }
        if a[i][next].is_negative() {
            for row in a.iter_mut().chain(u.iter_mut()) {
                row[next] = -row[next].clone();
            }
        }
        // reduce earlier pivot columns in this row to keep entries small
        let piv = a[i][next].clone();
        for &(_, pc) in pivot_rows.iter() {
            let q = a[i][pc].div_floor(&piv);
            if !q.is_zero() {
                for row in a.iter_mut().chain(u.iter_mut()) {
                    let t = &q * &row[next];
                    row[pc] -= t;
                }
            }
        }
        pivot_rows.push((i, next));
        next += 1;
    }
    // forward substitution on H y = b
    let mut y = alloc::vec![BigInt::zero(); n];
    let mut k = 0usize;
    for i in 0..m {
        let mut acc = b[i].clone();
        for c in 0..next {
            if !a[i][c].is_zero() && !(k < pivot_rows.len() && pivot_rows[k] == (i, c)) {
                acc -= &a[i][c] * &y[c];
            }
        }
        if k < pivot_rows.len() && pivot_rows[k].0 == i {
            let c = pivot_rows[k].1;
            let (q, r) = acc.div_rem(&a[i][c]);
            if !r.is_zero() {
                return None;
            }
            y[c] = q;
            k += 1;
        } else if !acc.is_zero() {
            return None;
        }
    }
    let x: Vec<BigInt> = (0..n)
        .map(|r| (0..n).fold(BigInt::zero(), |s, c| s + &u[r][c] * &y[c]))
        .collect();
    let kernel: Vec<Vec<BigInt>> = (next..n)
        .map(|c| (0..n).map(|r| u[r][c].clone()).collect())
        .collect();
    Some((x, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(r, v)| (r, BigInt::from(v))).collect()
    }

    fn apply(columns: &[SparseVec], x: &[BigInt]) -> BTreeMap<usize, BigInt> {
        let mut out: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (c, xv) in columns.iter().zip(x) {
            for (r, v) in c {
                *out.entry(*r).or_insert_with(BigInt::zero) += v * xv;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    #[test]
    fn unit_pivots_only() {
        let cols = [
            col(&[(0, 1), (1, 1)]),
            col(&[(1, 1), (2, -1)]),
            col(&[(0, 1)]),
        ];
        let target = col(&[(0, 3), (2, -2)]);
        let sol = solve_integer(&cols, &target, false).unwrap();
        let got = apply(&cols, &sol.particular);
        let want: BTreeMap<usize, BigInt> = target.into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn non_unit_requires_integrality() {
        // 2x = 1 has no integer solution, 2x + 3y = 1 does
        assert!(solve_integer(&[col(&[(0, 2)])], &col(&[(0, 1)]), false).is_none());
        let cols = [col(&[(0, 2)]), col(&[(0, 3)])];
        let sol = solve_integer(&cols, &col(&[(0, 1)]), true).unwrap();
        assert_eq!(apply(&cols, &sol.particular).get(&0), Some(&BigInt::one()));
        assert_eq!(sol.kernel.len(), 1);
        assert!(apply(&cols, &sol.kernel[0]).is_empty());
    }

    #[test]
    fn inconsistent_rows() {
        let cols = [col(&[(0, 1), (1, 1)])];
        assert!(solve_integer(&cols, &col(&[(0, 1), (1, 2)]), false).is_none());
        assert!(solve_integer(&cols, &col(&[(5, 1)]), false).is_none());
    }

    #[test]
    fn kernel_of_dependent_columns() {
        let cols = [
            col(&[(0, 1), (1, 2)]),
            col(&[(0, 2), (1, 4)]),
            col(&[(0, 4), (1, 6)]),
        ];
        let sol = solve_integer(&cols, &col(&[]), true).unwrap();
        assert_eq!(sol.kernel.len(), 1);
        for k in &sol.kernel {
            assert!(apply(&cols, k).is_empty());
        }
    }
}
