//! Smith normal form over the integers with optional transform tracking.
//!
//! `U A V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ...`.

pub type IntMatrix = Vec<Vec<i128>>;

#[derive(Clone, Debug)]
pub struct Snf {
    /// Diagonal entries, nonnegative, length `min(rows, cols)`.
    pub diag: Vec<i128>,
    pub rank: usize,
    /// `U^-1`, if requested.
    pub left_inv: Option<IntMatrix>,
    /// `U`, if requested.
    pub left: Option<IntMatrix>,
    /// `V`, if requested.
    pub right: Option<IntMatrix>,
    /// `V^-1`, if requested.
    pub right_inv: Option<IntMatrix>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Track {
    pub left: bool,
    pub left_inv: bool,
    pub right: bool,
    pub right_inv: bool,
}

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn ck(x: Option<i128>) -> i128 {
    x.expect("integer overflow in Smith normal form")
}

struct State {
    a: IntMatrix,
    rows: usize,
    cols: usize,
    u: Option<IntMatrix>,
    u_inv: Option<IntMatrix>,
    v: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl State {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap(i, j);
        }
    }

    /// row_i += k row_j
    fn add_row(&mut self, i: usize, j: usize, k: i128) {
        if k == 0 {
            return;
        }
        for c in 0..self.cols {
            let x = self.a[j][c];
            if x != 0 {
                self.a[i][c] = ck(self.a[i][c].checked_add(ck(k.checked_mul(x))));
            }
        }
        if let Some(u) = &mut self.u {
            let src = u[j].clone();
            for (c, x) in src.into_iter().enumerate() {
                u[i][c] = ck(u[i][c].checked_add(ck(k.checked_mul(x))));
            }
        }
        // U^-1 <- U^-1 E^-1: col_j -= k col_i
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row[j] = ck(row[j].checked_sub(ck(k.checked_mul(row[i]))));
            }
        }
    }

    /// col_i += k col_j
    fn add_col(&mut self, i: usize, j: usize, k: i128) {
        if k == 0 {
            return;
        }
        for row in self.a.iter_mut() {
            let x = row[j];
            if x != 0 {
                row[i] = ck(row[i].checked_add(ck(k.checked_mul(x))));
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row[i] = ck(row[i].checked_add(ck(k.checked_mul(row[j]))));
            }
        }
        // V^-1 <- F^-1 V^-1: row_j -= k row_i
        if let Some(vi) = &mut self.v_inv {
            let src = vi[i].clone();
            for (c, x) in src.into_iter().enumerate() {
                vi[j][c] = ck(vi[j][c].checked_sub(ck(k.checked_mul(x))));
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -*x;
        }
        if let Some(u) = &mut self.u {
            for x in u[i].iter_mut() {
                *x = -*x;
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row[i] = -row[i];
            }
        }
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(i128, usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = self.a[i][j].abs();
                if x != 0 && best.is_none_or(|(b, _, _)| x < b) {
                    best = Some((x, i, j));
                    if x == 1 {
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

/// Smith normal form of `a` (rows x cols).
pub fn smith(a: &IntMatrix, cols: usize, track: Track) -> Snf {
    let rows = a.len();
    let mut s = State {
        a: a.clone(),
        rows,
        cols,
        u: track.left.then(|| identity(rows)),
        u_inv: track.left_inv.then(|| identity(rows)),
        v: track.right.then(|| identity(cols)),
        v_inv: track.right_inv.then(|| identity(cols)),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = s.min_pivot(t) else { break };
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);
        loop {
            let p = s.a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let x = s.a[i][t];
                if x != 0 {
                    s.add_row(i, t, -x.div_euclid(p));
                    dirty |= s.a[i][t] != 0;
                }
            }
            for j in t + 1..cols {
                let x = s.a[t][j];
                if x != 0 {
                    s.add_col(j, t, -x.div_euclid(p));
                    dirty |= s.a[t][j] != 0;
                }
            }
            if dirty {
                // A smaller remainder exists in row or column t; bring it to the pivot.
                let (mut bi, mut bj, mut b) = (t, t, p.abs());
                for i in t + 1..rows {
                    let x = s.a[i][t].abs();
                    if x != 0 && x < b {
                        (bi, bj, b) = (i, t, x);
                    }
                }
                for j in t + 1..cols {
                    let x = s.a[t][j].abs();
                    if x != 0 && x < b {
                        (bi, bj, b) = (t, j, x);
                    }
                }
                s.swap_rows(t, bi);
                s.swap_cols(t, bj);
                continue;
            }
            // Divisibility: fold an offending row into row t and go again.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| s.a[i][j] % p != 0));
            match bad {
                Some(i) => s.add_row(t, i, 1),
                None => break,
            }
        }
        if s.a[t][t] < 0 {
            s.negate_row(t);
        }
        t += 1;
    }
    let diag: Vec<i128> = (0..rows.min(cols)).map(|i| s.a[i][i]).collect();
    let rank = diag.iter().filter(|&&d| d != 0).count();
    Snf { diag, rank, left_inv: s.u_inv, left: s.u, right: s.v, right_inv: s.v_inv }
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(0i128, |acc, k| if row[k] == 0 { acc } else { ck(acc.checked_add(ck(row[k].checked_mul(b[k][j])))) }))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: IntMatrix, cols: usize) -> Snf {
        let all = Track { left: true, left_inv: true, right: true, right_inv: true };
        let s = smith(&a, cols, all);
        let rows = a.len();
        let (u, v) = (s.left.as_ref().unwrap(), s.right.as_ref().unwrap());
        let d = mat_mul(&mat_mul(u, &a, rows, cols), v, cols, cols);
        for i in 0..rows {
            for j in 0..cols {
                assert_eq!(d[i][j], if i == j { s.diag[i] } else { 0 });
            }
        }
        assert_eq!(mat_mul(u, s.left_inv.as_ref().unwrap(), rows, rows), identity(rows));
        assert_eq!(mat_mul(v, s.right_inv.as_ref().unwrap(), cols, cols), identity(cols));
        for w in s.diag[..s.rank].windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        s
    }

    #[test]
    fn small_cases() {
        assert_eq!(check(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3).diag, vec![2, 6, 12]);
        assert_eq!(check(vec![vec![2, 0], vec![0, 3]], 2).diag, vec![1, 6]);
        assert_eq!(check(vec![vec![0, 0, 0]], 3).diag, vec![0]);
        assert_eq!(check(vec![vec![4], vec![6]], 1).diag, vec![2]);
    }
}
