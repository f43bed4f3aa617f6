//! Dense linear algebra over a [`Field`].

use super::{Elem, Field};

pub type Matrix = Vec<Vec<Elem>>;

/// Row-reduces in place and returns the pivot columns.
pub fn rref(k: &Field, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
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
        let inv = k.inv(&m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = k.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    if !m[r][j].is_zero() {
                        let v = k.sub(&m[i][j], &k.mul(&f, &m[r][j]));
                        m[i][j] = v;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A solution of `a x = b`, if one exists.
pub fn solve(k: &Field, a: &Matrix, b: &[Elem]) -> Option<Vec<Elem>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(k, &mut aug);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = vec![k.zero(); cols];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// A matrix `l` with `l a = 1` for `a` of full column rank.
pub fn left_inverse(k: &Field, a: &Matrix) -> Option<Matrix> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..rows).map(|j| if i == j { k.one() } else { k.zero() }));
            r
        })
        .collect();
    let piv = rref(k, &mut aug);
    if piv.len() < cols || piv[..cols].iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some((0..cols).map(|r| aug[r][cols..].to_vec()).collect())
}

pub fn mat_vec(k: &Field, m: &Matrix, v: &[Elem]) -> Vec<Elem> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(k.zero(), |acc, (a, b)| k.add(&acc, &k.mul(a, b)))
        })
        .collect()
}

/// Diagonal entries of a congruent diagonalization of a symmetric matrix (characteristic
/// not 2). Zero diagonal entries are emitted for a degenerate radical.
pub fn diagonalize_symmetric(k: &Field, g: &Matrix) -> Vec<Elem> {
    let mut g = g.clone();
    let mut diag = Vec::new();
    while !g.is_empty() {
        let n = g.len();
        if let Some(i) = (0..n).find(|&i| !g[i][i].is_zero()) {
            g.swap(0, i);
            for row in g.iter_mut() {
                row.swap(0, i);
            }
        } else if let Some((i, j)) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && !g[i][j].is_zero())
        {
            // e_i <- e_i + e_j gives a nonzero diagonal entry 2 g_ij
            for c in 0..n {
                let v = k.add(&g[i][c], &g[j][c]);
                g[i][c] = v;
            }
            for r in 0..n {
                let v = k.add(&g[r][i], &g[r][j]);
                g[r][i] = v;
            }
            g.swap(0, i);
            for row in g.iter_mut() {
                row.swap(0, i);
            }
        } else {
            diag.extend((0..n).map(|_| k.zero()));
            break;
        }
        let a = g[0][0].clone();
        let inv = k.inv(&a).unwrap();
        for r in 1..n {
            let c = k.mul(&g[r][0], &inv);
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                let v = k.sub(&g[r][j], &k.mul(&c, &g[0][j]));
                g[r][j] = v;
            }
            for i in 0..n {
                let v = k.sub(&g[i][r], &k.mul(&c, &g[i][0]));
                g[i][r] = v;
            }
        }
        diag.push(a);
        g = g[1..].iter().map(|row| row[1..].to_vec()).collect();
    }
    diag
}

/// Determinant by Gaussian elimination.
pub fn det(k: &Field, m: &Matrix) -> Elem {
    let mut m = m.clone();
    let n = m.len();
    let mut acc = k.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return k.zero();
        };
        if p != c {
            m.swap(p, c);
            acc = k.neg(&acc);
        }
        acc = k.mul(&acc, &m[c][c]);
        let inv = k.inv(&m[c][c]).unwrap();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = k.mul(&m[r][c], &inv);
            for j in c..n {
                let v = k.sub(&m[r][j], &k.mul(&f, &m[c][j]));
                m[r][j] = v;
            }
        }
    }
    acc
}
