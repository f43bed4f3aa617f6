//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use mwt::field::parse::parse_elem;
use mwt::field::{Elem, Field, Poly};

pub fn poly_in(k: &Field, s: &str) -> Poly {
    let ring = Field::rational_functions(k, "x");
    match parse_elem(&ring, s).unwrap() {
        Elem::Frac(n, d) => {
            assert_eq!(d.degree(), Some(0));
            let inv = k.inv(&d.coeffs()[0]).unwrap();
            n.map(|c| k.mul(c, &inv))
        }
        e => panic!("not a polynomial: {e:?}"),
    }
}

/// Addition and multiplication tables of a finite field, elements indexed `0..q` with `0`
/// the zero element.
pub struct Tables {
    pub q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    pub elems: Vec<Elem>,
}

impl Tables {
    pub fn new(k: &Field) -> Tables {
        let elems = k.elements().unwrap();
        let q = elems.len();
        assert!(elems[0].is_zero());
        let idx = |a: &Elem| k.index_of(a) as u8;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for (i, a) in elems.iter().enumerate() {
            assert_eq!(idx(a) as usize, i);
            for (j, b) in elems.iter().enumerate() {
                add[i * q + j] = idx(&k.add(a, b));
                mul[i * q + j] = idx(&k.mul(a, b));
            }
        }
        Tables { q, add, mul, elems }
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        (0..self.q as u8).find(|&b| self.add(a, b) == 0).unwrap()
    }

    pub fn inv(&self, a: u8) -> u8 {
        (0..self.q as u8).find(|&b| self.mul(a, b) == 1).unwrap()
    }

    pub fn squares(&self) -> Vec<u8> {
        let mut s: Vec<u8> = (1..self.q as u8).map(|a| self.mul(a, a)).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    fn vectors(&self, n: usize) -> impl Iterator<Item = Vec<u8>> + '_ {
        let total = self.q.pow(n as u32);
        (0..total).map(move |mut i| {
            let mut v = Vec::with_capacity(n);
            for _ in 0..n {
                v.push((i % self.q) as u8);
                i /= self.q;
            }
            v
        })
    }

    /// `v^T G w`.
    fn pair(&self, g: &[Vec<u8>], v: &[u8], w: &[u8]) -> u8 {
        let mut acc = 0;
        for (i, row) in g.iter().enumerate() {
            if v[i] == 0 {
                continue;
            }
            let mut s = 0;
            for (j, &gij) in row.iter().enumerate() {
                s = self.add(s, self.mul(gij, w[j]));
            }
            acc = self.add(acc, self.mul(v[i], s));
        }
        acc
    }

    /// A basis of `{w : v^T G w = 0}` by Gaussian elimination on the single linear form.
    fn orthogonal_basis(&self, g: &[Vec<u8>], v: &[u8]) -> Vec<Vec<u8>> {
        let n = v.len();
        let form: Vec<u8> = (0..n)
            .map(|j| {
                let mut s = 0;
                for i in 0..n {
                    s = self.add(s, self.mul(v[i], g[i][j]));
                }
                s
            })
            .collect();
        let pivot = form.iter().position(|&c| c != 0).expect("nondegenerate form");
        let ip = self.inv(form[pivot]);
        let mut basis = Vec::new();
        for j in (0..n).filter(|&j| j != pivot) {
            let mut w = vec![0u8; n];
            w[j] = 1;
            w[pivot] = self.neg(self.mul(form[j], ip));
            basis.push(w);
        }
        basis
    }

    fn gram(&self, g: &[Vec<u8>], basis: &[Vec<u8>]) -> Vec<Vec<u8>> {
        basis
            .iter()
            .map(|a| basis.iter().map(|b| self.pair(g, a, b)).collect())
            .collect()
    }

    /// Whether the form with Gram matrix `g` has an orthogonal basis with the given values,
    /// i.e. is isometric to the diagonal form `target`. Exhaustive over the first vector.
    pub fn isometric_to_diagonal(&self, g: &[Vec<u8>], target: &[u8]) -> bool {
        let n = g.len();
        if n != target.len() {
            return false;
        }
        if n == 0 {
            return true;
        }
        for v in self.vectors(n) {
            if self.pair(g, &v, &v) != target[0] {
                continue;
            }
            let basis = self.orthogonal_basis(g, &v);
            if self.isometric_to_diagonal(&self.gram(g, &basis), &target[1..]) {
                return true;
            }
        }
        false
    }

    pub fn diagonal(&self, entries: &[u8]) -> Vec<Vec<u8>> {
        let n = entries.len();
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect())
            .collect()
    }

    /// Brute-force isometry of two nondegenerate diagonal forms.
    pub fn isometric(&self, a: &[u8], b: &[u8]) -> bool {
        self.isometric_to_diagonal(&self.diagonal(a), b)
    }

    /// Whether the diagonal form represents zero nontrivially.
    pub fn isotropic(&self, a: &[u8]) -> bool {
        let g = self.diagonal(a);
        self.vectors(a.len()).any(|v| v.iter().any(|&c| c != 0) && self.pair(&g, &v, &v) == 0)
    }
}

/// All multisets of size `n` drawn from `items`.
pub fn multisets(items: &[u8], n: usize) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in multisets(&items[i..], n - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}
