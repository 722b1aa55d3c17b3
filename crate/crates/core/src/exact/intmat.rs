//! Dense integer matrices and lattice normal forms.
//!
//! Hermite form is row-style: `H = U * M` with `U` unimodular, pivots
//! positive, entries above each pivot reduced into `[0, pivot)` and zero rows
//! at the bottom. Smith form returns `U * M * V = D` with the divisibility
//! chain on the diagonal.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect();
        write!(f, "IntMatrix{rows:?}")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            for (j, x) in r.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        IntMatrix::from_rows(&big, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Stacks rows of `other` under `self`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        IntMatrix::from_rows(&rows, self.cols)
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> =
            (0..self.rows).map(|i| idx.iter().map(|&j| self[(i, j)].clone()).collect()).collect();
        IntMatrix::from_rows(&rows, idx.len())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    /// (row a, row b) <- (s*a + t*b, u*a + v*b) with s*v - t*u = 1.
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn combine_rows(&mut self, a: usize, b: usize, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
        for j in 0..self.cols {
            let x = self.data[a * self.cols + j].clone();
            let y = self.data[b * self.cols + j].clone();
            self.data[a * self.cols + j] = s * &x + t * &y;
            self.data[b * self.cols + j] = u * &x + v * &y;
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
        for i in 0..self.rows {
            let x = self.data[i * self.cols + a].clone();
            let y = self.data[i * self.cols + b].clone();
            self.data[i * self.cols + a] = s * &x + t * &y;
            self.data[i * self.cols + b] = u * &x + v * &y;
        }
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        hnf_only(self).1.len()
    }

    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let snf = snf(self);
        // det(U) det(V) = +-1; sign is recovered from the transforms.
        let sign = det_sign_unimodular(&snf.u) * det_sign_unimodular(&snf.v);
        let prod = (0..self.rows).fold(BigInt::one(), |acc, i| acc * &snf.d[(i, i)]);
        prod * sign
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

fn det_sign_unimodular(m: &IntMatrix) -> i32 {
    // Fraction-free elimination on a unimodular matrix; only the sign matters.
    let n = m.rows;
    let mut a = m.clone();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[(i, k)].is_zero()).expect("unimodular matrix is singular");
        if p != k {
            a.swap_rows(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    if prev.is_negative() {
        -sign
    } else {
        sign
    }
}

/// Row Hermite normal form, returning `(H, U)` with `H = U * M`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    hnf_in_place(&mut h, Some(&mut u));
    (h, u)
}

/// HNF without the transform, plus pivot columns.
pub fn hnf_only(m: &IntMatrix) -> (IntMatrix, Vec<usize>) {
    let mut h = m.clone();
    let pivots = hnf_in_place(&mut h, None);
    (h, pivots)
}

fn hnf_in_place(h: &mut IntMatrix, mut u: Option<&mut IntMatrix>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..h.cols {
        if r == h.rows {
            break;
        }
        // Collapse column c below row r into a single gcd entry at row r.
        for i in r + 1..h.rows {
            if h[(i, c)].is_zero() {
                continue;
            }
            if h[(r, c)].is_zero() {
                h.swap_rows(r, i);
                if let Some(u) = u.as_deref_mut() {
                    u.swap_rows(r, i);
                }
                continue;
            }
            let a = h[(r, c)].clone();
            let b = h[(i, c)].clone();
            let eg = a.extended_gcd(&b);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let uu = -(&b / &g);
            let vv = &a / &g;
            h.combine_rows(r, i, &s, &t, &uu, &vv);
            if let Some(u) = u.as_deref_mut() {
                u.combine_rows(r, i, &s, &t, &uu, &vv);
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            if let Some(u) = u.as_deref_mut() {
                u.negate_row(r);
            }
        }
        let p = h[(r, c)].clone();
        for i in 0..r {
            let q = h[(i, c)].div_floor(&p);
            if !q.is_zero() {
                let k = -q;
                h.add_row_multiple(i, r, &k);
                if let Some(u) = u.as_deref_mut() {
                    u.add_row_multiple(i, r, &k);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Nonzero rows of the HNF: a canonical basis of the row lattice.
pub fn row_lattice_basis(m: &IntMatrix) -> IntMatrix {
    let (h, pivots) = hnf_only(m);
    h.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
}

#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries, in divisibility order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

/// Smith normal form `U * M * V = D`.
pub fn snf(m: &IntMatrix) -> Snf {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    let mut k = 0;
    while k < n {
        // Smallest nonzero entry in the remaining block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in k..d.rows {
            for j in k..d.cols {
                if !d[(i, j)].is_zero()
                    && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);
        loop {
            let mut dirty = false;
            for i in k + 1..d.rows {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let a = d[(k, k)].clone();
                let b = d[(i, k)].clone();
                if (&b % &a).is_zero() {
                    let q = -(&b / &a);
                    d.add_row_multiple(i, k, &q);
                    u.add_row_multiple(i, k, &q);
                    continue;
                }
                let eg = a.extended_gcd(&b);
                let uu = -(&b / &eg.gcd);
                let vv = &a / &eg.gcd;
                d.combine_rows(k, i, &eg.x, &eg.y, &uu, &vv);
                u.combine_rows(k, i, &eg.x, &eg.y, &uu, &vv);
            }
            for j in k + 1..d.cols {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let a = d[(k, k)].clone();
                let b = d[(k, j)].clone();
                if (&b % &a).is_zero() {
                    let q = -(&b / &a);
                    d.add_col_multiple(j, k, &q);
                    v.add_col_multiple(j, k, &q);
                    continue;
                }
                let eg = a.extended_gcd(&b);
                let uu = -(&b / &eg.gcd);
                let vv = &a / &eg.gcd;
                d.combine_cols(k, j, &eg.x, &eg.y, &uu, &vv);
                v.combine_cols(k, j, &eg.x, &eg.y, &uu, &vv);
                dirty = true;
            }
            if dirty && (k + 1..d.rows).any(|i| !d[(i, k)].is_zero()) {
                continue;
            }
            // Enforce divisibility against the rest of the block.
            let p = d[(k, k)].clone();
            let bad = (k + 1..d.rows).find(|&i| (k + 1..d.cols).any(|j| !(&d[(i, j)] % &p).is_zero()));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(k, i, &one);
                    u.add_row_multiple(k, i, &one);
                }
                None => break,
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
        k += 1;
    }
    Snf { d, u, v }
}

/// Elementary divisors of a matrix (nonzero SNF diagonal).
pub fn elementary_divisors(m: &IntMatrix) -> Vec<BigInt> {
    snf(m).diagonal()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cokernel {
    pub free_rank: usize,
    /// Nontrivial elementary divisors (all > 1), in divisibility order.
    pub divisors: Vec<BigInt>,
}

impl Cokernel {
    /// Exponent of the torsion subgroup (1 when torsion-free).
    pub fn exponent(&self) -> BigInt {
        self.divisors.last().cloned().unwrap_or_else(BigInt::one)
    }
}

/// Cokernel of `M : Z^cols -> Z^rows`, i.e. `Z^rows / (column span)`.
pub fn cokernel(m: &IntMatrix) -> Cokernel {
    let diag = elementary_divisors(m);
    Cokernel {
        free_rank: m.rows - diag.len(),
        divisors: diag.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// Saturated basis (as rows, in HNF) of `{ v : M v = 0 }`.
pub fn right_kernel(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(&m.transpose());
    let rank = (0..h.rows).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count();
    let kernel: Vec<usize> = (rank..h.rows).collect();
    let k = u.select_rows(&kernel);
    if k.rows == 0 {
        return IntMatrix::zeros(0, m.cols);
    }
    row_lattice_basis(&k)
}

/// Saturated basis of `{ v : v M = 0 }`.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    right_kernel(&m.transpose())
}

/// Integer coordinates of `v` on the rows of `basis` (which must be in HNF
/// with pivots `pivots`), or `None` if `v` is not in the row lattice.
pub fn hnf_coordinates(basis: &IntMatrix, pivots: &[usize], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rem: Vec<BigInt> = v.to_vec();
    let mut coords = Vec::with_capacity(pivots.len());
    for (i, &c) in pivots.iter().enumerate() {
        let p = &basis[(i, c)];
        let (q, r) = rem[c].div_rem(p);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for j in 0..basis.cols {
                rem[j] -= &q * &basis[(i, j)];
            }
        }
        coords.push(q);
    }
    rem.iter().all(|x| x.is_zero()).then_some(coords)
}

/// Row lattice of `m`, prepared for membership queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(m: &IntMatrix) -> Lattice {
        let (h, pivots) = hnf_only(m);
        Lattice { basis: h.select_rows(&(0..pivots.len()).collect::<Vec<_>>()), pivots }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        hnf_coordinates(&self.basis, &self.pivots, v)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// True when the lattice equals its rational span intersected with Z^n.
    pub fn is_saturated(&self) -> bool {
        elementary_divisors(&self.basis).iter().all(|d| d.is_one())
    }
}
