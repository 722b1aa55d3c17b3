//! Root data and finite Weyl groups.
//!
//! Lattice vectors are columns of integers in the fixed basis of the
//! character lattice. The simple reflection `s_i` acts by
//! `s_i(v) = v - <v, a_i^vee> a_i`.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Vector = Vec<i64>;

/// Square integer matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    n: usize,
    data: Vec<i64>,
}

impl Matrix {
    pub fn identity(n: usize) -> Matrix {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Matrix {
        let n = rows.len();
        let data = rows.iter().flat_map(|r| {
            assert_eq!(r.len(), n, "matrix must be square");
            r.iter().copied()
        });
        Matrix { n, data: data.collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|c| c.to_vec()).collect()
    }

    /// Column `j`, the image of the `j`-th basis vector.
    pub fn column(&self, j: usize) -> Vector {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Matrix { n, data }
    }

    pub fn apply(&self, v: &[i64]) -> Vector {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j);
            }
        }
        Matrix { n, data }
    }

    /// Fraction-free determinant.
    pub fn determinant(&self) -> i64 {
        let n = self.n;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = self.rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        (sign * a[n - 1][n - 1]) as i64
    }
}

/// Pairing `<v, c>` of a character with a cocharacter.
pub fn pair(v: &[i64], c: &[i64]) -> i64 {
    v.iter().zip(c).map(|(a, b)| a * b).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    name: String,
    rank: usize,
    simple_roots: Vec<Vector>,
    simple_coroots: Vec<Vector>,
}

impl RootDatum {
    /// Validates that the Cartan integers form a Cartan matrix of finite type.
    pub fn new(
        name: impl Into<String>,
        rank: usize,
        simple_roots: Vec<Vector>,
        simple_coroots: Vec<Vector>,
    ) -> Result<RootDatum> {
        let bad = |msg: String| Err(Error::InvalidRootDatum(msg));
        if simple_roots.len() != simple_coroots.len() {
            return bad(format!("{} simple roots but {} coroots", simple_roots.len(), simple_coroots.len()));
        }
        if simple_roots.len() > rank {
            return bad(format!("{} simple roots exceed rank {rank}", simple_roots.len()));
        }
        for v in simple_roots.iter().chain(&simple_coroots) {
            if v.len() != rank {
                return bad(format!("vector {v:?} does not have length {rank}"));
            }
        }
        let rd = RootDatum { name: name.into(), rank, simple_roots, simple_coroots };
        let a = rd.cartan_matrix();
        let s = a.len();
        for i in 0..s {
            if a[i][i] != 2 {
                return bad(format!("<a_{0}, a_{0}^vee> = {1}, expected 2", i + 1, a[i][i]));
            }
            for j in 0..s {
                if i == j {
                    continue;
                }
                if a[i][j] > 0 {
                    return bad(format!("Cartan integer a_{}{} = {} is positive", i + 1, j + 1, a[i][j]));
                }
                if (a[i][j] == 0) != (a[j][i] == 0) {
                    return bad(format!("Cartan integers a_{0}{1} and a_{1}{0} disagree on vanishing", i + 1, j + 1));
                }
            }
        }
        if !is_finite_type(&a) {
            return bad("Cartan matrix is not of finite type".into());
        }
        Ok(rd)
    }

    pub fn preset(name: &str) -> Result<RootDatum> {
        let (family, n) = parse_preset(name)?;
        let e = |r: usize, i: usize| -> Vector {
            let mut v = vec![0; r];
            v[i] = 1;
            v
        };
        let unknown = || Error::UnknownPreset(name.to_string());
        match family.as_str() {
            "torus" => {
                let r = n.filter(|&r| r >= 1).ok_or_else(unknown)?;
                RootDatum::new(format!("Torus({r})"), r, vec![], vec![])
            }
            "sl" => {
                let n = n.filter(|&n| n >= 2).ok_or_else(unknown)?;
                let r = n - 1;
                // Fundamental-weight basis: the roots are the rows of the Cartan matrix.
                let roots = (0..r)
                    .map(|i| {
                        (0..r)
                            .map(|j| match i.abs_diff(j) {
                                0 => 2,
                                1 => -1,
                                _ => 0,
                            })
                            .collect()
                    })
                    .collect();
                let coroots = (0..r).map(|i| e(r, i)).collect();
                RootDatum::new(format!("SL({n})"), r, roots, coroots)
            }
            "gl" => {
                let n = n.filter(|&n| n >= 1).ok_or_else(unknown)?;
                let roots: Vec<Vector> = (0..n - 1)
                    .map(|i| {
                        let mut v = e(n, i);
                        v[i + 1] = -1;
                        v
                    })
                    .collect();
                RootDatum::new(format!("GL({n})"), n, roots.clone(), roots)
            }
            "pgl" if n == Some(2) => RootDatum::new("PGL(2)", 1, vec![vec![1]], vec![vec![2]]),
            "sp" if n == Some(4) => RootDatum::new(
                "Sp(4)",
                2,
                vec![vec![1, -1], vec![0, 2]],
                vec![vec![1, -1], vec![0, 1]],
            ),
            "g" if n == Some(2) => RootDatum::new(
                "G2",
                2,
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![2, -3], vec![-1, 2]],
            ),
            _ => Err(unknown()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_simple(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn simple_roots(&self) -> &[Vector] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &[Vector] {
        &self.simple_coroots
    }

    /// `A[i][j] = <a_j, a_i^vee>`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        self.simple_coroots
            .iter()
            .map(|c| self.simple_roots.iter().map(|a| pair(a, c)).collect())
            .collect()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.num_simple() {
            return Err(Error::IndexOutOfRange { index: i, len: self.num_simple() });
        }
        Ok(())
    }

    /// `s_i(v)` for a zero-based simple index `i`.
    pub fn reflect(&self, i: usize, v: &[i64]) -> Result<Vector> {
        self.check_index(i)?;
        if v.len() != self.rank {
            return Err(Error::Context(format!("vector of length {} in rank {}", v.len(), self.rank)));
        }
        let k = pair(v, &self.simple_coroots[i]);
        Ok(v.iter().zip(&self.simple_roots[i]).map(|(x, a)| x - k * a).collect())
    }

    /// Matrix of `s_i` on column vectors.
    pub fn reflection_matrix(&self, i: usize) -> Result<Matrix> {
        self.check_index(i)?;
        let r = self.rank;
        let a = &self.simple_roots[i];
        let c = &self.simple_coroots[i];
        let mut m = Matrix::identity(r);
        for row in 0..r {
            for col in 0..r {
                m.data[row * r + col] -= a[row] * c[col];
            }
        }
        Ok(m)
    }
}

impl fmt::Display for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

pub const SUPPORTED_PRESETS: &str = "Torus(r), SL(n), GL(n), PGL(2), Sp(4), G2";

fn parse_preset(name: &str) -> Result<(String, Option<usize>)> {
    let cleaned: String = name.chars().filter(|c| !c.is_whitespace() && *c != '(' && *c != ')' && *c != '_').collect();
    let lower = cleaned.to_ascii_lowercase();
    let split = lower.find(|c: char| c.is_ascii_digit()).unwrap_or(lower.len());
    let (family, digits) = lower.split_at(split);
    let family = match family {
        "t" | "torus" | "gm" => "torus",
        "sl" => "sl",
        "gl" => "gl",
        "pgl" => "pgl",
        "sp" => "sp",
        "g" => "g",
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    let n = if digits.is_empty() {
        None
    } else {
        Some(digits.parse::<usize>().map_err(|_| Error::UnknownPreset(name.to_string()))?)
    };
    Ok((family.to_string(), n))
}

/// Finite type test: the Cartan matrix is symmetrizable and its
/// symmetrization is positive definite.
fn is_finite_type(a: &[Vec<i64>]) -> bool {
    let s = a.len();
    type Q = Ratio<i64>;
    // d_j a_ij = d_i a_ji along a spanning forest, then check consistency.
    let mut d: Vec<Option<Q>> = vec![None; s];
    for start in 0..s {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Q::from_integer(1));
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..s {
                if i != j && a[i][j] != 0 && d[j].is_none() {
                    // (DA)_ij = d_i a_ij must equal (DA)_ji = d_j a_ji.
                    d[j] = Some(d[i].unwrap() * Q::from_integer(a[i][j]) / Q::from_integer(a[j][i]));
                    stack.push(j);
                }
            }
        }
    }
    let d: Vec<Q> = d.into_iter().map(Option::unwrap).collect();
    if d.iter().any(|x| !x.is_positive()) {
        return false;
    }
    let b: Vec<Vec<Q>> = (0..s).map(|i| (0..s).map(|j| d[i] * Q::from_integer(a[i][j])).collect()).collect();
    for i in 0..s {
        for j in 0..s {
            if b[i][j] != b[j][i] {
                return false;
            }
        }
    }
    // Sylvester: all leading principal minors positive, via Gaussian elimination.
    let mut m = b;
    for k in 0..s {
        if !m[k][k].is_positive() {
            return false;
        }
        for i in k + 1..s {
            let f = m[i][k] / m[k][k];
            if f.is_zero() {
                continue;
            }
            for j in k..s {
                let t = m[k][j];
                m[i][j] -= f * t;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub matrix: Matrix,
    /// Lexicographically least reduced word, zero-based simple indices.
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }
}

pub const DEFAULT_ELEMENT_CAP: usize = 100_000;
const TABLE_LIMIT: usize = 4096;

#[derive(Clone, Debug)]
pub struct WeylGroup {
    datum: RootDatum,
    elements: Vec<WeylElement>,
    index: HashMap<Matrix, usize>,
    table: Option<Vec<usize>>,
    inverses: Vec<usize>,
}

impl WeylGroup {
    pub fn enumerate(rd: &RootDatum) -> Result<WeylGroup> {
        Self::enumerate_with_cap(rd, DEFAULT_ELEMENT_CAP)
    }

    /// Breadth-first closure; elements come out ordered by length, then by
    /// reduced word.
    pub fn enumerate_with_cap(rd: &RootDatum, cap: usize) -> Result<WeylGroup> {
        let gens: Vec<Matrix> = (0..rd.num_simple()).map(|i| rd.reflection_matrix(i)).collect::<Result<_>>()?;
        let id = Matrix::identity(rd.rank());
        let mut elements = vec![WeylElement { matrix: id.clone(), word: vec![] }];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut layer = 0..1;
        while !layer.is_empty() {
            let start = elements.len();
            for e in layer.clone() {
                for (i, g) in gens.iter().enumerate() {
                    let m = elements[e].matrix.mul(g);
                    if index.contains_key(&m) {
                        continue;
                    }
                    if elements.len() >= cap {
                        return Err(Error::Internal(format!(
                            "Weyl group of {} exceeds the element cap {cap}",
                            rd.name()
                        )));
                    }
                    let mut word = elements[e].word.clone();
                    word.push(i);
                    index.insert(m.clone(), elements.len());
                    elements.push(WeylElement { matrix: m, word });
                }
            }
            layer = start..elements.len();
        }
        let n = elements.len();
        let lookup = |m: &Matrix| *index.get(m).expect("closed under multiplication");
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    t.push(lookup(&a.matrix.mul(&b.matrix)));
                }
            }
            t
        });
        let inverses = (0..n)
            .map(|a| match &table {
                Some(t) => (0..n).find(|&b| t[a * n + b] == 0).expect("inverse exists"),
                None => {
                    // w^-1 has the reversed word.
                    let mut m = Matrix::identity(rd.rank());
                    for &i in elements[a].word.iter().rev() {
                        m = m.mul(&gens[i]);
                    }
                    lookup(&m)
                }
            })
            .collect();
        Ok(WeylGroup { datum: rd.clone(), elements, index, table, inverses })
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Index of `a * b`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b],
            None => self.index[&self.elements[a].matrix.mul(&self.elements[b].matrix)],
        }
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// Index of the simple reflection `s_i`.
    pub fn generator(&self, i: usize) -> usize {
        self.elements.iter().position(|e| e.word == [i]).expect("simple reflection enumerated")
    }

    pub fn multiplication_table(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn longest_length(&self) -> usize {
        self.elements.last().map_or(0, WeylElement::length)
    }

    /// Coefficients of the length generating function.
    pub fn length_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.longest_length() + 1];
        for e in &self.elements {
            c[e.length()] += 1;
        }
        c
    }

    /// The orbit of the simple roots, sorted.
    pub fn roots(&self) -> Vec<Vector> {
        let mut out: Vec<Vector> = self
            .elements
            .iter()
            .flat_map(|e| self.datum.simple_roots.iter().map(move |a| e.matrix.apply(a)))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}
