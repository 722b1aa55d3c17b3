//! Sparse multivariate polynomials with exact coefficients.
//!
//! A [`Ring`] fixes an ordered list of generators; every [`Poly`] carries the
//! ring it lives in. Generators are either coefficient generators (the
//! `m_i`, `beta`, the characters of `Sym T^`) or series variables (`x`, `y`,
//! `t_i`, `h_i`). Truncation is always measured by the total exponent in the
//! series variables.
//!
//! Degrees are algebraic: `deg m_n = n`, `deg beta = 1`, and every series
//! variable has degree `-1`, so a formal group law is homogeneous of degree
//! `-1` and `a * t^k` has total degree `deg a - |k|`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::scalar::{self, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenKind {
    Coefficient,
    Series,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
    pub kind: GenKind,
    /// Invertible generators may carry negative exponents; `g * g^-1 = 1`
    /// is applied as soon as exponents are added.
    pub invertible: bool,
}

impl Generator {
    pub fn coefficient(name: impl Into<String>, degree: i32) -> Self {
        Generator { name: name.into(), degree, kind: GenKind::Coefficient, invertible: false }
    }

    pub fn series(name: impl Into<String>) -> Self {
        Generator { name: name.into(), degree: -1, kind: GenKind::Series, invertible: false }
    }

    pub fn invertible(mut self) -> Self {
        self.invertible = true;
        self
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    gens: Vec<Generator>,
    series: Vec<usize>,
}

impl Ring {
    pub fn new(gens: Vec<Generator>) -> Result<Arc<Ring>> {
        for (i, g) in gens.iter().enumerate() {
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::Context(format!("duplicate generator name {:?}", g.name)));
            }
            if g.invertible && g.kind == GenKind::Series {
                return Err(Error::Context(format!("series variable {:?} cannot be invertible", g.name)));
            }
        }
        let series = gens
            .iter()
            .enumerate()
            .filter(|(_, g)| g.kind == GenKind::Series)
            .map(|(i, _)| i)
            .collect();
        Ok(Arc::new(Ring { gens, series }))
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Indices of the series variables, in generator order.
    pub fn series_vars(&self) -> &[usize] {
        &self.series
    }

    pub fn is_series(&self, i: usize) -> bool {
        self.gens[i].kind == GenKind::Series
    }

    /// Ring with the same coefficient generators and the given series variables.
    pub fn with_series(&self, names: &[&str]) -> Result<Arc<Ring>> {
        let mut gens: Vec<Generator> =
            self.gens.iter().filter(|g| g.kind == GenKind::Coefficient).cloned().collect();
        gens.extend(names.iter().map(|n| Generator::series(*n)));
        Ring::new(gens)
    }

    /// Ring with only the coefficient generators.
    pub fn coefficient_ring(&self) -> Result<Arc<Ring>> {
        self.with_series(&[])
    }
}

/// Exponent vector. Ordered graded-lexicographically: by total exponent,
/// then with larger leading exponents first (`x^2 < x*y < y^2` for `x`
/// before `y`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    total: i32,
    exps: Box<[i32]>,
}

impl Monomial {
    pub fn new(exps: Vec<i32>) -> Self {
        Monomial { total: exps.iter().sum(), exps: exps.into_boxed_slice() }
    }

    pub fn one(n: usize) -> Self {
        Monomial::new(vec![0; n])
    }

    pub fn exps(&self) -> &[i32] {
        &self.exps
    }

    pub fn total(&self) -> i32 {
        self.total
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Vec<i32> = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect();
        Monomial { total: self.total + other.total, exps: exps.into_boxed_slice() }
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total.cmp(&other.total).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Poly {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Poly {
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.len()), c);
        }
        p
    }

    pub fn one(ring: &Arc<Ring>) -> Poly {
        Poly::constant(ring, Scalar::one())
    }

    pub fn int(ring: &Arc<Ring>, n: i64) -> Poly {
        Poly::constant(ring, scalar::int(n))
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Poly {
        let mut exps = vec![0; ring.len()];
        exps[i] = 1;
        Poly::monomial(ring, Monomial::new(exps), Scalar::one())
    }

    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Result<Poly> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| Error::Context(format!("no generator named {name:?}")))?;
        Ok(Poly::var(ring, i))
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: Scalar) -> Poly {
        assert_eq!(m.exps.len(), ring.len(), "monomial arity does not match ring");
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I>(ring: &Arc<Ring>, terms: I) -> Poly
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut p = Poly::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.ring.len()))
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        self.check_exponents(&m);
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_exponents(&self, m: &Monomial) {
        debug_assert!(
            m.exps.iter().zip(self.ring.gens.iter()).all(|(e, g)| *e >= 0 || g.invertible),
            "negative exponent on a non-invertible generator"
        );
    }

    pub fn same_ring(&self, other: &Poly) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::Context("polynomials live over different generator lists".into()))
        }
    }

    pub fn series_weight(&self, m: &Monomial) -> i32 {
        self.ring.series.iter().map(|&i| m.exps[i]).sum()
    }

    /// Algebraic degree of a monomial.
    pub fn degree_of(&self, m: &Monomial) -> i32 {
        m.exps.iter().zip(self.ring.gens.iter()).map(|(e, g)| e * g.degree).sum()
    }

    /// Smallest series weight among the terms; `None` for zero.
    pub fn min_series_weight(&self) -> Option<i32> {
        self.terms.keys().map(|m| self.series_weight(m)).min()
    }

    pub fn max_series_weight(&self) -> Option<i32> {
        self.terms.keys().map(|m| self.series_weight(m)).max()
    }

    /// Drops every term of series weight above `order`.
    pub fn truncate(&self, order: u32) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.series_weight(m) <= order as i32)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly { ring: self.ring.clone(), terms }
    }

    /// Homogeneous component of algebraic degree `d`.
    pub fn homogeneous(&self, d: i32) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.degree_of(m) == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn degrees(&self) -> Vec<i32> {
        let mut ds: Vec<i32> = self.terms.keys().map(|m| self.degree_of(m)).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    /// Product, dropping terms whose series weight exceeds `order`.
    pub fn mul_trunc(&self, other: &Poly, order: Option<u32>) -> Poly {
        assert!(self.same_ring(other).is_ok(), "ring mismatch in polynomial product");
        let limit = order.map(|o| o as i32).unwrap_or(i32::MAX);
        let lhs: Vec<(&Monomial, &Scalar, i32)> =
            self.terms.iter().map(|(m, c)| (m, c, self.series_weight(m))).collect();
        let rhs: Vec<(&Monomial, &Scalar, i32)> =
            other.terms.iter().map(|(m, c)| (m, c, other.series_weight(m))).collect();
        let mut out: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca, wa) in &lhs {
            for (mb, cb, wb) in &rhs {
                if wa + wb > limit {
                    continue;
                }
                let prod = *ca * *cb;
                match out.entry(ma.mul(mb)) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += prod;
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Poly { ring: self.ring.clone(), terms: out }
    }

    /// Checked product; the public `poly_mul` operation.
    pub fn try_mul(&self, other: &Poly, order: Option<u32>) -> Result<Poly> {
        self.same_ring(other)?;
        Ok(self.mul_trunc(other, order))
    }

    pub fn pow_trunc(&self, n: u32, order: Option<u32>) -> Poly {
        let mut acc = Poly::one(&self.ring);
        for _ in 0..n {
            acc = acc.mul_trunc(self, order);
        }
        acc
    }

    /// Simultaneous substitution of generators. `images[i] = None` keeps
    /// generator `i`. Images must live in the same ring.
    pub fn substitute(&self, images: &[Option<Poly>], order: Option<u32>) -> Poly {
        assert_eq!(images.len(), self.ring.len());
        let mut cache: Vec<Vec<Poly>> = vec![Vec::new(); images.len()];
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut kept = vec![0; self.ring.len()];
            let mut factors: Vec<Poly> = Vec::new();
            for (i, &e) in m.exps.iter().enumerate() {
                match &images[i] {
                    None => kept[i] = e,
                    Some(img) if e > 0 => {
                        let powers = &mut cache[i];
                        if powers.is_empty() {
                            powers.push(Poly::one(&self.ring));
                        }
                        while powers.len() <= e as usize {
                            let next = powers.last().unwrap().mul_trunc(img, order);
                            powers.push(next);
                        }
                        factors.push(powers[e as usize].clone());
                    }
                    Some(_) if e == 0 => {}
                    Some(_) => panic!("cannot substitute into a negative power"),
                }
            }
            let mut term = Poly::monomial(&self.ring, Monomial::new(kept), c.clone());
            for f in &factors {
                term = term.mul_trunc(f, order);
            }
            out = &out + &term;
        }
        match order {
            Some(o) => out.truncate(o),
            None => out,
        }
    }

    /// Re-express in `target`, matching generators by name. Only generators
    /// that occur in some term need to exist in `target`.
    pub fn embed(&self, target: &Arc<Ring>) -> Result<Poly> {
        if Arc::ptr_eq(&self.ring, target) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self.ring.gens.iter().map(|g| target.index_of(&g.name)).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.len()];
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| {
                    Error::Context(format!("generator {:?} missing from target ring", self.ring.gens[i].name))
                })?;
                exps[j] += e;
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        Ok(out)
    }

    /// Groups terms by their series-variable exponents; the coefficients are
    /// returned in `coeff_ring` (matched by generator name).
    pub fn split_series(&self, coeff_ring: &Arc<Ring>) -> Result<BTreeMap<Monomial, Poly>> {
        let series = &self.ring.series;
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        let mut map = Vec::new();
        for (i, g) in self.ring.gens.iter().enumerate() {
            if g.kind == GenKind::Coefficient {
                let j = coeff_ring
                    .index_of(&g.name)
                    .ok_or_else(|| Error::Context(format!("generator {:?} missing from coefficient ring", g.name)))?;
                map.push((i, j));
            }
        }
        for (m, c) in &self.terms {
            let key = Monomial::new(series.iter().map(|&i| m.exps[i]).collect());
            let mut exps = vec![0; coeff_ring.len()];
            for &(i, j) in &map {
                exps[j] = m.exps[i];
            }
            out.entry(key)
                .or_insert_with(|| Poly::zero(coeff_ring))
                .add_term(Monomial::new(exps), c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    /// Leading term under the graded-lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        self.same_ring(d).ok()?;
        let (lm, lc) = d.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.ring);
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let t = Poly::monomial(&self.ring, m.div(&lm), c / &lc);
            rem = &rem - &t.mul_trunc(d, None);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Applies a map to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn all_integral(&self) -> bool {
        self.terms.values().all(scalar::is_integral)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert!(self.same_ring(rhs).is_ok(), "ring mismatch in polynomial sum");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert!(self.same_ring(rhs).is_ok(), "ring mismatch in polynomial difference");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_trunc(rhs, None)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.map_coeffs(|c| -c.clone())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .exps
                .iter()
                .zip(self.ring.gens.iter())
                .filter(|(e, _)| **e != 0)
                .map(|(e, g)| if *e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", scalar::render(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", scalar::render(&mag), vars.join("*"))?;
            }
        }
        Ok(())
    }
}
