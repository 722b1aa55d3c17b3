//! Formal group laws and the integral Lazard lattice.
//!
//! The universal law is built over `Q[m_1, ..., m_N]` from the logarithm
//! `l(x) = x + sum m_i x^{i+1}` as `F = exp(l(x) + l(y))`. The Lazard ring is
//! the subring generated over `Z` by the coefficients `a_ij` of `F`; since it
//! is torsion-free, the embedding into `Q[m]` is faithful and each graded
//! piece `L_n` is a full-rank lattice found by Hermite reduction of all
//! degree-`n` monomials in the `a_ij`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::intmat::{IntMatrix, Lattice};
use crate::exact::poly::{Generator, Monomial, Poly, Ring};
use crate::exact::scalar::{self, Scalar};
use crate::exact::series::Series;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LawKind {
    Additive,
    Multiplicative,
    /// Universal law through logarithm coefficients `m_1..m_N`.
    Universal(u32),
}

impl fmt::Display for LawKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawKind::Additive => write!(f, "additive"),
            LawKind::Multiplicative => write!(f, "multiplicative"),
            LawKind::Universal(n) => write!(f, "universal({n})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FormalGroupLaw {
    kind: LawKind,
    ring: Arc<Ring>,
    law: Series,
    inverse: Series,
}

impl FormalGroupLaw {
    /// `F(x, y) = x + y`.
    pub fn additive(order: u32) -> FormalGroupLaw {
        let ring = Ring::new(vec![Generator::series("x"), Generator::series("y")]).expect("static ring");
        let x = Poly::var(&ring, 0);
        let y = Poly::var(&ring, 1);
        Self::from_law(LawKind::Additive, Series::new(&x + &y, order.max(1)))
    }

    /// `F(x, y) = x + y + beta x y` with `beta` invertible of degree 1.
    pub fn multiplicative(order: u32) -> FormalGroupLaw {
        let ring = Ring::new(vec![
            Generator::coefficient("beta", 1).invertible(),
            Generator::series("x"),
            Generator::series("y"),
        ])
        .expect("static ring");
        let b = Poly::var(&ring, 0);
        let x = Poly::var(&ring, 1);
        let y = Poly::var(&ring, 2);
        let f = &(&x + &y) + &(&b * &(&x * &y));
        Self::from_law(LawKind::Multiplicative, Series::new(f, order.max(1)))
    }

    /// Universal law over `Q[m_1..m_n]`, truncated at order `n + 1`.
    pub fn universal(n: u32) -> FormalGroupLaw {
        let n = n.max(1);
        let order = n + 1;
        let ring = universal_ring(n, &["x", "y"]);
        let log_x = logarithm(&ring, n, "x");
        let log_y = logarithm(&ring, n, "y");
        let exp = log_x.reverse(order).expect("logarithm is x + higher order");
        let zero = Series::zero(&ring, order);
        let u = &log_x + &log_y;
        let law = exp.compose(&[u, zero], order).expect("arguments have no constant term");
        Self::from_law(LawKind::Universal(n), law)
    }

    fn from_law(kind: LawKind, law: Series) -> FormalGroupLaw {
        let ring = law.ring().clone();
        let inverse = solve_inverse(&law).expect("formal inverse exists for any law");
        FormalGroupLaw { kind, ring, law, inverse }
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    /// `F(x, y)` in the ring (coefficients, x, y).
    pub fn series(&self) -> &Series {
        &self.law
    }

    /// `iota(x)` with `F(x, iota(x)) = 0`.
    pub fn inverse_series(&self) -> &Series {
        &self.inverse
    }

    pub fn order(&self) -> u32 {
        self.law.order()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn coefficient_ring(&self) -> Arc<Ring> {
        self.ring.coefficient_ring().expect("coefficient generators are distinct")
    }

    /// Ring with this law's coefficient generators and the given series variables.
    pub fn series_ring(&self, names: &[&str]) -> Result<Arc<Ring>> {
        self.ring.with_series(names)
    }

    /// Coefficient `a_ij` of `x^i y^j`, in the coefficient ring.
    pub fn coefficient(&self, i: u32, j: u32) -> Poly {
        let coeffs = self.coefficient_ring();
        let split = self.law.poly().split_series(&coeffs).expect("coefficient ring matches");
        split
            .get(&Monomial::new(vec![i as i32, j as i32]))
            .cloned()
            .unwrap_or_else(|| Poly::zero(&coeffs))
    }

    /// `a +_F b`.
    pub fn sum(&self, a: &Series, b: &Series) -> Result<Series> {
        let order = a.order().min(b.order()).min(self.order());
        self.law.compose(&[a.clone(), b.clone()], order)
    }

    /// `-_F a`.
    pub fn inverse(&self, a: &Series) -> Result<Series> {
        let zero = Series::zero(a.ring(), a.order());
        let order = a.order().min(self.order());
        self.inverse.compose(&[a.clone(), zero], order)
    }

    /// `[n]_F t`.
    pub fn n_series(&self, n: i64, t: &Series) -> Result<Series> {
        if !t.has_zero_constant_term() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = t.order().min(self.order());
        let base = t.truncate(order);
        let mut acc = Series::zero(t.ring(), order);
        for _ in 0..n.unsigned_abs() {
            acc = self.sum(&acc, &base)?;
        }
        if n < 0 {
            acc = self.inverse(&acc)?;
        }
        Ok(acc)
    }

    /// `F(x, 0) - x` and `F(0, y) - y`.
    pub fn unit_residuals(&self) -> Result<(Series, Series)> {
        let order = self.order();
        let x = Series::var(&self.ring, self.ring.series_vars()[0], order);
        let y = Series::var(&self.ring, self.ring.series_vars()[1], order);
        let zero = Series::zero(&self.ring, order);
        let fx0 = self.sum(&x, &zero)?;
        let f0y = self.sum(&zero, &y)?;
        Ok((&fx0 - &x, &f0y - &y))
    }

    /// `F(x, y) - F(y, x)`.
    pub fn commutativity_residual(&self) -> Result<Series> {
        let order = self.order();
        let x = Series::var(&self.ring, self.ring.series_vars()[0], order);
        let y = Series::var(&self.ring, self.ring.series_vars()[1], order);
        Ok(&self.sum(&x, &y)? - &self.sum(&y, &x)?)
    }

    /// `F(F(x, y), z) - F(x, F(y, z))` up to `order`.
    pub fn associativity_residual(&self, order: u32) -> Result<Series> {
        let order = order.min(self.order());
        let ring = self.series_ring(&["x", "y", "z"])?;
        let var = |i: usize| Series::var(&ring, ring.series_vars()[i], order);
        let (x, y, z) = (var(0), var(1), var(2));
        let left = self.sum(&self.sum(&x, &y)?, &z)?;
        let right = self.sum(&x, &self.sum(&y, &z)?)?;
        Ok(&left - &right)
    }
}

fn universal_ring(n: u32, series: &[&str]) -> Arc<Ring> {
    let mut gens: Vec<Generator> = (1..=n).map(|i| Generator::coefficient(format!("m{i}"), i as i32)).collect();
    gens.extend(series.iter().map(|s| Generator::series(*s)));
    Ring::new(gens).expect("distinct generator names")
}

/// `x + sum_{i <= n} m_i x^{i+1}` in the variable `var`.
fn logarithm(ring: &Arc<Ring>, n: u32, var: &str) -> Series {
    let x = Poly::var_named(ring, var).expect("variable present");
    let mut l = x.clone();
    let mut power = x.clone();
    for i in 1..=n {
        power = &power * &x;
        let m = Poly::var_named(ring, &format!("m{i}")).expect("m_i present");
        l = &l + &(&m * &power);
    }
    Series::new(l, n + 1)
}

/// Solves `F(x, y) = 0` for `y = iota(x)` by fixed-point iteration on
/// `y = -x - G(x, y)` where `G = F - x - y`.
fn solve_inverse(law: &Series) -> Result<Series> {
    let ring = law.ring().clone();
    let order = law.order();
    let sv = ring.series_vars();
    let x = Poly::var(&ring, sv[0]);
    let y = Poly::var(&ring, sv[1]);
    let g = Series::new(&(law.poly() - &x) - &y, order);
    let xs = Series::new(x.clone(), order);
    let mut iota = Series::new(-&x, order);
    for _ in 0..order {
        let tail = g.compose(&[xs.clone(), iota.clone()], order)?;
        iota = Series::new(&(-&x) - tail.poly(), order);
    }
    Ok(iota)
}

/// Integral structure on the coefficient ring of a law, degree by degree.
pub trait CoefficientLattice {
    fn coefficient_ring(&self) -> &Arc<Ring>;

    /// Integral basis of the degree-`d` piece (empty when that piece is zero
    /// or beyond the available range).
    fn basis(&self, d: i32) -> Vec<Poly>;

    /// Coordinates of a degree-`d` element on [`Self::basis`], or `None` if
    /// it is not in the integral lattice.
    fn coordinates(&self, d: i32, p: &Poly) -> Option<Vec<BigInt>>;

    fn rank(&self, d: i32) -> usize {
        self.basis(d).len()
    }

    /// Largest degree with a computed basis, if bounded.
    fn max_degree(&self) -> Option<i32> {
        None
    }
}

/// `Z` in degree 0: the coefficient ring of the additive law.
#[derive(Clone, Debug)]
pub struct IntegerCoefficients {
    ring: Arc<Ring>,
}

impl IntegerCoefficients {
    pub fn new(ring: Arc<Ring>) -> Self {
        IntegerCoefficients { ring }
    }
}

impl CoefficientLattice for IntegerCoefficients {
    fn coefficient_ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    fn basis(&self, d: i32) -> Vec<Poly> {
        if d == 0 {
            vec![Poly::one(&self.ring)]
        } else {
            Vec::new()
        }
    }

    fn coordinates(&self, d: i32, p: &Poly) -> Option<Vec<BigInt>> {
        if p.is_zero() {
            return Some(vec![BigInt::zero(); self.rank(d)]);
        }
        if d != 0 || p.len() != 1 {
            return None;
        }
        scalar::to_integer(&p.constant_term()).map(|c| vec![c])
    }
}

/// `Z[beta, beta^-1]`: one generator `beta^d` in every degree.
#[derive(Clone, Debug)]
pub struct LaurentCoefficients {
    ring: Arc<Ring>,
}

impl LaurentCoefficients {
    pub fn new(ring: Arc<Ring>) -> Self {
        LaurentCoefficients { ring }
    }
}

impl CoefficientLattice for LaurentCoefficients {
    fn coefficient_ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    fn basis(&self, d: i32) -> Vec<Poly> {
        vec![Poly::monomial(&self.ring, Monomial::new(vec![d]), Scalar::one())]
    }

    fn coordinates(&self, d: i32, p: &Poly) -> Option<Vec<BigInt>> {
        if p.is_zero() {
            return Some(vec![BigInt::zero()]);
        }
        let p = p.embed(&self.ring).ok()?;
        if p.len() != 1 {
            return None;
        }
        let c = p.coeff(&Monomial::new(vec![d]));
        if c.is_zero() {
            return None;
        }
        scalar::to_integer(&c).map(|c| vec![c])
    }
}

/// The lattice `L_n` inside `Q[m]_n`.
#[derive(Clone, Debug)]
pub struct DegreeLattice {
    pub degree: u32,
    /// Monomials of weighted degree `n`, in canonical order; coordinates
    /// below are on this list.
    pub monomials: Vec<Monomial>,
    pub lattice: Lattice,
    pub elements: Vec<Poly>,
}

/// Per-degree integral bases of the Lazard ring up to a maximal degree.
#[derive(Clone, Debug)]
pub struct LazardBasis {
    max_degree: u32,
    law: FormalGroupLaw,
    ring: Arc<Ring>,
    degrees: Vec<DegreeLattice>,
}

impl LazardBasis {
    pub fn new(max_degree: u32) -> LazardBasis {
        let law = FormalGroupLaw::universal(max_degree.max(1));
        let ring = law.coefficient_ring();
        let n = max_degree as usize;

        // a_ij with 1 <= i <= j and degree i + j - 1 <= N.
        let mut gens: Vec<(usize, Poly)> = Vec::new();
        for d in 1..=n {
            for i in 1..=d.div_ceil(2) {
                let j = d + 1 - i;
                if i <= j {
                    gens.push((d, law.coefficient(i as u32, j as u32)));
                }
            }
        }

        // monomials[d] = (index of last generator used, product)
        let mut monomials: Vec<Vec<(usize, Poly)>> = vec![Vec::new(); n + 1];
        monomials[0].push((0, Poly::one(&ring)));
        for d in 1..=n {
            let mut level = Vec::new();
            for (g, (gd, gp)) in gens.iter().enumerate() {
                if *gd > d {
                    continue;
                }
                for (last, p) in &monomials[d - gd] {
                    if d - gd == 0 || *last <= g {
                        level.push((g, p * gp));
                    }
                }
            }
            monomials[d] = level;
        }

        let degrees = (0..=n)
            .map(|d| {
                let monos = weighted_monomials(&ring, d as u32);
                let rows: Vec<Vec<BigInt>> = monomials[d]
                    .iter()
                    .map(|(_, p)| {
                        monos
                            .iter()
                            .map(|m| scalar::to_integer(&p.coeff(m)).expect("a_ij are integral in m"))
                            .collect()
                    })
                    .collect();
                let lattice = Lattice::from_generators(&IntMatrix::from_rows(&rows, monos.len()));
                let elements = lattice
                    .basis()
                    .row_vecs()
                    .into_iter()
                    .map(|row| {
                        Poly::from_terms(
                            &ring,
                            monos.iter().cloned().zip(row.into_iter().map(scalar::from_big)),
                        )
                    })
                    .collect();
                DegreeLattice { degree: d as u32, monomials: monos, lattice, elements }
            })
            .collect();
        LazardBasis { max_degree, law, ring, degrees }
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn law(&self) -> &FormalGroupLaw {
        &self.law
    }

    /// `Q[m_1..m_N]`.
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn degree(&self, n: u32) -> Option<&DegreeLattice> {
        self.degrees.get(n as usize)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.lattice.rank()).collect()
    }

    /// Coordinates of `p` (homogeneous of degree `n`) on the basis of `L_n`.
    pub fn lattice_coordinates(&self, n: u32, p: &Poly) -> Option<Vec<BigInt>> {
        let dl = self.degree(n)?;
        let p = p.embed(&self.ring).ok()?;
        let mut v = Vec::with_capacity(dl.monomials.len());
        let mut seen = 0;
        for m in &dl.monomials {
            let c = p.coeff(m);
            if !c.is_zero() {
                seen += 1;
            }
            v.push(scalar::to_integer(&c)?);
        }
        if seen != p.len() {
            return None;
        }
        dl.lattice.coordinates(&v)
    }

    /// Polynomial with the given coordinates on the basis of `L_n`.
    pub fn element(&self, n: u32, coords: &[BigInt]) -> Poly {
        let dl = &self.degrees[n as usize];
        let mut out = Poly::zero(&self.ring);
        for (c, e) in coords.iter().zip(dl.elements.iter()) {
            out = &out + &e.scale(&scalar::from_big(c.clone()));
        }
        out
    }

    /// `[P^n] = (n + 1) m_n`, certified to lie in `L_n`.
    pub fn pn_class(&self, n: u32) -> Result<LElement> {
        if n > self.max_degree {
            return Err(Error::DegreeOverflow { degree: n, bound: self.max_degree });
        }
        let p = pn_poly(&self.ring, n);
        if self.lattice_coordinates(n, &p).is_none() {
            return Err(Error::Internal(format!("[P^{n}] = {p} is not in the degree-{n} lattice")));
        }
        Ok(LElement::new(p))
    }
}

impl CoefficientLattice for LazardBasis {
    fn coefficient_ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    fn basis(&self, d: i32) -> Vec<Poly> {
        if d < 0 {
            return Vec::new();
        }
        self.degree(d as u32).map(|dl| dl.elements.clone()).unwrap_or_default()
    }

    fn coordinates(&self, d: i32, p: &Poly) -> Option<Vec<BigInt>> {
        if d < 0 {
            return p.is_zero().then(Vec::new);
        }
        self.lattice_coordinates(d as u32, p)
    }

    fn max_degree(&self) -> Option<i32> {
        Some(self.max_degree as i32)
    }
}

/// `(n + 1) m_n` in a ring containing `m_1..m_n`; `1` for `n = 0`.
pub fn pn_poly(ring: &Arc<Ring>, n: u32) -> Poly {
    if n == 0 {
        return Poly::one(ring);
    }
    let m = Poly::var_named(ring, &format!("m{n}")).expect("m_n present in ring");
    m.scale(&scalar::int(n as i64 + 1))
}

/// Monomials in `m_1, m_2, ...` of weighted degree `n`, sorted.
fn weighted_monomials(ring: &Arc<Ring>, n: u32) -> Vec<Monomial> {
    let k = ring.len();
    let mut out = Vec::new();
    let mut exps = vec![0i32; k];
    fn rec(i: usize, left: u32, exps: &mut Vec<i32>, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::new(exps.clone()));
            return;
        }
        if i == exps.len() {
            return;
        }
        let w = i as u32 + 1;
        let mut e = 0;
        while e * w <= left {
            exps[i] = e as i32;
            rec(i + 1, left - e * w, exps, out);
            e += 1;
        }
        exps[i] = 0;
    }
    rec(0, n, &mut exps, &mut out);
    out.sort();
    out
}

/// Number of partitions of `n`.
pub fn partition_count(n: u32) -> usize {
    let n = n as usize;
    let mut p = vec![0usize; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for s in part..=n {
            p[s] += p[s - part];
        }
    }
    p[n]
}

/// An element of `L`, stored through its image in `Q[m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LElement {
    poly: Poly,
}

impl LElement {
    pub fn new(poly: Poly) -> LElement {
        LElement { poly }
    }

    pub fn zero(ring: &Arc<Ring>) -> LElement {
        LElement { poly: Poly::zero(ring) }
    }

    pub fn one(ring: &Arc<Ring>) -> LElement {
        LElement { poly: Poly::one(ring) }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn add(&self, other: &LElement) -> LElement {
        LElement { poly: &self.poly + &other.poly }
    }

    pub fn mul(&self, other: &LElement) -> LElement {
        LElement { poly: &self.poly * &other.poly }
    }

    pub fn scale(&self, c: &Scalar) -> LElement {
        LElement { poly: self.poly.scale(c) }
    }

    pub fn neg(&self) -> LElement {
        LElement { poly: -&self.poly }
    }

    /// Lattice coordinates per homogeneous degree; errors when the element is
    /// not integral.
    pub fn coordinates(&self, basis: &LazardBasis) -> Result<BTreeMap<u32, Vec<BigInt>>> {
        let mut out = BTreeMap::new();
        for d in self.poly.degrees() {
            let part = self.poly.homogeneous(d);
            let coords = (d >= 0)
                .then(|| basis.lattice_coordinates(d as u32, &part))
                .flatten()
                .ok_or_else(|| Error::Internal(format!("{part} is not in the integral Lazard lattice")))?;
            out.insert(d as u32, coords);
        }
        Ok(out)
    }

    pub fn is_integral(&self, basis: &LazardBasis) -> bool {
        self.coordinates(basis).is_ok()
    }
}

impl fmt::Display for LElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}
