//! The free `L`-module on the classes `p_m = [P^{m_1} x ... x P^{m_r}]`,
//! its pairing with `L[[t_1..t_r]]`, the Weyl action, coinvariants and the
//! duality check between coinvariants and invariants.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::intmat::{cokernel, hnf_only, right_kernel, snf, IntMatrix};
use crate::exact::poly::{Monomial, Poly, Ring};
use crate::exact::scalar::{self, Scalar};
use crate::exact::series::Series;
use crate::fgl::{pn_poly, FormalGroupLaw, LazardBasis};
use crate::twisted::{t_names, Stability, TwistedContext};
use crate::weyl::{Matrix, WeylGroup};

/// Exponent tuple, ordered by total degree and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(v: Vec<u32>) -> MultiIndex {
        MultiIndex(v)
    }

    pub fn zero(r: usize) -> MultiIndex {
        MultiIndex(vec![0; r])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self - other`, or `None` if some entry would be negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(MultiIndex)
    }

    pub fn of_degree(r: usize, n: u32) -> Vec<MultiIndex> {
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        let mut out = Vec::new();
        if r == 0 {
            if n == 0 {
                out.push(MultiIndex(vec![]));
            }
            return out;
        }
        rec(0, n, &mut vec![0; r], &mut out);
        out.sort();
        out
    }

    /// All tuples with `|m| <= n`, in order.
    pub fn up_to(r: usize, n: u32) -> Vec<MultiIndex> {
        (0..=n).flat_map(|d| MultiIndex::of_degree(r, d)).collect()
    }

    fn from_monomial(m: &Monomial) -> MultiIndex {
        MultiIndex(m.exps().iter().map(|&e| e as u32).collect())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "p_{}", parts.join(","))
    }
}

/// `sum_m c_m p_m` with `c_m` in `Q[m_1..]` (integral classes have
/// coefficients in the Lazard lattice).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BTClass {
    rank: usize,
    ring: Arc<Ring>,
    terms: BTreeMap<MultiIndex, Poly>,
}

impl BTClass {
    pub fn zero(rank: usize, ring: &Arc<Ring>) -> BTClass {
        BTClass { rank, ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn basis(ring: &Arc<Ring>, m: MultiIndex) -> BTClass {
        let mut c = BTClass::zero(m.rank(), ring);
        c.terms.insert(m, Poly::one(ring));
        c
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Poly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &MultiIndex) -> Poly {
        self.terms.get(m).cloned().unwrap_or_else(|| Poly::zero(&self.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: MultiIndex, c: &Poly) -> Result<()> {
        if m.rank() != self.rank {
            return Err(Error::Context(format!("index {m} in rank {}", self.rank)));
        }
        let c = c.embed(&self.ring)?;
        let slot = self.terms.entry(m.clone()).or_insert_with(|| Poly::zero(&self.ring));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
        Ok(())
    }

    pub fn add(&self, other: &BTClass) -> Result<BTClass> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Poly) -> Result<BTClass> {
        let c = c.embed(&self.ring)?;
        let mut out = BTClass::zero(self.rank, &self.ring);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), &(a * &c))?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> BTClass {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    /// Largest `|m|` with a nonzero coefficient.
    pub fn max_index_degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::total).max().unwrap_or(0)
    }

    /// Degree-`n` part, where `deg(c p_m) = deg c + |m|`.
    pub fn homogeneous(&self, n: i32) -> BTClass {
        let mut out = BTClass::zero(self.rank, &self.ring);
        for (m, c) in &self.terms {
            let part = c.homogeneous(n - m.total() as i32);
            if !part.is_zero() {
                out.terms.insert(m.clone(), part);
            }
        }
        out
    }

    pub fn degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> =
            self.terms.iter().flat_map(|(m, c)| c.degrees().into_iter().map(move |d| d + m.total() as i32)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

impl fmt::Display for BTClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c})*{m}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Shared tables for one rank and degree bound.
#[derive(Debug)]
pub struct BtContext {
    rank: usize,
    basis: LazardBasis,
    t_ring: Arc<Ring>,
    h_ring: Arc<Ring>,
    pn: Vec<Poly>,
    dual: OnceLock<BTreeMap<MultiIndex, Series>>,
}

impl BtContext {
    pub fn new(rank: usize, max_degree: u32) -> Result<BtContext> {
        Self::with_basis(rank, LazardBasis::new(max_degree))
    }

    pub fn with_basis(rank: usize, basis: LazardBasis) -> Result<BtContext> {
        let names = t_names(rank);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let t_ring = basis.law().series_ring(&refs)?;
        let hnames: Vec<String> = names.iter().map(|n| n.replacen('t', "h", 1)).collect();
        let hrefs: Vec<&str> = hnames.iter().map(String::as_str).collect();
        let h_ring = basis.law().series_ring(&hrefs)?;
        let pn = (0..=basis.max_degree()).map(|n| pn_poly(basis.ring(), n)).collect();
        Ok(BtContext { rank, basis, t_ring, h_ring, pn, dual: OnceLock::new() })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn max_degree(&self) -> u32 {
        self.basis.max_degree()
    }

    pub fn lazard(&self) -> &LazardBasis {
        &self.basis
    }

    pub fn law(&self) -> &FormalGroupLaw {
        self.basis.law()
    }

    /// `Q[m_1..m_D]`, the coefficient ring of classes.
    pub fn ring(&self) -> &Arc<Ring> {
        self.basis.ring()
    }

    /// Coefficients plus `t_1..t_r`; functionals live here.
    pub fn t_ring(&self) -> &Arc<Ring> {
        &self.t_ring
    }

    pub fn p(&self, m: Vec<u32>) -> BTClass {
        BTClass::basis(self.ring(), MultiIndex::new(m))
    }

    /// `t^k` as a functional truncated at the context degree.
    pub fn t_monomial(&self, k: &MultiIndex) -> Series {
        Series::new(self.t_poly(k, scalar::int(1)), self.max_degree())
    }

    fn t_poly(&self, k: &MultiIndex, c: Scalar) -> Poly {
        let mut exps = vec![0; self.t_ring.len()];
        for (slot, &v) in self.t_ring.series_vars().iter().enumerate() {
            exps[v] = k.entries()[slot] as i32;
        }
        Poly::monomial(&self.t_ring, Monomial::new(exps), c)
    }

    /// `[P^{m_1}] ... [P^{m_r}]`.
    pub fn pn_product(&self, m: &MultiIndex) -> Result<Poly> {
        let mut out = Poly::one(self.ring());
        for &e in m.entries() {
            let p = self
                .pn
                .get(e as usize)
                .ok_or(Error::DegreeOverflow { degree: e, bound: self.max_degree() })?;
            out = &out * p;
        }
        Ok(out)
    }

    /// `<t^k, p_m> = prod [P^{m_i - k_i}]`, zero unless `k <= m`.
    pub fn pair_monomial(&self, k: &MultiIndex, m: &MultiIndex) -> Result<Poly> {
        match m.checked_sub(k) {
            Some(d) => self.pn_product(&d),
            None => Ok(Poly::zero(self.ring())),
        }
    }

    fn check_functional(&self, a: &Series, x: &BTClass) -> Result<BTreeMap<MultiIndex, Poly>> {
        if x.rank() != self.rank {
            return Err(Error::Context(format!("class of rank {} in rank {}", x.rank(), self.rank)));
        }
        let need = x.max_index_degree();
        if a.order() < need {
            return Err(Error::TruncationTooSmall { have: a.order(), need });
        }
        let split = a.poly().split_series(self.ring())?;
        if split.keys().any(|k| k.exps().len() != self.rank) {
            return Err(Error::Context("functional has the wrong number of series variables".into()));
        }
        Ok(split.into_iter().map(|(k, c)| (MultiIndex::from_monomial(&k), c)).collect())
    }

    /// `<A, x>`, exact whenever `A` is known to filtration `max |m|`.
    pub fn pairing(&self, a: &Series, x: &BTClass) -> Result<Poly> {
        let split = self.check_functional(a, x)?;
        let mut out = Poly::zero(self.ring());
        for (k, ak) in &split {
            for (m, c) in x.terms() {
                if !k.le(m) {
                    continue;
                }
                out = &out + &(&(ak * c) * &self.pair_monomial(k, m)?);
            }
        }
        Ok(out)
    }

    /// Forgets the bundle: `p_m -> prod [P^{m_i}]`.
    pub fn epsilon(&self, x: &BTClass) -> Result<Poly> {
        let mut out = Poly::zero(self.ring());
        for (m, c) in x.terms() {
            out = &out + &(c * &self.pn_product(m)?);
        }
        Ok(out)
    }

    /// `t^k (cap) p_m = p_{m-k}`, zero when some entry is negative.
    pub fn chern_op(&self, a: &Series, x: &BTClass) -> Result<BTClass> {
        let split = self.check_functional(a, x)?;
        let mut out = BTClass::zero(self.rank, self.ring());
        for (k, ak) in &split {
            for (m, c) in x.terms() {
                if let Some(d) = m.checked_sub(k) {
                    out.add_term(d, &(ak * c))?;
                }
            }
        }
        Ok(out)
    }

    /// `d_{m'}` for every `|m'| <= D`, dual to the `p_m` under the pairing.
    pub fn dual_basis(&self) -> &BTreeMap<MultiIndex, Series> {
        self.dual.get_or_init(|| {
            let d = self.max_degree();
            let all = MultiIndex::up_to(self.rank, d);
            let mut out = BTreeMap::new();
            for target in &all {
                // c_k for k >= target, solved in increasing order.
                let mut coeffs: BTreeMap<MultiIndex, Poly> = BTreeMap::new();
                for k in all.iter().filter(|k| target.le(k)) {
                    let c = if k == target {
                        Poly::one(self.ring())
                    } else {
                        let mut s = Poly::zero(self.ring());
                        for (j, cj) in &coeffs {
                            if j.le(k) {
                                let dk = k.checked_sub(j).expect("j <= k");
                                s = &s + &(cj * &self.pn_product(&dk).expect("within degree bound"));
                            }
                        }
                        -&s
                    };
                    if !c.is_zero() {
                        coeffs.insert(k.clone(), c);
                    }
                }
                let mut poly = Poly::zero(&self.t_ring);
                for (k, c) in coeffs {
                    let mono = self.t_poly(&k, scalar::int(1));
                    poly = &poly + &(&c.embed(&self.t_ring).expect("coefficient ring embeds") * &mono);
                }
                out.insert(target.clone(), Series::new(poly, d));
            }
            out
        })
    }

    pub fn dual_element(&self, m: &MultiIndex) -> Result<&Series> {
        self.dual_basis()
            .get(m)
            .ok_or(Error::DegreeOverflow { degree: m.total(), bound: self.max_degree() })
    }

    /// `c_1` of the bundle with exponent row `row`: `[row_1]_F h_1 +_F ...`.
    fn chern_root(&self, row: &[i64], order: u32) -> Result<Series> {
        let law = self.law();
        let mut acc = Series::zero(&self.h_ring, order);
        for (i, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let h = Series::var(&self.h_ring, self.h_ring.series_vars()[i], order);
            let term = law.n_series(c, &h)?;
            acc = if acc.is_zero() { term } else { law.sum(&acc, &term)? };
        }
        Ok(acc)
    }

    /// `<t^k, [P^m, C]>` for all `|k| <= |m|`.
    fn twisted_values(&self, m: &MultiIndex, c: &Matrix) -> Result<BTreeMap<MultiIndex, Poly>> {
        let order = m.total();
        let roots = (0..self.rank).map(|j| self.chern_root(&c.rows()[j], order)).collect::<Result<Vec<_>>>()?;
        let mut out = BTreeMap::new();
        for k in MultiIndex::up_to(self.rank, order) {
            let mut prod = Series::one(&self.h_ring, order);
            for (j, &e) in k.entries().iter().enumerate() {
                if e > 0 {
                    prod = &prod * &roots[j].pow(e);
                }
            }
            let mut value = Poly::zero(self.ring());
            for (a, coeff) in prod.poly().split_series(self.ring())? {
                if let Some(rest) = m.checked_sub(&MultiIndex::from_monomial(&a)) {
                    value = &value + &(&coeff * &self.pn_product(&rest)?);
                }
            }
            out.insert(k, value);
        }
        Ok(out)
    }

    /// Expansion of `[P^m]` carrying the line bundles `O(1)^{C_j}` in the
    /// `p`-basis: the coefficient of `p_{m'}` is `<d_{m'}, class>`.
    pub fn product_class(&self, m: &MultiIndex, c: &Matrix) -> Result<BTClass> {
        if m.rank() != self.rank || c.dim() != self.rank {
            return Err(Error::Context(format!("rank mismatch for {m} with a {0}x{0} matrix", c.dim())));
        }
        if m.total() > self.max_degree() {
            return Err(Error::DegreeOverflow { degree: m.total(), bound: self.max_degree() });
        }
        let values = self.twisted_values(m, c)?;
        let mut out = BTClass::zero(self.rank, self.ring());
        for target in MultiIndex::up_to(self.rank, m.total()) {
            let d = self.dual_element(&target)?;
            let mut coeff = Poly::zero(self.ring());
            for (k, ak) in d.poly().split_series(self.ring())? {
                let k = MultiIndex::from_monomial(&k);
                if let Some(v) = values.get(&k) {
                    coeff = &coeff + &(&ak * v);
                }
            }
            out.add_term(target, &coeff)?;
        }
        Ok(out)
    }

    /// Exponent matrix of `w . p_m`: `C = (M_{w^-1})^T`, so that
    /// `<w.A, w.x> = <A, x>` with `w.t_i = x_{w lambda_i}`.
    pub fn twist_matrix(weyl: &WeylGroup, w: usize) -> Matrix {
        weyl.element(weyl.inverse(w)).matrix.transpose()
    }

    pub fn weyl_act_bt(&self, weyl: &WeylGroup, w: usize, x: &BTClass) -> Result<BTClass> {
        let c = Self::twist_matrix(weyl, w);
        let mut out = BTClass::zero(self.rank, self.ring());
        for (m, coeff) in x.terms() {
            let img = self.product_class(m, &c)?;
            out = out.add(&img.scale(coeff)?)?;
        }
        Ok(out)
    }

    /// The degree-`n` lattice with basis `p_m (x) L_{n-|m|}`.
    pub fn lattice(&self, n: u32) -> Result<BtLattice> {
        if n > self.max_degree() {
            return Err(Error::DegreeOverflow { degree: n, bound: self.max_degree() });
        }
        let mut index = Vec::new();
        for m in MultiIndex::up_to(self.rank, n) {
            let dl = self.basis.degree(n - m.total()).expect("degree within bound");
            for b in 0..dl.elements.len() {
                index.push((m.clone(), b));
            }
        }
        Ok(BtLattice { degree: n, index })
    }

    /// Coordinates of a homogeneous degree-`n` class on [`Self::lattice`].
    pub fn coordinates(&self, lat: &BtLattice, x: &BTClass) -> Result<Vec<BigInt>> {
        let mut out = vec![BigInt::zero(); lat.dim()];
        for (m, c) in x.terms() {
            if m.total() > lat.degree {
                return Err(Error::Context(format!("{m} exceeds degree {}", lat.degree)));
            }
            let d = lat.degree - m.total();
            let coords = self.basis.lattice_coordinates(d, c).ok_or_else(|| {
                Error::Internal(format!("coefficient {c} of {m} is not in the degree-{d} lattice"))
            })?;
            let start = lat.index.iter().position(|(mm, _)| mm == m).expect("index present");
            for (i, v) in coords.into_iter().enumerate() {
                out[start + i] = v;
            }
        }
        Ok(out)
    }

    pub fn class(&self, lat: &BtLattice, coords: &[BigInt]) -> BTClass {
        let mut out = BTClass::zero(self.rank, self.ring());
        for (v, (m, b)) in coords.iter().zip(&lat.index) {
            if v.is_zero() {
                continue;
            }
            let e = &self.basis.degree(lat.degree - m.total()).expect("in range").elements[*b];
            out.add_term(m.clone(), &e.scale(&scalar::from_big(v.clone()))).expect("same ring");
        }
        out
    }

    /// Matrix of `w` on the degree-`n` lattice.
    pub fn action_matrix(&self, weyl: &WeylGroup, w: usize, lat: &BtLattice) -> Result<IntMatrix> {
        let n = lat.dim();
        let mut out = IntMatrix::zeros(n, n);
        let c = Self::twist_matrix(weyl, w);
        let mut cache: BTreeMap<MultiIndex, BTClass> = BTreeMap::new();
        for (col, (m, b)) in lat.index.iter().enumerate() {
            if !cache.contains_key(m) {
                cache.insert(m.clone(), self.product_class(m, &c)?);
            }
            let e = &self.basis.degree(lat.degree - m.total()).expect("in range").elements[*b];
            let img = cache[m].scale(e)?;
            for (i, v) in self.coordinates(lat, &img)?.into_iter().enumerate() {
                out[(i, col)] = v;
            }
        }
        Ok(out)
    }

    /// Relations `(s - 1) v` for the simple reflections `s`, as rows. They
    /// span the same lattice as all `(w - 1) v`, since
    /// `(ws - 1) = (w - 1) s + (s - 1)`.
    pub fn relation_matrix(&self, weyl: &WeylGroup, lat: &BtLattice) -> Result<IntMatrix> {
        let n = lat.dim();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for i in 0..weyl.datum().num_simple() {
            let a = self.action_matrix(weyl, weyl.generator(i), lat)?;
            let at = a.transpose();
            for (col, mut row) in at.row_vecs().into_iter().enumerate() {
                row[col] -= BigInt::one();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        Ok(IntMatrix::from_rows(&rows, n))
    }

    pub fn coinvariants(&self, weyl: &WeylGroup, n: u32) -> Result<CoinvariantsReport> {
        self.check_rank(weyl)?;
        let lat = self.lattice(n)?;
        let rel = self.relation_matrix(weyl, &lat)?;
        let coker = cokernel(&rel.transpose());
        let relation_rank = rel.rank();
        let quotient = right_kernel(&rel);
        let mut average = IntMatrix::zeros(lat.dim(), lat.dim());
        for w in 0..weyl.order() {
            let a = self.action_matrix(weyl, w, &lat)?;
            for i in 0..lat.dim() {
                for j in 0..lat.dim() {
                    average[(i, j)] += &a[(i, j)];
                }
            }
        }
        let rational_rank = average.rank();
        Ok(CoinvariantsReport {
            degree: n,
            lattice_rank: lat.dim(),
            relation_rank,
            free_rank: coker.free_rank,
            divisors: coker.divisors,
            quotient,
            rational_rank,
            stable: true,
            lattice: lat,
        })
    }

    fn check_rank(&self, weyl: &WeylGroup) -> Result<()> {
        if weyl.datum().rank() != self.rank {
            return Err(Error::Context(format!("root datum of rank {} in rank {}", weyl.datum().rank(), self.rank)));
        }
        Ok(())
    }

    /// Compares the degree-`n` torsion-free coinvariants with the truncated
    /// invariants through the pairing.
    ///
    /// Every invariant `A` of total degree `e` in `[-n, 0]` gives the integral
    /// functionals `v -> (j-th lattice coordinate of <A, v>)` on the degree-`n`
    /// lattice. They vanish on relations, so they factor through the
    /// torsion-free quotient; the verdict reads off the Smith form of the
    /// induced map to its dual.
    pub fn duality_check(&self, twisted: &TwistedContext, n: u32, tau: &BigInt) -> Result<DualityReport> {
        let weyl = twisted.weyl();
        self.check_rank(weyl)?;
        if twisted.order() < n {
            return Err(Error::TruncationTooSmall { have: twisted.order(), need: n });
        }
        let coinv = self.coinvariants(weyl, n)?;
        let lat = &coinv.lattice;
        let rel = self.relation_matrix(weyl, lat)?;
        let ann = &coinv.quotient;
        let q = ann.rows();

        let mut functionals: Vec<Vec<BigInt>> = Vec::new();
        let mut blocks = Vec::new();
        let mut stability = Stability::Stable;
        let mut averaging_ok = true;
        let basis_vectors: Vec<BTClass> = (0..lat.dim())
            .map(|i| {
                let mut e = vec![BigInt::zero(); lat.dim()];
                e[i] = BigInt::one();
                self.class(lat, &e)
            })
            .collect();
        for e in -(n as i32)..=0 {
            let block = twisted.invariants_truncated(&self.basis, e, n)?;
            averaging_ok &= block.rational_check();
            stability = match (stability, block.stability) {
                (Stability::Unstable, _) | (_, Stability::Unstable) => Stability::Unstable,
                (Stability::Unchecked, _) | (_, Stability::Unchecked) => Stability::Unchecked,
                _ => Stability::Stable,
            };
            let target = (n as i32 + e) as u32;
            let width = self.basis.degree(target).expect("in range").elements.len();
            for row in block.kernel.row_vecs() {
                let a = twisted.element(&block.space, &row)?;
                let a = Series::new(a.poly().embed(&self.t_ring)?, n);
                let mut cols: Vec<Vec<BigInt>> = vec![Vec::with_capacity(lat.dim()); width];
                for v in &basis_vectors {
                    let val = self.pairing(&a, v)?;
                    let coords = self.basis.lattice_coordinates(target, &val).ok_or_else(|| {
                        Error::Internal(format!("pairing value {val} is not in the degree-{target} lattice"))
                    })?;
                    for (j, c) in coords.into_iter().enumerate() {
                        cols[j].push(c);
                    }
                }
                functionals.extend(cols);
            }
            blocks.push(BlockSummary {
                total_degree: e,
                rank: block.rank(),
                rational_rank: block.rational_rank,
                stability: block.stability,
            });
        }
        let s = IntMatrix::from_rows(&functionals, lat.dim());
        let relations_annihilated = s.mul(&rel.transpose()).is_zero();

        // S = X * Ann; Ann is a saturated HNF basis, so X is integral.
        let (h, pivots) = hnf_only(ann);
        debug_assert_eq!(&h, ann);
        let mut x_rows = Vec::with_capacity(s.rows());
        for row in s.row_vecs() {
            let coords = crate::exact::intmat::hnf_coordinates(ann, &pivots, &row)
                .ok_or_else(|| Error::Internal("functional does not factor through the quotient".into()))?;
            x_rows.push(coords);
        }
        let x = IntMatrix::from_rows(&x_rows, q);
        let d = snf(&x).diagonal();
        let pairing_rank = d.len();
        let rational = pairing_rank == q;
        let perfect_z = rational && d.iter().all(|v| v.abs().is_one());
        let perfect_tau = rational && d.iter().all(|v| scalar::is_tau_integral(&Scalar::new(BigInt::one(), v.abs()), tau));
        let kernel_match = right_kernel(&s) == right_kernel(ann);
        let verdict = if !relations_annihilated || !rational || !averaging_ok {
            Verdict::Failed
        } else if stability == Stability::Unstable {
            Verdict::RationalOnly
        } else if perfect_z {
            Verdict::PerfectOverZ
        } else if perfect_tau {
            Verdict::PerfectAfterInvertingTau
        } else {
            Verdict::RationalOnly
        };
        Ok(DualityReport {
            degree: n,
            tau: tau.clone(),
            lattice_rank: lat.dim(),
            quotient_rank: q,
            coinvariant_divisors: coinv.divisors.clone(),
            functionals: s.rows(),
            pairing_rank,
            pairing_divisors: d.into_iter().filter(|v| !v.is_one()).collect(),
            relations_annihilated,
            kernel_match,
            averaging_ok,
            stability,
            blocks,
            verdict,
        })
    }
}

/// Coordinates `(m, index into the basis of L_{n-|m|})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BtLattice {
    pub degree: u32,
    pub index: Vec<(MultiIndex, usize)>,
}

impl BtLattice {
    pub fn dim(&self) -> usize {
        self.index.len()
    }
}

#[derive(Clone, Debug)]
pub struct CoinvariantsReport {
    pub degree: u32,
    pub lattice_rank: usize,
    pub relation_rank: usize,
    pub free_rank: usize,
    /// Torsion elementary divisors (`> 1`).
    pub divisors: Vec<BigInt>,
    /// Saturated HNF basis of the functionals vanishing on relations; the
    /// torsion-free quotient is the image of `v -> quotient * v`.
    pub quotient: IntMatrix,
    /// Rank of the averaging operator; equals `free_rank`.
    pub rational_rank: usize,
    /// No truncation enters, so this is always true.
    pub stable: bool,
    pub lattice: BtLattice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    PerfectOverZ,
    PerfectAfterInvertingTau,
    RationalOnly,
    Failed,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::PerfectOverZ => "perfect over Z",
            Verdict::PerfectAfterInvertingTau => "perfect over Z[1/tau]",
            Verdict::RationalOnly => "rational only",
            Verdict::Failed => "failed",
        }
    }

    /// The rational statement holds.
    pub fn is_success(self) -> bool {
        self != Verdict::Failed
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSummary {
    pub total_degree: i32,
    pub rank: usize,
    pub rational_rank: usize,
    pub stability: Stability,
}

#[derive(Clone, Debug)]
pub struct DualityReport {
    pub degree: u32,
    pub tau: BigInt,
    pub lattice_rank: usize,
    pub quotient_rank: usize,
    pub coinvariant_divisors: Vec<BigInt>,
    pub functionals: usize,
    pub pairing_rank: usize,
    /// Elementary divisors `> 1` of the induced map to the dual.
    pub pairing_divisors: Vec<BigInt>,
    pub relations_annihilated: bool,
    pub kernel_match: bool,
    pub averaging_ok: bool,
    pub stability: Stability,
    pub blocks: Vec<BlockSummary>,
    pub verdict: Verdict,
}

impl DualityReport {
    /// The rank and kernel conditions over the rationals.
    pub fn rational_check(&self) -> bool {
        self.relations_annihilated && self.pairing_rank == self.quotient_rank && self.kernel_match && self.averaging_ok
    }
}
