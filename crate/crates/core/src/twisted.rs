//! The twisted group algebra `R[[M]]` of a character lattice over a formal
//! group law, presented as power series in `t_i = x_{lambda_i}`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::intmat::{right_kernel, row_lattice_basis, IntMatrix};
use crate::exact::poly::{Monomial, Poly, Ring};
use crate::exact::scalar;
use crate::exact::series::Series;
use crate::fgl::{CoefficientLattice, FormalGroupLaw, LawKind};
use crate::weyl::{RootDatum, WeylGroup};

/// Elements of the twisted algebra: truncated series in `t_1..t_r`.
pub type TwistedElement = Series;

#[derive(Debug)]
pub struct TwistedContext {
    law: FormalGroupLaw,
    datum: RootDatum,
    weyl: WeylGroup,
    order: u32,
    ring: Arc<Ring>,
    coefficients: Arc<Ring>,
    images: Vec<OnceLock<Vec<Series>>>,
}

/// Names of the series variables for rank `r`: `t` alone in rank one.
pub fn t_names(r: usize) -> Vec<String> {
    if r == 1 {
        vec!["t".to_string()]
    } else {
        (1..=r).map(|i| format!("t{i}")).collect()
    }
}

/// All exponent vectors of total degree `f` in `r` variables, sorted.
pub fn monomials_of_degree(r: usize, f: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        if f == 0 {
            out.push(Monomial::new(vec![]));
        }
        return out;
    }
    rec(0, f as i32, &mut vec![0; r], &mut out);
    out.sort();
    out
}

impl TwistedContext {
    pub fn new(law: FormalGroupLaw, datum: RootDatum, order: u32) -> Result<TwistedContext> {
        if order == 0 {
            return Err(Error::Context("truncation order must be at least 1".into()));
        }
        if law.order() < order {
            return Err(Error::TruncationTooSmall { have: law.order(), need: order });
        }
        let weyl = WeylGroup::enumerate(&datum)?;
        let names = t_names(datum.rank());
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let ring = law.series_ring(&refs)?;
        let coefficients = law.coefficient_ring();
        let images = (0..weyl.order()).map(|_| OnceLock::new()).collect();
        Ok(TwistedContext { law, datum, weyl, order, ring, coefficients, images })
    }

    pub fn law(&self) -> &FormalGroupLaw {
        &self.law
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    /// Coefficients of the law plus `t_1..t_r`.
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn coefficient_ring(&self) -> &Arc<Ring> {
        &self.coefficients
    }

    pub fn t(&self, i: usize) -> Series {
        Series::var(&self.ring, self.ring.series_vars()[i], self.order)
    }

    pub fn zero(&self) -> Series {
        Series::zero(&self.ring, self.order)
    }

    pub fn one(&self) -> Series {
        Series::one(&self.ring, self.order)
    }

    /// `x_m = [m_1]_F t_1 +_F ... +_F [m_r]_F t_r`.
    pub fn character_class(&self, m: &[i64]) -> Result<Series> {
        if m.len() != self.rank() {
            return Err(Error::Context(format!("character of length {} in rank {}", m.len(), self.rank())));
        }
        let mut acc = self.zero();
        for (i, &n) in m.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let term = self.law.n_series(n, &self.t(i))?;
            acc = if acc.is_zero() { term } else { self.law.sum(&acc, &term)? };
        }
        Ok(acc)
    }

    pub fn twisted_mul(&self, u: &Series, v: &Series) -> Series {
        (u * v).truncate(self.order)
    }

    /// `x_m +_F x_{m'} = x_{m + m'}` up to truncation.
    pub fn relations_check(&self, m: &[i64], m2: &[i64]) -> Result<bool> {
        let lhs = self.law.sum(&self.character_class(m)?, &self.character_class(m2)?)?;
        let sum: Vec<i64> = m.iter().zip(m2).map(|(a, b)| a + b).collect();
        Ok(lhs == self.character_class(&sum)?)
    }

    /// `(1 + beta x_m)(1 + beta x_{m'}) = 1 + beta x_{m + m'}`; only for the
    /// multiplicative law.
    pub fn multiplicative_relation(&self, m: &[i64], m2: &[i64]) -> Result<bool> {
        if self.law.kind() != LawKind::Multiplicative {
            return Err(Error::Context(format!("{} law has no beta", self.law.kind())));
        }
        let beta = Poly::var_named(&self.ring, "beta")?;
        let q = |v: &[i64]| -> Result<Series> { Ok(&self.one() + &self.character_class(v)?.mul_poly(&beta)) };
        let sum: Vec<i64> = m.iter().zip(m2).map(|(a, b)| a + b).collect();
        Ok(self.twisted_mul(&q(m)?, &q(m2)?) == q(&sum)?)
    }

    /// Images `w . t_i = x_{w lambda_i}`.
    pub fn weyl_images(&self, w: usize) -> Result<&[Series]> {
        if let Some(v) = self.images[w].get() {
            return Ok(v);
        }
        let m = &self.weyl.element(w).matrix;
        let imgs = (0..self.rank()).map(|i| self.character_class(&m.column(i))).collect::<Result<Vec<_>>>()?;
        Ok(self.images[w].get_or_init(|| imgs))
    }

    /// Ring endomorphism `t_i -> x_{w lambda_i}`.
    pub fn weyl_act_series(&self, w: usize, u: &Series) -> Result<Series> {
        if w >= self.weyl.order() {
            return Err(Error::IndexOutOfRange { index: w, len: self.weyl.order() });
        }
        let u = u.embed(&self.ring)?;
        if self.rank() == 0 {
            return Ok(u);
        }
        u.compose(self.weyl_images(w)?, self.order)
    }

    /// Integral invariants of total degree `e` modulo filtration `> cap`.
    ///
    /// The truncated space is `sum_{f <= cap} L_{e+f} (x) t^f`, which every
    /// `w` preserves; invariance under the simple reflections is equivalent
    /// to invariance under the whole group.
    pub fn invariant_block(&self, lattice: &dyn CoefficientLattice, e: i32, cap: u32) -> Result<InvariantBlock> {
        if cap > self.order {
            return Err(Error::TruncationTooSmall { have: self.order, need: cap });
        }
        let space = TruncatedSpace::new(lattice, self.rank(), e, cap);
        let n = space.dim();
        let gens: Vec<usize> = (0..self.datum.num_simple()).map(|i| self.weyl.generator(i)).collect();
        let kernel = if gens.is_empty() {
            IntMatrix::identity(n)
        } else {
            let mut rows: Vec<Vec<BigInt>> = Vec::new();
            for &g in &gens {
                let a = self.action_matrix(lattice, &space, g)?;
                let mut d = a;
                for i in 0..n {
                    d[(i, i)] -= BigInt::from(1);
                }
                rows.extend(d.row_vecs());
            }
            right_kernel(&IntMatrix::from_rows(&rows, n))
        };

        let mut average = IntMatrix::zeros(n, n);
        for w in 0..self.weyl.order() {
            let a = self.action_matrix(lattice, &space, w)?;
            for i in 0..n {
                for j in 0..n {
                    average[(i, j)] += &a[(i, j)];
                }
            }
        }
        let rational_rank = average.rank();

        let mut bidegree_ranks = BTreeMap::new();
        for row in kernel.row_vecs() {
            let pivot = row.iter().position(|x| !x.is_zero()).expect("kernel rows are nonzero");
            let f = space.index[pivot].0;
            *bidegree_ranks.entry((f, e + f as i32)).or_insert(0) += 1;
        }
        Ok(InvariantBlock { total_degree: e, cap, space, kernel, bidegree_ranks, rational_rank, stability: Stability::Unchecked })
    }

    /// [`Self::invariant_block`] plus a stability check against `cap + 2`.
    pub fn invariants_truncated(&self, lattice: &dyn CoefficientLattice, e: i32, cap: u32) -> Result<InvariantBlock> {
        let mut block = self.invariant_block(lattice, e, cap)?;
        let reach = e + cap as i32 + 2;
        let in_range = lattice.max_degree().is_none_or(|d| reach <= d);
        if cap + 2 <= self.order && in_range {
            let wide = self.invariant_block(lattice, e, cap + 2)?;
            let n = block.space.dim();
            let projected: Vec<Vec<BigInt>> = wide.kernel.row_vecs().into_iter().map(|r| r[..n].to_vec()).collect();
            let projected = row_lattice_basis(&IntMatrix::from_rows(&projected, n));
            block.stability = if projected == block.kernel { Stability::Stable } else { Stability::Unstable };
        }
        Ok(block)
    }

    /// Blocks for every total degree `e` with coefficient degrees `<= bound`
    /// and filtration `<= order`.
    pub fn invariants_upto(&self, lattice: &dyn CoefficientLattice, bound: i32) -> Result<Vec<InvariantBlock>> {
        let n = self.order as i32;
        (-n..=bound)
            .map(|e| {
                let cap = n.min(bound - e) as u32;
                self.invariants_truncated(lattice, e, cap)
            })
            .collect()
    }

    /// Matrix of `w` on a truncated space (columns are images of basis vectors).
    pub fn action_matrix(&self, lattice: &dyn CoefficientLattice, space: &TruncatedSpace, w: usize) -> Result<IntMatrix> {
        let n = space.dim();
        let mut out = IntMatrix::zeros(n, n);
        let mut cache: BTreeMap<Monomial, BTreeMap<Monomial, Poly>> = BTreeMap::new();
        for (col, (_, k, b)) in space.index.iter().enumerate() {
            if !cache.contains_key(k) {
                let mono = Series::new(Poly::monomial(&self.ring, self.t_monomial(k), scalar::int(1)), space.cap);
                let img = self.weyl_act_series(w, &mono)?.truncate(space.cap);
                cache.insert(k.clone(), img.poly().split_series(&self.coefficients)?);
            }
            let basis_elt = space.basis_element(*b, k).embed(&self.coefficients)?;
            for (k2, c) in &cache[k] {
                let f2 = k2.total() as u32;
                let d2 = space.degree + f2 as i32;
                let prod = &basis_elt * c;
                let coords = lattice.coordinates(d2, &prod).ok_or_else(|| {
                    Error::Internal(format!("w-image coefficient {prod} is not in the degree-{d2} lattice"))
                })?;
                let offset = space.offset(f2, k2);
                for (i, x) in coords.into_iter().enumerate() {
                    out[(offset + i, col)] += x;
                }
            }
        }
        Ok(out)
    }

    fn t_monomial(&self, k: &Monomial) -> Monomial {
        let mut exps = vec![0; self.ring.len()];
        for (slot, &v) in self.ring.series_vars().iter().enumerate() {
            exps[v] = k.exps()[slot];
        }
        Monomial::new(exps)
    }

    /// Series with the given coordinates on a truncated space.
    pub fn element(&self, space: &TruncatedSpace, coords: &[BigInt]) -> Result<Series> {
        let mut out = Poly::zero(&self.ring);
        for (c, (_, k, b)) in coords.iter().zip(&space.index) {
            if c.is_zero() {
                continue;
            }
            let coeff = space.basis_element(*b, k).embed(&self.ring)?;
            let t = Poly::monomial(&self.ring, self.t_monomial(k), scalar::from_big(c.clone()));
            out = &out + &(&coeff * &t);
        }
        Ok(Series::new(out, space.cap))
    }
}

/// `sum_{f <= cap} L_{e+f} (x) (t-monomials of degree f)` with a fixed
/// coordinate order: by `f`, then t-monomial, then lattice basis index.
#[derive(Clone, Debug)]
pub struct TruncatedSpace {
    pub degree: i32,
    pub cap: u32,
    /// `(f, t-monomial, basis index)` per coordinate.
    pub index: Vec<(u32, Monomial, usize)>,
    bases: BTreeMap<u32, Vec<Poly>>,
    offsets: BTreeMap<Monomial, usize>,
}

impl TruncatedSpace {
    pub fn new(lattice: &dyn CoefficientLattice, r: usize, e: i32, cap: u32) -> TruncatedSpace {
        let mut index = Vec::new();
        let mut bases = BTreeMap::new();
        let mut offsets = BTreeMap::new();
        for f in 0..=cap {
            let basis = lattice.basis(e + f as i32);
            for k in monomials_of_degree(r, f) {
                offsets.insert(k.clone(), index.len());
                for b in 0..basis.len() {
                    index.push((f, k.clone(), b));
                }
            }
            bases.insert(f, basis);
        }
        TruncatedSpace { degree: e, cap, index, bases, offsets }
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    /// First coordinate of the block for `t^k`.
    pub fn offset(&self, _f: u32, k: &Monomial) -> usize {
        self.offsets[k]
    }

    pub fn basis_element(&self, b: usize, k: &Monomial) -> &Poly {
        &self.bases[&(k.total() as u32)][b]
    }

    /// Lattice basis of coefficient degree `degree + f`.
    pub fn coefficient_basis(&self, f: u32) -> &[Poly] {
        &self.bases[&f]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    /// The wider truncation was out of range.
    Unchecked,
}

impl Stability {
    pub fn as_str(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::Unchecked => "unchecked",
        }
    }
}

#[derive(Clone, Debug)]
pub struct InvariantBlock {
    pub total_degree: i32,
    pub cap: u32,
    pub space: TruncatedSpace,
    /// Saturated HNF basis of the invariants, one row per element.
    pub kernel: IntMatrix,
    /// Rank per `(leading filtration, coefficient degree)`.
    pub bidegree_ranks: BTreeMap<(u32, i32), usize>,
    /// Rank of the averaging operator on the same truncated space.
    pub rational_rank: usize,
    pub stability: Stability,
}

impl InvariantBlock {
    pub fn rank(&self) -> usize {
        self.kernel.rows()
    }

    /// True when the integral kernel has the rank predicted by averaging.
    pub fn rational_check(&self) -> bool {
        self.rank() == self.rational_rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::{IntegerCoefficients, LazardBasis};

    #[test]
    fn character_classes() {
        let add = TwistedContext::new(FormalGroupLaw::additive(4), RootDatum::preset("Torus(2)").unwrap(), 4).unwrap();
        assert_eq!(add.character_class(&[2, -1]).unwrap().poly().to_string(), "2*t1 - t2");
        assert!(add.character_class(&[0, 0]).unwrap().is_zero());
        let mult =
            TwistedContext::new(FormalGroupLaw::multiplicative(3), RootDatum::preset("Torus(1)").unwrap(), 3).unwrap();
        assert_eq!(mult.character_class(&[-1]).unwrap().poly().to_string(), "-t + beta*t^2 - beta^2*t^3");
        assert_eq!(mult.character_class(&[1]).unwrap().poly().to_string(), "t");
    }

    #[test]
    fn sl2_sign_action() {
        let add = TwistedContext::new(FormalGroupLaw::additive(4), RootDatum::preset("SL2").unwrap(), 4).unwrap();
        let t = add.t(0);
        assert_eq!(add.weyl_act_series(1, &t).unwrap().poly().to_string(), "-t");
        assert_eq!(add.weyl_act_series(0, &t).unwrap(), t);
        let mult = TwistedContext::new(FormalGroupLaw::multiplicative(3), RootDatum::preset("SL2").unwrap(), 3).unwrap();
        let t = mult.t(0);
        assert_eq!(mult.weyl_act_series(1, &t).unwrap().poly().to_string(), "-t + beta*t^2 - beta^2*t^3");
    }

    #[test]
    fn inverse_relation_and_multiplicative_model() {
        let ctx = TwistedContext::new(FormalGroupLaw::universal(4), RootDatum::preset("Torus(2)").unwrap(), 4).unwrap();
        assert!(ctx.relations_check(&[1, -2], &[-1, 2]).unwrap());
        assert!(ctx.relations_check(&[1, 0], &[1, 0]).unwrap());
        let mult = TwistedContext::new(FormalGroupLaw::multiplicative(4), RootDatum::preset("Torus(2)").unwrap(), 4).unwrap();
        assert!(mult.multiplicative_relation(&[2, -1], &[-1, 1]).unwrap());
        assert!(ctx.multiplicative_relation(&[1, 0], &[0, 1]).is_err());
    }

    #[test]
    fn sl2_additive_invariants_are_even_powers() {
        let ctx = TwistedContext::new(FormalGroupLaw::additive(6), RootDatum::preset("SL2").unwrap(), 6).unwrap();
        let z = IntegerCoefficients::new(ctx.coefficient_ring().clone());
        let block = ctx.invariants_truncated(&z, -2, 2).unwrap();
        assert_eq!(block.rank(), 1);
        assert_eq!(block.bidegree_ranks.get(&(2, 0)), Some(&1));
        assert_eq!(ctx.element(&block.space, block.kernel.row(0)).unwrap().poly().to_string(), "t^2");
        assert_eq!(block.stability, Stability::Stable);
        assert_eq!(ctx.invariants_truncated(&z, -3, 3).unwrap().rank(), 0);
    }

    #[test]
    fn sl2_universal_matches_averaging() {
        let basis = LazardBasis::new(5);
        let ctx = TwistedContext::new(FormalGroupLaw::universal(5), RootDatum::preset("SL2").unwrap(), 5).unwrap();
        for e in -3..=2 {
            let cap = 3.min(5 - e) as u32;
            let block = ctx.invariant_block(&basis, e, cap).unwrap();
            assert!(block.rational_check(), "degree {e}");
        }
    }

    #[test]
    fn torus_invariants_are_everything() {
        let ctx = TwistedContext::new(FormalGroupLaw::additive(3), RootDatum::preset("Torus(2)").unwrap(), 3).unwrap();
        let z = IntegerCoefficients::new(ctx.coefficient_ring().clone());
        let block = ctx.invariant_block(&z, -2, 2).unwrap();
        assert_eq!(block.rank(), 3);
    }
}
