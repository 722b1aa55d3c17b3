//! Truncated power series in the series variables of a [`Ring`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::One;

use super::poly::{Monomial, Poly, Ring};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// A polynomial read modulo series weight `> order`.
#[derive(Clone, Debug)]
pub struct Series {
    poly: Poly,
    order: u32,
}

impl PartialEq for Series {
    /// Equal when equal termwise below the common truncation.
    fn eq(&self, other: &Self) -> bool {
        let o = self.order.min(other.order);
        self.poly.truncate(o) == other.poly.truncate(o)
    }
}

impl Series {
    pub fn new(poly: Poly, order: u32) -> Series {
        Series { poly: poly.truncate(order), order }
    }

    pub fn zero(ring: &Arc<Ring>, order: u32) -> Series {
        Series { poly: Poly::zero(ring), order }
    }

    pub fn one(ring: &Arc<Ring>, order: u32) -> Series {
        Series { poly: Poly::one(ring), order }
    }

    pub fn var(ring: &Arc<Ring>, i: usize, order: u32) -> Series {
        Series::new(Poly::var(ring, i), order)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.poly.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn truncate(&self, order: u32) -> Series {
        Series::new(self.poly.clone(), order.min(self.order))
    }

    pub fn with_order(&self, order: u32) -> Series {
        self.truncate(order)
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        Series { poly: self.poly.scale(c), order: self.order }
    }

    /// Multiplies by a polynomial that carries no truncation of its own.
    pub fn mul_poly(&self, p: &Poly) -> Series {
        Series { poly: self.poly.mul_trunc(p, Some(self.order)), order: self.order }
    }

    pub fn pow(&self, n: u32) -> Series {
        Series { poly: self.poly.pow_trunc(n, Some(self.order)), order: self.order }
    }

    /// True when every term has positive series weight.
    pub fn has_zero_constant_term(&self) -> bool {
        self.poly.min_series_weight().is_none_or(|w| w >= 1)
    }

    /// Re-express in another ring (generators matched by name).
    pub fn embed(&self, target: &Arc<Ring>) -> Result<Series> {
        Ok(Series { poly: self.poly.embed(target)?, order: self.order })
    }

    /// Substitutes `args[k]` for the `k`-th series variable of `self`'s ring.
    ///
    /// The arguments share one target ring. Coefficient generators of `self`
    /// are carried into that ring by name. The result is exact up to
    /// `min(order, self.order, args orders)`.
    pub fn compose(&self, args: &[Series], order: u32) -> Result<Series> {
        let series_vars = self.ring().series_vars();
        if args.len() != series_vars.len() {
            return Err(Error::Context(format!(
                "composition expects {} arguments, got {}",
                series_vars.len(),
                args.len()
            )));
        }
        let target = match args.first() {
            Some(a) => a.ring().clone(),
            None => return Ok(Series::new(self.poly.clone(), order.min(self.order))),
        };
        for a in args {
            a.poly.same_ring(&args[0].poly)?;
            if !a.has_zero_constant_term() {
                return Err(Error::NonzeroConstantTerm);
            }
        }
        let order = args.iter().map(|a| a.order).fold(order.min(self.order), u32::min);
        let coeff_ring = self.ring().coefficient_ring()?;
        let grouped = self.poly.split_series(&coeff_ring)?;

        let mut powers: Vec<Vec<Poly>> = args.iter().map(|_| vec![Poly::one(&target)]).collect();
        let mut out = Poly::zero(&target);
        for (exps, coeff) in grouped {
            let weight: i32 = exps.exps().iter().sum();
            if weight > order as i32 {
                continue;
            }
            let mut term = coeff.embed(&target)?;
            for (k, &e) in exps.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[k];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul_trunc(&args[k].poly, Some(order));
                    cache.push(next);
                }
                term = term.mul_trunc(&cache[e as usize], Some(order));
            }
            out = &out + &term;
        }
        Ok(Series::new(out, order))
    }

    /// Compositional inverse of `x + (higher)` in a single series variable.
    pub fn reverse(&self, order: u32) -> Result<Series> {
        let ring = self.ring().clone();
        let used: Vec<usize> = ring
            .series_vars()
            .iter()
            .copied()
            .filter(|&i| self.poly.terms().any(|(m, _)| m.exps()[i] != 0))
            .collect();
        let var = match used.as_slice() {
            [v] => *v,
            [] => return Err(Error::NotReversible("series has no series variable".into())),
            _ => return Err(Error::NotReversible("series is not univariate".into())),
        };
        if !self.has_zero_constant_term() {
            return Err(Error::NonzeroConstantTerm);
        }
        let x = Poly::var(&ring, var);
        let linear: Poly = Poly::from_terms(
            &ring,
            self.poly
                .terms()
                .filter(|(m, _)| self.poly.series_weight(m) == 1)
                .map(|(m, c)| (m.clone(), c.clone())),
        );
        if linear != x {
            return Err(Error::NotReversible(format!("linear coefficient is {linear}, not x")));
        }
        let order = order.min(self.order);
        let tail = Series::new(&self.poly - &x, order);
        let n_vars = ring.series_vars().len();
        let slot = ring.series_vars().iter().position(|&i| i == var).unwrap();
        // g <- x - tail(g); each pass fixes one more order.
        let mut g = Series::new(x.clone(), order);
        for _ in 0..order {
            let mut args: Vec<Series> = (0..n_vars).map(|_| Series::zero(&ring, order)).collect();
            args[slot] = g.clone();
            let t = tail.compose(&args, order)?;
            g = Series::new(&x - &t.poly, order);
        }
        Ok(g)
    }

    /// Coefficient of a monomial.
    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.poly.coeff(m)
    }

    pub fn is_one(&self) -> bool {
        self.poly.len() == 1 && self.poly.constant_term().is_one()
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        Series::new(&self.poly + &rhs.poly, self.order.min(rhs.order))
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        Series::new(&self.poly - &rhs.poly, self.order.min(rhs.order))
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let order = self.order.min(rhs.order);
        Series { poly: self.poly.mul_trunc(&rhs.poly, Some(order)), order }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { poly: -&self.poly, order: self.order }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.poly, self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::Generator;
    use crate::exact::scalar::int;

    fn ring_x() -> Arc<Ring> {
        Ring::new(vec![Generator::series("x")]).unwrap()
    }

    fn poly_x(ring: &Arc<Ring>, coeffs: &[i64]) -> Poly {
        Poly::from_terms(
            ring,
            coeffs.iter().enumerate().map(|(k, c)| (Monomial::new(vec![k as i32]), int(*c))),
        )
    }

    #[test]
    fn reverse_catalan() {
        let r = ring_x();
        let f = Series::new(poly_x(&r, &[0, 1, 1]), 4);
        let g = f.reverse(4).unwrap();
        assert_eq!(g.poly().to_string(), "x - x^2 + 2*x^3 - 5*x^4");
    }

    #[test]
    fn compose_with_reverse_is_identity() {
        let r = ring_x();
        let f = Series::new(poly_x(&r, &[0, 1, 1]), 4);
        let g = Series::new(poly_x(&r, &[0, 1, -1, 2, -5]), 4);
        let h = f.compose(&[g], 4).unwrap();
        assert_eq!(h.poly().to_string(), "x");
    }

    #[test]
    fn reverse_symbolic() {
        let r = Ring::new(vec![
            Generator::coefficient("m1", 1),
            Generator::coefficient("m2", 2),
            Generator::series("x"),
        ])
        .unwrap();
        let x = Poly::var(&r, 2);
        let m1 = Poly::var(&r, 0);
        let m2 = Poly::var(&r, 1);
        let f = &(&x + &(&m1 * &(&x * &x))) + &(&m2 * &(&x * &(&x * &x)));
        let g = Series::new(f, 3).reverse(3).unwrap();
        let expect = &(&x - &(&m1 * &(&x * &x))) + &(&(&(&m1 * &m1).scale(&int(2)) - &m2) * &(&x * &(&x * &x)));
        assert_eq!(g.poly(), &expect);
    }

    #[test]
    fn reverse_errors() {
        let r = ring_x();
        let f = Series::new(poly_x(&r, &[0, 2, 1]), 4);
        assert!(matches!(f.reverse(4), Err(Error::NotReversible(_))));
        let c = Series::new(poly_x(&r, &[1, 1]), 4);
        assert!(c.reverse(4).is_err());
    }

    #[test]
    fn compose_rejects_constant_term() {
        let r = ring_x();
        let f = Series::new(poly_x(&r, &[0, 0, 1]), 4);
        let a = Series::new(poly_x(&r, &[1, 1]), 4);
        assert_eq!(f.compose(&[a], 4), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn compose_square_of_sum() {
        let r = Ring::new(vec![Generator::series("x"), Generator::series("y")]).unwrap();
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let f = Series::new(&x * &x, 5);
        let arg = Series::new(&x + &y, 5);
        let zero = Series::zero(&r, 5);
        let out = f.compose(&[arg, zero], 5).unwrap();
        assert_eq!(out.poly().to_string(), "x^2 + 2*x*y + y^2");
        let id = Series::new(x.clone(), 5);
        let g = Series::new(&(&x * &y) + &y, 5);
        assert_eq!(id.compose(&[g.clone(), Series::new(y.clone(), 5)], 5).unwrap(), g);
    }
}
