//! Chow ring of `G/B` through divided differences on `Sym` of the character
//! lattice, and the torsion index.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::intmat::{cokernel, IntMatrix};
use crate::exact::poly::{Generator, Monomial, Poly, Ring};
use crate::exact::scalar;
use crate::twisted::monomials_of_degree;
use crate::weyl::{RootDatum, WeylGroup};

/// `Z[l_1..l_r]` with `l_i` the basis characters, each of degree 1.
pub fn sym_ring(r: usize) -> Arc<Ring> {
    Ring::new((1..=r).map(|i| Generator::coefficient(format!("l{i}"), 1)).collect()).expect("distinct names")
}

/// A vector of the character lattice as a linear form.
pub fn linear_form(ring: &Arc<Ring>, v: &[i64]) -> Poly {
    Poly::from_terms(
        ring,
        v.iter().enumerate().map(|(i, &c)| {
            let mut e = vec![0; v.len()];
            e[i] = 1;
            (Monomial::new(e), scalar::int(c))
        }),
    )
}

fn check_ring(rd: &RootDatum, f: &Poly) -> Result<()> {
    if f.ring().len() != rd.rank() {
        return Err(Error::Context(format!("polynomial ring has {} generators, rank is {}", f.ring().len(), rd.rank())));
    }
    Ok(())
}

/// `s_i f`.
pub fn reflect_poly(rd: &RootDatum, i: usize, f: &Poly) -> Result<Poly> {
    check_ring(rd, f)?;
    let ring = f.ring();
    let images = (0..rd.rank())
        .map(|j| {
            let mut e = vec![0; rd.rank()];
            e[j] = 1;
            Ok(Some(linear_form(ring, &rd.reflect(i, &e)?)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(f.substitute(&images, None))
}

/// `(f - s_i f) / a_i`.
pub fn divided_difference(rd: &RootDatum, i: usize, f: &Poly) -> Result<Poly> {
    let diff = f - &reflect_poly(rd, i, f)?;
    if diff.is_zero() {
        return Ok(diff);
    }
    let alpha = linear_form(f.ring(), &rd.simple_roots()[i]);
    diff.div_exact(&alpha)
        .ok_or_else(|| Error::Internal(format!("{diff} is not divisible by the root {alpha}")))
}

/// `d_{i_1} o ... o d_{i_k}`, rightmost first.
pub fn demazure_word(rd: &RootDatum, word: &[usize], f: &Poly) -> Result<Poly> {
    let mut g = f.clone();
    for &i in word.iter().rev() {
        g = divided_difference(rd, i, &g)?;
        if g.is_zero() {
            break;
        }
    }
    Ok(g)
}

/// Schubert coefficients `(d_w f)(0)` for the elements of length `deg f`,
/// in enumeration order. Empty above the top degree.
pub fn char_hom_schubert(weyl: &WeylGroup, f: &Poly) -> Result<Vec<(usize, BigInt)>> {
    let rd = weyl.datum();
    check_ring(rd, f)?;
    let degrees = f.degrees();
    let k = match degrees.as_slice() {
        [] => return Ok(Vec::new()),
        [k] => *k,
        _ => return Err(Error::Context(format!("{f} is not homogeneous"))),
    };
    if k < 0 || k as usize > weyl.longest_length() {
        return Ok(Vec::new());
    }
    weyl.elements()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.length() == k as usize)
        .map(|(idx, e)| {
            let g = demazure_word(rd, &e.word, f)?;
            scalar::to_integer(&g.constant_term())
                .map(|c| (idx, c))
                .ok_or_else(|| Error::Internal(format!("non-integral Schubert coefficient {g}")))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCokernel {
    pub degree: usize,
    /// Elementary divisors `> 1`.
    pub divisors: Vec<BigInt>,
    pub exponent: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionReport {
    /// Least integer killing the cokernel in every degree.
    pub tau: BigInt,
    /// Exponent of the cokernel in the top degree alone.
    pub top_degree: BigInt,
    pub per_degree: Vec<DegreeCokernel>,
}

/// Torsion index from the cokernel of `Sym -> CH^*(G/B)`, degree by degree.
pub fn torsion_index(weyl: &WeylGroup) -> Result<TorsionReport> {
    let rd = weyl.datum();
    let ring = sym_ring(rd.rank());
    let top = weyl.longest_length();
    let mut per_degree = Vec::new();
    let mut tau = BigInt::one();
    for k in 0..=top {
        let rows: Vec<usize> = (0..weyl.order()).filter(|&i| weyl.element(i).length() == k).collect();
        let monos = monomials_of_degree(rd.rank(), k as u32);
        let mut m = IntMatrix::zeros(rows.len(), monos.len());
        for (col, mono) in monos.iter().enumerate() {
            let f = Poly::monomial(&ring, mono.clone(), scalar::int(1));
            for (idx, c) in char_hom_schubert(weyl, &f)? {
                let row = rows.iter().position(|&r| r == idx).expect("length-k element");
                m[(row, col)] = c;
            }
        }
        let coker = cokernel(&m);
        if coker.free_rank != 0 {
            return Err(Error::Internal(format!(
                "characteristic map is not rationally surjective in degree {k} (free rank {})",
                coker.free_rank
            )));
        }
        let exponent = coker.exponent();
        tau = tau.lcm(&exponent);
        per_degree.push(DegreeCokernel { degree: k, divisors: coker.divisors, exponent });
    }
    let top_degree = per_degree.last().map_or_else(BigInt::one, |d| d.exponent.clone());
    debug_assert!(!tau.is_zero());
    Ok(TorsionReport { tau, top_degree, per_degree })
}
