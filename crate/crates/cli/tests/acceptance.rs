//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::time::Instant;

use gbord_core::bt::{BTClass, BtContext, MultiIndex, Verdict};
use gbord_core::exact::{scalar, Poly, Series};
use gbord_core::fgl::{FormalGroupLaw, LazardBasis};
use gbord_core::flag::torsion_index;
use gbord_core::twisted::TwistedContext;
use gbord_core::weyl::{RootDatum, WeylGroup};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn preset(name: &str) -> RootDatum {
    RootDatum::preset(name).expect("preset")
}

fn lazard_ranks() -> Outcome {
    // p(0..6), counted by hand.
    let expect = vec![1, 1, 2, 3, 5, 7, 11];
    let got = LazardBasis::new(6).ranks();
    ensure(got == expect, || format!("ranks {got:?}, expected {expect:?}"))?;
    Ok(format!("ranks {got:?}"))
}

fn pn_integrality() -> Outcome {
    let basis = LazardBasis::new(6);
    for n in 0..=6 {
        let p = basis.pn_class(n).map_err(|e| e.to_string())?;
        ensure(p.is_integral(&basis), || format!("[P^{n}] = {p} not integral"))?;
    }
    // a_11 = -2 m_1 from log(x) = x + m_1 x^2 + ..., expanded by hand.
    let a11 = basis.law().coefficient(1, 1);
    ensure(a11.to_string() == "-2*m1", || format!("a_11 = {a11}"))?;
    let p1 = basis.pn_class(1).map_err(|e| e.to_string())?;
    ensure(p1.poly() == &(-&a11), || format!("[P^1] = {p1}, -a_11 = {}", -&a11))?;
    let coords = basis.lattice_coordinates(1, p1.poly());
    ensure(coords == Some(vec![BigInt::from(1)]), || format!("[P^1] coordinates {coords:?}"))?;
    Ok("[P^n] integral for n <= 6; [P^1] = -a_11 = 2*m1 with coordinates [1]".into())
}

fn fgl_axioms() -> Outcome {
    let start = Instant::now();
    let law = FormalGroupLaw::universal(8);
    let (u1, u2) = law.unit_residuals().map_err(|e| e.to_string())?;
    ensure(u1.is_zero() && u2.is_zero(), || "unit residual nonzero".into())?;
    ensure(law.commutativity_residual().map_err(|e| e.to_string())?.is_zero(), || "commutativity residual nonzero".into())?;
    let assoc = law.associativity_residual(8).map_err(|e| e.to_string())?;
    ensure(assoc.is_zero(), || format!("associativity residual {}", assoc.poly()))?;
    Ok(format!("universal(8) residuals vanish to order 8 ({:.2?})", start.elapsed()))
}

fn laws(order: u32) -> [FormalGroupLaw; 3] {
    [FormalGroupLaw::additive(order), FormalGroupLaw::multiplicative(order), FormalGroupLaw::universal(order)]
}

fn random_character(rng: &mut StdRng, r: usize) -> Vec<i64> {
    (0..r).map(|_| rng.gen_range(-2..=2)).collect()
}

fn twisted_relations() -> Outcome {
    let mut ctxs = Vec::new();
    for r in 1..=3 {
        for law in laws(5) {
            ctxs.push((r, TwistedContext::new(law, preset(&format!("Torus({r})")), 5).map_err(|e| e.to_string())?));
        }
    }
    let mut rng = StdRng::seed_from_u64(0x7a15);
    for i in 0..100 {
        let (r, ctx) = &ctxs[i % ctxs.len()];
        let (a, b) = (random_character(&mut rng, *r), random_character(&mut rng, *r));
        let ok = ctx.relations_check(&a, &b).map_err(|e| e.to_string())?;
        ensure(ok, || format!("{}: x_{a:?} +F x_{b:?} != x_(sum)", ctx.law().kind()))?;
    }
    Ok("100 random checks over r <= 3 and all three laws at N = 5".into())
}

fn multiplicative_model() -> Outcome {
    let mut count = 0;
    for r in 1..=2usize {
        let ctx = TwistedContext::new(FormalGroupLaw::multiplicative(6), preset(&format!("Torus({r})")), 6)
            .map_err(|e| e.to_string())?;
        let chars: Vec<Vec<i64>> = if r == 1 {
            (-2..=2).map(|a| vec![a]).collect()
        } else {
            (-2..=2).flat_map(|a| (-2..=2).map(move |b| vec![a, b])).collect()
        };
        for a in &chars {
            for b in &chars {
                let ok = ctx.multiplicative_relation(a, b).map_err(|e| e.to_string())?;
                ensure(ok, || format!("(1 + beta x_{a:?})(1 + beta x_{b:?}) != 1 + beta x_(sum)"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} pairs agree to N = 6"))
}

fn pairing_unitriangular() -> Outcome {
    let mut cells = 0;
    for r in 1..=2 {
        let ctx = BtContext::new(r, 5).map_err(|e| e.to_string())?;
        let all = MultiIndex::up_to(r, 5);
        for (i, k) in all.iter().enumerate() {
            let t = ctx.t_monomial(k);
            for (j, m) in all.iter().enumerate() {
                let v = ctx.pairing(&t, &BTClass::basis(ctx.ring(), m.clone())).map_err(|e| e.to_string())?;
                if i == j {
                    ensure(v.to_string() == "1", || format!("r={r}: <t^{k:?}, {m}> = {v} on the diagonal"))?;
                } else if j < i {
                    ensure(v.is_zero(), || format!("r={r}: <t^{k:?}, {m}> = {v} below the diagonal"))?;
                }
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} entries checked for r <= 2, |m| <= 5"))
}

fn dual_basis() -> Outcome {
    let mut cells = 0;
    for r in 1..=2 {
        let ctx = BtContext::new(r, 5).map_err(|e| e.to_string())?;
        let all = MultiIndex::up_to(r, 5);
        for (mp, d) in ctx.dual_basis() {
            for m in &all {
                let v = ctx.pairing(d, &BTClass::basis(ctx.ring(), m.clone())).map_err(|e| e.to_string())?;
                let expect = if m == mp { "1" } else { "0" };
                ensure(v.to_string() == expect, || format!("r={r}: <d_{mp}, {m}> = {v}"))?;
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} pairings equal delta"))
}

fn torsion_indices() -> Outcome {
    // Hand computation for rank 1; an independent divided-difference script otherwise.
    let oracle = [("SL2", 1), ("SL3", 1), ("GL2", 1), ("Sp4", 1), ("PGL2", 2), ("G2", 2)];
    let mut shown = Vec::new();
    for (name, tau) in oracle {
        let w = WeylGroup::enumerate(&preset(name)).map_err(|e| e.to_string())?;
        let got = torsion_index(&w).map_err(|e| e.to_string())?.tau;
        ensure(got == BigInt::from(tau), || format!("{name}: {got}, expected {tau}"))?;
        shown.push(format!("{name}={got}"));
    }
    Ok(shown.join(" "))
}

fn random_class(ctx: &BtContext, rng: &mut StdRng, n: u32) -> BTClass {
    let lat = ctx.lattice(n).expect("degree in range");
    let coords: Vec<BigInt> = (0..lat.dim()).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
    ctx.class(&lat, &coords)
}

/// `sum_k c_k b_k t^k` with `b_k` a random Lazard basis element of degree <= 2.
fn random_functional(ctx: &BtContext, rng: &mut StdRng, max_f: u32) -> Series {
    let mut poly = Poly::zero(ctx.t_ring());
    for k in MultiIndex::up_to(ctx.rank(), max_f) {
        let deg = rng.gen_range(0..=2u32);
        let basis = &ctx.lazard().degree(deg).expect("degree in range").elements;
        let b = &basis[rng.gen_range(0..basis.len())];
        let c = scalar::int(rng.gen_range(-3..=3));
        let term = b.embed(ctx.t_ring()).expect("coefficient ring embeds").scale(&c);
        poly = &poly + &(&term * ctx.t_monomial(&k).poly());
    }
    Series::new(poly, ctx.max_degree())
}

fn cap_product_identity() -> Outcome {
    let ctxs = [BtContext::new(1, 4).map_err(|e| e.to_string())?, BtContext::new(2, 4).map_err(|e| e.to_string())?];
    let mut rng = StdRng::seed_from_u64(0xca9);
    for i in 0..100 {
        let ctx = &ctxs[i % 2];
        let (n, f) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        let x = random_class(ctx, &mut rng, n);
        let a = random_functional(ctx, &mut rng, f);
        let cap = ctx.chern_op(&a, &x).map_err(|e| e.to_string())?;
        let lhs = ctx.pairing(&a, &x).map_err(|e| e.to_string())?;
        let rhs = ctx.epsilon(&cap).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("check {i}: <A,x> = {lhs}, eps(c(A) x) = {rhs}"))?;
    }
    Ok("100 random checks for r <= 2, degrees <= 4".into())
}

fn weyl_integrity() -> Outcome {
    let err = |e: gbord_core::Error| e.to_string();
    let ctx1 = BtContext::new(1, 4).map_err(err)?;
    let sl2 = WeylGroup::enumerate(&preset("SL2")).map_err(err)?;
    let wp1 = ctx1.weyl_act_bt(&sl2, 1, &ctx1.p(vec![1])).map_err(err)?;
    ensure(wp1.to_string() == "(4*m1)*p_0 + (-1)*p_1", || format!("s p_1 = {wp1}"))?;
    for m in 0..=4 {
        let x = ctx1.p(vec![m]);
        let twice = ctx1.weyl_act_bt(&sl2, 1, &ctx1.weyl_act_bt(&sl2, 1, &x).map_err(err)?).map_err(err)?;
        ensure(twice == x, || format!("s^2 p_{m} = {twice}"))?;
    }

    let ctx2 = BtContext::new(2, 4).map_err(err)?;
    let gl2 = WeylGroup::enumerate(&preset("GL2")).map_err(err)?;
    for m in MultiIndex::up_to(2, 4) {
        let e = m.entries();
        let image = ctx2.weyl_act_bt(&gl2, 1, &ctx2.p(e.to_vec())).map_err(err)?;
        ensure(image == ctx2.p(vec![e[1], e[0]]), || format!("GL2 swap of {m} gave {image}"))?;
    }

    let mut rng = StdRng::seed_from_u64(0x3e1);
    let mut checks = 0;
    for name in ["SL2", "GL2", "PGL2", "SL3"] {
        let rd = preset(name);
        let ctx = BtContext::new(rd.rank(), 3).map_err(err)?;
        let tw = TwistedContext::new(ctx.law().clone(), rd, 3).map_err(err)?;
        let weyl = tw.weyl();
        for _ in 0..8 {
            let n = rng.gen_range(0..=3);
            let x = random_class(&ctx, &mut rng, n);
            let a = random_functional(&ctx, &mut rng, 3);
            let a_tw = Series::new(a.poly().embed(tw.ring()).map_err(err)?, 3);
            let base = ctx.pairing(&a, &x).map_err(err)?;
            for w in 0..weyl.order() {
                let wa = tw.weyl_act_series(w, &a_tw).map_err(err)?;
                let wa = Series::new(wa.poly().embed(ctx.t_ring()).map_err(err)?, 3);
                let wx = ctx.weyl_act_bt(weyl, w, &x).map_err(err)?;
                let v = ctx.pairing(&wa, &wx).map_err(err)?;
                ensure(v == base, || format!("{name}, w={w}: <wA, wx> = {v}, <A, x> = {base}"))?;
                for b in 0..weyl.order() {
                    let lhs = ctx.weyl_act_bt(weyl, weyl.mul(w, b), &x).map_err(err)?;
                    let rhs = ctx.weyl_act_bt(weyl, w, &ctx.weyl_act_bt(weyl, b, &x).map_err(err)?).map_err(err)?;
                    ensure(lhs == rhs, || format!("{name}: (wb)x != w(bx)"))?;
                }
                checks += 1;
            }
        }
    }
    Ok(format!("SL2 involution, GL2 swap, {checks} random equivariance checks"))
}

fn duality() -> Outcome {
    let mut shown = Vec::new();
    for (group, max) in [("Torus(1)", "6"), ("Torus(2)", "6"), ("SL2", "6"), ("GL2", "4")] {
        let out = common::gbord(&["--format", "json", "verify-duality", "--group", group, "--max-degree", max]);
        ensure(out.status.code() == Some(0), || {
            format!("{group}: exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
        })?;
        let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let res = &v["result"];
        ensure(res["rational_check"] == true, || format!("{group}: rational check failed"))?;
        let degrees = res["degrees"].as_array().ok_or("missing degrees")?;
        ensure(degrees.len() == max.parse::<usize>().unwrap() + 1, || format!("{group}: {} degrees", degrees.len()))?;
        for d in degrees {
            ensure(d["verdict"] == Verdict::PerfectOverZ.as_str(), || format!("{group} degree {}: {}", d["degree"], d["verdict"]))?;
        }
        shown.push(format!("{group}<={max}"));
    }
    Ok(format!("perfect over Z, rational check passed: {}", shown.join(" ")))
}

fn sl2_degree_one() -> Outcome {
    let err = |e: gbord_core::Error| e.to_string();
    let rd = preset("SL2");
    let ctx = BtContext::new(1, 3).map_err(err)?;
    let tw = TwistedContext::new(ctx.law().clone(), rd, 3).map_err(err)?;
    let coinv = ctx.coinvariants(tw.weyl(), 1).map_err(err)?;
    ensure(coinv.free_rank == 1, || format!("free rank {}", coinv.free_rank))?;
    ensure(coinv.divisors == vec![BigInt::from(2)], || format!("divisors {:?}", coinv.divisors))?;
    let d = ctx.duality_check(&tw, 1, &BigInt::from(1)).map_err(err)?;
    ensure(d.quotient_rank == 1 && d.pairing_rank == 1, || format!("ranks {} / {}", d.quotient_rank, d.pairing_rank))?;
    ensure(d.pairing_divisors.is_empty(), || format!("pairing divisors {:?}", d.pairing_divisors))?;
    Ok("free rank 1, torsion Z/2, unimodular pairing on the free quotient".into())
}

fn goldens() -> Outcome {
    let bad = common::check_goldens();
    ensure(bad.is_empty(), || bad.join("; "))?;
    Ok(format!("{} golden files byte-identical", common::GOLDEN.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("Lazard ranks", lazard_ranks),
        ("[P^n] integrality", pn_integrality),
        ("FGL axioms", fgl_axioms),
        ("twisted relations", twisted_relations),
        ("multiplicative model", multiplicative_model),
        ("pairing unitriangularity", pairing_unitriangular),
        ("dual basis", dual_basis),
        ("torsion indices", torsion_indices),
        ("cap product identity", cap_product_identity),
        ("Weyl action integrity", weyl_integrity),
        ("duality at desk scale", duality),
        ("SL2 degree-1 coinvariants", sl2_degree_one),
        ("CLI determinism", goldens),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{:.2?}]", i + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{:.2?}]", i + 1, start.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
