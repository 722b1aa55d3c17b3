use gbord_core::bt::{BTClass, BtContext, MultiIndex, Verdict};
use gbord_core::fgl::{
    CoefficientLattice, FormalGroupLaw, IntegerCoefficients, LaurentCoefficients, LazardBasis,
};
use gbord_core::flag::torsion_index;
use gbord_core::twisted::{Stability, TwistedContext};
use gbord_core::weyl::{RootDatum, WeylGroup};
use gbord_core::{Error, Result};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::report::{int, ints, strings, Report};
use crate::{Command, GroupArgs, LawArg, LazardWhat};

pub fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Lazard { max_degree, what } => lazard(*max_degree, *what),
        Command::Fgl { law, order } => fgl(*law, *order),
        Command::Weyl { group, summary } => weyl(group, *summary),
        Command::TorsionIndex { group, components } => torsion(group, *components),
        Command::Twisted { group, law, order, degree_bound } => twisted(group, *law, *order, *degree_bound),
        Command::Btpair { rank, max_degree } => btpair(*rank as usize, *max_degree),
        Command::Coinv { group, degree } => coinv(group, *degree),
        Command::VerifyDuality { group, max_degree, invert_tau } => verify_duality(group, *max_degree, *invert_tau),
    }
}

fn args(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn law_name(l: LawArg) -> &'static str {
    match l {
        LawArg::Additive => "additive",
        LawArg::Multiplicative => "multiplicative",
        LawArg::Universal => "universal",
    }
}

/// Resolves `--group` or `--root-datum`, returning the datum and its echo.
fn root_datum(g: &GroupArgs) -> Result<(RootDatum, (&'static str, Value))> {
    if let Some(name) = &g.group {
        return Ok((RootDatum::preset(name)?, ("group", json!(name))));
    }
    let path = g.root_datum.as_ref().expect("clap requires one selector");
    let text = std::fs::read_to_string(path).map_err(|e| Error::Context(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::InvalidRootDatum(format!("{}: {e}", path.display())))?;
    let rd = parse_root_datum(&v)?;
    Ok((rd, ("root_datum", json!(path.display().to_string()))))
}

fn parse_root_datum(v: &Value) -> Result<RootDatum> {
    let bad = |m: &str| Error::InvalidRootDatum(m.to_string());
    let rank = v.get("rank").and_then(Value::as_u64).ok_or_else(|| bad("missing integer field 'rank'"))? as usize;
    let name = v.get("name").and_then(Value::as_str).unwrap_or("custom");
    let vectors = |key: &str| -> Result<Vec<Vec<i64>>> {
        let arr = v.get(key).and_then(Value::as_array).ok_or_else(|| bad(&format!("missing array field '{key}'")))?;
        arr.iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| bad(&format!("'{key}' must be a list of integer lists")))?
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(|| bad(&format!("non-integer entry in '{key}'"))))
                    .collect()
            })
            .collect()
    };
    RootDatum::new(name, rank, vectors("simple_roots")?, vectors("simple_coroots")?)
}

fn lazard(max: u32, what: LazardWhat) -> Result<Report> {
    let what_name = match what {
        LazardWhat::Ranks => "ranks",
        LazardWhat::Basis => "basis",
        LazardWhat::Pn => "pn",
    };
    let mut rep = Report::new("lazard", args(&[("max_degree", json!(max)), ("what", json!(what_name))]));
    let basis = LazardBasis::new(max);
    rep.result = match what {
        LazardWhat::Ranks => json!({ "ranks": basis.ranks() }),
        LazardWhat::Basis => {
            let degrees: Vec<Value> = (0..=max)
                .map(|n| {
                    let d = basis.degree(n).expect("degree in range");
                    json!({ "degree": n, "elements": strings(&d.elements) })
                })
                .collect();
            json!({ "basis": degrees })
        }
        LazardWhat::Pn => {
            let mut classes = Vec::new();
            for n in 0..=max {
                let p = basis.pn_class(n)?;
                let coords = basis
                    .lattice_coordinates(n, p.poly())
                    .ok_or_else(|| Error::Internal(format!("[P^{n}] left the lattice")))?;
                classes.push(json!({ "n": n, "class": p.to_string(), "coordinates": ints(&coords) }));
            }
            json!({ "classes": classes })
        }
    };
    Ok(rep)
}

fn fgl(which: LawArg, order: u32) -> Result<Report> {
    let mut rep = Report::new("fgl", args(&[("law", json!(law_name(which))), ("order", json!(order))]));
    let law = match which {
        LawArg::Additive => FormalGroupLaw::additive(order),
        LawArg::Multiplicative => FormalGroupLaw::multiplicative(order),
        // m_1..m_{order-1} determine every coefficient up to total degree `order`.
        LawArg::Universal => FormalGroupLaw::universal(order - 1),
    };
    let mut coefficients = Vec::new();
    for s in 2..=law.order() {
        for i in 1..s {
            let j = s - i;
            if i > j {
                continue;
            }
            let a = law.coefficient(i, j);
            if !a.is_zero() {
                coefficients.push(json!({ "i": i, "j": j, "value": a.to_string() }));
            }
        }
    }
    let (u1, u2) = law.unit_residuals()?;
    let comm = law.commutativity_residual()?;
    let assoc = law.associativity_residual(law.order())?;
    let ok = u1.is_zero() && u2.is_zero() && comm.is_zero() && assoc.is_zero();
    rep.ok = ok;
    rep.result = json!({
        "law": law.kind().to_string(),
        "order": law.order(),
        "series": law.series().poly().to_string(),
        "inverse": law.inverse_series().poly().to_string(),
        "coefficients": coefficients,
        "residuals": {
            "left_unit": u1.poly().to_string(),
            "right_unit": u2.poly().to_string(),
            "commutativity": comm.poly().to_string(),
            "associativity": assoc.poly().to_string(),
        },
        "axioms_hold": ok,
    });
    Ok(rep)
}

fn word_json(word: &[usize]) -> Value {
    Value::Array(word.iter().map(|i| json!(i + 1)).collect())
}

fn weyl(g: &GroupArgs, summary: bool) -> Result<Report> {
    let (rd, echo) = root_datum(g)?;
    let mut rep = Report::new("weyl", args(&[echo, ("summary", json!(summary))]));
    let w = WeylGroup::enumerate(&rd)?;
    let mut result = json!({
        "name": rd.name(),
        "rank": rd.rank(),
        "simple_roots": rd.simple_roots(),
        "simple_coroots": rd.simple_coroots(),
        "cartan_matrix": rd.cartan_matrix(),
        "order": w.order(),
        "longest_length": w.longest_length(),
        "length_counts": w.length_counts(),
        "roots": w.roots(),
    });
    if !summary {
        let elements: Vec<Value> = w
            .elements()
            .iter()
            .map(|e| json!({ "word": word_json(&e.word), "length": e.length(), "matrix": e.matrix.rows() }))
            .collect();
        result["elements"] = Value::Array(elements);
    }
    rep.result = result;
    Ok(rep)
}

fn torsion(g: &GroupArgs, components: u64) -> Result<Report> {
    let (rd, echo) = root_datum(g)?;
    let mut rep = Report::new("torsion-index", args(&[echo, ("components", json!(components))]));
    let w = WeylGroup::enumerate(&rd)?;
    let t = torsion_index(&w)?;
    let per_degree: Vec<Value> = t
        .per_degree
        .iter()
        .map(|d| json!({ "degree": d.degree, "divisors": ints(&d.divisors), "exponent": int(&d.exponent) }))
        .collect();
    rep.result = json!({
        "group": rd.name(),
        "torsion_index": int(&(&t.tau * BigInt::from(components))),
        "connected_torsion_index": int(&t.tau),
        "components": components,
        "top_degree_exponent": int(&t.top_degree),
        "per_degree": per_degree,
    });
    Ok(rep)
}

fn twisted(g: &GroupArgs, which: LawArg, order: u32, bound: i32) -> Result<Report> {
    let (rd, echo) = root_datum(g)?;
    let mut rep = Report::new(
        "twisted",
        args(&[echo, ("law", json!(law_name(which))), ("order", json!(order)), ("degree_bound", json!(bound))]),
    );
    // Two extra orders let every reported block be checked for stability.
    let wide = order + 2;
    let lazard;
    let (law, lattice): (FormalGroupLaw, Box<dyn CoefficientLattice + '_>) = match which {
        LawArg::Additive => {
            let law = FormalGroupLaw::additive(wide);
            let z = IntegerCoefficients::new(law.coefficient_ring());
            (law, Box::new(z))
        }
        LawArg::Multiplicative => {
            let law = FormalGroupLaw::multiplicative(wide);
            let l = LaurentCoefficients::new(law.coefficient_ring());
            (law, Box::new(l))
        }
        LawArg::Universal => {
            if bound < 0 {
                return Err(Error::Context("--degree-bound must be >= 0 for the universal law".into()));
            }
            lazard = LazardBasis::new(wide.max(bound as u32 + 2));
            (lazard.law().clone(), Box::new(lazard.clone()))
        }
    };
    let ctx = TwistedContext::new(law, rd, wide)?;
    let mut generators = Vec::new();
    for i in 0..ctx.datum().num_simple() {
        let s = ctx.weyl().generator(i);
        let images: Vec<String> = ctx.weyl_images(s)?.iter().map(|x| x.poly().to_string()).collect();
        generators.push(json!({ "reflection": i + 1, "images": images }));
    }
    let mut blocks = Vec::new();
    for e in -(order as i32)..=bound {
        let cap = (order as i32).min(bound - e) as u32;
        let block = ctx.invariants_truncated(lattice.as_ref(), e, cap)?;
        if !block.rational_check() {
            rep.ok = false;
            rep.warnings.push(format!(
                "total degree {}: integral rank {} differs from averaging rank {}",
                block.total_degree,
                block.rank(),
                block.rational_rank
            ));
        }
        if block.stability == Stability::Unstable {
            rep.warnings.push(format!("total degree {}: invariants change under a wider truncation", block.total_degree));
        }
        let bidegrees: Vec<Value> = block
            .bidegree_ranks
            .iter()
            .map(|((f, d), r)| json!({ "filtration": f, "coefficient_degree": d, "rank": r }))
            .collect();
        let elements = block
            .kernel
            .row_vecs()
            .iter()
            .map(|row| ctx.element(&block.space, row).map(|s| s.poly().to_string()))
            .collect::<Result<Vec<_>>>()?;
        blocks.push(json!({
            "total_degree": block.total_degree,
            "cap": block.cap,
            "rank": block.rank(),
            "rational_rank": block.rational_rank,
            "stability": block.stability.as_str(),
            "bidegrees": bidegrees,
            "invariants": elements,
        }));
    }
    rep.result = json!({
        "group": ctx.datum().name(),
        "law": ctx.law().kind().to_string(),
        "order": order,
        "variables": gbord_core::twisted::t_names(ctx.rank()),
        "generator_action": generators,
        "invariants": blocks,
    });
    Ok(rep)
}

fn btpair(r: usize, max: u32) -> Result<Report> {
    let mut rep = Report::new("btpair", args(&[("rank", json!(r)), ("max_degree", json!(max))]));
    let ctx = BtContext::new(r, max)?;
    let all = MultiIndex::up_to(r, max);
    let mut pairing = Vec::with_capacity(all.len());
    let mut unitriangular = true;
    for (i, k) in all.iter().enumerate() {
        let t = ctx.t_monomial(k);
        let mut row = Vec::with_capacity(all.len());
        for (j, m) in all.iter().enumerate() {
            let v = ctx.pairing(&t, &BTClass::basis(ctx.ring(), m.clone()))?;
            let s = v.to_string();
            if (i == j && s != "1") || (j < i && !v.is_zero()) {
                unitriangular = false;
            }
            row.push(s);
        }
        pairing.push(row);
    }
    let mut dual_ok = true;
    let mut dual = Vec::new();
    for (mp, d) in ctx.dual_basis() {
        for m in &all {
            let v = ctx.pairing(d, &BTClass::basis(ctx.ring(), m.clone()))?;
            let expect = if m == mp { "1" } else { "0" };
            dual_ok &= v.to_string() == expect;
        }
        dual.push(json!({ "index": mp.to_string(), "series": d.poly().to_string() }));
    }
    rep.ok = unitriangular && dual_ok;
    rep.result = json!({
        "rank": r,
        "max_degree": max,
        "index": strings(&all),
        "pairing": pairing,
        "unitriangular": unitriangular,
        "dual_basis": dual,
        "dual_basis_ok": dual_ok,
    });
    Ok(rep)
}

fn lattice_labels(ctx: &BtContext, lat: &gbord_core::bt::BtLattice) -> Vec<String> {
    lat.index
        .iter()
        .map(|(m, b)| {
            let c = &ctx.lazard().degree(lat.degree - m.total()).expect("in range").elements[*b];
            let c = c.to_string();
            if c == "1" {
                m.to_string()
            } else {
                format!("({c})*{m}")
            }
        })
        .collect()
}

fn coinv(g: &GroupArgs, n: u32) -> Result<Report> {
    let (rd, echo) = root_datum(g)?;
    let mut rep = Report::new("coinv", args(&[echo, ("degree", json!(n))]));
    let w = WeylGroup::enumerate(&rd)?;
    let ctx = BtContext::new(rd.rank(), n)?;
    let c = ctx.coinvariants(&w, n)?;
    rep.ok = c.free_rank == c.rational_rank;
    if !rep.ok {
        rep.warnings.push(format!("free rank {} differs from averaging rank {}", c.free_rank, c.rational_rank));
    }
    let quotient: Vec<Value> = c.quotient.row_vecs().iter().map(|r| ints(r)).collect();
    rep.result = json!({
        "group": rd.name(),
        "degree": n,
        "basis": lattice_labels(&ctx, &c.lattice),
        "lattice_rank": c.lattice_rank,
        "relation_rank": c.relation_rank,
        "free_rank": c.free_rank,
        "divisors": ints(&c.divisors),
        "rational_rank": c.rational_rank,
        "quotient": quotient,
    });
    Ok(rep)
}

fn verify_duality(g: &GroupArgs, max: u32, invert: Option<u64>) -> Result<Report> {
    let (rd, echo) = root_datum(g)?;
    let mut a = vec![echo, ("max_degree", json!(max))];
    if let Some(t) = invert {
        a.push(("invert_tau", json!(t)));
    }
    let mut rep = Report::new("verify-duality", args(&a));
    // Two extra degrees let every invariant block be checked for stability.
    let ctx = BtContext::new(rd.rank(), max + 2)?;
    let tw = TwistedContext::new(ctx.law().clone(), rd, max + 2)?;
    let computed = torsion_index(tw.weyl())?.tau;
    let (tau, source) = match invert {
        Some(t) => (BigInt::from(t), "override"),
        None => (computed.clone(), "torsion index"),
    };
    let mut degrees = Vec::new();
    let mut all_z = true;
    let mut rational = true;
    for n in 0..=max {
        let d = ctx.duality_check(&tw, n, &tau)?;
        let passed = d.rational_check() && d.verdict.is_success();
        rational &= passed;
        all_z &= d.verdict == Verdict::PerfectOverZ;
        if d.stability != Stability::Stable {
            rep.warnings.push(format!("degree {n}: invariant blocks are {}", d.stability.as_str()));
        }
        if !passed {
            rep.warnings.push(format!("degree {n}: rational comparison failed"));
        }
        let blocks: Vec<Value> = d
            .blocks
            .iter()
            .map(|b| {
                json!({
                    "total_degree": b.total_degree,
                    "rank": b.rank,
                    "rational_rank": b.rational_rank,
                    "stability": b.stability.as_str(),
                })
            })
            .collect();
        degrees.push(json!({
            "degree": n,
            "verdict": d.verdict.as_str(),
            "lattice_rank": d.lattice_rank,
            "quotient_rank": d.quotient_rank,
            "coinvariant_divisors": ints(&d.coinvariant_divisors),
            "functionals": d.functionals,
            "pairing_rank": d.pairing_rank,
            "pairing_divisors": ints(&d.pairing_divisors),
            "relations_annihilated": d.relations_annihilated,
            "kernel_match": d.kernel_match,
            "averaging_ok": d.averaging_ok,
            "stability": d.stability.as_str(),
            "invariant_blocks": blocks,
        }));
    }
    rep.ok = rational;
    rep.result = json!({
        "group": tw.datum().name(),
        "max_degree": max,
        "torsion_index": int(&computed),
        "tau": int(&tau),
        "tau_source": source,
        "degrees": degrees,
        "rational_check": rational,
        "perfect_over_z": all_z,
    });
    Ok(rep)
}
