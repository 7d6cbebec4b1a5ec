use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use drinfeld_core::algebra::field::FiniteField;
use drinfeld_core::algebra::poly::{Poly, PolyRing};
use drinfeld_core::algebra::ratfunc::RatFuncField;
use drinfeld_core::algebra::ring::Ring;
use drinfeld_core::bridge::{bridge, carlitz_exponential, eisenstein_from_exponential};
use drinfeld_core::expansion::noncancel::{random_weighted_poly, substitute_model};
use drinfeld_core::expansion::ExpansionContext;
use drinfeld_core::invariant::WeightedRing;
use drinfeld_core::lattice::{count_cyclic_sublattices, enumerate_cyclic_sublattices};
use drinfeld_core::modpoly::{modular_polynomial, ModpolyOptions};
use drinfeld_core::Error;

use crate::Report;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Counts,
    Bridge,
    Delta,
    Orders,
    Noncancel,
    Modpoly,
}

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn counts(f: &FiniteField, out: &mut Vec<Check>) -> Result<(), Error> {
    let a = PolyRing::new(f.clone());
    for r in [2usize, 3] {
        for d in 0..=2 {
            for n in a.monic_of_degree(d) {
                let c = count_cyclic_sublattices(&a, &n, r)?;
                let e = enumerate_cyclic_sublattices(&a, &n, r)?.len() as u128;
                out.push(Check {
                    name: format!("count r={r} n={}", a.format_in(&n, "T")),
                    pass: c == e,
                    detail: format!("formula {c}, enumerated {e}"),
                });
            }
        }
    }
    Ok(())
}

fn bridge_checks(f: &FiniteField, out: &mut Vec<Check>) -> Result<(), Error> {
    let b = bridge(f, 3);
    out.push(Check { name: "H_k = F_k(G)".into(), pass: b.check_composition(), detail: "k <= 3".into() });
    let k = RatFuncField::new(f.clone());
    let e = carlitz_exponential(&k, 3);
    let eis = eisenstein_from_exponential(&k, &e[1..]);
    let pass = (1..=3).all(|i| b.eval_g(&k, i, &eis) == e[i]);
    out.push(Check { name: "Carlitz e = G(E)".into(), pass, detail: "k <= 3".into() });
    Ok(())
}

fn delta(f: &FiniteField, out: &mut Vec<Check>) -> Result<(), Error> {
    let q = f.q() as i64;
    let prec = 3 * (q - 1) + q + 1;
    let ctx = ExpansionContext::rank2(f, prec)?;
    let k = ctx.ring();
    let p = ctx.delta_product()?;
    let e = ctx.delta_eisenstein()?;
    let agree = p.agrees_to::<RatFuncField>(&e, prec - 1)?;
    let lead = p.ord_num() == q - 1 && k.is_one(&k.neg(p.leading().unwrap()));
    out.push(Check {
        name: "Delta product = Eisenstein route".into(),
        pass: agree && lead,
        detail: format!("to t^{}, leading -t^{}", prec - 1, q - 1),
    });
    Ok(())
}

fn orders(f: &FiniteField, out: &mut Vec<Check>) -> Result<(), Error> {
    let q = f.q() as i64;
    let c2 = ExpansionContext::rank2(f, 4 * q)?;
    let u = c2.u_expansion(1)?;
    out.push(Check {
        name: "ord u_1, r=2".into(),
        pass: u.ord_num() == -(q - 1) * (q - 1) && u.denom() == q * q - 1,
        detail: format!("{}/{}", u.ord_num(), u.denom()),
    });
    let c3 = ExpansionContext::symbolic(f, 3, 2 * q)?;
    for kk in 1..=2usize {
        let u = c3.u_expansion(kk)?;
        let want = -(q - 1) * (q.pow(kk as u32) - 1);
        out.push(Check {
            name: format!("ord u_{kk}, r=3"),
            pass: u.ord_num() == want && !u.leading_cancelled(),
            detail: format!("{}/{}", u.ord_num(), u.denom()),
        });
    }
    Ok(())
}

fn noncancel(f: &FiniteField, seed: u64, out: &mut Vec<Check>) -> Result<(), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = WeightedRing::new(f, 3)?;
    let mut pass = 0;
    let total = 10;
    for _ in 0..total {
        let g = random_weighted_poly(&w, &mut rng, 4, 3);
        if substitute_model(&w, &g, 1, None)?.consistent() {
            pass += 1;
        }
    }
    out.push(Check { name: "order = -c w(f)".into(), pass: pass == total, detail: format!("{pass}/{total}, seed {seed}") });
    Ok(())
}

fn modpoly(f: &FiniteField, out: &mut Vec<Check>) -> Result<(), Error> {
    let p = modular_polynomial(f, &Poly::t(), &ModpolyOptions::default())?;
    let c = &p.checks;
    out.push(Check {
        name: "modular polynomial n=T".into(),
        pass: p.degree == f.q() as usize + 1
            && c.monic
            && c.descended_to_k
            && c.integral
            && c.self_evaluation_vanishes
            && c.galois_stable
            && p.bounds.sharp_all_hold,
        detail: format!("degree {}", p.degree),
    });
    Ok(())
}

pub fn run(f: &FiniteField, suite: Suite, seed: u64) -> Result<Report, Error> {
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Counts {
        counts(f, &mut out)?;
    }
    if all || suite == Suite::Bridge {
        bridge_checks(f, &mut out)?;
    }
    if all || suite == Suite::Delta {
        delta(f, &mut out)?;
    }
    if all || suite == Suite::Orders {
        orders(f, &mut out)?;
    }
    if all || suite == Suite::Noncancel {
        noncancel(f, seed, &mut out)?;
    }
    if all || suite == Suite::Modpoly {
        modpoly(f, &mut out)?;
    }
    let ok = out.iter().all(|c| c.pass);
    let text = out
        .iter()
        .map(|c| format!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail))
        .collect::<Vec<_>>()
        .join("\n");
    let checks: Vec<_> = out.iter().map(|c| json!({ "name": c.name, "pass": c.pass, "detail": c.detail })).collect();
    Ok(Report {
        json: json!({ "command": "verify", "q": f.q(), "seed": seed, "passed": ok, "checks": checks }),
        text,
        ok,
    })
}
