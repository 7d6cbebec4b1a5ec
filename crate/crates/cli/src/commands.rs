use std::path::Path;

use serde_json::{json, Value};

use drinfeld_core::algebra::field::FiniteField;
use drinfeld_core::algebra::multipoly::MultiPolyRing;
use drinfeld_core::algebra::poly::{Poly, PolyRing};
use drinfeld_core::algebra::ring::{KAlgebra, Ring};
use drinfeld_core::expansion::{ExpansionContext, Series};
use drinfeld_core::lattice::{count_cyclic_sublattices, enumerate_cyclic_sublattices, smith_normal_form};
use drinfeld_core::modpoly::{modular_polynomial, ModpolyOptions};
use drinfeld_core::{bridge as core_bridge, Error};

use crate::{cache, Report, SeriesKind};

type Res = Result<Report, Error>;

fn poly_str(a: &PolyRing, p: &Poly) -> String {
    a.format_in(p, "T")
}

pub fn count(f: &FiniteField, n: &Poly, r: usize) -> Res {
    let a = PolyRing::new(f.clone());
    let c = count_cyclic_sublattices(&a, n, r)?;
    Ok(Report {
        json: json!({ "command": "count", "q": f.q(), "r": r, "n": poly_str(&a, n), "count": c.to_string() }),
        text: c.to_string(),
        ok: true,
    })
}

pub fn enumerate(f: &FiniteField, n: &Poly, r: usize) -> Res {
    let a = PolyRing::new(f.clone());
    let list = enumerate_cyclic_sublattices(&a, n, r)?;
    let text = list.iter().map(|m| m.format(&a)).collect::<Vec<_>>().join("\n");
    let mats: Vec<Value> = list.iter().map(|m| json!(m.entries_as_strings(&a))).collect();
    Ok(Report {
        json: json!({
            "command": "enumerate", "q": f.q(), "r": r, "n": poly_str(&a, n),
            "count": list.len(), "matrices": mats,
        }),
        text,
        ok: true,
    })
}

pub fn snf(a: &PolyRing, m: &[Vec<Poly>]) -> Res {
    let d = smith_normal_form(a, m)?;
    let inv: Vec<String> = d.iter().map(|p| poly_str(a, p)).collect();
    Ok(Report { json: json!({ "command": "snf", "q": a.q(), "invariants": inv }), text: inv.join(", "), ok: true })
}

pub fn bridge(f: &FiniteField, k: usize, cache_dir: Option<&Path>) -> Res {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let b = match cache_dir {
        Some(dir) => cache::load_or_build(f, k, dir)?,
        None => core_bridge::bridge(f, k),
    };
    let xr = &b.x_ring;
    let yf = &b.y_ring_fq;
    let yr = &b.y_ring;
    let composition = b.check_composition();
    let mut text = Vec::new();
    let mut rows = Vec::new();
    for i in 0..k {
        let (fi, gi, hi) = (xr.format(&b.f[i]), yf.format(&b.g[i]), yr.format(&b.h[i]));
        text.push(format!("F_{0} = {fi}\nG_{0} = {gi}\nH_{0} = {hi}", i + 1));
        rows.push(json!({ "k": i + 1, "F": fi, "G": gi, "H": hi }));
    }
    text.push(format!("H_k = F_k(G_1..G_k): {}", if composition { "ok" } else { "FAILED" }));
    Ok(Report {
        json: json!({ "command": "bridge", "q": f.q(), "k_max": k, "polynomials": rows, "composition_holds": composition }),
        text: text.join("\n"),
        ok: composition,
    })
}

fn series_json<R: Ring>(r: &R, s: &Series<R::Elem>) -> Value {
    let terms: Vec<Value> = s.formatted_terms(r).into_iter().map(|(e, c)| json!([e, c])).collect();
    json!({ "grid_denom": s.denom(), "terms": terms, "prec_num": s.prec_num() })
}

fn expand_in<R: KAlgebra>(ctx: &ExpansionContext<R>, what: SeriesKind, k: usize) -> Result<Series<R::Elem>, Error> {
    match what {
        SeriesKind::Delta => ctx.delta_product(),
        SeriesKind::DeltaEisenstein => ctx.delta_eisenstein(),
        SeriesKind::Eisenstein => ctx.eisenstein(k),
        SeriesKind::G => ctx.g_expansion(k),
        SeriesKind::U => ctx.u_expansion(k),
        SeriesKind::J => ctx.jk_expansion(k),
    }
}

fn expand_report<R: KAlgebra>(ctx: &ExpansionContext<R>, what: SeriesKind, k: usize, head: Value) -> Res {
    let s = expand_in(ctx, what, k)?;
    let mut doc = head;
    let body = series_json(ctx.ring(), &s);
    if let (Some(d), Some(b)) = (doc.as_object_mut(), body.as_object()) {
        d.extend(b.clone());
    }
    Ok(Report { json: doc, text: s.format_with(ctx.ring(), "t"), ok: true })
}

pub fn expand(f: &FiniteField, r: usize, what: SeriesKind, k: usize, prec: i64) -> Res {
    if r < 2 {
        return Err(Error::InvalidArgument("expansions need rank r >= 2".into()));
    }
    if prec <= 0 {
        return Err(Error::InvalidArgument("precision must be positive".into()));
    }
    let name = format!("{what:?}").to_lowercase();
    let head = json!({ "command": "expand", "q": f.q(), "r": r, "series": name, "k": k });
    if r == 2 {
        expand_report(&ExpansionContext::rank2(f, prec)?, what, k, head)
    } else {
        let ctx: ExpansionContext<MultiPolyRing<_>> = ExpansionContext::symbolic(f, r, prec)?;
        expand_report(&ctx, what, k, head)
    }
}

pub fn modpoly(f: &FiniteField, n: &Poly, guard: Option<i64>) -> Res {
    let p = modular_polynomial(f, n, &ModpolyOptions { guard })?;
    let c = &p.checks;
    let ok = c.descended_to_k && c.monic && c.self_evaluation_vanishes && c.galois_stable && p.bounds.sharp_all_hold;
    let mut doc = json!({ "command": "modpoly" });
    if let (Some(d), Some(b)) = (doc.as_object_mut(), p.to_json().as_object()) {
        d.extend(b.clone());
    }
    let mut text = vec![format!("Phi_n(X, j) = {}", p.format())];
    for l in &p.bounds.lines {
        text.push(format!(
            "a_{}: deg_j {} <= {} (sharp {}), displayed {} ({}), end of proof {} ({})",
            l.i,
            l.degree.map(|d| d.to_string()).unwrap_or_else(|| "-inf".into()),
            l.sharp,
            if l.sharp_holds { "ok" } else { "FAILED" },
            l.displayed,
            if l.displayed_holds { "ok" } else { "exceeded" },
            l.end_of_proof,
            if l.end_of_proof_holds { "ok" } else { "exceeded" },
        ));
    }
    text.push(format!(
        "descends to K: {}, integral: {}, self-evaluation: {}, Galois stable: {}, symmetric: {}",
        c.descended_to_k, c.integral, c.self_evaluation_vanishes, c.galois_stable, c.symmetric
    ));
    Ok(Report { json: doc, text: text.join("\n"), ok })
}
