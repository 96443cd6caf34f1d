//! JSON, CSV and text renderings of the library results.

use serde_json::{json, Value};
use stable_pieces::glmodel::{ModelSignature, PartitionReport};
use stable_pieces::pieces::{PieceDescriptor, Step, SumCheck, TwistedPair};
use stable_pieces::wonderful::{cs_index, CompletionAtlas};
use stable_pieces::{CountPolynomial, NodeSubset, WeylDatum, WeylElement};

pub fn subset(j: NodeSubset) -> Value {
    json!(j.labels())
}

pub fn element(w: &WeylDatum, x: WeylElement) -> Value {
    json!(w.reduced_word(x))
}

pub fn count(p: &CountPolynomial) -> Value {
    serde_json::to_value(p).expect("count polynomials serialize")
}

pub fn datum(w: &WeylDatum) -> Value {
    let delta: Vec<usize> = w.delta().iter().map(|d| d + 1).collect();
    json!({ "type": w.label(), "delta": delta, "torus_rank": w.torus_rank() })
}

fn steps_json(w: &WeylDatum, steps: &[Step]) -> Value {
    steps
        .iter()
        .map(|s| json!({ "Jn": subset(s.j), "Jpn": subset(s.jp), "un": element(w, s.u) }))
        .collect()
}

pub fn descriptor(w: &WeylDatum, d: &PieceDescriptor) -> Value {
    json!({
        "J": subset(d.pair.j),
        "Jprime": subset(d.pair.jp),
        "y": element(w, d.pair.y),
        "steps": steps_json(w, &d.steps),
        "w": element(w, d.w),
        "Jinf": subset(d.j_inf),
        "twist": element(w, d.twist),
        "exponent": d.exponent,
        "count": count(&d.count),
        "dim": d.dim,
    })
}

pub fn pair(w: &WeylDatum, tp: &TwistedPair) -> Value {
    json!({ "J": subset(tp.j), "Jprime": subset(tp.jp), "y": element(w, tp.y) })
}

pub fn steps_text(w: &WeylDatum, steps: &[Step]) -> String {
    steps
        .iter()
        .map(|s| format!("({},{},{})", s.j, s.jp, w.word_string(s.u)))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn pair_text(w: &WeylDatum, tp: &TwistedPair) -> String {
    format!("J={} J'={} y={}", tp.j, tp.jp, w.word_string(tp.y))
}

pub fn datum_text(w: &WeylDatum) -> String {
    let delta: Vec<String> = w.delta().iter().map(|d| (d + 1).to_string()).collect();
    format!("{} delta=[{}] torus_rank={}", w.label(), delta.join(","), w.torus_rank())
}

pub fn pieces_json(w: &WeylDatum, groups: &[(TwistedPair, Vec<PieceDescriptor>)]) -> Value {
    let pairs: Vec<Value> = groups
        .iter()
        .map(|(tp, ds)| {
            let mut v = pair(w, tp);
            v["descriptors"] = ds.iter().map(|d| descriptor(w, d)).collect();
            v
        })
        .collect();
    json!({ "datum": datum(w), "pairs": pairs })
}

pub fn pieces_text(w: &WeylDatum, groups: &[(TwistedPair, Vec<PieceDescriptor>)]) -> String {
    let mut out = format!("{}\n", datum_text(w));
    for (tp, ds) in groups {
        out += &format!("{}: {} pieces\n", pair_text(w, tp), ds.len());
        for (i, d) in ds.iter().enumerate() {
            out += &format!(
                "  sigma {i}: steps {} w={} J_inf={} twist={} exponent={} count={} dim={}\n",
                steps_text(w, &d.steps),
                w.word_string(d.w),
                d.j_inf,
                w.word_string(d.twist),
                d.exponent,
                d.count.factored_string(),
                d.dim
            );
        }
    }
    out
}

pub fn pieces_csv(
    w: &WeylDatum,
    groups: &[(TwistedPair, Vec<PieceDescriptor>)],
) -> Result<String, csv::Error> {
    let mut wr = csv::Writer::from_writer(Vec::new());
    wr.write_record([
        "J", "Jprime", "y", "sigma_id", "steps", "w", "J_inf", "twist", "exponent",
        "count_factored", "dim",
    ])?;
    for (tp, ds) in groups {
        for (i, d) in ds.iter().enumerate() {
            wr.write_record([
                tp.j.to_string(),
                tp.jp.to_string(),
                w.word_string(tp.y),
                i.to_string(),
                steps_text(w, &d.steps),
                w.word_string(d.w),
                d.j_inf.to_string(),
                w.word_string(d.twist),
                d.exponent.to_string(),
                d.count.factored_string(),
                d.dim.to_string(),
            ])?;
        }
    }
    Ok(String::from_utf8(wr.into_inner().expect("in-memory writer")).expect("utf-8"))
}

pub fn verify_json(w: &WeylDatum, checks: &[(TwistedPair, SumCheck)]) -> Value {
    let pairs: Vec<Value> = checks
        .iter()
        .map(|(tp, c)| {
            let mut v = pair(w, tp);
            v["pieces"] = json!(c.pieces);
            v["sum"] = json!(c.lhs.to_string());
            v["expected"] = json!(c.rhs.to_string());
            v["holds"] = json!(c.holds());
            v
        })
        .collect();
    let all = checks.iter().all(|(_, c)| c.holds());
    json!({ "datum": datum(w), "pairs": pairs, "verdict": verdict(all) })
}

pub fn verify_text(w: &WeylDatum, checks: &[(TwistedPair, SumCheck)]) -> String {
    let mut out = format!("{}\n", datum_text(w));
    for (tp, c) in checks {
        out += &format!(
            "{}: {} pieces, sum {} vs {} {}\n",
            pair_text(w, tp),
            c.pieces,
            c.lhs,
            c.rhs,
            verdict(c.holds())
        );
    }
    let all = checks.iter().all(|(_, c)| c.holds());
    out += &format!("verdict: {}\n", verdict(all));
    out
}

pub fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

pub fn atlas_json(w: &WeylDatum, atlas: &CompletionAtlas) -> Value {
    let rows: Vec<Value> = atlas
        .rows
        .iter()
        .map(|r| {
            let d = &r.descriptor;
            json!({
                "J": subset(r.j),
                "sigma_id": r.sigma_id,
                "steps": steps_json(w, &d.steps),
                "w": element(w, d.w),
                "J_inf": subset(d.j_inf),
                "twist": element(w, d.twist),
                "exponent": d.exponent,
                "count": count(&r.count),
                "dim": r.dim,
            })
        })
        .collect();
    let index: Vec<Value> = cs_index(atlas)
        .iter()
        .map(|c| {
            json!({
                "J": subset(c.j),
                "sigma_id": c.sigma_id,
                "J_inf": subset(c.j_inf),
                "twist": element(w, c.twist),
            })
        })
        .collect();
    json!({
        "datum": datum(w),
        "rows": rows,
        "total": atlas.total.to_string(),
        "total_count": count(&atlas.total),
        "cs_index": index,
    })
}

pub fn atlas_csv(w: &WeylDatum, atlas: &CompletionAtlas) -> Result<String, csv::Error> {
    let mut wr = csv::Writer::from_writer(Vec::new());
    wr.write_record([
        "J", "sigma_id", "steps", "w", "J_inf", "twist", "exponent", "count_factored", "dim",
    ])?;
    for r in &atlas.rows {
        let d = &r.descriptor;
        wr.write_record([
            r.j.to_string(),
            r.sigma_id.to_string(),
            steps_text(w, &d.steps),
            w.word_string(d.w),
            d.j_inf.to_string(),
            w.word_string(d.twist),
            d.exponent.to_string(),
            r.count.factored_string(),
            r.dim.to_string(),
        ])?;
    }
    Ok(String::from_utf8(wr.into_inner().expect("in-memory writer")).expect("utf-8"))
}

pub fn atlas_text(w: &WeylDatum, atlas: &CompletionAtlas) -> String {
    let mut out = format!("{}\n", datum_text(w));
    for r in &atlas.rows {
        let d = &r.descriptor;
        out += &format!(
            "J={} sigma {}: w={} J_inf={} twist={} count={} dim={}\n",
            r.j,
            r.sigma_id,
            w.word_string(d.w),
            d.j_inf,
            w.word_string(d.twist),
            r.count,
            r.dim
        );
    }
    out += &format!("total: {}\n", atlas.total);
    out
}

fn signature_json(w: &WeylDatum, s: &ModelSignature) -> Value {
    s.records
        .iter()
        .map(|r| json!({ "J": subset(r.j), "Jprime": subset(r.jp), "u": element(w, r.pos) }))
        .collect()
}

pub fn glcheck_json(w: &WeylDatum, r: &PartitionReport) -> Value {
    let buckets: Vec<Value> = r
        .buckets
        .iter()
        .map(|b| {
            json!({
                "signature": signature_json(w, &b.signature),
                "size": b.size,
                "matched_sigma": b.matched_sigma,
                "predicted": b.predicted.map(|p| p as i64),
                "classifier": b.classes.iter().collect::<Vec<_>>(),
                "position_failures": b.position_failures,
            })
        })
        .collect();
    json!({
        "config": r.config.name(),
        "d": r.d,
        "q": r.q,
        "pair": pair(w, &r.pair),
        "total": r.total,
        "buckets": buckets,
        "verdict": verdict(r.holds()),
    })
}

pub fn glcheck_text(w: &WeylDatum, r: &PartitionReport) -> String {
    let mut out = format!("{} d={} q={} {}\n", r.config.name(), r.d, r.q, pair_text(w, &r.pair));
    for b in &r.buckets {
        let sig: Vec<String> = b
            .signature
            .records
            .iter()
            .map(|x| format!("({},{},{})", x.j, x.jp, w.word_string(x.pos)))
            .collect();
        let sigma = b.matched_sigma.map_or("none".to_string(), |s| s.to_string());
        let predicted = b.predicted.map_or("none".to_string(), |p| p.to_string());
        out += &format!(
            "  size={} predicted={predicted} sigma={sigma} signature={}\n",
            b.size,
            sig.join(";")
        );
    }
    out += &format!("verdict: {}\n", verdict(r.holds()));
    out
}
