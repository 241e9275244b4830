//! Text and CSV renderings. JSON goes straight through serde.

use std::fmt::Write;

use rotbent::search::CheckEntry;

use crate::report::{Analysis, Census, Expansion, Orbits, Search, Verification};

fn field(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key:<18}{value}");
}

fn list<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn analysis(a: &Analysis) -> String {
    let mut out = String::new();
    let s = &a.structure;
    field(&mut out, "spec", &a.spec);
    field(&mut out, "n", a.n);
    field(&mut out, "degree", a.degree);
    field(&mut out, "affine", a.affine);
    field(&mut out, "weight", a.weight);
    field(&mut out, "nonlinearity", a.nonlinearity);
    field(&mut out, "bent", a.bent);
    field(&mut out, "short cycles r", s.r);
    field(&mut out, "full cycles l", s.l);
    field(&mut out, "s_f", s.s_f);
    field(&mut out, "homogeneous", s.homogeneous);
    if let Some(v) = s.verdict {
        field(
            &mut out,
            "cycle verdict",
            serde_json::to_value(v).unwrap().as_str().unwrap_or(""),
        );
    }
    if s.odd_index_nonbent {
        field(&mut out, "odd-index test", "not bent");
    }
    field(
        &mut out,
        "sign corners",
        format!("{}, {}", a.sign_corners[0], a.sign_corners[1]),
    );
    field(&mut out, "corner (folded)", a.corner.folded);
    if let Some(r) = a.corner.reduced {
        field(&mut out, "corner (reduced)", r);
    }
    match &a.jset {
        Some(j) => field(
            &mut out,
            "J-set bound",
            format!("{} for J = {{{}}}", j.bound, list(&j.j)),
        ),
        None => field(&mut out, "J-set bound", "n/a"),
    }
    field(&mut out, "truth table", &a.hex);
    if !s.terms.is_empty() {
        let _ = writeln!(
            out,
            "\n{:<24}{:>7}{:>10}{:>7}{:>6}",
            "term", "degree", "monomials", "cycle", "odd"
        );
        for t in &s.terms {
            let _ = writeln!(
                out,
                "{:<24}{:>7}{:>10}{:>7}{:>6}",
                t.term,
                t.degree,
                t.monomials,
                t.kind.to_string(),
                t.odd_indices
            );
        }
    }
    out
}

pub fn orbits(o: &Orbits) -> String {
    let mut out = String::new();
    if let Some(rows) = &o.orbits {
        let width = o.n.max(6);
        let _ = writeln!(
            out,
            "{:>14}{:>6}  {:<width$}",
            "representative", "size", "vector"
        );
        for r in rows {
            let _ = writeln!(
                out,
                "{:>14}{:>6}  {:<width$}",
                r.representative, r.size, r.vector
            );
        }
        out.push('\n');
    }
    for (size, count) in &o.counts_by_size {
        let _ = writeln!(out, "size {size:<4}{count:>12} orbits");
    }
    let _ = writeln!(out, "total    {:>12} orbits", o.total);
    out
}

pub fn expansion(e: &Expansion) -> String {
    let mut out = String::new();
    field(&mut out, "spec", &e.spec);
    field(&mut out, "monomials", e.monomials.len());
    let anf: Vec<String> = e
        .monomials
        .iter()
        .map(|m| {
            if m.is_empty() {
                "1".to_string()
            } else {
                m.iter().map(|i| format!("x{i}")).collect()
            }
        })
        .collect();
    field(
        &mut out,
        "anf",
        if anf.is_empty() {
            "0".into()
        } else {
            anf.join(" + ")
        },
    );
    field(&mut out, "truth table", &e.hex);
    out
}

pub fn search(s: &Search) -> String {
    let mut out = String::new();
    field(&mut out, "n", s.n);
    field(
        &mut out,
        "kind",
        serde_json::to_value(s.kind).unwrap().as_str().unwrap_or(""),
    );
    if let Some(d) = s.degree {
        field(&mut out, "degree", d);
    }
    field(&mut out, "instances", s.instances);
    field(
        &mut out,
        "coverage",
        serde_json::to_value(s.coverage)
            .unwrap()
            .as_str()
            .unwrap_or(""),
    );
    field(&mut out, "bent found", s.bent.len());
    for spec in &s.bent {
        let _ = writeln!(out, "  {spec}");
    }
    out
}

fn entry_line(out: &mut String, e: &CheckEntry) {
    let status = if e.violations.is_empty() {
        "ok"
    } else {
        "FAIL"
    };
    let coverage = serde_json::to_value(e.coverage).unwrap();
    let _ = writeln!(
        out,
        "{:<36}{:>10}  {:<11}{:>8} ms  {status}",
        e.check,
        e.instances,
        coverage.as_str().unwrap_or(""),
        e.elapsed_ms
    );
    for v in &e.violations {
        let _ = writeln!(out, "    {}: {}", v.detail, v.reproducer);
    }
}

pub fn verification(v: &Verification) -> String {
    let r = &v.report;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<36}{:>10}  {:<11}{:>11}",
        "check", "instances", "coverage", "time"
    );
    for e in &r.entries {
        entry_line(&mut out, e);
    }
    out.push('\n');
    field(&mut out, "n", r.n);
    field(&mut out, "seed", r.seed);
    field(&mut out, "bent specs", r.bent_specs.len());
    field(&mut out, "violations", r.violation_count());
    field(
        &mut out,
        "result",
        if r.passed { "passed" } else { "FAILED" },
    );
    out
}

pub fn census(c: &Census) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<28}{:>7}{:>7}{:>10}{:>14}{:>6}",
        "spec", "degree", "cycle", "monomials", "nonlinearity", "bent"
    );
    for r in &c.rows {
        let _ = writeln!(
            out,
            "{:<28}{:>7}{:>7}{:>10}{:>14}{:>6}",
            r.spec,
            r.degree,
            r.cycle_kind.to_string(),
            r.monomials,
            r.nonlinearity,
            r.bent
        );
    }
    if let Some(b) = &c.brute_force {
        out.push('\n');
        field(&mut out, "tables", b.tables);
        field(&mut out, "bent", b.bent);
        field(
            &mut out,
            "mismatches",
            b.nonlinearity_mismatches + b.hadamard_mismatches,
        );
    }
    out
}

pub fn census_csv(c: &Census) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &c.rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
