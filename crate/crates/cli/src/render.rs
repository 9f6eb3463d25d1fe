//! Report assembly and plain-text rendering.

use num_complex::Complex64;
use qdouble::anyon::AnyonRow;
use qdouble::group::FiniteGroup;
use qdouble::rep::CharacterTable;
use qdouble::spectrum::SpectrumReport;
use qdouble::verify::CheckResult;
use serde_json::{json, Value};

/// Rounds away float noise so equal inputs print identically.
fn tidy(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn complex_text(z: Complex64) -> String {
    let (re, im) = (tidy(z.re), tidy(z.im));
    let num = |x: f64| {
        if x == x.round() {
            format!("{}", x as i64)
        } else {
            format!("{x:.4}")
        }
    };
    match (re, im) {
        (_, 0.0) => num(re),
        (0.0, _) => format!("{}i", num(im)),
        _ if im < 0.0 => format!("{}-{}i", num(re), num(-im)),
        _ => format!("{}+{}i", num(re), num(im)),
    }
}

pub fn group_report(group: &FiniteGroup, table: &CharacterTable) -> qdouble::Result<Value> {
    let mut classes = Vec::new();
    for (k, class) in group.conjugacy_classes().iter().enumerate() {
        let normalizer = group.normalizer(class.representative)?;
        classes.push(json!({
            "label": group.class_label(k),
            "representative": group.label(class.representative),
            "size": class.size(),
            "members": class.members.iter().map(|&g| group.label(g)).collect::<Vec<_>>(),
            "normalizer_order": normalizer.order(),
            "normalizer": normalizer.elements().iter().map(|&g| group.label(g)).collect::<Vec<_>>(),
        }));
    }
    let irreps: Vec<Value> = (0..table.num_irreps())
        .map(|i| {
            json!({
                "label": table.labels[i],
                "dim": table.dims[i],
                "character": table.chi[i].iter().map(|z| [tidy(z.re), tidy(z.im)]).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "name": group.name(),
        "order": group.order(),
        "abelian": group.is_abelian(),
        "elements": group.labels(),
        "classes": classes,
        "character_table": irreps,
    }))
}

fn pad_table(rows: &[Vec<String>]) -> String {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols)
        .map(|j| rows.iter().filter_map(|r| r.get(j)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> =
            r.iter().zip(&widths).map(|(s, &w)| format!("{s}{}", " ".repeat(w - s.chars().count()))).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn group_text(group: &FiniteGroup, table: &CharacterTable, report: &Value) -> String {
    let mut out = format!(
        "group {}: order {}, {} classes{}\n\n",
        group.name(),
        group.order(),
        group.num_classes(),
        if group.is_abelian() { ", abelian" } else { "" }
    );
    let mut rows = vec![vec!["class".to_string(), "size".into(), "members".into(), "normalizer".into()]];
    for c in report["classes"].as_array().into_iter().flatten() {
        let list =
            |key: &str| c[key].as_array().into_iter().flatten().filter_map(Value::as_str).collect::<Vec<_>>().join(" ");
        rows.push(vec![
            c["label"].as_str().unwrap_or("").to_string(),
            c["size"].to_string(),
            format!("{{{}}}", list("members")),
            format!("{{{}}} (order {})", list("normalizer"), c["normalizer_order"]),
        ]);
    }
    out.push_str(&pad_table(&rows));
    out.push('\n');
    let mut header = vec!["irrep".to_string(), "dim".into()];
    header.extend((0..group.num_classes()).map(|k| group.class_label(k)));
    let mut rows = vec![header];
    for i in 0..table.num_irreps() {
        let mut row = vec![table.labels[i].clone(), table.dims[i].to_string()];
        row.extend(table.chi[i].iter().map(|&z| complex_text(z)));
        rows.push(row);
    }
    out.push_str(&pad_table(&rows));
    out
}

pub fn anyon_text(rows: &[AnyonRow]) -> String {
    let mut table = vec![vec![
        "anyon".to_string(),
        "class".into(),
        "rep".into(),
        "|N|".into(),
        "irrep".into(),
        "q.dim".into(),
        "type".into(),
    ]];
    for r in rows {
        let kind = serde_json::to_value(r.kind).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
        table.push(vec![
            r.label.clone(),
            r.class.clone(),
            r.class_representative.clone(),
            r.normalizer_order.to_string(),
            r.irrep.clone(),
            r.quantum_dimension.to_string(),
            kind,
        ]);
    }
    pad_table(&table)
}

/// Per-item deviations are listed for failed checks, or for all when `detailed`.
pub fn verify_text(group: &FiniteGroup, tolerance: f64, results: &[CheckResult], detailed: bool) -> String {
    let mut rows = Vec::new();
    for r in results {
        let status = if r.skipped {
            "SKIP"
        } else if r.passed {
            "PASS"
        } else {
            "FAIL"
        };
        let dev = if r.skipped { r.note.clone().unwrap_or_default() } else { format!("{:.3e}", r.max_deviation) };
        rows.push(vec![status.to_string(), r.name.clone(), dev]);
        if detailed || !r.passed {
            for d in &r.details {
                rows.push(vec![String::new(), format!("  {}", d.item), format!("{:.3e}", d.deviation)]);
            }
        }
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    format!(
        "{}: {} checks, {} failed, tolerance {tolerance:e}\n{}",
        group.name(),
        results.len(),
        failed,
        pad_table(&rows)
    )
}

pub fn spectrum_text(group: &str, lattice: &str, hamiltonian: &str, report: &SpectrumReport) -> String {
    let mut out = format!(
        "{group} {hamiltonian} Hamiltonian on {lattice}: dim {}, {} levels{}\nground energy {}, degeneracy {}\n",
        report.dim,
        report.levels.len(),
        if report.truncated { " (lowest only)" } else { "" },
        tidy(report.ground_energy),
        report.ground_degeneracy
    );
    let mut rows = vec![vec!["energy".to_string(), "multiplicity".into(), "sectors".into()]];
    for l in &report.levels {
        rows.push(vec![format!("{}", tidy(l.eigenvalue)), l.multiplicity.to_string(), l.sectors.join(" ")]);
    }
    out.push_str(&pad_table(&rows));
    out
}
