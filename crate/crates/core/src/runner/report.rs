use super::record::ResultRecord;

fn num(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{v:.6}"),
        Some(v) => v.to_string(),
        None => "-".into(),
    }
}

/// Plain-text table with one line per experiment and cutoff. `trend` is the
/// relative change of the fitted limit from the previous cutoff. Failed
/// records are marked `FAIL`, and records without rows show their
/// diagnostic.
pub fn report(records: &[ResultRecord]) -> String {
    if records.is_empty() {
        return String::new();
    }
    let header = [
        "experiment", "N", "fitted", "analytic", "rel_gap", "trend", "status",
    ];
    let mut lines: Vec<[String; 7]> = vec![header.map(String::from)];
    let mut notes = Vec::new();
    for r in records {
        let status = if r.passed { "pass" } else { "FAIL" };
        if r.rows.is_empty() {
            lines.push([
                r.name.clone(),
                "-".into(),
                "-".into(),
                "-".into(),
                "-".into(),
                "-".into(),
                status.into(),
            ]);
        }
        let mut prev: Option<f64> = None;
        for row in &r.rows {
            let trend = prev
                .filter(|p| *p != 0.0)
                .map(|p| (row.fitted_limit - p).abs() / p.abs());
            prev = Some(row.fitted_limit);
            lines.push([
                r.name.clone(),
                row.n.to_string(),
                num(Some(row.fitted_limit)),
                num(row.analytic),
                num(row.rel_gap),
                num(trend),
                status.into(),
            ]);
        }
        if let Some(d) = &r.diagnostic {
            notes.push(format!("{}: {d}", r.name));
        }
    }
    let mut widths = [0usize; 7];
    for l in &lines {
        for (w, c) in widths.iter_mut().zip(l) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    for l in &lines {
        let cells: Vec<String> = l
            .iter()
            .zip(widths)
            .enumerate()
            .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    let passed = records.iter().filter(|r| r.passed).count();
    out.push_str(&format!("{passed}/{} experiments passed\n", records.len()));
    for n in notes {
        out.push_str(&n);
        out.push('\n');
    }
    out
}
