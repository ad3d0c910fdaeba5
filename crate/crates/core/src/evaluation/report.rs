use std::fmt::Write;

use super::compare::EvalReport;

pub const CSV_HEADER: &str = "variant,accuracy,f_score,precision,recall,fpr,fnr";

fn cells(r: &EvalReport) -> [String; 6] {
    match &r.metrics {
        Some(m) => [
            m.accuracy,
            m.f_score,
            m.precision,
            m.recall,
            m.false_positive_rate,
            m.false_negative_rate,
        ]
        .map(|v| format!("{v:.6}")),
        None => std::array::from_fn(|_| "NA".to_string()),
    }
}

/// One CSV line per variant under [`CSV_HEADER`].
pub fn comparison_csv(rows: &[EvalReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.variant);
        for c in cells(r) {
            out.push(',');
            out.push_str(&c);
        }
        out.push('\n');
    }
    out
}

/// Aligned plain-text table.
pub fn comparison_table(rows: &[EvalReport]) -> String {
    let header = ["variant", "accuracy", "f_score", "precision", "recall", "fpr", "fnr"];
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| std::iter::once(r.variant.clone()).chain(cells(r)).collect())
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|i| body.iter().map(|row| row[i].len()).chain([header[i].len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, row: &[&str]| {
        for (i, cell) in row.iter().enumerate() {
            if i == 0 {
                let _ = write!(out, "{cell:<w$}", w = widths[i]);
            } else {
                let _ = write!(out, "  {cell:>w$}", w = widths[i]);
            }
        }
        out.push('\n');
    };
    line(&mut out, &header);
    for row in &body {
        line(&mut out, &row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}
