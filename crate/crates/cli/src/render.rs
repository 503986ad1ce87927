use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use moncurve::family::{Prediction, VerificationRow};
use moncurve::ideal::BoundedVerdict;
use moncurve::{InvariantReport, Monomial, MonomialIdeal};
use serde::Serialize;

/// Degrees of the Rao module shown before the table elides the rest.
const RAO_TABLE_DEGREES: usize = 13;

pub fn json_line<T: Serialize>(w: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *w, value)?;
    writeln!(w)
}

fn join<T: fmt::Display>(xs: &[T], sep: &str) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn opt<T: fmt::Display>(x: Option<T>, none: &str) -> String {
    x.map_or(none.to_string(), |v| v.to_string())
}

fn rao_cell(dims: &[usize]) -> String {
    if dims.is_empty() {
        return "zero".into();
    }
    let shown = join(&dims[..dims.len().min(RAO_TABLE_DEGREES)], " ");
    if dims.len() > RAO_TABLE_DEGREES {
        format!("{shown} ...")
    } else {
        shown
    }
}

pub fn report_table(w: &mut dyn Write, r: &InvariantReport) -> io::Result<()> {
    let rows = [
        ("curve", r.curve.clone()),
        ("d", r.d.to_string()),
        ("G", join(&r.g, " ")),
        ("k", r.k.to_string()),
        ("l", opt(r.l, "undefined")),
        ("a_invariant", opt(r.a_invariant, "-inf")),
        ("rao_hilbert", rao_cell(&r.rao_hilbert)),
        ("r_Q_R", r.r_q_ring.to_string()),
        ("r_Q_Rtilde", r.r_q_extension.to_string()),
        ("reg", r.reg.to_string()),
        ("is_CM", r.is_cm.to_string()),
        (
            "new_generators",
            opt(
                Some(join(&r.new_generators, ";")).filter(|s| !s.is_empty()),
                "none",
            ),
        ),
        ("formula_branch", r.formula_branch.to_string()),
        ("hypothesis_holds", opt(r.hypothesis_holds, "n/a")),
        ("criterion_checked", opt(r.criterion_checked, "n/a")),
    ];
    for (key, value) in rows {
        writeln!(w, "{key:<18} {value}")?;
    }
    Ok(())
}

pub fn report_csv(w: &mut dyn Write, r: &InvariantReport) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "curve",
        "d",
        "G",
        "k",
        "l",
        "a_invariant",
        "rao_hilbert",
        "r_Q_R",
        "r_Q_Rtilde",
        "reg",
        "is_CM",
        "new_generators",
        "formula_branch",
        "hypothesis_holds",
        "criterion_checked",
    ])?;
    out.write_record([
        r.curve.clone(),
        r.d.to_string(),
        join(&r.g, ";"),
        r.k.to_string(),
        opt(r.l, ""),
        opt(r.a_invariant, "-inf"),
        join(&r.rao_hilbert, ";"),
        r.r_q_ring.to_string(),
        r.r_q_extension.to_string(),
        r.reg.to_string(),
        r.is_cm.to_string(),
        join(&r.new_generators, ";"),
        r.formula_branch.to_string(),
        opt(r.hypothesis_holds, ""),
        opt(r.criterion_checked, ""),
    ])?;
    out.flush()?;
    Ok(())
}

pub fn rows_csv(w: &mut dyn Write, rows: &[VerificationRow]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(VerificationRow::CSV_HEADER)?;
    for row in rows {
        out.write_record(row.csv_record())?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
pub struct FamilyJson<'a> {
    r: u32,
    n: u32,
    prediction: &'a Prediction,
    report: Option<&'a InvariantReport>,
    #[serde(rename = "match")]
    outcome: &'static str,
    detail: Vec<String>,
    question_residual: Option<i64>,
}

impl<'a> FamilyJson<'a> {
    pub fn new(row: &'a VerificationRow, prediction: &'a Prediction) -> Self {
        use moncurve::family::RowOutcome;
        let detail = match &row.outcome {
            RowOutcome::Match => vec![],
            RowOutcome::Mismatch(fields) => fields.clone(),
            RowOutcome::Error(msg) => vec![msg.clone()],
        };
        Self {
            r: row.params.r,
            n: row.params.n,
            prediction,
            report: row.report.as_ref(),
            outcome: row.outcome.label(),
            detail,
            question_residual: row.question_residual(),
        }
    }
}

pub fn family_table(w: &mut dyn Write, row: &VerificationRow, p: &Prediction) -> io::Result<()> {
    writeln!(w, "r = {}, n = {}", row.params.r, row.params.n)?;
    writeln!(w, "prediction")?;
    writeln!(w, "  {:<18} {}", "classification", p.classification)?;
    writeln!(w, "  {:<18} {}", "source", p.source)?;
    writeln!(
        w,
        "  {:<18} {}",
        "new_generator",
        opt(p.predicted_new_gen, "none")
    )?;
    writeln!(w, "  {:<18} {}", "reg = r_Q(R)", p.predicted_reg_eq_rq)?;
    if let Some(report) = &row.report {
        writeln!(w, "computation")?;
        let mut buf = Vec::new();
        report_table(&mut buf, report)?;
        for line in String::from_utf8_lossy(&buf).lines() {
            writeln!(w, "  {line}")?;
        }
    }
    writeln!(w, "{:<20} {}", "match", row.outcome.label())?;
    if let Some(q) = row.question_residual() {
        writeln!(w, "{:<20} {q}", "question_residual")?;
    }
    Ok(())
}

/// Counts printed after a sweep.
pub struct Summary {
    pub rows: usize,
    pub matches: usize,
    pub mismatches: usize,
    pub errors: usize,
    pub residuals: BTreeMap<i64, usize>,
}

impl Summary {
    pub fn of(rows: &[VerificationRow]) -> Self {
        use moncurve::family::RowOutcome;
        let mut s = Summary {
            rows: rows.len(),
            matches: 0,
            mismatches: 0,
            errors: 0,
            residuals: BTreeMap::new(),
        };
        for row in rows {
            match row.outcome {
                RowOutcome::Match => s.matches += 1,
                RowOutcome::Mismatch(_) => s.mismatches += 1,
                RowOutcome::Error(_) => s.errors += 1,
            }
            if let Some(q) = row.question_residual() {
                *s.residuals.entry(q).or_default() += 1;
            }
        }
        s
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let residuals = self
            .residuals
            .iter()
            .map(|(q, c)| format!("{q}:{c}"))
            .collect::<Vec<_>>()
            .join(",");
        write!(
            f,
            "rows={} matches={} mismatches={} errors={} residuals={{{residuals}}}",
            self.rows, self.matches, self.mismatches, self.errors
        )
    }
}

pub fn member(w: &mut dyn Write, json: bool, m: &Monomial, member: bool) -> io::Result<()> {
    if json {
        json_line(w, &serde_json::json!({ "monomial": m, "member": member }))
    } else {
        writeln!(w, "{member}")
    }
}

pub fn ideal(w: &mut dyn Write, json: bool, ideal: &MonomialIdeal, bound: u32) -> io::Result<()> {
    let gens = join(ideal.generators(), ";");
    if json {
        json_line(
            w,
            &serde_json::json!({
                "ideal": ideal.to_text(),
                "generators": ideal.generators(),
                "bound": bound,
            }),
        )
    } else {
        writeln!(w, "{gens}")?;
        writeln!(w, "bound {bound}")
    }
}

pub fn verdict(w: &mut dyn Write, json: bool, v: &BoundedVerdict) -> io::Result<()> {
    if json {
        json_line(w, v)
    } else {
        writeln!(w, "{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rao_cell_elides_past_degree_12() {
        assert_eq!(rao_cell(&[]), "zero");
        assert_eq!(rao_cell(&[0, 0, 1, 1]), "0 0 1 1");
        let long: Vec<usize> = (0..20).collect();
        assert_eq!(rao_cell(&long), "0 1 2 3 4 5 6 7 8 9 10 11 12 ...");
    }

    #[test]
    fn summary_line() {
        let s = Summary {
            rows: 3,
            matches: 2,
            mismatches: 1,
            errors: 0,
            residuals: [(0, 2), (1, 1)].into(),
        };
        assert_eq!(
            s.to_string(),
            "rows=3 matches=2 mismatches=1 errors=0 residuals={0:2,1:1}"
        );
    }
}
