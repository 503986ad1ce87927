//! The curves `M_r^n` with `b1 = r`, `b2 = 2r - 2`, `a_i = 2r + 2i - 1` for
//! `i = 0..=n`, together with the classification predicted for them and a
//! sweep that checks predictions against direct computation.

use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{classify_with_bound, InvariantReport};
use crate::semigroup::{join, CurveSpec, Monomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FamilyParams {
    pub r: u32,
    pub n: u32,
}

impl FamilyParams {
    pub fn new(r: i64, n: i64) -> Result<Self> {
        if r < 5 {
            return Err(Error::ParamsOutOfRange(format!("r = {r}, need r >= 5")));
        }
        if n < 1 {
            return Err(Error::ParamsOutOfRange(format!("n = {n}, need n >= 1")));
        }
        let (r, n) = (
            u32::try_from(r).map_err(|_| Error::ParamsOutOfRange(format!("r = {r} too large")))?,
            u32::try_from(n).map_err(|_| Error::ParamsOutOfRange(format!("n = {n} too large")))?,
        );
        Ok(Self { r, n })
    }

    pub fn b1(&self) -> u32 {
        self.r
    }

    pub fn b2(&self) -> u32 {
        2 * self.r - 2
    }

    /// `a_i = 2r + 2i - 1`, including `a_0 = 2r - 1`.
    pub fn a(&self, i: u32) -> u32 {
        2 * self.r + 2 * i - 1
    }

    pub fn degree(&self) -> u32 {
        self.a(self.n)
    }

    pub fn exponents(&self) -> Vec<u32> {
        let mut g = vec![0, self.b1(), self.b2()];
        g.extend((0..=self.n).map(|i| self.a(i)));
        g
    }

    /// `s^(2a_n - 3b1) t^(3b1)`.
    pub fn expected_new_generator(&self) -> Monomial {
        Monomial::new(2 * self.degree() - 3 * self.b1(), 3 * self.b1())
    }
}

/// The curve of `M_r^n`.
pub fn family_curve(r: i64, n: i64) -> Result<CurveSpec> {
    let p = FamilyParams::new(r, n)?;
    let g = p.exponents();
    if !g.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvariantViolation(format!(
            "family exponents not increasing: {g:?}"
        )));
    }
    let g: Vec<i64> = g.into_iter().map(i64::from).collect();
    CurveSpec::new(p.degree() as i64, &g, false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    #[serde(rename = "CM")]
    CohenMacaulay,
    #[serde(rename = "Buchsbaum_1")]
    Buchsbaum1,
    #[serde(rename = "strictly_2_Buchsbaum")]
    Strictly2Buchsbaum,
    #[serde(rename = "unknown")]
    Unknown,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::CohenMacaulay => "CM",
            Classification::Buchsbaum1 => "Buchsbaum_1",
            Classification::Strictly2Buchsbaum => "strictly_2_Buchsbaum",
            Classification::Unknown => "unknown",
        })
    }
}

/// Which regime of parameters produced a prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PredictionSource {
    /// `r` odd, `2n >= r + 1`.
    #[serde(rename = "odd_r_large_n")]
    OddRLargeN,
    /// `r` odd, `r - 5 <= 2n < r + 1`.
    #[serde(rename = "odd_r_small_n")]
    OddRSmallN,
    /// `r` even, `2n >= r - 5`.
    #[serde(rename = "even_r")]
    EvenR,
    /// `r = 2n + 8`.
    #[serde(rename = "r_eq_2n_plus_8")]
    RTwoNPlusEight,
    /// `2n < r - 5` and `r != 2n + 8`.
    #[serde(rename = "none")]
    None,
}

impl fmt::Display for PredictionSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PredictionSource::OddRLargeN => "odd_r_large_n",
            PredictionSource::OddRSmallN => "odd_r_small_n",
            PredictionSource::EvenR => "even_r",
            PredictionSource::RTwoNPlusEight => "r_eq_2n_plus_8",
            PredictionSource::None => "none",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub classification: Classification,
    pub source: PredictionSource,
    pub predicted_new_gen: Option<Monomial>,
    #[serde(rename = "predicted_reg_eq_rQ")]
    pub predicted_reg_eq_rq: bool,
}

pub fn predict(r: i64, n: i64) -> Result<Prediction> {
    let p = FamilyParams::new(r, n)?;
    let (r, n) = (p.r as i64, p.n as i64);
    let (classification, source) = if 2 * n >= r - 5 {
        if r % 2 == 0 {
            (Classification::Buchsbaum1, PredictionSource::EvenR)
        } else if 2 * n > r {
            (Classification::CohenMacaulay, PredictionSource::OddRLargeN)
        } else {
            (Classification::Buchsbaum1, PredictionSource::OddRSmallN)
        }
    } else if r == 2 * n + 8 {
        (
            Classification::Strictly2Buchsbaum,
            PredictionSource::RTwoNPlusEight,
        )
    } else {
        (Classification::Unknown, PredictionSource::None)
    };
    Ok(Prediction {
        classification,
        source,
        predicted_new_gen: (classification != Classification::CohenMacaulay)
            .then(|| p.expected_new_generator()),
        predicted_reg_eq_rq: true,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowOutcome {
    Match,
    /// Names of the fields that disagreed.
    Mismatch(Vec<String>),
    Error(String),
}

impl RowOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            RowOutcome::Match => "match",
            RowOutcome::Mismatch(_) => "mismatch",
            RowOutcome::Error(_) => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationRow {
    pub params: FamilyParams,
    pub curve: Option<CurveSpec>,
    pub prediction: Option<Prediction>,
    pub report: Option<InvariantReport>,
    pub outcome: RowOutcome,
}

impl VerificationRow {
    pub const CSV_HEADER: [&'static str; 16] = [
        "r",
        "n",
        "d",
        "G",
        "k",
        "l",
        "a_invariant",
        "r_Q_R",
        "r_Q_Rtilde",
        "reg",
        "is_CM",
        "new_gens",
        "prediction",
        "prediction_source",
        "match",
        "question_residual",
    ];

    /// `reg - (k + 2)` when the curve is not Cohen-Macaulay.
    pub fn question_residual(&self) -> Option<i64> {
        self.report.as_ref()?.question_residual()
    }

    pub fn is_match(&self) -> bool {
        self.outcome == RowOutcome::Match
    }

    /// Fields in [`Self::CSV_HEADER`] order. `G` is `;`-separated and new
    /// generators use the `A,B;A,B` form; missing values are empty.
    pub fn csv_record(&self) -> Vec<String> {
        let opt = |x: Option<String>| x.unwrap_or_default();
        let rep = self.report.as_ref();
        let d = self
            .curve
            .as_ref()
            .map(|c| c.degree().to_string())
            .unwrap_or_default();
        let g = self
            .curve
            .as_ref()
            .map(|c| join(c.exponents(), ";"))
            .unwrap_or_default();
        vec![
            self.params.r.to_string(),
            self.params.n.to_string(),
            d,
            g,
            opt(rep.map(|r| r.k.to_string())),
            opt(rep.and_then(|r| r.l).map(|l| l.to_string())),
            opt(rep.map(|r| r.a_invariant.map_or("-inf".into(), |a| a.to_string()))),
            opt(rep.map(|r| r.r_q_ring.to_string())),
            opt(rep.map(|r| r.r_q_extension.to_string())),
            opt(rep.map(|r| r.reg.to_string())),
            opt(rep.map(|r| r.is_cm.to_string())),
            opt(rep.map(|r| join(&r.new_generators, ";"))),
            opt(self.prediction.map(|p| p.classification.to_string())),
            opt(self.prediction.map(|p| p.source.to_string())),
            self.outcome.label().to_string(),
            opt(self.question_residual().map(|q| q.to_string())),
        ]
    }
}

/// Fields of the computed report that contradict the prediction.
pub fn compare(prediction: &Prediction, report: &InvariantReport) -> Vec<String> {
    let mut bad = Vec::new();
    let class_ok = match prediction.classification {
        Classification::CohenMacaulay => report.is_cm,
        Classification::Buchsbaum1 => !report.is_cm && report.k == 1,
        Classification::Strictly2Buchsbaum => report.k == 2,
        Classification::Unknown => true,
    };
    if !class_ok {
        bad.push("classification".to_string());
    }
    if let Some(gen) = prediction.predicted_new_gen {
        if !report.is_cm && report.new_generators != [gen] {
            bad.push("new_generators".to_string());
        }
    }
    if prediction.predicted_reg_eq_rq && report.reg != report.r_q_ring {
        bad.push("reg".to_string());
    }
    bad.extend(report.mismatches());
    bad
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
    /// Degree bound for the analysis; `None` uses `d`.
    pub bound: Option<u32>,
}

pub fn verify_one(params: FamilyParams, options: &VerifyOptions) -> VerificationRow {
    let mut row = VerificationRow {
        params,
        curve: None,
        prediction: None,
        report: None,
        outcome: RowOutcome::Match,
    };
    let run = |row: &mut VerificationRow| -> Result<()> {
        let curve = family_curve(params.r as i64, params.n as i64)?;
        row.curve = Some(curve.clone());
        let prediction = predict(params.r as i64, params.n as i64)?;
        row.prediction = Some(prediction);
        let report = classify_with_bound(&curve, options.bound.unwrap_or(curve.degree()))?;
        let bad = compare(&prediction, &report);
        row.report = Some(report);
        if !bad.is_empty() {
            row.outcome = RowOutcome::Mismatch(bad);
        }
        Ok(())
    };
    if let Err(e) = run(&mut row) {
        row.outcome = RowOutcome::Error(e.to_string());
    }
    row
}

/// Runs every `(r, n)` in the ranges, in parallel, returning rows sorted by
/// `(r, n)`. Per-row failures are recorded in the row.
pub fn verify_family(
    r_range: RangeInclusive<i64>,
    n_range: RangeInclusive<i64>,
    options: &VerifyOptions,
) -> Result<Vec<VerificationRow>> {
    for (name, range, min) in [("r", &r_range, 5), ("n", &n_range, 1)] {
        if range.is_empty() {
            return Err(Error::ParamsOutOfRange(format!(
                "empty {name} range {}:{}",
                range.start(),
                range.end()
            )));
        }
        if *range.start() < min {
            return Err(Error::ParamsOutOfRange(format!(
                "{name} = {}, need {name} >= {min}",
                range.start()
            )));
        }
    }
    let params: Vec<FamilyParams> = r_range
        .flat_map(|r| n_range.clone().map(move |n| (r, n)))
        .map(|(r, n)| FamilyParams::new(r, n))
        .collect::<Result<_>>()?;
    let work =
        || -> Vec<VerificationRow> { params.par_iter().map(|p| verify_one(*p, options)).collect() };
    let mut rows = match options.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::InvariantViolation(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    rows.sort_by_key(|row| row.params);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_curve_examples() {
        assert_eq!(family_curve(10, 1).unwrap().to_text(), "21:0,10,18,19,21");
        assert_eq!(family_curve(5, 2).unwrap().to_text(), "13:0,5,8,9,11,13");
        assert_eq!(family_curve(5, 3).unwrap().to_text(), "15:0,5,8,9,11,13,15");
        assert!(matches!(
            family_curve(4, 1),
            Err(Error::ParamsOutOfRange(_))
        ));
        assert!(matches!(
            family_curve(5, 0),
            Err(Error::ParamsOutOfRange(_))
        ));
    }

    #[test]
    fn family_size_and_order() {
        for r in 5..20 {
            for n in 1..8 {
                let p = FamilyParams::new(r, n).unwrap();
                let c = family_curve(r, n).unwrap();
                assert_eq!(c.exponents().len(), n as usize + 4);
                assert_eq!(c.exponents(), p.exponents().as_slice());
            }
        }
    }

    #[test]
    fn predict_examples() {
        let p = predict(5, 2).unwrap();
        assert_eq!(p.classification, Classification::Buchsbaum1);
        assert_eq!(p.source, PredictionSource::OddRSmallN);
        assert_eq!(p.predicted_new_gen, Some(Monomial::new(11, 15)));

        let p = predict(5, 3).unwrap();
        assert_eq!(p.classification, Classification::CohenMacaulay);
        assert_eq!(p.source, PredictionSource::OddRLargeN);
        assert_eq!(p.predicted_new_gen, None);

        let p = predict(10, 1).unwrap();
        assert_eq!(p.classification, Classification::Strictly2Buchsbaum);
        assert_eq!(p.source, PredictionSource::RTwoNPlusEight);
        assert_eq!(p.predicted_new_gen, Some(Monomial::new(12, 30)));

        assert_eq!(predict(6, 1).unwrap().source, PredictionSource::EvenR);
        assert_eq!(
            predict(20, 1).unwrap().classification,
            Classification::Unknown
        );
        assert!(predict(9, 4).unwrap().predicted_reg_eq_rq);
        for source in [
            PredictionSource::OddRLargeN,
            PredictionSource::OddRSmallN,
            PredictionSource::EvenR,
            PredictionSource::RTwoNPlusEight,
            PredictionSource::None,
        ] {
            assert_eq!(
                serde_json::to_string(&source).unwrap(),
                format!("\"{source}\"")
            );
        }
    }

    #[test]
    fn verify_examples() {
        let opts = VerifyOptions::default();
        let rows = verify_family(5..=5, 2..=3, &opts).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(VerificationRow::is_match), "{rows:?}");

        let rows = verify_family(10..=10, 1..=1, &opts).unwrap();
        assert!(rows[0].is_match());
        assert_eq!(rows[0].question_residual(), Some(0));

        let rows = verify_family(6..=6, 1..=1, &opts).unwrap();
        let rep = rows[0].report.as_ref().unwrap();
        assert!(!rep.is_cm);
        assert_eq!(rep.k, 1);
        assert!(rows[0].is_match());
    }

    #[test]
    fn verify_rejects_bad_ranges() {
        let opts = VerifyOptions::default();
        assert!(verify_family(5..=5, 0..=0, &opts).is_err());
        assert!(verify_family(4..=6, 1..=1, &opts).is_err());
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 7..=6;
        assert!(verify_family(empty, 1..=1, &opts).is_err());
    }

    #[test]
    fn rows_are_sorted_with_any_job_count() {
        let rows = verify_family(
            5..=7,
            1..=3,
            &VerifyOptions {
                jobs: Some(3),
                bound: None,
            },
        )
        .unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.params.r, r.params.n)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn csv_record_shape() {
        let rows = verify_family(10..=10, 1..=1, &VerifyOptions::default()).unwrap();
        let rec = rows[0].csv_record();
        assert_eq!(rec.len(), VerificationRow::CSV_HEADER.len());
        assert_eq!(rec[3], "0;10;18;19;21");
        assert_eq!(rec[11], "12,30");
        assert_eq!(rec[14], "match");
        assert_eq!(rec[15], "0");
    }
}
