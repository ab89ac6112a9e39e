//! Serializable command outputs and their CSV / JSON rendering.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dp::{AbsorptionDistribution, MomentReport};
use crate::montecarlo::EmpiricalDistribution;
use crate::rational::{self, ExactRational};
use crate::urn::State;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// An exact value as numerator and denominator strings plus its nearest float.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalOut {
    pub num: String,
    pub den: String,
    pub float: f64,
}

impl RationalOut {
    pub fn new(value: &ExactRational) -> Self {
        RationalOut {
            num: value.numer().to_string(),
            den: value.denom().to_string(),
            float: rational::to_f64(value),
        }
    }

    pub fn value(&self) -> Option<ExactRational> {
        rational::parse(&format!("{}/{}", self.num, self.den))
    }
}

/// Counts joined with `;`, the CSV form of a state.
pub fn join_counts(counts: &[u32]) -> String {
    counts.iter().map(u32::to_string).collect::<Vec<_>>().join(";")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateProbability {
    pub state: Vec<u32>,
    pub prob_num: String,
    pub prob_den: String,
    pub prob_float: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentsOut {
    /// `E(X)`, `E(X(X-1))`, ... of the white count.
    pub factorial: Vec<RationalOut>,
    pub mean: RationalOut,
    pub variance: RationalOut,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PgfOut {
    pub v1: f64,
    pub v2: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub model: String,
    pub start: Vec<u32>,
    pub distribution: Vec<StateProbability>,
    pub moments: MomentsOut,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pgf: Option<PgfOut>,
}

impl SolveReport {
    pub fn new(
        model: String,
        dist: &AbsorptionDistribution,
        moments: &MomentReport,
        pgf: Option<PgfOut>,
    ) -> Self {
        SolveReport {
            model,
            start: dist.start().display_counts(),
            distribution: dist
                .iter()
                .map(|(s, p)| StateProbability {
                    state: s.display_counts(),
                    prob_num: p.numer().to_string(),
                    prob_den: p.denom().to_string(),
                    prob_float: rational::to_f64(p),
                })
                .collect(),
            moments: MomentsOut {
                factorial: moments.factorial_moments.iter().map(RationalOut::new).collect(),
                mean: RationalOut::new(&moments.mean),
                variance: RationalOut::new(&moments.variance),
            },
            pgf,
        }
    }

    /// Distribution table, a blank line, the moment table and, when
    /// requested, a blank line and the pgf value.
    pub fn write_csv(&self, out: &mut dyn Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(["state", "prob_num", "prob_den", "prob_float"])?;
        for row in &self.distribution {
            w.write_record([join_counts(&row.state), row.prob_num.clone(), row.prob_den.clone(), row.prob_float.to_string()])?;
        }
        w.flush()?;
        drop(w);
        writeln!(out)?;
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(["moment", "num", "den", "float"])?;
        let named = self
            .moments
            .factorial
            .iter()
            .enumerate()
            .map(|(i, m)| (format!("factorial_{}", i + 1), m))
            .chain([
                ("mean".to_string(), &self.moments.mean),
                ("variance".to_string(), &self.moments.variance),
            ]);
        for (name, m) in named {
            w.write_record([name, m.num.clone(), m.den.clone(), m.float.to_string()])?;
        }
        w.flush()?;
        drop(w);
        if let Some(pgf) = &self.pgf {
            writeln!(out)?;
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["v1", "v2", "pgf"])?;
            w.write_record([pgf.v1.to_string(), pgf.v2.to_string(), pgf.value.to_string()])?;
            w.flush()?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormulaReport {
    pub model: String,
    pub start: Vec<u32>,
    pub quantity: String,
    /// `"num/den"` when exact, otherwise the float in decimal.
    pub value: String,
    pub float: f64,
    pub exact: bool,
    /// Guaranteed absolute error for quadrature results.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance: Option<f64>,
}

impl FormulaReport {
    pub fn write_csv(&self, out: &mut dyn Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["quantity", "value", "float", "exact", "tolerance"])?;
        w.write_record([
            self.quantity.clone(),
            self.value.clone(),
            self.float.to_string(),
            self.exact.to_string(),
            self.tolerance.map(|t| t.to_string()).unwrap_or_default(),
        ])?;
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulatedState {
    pub state: Vec<u32>,
    pub count: u64,
    pub frequency: f64,
    pub half_width_99: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub model: String,
    pub start: Vec<u32>,
    pub replications: u64,
    pub seed: u64,
    pub distribution: Vec<SimulatedState>,
}

impl SimulateReport {
    pub fn new(model: String, start: &State, seed: u64, emp: &EmpiricalDistribution) -> Self {
        SimulateReport {
            model,
            start: start.display_counts(),
            replications: emp.replications(),
            seed,
            distribution: emp
                .counts()
                .iter()
                .map(|(s, &count)| SimulatedState {
                    state: s.display_counts(),
                    count,
                    frequency: emp.frequency(s),
                    half_width_99: emp.half_width_99(s),
                })
                .collect(),
        }
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["state", "count", "frequency", "half_width_99"])?;
        for row in &self.distribution {
            w.write_record([
                join_counts(&row.state),
                row.count.to_string(),
                row.frequency.to_string(),
                row.half_width_99.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsRow {
    pub size: u32,
    pub start: Vec<u32>,
    pub ks: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub model: String,
    pub scaling: String,
    pub law: String,
    pub rows: Vec<KsRow>,
    /// KS distances strictly decrease along `rows`.
    pub decreasing: bool,
}

impl LimitReport {
    pub fn write_csv(&self, out: &mut dyn Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["size", "start", "ks", "law"])?;
        for row in &self.rows {
            w.write_record([
                row.size.to_string(),
                join_counts(&row.start),
                row.ks.to_string(),
                self.law.clone(),
            ])?;
        }
        w.write_record(["decreasing", if self.decreasing { "pass" } else { "fail" }, "", ""])?;
        w.flush()?;
        Ok(())
    }
}
