//! Experiment records and their CSV form.
//!
//! Columns, in order: `schema_version, family, params, alphabet, d_h, alpha,
//! model, algorithm, seed, hidden, decision, correct, queries_or_samples,
//! witness_t, certificate_ratio, error`. Empty cells mean "not available";
//! a nonempty `error` marks a grid point that could not be run.

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// Model column of classical rows.
pub const SAMPLE_MODEL: &str = "sample";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub schema_version: u32,
    pub family: String,
    pub params: String,
    pub alphabet: Option<usize>,
    pub d_h: Option<f64>,
    pub alpha: Option<f64>,
    pub model: String,
    pub algorithm: String,
    pub seed: u64,
    pub hidden: String,
    pub decision: Option<String>,
    pub correct: Option<bool>,
    /// Oracle queries for quantum rows, samples for classical rows.
    pub queries_or_samples: Option<u64>,
    pub witness_t: Option<f64>,
    /// Lower-bound value of the certificate, constant omitted.
    pub certificate_ratio: Option<f64>,
    pub error: Option<String>,
}

impl ExperimentRecord {
    /// Key of the grid point a row belongs to.
    pub fn point_key(&self) -> (&str, &str) {
        (&self.family, &self.params)
    }

    /// Series name used in plots and fits.
    pub fn series(&self) -> String {
        if self.model == SAMPLE_MODEL {
            self.algorithm.clone()
        } else {
            format!("{}/{}", self.model, self.algorithm)
        }
    }
}

pub fn to_csv_string(records: &[ExperimentRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn parse_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    Ok(rdr.deserialize().collect::<Result<Vec<_>, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sample() -> ExperimentRecord {
        ExperimentRecord {
            schema_version: SCHEMA_VERSION,
            family: "bernoulli".into(),
            params: "theta_p=0.5;theta_q=0.8".into(),
            alphabet: Some(2),
            d_h: Some(0.226531900511796),
            alpha: Some(0.32),
            model: "iii".into(),
            algorithm: "quantum".into(),
            seed: 4,
            hidden: "P".into(),
            decision: Some("P".into()),
            correct: Some(true),
            queries_or_samples: Some(5),
            witness_t: Some(3.1),
            certificate_ratio: Some(0.05),
            error: None,
        }
    }

    #[test]
    fn one_record_is_two_lines() {
        let text = to_csv_string(&[sample()]).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("schema_version,family,params,alphabet,d_h,alpha,model,algorithm,seed,"));
        assert_eq!(parse_csv(&text).unwrap(), vec![sample()]);
    }

    #[test]
    fn missing_values_round_trip() {
        let mut r = sample();
        r.d_h = None;
        r.decision = None;
        r.correct = None;
        r.error = Some("invalid parameter: x, y".into());
        let text = to_csv_string(&[r.clone(), sample()]).unwrap();
        assert_eq!(parse_csv(&text).unwrap(), vec![r, sample()]);
    }
}
