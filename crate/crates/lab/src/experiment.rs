//! Sweep execution.
//!
//! Grid points run in parallel; rows are emitted in grid order as soon as
//! every earlier point has finished, so output is independent of the number
//! of workers. Run `s` of a point uses hidden label `P` for even seeds and `Q`
//! for odd ones.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::sync::Mutex;

use qdist_core::adversary::{build_witness, lower_bound_certificate, optimal_weights};
use qdist_core::discriminators::{
    discriminate_model3, discriminate_model4, indicator_weights, standard_method, AlgoParams, ClassicalTest,
    DiscriminationInstance, DiscriminationOutcome, Label, LambdaPath, DEFAULT_AE_CONSTANT,
};
use qdist_core::distributions::{generate, metrics, stream_rng, DistFamily, DistMetrics, ProbDist};
use qdist_core::oracles::{frequency_string, iid_string, Completion, GarbageSpec, Model};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Algorithm, ExperimentConfig, GarbageConfig, ModelName, QuantumConfig};
use crate::error::{LabError, Result};
use crate::family::describe;
use crate::record::{to_csv_string, ExperimentRecord, SAMPLE_MODEL, SCHEMA_VERSION};
use crate::svg::render_svg;

const CALIBRATION_SEED: u64 = 0x5eed;

pub fn hidden_for_seed(seed: u64) -> Label {
    if seed.is_multiple_of(2) {
        Label::P
    } else {
        Label::Q
    }
}

/// Runs the sweep, writes the CSV incrementally and the SVG at the end.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let path = cfg.csv_path();
    let mut file = File::create(&path).map_err(|e| LabError::io(&path, e))?;
    let mut header = true;
    let records = run_ordered(cfg, |rows| {
        let mut text = to_csv_string(rows)?;
        if !header {
            text = text.split_once('\n').map(|(_, rest)| rest.to_string()).unwrap_or_default();
        }
        header = false;
        file.write_all(text.as_bytes()).and_then(|_| file.flush()).map_err(|e| LabError::io(&path, e))
    })?;
    if let Some(svg_path) = cfg.svg_path() {
        let csv_text = std::fs::read_to_string(&path).map_err(|e| LabError::io(&path, e))?;
        let svg = render_svg(&csv_text)?;
        std::fs::write(&svg_path, svg).map_err(|e| LabError::io(&svg_path, e))?;
    }
    Ok(records)
}

/// Runs the sweep without touching the file system.
pub fn collect_records(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    run_ordered(cfg, |_| Ok(()))
}

struct Ordered<F> {
    next: usize,
    pending: BTreeMap<usize, Vec<ExperimentRecord>>,
    done: Vec<ExperimentRecord>,
    sink: F,
    failure: Option<LabError>,
}

fn run_ordered<F>(cfg: &ExperimentConfig, sink: F) -> Result<Vec<ExperimentRecord>>
where
    F: FnMut(&[ExperimentRecord]) -> Result<()> + Send,
{
    let points = cfg.family.points(&cfg.base_dir);
    let state = Mutex::new(Ordered { next: 0, pending: BTreeMap::new(), done: Vec::new(), sink, failure: None });
    points.par_iter().enumerate().with_max_len(1).for_each(|(index, point)| {
        let rows = run_point(cfg, index, point);
        let mut st = state.lock().expect("writer lock");
        st.pending.insert(index, rows);
        loop {
            let next = st.next;
            let Some(rows) = st.pending.remove(&next) else { break };
            if st.failure.is_none() {
                if let Err(e) = (st.sink)(&rows) {
                    st.failure = Some(e);
                }
            }
            st.done.extend(rows);
            st.next += 1;
        }
    });
    let st = state.into_inner().expect("writer lock");
    match st.failure {
        Some(e) => Err(e),
        None => Ok(st.done),
    }
}

/// Per-point quantities shared by all rows.
struct PointSummary {
    p: ProbDist,
    q: ProbDist,
    metrics: DistMetrics,
    witness_t: Option<f64>,
    certificate_ratio: Option<f64>,
}

fn summarize(cfg: &ExperimentConfig, family: &DistFamily) -> qdist_core::Result<PointSummary> {
    let (p, q) = generate(family)?;
    let m = metrics(&p, &q)?;
    if p == q {
        return Err(qdist_core::Error::IdenticalDistributions);
    }
    let g = GarbageSpec::trivial().states(p.alphabet_size())?;
    let witness_t = build_witness(&p, &q, &g, &g, &optimal_weights(&p, &q)?).ok().map(|w| w.objective);
    let certificate_ratio = lower_bound_certificate(&p, &q, 0, cfg.certificate.s_p, cfg.certificate.s_q)
        .ok()
        .map(|c| c.value.ratio);
    Ok(PointSummary { p, q, metrics: m, witness_t, certificate_ratio })
}

/// Every (model, algorithm, seed) combination of one grid point, in output order.
fn combinations(cfg: &ExperimentConfig) -> Vec<(Option<ModelName>, Algorithm, u64)> {
    let seeds = cfg.seeds.values();
    let mut out = Vec::new();
    for &model in &cfg.models {
        for &algo in cfg.algorithms.iter().filter(|a| **a != Algorithm::Classical) {
            out.extend(seeds.iter().map(|&s| (Some(model), algo, s)));
        }
    }
    if cfg.algorithms.contains(&Algorithm::Classical) {
        out.extend(seeds.iter().map(|&s| (None, Algorithm::Classical, s)));
    }
    out
}

fn stream_id(index: usize, model: Option<ModelName>, algo: Algorithm) -> u64 {
    let m = model.map_or(0, |m| 1 + m as u64);
    ((index as u64) << 8) | (m << 4) | algo as u64
}

fn run_point(cfg: &ExperimentConfig, index: usize, point: &Result<DistFamily, String>) -> Vec<ExperimentRecord> {
    let (family, params) = match point {
        Ok(f) => describe(f),
        Err(_) => ("pairs".to_string(), format!("file={index}")),
    };
    let summary = match point {
        Ok(f) => summarize(cfg, f).map_err(|e| e.to_string()),
        Err(e) => Err(e.clone()),
    };
    let mut classical: Option<Result<ClassicalTest, String>> = None;
    combinations(cfg)
        .into_iter()
        .map(|(model, algo, seed)| {
            let hidden = hidden_for_seed(seed);
            let mut rec = ExperimentRecord {
                schema_version: SCHEMA_VERSION,
                family: family.clone(),
                params: params.clone(),
                alphabet: None,
                d_h: None,
                alpha: None,
                model: model.map_or(SAMPLE_MODEL.to_string(), |m| m.to_string()),
                algorithm: algo.to_string(),
                seed,
                hidden: hidden.to_string(),
                decision: None,
                correct: None,
                queries_or_samples: None,
                witness_t: None,
                certificate_ratio: None,
                error: None,
            };
            let s = match &summary {
                Ok(s) => s,
                Err(e) => {
                    rec.error = Some(e.clone());
                    return rec;
                }
            };
            rec.alphabet = Some(s.p.alphabet_size());
            rec.d_h = Some(s.metrics.hellinger);
            rec.alpha = Some(s.metrics.angle);
            rec.witness_t = s.witness_t;
            rec.certificate_ratio = s.certificate_ratio;
            let mut rng = stream_rng(seed, stream_id(index, model, algo));
            let result = match (model, algo) {
                (None, _) => {
                    let test = classical.get_or_insert_with(|| {
                        ClassicalTest::calibrate(&s.p, &s.q, cfg.error_target, cfg.classical_trials, CALIBRATION_SEED)
                            .map_err(|e| e.to_string())
                    });
                    test.clone().map(|t| {
                        let source = if hidden == Label::P { &s.p } else { &s.q };
                        let out = t.run(source, &mut rng);
                        (out.decision, out.samples_used)
                    })
                }
                (Some(m), a) => {
                    quantum_instance(&s.p, &s.q, m, &cfg.garbage, cfg.string_length, seed, hidden, &mut rng)
                        .and_then(|mut inst| run_quantum(&mut inst, m, a, &cfg.quantum, &mut rng))
                        .map(|out| (out.decision, out.queries_used))
                        .map_err(|e| e.to_string())
                }
            };
            match result {
                Ok((decision, cost)) => {
                    rec.decision = Some(decision.to_string());
                    rec.correct = Some(decision == hidden);
                    rec.queries_or_samples = Some(cost);
                }
                Err(e) => rec.error = Some(e),
            }
            rec
        })
        .collect()
}

/// Builds the instance a quantum row runs on.
#[allow(clippy::too_many_arguments)]
pub fn quantum_instance(
    p: &ProbDist,
    q: &ProbDist,
    model: ModelName,
    garbage: &GarbageConfig,
    string_length: usize,
    seed: u64,
    hidden: Label,
    rng: &mut ChaCha8Rng,
) -> qdist_core::Result<DiscriminationInstance> {
    let truth = if hidden == Label::P { p } else { q };
    match model {
        ModelName::I => {
            let x = frequency_string(truth, string_length)?;
            DiscriminationInstance::from_string(Model::Frequency, p, q, &x, hidden)
        }
        ModelName::Ii => {
            let x = iid_string(truth, string_length, rng);
            DiscriminationInstance::from_string(Model::Iid, p, q, &x, hidden)
        }
        ModelName::Iii => {
            let g = GarbageSpec::trivial();
            DiscriminationInstance::state_prep(Model::StatePrep, p, q, &g, &g, Completion::Householder, hidden)
        }
        ModelName::Iv => {
            let (gp, gq) = garbage.specs(seed);
            DiscriminationInstance::state_prep(Model::StatePrepGarbage, p, q, &gp, &gq, Completion::Householder, hidden)
        }
    }
}

/// Runs a quantum algorithm and checks its reported queries against the
/// oracle counter.
pub fn run_quantum(
    inst: &mut DiscriminationInstance,
    model: ModelName,
    algo: Algorithm,
    quantum: &QuantumConfig,
    rng: &mut ChaCha8Rng,
) -> qdist_core::Result<DiscriminationOutcome> {
    let before = inst.oracle().query_count();
    let out = match (model, algo) {
        (_, Algorithm::Standard) => {
            let c = indicator_weights(&inst.p, &inst.q);
            standard_method(inst, &c, DEFAULT_AE_CONSTANT, rng)?
        }
        (_, Algorithm::Classical) => {
            return Err(qdist_core::Error::InvalidParameter("the classical test takes samples, not an oracle".into()))
        }
        (ModelName::Iii, _) => discriminate_model3(inst, &quantum.params(), rng)?,
        (ModelName::Iv, _) => discriminate_model4(inst, &quantum.params(), rng)?,
        (ModelName::I | ModelName::Ii, _) => {
            let params = AlgoParams { lambda_path: LambdaPath::Block, ..quantum.params() };
            discriminate_model4(inst, &params, rng)?
        }
    };
    let delta = inst.oracle().query_count() - before;
    if delta != out.queries_used {
        return Err(qdist_core::Error::InvalidParameter(format!(
            "query counter moved by {delta} but {} were reported",
            out.queries_used
        )));
    }
    Ok(out)
}
