use std::io::{self, Read, Write};
use std::path::Path;

use sbchain::markov::{analyze as analyze_matrix, n_step_distribution, total_variation_distance};
use sbchain::sbp::stationary_gap;
use sbchain::{
    decode_observations, encode_coins, exact_distribution, halfer_statistic, project_labels, run_simulation,
    sbp_chain, state_frequencies, thirder_statistic, Chain, CoinSequence, DistributionVector,
    ErgodicityReport, LabeledSequence, ObservedSequence, Rational, SimulationConfig, SimulationRecord,
};
use serde::Serialize;

use crate::chain_file::{self, ChainFileError};
use crate::{ConvertMode, Failure, Format};

type CmdResult = Result<(), Failure>;

fn io_failure(e: io::Error) -> Failure {
    Failure::internal(format!("write failed: {e}"))
}

fn weights(v: &DistributionVector) -> String {
    v.weights()
        .iter()
        .map(Rational::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn load_chain(spec: &str) -> Result<(String, Chain), Failure> {
    if spec == "sbp" {
        return Ok(("sbp".into(), sbp_chain()));
    }
    match chain_file::load(Path::new(spec)) {
        Ok(chain) => Ok((spec.to_string(), chain)),
        Err(e @ ChainFileError::Chain(_)) => Err(Failure::invalid_chain(format!("{spec}: {e}"))),
        Err(e) => Err(Failure::usage(format!("{spec}: {e}"))),
    }
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    chain: &'a str,
    states: &'a [String],
    #[serde(flatten)]
    report: &'a ErgodicityReport,
}

pub fn analyze(spec: &str, format: Format, out: &mut impl Write) -> CmdResult {
    let (name, chain) = load_chain(spec)?;
    let report = analyze_matrix(chain.matrix());
    match format {
        Format::Json => {
            let doc = AnalyzeOutput {
                chain: &name,
                states: chain.states().labels(),
                report: &report,
            };
            serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| Failure::internal(e.to_string()))?;
            writeln!(out).map_err(io_failure)
        }
        Format::Text => {
            let period = report.period.map_or("undefined".to_string(), |p| p.to_string());
            let stationary = report.stationary.as_ref().map_or("none".to_string(), weights);
            (|| {
                writeln!(out, "chain: {name}")?;
                writeln!(out, "states: {}", chain.states().labels().join(" "))?;
                writeln!(out, "irreducible: {}", report.irreducible)?;
                writeln!(out, "period: {period}")?;
                writeln!(out, "aperiodic: {}", report.aperiodic)?;
                writeln!(out, "ergodic: {}", report.ergodic)?;
                writeln!(out, "stationary: {stationary}")
            })()
            .map_err(io_failure)
        }
        Format::Csv => Err(Failure::usage("analyze supports --format text|json")),
    }
}

#[derive(Debug, Serialize)]
pub struct ExactRow {
    pub n: u32,
    pub recursion: DistributionVector,
    pub closed_form: DistributionVector,
    pub equal: bool,
    pub tv: Rational,
    pub expected_tv: Rational,
}

pub fn exact_rows(n_max: u32) -> Result<Vec<ExactRow>, Failure> {
    let chain = sbp_chain();
    let pi = DistributionVector::uniform(3).map_err(Failure::internal)?;
    (1..=n_max)
        .map(|n| {
            let recursion = n_step_distribution(&chain, n).map_err(Failure::internal)?;
            let closed_form = exact_distribution(n).map_err(Failure::internal)?;
            let tv = total_variation_distance(&recursion, &pi).map_err(Failure::internal)?;
            let expected_tv = stationary_gap(n).map_err(Failure::internal)?;
            Ok(ExactRow {
                n,
                equal: recursion == closed_form,
                recursion,
                closed_form,
                tv,
                expected_tv,
            })
        })
        .collect()
}

pub fn exact(n_max: u32, format: Format, out: &mut impl Write) -> CmdResult {
    let rows = exact_rows(n_max)?;
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &rows).map_err(|e| Failure::internal(e.to_string()))?;
            writeln!(out).map_err(io_failure)?;
        }
        Format::Text => {
            writeln!(out, "n\trecursion\tclosed_form\tequal\ttv").map_err(io_failure)?;
            for r in &rows {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    r.n,
                    weights(&r.recursion),
                    weights(&r.closed_form),
                    r.equal,
                    r.tv
                )
                .map_err(io_failure)?;
            }
        }
        Format::Csv => return Err(Failure::usage("exact supports --format text|json")),
    }
    match rows.iter().find(|r| !r.equal || r.tv != r.expected_tv) {
        Some(r) => Err(Failure::internal(format!(
            "closed form disagrees with matrix recursion at n = {}",
            r.n
        ))),
        None => Ok(()),
    }
}

fn write_summary(record: &SimulationRecord, out: &mut impl Write) -> io::Result<()> {
    let [mh, mt, tu] = state_frequencies(record);
    writeln!(out, "generator: {}", record.generator)?;
    writeln!(out, "seed: {}", record.config.seed())?;
    writeln!(out, "experiments: {}", record.total_experiments)?;
    writeln!(out, "heads_experiments: {}", record.heads_experiments)?;
    writeln!(out, "awakenings: {}", record.total_awakenings)?;
    writeln!(out, "halfer: {:.6}", halfer_statistic(record))?;
    writeln!(out, "thirder: {:.6}", thirder_statistic(record))?;
    writeln!(out, "freq_MH: {mh:.6}")?;
    writeln!(out, "freq_MT: {mt:.6}")?;
    writeln!(out, "freq_TU: {tu:.6}")
}

fn write_record(record: &SimulationRecord, format: Format, out: &mut impl Write) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, record)?;
            writeln!(out)
        }
        Format::Csv => record.write_csv(out),
        Format::Text => write_summary(record, out),
    }
}

pub fn simulate(
    seed: u64,
    n: u64,
    stride: u64,
    format: Format,
    output: Option<&Path>,
    out: &mut impl Write,
) -> CmdResult {
    let config = SimulationConfig::new(seed, n, stride).map_err(Failure::usage)?;
    let record = run_simulation(config);
    if !record.is_consistent() || !record.camp_identity_holds() {
        return Err(Failure::internal("simulation counters violate their invariants"));
    }
    match output {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| Failure::usage(format!("cannot create {}: {e}", path.display())))?;
            let mut file = io::BufWriter::new(file);
            write_record(&record, format, &mut file)
                .and_then(|_| file.flush())
                .map_err(io_failure)?;
            write_summary(&record, out).map_err(io_failure)
        }
        None => write_record(&record, format, out).map_err(io_failure),
    }
}

pub fn convert(mode: ConvertMode, tokens: &[String], complete: bool, out: &mut impl Write) -> CmdResult {
    let input = if tokens.is_empty() {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::usage(format!("reading stdin: {e}")))?;
        text
    } else {
        tokens.join(" ")
    };
    let converted = match mode {
        ConvertMode::Encode => {
            let coins: CoinSequence = input.parse().map_err(Failure::usage)?;
            encode_coins(&coins).map_err(Failure::usage)?.to_string()
        }
        ConvertMode::Project => {
            let labeled: LabeledSequence = input.parse().map_err(Failure::usage)?;
            project_labels(&labeled).map_err(Failure::usage)?.to_string()
        }
        ConvertMode::Decode => {
            let observed: ObservedSequence = input.parse().map_err(Failure::usage)?;
            decode_observations(&observed, complete).to_string()
        }
    };
    writeln!(out, "{converted}").map_err(io_failure)
}
