use gpb_core::oracle::{brute_log_z, brute_min};
use gpb_core::{
    extract_interaction_argmin, log_partition, minimize, run_algorithm2, run_d1_earley, run_d1_single_source,
    Algorithm2Options, ApspBackend, Grammar, Instance,
};
use serde::Serialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    General,
    Interaction,
    D1,
    EarleyD1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    Min,
    #[value(name = "logZ")]
    #[serde(rename = "logZ")]
    LogZ,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Reference,
    UsefulEdge,
}

impl Backend {
    pub fn apsp(self) -> ApspBackend {
        match self {
            Backend::Reference => ApspBackend::Reference,
            Backend::UsefulEdge => ApspBackend::useful_edge(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::Reference => "reference",
            Backend::UsefulEdge => "useful-edge",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub algorithm: Algorithm,
    pub objective: Objective,
    pub backend: Backend,
    pub oracle_check: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCheck {
    pub value: f64,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub algorithm: Algorithm,
    pub objective: Objective,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labeling: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
}

impl SolveReport {
    pub fn text(&self) -> String {
        let name = match self.objective {
            Objective::Min => "M",
            Objective::LogZ => "log Z",
        };
        let mut out = format!("{name} = {}\n", self.value);
        if let Some(x) = &self.labeling {
            out += &format!("labeling = {x}\n");
        }
        if let Some(d) = &self.derivation {
            out += &format!("derivation = {d}\n");
        }
        if let Some(o) = &self.oracle {
            let verdict = if o.matches { "match" } else { "MISMATCH" };
            out += &format!("oracle = {} ({verdict})\n", o.value);
        }
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

fn agree(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9 * b.abs().max(1.0)
}

pub fn solve(inst: &Instance<f64>, opts: SolveOptions) -> Result<SolveReport, CliError> {
    let prep = inst.prepare()?;
    let alphabet = inst.weights.alphabet();
    let mut report = SolveReport {
        algorithm: opts.algorithm,
        objective: opts.objective,
        value: f64::NAN,
        labeling: None,
        derivation: None,
        oracle: None,
    };

    let interaction = match (&inst.grammar, opts.algorithm) {
        (Grammar::Interaction(ig), _) => Some(ig),
        (Grammar::Cnf(_), Algorithm::General) => None,
        (Grammar::Cnf(_), _) => {
            return Err(CliError::Invalid(
                "this algorithm needs an interaction grammar".into(),
            ));
        }
    };
    if opts.objective == Objective::LogZ && (interaction.is_some() || opts.algorithm != Algorithm::General) {
        return Err(CliError::Invalid(
            "logZ is available for CNF grammars with the general algorithm only".into(),
        ));
    }

    match opts.algorithm {
        Algorithm::General => {
            let g = inst.cnf();
            if opts.objective == Objective::LogZ {
                report.value = log_partition(&prep.index, &prep.tables, &g)?;
            } else {
                match minimize(&prep.index, &prep.tables, &g) {
                    Ok(arg) => {
                        report.value = arg.value;
                        report.labeling = Some(alphabet.render(&arg.labeling));
                        report.derivation = Some(arg.derivation.render(&g, alphabet));
                    }
                    Err(gpb_core::Error::NoDerivableLabeling) => report.value = f64::INFINITY,
                    Err(e) => return Err(e.into()),
                }
            }
        }
        Algorithm::Interaction => {
            let ig = interaction.expect("checked above");
            let options = Algorithm2Options {
                backend: opts.backend.apsp(),
                backpointers: true,
            };
            let run = run_algorithm2(&prep.index, &prep.tables, ig, options)?;
            report.value = run.value;
            if run.value < f64::INFINITY {
                let arg = extract_interaction_argmin(&run, &prep.index, &prep.tables, ig)?;
                report.labeling = Some(alphabet.render(&arg.labeling));
                report.derivation = Some(arg.parse.render(ig, alphabet));
            }
        }
        Algorithm::D1 => {
            let ig = interaction.expect("checked above");
            report.value = run_d1_single_source(&prep.index, &prep.tables, ig)?.0;
        }
        Algorithm::EarleyD1 => {
            let ig = interaction.expect("checked above");
            report.value = run_d1_earley(&prep.index, &prep.tables, ig)?.0;
        }
    }

    if opts.oracle_check {
        let value = match opts.objective {
            Objective::Min => brute_min(inst)?.0,
            Objective::LogZ => brute_log_z(inst)?,
        };
        let matches = agree(report.value, value);
        report.oracle = Some(OracleCheck { value, matches });
    }
    Ok(report)
}
