//! Schema-versioned JSON manifests, one kind per object family. The
//! canonical rendering is pretty-printed with sorted keys and a trailing
//! newline, so serialize→parse→serialize is byte-identical; reconstruction
//! goes through the ordinary constructors and revalidates everything.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::alphabet::{Alphabet, Word};
use crate::continuity::ContinuityVerdict;
use crate::error::{Error, Result};
use crate::lasso::LassoWord;
use crate::nba::BuchiAutomaton;
use crate::pcp::PcpRegInstance;
use crate::tm::{Move, TmRule, TuringMachine};
use crate::transducer::{BuchiTransducer, RationalRelationWitness};

pub const MANIFEST_VERSION: &str = "1";

pub const KIND_AUTOMATON: &str = "automaton";
pub const KIND_TRANSDUCER: &str = "transducer";
pub const KIND_PCP_INSTANCE: &str = "pcp-instance";
pub const KIND_TURING_MACHINE: &str = "turing-machine";
pub const KIND_LASSO: &str = "lasso";
pub const KIND_VERDICT: &str = "verdict";
pub const KIND_WITNESS: &str = "witness";

/// Hash of a serialized source object, in the form recorded by
/// provenance headers.
pub fn source_hash(source: &[u8]) -> String {
    let digest = Sha256::digest(source);
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// Where a manifest came from: the hash of the serialized input object
/// and the command that produced the output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub source_hash: String,
    pub command: String,
}

impl Provenance {
    /// Whether `source` is the object the hash was taken over.
    pub fn matches(&self, source: &[u8]) -> bool {
        self.source_hash == source_hash(source)
    }
}

/// A typed serialization envelope. The payload stays generic JSON here;
/// the `of_*`/`to_*` pairs below move concrete objects in and out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    kind: String,
    version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
    payload: serde_json::Value,
}

impl Manifest {
    fn encode<T: Serialize>(kind: &str, payload: &T) -> Manifest {
        Manifest {
            kind: kind.into(),
            version: MANIFEST_VERSION.into(),
            provenance: None,
            payload: serde_json::to_value(payload).expect("payload types serialize"),
        }
    }

    fn decode<T: DeserializeOwned>(&self, kind: &'static str) -> Result<T> {
        if self.kind != kind {
            return Err(Error::KindMismatch { expected: kind, found: self.kind.clone() });
        }
        serde_json::from_value(self.payload.clone())
            .map_err(|e| Error::Manifest(format!("malformed {kind} payload: {e}")))
    }

    pub fn parse(text: &str) -> Result<Manifest> {
        let m: Manifest =
            serde_json::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
        if m.version != MANIFEST_VERSION {
            return Err(Error::Manifest(format!("unsupported manifest version {}", m.version)));
        }
        Ok(m)
    }

    /// The canonical rendering: pretty-printed, keys sorted, one trailing
    /// newline.
    pub fn to_canonical_string(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifests serialize");
        text.push('\n');
        text
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Stamps the manifest with the hash of the serialized source object
    /// and the producing command.
    pub fn with_provenance(mut self, source: &[u8], command: &str) -> Manifest {
        self.provenance =
            Some(Provenance { source_hash: source_hash(source), command: command.into() });
        self
    }

    pub fn of_automaton(a: &BuchiAutomaton) -> Manifest {
        Manifest::encode(KIND_AUTOMATON, &automaton_to_payload(a))
    }

    pub fn to_automaton(&self) -> Result<BuchiAutomaton> {
        payload_to_automaton(&self.decode(KIND_AUTOMATON)?)
    }

    pub fn of_transducer(t: &BuchiTransducer) -> Manifest {
        let payload = TransducerPayload {
            input_alphabet: t.input_alphabet().names().to_vec(),
            output_alphabet: t.output_alphabet().names().to_vec(),
            states: t.state_names().to_vec(),
            initial: t.initial(),
            accepting: t.accepting().to_vec(),
            transitions: t
                .transitions()
                .iter()
                .map(|(src, input, output, dst)| (*src, input.names(), output.names(), *dst))
                .collect(),
        };
        Manifest::encode(KIND_TRANSDUCER, &payload)
    }

    pub fn to_transducer(&self) -> Result<BuchiTransducer> {
        let p: TransducerPayload = self.decode(KIND_TRANSDUCER)?;
        let input = Arc::new(Alphabet::new(p.input_alphabet)?);
        let output = Arc::new(Alphabet::new(p.output_alphabet)?);
        let transitions = p
            .transitions
            .into_iter()
            .map(|(src, i, o, dst)| {
                Ok((src, word_from_names(&input, &i)?, word_from_names(&output, &o)?, dst))
            })
            .collect::<Result<Vec<_>>>()?;
        BuchiTransducer::new(input, output, p.states, p.initial, p.accepting, transitions)
    }

    pub fn of_pcp_instance(inst: &PcpRegInstance) -> Manifest {
        let words = |ws: &[Word]| ws.iter().map(|w| w.names()).collect();
        let payload = PcpInstancePayload {
            alphabet: inst.word_alphabet().names().to_vec(),
            x_words: words(inst.x_words()),
            y_words: words(inst.y_words()),
            constraint: automaton_to_payload(inst.constraint()),
        };
        Manifest::encode(KIND_PCP_INSTANCE, &payload)
    }

    pub fn to_pcp_instance(&self) -> Result<PcpRegInstance> {
        let p: PcpInstancePayload = self.decode(KIND_PCP_INSTANCE)?;
        let gamma = Arc::new(Alphabet::new(p.alphabet)?);
        let words = |ws: &[Vec<String>]| {
            ws.iter().map(|w| word_from_names(&gamma, w)).collect::<Result<Vec<_>>>()
        };
        PcpRegInstance::new(
            words(&p.x_words)?,
            words(&p.y_words)?,
            payload_to_automaton(&p.constraint)?,
        )
    }

    pub fn of_turing_machine(m: &TuringMachine) -> Manifest {
        let name = |s| m.tape_alphabet().name(s).to_string();
        let payload = TuringMachinePayload {
            states: m.state_names().to_vec(),
            input_alphabet: m.input_alphabet().names().to_vec(),
            tape_alphabet: m.tape_alphabet().names().to_vec(),
            blank: name(m.blank()),
            initial: m.initial(),
            rules: m
                .rules()
                .iter()
                .map(|r| {
                    (r.state, name(r.read), r.next_state, name(r.write), r.movement.letter().into())
                })
                .collect(),
        };
        Manifest::encode(KIND_TURING_MACHINE, &payload)
    }

    pub fn to_turing_machine(&self) -> Result<TuringMachine> {
        let p: TuringMachinePayload = self.decode(KIND_TURING_MACHINE)?;
        let tape = Arc::new(Alphabet::new(p.tape_alphabet)?);
        let input = Arc::new(Alphabet::new(p.input_alphabet)?);
        let blank = tape.expect_symbol(&p.blank)?;
        let rules = p
            .rules
            .into_iter()
            .map(|(state, read, next_state, write, movement)| {
                Ok(TmRule {
                    state,
                    read: tape.expect_symbol(&read)?,
                    next_state,
                    write: tape.expect_symbol(&write)?,
                    movement: Move::parse(&movement)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        TuringMachine::new(p.states, input, tape, blank, p.initial, rules)
    }

    pub fn of_lasso(w: &LassoWord) -> Manifest {
        Manifest::encode(KIND_LASSO, &lasso_to_payload(w))
    }

    pub fn to_lasso(&self) -> Result<LassoWord> {
        payload_to_lasso(&self.decode(KIND_LASSO)?)
    }

    pub fn of_verdict(v: &ContinuityVerdict) -> Manifest {
        let payload = match v {
            ContinuityVerdict::ContinuousUpTo { depth, witness_k } => VerdictPayload {
                verdict: "continuous-up-to".into(),
                depth: Some(*depth),
                failing_n: None,
                k_max: None,
                certified: witness_k.clone(),
                witness: None,
            },
            ContinuityVerdict::DiscontinuityEvidence { failing_n, witness, certified, k_max } => {
                VerdictPayload {
                    verdict: "discontinuity-evidence".into(),
                    depth: None,
                    failing_n: Some(*failing_n),
                    k_max: Some(*k_max),
                    certified: certified.clone(),
                    witness: Some(lasso_to_payload(witness)),
                }
            }
            ContinuityVerdict::Unknown { failing_n, certified, k_max } => VerdictPayload {
                verdict: "unknown".into(),
                depth: None,
                failing_n: Some(*failing_n),
                k_max: Some(*k_max),
                certified: certified.clone(),
                witness: None,
            },
        };
        Manifest::encode(KIND_VERDICT, &payload)
    }

    pub fn to_verdict(&self) -> Result<ContinuityVerdict> {
        let p: VerdictPayload = self.decode(KIND_VERDICT)?;
        let missing = |field| Error::Manifest(format!("verdict lacks {field}"));
        match p.verdict.as_str() {
            "continuous-up-to" => Ok(ContinuityVerdict::ContinuousUpTo {
                depth: p.depth.ok_or_else(|| missing("depth"))?,
                witness_k: p.certified,
            }),
            "discontinuity-evidence" => Ok(ContinuityVerdict::DiscontinuityEvidence {
                failing_n: p.failing_n.ok_or_else(|| missing("failing_n"))?,
                witness: payload_to_lasso(&p.witness.ok_or_else(|| missing("witness"))?)?,
                certified: p.certified,
                k_max: p.k_max.ok_or_else(|| missing("k_max"))?,
            }),
            "unknown" => Ok(ContinuityVerdict::Unknown {
                failing_n: p.failing_n.ok_or_else(|| missing("failing_n"))?,
                certified: p.certified,
                k_max: p.k_max.ok_or_else(|| missing("k_max"))?,
            }),
            other => Err(Error::Manifest(format!("unrecognized verdict {other}"))),
        }
    }

    pub fn of_witness(w: &WitnessRecord) -> Manifest {
        let payload = match w {
            WitnessRecord::PcpSolution(sigma) => WitnessPayload {
                witness_type: "pcp-solution".into(),
                solution: Some(lasso_to_payload(sigma)),
                input: None,
                output: None,
                stem: None,
                cycle: None,
            },
            WitnessRecord::RationalRelation(rw) => WitnessPayload {
                witness_type: "rational-relation".into(),
                solution: None,
                input: Some(lasso_to_payload(&rw.input)),
                output: Some(lasso_to_payload(&rw.output)),
                stem: Some(rw.stem.clone()),
                cycle: Some(rw.cycle.clone()),
            },
        };
        Manifest::encode(KIND_WITNESS, &payload)
    }

    pub fn to_witness(&self) -> Result<WitnessRecord> {
        let p: WitnessPayload = self.decode(KIND_WITNESS)?;
        let missing = |field| Error::Manifest(format!("witness lacks {field}"));
        match p.witness_type.as_str() {
            "pcp-solution" => Ok(WitnessRecord::PcpSolution(payload_to_lasso(
                &p.solution.ok_or_else(|| missing("solution"))?,
            )?)),
            "rational-relation" => Ok(WitnessRecord::RationalRelation(RationalRelationWitness {
                input: payload_to_lasso(&p.input.ok_or_else(|| missing("input"))?)?,
                output: payload_to_lasso(&p.output.ok_or_else(|| missing("output"))?)?,
                stem: p.stem.ok_or_else(|| missing("stem"))?,
                cycle: p.cycle.ok_or_else(|| missing("cycle"))?,
            })),
            other => Err(Error::Manifest(format!("unrecognized witness type {other}"))),
        }
    }
}

/// A witness object: either a solution index word for a constrained PCP
/// instance, or an accepted pair of a rational relation with its run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessRecord {
    PcpSolution(LassoWord),
    RationalRelation(RationalRelationWitness),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonPayload {
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: usize,
    accepting: Vec<usize>,
    transitions: Vec<(usize, String, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransducerPayload {
    input_alphabet: Vec<String>,
    output_alphabet: Vec<String>,
    states: Vec<String>,
    initial: usize,
    accepting: Vec<usize>,
    transitions: Vec<(usize, Vec<String>, Vec<String>, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PcpInstancePayload {
    alphabet: Vec<String>,
    x_words: Vec<Vec<String>>,
    y_words: Vec<Vec<String>>,
    constraint: AutomatonPayload,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TuringMachinePayload {
    states: Vec<String>,
    input_alphabet: Vec<String>,
    tape_alphabet: Vec<String>,
    blank: String,
    initial: usize,
    rules: Vec<(usize, String, usize, String, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LassoPayload {
    alphabet: Vec<String>,
    prefix: Vec<String>,
    cycle: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerdictPayload {
    verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failing_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_max: Option<usize>,
    certified: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<LassoPayload>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessPayload {
    witness_type: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    solution: Option<LassoPayload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<LassoPayload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<LassoPayload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stem: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cycle: Option<Vec<usize>>,
}

fn automaton_to_payload(a: &BuchiAutomaton) -> AutomatonPayload {
    AutomatonPayload {
        alphabet: a.alphabet().names().to_vec(),
        states: a.state_names().to_vec(),
        initial: a.initial(),
        accepting: a.accepting().to_vec(),
        transitions: a
            .transitions()
            .iter()
            .map(|&(src, sym, dst)| (src, a.alphabet().name(sym).to_string(), dst))
            .collect(),
    }
}

fn payload_to_automaton(p: &AutomatonPayload) -> Result<BuchiAutomaton> {
    let alphabet = Arc::new(Alphabet::new(p.alphabet.clone())?);
    let transitions = p
        .transitions
        .iter()
        .map(|(src, name, dst)| Ok((*src, alphabet.expect_symbol(name)?, *dst)))
        .collect::<Result<Vec<_>>>()?;
    BuchiAutomaton::new(
        alphabet,
        p.states.clone(),
        p.initial,
        p.accepting.clone(),
        transitions,
    )
}

fn lasso_to_payload(w: &LassoWord) -> LassoPayload {
    LassoPayload {
        alphabet: w.alphabet().names().to_vec(),
        prefix: w.prefix().names(),
        cycle: w.cycle().names(),
    }
}

fn payload_to_lasso(p: &LassoPayload) -> Result<LassoWord> {
    let alphabet = Arc::new(Alphabet::new(p.alphabet.clone())?);
    let prefix = word_from_names(&alphabet, &p.prefix)?;
    let cycle = word_from_names(&alphabet, &p.cycle)?;
    LassoWord::new(prefix, cycle)
}

fn word_from_names(alphabet: &Arc<Alphabet>, names: &[String]) -> Result<Word> {
    let letters =
        names.iter().map(|n| alphabet.expect_symbol(n)).collect::<Result<Vec<_>>>()?;
    Word::new(Arc::clone(alphabet), letters)
}
