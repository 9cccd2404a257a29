//! Nondeterministic Turing machines on a one-way infinite tape, with a
//! bounded search for computations that reenter the initial state forever.
//!
//! Machines here are run from the blank tape; the interesting question is
//! whether some infinite computation visits the initial control state
//! infinitely often. That property is not semi-decidable, so
//! [`recurring_search`](TuringMachine::recurring_search) explores only
//! configurations whose canonical tape stays within a caller-supplied bound
//! and reports whether anything was pruned.

use std::collections::HashMap;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::nba::StateId;

/// Head movement of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Left,
    Right,
    Stay,
}

impl Move {
    pub fn letter(self) -> &'static str {
        match self {
            Move::Left => "L",
            Move::Right => "R",
            Move::Stay => "S",
        }
    }

    pub fn parse(text: &str) -> Result<Move> {
        match text {
            "L" => Ok(Move::Left),
            "R" => Ok(Move::Right),
            "S" => Ok(Move::Stay),
            other => Err(Error::InvalidMachine(format!("unknown move {other:?}"))),
        }
    }
}

/// One nondeterministic rule `(state, read) → (next_state, write, movement)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TmRule {
    pub state: StateId,
    pub read: Symbol,
    pub next_state: StateId,
    pub write: Symbol,
    pub movement: Move,
}

/// A nondeterministic Turing machine over a one-way infinite tape.
///
/// The head starts at cell 0 and can never move left of it: a left move at
/// cell 0 yields no successor configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    state_names: Vec<String>,
    input_alphabet: Arc<Alphabet>,
    tape_alphabet: Arc<Alphabet>,
    blank: Symbol,
    initial: StateId,
    rules: Vec<TmRule>,
}

/// A machine configuration: control state, materialized tape segment, head.
///
/// Canonical form materializes the cell under the head and trims trailing
/// blanks beyond it, so equal configurations compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TmConfiguration {
    state: StateId,
    tape: Vec<Symbol>,
    head: usize,
}

/// An ultimately periodic run: `stem` then `cycle` repeated forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmRunLasso {
    pub stem: Vec<TmConfiguration>,
    pub cycle: Vec<TmConfiguration>,
}

/// Outcome of a bounded recurring-computation search. `truncated` is set
/// when the tape bound pruned a successor or the step budget ran out, in
/// which case an absent lasso is inconclusive; unset means true exhaustion.
#[derive(Debug, Clone)]
pub struct TmSearch {
    pub lasso: Option<TmRunLasso>,
    pub explored: usize,
    pub truncated: bool,
}

impl TuringMachine {
    pub fn new(
        state_names: Vec<String>,
        input_alphabet: Arc<Alphabet>,
        tape_alphabet: Arc<Alphabet>,
        blank: Symbol,
        initial: StateId,
        mut rules: Vec<TmRule>,
    ) -> Result<Self> {
        if state_names.is_empty() {
            return Err(Error::InvalidMachine("a machine needs at least one state".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for name in &state_names {
            if name.is_empty() || !seen.insert(name) {
                return Err(Error::InvalidMachine(format!("bad or duplicate state name {name:?}")));
            }
        }
        for name in input_alphabet.names() {
            if !tape_alphabet.names().contains(name) {
                return Err(Error::InvalidMachine(format!(
                    "input letter {name:?} is missing from the tape alphabet"
                )));
            }
        }
        if !tape_alphabet.contains(blank) {
            return Err(Error::InvalidMachine("blank symbol is not a tape symbol".into()));
        }
        if input_alphabet.names().contains(&tape_alphabet.name(blank).to_string()) {
            return Err(Error::InvalidMachine("the blank must not be an input letter".into()));
        }
        if initial >= state_names.len() {
            return Err(Error::InvalidMachine(format!("initial state {initial} out of range")));
        }
        for r in &rules {
            if r.state >= state_names.len() || r.next_state >= state_names.len() {
                return Err(Error::InvalidMachine(format!("rule references unknown state: {r:?}")));
            }
            if !tape_alphabet.contains(r.read) || !tape_alphabet.contains(r.write) {
                return Err(Error::InvalidMachine(format!(
                    "rule references a symbol outside the tape alphabet: {r:?}"
                )));
            }
        }
        rules.sort();
        rules.dedup();
        Ok(TuringMachine { state_names, input_alphabet, tape_alphabet, blank, initial, rules })
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn input_alphabet(&self) -> &Arc<Alphabet> {
        &self.input_alphabet
    }

    pub fn tape_alphabet(&self) -> &Arc<Alphabet> {
        &self.tape_alphabet
    }

    pub fn blank(&self) -> Symbol {
        self.blank
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn rules(&self) -> &[TmRule] {
        &self.rules
    }

    fn canonical(&self, state: StateId, mut tape: Vec<Symbol>, head: usize) -> TmConfiguration {
        while tape.len() <= head {
            tape.push(self.blank);
        }
        let last_kept = (0..tape.len()).rev().find(|&i| tape[i] != self.blank).unwrap_or(0);
        tape.truncate(last_kept.max(head) + 1);
        TmConfiguration { state, tape, head }
    }

    /// The blank-tape starting configuration.
    pub fn initial_configuration(&self) -> TmConfiguration {
        self.canonical(self.initial, Vec::new(), 0)
    }

    /// Builds a canonical configuration after validating its parts.
    pub fn configuration(&self, state: StateId, tape: &Word, head: usize) -> Result<TmConfiguration> {
        if state >= self.state_names.len() {
            return Err(Error::InvalidMachine(format!("state {state} out of range")));
        }
        crate::alphabet::same_alphabet(tape.alphabet(), &self.tape_alphabet, "configuration tape")?;
        Ok(self.canonical(state, tape.letters().to_vec(), head))
    }

    /// All one-step successors of a configuration, in rule order. A left
    /// move with the head at cell 0 contributes nothing.
    pub fn successors(&self, c: &TmConfiguration) -> Vec<TmConfiguration> {
        let read = c.tape[c.head];
        let mut out = Vec::new();
        for r in &self.rules {
            if r.state != c.state || r.read != read {
                continue;
            }
            let head = match r.movement {
                Move::Stay => c.head,
                Move::Right => c.head + 1,
                Move::Left => {
                    if c.head == 0 {
                        continue;
                    }
                    c.head - 1
                }
            };
            let mut tape = c.tape.clone();
            tape[c.head] = r.write;
            out.push(self.canonical(r.next_state, tape, head));
        }
        out
    }

    /// Breadth-first bounded search for a run that reenters the initial
    /// state infinitely often. Explores configurations with canonical tape
    /// length ≤ `config_bound`, spending at most `step_budget` expansions,
    /// and returns the shortest stem+cycle through an initial-state
    /// configuration found within those limits.
    pub fn recurring_search(&self, config_bound: usize, step_budget: usize) -> TmSearch {
        let start = self.initial_configuration();
        if start.tape.len() > config_bound {
            return TmSearch { lasso: None, explored: 0, truncated: true };
        }
        let mut graph = Digraph::new(1);
        let mut ids: HashMap<TmConfiguration, usize> = HashMap::new();
        let mut configs = vec![start.clone()];
        ids.insert(start, 0);
        let mut truncated = false;
        let mut next = 0usize;
        while next < configs.len() {
            if next >= step_budget {
                truncated = true;
                break;
            }
            for succ in self.successors(&configs[next]) {
                if succ.tape.len() > config_bound {
                    truncated = true;
                    continue;
                }
                let id = match ids.get(&succ) {
                    Some(&id) => id,
                    None => {
                        let id = graph.add_node();
                        configs.push(succ.clone());
                        ids.insert(succ, id);
                        id
                    }
                };
                graph.add_edge(next, id, 0);
            }
            next += 1;
        }

        let anchors = (0..configs.len()).filter(|&i| configs[i].state == self.initial);
        let lasso = graph.find_lasso(0, anchors, 0).map(|(stem_edges, cycle_edges)| {
            let mut stem = Vec::with_capacity(stem_edges.len());
            let mut at = 0usize;
            for e in stem_edges {
                stem.push(configs[at].clone());
                at = graph.edge(e).1;
            }
            let mut cycle = vec![configs[at].clone()];
            for e in &cycle_edges[..cycle_edges.len() - 1] {
                cycle.push(configs[graph.edge(*e).1].clone());
            }
            TmRunLasso { stem, cycle }
        });
        if let Some(run) = &lasso {
            debug_assert!(self.check_run_lasso(run).is_ok());
        }
        TmSearch { lasso, explored: configs.len(), truncated }
    }

    /// Verifies a claimed run lasso: it starts at the blank-tape initial
    /// configuration, every consecutive step (including the cycle wrap) is
    /// legal, and the cycle passes through the initial state.
    pub fn check_run_lasso(&self, run: &TmRunLasso) -> Result<()> {
        if run.cycle.is_empty() {
            return Err(Error::InvalidWitness("run cycle is empty".into()));
        }
        let first = run.stem.first().unwrap_or(&run.cycle[0]);
        if *first != self.initial_configuration() {
            return Err(Error::InvalidWitness(
                "run does not start at the blank-tape initial configuration".into(),
            ));
        }
        let path: Vec<&TmConfiguration> = run.stem.iter().chain(&run.cycle).collect();
        for (i, pair) in path.windows(2).enumerate() {
            if !self.successors(pair[0]).contains(pair[1]) {
                return Err(Error::InvalidWitness(format!("illegal step at position {i}")));
            }
        }
        let last = run.cycle.last().unwrap();
        if !self.successors(last).contains(&run.cycle[0]) {
            return Err(Error::InvalidWitness("cycle does not close".into()));
        }
        if !run.cycle.iter().any(|c| c.state == self.initial) {
            return Err(Error::InvalidWitness("cycle never visits the initial state".into()));
        }
        Ok(())
    }

    /// Renders a configuration as its tape with the state name inserted
    /// immediately left of the scanned cell, e.g. `X q0 X`.
    pub fn render(&self, c: &TmConfiguration) -> String {
        let mut tokens: Vec<&str> = Vec::with_capacity(c.tape.len() + 1);
        for (i, &s) in c.tape.iter().enumerate() {
            if i == c.head {
                tokens.push(&self.state_names[c.state]);
            }
            tokens.push(self.tape_alphabet.name(s));
        }
        tokens.join(" ")
    }
}

impl TmConfiguration {
    pub fn state(&self) -> StateId {
        self.state
    }

    pub fn head(&self) -> usize {
        self.head
    }

    pub fn tape(&self) -> &[Symbol] {
        &self.tape
    }
}
