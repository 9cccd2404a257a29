//! Asynchronous finite-state transducers on infinite words.
//!
//! A [`BuchiTransducer`] carries a finite input word and a finite output word
//! on every transition, so the two tracks advance at independent rates. A run
//! is successful when it visits an accepting state infinitely often, and the
//! machine relates the concatenation of the input labels to the concatenation
//! of the output labels of successful runs in which both concatenations are
//! infinite: the accepted relation is a set of pairs of infinite words.
//!
//! The module provides the projections of the relation onto either track
//! ([`BuchiTransducer::domain_automaton`], [`BuchiTransducer::image_automaton`]),
//! restriction of the input side to a cylinder
//! ([`BuchiTransducer::restrict_input_prefix`]), evaluation at an ultimately
//! periodic input ([`BuchiTransducer::apply_lasso`]), and bounded product
//! searches for nonfunctionality counterexamples
//! ([`BuchiTransducer::nonfunctionality_search`]) and for a pair common to two
//! relations ([`common_witness_search`]).

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::alphabet::{same_alphabet, Alphabet, Symbol, Word};
use crate::graph::{advance_phase, Digraph};
use crate::lasso::LassoWord;
use crate::nba::{BuchiAutomaton, StateId};
use crate::{Error, Result};

/// Hard ceiling on explored configurations in the two-copy product searches.
const PAIR_CONFIG_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiTransducer {
    input_alphabet: Arc<Alphabet>,
    output_alphabet: Arc<Alphabet>,
    state_names: Vec<String>,
    initial: StateId,
    accepting: Vec<StateId>,
    transitions: Vec<(StateId, Word, Word, StateId)>,
}

/// A finite description of one successful run: the input and output lassos it
/// spells and the transition ids of its stem and cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalRelationWitness {
    pub input: LassoWord,
    pub output: LassoWord,
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl BuchiTransducer {
    /// Builds a transducer, validating state references and that every label
    /// is a word over the declared track alphabet. Accepting states and
    /// transitions are stored sorted and deduplicated.
    pub fn new(
        input_alphabet: Arc<Alphabet>,
        output_alphabet: Arc<Alphabet>,
        state_names: Vec<String>,
        initial: StateId,
        accepting: Vec<StateId>,
        transitions: Vec<(StateId, Word, Word, StateId)>,
    ) -> Result<BuchiTransducer> {
        let n = state_names.len();
        if n == 0 {
            return Err(Error::InvalidTransducer("no states".into()));
        }
        for (i, name) in state_names.iter().enumerate() {
            if state_names[..i].contains(name) {
                return Err(Error::InvalidTransducer(format!("duplicate state name `{name}`")));
            }
        }
        if initial >= n {
            return Err(Error::InvalidTransducer(format!("initial state {initial} out of range")));
        }
        let mut accepting = accepting;
        accepting.sort_unstable();
        accepting.dedup();
        if let Some(&s) = accepting.iter().find(|s| **s >= n) {
            return Err(Error::InvalidTransducer(format!("accepting state {s} out of range")));
        }
        let mut transitions = transitions;
        transitions.sort_unstable();
        transitions.dedup();
        for (src, input, output, dst) in &transitions {
            if *src >= n || *dst >= n {
                return Err(Error::InvalidTransducer(format!(
                    "transition ({src}, {input}, {output}, {dst}) out of range"
                )));
            }
            same_alphabet(&input_alphabet, input.alphabet(), "transducer input label")?;
            same_alphabet(&output_alphabet, output.alphabet(), "transducer output label")?;
        }
        Ok(BuchiTransducer {
            input_alphabet,
            output_alphabet,
            state_names,
            initial,
            accepting,
            transitions,
        })
    }

    pub fn input_alphabet(&self) -> &Arc<Alphabet> {
        &self.input_alphabet
    }

    pub fn output_alphabet(&self) -> &Arc<Alphabet> {
        &self.output_alphabet
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    /// Accepting states in ascending order.
    pub fn accepting(&self) -> &[StateId] {
        &self.accepting
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting.binary_search(&s).is_ok()
    }

    /// Transitions in stored (sorted) order; witnesses index into this slice.
    pub fn transitions(&self) -> &[(StateId, Word, Word, StateId)] {
        &self.transitions
    }

    /// Transition indices grouped by source state.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_states()];
        for (t, (src, _, _, _)) in self.transitions.iter().enumerate() {
            adj[*src].push(t);
        }
        adj
    }

    /// Checks that `w` faithfully describes a successful run: the stem starts
    /// at the initial state, the cycle returns to its entry state, visits an
    /// accepting state and progresses on both tracks, and the concatenated
    /// labels spell exactly the claimed lassos.
    pub fn check_witness(&self, w: &RationalRelationWitness) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidWitness(msg));
        if w.cycle.is_empty() {
            return fail("cycle is empty".into());
        }
        let step = |state: &mut StateId, t: usize| -> Result<(&Word, &Word)> {
            let (src, input, output, dst) = self
                .transitions
                .get(t)
                .ok_or_else(|| Error::InvalidWitness(format!("transition id {t} out of range")))?;
            if *src != *state {
                return Err(Error::InvalidWitness(format!(
                    "transition {t} leaves `{}` but the run is at `{}`",
                    self.state_names[*src], self.state_names[*state]
                )));
            }
            *state = *dst;
            Ok((input, output))
        };

        let mut state = self.initial;
        let mut stem_in = Vec::new();
        let mut stem_out = Vec::new();
        for &t in &w.stem {
            let (input, output) = step(&mut state, t)?;
            stem_in.extend_from_slice(input.letters());
            stem_out.extend_from_slice(output.letters());
        }
        let entry = state;
        let mut seen_accepting = false;
        let mut cycle_in = Vec::new();
        let mut cycle_out = Vec::new();
        for &t in &w.cycle {
            seen_accepting |= self.is_accepting(state);
            let (input, output) = step(&mut state, t)?;
            cycle_in.extend_from_slice(input.letters());
            cycle_out.extend_from_slice(output.letters());
        }
        if state != entry {
            return fail(format!(
                "cycle ends at `{}` instead of its entry `{}`",
                self.state_names[state], self.state_names[entry]
            ));
        }
        if !seen_accepting {
            return fail("cycle visits no accepting state".into());
        }
        if cycle_in.is_empty() {
            return fail("cycle consumes no input".into());
        }
        if cycle_out.is_empty() {
            return fail("cycle produces no output".into());
        }
        let input = LassoWord::new(
            Word::from_letters(&self.input_alphabet, stem_in),
            Word::from_letters(&self.input_alphabet, cycle_in),
        )?;
        if !input.same_word(&w.input)? {
            return fail(format!("run spells input {input}, witness claims {}", w.input));
        }
        let output = LassoWord::new(
            Word::from_letters(&self.output_alphabet, stem_out),
            Word::from_letters(&self.output_alphabet, cycle_out),
        )?;
        if !output.same_word(&w.output)? {
            return fail(format!("run spells output {output}, witness claims {}", w.output));
        }
        Ok(())
    }

    /// Büchi automaton over the input alphabet accepting exactly the inputs
    /// of pairs in the relation.
    ///
    /// Built by erasing output labels, expanding multi-letter input labels
    /// into letter chains, and eliminating empty-input transitions. A word
    /// belongs to the domain only if some successful run reads it in full
    /// while also writing infinitely many letters, so cycles of empty input
    /// labels never create acceptance and runs with a finite output are
    /// discarded by a second acceptance condition.
    pub fn domain_automaton(&self) -> BuchiAutomaton {
        self.projection(true)
    }

    /// Büchi automaton over the output alphabet accepting exactly the outputs
    /// of pairs in the relation; symmetric to
    /// [`BuchiTransducer::domain_automaton`].
    pub fn image_automaton(&self) -> BuchiAutomaton {
        self.projection(false)
    }

    fn projection(&self, keep_input: bool) -> BuchiAutomaton {
        let alphabet = if keep_input { &self.input_alphabet } else { &self.output_alphabet };
        let graph = self.erased_graph(keep_input);

        // Degeneralize the two conditions (accepting visits, erased-track
        // progress) over phases 0..=2; phase 2 is the accepting phase.
        let mut ids: HashMap<(usize, usize), StateId> = HashMap::new();
        let mut nodes: Vec<(usize, usize)> = Vec::new();
        let mut queue = VecDeque::new();
        let root = (self.initial, 0);
        ids.insert(root, 0);
        nodes.push(root);
        queue.push_back(root);
        let mut transitions = Vec::new();
        let mut macro_cache: HashMap<usize, Vec<(Symbol, usize, u32)>> = HashMap::new();
        while let Some((node, phase)) = queue.pop_front() {
            let src = ids[&(node, phase)];
            let edges =
                macro_cache.entry(node).or_insert_with(|| graph.macro_edges(node)).clone();
            for (sym, target, tags) in edges {
                let key = (target, advance_phase(phase, tags, 2));
                let dst = *ids.entry(key).or_insert_with(|| {
                    nodes.push(key);
                    queue.push_back(key);
                    nodes.len() - 1
                });
                transitions.push((src, sym, dst));
            }
        }
        let state_names =
            nodes.iter().map(|(s, p)| format!("({},{p})", graph.names[*s])).collect();
        let accepting =
            nodes.iter().enumerate().filter(|(_, (_, p))| *p == 2).map(|(i, _)| i).collect();
        BuchiAutomaton::new(Arc::clone(alphabet), state_names, 0, accepting, transitions)
            .expect("projection produces a well-formed automaton")
    }

    /// One track of the transducer as a letter graph: kept labels become
    /// chains of single-letter edges through fresh non-accepting states,
    /// empty kept labels become erased-track edges. Each edge remembers
    /// whether the erased track progressed on its transition.
    fn erased_graph(&self, keep_input: bool) -> ErasedGraph {
        let n = self.num_states();
        let mut names = self.state_names.clone();
        let mut taken: HashSet<String> = names.iter().cloned().collect();
        let mut accepting: Vec<bool> = (0..n).map(|s| self.is_accepting(s)).collect();
        let mut eps: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
        let mut letters: Vec<Vec<(Symbol, usize, bool)>> = vec![Vec::new(); n];
        for (t, (src, input, output, dst)) in self.transitions.iter().enumerate() {
            let (kept, other) = if keep_input { (input, output) } else { (output, input) };
            let progress = !other.is_empty();
            if kept.is_empty() {
                eps[*src].push((*dst, progress));
                continue;
            }
            let mut current = *src;
            for (i, &letter) in kept.letters().iter().enumerate() {
                let target = if i + 1 == kept.len() {
                    *dst
                } else {
                    let mut name = format!("t{t}@{}", i + 1);
                    while !taken.insert(name.clone()) {
                        name.push('\'');
                    }
                    names.push(name);
                    accepting.push(false);
                    eps.push(Vec::new());
                    letters.push(Vec::new());
                    names.len() - 1
                };
                // The erased track is charged once, on the first letter.
                letters[current].push((letter, target, i == 0 && progress));
                current = target;
            }
        }
        ErasedGraph { names, accepting, eps, letters }
    }

    /// The relation restricted to inputs starting with `w`: the product of
    /// the transducer with a `|w|+1`-state prefix matcher on the input track.
    pub fn restrict_input_prefix(&self, w: &Word) -> Result<BuchiTransducer> {
        same_alphabet(&self.input_alphabet, w.alphabet(), "input restriction")?;
        let adj = self.adjacency();
        let mut ids: HashMap<(StateId, usize), StateId> = HashMap::new();
        let mut nodes: Vec<(StateId, usize)> = Vec::new();
        let mut queue = VecDeque::new();
        let root = (self.initial, 0);
        ids.insert(root, 0);
        nodes.push(root);
        queue.push_back(root);
        let mut transitions = Vec::new();
        while let Some((q, i)) = queue.pop_front() {
            let src = ids[&(q, i)];
            for &t in &adj[q] {
                let (_, input, output, dst) = &self.transitions[t];
                let matches = input
                    .letters()
                    .iter()
                    .enumerate()
                    .all(|(j, &l)| i + j >= w.len() || l == w.letters()[i + j]);
                if !matches {
                    continue;
                }
                let key = (*dst, (i + input.len()).min(w.len()));
                let to = *ids.entry(key).or_insert_with(|| {
                    nodes.push(key);
                    queue.push_back(key);
                    nodes.len() - 1
                });
                transitions.push((src, input.clone(), output.clone(), to));
            }
        }
        let state_names =
            nodes.iter().map(|(q, i)| format!("({},{i})", self.state_names[*q])).collect();
        let accepting = nodes
            .iter()
            .enumerate()
            .filter(|(_, (q, _))| self.is_accepting(*q))
            .map(|(i, _)| i)
            .collect();
        BuchiTransducer::new(
            Arc::clone(&self.input_alphabet),
            Arc::clone(&self.output_alphabet),
            state_names,
            0,
            accepting,
            transitions,
        )
    }

    /// Evaluates the transducer at the ultimately periodic input `x`,
    /// returning the full run evidence.
    ///
    /// Searches the product of the transducer with the shape of `x` for an
    /// accepting cycle that progresses on both tracks. The caller promises a
    /// functional transducer, so the output of any found run is the value at
    /// `x`; when no run exists the input is checked against the domain, and a
    /// domain member without a periodic run is a bug (the finite product
    /// pumps every successful run into a periodic one).
    pub fn apply_lasso_witness(&self, x: &LassoWord) -> Result<RationalRelationWitness> {
        same_alphabet(&self.input_alphabet, x.alphabet(), "transducer application")?;
        let product = self.lasso_product(x);
        match product.graph.find_lasso(0, product.anchors.iter().copied(), 0b11) {
            Some((stem, cycle)) => {
                let w = self.witness_from_edges(&stem, &cycle, &product.edge_transition);
                debug_assert!(w.input.same_word(x).unwrap());
                Ok(w)
            }
            None => {
                if self.domain_automaton().accepts_lasso(x)? {
                    panic!(
                        "input {x} is in the domain but the lasso product has no accepting \
                         cycle; pumping over the finite product guarantees one"
                    );
                }
                Err(Error::NotInDomain)
            }
        }
    }

    /// The value of the (promised functional) transducer at `x`.
    pub fn apply_lasso(&self, x: &LassoWord) -> Result<LassoWord> {
        Ok(self.apply_lasso_witness(x)?.output)
    }

    /// Outputs of accepting lasso runs on `x`, one search per accepting
    /// product configuration, deduplicated as infinite words. Empty when `x`
    /// is outside the domain. A functional transducer yields exactly one
    /// output here regardless of run choice.
    pub fn apply_lasso_outputs(&self, x: &LassoWord) -> Result<Vec<LassoWord>> {
        same_alphabet(&self.input_alphabet, x.alphabet(), "transducer application")?;
        let product = self.lasso_product(x);
        let mut outputs: Vec<LassoWord> = Vec::new();
        for &anchor in &product.anchors {
            if let Some((stem, cycle)) = product.graph.find_lasso(0, [anchor], 0b11) {
                let w = self.witness_from_edges(&stem, &cycle, &product.edge_transition);
                if !outputs.iter().any(|o| o.same_word(&w.output).unwrap()) {
                    outputs.push(w.output);
                }
            }
        }
        Ok(outputs)
    }

    /// Product of the transducer with the shape of `x`. Nodes are pairs of a
    /// state and a canonical position in `x` (prefix positions, then cycle
    /// positions that wrap); an edge exists when the transition's input label
    /// matches `x` at that position. Edge mask: bit 0 = input consumed,
    /// bit 1 = output produced.
    fn lasso_product(&self, x: &LassoWord) -> LassoProduct {
        let adj = self.adjacency();
        let prefix_len = x.prefix().len();
        let total = prefix_len + x.cycle().len();
        let mut graph = Digraph::new(0);
        let mut ids: HashMap<(StateId, usize), usize> = HashMap::new();
        let mut configs: Vec<(StateId, usize)> = Vec::new();
        let mut queue = VecDeque::new();
        let mut edge_transition = Vec::new();
        let root = (self.initial, 0);
        ids.insert(root, graph.add_node());
        configs.push(root);
        queue.push_back(root);
        while let Some((q, pos)) = queue.pop_front() {
            let src = ids[&(q, pos)];
            'transition: for &t in &adj[q] {
                let (_, input, output, dst) = &self.transitions[t];
                let mut cursor = pos;
                for &letter in input.letters() {
                    if x.letter_at(cursor) != letter {
                        continue 'transition;
                    }
                    cursor = if cursor + 1 == total { prefix_len } else { cursor + 1 };
                }
                let key = (*dst, cursor);
                let to = match ids.entry(key) {
                    Entry::Occupied(o) => *o.get(),
                    Entry::Vacant(v) => {
                        configs.push(key);
                        queue.push_back(key);
                        *v.insert(graph.add_node())
                    }
                };
                let mask =
                    (!input.is_empty() as u32) | ((!output.is_empty() as u32) << 1);
                let e = graph.add_edge(src, to, mask);
                debug_assert_eq!(e, edge_transition.len());
                edge_transition.push(t);
            }
        }
        let anchors = configs
            .iter()
            .enumerate()
            .filter(|(_, (q, _))| self.is_accepting(*q))
            .map(|(i, _)| i)
            .collect();
        LassoProduct { graph, edge_transition, anchors }
    }

    fn witness_from_edges(
        &self,
        stem: &[usize],
        cycle: &[usize],
        edge_transition: &[usize],
    ) -> RationalRelationWitness {
        let collect = |edges: &[usize]| {
            let mut input = Vec::new();
            let mut output = Vec::new();
            let mut run = Vec::new();
            for &e in edges {
                let t = edge_transition[e];
                let (_, i, o, _) = &self.transitions[t];
                input.extend_from_slice(i.letters());
                output.extend_from_slice(o.letters());
                run.push(t);
            }
            (input, output, run)
        };
        let (stem_in, stem_out, stem_run) = collect(stem);
        let (cycle_in, cycle_out, cycle_run) = collect(cycle);
        RationalRelationWitness {
            input: LassoWord::new(
                Word::from_letters(&self.input_alphabet, stem_in),
                Word::from_letters(&self.input_alphabet, cycle_in),
            )
            .expect("cycle consumes input"),
            output: LassoWord::new(
                Word::from_letters(&self.output_alphabet, stem_out),
                Word::from_letters(&self.output_alphabet, cycle_out),
            )
            .expect("cycle produces output"),
            stem: stem_run,
            cycle: cycle_run,
        }
    }

    /// Bounded counterexample search for functionality: looks in the
    /// input-synchronized self-product for two successful runs reading the
    /// same word while writing words that differ at some position, and
    /// returns `(x, v1, v2)` with `v1 ≠ v2` when found.
    ///
    /// `bound` caps the tracked overhang between the two copies on each
    /// track, so absence is evidence, not proof, of functionality.
    pub fn nonfunctionality_search(
        &self,
        bound: usize,
    ) -> Option<(LassoWord, LassoWord, LassoWord)> {
        let (w1, w2) = self.nonfunctionality_witnesses(bound)?;
        debug_assert!(!w1.output.same_word(&w2.output).unwrap());
        Some((w1.input, w1.output, w2.output))
    }

    /// As [`BuchiTransducer::nonfunctionality_search`], exposing the two runs.
    pub fn nonfunctionality_witnesses(
        &self,
        bound: usize,
    ) -> Option<(RationalRelationWitness, RationalRelationWitness)> {
        pair_product_search(self, self, bound, true)
    }
}

/// Bounded search for a pair of infinite words in both relations. Returns a
/// run of each transducer spelling the same input and the same output, or
/// `None` when the product search within `bound` (overhang cap per track)
/// exhausts without one.
pub fn common_witness_search(
    t1: &BuchiTransducer,
    t2: &BuchiTransducer,
    bound: usize,
) -> Result<Option<(RationalRelationWitness, RationalRelationWitness)>> {
    same_alphabet(&t1.input_alphabet, &t2.input_alphabet, "common witness input track")?;
    same_alphabet(&t1.output_alphabet, &t2.output_alphabet, "common witness output track")?;
    Ok(pair_product_search(t1, t2, bound, false))
}

struct ErasedGraph {
    names: Vec<String>,
    accepting: Vec<bool>,
    eps: Vec<Vec<(usize, bool)>>,
    letters: Vec<Vec<(Symbol, usize, bool)>>,
}

impl ErasedGraph {
    /// Single-letter transitions leaving `from` after any number of
    /// erased-track steps. Tag bit 0: an accepting state was the source of
    /// some step (arrival states count toward the next edge); tag bit 1: the
    /// erased track progressed.
    fn macro_edges(&self, from: usize) -> Vec<(Symbol, usize, u32)> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        let start = (from, self.accepting[from] as u32);
        seen.insert(start);
        queue.push_back(start);
        while let Some((s, tags)) = queue.pop_front() {
            for &(sym, target, progress) in &self.letters[s] {
                out.push((sym, target, tags | ((progress as u32) << 1)));
            }
            for &(target, progress) in &self.eps[s] {
                let next =
                    (target, tags | ((progress as u32) << 1) | self.accepting[target] as u32);
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        out.sort_unstable_by_key(|&(sym, target, tags)| (sym.index(), target, tags));
        out.dedup();
        out
    }
}

struct LassoProduct {
    graph: Digraph,
    edge_transition: Vec<usize>,
    anchors: Vec<usize>,
}

/// Output-track bookkeeping of the two-copy product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum OutTrack {
    /// All positions produced by both copies agree; `lead` is ahead by
    /// `overhang` (lead 0 means level with an empty overhang).
    Agree { lead: u8, overhang: Vec<Symbol> },
    /// The outputs differ at some already-produced position; sticky.
    Differ,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct PairConfig {
    states: (StateId, StateId),
    in_lead: u8,
    in_overhang: Vec<Symbol>,
    out: OutTrack,
}

/// Appends the mover's word to a synchronized track. `None` when the word
/// contradicts the letters the other copy has already fixed.
fn sync_track(
    lead: u8,
    overhang: &[Symbol],
    mover: u8,
    word: &Word,
) -> Option<(u8, Vec<Symbol>)> {
    if lead == 0 || lead == mover {
        let mut extended = overhang.to_vec();
        extended.extend_from_slice(word.letters());
        let lead = if extended.is_empty() { 0 } else { mover };
        return Some((lead, extended));
    }
    // The mover is behind: its word must match the fixed overhang.
    let common = word.len().min(overhang.len());
    if word.letters()[..common] != overhang[..common] {
        return None;
    }
    if word.len() <= overhang.len() {
        let rest = overhang[word.len()..].to_vec();
        Some((if rest.is_empty() { 0 } else { lead }, rest))
    } else {
        Some((mover, word.letters()[overhang.len()..].to_vec()))
    }
}

/// Breadth-first search over two copies reading one shared input. The copy
/// that is behind on the input moves; at level either may. With
/// `require_differ` the output tracks may split (nonfunctionality); otherwise
/// an output mismatch discards the edge (common pair).
///
/// Cycle requirements: an accepting state of the second copy, input
/// consumption, and output production by each copy as needed; anchors are
/// configurations whose first copy is accepting (and, for `require_differ`,
/// whose outputs have already split). Overhangs longer than `bound` are
/// pruned.
fn pair_product_search(
    t1: &BuchiTransducer,
    t2: &BuchiTransducer,
    bound: usize,
    require_differ: bool,
) -> Option<(RationalRelationWitness, RationalRelationWitness)> {
    let adj1 = t1.adjacency();
    let adj2 = t2.adjacency();

    let mut graph = Digraph::new(0);
    let mut ids: HashMap<PairConfig, usize> = HashMap::new();
    let mut configs: Vec<PairConfig> = Vec::new();
    let mut queue = VecDeque::new();
    let mut payload: Vec<(u8, usize)> = Vec::new();
    let root = PairConfig {
        states: (t1.initial, t2.initial),
        in_lead: 0,
        in_overhang: Vec::new(),
        out: OutTrack::Agree { lead: 0, overhang: Vec::new() },
    };
    ids.insert(root.clone(), graph.add_node());
    configs.push(root.clone());
    queue.push_back(root);

    while let Some(config) = queue.pop_front() {
        let src = ids[&config];
        let movers: &[u8] = match config.in_lead {
            1 => &[2],
            2 => &[1],
            _ => &[1, 2],
        };
        for &mover in movers {
            let (transitions, adj, from) = if mover == 1 {
                (&t1.transitions, &adj1, config.states.0)
            } else {
                (&t2.transitions, &adj2, config.states.1)
            };
            for &t in &adj[from] {
                let (_, input, output, dst) = &transitions[t];
                let Some((in_lead, in_overhang)) =
                    sync_track(config.in_lead, &config.in_overhang, mover, input)
                else {
                    continue;
                };
                if in_overhang.len() > bound {
                    continue;
                }
                let out = match &config.out {
                    OutTrack::Differ => OutTrack::Differ,
                    OutTrack::Agree { lead, overhang } => {
                        match sync_track(*lead, overhang, mover, output) {
                            Some((lead, overhang)) => {
                                if overhang.len() > bound {
                                    continue;
                                }
                                OutTrack::Agree { lead, overhang }
                            }
                            None if require_differ => OutTrack::Differ,
                            None => continue,
                        }
                    }
                };
                let next = PairConfig {
                    states: if mover == 1 {
                        (*dst, config.states.1)
                    } else {
                        (config.states.0, *dst)
                    },
                    in_lead,
                    in_overhang,
                    out,
                };
                let to = match ids.entry(next.clone()) {
                    Entry::Occupied(o) => *o.get(),
                    Entry::Vacant(v) => {
                        if configs.len() >= PAIR_CONFIG_CAP {
                            continue;
                        }
                        configs.push(next.clone());
                        queue.push_back(next);
                        *v.insert(graph.add_node())
                    }
                };
                let mask = (t2.is_accepting(config.states.1) as u32)
                    | ((!input.is_empty() as u32) << 1)
                    | (((mover == 1 && !output.is_empty()) as u32) << 2)
                    | (((mover == 2 && !output.is_empty()) as u32) << 3);
                let e = graph.add_edge(src, to, mask);
                debug_assert_eq!(e, payload.len());
                payload.push((mover, t));
            }
        }
    }

    // Per closed cycle the copies consume equally much input, and in the
    // agreeing regime produce equally much output, so the mirror bits follow
    // from the required ones there; only a split output needs both.
    let required = if require_differ { 0b1111 } else { 0b0111 };
    let anchors = configs.iter().enumerate().filter(|(_, c)| {
        t1.is_accepting(c.states.0) && (!require_differ || c.out == OutTrack::Differ)
    });
    let (stem, cycle) = graph.find_lasso(0, anchors.map(|(i, _)| i), required)?;

    let extract = |copy: u8, source: &BuchiTransducer| {
        let collect = |edges: &[usize]| {
            let mut input = Vec::new();
            let mut output = Vec::new();
            let mut run = Vec::new();
            for &e in edges {
                let (mover, t) = payload[e];
                if mover != copy {
                    continue;
                }
                let (_, i, o, _) = &source.transitions[t];
                input.extend_from_slice(i.letters());
                output.extend_from_slice(o.letters());
                run.push(t);
            }
            (input, output, run)
        };
        let (stem_in, stem_out, stem_run) = collect(&stem);
        let (cycle_in, cycle_out, cycle_run) = collect(&cycle);
        RationalRelationWitness {
            input: LassoWord::new(
                Word::from_letters(&source.input_alphabet, stem_in),
                Word::from_letters(&source.input_alphabet, cycle_in),
            )
            .expect("cycle consumes input in both copies"),
            output: LassoWord::new(
                Word::from_letters(&source.output_alphabet, stem_out),
                Word::from_letters(&source.output_alphabet, cycle_out),
            )
            .expect("cycle produces output in both copies"),
            stem: stem_run,
            cycle: cycle_run,
        }
    };
    let w1 = extract(1, t1);
    let w2 = extract(2, t2);
    debug_assert!(w1.input.same_word(&w2.input).unwrap());
    debug_assert!(t1.check_witness(&w1).is_ok());
    debug_assert!(t2.check_witness(&w2).is_ok());
    Some((w1, w2))
}
