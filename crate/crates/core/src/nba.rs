//! Nondeterministic Büchi automata on infinite words.
//!
//! A [`BuchiAutomaton`] is a finite set of states with single-letter
//! transitions, one initial state and a set of accepting states. A run on an
//! infinite word is accepting when it visits an accepting state infinitely
//! often; the automaton may be nondeterministic and the transition relation
//! may be partial. States carry printable names; products and trims retain
//! composed names so that witnesses stay readable.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use crate::alphabet::{same_alphabet, Alphabet, Symbol, Word};
use crate::graph::Digraph;
use crate::lasso::LassoWord;
use crate::{Error, Result};

/// Dense state identifier assigned at construction.
pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiAutomaton {
    alphabet: Arc<Alphabet>,
    state_names: Vec<String>,
    initial: StateId,
    accepting: Vec<StateId>,
    transitions: Vec<(StateId, Symbol, StateId)>,
}

impl BuchiAutomaton {
    /// Builds an automaton, validating that the initial state, accepting set
    /// and transition endpoints all refer to declared states and alphabet
    /// symbols. The transition set and the accepting set are stored sorted
    /// and deduplicated.
    pub fn new(
        alphabet: Arc<Alphabet>,
        state_names: Vec<String>,
        initial: StateId,
        accepting: Vec<StateId>,
        transitions: Vec<(StateId, Symbol, StateId)>,
    ) -> Result<BuchiAutomaton> {
        let n = state_names.len();
        if n == 0 {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        for (i, name) in state_names.iter().enumerate() {
            if state_names[..i].contains(name) {
                return Err(Error::InvalidAutomaton(format!("duplicate state name `{name}`")));
            }
        }
        if initial >= n {
            return Err(Error::InvalidAutomaton(format!("initial state {initial} out of range")));
        }
        let mut accepting = accepting;
        accepting.sort_unstable();
        accepting.dedup();
        if let Some(&s) = accepting.iter().find(|s| **s >= n) {
            return Err(Error::InvalidAutomaton(format!("accepting state {s} out of range")));
        }
        let mut transitions = transitions;
        transitions.sort_unstable();
        transitions.dedup();
        for &(src, sym, dst) in &transitions {
            if src >= n || dst >= n {
                return Err(Error::InvalidAutomaton(format!(
                    "transition ({src}, {}, {dst}) out of range",
                    sym.index()
                )));
            }
            if !alphabet.contains(sym) {
                return Err(Error::InvalidAutomaton(format!(
                    "transition symbol #{} not in alphabet",
                    sym.index()
                )));
            }
        }
        Ok(BuchiAutomaton { alphabet, state_names, initial, accepting, transitions })
    }

    /// One accepting state looping on every letter; accepts every word.
    pub fn universal(alphabet: Arc<Alphabet>) -> BuchiAutomaton {
        let transitions = alphabet.symbols().map(|a| (0, a, 0)).collect();
        BuchiAutomaton::new(alphabet, vec!["q0".into()], 0, vec![0], transitions)
            .expect("universal automaton is valid")
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
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

    /// Transitions in stored (sorted) order.
    pub fn transitions(&self) -> &[(StateId, Symbol, StateId)] {
        &self.transitions
    }

    fn adjacency(&self) -> Vec<Vec<(Symbol, StateId)>> {
        let mut adj = vec![Vec::new(); self.num_states()];
        for &(src, sym, dst) in &self.transitions {
            adj[src].push((sym, dst));
        }
        adj
    }

    /// States reachable by reading `word` from the initial state.
    fn states_after(&self, word: &Word, adj: &[Vec<(Symbol, StateId)>]) -> Vec<bool> {
        let mut current = vec![false; self.num_states()];
        current[self.initial] = true;
        for &letter in word.letters() {
            let mut next = vec![false; self.num_states()];
            for (s, _) in current.iter().enumerate().filter(|(_, on)| **on) {
                for &(sym, dst) in &adj[s] {
                    if sym == letter {
                        next[dst] = true;
                    }
                }
            }
            current = next;
        }
        current
    }

    /// Membership of the ultimately periodic word `w` in the language.
    ///
    /// Decided on the product of the automaton with the lasso shape of `w`:
    /// the word is accepted exactly when, after reading the prefix, some
    /// product node with an accepting state lies on a reachable cycle.
    pub fn accepts_lasso(&self, w: &LassoWord) -> Result<bool> {
        same_alphabet(&self.alphabet, w.alphabet(), "automaton vs lasso word")?;
        let adj = self.adjacency();
        let after_prefix = self.states_after(w.prefix(), &adj);
        let period = w.cycle().len();
        let cycle = w.cycle().letters();
        let n = self.num_states();

        // Product nodes (state, cycle position); one extra virtual start node.
        let start = n * period;
        let mut g = Digraph::new(start + 1);
        for s in 0..n {
            for j in 0..period {
                for &(sym, dst) in &adj[s] {
                    if sym == cycle[j] {
                        g.add_edge(s * period + j, dst * period + (j + 1) % period, 0);
                    }
                }
            }
        }
        for (s, _) in after_prefix.iter().enumerate().filter(|(_, on)| **on) {
            g.add_edge(start, s * period, 0);
        }
        let anchors = (0..n * period).filter(|id| self.is_accepting(id / period));
        Ok(g.find_lasso(start, anchors, 0).is_some())
    }

    /// Some accepted lasso word, or `None` when the language is empty.
    ///
    /// Searches forward reachability and then, per accepting state in id
    /// order, a shortest cycle back to it, so the witness is reproducible.
    /// Any returned word satisfies [`BuchiAutomaton::accepts_lasso`].
    pub fn accepted_lasso(&self) -> Option<LassoWord> {
        let mut g = Digraph::new(self.num_states());
        for &(src, _, dst) in &self.transitions {
            g.add_edge(src, dst, 0);
        }
        let (stem, cycle) = g.find_lasso(self.initial, self.accepting.iter().copied(), 0)?;
        let word = |edges: &[usize]| {
            let letters = edges.iter().map(|&e| self.transitions[e].1).collect();
            Word::from_letters(&self.alphabet, letters)
        };
        Some(LassoWord::new(word(&stem), word(&cycle)).expect("cycle is non-empty"))
    }

    pub fn is_empty_language(&self) -> bool {
        self.accepted_lasso().is_none()
    }

    /// Intersection via the standard two-phase product: phase 0 waits for an
    /// accepting state of `self`, phase 1 for one of `other`, and the product
    /// accepts at phase-1 nodes whose second coordinate accepts. At most
    /// `|self| · |other| · 2` states; only reachable ones are constructed.
    pub fn intersection(&self, other: &BuchiAutomaton) -> Result<BuchiAutomaton> {
        same_alphabet(&self.alphabet, &other.alphabet, "automaton intersection")?;
        let adj1 = self.adjacency();
        let adj2 = other.adjacency();

        let mut ids: HashMap<(StateId, StateId, u8), StateId> = HashMap::new();
        let mut nodes: Vec<(StateId, StateId, u8)> = Vec::new();
        let mut queue = VecDeque::new();
        let root = (self.initial, other.initial, 0u8);
        ids.insert(root, 0);
        nodes.push(root);
        queue.push_back(root);
        let mut transitions = Vec::new();

        while let Some((q1, q2, phase)) = queue.pop_front() {
            let src = ids[&(q1, q2, phase)];
            let next_phase = match phase {
                0 if self.is_accepting(q1) => 1,
                1 if other.is_accepting(q2) => 0,
                p => p,
            };
            for &(sym, d1) in &adj1[q1] {
                for &(sym2, d2) in &adj2[q2] {
                    if sym != sym2 {
                        continue;
                    }
                    let key = (d1, d2, next_phase);
                    let dst = *ids.entry(key).or_insert_with(|| {
                        nodes.push(key);
                        queue.push_back(key);
                        nodes.len() - 1
                    });
                    transitions.push((src, sym, dst));
                }
            }
        }

        let state_names = nodes
            .iter()
            .map(|(q1, q2, p)| {
                format!("({},{},{p})", self.state_names[*q1], other.state_names[*q2])
            })
            .collect();
        let accepting = nodes
            .iter()
            .enumerate()
            .filter(|(_, (_, q2, p))| *p == 1 && other.is_accepting(*q2))
            .map(|(i, _)| i)
            .collect();
        BuchiAutomaton::new(Arc::clone(&self.alphabet), state_names, 0, accepting, transitions)
    }

    /// Removes states that are unreachable or cannot reach an accepting
    /// cycle; the language is unchanged. When the language is empty the
    /// result keeps only the initial state and has no transitions.
    pub fn trimmed(&self) -> BuchiAutomaton {
        let mut g = Digraph::new(self.num_states());
        for &(src, _, dst) in &self.transitions {
            g.add_edge(src, dst, 0);
        }
        let (reachable, _) = g.reachable(self.initial);

        // Accepting states on a reachable cycle.
        let cyclic: Vec<StateId> = self
            .accepting
            .iter()
            .copied()
            .filter(|&f| reachable[f] && g.find_lasso(f, [f], 0).is_some())
            .collect();

        // Backward reachability from those anchors.
        let mut live = vec![false; self.num_states()];
        let mut back = vec![Vec::new(); self.num_states()];
        for &(src, _, dst) in &self.transitions {
            back[dst].push(src);
        }
        let mut queue: VecDeque<StateId> = VecDeque::new();
        for &f in &cyclic {
            live[f] = true;
            queue.push_back(f);
        }
        while let Some(s) = queue.pop_front() {
            for &p in &back[s] {
                if !live[p] {
                    live[p] = true;
                    queue.push_back(p);
                }
            }
        }

        let keep: Vec<StateId> =
            (0..self.num_states()).filter(|&s| reachable[s] && live[s]).collect();
        if !keep.contains(&self.initial) {
            return BuchiAutomaton::new(
                Arc::clone(&self.alphabet),
                vec![self.state_names[self.initial].clone()],
                0,
                if self.is_accepting(self.initial) { vec![0] } else { vec![] },
                vec![],
            )
            .expect("single-state automaton is valid");
        }
        let mut renumber = vec![usize::MAX; self.num_states()];
        for (new, &old) in keep.iter().enumerate() {
            renumber[old] = new;
        }
        let transitions = self
            .transitions
            .iter()
            .filter(|(src, _, dst)| renumber[*src] != usize::MAX && renumber[*dst] != usize::MAX)
            .map(|&(src, sym, dst)| (renumber[src], sym, renumber[dst]))
            .collect();
        BuchiAutomaton::new(
            Arc::clone(&self.alphabet),
            keep.iter().map(|&s| self.state_names[s].clone()).collect(),
            renumber[self.initial],
            self.accepting.iter().filter(|&&f| renumber[f] != usize::MAX).map(|&f| renumber[f]).collect(),
            transitions,
        )
        .expect("trimming preserves validity")
    }

    /// The set of length-`m` prefixes of words in the language, by path
    /// enumeration through the trimmed automaton. `m` must be positive.
    pub fn prefixes(&self, m: usize) -> Result<BTreeSet<Word>> {
        if m == 0 {
            return Err(Error::InvalidArgument("prefix length must be positive".into()));
        }
        let trimmed = self.trimmed();
        let adj = trimmed.adjacency();
        let mut level: BTreeMap<Vec<Symbol>, BTreeSet<StateId>> = BTreeMap::new();
        level.insert(Vec::new(), BTreeSet::from([trimmed.initial]));
        for _ in 0..m {
            let mut next: BTreeMap<Vec<Symbol>, BTreeSet<StateId>> = BTreeMap::new();
            for (word, states) in &level {
                for &s in states {
                    for &(sym, dst) in &adj[s] {
                        let mut w = word.clone();
                        w.push(sym);
                        next.entry(w).or_default().insert(dst);
                    }
                }
            }
            level = next;
        }
        Ok(level.into_keys().map(|w| Word::from_letters(&self.alphabet, w)).collect())
    }
}
