//! The infinite Post correspondence problem relative to a regular constraint.
//!
//! An instance pairs two lists of nonempty words over `Γ` with a [`BuchiAutomaton`]
//! over the index alphabet `{1..n}`. A solution is an infinite index sequence
//! accepted by the constraint along which both concatenations spell the same
//! infinite word. Solvability is not semi-decidable in general, so
//! [`search_lasso_solution`](PcpRegInstance::search_lasso_solution) is a bounded
//! search: it is complete for ultimately periodic solutions whose overhang stays
//! within the given bound and never claims unsolvability beyond that.

use std::collections::HashMap;
use std::sync::Arc;

use crate::alphabet::{same_alphabet, Alphabet, Symbol, Word};
use crate::error::{Error, Result};
use crate::lasso::LassoWord;
use crate::nba::BuchiAutomaton;

/// Hard cap on overhang configurations, independent of the caller's bound.
const CONFIG_CAP: usize = 1 << 20;

/// The alphabet `{"1", ..., "n"}` used to index word pairs.
pub fn index_alphabet(n: usize) -> Result<Arc<Alphabet>> {
    if n == 0 {
        return Err(Error::InvalidInstance("an instance needs at least one word pair".into()));
    }
    Ok(Arc::new(Alphabet::new((1..=n).map(|i| i.to_string()))?))
}

/// An instance of the correspondence problem under a regular constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcpRegInstance {
    x_words: Vec<Word>,
    y_words: Vec<Word>,
    constraint: BuchiAutomaton,
}

/// Outcome of a bounded solution search.
///
/// `bound_hits` counts edges discarded because the overhang would exceed the
/// bound: zero means the configuration graph was exhausted and no ultimately
/// periodic solution of any overhang exists, while a positive count leaves
/// solvability open. `truncated` flags the defensive cap on configuration
/// count, which likewise makes an absent solution inconclusive.
#[derive(Debug, Clone)]
pub struct PcpSearch {
    pub solution: Option<LassoWord>,
    pub bound_hits: usize,
    pub explored: usize,
    pub truncated: bool,
}

/// One verification conjunct outcome, used to report which clause failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionCheck {
    Holds,
    ConstraintRejected,
    /// The two concatenations first differ at this position (0-based).
    WordsDiffer { position: usize },
}

impl PcpRegInstance {
    /// Builds an instance, checking that both lists have the same nonzero
    /// length, all words are nonempty over one shared alphabet, and the
    /// constraint runs over exactly the index alphabet `{1..n}`.
    pub fn new(
        x_words: Vec<Word>,
        y_words: Vec<Word>,
        constraint: BuchiAutomaton,
    ) -> Result<Self> {
        if x_words.is_empty() {
            return Err(Error::InvalidInstance("an instance needs at least one word pair".into()));
        }
        if x_words.len() != y_words.len() {
            return Err(Error::InvalidInstance(format!(
                "{} x-words but {} y-words",
                x_words.len(),
                y_words.len()
            )));
        }
        let gamma = x_words[0].alphabet();
        for (side, words) in [("x", &x_words), ("y", &y_words)] {
            for (i, w) in words.iter().enumerate() {
                same_alphabet(gamma, w.alphabet(), "instance word list")?;
                if w.is_empty() {
                    return Err(Error::InvalidInstance(format!(
                        "{}_{} is empty; all instance words must be nonempty",
                        side,
                        i + 1
                    )));
                }
            }
        }
        let indices = index_alphabet(x_words.len())?;
        if constraint.alphabet().names() != indices.names() {
            return Err(Error::InvalidInstance(format!(
                "constraint alphabet {:?} is not the index alphabet {:?}",
                constraint.alphabet().names(),
                indices.names()
            )));
        }
        Ok(PcpRegInstance { x_words, y_words, constraint })
    }

    pub fn x_words(&self) -> &[Word] {
        &self.x_words
    }

    pub fn y_words(&self) -> &[Word] {
        &self.y_words
    }

    pub fn constraint(&self) -> &BuchiAutomaton {
        &self.constraint
    }

    /// Number of word pairs `n`.
    pub fn num_pairs(&self) -> usize {
        self.x_words.len()
    }

    /// The word alphabet `Γ` shared by every listed word.
    pub fn word_alphabet(&self) -> &Arc<Alphabet> {
        self.x_words[0].alphabet()
    }

    /// The index alphabet `{1..n}` of the constraint.
    pub fn index_alphabet(&self) -> &Arc<Alphabet> {
        self.constraint.alphabet()
    }

    /// Checks each solution conjunct in turn: constraint membership first,
    /// then equality of the two concatenations, reporting the first failing
    /// clause with the earliest differing position.
    pub fn check_solution(&self, sigma: &LassoWord) -> Result<SolutionCheck> {
        if !self.constraint.accepts_lasso(sigma)? {
            return Ok(SolutionCheck::ConstraintRejected);
        }
        let xs = concatenate_indices(&self.x_words, sigma)?;
        let ys = concatenate_indices(&self.y_words, sigma)?;
        Ok(match xs.first_difference(&ys)? {
            None => SolutionCheck::Holds,
            Some(position) => SolutionCheck::WordsDiffer { position },
        })
    }

    /// True iff `sigma` is accepted by the constraint and the x- and
    /// y-concatenations along it denote the same infinite word.
    pub fn verify_solution(&self, sigma: &LassoWord) -> Result<bool> {
        Ok(self.check_solution(sigma)? == SolutionCheck::Holds)
    }

    /// Bounded breadth-first search for an ultimately periodic solution.
    ///
    /// Configurations are (constraint state, which side is ahead, unmatched
    /// overhang of the longer concatenation). Appending pair `i` to both sides
    /// either keeps the two concatenations prefix-compatible, yielding an
    /// edge labelled `i`, or kills the branch. Edges whose overhang would
    /// exceed `overhang_bound` are pruned and counted in `bound_hits`. A
    /// solution is a lasso through the configuration graph that revisits a
    /// configuration via a cycle containing a constraint-accepting state;
    /// every returned lasso satisfies [`verify_solution`](Self::verify_solution)
    /// because both concatenations grow by at least one letter per step and
    /// agree on all their finite prefixes.
    pub fn search_lasso_solution(&self, overhang_bound: usize) -> PcpSearch {
        // side: 0 = level, 1 = x ahead, 2 = y ahead; level iff overhang empty
        type Config = (usize, u8, Vec<Symbol>);

        let constraint_adj = {
            let mut adj: Vec<Vec<(Symbol, usize)>> = vec![Vec::new(); self.constraint.num_states()];
            for &(q, s, q2) in self.constraint.transitions() {
                adj[q].push((s, q2));
            }
            adj
        };

        let start: Config = (self.constraint.initial(), 0, Vec::new());
        let mut ids: HashMap<Config, usize> = HashMap::new();
        let mut configs: Vec<Config> = vec![start.clone()];
        ids.insert(start, 0);
        let mut transitions: Vec<(usize, Symbol, usize)> = Vec::new();
        let mut bound_hits = 0usize;
        let mut truncated = false;

        let mut next = 0usize;
        while next < configs.len() {
            let (state, side, overhang) = configs[next].clone();
            for &(sym, state2) in &constraint_adj[state] {
                let i = sym.index();
                let x_pending = pending(side == 1, &overhang, &self.x_words[i]);
                let y_pending = pending(side == 2, &overhang, &self.y_words[i]);
                let shared = x_pending.len().min(y_pending.len());
                if x_pending[..shared] != y_pending[..shared] {
                    continue;
                }
                let (side2, rest) = if x_pending.len() > y_pending.len() {
                    (1, &x_pending[shared..])
                } else if y_pending.len() > x_pending.len() {
                    (2, &y_pending[shared..])
                } else {
                    (0, &[][..])
                };
                if rest.len() > overhang_bound {
                    bound_hits += 1;
                    continue;
                }
                let target: Config = (state2, side2, rest.to_vec());
                let id = match ids.get(&target) {
                    Some(&id) => id,
                    None if configs.len() >= CONFIG_CAP => {
                        truncated = true;
                        continue;
                    }
                    None => {
                        let id = configs.len();
                        configs.push(target.clone());
                        ids.insert(target, id);
                        id
                    }
                };
                transitions.push((next, sym, id));
            }
            next += 1;
        }

        let explored = configs.len();
        let names = configs
            .iter()
            .map(|(q, side, ov)| {
                let tail: String =
                    ov.iter().map(|&s| self.word_alphabet().name(s)).collect::<Vec<_>>().join(".");
                format!("({},{}{})", self.constraint.state_names()[*q], ["=", "x:", "y:"][*side as usize], tail)
            })
            .collect();
        let accepting =
            (0..configs.len()).filter(|&c| self.constraint.is_accepting(configs[c].0)).collect();
        let graph = BuchiAutomaton::new(
            self.constraint.alphabet().clone(),
            names,
            0,
            accepting,
            transitions,
        )
        .expect("configuration graph is well formed by construction");
        let solution = graph.accepted_lasso();
        if let Some(s) = &solution {
            debug_assert!(self.verify_solution(s).unwrap());
        }
        PcpSearch { solution, bound_hits, explored, truncated }
    }
}

fn pending(ahead: bool, overhang: &[Symbol], word: &Word) -> Vec<Symbol> {
    let mut p = if ahead { overhang.to_vec() } else { Vec::new() };
    p.extend_from_slice(word.letters());
    p
}

/// Concatenates `words[i]` along the index lasso `sigma`: the prefix is the
/// concatenation over `sigma`'s prefix, the loop over its cycle, normalized.
/// Index symbols are read by name, so `"3"` selects `words[2]`; names outside
/// `1..=words.len()` are out of range.
pub fn concatenate_indices(words: &[Word], sigma: &LassoWord) -> Result<LassoWord> {
    if words.is_empty() {
        return Err(Error::InvalidArgument("cannot concatenate over an empty word list".into()));
    }
    let gamma = words[0].alphabet();
    for w in words {
        same_alphabet(gamma, w.alphabet(), "concatenation word list")?;
    }
    let pick = |indices: &Word| -> Result<Word> {
        let mut out = Word::empty(gamma.clone());
        for &s in indices.letters() {
            let name = indices.alphabet().name(s);
            let i: usize = name
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("index letter {name:?} is not a number")))?;
            if i == 0 || i > words.len() {
                return Err(Error::IndexOutOfRange(i, words.len()));
            }
            out = out.concat(&words[i - 1])?;
        }
        Ok(out)
    };
    LassoWord::new(pick(sigma.prefix())?, pick(sigma.cycle())?)
}
