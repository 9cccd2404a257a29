//! Constructions connecting machines, correspondence instances, and
//! transducers.
//!
//! Four builders and one decoder:
//!
//! * [`tm_to_pcpreg`]: recurring computations of a Turing machine as
//!   solutions of a constrained correspondence instance;
//! * [`decode_pcp_solution`]: reads a solution of that instance back into a
//!   legal machine run;
//! * [`pcp_to_transducer_pair`]: an instance as two rational relations whose
//!   intersection mirrors its solutions;
//! * [`pcp_to_function_F`]: an instance as a functional transducer whose
//!   continuity behavior mirrors its solutions;
//! * [`pcp_to_function_Fprime`]: the same with a finite marker block in
//!   front, tying continuity at marked points to a fixed three-pair
//!   correspondence gadget over `{c, d}`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};
use crate::graph::advance_phase;
use crate::lasso::LassoWord;
use crate::nba::BuchiAutomaton;
use crate::pcp::{index_alphabet, PcpRegInstance};
use crate::tm::{Move, TmConfiguration, TmRunLasso, TuringMachine};
use crate::transducer::BuchiTransducer;

/// Letter names used by the machine encoding: every tape symbol keeps its
/// name; state names and the separator are primed until distinct.
struct Encoding {
    alphabet: Arc<Alphabet>,
    state_syms: Vec<Symbol>,
    hash: Symbol,
}

fn encoding(m: &TuringMachine) -> Encoding {
    let mut names: Vec<String> = m.tape_alphabet().names().to_vec();
    let add = |names: &mut Vec<String>, base: &str| {
        let mut name = base.to_string();
        while names.contains(&name) {
            name.push('\'');
        }
        names.push(name);
    };
    for s in m.state_names() {
        add(&mut names, s);
    }
    add(&mut names, "#");
    let alphabet = Arc::new(Alphabet::new(names).expect("names made distinct above"));
    let syms: Vec<Symbol> = alphabet.symbols().collect();
    let tape_len = m.tape_alphabet().len();
    let state_syms = syms[tape_len..tape_len + m.state_names().len()].to_vec();
    let hash = syms[alphabet.len() - 1];
    Encoding { alphabet, state_syms, hash }
}

/// Encodes a machine as a correspondence instance whose solutions under the
/// constraint "starts with index 1, infinitely many indices from E" spell
/// exactly the `#`-separated configuration sequences of runs that reenter
/// the initial state forever. E is the set of pair indices whose y-word
/// mentions the initial state.
pub fn tm_to_pcpreg(m: &TuringMachine) -> PcpRegInstance {
    let enc = encoding(m);
    let q = |s: usize| enc.state_syms[s];
    let t = |s: Symbol| {
        enc.alphabet.expect_symbol(m.tape_alphabet().name(s)).expect("tape names preserved")
    };
    let word = |letters: Vec<Symbol>| Word::new(Arc::clone(&enc.alphabet), letters).unwrap();

    let mut x: Vec<Word> = Vec::new();
    let mut y: Vec<Word> = Vec::new();
    let mut pair = |xs: Vec<Symbol>, ys: Vec<Symbol>| {
        x.push(word(xs));
        y.push(word(ys));
    };

    let q0 = q(m.initial());
    pair(vec![enc.hash], vec![enc.hash, q0, enc.hash]);
    pair(vec![enc.hash], vec![enc.hash]);
    let tape_syms: Vec<Symbol> = m.tape_alphabet().symbols().collect();
    for &a in &tape_syms {
        let a = t(a);
        pair(vec![a], vec![a]);
    }
    for r in m.rules().iter().filter(|r| r.movement == Move::Stay) {
        pair(vec![q(r.state), t(r.read)], vec![q(r.next_state), t(r.write)]);
    }
    for r in m.rules().iter().filter(|r| r.movement == Move::Right) {
        pair(vec![q(r.state), t(r.read)], vec![t(r.write), q(r.next_state)]);
    }
    for r in m.rules().iter().filter(|r| r.movement == Move::Left) {
        for &c in &tape_syms {
            let c = t(c);
            pair(vec![c, q(r.state), t(r.read)], vec![q(r.next_state), c, t(r.write)]);
        }
    }
    let blank_rules = |mv: Move| m.rules().iter().filter(move |r| r.movement == mv && r.read == m.blank());
    for r in blank_rules(Move::Right) {
        pair(vec![q(r.state), enc.hash], vec![t(r.write), q(r.next_state), enc.hash]);
    }
    for r in blank_rules(Move::Left) {
        for &c in &tape_syms {
            let c = t(c);
            pair(
                vec![c, q(r.state), enc.hash],
                vec![q(r.next_state), c, t(r.write), enc.hash],
            );
        }
    }
    for r in blank_rules(Move::Stay) {
        pair(vec![q(r.state), enc.hash], vec![q(r.next_state), t(r.write), enc.hash]);
    }

    let in_e: Vec<bool> = y.iter().map(|w| w.letters().contains(&q0)).collect();
    let constraint = recurrence_constraint(&in_e);
    PcpRegInstance::new(x, y, constraint).expect("encoding is well formed by construction")
}

/// Deterministic three-state automaton over `{1..n}` accepting index words
/// that start with 1 and contain infinitely many indices from the flagged
/// set.
fn recurrence_constraint(in_e: &[bool]) -> BuchiAutomaton {
    let idx = index_alphabet(in_e.len()).expect("at least the two fixed pairs exist");
    let syms: Vec<Symbol> = idx.symbols().collect();
    let layer = |i: usize| if in_e[i] { 1 } else { 2 };
    let mut transitions = vec![(0, syms[0], layer(0))];
    for from in [1, 2] {
        for (i, &sym) in syms.iter().enumerate() {
            transitions.push((from, sym, layer(i)));
        }
    }
    BuchiAutomaton::new(
        idx,
        vec!["start".into(), "inE".into(), "notE".into()],
        0,
        vec![1],
        transitions,
    )
    .unwrap()
}

/// Reads a verified solution of [`tm_to_pcpreg`]`(m)` back into the machine
/// run it spells: the common infinite word is split at `#` separators, each
/// block is parsed as a configuration (state symbol immediately left of the
/// scanned cell), and the ultimately periodic block sequence is folded into
/// a stem and cycle. The result is checked to be a legal run from the blank
/// tape that revisits the initial state in its cycle; any parse or legality
/// failure reports a malformed solution, since a verified sigma can only
/// produce one through a bug in the encoding.
pub fn decode_pcp_solution(m: &TuringMachine, sigma: &LassoWord) -> Result<TmRunLasso> {
    let inst = tm_to_pcpreg(m);
    if !inst.verify_solution(sigma)? {
        return Err(Error::Precondition(
            "sigma does not solve the instance encoding the machine".into(),
        ));
    }
    let enc = encoding(m);
    let w = crate::pcp::concatenate_indices(inst.y_words(), sigma)?;
    if w.cycle().letters().iter().all(|&s| s != enc.hash) {
        return Err(Error::MalformedSolution("periodic part contains no separator".into()));
    }
    if w.letter_at(0) != enc.hash {
        return Err(Error::MalformedSolution("solution word does not start with #".into()));
    }

    let prefix_len = w.prefix().len();
    let cycle_len = w.cycle().len();
    let canon = |p: usize| if p < prefix_len { p } else { prefix_len + (p - prefix_len) % cycle_len };

    let parse_block = |letters: &[Symbol]| -> Result<TmConfiguration> {
        let mut state = None;
        let mut tape = Vec::new();
        let mut head = None;
        for &s in letters {
            if let Some(q) = enc.state_syms.iter().position(|&t| t == s) {
                if state.replace(q).is_some() {
                    return Err(Error::MalformedSolution(
                        "configuration block contains two state symbols".into(),
                    ));
                }
                head = Some(tape.len());
            } else {
                tape.push(m.tape_alphabet().expect_symbol(enc.alphabet.name(s))?);
            }
        }
        match (state, head) {
            (Some(q), Some(h)) => {
                m.configuration(q, &Word::new(Arc::clone(m.tape_alphabet()), tape)?, h)
            }
            _ => Err(Error::MalformedSolution("configuration block has no state symbol".into())),
        }
    };

    let mut configs: Vec<TmConfiguration> = Vec::new();
    let mut starts: HashMap<usize, usize> = HashMap::new();
    let mut pos = 1usize;
    let (stem_len, cycle_start) = loop {
        let key = canon(pos);
        if let Some(&first) = starts.get(&key) {
            break (first, first);
        }
        starts.insert(key, configs.len());
        let mut letters = Vec::new();
        while w.letter_at(pos) != enc.hash {
            letters.push(w.letter_at(pos));
            pos += 1;
            if letters.len() > prefix_len + cycle_len {
                return Err(Error::MalformedSolution("unterminated configuration block".into()));
            }
        }
        pos += 1;
        configs.push(parse_block(&letters)?);
    };

    let cycle = configs.split_off(cycle_start);
    debug_assert_eq!(configs.len(), stem_len);
    let run = TmRunLasso { stem: configs, cycle };
    m.check_run_lasso(&run)
        .map_err(|e| Error::MalformedSolution(format!("decoded run is not legal: {e}")))?;
    Ok(run)
}

/// Splits an instance into two transducers over (index word, concatenation):
/// the first attaches `x_i`, the second `y_i`, to every constraint
/// transition reading index `i`. Their relations intersect exactly at the
/// instance's solutions paired with the common concatenation.
pub fn pcp_to_transducer_pair(inst: &PcpRegInstance) -> (BuchiTransducer, BuchiTransducer) {
    let side = |words: &[Word]| {
        let a = inst.constraint();
        let transitions = a
            .transitions()
            .iter()
            .map(|&(q, s, q2)| {
                let input = Word::new(Arc::clone(inst.index_alphabet()), vec![s]).unwrap();
                (q, input, words[s.index()].clone(), q2)
            })
            .collect();
        BuchiTransducer::new(
            Arc::clone(inst.index_alphabet()),
            Arc::clone(inst.word_alphabet()),
            a.state_names().to_vec(),
            a.initial(),
            a.accepting().to_vec(),
            transitions,
        )
        .expect("constraint shape carries over")
    };
    (side(inst.x_words()), side(inst.y_words()))
}

/// Tagged transducer description prior to degeneralization: transitions
/// carry a bitmask of generalized acceptance conditions.
struct Tagged {
    input_alphabet: Arc<Alphabet>,
    output_alphabet: Arc<Alphabet>,
    state_names: Vec<String>,
    initial: usize,
    transitions: Vec<(usize, Word, Word, usize, u32)>,
}

/// Standard counter construction: states become (state, phase) with the
/// phase advanced by each edge's condition tags; the full-count phase is
/// accepting. Only the reachable part is kept.
fn degeneralize(t: Tagged, conds: usize) -> BuchiTransducer {
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); t.state_names.len()];
    for (i, tr) in t.transitions.iter().enumerate() {
        by_source[tr.0].push(i);
    }
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut nodes = vec![(t.initial, 0usize)];
    ids.insert((t.initial, 0), 0);
    let mut transitions = Vec::new();
    let mut next = 0;
    while next < nodes.len() {
        let (state, phase) = nodes[next];
        for &i in &by_source[state] {
            let (_, ref input, ref output, target, tags) = t.transitions[i];
            let phase2 = advance_phase(phase, tags, conds);
            let key = (target, phase2);
            let id = *ids.entry(key).or_insert_with(|| {
                nodes.push(key);
                nodes.len() - 1
            });
            transitions.push((next, input.clone(), output.clone(), id));
        }
        next += 1;
    }
    let names =
        nodes.iter().map(|(s, p)| format!("({},{})", t.state_names[*s], p)).collect();
    let accepting = (0..nodes.len()).filter(|&n| nodes[n].1 == conds).collect();
    BuchiTransducer::new(t.input_alphabet, t.output_alphabet, names, 0, accepting, transitions)
        .expect("degeneralized machine is well formed")
}

// Condition tags shared by the two function constructions.
const SAW_ACCEPTING_INDEX: u32 = 1;
const SAW_LETTER: u32 = 1 << 1;

/// Appends the two guessed branches shared by the function constructions to
/// `t`, returning the entry states of the X branch and the Y branch.
///
/// Branch X relays the x-words and must see the letter `a` infinitely
/// often; branch Y relays the y-words, guesses the last `a`, and afterwards
/// must see `b` infinitely often. Both demand infinitely many index steps
/// landing on a constraint-accepting state, so a run is accepting exactly
/// when the index projection is constraint-accepted and the letter
/// projection is infinite with the branch's letter profile. The two branch
/// domains are disjoint (infinitely many `a` versus finitely many), which
/// makes every machine built this way functional.
fn push_f_branches(t: &mut Tagged, inst: &PcpRegInstance) -> (usize, usize) {
    let a = inst.constraint();
    let in_alpha = Arc::clone(&t.input_alphabet);
    let out_alpha = Arc::clone(&t.output_alphabet);
    let input = |name: &str| Word::parse(&in_alpha, name).unwrap();
    let output = |w: &Word| {
        let letters = w
            .names()
            .iter()
            .map(|n| out_alpha.expect_symbol(n).expect("output covers instance letters"))
            .collect();
        Word::new(Arc::clone(&out_alpha), letters).unwrap()
    };
    let eps_out = Word::empty(Arc::clone(&out_alpha));

    let base = t.state_names.len();
    let x = |q: usize| base + q;
    let y1 = |q: usize| base + a.num_states() + q;
    let y2 = |q: usize| base + 2 * a.num_states() + q;
    for tag in ["x", "y1", "y2"] {
        for name in a.state_names() {
            t.state_names.push(format!("{tag}:{name}"));
        }
    }

    for &(q, s, q2) in a.transitions() {
        let i = s.index();
        let accepting_step = if a.is_accepting(q2) { SAW_ACCEPTING_INDEX } else { 0 };
        let index_in = input(&format!("{}", i + 1));
        t.transitions.push((x(q), index_in.clone(), output(&inst.x_words()[i]), x(q2), accepting_step));
        t.transitions.push((y1(q), index_in.clone(), output(&inst.y_words()[i]), y1(q2), 0));
        t.transitions.push((y2(q), index_in, output(&inst.y_words()[i]), y2(q2), accepting_step));
    }
    let eps_in = Word::empty(Arc::clone(&t.input_alphabet));
    for q in 0..a.num_states() {
        t.transitions.push((x(q), input("a"), eps_out.clone(), x(q), SAW_LETTER));
        t.transitions.push((x(q), input("b"), eps_out.clone(), x(q), 0));
        t.transitions.push((y1(q), input("a"), eps_out.clone(), y1(q), 0));
        t.transitions.push((y1(q), input("b"), eps_out.clone(), y1(q), 0));
        t.transitions.push((y1(q), eps_in.clone(), eps_out.clone(), y2(q), 0));
        t.transitions.push((y2(q), input("b"), eps_out.clone(), y2(q), SAW_LETTER));
    }
    (x(a.initial()), y1(a.initial()))
}

fn function_input_alphabet(inst: &PcpRegInstance, extra: &[&str]) -> Arc<Alphabet> {
    let mut names = inst.index_alphabet().names().to_vec();
    names.push("a".into());
    names.push("b".into());
    names.extend(extra.iter().map(|s| s.to_string()));
    Arc::new(Alphabet::new(names).expect("index names are numeric"))
}

/// Realizes an instance as a functional transducer. Inputs interleave
/// indices with letters `a`/`b`; the output relays the x-words when `a`
/// occurs infinitely often and the y-words otherwise, so the instance's
/// solutions are exactly the points where the two clauses agree.
pub fn pcp_to_function_f(inst: &PcpRegInstance) -> BuchiTransducer {
    let mut t = Tagged {
        input_alphabet: function_input_alphabet(inst, &[]),
        output_alphabet: Arc::clone(inst.word_alphabet()),
        state_names: vec!["guess".into()],
        initial: 0,
        transitions: Vec::new(),
    };
    let (x_entry, y_entry) = push_f_branches(&mut t, inst);
    let eps_in = Word::empty(Arc::clone(&t.input_alphabet));
    let eps_out = Word::empty(Arc::clone(&t.output_alphabet));
    t.transitions.push((0, eps_in.clone(), eps_out.clone(), x_entry, 0));
    t.transitions.push((0, eps_in, eps_out, y_entry, 0));
    degeneralize(t, 2)
}

/// The three marker letters accepted in front of the core function.
pub const MARKER_LETTERS: [&str; 3] = ["d1", "d2", "d3"];

/// Per-marker output words of the two branches, over `{c, d}`: the X branch
/// emits `cc`, `d`, `d` and the Y branch `c`, `c`, `dd`. The primitive index
/// sequences equalizing the two concatenations are `1^i 2^i 3^i` and
/// `3^i 2^i 1^i`; every equalizing sequence is a concatenation of these.
pub const MARKER_OUTPUTS_X: [&str; 3] = ["cc", "d", "d"];
pub const MARKER_OUTPUTS_Y: [&str; 3] = ["c", "c", "dd"];

/// Variant of [`pcp_to_function_f`] that first reads a nonempty finite
/// block of marker letters `d1 d2 d3`, emitting the fixed gadget words
/// `t_j` (X branch) or `w_j` (Y branch) over fresh output letters `{c, d}`,
/// then behaves exactly as the core function. Continuity at a marked point
/// therefore also demands that the marker block equalize the gadget
/// concatenations.
pub fn pcp_to_function_fprime(inst: &PcpRegInstance) -> BuchiTransducer {
    let mut out_names = inst.word_alphabet().names().to_vec();
    let fresh = |base: &str, names: &mut Vec<String>| {
        let mut name = base.to_string();
        while names.contains(&name) {
            name.push('\'');
        }
        names.push(name.clone());
        name
    };
    let c_name = fresh("c", &mut out_names);
    let d_name = fresh("d", &mut out_names);
    let output_alphabet = Arc::new(Alphabet::new(out_names).expect("made distinct above"));

    let mut t = Tagged {
        input_alphabet: function_input_alphabet(inst, &MARKER_LETTERS),
        output_alphabet,
        state_names: vec!["guess".into(), "dx".into(), "dy".into()],
        initial: 0,
        transitions: Vec::new(),
    };
    let out_alpha = Arc::clone(&t.output_alphabet);
    let gadget = |spec: &str| {
        let letters = spec
            .chars()
            .map(|ch| out_alpha.expect_symbol(if ch == 'c' { &c_name } else { &d_name }).unwrap())
            .collect();
        Word::new(Arc::clone(&out_alpha), letters).unwrap()
    };
    for (j, marker) in MARKER_LETTERS.iter().enumerate() {
        let m_in = Word::parse(&t.input_alphabet, marker).unwrap();
        let (tx, wy) = (gadget(MARKER_OUTPUTS_X[j]), gadget(MARKER_OUTPUTS_Y[j]));
        for from in [0, 1] {
            t.transitions.push((from, m_in.clone(), tx.clone(), 1, 0));
        }
        for from in [0, 2] {
            t.transitions.push((from, m_in.clone(), wy.clone(), 2, 0));
        }
    }
    let (x_entry, y_entry) = push_f_branches(&mut t, inst);
    let eps_in = Word::empty(Arc::clone(&t.input_alphabet));
    let eps_out = Word::empty(Arc::clone(&t.output_alphabet));
    t.transitions.push((1, eps_in.clone(), eps_out.clone(), x_entry, 0));
    t.transitions.push((2, eps_in, eps_out, y_entry, 0));
    degeneralize(t, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::tm::TmRule;

    fn tape_alpha() -> Arc<Alphabet> {
        Alphabet::shared(["_", "X"])
    }

    fn machine(states: &[&str], rules: &[(&str, &str, &str, &str, Move)]) -> TuringMachine {
        let tape = tape_alpha();
        let idx = |n: &str| states.iter().position(|s| *s == n).unwrap();
        let rules = rules
            .iter()
            .map(|(from, read, to, write, movement)| TmRule {
                state: idx(from),
                read: tape.expect_symbol(read).unwrap(),
                next_state: idx(to),
                write: tape.expect_symbol(write).unwrap(),
                movement: *movement,
            })
            .collect();
        TuringMachine::new(
            states.iter().map(|s| s.to_string()).collect(),
            Alphabet::shared(["X"]),
            tape.clone(),
            tape.expect_symbol("_").unwrap(),
            0,
            rules,
        )
        .unwrap()
    }

    fn m_rec() -> TuringMachine {
        machine(
            &["q0", "q1"],
            &[
                ("q0", "_", "q1", "X", Move::Stay),
                ("q1", "X", "q0", "X", Move::Stay),
                ("q0", "X", "q1", "X", Move::Stay),
            ],
        )
    }

    fn m_halt() -> TuringMachine {
        machine(&["q0"], &[])
    }

    fn m_right() -> TuringMachine {
        machine(&["q0"], &[("q0", "_", "q0", "X", Move::Right)])
    }

    fn i1() -> PcpRegInstance {
        let g = Alphabet::shared(["a", "b"]);
        PcpRegInstance::new(
            vec![Word::parse(&g, "ab").unwrap(), Word::parse(&g, "b").unwrap()],
            vec![Word::parse(&g, "a").unwrap(), Word::parse(&g, "bb").unwrap()],
            BuchiAutomaton::universal(index_alphabet(2).unwrap()),
        )
        .unwrap()
    }

    fn word_list(words: &[Word]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn machine_encoding_lists_the_expected_pairs() {
        let inst = tm_to_pcpreg(&m_rec());
        assert_eq!(
            word_list(inst.x_words()),
            ["#", "#", "_", "X", "q0._", "q0.X", "q1.X", "q0.#"]
        );
        assert_eq!(
            word_list(inst.y_words()),
            ["#.q0.#", "#", "_", "X", "q1.X", "q1.X", "q0.X", "q1.X.#"]
        );
        // flagged pairs: those whose y-word mentions q0
        let q0 = inst.word_alphabet().expect_symbol("q0").unwrap();
        let flagged: Vec<usize> = inst
            .y_words()
            .iter()
            .enumerate()
            .filter(|(_, w)| w.letters().contains(&q0))
            .map(|(i, _)| i + 1)
            .collect();
        assert_eq!(flagged, [1, 7]);
    }

    #[test]
    fn constraint_requires_leading_one_and_recurrent_flags() {
        let inst = tm_to_pcpreg(&m_rec());
        let idx = inst.index_alphabet();
        let accepts = |text: &str| {
            inst.constraint().accepts_lasso(&LassoWord::parse(idx, text).unwrap()).unwrap()
        };
        assert!(accepts("1(7)"));
        assert!(accepts("(1)"));
        assert!(!accepts("2.1(7)"), "must start with index 1");
        assert!(!accepts("1(2)"), "needs infinitely many flagged indices");
    }

    #[test]
    fn machine_solution_decodes_to_its_recurring_run() {
        let m = m_rec();
        let inst = tm_to_pcpreg(&m);
        let search = inst.search_lasso_solution(12);
        let sigma = search.solution.expect("solution within bound 12");
        assert!(inst.verify_solution(&sigma).unwrap());

        let run = decode_pcp_solution(&m, &sigma).unwrap();
        m.check_run_lasso(&run).unwrap();
        assert!(run.cycle.iter().any(|c| c.state() == 0));
        assert!(run.cycle.iter().all(|c| c.tape().len() == 1));

        // matches the directly searched run up to rotation: same cycle states
        let direct = m.recurring_search(2, 100).lasso.unwrap();
        let mut got: Vec<usize> = run.cycle.iter().map(|c| c.state()).collect();
        let mut want: Vec<usize> = direct.cycle.iter().map(|c| c.state()).collect();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn halting_machine_has_no_solution() {
        let inst = tm_to_pcpreg(&m_halt());
        assert!(inst.search_lasso_solution(12).solution.is_none());
    }

    #[test]
    fn growing_machine_hits_the_bound() {
        let inst = tm_to_pcpreg(&m_right());
        let search = inst.search_lasso_solution(6);
        assert!(search.solution.is_none());
        assert!(search.bound_hits > 0);
    }

    #[test]
    fn decode_rejects_non_solutions() {
        let m = m_rec();
        let inst = tm_to_pcpreg(&m);
        let forged = LassoWord::parse(inst.index_alphabet(), "(2)").unwrap();
        assert!(matches!(decode_pcp_solution(&m, &forged), Err(Error::Precondition(_))));
    }

    #[test]
    fn transducer_pair_relates_indices_to_concatenations() {
        let (t1, t2) = pcp_to_transducer_pair(&i1());
        let idx = index_alphabet(2).unwrap();
        let sigma = LassoWord::parse(&idx, "1(2)").unwrap();
        let gamma = Alphabet::shared(["a", "b"]);
        let out1 = t1.apply_lasso(&sigma).unwrap();
        let out2 = t2.apply_lasso(&sigma).unwrap();
        let expected = LassoWord::parse(&gamma, "a(b)").unwrap();
        assert!(out1.same_word(&expected).unwrap());
        assert!(out2.same_word(&expected).unwrap());
    }

    #[test]
    fn function_relays_the_branch_matching_the_letter_profile() {
        let f = pcp_to_function_f(&i1());
        let delta = f.input_alphabet();
        let gamma = Alphabet::shared(["a", "b"]);

        // infinitely many a: x-side concatenation
        let x_point = LassoWord::parse(delta, "1(2a)").unwrap();
        let fx = f.apply_lasso(&x_point).unwrap();
        assert!(fx.same_word(&LassoWord::parse(&gamma, "ab(b)").unwrap()).unwrap());

        // finitely many a: y-side concatenation
        let y_point = LassoWord::parse(delta, "1a2(2b)").unwrap();
        let fy = f.apply_lasso(&y_point).unwrap();
        assert!(fy.same_word(&LassoWord::parse(&gamma, "a(b)").unwrap()).unwrap());

        // no letters at all: outside the domain
        let bare = LassoWord::parse(delta, "(1)").unwrap();
        assert!(matches!(f.apply_lasso(&bare), Err(Error::NotInDomain)));
        assert!(!f.domain_automaton().accepts_lasso(&bare).unwrap());
    }

    #[test]
    fn marked_function_prepends_the_gadget_words() {
        let fp = pcp_to_function_fprime(&i1());
        let delta = fp.input_alphabet();
        let out = fp.output_alphabet();

        let x_point = LassoWord::parse(delta, "d1.1(2.a)").unwrap();
        let got = fp.apply_lasso(&x_point).unwrap();
        assert!(got.same_word(&LassoWord::parse(out, "c.c.a.b(b)").unwrap()).unwrap());

        let y_point = LassoWord::parse(delta, "d1.1.a.2(2.b)").unwrap();
        let got = fp.apply_lasso(&y_point).unwrap();
        assert!(got.same_word(&LassoWord::parse(out, "c.a(b)").unwrap()).unwrap());

        // the marker block is mandatory
        let unmarked = LassoWord::parse(delta, "1(2.a)").unwrap();
        assert!(matches!(fp.apply_lasso(&unmarked), Err(Error::NotInDomain)));
    }

    #[test]
    fn gadget_concatenations_equalize_exactly_on_the_known_sequences() {
        let concat = |side: [&str; 3], beta: &str| -> String {
            beta.chars().map(|ch| side[ch as usize - '1' as usize]).collect()
        };
        let mut equalizers = Vec::new();
        for len in 1..=6usize {
            let mut stack = vec![String::new()];
            while let Some(s) = stack.pop() {
                if s.len() == len {
                    if concat(MARKER_OUTPUTS_X, &s) == concat(MARKER_OUTPUTS_Y, &s) {
                        equalizers.push(s);
                    }
                    continue;
                }
                for ch in ['1', '2', '3'] {
                    stack.push(format!("{s}{ch}"));
                }
            }
        }
        equalizers.sort();
        // the primitive family 1^i 2^i 3^i / 3^i 2^i 1^i plus its length-6
        // concatenations, since equalizing blocks compose
        assert_eq!(
            equalizers,
            ["112233", "123", "123123", "123321", "321", "321123", "321321", "332211"]
        );
    }
}
