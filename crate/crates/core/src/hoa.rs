//! Import/export shim for plain Büchi automata in the HOA (Hanoi Omega
//! Automata) format, v1. Symbols are encoded in binary over atomic
//! propositions b0..b{k-1}; the original symbol names travel in a custom
//! `symbols:` header so a round trip preserves the alphabet. The importer
//! handles the matching subset: state-based acceptance `1 Inf(0)`, a
//! single start state, and labels that are conjunctions of AP literals.

use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::nba::BuchiAutomaton;

/// Bits needed to address `n` symbols; 0 for a singleton alphabet.
fn ap_bits(n: usize) -> usize {
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

pub fn export_hoa(a: &BuchiAutomaton) -> String {
    let bits = ap_bits(a.alphabet().names().len());
    let mut out = String::new();
    out.push_str("HOA: v1\n");
    out.push_str(&format!("States: {}\n", a.num_states()));
    out.push_str(&format!("Start: {}\n", a.initial()));
    let aps: Vec<String> = (0..bits).map(|j| format!("\"b{j}\"")).collect();
    out.push_str(&format!("AP: {}{}{}\n", bits, if bits == 0 { "" } else { " " }, aps.join(" ")));
    out.push_str("acc-name: Buchi\n");
    out.push_str("Acceptance: 1 Inf(0)\n");
    out.push_str("properties: trans-labels explicit-labels state-acc\n");
    out.push_str(&format!("symbols: {}\n", a.alphabet().names().join(" ")));
    out.push_str("--BODY--\n");
    for state in 0..a.num_states() {
        let marker = if a.is_accepting(state) { " {0}" } else { "" };
        out.push_str(&format!("State: {} \"{}\"{}\n", state, a.state_names()[state], marker));
        for &(src, sym, dst) in a.transitions() {
            if src == state {
                out.push_str(&format!("[{}] {}\n", label(sym.index(), bits), dst));
            }
        }
    }
    out.push_str("--END--\n");
    out
}

/// The conjunction of AP literals addressing symbol index `s`.
fn label(s: usize, bits: usize) -> String {
    if bits == 0 {
        return "t".into();
    }
    let lits: Vec<String> = (0..bits)
        .map(|j| if s >> j & 1 == 1 { format!("{j}") } else { format!("!{j}") })
        .collect();
    lits.join(" & ")
}

pub fn import_hoa(text: &str) -> Result<BuchiAutomaton> {
    let bad = |msg: &str| Error::Parse(format!("HOA: {msg}"));
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    if lines.next() != Some("HOA: v1") {
        return Err(bad("expected version header HOA: v1"));
    }

    let mut num_states = None;
    let mut start = None;
    let mut ap_count = None;
    let mut acceptance = None;
    let mut symbols: Option<Vec<String>> = None;
    let mut line = lines.next();
    while let Some(l) = line {
        if l == "--BODY--" {
            break;
        }
        let (key, value) = l.split_once(':').ok_or_else(|| bad("header line lacks a colon"))?;
        let value = value.trim();
        match key.trim() {
            "States" => {
                num_states =
                    Some(value.parse::<usize>().map_err(|_| bad("unreadable States count"))?)
            }
            "Start" => {
                if start.is_some() {
                    return Err(bad("multiple start states are unsupported"));
                }
                start = Some(value.parse::<usize>().map_err(|_| bad("unreadable Start state"))?);
            }
            "AP" => {
                let count = value.split_whitespace().next().unwrap_or("");
                ap_count = Some(count.parse::<usize>().map_err(|_| bad("unreadable AP count"))?);
            }
            "Acceptance" => acceptance = Some(value.split_whitespace().collect::<Vec<_>>().join(" ")),
            "symbols" => symbols = Some(value.split_whitespace().map(String::from).collect()),
            _ => {} // acc-name, properties, tool and other annotations
        }
        line = lines.next();
    }
    if line != Some("--BODY--") {
        return Err(bad("missing --BODY--"));
    }
    if acceptance.as_deref() != Some("1 Inf(0)") {
        return Err(bad("only the Büchi condition 1 Inf(0) is supported"));
    }
    let num_states = num_states.ok_or_else(|| bad("missing States header"))?;
    let start = start.ok_or_else(|| bad("missing Start header"))?;
    let bits = ap_count.ok_or_else(|| bad("missing AP header"))?;
    let names = match symbols {
        Some(names) => names,
        None => (0..1usize << bits).map(|i| format!("s{i}")).collect(),
    };
    if ap_bits(names.len().max(1)) > bits {
        return Err(bad("more symbols than the propositions can address"));
    }
    let alphabet = Arc::new(Alphabet::new(names)?);

    let mut state_names = vec![None; num_states];
    let mut accepting = Vec::new();
    let mut transitions = Vec::new();
    let mut current = None;
    let mut ended = false;
    for l in lines {
        if l == "--END--" {
            ended = true;
            break;
        }
        if let Some(rest) = l.strip_prefix("State:") {
            let (id, name, is_accepting) = parse_state_line(rest.trim())?;
            if id >= num_states {
                return Err(bad("state id beyond the declared count"));
            }
            if state_names[id].is_some() {
                return Err(bad("state declared twice"));
            }
            state_names[id] = Some(name.unwrap_or_else(|| id.to_string()));
            if is_accepting {
                accepting.push(id);
            }
            current = Some(id);
        } else {
            let src = current.ok_or_else(|| bad("edge before any State line"))?;
            let (expr, dst) = parse_edge_line(l)?;
            for v in expand_label(&expr, bits)? {
                if v >= alphabet.names().len() {
                    return Err(bad("label covers a valuation with no symbol"));
                }
                transitions.push((src, alphabet.symbols().nth(v).unwrap(), dst));
            }
        }
    }
    if !ended {
        return Err(bad("missing --END--"));
    }
    let state_names = state_names
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| bad("a declared state has no State line"))?;
    BuchiAutomaton::new(alphabet, state_names, start, accepting, transitions)
}

/// Parses `<id> ["name"] [{acc-sets}]` after a `State:` keyword.
fn parse_state_line(rest: &str) -> Result<(usize, Option<String>, bool)> {
    let bad = |msg: &str| Error::Parse(format!("HOA: {msg}"));
    if rest.starts_with('[') {
        return Err(bad("state labels are unsupported"));
    }
    let mut tail = rest;
    let mut accepting = false;
    if let Some(open) = tail.find('{') {
        let close = tail.find('}').ok_or_else(|| bad("unterminated acceptance sets"))?;
        let sets = &tail[open + 1..close];
        accepting = sets.split_whitespace().any(|s| s == "0");
        tail = tail[..open].trim_end();
    }
    let mut name = None;
    if let Some(open) = tail.find('"') {
        let close = tail.rfind('"').filter(|&c| c > open).ok_or_else(|| bad("unterminated state name"))?;
        name = Some(tail[open + 1..close].to_string());
        tail = tail[..open].trim_end();
    }
    let id = tail.trim().parse::<usize>().map_err(|_| bad("unreadable state id"))?;
    Ok((id, name, accepting))
}

/// Parses `[expr] <dst>`, rejecting edge acceptance sets.
fn parse_edge_line(l: &str) -> Result<(String, usize)> {
    let bad = |msg: &str| Error::Parse(format!("HOA: {msg}"));
    let rest = l.strip_prefix('[').ok_or_else(|| bad("edge line lacks a label"))?;
    let (expr, rest) = rest.split_once(']').ok_or_else(|| bad("unterminated label"))?;
    let rest = rest.trim();
    if rest.contains('{') {
        return Err(bad("transition acceptance is unsupported"));
    }
    let dst = rest.parse::<usize>().map_err(|_| bad("unreadable edge target"))?;
    Ok((expr.to_string(), dst))
}

/// The symbol indices covered by a conjunction of AP literals; `t` covers
/// everything. Disjunctions and grouping are out of the supported subset.
fn expand_label(expr: &str, bits: usize) -> Result<Vec<usize>> {
    let bad = |msg: &str| Error::Parse(format!("HOA: {msg}"));
    if expr.contains('|') || expr.contains('(') {
        return Err(bad("only conjunctions of literals are supported"));
    }
    let expr = expr.trim();
    let mut fixed_ones = 0usize;
    let mut fixed_mask = 0usize;
    if expr != "t" {
        for atom in expr.split('&') {
            let atom = atom.trim();
            let (negated, ap) = match atom.strip_prefix('!') {
                Some(ap) => (true, ap.trim()),
                None => (false, atom),
            };
            let j = ap.parse::<usize>().map_err(|_| bad("unreadable proposition"))?;
            if j >= bits {
                return Err(bad("proposition beyond the AP count"));
            }
            if fixed_mask >> j & 1 == 1 && (fixed_ones >> j & 1 == 1) == negated {
                return Ok(Vec::new()); // contradictory literals: empty label
            }
            fixed_mask |= 1 << j;
            if !negated {
                fixed_ones |= 1 << j;
            }
        }
    }
    let free: Vec<usize> = (0..bits).filter(|j| fixed_mask >> j & 1 == 0).collect();
    let mut covered = Vec::new();
    for choice in 0..1usize << free.len() {
        let mut v = fixed_ones;
        for (pos, &j) in free.iter().enumerate() {
            if choice >> pos & 1 == 1 {
                v |= 1 << j;
            }
        }
        covered.push(v);
    }
    covered.sort_unstable();
    Ok(covered)
}
