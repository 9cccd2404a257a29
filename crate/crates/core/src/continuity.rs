//! Continuity analysis for functional transducers under the prefix metric,
//! where two words at distance `2^{-l}` share exactly `l` leading letters.
//! Continuity at a point is probed through a decidable ball-mapping test;
//! for the instance-derived relay functions a nearby-point generator turns
//! an inconclusive probe into certified discontinuity evidence.

use std::collections::HashMap;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};
use crate::lasso::LassoWord;
use crate::nba::BuchiAutomaton;
use crate::pcp::PcpRegInstance;
use crate::reductions::pcp_to_function_f;
use crate::transducer::BuchiTransducer;

/// Number of leading letters on which the two words agree, or `None` when
/// they denote the same word, so that their distance is `2^{-l}` for the
/// returned `l`.
pub fn prefix_distance_exponent(u: &LassoWord, v: &LassoWord) -> Result<Option<usize>> {
    u.first_difference(v)
}

/// Open ball `B(center, 2^{-k})` in the prefix metric: the words sharing
/// the center's first `k + 1` letters.
#[derive(Debug, Clone)]
pub struct BallPrefix {
    center: LassoWord,
    radius_exponent: usize,
}

impl BallPrefix {
    /// The radius exponent must be positive.
    pub fn new(center: LassoWord, radius_exponent: usize) -> Result<BallPrefix> {
        if radius_exponent == 0 {
            return Err(Error::InvalidArgument("ball radius exponent must be positive".into()));
        }
        Ok(BallPrefix { center, radius_exponent })
    }

    pub fn center(&self) -> &LassoWord {
        &self.center
    }

    pub fn radius_exponent(&self) -> usize {
        self.radius_exponent
    }

    /// The prefix shared by the ball's members, of length `k + 1`.
    pub fn prefix(&self) -> Word {
        self.center.prefix_word(self.radius_exponent + 1)
    }

    /// Whether `w` lies in the ball.
    pub fn contains(&self, w: &LassoWord) -> Result<bool> {
        match prefix_distance_exponent(&self.center, w)? {
            None => Ok(true),
            Some(l) => Ok(l > self.radius_exponent),
        }
    }
}

/// The value of the (promised functional) `t` at `x`, or `None` off the
/// domain.
fn value_at(t: &BuchiTransducer, x: &LassoWord) -> Result<Option<LassoWord>> {
    match t.apply_lasso(x) {
        Ok(fx) => Ok(Some(fx)),
        Err(Error::NotInDomain) => Ok(None),
        Err(e) => Err(e),
    }
}

/// The ball-mapping test behind the probe: `x` lies in the domain of the
/// (promised functional) `t` and the image of `B(x, 2^{-k}) ∩ Dom` is
/// contained in `B(t(x), 2^{-n})`. Decided exactly: the transducer is
/// restricted to inputs extending `x`'s first `k + 1` letters and the test
/// holds when the restricted image has a single length-`n + 1` prefix,
/// necessarily that of the value at `x`.
pub fn xkn_test(t: &BuchiTransducer, x: &LassoWord, k: usize, n: usize) -> Result<bool> {
    check_exponents(k, n)?;
    match value_at(t, x)? {
        Some(fx) => xkn_with(t, x, &fx, k, n, &mut HashMap::new()),
        None => Ok(false),
    }
}

fn check_exponents(k: usize, n: usize) -> Result<()> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument("ball and target exponents must be positive".into()));
    }
    Ok(())
}

/// `xkn_test` with the value at `x` precomputed and the restricted image
/// automata cached per ball exponent, for sweeps over `(k, n)` grids.
fn xkn_with(
    t: &BuchiTransducer,
    x: &LassoWord,
    fx: &LassoWord,
    k: usize,
    n: usize,
    images: &mut HashMap<usize, BuchiAutomaton>,
) -> Result<bool> {
    check_exponents(k, n)?;
    if !images.contains_key(&k) {
        let restricted = t.restrict_input_prefix(&x.prefix_word(k + 1))?;
        images.insert(k, restricted.image_automaton().trimmed());
    }
    let prefixes = images[&k].prefixes(n + 1)?;
    Ok(prefixes.len() == 1 && prefixes.contains(&fx.prefix_word(n + 1)))
}

/// Outcome of bounded continuity probing at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContinuityVerdict {
    /// Every depth `n ≤ depth` was certified; `witness_k` maps each depth
    /// to the first ball exponent whose test succeeded.
    ContinuousUpTo { depth: usize, witness_k: Vec<(usize, usize)> },
    /// A nearby-point generator certified failure: every ball around the
    /// center contains a point whose value differs from the center's
    /// within the first `failing_n + 1` letters, `witness` being the one
    /// found at exponent `k_max`. `certified` keeps the depths that
    /// passed before the probe gave up.
    DiscontinuityEvidence {
        failing_n: usize,
        witness: LassoWord,
        certified: Vec<(usize, usize)>,
        k_max: usize,
    },
    /// Depth `failing_n` exhausted the ball exponents up to `k_max`
    /// without a verdict; exhaustion alone is not a disproof.
    Unknown { failing_n: usize, certified: Vec<(usize, usize)>, k_max: usize },
}

/// Probes continuity of the (promised functional) `t` at `x` for depths
/// `1..=depth`, searching ball exponents `1..=k_max` at each depth. A
/// ball that works at one depth works at every smaller depth, so each
/// search resumes from the previous success and the recorded exponents
/// are nondecreasing.
pub fn continuity_probe(
    t: &BuchiTransducer,
    x: &LassoWord,
    depth: usize,
    k_max: usize,
) -> Result<ContinuityVerdict> {
    check_exponents(k_max, depth)?;
    let fx = value_at(t, x)?.ok_or(Error::NotInDomain)?;
    let mut images = HashMap::new();
    let mut certified = Vec::new();
    let mut k_from = 1;
    for n in 1..=depth {
        let mut found = None;
        for k in k_from..=k_max {
            if xkn_with(t, x, &fx, k, n, &mut images)? {
                found = Some(k);
                break;
            }
        }
        match found {
            Some(k) => {
                certified.push((n, k));
                k_from = k;
            }
            None => return Ok(ContinuityVerdict::Unknown { failing_n: n, certified, k_max }),
        }
    }
    Ok(ContinuityVerdict::ContinuousUpTo { depth, witness_k: certified })
}

/// For `t_f` the relay function of `inst` and a domain point `x` whose
/// index projection is not a solution, returns a point of the opposite
/// branch sharing the first `k + 1` letters with `x`, together with the
/// position where the two values first differ. The position does not
/// depend on `k` (both values relay the same index projection), so the
/// returned pair certifies discontinuity at that depth.
pub fn f_discontinuity_witness(
    inst: &PcpRegInstance,
    t_f: &BuchiTransducer,
    x: &LassoWord,
    k: usize,
) -> Result<(LassoWord, usize)> {
    if k == 0 {
        return Err(Error::InvalidArgument("ball exponent must be positive".into()));
    }
    if *t_f != pcp_to_function_f(inst) {
        return Err(Error::Precondition(
            "the transducer is not the relay function of the instance".into(),
        ));
    }
    let fx = value_at(t_f, x)?.ok_or(Error::NotInDomain)?;
    let sigma = index_projection(inst, x)?;
    if inst.verify_solution(&sigma)? {
        return Err(Error::SolutionPoint);
    }
    let y = flip_branch(t_f.input_alphabet(), x, k)?;
    let fy = t_f.apply_lasso(&y)?;
    let n = fx
        .first_difference(&fy)?
        .expect("the branches relay different concatenations of a non-solution");
    Ok((y, n))
}

/// The index letters of `x`, as a word over the instance's index alphabet.
fn index_projection(inst: &PcpRegInstance, x: &LassoWord) -> Result<LassoWord> {
    let idx = inst.index_alphabet();
    let project =
        |w: &Word| w.names().iter().filter_map(|name| idx.symbol(name)).collect::<Vec<_>>();
    let prefix = Word::from_letters(idx, project(x.prefix()));
    let cycle = Word::from_letters(idx, project(x.cycle()));
    // domain points carry infinitely many indices
    LassoWord::new(prefix, cycle)
}

/// Keeps the first `k + 1` letters and every index letter of `x`, and
/// rewrites the later `a`/`b` slots to the opposite branch's letter
/// profile: all `b` when `x` sees `a` infinitely often, alternating
/// `a`, `b` otherwise (doubling the cycle when its slot count is odd, so
/// the alternation stays periodic).
fn flip_branch(alphabet: &Arc<Alphabet>, x: &LassoWord, k: usize) -> Result<LassoWord> {
    let a = alphabet.expect_symbol("a")?;
    let b = alphabet.expect_symbol("b")?;
    let keep = k + 1;
    let unroll = x.prefix().len().max(keep);
    let mut prefix: Vec<Symbol> = (0..unroll).map(|i| x.letter_at(i)).collect();
    let mut cycle: Vec<Symbol> =
        (unroll..unroll + x.cycle().len()).map(|i| x.letter_at(i)).collect();
    let to_x_branch = !cycle.contains(&a);
    let slots = |w: &[Symbol]| w.iter().filter(|&&s| s == a || s == b).count();
    if to_x_branch && slots(&cycle) % 2 == 1 {
        cycle.extend_from_within(..);
    }
    let mut parity = 0;
    let mut flip = |s: &mut Symbol| {
        if *s == a || *s == b {
            parity += 1;
            *s = if to_x_branch && parity % 2 == 1 { a } else { b };
        }
    };
    prefix[keep..].iter_mut().for_each(&mut flip);
    cycle.iter_mut().for_each(&mut flip);
    LassoWord::new(Word::from_letters(alphabet, prefix), Word::from_letters(alphabet, cycle))
}

/// Runs `continuity_probe` and, when a depth exhausts its ball budget,
/// asks the branch-flip generator to certify the failure. Points whose
/// index projection solves the instance stay `Unknown`: they are genuine
/// continuity points that merely exceeded the budget.
pub fn probe_with_witness(
    inst: &PcpRegInstance,
    t_f: &BuchiTransducer,
    x: &LassoWord,
    depth: usize,
    k_max: usize,
) -> Result<ContinuityVerdict> {
    let verdict = continuity_probe(t_f, x, depth, k_max)?;
    let ContinuityVerdict::Unknown { failing_n, certified, k_max } = verdict else {
        return Ok(verdict);
    };
    match f_discontinuity_witness(inst, t_f, x, k_max) {
        Ok((witness, n)) => {
            debug_assert!(n >= failing_n, "depths below the probe failure were certified");
            Ok(ContinuityVerdict::DiscontinuityEvidence {
                failing_n: n,
                witness,
                certified,
                k_max,
            })
        }
        Err(Error::SolutionPoint) => Ok(ContinuityVerdict::Unknown { failing_n, certified, k_max }),
        Err(e) => Err(e),
    }
}
