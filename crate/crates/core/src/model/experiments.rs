//! Finite-`n` experiments comparing the model with its free limit.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{from_free_word, routes::state, to_free_word, JmWord, Letter, Model};
use crate::characters::{transition_measure, YoungDiagram};
use crate::error::{Error, Result};
use crate::free_prob::{
    free_compress, free_mixed_moment, moments, moments_to_cumulants, pow, CumulantSequence,
    FreeLetter, MomentSequence,
};
use crate::partitions::{enumerate_nc, kreweras, max_compatible, AdmissibleDatum, SetPartition};
use crate::scalar::falling_factorial;
use crate::{Cumulants, Moments, Rational};

/// Largest `n` accepted by [`compressed_distribution`].
pub const MAX_COMPRESSED_N: usize = 32;
/// Largest moment order accepted by [`compressed_distribution`].
pub const MAX_COMPRESSED_ORDER: usize = 8;

/// `k = ⌊c(n+1)⌋ − 1`, so that `Tr P = k + 1 = ⌊c(n+1)⌋`.
pub fn cutoff_for(c: &Rational, n: usize) -> Result<usize> {
    if !c.is_positive() || *c > Rational::one() {
        return Err(Error::OutOfRange {
            name: "c",
            reason: format!("{c} is not in (0, 1]"),
        });
    }
    let trace = (c * Rational::from_integer(BigInt::from(n + 1)))
        .floor()
        .to_integer();
    let trace = trace.to_usize().unwrap_or(0);
    if trace == 0 {
        return Err(Error::OutOfRange {
            name: "c",
            reason: format!("c = {c} leaves no slot at n = {n}"),
        });
    }
    Ok(trace - 1)
}

/// The free word `b a` per `PX`, `a` per `X`, with the `a`-position of each
/// letter and the `b`-position of each `PX`.
fn free_layout(letters: &[Letter]) -> Result<(Vec<FreeLetter>, Vec<usize>, Vec<usize>)> {
    if letters.contains(&Letter::P) {
        return Err(Error::InvalidWord("expected letters X and PX only".into()));
    }
    let word = to_free_word(letters);
    let mut a_pos = Vec::new();
    let mut b_pos = Vec::new();
    for (i, l) in word.iter().enumerate() {
        match l {
            FreeLetter::A => a_pos.push(i + 1),
            FreeLetter::B => b_pos.push(i + 1),
        }
    }
    Ok((word, a_pos, b_pos))
}

type PairedPartitions = Rc<Vec<(SetPartition, SetPartition)>>;

thread_local! {
    static NC_ADMISSIBLE: RefCell<HashMap<usize, PairedPartitions>> = RefCell::new(HashMap::new());
}

/// Noncrossing admissible partitions with `J = ∅` paired with their Kreweras complements.
fn noncrossing_admissible(len: usize) -> Result<PairedPartitions> {
    if let Some(hit) = NC_ADMISSIBLE.with(|c| c.borrow().get(&len).cloned()) {
        return Ok(hit);
    }
    let mut out = Vec::new();
    for p in enumerate_nc(len, 1)? {
        if AdmissibleDatum::new(len, Vec::new(), p.clone()).is_err() {
            continue;
        }
        let k = kreweras(&p)?;
        out.push((p, k));
    }
    let out = Rc::new(out);
    NC_ADMISSIBLE.with(|c| c.borrow_mut().insert(len, out.clone()));
    Ok(out)
}

/// `Σ_π tr_p^{|τ|} C_{K(π)}` over noncrossing admissible `π` with `J = ∅`,
/// where `K(π)` is placed on the `a`-letters of the free word and `τ` is
/// the largest partition of the `b`-letters compatible with it.
pub fn limit_moment(letters: &[Letter], cum: &Cumulants, tr_p: &Rational) -> Result<Rational> {
    let (_, a_pos, b_pos) = free_layout(letters)?;
    let mut total = Rational::zero();
    for (_, k) in noncrossing_admissible(letters.len())?.iter() {
        let mut term = Rational::one();
        for block in k.blocks() {
            let kb = cum.get(block.len()).ok_or(Error::TooLarge {
                what: "block size",
                value: block.len(),
                limit: cum.len(),
            })?;
            term *= kb.clone();
        }
        if term.is_zero() {
            continue;
        }
        let placed = SetPartition::new(
            k.blocks()
                .iter()
                .map(|b| b.iter().map(|&x| a_pos[x - 1]).collect())
                .collect(),
        )?;
        let tau = max_compatible(&b_pos, &placed)?;
        total += term * pow(tr_p, tau.num_blocks());
    }
    Ok(total)
}

/// Comparison of `S` (blocks of `π` meeting a `PX` position) with `|τ|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockIdentification {
    pub word: Vec<Letter>,
    pub checked: usize,
    pub matches: usize,
    pub counterexample: Option<String>,
}

impl BlockIdentification {
    pub fn holds(&self) -> bool {
        self.matches == self.checked
    }
}

pub fn kreweras_block_identification(letters: &[Letter]) -> Result<BlockIdentification> {
    let (_, a_pos, b_pos) = free_layout(letters)?;
    let mut report = BlockIdentification {
        word: letters.to_vec(),
        checked: 0,
        matches: 0,
        counterexample: None,
    };
    for (p, k) in noncrossing_admissible(letters.len())?.iter() {
        let s = p
            .blocks()
            .iter()
            .filter(|b| b.iter().any(|&x| letters[x - 1] == Letter::PX))
            .count();
        let placed = SetPartition::new(
            k.blocks()
                .iter()
                .map(|b| b.iter().map(|&x| a_pos[x - 1]).collect())
                .collect(),
        )?;
        let tau = max_compatible(&b_pos, &placed)?;
        report.checked += 1;
        if tau.num_blocks() == s {
            report.matches += 1;
        } else if report.counterexample.is_none() {
            report.counterexample = Some(format!("π={p} S={s} |τ|={}", tau.num_blocks()));
        }
    }
    Ok(report)
}

/// One grid point of the counting-factor check.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorRow {
    pub n: usize,
    /// `Tr P = ⌊c(n+1)⌋`.
    pub trace: usize,
    pub ratio: Rational,
    pub target: Rational,
    pub deviation: Rational,
}

/// `(Tr P)_S (n−S)_{|π|−S} / (n)_{|π|}` against `c^S` along `grid`.
pub fn factor_limit_check(
    s: usize,
    blocks: usize,
    c: &Rational,
    grid: &[usize],
) -> Result<Vec<FactorRow>> {
    if s > blocks {
        return Err(Error::OutOfRange {
            name: "S",
            reason: format!("{s} exceeds the number of blocks {blocks}"),
        });
    }
    if grid.is_empty() {
        return Err(Error::OutOfRange {
            name: "grid",
            reason: "empty".into(),
        });
    }
    let target = pow(c, s);
    grid.iter()
        .map(|&n| {
            if n < blocks {
                return Err(Error::OutOfRange {
                    name: "n",
                    reason: format!("{n} is smaller than the number of blocks {blocks}"),
                });
            }
            let trace = cutoff_for(c, n)? + 1;
            let num = falling_factorial(trace, s) * falling_factorial(n - s, blocks - s);
            let ratio = Rational::new(num, falling_factorial(n, blocks));
            let deviation = (&ratio - &target).abs();
            Ok(FactorRow {
                n,
                trace,
                ratio,
                target: target.clone(),
                deviation,
            })
        })
        .collect()
}

/// True when the sequence is strictly decreasing, or identically zero.
pub fn gaps_shrink<G: PartialOrd + Zero>(gaps: &[G]) -> bool {
    gaps.iter().all(|g| g.is_zero()) || gaps.windows(2).all(|w| w[1] < w[0])
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub k: usize,
    pub lambda: YoungDiagram,
    pub tr_p: Rational,
    /// State of the unnormalized word.
    pub exact_value: Rational,
    /// Free target for the unnormalized transition measure.
    pub exact_target: Rational,
    pub normalized_value: f64,
    pub normalized_target: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub word: Vec<Letter>,
    pub c: Rational,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn shrinking(&self) -> bool {
        gaps_shrink(&self.rows.iter().map(|r| r.gap).collect::<Vec<_>>())
    }
}

fn transition_cumulants(d: &YoungDiagram, len: usize) -> Cumulants {
    moments_to_cumulants(&moments(
        &transition_measure(d).to_measure::<Rational>(),
        len,
    ))
}

/// `x / n^{e/2}` in floating point.
fn normalize(x: &Rational, n: usize, e: usize) -> f64 {
    let v = x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN);
    v / (n as f64).powf(e as f64 / 2.0)
}

/// Mixed moments of `X` and `P` along a diagram family against the free
/// target with `tr b = ⌊c(n+1)⌋/(n+1)` and the cumulants of the transition
/// measure. Both sides are homogeneous of degree `#X` in the scale, so the
/// comparison is done on exact unscaled values and normalized at the end.
pub fn convergence_experiment(
    letters: &[Letter],
    family: &[YoungDiagram],
    c: &Rational,
) -> Result<ConvergenceReport> {
    if family.is_empty() {
        return Err(Error::OutOfRange {
            name: "family",
            reason: "empty grid".into(),
        });
    }
    let free_word = to_free_word(letters);
    if from_free_word(&free_word) != letters {
        return Err(Error::InvalidWord("P must be followed by X".into()));
    }
    let mut rows = Vec::new();
    for lambda in family {
        let n = lambda.size();
        let k = cutoff_for(c, n)?;
        let tr_p = Rational::new(BigInt::from(k + 1), BigInt::from(n + 1));
        let word = JmWord::new(letters.to_vec(), k, lambda.clone(), Model::Right)?;
        let exact_value = state::<Rational>(&word)?;
        let cum = transition_cumulants(lambda, free_word.len());
        let exact_target = free_mixed_moment(&free_word, &cum, &tr_p)?.value;
        let e = word.x_count();
        let normalized_value = normalize(&exact_value, n, e);
        let normalized_target = normalize(&exact_target, n, e);
        rows.push(ConvergenceRow {
            n,
            k,
            lambda: lambda.clone(),
            tr_p,
            gap: normalize(&(&exact_value - &exact_target).abs(), n, e),
            exact_value,
            exact_target,
            normalized_value,
            normalized_target,
        });
    }
    Ok(ConvergenceReport {
        word: letters.to_vec(),
        c: c.clone(),
        rows,
    })
}

/// Moments `state((PX)^j) / state(P)`, `j = 1..=len`, of `PXP` in the
/// compressed state.
pub fn compressed_distribution(
    n: usize,
    k: usize,
    diagram: &YoungDiagram,
    len: usize,
) -> Result<Moments> {
    if n > MAX_COMPRESSED_N {
        return Err(Error::TooLarge {
            what: "n",
            value: n,
            limit: MAX_COMPRESSED_N,
        });
    }
    if len > MAX_COMPRESSED_ORDER {
        return Err(Error::TooLarge {
            what: "moment order",
            value: len,
            limit: MAX_COMPRESSED_ORDER,
        });
    }
    if diagram.size() != n {
        return Err(Error::SizeMismatch {
            class: n,
            diagram: diagram.size(),
        });
    }
    let p_state = Rational::new(BigInt::from(k + 1), BigInt::from(n + 1));
    let values = (1..=len)
        .map(|j| {
            let word = JmWord::new(vec![Letter::PX; j], k, diagram.clone(), Model::Right)?;
            Ok(state::<Rational>(&word)? / &p_state)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentSequence::new(values))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompressionRow {
    pub n: usize,
    pub k: usize,
    pub lambda: YoungDiagram,
    pub t: Rational,
    pub compressed: Moments,
    pub free: Moments,
    /// `max_j |compressed_j − free_j| / n^{j/2}`.
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompressionReport {
    pub c: Rational,
    pub rows: Vec<CompressionRow>,
}

impl CompressionReport {
    pub fn shrinking(&self) -> bool {
        gaps_shrink(&self.rows.iter().map(|r| r.gap).collect::<Vec<_>>())
    }
}

/// [`compressed_distribution`] against `free_compress` of the transition
/// moments at `t = Tr P/(n+1)`, for each diagram of `family`.
pub fn compression_comparison(
    family: &[YoungDiagram],
    c: &Rational,
    len: usize,
) -> Result<CompressionReport> {
    if family.is_empty() {
        return Err(Error::OutOfRange {
            name: "family",
            reason: "empty grid".into(),
        });
    }
    let mut rows = Vec::new();
    for lambda in family {
        let n = lambda.size();
        let k = cutoff_for(c, n)?;
        let t = Rational::new(BigInt::from(k + 1), BigInt::from(n + 1));
        let compressed = compressed_distribution(n, k, lambda, len)?;
        let free = free_compress(
            &moments(&transition_measure(lambda).to_measure::<Rational>(), len),
            &t,
        )?;
        let gap = compressed
            .values()
            .iter()
            .zip(free.values())
            .enumerate()
            .map(|(i, (a, b))| normalize(&(a - b).abs(), n, i + 1))
            .fold(0.0, f64::max);
        rows.push(CompressionRow {
            n,
            k,
            lambda: lambda.clone(),
            t,
            compressed,
            free,
            gap,
        });
    }
    Ok(CompressionReport { c: c.clone(), rows })
}

/// Cumulants of the transition measure of `d`, up to order `len`.
pub fn diagram_cumulants(d: &YoungDiagram, len: usize) -> CumulantSequence<Rational> {
    transition_cumulants(d, len)
}
