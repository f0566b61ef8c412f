//! Three independent evaluations of the state of a word.
//!
//! * [`state`]: products of the model matrices, then `tr ρ ⊗ tr`.
//! * [`tuple_state`]: the sum over cyclic index tuples of traces of
//!   transposition chains.
//! * [`moment_via_partitions`]: the same sum regrouped by zero set `J` and
//!   admissible partition `π`, with a counting factor per class.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::{JmMatrix, JmWord, Letter, Model, NormalizedWord};
use crate::characters::DiagramTraces;
use crate::error::{Error, Result};
use crate::partitions::{admissible_partitions, h_class, subsets};
use crate::scalar::{falling_factorial, ExactScalar};
use crate::symmetric::{algebra_multiply, GroupAlgebraElement, Permutation};
use crate::Rational;

/// Largest word length accepted by the tuple and partition routes.
pub const MAX_TUPLE_LENGTH: usize = 8;
/// Largest `n` accepted by the tuple and partition routes.
pub const MAX_TUPLE_N: usize = 8;

fn trace_of<T: ExactScalar>(e: &GroupAlgebraElement<T>, traces: &DiagramTraces) -> Result<T> {
    let mut total = T::zero();
    for (p, c) in e.terms() {
        total = total + c.clone() * T::from_rational(&traces.of(p)?);
    }
    Ok(total)
}

/// `(1/(n+1)) Σ_i tr ρ((M_1 ⋯ M_L)_{ii})` for the diagram held by `traces`.
pub fn state_of_product<T: ExactScalar>(
    mats: &[&JmMatrix<T>],
    traces: &DiagramTraces,
) -> Result<T> {
    let Some(first) = mats.first() else {
        return Err(Error::InvalidWord("empty product".into()));
    };
    let n = first.n;
    if traces.diagram().size() != n {
        return Err(Error::SizeMismatch {
            class: n,
            diagram: traces.diagram().size(),
        });
    }
    if let Some(m) = mats.iter().find(|m| m.n != n || m.action != first.action) {
        return Err(Error::DegreeMismatch(n, m.n));
    }
    let opposite = first.action.opposite();
    let dim = n + 1;
    let mut total = T::zero();
    for i in 0..dim {
        // Propagate the i-th row vector through the product; only its i-th
        // entry is needed after the last factor.
        let mut row: Vec<GroupAlgebraElement<T>> = (0..dim)
            .map(|j| {
                if j == i {
                    GroupAlgebraElement::one(n)
                } else {
                    GroupAlgebraElement::zero(n)
                }
            })
            .collect();
        for (idx, m) in mats.iter().enumerate() {
            let targets: Vec<usize> = if idx + 1 == mats.len() {
                vec![i]
            } else {
                (0..dim).collect()
            };
            let mut next = vec![GroupAlgebraElement::zero(n); dim];
            for (l, v) in row.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                for &j in &targets {
                    let e = m.entry(l, j);
                    if e.is_zero() {
                        continue;
                    }
                    next[j].add_assign_ref(&algebra_multiply(v, e, opposite)?)?;
                }
            }
            row = next;
        }
        total = total + trace_of(&row[i], traces)?;
    }
    Ok(total / T::from_int(dim as i64))
}

/// State of a word by multiplying the model matrices.
///
/// Letters are taken as written (no normalization); the result is the
/// unnormalized value for `X`, not `X/√n`.
pub fn state<T: ExactScalar>(word: &JmWord) -> Result<T> {
    let n = word.n;
    let action = word.model.action();
    let x = JmMatrix::<T>::build_x_with(n, action)?;
    let p = match word.model {
        Model::Right => JmMatrix::<T>::build_p(n, word.k)?,
        Model::Left => JmMatrix::<T>::build_q_model(n, word.k)?,
    };
    let px = p.mul(&x)?;
    let mats: Vec<&JmMatrix<T>> = word
        .letters
        .iter()
        .map(|l| match l {
            Letter::X => &x,
            Letter::PX => &px,
            Letter::P => &p,
        })
        .collect();
    state_of_product(&mats, &DiagramTraces::new(word.diagram.clone()))
}

fn check_tuple_limits(word: &JmWord) -> Result<Option<Vec<Letter>>> {
    if word.n > MAX_TUPLE_N {
        return Err(Error::TooLarge {
            what: "n",
            value: word.n,
            limit: MAX_TUPLE_N,
        });
    }
    match word.normalized()? {
        NormalizedWord::Projection => Ok(None),
        NormalizedWord::Word(letters) => {
            if letters.len() > MAX_TUPLE_LENGTH {
                return Err(Error::TooLarge {
                    what: "word length",
                    value: letters.len(),
                    limit: MAX_TUPLE_LENGTH,
                });
            }
            Ok(Some(letters))
        }
    }
}

fn projection_state<T: ExactScalar>(word: &JmWord) -> T {
    T::from_int(word.k as i64 + 1) / T::from_int(word.n as i64 + 1)
}

/// The tuple-sum oracle.
///
/// After normalization to letters over `{X, PX}` of length `L`, sums over
/// `(i_1, …, i_L) ∈ {0..n}^L` with `i_j ≠ i_{j+1}` cyclically and `i_j ≤ k`
/// whenever letter `j` is `PX`, the normalized trace of
/// `(i_1,i_2)(i_2,i_3)⋯(i_L,i_1)` where factors touching index 0 are the
/// identity; divides by `n+1`. Traces are looked up once per cycle type.
pub fn tuple_state<T: ExactScalar>(word: &JmWord) -> Result<T> {
    let Some(letters) = check_tuple_limits(word)? else {
        return Ok(projection_state(word));
    };
    let n = word.n;
    let len = letters.len();
    let bounds: Vec<usize> = letters
        .iter()
        .map(|l| if *l == Letter::PX { word.k } else { n })
        .collect();
    let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
    let mut labels = vec![0usize; len];

    fn rec(
        pos: usize,
        labels: &mut Vec<usize>,
        bounds: &[usize],
        product: &Permutation,
        counts: &mut HashMap<Vec<usize>, u64>,
    ) {
        let len = labels.len();
        if pos == len {
            // closing factor (i_L, i_1)
            let (a, b) = (labels[len - 1], labels[0]);
            if a == b {
                return;
            }
            let mut p = product.clone();
            if a != 0 && b != 0 {
                p.right_transpose(a, b);
            }
            *counts.entry(p.cycle_type()).or_default() += 1;
            return;
        }
        for i in 0..=bounds[pos] {
            if pos > 0 && i == labels[pos - 1] {
                continue;
            }
            labels[pos] = i;
            if pos == 0 {
                rec(1, labels, bounds, product, counts);
            } else {
                let a = labels[pos - 1];
                if a != 0 && i != 0 {
                    let mut p = product.clone();
                    p.right_transpose(a, i);
                    rec(pos + 1, labels, bounds, &p, counts);
                } else {
                    rec(pos + 1, labels, bounds, product, counts);
                }
            }
        }
    }

    rec(
        0,
        &mut labels,
        &bounds,
        &Permutation::identity(n),
        &mut counts,
    );

    let traces = DiagramTraces::new(word.diagram.clone());
    let mut classes: Vec<_> = counts.into_iter().collect();
    classes.sort();
    let mut total = T::zero();
    for (ct, count) in classes {
        total = total + T::from_int(count as i64) * T::from_rational(&traces.of_class(&ct)?);
    }
    Ok(total / T::from_int(n as i64 + 1))
}

/// The tuple sum regrouped by zero set `J` and admissible partition `π`.
///
/// Each class contributes `count · tr ρ(h(π))`, where `count` is the
/// number of injective labelings of the blocks by `{1..n}` in which every
/// block containing a `PX` position gets a label `≤ k`:
/// `(k)_S (n−S)_{|π|−S}` with `S` the number of such blocks. For words
/// without `PX` this is `(n)_{|π|}`. Zero sets with cyclically adjacent
/// positions do not occur since `X` has zero diagonal.
pub fn moment_via_partitions<T: ExactScalar>(word: &JmWord) -> Result<T> {
    let Some(letters) = check_tuple_limits(word)? else {
        return Ok(projection_state(word));
    };
    let n = word.n;
    let len = letters.len();
    let traces = DiagramTraces::new(word.diagram.clone());
    let mut total = T::zero();
    for zeros in subsets(len) {
        for datum in admissible_partitions(len, &zeros) {
            if !datum.is_realizable() {
                continue;
            }
            let blocks = datum.partition().num_blocks();
            if blocks > n {
                continue;
            }
            let constrained = datum
                .partition()
                .blocks()
                .iter()
                .filter(|b| b.iter().any(|&x| letters[x - 1] == Letter::PX))
                .count();
            let count: BigInt = falling_factorial(word.k, constrained)
                * falling_factorial(n - constrained, blocks - constrained);
            if count == BigInt::from(0) {
                continue;
            }
            let h = h_class(&datum);
            let trace = traces.of(&h)?;
            total = total + T::from_rational(&(Rational::from_integer(count) * trace));
        }
    }
    Ok(total / T::from_int(n as i64 + 1))
}
