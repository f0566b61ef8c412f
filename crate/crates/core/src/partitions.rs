//! Set partitions, noncrossing structure, the Kreweras complement, admissible
//! partitions of cyclic index tuples and the conjugacy-class map `h`.
//!
//! Partitions carry their own ground set (any finite set of positive
//! integers), so a partition of the letters of one kind inside a longer word
//! is represented directly by the positions it occupies.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symmetric::Permutation;

/// Largest ground size accepted by [`enumerate_nc`].
pub const MAX_NC_GROUND: usize = 14;

/// A partition of a finite set of positive integers into nonempty blocks.
///
/// Blocks are kept sorted internally and ordered by their least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut blocks = blocks;
        for b in blocks.iter_mut() {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x == 0 {
                    return Err(Error::InvalidPartition("elements must be positive".into()));
                }
                if !seen.insert(x) {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} appears twice"
                    )));
                }
            }
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { blocks })
    }

    /// The one-block partition of `{1..m}`.
    pub fn full(m: usize) -> Self {
        Self::one_block(&(1..=m).collect::<Vec<_>>())
    }

    pub fn one_block(ground: &[usize]) -> Self {
        if ground.is_empty() {
            return SetPartition { blocks: Vec::new() };
        }
        let mut b = ground.to_vec();
        b.sort_unstable();
        SetPartition { blocks: vec![b] }
    }

    pub fn singletons(ground: &[usize]) -> Self {
        let mut blocks: Vec<Vec<usize>> = ground.iter().map(|&x| vec![x]).collect();
        blocks.sort_unstable();
        SetPartition { blocks }
    }

    /// Builds the partition of `ground` whose blocks are the level sets of `labels`.
    pub fn from_labels(ground: &[usize], labels: &[usize]) -> Self {
        let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
        for (&x, &l) in ground.iter().zip(labels) {
            match blocks.iter_mut().find(|(lab, _)| *lab == l) {
                Some((_, b)) => b.push(x),
                None => blocks.push((l, vec![x])),
            }
        }
        SetPartition::new(blocks.into_iter().map(|(_, b)| b).collect())
            .expect("labels give a partition")
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// The union of the blocks, ascending.
    pub fn ground(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        g.sort_unstable();
        g
    }

    pub fn ground_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// True when the ground set is exactly `{1..m}`.
    pub fn is_partition_of(&self, m: usize) -> bool {
        self.ground() == (1..=m).collect::<Vec<_>>()
    }

    /// Index of the block containing `x`.
    pub fn block_index(&self, x: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&x).is_ok())
    }

    pub fn same_block(&self, x: usize, y: usize) -> bool {
        matches!((self.block_index(x), self.block_index(y)), (Some(a), Some(b)) if a == b)
    }

    pub fn min_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Union with a partition of a disjoint ground set.
    pub fn union(&self, other: &SetPartition) -> Result<SetPartition> {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        SetPartition::new(blocks)
    }

    /// Shifts every element of a partition of `{1..m}` cyclically by `shift`.
    pub fn rotate(&self, m: usize, shift: usize) -> SetPartition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&x| (x - 1 + shift) % m + 1).collect())
            .collect();
        SetPartition::new(blocks).expect("rotation preserves partitions")
    }

    /// The permutation whose cycles are the blocks traversed in increasing order.
    fn cycle_permutation(&self, m: usize) -> Permutation {
        Permutation::from_cycles(m, &self.blocks).expect("blocks partition 1..m")
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                format!(
                    "[{}]",
                    b.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "[{}]", blocks.join(","))
    }
}

impl TryFrom<Vec<Vec<usize>>> for SetPartition {
    type Error = Error;

    fn try_from(blocks: Vec<Vec<usize>>) -> Result<Self> {
        SetPartition::new(blocks)
    }
}

impl From<SetPartition> for Vec<Vec<usize>> {
    fn from(p: SetPartition) -> Self {
        p.blocks
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    /// Parses the JSON form `[[1,2],[3,4]]`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("partition {s:?} must be a list of lists")))?;
        let mut blocks = Vec::new();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('[')
                .ok_or_else(|| Error::Parse(format!("expected '[' in {s:?}")))?;
            let end = body
                .find(']')
                .ok_or_else(|| Error::Parse(format!("unclosed block in {s:?}")))?;
            let block = body[..end]
                .split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| {
                    x.parse::<usize>()
                        .map_err(|e| Error::Parse(format!("{x:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
            rest = body[end + 1..]
                .trim_start()
                .trim_start_matches(',')
                .trim_start();
        }
        SetPartition::new(blocks)
    }
}

/// True iff there are no `a < b < c < d` with `a, c` in one block and `b, d` in another.
pub fn is_noncrossing(p: &SetPartition) -> bool {
    let blocks = p.blocks();
    for (i, x) in blocks.iter().enumerate() {
        for y in &blocks[i + 1..] {
            if blocks_cross(x, y) {
                return false;
            }
        }
    }
    true
}

fn blocks_cross(x: &[usize], y: &[usize]) -> bool {
    // x and y cross iff some pair of consecutive elements of x separates y.
    let crosses = |a: &[usize], b: &[usize]| {
        a.windows(2).any(|w| {
            let inside = b.iter().any(|&e| e > w[0] && e < w[1]);
            let outside = b.iter().any(|&e| e < w[0] || e > w[1]);
            inside && outside
        })
    };
    crosses(x, y) || crosses(y, x)
}

/// Every set partition of `ground`, in restricted-growth order.
pub fn all_set_partitions(ground: &[usize]) -> Vec<SetPartition> {
    fn rec(
        ground: &[usize],
        i: usize,
        labels: &mut Vec<usize>,
        max: usize,
        out: &mut Vec<SetPartition>,
    ) {
        if i == ground.len() {
            out.push(SetPartition::from_labels(ground, labels));
            return;
        }
        for l in 0..=max {
            labels.push(l);
            rec(
                ground,
                i + 1,
                labels,
                if l == max { max + 1 } else { max },
                out,
            );
            labels.pop();
        }
    }
    let mut out = Vec::new();
    rec(ground, 0, &mut Vec::new(), 0, &mut out);
    out
}

/// Noncrossing partitions of `ground` with all blocks of size at least `min_block`,
/// in restricted-growth order.
pub fn enumerate_nc_on(ground: &[usize], min_block: usize) -> Vec<SetPartition> {
    struct Block {
        members: Vec<usize>,
        closed: bool,
    }

    fn rec(
        ground: &[usize],
        i: usize,
        blocks: &mut Vec<Block>,
        min_block: usize,
        out: &mut Vec<SetPartition>,
    ) {
        let remaining = ground.len() - i;
        // A closed block can never grow, so it must already be large enough;
        // open blocks need enough remaining points to reach min_block.
        let deficit: usize = blocks
            .iter()
            .filter(|b| !b.closed)
            .map(|b| min_block.saturating_sub(b.members.len()))
            .sum();
        if deficit > remaining {
            return;
        }
        if i == ground.len() {
            out.push(
                SetPartition::new(blocks.iter().map(|b| b.members.clone()).collect()).unwrap(),
            );
            return;
        }
        let x = ground[i];
        for bi in 0..blocks.len() {
            if blocks[bi].closed {
                continue;
            }
            let last = *blocks[bi].members.last().unwrap();
            let to_close: Vec<usize> = (0..blocks.len())
                .filter(|&j| {
                    j != bi && !blocks[j].closed && *blocks[j].members.last().unwrap() > last
                })
                .collect();
            if to_close
                .iter()
                .any(|&j| blocks[j].members.len() < min_block)
            {
                continue;
            }
            for &j in &to_close {
                blocks[j].closed = true;
            }
            blocks[bi].members.push(x);
            rec(ground, i + 1, blocks, min_block, out);
            blocks[bi].members.pop();
            for &j in &to_close {
                blocks[j].closed = false;
            }
        }
        blocks.push(Block {
            members: vec![x],
            closed: false,
        });
        rec(ground, i + 1, blocks, min_block, out);
        blocks.pop();
    }

    let mut out = Vec::new();
    rec(ground, 0, &mut Vec::new(), min_block.max(1), &mut out);
    out
}

/// Noncrossing partitions of `{1..m}` with every block of size at least `min_block`.
pub fn enumerate_nc(m: usize, min_block: usize) -> Result<Vec<SetPartition>> {
    if m == 0 {
        return Err(Error::OutOfRange {
            name: "m",
            reason: "ground size must be positive".into(),
        });
    }
    if m > MAX_NC_GROUND {
        return Err(Error::TooLarge {
            what: "m",
            value: m,
            limit: MAX_NC_GROUND,
        });
    }
    Ok(enumerate_nc_on(&(1..=m).collect::<Vec<_>>(), min_block))
}

/// The Kreweras complement of a noncrossing partition of `{1..m}`.
///
/// The primed point `i'` sits between `i` and `i+1`; the result is the
/// partition of the primed points relabeled `i' ↦ i`. Computed as the
/// cycles of `π⁻¹ ∘ γ` with `γ = (1 2 … m)`.
pub fn kreweras(p: &SetPartition) -> Result<SetPartition> {
    let m = p.ground_size();
    if m == 0 || !p.is_partition_of(m) {
        return Err(Error::InvalidPartition(format!(
            "{p} is not a partition of 1..{m}"
        )));
    }
    if !is_noncrossing(p) {
        return Err(Error::Crossing(p.to_string()));
    }
    let gamma = Permutation::from_cycles(m, &[(1..=m).collect::<Vec<_>>()])?;
    let k = p.cycle_permutation(m).inverse().compose(&gamma)?;
    SetPartition::new(k.cycles())
}

/// The largest partition of `positions` whose union with `p` is noncrossing.
///
/// `positions` and the ground of `p` must be disjoint. Two positions `x < y`
/// share a block exactly when every block of `p` lies entirely inside
/// `(x, y)` or entirely outside `[x, y]`.
pub fn max_compatible(positions: &[usize], p: &SetPartition) -> Result<SetPartition> {
    if positions.iter().any(|&x| p.block_index(x).is_some()) {
        return Err(Error::InvalidPartition(
            "positions overlap the partition's ground".into(),
        ));
    }
    if !is_noncrossing(p) {
        return Err(Error::Crossing(p.to_string()));
    }
    let mut pos = positions.to_vec();
    pos.sort_unstable();
    pos.dedup();
    let separated = |x: usize, y: usize| {
        p.blocks().iter().any(|b| {
            let inside = b.iter().any(|&e| e > x && e < y);
            let outside = b.iter().any(|&e| e < x || e > y);
            inside && outside
        })
    };
    let mut labels: Vec<usize> = (0..pos.len()).collect();
    for i in 0..pos.len() {
        if labels[i] != i {
            continue;
        }
        for j in i + 1..pos.len() {
            if labels[j] == j && !separated(pos[i], pos[j]) {
                labels[j] = i;
            }
        }
    }
    Ok(SetPartition::from_labels(&pos, &labels))
}

/// A set `J` of zero positions in a cyclic word of length `k` together with a
/// partition of the remaining positions, no block of which contains two
/// cyclically adjacent positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleDatum {
    k: usize,
    zeros: Vec<usize>,
    partition: SetPartition,
}

fn cyclic_successor(i: usize, k: usize) -> usize {
    i % k + 1
}

impl AdmissibleDatum {
    pub fn new(k: usize, zeros: Vec<usize>, partition: SetPartition) -> Result<Self> {
        if k == 0 {
            return Err(Error::NotAdmissible("word length must be positive".into()));
        }
        let mut zeros = zeros;
        zeros.sort_unstable();
        zeros.dedup();
        if zeros.iter().any(|&z| z == 0 || z > k) {
            return Err(Error::NotAdmissible(format!(
                "zero positions {zeros:?} outside 1..{k}"
            )));
        }
        let complement: Vec<usize> = (1..=k)
            .filter(|x| zeros.binary_search(x).is_err())
            .collect();
        if partition.ground() != complement {
            return Err(Error::NotAdmissible(format!(
                "{partition} does not partition the nonzero positions {complement:?}"
            )));
        }
        for &i in &complement {
            let j = cyclic_successor(i, k);
            if partition.same_block(i, j) {
                return Err(Error::NotAdmissible(format!(
                    "positions {i} and {j} are cyclically adjacent in {partition}"
                )));
            }
        }
        Ok(AdmissibleDatum {
            k,
            zeros,
            partition,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn zeros(&self) -> &[usize] {
        &self.zeros
    }

    pub fn partition(&self) -> &SetPartition {
        &self.partition
    }

    /// True when no two zero positions are cyclically adjacent, i.e. the
    /// datum actually arises from a tuple with `i_r ≠ i_{r+1}`.
    pub fn is_realizable(&self) -> bool {
        self.zeros.iter().all(|&z| {
            self.zeros
                .binary_search(&cyclic_successor(z, self.k))
                .is_err()
        })
    }

    /// Canonical index tuple: 0 on `J`, otherwise the block number (from 1)
    /// in order of first appearance.
    pub fn canonical_labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.k];
        for (b, block) in self.partition.blocks().iter().enumerate() {
            for &x in block {
                labels[x - 1] = b + 1;
            }
        }
        labels
    }
}

/// The product `(i_1,i_2)(i_2,i_3)⋯(i_k,i_1)` in `S_degree`, where a factor
/// with a zero index contributes the identity.
pub fn transposition_chain(labels: &[usize], degree: usize) -> Result<Permutation> {
    let mut p = Permutation::identity(degree);
    // Multiply from the right end so each step is a left multiplication.
    for r in (0..labels.len()).rev() {
        let (a, b) = (labels[r], labels[(r + 1) % labels.len()]);
        if a == 0 || b == 0 || a == b {
            continue;
        }
        if a > degree || b > degree {
            return Err(Error::OutOfRange {
                name: "index",
                reason: format!("({a},{b}) outside 1..{degree}"),
            });
        }
        p.left_transpose(a, b);
    }
    Ok(p)
}

/// Canonical representative of `h(π)`, in `S_max(|π|,1)`.
pub fn h_class(d: &AdmissibleDatum) -> Permutation {
    let degree = d.partition.num_blocks().max(1);
    transposition_chain(&d.canonical_labels(), degree).expect("canonical labels fit their degree")
}

/// Cycle type of `h(π)` padded with fixpoints to `degree`.
pub fn h_cycle_type(d: &AdmissibleDatum, degree: usize) -> Result<Vec<usize>> {
    let p = h_class(d);
    Ok(p.embed(degree.max(p.degree()))?.cycle_type())
}

pub fn h_length(d: &AdmissibleDatum) -> usize {
    h_class(d).reduced_length()
}

/// All subsets of `{1..k}`, by increasing bitmask.
pub fn subsets(k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << k))
        .map(|mask| (1..=k).filter(|i| mask & (1 << (i - 1)) != 0).collect())
        .collect()
}

/// All admissible partitions of `{1..k} ∖ zeros`.
pub fn admissible_partitions(k: usize, zeros: &[usize]) -> Vec<AdmissibleDatum> {
    let complement: Vec<usize> = (1..=k).filter(|x| !zeros.contains(x)).collect();
    all_set_partitions(&complement)
        .into_iter()
        .filter_map(|p| AdmissibleDatum::new(k, zeros.to_vec(), p).ok())
        .collect()
}

/// Outcome of an exhaustive combinatorial check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub k: usize,
    pub checked: usize,
    pub holds: bool,
    /// Smallest observed `|h(π)| - (2|π| - k)` over the family.
    pub min_gap: Option<i64>,
    pub counterexample: Option<String>,
}

fn bound_report<'a, I: IntoIterator<Item = &'a AdmissibleDatum>>(
    k: usize,
    family: I,
) -> BoundReport {
    let mut report = BoundReport {
        k,
        checked: 0,
        holds: true,
        min_gap: None,
        counterexample: None,
    };
    for d in family {
        let gap = h_length(d) as i64 - (2 * d.partition.num_blocks() as i64 - k as i64);
        report.checked += 1;
        report.min_gap = Some(report.min_gap.map_or(gap, |g| g.min(gap)));
        if gap < 0 && report.holds {
            report.holds = false;
            report.counterexample = Some(format!("J={:?} π={}", d.zeros, d.partition));
        }
    }
    report
}

/// `|h(π)| ≥ 2|π| − k` for every crossing admissible `π` with `J = ∅`.
pub fn check_crossing_bound(k: usize) -> BoundReport {
    let family: Vec<_> = admissible_partitions(k, &[])
        .into_iter()
        .filter(|d| !is_noncrossing(&d.partition))
        .collect();
    bound_report(k, &family)
}

/// `|h(π)| ≥ 2|π| − k` for every admissible datum with `J ≠ ∅`.
///
/// Zero sets with cyclically adjacent positions are included although they
/// never occur in a tuple sum.
pub fn check_zero_set_bound(k: usize) -> BoundReport {
    let family: Vec<_> = subsets(k)
        .into_iter()
        .filter(|j| !j.is_empty())
        .flat_map(|j| admissible_partitions(k, &j))
        .collect();
    bound_report(k, &family)
}

/// For `J = ∅` and noncrossing admissible `π`: the cycles of `h(π)` other
/// than one extra fixpoint have lengths `|B| − 1` over the blocks `B` of
/// `K(π)`, and `|h(π)| = k − 2|K(π)|`.
pub fn check_kreweras_cycles(k: usize) -> BoundReport {
    let mut report = BoundReport {
        k,
        checked: 0,
        holds: true,
        min_gap: None,
        counterexample: None,
    };
    let Ok(ncs) = enumerate_nc(k, 1) else {
        return report;
    };
    for p in ncs {
        let Ok(d) = AdmissibleDatum::new(k, Vec::new(), p.clone()) else {
            continue;
        };
        let kr = kreweras(&p).expect("noncrossing input");
        let mut expected: Vec<usize> = kr.blocks().iter().map(|b| b.len() - 1).collect();
        expected.push(1);
        expected.sort_unstable_by(|a, b| b.cmp(a));
        let cycles = h_class(&d).cycle_type();
        let length_ok = h_length(&d) as i64 == k as i64 - 2 * kr.num_blocks() as i64;
        report.checked += 1;
        if (cycles != expected || !length_ok) && report.holds {
            report.holds = false;
            report.counterexample = Some(format!("π={p} K(π)={kr} cycles={cycles:?}"));
        }
    }
    report
}
