//! Young diagrams, irreducible characters of symmetric groups and Kerov
//! transition measures.
//!
//! Characters are computed with the Murnaghan–Nakayama rule on beta-sets
//! (abacus positions), so rim-hook removal is a bead move. Once only
//! fixpoints remain the value is the dimension from the hook-length formula.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free_prob::AtomicMeasure;
use crate::scalar::{factorial, format_rational, Scalar};
use crate::symmetric::Permutation;
use crate::Rational;

/// An integer partition drawn as a Young diagram, rows weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct YoungDiagram {
    rows: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        if rows.contains(&0) {
            return Err(Error::InvalidDiagram(format!("{rows:?} has an empty row")));
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidDiagram(format!(
                "{rows:?} is not weakly decreasing"
            )));
        }
        Ok(YoungDiagram { rows })
    }

    pub fn empty() -> Self {
        YoungDiagram { rows: Vec::new() }
    }

    /// The `side × side` square.
    pub fn square(side: usize) -> Self {
        Self::rectangle(side, side)
    }

    /// `num_rows` rows of length `row_len`.
    pub fn rectangle(num_rows: usize, row_len: usize) -> Self {
        if row_len == 0 {
            return Self::empty();
        }
        YoungDiagram {
            rows: vec![row_len; num_rows],
        }
    }

    /// Replaces every box by an `s × s` block of boxes.
    pub fn dilate(&self, s: usize) -> Self {
        if s == 0 {
            return Self::empty();
        }
        YoungDiagram {
            rows: self
                .rows
                .iter()
                .flat_map(|&r| std::iter::repeat_n(r * s, s))
                .collect(),
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Conjugate diagram (column lengths).
    pub fn transpose(&self) -> Self {
        let width = self.rows.first().copied().unwrap_or(0);
        YoungDiagram {
            rows: (0..width)
                .map(|c| self.rows.iter().filter(|&&r| r > c).count())
                .collect(),
        }
    }

    /// Smallest `A` with rows and columns both at most `A·√n`.
    pub fn balance_constant(&self) -> f64 {
        let n = self.size();
        if n == 0 {
            return 0.0;
        }
        let longest = self.rows[0].max(self.rows.len());
        longest as f64 / (n as f64).sqrt()
    }

    /// Hook length of the box in 0-indexed row `i`, column `j`.
    pub fn hook(&self, i: usize, j: usize) -> usize {
        let arm = self.rows[i] - j - 1;
        let leg = self.rows[i + 1..].iter().filter(|&&r| r > j).count();
        arm + leg + 1
    }

    /// `(row, column)` cells, 0-indexed, where a box can be added.
    pub fn addable_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..=self.rows.len() {
            let len = self.rows.get(i).copied().unwrap_or(0);
            if i == 0 || self.rows[i - 1] > len {
                out.push((i, len));
            }
        }
        out
    }

    /// `(row, column)` cells, 0-indexed, whose box can be removed.
    pub fn removable_cells(&self) -> Vec<(usize, usize)> {
        (0..self.rows.len())
            .filter(|&i| i + 1 == self.rows.len() || self.rows[i + 1] < self.rows[i])
            .map(|i| (i, self.rows[i] - 1))
            .collect()
    }

    pub fn with_box(&self, row: usize) -> Result<Self> {
        let mut rows = self.rows.clone();
        if row == rows.len() {
            rows.push(1);
        } else if row < rows.len() {
            rows[row] += 1;
        } else {
            return Err(Error::InvalidDiagram(format!("row {row} beyond diagram")));
        }
        YoungDiagram::new(rows)
    }

    /// Beta-set of length `len`: `rows[i] + len - 1 - i`.
    fn beta_set(&self, len: usize) -> Vec<usize> {
        (0..len)
            .map(|i| self.rows.get(i).copied().unwrap_or(0) + len - 1 - i)
            .collect()
    }

    fn from_beta_set(beta: &[usize]) -> Self {
        let mut b = beta.to_vec();
        b.sort_unstable_by(|x, y| y.cmp(x));
        let len = b.len();
        let rows = b
            .iter()
            .enumerate()
            .map(|(i, &x)| x - (len - 1 - i))
            .filter(|&r| r > 0)
            .collect();
        YoungDiagram { rows }
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl TryFrom<Vec<usize>> for YoungDiagram {
    type Error = Error;

    fn try_from(rows: Vec<usize>) -> Result<Self> {
        YoungDiagram::new(rows)
    }
}

impl From<YoungDiagram> for Vec<usize> {
    fn from(d: YoungDiagram) -> Self {
        d.rows
    }
}

impl FromStr for YoungDiagram {
    type Err = Error;

    /// Parses `"3,2,1"`, `"[3,2,1]"` or `"(3,2,1)"`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s
            .trim()
            .trim_start_matches(['[', '('])
            .trim_end_matches([']', ')']);
        let rows = t
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| {
                x.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("diagram row {x:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        YoungDiagram::new(rows)
    }
}

/// All partitions of `n`, reverse-lexicographic (starting with `(n)`).
pub fn partitions_of(n: usize) -> Vec<YoungDiagram> {
    fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
        if remaining == 0 {
            out.push(YoungDiagram {
                rows: prefix.clone(),
            });
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Number of standard Young tableaux, by the hook-length formula.
pub fn dimension(d: &YoungDiagram) -> BigInt {
    let mut hooks = BigInt::one();
    for (i, &len) in d.rows.iter().enumerate() {
        for j in 0..len {
            hooks *= d.hook(i, j);
        }
    }
    factorial(d.size()) / hooks
}

/// Size of the conjugacy class with the given cycle type: `n! / z_c`.
pub fn class_size(cycle_type: &[usize]) -> BigInt {
    let n: usize = cycle_type.iter().sum();
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &c in cycle_type {
        *counts.entry(c).or_default() += 1;
    }
    let z = counts.iter().fold(BigInt::one(), |acc, (&len, &mult)| {
        acc * BigInt::from(len).pow(mult as u32) * factorial(mult)
    });
    factorial(n) / z
}

type MnCache = HashMap<(Vec<usize>, Vec<usize>), BigInt>;

thread_local! {
    static MN_CACHE: RefCell<MnCache> = RefCell::new(HashMap::new());
}

fn mn_recursive(d: &YoungDiagram, parts: &[usize]) -> BigInt {
    // parts holds cycle lengths >= 2, sorted descending.
    let Some((&r, rest)) = parts.split_first() else {
        return dimension(d);
    };
    let key = (d.rows.clone(), parts.to_vec());
    if let Some(v) = MN_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return v;
    }
    let beta = d.beta_set(d.num_rows());
    let mut total = BigInt::zero();
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let crossed = beta.iter().filter(|&&x| x > b - r && x < b).count();
        let mut moved = beta.clone();
        moved[idx] = b - r;
        let value = mn_recursive(&YoungDiagram::from_beta_set(&moved), rest);
        if crossed % 2 == 0 {
            total += value;
        } else {
            total -= value;
        }
    }
    MN_CACHE.with(|c| c.borrow_mut().insert(key, total.clone()));
    total
}

fn validate_class(d: &YoungDiagram, cycle_type: &[usize]) -> Result<Vec<usize>> {
    if cycle_type.contains(&0) {
        return Err(Error::InvalidPartition(format!(
            "cycle type {cycle_type:?} has a zero part"
        )));
    }
    let size: usize = cycle_type.iter().sum();
    if size != d.size() {
        return Err(Error::SizeMismatch {
            class: size,
            diagram: d.size(),
        });
    }
    let mut parts: Vec<usize> = cycle_type.iter().copied().filter(|&c| c > 1).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(parts)
}

/// The irreducible character `χ^λ` on the class with the given cycle type.
pub fn character(d: &YoungDiagram, cycle_type: &[usize]) -> Result<BigInt> {
    let parts = validate_class(d, cycle_type)?;
    Ok(mn_recursive(d, &parts))
}

/// `χ^λ(s) / dim λ`, with `s` padded by fixpoints up to `|λ|`.
pub fn normalized_trace(d: &YoungDiagram, s: &Permutation) -> Result<Rational> {
    if s.degree() > d.size() {
        return Err(Error::OutOfRange {
            name: "permutation degree",
            reason: format!("{} exceeds diagram size {}", s.degree(), d.size()),
        });
    }
    let mut ct = s.cycle_type();
    ct.extend(std::iter::repeat_n(1, d.size() - s.degree()));
    let chi = character(d, &ct)?;
    Ok(Rational::new(chi, dimension(d)))
}

/// Normalized traces of one diagram, cached by the non-trivial part of the cycle type.
///
/// Safe to share between threads.
#[derive(Debug)]
pub struct DiagramTraces {
    diagram: YoungDiagram,
    dim: BigInt,
    cache: RwLock<HashMap<Vec<usize>, Rational>>,
}

impl DiagramTraces {
    pub fn new(diagram: YoungDiagram) -> Self {
        let dim = dimension(&diagram);
        DiagramTraces {
            diagram,
            dim,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn diagram(&self) -> &YoungDiagram {
        &self.diagram
    }

    /// Trace of the class whose cycles of length at least 2 are `parts`.
    pub fn of_class(&self, parts: &[usize]) -> Result<Rational> {
        let mut key: Vec<usize> = parts.iter().copied().filter(|&p| p > 1).collect();
        key.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(v) = self.cache.read().expect("trace cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        let moved: usize = key.iter().sum();
        if moved > self.diagram.size() {
            return Err(Error::OutOfRange {
                name: "permutation support",
                reason: format!("{moved} points exceed diagram size {}", self.diagram.size()),
            });
        }
        let value = Rational::new(mn_recursive(&self.diagram, &key), self.dim.clone());
        self.cache
            .write()
            .expect("trace cache poisoned")
            .insert(key, value.clone());
        Ok(value)
    }

    pub fn of(&self, s: &Permutation) -> Result<Rational> {
        if s.degree() > self.diagram.size() {
            return Err(Error::OutOfRange {
                name: "permutation degree",
                reason: format!(
                    "{} exceeds diagram size {}",
                    s.degree(),
                    self.diagram.size()
                ),
            });
        }
        self.of_class(&s.cycle_type())
    }
}

/// Kerov's transition measure: atoms at the contents of the addable cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMeasure {
    atoms: Vec<(i64, Rational)>,
}

#[derive(Serialize)]
struct AtomRecord {
    location: i64,
    weight: String,
}

impl TransitionMeasure {
    /// Atoms sorted by location.
    pub fn atoms(&self) -> &[(i64, Rational)] {
        &self.atoms
    }

    pub fn to_measure<T: Scalar>(&self) -> AtomicMeasure<T> {
        AtomicMeasure::new(
            self.atoms
                .iter()
                .map(|(x, w)| (T::from_int(*x), T::from_rational(w)))
                .collect(),
        )
        .expect("transition measures are probability measures")
    }
}

impl Serialize for TransitionMeasure {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.atoms.iter().map(|(x, w)| AtomRecord {
            location: *x,
            weight: format_rational(w),
        }))
    }
}

pub fn transition_measure(d: &YoungDiagram) -> TransitionMeasure {
    let n = d.size();
    let denom = dimension(d) * BigInt::from(n + 1);
    let mut atoms: Vec<(i64, Rational)> = d
        .addable_cells()
        .into_iter()
        .map(|(i, j)| {
            let grown = d.with_box(i).expect("addable cell");
            (
                j as i64 - i as i64,
                Rational::new(dimension(&grown), denom.clone()),
            )
        })
        .collect();
    atoms.sort_by_key(|a| a.0);
    TransitionMeasure { atoms }
}

/// Contents `column - row` of the removable cells, ascending.
pub fn removable_contents(d: &YoungDiagram) -> Vec<i64> {
    let mut v: Vec<i64> = d
        .removable_cells()
        .into_iter()
        .map(|(i, j)| j as i64 - i as i64)
        .collect();
    v.sort_unstable();
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayRow {
    pub n: usize,
    pub trace: Rational,
    /// `|tr ρ(σ)| · n^{|σ|/2}`
    pub scaled: f64,
}

/// Scaled normalized traces `|tr ρ_λ(s)| · n^{|s|/2}` along a family of diagrams.
pub fn character_decay_check(ds: &[YoungDiagram], s: &Permutation) -> Result<Vec<DecayRow>> {
    let exponent = s.reduced_length() as f64 / 2.0;
    ds.iter()
        .map(|d| {
            let trace = normalized_trace(d, s)?;
            let n = d.size();
            let scaled = Scalar::to_f64(&trace.abs()) * (n as f64).powf(exponent);
            Ok(DecayRow { n, trace, scaled })
        })
        .collect()
}
