//! The `(n+1)×(n+1)` matrix model over `ℂ[S_n]`.
//!
//! Slot 0 is the adjoined point `n+1`; slots `1..=n` are the points of
//! `S_n`. The matrix of left multiplication by `X = Σ_j (j, n+1)` has zero
//! diagonal, `1·e` in row and column 0, and the transposition `(i, j)` at
//! `(i, j)`. Its entries act on `ℂ[S_n]` by right multiplication, so matrix
//! products use the opposite algebra ([`EntryAction::RightRegular`]).

mod experiments;
mod identification;
mod routes;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::characters::YoungDiagram;
use crate::error::{Error, Result};
use crate::free_prob::{normalize_free_word, FreeLetter};
use crate::scalar::ExactScalar;
use crate::symmetric::{algebra_multiply, GroupAlgebraElement, Permutation};

pub use experiments::{
    compressed_distribution, compression_comparison, convergence_experiment, cutoff_for,
    diagram_cumulants, factor_limit_check, gaps_shrink, kreweras_block_identification,
    limit_moment, BlockIdentification, CompressionReport, CompressionRow, ConvergenceReport,
    ConvergenceRow, FactorRow, MAX_COMPRESSED_N, MAX_COMPRESSED_ORDER,
};
pub use identification::{
    left_identify, p_keeps, q_block_keeps, q_keeps, represent_on_basis, right_identify,
    slot_decomposition, Identification, ProjectionKind, ProjectionSpec,
};
pub use routes::{
    moment_via_partitions, state, state_of_product, tuple_state, MAX_TUPLE_LENGTH, MAX_TUPLE_N,
};

/// How matrix entries act on `ℂ[S_n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EntryAction {
    /// By right multiplication; products of entries compose in the opposite algebra.
    RightRegular,
    /// By left multiplication; ordinary products.
    LeftRegular,
}

impl EntryAction {
    fn opposite(self) -> bool {
        self == EntryAction::RightRegular
    }
}

/// A square matrix of group-algebra elements of degree `n`, indexed by slots `0..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JmMatrix<T: ExactScalar> {
    n: usize,
    entries: Vec<GroupAlgebraElement<T>>,
    action: EntryAction,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "n",
            reason: "must be positive".into(),
        });
    }
    Ok(())
}

fn check_cutoff(n: usize, k: usize) -> Result<()> {
    if k > n {
        return Err(Error::OutOfRange {
            name: "k",
            reason: format!("cutoff {k} exceeds n = {n}"),
        });
    }
    Ok(())
}

impl<T: ExactScalar> JmMatrix<T> {
    pub fn zero(n: usize, action: EntryAction) -> Result<Self> {
        check_n(n)?;
        Ok(JmMatrix {
            n,
            entries: vec![GroupAlgebraElement::zero(n); (n + 1) * (n + 1)],
            action,
        })
    }

    /// The Jucys–Murphy matrix with entries acting by right multiplication.
    pub fn build_x(n: usize) -> Result<Self> {
        Self::build_x_with(n, EntryAction::RightRegular)
    }

    pub fn build_x_with(n: usize, action: EntryAction) -> Result<Self> {
        let mut m = Self::zero(n, action)?;
        for i in 0..=n {
            for j in 0..=n {
                if i == j {
                    continue;
                }
                let p = if i == 0 || j == 0 {
                    Permutation::identity(n)
                } else {
                    Permutation::transposition(n, i, j)?
                };
                *m.entry_mut(i, j) = GroupAlgebraElement::basis(p);
            }
        }
        Ok(m)
    }

    /// Diagonal projection keeping slots `0..=k`.
    pub fn build_p(n: usize, k: usize) -> Result<Self> {
        Self::build_p_with(n, k, EntryAction::RightRegular)
    }

    pub fn build_p_with(n: usize, k: usize, action: EntryAction) -> Result<Self> {
        check_cutoff(n, k)?;
        let mut m = Self::zero(n, action)?;
        for i in 0..=k {
            *m.entry_mut(i, i) = GroupAlgebraElement::one(n);
        }
        Ok(m)
    }

    /// `P·X`: the rows of `X` for slots `0..=k`, zero below.
    pub fn build_px(n: usize, k: usize) -> Result<Self> {
        check_cutoff(n, k)?;
        let mut m = Self::build_x(n)?;
        for i in k + 1..=n {
            for j in 0..=n {
                *m.entry_mut(i, j) = GroupAlgebraElement::zero(n);
            }
        }
        Ok(m)
    }

    /// The projection `Q` in the identification `(σ, τ) ↦ τσ`: the same
    /// diagonal shape as `P`, entries acting by left multiplication.
    pub fn build_q_model(n: usize, k: usize) -> Result<Self> {
        Self::build_p_with(n, k, EntryAction::LeftRegular)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn action(&self) -> EntryAction {
        self.action
    }

    pub fn entry(&self, i: usize, j: usize) -> &GroupAlgebraElement<T> {
        &self.entries[i * (self.n + 1) + j]
    }

    fn entry_mut(&mut self, i: usize, j: usize) -> &mut GroupAlgebraElement<T> {
        &mut self.entries[i * (self.n + 1) + j]
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        (0..=self.n).all(|j| self.entry(i, j).is_zero())
    }

    pub fn is_identity(&self) -> bool {
        (0..=self.n).all(|i| {
            (0..=self.n).all(|j| {
                let e = self.entry(i, j);
                if i == j {
                    *e == GroupAlgebraElement::one(self.n)
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// Matrix product, multiplying entries according to the shared entry action.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DegreeMismatch(self.n, other.n));
        }
        if self.action != other.action {
            return Err(Error::OutOfRange {
                name: "entry action",
                reason: "cannot multiply matrices with different entry actions".into(),
            });
        }
        let mut out = Self::zero(self.n, self.action)?;
        let opposite = self.action.opposite();
        for i in 0..=self.n {
            for l in 0..=self.n {
                let a = self.entry(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..=self.n {
                    let b = other.entry(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.entry_mut(i, j)
                        .add_assign_ref(&algebra_multiply(a, b, opposite)?)?;
                }
            }
        }
        Ok(out)
    }
}

/// A letter of a word in the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    X,
    PX,
    P,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::X => "X",
            Letter::PX => "PX",
            Letter::P => "P",
        })
    }
}

pub fn format_word(letters: &[Letter]) -> String {
    letters
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses a word such as `"PX X PX X"`, `"PX*X"` or `"P X X"`.
///
/// Letters are separated by whitespace, `*` or `·`; a run like `PXX` is
/// read greedily as `PX X`.
pub fn parse_word(s: &str) -> Result<Vec<Letter>> {
    let compact: Vec<char> = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '*' && *c != '·')
        .collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < compact.len() {
        match compact[i].to_ascii_uppercase() {
            'X' => {
                out.push(Letter::X);
                i += 1;
            }
            'P' if compact.get(i + 1).map(|c| c.to_ascii_uppercase()) == Some('X') => {
                out.push(Letter::PX);
                i += 2;
            }
            'P' => {
                out.push(Letter::P);
                i += 1;
            }
            other => {
                return Err(Error::InvalidWord(format!(
                    "unexpected letter {other:?} in {s:?}"
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidWord("empty word".into()));
    }
    Ok(out)
}

/// Expands to the letters `a = X`, `b = P`.
pub fn to_free_word(letters: &[Letter]) -> Vec<FreeLetter> {
    letters
        .iter()
        .flat_map(|l| match l {
            Letter::X => vec![FreeLetter::A],
            Letter::PX => vec![FreeLetter::B, FreeLetter::A],
            Letter::P => vec![FreeLetter::B],
        })
        .collect()
}

/// Reads a word in `a`, `b` with no `bb` back as model letters.
pub fn from_free_word(word: &[FreeLetter]) -> Vec<Letter> {
    let mut out = Vec::new();
    let mut pending_b = false;
    for &l in word {
        match l {
            FreeLetter::B if pending_b => {}
            FreeLetter::B => pending_b = true,
            FreeLetter::A => {
                out.push(if pending_b { Letter::PX } else { Letter::X });
                pending_b = false;
            }
        }
    }
    if pending_b {
        out.push(Letter::P);
    }
    out
}

/// Result of removing repeated projections and rotating the word to end with `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizedWord {
    /// The word reduces to `P` alone.
    Projection,
    /// Letters over `{X, PX}` only.
    Word(Vec<Letter>),
}

pub fn normalize_letters(letters: &[Letter]) -> Result<NormalizedWord> {
    let free = normalize_free_word(&to_free_word(letters))?;
    if free == [FreeLetter::B] {
        return Ok(NormalizedWord::Projection);
    }
    Ok(NormalizedWord::Word(from_free_word(&free)))
}

/// Which matrix model a word is evaluated in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    /// Identification `(σ, τ) ↦ στ`: entries act on the right, projection `P`.
    Right,
    /// Identification `(σ, τ) ↦ τσ`: entries act on the left, projection `Q`.
    Left,
}

impl Model {
    pub fn action(self) -> EntryAction {
        match self {
            Model::Right => EntryAction::RightRegular,
            Model::Left => EntryAction::LeftRegular,
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "right" | "p" => Ok(Model::Right),
            "left" | "q" => Ok(Model::Left),
            other => Err(Error::Parse(format!(
                "unknown model {other:?}; expected right or left"
            ))),
        }
    }
}

/// A word together with everything needed to evaluate its state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JmWord {
    letters: Vec<Letter>,
    n: usize,
    k: usize,
    diagram: YoungDiagram,
    model: Model,
}

impl JmWord {
    pub fn new(
        letters: Vec<Letter>,
        k: usize,
        diagram: YoungDiagram,
        model: Model,
    ) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        let n = diagram.size();
        check_n(n)?;
        check_cutoff(n, k)?;
        Ok(JmWord {
            letters,
            n,
            k,
            diagram,
            model,
        })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn diagram(&self) -> &YoungDiagram {
        &self.diagram
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn normalized(&self) -> Result<NormalizedWord> {
        normalize_letters(&self.letters)
    }

    /// Number of `X` factors, counting the one inside each `PX`.
    pub fn x_count(&self) -> usize {
        self.letters.iter().filter(|l| **l != Letter::P).count()
    }

    pub fn with_letters(&self, letters: Vec<Letter>) -> Result<Self> {
        JmWord::new(letters, self.k, self.diagram.clone(), self.model)
    }

    pub fn with_model(&self, model: Model) -> Self {
        JmWord {
            model,
            ..self.clone()
        }
    }

    /// The operator word read backwards, spelled with `X` and `P` only.
    pub fn reversed(&self) -> Self {
        let mut expanded: Vec<Letter> = self
            .letters
            .iter()
            .flat_map(|l| match l {
                Letter::PX => vec![Letter::P, Letter::X],
                other => vec![*other],
            })
            .collect();
        expanded.reverse();
        JmWord {
            letters: expanded,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type M = JmMatrix<Rational>;

    #[test]
    fn x_matrix_for_n_2() {
        let x = M::build_x(2).unwrap();
        let e = GroupAlgebraElement::one(2);
        let t = GroupAlgebraElement::basis(Permutation::transposition(2, 1, 2).unwrap());
        let expected = [
            [None, Some(&e), Some(&e)],
            [Some(&e), None, Some(&t)],
            [Some(&e), Some(&t), None],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                match cell {
                    Some(v) => assert_eq!(x.entry(i, j), *v),
                    None => assert!(x.entry(i, j).is_zero()),
                }
            }
        }
    }

    #[test]
    fn projection_matrices() {
        for n in 1..5 {
            assert!(M::build_p(n, n).unwrap().is_identity());
            for k in 0..=n {
                let px = M::build_px(n, k).unwrap();
                let product = M::build_p(n, k)
                    .unwrap()
                    .mul(&M::build_x(n).unwrap())
                    .unwrap();
                assert_eq!(px, product);
                for i in 0..=n {
                    assert_eq!(px.row_is_zero(i), i > k, "n={n} k={k} row {i}");
                }
            }
        }
        assert!(M::build_p(3, 4).is_err());
        assert!(M::build_x(0).is_err());
    }

    #[test]
    fn projection_is_idempotent() {
        let p = M::build_p(4, 2).unwrap();
        assert_eq!(p.mul(&p).unwrap(), p);
        let q = M::build_q_model(4, 2).unwrap();
        assert_eq!(q.mul(&q).unwrap(), q);
        assert!(M::build_q_model(3, 3).unwrap().is_identity());
        assert!(p.mul(&q).is_err());
    }

    #[test]
    fn word_parsing() {
        use Letter::*;
        assert_eq!(parse_word("PX X PX X").unwrap(), vec![PX, X, PX, X]);
        assert_eq!(parse_word("PXX").unwrap(), vec![PX, X]);
        assert_eq!(parse_word("P*P X").unwrap(), vec![P, PX]);
        assert_eq!(parse_word("p x").unwrap(), vec![PX]);
        assert!(parse_word("XY").is_err());
        assert!(parse_word("  ").is_err());
        assert_eq!(format_word(&[PX, X]), "PX X");
    }

    #[test]
    fn normalization() {
        use Letter::*;
        let norm = |s: &str| normalize_letters(&parse_word(s).unwrap()).unwrap();
        assert_eq!(norm("X PX"), NormalizedWord::Word(vec![X, PX]));
        assert_eq!(norm("PX X P"), NormalizedWord::Word(vec![PX, X]));
        assert_eq!(norm("P P X"), NormalizedWord::Word(vec![PX]));
        assert_eq!(norm("X P"), NormalizedWord::Word(vec![PX]));
        assert_eq!(norm("P X P X P"), NormalizedWord::Word(vec![PX, PX]));
        assert_eq!(norm("P P"), NormalizedWord::Projection);
        assert_eq!(norm("X X"), NormalizedWord::Word(vec![X, X]));
    }

    #[test]
    fn reversal_expands_px() {
        use Letter::*;
        let w = JmWord::new(vec![PX, X], 1, YoungDiagram::square(2), Model::Right).unwrap();
        assert_eq!(w.reversed().letters(), &[X, X, P]);
        assert_eq!(w.x_count(), 2);
        assert!(JmWord::new(vec![X], 5, YoungDiagram::square(2), Model::Right).is_err());
        assert!(JmWord::new(vec![], 1, YoungDiagram::square(2), Model::Right).is_err());
    }
}
