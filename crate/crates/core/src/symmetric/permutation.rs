use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `{1..d}` stored in one-line form.
///
/// The public API is 1-indexed; storage is 0-indexed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u16).collect(),
        }
    }

    /// Builds a permutation from 1-indexed one-line notation.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let d = images.len();
        if d == 0 {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        if d > u16::MAX as usize {
            return Err(Error::InvalidPermutation(format!("degree {d} too large")));
        }
        let mut seen = vec![false; d];
        for &x in images {
            if x == 0 || x > d || seen[x - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 1..{d}"
                )));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|&x| (x - 1) as u16).collect(),
        })
    }

    /// Builds a permutation of the given degree from disjoint cycles (1-indexed).
    pub fn from_cycles<C: AsRef<[usize]>>(degree: usize, cycles: &[C]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        let mut images: Vec<usize> = (1..=degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for (idx, &x) in cycle.iter().enumerate() {
                if x == 0 || x > degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} outside 1..{degree}"
                    )));
                }
                if touched[x - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} repeated in cycles"
                    )));
                }
                touched[x - 1] = true;
                images[x - 1] = cycle[(idx + 1) % cycle.len()];
            }
        }
        Self::from_images(&images)
    }

    /// The transposition `(i, j)` in `S_degree`; `i == j` gives the identity.
    pub fn transposition(degree: usize, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > degree || j > degree {
            return Err(Error::InvalidPermutation(format!(
                "transposition ({i},{j}) outside 1..{degree}"
            )));
        }
        let mut p = Self::identity(degree);
        p.images.swap(i - 1, j - 1);
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-indexed point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] as usize + 1
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u16; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        Permutation {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        }
    }

    /// Swaps the images of `i` and `j` after applying `self`: returns `(i, j) ∘ self`.
    pub(crate) fn left_transpose(&mut self, i: usize, j: usize) {
        let (a, b) = ((i - 1) as u16, (j - 1) as u16);
        for x in self.images.iter_mut() {
            if *x == a {
                *x = b;
            } else if *x == b {
                *x = a;
            }
        }
    }

    /// Returns `self ∘ (i, j)` in place.
    pub(crate) fn right_transpose(&mut self, i: usize, j: usize) {
        self.images.swap(i - 1, j - 1);
    }

    /// Extends to `S_degree` by fixing every added point.
    pub fn embed(&self, degree: usize) -> Result<Self> {
        if degree < self.degree() {
            return Err(Error::DegreeMismatch(self.degree(), degree));
        }
        let mut images = self.images.clone();
        images.extend(self.degree() as u16..degree as u16);
        Ok(Permutation { images })
    }

    /// Disjoint cycles including fixpoints, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths including fixpoints, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut lengths = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x] as usize;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    /// Minimal number of transpositions: degree minus number of cycles.
    pub fn reduced_length(&self) -> usize {
        self.degree() - self.cycle_type().len()
    }

    /// Points moved by the permutation.
    pub fn support(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i != x as usize)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Every permutation of `{1..degree}` in lexicographic one-line order.
    pub fn all(degree: usize) -> Vec<Permutation> {
        let mut current: Vec<u16> = (0..degree as u16).collect();
        let mut out = vec![Permutation {
            images: current.clone(),
        }];
        loop {
            let Some(i) = (1..current.len())
                .rev()
                .find(|&i| current[i - 1] < current[i])
            else {
                return out;
            };
            let j = (i..current.len())
                .rev()
                .find(|&j| current[j] > current[i - 1])
                .unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
            out.push(Permutation {
                images: current.clone(),
            });
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[S{}]", self, self.degree())
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::from_images(&images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images()
    }
}

/// Parses cycle notation such as `"(1 2)(3 4)"` or `"(1,2,3)"` in a given degree.
pub fn parse_cycles(s: &str, degree: usize) -> Result<Permutation> {
    let mut cycles = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('(') else {
            return Err(Error::Parse(format!("expected '(' in {s:?}")));
        };
        let Some(end) = body.find(')') else {
            return Err(Error::Parse(format!("unclosed cycle in {s:?}")));
        };
        let points = body[..end]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if !points.is_empty() {
            cycles.push(points);
        }
        rest = body[end + 1..].trim_start();
    }
    Permutation::from_cycles(degree, &cycles)
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts a JSON one-line array (`"[2,1,3]"`) or cycle notation with
    /// the degree taken as the largest point mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('[') {
            let inner = t
                .strip_prefix('[')
                .and_then(|x| x.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("bad array {s:?}")))?;
            let images = inner
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("{x:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Permutation::from_images(&images);
        }
        let degree = t
            .split(|c: char| !c.is_ascii_digit())
            .filter_map(|x| x.parse::<usize>().ok())
            .max()
            .unwrap_or(1);
        parse_cycles(t, degree)
    }
}
