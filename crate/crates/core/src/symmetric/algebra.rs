use std::collections::HashMap;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::symmetric::Permutation;

/// A sparse linear combination of permutations of one fixed degree.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement<T: ExactScalar> {
    degree: usize,
    terms: HashMap<Permutation, T>,
}

impl<T: ExactScalar> GroupAlgebraElement<T> {
    pub fn zero(degree: usize) -> Self {
        GroupAlgebraElement {
            degree,
            terms: HashMap::new(),
        }
    }

    /// The unit `1·e`.
    pub fn one(degree: usize) -> Self {
        Self::basis(Permutation::identity(degree))
    }

    pub fn basis(p: Permutation) -> Self {
        Self::term(p, T::one())
    }

    pub fn term(p: Permutation, coeff: T) -> Self {
        let mut out = Self::zero(p.degree());
        out.add_term(p, coeff);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (Permutation, T)>>(
        degree: usize,
        terms: I,
    ) -> Result<Self> {
        let mut out = Self::zero(degree);
        for (p, c) in terms {
            if p.degree() != degree {
                return Err(Error::DegreeMismatch(degree, p.degree()));
            }
            out.add_term(p, c);
        }
        Ok(out)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of permutations with a nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &Permutation) -> T {
        self.terms.get(p).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &T)> {
        self.terms.iter()
    }

    /// Terms sorted by permutation, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(&Permutation, &T)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// Adds `coeff·p` in place; panics on a degree mismatch.
    pub fn add_term(&mut self, p: Permutation, coeff: T) {
        assert_eq!(
            p.degree(),
            self.degree,
            "permutation degree differs from element degree"
        );
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        for (p, c) in &other.terms {
            self.add_term(p.clone(), c.clone());
        }
        Ok(())
    }

    pub fn scale(&self, s: &T) -> Self {
        if s.is_zero() {
            return Self::zero(self.degree);
        }
        GroupAlgebraElement {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (p.clone(), c.clone() * s.clone()))
                .collect(),
        }
    }

    /// Product in the group algebra, or in its opposite when `opposite` is set.
    pub fn multiply(&self, other: &Self, opposite: bool) -> Result<Self> {
        algebra_multiply(self, other, opposite)
    }

    /// Applies a linear functional given on basis elements.
    pub fn evaluate<F: FnMut(&Permutation) -> T>(&self, mut f: F) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, (p, c)| acc + c.clone() * f(p))
    }
}

/// Bilinear extension of [`Permutation::compose`].
///
/// With `opposite` set each basis product is `compose(t, s)` instead of
/// `compose(s, t)`, which realizes the composition of right actions.
pub fn algebra_multiply<T: ExactScalar>(
    a: &GroupAlgebraElement<T>,
    b: &GroupAlgebraElement<T>,
    opposite: bool,
) -> Result<GroupAlgebraElement<T>> {
    if a.degree != b.degree {
        return Err(Error::DegreeMismatch(a.degree, b.degree));
    }
    let mut out = GroupAlgebraElement::zero(a.degree);
    for (s, x) in &a.terms {
        for (t, y) in &b.terms {
            let p = if opposite {
                t.compose_unchecked(s)
            } else {
                s.compose_unchecked(t)
            };
            out.add_term(p, x.clone() * y.clone());
        }
    }
    Ok(out)
}

impl<T: ExactScalar> Add for &GroupAlgebraElement<T> {
    type Output = GroupAlgebraElement<T>;

    /// Panics on a degree mismatch; use [`GroupAlgebraElement::add_assign_ref`] to handle it.
    fn add(self, rhs: Self) -> GroupAlgebraElement<T> {
        let mut out = self.clone();
        out.add_assign_ref(rhs)
            .expect("degree mismatch in addition");
        out
    }
}

impl<T: ExactScalar> Neg for &GroupAlgebraElement<T> {
    type Output = GroupAlgebraElement<T>;

    fn neg(self) -> GroupAlgebraElement<T> {
        self.scale(&-T::one())
    }
}

impl<T: ExactScalar> Sub for &GroupAlgebraElement<T> {
    type Output = GroupAlgebraElement<T>;

    fn sub(self, rhs: Self) -> GroupAlgebraElement<T> {
        self + &(-rhs)
    }
}
