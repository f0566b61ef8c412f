//! Identifications of `ℂ[S_n] ⊗ ℂ^{n+1}` with `ℂ[S_{n+1}]`.
//!
//! Right: `(σ, j) ↦ σ·(j, n+1)`. Left: `(σ, j) ↦ (j, n+1)·σ`. Slot 0 stands
//! for the point `n+1`, whose transposition is the identity. Under the right
//! identification the matrix `X` with right-regular entries is left
//! multiplication by `J = Σ_j (j, n+1)`; under the left one, `X` with
//! left-regular entries is right multiplication by `J`.

use serde::{Deserialize, Serialize};

use super::{EntryAction, JmMatrix};
use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::symmetric::{GroupAlgebraElement, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Identification {
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProjectionKind {
    P,
    Q,
}

/// A projection on `ℂ[S_{n+1}]` described by its action on the basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProjectionSpec {
    pub kind: ProjectionKind,
    pub k: usize,
}

impl ProjectionSpec {
    pub fn keeps(&self, tau: &Permutation) -> bool {
        match self.kind {
            ProjectionKind::P => p_keeps(tau, self.k),
            ProjectionKind::Q => q_keeps(tau, self.k),
        }
    }
}

fn slot_transposition(n: usize, slot: usize) -> Result<Permutation> {
    if slot == 0 {
        Ok(Permutation::identity(n + 1))
    } else {
        Permutation::transposition(n + 1, slot, n + 1)
    }
}

fn check_slot(n: usize, slot: usize) -> Result<()> {
    if slot > n {
        return Err(Error::OutOfRange {
            name: "slot",
            reason: format!("{slot} exceeds n = {n}"),
        });
    }
    Ok(())
}

pub fn right_identify(sigma: &Permutation, slot: usize) -> Result<Permutation> {
    let n = sigma.degree();
    check_slot(n, slot)?;
    sigma.embed(n + 1)?.compose(&slot_transposition(n, slot)?)
}

pub fn left_identify(sigma: &Permutation, slot: usize) -> Result<Permutation> {
    let n = sigma.degree();
    check_slot(n, slot)?;
    slot_transposition(n, slot)?.compose(&sigma.embed(n + 1)?)
}

/// Inverse of the identification: `τ ∈ S_{n+1}` as `(σ ∈ S_n, slot)`.
pub fn slot_decomposition(
    tau: &Permutation,
    ident: Identification,
) -> Result<(Permutation, usize)> {
    let big = tau.degree();
    if big < 2 {
        return Err(Error::DegreeMismatch(big, 2));
    }
    let n = big - 1;
    // Right: τ⁻¹(n+1) = j. Left: τ(n+1) = j.
    let j = match ident {
        Identification::Right => tau.inverse().apply(big),
        Identification::Left => tau.apply(big),
    };
    let slot = if j == big { 0 } else { j };
    let t = slot_transposition(n, slot)?;
    let sigma = match ident {
        Identification::Right => tau.compose(&t)?,
        Identification::Left => t.compose(tau)?,
    };
    debug_assert_eq!(sigma.apply(big), big);
    let images: Vec<usize> = sigma.images()[..n].to_vec();
    Ok((Permutation::from_images(&images)?, slot))
}

/// `P(τ) = τ` iff `τ⁻¹(n+1) ∈ {1..k, n+1}`.
pub fn p_keeps(tau: &Permutation, k: usize) -> bool {
    let big = tau.degree();
    let j = tau.inverse().apply(big);
    j == big || j <= k
}

/// `Q(τ) = τ` iff `τ(n+1) ∈ {1..k, n+1}`.
pub fn q_keeps(tau: &Permutation, k: usize) -> bool {
    let big = tau.degree();
    let j = tau.apply(big);
    j == big || j <= k
}

/// The block `Q_j` of `Q` in the right identification: keeps `σ ∈ S_n` in
/// slot `j` iff `σ(j) ≤ k`; slot 0 is always kept.
pub fn q_block_keeps(sigma: &Permutation, slot: usize, k: usize) -> bool {
    slot == 0 || sigma.apply(slot) <= k
}

/// The action of a model matrix on the basis vector `τ` of `ℂ[S_{n+1}]`.
///
/// `τ` is split into `(σ, i)`; the image is `Σ_l (σ ⋆ M_{l,i}, l)` where `⋆`
/// is the matrix's entry action, mapped back through `ident`.
pub fn represent_on_basis<T: ExactScalar>(
    m: &JmMatrix<T>,
    ident: Identification,
    tau: &Permutation,
) -> Result<GroupAlgebraElement<T>> {
    let n = m.n();
    if tau.degree() != n + 1 {
        return Err(Error::DegreeMismatch(n + 1, tau.degree()));
    }
    let (sigma, i) = slot_decomposition(tau, ident)?;
    let mut out = GroupAlgebraElement::zero(n + 1);
    for l in 0..=n {
        for (p, c) in m.entry(l, i).terms() {
            let moved = match m.action() {
                EntryAction::RightRegular => sigma.compose(p)?,
                EntryAction::LeftRegular => p.compose(&sigma)?,
            };
            let image = match ident {
                Identification::Right => right_identify(&moved, l)?,
                Identification::Left => left_identify(&moved, l)?,
            };
            out.add_term(image, c.clone());
        }
    }
    Ok(out)
}
