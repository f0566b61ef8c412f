//! Atomic measures, the moment/free-cumulant transforms, free compression and
//! mixed moments of a free pair `(a, b)` with `b` a projection.
//!
//! Everything works at the level of moment sequences, so exact scalars stay
//! exact: compressed measures are never resolved into atoms.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partitions::{enumerate_nc_on, is_noncrossing, max_compatible, SetPartition};
use crate::scalar::{format_rational, Scalar};
use crate::Rational;

/// Finitely many atoms `(location, weight)` with positive weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure<T: Scalar> {
    atoms: Vec<(T, T)>,
}

impl<T: Scalar> AtomicMeasure<T> {
    pub fn new(atoms: Vec<(T, T)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::OutOfRange {
                name: "atoms",
                reason: "a measure needs at least one atom".into(),
            });
        }
        if let Some((_, w)) = atoms.iter().find(|(_, w)| !w.is_positive()) {
            return Err(Error::OutOfRange {
                name: "weight",
                reason: format!("{w:?} is not positive"),
            });
        }
        for (i, (x, _)) in atoms.iter().enumerate() {
            if atoms[i + 1..].iter().any(|(y, _)| y == x) {
                return Err(Error::OutOfRange {
                    name: "location",
                    reason: format!("{x:?} repeated"),
                });
            }
        }
        let total = atoms.iter().fold(T::zero(), |acc, (_, w)| acc + w.clone());
        let off = total.clone() - T::one();
        if !off.is_zero() && (T::EXACT || off.to_f64().abs() > 1e-9) {
            return Err(Error::OutOfRange {
                name: "weights",
                reason: format!("sum to {total:?}, not 1"),
            });
        }
        Ok(AtomicMeasure { atoms })
    }

    /// The point mass at `x`.
    pub fn dirac(x: T) -> Self {
        AtomicMeasure {
            atoms: vec![(x, T::one())],
        }
    }

    pub fn atoms(&self) -> &[(T, T)] {
        &self.atoms
    }

    /// Image under `x ↦ s·x`.
    pub fn scale(&self, s: &T) -> Result<Self> {
        AtomicMeasure::new(
            self.atoms
                .iter()
                .map(|(x, w)| (x.clone() * s.clone(), w.clone()))
                .collect(),
        )
    }
}

macro_rules! sequence_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name<T: Scalar> {
            values: Vec<T>,
        }

        impl<T: Scalar> $name<T> {
            pub fn new(values: Vec<T>) -> Self {
                $name { values }
            }

            pub fn values(&self) -> &[T] {
                &self.values
            }

            pub fn len(&self) -> usize {
                self.values.len()
            }

            pub fn is_empty(&self) -> bool {
                self.values.is_empty()
            }

            /// The `j`-th entry, 1-indexed.
            pub fn get(&self, j: usize) -> Option<&T> {
                j.checked_sub(1).and_then(|i| self.values.get(i))
            }

            pub fn map<U: Scalar, F: FnMut(&T) -> U>(&self, f: F) -> $name<U> {
                $name { values: self.values.iter().map(f).collect() }
            }
        }

        impl $name<Rational> {
            /// The entries as "p/q" strings.
            pub fn to_strings(&self) -> Vec<String> {
                self.values.iter().map(format_rational).collect()
            }
        }

        impl Serialize for $name<Rational> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                serializer.collect_seq(self.values.iter().map(format_rational))
            }
        }
    };
}

sequence_type!(
    /// Moments `m_1, …, m_L`.
    MomentSequence
);
sequence_type!(
    /// Free cumulants `κ_1, …, κ_L`.
    CumulantSequence
);

/// `m_j = Σ w_i x_i^j` for `j = 1..=len`.
pub fn moments<T: Scalar>(mu: &AtomicMeasure<T>, len: usize) -> MomentSequence<T> {
    let mut powers: Vec<T> = mu.atoms.iter().map(|_| T::one()).collect();
    let mut values = Vec::with_capacity(len);
    for _ in 0..len {
        let mut m = T::zero();
        for (p, (x, w)) in powers.iter_mut().zip(&mu.atoms) {
            *p = p.clone() * x.clone();
            m = m + w.clone() * p.clone();
        }
        values.push(m);
    }
    MomentSequence::new(values)
}

/// `composition_sums[s][r] = Σ m_{i_1}⋯m_{i_s}` over `i_1+…+i_s = r`, with `m_0 = 1`.
fn composition_sums<T: Scalar>(
    m_with_zero: &[T],
    max_parts: usize,
    max_total: usize,
) -> Vec<Vec<T>> {
    let mut table = vec![vec![T::zero(); max_total + 1]; max_parts + 1];
    table[0][0] = T::one();
    for s in 1..=max_parts {
        for r in 0..=max_total {
            let mut acc = T::zero();
            for i in 0..=r.min(m_with_zero.len() - 1) {
                acc = acc + m_with_zero[i].clone() * table[s - 1][r - i].clone();
            }
            table[s][r] = acc;
        }
    }
    table
}

/// Solves `m_j = Σ_{π ∈ NC(j)} Π_{B ∈ π} κ_{|B|}` for the cumulants.
///
/// Uses the first-block decomposition `m_n = Σ_s κ_s Σ_{i_1+…+i_s=n-s} m_{i_1}⋯m_{i_s}`.
pub fn moments_to_cumulants<T: Scalar>(m: &MomentSequence<T>) -> CumulantSequence<T> {
    let len = m.len();
    let mut m0 = vec![T::one()];
    m0.extend(m.values.iter().cloned());
    let table = composition_sums(&m0, len, len);
    let mut kappa: Vec<T> = Vec::with_capacity(len);
    for n in 1..=len {
        let mut rest = T::zero();
        for s in 1..n {
            rest = rest + kappa[s - 1].clone() * table[s][n - s].clone();
        }
        kappa.push(m.values[n - 1].clone() - rest);
    }
    CumulantSequence::new(kappa)
}

/// Inverse of [`moments_to_cumulants`].
pub fn cumulants_to_moments<T: Scalar>(k: &CumulantSequence<T>) -> MomentSequence<T> {
    let len = k.len();
    let mut m0 = vec![T::one()];
    for n in 1..=len {
        let table = composition_sums(&m0, n, n);
        let mut mn = T::zero();
        for s in 1..=n {
            mn = mn + k.values[s - 1].clone() * table[s][n - s].clone();
        }
        m0.push(mn);
    }
    MomentSequence::new(m0.split_off(1))
}

/// `C_π = Π_{B ∈ π} κ_{|B|}` for a noncrossing `π`.
pub fn cumulant_of_partition<T: Scalar>(k: &CumulantSequence<T>, p: &SetPartition) -> Result<T> {
    if !is_noncrossing(p) {
        return Err(Error::Crossing(p.to_string()));
    }
    partition_product(k, p)
}

fn partition_product<T: Scalar>(k: &CumulantSequence<T>, p: &SetPartition) -> Result<T> {
    p.blocks().iter().try_fold(T::one(), |acc, b| {
        let kb = k.get(b.len()).ok_or(Error::TooLarge {
            what: "block size",
            value: b.len(),
            limit: k.len(),
        })?;
        Ok(acc * kb.clone())
    })
}

/// Moments of the free compression by a projection of trace `t`: `κ_j ↦ t^{j-1} κ_j`.
pub fn free_compress<T: Scalar>(m: &MomentSequence<T>, t: &T) -> Result<MomentSequence<T>> {
    if !t.is_positive() {
        return Err(Error::OutOfRange {
            name: "t",
            reason: format!("compression parameter {t:?} must be positive"),
        });
    }
    let kappa = moments_to_cumulants(m);
    Ok(cumulants_to_moments(&compress_cumulants(&kappa, t)))
}

pub fn compress_cumulants<T: Scalar>(k: &CumulantSequence<T>, t: &T) -> CumulantSequence<T> {
    let mut scale = T::one();
    let values = k
        .values
        .iter()
        .map(|v| {
            let out = v.clone() * scale.clone();
            scale = scale.clone() * t.clone();
            out
        })
        .collect();
    CumulantSequence::new(values)
}

/// Cumulants of the measure with moments `(t, t, t, …)`, the law of a projection of trace `t`.
pub fn projection_cumulants<T: Scalar>(t: &T, len: usize) -> CumulantSequence<T> {
    moments_to_cumulants(&MomentSequence::new(vec![t.clone(); len]))
}

/// Letters of a word in a free pair `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FreeLetter {
    A,
    B,
}

impl fmt::Display for FreeLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FreeLetter::A => "a",
            FreeLetter::B => "b",
        })
    }
}

pub fn format_free_word(word: &[FreeLetter]) -> String {
    word.iter().map(|l| l.to_string()).collect()
}

/// Parses a word such as `"abab"` or `"a b a"`.
pub fn parse_free_word(s: &str) -> Result<Vec<FreeLetter>> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != '*' && *c != '·')
        .map(|c| match c {
            'a' | 'A' => Ok(FreeLetter::A),
            'b' | 'B' => Ok(FreeLetter::B),
            other => Err(Error::InvalidWord(format!(
                "unexpected letter {other:?} in {s:?}"
            ))),
        })
        .collect()
}

/// Collapses cyclic runs of `b` (idempotence) and rotates so the word ends with `a`
/// (traciality). A word without `a` becomes the single letter `b`.
pub fn normalize_free_word(word: &[FreeLetter]) -> Result<Vec<FreeLetter>> {
    if word.is_empty() {
        return Err(Error::InvalidWord("empty word".into()));
    }
    let Some(last_a) = word.iter().rposition(|&l| l == FreeLetter::A) else {
        return Ok(vec![FreeLetter::B]);
    };
    let len = word.len();
    let rotated: Vec<FreeLetter> = (0..len).map(|i| word[(last_a + 1 + i) % len]).collect();
    Ok(rotated
        .iter()
        .enumerate()
        .filter(|&(i, &l)| !(l == FreeLetter::B && rotated[(i + 1) % len] == FreeLetter::B))
        .map(|(_, &l)| l)
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixedMoment<T: Scalar> {
    pub word: Vec<FreeLetter>,
    pub normalized: Vec<FreeLetter>,
    pub value: T,
}

/// `φ(A_1⋯A_m)` for free `a` (given by its cumulants) and a projection `b` of trace `tr_b`:
/// the sum over noncrossing partitions `π` of the `a`-positions of
/// `C_π(a) · tr_b^{|τ|}`, where `τ` is the largest partition of the
/// `b`-positions keeping `π ∪ τ` noncrossing.
pub fn free_mixed_moment<T: Scalar>(
    word: &[FreeLetter],
    cum_a: &CumulantSequence<T>,
    tr_b: &T,
) -> Result<MixedMoment<T>> {
    let normalized = normalize_free_word(word)?;
    let a_pos: Vec<usize> = positions_of(&normalized, FreeLetter::A);
    let b_pos: Vec<usize> = positions_of(&normalized, FreeLetter::B);
    let mut value = T::zero();
    for p in enumerate_nc_on(&a_pos, 1) {
        let c = partition_product(cum_a, &p)?;
        if c.is_zero() {
            continue;
        }
        let tau = max_compatible(&b_pos, &p)?;
        value = value + c * pow(tr_b, tau.num_blocks());
    }
    Ok(MixedMoment {
        word: word.to_vec(),
        normalized,
        value,
    })
}

/// Independent evaluation of the same mixed moment: the full sum over
/// `NC(m)` where mixed blocks vanish, `a`-blocks give `κ(a)` and `b`-blocks
/// give the cumulants of the law with all moments equal to `tr_b`.
pub fn vanishing_mixed_cumulant_expansion<T: Scalar>(
    word: &[FreeLetter],
    cum_a: &CumulantSequence<T>,
    tr_b: &T,
) -> Result<T> {
    if word.is_empty() {
        return Err(Error::InvalidWord("empty word".into()));
    }
    let cum_b = projection_cumulants(tr_b, word.len());
    let ground: Vec<usize> = (1..=word.len()).collect();
    let mut total = T::zero();
    'partitions: for p in enumerate_nc_on(&ground, 1) {
        let mut term = T::one();
        for b in p.blocks() {
            let letter = word[b[0] - 1];
            if b.iter().any(|&x| word[x - 1] != letter) {
                continue 'partitions;
            }
            let source = if letter == FreeLetter::A {
                cum_a
            } else {
                &cum_b
            };
            let kb = source.get(b.len()).ok_or(Error::TooLarge {
                what: "block size",
                value: b.len(),
                limit: source.len(),
            })?;
            term = term * kb.clone();
        }
        total = total + term;
    }
    Ok(total)
}

fn positions_of(word: &[FreeLetter], letter: FreeLetter) -> Vec<usize> {
    word.iter()
        .enumerate()
        .filter(|(_, &l)| l == letter)
        .map(|(i, _)| i + 1)
        .collect()
}

pub(crate) fn pow<T: Scalar>(x: &T, e: usize) -> T {
    (0..e).fold(T::one(), |acc, _| acc * x.clone())
}

/// Determinants of the Hankel matrices `[m_{i+j}]_{0≤i,j≤r}` for `r = 0..=L/2`,
/// with `m_0 = 1`. All are nonnegative for a moment sequence of a measure.
pub fn hankel_determinants<T: Scalar>(m: &MomentSequence<T>) -> Vec<T> {
    let mut full = vec![T::one()];
    full.extend(m.values.iter().cloned());
    (0..=m.len() / 2)
        .map(|r| {
            let mat: Vec<Vec<T>> = (0..=r)
                .map(|i| (0..=r).map(|j| full[i + j].clone()).collect())
                .collect();
            determinant(mat)
        })
        .collect()
}

fn determinant<T: Scalar>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    let mut det = T::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return T::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * p.clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() / p.clone();
            let (top, bottom) = a.split_at_mut(r);
            for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = x.clone() - y.clone() * factor.clone();
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::enumerate_nc;

    fn q(p: i64, r: i64) -> Rational {
        Rational::new(p.into(), r.into())
    }

    fn qs(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    /// Oracle: `m_j = Σ_{π∈NC(j)} C_π` by explicit enumeration.
    fn brute_moments(k: &CumulantSequence<Rational>) -> Vec<Rational> {
        (1..=k.len())
            .map(|j| {
                enumerate_nc(j, 1)
                    .unwrap()
                    .iter()
                    .map(|p| cumulant_of_partition(k, p).unwrap())
                    .fold(q(0, 1), |a, b| a + b)
            })
            .collect()
    }

    #[test]
    fn moments_of_simple_measures() {
        let dirac = AtomicMeasure::dirac(q(0, 1));
        assert_eq!(moments(&dirac, 4).values(), qs(&[0, 0, 0, 0]).as_slice());
        let bern = AtomicMeasure::new(vec![(q(1, 1), q(1, 2)), (q(-1, 1), q(1, 2))]).unwrap();
        assert_eq!(moments(&bern, 4).values(), qs(&[0, 1, 0, 1]).as_slice());
    }

    #[test]
    fn measure_validation() {
        assert!(AtomicMeasure::new(vec![(q(1, 1), q(1, 2))]).is_err());
        assert!(AtomicMeasure::new(vec![(q(1, 1), q(1, 2)), (q(1, 1), q(1, 2))]).is_err());
        assert!(AtomicMeasure::new(vec![(q(1, 1), q(3, 2)), (q(2, 1), q(-1, 2))]).is_err());
        assert!(AtomicMeasure::<f64>::new(vec![(0.0, 0.1 + 0.2), (1.0, 0.7)]).is_ok());
    }

    #[test]
    fn semicircle_cumulants() {
        let m = MomentSequence::new(qs(&[0, 1, 0, 2, 0, 5, 0, 14]));
        let k = moments_to_cumulants(&m);
        assert_eq!(k.values(), qs(&[0, 1, 0, 0, 0, 0, 0, 0]).as_slice());
        assert_eq!(cumulants_to_moments(&k), m);
    }

    #[test]
    fn dirac_cumulants() {
        let m = moments(&AtomicMeasure::dirac(q(3, 2)), 6);
        let k = moments_to_cumulants(&m);
        assert_eq!(k.get(1), Some(&q(3, 2)));
        assert!(k.values()[1..].iter().all(|x| *x == q(0, 1)));
        assert_eq!(cumulants_to_moments(&k), m);
        assert_eq!(brute_moments(&k), m.values());
    }

    #[test]
    fn zero_sequence() {
        let m = MomentSequence::new(qs(&[0, 0, 0]));
        assert_eq!(moments_to_cumulants(&m).values(), qs(&[0, 0, 0]).as_slice());
    }

    #[test]
    fn recursion_matches_nc_sum() {
        let k = CumulantSequence::new(vec![
            q(1, 2),
            q(-2, 3),
            q(5, 1),
            q(1, 7),
            q(0, 1),
            q(-3, 2),
            q(2, 5),
        ]);
        assert_eq!(
            cumulants_to_moments(&k).values(),
            brute_moments(&k).as_slice()
        );
    }

    #[test]
    fn cumulants_of_partitions() {
        let semi = CumulantSequence::new(qs(&[0, 1, 0, 0]));
        let p: SetPartition = "[[1,2],[3,4]]".parse().unwrap();
        assert_eq!(cumulant_of_partition(&semi, &p).unwrap(), q(1, 1));
        assert_eq!(
            cumulant_of_partition(&semi, &SetPartition::full(3)).unwrap(),
            q(0, 1)
        );
        assert_eq!(
            cumulant_of_partition(&semi, &SetPartition::singletons(&[1, 2])).unwrap(),
            q(0, 1)
        );
        let crossing: SetPartition = "[[1,3],[2,4]]".parse().unwrap();
        assert!(cumulant_of_partition(&semi, &crossing).is_err());
        assert!(cumulant_of_partition(&semi, &SetPartition::full(5)).is_err());
    }

    #[test]
    fn compression() {
        let m = MomentSequence::new(qs(&[0, 1, 0, 2, 0, 5]));
        assert_eq!(free_compress(&m, &q(1, 1)).unwrap(), m);
        let half = free_compress(&m, &q(1, 2)).unwrap();
        let expected = cumulants_to_moments(&CumulantSequence::new(vec![
            q(0, 1),
            q(1, 2),
            q(0, 1),
            q(0, 1),
            q(0, 1),
            q(0, 1),
        ]));
        assert_eq!(half, expected);
        let dirac0 = moments(&AtomicMeasure::dirac(q(0, 1)), 5);
        assert_eq!(free_compress(&dirac0, &q(1, 3)).unwrap(), dirac0);
        assert!(free_compress(&m, &q(0, 1)).is_err());
        assert!(free_compress(&m, &q(-1, 2)).is_err());
    }

    #[test]
    fn word_normalization() {
        let w = |s: &str| parse_free_word(s).unwrap();
        assert_eq!(normalize_free_word(&w("ab")).unwrap(), w("ba"));
        assert_eq!(normalize_free_word(&w("babb")).unwrap(), w("ba"));
        assert_eq!(normalize_free_word(&w("bbabba")).unwrap(), w("baba"));
        assert_eq!(normalize_free_word(&w("bbb")).unwrap(), w("b"));
        assert!(normalize_free_word(&[]).is_err());
        assert!(parse_free_word("abc").is_err());
    }

    #[test]
    fn mixed_moment_examples() {
        let k = CumulantSequence::new(vec![q(1, 3), q(2, 1), q(-1, 2), q(3, 1)]);
        let m = cumulants_to_moments(&k);
        let w = |s: &str| parse_free_word(s).unwrap();
        let t = q(2, 5);
        assert_eq!(
            free_mixed_moment(&w("aaa"), &k, &t).unwrap().value,
            m.values()[2]
        );
        assert_eq!(
            free_mixed_moment(&w("ba"), &k, &t).unwrap().value,
            t.clone() * q(1, 3)
        );
        for word in ["abab", "baba", "aabb", "bbaab"] {
            let got = free_mixed_moment(&w(word), &k, &t).unwrap().value;
            let oracle = vanishing_mixed_cumulant_expansion(&w(word), &k, &t).unwrap();
            assert_eq!(got, oracle, "word {word}");
        }
        assert_eq!(free_mixed_moment(&w("bb"), &k, &t).unwrap().value, t);
    }

    #[test]
    fn free_mixed_moment_is_generic() {
        let k = CumulantSequence::new(vec![0.0, 1.0, 0.0, 0.0]);
        let v = free_mixed_moment(&parse_free_word("baba").unwrap(), &k, &0.5f64).unwrap();
        // φ(b a b a) with κ_1 = 0: only π = {{2,4}}, τ = {{1},{3}}
        assert!((v.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn hankel_of_two_atoms() {
        let mu = AtomicMeasure::new(vec![(q(2, 1), q(1, 3)), (q(-1, 1), q(2, 3))]).unwrap();
        let h = hankel_determinants(&moments(&mu, 4));
        assert_eq!(h[0], q(1, 1));
        assert!(h[1].is_positive());
        // two atoms: the 3x3 Hankel matrix is singular
        assert_eq!(h[2], q(0, 1));
    }

    #[test]
    fn sequences_serialize_as_rational_strings() {
        let m = MomentSequence::new(vec![q(3, 7), q(-2, 1)]);
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"["3/7","-2"]"#);
    }
}
