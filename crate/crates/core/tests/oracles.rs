//! Brute-force oracles checked against the library.

use std::collections::{HashMap, HashSet, VecDeque};

use jmfree::characters::{
    character, class_size, dimension, partitions_of, removable_contents, transition_measure,
    YoungDiagram,
};
use jmfree::free_prob::{
    cumulants_to_moments, moments, moments_to_cumulants, CumulantSequence, MomentSequence,
};
use jmfree::model::{state, tuple_state, JmWord, Letter, Model};
use jmfree::partitions::{
    all_set_partitions, enumerate_nc, is_noncrossing, kreweras, AdmissibleDatum, SetPartition,
};
use jmfree::symmetric::Permutation;
use jmfree::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn q(p: i64, r: i64) -> Rational {
    Rational::new(p.into(), r.into())
}

type Poly = HashMap<Vec<u32>, BigInt>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `χ^λ(μ)` as the coefficient of `x^{λ+δ}` in `a_δ · p_μ` (Frobenius).
fn frobenius_character(lambda: &[usize], mu: &[usize], vars: usize) -> BigInt {
    let mut poly: Poly = Poly::new();
    // Vandermonde a_δ = Σ_w sgn(w) x^{w(δ)}
    for w in Permutation::all(vars) {
        let sign = if w.reduced_length() % 2 == 0 { 1 } else { -1 };
        let e: Vec<u32> = (0..vars).map(|i| (vars - w.apply(i + 1)) as u32).collect();
        *poly.entry(e).or_insert_with(BigInt::zero) += sign;
    }
    for &r in mu {
        let p: Poly = (0..vars)
            .map(|i| {
                let mut e = vec![0; vars];
                e[i] = r as u32;
                (e, BigInt::one())
            })
            .collect();
        poly = poly_mul(&poly, &p);
    }
    let target: Vec<u32> = (0..vars)
        .map(|i| (lambda.get(i).copied().unwrap_or(0) + vars - 1 - i) as u32)
        .collect();
    poly.get(&target).cloned().unwrap_or_else(BigInt::zero)
}

#[test]
fn characters_match_frobenius_formula() {
    for n in 1..=6 {
        for lambda in partitions_of(n) {
            for mu in partitions_of(n) {
                let expected = frobenius_character(lambda.rows(), mu.rows(), n);
                assert_eq!(
                    character(&lambda, mu.rows()).unwrap(),
                    expected,
                    "λ={lambda} μ={mu}"
                );
            }
        }
    }
}

fn count_standard_tableaux(rows: &[usize]) -> BigInt {
    if rows.iter().all(|&r| r == 0) {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for i in 0..rows.len() {
        let removable = rows[i] > 0 && rows.get(i + 1).is_none_or(|&next| next < rows[i]);
        if removable {
            let mut smaller = rows.to_vec();
            smaller[i] -= 1;
            total += count_standard_tableaux(&smaller);
        }
    }
    total
}

#[test]
fn hook_length_matches_tableaux_count() {
    for n in 0..=9 {
        for lambda in partitions_of(n) {
            assert_eq!(
                dimension(&lambda),
                count_standard_tableaux(lambda.rows()),
                "λ={lambda}"
            );
        }
    }
}

#[test]
fn class_sizes_count_permutations() {
    for n in 1..=6 {
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for p in Permutation::all(n) {
            *counts.entry(p.cycle_type()).or_default() += 1;
        }
        for (ct, c) in counts {
            assert_eq!(class_size(&ct), BigInt::from(c));
        }
    }
}

/// Kerov's interlacing formula: the weight at a minimum `x_k` is
/// `Π_i (x_k − y_i) / Π_{j≠k} (x_k − x_j)` over maxima `y_i`.
#[test]
fn transition_weights_match_interlacing_formula() {
    for n in 0..=8 {
        for lambda in partitions_of(n) {
            let mu = transition_measure(&lambda);
            let minima: Vec<i64> = mu.atoms().iter().map(|a| a.0).collect();
            let maxima = removable_contents(&lambda);
            assert_eq!(minima.len(), maxima.len() + 1);
            for (x, w) in mu.atoms() {
                let num: i64 = maxima.iter().map(|y| x - y).product();
                let den: i64 = minima.iter().filter(|&&m| m != *x).map(|m| x - m).product();
                assert_eq!(*w, q(num, den), "λ={lambda} x={x}");
            }
        }
    }
}

fn bfs_lengths(n: usize) -> HashMap<Permutation, usize> {
    let mut dist = HashMap::new();
    let start = Permutation::identity(n);
    dist.insert(start.clone(), 0);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        for i in 1..=n {
            for j in i + 1..=n {
                let next = p
                    .compose(&Permutation::transposition(n, i, j).unwrap())
                    .unwrap();
                if !dist.contains_key(&next) {
                    dist.insert(next.clone(), d + 1);
                    queue.push_back(next);
                }
            }
        }
    }
    dist
}

#[test]
fn reduced_length_matches_cayley_graph_distance() {
    for n in 1..=6 {
        let dist = bfs_lengths(n);
        assert_eq!(dist.len(), Permutation::all(n).len());
        for (p, d) in dist {
            assert_eq!(p.reduced_length(), d, "{p}");
        }
    }
}

#[test]
fn noncrossing_enumeration_matches_filtered_set_partitions() {
    for m in 1..=8 {
        let ground: Vec<usize> = (1..=m).collect();
        let brute: HashSet<SetPartition> = all_set_partitions(&ground)
            .into_iter()
            .filter(is_noncrossing)
            .collect();
        let fast: HashSet<SetPartition> = enumerate_nc(m, 1).unwrap().into_iter().collect();
        assert_eq!(brute, fast, "m={m}");
    }
}

/// `K(π)` is the coarsest partition of the primed points with `π ∪ K(π)` noncrossing.
#[test]
fn kreweras_is_the_coarsest_compatible_partition() {
    for m in 1..=7 {
        let ground: Vec<usize> = (1..=m).collect();
        let candidates = all_set_partitions(&ground);
        for p in enumerate_nc(m, 1).unwrap() {
            // Interleave: i ↦ 2i−1, i' ↦ 2i.
            let union_nc = |k: &SetPartition| {
                let mut blocks: Vec<Vec<usize>> = p
                    .blocks()
                    .iter()
                    .map(|b| b.iter().map(|x| 2 * x - 1).collect())
                    .collect();
                blocks.extend(k.blocks().iter().map(|b| b.iter().map(|x| 2 * x).collect()));
                is_noncrossing(&SetPartition::new(blocks).unwrap())
            };
            let best = candidates
                .iter()
                .filter(|k| union_nc(k))
                .min_by_key(|k| k.num_blocks())
                .unwrap();
            assert_eq!(&kreweras(&p).unwrap(), best, "π={p}");
        }
    }
}

/// Moments computed by the brute-force NC sum `Σ_{π ∈ NC(j)} Π κ_{|B|}`.
fn nc_moments(k: &[Rational]) -> Vec<Rational> {
    (1..=k.len())
        .map(|j| {
            enumerate_nc(j, 1)
                .unwrap()
                .iter()
                .map(|p| {
                    p.blocks()
                        .iter()
                        .map(|b| k[b.len() - 1].clone())
                        .product::<Rational>()
                })
                .sum()
        })
        .collect()
}

#[test]
fn cumulant_transforms_match_nc_sum() {
    let kappa = vec![
        q(1, 2),
        q(-3, 4),
        q(2, 1),
        q(0, 1),
        q(5, 3),
        q(-1, 7),
        q(1, 1),
    ];
    let m = cumulants_to_moments(&CumulantSequence::new(kappa.clone()));
    assert_eq!(m.values(), nc_moments(&kappa).as_slice());
    assert_eq!(moments_to_cumulants(&m).values(), kappa.as_slice());
}

#[test]
fn semicircle_cumulants() {
    let m = MomentSequence::new(vec![
        q(0, 1),
        q(1, 1),
        q(0, 1),
        q(2, 1),
        q(0, 1),
        q(5, 1),
        q(0, 1),
        q(14, 1),
    ]);
    let k = moments_to_cumulants(&m);
    let expected: Vec<Rational> = (1..=8).map(|j| q((j == 2) as i64, 1)).collect();
    assert_eq!(k.values(), expected.as_slice());
}

/// The free cumulants of the projection law all come from the NC sum.
#[test]
fn bernoulli_moments_are_constant() {
    let t = q(2, 7);
    let k = moments_to_cumulants(&MomentSequence::new(vec![t.clone(); 6]));
    assert_eq!(nc_moments(k.values()), vec![t; 6]);
}

/// Direct evaluation of the tuple sum by explicit products, without the
/// cycle-type cache.
fn naive_tuple_state(word: &JmWord) -> Rational {
    let n = word.n();
    let letters = word.letters();
    let len = letters.len();
    let mut total = Rational::zero();
    let mut idx = vec![0usize; len];
    loop {
        let ok = (0..len).all(|j| idx[j] != idx[(j + 1) % len])
            && (0..len).all(|j| letters[j] != Letter::PX || idx[j] <= word.k());
        if ok {
            let mut p = Permutation::identity(n);
            for j in 0..len {
                let (a, b) = (idx[j], idx[(j + 1) % len]);
                if a != 0 && b != 0 {
                    p = p
                        .compose(&Permutation::transposition(n, a, b).unwrap())
                        .unwrap();
                }
            }
            total += jmfree::characters::normalized_trace(word.diagram(), &p).unwrap();
        }
        let mut pos = 0;
        loop {
            if pos == len {
                return total / q(n as i64 + 1, 1);
            }
            idx[pos] += 1;
            if idx[pos] <= n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[test]
fn tuple_route_matches_naive_sum() {
    use Letter::*;
    for lambda in [vec![3], vec![2, 1], vec![2, 2], vec![3, 1]] {
        let d = YoungDiagram::new(lambda).unwrap();
        for k in 0..=d.size() {
            for letters in [
                vec![X, X, X],
                vec![PX, X, X],
                vec![PX, X, PX, X],
                vec![X, PX, PX, X],
            ] {
                let w = JmWord::new(letters, k, d.clone(), Model::Right).unwrap();
                let naive = naive_tuple_state(&w);
                assert_eq!(tuple_state::<Rational>(&w).unwrap(), naive);
                assert_eq!(state::<Rational>(&w).unwrap(), naive);
            }
        }
    }
}

#[test]
fn transition_moments_of_one_row() {
    for n in 1..=6usize {
        let mu = transition_measure(&YoungDiagram::new(vec![n]).unwrap()).to_measure::<Rational>();
        let m = moments(&mu, 6);
        for j in 1..=6u32 {
            let ni = n as i64;
            let expected = q(ni.pow(j) + ni * if j % 2 == 0 { 1 } else { -1 }, ni + 1);
            assert_eq!(m.values()[j as usize - 1], expected);
        }
    }
}

#[test]
fn admissible_datum_rejects_adjacent_positions() {
    let p = SetPartition::new(vec![vec![1, 2], vec![3]]).unwrap();
    assert!(AdmissibleDatum::new(3, vec![], p).is_err());
    let p = SetPartition::new(vec![vec![1, 3], vec![2], vec![4]]).unwrap();
    assert!(AdmissibleDatum::new(4, vec![], p).is_ok());
}
