use jmfree::characters::{partitions_of, YoungDiagram};
use jmfree::free_prob::{
    compress_cumulants, cumulants_to_moments, free_compress, free_mixed_moment,
    hankel_determinants, moments, moments_to_cumulants, vanishing_mixed_cumulant_expansion,
    CumulantSequence, FreeLetter, MomentSequence,
};
use jmfree::model::{moment_via_partitions, state, tuple_state, JmWord, Letter, Model};
use jmfree::partitions::{enumerate_nc, is_noncrossing, kreweras, max_compatible, SetPartition};
use jmfree::symmetric::{GroupAlgebraElement, Permutation};
use jmfree::Rational;
use num_traits::Signed;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn positive_fraction() -> impl Strategy<Value = Rational> {
    (1i64..=8, 1i64..=8).prop_map(|(a, b)| Rational::new(a.min(b).into(), a.max(b).into()))
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(&v).unwrap())
}

fn element(n: usize) -> impl Strategy<Value = GroupAlgebraElement<Rational>> {
    prop::collection::vec((permutation(n), rational()), 0..5)
        .prop_map(move |terms| GroupAlgebraElement::from_terms(n, terms).unwrap())
}

fn nc_partition(max: usize) -> impl Strategy<Value = SetPartition> {
    (1..=max).prop_flat_map(|m| {
        let all = enumerate_nc(m, 1).unwrap();
        prop::sample::select(all)
    })
}

fn free_word(max: usize) -> impl Strategy<Value = Vec<FreeLetter>> {
    prop::collection::vec(
        prop_oneof![Just(FreeLetter::A), Just(FreeLetter::B)],
        1..=max,
    )
}

fn model_word(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        prop_oneof![Just(Letter::X), Just(Letter::PX), Just(Letter::P)],
        1..=max,
    )
}

fn diagram(max: usize) -> impl Strategy<Value = YoungDiagram> {
    (1..=max).prop_flat_map(|n| prop::sample::select(partitions_of(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_laws(a in permutation(6), b in permutation(6), c in permutation(6)) {
        prop_assert_eq!(a.compose(&b).unwrap().compose(&c).unwrap(), a.compose(&b.compose(&c).unwrap()).unwrap());
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
        prop_assert_eq!(a.inverse().cycle_type(), a.cycle_type());
        let ab = a.compose(&b).unwrap().reduced_length() as i64;
        prop_assert!(ab <= (a.reduced_length() + b.reduced_length()) as i64);
        prop_assert_eq!((ab - a.reduced_length() as i64 - b.reduced_length() as i64).rem_euclid(2), 0);
    }

    #[test]
    fn permutation_text_round_trips(a in permutation(7)) {
        let parsed = jmfree::symmetric::parse_cycles(&a.to_string(), 7).unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn algebra_is_associative(a in element(4), b in element(4), c in element(4)) {
        for opposite in [false, true] {
            let left = a.multiply(&b, opposite).unwrap().multiply(&c, opposite).unwrap();
            let right = a.multiply(&b.multiply(&c, opposite).unwrap(), opposite).unwrap();
            prop_assert_eq!(left, right);
        }
        let flipped = b.multiply(&a, false).unwrap();
        prop_assert_eq!(a.multiply(&b, true).unwrap(), flipped);
    }

    #[test]
    fn moment_cumulant_round_trip(values in prop::collection::vec(rational(), 1..=10)) {
        let m = MomentSequence::new(values);
        prop_assert_eq!(cumulants_to_moments(&moments_to_cumulants(&m)), m);
    }

    #[test]
    fn compression_is_a_semigroup(values in prop::collection::vec(rational(), 1..=10), s in positive_fraction(), t in positive_fraction()) {
        let k = CumulantSequence::new(values);
        let twice = compress_cumulants(&compress_cumulants(&k, &s), &t);
        let once = compress_cumulants(&k, &(&s * &t));
        prop_assert_eq!(&twice, &once);
        for j in 1..=k.len() {
            let scale = (0..j - 1).fold(Rational::from_integer(1.into()), |acc, _| acc * &s * &t);
            prop_assert_eq!(twice.get(j).unwrap(), &(k.get(j).unwrap() * scale));
        }
    }

    #[test]
    fn compressed_transition_moments_stay_positive(lambda in diagram(6), t in prop::sample::select(vec![(1, 4), (1, 2), (3, 4)])) {
        let t = Rational::new(t.0.into(), t.1.into());
        let m = moments(&jmfree::characters::transition_measure(&lambda).to_measure::<Rational>(), 8);
        let c = free_compress(&m, &t).unwrap();
        for d in hankel_determinants(&c) {
            prop_assert!(!d.is_negative(), "λ={} t={}", lambda, t);
        }
    }

    #[test]
    fn kreweras_properties(p in nc_partition(8)) {
        let m = p.ground_size();
        let k = kreweras(&p).unwrap();
        prop_assert!(is_noncrossing(&k));
        prop_assert_eq!(p.num_blocks() + k.num_blocks(), m + 1);
        prop_assert_eq!(kreweras(&k).unwrap(), p.rotate(m, m - 1));
    }

    #[test]
    fn max_compatible_is_noncrossing_with_its_input(p in nc_partition(6), extra in prop::collection::vec(1usize..=6, 0..6)) {
        // Place p on odd points and the extra positions on even points.
        let p2 = SetPartition::new(p.blocks().iter().map(|b| b.iter().map(|x| 2 * x - 1).collect()).collect()).unwrap();
        let positions: Vec<usize> = extra.iter().map(|x| 2 * x).collect();
        let tau = max_compatible(&positions, &p2).unwrap();
        if !positions.is_empty() {
            prop_assert!(is_noncrossing(&p2.union(&tau).unwrap()));
        }
    }

    #[test]
    fn free_formula_matches_vanishing_cumulants(word in free_word(7), kappa in prop::collection::vec(rational(), 7), tr in positive_fraction()) {
        let k = CumulantSequence::new(kappa);
        let formula = free_mixed_moment(&word, &k, &tr).unwrap();
        let oracle = vanishing_mixed_cumulant_expansion(&word, &k, &tr).unwrap();
        prop_assert_eq!(&formula.value, &oracle);
        let normalized = vanishing_mixed_cumulant_expansion(&formula.normalized, &k, &tr).unwrap();
        prop_assert_eq!(&formula.value, &normalized);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn state_is_tracial(u in model_word(3), v in model_word(3), lambda in diagram(4), k_frac in 0usize..=4) {
        let k = k_frac.min(lambda.size());
        let uv: Vec<Letter> = u.iter().chain(&v).copied().collect();
        let vu: Vec<Letter> = v.iter().chain(&u).copied().collect();
        let a = JmWord::new(uv, k, lambda.clone(), Model::Right).unwrap();
        let b = JmWord::new(vu, k, lambda, Model::Right).unwrap();
        prop_assert_eq!(state::<Rational>(&a).unwrap(), state::<Rational>(&b).unwrap());
    }

    #[test]
    fn projection_is_idempotent_inside_words(u in model_word(3), v in model_word(3), lambda in diagram(4), k in 0usize..=4) {
        let k = k.min(lambda.size());
        let once: Vec<Letter> = u.iter().copied().chain([Letter::P]).chain(v.iter().copied()).collect();
        let twice: Vec<Letter> = u.iter().copied().chain([Letter::P, Letter::P]).chain(v.iter().copied()).collect();
        let a = JmWord::new(once, k, lambda.clone(), Model::Right).unwrap();
        let b = JmWord::new(twice, k, lambda, Model::Right).unwrap();
        prop_assert_eq!(state::<Rational>(&a).unwrap(), state::<Rational>(&b).unwrap());
    }

    #[test]
    fn routes_agree_on_raw_words(w in model_word(5), lambda in diagram(4), k in 0usize..=4) {
        let k = k.min(lambda.size());
        let word = JmWord::new(w, k, lambda, Model::Right).unwrap();
        let a = state::<Rational>(&word).unwrap();
        prop_assert_eq!(&a, &tuple_state::<Rational>(&word).unwrap());
        prop_assert_eq!(&a, &moment_via_partitions::<Rational>(&word).unwrap());
    }

    #[test]
    fn fixed_width_and_float_scalars_agree(w in model_word(4), lambda in diagram(4)) {
        let word = JmWord::new(w, lambda.size() / 2, lambda, Model::Right).unwrap();
        let exact = state::<Rational>(&word).unwrap();
        let small = state::<num_rational::Ratio<i64>>(&word).unwrap();
        prop_assert_eq!(Rational::new((*small.numer()).into(), (*small.denom()).into()), exact);
    }
}

/// Q-model values against the P-model on the reversed word, exhaustively.
#[test]
fn left_model_matches_reversed_right_model() {
    let alphabet = [Letter::X, Letter::PX, Letter::P];
    for n in 1..=5 {
        for lambda in partitions_of(n) {
            for k in 0..=n {
                for len in 1..=4u32 {
                    for code in 0..3usize.pow(len) {
                        let letters: Vec<Letter> = (0..len)
                            .map(|i| alphabet[code / 3usize.pow(i) % 3])
                            .collect();
                        let w = JmWord::new(letters, k, lambda.clone(), Model::Left).unwrap();
                        let right = w.reversed().with_model(Model::Right);
                        assert_eq!(
                            state::<Rational>(&w).unwrap(),
                            state::<Rational>(&right).unwrap(),
                            "λ={lambda} k={k} {:?}",
                            w.letters()
                        );
                    }
                }
            }
        }
    }
}
