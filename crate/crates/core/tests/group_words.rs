use halfint_core::group::{
    coset_times, coset_u, decompose_gamma04star, decompose_psl2z, decompose_theta, kappa, CosetRep, Generator,
    GroupElement, GroupTag, Word,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_word(rng: &mut ChaCha8Rng, group: GroupTag, max_len: usize) -> Word {
    let gens = group.generators();
    let len = rng.gen_range(0..=max_len);
    let mut w = Word::empty(group);
    for _ in 0..len {
        let g = gens[rng.gen_range(0..gens.len())];
        let e = match g {
            Generator::NegOne | Generator::W4 | Generator::S => 1,
            _ => {
                let e = rng.gen_range(1..=3);
                if rng.gen_bool(0.5) {
                    e
                } else {
                    -e
                }
            }
        };
        w.push(g, e);
    }
    w
}

#[test]
fn gamma04star_words_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let g = random_word(&mut rng, GroupTag::Gamma04Star, 30).recompose();
        let w = decompose_gamma04star(&g).unwrap_or_else(|e| panic!("{g}: {e}"));
        assert_eq!(w.recompose(), g);
    }
}

#[test]
fn theta_words_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let g = random_word(&mut rng, GroupTag::H2, 30).recompose();
        assert!(g.in_theta_group());
        let w = decompose_theta(&g).unwrap_or_else(|e| panic!("{g}: {e}"));
        assert_eq!(w.recompose(), g);
    }
}

#[test]
fn psl2z_words_round_trip_and_theta_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut members = 0;
    for _ in 0..1000 {
        let g = random_word(&mut rng, GroupTag::Psl2Z, 30).recompose();
        assert_eq!(decompose_psl2z(&g).unwrap().recompose(), g);
        let theta = decompose_theta(&g);
        assert_eq!(theta.is_ok(), g.in_theta_group(), "{g}");
        if let Ok(w) = theta {
            members += 1;
            assert_eq!(w.recompose(), g);
        }
    }
    // a third of SL2(Z) lies in the theta group; the sample should see plenty
    assert!(members > 100);
}

#[test]
fn kappa_cocycle_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let g = random_word(&mut rng, GroupTag::Psl2Z, 8).recompose();
        let h = random_word(&mut rng, GroupTag::Psl2Z, 8).recompose();
        let x = CosetRep::ALL[rng.gen_range(0..3)];
        let lhs = kappa(x, &g.mul(&h)).unwrap();
        let xg = coset_times(x, &g).unwrap();
        let rhs = kappa(x, &g).unwrap().mul(&kappa(xg, &h).unwrap());
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn fricke_square_is_central_sign() {
    let w4 = GroupElement::fricke(4);
    let w = decompose_gamma04star(&w4.pow(2)).unwrap();
    assert_eq!(w.letters, vec![(Generator::NegOne, 1)]);
}

proptest! {
    #[test]
    fn coset_invariant_under_theta_group(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_word(&mut rng, GroupTag::H2, 10).recompose();
        let x = random_word(&mut rng, GroupTag::Psl2Z, 10).recompose();
        prop_assert_eq!(coset_u(&h.mul(&x)).unwrap(), coset_u(&x).unwrap());
    }

    #[test]
    fn inverse_word_recomposes_to_inverse(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_word(&mut rng, GroupTag::Gamma04Star, 12);
        prop_assert!(w.recompose().mul(&w.inverse().recompose()) == GroupElement::identity());
    }
}
