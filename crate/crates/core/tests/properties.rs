use proptest::prelude::*;

use weil_core::canonical::{weil_rep, CanonicalSpace};
use weil_core::cyclotomic::{legendre, psi, CycNum, Rational};
use weil_core::field::PrimeField;
use weil_core::heisenberg::{heis_elements, heis_mul, sp_act_heis, HeisElement, Model};
use weil_core::intertwine::Transport;
use weil_core::symplectic::{
    discriminant, discriminant_by_diagonalization, orientation_decompose, sample_sp, wedge_pairing,
    wedge_pairing_frames, SymplecticSpace,
};

fn prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(3u64), Just(5), Just(7)]
}

fn cyc(p: u64) -> impl Strategy<Value = CycNum> {
    prop::collection::vec(-20i64..=20, (p - 1) as usize).prop_map(move |c| {
        CycNum::from_coeffs(p, c.into_iter().map(|x| Rational::from_integer(x.into())).collect()).unwrap()
    })
}

fn prime_and_pair() -> impl Strategy<Value = (u64, CycNum, CycNum)> {
    prime().prop_flat_map(|p| (Just(p), cyc(p), cyc(p)))
}

fn space() -> impl Strategy<Value = SymplecticSpace> {
    prop_oneof![
        Just(SymplecticSpace::standard(3, 1).unwrap()),
        Just(SymplecticSpace::standard(5, 1).unwrap()),
        Just(SymplecticSpace::standard(3, 2).unwrap()),
    ]
}

fn heis_triple(p: u64, n: usize) -> impl Strategy<Value = [HeisElement; 3]> {
    let one = (prop::collection::vec(0..p, 2 * n), 0..p).prop_map(|(v, z)| HeisElement::new(v, z));
    [one.clone(), one.clone(), one]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn psi_is_a_character(p in prime(), a in 0u64..7, b in 0u64..7) {
        let (a, b) = (a % p, b % p);
        prop_assert_eq!(&psi(a, p).unwrap() * &psi(b, p).unwrap(), psi((a + b) % p, p).unwrap());
    }

    #[test]
    fn legendre_is_multiplicative(p in prime(), a in 1u64..7, b in 1u64..7) {
        let (a, b) = (a % p, b % p);
        prop_assume!(a != 0 && b != 0);
        prop_assert_eq!(legendre(a * b % p, p).unwrap(), legendre(a, p).unwrap() * legendre(b, p).unwrap());
    }

    #[test]
    fn division_inverts_multiplication((_p, a, b) in prime_and_pair()) {
        prop_assume!(!b.is_zero());
        let q = (&a * &b).checked_div(&b).unwrap();
        prop_assert_eq!(&q, &a);
        prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a);
    }

    #[test]
    fn conjugation_matches_floats((_p, a, _b) in prime_and_pair()) {
        let (re, im) = a.to_float();
        let (cre, cim) = a.conj().to_float();
        prop_assert!((re - cre).abs() < 1e-9 && (im + cim).abs() < 1e-9);
    }

    #[test]
    fn discriminant_routes_agree(
        p in prime(),
        k in 1usize..=4,
        seed in prop::collection::vec(0u64..7, 16),
    ) {
        let f = PrimeField::new(p).unwrap();
        let mut m = vec![vec![0u64; k]; k];
        for i in 0..k {
            for j in i..k {
                let x = seed[i * 4 + j] % p;
                m[i][j] = x;
                m[j][i] = x;
            }
        }
        prop_assume!(f.det(&m) != 0);
        prop_assert_eq!(discriminant(f, &m).unwrap(), discriminant_by_diagonalization(f, &m).unwrap());
    }

    #[test]
    fn heisenberg_is_associative(t in heis_triple(3, 1), u in heis_triple(5, 2)) {
        for (p, n, [a, b, c]) in [(3u64, 1usize, t), (5, 2, u)] {
            let s = SymplecticSpace::standard(p, n).unwrap();
            let left = heis_mul(&s, &heis_mul(&s, &a, &b).unwrap(), &c).unwrap();
            let right = heis_mul(&s, &a, &heis_mul(&s, &b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn sampled_elements_are_symplectic(s in space(), seed in any::<u64>()) {
        for g in sample_sp(&s, 3, seed) {
            let f = s.field();
            let m = g.mat();
            let lhs = f.mat_mul(&f.mat_mul(&f.transpose(m), s.gram()), m);
            prop_assert_eq!(&lhs, s.gram());
        }
    }

    #[test]
    fn orientation_rescale_scales_t(s in space(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), c in 1u64..7) {
        let c = c % s.p();
        prop_assume!(c != 0);
        let lags = s.oriented_lagrangians().unwrap();
        let (m, l) = (i.get(&lags), j.get(&lags));
        let t = Transport::new(&s);
        let base = t.t(m, l).unwrap();
        let sigma = Rational::from_integer((legendre(c, s.p()).unwrap() as i64).into());
        prop_assert_eq!(&*t.t(m, &l.rescaled(c).unwrap()).unwrap(), &base.scale_rational(&sigma));
        // the round trip forgets orientations
        let back = t.t(&l.rescaled(c).unwrap(), m).unwrap().mul(&t.t(m, &l.rescaled(c).unwrap()).unwrap());
        prop_assert!(back.is_identity());
    }

    #[test]
    fn regauging_keeps_the_normalization(s in space(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), t in 1u64..7) {
        let f = s.field();
        let t = t % s.p();
        prop_assume!(t != 0);
        let lags = s.oriented_lagrangians().unwrap();
        let (m, l) = (i.get(&lags), j.get(&lags));
        let inter = m.sub().intersect(l.sub()).unwrap();
        let (sm, sl) = (orientation_decompose(m, &inter).unwrap(), orientation_decompose(l, &inter).unwrap());
        let arg = |sm: &weil_core::symplectic::OrientationSplit, sl: &weil_core::symplectic::OrientationSplit| {
            let w = wedge_pairing_frames(&s, &sl.quotient, &sm.quotient).unwrap();
            legendre(f.mul(w, f.mul(sl.iota, f.inv(sm.iota).unwrap())), s.p()).unwrap()
        };
        prop_assert_eq!(arg(&sm, &sl), arg(&sm.regauged(t).unwrap(), &sl.regauged(t).unwrap()));
    }

    #[test]
    fn egorov_on_random_elements(s in space(), seed in any::<u64>(), k in any::<prop::sample::Index>()) {
        let holder = CanonicalSpace::new(&s).unwrap();
        let model = holder.base_model();
        let hs = heis_elements(&s);
        let h = k.get(&hs);
        let g = sample_sp(&s, 1, seed).remove(0);
        let rho = weil_rep(&holder, &g).unwrap().mat;
        prop_assert_eq!(rho.mul(&model.pi_matrix(h)), model.pi_matrix(&sp_act_heis(&g, h)).mul(&rho));
    }

    #[test]
    fn rho_is_a_homomorphism(s in space(), a in any::<u64>(), b in any::<u64>()) {
        let holder = CanonicalSpace::new(&s).unwrap();
        let g1 = sample_sp(&s, 1, a).remove(0);
        let g2 = sample_sp(&s, 1, b).remove(0);
        let lhs = weil_rep(&holder, &g1.compose(&g2).unwrap()).unwrap().mat;
        let rhs = weil_rep(&holder, &g1).unwrap().mat.mul(&weil_rep(&holder, &g2).unwrap().mat);
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn gauss_identity_table() {
    for p in [3u64, 5, 7] {
        for n in 1..=3 {
            let (lhs, rhs) = weil_core::verify::gauss_identity(p, n).unwrap();
            assert_eq!(lhs, rhs, "p={p} n={n}");
        }
    }
}

#[test]
fn lagrangian_counts_match_brute_force() {
    for (p, n, expected) in [(3u64, 1usize, 4usize), (3, 2, 40), (5, 1, 6)] {
        let s = SymplecticSpace::standard(p, n).unwrap();
        let lags = s.lagrangians().unwrap();
        assert_eq!(lags.len(), expected);
        for l in &lags {
            for a in l.rows() {
                for b in l.rows() {
                    assert_eq!(s.form(a, b), 0);
                }
            }
        }
        // brute force: n-subsets of vectors spanning an isotropic n-space
        let f = s.field();
        let vectors: Vec<Vec<u64>> = (1..(p as usize).pow(2 * n as u32))
            .map(|i| weil_core::field::lex_vector(i, 2 * n, p))
            .collect();
        let mut found = std::collections::BTreeSet::new();
        let mut stack: Vec<(usize, Vec<Vec<u64>>)> = vec![(0, vec![])];
        while let Some((start, chosen)) = stack.pop() {
            if chosen.len() == n {
                found.insert(s.subspace(&chosen).unwrap().rows().clone());
                continue;
            }
            for (k, v) in vectors.iter().enumerate().skip(start) {
                if chosen.iter().all(|c| s.form(c, v) == 0) {
                    let mut next = chosen.clone();
                    next.push(v.clone());
                    if f.rank(&next) == next.len() {
                        stack.push((k + 1, next));
                    }
                }
            }
        }
        assert_eq!(found.len(), expected, "p={p} n={n}");
    }
}

#[test]
fn wedge_detects_general_position() {
    for (p, n) in [(3u64, 1usize), (5, 1), (3, 2)] {
        let s = SymplecticSpace::standard(p, n).unwrap();
        let f = s.field();
        let lags = s.oriented_lagrangians().unwrap();
        for l in &lags {
            for m in &lags {
                let w = wedge_pairing(&s, l, m).unwrap();
                assert_eq!(w != 0, s.in_general_position(l.sub(), m.sub()));
                assert_eq!(w, f.mul(f.sign(n as u64), wedge_pairing(&s, m, l).unwrap()));
            }
        }
    }
}

#[test]
fn center_is_exactly_the_commuting_set() {
    let s = SymplecticSpace::standard(3, 1).unwrap();
    let all = heis_elements(&s);
    for h in &all {
        let central = all
            .iter()
            .all(|x| heis_mul(&s, h, x).unwrap() == heis_mul(&s, x, h).unwrap());
        assert_eq!(central, h.is_central());
    }
}

#[test]
fn every_model_has_dimension_p_to_the_n() {
    for (p, n) in [(3u64, 1usize), (5, 1), (3, 2)] {
        let s = SymplecticSpace::standard(p, n).unwrap();
        for l in s.oriented_lagrangians().unwrap() {
            assert_eq!(Model::new(&s, &l).unwrap().dim(), (p as usize).pow(n as u32));
        }
    }
}
