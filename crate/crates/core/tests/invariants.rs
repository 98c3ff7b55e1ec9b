use heckekit::checks::determinantal_quotient;
use heckekit::cyclotomic::{CyclotomicNumber, TorusPointFiniteOrder};
use heckekit::kottwitz::{self, to_rational_vec};
use heckekit::root_datum::{automorphism_from_permutation, preset, DiagramAutomorphism, RootDatum};
use heckekit::transfer::{ClassFunction, ClassPoint, HeckeTransfer, Side, TorusType};
use heckekit::weights::{self, WeightFunction};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn group(k: usize) -> RootDatum {
    match k % 6 {
        0 => preset("GL", 3).unwrap(),
        1 => preset("B-ad", 2).unwrap(),
        2 => preset("G2", 2).unwrap(),
        3 => preset("Sp", 4).unwrap(),
        4 => preset("A-sc", 3).unwrap(),
        _ => preset("SO-even", 6).unwrap(),
    }
}

fn cochar(d: &RootDatum, raw: &[i64]) -> Vec<i64> {
    raw.iter().cycle().take(d.rank()).copied().collect()
}

fn dominant_from_labels(d: &RootDatum, raw: &[i64]) -> Vec<i64> {
    let labels: Vec<i64> = raw.iter().cycle().take(d.semisimple_rank()).copied().collect();
    d.cochar_with_labels(&labels).unwrap().unwrap_or_else(|| d.dominant(&cochar(d, raw)))
}

fn cyc(order: u64, coeffs: &[i64]) -> CyclotomicNumber {
    let mut acc = CyclotomicNumber::zero(order);
    for (k, &c) in coeffs.iter().enumerate() {
        acc = acc.add(&CyclotomicNumber::zeta_pow(order, k as i64).scale(&BigRational::from_integer(c.into())));
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dominant_representative_is_dominant_and_in_orbit(k in 0usize..6, raw in prop::collection::vec(-4i64..=4, 4)) {
        let d = group(k);
        let l = cochar(&d, &raw);
        let (dom, w) = d.dominant_representative(&l).unwrap();
        prop_assert!(d.is_dominant(&dom));
        prop_assert_eq!(w.apply(&l), dom.clone());
        prop_assert!(d.orbit(&l).unwrap().contains(&dom));
        prop_assert_eq!(d.dominant(&dom), dom);
    }

    #[test]
    fn dominance_is_a_partial_order(k in 0usize..6, a in prop::collection::vec(-2i64..=2, 4), b in prop::collection::vec(-2i64..=2, 4), c in prop::collection::vec(-2i64..=2, 4)) {
        let d = group(k);
        let (a, b, c) = (cochar(&d, &a), cochar(&d, &b), cochar(&d, &c));
        prop_assert!(d.dominance_leq(&a, &a));
        if d.dominance_leq(&a, &b) && d.dominance_leq(&b, &a) {
            prop_assert_eq!(&a, &b);
        }
        if d.dominance_leq(&a, &b) && d.dominance_leq(&b, &c) {
            prop_assert!(d.dominance_leq(&a, &c));
        }
    }

    #[test]
    fn weights_are_weyl_invariant_with_dimension_mass(k in 0usize..6, raw in prop::collection::vec(0i64..=2, 3), w in 0usize..1000) {
        let d = group(k);
        let mu = dominant_from_labels(&d, &raw);
        let f = weights::weight_multiplicities(&d, &mu).unwrap();
        prop_assert_eq!(f.mass(), weights::weyl_dim(&d, &mu).unwrap());
        let ws = d.weyl_group().unwrap();
        let x = &ws[w % ws.len()];
        for (l, m) in f.iter() {
            prop_assert_eq!(&f.get(&x.apply(l)), m);
            prop_assert!(d.dominance_leq(&d.dominant(l), &mu));
        }
    }

    #[test]
    fn convolution_is_commutative_and_associative(a in prop::collection::vec((-2i64..=2, -2i64..=2, 1i64..=3), 0..4), b in prop::collection::vec((-2i64..=2, -2i64..=2, 1i64..=3), 0..4), c in prop::collection::vec((-2i64..=2, -2i64..=2, 1i64..=3), 0..4)) {
        let mk = |v: &[(i64, i64, i64)]| WeightFunction::from_pairs(v.iter().map(|&(x, y, m)| (vec![x, y], BigInt::from(m))));
        let (a, b, c) = (mk(&a), mk(&b), mk(&c));
        prop_assert_eq!(a.convolve(&b), b.convolve(&a));
        prop_assert_eq!(a.convolve(&b).convolve(&c), a.convolve(&b.convolve(&c)));
        prop_assert_eq!(a.convolve(&b).mass(), a.mass() * b.mass());
        prop_assert_eq!(WeightFunction::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn cyclotomic_field_axioms(n in 1u64..=24, x in prop::collection::vec(-5i64..=5, 0..6), y in prop::collection::vec(-5i64..=5, 0..6), z in prop::collection::vec(-5i64..=5, 0..6)) {
        let (x, y, z) = (cyc(n, &x), cyc(n, &y), cyc(n, &z));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert!(x.sub(&x).is_zero());
        prop_assert_eq!(x.conj().conj(), x.clone());
        if !y.is_zero() {
            prop_assert_eq!(x.mul(&y).div(&y).unwrap(), x.clone());
        }
        prop_assert_eq!(x.lift(2 * n).restrict(n).unwrap(), x);
    }

    #[test]
    fn torus_points_are_characters(n in 1u64..=30, s in prop::collection::vec(0i64..30, 3), a in prop::collection::vec(-6i64..=6, 3), b in prop::collection::vec(-6i64..=6, 3)) {
        let s = TorusPointFiniteOrder::new(n, s).unwrap();
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        prop_assert_eq!(s.eval(&sum).unwrap(), s.eval(&a).unwrap().mul(&s.eval(&b).unwrap()));
        prop_assert_eq!(s.pow(n as i64).exponent(&a).unwrap(), 0);
    }

    #[test]
    fn quotients_match_determinantal_divisors(n in 1usize..=4, rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 4), 0..4)) {
        let rows: Vec<Vec<i64>> = rows.into_iter().map(|r| r[..n].to_vec()).collect();
        let (g, proj) = kottwitz::quotient(n, &rows).unwrap();
        let (free, factors) = determinantal_quotient(&rows, n);
        prop_assert_eq!(g.free_rank(), free);
        let ours: Vec<BigInt> = g.torsion().iter().map(|&t| BigInt::from(t)).collect();
        prop_assert_eq!(ours, factors);
        for r in &rows {
            prop_assert_eq!(proj.apply(r).unwrap(), g.zero());
        }
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            let x = proj.apply(&e).unwrap();
            prop_assert_eq!(proj.apply(&proj.lift(&x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn sign_is_independent_of_coroot_shift(k in 0usize..6, raw in prop::collection::vec(-3i64..=3, 4), shift in prop::collection::vec(-3i64..=3, 4)) {
        let d = group(k);
        let nu = cochar(&d, &raw);
        let mut other = nu.clone();
        for (c, co) in shift.iter().zip(d.simple_coroots()) {
            for (o, x) in other.iter_mut().zip(co) {
                *o += c * x;
            }
        }
        prop_assert_eq!(kottwitz::kottwitz_sign(&d, &to_rational_vec(&nu)).unwrap(), kottwitz::kottwitz_sign(&d, &to_rational_vec(&other)).unwrap());
    }

    #[test]
    fn transfer_is_adjoint(k in 0usize..3, raw in prop::collection::vec(0i64..=1, 3), vals in prop::collection::vec(-7i64..=7, 40)) {
        let (d, theta) = match k {
            0 => { let d = preset("GL", 3).unwrap(); let t = DiagramAutomorphism::identity(&d); (d, t) }
            1 => { let d = preset("A-ad", 2).unwrap(); let t = automorphism_from_permutation(&d, &[1, 0]).unwrap(); (d, t) }
            _ => { let d = preset("B-ad", 2).unwrap(); let t = DiagramAutomorphism::identity(&d); (d, t) }
        };
        let mu = dominant_from_labels(&d, &raw);
        let tori: Vec<TorusType> = d.weyl_group().unwrap().iter().map(|w| TorusType::new(&d, w.clone(), &theta).unwrap()).collect();
        let h = HeckeTransfer::new(&d, &theta, &mu, &tori).unwrap();
        let labels = vec!["p".to_string()];
        let mut vals = vals.into_iter().cycle();
        let mut g = ClassFunction::zero(Side::G);
        for t in &tori {
            g.add_at(ClassPoint::g(t.id(), "p"), BigRational::from_integer(vals.next().unwrap().into())).unwrap();
        }
        let mut f = ClassFunction::zero(Side::J);
        for p in h.j_points(&labels).unwrap() {
            f.add_at(p, BigRational::from_integer(vals.next().unwrap().into())).unwrap();
        }
        let lhs = heckekit::transfer::pairing(&h.j_to_g(&f).unwrap(), &g).unwrap();
        let rhs = heckekit::transfer::pairing(&f, &h.g_to_j(&g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(ClassFunction::from_json(&f.to_json(), Side::J).unwrap(), f);
    }
}
