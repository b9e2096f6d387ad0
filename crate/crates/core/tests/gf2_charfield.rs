use std::collections::BTreeSet;

use lpcomb::charfield::{x_group, GlobalCharModel, GlobalQuadChar, Scope};
use lpcomb::gf2::{Gf2Vec, LinearMap, Subspace};
use lpcomb::params::{GroupSpec, SimpleGroup};
use proptest::prelude::*;

fn closure(gens: &[u64]) -> BTreeSet<u64> {
    let mut s = BTreeSet::from([0u64]);
    for &g in gens {
        let shifted: Vec<u64> = s.iter().map(|x| x ^ g).collect();
        s.extend(shifted);
    }
    s
}

fn gens(dim: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..(1 << dim), 0..5)
}

proptest! {
    #[test]
    fn span_matches_closure(g in gens(6)) {
        let s = Subspace::span(6, g.iter().copied());
        let c = closure(&g);
        prop_assert_eq!(s.order(), c.len() as u128);
        prop_assert_eq!(s.elements().into_iter().collect::<BTreeSet<_>>(), c.clone());
        for v in 0u64..64 {
            prop_assert_eq!(s.contains(v), c.contains(&v));
        }
    }

    #[test]
    fn intersection_sum_annihilator(a in gens(5), b in gens(5)) {
        let (sa, sb) = (Subspace::span(5, a.iter().copied()), Subspace::span(5, b.iter().copied()));
        let (ca, cb) = (closure(&a), closure(&b));
        let inter: BTreeSet<u64> = ca.intersection(&cb).copied().collect();
        prop_assert_eq!(sa.intersection(&sb).elements().into_iter().collect::<BTreeSet<_>>(), inter);
        let both: Vec<u64> = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(sa.sum(&sb).order(), closure(&both).len() as u128);
        let ann: BTreeSet<u64> = (0u64..32).filter(|w| ca.iter().all(|v| (v & w).count_ones() % 2 == 0)).collect();
        prop_assert_eq!(sa.annihilator().elements().into_iter().collect::<BTreeSet<_>>(), ann);
        prop_assert_eq!(sa.witness_not_in(&sb).is_none(), ca.is_subset(&cb));
    }

    #[test]
    fn kernel_image_preimage(cols in prop::collection::vec(0u64..16, 5), t in gens(4)) {
        let m = LinearMap::new(5, 4, cols.clone());
        let apply = |v: u64| (0..5).filter(|i| (v >> i) & 1 == 1).fold(0, |a, i| a ^ cols[i]);
        let ker: BTreeSet<u64> = (0u64..32).filter(|&v| apply(v) == 0).collect();
        let img: BTreeSet<u64> = (0u64..32).map(apply).collect();
        prop_assert_eq!(m.kernel().elements().into_iter().collect::<BTreeSet<_>>(), ker);
        prop_assert_eq!(m.image().elements().into_iter().collect::<BTreeSet<_>>(), img);
        let target = closure(&t);
        let pre: BTreeSet<u64> = (0u64..32).filter(|&v| target.contains(&apply(v))).collect();
        let got = m.preimage(&Subspace::span(4, t.iter().copied()));
        prop_assert_eq!(got.elements().into_iter().collect::<BTreeSet<_>>(), pre);
    }

    #[test]
    fn aut_product_by_enumeration(seed in prop::collection::vec(0u64..4, 5), u in 0usize..5) {
        let m = GlobalCharModel::four_place();
        let subs: Vec<Subspace> = m.places().iter().zip(&seed).map(|(p, &s)| {
            let r = p.local_rank();
            Subspace::span(r, [s & ((1 << r) - 1)])
        }).collect();
        let excepted = vec![m.places()[u].id.clone()];
        let got = m.aut_product_group(&subs, &excepted).unwrap();
        let brute: BTreeSet<u64> = m.all_chars().iter().filter(|chi| {
            m.places().iter().enumerate().all(|(i, p)| {
                i == u || subs[i].contains(m.localize(chi, &p.id).unwrap().coords.bits())
            })
        }).map(|chi| chi.coords.bits()).collect();
        prop_assert_eq!(got.elements().into_iter().collect::<BTreeSet<_>>(), brute);
    }
}

#[test]
fn vectors_round_trip() {
    let v = Gf2Vec::parse("1011").unwrap();
    assert_eq!(v.to_string(), "1011");
    assert_eq!(v.weight(), 3);
    assert!(Gf2Vec::parse("10x").is_err());
}

#[test]
fn localizations_are_segments() {
    for m in [GlobalCharModel::three_place(), GlobalCharModel::four_place()] {
        assert_eq!(m.all_chars().len(), 1 << m.dim());
        for chi in m.all_chars() {
            let a = m.adelic(&chi);
            for (i, p) in m.places().iter().enumerate() {
                assert_eq!(m.localize(&chi, &p.id).unwrap().coords, a.segment(m.offset(i), p.local_rank()));
            }
        }
        assert!(m.localize(&m.trivial(), "nowhere").is_err());
    }
    let g1 = GlobalCharModel::three_place().generator(0);
    assert_eq!(g1.mul(&g1), GlobalQuadChar { coords: Gf2Vec::zero(2) });
}

#[test]
fn model_rejects_dependent_or_trivial_generators() {
    let m = GlobalCharModel::three_place();
    let g = m.generators()[0];
    assert!(GlobalCharModel::new(m.places().to_vec(), vec![g, g]).is_err());
}

#[test]
fn x_group_orders() {
    let d = 3;
    let eta = Gf2Vec::from_bits(0b101, d);
    let so = GroupSpec::simple(SimpleGroup::so(2, eta)).with_similitude(true);
    let x = x_group(&so, &Scope::Global, None).unwrap();
    assert_eq!(x.order(), 4);
    assert!(x.is_trivial(&eta));
    assert_eq!(x.elements().len(), 4);
    let sp = GroupSpec::sp(2, d).with_similitude(true);
    assert_eq!(x_group(&sp, &Scope::Global, None).unwrap().order(), 8);
}
