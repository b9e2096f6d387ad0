use std::collections::BTreeSet;

use lpcomb::catalog::{for_each_parameter, SweepBounds};
use lpcomb::charfield::{GlobalCharModel, PlaceKind};
use lpcomb::compgroup::{alpha, component_group, Variant};
use lpcomb::gf2::{Gf2Vec, Subspace};
use lpcomb::ledger::{arthur_multiplicity, c_tilde, check_ledger, similitude_multiplicity, stable_multiplicity_coeff};
use lpcomb::params::{GroupSpec, Parameter, SimpleGroup, SimpleParam, Theta};
use lpcomb::rational::{q, qi};
use lpcomb::smo::{localize_parameter, multiplicity_one_checks, smo_at_place_criterion, LocalItem, Profiles, SmoInstance};
use lpcomb::weylconst::Constants;
use lpcomb::Error;
use proptest::prelude::*;

fn ch(s: &str) -> Gf2Vec {
    Gf2Vec::parse(s).unwrap()
}

#[test]
fn c_tilde_by_counting_kernel() {
    let b = SweepBounds { max_r: 4, max_dim: 3, max_mult: 2, char_dim: 2, non_orth: false };
    let c = Constants::default();
    for_each_parameter(&b, |p| {
        let g = component_group(p, Variant::Sbar);
        let modulus = lpcomb::charfield::x_modulus(p.target());
        let kernel: BTreeSet<u64> = g
            .elements()
            .into_iter()
            .filter(|&x| modulus.contains(alpha(p, x).bits()))
            .collect();
        assert_eq!(c_tilde(p).unwrap(), q(p.m_phi() as i64, kernel.len() as i64), "{p}");
        if p.is_discrete() {
            assert_eq!(stable_multiplicity_coeff(&c, p).unwrap(), c_tilde(p).unwrap());
        }
    });
}

#[test]
fn multiplicity_preconditions() {
    let doubled = Parameter::simple(GroupSpec::so(2, ch("00")), vec![(SimpleParam::orth("a", 2, ch("10")), 2)]).unwrap();
    assert!(matches!(arthur_multiplicity(&doubled, &ch("1")), Err(Error::Precondition(_))));
    let phi = Parameter::simple(
        GroupSpec::sp(1, 2).with_similitude(true),
        vec![
            (SimpleParam::character("e1", ch("10")), 1),
            (SimpleParam::character("e2", ch("01")), 1),
            (SimpleParam::character("e3", ch("11")), 1),
        ],
    )
    .unwrap();
    assert_eq!(arthur_multiplicity(&phi, &ch("000")).unwrap(), 1);
    assert_eq!(arthur_multiplicity(&phi, &ch("110")).unwrap(), 0);
    assert!(matches!(similitude_multiplicity(&phi, &Subspace::span(2, [1]), 1), Err(Error::Containment(_))));
    assert_eq!(similitude_multiplicity(&phi, &Subspace::full(2), 1).unwrap(), 1);
}

#[test]
fn ledger_rows_and_filters() {
    let c = Constants::default();
    let p = Parameter::simple(
        GroupSpec::so(2, ch("00")),
        vec![(SimpleParam::orth("a", 2, ch("10")), 1), (SimpleParam::orth("b", 2, ch("10")), 1)],
    )
    .unwrap();
    let rows = check_ledger(&c, &p, Theta::Id, None).unwrap();
    assert!(rows.iter().all(|r| r.balanced));
    assert_eq!(rows[0].sigma_term, qi(1));
    let filtered = check_ledger(&c, &p, Theta::Id, Some(&ch("10"))).unwrap();
    assert!(filtered.iter().all(|r| r.omega == ch("10")));
    assert_eq!(filtered.len() + check_ledger(&c, &p, Theta::Id, Some(&ch("00"))).unwrap().len(), rows.len());
    let sp = Parameter::simple(GroupSpec::sp(0, 2), vec![(SimpleParam::character("one", ch("00")), 1)]).unwrap();
    assert!(matches!(check_ledger(&c, &sp, Theta::Theta0, None), Err(Error::ThetaOnSymplectic)));
    let product = Parameter::new(
        GroupSpec::new(vec![SimpleGroup::sp(0, 2), SimpleGroup::sp(0, 2)], false).unwrap(),
        vec![
            lpcomb::params::Constituent { simple: SimpleParam::character("x", ch("00")), mult: 1, factor: 0 },
            lpcomb::params::Constituent { simple: SimpleParam::character("y", ch("00")), mult: 1, factor: 1 },
        ],
    )
    .unwrap();
    assert!(check_ledger(&c, &product, Theta::Id, None).is_err());
}

#[test]
fn localization_merges_characters() {
    let m = GlobalCharModel::three_place();
    let g1 = m.generator(0).coords;
    let p = Parameter::simple(
        GroupSpec::sp(2, 2),
        vec![
            (SimpleParam::orth("f", 2, g1), 1),
            (SimpleParam::orth("h", 2, g1), 1),
            (SimpleParam::character("one", Gf2Vec::zero(2)), 1),
        ],
    )
    .unwrap();
    let mut prof = Profiles::new();
    let loc = m.localize(&m.generator(0), "p1").unwrap().coords;
    prof.insert("f", "p1", vec![LocalItem::Char(Gf2Vec::zero(2)), LocalItem::Char(loc)]);
    let local = localize_parameter(&m, &p, "p1", &prof).unwrap();
    let total: usize = local.constituents().iter().map(|c| c.total_dim()).sum();
    assert_eq!(total, 5);
    let trivial = local.constituents().iter().find(|c| c.simple.dim == 1 && c.simple.central_char.is_zero()).unwrap();
    assert_eq!(trivial.mult, 2);
    prof.insert("h", "p1", vec![LocalItem::Char(Gf2Vec::zero(2))]);
    assert!(matches!(localize_parameter(&m, &p, "p1", &prof), Err(Error::InvalidProfile { .. })));
    assert!(multiplicity_one_checks(&m, &p, &Profiles::new(), &["p7".to_string()]).is_err());
}

/// Global characters whose localizations lie in the given subgroups at every
/// place except `skip`.
fn restricted(m: &GlobalCharModel, alphas: &[Subspace], skip: Option<usize>) -> BTreeSet<u64> {
    m.all_chars()
        .iter()
        .filter(|chi| {
            m.places().iter().enumerate().all(|(i, p)| Some(i) == skip || alphas[i].contains(m.localize(chi, &p.id).unwrap().coords.bits()))
        })
        .map(|chi| chi.coords.bits())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn smo_matches_restricted_products(
        four in any::<bool>(),
        eta in 0u64..4,
        seeds in prop::collection::vec(prop::collection::vec(0u64..4, 0..3), 5),
        u in 0usize..5,
    ) {
        let m = if four { GlobalCharModel::four_place() } else { GlobalCharModel::three_place() };
        let u = u % m.places().len();
        let adelic = m.adelic(&lpcomb::charfield::GlobalQuadChar { coords: Gf2Vec::from_bits(eta, 2) });
        let mut etas = Vec::new();
        let mut alphas = Vec::new();
        for (i, p) in m.places().iter().enumerate() {
            let r = p.local_rank();
            let e = adelic.segment(m.offset(i), r);
            let gens = seeds[i].iter().map(|s| s & ((1 << r) - 1)).chain([e.bits()]);
            etas.push(e);
            alphas.push(Subspace::span(r, gens));
        }
        let inst = SmoInstance::new(m.clone(), etas, alphas.clone(), &m.places()[u].id).unwrap();
        match smo_at_place_criterion(&inst) {
            Ok(r) => {
                let agree = restricted(&m, &alphas, None) == restricted(&m, &alphas, Some(u));
                prop_assert_eq!(r.holds, agree);
                prop_assert_eq!(r.index == 1, agree);
                prop_assert_eq!(r.witness.is_some(), !agree);
            }
            Err(Error::Precondition(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

#[test]
fn real_place_has_one_coordinate() {
    let m = GlobalCharModel::three_place();
    let inf = m.place("inf").unwrap();
    assert_eq!(inf.kind, PlaceKind::Real);
    assert_eq!(inf.local_rank(), 1);
}
