use std::collections::BTreeSet;

use lpcomb::catalog::{for_each_parameter, SweepBounds};
use lpcomb::charfield::x_modulus;
use lpcomb::compgroup::{alpha_image, c_map, c_map_inverse, component_group, s_tilde, Variant};
use lpcomb::gf2::Gf2Vec;
use lpcomb::params::{Duality, Family, GroupSpec, Parameter, SimpleParam, Theta};
use lpcomb::Error;

fn bounds() -> SweepBounds {
    SweepBounds { max_r: 4, max_dim: 3, max_mult: 2, char_dim: 2, non_orth: true }
}

/// Sign vectors on the orthogonal constituents that give elements of the
/// centralizer in the dual group (or in its full orthogonal group).
fn brute_signs(p: &Parameter, full_orthogonal: bool) -> Vec<u64> {
    let orth: Vec<_> = p.constituents().iter().filter(|c| c.simple.is_orth()).collect();
    (0u64..1 << orth.len())
        .filter(|&c| {
            full_orthogonal
                || orth.iter().enumerate().filter(|(i, _)| (c >> i) & 1 == 1).map(|(_, o)| o.simple.dim).sum::<usize>() % 2 == 0
        })
        .collect()
}

/// `-1` in the dual group, if it is a nontrivial Galois-fixed central element.
fn central_sign(p: &Parameter) -> Option<u64> {
    let g = p.target();
    if g.family() != Family::SOeven || g.rank() == 0 {
        return None;
    }
    let orth: Vec<_> = p.constituents().iter().filter(|c| c.simple.is_orth()).collect();
    Some(orth.iter().enumerate().filter(|(_, o)| o.mult % 2 == 1).fold(0, |a, (i, _)| a | 1 << i))
}

/// Order of `𝒮̄` from the sign vectors: the central element collapses two
/// components exactly when it lies outside the identity component.
fn brute_order(p: &Parameter, full_orthogonal: bool) -> u128 {
    let n = brute_signs(p, full_orthogonal).len() as u128;
    match central_sign(p) {
        Some(z) if z != 0 => n / 2,
        _ => n,
    }
}

#[test]
fn component_group_orders_by_signs() {
    let mut n = 0;
    for_each_parameter(&bounds(), |p| {
        n += 1;
        assert_eq!(component_group(p, Variant::Sbar).order(), brute_order(p, false), "{p}");
        let full = p.target().family() == Family::SOeven;
        assert_eq!(component_group(p, Variant::SbarSigma0).order(), brute_order(p, full), "{p}");
    });
    assert!(n > 1000);
}

#[test]
fn alpha_and_kernel_by_enumeration() {
    for_each_parameter(&bounds(), |p| {
        let orth: Vec<_> = p.constituents().iter().filter(|c| c.simple.is_orth()).collect();
        let modulus = x_modulus(p.target());
        let images: BTreeSet<u64> = brute_signs(p, false)
            .into_iter()
            .map(|c| {
                let a = orth.iter().enumerate().filter(|(i, _)| (c >> i) & 1 == 1).fold(0u64, |a, (_, o)| a ^ o.simple.central_char.bits());
                modulus.reduce(a)
            })
            .collect();
        let img = alpha_image(p, Variant::Sbar).sum(&modulus);
        assert_eq!(img.order() / modulus.order(), images.len() as u128, "{p}");
        let st = s_tilde(p).unwrap();
        assert_eq!(st.order_linear * images.len() as u128, brute_order(p, false), "{p}");
    });
}

#[test]
fn c_map_round_trips() {
    for_each_parameter(&bounds(), |p| {
        let g = component_group(p, Variant::Sbar);
        let mut seen = BTreeSet::new();
        for x in g.elements() {
            let pair = c_map(&g, x).unwrap();
            let back = c_map_inverse(&g, &pair).unwrap();
            assert_eq!(c_map(&g, back).unwrap(), pair);
            seen.insert(pair);
        }
        assert_eq!(seen.len() as u128, g.order(), "{p}");
    });
}

#[test]
fn ellipticity_by_eigenvalue_splits() {
    let b = SweepBounds { max_r: 4, max_dim: 3, max_mult: 3, char_dim: 1, non_orth: true };
    for_each_parameter(&b, |p| {
        let mut thetas = vec![Theta::Id];
        if p.target().family() == Family::SOeven {
            thetas.push(Theta::Theta0);
        }
        for th in thetas {
            let cons = p.constituents();
            // each block O(l) needs eigenvalue multiplicities at most one
            let finite = cons.iter().all(|c| c.simple.is_orth() && c.mult <= 2);
            let brute = finite && {
                let choices: Vec<Vec<usize>> = cons.iter().map(|c| if c.mult == 2 { vec![1] } else { vec![0, 1] }).collect();
                let mut any = false;
                let total: usize = choices.iter().map(Vec::len).product();
                for k in 0..total {
                    let mut k = k;
                    let mut det = 0;
                    for (c, ch) in cons.iter().zip(&choices) {
                        let b = ch[k % ch.len()];
                        k /= ch.len();
                        det += b * c.simple.dim;
                    }
                    any |= (det % 2 == 1) == (th == Theta::Theta0);
                }
                any
            };
            assert_eq!(p.is_elliptic(th).unwrap(), brute, "{p} {th:?}");
        }
    });
}

fn ch(s: &str) -> Gf2Vec {
    Gf2Vec::parse(s).unwrap()
}

#[test]
fn validation_errors() {
    let sp = GroupSpec::sp(1, 2);
    let e = |l: &str, c: &str| (SimpleParam::character(l, ch(c)), 1);
    assert!(matches!(Parameter::simple(sp.clone(), vec![e("a", "10")]), Err(Error::DimensionMismatch(_))));
    assert!(matches!(
        Parameter::simple(sp.clone(), vec![e("a", "10"), e("b", "01"), e("c", "10")]),
        Err(Error::DeterminantMismatch(_))
    ));
    let symp = SimpleParam::new("s", 2, Duality::SympSelfDual, ch("00")).unwrap();
    assert!(matches!(
        Parameter::simple(GroupSpec::sp(1, 2), vec![(symp, 1), e("a", "00")]),
        Err(Error::OddSymplecticMultiplicity(_))
    ));
    assert!(SimpleParam::new("s", 3, Duality::SympSelfDual, ch("00")).is_err());
    assert!(matches!(
        Parameter::simple(sp, vec![e("a", "10"), e("a", "01"), e("c", "11")]),
        Err(Error::InvalidConstituent { .. })
    ));
}

#[test]
fn m_phi_values() {
    let so = |eta: &str| GroupSpec::so(2, ch(eta));
    let planes = Parameter::simple(so("00"), vec![(SimpleParam::orth("a", 2, ch("10")), 1), (SimpleParam::orth("b", 2, ch("10")), 1)]).unwrap();
    assert_eq!(planes.m_phi(), 2);
    let odd = Parameter::simple(so("11"), vec![(SimpleParam::orth("a", 3, ch("10")), 1), (SimpleParam::character("b", ch("01")), 1)]).unwrap();
    assert_eq!(odd.m_phi(), 1);
    assert!(odd.is_discrete());
    let doubled = Parameter::simple(so("00"), vec![(SimpleParam::orth("a", 2, ch("10")), 2)]).unwrap();
    assert!(!doubled.is_discrete());
}
