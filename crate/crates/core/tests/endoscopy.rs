use std::collections::BTreeSet;

use lpcomb::catalog::{for_each_parameter, SweepBounds};
use lpcomb::compgroup::{c_map, theta_component};
use lpcomb::endoscopy::{endoscopic_pair, enumerate_elliptic, iota, iota_full, iota_simplified};
use lpcomb::gf2::Gf2Vec;
use lpcomb::params::{Family, GroupSpec, Theta};
use lpcomb::rational::qi;

fn universe(d: usize) -> Vec<Gf2Vec> {
    (0..1u64 << d).map(|b| Gf2Vec::from_bits(b, d)).collect()
}

/// An orthogonal factor `SO(2a, η)` is allowed when it is not a split torus
/// and `SO(0)` carries the trivial character.
fn so_ok(a: usize, eta: u64) -> bool {
    !(a == 0 && eta != 0) && !(a == 1 && eta == 0)
}

#[test]
fn symplectic_counts() {
    for d in 1..=3 {
        for n in 0..=3 {
            let got = enumerate_elliptic(&GroupSpec::sp(n, d), Theta::Id, &universe(d)).unwrap().len();
            let brute = (0..=n).flat_map(|b| (0..1u64 << d).map(move |eta| (b, eta))).filter(|&(b, eta)| so_ok(b, eta)).count();
            assert_eq!(got, brute, "Sp({}) d={d}", 2 * n);
        }
    }
}

#[test]
fn orthogonal_counts() {
    let d = 2;
    for n in 1..=3 {
        for eta_g in 0..1u64 << d {
            let g = GroupSpec::so(n, Gf2Vec::from_bits(eta_g, d));
            let got = enumerate_elliptic(&g, Theta::Id, &universe(d)).unwrap().len();
            let mut pairs = BTreeSet::new();
            for a in 0..=n {
                for eta in 0..1u64 << d {
                    let (b, other) = (n - a, eta ^ eta_g);
                    if so_ok(a, eta) && so_ok(b, other) {
                        pairs.insert(std::cmp::min((a, eta), (b, other)));
                    }
                }
            }
            assert_eq!(got, pairs.len(), "SO({}, {eta_g:b})", 2 * n);
        }
    }
}

#[test]
fn trivial_datum_has_coefficient_one() {
    for n in 1..=3 {
        let data = enumerate_elliptic(&GroupSpec::sp(n, 2), Theta::Id, &universe(2)).unwrap();
        let t: Vec<_> = data.iter().filter(|x| x.is_trivial()).collect();
        assert_eq!(t.len(), 1);
        assert_eq!(iota(t[0]).unwrap(), qi(1));
    }
}

#[test]
fn similitude_formulas_agree() {
    let u = universe(2);
    for n in 1..=3 {
        let mut gs = vec![GroupSpec::sp(n, 2)];
        gs.extend(u.iter().map(|e| GroupSpec::so(n, *e)));
        for g in gs {
            for datum in enumerate_elliptic(&g.with_similitude(true), Theta::Id, &u).unwrap() {
                assert_eq!(iota_full(&datum).unwrap(), iota_simplified(&datum).unwrap(), "{datum}");
            }
        }
    }
}

#[test]
fn pairs_are_valid_and_elliptic() {
    let b = SweepBounds { max_r: 4, max_dim: 3, max_mult: 2, char_dim: 2, non_orth: true };
    let u = universe(2);
    for_each_parameter(&b, |p| {
        let mut thetas = vec![Theta::Id];
        if p.target().family() == Family::SOeven && p.target().rank() > 0 {
            thetas.push(Theta::Theta0);
        }
        for th in thetas {
            let data: BTreeSet<_> = enumerate_elliptic(p.target(), th, &u).unwrap().iter().map(|d| d.key()).collect();
            let (g, elems) = theta_component(p, th).unwrap();
            for v in elems {
                let x = c_map(&g, v).unwrap();
                let (datum, phi2) = endoscopic_pair(p, th, &x).unwrap();
                assert_eq!(phi2.target(), &datum.group());
                let dims: usize = phi2.constituents().iter().map(|c| c.total_dim()).sum();
                assert_eq!(dims, p.constituents().iter().map(|c| c.total_dim()).sum::<usize>(), "{p}");
                if datum.components.0.rank + datum.components.1.rank > 0 || th == Theta::Id {
                    let split = |g: &lpcomb::params::SimpleGroup| g.family == Family::SOeven && g.rank == 1 && g.eta.is_zero();
                    // a split SO(2) is a torus, so such data are not elliptic
                    let degenerate = split(&datum.components.0) || split(&datum.components.1);
                    assert!(degenerate || data.contains(&datum.key()), "{p}: {datum} not enumerated");
                }
            }
        }
    });
}
