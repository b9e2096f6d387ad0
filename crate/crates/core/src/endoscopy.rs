//! Elliptic endoscopic data, the correspondence `(φ, x) ↦ (G′, φ′)` and the
//! Kottwitz coefficients `ι(G, G′)`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::charfield::x_modulus;
use crate::compgroup::{c_map_inverse, component_group, PartitionPair, Variant};
use crate::error::{Error, Result};
use crate::gf2::{dot, Gf2Vec, Subspace};
use crate::params::{Constituent, Duality, Family, GroupSpec, Parameter, SimpleGroup, Theta};
use crate::rational::{q, qi, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndoDatum {
    pub ambient: GroupSpec,
    pub twist: Theta,
    /// The twisting character class `ω`; trivial unless `similitude`.
    pub omega: Gf2Vec,
    pub components: (SimpleGroup, SimpleGroup),
    pub char_pair: (Gf2Vec, Gf2Vec),
    pub similitude: bool,
}

impl EndoDatum {
    fn build(
        ambient: &GroupSpec,
        twist: Theta,
        first: SimpleGroup,
        second: SimpleGroup,
        eta: Gf2Vec,
    ) -> Self {
        let modulus = x_modulus(ambient);
        let eta_g = ambient.eta_g();
        let char_pair = match (ambient.family(), twist) {
            (Family::Sp, _) => (Gf2Vec::zero(eta.len()), eta),
            _ => (eta, eta.add(&eta_g)),
        };
        let omega = if ambient.similitude {
            Gf2Vec::from_bits(modulus.reduce(eta.bits()), eta.len())
        } else {
            Gf2Vec::zero(eta.len())
        };
        EndoDatum {
            ambient: ambient.clone(),
            twist,
            omega,
            components: (first, second),
            char_pair,
            similitude: ambient.similitude,
        }
    }

    /// The class of `η∘λ` attached by the table, whether or not the datum is
    /// a similitude datum.
    pub fn table_omega(&self) -> Gf2Vec {
        let eta = match self.ambient.family() {
            Family::Sp => self.char_pair.1,
            Family::SOeven => self.char_pair.0,
        };
        Gf2Vec::from_bits(x_modulus(&self.ambient).reduce(eta.bits()), eta.len())
    }

    /// The endoscopic group `G′_I × G′_II`.
    pub fn group(&self) -> GroupSpec {
        GroupSpec::new(
            vec![self.components.0.clone(), self.components.1.clone()],
            self.similitude,
        )
        .expect("components share a character universe")
    }

    /// Identification key: unordered for the orthogonal and twisted tables.
    /// The twisting characters of symplectic factors are part of the key.
    pub fn key(&self) -> Vec<(usize, u64, u64)> {
        let a = (self.components.0.rank, self.components.0.eta.bits(), self.char_pair.0.bits());
        let b = (self.components.1.rank, self.components.1.eta.bits(), self.char_pair.1.bits());
        match self.ambient.family() {
            Family::Sp => vec![a, b],
            Family::SOeven => {
                let mut v = vec![a, b];
                v.sort();
                v
            }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.twist == Theta::Id
            && match self.ambient.family() {
                Family::Sp => self.components.1.rank == 0,
                Family::SOeven => self.components.0.rank == 0 || self.components.1.rank == 0,
            }
    }
}

impl std::fmt::Display for EndoDatum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let inner = format!("{} x {}", self.components.0, self.components.1);
        let body = if self.similitude { format!("G({inner})") } else { inner };
        match self.twist {
            Theta::Id => f.write_str(&body),
            Theta::Theta0 => write!(f, "{body} [theta0, {} | {}]", self.char_pair.0, self.char_pair.1),
        }
    }
}

fn split_so_ok(g: &SimpleGroup) -> bool {
    // A split SO(2) is a torus and never elliptic.
    !(g.family == Family::SOeven && g.rank == 1 && g.eta.is_zero())
}

/// All elliptic endoscopic data of a simple `G` in the component `θ`, with
/// characters drawn from `universe`.
pub fn enumerate_elliptic(g: &GroupSpec, theta: Theta, universe: &[Gf2Vec]) -> Result<Vec<EndoDatum>> {
    if !g.is_simple() {
        return Err(Error::Unsupported("endoscopic data of a product".into()));
    }
    let d = g.char_dim();
    let universe: BTreeSet<Gf2Vec> = universe.iter().copied().collect();
    if universe.iter().any(|u| u.len() != d) {
        return Err(Error::DimensionMismatch("universe characters have the wrong length".into()));
    }
    let zero = Gf2Vec::zero(d);
    let n = g.rank();
    let eta_g = g.eta_g();
    let mut out = Vec::new();
    let mut keys = BTreeSet::new();
    let mut push = |datum: EndoDatum, out: &mut Vec<EndoDatum>| {
        if split_so_ok(&datum.components.0) && split_so_ok(&datum.components.1) && keys.insert(datum.key()) {
            out.push(datum);
        }
    };
    match (g.family(), theta) {
        (Family::Sp, Theta::Theta0) => return Err(Error::ThetaOnSymplectic),
        (Family::Sp, Theta::Id) => {
            for n2 in 0..=n {
                let etas: Vec<Gf2Vec> = if n2 == 0 { vec![zero] } else { universe.iter().copied().collect() };
                for eta in etas {
                    push(
                        EndoDatum::build(g, theta, SimpleGroup::sp(n - n2, d), SimpleGroup::so(n2, eta), eta),
                        &mut out,
                    );
                }
            }
        }
        (Family::SOeven, Theta::Id) => {
            for n1 in 0..=n {
                let n2 = n - n1;
                let etas: Vec<Gf2Vec> = if n1 == 0 { vec![zero] } else { universe.iter().copied().collect() };
                for eta1 in etas {
                    let eta2 = eta1.add(&eta_g);
                    if n2 == 0 && !eta2.is_zero() {
                        continue;
                    }
                    push(
                        EndoDatum::build(g, theta, SimpleGroup::so(n1, eta1), SimpleGroup::so(n2, eta2), eta1),
                        &mut out,
                    );
                }
            }
        }
        (Family::SOeven, Theta::Theta0) => {
            if n == 0 {
                return Ok(out);
            }
            for n1 in 0..n {
                let n2 = n - 1 - n1;
                for &eta in &universe {
                    push(
                        EndoDatum::build(g, theta, SimpleGroup::sp(n1, d), SimpleGroup::sp(n2, d), eta),
                        &mut out,
                    );
                }
            }
        }
    }
    Ok(out)
}

fn twist_constituent(c: &Constituent, chi: &Gf2Vec, factor: usize) -> Constituent {
    let mut c = c.clone();
    c.factor = factor;
    if c.simple.duality != Duality::NonSelfDualPair && c.simple.dim % 2 == 1 {
        c.simple.central_char = c.simple.central_char.add(chi);
    }
    c
}

/// The endoscopic datum and parameter attached to `(φ, x)`, where `x` is
/// given by a partition pair (either representative of its class).
pub fn endoscopic_pair(phi: &Parameter, theta: Theta, x: &PartitionPair) -> Result<(EndoDatum, Parameter)> {
    let g = phi.target();
    if !g.is_simple() {
        return Err(Error::Unsupported("endoscopic pairs for product targets".into()));
    }
    let (variant, want) = match (g.family(), theta) {
        (Family::Sp, Theta::Theta0) => return Err(Error::ThetaOnSymplectic),
        (_, Theta::Id) => (Variant::Sbar, false),
        (Family::SOeven, Theta::Theta0) => (Variant::SbarSigma0, true),
    };
    let group = component_group(phi, variant);
    let v = c_map_inverse(&group, x)?;
    let eps = group.coords.eps_vector(0);
    if dot(v, eps) != want {
        return Err(Error::WrongComponent(format!(
            "S={:?} T={:?} is not in the {:?} component",
            x.s, x.t, theta
        )));
    }
    let d = g.char_dim();
    let orth = phi.orth_indices();
    let mut minus = Vec::new();
    let mut plus = Vec::new();
    let mut eta = Gf2Vec::zero(d);
    let mut dim_minus = 0;
    for (i, c) in phi.constituents().iter().enumerate() {
        let in_v = orth
            .iter()
            .position(|&j| j == i)
            .is_some_and(|pos| (v >> pos) & 1 == 1);
        let mut rest = c.clone();
        if in_v {
            eta = eta.add(&c.simple.central_char);
            dim_minus += c.simple.dim;
            minus.push(Constituent {
                mult: 1,
                ..c.clone()
            });
            rest.mult -= 1;
        }
        if rest.mult > 0 {
            plus.push(rest);
        }
    }
    let dim_plus = g.dual_dim() - dim_minus;
    let eta_g = g.eta_g();
    let (first, second, cons): (SimpleGroup, SimpleGroup, Vec<Constituent>) = match (g.family(), theta) {
        (Family::Sp, _) => {
            let cons = plus
                .iter()
                .map(|c| twist_constituent(c, &eta, 0))
                .chain(minus.iter().map(|c| Constituent { factor: 1, ..c.clone() }))
                .collect();
            (SimpleGroup::sp((dim_plus - 1) / 2, d), SimpleGroup::so(dim_minus / 2, eta), cons)
        }
        (Family::SOeven, Theta::Id) => {
            let cons = minus
                .iter()
                .map(|c| Constituent { factor: 0, ..c.clone() })
                .chain(plus.iter().map(|c| Constituent { factor: 1, ..c.clone() }))
                .collect();
            (
                SimpleGroup::so(dim_minus / 2, eta),
                SimpleGroup::so(dim_plus / 2, eta.add(&eta_g)),
                cons,
            )
        }
        (Family::SOeven, Theta::Theta0) => {
            let other = eta.add(&eta_g);
            let cons = minus
                .iter()
                .map(|c| twist_constituent(c, &eta, 0))
                .chain(plus.iter().map(|c| twist_constituent(c, &other, 1)))
                .collect();
            (SimpleGroup::sp((dim_minus - 1) / 2, d), SimpleGroup::sp((dim_plus - 1) / 2, d), cons)
        }
    };
    let datum = EndoDatum::build(g, theta, first, second, eta);
    let phi_prime = Parameter::new(datum.group(), cons)?;
    Ok((datum, phi_prime))
}

/// Fixed center data of a simple group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CenterData {
    pub group: GroupSpec,
    /// `|π₀(Z(Ĝ)^Γ)|` of the classical group.
    pub z_gamma_order: u32,
    /// `|π₀(Z(Ĝ̃)^Γ)|` of the similitude lift.
    pub zbar_order: u32,
    pub kappa_order: u32,
}

/// Whether the dual of a simple factor has `π₀(Z^Γ)` of order 2.
fn has_center_component(g: &SimpleGroup) -> bool {
    g.family == Family::SOeven && g.rank >= 1 && !(g.rank == 1 && g.eta.is_zero())
}

/// Whether the similitude dual keeps the central −1 as a separate component.
fn similitude_keeps_center(g: &SimpleGroup) -> bool {
    g.family == Family::SOeven && g.rank >= 2 && g.eta.is_zero()
}

pub fn center_data(g: &SimpleGroup) -> CenterData {
    CenterData {
        group: GroupSpec::simple(g.clone()),
        z_gamma_order: if has_center_component(g) { 2 } else { 1 },
        zbar_order: if similitude_keeps_center(g) { 2 } else { 1 },
        kappa_order: 1,
    }
}

/// `|Out_G(G′)|` for untwisted data.
pub fn out_order(datum: &EndoDatum) -> Result<u32> {
    if datum.twist != Theta::Id {
        return Err(Error::Unsupported("outer automorphisms of twisted data".into()));
    }
    let (a, b) = (&datum.components.0, &datum.components.1);
    Ok(match datum.ambient.family() {
        Family::Sp => {
            if b.rank >= 1 {
                2
            } else {
                1
            }
        }
        Family::SOeven => {
            let mut o = if a.rank >= 1 && b.rank >= 1 { 2 } else { 1 };
            if a.rank == b.rank && a.eta == b.eta && a.rank >= 1 {
                o *= 2;
            }
            o
        }
    })
}

/// The GF(2) model of `π₀` of the Galois-fixed centers for a datum:
/// coordinates are the factors of `G′` whose dual center has a −1 component.
struct CenterModel {
    /// Image of `π₀(Z(Ĝ)^Γ)` in the coordinates of `G′`.
    emb_z: Subspace,
    z_g: u32,
    z_g_prime: u32,
    /// `π₀(Z(Ĝ̃)^Γ)` as a subspace of `π₀(Z(Ĝ)^Γ)` (dimension 0 or 1).
    i_g: Subspace,
    /// `π₀(Z(Ĝ̃′)^Γ)` in the coordinates of `G′`.
    i_g_prime: Subspace,
    /// Image of `i_g` in the coordinates of `G′`.
    emb_i_g: Subspace,
}

fn center_model(datum: &EndoDatum) -> CenterModel {
    let amb = &datum.ambient.factors()[0];
    let comps = [&datum.components.0, &datum.components.1];
    let coords: Vec<usize> = (0..2).filter(|&k| has_center_component(comps[k])).collect();
    let dim = coords.len();
    let diag = coords.iter().enumerate().fold(0u64, |a, (j, _)| a | (1 << j));
    let z_g = center_data(amb).z_gamma_order;
    let emb_z = if z_g == 2 { Subspace::span(dim, [diag]) } else { Subspace::zero(dim) };
    let i_g = if similitude_keeps_center(amb) { Subspace::full(1) } else { Subspace::zero(1) };
    let emb_i_g = if i_g.rank() == 1 { emb_z.clone() } else { Subspace::zero(dim) };
    let mut i_g_prime = emb_i_g.clone();
    for (j, &k) in coords.iter().enumerate() {
        if similitude_keeps_center(comps[k]) {
            i_g_prime.insert(1 << j);
        }
    }
    CenterModel {
        emb_z,
        z_g,
        z_g_prime: 1 << dim,
        i_g,
        i_g_prime,
        emb_i_g,
    }
}

/// `ι(G, G′)` from the four-factor formula (kernel terms 1, κ term 1).
pub fn iota(datum: &EndoDatum) -> Result<Q> {
    iota_full(datum)
}

pub fn iota_full(datum: &EndoDatum) -> Result<Q> {
    let out = out_order(datum)? as i64;
    let cm = center_model(datum);
    if !datum.similitude {
        // π₀ Aut_G(G′) = Out_G(G′) here: the center lies in Ĝ′.
        return Ok(q(cm.z_g as i64, cm.z_g_prime as i64 * out));
    }
    let i_g = cm.i_g.order() as i64;
    let i_g_prime = cm.i_g_prime.order() as i64;
    let out_tilde = out * out_tilde_factor(&cm);
    // Every central element of Ĝ lies in Ĝ′ for untwisted data.
    let aut = out_tilde * (i_g / cm.emb_i_g.order() as i64);
    Ok(q(i_g, i_g_prime * aut))
}

/// `|Z(Ĝ)^Γ / ((Z(Ĝ)^Γ ∩ Ĝ′) + image of Z(Ĝ̃)^Γ)|`, which is 1 for untwisted data.
fn out_tilde_factor(cm: &CenterModel) -> i64 {
    let z_in_g_prime = cm.emb_z.rank();
    let total = if cm.z_g == 2 { 1 } else { 0 };
    1 << (total - z_in_g_prime.min(total))
}

/// The simplified three-factor formula for similitude data.
pub fn iota_simplified(datum: &EndoDatum) -> Result<Q> {
    if !datum.similitude {
        return Err(Error::Unsupported("the simplified formula is for similitude data".into()));
    }
    let out = out_order(datum)? as i64;
    let cm = center_model(datum);
    let zbar = cm.i_g_prime.order() as i64 / cm.i_g_prime.intersection(&cm.emb_i_g).order() as i64;
    let out_tilde = out * out_tilde_factor(&cm);
    Ok(q(1, zbar * out_tilde) * qi(cm.kappa()))
}

impl CenterModel {
    fn kappa(&self) -> i64 {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SimpleParam;

    fn ch(s: &str) -> Gf2Vec {
        Gf2Vec::parse(s).unwrap()
    }

    fn universe2() -> Vec<Gf2Vec> {
        ["00", "10", "01", "11"].iter().map(|s| ch(s)).collect()
    }

    #[test]
    fn sp4_has_eight_data() {
        let data = enumerate_elliptic(&GroupSpec::sp(2, 2), Theta::Id, &universe2()).unwrap();
        assert_eq!(data.len(), 8);
        let trivial: Vec<_> = data.iter().filter(|d| d.is_trivial()).collect();
        assert_eq!(trivial.len(), 1);
        assert_eq!(iota(trivial[0]).unwrap(), qi(1));
    }

    #[test]
    fn sp_proper_iota_is_quarter() {
        let data = enumerate_elliptic(&GroupSpec::sp(2, 2), Theta::Id, &universe2()).unwrap();
        let d = data
            .iter()
            .find(|d| d.components.0.rank == 1 && d.components.1.eta == ch("10"))
            .unwrap();
        assert_eq!(iota(d).unwrap(), q(1, 4));
    }

    #[test]
    fn twisted_rank_one_is_degenerate() {
        let data = enumerate_elliptic(&GroupSpec::so(1, ch("10")), Theta::Theta0, &universe2()).unwrap();
        assert!(data.iter().all(|d| d.components.0.rank == 0 && d.components.1.rank == 0));
        assert!(enumerate_elliptic(&GroupSpec::sp(1, 2), Theta::Theta0, &universe2()).is_err());
    }

    #[test]
    fn type_one_pair() {
        let p = Parameter::simple(
            GroupSpec::sp(1, 2),
            vec![
                (SimpleParam::character("e1", ch("10")), 1),
                (SimpleParam::character("e2", ch("01")), 1),
                (SimpleParam::character("e3", ch("11")), 1),
            ],
        )
        .unwrap();
        let x = PartitionPair {
            s: vec!["e3".into()],
            t: vec![],
            bits: 0,
            canonical: true,
        };
        let (datum, phi2) = endoscopic_pair(&p, Theta::Id, &x).unwrap();
        assert_eq!(datum.components.0, SimpleGroup::sp(0, 2));
        assert_eq!(datum.components.1, SimpleGroup::so(1, ch("11")));
        assert_eq!(datum.table_omega(), ch("11"));
        let halves = phi2.split_factors().unwrap();
        assert_eq!(halves[0].constituents().len(), 1);
        assert!(halves[0].constituents()[0].simple.central_char.is_zero());
        assert_eq!(halves[1].constituents().len(), 2);
    }
}
