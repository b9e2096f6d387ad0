//! Centralizer shapes, component groups, the partition model and the map α.
//!
//! Coordinates are the orthogonal constituents `I_O` in canonical order. For
//! an element `v ∈ GF(2)^{I_O}` the matching centralizer element is −1 on one
//! line of each `O(l_i)` block with `v_i = 1`. The character `ε⁺` pairs `v`
//! with the vector of odd dimensions; the central element −1 of the dual
//! group is the vector of odd multiplicities.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::charfield::x_modulus;
use crate::error::{Error, Result};
use crate::gf2::{dot, Gf2Vec, LinearMap, Subspace};
use crate::params::{Duality, Family, Parameter, Theta};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    O,
    Sp,
    GL,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralizerFactor {
    pub kind: FactorKind,
    pub size: usize,
    pub attached_dim: usize,
    pub label: String,
    #[serde(skip)]
    pub factor: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CenterQuotient {
    Trivial,
    Order2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralizerShape {
    pub factors: Vec<CentralizerFactor>,
    pub plus_kernel: bool,
    pub center_quotient: CenterQuotient,
}

/// The centralizer of the image of `φ` in the dual group.
pub fn centralizer_shape(phi: &Parameter) -> CentralizerShape {
    let mut factors = Vec::new();
    for (i, c) in phi.constituents().iter().enumerate() {
        let kind = match c.simple.duality {
            Duality::OrthSelfDual => FactorKind::O,
            Duality::SympSelfDual => FactorKind::Sp,
            Duality::NonSelfDualPair => FactorKind::GL,
        };
        factors.push(CentralizerFactor {
            kind,
            size: c.mult,
            attached_dim: c.simple.dim,
            label: phi.key(i),
            factor: c.factor,
        });
    }
    let plus_kernel = factors
        .iter()
        .any(|f| f.kind == FactorKind::O && f.attached_dim % 2 == 1);
    let center_quotient = if phi
        .target()
        .factors()
        .iter()
        .any(|g| g.family == Family::SOeven && g.rank > 0)
    {
        CenterQuotient::Order2
    } else {
        CenterQuotient::Trivial
    };
    CentralizerShape {
        factors,
        plus_kernel,
        center_quotient,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    /// Component group of the centralizer, before dividing by the center.
    S,
    /// The component group modulo the Galois-fixed center.
    Sbar,
    /// The same with the full orthogonal groups (the `ε⁺` condition dropped).
    SbarSigma0,
    /// The kernel of α inside `Sbar`.
    Stilde,
}

/// Per-coordinate data of the orthogonal constituents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthCoords {
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    pub mults: Vec<usize>,
    pub etas: Vec<Gf2Vec>,
    pub factor_of: Vec<usize>,
    families: Vec<Family>,
    ranks: Vec<usize>,
}

impl OrthCoords {
    pub fn of(phi: &Parameter) -> Self {
        let mut oc = OrthCoords {
            labels: Vec::new(),
            dims: Vec::new(),
            mults: Vec::new(),
            etas: Vec::new(),
            factor_of: Vec::new(),
            families: phi.target().factors().iter().map(|g| g.family).collect(),
            ranks: phi.target().factors().iter().map(|g| g.rank).collect(),
        };
        for i in phi.orth_indices() {
            let c = &phi.constituents()[i];
            oc.labels.push(phi.key(i));
            oc.dims.push(c.simple.dim);
            oc.mults.push(c.mult);
            oc.etas.push(c.simple.central_char);
            oc.factor_of.push(c.factor);
        }
        assert!(oc.labels.len() <= 24, "too many orthogonal constituents");
        oc
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_factors(&self) -> usize {
        self.families.len()
    }

    fn factor_mask(&self, k: usize) -> u64 {
        (0..self.len())
            .filter(|&i| self.factor_of[i] == k)
            .fold(0, |a, i| a | (1 << i))
    }

    /// Coordinates with odd dimension, within factor `k`.
    pub fn eps_vector(&self, k: usize) -> u64 {
        (0..self.len())
            .filter(|&i| self.factor_of[i] == k && self.dims[i] % 2 == 1)
            .fold(0, |a, i| a | (1 << i))
    }

    /// Coordinates with odd multiplicity (the set `I_O^odd`), within factor `k`.
    pub fn odd_vector(&self, k: usize) -> u64 {
        (0..self.len())
            .filter(|&i| self.factor_of[i] == k && self.mults[i] % 2 == 1)
            .fold(0, |a, i| a | (1 << i))
    }

    pub fn odd_mask(&self) -> u64 {
        (0..self.n_factors()).fold(0, |a, k| a | self.odd_vector(k))
    }

    pub fn family(&self, k: usize) -> Family {
        self.families[k]
    }

    /// Whether factor `k` contributes a central −1 to the dual group.
    pub fn has_center(&self, k: usize) -> bool {
        self.families[k] == Family::SOeven && self.ranks[k] > 0
    }

    /// The allowed vectors of a variant (before the center quotient).
    pub fn sub(&self, variant: Variant) -> Subspace {
        let mut constraints = Vec::new();
        for k in 0..self.n_factors() {
            let drop = variant == Variant::SbarSigma0 && self.families[k] == Family::SOeven;
            if !drop {
                constraints.push(self.eps_vector(k));
            }
        }
        // The kernel of all ε-constraints is the annihilator of their span.
        Subspace::span(self.len(), constraints).annihilator()
    }

    pub fn center_relations(&self) -> Subspace {
        Subspace::span(
            self.len(),
            (0..self.n_factors())
                .filter(|&k| self.has_center(k))
                .map(|k| self.odd_vector(k)),
        )
    }

    /// Relations defining the partition model: the complement equivalence in
    /// every factor.
    pub fn complement_relations(&self) -> Subspace {
        Subspace::span(self.len(), (0..self.n_factors()).map(|k| self.odd_vector(k)))
    }

    /// Canonical partition representative: per factor, the one that does not
    /// contain the first label of `I_O^odd`.
    pub fn canonical(&self, v: u64) -> u64 {
        let mut v = v;
        for k in 0..self.n_factors() {
            let odd = self.odd_vector(k);
            if odd != 0 && (v >> odd.trailing_zeros()) & 1 == 1 {
                v ^= odd;
            }
        }
        v
    }

    pub fn pair(&self, v: u64) -> PartitionPair {
        let odd = self.odd_mask();
        let pick = |m: u64| -> Vec<String> {
            (0..self.len())
                .filter(|&i| (m >> i) & 1 == 1)
                .map(|i| self.labels[i].clone())
                .collect()
        };
        PartitionPair {
            s: pick(v & odd),
            t: pick(v & !odd),
            bits: v,
            canonical: self.canonical(v) == v,
        }
    }

    /// Coordinates of a pair given by labels.
    pub fn vector_of(&self, s: &[String], t: &[String]) -> Result<u64> {
        let odd = self.odd_mask();
        let mut v = 0u64;
        for (names, want_odd) in [(s, true), (t, false)] {
            for name in names {
                let i = self
                    .labels
                    .iter()
                    .position(|l| l == name)
                    .ok_or_else(|| Error::Precondition(format!("'{name}' is not an orthogonal label")))?;
                if ((odd >> i) & 1 == 1) != want_odd {
                    return Err(Error::Precondition(format!(
                        "'{name}' belongs to the other half of the partition"
                    )));
                }
                v |= 1 << i;
            }
        }
        Ok(v)
    }

    pub fn all_factor_masks(&self) -> Vec<u64> {
        (0..self.n_factors()).map(|k| self.factor_mask(k)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentGroup {
    pub variant: Variant,
    pub coords: OrthCoords,
    pub sub: Subspace,
    pub rel: Subspace,
}

impl ComponentGroup {
    pub fn order(&self) -> u128 {
        1u128 << (self.sub.rank() - self.rel.rank())
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.coords.labels
    }

    pub fn contains(&self, v: u64) -> bool {
        self.sub.contains(v)
    }

    /// Canonical representative of the class of `v`.
    pub fn class_rep(&self, v: u64) -> u64 {
        self.rel.reduce(v)
    }

    /// Canonical representatives of all elements, sorted.
    pub fn elements(&self) -> Vec<u64> {
        let set: BTreeSet<u64> = self
            .sub
            .elements()
            .into_iter()
            .map(|v| self.rel.reduce(v))
            .collect();
        set.into_iter().collect()
    }

    pub fn relation_vectors(&self) -> Vec<Gf2Vec> {
        self.rel.basis_vecs()
    }

    pub fn to_vec(&self, v: u64) -> Gf2Vec {
        Gf2Vec::from_bits(v, self.coords.len())
    }
}

/// `𝒮_φ` and its relatives as basis-plus-relations groups.
pub fn component_group(phi: &Parameter, variant: Variant) -> ComponentGroup {
    let coords = OrthCoords::of(phi);
    let (sub, rel) = match variant {
        Variant::S => (coords.sub(Variant::S), Subspace::zero(coords.len())),
        Variant::Sbar | Variant::SbarSigma0 => (coords.sub(variant), coords.center_relations()),
        Variant::Stilde => {
            let base = coords.sub(Variant::Sbar);
            let ker = alpha_map(phi).kernel();
            (base.intersection(&ker), coords.center_relations())
        }
    };
    debug_assert!(rel.is_subspace_of(&sub));
    ComponentGroup {
        variant,
        coords,
        sub,
        rel,
    }
}

/// A partition `(S, T)` with `S ⊆ I_O^odd`, `T ⊆ I_O^even`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PartitionPair {
    #[serde(rename = "S")]
    pub s: Vec<String>,
    #[serde(rename = "T")]
    pub t: Vec<String>,
    #[serde(skip)]
    pub bits: u64,
    #[serde(skip)]
    pub canonical: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionGroup {
    pub sigma0: bool,
    pub classes: Vec<PartitionPair>,
}

impl PartitionGroup {
    pub fn order(&self) -> usize {
        self.classes.len()
    }
}

/// Whether `v` satisfies the parity condition defining `𝒫_φ`.
fn parity_ok(coords: &OrthCoords, v: u64, sigma0: bool) -> bool {
    (0..coords.n_factors()).all(|k| {
        coords.family(k) != Family::SOeven
            || sigma0
            || (coords.eps_vector(k) & v).count_ones().is_multiple_of(2)
    })
}

/// Enumerates `𝒫_φ` (or `𝒫_φ^{Σ₀}`) directly from subsets.
pub fn p_phi(phi: &Parameter, sigma0: bool) -> PartitionGroup {
    let coords = OrthCoords::of(phi);
    let mut seen = BTreeSet::new();
    for v in 0u64..(1u64 << coords.len()) {
        if parity_ok(&coords, v, sigma0) {
            seen.insert(coords.canonical(v));
        }
    }
    PartitionGroup {
        sigma0,
        classes: seen.into_iter().map(|v| coords.pair(v)).collect(),
    }
}

/// The bijection from the component group to the partition model.
pub fn c_map(group: &ComponentGroup, x: u64) -> Result<PartitionPair> {
    if !group.contains(x) {
        return Err(Error::WrongComponent(format!(
            "{} is not in the group",
            group.to_vec(x)
        )));
    }
    Ok(group.coords.pair(group.coords.canonical(x)))
}

/// Inverse of `c_map`: the canonical group element attached to a partition
/// pair (given by either representative).
pub fn c_map_inverse(group: &ComponentGroup, pair: &PartitionPair) -> Result<u64> {
    let coords = &group.coords;
    let v = coords.vector_of(&pair.s, &pair.t)?;
    let rels = coords.complement_relations();
    // Search the complement class for members of the group.
    for r in rels.elements() {
        let w = v ^ r;
        if group.contains(w) {
            return Ok(group.class_rep(w));
        }
    }
    Err(Error::WrongComponent(format!(
        "pair S={:?} T={:?} violates the parity condition",
        pair.s, pair.t
    )))
}

/// α as a linear map to characters, reduced modulo the modulus of X.
pub fn alpha_map(phi: &Parameter) -> LinearMap {
    let coords = OrthCoords::of(phi);
    let modulus = x_modulus(phi.target());
    LinearMap::new(
        coords.len(),
        phi.char_dim(),
        coords.etas.iter().map(|e| modulus.reduce(e.bits())).collect(),
    )
}

/// α(x) as the canonical representative of its class in X.
pub fn alpha(phi: &Parameter, x: u64) -> Gf2Vec {
    Gf2Vec::from_bits(alpha_map(phi).apply(x), phi.char_dim())
}

/// The preimage in the character group of `α(group)`, i.e. the image
/// together with the modulus of X.
pub fn alpha_image(phi: &Parameter, variant: Variant) -> Subspace {
    let g = component_group(phi, variant);
    alpha_map(phi)
        .image_of(&g.sub)
        .sum(&x_modulus(phi.target()))
}

/// Order of `α(group)` inside X.
pub fn alpha_image_order(phi: &Parameter, variant: Variant) -> u128 {
    let m = x_modulus(phi.target());
    1u128 << (alpha_image(phi, variant).rank() - m.rank())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StildeReport {
    pub group: ComponentGroup,
    pub order_linear: u128,
    pub order_combinatorial: u128,
    pub classes: Vec<PartitionPair>,
}

/// Whether the product of the characters on `v` is trivial in X, computed by
/// listing the modulus explicitly.
fn product_trivial(coords: &OrthCoords, modulus_elems: &[u64], v: u64) -> bool {
    let prod = (0..coords.len())
        .filter(|&i| (v >> i) & 1 == 1)
        .fold(0u64, |a, i| a ^ coords.etas[i].bits());
    modulus_elems.contains(&prod)
}

/// `𝒮_φ̃` computed as the kernel of α and, independently, as the set of
/// partition classes with trivial character product. Errors if they differ.
pub fn s_tilde(phi: &Parameter) -> Result<StildeReport> {
    let group = component_group(phi, Variant::Stilde);
    let coords = &group.coords;
    let modulus_elems = x_modulus(phi.target()).elements();
    let p = p_phi(phi, false);
    let classes: Vec<PartitionPair> = p
        .classes
        .into_iter()
        .filter(|c| product_trivial(coords, &modulus_elems, c.bits))
        .collect();
    let linear: BTreeSet<u64> = group
        .elements()
        .into_iter()
        .map(|v| coords.canonical(v))
        .collect();
    let comb: BTreeSet<u64> = classes.iter().map(|c| coords.canonical(c.bits)).collect();
    // For symplectic targets the group and the partition model pick different
    // representatives; compare classes modulo the complement relations.
    let rels = coords.complement_relations();
    let norm = |s: &BTreeSet<u64>| -> BTreeSet<u64> { s.iter().map(|&v| rels.reduce(v)).collect() };
    if norm(&linear) != norm(&comb) || group.order() != classes.len() as u128 {
        return Err(Error::Consistency(format!(
            "kernel of alpha has {} elements, partition model has {}",
            group.order(),
            classes.len()
        )));
    }
    Ok(StildeReport {
        order_linear: group.order(),
        order_combinatorial: classes.len() as u128,
        group,
        classes,
    })
}

/// Checks the hypothesis of the triviality criterion: every partition with
/// trivial character product has `T = ∅` and `S ∈ {∅, I_O^odd}`. Returns the
/// first violating pair otherwise.
pub fn stilde_is_trivial_test(phi: &Parameter) -> (bool, Option<PartitionPair>) {
    let coords = OrthCoords::of(phi);
    let modulus_elems = x_modulus(phi.target()).elements();
    let odd = coords.odd_mask();
    for v in 0u64..(1u64 << coords.len()) {
        if !parity_ok(&coords, v, false) {
            continue;
        }
        if !product_trivial(&coords, &modulus_elems, v) {
            continue;
        }
        let t_empty = v & !odd == 0;
        let s = v & odd;
        let s_ok = (0..coords.n_factors()).all(|k| {
            let o = coords.odd_vector(k);
            s & o == 0 || s & o == o
        });
        if !(t_empty && s_ok) {
            return (false, Some(coords.pair(v)));
        }
    }
    (true, None)
}

/// Elements of the θ-component of `𝒮̄_φ^{Σ₀}` (for θ = id, simply `𝒮̄_φ`).
pub fn theta_component(phi: &Parameter, theta: Theta) -> Result<(ComponentGroup, Vec<u64>)> {
    match theta {
        Theta::Id => {
            let g = component_group(phi, Variant::Sbar);
            let e = g.elements();
            Ok((g, e))
        }
        Theta::Theta0 => {
            if !phi.target().is_simple() {
                return Err(Error::Unsupported("theta0 on a product target".into()));
            }
            if phi.target().family() == Family::Sp {
                return Err(Error::ThetaOnSymplectic);
            }
            let g = component_group(phi, Variant::SbarSigma0);
            let eps = g.coords.eps_vector(0);
            let e = g.elements().into_iter().filter(|&v| dot(v, eps)).collect();
            Ok((g, e))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub holds: bool,
    pub witness: Option<String>,
}

/// For `φ` elliptic with trivial `𝒮_φ̃` under one of the three admissible
/// conditions, splits `φ` along `split` and checks that both halves again have
/// trivial `𝒮̃`.
pub fn consistency_on_induction_check(
    phi: &Parameter,
    theta: Theta,
    split: &PartitionPair,
) -> Result<ConsistencyReport> {
    if !phi.target().is_simple() {
        return Err(Error::Unsupported("products are not split".into()));
    }
    if !phi.is_elliptic(theta)? {
        return Err(Error::Precondition("parameter is not elliptic in this component".into()));
    }
    if s_tilde(phi)?.order_linear != 1 {
        return Err(Error::Precondition("the lifted component group is not trivial".into()));
    }
    let g = phi.target();
    let part = phi.index_partition();
    let admissible = match g.family() {
        Family::Sp => true,
        Family::SOeven => {
            !g.eta_g().is_zero() || part.i_o_odd.is_empty() || part.i_o_even.is_empty()
        }
    };
    if !admissible {
        return Err(Error::Precondition(
            "split target with both odd and even orthogonal multiplicities".into(),
        ));
    }
    let (_, pair) = crate::endoscopy::endoscopic_pair(phi, theta, split)?;
    for (k, half) in pair.split_factors()?.iter().enumerate() {
        let r = s_tilde(half)?;
        if r.order_linear != 1 {
            let w = r
                .classes
                .iter()
                .find(|c| !(c.s.is_empty() && c.t.is_empty()))
                .map(|c| format!("factor {}: S={:?} T={:?}", k + 1, c.s, c.t));
            return Ok(ConsistencyReport {
                holds: false,
                witness: w,
            });
        }
    }
    Ok(ConsistencyReport {
        holds: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{GroupSpec, SimpleParam};

    fn ch(s: &str) -> Gf2Vec {
        Gf2Vec::parse(s).unwrap()
    }

    fn type_one() -> Parameter {
        Parameter::simple(
            GroupSpec::sp(1, 2),
            vec![
                (SimpleParam::character("e1", ch("10")), 1),
                (SimpleParam::character("e2", ch("01")), 1),
                (SimpleParam::character("e3", ch("11")), 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn type_one_counts() {
        let p = type_one();
        assert_eq!(component_group(&p, Variant::Sbar).order(), 4);
        assert_eq!(p_phi(&p, false).order(), 4);
        assert_eq!(s_tilde(&p).unwrap().order_linear, 1);
        assert!(stilde_is_trivial_test(&p).0);
    }

    #[test]
    fn type_one_alpha_of_singleton() {
        let p = type_one();
        let g = component_group(&p, Variant::Sbar);
        let pair = PartitionPair {
            s: vec!["e3".into()],
            t: vec![],
            bits: 0,
            canonical: true,
        };
        let x = c_map_inverse(&g, &pair).unwrap();
        assert_eq!(alpha(&p, x), ch("11"));
        let back = c_map(&g, x).unwrap();
        assert_eq!(back.s, ["e3"]);
    }

    #[test]
    fn even_orthogonal_sigma0_counts() {
        let p = Parameter::simple(
            GroupSpec::so(2, ch("0")),
            vec![(SimpleParam::orth("a", 2, ch("1")), 1), (SimpleParam::orth("b", 2, ch("1")), 1)],
        )
        .unwrap();
        assert_eq!(component_group(&p, Variant::SbarSigma0).order(), 2);
        assert_eq!(p_phi(&p, true).order(), 2);
    }

    #[test]
    fn equal_even_characters_give_witness() {
        let p = Parameter::simple(
            GroupSpec::so(4, ch("0")),
            vec![(SimpleParam::orth("a", 2, ch("1")), 2), (SimpleParam::orth("b", 2, ch("1")), 2)],
        )
        .unwrap();
        let (ok, w) = stilde_is_trivial_test(&p);
        assert!(!ok);
        assert_eq!(w.unwrap().t, ["a", "b"]);
    }
}
