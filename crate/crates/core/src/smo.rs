//! Multiplicity one and strong multiplicity one.
//!
//! A global parameter lives over the generator coordinates of a
//! [`GlobalCharModel`]. Its localizations are described by profiles; the
//! checks compare `α(𝒮_φ)` with the automorphic products of the local images.
//!
//! The strong-multiplicity-one-at-a-place criterion works with the dual
//! picture: the element group `V′ = ∏_v η_{G,v}^⊥` over all local coordinates,
//! paired with local characters by the dot product. There
//!
//! * `B_F` is the annihilator of the global characters,
//! * `B̄ = ∏_v B̄_v` with `B̄_v` the annihilator of the local image `α_v`,
//! * `A` is the set of elements vanishing at the distinguished place `u`,
//! * `A_F = A ∩ B_F`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::charfield::{x_modulus, GlobalCharModel};
use crate::compgroup::{alpha_image, Variant};
use crate::error::{Error, Result};
use crate::gf2::{Gf2Vec, Subspace};
use crate::params::{Constituent, Duality, GroupSpec, Parameter, SimpleGroup, SimpleParam};

/// One local constituent in a profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LocalItem {
    /// A quadratic character, in local coordinates.
    Char(Gf2Vec),
    Orth { dim: usize, eta: Gf2Vec },
    Symp { dim: usize },
    /// `ρ ⊕ ρ^∨` with `dim ρ = dim`.
    Pair { dim: usize },
}

impl LocalItem {
    fn total_dim(&self) -> usize {
        match self {
            LocalItem::Char(_) => 1,
            LocalItem::Orth { dim, .. } | LocalItem::Symp { dim } => *dim,
            LocalItem::Pair { dim } => 2 * dim,
        }
    }
}

/// Local decompositions keyed by `(constituent label, place)`. Constituents
/// without an entry localize irreducibly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Profiles {
    entries: BTreeMap<(String, String), Vec<LocalItem>>,
}

impl Profiles {
    pub fn new() -> Self {
        Profiles::default()
    }

    pub fn insert(&mut self, label: &str, place: &str, items: Vec<LocalItem>) {
        self.entries.insert((label.to_string(), place.to_string()), items);
    }

    pub fn get(&self, label: &str, place: &str) -> Option<&Vec<LocalItem>> {
        self.entries.get(&(label.to_string(), place.to_string()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(String, String), &Vec<LocalItem>)> {
        self.entries.iter()
    }
}

fn check_global(model: &GlobalCharModel, phi: &Parameter) -> Result<()> {
    if phi.char_dim() != model.dim() {
        return Err(Error::DimensionMismatch(format!(
            "parameter characters have length {}, the model has {} generators",
            phi.char_dim(),
            model.dim()
        )));
    }
    Ok(())
}

/// The localization of `φ` at `place`.
///
/// One-dimensional local constituents are identified by their character, so
/// equal local characters merge and their multiplicities add. Larger local
/// constituents keep a label derived from the global one.
pub fn localize_parameter(model: &GlobalCharModel, phi: &Parameter, place: &str, profiles: &Profiles) -> Result<Parameter> {
    check_global(model, phi)?;
    let idx = model.place_index(place)?;
    let loc = model.localization_map(idx);
    let r = model.places()[idx].local_rank();
    let localize = |v: &Gf2Vec| Gf2Vec::from_bits(loc.apply(v.bits()), r);
    let factors: Vec<SimpleGroup> = phi
        .target()
        .factors()
        .iter()
        .map(|g| SimpleGroup { eta: localize(&g.eta), ..g.clone() })
        .collect();
    let target = GroupSpec::new(factors, phi.target().similitude)?;
    let bad = |label: &str, reason: String| Error::InvalidProfile {
        place: place.to_string(),
        label: label.to_string(),
        reason,
    };
    // (factor, key) -> constituent
    let mut merged: BTreeMap<(usize, String), Constituent> = BTreeMap::new();
    let mut add = |factor: usize, key: String, simple: SimpleParam, mult: usize| {
        merged
            .entry((factor, key))
            .and_modify(|c| c.mult += mult)
            .or_insert(Constituent { simple, mult, factor });
    };
    for c in phi.constituents() {
        let label = &c.simple.label;
        let eta_v = localize(&c.simple.central_char);
        let Some(items) = profiles.get(label, place) else {
            if c.simple.dim == 1 && c.simple.is_orth() {
                let key = format!("chi{eta_v}");
                add(c.factor, key.clone(), SimpleParam::character(key, eta_v), c.mult);
            } else {
                let simple = SimpleParam::new(label.clone(), c.simple.dim, c.simple.duality, eta_v)?;
                add(c.factor, label.clone(), simple, c.mult);
            }
            continue;
        };
        if c.simple.duality != Duality::OrthSelfDual {
            return Err(bad(label, "profiles are only supported for orthogonal constituents".into()));
        }
        let total: usize = items.iter().map(LocalItem::total_dim).sum();
        if total != c.simple.dim {
            return Err(bad(label, format!("local dimensions sum to {total}, expected {}", c.simple.dim)));
        }
        let mut det = Gf2Vec::zero(r);
        for (k, item) in items.iter().enumerate() {
            let name = format!("{label}.{}", k + 1);
            match item {
                LocalItem::Char(x) => {
                    if x.len() != r {
                        return Err(bad(label, format!("character '{x}' has length {}, expected {r}", x.len())));
                    }
                    det = det.add(x);
                    let key = format!("chi{x}");
                    add(c.factor, key.clone(), SimpleParam::character(key, *x), c.mult);
                }
                LocalItem::Orth { dim, eta } => {
                    if eta.len() != r {
                        return Err(bad(label, format!("character '{eta}' has length {}, expected {r}", eta.len())));
                    }
                    det = det.add(eta);
                    let simple = SimpleParam::new(name.clone(), *dim, Duality::OrthSelfDual, *eta)
                        .map_err(|e| bad(label, e.to_string()))?;
                    add(c.factor, name, simple, c.mult);
                }
                LocalItem::Symp { dim } => {
                    let simple = SimpleParam::new(name.clone(), *dim, Duality::SympSelfDual, Gf2Vec::zero(r))
                        .map_err(|e| bad(label, e.to_string()))?;
                    add(c.factor, name, simple, c.mult);
                }
                LocalItem::Pair { dim } => {
                    let simple = SimpleParam::new(name.clone(), *dim, Duality::NonSelfDualPair, Gf2Vec::zero(r))
                        .map_err(|e| bad(label, e.to_string()))?;
                    add(c.factor, name, simple, c.mult);
                }
            }
        }
        if det != eta_v {
            return Err(bad(
                label,
                format!("local determinant {det} differs from the localized character {eta_v}"),
            ));
        }
    }
    Parameter::new(target, merged.into_values().collect()).map_err(|e| bad("*", e.to_string()))
}

/// One chain `α(𝒮_φ) ⊆ ∏^aut_v α(𝒮_{φ_v}) ⊆ ∏^aut_{v ∉ U} α(𝒮_{φ_v})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub variant: String,
    /// Orders of the three groups as subgroups of the global X.
    pub orders: [u128; 3],
    pub multiplicity_one: bool,
    pub multiplicity_one_witness: Option<Gf2Vec>,
    pub strong_multiplicity_one: bool,
    pub strong_witness: Option<Gf2Vec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityOneReport {
    pub exceptions: Vec<String>,
    pub plain: ChainReport,
    pub sigma0: ChainReport,
}

fn chain(model: &GlobalCharModel, phi: &Parameter, locals: &[Parameter], u: &[String], variant: Variant) -> Result<ChainReport> {
    let modulus = x_modulus(phi.target());
    let global = alpha_image(phi, variant);
    let local_images: Vec<Subspace> = locals.iter().map(|p| alpha_image(p, variant)).collect();
    let all = model.aut_product_group(&local_images, &[])?;
    let away = model.aut_product_group(&local_images, u)?;
    let order = |s: &Subspace| 1u128 << (s.rank() - modulus.rank());
    let vec = |w: u64| Gf2Vec::from_bits(w, model.dim());
    for (small, big, what) in [(&global, &all, "global image"), (&all, &away, "product over all places")] {
        if let Some(w) = small.witness_not_in(big) {
            return Err(Error::Containment(format!("{what} contains {} outside the next group", vec(w))));
        }
    }
    let w1 = all.witness_not_in(&global).map(vec);
    let w2 = away.witness_not_in(&global).map(vec);
    Ok(ChainReport {
        variant: match variant {
            Variant::SbarSigma0 => "sigma0".into(),
            _ => "plain".into(),
        },
        orders: [order(&global), order(&all), order(&away)],
        multiplicity_one: w1.is_none(),
        multiplicity_one_witness: w1,
        strong_multiplicity_one: w2.is_none(),
        strong_witness: w2,
    })
}

/// The plain and `Σ₀` multiplicity-one chains of a global parameter.
pub fn multiplicity_one_checks(
    model: &GlobalCharModel,
    phi: &Parameter,
    profiles: &Profiles,
    exceptions: &[String],
) -> Result<MultiplicityOneReport> {
    check_global(model, phi)?;
    let locals = model
        .places()
        .iter()
        .map(|p| localize_parameter(model, phi, &p.id, profiles))
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiplicityOneReport {
        exceptions: exceptions.to_vec(),
        plain: chain(model, phi, &locals, exceptions, Variant::Sbar)?,
        sigma0: chain(model, phi, &locals, exceptions, Variant::SbarSigma0)?,
    })
}

/// Data of the strong-multiplicity-one-at-a-place criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoInstance {
    pub model: GlobalCharModel,
    /// `η_{G,v}` per place, in local coordinates.
    pub eta_local: Vec<Gf2Vec>,
    /// The local images `α(𝒮_{φ_v})` together with `⟨η_{G,v}⟩`.
    pub alpha_local: Vec<Subspace>,
    pub u: usize,
}

impl SmoInstance {
    pub fn new(model: GlobalCharModel, eta_local: Vec<Gf2Vec>, alpha_local: Vec<Subspace>, u: &str) -> Result<Self> {
        let n = model.places().len();
        if eta_local.len() != n || alpha_local.len() != n {
            return Err(Error::InvalidModel(format!("expected data for {n} places")));
        }
        for (i, p) in model.places().iter().enumerate() {
            let r = p.local_rank();
            if eta_local[i].len() != r || alpha_local[i].ambient_dim() != r {
                return Err(Error::InvalidModel(format!("local data at '{}' has the wrong rank", p.id)));
            }
        }
        let u = model.place_index(u)?;
        let alpha_local = alpha_local
            .into_iter()
            .zip(&eta_local)
            .map(|(a, e)| a.sum(&Subspace::span(e.len(), [e.bits()])))
            .collect();
        Ok(SmoInstance { model, eta_local, alpha_local, u })
    }

    /// The instance attached to a global parameter and its profiles.
    pub fn from_parameter(
        model: &GlobalCharModel,
        phi: &Parameter,
        profiles: &Profiles,
        u: &str,
        variant: Variant,
    ) -> Result<Self> {
        if !phi.target().is_simple() {
            return Err(Error::Unsupported("strong multiplicity one for product targets".into()));
        }
        let mut etas = Vec::new();
        let mut alphas = Vec::new();
        for p in model.places() {
            let local = localize_parameter(model, phi, &p.id, profiles)?;
            etas.push(local.target().eta_g());
            alphas.push(alpha_image(&local, variant));
        }
        SmoInstance::new(model.clone(), etas, alphas, u)
    }

    fn total(&self) -> usize {
        self.model.total_local_rank()
    }

    fn embed(&self, place: usize, s: &Subspace) -> Subspace {
        let off = self.model.offset(place);
        Subspace::span(self.total(), s.basis().iter().map(|&b| b << off))
    }

    fn place_mask(&self, place: usize) -> u64 {
        let r = self.model.places()[place].local_rank();
        crate::gf2::mask(r) << self.model.offset(place)
    }

    pub fn v_prime(&self) -> Subspace {
        let n = self.total();
        Subspace::span(
            n,
            self.eta_local
                .iter()
                .enumerate()
                .map(|(i, e)| e.bits() << self.model.offset(i)),
        )
        .annihilator()
    }

    pub fn b_f(&self) -> Subspace {
        let c = Subspace::span_vecs(self.total(), self.model.generators());
        c.annihilator().intersection(&self.v_prime())
    }

    pub fn b_bar_local(&self, place: usize) -> Subspace {
        self.alpha_local[place].annihilator()
    }

    pub fn b_bar(&self) -> Subspace {
        (0..self.model.places().len()).fold(Subspace::zero(self.total()), |acc, v| {
            acc.sum(&self.embed(v, &self.b_bar_local(v)))
        })
    }

    pub fn a(&self) -> Subspace {
        let away = Subspace::span(
            self.total(),
            (0..self.total()).map(|i| 1u64 << i).filter(|b| b & self.place_mask(self.u) == 0),
        );
        away.intersection(&self.v_prime())
    }

    pub fn a_f(&self) -> Subspace {
        self.a().intersection(&self.b_f())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoReport {
    pub place: String,
    /// `|A ∩ B̄B_F : A ∩ B̄A_F|`.
    pub index: u128,
    pub index_criterion: bool,
    pub lifting_criterion: bool,
    /// An element of `B̄_u` with no global lift, in local coordinates at `u`.
    pub witness: Option<Gf2Vec>,
    /// Whether the automorphic products with and without `u` agree.
    pub aut_products_agree: bool,
    pub holds: bool,
}

/// Evaluates both formulations of strong multiplicity one at the place `u`
/// and cross-checks them with the automorphic products.
pub fn smo_at_place_criterion(inst: &SmoInstance) -> Result<SmoReport> {
    let v_prime = inst.v_prime();
    let a = inst.a();
    let b_f = inst.b_f();
    let a_f = inst.a_f();
    let b_bar = inst.b_bar();
    if a.sum(&b_f) != v_prime {
        return Err(Error::Precondition(
            "approximation fails: some global character is trivial away from the distinguished place".into(),
        ));
    }
    let x1 = a.intersection(&b_bar.sum(&b_f));
    let x2 = a.intersection(&b_bar.sum(&a_f));
    let index = 1u128 << (x1.rank() - x2.rank());
    let index_criterion = index == 1;

    // Every x ∈ B̄ has y ∈ B̄ ∩ B_F with x + y ∈ A.
    let lifts = b_bar.intersection(&b_f);
    let global_form = b_bar.is_subspace_of(&a.sum(&lifts));
    // Local form: the projection of the lifts to u covers B̄_u.
    let off = inst.model.offset(inst.u);
    let r = inst.model.places()[inst.u].local_rank();
    let proj = Subspace::span(r, lifts.basis().iter().map(|&y| (y >> off) & crate::gf2::mask(r)));
    let b_u = inst.b_bar_local(inst.u);
    let witness = b_u.witness_not_in(&proj).map(|w| Gf2Vec::from_bits(w, r));
    let lifting_criterion = witness.is_none();
    if global_form != lifting_criterion {
        return Err(Error::Consistency("the two lifting formulations disagree".into()));
    }
    if index_criterion != lifting_criterion {
        return Err(Error::Consistency(format!(
            "index criterion ({index}) and lifting criterion ({lifting_criterion}) disagree"
        )));
    }
    let u_id = inst.model.places()[inst.u].id.clone();
    let all = inst.model.aut_product_group(&inst.alpha_local, &[])?;
    let away = inst.model.aut_product_group(&inst.alpha_local, std::slice::from_ref(&u_id))?;
    let aut_products_agree = all == away;
    if aut_products_agree != lifting_criterion {
        return Err(Error::Consistency(
            "the lifting criterion disagrees with the automorphic products".into(),
        ));
    }
    Ok(SmoReport {
        place: u_id,
        index,
        index_criterion,
        lifting_criterion,
        witness,
        aut_products_agree,
        holds: lifting_criterion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_local_image_at_u_fails() {
        let m = GlobalCharModel::three_place();
        let etas: Vec<Gf2Vec> = m.places().iter().map(|p| Gf2Vec::zero(p.local_rank())).collect();
        let alphas: Vec<Subspace> = m
            .places()
            .iter()
            .map(|p| if p.id == "p1" { Subspace::zero(2) } else { Subspace::full(p.local_rank()) })
            .collect();
        let inst = SmoInstance::new(m, etas, alphas, "p1").unwrap();
        let r = smo_at_place_criterion(&inst).unwrap();
        assert!(!r.holds);
        assert!(r.witness.is_some());
    }

    #[test]
    fn squares_only_is_vacuous() {
        let m = GlobalCharModel::three_place();
        let etas: Vec<Gf2Vec> = m.places().iter().map(|p| Gf2Vec::zero(p.local_rank())).collect();
        let alphas: Vec<Subspace> = m.places().iter().map(|p| Subspace::full(p.local_rank())).collect();
        let inst = SmoInstance::new(m, etas, alphas, "p2").unwrap();
        let r = smo_at_place_criterion(&inst).unwrap();
        assert!(r.holds);
        assert_eq!(r.index, 1);
    }
}
