//! Finite models of local and global quadratic characters.
//!
//! Local quadratic characters at a place form GF(2)^rank (rank 2 at a finite
//! place, spanned by an unramified and a ramified generator; rank 1 at a real
//! place). A global model fixes finitely many places and an independent set of
//! generator rows over the concatenated local coordinates; their span is the
//! group of global quadratic characters, and a global character is stored by
//! its coordinates over the generator rows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{Gf2Vec, LinearMap, Subspace};
use crate::params::{Family, GroupSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaceKind {
    Real,
    Finite,
}

impl PlaceKind {
    pub fn local_rank(self) -> usize {
        match self {
            PlaceKind::Real => 1,
            PlaceKind::Finite => 2,
        }
    }

    pub fn basis_labels(self) -> &'static [&'static str] {
        match self {
            PlaceKind::Real => &["sign"],
            PlaceKind::Finite => &["unramified", "ramified"],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PlaceModel {
    pub id: String,
    pub kind: PlaceKind,
}

impl PlaceModel {
    pub fn new(id: impl Into<String>, kind: PlaceKind) -> Self {
        PlaceModel {
            id: id.into(),
            kind,
        }
    }

    pub fn local_rank(&self) -> usize {
        self.kind.local_rank()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LocalQuadChar {
    pub place: String,
    pub coords: Gf2Vec,
}

impl LocalQuadChar {
    pub fn is_trivial(&self) -> bool {
        self.coords.is_zero()
    }
}

/// A global quadratic character, given by coordinates over the generator rows
/// of the model it belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GlobalQuadChar {
    pub coords: Gf2Vec,
}

impl GlobalQuadChar {
    pub fn mul(&self, other: &GlobalQuadChar) -> GlobalQuadChar {
        GlobalQuadChar {
            coords: self.coords.add(&other.coords),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalCharModel {
    places: Vec<PlaceModel>,
    #[serde(skip)]
    offsets: Vec<usize>,
    #[serde(skip)]
    total_rank: usize,
    generators: Vec<Gf2Vec>,
}

impl GlobalCharModel {
    /// Builds a model; generator rows must be independent vectors over the
    /// concatenated local coordinates, in place order.
    pub fn new(places: Vec<PlaceModel>, generators: Vec<Gf2Vec>) -> Result<Self> {
        let mut offsets = Vec::with_capacity(places.len());
        let mut total = 0;
        for (i, p) in places.iter().enumerate() {
            if places[..i].iter().any(|q| q.id == p.id) {
                return Err(Error::InvalidModel(format!("duplicate place id '{}'", p.id)));
            }
            offsets.push(total);
            total += p.local_rank();
        }
        if total > crate::gf2::MAX_DIM {
            return Err(Error::InvalidModel("too many local coordinates".into()));
        }
        if generators.len() > crate::gf2::MAX_DIM {
            return Err(Error::InvalidModel("too many generators".into()));
        }
        for g in &generators {
            if g.len() != total {
                return Err(Error::InvalidModel(format!(
                    "generator row '{g}' has length {}, expected {total}",
                    g.len()
                )));
            }
        }
        let span = Subspace::span_vecs(total, &generators);
        if span.rank() != generators.len() {
            return Err(Error::InvalidModel("generator rows are not independent".into()));
        }
        Ok(GlobalCharModel {
            places,
            offsets,
            total_rank: total,
            generators,
        })
    }

    /// Three finite places `p1 p2 p3` and one real place `inf`, with two
    /// generators whose localizations span every finite local group.
    ///
    /// Coordinates are `p1(u r) p2(u r) p3(u r) inf(s)`:
    /// `g1 = 10 01 11 1`, `g2 = 01 10 10 1`.
    pub fn three_place() -> Self {
        let places = vec![
            PlaceModel::new("p1", PlaceKind::Finite),
            PlaceModel::new("p2", PlaceKind::Finite),
            PlaceModel::new("p3", PlaceKind::Finite),
            PlaceModel::new("inf", PlaceKind::Real),
        ];
        let gens = ["1001111", "0110101"]
            .iter()
            .map(|s| Gf2Vec::parse(s).expect("fixture"))
            .collect();
        GlobalCharModel::new(places, gens).expect("built-in model is valid")
    }

    /// Four finite places `p1 .. p4` and one real place `inf`.
    ///
    /// Coordinates are `p1(u r) p2(u r) p3(u r) p4(u r) inf(s)`:
    /// `g1 = 10 01 11 10 1`, `g2 = 01 10 10 11 0`.
    pub fn four_place() -> Self {
        let places = vec![
            PlaceModel::new("p1", PlaceKind::Finite),
            PlaceModel::new("p2", PlaceKind::Finite),
            PlaceModel::new("p3", PlaceKind::Finite),
            PlaceModel::new("p4", PlaceKind::Finite),
            PlaceModel::new("inf", PlaceKind::Real),
        ];
        let gens = ["100111101", "011010110"]
            .iter()
            .map(|s| Gf2Vec::parse(s).expect("fixture"))
            .collect();
        GlobalCharModel::new(places, gens).expect("built-in model is valid")
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "three_place" => Some(Self::three_place()),
            "four_place" => Some(Self::four_place()),
            _ => None,
        }
    }

    pub fn places(&self) -> &[PlaceModel] {
        &self.places
    }

    pub fn generators(&self) -> &[Gf2Vec] {
        &self.generators
    }

    /// Number of generators, i.e. the GF(2)-dimension of the global group.
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn total_local_rank(&self) -> usize {
        self.total_rank
    }

    pub fn place_index(&self, v: &str) -> Result<usize> {
        self.places
            .iter()
            .position(|p| p.id == v)
            .ok_or_else(|| Error::UnknownPlace(v.to_string()))
    }

    pub fn place(&self, v: &str) -> Result<&PlaceModel> {
        Ok(&self.places[self.place_index(v)?])
    }

    pub fn offset(&self, idx: usize) -> usize {
        self.offsets[idx]
    }

    pub fn trivial(&self) -> GlobalQuadChar {
        GlobalQuadChar {
            coords: Gf2Vec::zero(self.dim()),
        }
    }

    pub fn generator(&self, j: usize) -> GlobalQuadChar {
        GlobalQuadChar {
            coords: Gf2Vec::unit(j, self.dim()),
        }
    }

    /// All global characters, in coordinate order.
    pub fn all_chars(&self) -> Vec<GlobalQuadChar> {
        (0..(1u64 << self.dim()))
            .map(|b| GlobalQuadChar {
                coords: Gf2Vec::from_bits(b, self.dim()),
            })
            .collect()
    }

    /// The full vector of local coordinates of `chi`.
    pub fn adelic(&self, chi: &GlobalQuadChar) -> Gf2Vec {
        let mut acc = Gf2Vec::zero(self.total_rank);
        for j in chi.coords.support() {
            acc = acc.add(&self.generators[j]);
        }
        acc
    }

    pub fn localize(&self, chi: &GlobalQuadChar, v: &str) -> Result<LocalQuadChar> {
        let idx = self.place_index(v)?;
        let p = &self.places[idx];
        Ok(LocalQuadChar {
            place: p.id.clone(),
            coords: self.adelic(chi).segment(self.offsets[idx], p.local_rank()),
        })
    }

    /// The localization map at place index `idx` as a linear map from global
    /// coordinates to local coordinates.
    pub fn localization_map(&self, idx: usize) -> LinearMap {
        let off = self.offsets[idx];
        let r = self.places[idx].local_rank();
        LinearMap::new(
            self.dim(),
            r,
            self.generators
                .iter()
                .map(|g| g.segment(off, r).bits())
                .collect(),
        )
    }

    /// The map from global coordinates to all local coordinates.
    pub fn adelic_map(&self) -> LinearMap {
        LinearMap::new(
            self.dim(),
            self.total_rank,
            self.generators.iter().map(|g| g.bits()).collect(),
        )
    }

    /// `{ ω : ω_v ∈ local_subgroups[v] for every place v ∉ exceptions }`.
    ///
    /// `local_subgroups` is indexed like `places()`; entries at excepted places
    /// are ignored.
    pub fn aut_product_group(
        &self,
        local_subgroups: &[Subspace],
        exceptions: &[String],
    ) -> Result<Subspace> {
        if local_subgroups.len() != self.places.len() {
            return Err(Error::InvalidModel(format!(
                "expected {} local subgroups, got {}",
                self.places.len(),
                local_subgroups.len()
            )));
        }
        for u in exceptions {
            self.place_index(u)?;
        }
        let mut result = Subspace::full(self.dim());
        for (idx, p) in self.places.iter().enumerate() {
            if exceptions.contains(&p.id) {
                continue;
            }
            let sub = &local_subgroups[idx];
            if sub.ambient_dim() != p.local_rank() {
                return Err(Error::InvalidModel(format!(
                    "local subgroup at '{}' has the wrong ambient rank",
                    p.id
                )));
            }
            let pre = self.localization_map(idx).preimage(sub);
            result = result.intersection(&pre);
        }
        Ok(result)
    }
}

/// Whether characters are taken at a place or globally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scope {
    Local(String),
    Global,
}

/// A quotient of a character group by a subgroup (the modulus).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharClassGroup {
    ambient_dim: usize,
    modulus: Subspace,
}

impl CharClassGroup {
    pub fn new(ambient_dim: usize, modulus: Subspace) -> Self {
        assert_eq!(modulus.ambient_dim(), ambient_dim);
        CharClassGroup {
            ambient_dim,
            modulus,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn modulus(&self) -> &Subspace {
        &self.modulus
    }

    pub fn order(&self) -> u128 {
        1u128 << (self.ambient_dim - self.modulus.rank())
    }

    /// Canonical representative of the class of `v`.
    pub fn class_of(&self, v: &Gf2Vec) -> Gf2Vec {
        Gf2Vec::from_bits(self.modulus.reduce(v.bits()), self.ambient_dim)
    }

    pub fn mul(&self, a: &Gf2Vec, b: &Gf2Vec) -> Gf2Vec {
        self.class_of(&a.add(b))
    }

    pub fn identity(&self) -> Gf2Vec {
        Gf2Vec::zero(self.ambient_dim)
    }

    pub fn is_trivial(&self, v: &Gf2Vec) -> bool {
        self.modulus.contains(v.bits())
    }

    /// Canonical representatives of all classes.
    pub fn elements(&self) -> Vec<Gf2Vec> {
        let mut reps: Vec<u64> = (0..(1u64 << self.ambient_dim))
            .map(|v| self.modulus.reduce(v))
            .collect();
        reps.sort_unstable();
        reps.dedup();
        reps.into_iter()
            .map(|b| Gf2Vec::from_bits(b, self.ambient_dim))
            .collect()
    }

    /// Order of the image of a subgroup `H` (given in ambient coordinates).
    pub fn image_order(&self, h: &Subspace) -> u128 {
        1u128 << (h.sum(&self.modulus).rank() - self.modulus.rank())
    }
}

/// The modulus of X for a group: the span of the discriminant characters of
/// its special even orthogonal factors. Empty for symplectic groups.
pub fn x_modulus(g: &GroupSpec) -> Subspace {
    let dim = g.char_dim();
    Subspace::span(
        dim,
        g.factors()
            .iter()
            .filter(|f| f.family == Family::SOeven)
            .map(|f| f.eta.bits()),
    )
}

/// The character class group X attached to the similitude lift of `g`.
///
/// Characters of `g` must already live in the scope's character universe
/// (a local group at a place, or the global coordinates of a model).
pub fn x_group(g: &GroupSpec, scope: &Scope, model: Option<&GlobalCharModel>) -> Result<CharClassGroup> {
    let dim = match (scope, model) {
        (Scope::Local(v), Some(m)) => m.place(v)?.local_rank(),
        (Scope::Global, Some(m)) => m.dim(),
        (_, None) => g.char_dim(),
    };
    if dim != g.char_dim() {
        return Err(Error::DimensionMismatch(format!(
            "group characters have length {}, scope expects {dim}",
            g.char_dim()
        )));
    }
    Ok(CharClassGroup::new(dim, x_modulus(g)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_models_are_surjective_at_finite_places() {
        for m in [GlobalCharModel::three_place(), GlobalCharModel::four_place()] {
            for (i, p) in m.places().iter().enumerate() {
                if p.kind == PlaceKind::Finite {
                    assert_eq!(m.localization_map(i).image().rank(), 2, "{}", p.id);
                }
            }
        }
    }

    #[test]
    fn localize_generator_is_row_segment() {
        let m = GlobalCharModel::three_place();
        let g1 = m.generator(0);
        assert_eq!(m.localize(&g1, "p1").unwrap().coords.to_string(), "10");
        assert_eq!(m.localize(&g1, "inf").unwrap().coords.to_string(), "1");
        assert!(matches!(m.localize(&g1, "p9"), Err(Error::UnknownPlace(_))));
    }

    #[test]
    fn dependent_generators_rejected() {
        let places = vec![PlaceModel::new("a", PlaceKind::Finite)];
        let gens = vec![Gf2Vec::parse("10").unwrap(), Gf2Vec::parse("10").unwrap()];
        assert!(GlobalCharModel::new(places, gens).is_err());
    }
}
