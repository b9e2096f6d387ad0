//! Group specifications, simple constituents and composite parameters.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::Gf2Vec;

/// A quadratic character, as coordinates in whatever character universe the
/// surrounding object lives in (local group, global model, or abstract).
pub type QuadChar = Gf2Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    Sp,
    SOeven,
}

/// One simple factor `Sp(2n)` or `SO(2n, η)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SimpleGroup {
    pub family: Family,
    pub rank: usize,
    pub eta: QuadChar,
}

impl SimpleGroup {
    pub fn sp(rank: usize, char_dim: usize) -> Self {
        SimpleGroup {
            family: Family::Sp,
            rank,
            eta: Gf2Vec::zero(char_dim),
        }
    }

    /// `SO(2n, η)`; a rank-zero group always carries the trivial character.
    pub fn so(rank: usize, eta: QuadChar) -> Self {
        let eta = if rank == 0 { Gf2Vec::zero(eta.len()) } else { eta };
        SimpleGroup {
            family: Family::SOeven,
            rank,
            eta,
        }
    }

    /// Dimension of the standard representation of the dual group.
    pub fn dual_dim(&self) -> usize {
        match self.family {
            Family::Sp => 2 * self.rank + 1,
            Family::SOeven => 2 * self.rank,
        }
    }
}

impl fmt::Display for SimpleGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Sp => write!(f, "Sp({})", 2 * self.rank),
            Family::SOeven if self.eta.is_zero() => write!(f, "SO({})", 2 * self.rank),
            Family::SOeven => write!(f, "SO({},{})", 2 * self.rank, self.eta),
        }
    }
}

/// A product of simple factors, optionally with its similitude lift.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<SimpleGroup>,
    pub similitude: bool,
    char_dim: usize,
}

impl GroupSpec {
    pub fn new(factors: Vec<SimpleGroup>, similitude: bool) -> Result<Self> {
        let char_dim = factors.first().map(|f| f.eta.len()).unwrap_or(0);
        if factors.is_empty() {
            return Err(Error::Precondition("a group needs at least one factor".into()));
        }
        if factors.iter().any(|f| f.eta.len() != char_dim) {
            return Err(Error::DimensionMismatch(
                "factors use characters of different lengths".into(),
            ));
        }
        if factors
            .iter()
            .any(|f| f.family == Family::Sp && !f.eta.is_zero())
        {
            return Err(Error::DeterminantMismatch(
                "a symplectic factor carries the trivial character".into(),
            ));
        }
        Ok(GroupSpec {
            factors,
            similitude,
            char_dim,
        })
    }

    pub fn simple(g: SimpleGroup) -> Self {
        let d = g.eta.len();
        let g = if g.family == Family::Sp {
            SimpleGroup::sp(g.rank, d)
        } else {
            g
        };
        GroupSpec {
            factors: vec![g],
            similitude: false,
            char_dim: d,
        }
    }

    pub fn sp(rank: usize, char_dim: usize) -> Self {
        GroupSpec::simple(SimpleGroup::sp(rank, char_dim))
    }

    pub fn so(rank: usize, eta: QuadChar) -> Self {
        GroupSpec::simple(SimpleGroup::so(rank, eta))
    }

    pub fn with_similitude(mut self, s: bool) -> Self {
        self.similitude = s;
        self
    }

    pub fn factors(&self) -> &[SimpleGroup] {
        &self.factors
    }

    pub fn is_simple(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn char_dim(&self) -> usize {
        self.char_dim
    }

    /// Family of a simple group.
    pub fn family(&self) -> Family {
        self.factors[0].family
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.rank).sum()
    }

    pub fn dual_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dual_dim()).sum()
    }

    /// Product of the discriminant characters of the orthogonal factors.
    pub fn eta_g(&self) -> QuadChar {
        self.factors
            .iter()
            .fold(Gf2Vec::zero(self.char_dim), |a, f| a.add(&f.eta))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.similitude {
            f.write_str("G(")?;
        }
        for (i, g) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "{g}")?;
        }
        if self.similitude {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Duality {
    OrthSelfDual,
    SympSelfDual,
    NonSelfDualPair,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SimpleParam {
    pub label: String,
    pub dim: usize,
    pub duality: Duality,
    pub central_char: QuadChar,
}

impl SimpleParam {
    pub fn new(label: impl Into<String>, dim: usize, duality: Duality, central_char: QuadChar) -> Result<Self> {
        let label = label.into();
        let bad = |reason: &str| Error::InvalidConstituent {
            label: label.clone(),
            reason: reason.to_string(),
        };
        if dim == 0 {
            return Err(bad("dimension must be positive"));
        }
        if duality == Duality::SympSelfDual && dim % 2 == 1 {
            return Err(bad("symplectic constituents have even dimension"));
        }
        if dim % 2 == 1 && duality != Duality::OrthSelfDual && duality != Duality::NonSelfDualPair {
            return Err(bad("odd-dimensional self-dual constituents are orthogonal"));
        }
        Ok(SimpleParam {
            label,
            dim,
            duality,
            central_char,
        })
    }

    /// A one-dimensional orthogonal constituent: a quadratic character.
    pub fn character(label: impl Into<String>, eta: QuadChar) -> Self {
        SimpleParam::new(label, 1, Duality::OrthSelfDual, eta).expect("characters are valid")
    }

    pub fn orth(label: impl Into<String>, dim: usize, eta: QuadChar) -> Self {
        SimpleParam::new(label, dim, Duality::OrthSelfDual, eta).expect("valid orthogonal constituent")
    }

    pub fn is_orth(&self) -> bool {
        self.duality == Duality::OrthSelfDual
    }
}

/// A constituent `l·φ_i` attached to one factor of the target.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Constituent {
    pub simple: SimpleParam,
    pub mult: usize,
    pub factor: usize,
}

impl Constituent {
    /// Dimension contributed, counting both members of a pair.
    pub fn total_dim(&self) -> usize {
        let k = if self.simple.duality == Duality::NonSelfDualPair { 2 } else { 1 };
        k * self.mult * self.simple.dim
    }
}

fn constituent_order(a: &Constituent, b: &Constituent) -> Ordering {
    (a.factor, a.simple.dim, a.simple.duality, &a.simple.label)
        .cmp(&(b.factor, b.simple.dim, b.simple.duality, &b.simple.label))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Parameter {
    target: GroupSpec,
    constituents: Vec<Constituent>,
}

impl Parameter {
    /// Builds and validates a parameter. Constituents are sorted canonically.
    pub fn new(target: GroupSpec, mut constituents: Vec<Constituent>) -> Result<Self> {
        constituents.sort_by(constituent_order);
        let p = Parameter {
            target,
            constituents,
        };
        p.validate()?;
        Ok(p)
    }

    /// A parameter for a simple target from `(simple, multiplicity)` pairs.
    pub fn simple(target: GroupSpec, items: Vec<(SimpleParam, usize)>) -> Result<Self> {
        Parameter::new(
            target,
            items
                .into_iter()
                .map(|(simple, mult)| Constituent {
                    simple,
                    mult,
                    factor: 0,
                })
                .collect(),
        )
    }

    /// Builds without validation; used by callers that validate later.
    pub fn unchecked(target: GroupSpec, mut constituents: Vec<Constituent>) -> Self {
        constituents.sort_by(constituent_order);
        Parameter {
            target,
            constituents,
        }
    }

    pub fn target(&self) -> &GroupSpec {
        &self.target
    }

    pub fn constituents(&self) -> &[Constituent] {
        &self.constituents
    }

    pub fn char_dim(&self) -> usize {
        self.target.char_dim()
    }

    /// Label used in reports: qualified by the factor index for products.
    pub fn key(&self, i: usize) -> String {
        let c = &self.constituents[i];
        if self.target.is_simple() {
            c.simple.label.clone()
        } else {
            format!("{}/{}", c.simple.label, c.factor + 1)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nf = self.target.factors().len();
        let d = self.target.char_dim();
        for (i, c) in self.constituents.iter().enumerate() {
            let label = &c.simple.label;
            if c.factor >= nf {
                return Err(Error::InvalidConstituent {
                    label: label.clone(),
                    reason: format!("factor index {} out of range", c.factor + 1),
                });
            }
            if c.mult == 0 {
                return Err(Error::InvalidConstituent {
                    label: label.clone(),
                    reason: "multiplicity must be at least 1".into(),
                });
            }
            if c.simple.central_char.len() != d {
                return Err(Error::InvalidConstituent {
                    label: label.clone(),
                    reason: format!("character of length {}, expected {d}", c.simple.central_char.len()),
                });
            }
            if self.constituents[..i]
                .iter()
                .any(|o| o.factor == c.factor && o.simple.label == *label)
            {
                return Err(Error::InvalidConstituent {
                    label: label.clone(),
                    reason: "duplicate label".into(),
                });
            }
            if c.simple.duality == Duality::SympSelfDual && c.mult % 2 == 1 {
                return Err(Error::OddSymplecticMultiplicity(label.clone()));
            }
        }
        for (k, g) in self.target.factors().iter().enumerate() {
            let here: Vec<&Constituent> =
                self.constituents.iter().filter(|c| c.factor == k).collect();
            let total: usize = here.iter().map(|c| c.total_dim()).sum();
            if total != g.dual_dim() {
                let labels: Vec<&str> = here.iter().map(|c| c.simple.label.as_str()).collect();
                return Err(Error::DimensionMismatch(format!(
                    "constituents [{}] have total dimension {total}, {g} needs {}",
                    labels.join(", "),
                    g.dual_dim()
                )));
            }
            let det = here
                .iter()
                .filter(|c| c.simple.is_orth() && c.mult % 2 == 1)
                .fold(Gf2Vec::zero(d), |a, c| a.add(&c.simple.central_char));
            if det != g.eta {
                let labels: Vec<&str> = here
                    .iter()
                    .filter(|c| c.simple.is_orth() && c.mult % 2 == 1)
                    .map(|c| c.simple.label.as_str())
                    .collect();
                return Err(Error::DeterminantMismatch(format!(
                    "product of characters of [{}] is {det}, {g} needs {}",
                    labels.join(", "),
                    g.eta
                )));
            }
        }
        Ok(())
    }

    /// Indices of orthogonal constituents (the coordinates of the component group).
    pub fn orth_indices(&self) -> Vec<usize> {
        (0..self.constituents.len())
            .filter(|&i| self.constituents[i].simple.is_orth())
            .collect()
    }

    pub fn index_partition(&self) -> IndexPartition {
        let mut p = IndexPartition::default();
        for (i, c) in self.constituents.iter().enumerate() {
            let key = self.key(i);
            match c.simple.duality {
                Duality::OrthSelfDual if c.mult % 2 == 1 => p.i_o_odd.push(key),
                Duality::OrthSelfDual => p.i_o_even.push(key),
                Duality::SympSelfDual => p.i_s.push(key),
                Duality::NonSelfDualPair => p.j.push(key),
            }
        }
        p
    }

    pub fn is_discrete(&self) -> bool {
        self.constituents
            .iter()
            .all(|c| c.simple.is_orth() && c.mult == 1)
    }

    /// Decides ellipticity in the component `θ`: some semisimple element of
    /// that component has a finite centralizer.
    pub fn is_elliptic(&self, theta: Theta) -> Result<bool> {
        if theta == Theta::Theta0 {
            if !self.target.is_simple() {
                return Err(Error::Unsupported("theta0 on a product target".into()));
            }
            if self.target.family() == Family::Sp {
                return Err(Error::ThetaOnSymplectic);
            }
        }
        if self
            .constituents
            .iter()
            .any(|c| !c.simple.is_orth() || c.mult > 2)
        {
            return Ok(false);
        }
        // Each O(l) block with l ≤ 2 carries ±1 eigenvalues with all
        // multiplicities ≤ 1. For l = 2 the split is (1,1), so its determinant
        // is −1; for l = 1 both signs are available.
        for k in 0..self.target.factors().len() {
            let wanted = theta == Theta::Theta0;
            let mut forced = false;
            let mut free = false;
            for c in self.constituents.iter().filter(|c| c.factor == k) {
                if c.simple.dim % 2 == 1 {
                    if c.mult == 2 {
                        forced ^= true;
                    } else {
                        free = true;
                    }
                }
            }
            if !free && forced != wanted {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `m_φ`: 2 exactly for special even orthogonal factors of positive rank
    /// whose orthogonal constituents all have even dimension; multiplicative
    /// over factors.
    pub fn m_phi(&self) -> u32 {
        let mut m = 1;
        for (k, g) in self.target.factors().iter().enumerate() {
            if g.family == Family::SOeven
                && g.rank > 0
                && self
                    .constituents
                    .iter()
                    .filter(|c| c.factor == k && c.simple.is_orth())
                    .all(|c| c.simple.dim % 2 == 0)
            {
                m *= 2;
            }
        }
        m
    }

    /// The restriction to each factor, as parameters of simple targets.
    pub fn split_factors(&self) -> Result<Vec<Parameter>> {
        self.target
            .factors()
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let items = self
                    .constituents
                    .iter()
                    .filter(|c| c.factor == k)
                    .map(|c| Constituent {
                        factor: 0,
                        ..c.clone()
                    })
                    .collect();
                Parameter::new(
                    GroupSpec::simple(g.clone()).with_similitude(self.target.similitude),
                    items,
                )
            })
            .collect()
    }

    /// Peels pairs and surplus copies into general linear blocks.
    pub fn levi_support(&self) -> Result<LeviSupport> {
        if self.is_discrete() {
            return Err(Error::AlreadyDiscrete);
        }
        let mut gl_blocks = Vec::new();
        let mut remaining = Vec::new();
        let mut factors = Vec::new();
        for (k, g) in self.target.factors().iter().enumerate() {
            let mut dim_minus = 0;
            for (i, c) in self.constituents.iter().enumerate() {
                if c.factor != k {
                    continue;
                }
                let copies = match c.simple.duality {
                    Duality::OrthSelfDual => c.mult / 2,
                    Duality::SympSelfDual => c.mult / 2,
                    Duality::NonSelfDualPair => c.mult,
                };
                for _ in 0..copies {
                    gl_blocks.push(GlBlock {
                        label: self.key(i),
                        size: c.simple.dim,
                    });
                }
                if c.simple.is_orth() && c.mult % 2 == 1 {
                    dim_minus += c.simple.dim;
                    remaining.push(Constituent {
                        simple: c.simple.clone(),
                        mult: 1,
                        factor: k,
                    });
                }
            }
            let rank = match g.family {
                Family::Sp => (dim_minus - 1) / 2,
                Family::SOeven => dim_minus / 2,
            };
            factors.push(SimpleGroup {
                family: g.family,
                rank,
                eta: g.eta,
            });
        }
        let minus_group = GroupSpec::new(factors, self.target.similitude)?;
        let minus = Parameter::new(minus_group, remaining)?;
        debug_assert!(minus.is_discrete());
        Ok(LeviSupport { gl_blocks, minus })
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.target.factors().len() {
            if k > 0 {
                f.write_str(" x ")?;
            }
            let parts: Vec<String> = self
                .constituents
                .iter()
                .filter(|c| c.factor == k)
                .map(|c| {
                    if c.mult == 1 {
                        c.simple.label.clone()
                    } else {
                        format!("{}*{}", c.mult, c.simple.label)
                    }
                })
                .collect();
            if self.target.is_simple() {
                f.write_str(&parts.join(" + "))?;
            } else {
                write!(f, "({})", parts.join(" + "))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theta {
    Id,
    Theta0,
}

impl std::str::FromStr for Theta {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "id" | "identity" => Ok(Theta::Id),
            "theta0" => Ok(Theta::Theta0),
            _ => Err(Error::Parse(format!("unknown theta '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IndexPartition {
    pub i_o_odd: Vec<String>,
    pub i_o_even: Vec<String>,
    pub i_s: Vec<String>,
    pub j: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlBlock {
    pub label: String,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviSupport {
    pub gl_blocks: Vec<GlBlock>,
    pub minus: Parameter,
}

/// A Levi shape `GL(n_1) × ⋯ × GL(n_r) × G_-` recorded as `(n_1, …, n_r; n_-)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeviShape {
    pub gl: Vec<usize>,
    pub minus: usize,
}

impl fmt::Display for LeviShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gl.iter().map(|n| n.to_string()).collect();
        let gl = if parts.is_empty() { "∅".to_string() } else { parts.join(",") };
        write!(f, "({gl};{})", self.minus)
    }
}

fn partitions_into(m: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if m == 0 {
        out.push(prefix.clone());
        return;
    }
    for p in (1..=m.min(max_part)).rev() {
        prefix.push(p);
        partitions_into(m - p, p, prefix, out);
        prefix.pop();
    }
}

/// All Levi shapes of a rank-`n` group, ordered by the total GL rank and then
/// by partitions in decreasing lexicographic order.
pub fn enumerate_levi_shapes(n: usize) -> Vec<LeviShape> {
    let mut out = Vec::new();
    for m in 0..=n {
        let mut parts = Vec::new();
        partitions_into(m, m, &mut Vec::new(), &mut parts);
        for gl in parts {
            out.push(LeviShape { gl, minus: n - m });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(s: &str) -> Gf2Vec {
        Gf2Vec::parse(s).unwrap()
    }

    #[test]
    fn levi_shapes_rank_two() {
        let shapes: Vec<String> = enumerate_levi_shapes(2).iter().map(|s| s.to_string()).collect();
        assert_eq!(shapes, ["(∅;2)", "(1;1)", "(2;0)", "(1,1;0)"]);
        assert_eq!(enumerate_levi_shapes(0).len(), 1);
        assert_eq!(enumerate_levi_shapes(1).len(), 2);
    }

    #[test]
    fn type_one_parameter_is_valid_and_discrete() {
        let p = Parameter::simple(
            GroupSpec::sp(1, 2),
            vec![
                (SimpleParam::character("e1", ch("10")), 1),
                (SimpleParam::character("e2", ch("01")), 1),
                (SimpleParam::character("e3", ch("11")), 1),
            ],
        )
        .unwrap();
        assert!(p.is_discrete());
        assert!(p.is_elliptic(Theta::Id).unwrap());
        assert_eq!(p.m_phi(), 1);
        assert_eq!(p.index_partition().i_o_odd, ["e1", "e2", "e3"]);
    }

    #[test]
    fn validation_errors_name_the_problem() {
        let sym = SimpleParam::new("s", 2, Duality::SympSelfDual, ch("0")).unwrap();
        let e = Parameter::simple(GroupSpec::sp(1, 1), vec![(sym, 1), (SimpleParam::character("t", ch("0")), 1)]);
        assert_eq!(e, Err(Error::OddSymplecticMultiplicity("s".into())));
        let e = Parameter::simple(GroupSpec::sp(1, 1), vec![(SimpleParam::orth("a", 2, ch("0")), 1)]);
        assert!(matches!(e, Err(Error::DimensionMismatch(_))));
        let e = Parameter::simple(
            GroupSpec::so(1, ch("0")),
            vec![(SimpleParam::character("a", ch("1")), 1), (SimpleParam::character("b", ch("0")), 1)],
        );
        assert!(matches!(e, Err(Error::DeterminantMismatch(_))));
    }

    #[test]
    fn levi_support_peels_pairs() {
        let pair = SimpleParam::new("q", 2, Duality::NonSelfDualPair, ch("0")).unwrap();
        let p = Parameter::simple(
            GroupSpec::sp(2, 1),
            vec![(pair, 1), (SimpleParam::character("a", ch("0")), 1)],
        )
        .unwrap();
        let ls = p.levi_support().unwrap();
        assert_eq!(ls.gl_blocks, vec![GlBlock { label: "q".into(), size: 2 }]);
        assert!(ls.minus.is_discrete());
        assert_eq!(ls.minus.target().rank(), 0);
        let d = Parameter::simple(GroupSpec::sp(0, 1), vec![(SimpleParam::character("a", ch("0")), 1)]).unwrap();
        assert_eq!(d.levi_support(), Err(Error::AlreadyDiscrete));
    }

    #[test]
    fn theta0_needs_an_odd_constituent() {
        let p = Parameter::simple(
            GroupSpec::so(2, ch("0")),
            vec![(SimpleParam::orth("a", 2, ch("1")), 1), (SimpleParam::orth("b", 2, ch("1")), 1)],
        )
        .unwrap();
        assert!(!p.is_elliptic(Theta::Theta0).unwrap());
        assert_eq!(p.m_phi(), 2);
    }
}
