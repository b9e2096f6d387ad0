//! Coefficients of the stabilized trace formula attached to a parameter:
//! `i_φ^θ(x)`, `e′_φ^θ(x)`, `σ(𝒮̄_φ⁰)`, the stable multiplicity coefficient,
//! and the multiplicity and packet counting formulas.
//!
//! The centralizer of `φ` in the dual group is `S(∏ O(l_i) × ∏ Sp(l_j) ×
//! ∏ GL(l_k))`. A component is a sign vector `c` over the orthogonal
//! constituents (the determinants of the `O(l_i)` blocks). Dividing by the
//! center `{±1}` (special even orthogonal targets) identifies `c` with `c + z`
//! where `z` marks the odd multiplicities.

use num_traits::Zero;
use serde::Serialize;

use crate::compgroup::{
    alpha, alpha_image, alpha_image_order, c_map, component_group, s_tilde, theta_component, PartitionPair, Variant,
};
use crate::error::{Error, Result};
use crate::gf2::{Gf2Vec, Subspace};
use crate::charfield::x_modulus;
use crate::params::{Duality, Family, Parameter, Theta};
use crate::rational::{qi, Q};
use crate::weylconst::{weyl_enumerate, Constants, FactorKind, ReductiveShape, ShapeFactor};

/// Centralizer blocks of `φ`: kind and multiplicity, orthogonal blocks first
/// in the coordinate order of the component group.
struct Blocks {
    orth: Vec<usize>,
    symp: Vec<usize>,
    gl: Vec<usize>,
    /// Whether the dual center `{±1}` is divided out.
    center: bool,
    /// The vector `z` of odd orthogonal multiplicities.
    z: u64,
}

impl Blocks {
    fn of(phi: &Parameter) -> Result<Self> {
        if !phi.target().is_simple() {
            return Err(Error::Unsupported("trace ledger for product targets".into()));
        }
        let mut b = Blocks {
            orth: vec![],
            symp: vec![],
            gl: vec![],
            center: false,
            z: 0,
        };
        for c in phi.constituents() {
            match c.simple.duality {
                Duality::OrthSelfDual => {
                    if c.mult % 2 == 1 {
                        b.z |= 1 << b.orth.len();
                    }
                    b.orth.push(c.mult);
                }
                Duality::SympSelfDual => b.symp.push(c.mult),
                Duality::NonSelfDualPair => b.gl.push(c.mult),
            }
        }
        let g = &phi.target().factors()[0];
        b.center = g.family == Family::SOeven && g.rank > 0;
        Ok(b)
    }

    /// Whether `−1` lies in the identity component and is divided out.
    fn center_in_identity(&self) -> bool {
        self.center && self.z == 0
    }

    fn identity_shape(&self) -> ReductiveShape {
        let f = |kind, size| ShapeFactor { kind, size, outer: false };
        ReductiveShape::new(
            self.orth
                .iter()
                .map(|&l| f(FactorKind::SO, l))
                .chain(self.symp.iter().map(|&l| f(FactorKind::Sp, l)))
                .chain(self.gl.iter().map(|&l| f(FactorKind::GL, l))),
        )
    }

    /// The component `c` as a shape whose selected Weyl coset is `W^c`.
    fn coset_shape(&self, c: u64) -> ReductiveShape {
        let f = |kind, size, outer| ShapeFactor { kind, size, outer };
        ReductiveShape::new(
            self.orth
                .iter()
                .enumerate()
                .map(|(i, &l)| {
                    if l % 2 == 0 {
                        f(FactorKind::O, l, (c >> i) & 1 == 1)
                    } else {
                        // the −1 component of O(odd) acts trivially on the torus
                        f(FactorKind::SO, l, false)
                    }
                })
                .chain(self.symp.iter().map(|&l| f(FactorKind::Sp, l, false)))
                .chain(self.gl.iter().map(|&l| f(FactorKind::GL, l, false))),
        )
    }
}

/// `σ(𝒮̄_φ⁰) = σ(S⁰)·|S⁰ ∩ Z|`.
pub fn sigma_sbar0(consts: &Constants, phi: &Parameter) -> Result<Q> {
    let b = Blocks::of(phi)?;
    let s = consts.sigma(&b.identity_shape())?;
    Ok(if b.center_in_identity() { s * qi(2) } else { s })
}

fn check_component(phi: &Parameter, theta: Theta, x: u64) -> Result<()> {
    let (group, elems) = theta_component(phi, theta)?;
    if !group.contains(x) || !elems.contains(&group.class_rep(x)) {
        return Err(Error::WrongComponent(format!(
            "{} is not in the {theta:?} component",
            group.to_vec(x)
        )));
    }
    Ok(())
}

/// `i_φ^θ(x) = |W⁰_φ|⁻¹ Σ s⁰_φ(w) |det(w − 1)|⁻¹` over the regular elements of
/// the normalizer lying over `x`.
pub fn i_phi(consts: &Constants, phi: &Parameter, theta: Theta, x: u64) -> Result<Q> {
    check_component(phi, theta, x)?;
    let b = Blocks::of(phi)?;
    let shape = b.coset_shape(x);
    let mut total = Q::zero();
    for w in weyl_enumerate(&shape, consts.bound())? {
        if w.is_regular() {
            total += qi(w.sign()) / qi(w.det_minus_one.abs());
        }
    }
    Ok(total / qi(b.identity_shape().weyl_order() as i64))
}

/// One `𝒮̄⁰_φ`-class of elliptic elements: ±1 eigenvalue splits per block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticTerm {
    pub orth_splits: Vec<(usize, usize)>,
    pub symp_splits: Vec<(usize, usize)>,
    pub pi0: u64,
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub sigma: Q,
}

fn splits(l: usize, parity: Option<usize>) -> Vec<(usize, usize)> {
    (0..=l)
        .filter(|b| match parity {
            Some(p) => b % 2 == p,
            None => b % 2 == 0 && (l - b).is_multiple_of(2),
        })
        .map(|b| (l - b, b))
        .collect()
}

/// The classes counted by `e′_φ^θ(x)` with their weights.
pub fn elliptic_terms(consts: &Constants, phi: &Parameter, theta: Theta, x: u64) -> Result<Vec<EllipticTerm>> {
    check_component(phi, theta, x)?;
    let b = Blocks::of(phi)?;
    if !b.gl.is_empty() {
        // every centralizer keeps a central torus from the GL blocks
        return Ok(vec![]);
    }
    let lists: Vec<Vec<(usize, usize)>> = b
        .orth
        .iter()
        .enumerate()
        .map(|(i, &l)| splits(l, Some(((x >> i) & 1) as usize)))
        .chain(b.symp.iter().map(|&l| splits(l, None)))
        .collect();
    let n_orth = b.orth.len();
    let z0 = b.center_in_identity();
    let exclude_identity = theta == Theta::Id && component_group(phi, Variant::Sbar).class_rep(x) == 0;
    let identity: Vec<(usize, usize)> = lists.iter().map(|l| (l[0].0 + l[0].1, 0)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; lists.len()];
    loop {
        let tuple: Vec<(usize, usize)> = lists.iter().zip(&idx).map(|(l, &i)| l[i]).collect();
        let flipped: Vec<(usize, usize)> = tuple.iter().map(|&(a, b)| (b, a)).collect();
        // With −1 in the identity component, s and −s give the same class.
        let keep = !z0 || tuple <= flipped;
        let is_identity = tuple == identity || (z0 && flipped == identity);
        if keep && !(exclude_identity && is_identity) {
            let swap = if z0 && tuple == flipped { 2 } else { 1 };
            let pi0_c: u64 = tuple[..n_orth]
                .iter()
                .map(|&(a, b)| if a >= 1 && b >= 1 { 2 } else { 1 })
                .product();
            let minus_one_in_h = tuple[..n_orth].iter().all(|&(a, b)| a % 2 == 0 && b % 2 == 0);
            let pi0 = swap * pi0_c / if z0 && !minus_one_in_h { 2 } else { 1 };
            let h = ReductiveShape::new(tuple.iter().enumerate().flat_map(|(k, &(a, b))| {
                let kind = if k < n_orth { FactorKind::SO } else { FactorKind::Sp };
                [
                    ShapeFactor { kind, size: a, outer: false },
                    ShapeFactor { kind, size: b, outer: false },
                ]
            }));
            let mut sigma = consts.sigma(&h)?;
            if z0 && minus_one_in_h {
                sigma *= qi(2);
            }
            out.push(EllipticTerm {
                orth_splits: tuple[..n_orth].to_vec(),
                symp_splits: tuple[n_orth..].to_vec(),
                pi0,
                sigma,
            });
        }
        let mut k = 0;
        loop {
            if k == lists.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `e′_φ^θ(x) = Σ |π₀(𝒮̄⁰_{φ,s})|⁻¹ σ((𝒮̄_{φ,s})⁰)`, without `s = 1` when
/// `θ = id` and `x = 1`.
pub fn e_prime_phi(consts: &Constants, phi: &Parameter, theta: Theta, x: u64) -> Result<Q> {
    Ok(elliptic_terms(consts, phi, theta, x)?
        .into_iter()
        .fold(Q::zero(), |acc, t| acc + t.sigma / qi(t.pi0 as i64)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerRow {
    pub theta: Theta,
    pub x: PartitionPair,
    pub x_bits: Gf2Vec,
    pub omega: Gf2Vec,
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub i_val: Q,
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub e_val: Q,
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub sigma_term: Q,
    pub balanced: bool,
}

/// Rows of the ledger for every `x` in the θ-component (restricted to
/// `α(x) = ω` when `ω` is given). Fails on the first unbalanced row.
pub fn check_ledger(consts: &Constants, phi: &Parameter, theta: Theta, omega: Option<&Gf2Vec>) -> Result<Vec<LedgerRow>> {
    let (group, elems) = theta_component(phi, theta)?;
    let modulus = x_modulus(phi.target());
    let omega = omega.map(|w| modulus.reduce(w.bits()));
    let sigma = sigma_sbar0(consts, phi)?;
    let mut rows = Vec::new();
    for x in elems {
        let om = alpha(phi, x);
        if omega.is_some_and(|w| w != om.bits()) {
            continue;
        }
        let i_val = i_phi(consts, phi, theta, x)?;
        let e_val = e_prime_phi(consts, phi, theta, x)?;
        let is_one = theta == Theta::Id && x == 0 && om.is_zero();
        let sigma_term = if is_one { sigma.clone() } else { Q::zero() };
        let balanced = &i_val - &e_val == sigma_term;
        let row = LedgerRow {
            theta,
            x: c_map(&group, x)?,
            x_bits: group.to_vec(x),
            omega: om,
            i_val,
            e_val,
            sigma_term,
            balanced,
        };
        if !row.balanced {
            return Err(Error::Consistency(format!(
                "ledger row unbalanced at x = {} (S={:?}, T={:?}): i = {}, e' = {}, sigma term = {}",
                row.x_bits,
                row.x.s,
                row.x.t,
                crate::rational::fmt_q(&row.i_val),
                crate::rational::fmt_q(&row.e_val),
                crate::rational::fmt_q(&row.sigma_term)
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// `C_φ̃ = m_φ / |𝒮_φ̃|`.
pub fn c_tilde(phi: &Parameter) -> Result<Q> {
    Ok(qi(phi.m_phi() as i64) / qi(s_tilde(phi)?.order_linear as i64))
}

/// `m_φ · σ(𝒮̄_φ⁰) / |𝒮_φ̃|`.
pub fn stable_multiplicity_coeff(consts: &Constants, phi: &Parameter) -> Result<Q> {
    Ok(c_tilde(phi)? * sigma_sbar0(consts, phi)?)
}

/// The multiplicity of the packet member whose character of `𝒮_φ` is `ε`,
/// given as a vector over the orthogonal constituents.
pub fn arthur_multiplicity(phi: &Parameter, eps: &Gf2Vec) -> Result<u32> {
    if !phi.is_discrete() {
        return Err(Error::Precondition("arthur_multiplicity needs a discrete parameter".into()));
    }
    let g = component_group(phi, Variant::Sbar);
    if eps.len() != g.coords.len() {
        return Err(Error::DimensionMismatch(format!(
            "character has length {}, the group has {} coordinates",
            eps.len(),
            g.coords.len()
        )));
    }
    if g.rel.basis().iter().any(|&r| crate::gf2::dot(r, eps.bits())) {
        return Err(Error::Precondition("the vector is not a character of the quotient".into()));
    }
    let trivial = g.sub.basis().iter().all(|&v| !crate::gf2::dot(v, eps.bits()));
    Ok(if trivial { phi.m_phi() } else { 0 })
}

/// `m(π̃) = (m_φ / |Σ_Y|) · |Y(π̃)| / |α(𝒮_φ)|`; `y_pi` is given by
/// characters, the modulus of X being added automatically.
pub fn similitude_multiplicity(phi: &Parameter, y_pi: &Subspace, sigma_y_order: u32) -> Result<u64> {
    let modulus = x_modulus(phi.target());
    let y = y_pi.sum(&modulus);
    let a = alpha_image(phi, Variant::Sbar);
    if let Some(w) = a.witness_not_in(&y) {
        return Err(Error::Containment(format!(
            "alpha({}) is not in Y",
            Gf2Vec::from_bits(w, phi.char_dim())
        )));
    }
    let m = phi.m_phi();
    if sigma_y_order == 0 || !m.is_multiple_of(sigma_y_order) {
        return Err(Error::Precondition(format!("|Sigma_Y| = {sigma_y_order} does not divide m = {m}")));
    }
    let index = 1u64 << (y.rank() - a.rank());
    Ok((m / sigma_y_order) as u64 * index)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PacketStats {
    pub s_order: u128,
    pub stilde_order: u128,
    pub orbit_size: u128,
    pub orbit_count: u128,
    /// `|X(π̃)| = |α(𝒮_φ)|`, also the number of constituents of a restriction.
    pub x_order: u128,
}

pub fn packet_orbit_stats(phi: &Parameter) -> Result<PacketStats> {
    let s = component_group(phi, Variant::Sbar).order();
    let st = s_tilde(phi)?.order_linear;
    Ok(PacketStats {
        s_order: s,
        stilde_order: st,
        orbit_size: s / st,
        orbit_count: st,
        x_order: alpha_image_order(phi, Variant::Sbar),
    })
}
