//! Exhaustive enumeration of small parameters, used by the property sweeps.
//!
//! Orthogonal constituents are described by `(N, l)` and a character. The
//! characters are enumerated up to the action of `GL(d, F₂)` on the character
//! universe: each new character is either in the span of the earlier ones or
//! the next basis vector. Every quantity checked by the sweeps depends only on
//! linear relations among the characters, so this loses nothing.

use crate::gf2::Gf2Vec;
use crate::params::{Constituent, Duality, GroupSpec, Parameter, SimpleGroup, SimpleParam};

/// Bounds of a sweep.
#[derive(Clone, Copy, Debug)]
pub struct SweepBounds {
    /// Maximal number of constituents.
    pub max_r: usize,
    pub max_dim: usize,
    pub max_mult: usize,
    /// Dimension of the character universe (its order is `2^char_dim`).
    pub char_dim: usize,
    /// Whether symplectic and paired constituents are included.
    pub non_orth: bool,
}

/// A constituent type before characters are attached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Kind {
    pub duality: Duality,
    pub dim: usize,
    pub mult: usize,
}

fn kinds(b: &SweepBounds) -> Vec<Kind> {
    let mut out = Vec::new();
    for dim in 1..=b.max_dim {
        for mult in 1..=b.max_mult {
            out.push(Kind { duality: Duality::OrthSelfDual, dim, mult });
            if b.non_orth {
                out.push(Kind { duality: Duality::NonSelfDualPair, dim, mult });
                if dim % 2 == 0 && mult % 2 == 0 {
                    out.push(Kind { duality: Duality::SympSelfDual, dim, mult });
                }
            }
        }
    }
    out.sort();
    out
}

/// Sorted multisets of kinds with at most `max_r` members.
pub fn kind_multisets(b: &SweepBounds) -> Vec<Vec<Kind>> {
    let ks = kinds(b);
    let mut out = Vec::new();
    fn rec(ks: &[Kind], start: usize, left: usize, cur: &mut Vec<Kind>, out: &mut Vec<Vec<Kind>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for i in start..ks.len() {
            cur.push(ks[i]);
            rec(ks, i, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(&ks, 0, b.max_r, &mut Vec::new(), &mut out);
    out
}

/// Character sequences of length `r` up to `GL(d, F₂)`: each entry lies in the
/// span of the basis vectors introduced so far, or introduces the next one.
pub fn char_patterns(r: usize, d: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    fn rec(r: usize, d: usize, k: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for v in 0..(1u64 << k) {
            cur.push(v);
            rec(r, d, k, cur, out);
            cur.pop();
        }
        if k < d {
            cur.push(1 << k);
            rec(r, d, k + 1, cur, out);
            cur.pop();
        }
    }
    rec(r, d, 0, &mut Vec::new(), &mut out);
    out
}

/// The target determined by a constituent list: `Sp` when the total
/// dimension is odd, `SO(·, η)` with `η` the determinant otherwise.
fn target_for(cons: &[Constituent], d: usize) -> Option<GroupSpec> {
    let total: usize = cons.iter().map(Constituent::total_dim).sum();
    let det = cons
        .iter()
        .filter(|c| c.simple.is_orth() && c.mult % 2 == 1)
        .fold(Gf2Vec::zero(d), |a, c| a.add(&c.simple.central_char));
    if total % 2 == 1 {
        det.is_zero().then(|| GroupSpec::sp((total - 1) / 2, d))
    } else {
        Some(GroupSpec::simple(SimpleGroup::so(total / 2, det)))
    }
}

/// Calls `visit` on every valid parameter within the bounds.
pub fn for_each_parameter(b: &SweepBounds, mut visit: impl FnMut(&Parameter)) -> usize {
    let mut count = 0;
    for ms in kind_multisets(b) {
        let n_orth = ms.iter().filter(|k| k.duality == Duality::OrthSelfDual).count();
        for pat in char_patterns(n_orth, b.char_dim) {
            let mut cons = Vec::with_capacity(ms.len());
            let mut orth_seen = 0;
            let mut ok = true;
            for (i, k) in ms.iter().enumerate() {
                let eta = if k.duality == Duality::OrthSelfDual {
                    orth_seen += 1;
                    Gf2Vec::from_bits(pat[orth_seen - 1], b.char_dim)
                } else {
                    Gf2Vec::zero(b.char_dim)
                };
                let simple = SimpleParam::new(format!("c{}", i + 1), k.dim, k.duality, eta).expect("kinds are valid");
                // equal characters are one constituent, not two
                if k.dim == 1
                    && k.duality == Duality::OrthSelfDual
                    && cons
                        .iter()
                        .any(|c: &Constituent| c.simple.dim == 1 && c.simple.is_orth() && c.simple.central_char == eta)
                {
                    ok = false;
                    break;
                }
                cons.push(Constituent { simple, mult: k.mult, factor: 0 });
            }
            if !ok || cons.is_empty() {
                continue;
            }
            let Some(target) = target_for(&cons, b.char_dim) else {
                continue;
            };
            if let Ok(p) = Parameter::new(target, cons) {
                count += 1;
                visit(&p);
            }
        }
    }
    count
}
