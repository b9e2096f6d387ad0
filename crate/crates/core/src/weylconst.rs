//! Arthur's constants `i^θ(S)`, `e^θ(S)` and `σ(S)` for products of complex
//! classical groups, computed exactly from signed-permutation Weyl groups and
//! ±1-eigenvalue elliptic classes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{qi, Q};

pub const DEFAULT_WEYL_BOUND: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FactorKind {
    GL,
    Sp,
    SO,
    O,
    Torus,
    /// `GL(k) × GL(k)` extended by the swap composed with inverse transpose.
    GLP,
}

/// One factor; `size` is the matrix size (the torus dimension for `Torus`,
/// the size of each block for `GLP`). `outer` selects the non-identity coset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ShapeFactor {
    pub kind: FactorKind,
    pub size: usize,
    pub outer: bool,
}

impl ShapeFactor {
    pub fn new(kind: FactorKind, size: usize, outer: bool) -> Result<Self> {
        let f = ShapeFactor { kind, size, outer };
        if kind == FactorKind::Sp && size % 2 == 1 {
            return Err(Error::Parse(format!("Sp{size}: symplectic size must be even")));
        }
        if outer && !matches!(kind, FactorKind::O | FactorKind::GLP) {
            return Err(Error::Parse(format!("{f}: only O and GLP factors have an outer coset")));
        }
        if outer && size == 0 {
            return Err(Error::Parse(format!("{f}: the trivial group has no outer coset")));
        }
        Ok(f)
    }

    /// Dimension of the maximal torus, central directions included.
    pub fn torus_dim(&self) -> usize {
        match self.kind {
            FactorKind::GL | FactorKind::Torus => self.size,
            FactorKind::Sp | FactorKind::SO | FactorKind::O => self.size / 2,
            FactorKind::GLP => 2 * self.size,
        }
    }

    fn is_trivial(&self) -> bool {
        match self.kind {
            FactorKind::SO => self.size <= 1,
            FactorKind::O => self.size == 0,
            _ => self.size == 0,
        }
    }

    pub fn is_connected(&self) -> bool {
        !matches!(self.kind, FactorKind::O | FactorKind::GLP) || self.is_trivial()
    }

    /// Order of the Weyl group `Norm(T, S)/T` of the full factor.
    pub fn weyl_order(&self) -> u128 {
        let r = self.torus_dim() as u128;
        let fact = |n: u128| (1..=n).product::<u128>();
        match self.kind {
            FactorKind::GL => fact(r),
            FactorKind::Torus => 1,
            FactorKind::Sp => (1u128 << r) * fact(r),
            FactorKind::SO if self.size % 2 == 1 => (1u128 << r) * fact(r),
            FactorKind::SO if r == 0 => 1,
            FactorKind::SO => (1u128 << (r - 1)) * fact(r),
            FactorKind::O if self.size % 2 == 1 => (2u128 << r) * fact(r),
            FactorKind::O => (1u128 << r) * fact(r),
            FactorKind::GLP => {
                let k = fact(self.size as u128);
                if self.size == 0 {
                    1
                } else {
                    2 * k * k
                }
            }
        }
    }

    /// Standard positive roots on the local torus coordinates.
    fn positive_roots(&self) -> Vec<Vec<(usize, i32)>> {
        let r = self.torus_dim();
        let mut out = Vec::new();
        let type_a = |out: &mut Vec<Vec<(usize, i32)>>, base: usize, n: usize| {
            for i in 0..n {
                for j in i + 1..n {
                    out.push(vec![(base + i, 1), (base + j, -1)]);
                }
            }
        };
        match self.kind {
            FactorKind::Torus => {}
            FactorKind::GL => type_a(&mut out, 0, r),
            FactorKind::GLP => {
                type_a(&mut out, 0, self.size);
                type_a(&mut out, self.size, self.size);
            }
            FactorKind::Sp | FactorKind::SO | FactorKind::O => {
                for i in 0..r {
                    for j in i + 1..r {
                        out.push(vec![(i, 1), (j, -1)]);
                        out.push(vec![(i, 1), (j, 1)]);
                    }
                    match (self.kind, self.size % 2) {
                        (FactorKind::Sp, _) => out.push(vec![(i, 2)]),
                        (_, 1) => out.push(vec![(i, 1)]),
                        _ => {}
                    }
                }
            }
        }
        out
    }

    /// The Weyl elements of the selected coset, acting on local coordinates.
    fn coset_elements(&self) -> Vec<SignedPerm> {
        let r = self.torus_dim();
        match self.kind {
            FactorKind::Torus => vec![SignedPerm::identity(r)],
            FactorKind::GL => permutations(r).into_iter().map(SignedPerm::unsigned).collect(),
            FactorKind::Sp => signed_perms(r, |_| true),
            FactorKind::SO | FactorKind::O if self.size % 2 == 1 => signed_perms(r, |_| true),
            FactorKind::SO => signed_perms(r, |neg| neg % 2 == 0),
            FactorKind::O => {
                let want = usize::from(self.outer);
                signed_perms(r, |neg| neg % 2 == want)
            }
            FactorKind::GLP => {
                let k = self.size;
                let perms = permutations(k);
                let mut out = Vec::with_capacity(perms.len() * perms.len());
                for s in &perms {
                    for t in &perms {
                        let mut perm = vec![0; 2 * k];
                        let mut neg = vec![self.outer; 2 * k];
                        for i in 0..k {
                            if self.outer {
                                // e_i ↦ −f_{t(i)}, f_i ↦ −e_{s(i)}
                                perm[i] = k + t[i];
                                perm[k + i] = s[i];
                            } else {
                                perm[i] = s[i];
                                perm[k + i] = k + t[i];
                                neg[i] = false;
                                neg[k + i] = false;
                            }
                        }
                        out.push(SignedPerm { perm, neg });
                    }
                }
                out
            }
        }
    }

    /// Elliptic ±1-eigenvalue splits `(a, b)` of the selected coset.
    fn elliptic_splits(&self) -> Vec<(usize, usize)> {
        let n = self.size;
        if self.is_trivial() {
            return vec![(n, 0)];
        }
        match self.kind {
            FactorKind::GL | FactorKind::Torus | FactorKind::GLP => vec![],
            FactorKind::Sp => (0..=n).step_by(2).map(|b| (n - b, b)).collect(),
            FactorKind::SO => (0..=n).filter(|b| b % 2 == 0).map(|b| (n - b, b)).collect(),
            FactorKind::O => {
                let parity = usize::from(self.outer);
                (0..=n).filter(|b| b % 2 == parity).map(|b| (n - b, b)).collect()
            }
        }
    }
}

impl fmt::Display for ShapeFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            FactorKind::GL => "GL",
            FactorKind::Sp => "Sp",
            FactorKind::SO => "SO",
            FactorKind::O => "O",
            FactorKind::Torus => "T",
            FactorKind::GLP => "GLP",
        };
        write!(f, "{name}{}{}", self.size, if self.outer { "'" } else { "" })
    }
}

/// A product of classical factors together with a chosen coset in each
/// disconnected factor. Factors are kept sorted; trivial factors are dropped.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReductiveShape {
    factors: Vec<ShapeFactor>,
}

impl ReductiveShape {
    pub fn trivial() -> Self {
        ReductiveShape { factors: vec![] }
    }

    pub fn new(factors: impl IntoIterator<Item = ShapeFactor>) -> Self {
        let mut factors: Vec<ShapeFactor> = factors.into_iter().filter(|f| !f.is_trivial()).collect();
        factors.sort();
        ReductiveShape { factors }
    }

    pub fn factors(&self) -> &[ShapeFactor] {
        &self.factors
    }

    pub fn product(&self, other: &ReductiveShape) -> ReductiveShape {
        ReductiveShape::new(self.factors.iter().chain(&other.factors).copied())
    }

    pub fn is_connected(&self) -> bool {
        self.factors.iter().all(ShapeFactor::is_connected)
    }

    pub fn torus_dim(&self) -> usize {
        self.factors.iter().map(ShapeFactor::torus_dim).sum()
    }

    pub fn weyl_order(&self) -> u128 {
        self.factors.iter().map(ShapeFactor::weyl_order).product()
    }

    /// Whether the center of the identity component is infinite.
    pub fn has_central_torus(&self) -> bool {
        self.factors.iter().any(|f| match f.kind {
            FactorKind::GL | FactorKind::Torus | FactorKind::GLP => true,
            FactorKind::SO | FactorKind::O => f.size == 2,
            FactorKind::Sp => false,
        })
    }

    fn positive_roots(&self) -> Vec<Vec<(usize, i32)>> {
        let mut out = Vec::new();
        let mut base = 0;
        for f in &self.factors {
            out.extend(
                f.positive_roots()
                    .into_iter()
                    .map(|r| r.into_iter().map(|(i, c)| (i + base, c)).collect()),
            );
            base += f.torus_dim();
        }
        out
    }
}

impl fmt::Display for ReductiveShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("*"))
    }
}

impl Serialize for ReductiveShape {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for ReductiveShape {
    type Err = Error;

    /// Grammar: factors joined by `*`, each `GL<k>`, `Sp<2k>`, `SO<n>`,
    /// `O<n>`, `T<k>` or `GLP<k>`, optionally followed by `'` for the outer
    /// coset. `1` or the empty string is the trivial group.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(ReductiveShape::trivial());
        }
        let mut factors = Vec::new();
        for tok in s.split('*') {
            let tok = tok.trim();
            let (body, outer) = match tok.strip_suffix('\'') {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let split = body.find(|c: char| c.is_ascii_digit()).unwrap_or(body.len());
            let (name, num) = body.split_at(split);
            let kind = match name {
                "GL" => FactorKind::GL,
                "GLP" => FactorKind::GLP,
                "Sp" => FactorKind::Sp,
                "SO" => FactorKind::SO,
                "O" => FactorKind::O,
                "T" => FactorKind::Torus,
                _ => return Err(Error::Parse(format!("unknown shape factor '{tok}'"))),
            };
            let size = num
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("missing or bad size in '{tok}'")))?;
            factors.push(ShapeFactor::new(kind, size, outer)?);
        }
        Ok(ReductiveShape::new(factors))
    }
}

/// `w(e_i) = ±e_{perm[i]}`, the sign being negative when `neg[i]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SignedPerm {
    pub perm: Vec<usize>,
    pub neg: Vec<bool>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm {
            perm: (0..n).collect(),
            neg: vec![false; n],
        }
    }

    fn unsigned(perm: Vec<usize>) -> Self {
        let n = perm.len();
        SignedPerm { perm, neg: vec![false; n] }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// `det(w − 1)`: each cycle of length `m` with sign product `ε`
    /// contributes `(−1)^m (1 − ε)`.
    pub fn det_minus_one(&self) -> i64 {
        let n = self.dim();
        let mut seen = vec![false; n];
        let mut det = 1i64;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let (mut i, mut len, mut negs) = (start, 0, 0);
            while !seen[i] {
                seen[i] = true;
                negs += usize::from(self.neg[i]);
                len += 1;
                i = self.perm[i];
            }
            if negs % 2 == 0 {
                return 0;
            }
            det *= if len % 2 == 0 { 2 } else { -2 };
        }
        det
    }

    /// The matrix of `w` in the standard basis, columns being images.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let n = self.dim();
        let mut m = vec![vec![0; n]; n];
        for i in 0..n {
            m[self.perm[i]][i] = if self.neg[i] { -1 } else { 1 };
        }
        m
    }

    fn apply_root(&self, root: &[(usize, i32)]) -> Vec<(usize, i32)> {
        root.iter()
            .map(|&(i, c)| (self.perm[i], if self.neg[i] { -c } else { c }))
            .collect()
    }

    fn concat(parts: &[&SignedPerm]) -> SignedPerm {
        let mut perm = Vec::new();
        let mut neg = Vec::new();
        for p in parts {
            let base = perm.len();
            perm.extend(p.perm.iter().map(|&j| j + base));
            neg.extend_from_slice(&p.neg);
        }
        SignedPerm { perm, neg }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out.sort();
    out
}

fn signed_perms(n: usize, keep: impl Fn(usize) -> bool) -> Vec<SignedPerm> {
    let mut out = Vec::new();
    for p in permutations(n) {
        for signs in 0u32..(1 << n) {
            if keep(signs.count_ones() as usize) {
                out.push(SignedPerm {
                    perm: p.clone(),
                    neg: (0..n).map(|i| (signs >> i) & 1 == 1).collect(),
                });
            }
        }
    }
    out
}

/// An element of `W^θ(S)`, with the positive-root inversion count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeylElement {
    pub action: SignedPerm,
    /// Positive roots sent to negative roots.
    pub inversions: usize,
    pub det_minus_one: i64,
}

impl WeylElement {
    pub fn is_regular(&self) -> bool {
        self.det_minus_one != 0
    }

    /// `s⁰(w) = (−1)^{inversions}`.
    pub fn sign(&self) -> i64 {
        if self.inversions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

fn check_bound(shape: &ReductiveShape, bound: u128) -> Result<()> {
    let order = shape.weyl_order();
    if order > bound {
        return Err(Error::WeylBound { order, bound });
    }
    Ok(())
}

/// Visits every element of the chosen coset of `W(S)` as one signed
/// permutation of the full torus.
fn for_each_element(shape: &ReductiveShape, bound: u128, mut visit: impl FnMut(&SignedPerm)) -> Result<()> {
    check_bound(shape, bound)?;
    let lists: Vec<Vec<SignedPerm>> = shape.factors.iter().map(ShapeFactor::coset_elements).collect();
    let mut idx = vec![0usize; lists.len()];
    loop {
        let parts: Vec<&SignedPerm> = lists.iter().zip(&idx).map(|(l, &i)| &l[i]).collect();
        visit(&SignedPerm::concat(&parts));
        let mut k = 0;
        loop {
            if k == lists.len() {
                return Ok(());
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

fn inversions(w: &SignedPerm, roots: &[Vec<(usize, i32)>]) -> usize {
    roots
        .iter()
        .filter(|r| {
            let img = w.apply_root(r);
            let lead = img.iter().min_by_key(|(i, _)| *i).expect("roots are nonzero");
            lead.1 < 0
        })
        .count()
}

/// The coset `W^θ(S)`, in a deterministic order.
pub fn weyl_enumerate(shape: &ReductiveShape, bound: u128) -> Result<Vec<WeylElement>> {
    let roots = shape.positive_roots();
    let mut out = Vec::new();
    for_each_element(shape, bound, |w| {
        out.push(WeylElement {
            inversions: inversions(w, &roots),
            det_minus_one: w.det_minus_one(),
            action: w.clone(),
        })
    })?;
    Ok(out)
}

/// `i^θ(S) = |W(S)|⁻¹ Σ_{w regular} s⁰(w) |det(w − 1)|⁻¹`.
pub fn i_theta(shape: &ReductiveShape, bound: u128) -> Result<Q> {
    let roots = shape.positive_roots();
    // Denominators are powers of two bounded by 2^rank; accumulate over the
    // common denominator.
    let rank = shape.torus_dim() as u32;
    let common = num_bigint::BigInt::from(1u8) << rank;
    let mut num = num_bigint::BigInt::zero();
    for_each_element(shape, bound, |w| {
        let det = w.det_minus_one();
        if det != 0 {
            let term = &common / num_bigint::BigInt::from(det.abs());
            if inversions(w, &roots).is_multiple_of(2) {
                num += term;
            } else {
                num -= term;
            }
        }
    })?;
    Ok(Q::new(num, common * num_bigint::BigInt::from(shape.weyl_order())))
}

/// An elliptic class: one `(a, b)` split per factor, `a` and `b` being the
/// multiplicities of the eigenvalues `+1` and `−1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticClass {
    pub splits: Vec<(usize, usize)>,
    /// Identity component of the centralizer.
    pub centralizer: ReductiveShape,
    /// `|π₀|` of the centralizer in `S`.
    pub pi0: u64,
    /// Whether `s` is central in the identity component.
    pub central: bool,
}

pub fn elliptic_classes(shape: &ReductiveShape) -> Vec<EllipticClass> {
    let per: Vec<Vec<(usize, usize)>> = shape.factors.iter().map(ShapeFactor::elliptic_splits).collect();
    if per.iter().any(Vec::is_empty) {
        return vec![];
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; per.len()];
    loop {
        let splits: Vec<(usize, usize)> = per.iter().zip(&idx).map(|(l, &i)| l[i]).collect();
        let mut cent = Vec::new();
        let mut pi0 = 1u64;
        let mut central = true;
        for (f, &(a, b)) in shape.factors.iter().zip(&splits) {
            central &= a == 0 || b == 0;
            let comp = |m: usize| if m >= 1 { 2 } else { 1 };
            match f.kind {
                FactorKind::Sp => {
                    cent.push(ShapeFactor { kind: FactorKind::Sp, size: a, outer: false });
                    cent.push(ShapeFactor { kind: FactorKind::Sp, size: b, outer: false });
                }
                FactorKind::SO | FactorKind::O => {
                    cent.push(ShapeFactor { kind: FactorKind::SO, size: a, outer: false });
                    cent.push(ShapeFactor { kind: FactorKind::SO, size: b, outer: false });
                    let full = comp(a) * comp(b);
                    pi0 *= if f.kind == FactorKind::O { full } else { full / 2 };
                }
                // trivial GL, T and GLP factors were dropped by the constructor
                _ => {}
            }
        }
        out.push(EllipticClass {
            splits,
            centralizer: ReductiveShape::new(cent),
            pi0,
            central,
        });
        let mut k = 0;
        loop {
            if k == per.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < per[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Calculator holding the Weyl size bound and the memo table for `σ`.
#[derive(Debug)]
pub struct Constants {
    bound: u128,
    sigma_memo: Mutex<BTreeMap<ReductiveShape, Q>>,
}

impl Default for Constants {
    fn default() -> Self {
        Constants::new(DEFAULT_WEYL_BOUND)
    }
}

impl Constants {
    pub fn new(bound: u128) -> Self {
        Constants {
            bound,
            sigma_memo: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn bound(&self) -> u128 {
        self.bound
    }

    pub fn i_theta(&self, shape: &ReductiveShape) -> Result<Q> {
        i_theta(shape, self.bound)
    }

    /// `e^θ(S) = Σ_s |π₀(S_s)|⁻¹ σ(S_s⁰)` over the elliptic classes.
    pub fn e_theta(&self, shape: &ReductiveShape) -> Result<Q> {
        let mut total = Q::zero();
        for c in elliptic_classes(shape) {
            total += self.sigma(&c.centralizer)? / qi(c.pi0 as i64);
        }
        Ok(total)
    }

    /// `σ(S)` for connected `S`, from `e(S) = i(S)` solved for the central
    /// classes; zero when the center is infinite.
    pub fn sigma(&self, shape: &ReductiveShape) -> Result<Q> {
        if !shape.is_connected() {
            return Err(Error::Precondition(format!("sigma needs a connected shape, got {shape}")));
        }
        if shape.has_central_torus() {
            return Ok(Q::zero());
        }
        if let Some(v) = self.sigma_memo.lock().expect("memo lock").get(shape) {
            return Ok(v.clone());
        }
        let i = self.i_theta(shape)?;
        let mut rest = Q::zero();
        let mut n_central = 0i64;
        for c in elliptic_classes(shape) {
            if c.central {
                n_central += 1;
            } else {
                rest += self.sigma(&c.centralizer)? / qi(c.pi0 as i64);
            }
        }
        if n_central == 0 {
            return Err(Error::Consistency(format!("no central elliptic class in {shape}")));
        }
        let value = (i - rest) / qi(n_central);
        self.sigma_memo
            .lock()
            .expect("memo lock")
            .insert(shape.clone(), value.clone());
        Ok(value)
    }
}

/// Order of the center of a connected shape, if finite.
pub fn center_order(shape: &ReductiveShape) -> Option<u64> {
    if !shape.is_connected() || shape.has_central_torus() {
        return None;
    }
    Some(
        shape
            .factors
            .iter()
            .map(|f| match f.kind {
                FactorKind::Sp => 2,
                FactorKind::SO if f.size % 2 == 0 => 2,
                _ => 1,
            })
            .product(),
    )
}

/// Constants of a shape in one record.
#[derive(Clone, Debug, Serialize)]
pub struct ShapeConstants {
    pub shape: ReductiveShape,
    pub weyl_order: String,
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub i: Q,
    #[serde(serialize_with = "crate::rational::ser_q")]
    pub e: Q,
    #[serde(serialize_with = "crate::rational::ser_q_opt")]
    pub sigma: Option<Q>,
    pub elliptic_classes: usize,
}

pub fn shape_constants(c: &Constants, shape: &ReductiveShape) -> Result<ShapeConstants> {
    Ok(ShapeConstants {
        shape: shape.clone(),
        weyl_order: shape.weyl_order().to_string(),
        i: c.i_theta(shape)?,
        e: c.e_theta(shape)?,
        sigma: if shape.is_connected() { Some(c.sigma(shape)?) } else { None },
        elliptic_classes: elliptic_classes(shape).len(),
    })
}

/// Every shape with at most `max_factors` nontrivial factors drawn from the
/// classical families (all cosets) whose Weyl order is at most `max_order`.
/// Factors of Weyl order 1 (`GL1`, `T<k>`, `SO2`, `GLP1`) appear at most once
/// so the catalog stays finite.
pub fn catalog(max_order: u128, max_factors: usize) -> Vec<ReductiveShape> {
    let mut base = Vec::new();
    let mut add = |kind, size, outer| {
        if let Ok(f) = ShapeFactor::new(kind, size, outer) {
            if !f.is_trivial() && f.weyl_order() <= max_order {
                base.push(f);
            }
        }
    };
    for n in 1..=16 {
        add(FactorKind::GL, n, false);
        add(FactorKind::Sp, n, false);
        add(FactorKind::SO, n, false);
        add(FactorKind::O, n, false);
        add(FactorKind::O, n, true);
        add(FactorKind::GLP, n, false);
        add(FactorKind::GLP, n, true);
    }
    add(FactorKind::Torus, 1, false);
    add(FactorKind::Torus, 2, false);
    base.sort();
    let mut out = vec![ReductiveShape::trivial()];
    fn rec(
        base: &[ShapeFactor],
        start: usize,
        cur: &mut Vec<ShapeFactor>,
        order: u128,
        max_order: u128,
        left: usize,
        out: &mut Vec<ReductiveShape>,
    ) {
        if left == 0 {
            return;
        }
        for (k, f) in base.iter().enumerate().skip(start) {
            let o = order * f.weyl_order();
            if o > max_order {
                continue;
            }
            let next = if f.weyl_order() == 1 { k + 1 } else { k };
            cur.push(*f);
            out.push(ReductiveShape::new(cur.iter().copied()));
            rec(base, next, cur, o, max_order, left - 1, out);
            cur.pop();
        }
    }
    rec(&base, 0, &mut Vec::new(), 1, max_order, max_factors, &mut out);
    out
}
