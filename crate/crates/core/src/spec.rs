//! The parameter-spec file format.
//!
//! A spec file is a sequence of sections. Each section starts with a header
//! line `[kind]` and continues with `key = value` lines; `#` starts a comment.
//! Sections are read in order, so every name must be defined before it is
//! used. The grammar is documented in `docs/spec-format.md`.

use std::collections::{BTreeMap, BTreeSet};

use crate::charfield::{GlobalCharModel, PlaceKind, PlaceModel};
use crate::error::{Error, Result};
use crate::gf2::Gf2Vec;
use crate::params::{Constituent, Duality, GroupSpec, Parameter, SimpleGroup, SimpleParam};
use crate::smo::{LocalItem, Profiles};

/// Everything a spec file defines.
#[derive(Clone, Debug, Default)]
pub struct SpecModel {
    pub model: Option<GlobalCharModel>,
    /// Labels of the global characters, in generator order.
    pub char_labels: Vec<String>,
    pub char_dim: usize,
    pub groups: Vec<(String, GroupSpec)>,
    pub simples: Vec<(String, SimpleParam)>,
    pub params: Vec<(String, Parameter)>,
    pub profiles: Profiles,
}

impl SpecModel {
    pub fn param(&self, label: &str) -> Option<&Parameter> {
        self.params.iter().find(|(l, _)| l == label).map(|(_, p)| p)
    }

    pub fn group(&self, label: &str) -> Option<&GroupSpec> {
        self.groups.iter().find(|(l, _)| l == label).map(|(_, g)| g)
    }
}

#[derive(Debug)]
struct Section {
    kind: String,
    line: usize,
    entries: Vec<(String, String, usize)>,
}

impl Section {
    fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, l)| (v.as_str(), *l))
    }

    fn require(&self, key: &str) -> Result<(&str, usize)> {
        self.get(key)
            .ok_or_else(|| spec_err(self.line, format!("[{}] needs '{key}'", self.kind)))
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for (k, _, l) in &self.entries {
            if !allowed.contains(&k.as_str()) {
                return Err(spec_err(*l, format!("unknown key '{k}' in [{}]", self.kind)));
            }
        }
        Ok(())
    }
}

fn spec_err(line: usize, message: impl Into<String>) -> Error {
    Error::Spec {
        line,
        message: message.into(),
    }
}

fn at(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Spec { .. } => e,
        other => spec_err(line, other.to_string()),
    }
}

const KINDS: [&str; 6] = ["place", "globalchar", "group", "simple", "param", "profile"];

fn sections(text: &str) -> Result<Vec<Section>> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let kind = rest
                .strip_suffix(']')
                .ok_or_else(|| spec_err(line, "unterminated section header"))?
                .trim();
            if !KINDS.contains(&kind) {
                return Err(spec_err(line, format!("unknown section [{kind}]")));
            }
            out.push(Section {
                kind: kind.to_string(),
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let (k, v) = content
            .split_once('=')
            .ok_or_else(|| spec_err(line, format!("expected 'key = value', found '{content}'")))?;
        let section = out
            .last_mut()
            .ok_or_else(|| spec_err(line, "entry before the first section header"))?;
        let k = k.trim().to_string();
        if section.entries.iter().any(|(e, _, _)| *e == k) {
            return Err(spec_err(line, format!("duplicate key '{k}'")));
        }
        section.entries.push((k, v.trim().to_string(), line));
    }
    Ok(out)
}

fn parse_usize(v: &str, line: usize, what: &str) -> Result<usize> {
    v.parse()
        .map_err(|_| spec_err(line, format!("{what} must be a non-negative integer, found '{v}'")))
}

fn parse_bool(v: &str, line: usize) -> Result<bool> {
    match v {
        "true" | "yes" => Ok(true),
        "false" | "no" => Ok(false),
        _ => Err(spec_err(line, format!("expected true or false, found '{v}'"))),
    }
}

fn is_bits(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c == '0' || c == '1')
}

/// The character dimension when no model is given: the length of the first
/// bit-string character in the file.
fn abstract_dim(secs: &[Section]) -> usize {
    secs.iter()
        .flat_map(|s| s.entries.iter())
        .filter(|(k, _, _)| k == "eta" || k == "char")
        .flat_map(|(_, v, _)| v.split('*').map(str::trim).collect::<Vec<_>>())
        .find(|t| is_bits(t))
        .map(str::len)
        .unwrap_or(0)
}

struct Builder {
    spec: SpecModel,
    places: Vec<PlaceModel>,
    gens: Vec<Gf2Vec>,
    seen: BTreeMap<String, BTreeSet<String>>,
}

impl Builder {
    fn claim(&mut self, kind: &str, label: &str, line: usize) -> Result<()> {
        if label.is_empty() || label.contains(|c: char| c.is_whitespace() || ",*@:".contains(c)) {
            return Err(spec_err(line, format!("invalid label '{label}'")));
        }
        if !self.seen.entry(kind.to_string()).or_default().insert(label.to_string()) {
            return Err(spec_err(line, format!("duplicate {kind} label '{label}'")));
        }
        Ok(())
    }

    fn finish_model(&mut self, line: usize) -> Result<()> {
        if self.spec.model.is_none() && !self.gens.is_empty() {
            let m = GlobalCharModel::new(self.places.clone(), self.gens.clone()).map_err(at(line))?;
            self.spec.char_dim = m.dim();
            self.spec.model = Some(m);
        }
        Ok(())
    }

    /// A global character. With a model: `1` or a `*`-product of labels.
    /// Without one: a bit string of the common length.
    fn character(&self, expr: &str, line: usize) -> Result<Gf2Vec> {
        let d = self.spec.char_dim;
        let mut acc = Gf2Vec::zero(d);
        for term in expr.split('*').map(str::trim) {
            if term == "1" && self.spec.model.is_some() {
                continue;
            }
            let v = if let Some(j) = self.spec.char_labels.iter().position(|l| l == term) {
                Gf2Vec::from_bits(1 << j, d)
            } else if is_bits(term) {
                if self.spec.model.is_some() {
                    return Err(spec_err(line, format!("use character labels, not bit strings, with a model: '{term}'")));
                }
                if term.len() != d {
                    return Err(spec_err(line, format!("character '{term}' should have {d} bits")));
                }
                Gf2Vec::parse(term).map_err(at(line))?
            } else {
                return Err(spec_err(line, format!("unknown character '{term}'")));
            };
            acc = acc.add(&v);
        }
        Ok(acc)
    }

    fn place(&mut self, s: &Section) -> Result<()> {
        s.check_keys(&["id", "kind"])?;
        if !self.gens.is_empty() || self.spec.model.is_some() {
            return Err(spec_err(s.line, "places must precede the global characters"));
        }
        let (id, l) = s.require("id")?;
        self.claim("place", id, l)?;
        let (kind, kl) = s.require("kind")?;
        let kind = match kind {
            "finite" => PlaceKind::Finite,
            "real" => PlaceKind::Real,
            _ => return Err(spec_err(kl, format!("place kind must be finite or real, found '{kind}'"))),
        };
        self.places.push(PlaceModel::new(id, kind));
        Ok(())
    }

    fn globalchar(&mut self, s: &Section) -> Result<()> {
        if let Some((name, l)) = s.get("builtin") {
            s.check_keys(&["builtin"])?;
            if self.spec.model.is_some() || !self.places.is_empty() || !self.gens.is_empty() {
                return Err(spec_err(l, "a built-in model must be the only character model"));
            }
            let m = GlobalCharModel::builtin(name).ok_or_else(|| spec_err(l, format!("unknown built-in model '{name}'")))?;
            self.spec.char_labels = (1..=m.dim()).map(|j| format!("g{j}")).collect();
            for lab in self.spec.char_labels.clone() {
                self.claim("globalchar", &lab, l)?;
            }
            self.spec.char_dim = m.dim();
            self.spec.model = Some(m);
            return Ok(());
        }
        s.check_keys(&["label", "local"])?;
        if self.spec.model.is_some() {
            return Err(spec_err(s.line, "global characters cannot follow a completed model"));
        }
        if self.places.is_empty() {
            return Err(spec_err(s.line, "global characters need at least one [place]"));
        }
        let (label, l) = s.require("label")?;
        self.claim("globalchar", label, l)?;
        let total: usize = self.places.iter().map(PlaceModel::local_rank).sum();
        let mut bits = 0u64;
        if let Some((local, ll)) = s.get("local") {
            for item in local.split([',', ' ']).filter(|t| !t.is_empty()) {
                let (pl, b) = item
                    .split_once(':')
                    .ok_or_else(|| spec_err(ll, format!("expected place:bits, found '{item}'")))?;
                let idx = self
                    .places
                    .iter()
                    .position(|p| p.id == pl)
                    .ok_or_else(|| spec_err(ll, format!("unknown place '{pl}'")))?;
                let r = self.places[idx].local_rank();
                let v = Gf2Vec::parse(b).map_err(at(ll))?;
                if v.len() != r {
                    return Err(spec_err(ll, format!("place '{pl}' has {r} local coordinates, found '{b}'")));
                }
                let off: usize = self.places[..idx].iter().map(PlaceModel::local_rank).sum();
                bits |= v.bits() << off;
            }
        }
        self.gens.push(Gf2Vec::from_bits(bits, total));
        self.spec.char_labels.push(label.to_string());
        Ok(())
    }

    fn group(&mut self, s: &Section) -> Result<()> {
        s.check_keys(&["label", "family", "rank", "eta", "similitude", "factors"])?;
        let (label, l) = s.require("label")?;
        self.claim("group", label, l)?;
        let similitude = match s.get("similitude") {
            Some((v, vl)) => parse_bool(v, vl)?,
            None => false,
        };
        let g = if let Some((factors, fl)) = s.get("factors") {
            if s.get("family").is_some() || s.get("rank").is_some() || s.get("eta").is_some() {
                return Err(spec_err(fl, "'factors' excludes family, rank and eta"));
            }
            let mut fs = Vec::new();
            for name in factors.split('*').map(str::trim) {
                let g = self
                    .spec
                    .group(name)
                    .ok_or_else(|| spec_err(fl, format!("unknown group '{name}'")))?;
                fs.extend(g.factors().iter().cloned());
            }
            GroupSpec::new(fs, similitude).map_err(at(fl))?
        } else {
            let (family, fl) = s.require("family")?;
            let (rank, rl) = s.require("rank")?;
            let rank = parse_usize(rank, rl, "rank")?;
            let simple = match family {
                "Sp" => {
                    if let Some((_, el)) = s.get("eta") {
                        return Err(spec_err(el, "symplectic groups take no 'eta'"));
                    }
                    SimpleGroup::sp(rank, self.spec.char_dim)
                }
                "SO" => {
                    let eta = match s.get("eta") {
                        Some((e, el)) => self.character(e, el)?,
                        None => Gf2Vec::zero(self.spec.char_dim),
                    };
                    SimpleGroup::so(rank, eta)
                }
                _ => return Err(spec_err(fl, format!("family must be Sp or SO, found '{family}'"))),
            };
            GroupSpec::simple(simple).with_similitude(similitude)
        };
        self.spec.groups.push((label.to_string(), g));
        Ok(())
    }

    fn simple(&mut self, s: &Section) -> Result<()> {
        s.check_keys(&["label", "dim", "duality", "char"])?;
        let (label, l) = s.require("label")?;
        self.claim("simple", label, l)?;
        let (dim, dl) = s.require("dim")?;
        let dim = parse_usize(dim, dl, "dim")?;
        let duality = match s.get("duality") {
            None | Some(("orth", _)) => Duality::OrthSelfDual,
            Some(("symp", _)) => Duality::SympSelfDual,
            Some(("pair", _)) => Duality::NonSelfDualPair,
            Some((v, vl)) => return Err(spec_err(vl, format!("duality must be orth, symp or pair, found '{v}'"))),
        };
        let eta = match s.get("char") {
            Some((c, cl)) => {
                if duality != Duality::OrthSelfDual {
                    return Err(spec_err(cl, "only orthogonal constituents carry a character"));
                }
                self.character(c, cl)?
            }
            None => Gf2Vec::zero(self.spec.char_dim),
        };
        let p = SimpleParam::new(label, dim, duality, eta).map_err(at(s.line))?;
        self.spec.simples.push((label.to_string(), p));
        Ok(())
    }

    fn param(&mut self, s: &Section) -> Result<()> {
        s.check_keys(&["label", "group", "constituents"])?;
        let (label, l) = s.require("label")?;
        self.claim("param", label, l)?;
        let (gname, gl) = s.require("group")?;
        let target = self
            .spec
            .group(gname)
            .ok_or_else(|| spec_err(gl, format!("unknown group '{gname}'")))?
            .clone();
        let (cons, cl) = s.require("constituents")?;
        let mut out = Vec::new();
        for item in cons.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (item, factor) = match item.split_once('@') {
                Some((a, f)) => {
                    let f = parse_usize(f.trim(), cl, "factor")?;
                    if f == 0 {
                        return Err(spec_err(cl, "factors are numbered from 1"));
                    }
                    (a.trim(), f - 1)
                }
                None => (item, 0),
            };
            let (mult, name) = match item.split_once('*') {
                Some((m, n)) => (parse_usize(m.trim(), cl, "multiplicity")?, n.trim()),
                None => (1, item),
            };
            let simple = self
                .spec
                .simples
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, p)| p.clone())
                .ok_or_else(|| spec_err(cl, format!("unknown constituent '{name}'")))?;
            out.push(Constituent { simple, mult, factor });
        }
        let p = Parameter::new(target, out).map_err(at(cl))?;
        self.spec.params.push((label.to_string(), p));
        Ok(())
    }

    fn profile(&mut self, s: &Section) -> Result<()> {
        s.check_keys(&["simple", "place", "items"])?;
        let model = self
            .spec
            .model
            .as_ref()
            .ok_or_else(|| spec_err(s.line, "profiles need a character model"))?;
        let (simple, sl) = s.require("simple")?;
        if !self.spec.simples.iter().any(|(n, _)| n == simple) {
            return Err(spec_err(sl, format!("unknown constituent '{simple}'")));
        }
        let (place, pl) = s.require("place")?;
        let r = model.place(place).map_err(at(pl))?.local_rank();
        if self.spec.profiles.get(simple, place).is_some() {
            return Err(spec_err(s.line, format!("duplicate profile for '{simple}' at '{place}'")));
        }
        let (items, il) = s.require("items")?;
        let local = |b: &str| -> Result<Gf2Vec> {
            let v = Gf2Vec::parse(b).map_err(at(il))?;
            if v.len() != r {
                return Err(spec_err(il, format!("local characters at '{place}' have {r} bits, found '{b}'")));
            }
            Ok(v)
        };
        let mut out = Vec::new();
        for item in items.split([',', ' ']).filter(|t| !t.is_empty()) {
            let parts: Vec<&str> = item.split(':').collect();
            let it = match parts.as_slice() {
                ["chi", b] => LocalItem::Char(local(b)?),
                ["orth", d, b] => LocalItem::Orth {
                    dim: parse_usize(d, il, "dim")?,
                    eta: local(b)?,
                },
                ["symp", d] => LocalItem::Symp {
                    dim: parse_usize(d, il, "dim")?,
                },
                ["pair", d] => LocalItem::Pair {
                    dim: parse_usize(d, il, "dim")?,
                },
                _ => return Err(spec_err(il, format!("unrecognized local item '{item}'"))),
            };
            out.push(it);
        }
        self.spec.profiles.insert(simple, place, out);
        Ok(())
    }
}

/// Parses and validates a spec file.
pub fn parse_spec(text: &str) -> Result<SpecModel> {
    let secs = sections(text)?;
    let mut b = Builder {
        spec: SpecModel::default(),
        places: Vec::new(),
        gens: Vec::new(),
        seen: BTreeMap::new(),
    };
    let has_model = secs.iter().any(|s| s.kind == "globalchar");
    if !has_model {
        b.spec.char_dim = abstract_dim(&secs);
    }
    for s in &secs {
        if !matches!(s.kind.as_str(), "place" | "globalchar") {
            b.finish_model(s.line)?;
        }
        match s.kind.as_str() {
            "place" => b.place(s)?,
            "globalchar" => b.globalchar(s)?,
            "group" => b.group(s)?,
            "simple" => b.simple(s)?,
            "param" => b.param(s)?,
            "profile" => b.profile(s)?,
            _ => unreachable!("section kinds are checked when read"),
        }
    }
    b.finish_model(secs.last().map_or(0, |s| s.line))?;
    if b.spec.model.is_none() && !b.places.is_empty() {
        return Err(spec_err(1, "places were declared without global characters"));
    }
    Ok(b.spec)
}
