//! Seifert surfaces in disc-band form, read from JSON.
//!
//! Each band stores the under-crossings met by its two push-offs as signed
//! generator letters. Bands are `gamma1..gammaG` and `beta1..betaG`; the own
//! generator of `gammaI` is `xI` and that of `betaI` is `yI`. Twists append the
//! own generator to the end of the push-off word.
//!
//! Everything here is algebraic: switching a crossing deletes its letter, and
//! a certificate says nothing about geometric triviality of the switched curves.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{partition_and_k, q_gamma};
use crate::commutator::decompose::Decomposer;
use crate::commutator::tree::Shape;
use crate::magnus::{lcs_member_with, MagnusError};
use crate::notation::{parse, print, ParseError};
use crate::word::{Alphabet, Letter, Word};

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("cannot read surface file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed surface JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("genus {genus} needs {want} bands, found {got}")]
    BandCount { genus: usize, want: usize, got: usize },
    #[error("unknown band role `{0}`")]
    UnknownRole(String),
    #[error("band role `{0}` appears twice")]
    DuplicateRole(String),
    #[error("crossing `{id}` names unknown generator `{gen}`")]
    UnknownGenerator { id: String, gen: String },
    #[error("crossing `{id}` has sign {sign}, expected 1 or -1")]
    BadSign { id: String, sign: i64 },
    #[error("crossing id `{0}` is used twice")]
    DuplicateId(String),
    #[error("no crossing with id `{0}`")]
    UnknownId(String),
    #[error("ordering must list each of 1..={genus} once, got {got:?}")]
    BadOrdering { genus: usize, got: Vec<usize> },
    #[error("band `{0}` has no commutator annotation")]
    MissingAnnotation(String),
    #[error("annotation of `{band}`: {reason}")]
    BadAnnotation { band: String, reason: String },
    #[error("ordering search is limited to genus 6, got {0}")]
    SearchTooLarge(usize),
    #[error(transparent)]
    Magnus(#[from] MagnusError),
}

/// On-disk form of a surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    pub genus: usize,
    pub bands: Vec<BandFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandFile {
    pub role: String,
    pub twists: i64,
    pub pushoff_plus: Vec<EventFile>,
    pub pushoff_minus: Vec<EventFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation: Option<Annotation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventFile {
    pub id: String,
    pub gen: String,
    pub sign: i64,
}

/// Commutator structure of a band's positive push-off, for the good-position
/// lint. `special` is the 1-based index of the letter whose canceling pair is
/// the special one; `hook` defaults to the band's own generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Annotation {
    pub commutator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub special: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hook: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Gamma(usize),
    Beta(usize),
}

impl Role {
    fn parse(s: &str, genus: usize) -> Option<Role> {
        let (ctor, rest): (fn(usize) -> Role, &str) = if let Some(r) = s.strip_prefix("gamma") {
            (Role::Gamma, r)
        } else {
            (Role::Beta, s.strip_prefix("beta")?)
        };
        if rest.starts_with('0') {
            return None;
        }
        let i: usize = rest.parse().ok()?;
        (1..=genus).contains(&i).then(|| ctor(i))
    }

    /// Index of the own generator in the surface alphabet.
    pub fn own_gen(self) -> usize {
        match self {
            Role::Gamma(i) => 2 * (i - 1),
            Role::Beta(i) => 2 * (i - 1) + 1,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Gamma(i) => write!(f, "gamma{i}"),
            Role::Beta(i) => write!(f, "beta{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PushSign {
    Plus,
    Minus,
}

impl fmt::Display for PushSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PushSign::Plus => "+",
            PushSign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingEvent {
    pub id: String,
    pub letter: Letter,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Band {
    pub role: Role,
    pub twists: i64,
    pub plus: Vec<CrossingEvent>,
    pub minus: Vec<CrossingEvent>,
    pub annotation: Option<Annotation>,
}

/// A validated surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandSurface {
    genus: usize,
    alphabet: Arc<Alphabet>,
    bands: BTreeMap<Role, Band>,
}

impl BandSurface {
    pub fn from_file(file: SurfaceFile) -> Result<Self, SurfaceError> {
        let genus = file.genus;
        if file.bands.len() != 2 * genus {
            return Err(SurfaceError::BandCount { genus, want: 2 * genus, got: file.bands.len() });
        }
        let alphabet = Alphabet::surface(genus);
        let mut ids = BTreeSet::new();
        let mut bands = BTreeMap::new();
        for b in file.bands {
            let role = Role::parse(&b.role, genus).ok_or_else(|| SurfaceError::UnknownRole(b.role.clone()))?;
            let mut events = |list: Vec<EventFile>| -> Result<Vec<CrossingEvent>, SurfaceError> {
                list.into_iter()
                    .map(|e| {
                        let gen = alphabet
                            .index_of(&e.gen)
                            .ok_or_else(|| SurfaceError::UnknownGenerator { id: e.id.clone(), gen: e.gen.clone() })?;
                        let sign = match e.sign {
                            1 => 1,
                            -1 => -1,
                            s => return Err(SurfaceError::BadSign { id: e.id, sign: s }),
                        };
                        if !ids.insert(e.id.clone()) {
                            return Err(SurfaceError::DuplicateId(e.id));
                        }
                        Ok(CrossingEvent { id: e.id, letter: Letter::with_sign(gen, sign) })
                    })
                    .collect()
            };
            let band = Band {
                role,
                twists: b.twists,
                plus: events(b.pushoff_plus)?,
                minus: events(b.pushoff_minus)?,
                annotation: b.annotation,
            };
            if bands.insert(role, band).is_some() {
                return Err(SurfaceError::DuplicateRole(b.role));
            }
        }
        Ok(BandSurface { genus, alphabet, bands })
    }

    pub fn from_json(text: &str) -> Result<Self, SurfaceError> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, SurfaceError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_file(&self) -> SurfaceFile {
        let events = |list: &[CrossingEvent]| {
            list.iter()
                .map(|e| EventFile {
                    id: e.id.clone(),
                    gen: self.alphabet.name(e.letter.gen).to_string(),
                    sign: e.letter.sign() as i64,
                })
                .collect()
        };
        SurfaceFile {
            genus: self.genus,
            bands: self
                .bands
                .values()
                .map(|b| BandFile {
                    role: b.role.to_string(),
                    twists: b.twists,
                    pushoff_plus: events(&b.plus),
                    pushoff_minus: events(&b.minus),
                    annotation: b.annotation.clone(),
                })
                .collect(),
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn band(&self, role: Role) -> Option<&Band> {
        self.bands.get(&role)
    }

    /// Letters of the stored crossings followed by the own generator to the
    /// power `twists`. Unreduced.
    pub fn pushoff_word(&self, role: Role, sign: PushSign) -> Option<Word> {
        let band = self.bands.get(&role)?;
        let events = match sign {
            PushSign::Plus => &band.plus,
            PushSign::Minus => &band.minus,
        };
        let mut letters: Vec<Letter> = events.iter().map(|e| e.letter).collect();
        let own = Letter::with_sign(role.own_gen(), if band.twists < 0 { -1 } else { 1 });
        letters.extend(std::iter::repeat(own).take(band.twists.unsigned_abs() as usize));
        Some(Word::new(self.alphabet.clone(), letters).expect("validated letters"))
    }

    /// Remove the crossings with the given ids from every push-off.
    pub fn switch_crossings(&self, ids: &BTreeSet<String>) -> Result<BandSurface, SurfaceError> {
        let known: BTreeSet<&String> =
            self.bands.values().flat_map(|b| b.plus.iter().chain(&b.minus)).map(|e| &e.id).collect();
        if let Some(bad) = ids.iter().find(|id| !known.contains(id)) {
            return Err(SurfaceError::UnknownId(bad.clone()));
        }
        let mut out = self.clone();
        for b in out.bands.values_mut() {
            b.plus.retain(|e| !ids.contains(&e.id));
            b.minus.retain(|e| !ids.contains(&e.id));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupCert {
    pub generators: Vec<String>,
    pub factors: Vec<usize>,
    pub k: usize,
}

/// One step of a certificate: the residual push-off after killing the dual
/// generators of earlier bands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepCert {
    pub band: String,
    pub killed: Vec<String>,
    pub sign: String,
    pub residual: String,
    pub magnus_cap: usize,
    pub factors: Vec<String>,
    /// False when decomposition gave up and the whole residual was taken as one group.
    pub decomposed: bool,
    pub groups: Vec<GroupCert>,
    pub l: usize,
    pub k: Option<usize>,
    pub q_gamma: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperbolicityCert {
    pub n: usize,
    pub genus: usize,
    pub ordering: Vec<String>,
    pub steps: Vec<StepCert>,
    pub caveat: &'static str,
}

pub const ALGEBRAIC_CAVEAT: &str =
    "membership is checked in the free group; switched curves need not be geometrically trivial";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refusal {
    pub n: usize,
    /// Absent when every ordering was tried.
    pub ordering: Option<Vec<String>>,
    pub step: Option<usize>,
    pub band: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum Hyperbolicity {
    Certified(HyperbolicityCert),
    Refused(Refusal),
}

/// Certify that the surface is `n`-hyperbolic along `ordering` (1-based
/// gamma indices), choosing the push-off sign per step.
pub fn check_n_hyperbolic(
    s: &BandSurface,
    ordering: &[usize],
    n: usize,
    decomposer: &Decomposer,
) -> Result<Hyperbolicity, SurfaceError> {
    let mut sorted = ordering.to_vec();
    sorted.sort_unstable();
    if sorted != (1..=s.genus).collect::<Vec<_>>() {
        return Err(SurfaceError::BadOrdering { genus: s.genus, got: ordering.to_vec() });
    }
    let limits = decomposer.limits();
    let names: Vec<String> = ordering.iter().map(|i| Role::Gamma(*i).to_string()).collect();
    let mut killed = BTreeSet::new();
    let mut steps = Vec::new();
    for (step, &i) in ordering.iter().enumerate() {
        let role = Role::Gamma(i);
        let (quotient, map) = s.alphabet.without(&killed);
        let mut chosen = None;
        for sign in [PushSign::Plus, PushSign::Minus] {
            let w = s.pushoff_word(role, sign).expect("validated bands").restrict_to_quotient(&killed);
            if lcs_member_with(&w, n + 1, limits)? {
                chosen = Some((sign, w));
                break;
            }
        }
        let Some((sign, w)) = chosen else {
            return Ok(Hyperbolicity::Refused(Refusal {
                n,
                ordering: Some(names),
                step: Some(step + 1),
                band: Some(role.to_string()),
                reason: format!("neither push-off of {role} lies in F^({}) of the quotient", n + 1),
            }));
        };
        let own = map[role.own_gen()].expect("own generator survives");
        let (factors, decomposed) = match decomposer.decompose(&w, n + 1) {
            Ok(d) => (d.factors, true),
            Err(_) => (Vec::new(), false),
        };
        let (groups, l, k) = if decomposed {
            let p = partition_and_k(&factors, own);
            let groups = p
                .groups
                .iter()
                .map(|g| GroupCert {
                    generators: g.generators.iter().map(|&x| quotient.name(x).to_string()).collect(),
                    factors: g.factors.clone(),
                    k: g.k,
                })
                .collect();
            (groups, p.l, p.k)
        } else {
            let gens: Vec<String> =
                w.generators().into_iter().filter(|&g| g != own).map(|g| quotient.name(g).to_string()).collect();
            let l = gens.len();
            let groups = if l > 0 { vec![GroupCert { generators: gens, factors: vec![], k: l }] } else { vec![] };
            (groups, l, (l > 0).then_some(l))
        };
        let q = match k {
            Some(k) => Some(q_gamma(n as u64, k as u64).expect("k is positive")),
            None => None,
        };
        steps.push(StepCert {
            band: role.to_string(),
            killed: killed.iter().map(|&g| s.alphabet.name(g).to_string()).collect(),
            sign: sign.to_string(),
            residual: print(&w),
            magnus_cap: n,
            factors: factors.iter().map(|t| t.to_text()).collect(),
            decomposed,
            groups,
            l,
            k,
            q_gamma: q,
        });
        killed.insert(Role::Gamma(i).own_gen());
        killed.insert(Role::Beta(i).own_gen());
    }
    Ok(Hyperbolicity::Certified(HyperbolicityCert {
        n,
        genus: s.genus,
        ordering: names,
        steps,
        caveat: ALGEBRAIC_CAVEAT,
    }))
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else { return false };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Try every ordering in lexicographic order; genus at most 6.
pub fn search_ordering(s: &BandSurface, n: usize, decomposer: &Decomposer) -> Result<Hyperbolicity, SurfaceError> {
    if s.genus > 6 {
        return Err(SurfaceError::SearchTooLarge(s.genus));
    }
    let mut ordering: Vec<usize> = (1..=s.genus).collect();
    loop {
        if let Hyperbolicity::Certified(c) = check_n_hyperbolic(s, &ordering, n, decomposer)? {
            return Ok(Hyperbolicity::Certified(c));
        }
        if !next_permutation(&mut ordering) {
            break;
        }
    }
    Ok(Hyperbolicity::Refused(Refusal {
        n,
        ordering: None,
        step: None,
        band: None,
        reason: "no ordering of the gamma bands is certified".into(),
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule")]
pub enum Violation {
    /// The hook generator reappears after the special canceling pair.
    #[serde(rename = "a")]
    HookAfterSpecial { position: usize, letter: String },
    /// More than two successive bracketed letters share a generator.
    #[serde(rename = "b")]
    LongRun { start: usize, len: usize, generator: String },
}

/// Check the annotated commutator of a band against the good-position rules.
/// Letters are numbered from 1, innermost first.
pub fn lint_good_position(s: &BandSurface, role: Role) -> Result<Vec<Violation>, SurfaceError> {
    let band = s.band(role).ok_or_else(|| SurfaceError::UnknownRole(role.to_string()))?;
    let ann = band.annotation.as_ref().ok_or_else(|| SurfaceError::MissingAnnotation(role.to_string()))?;
    let bad = |reason: String| SurfaceError::BadAnnotation { band: role.to_string(), reason };
    let expr = parse(&ann.commutator, &s.alphabet).map_err(|e: ParseError| bad(e.to_string()))?;
    let shape = Shape::from_expr(&expr).ok_or_else(|| bad("not a simple commutator".into()))?;
    let letters = shape.letters();
    let hook = match &ann.hook {
        Some(name) => s.alphabet.index_of(name).ok_or_else(|| bad(format!("unknown hook generator `{name}`")))?,
        None => role.own_gen(),
    };
    let mut out = Vec::new();
    if let Some(i) = ann.special {
        if i == 0 || i > letters.len() {
            return Err(bad(format!("special index {i} outside 1..={}", letters.len())));
        }
        for (j, l) in letters.iter().enumerate().skip(i) {
            if l.gen == hook {
                out.push(Violation::HookAfterSpecial {
                    position: j + 1,
                    letter: crate::notation::print_letter(&s.alphabet, *l),
                });
            }
        }
    }
    let mut start = 0;
    while start < letters.len() {
        let g = letters[start].gen;
        let len = letters[start..].iter().take_while(|l| l.gen == g).count();
        if len > 2 {
            out.push(Violation::LongRun { start: start + 1, len, generator: s.alphabet.name(g).to_string() });
        }
        start += len;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::flatten;

    fn band(role: &str, twists: i64, plus: &[(&str, &str, i64)]) -> BandFile {
        BandFile {
            role: role.into(),
            twists,
            pushoff_plus: plus.iter().map(|&(i, g, s)| EventFile { id: i.into(), gen: g.into(), sign: s }).collect(),
            pushoff_minus: vec![],
            annotation: None,
        }
    }

    fn genus_one(plus: &[(&str, &str, i64)], twists: i64) -> BandSurface {
        BandSurface::from_file(SurfaceFile { genus: 1, bands: vec![band("gamma1", twists, plus), band("beta1", 0, &[])] })
            .unwrap()
    }

    #[test]
    fn pushoff_words() {
        let s = genus_one(&[], 0);
        assert!(s.pushoff_word(Role::Gamma(1), PushSign::Plus).unwrap().is_empty());
        let s = genus_one(&[], 2);
        assert_eq!(s.pushoff_word(Role::Gamma(1), PushSign::Plus).unwrap().letters(), &[Letter::pos(0); 2]);
        let s = genus_one(&[("c", "y1", -1)], -1);
        assert_eq!(
            s.pushoff_word(Role::Gamma(1), PushSign::Plus).unwrap().letters(),
            &[Letter::neg(1), Letter::neg(0)]
        );
    }

    #[test]
    fn validation() {
        let bad = |f: SurfaceFile| BandSurface::from_file(f).unwrap_err().to_string();
        assert!(bad(SurfaceFile { genus: 1, bands: vec![band("gamma1", 0, &[])] }).contains("needs 2 bands"));
        assert!(bad(SurfaceFile { genus: 1, bands: vec![band("gamma1", 0, &[]), band("gamma1", 0, &[])] })
            .contains("twice"));
        assert!(bad(SurfaceFile { genus: 1, bands: vec![band("gamma2", 0, &[]), band("beta1", 0, &[])] })
            .contains("unknown band role"));
        assert!(bad(SurfaceFile {
            genus: 1,
            bands: vec![band("gamma1", 0, &[("a", "z", 1)]), band("beta1", 0, &[])]
        })
        .contains("unknown generator"));
        assert!(bad(SurfaceFile {
            genus: 1,
            bands: vec![band("gamma1", 0, &[("a", "x1", 2)]), band("beta1", 0, &[])]
        })
        .contains("sign 2"));
        assert!(bad(SurfaceFile {
            genus: 1,
            bands: vec![band("gamma1", 0, &[("a", "x1", 1)]), band("beta1", 0, &[("a", "y1", 1)])]
        })
        .contains("used twice"));
        let unknown_field = r#"{"genus":0,"bands":[],"extra":1}"#;
        assert!(BandSurface::from_json(unknown_field).is_err());
    }

    #[test]
    fn switching_deletes_letters() {
        let s = genus_one(&[("a", "x1", 1), ("b", "y1", 1), ("c", "y1", -1)], 0);
        let t = s.switch_crossings(&BTreeSet::from(["c".to_string()])).unwrap();
        let w = t.pushoff_word(Role::Gamma(1), PushSign::Plus).unwrap();
        assert_eq!(w.letters(), &[Letter::pos(0), Letter::pos(1)]);
        assert_eq!(s.switch_crossings(&BTreeSet::new()).unwrap(), s);
        assert!(matches!(
            s.switch_crossings(&BTreeSet::from(["zz".to_string()])),
            Err(SurfaceError::UnknownId(_))
        ));
        // one letter of the canceling pair y1 y1^-1 switched
        let w = s.switch_crossings(&BTreeSet::from(["b".to_string()])).unwrap();
        assert!(!w.pushoff_word(Role::Gamma(1), PushSign::Plus).unwrap().is_trivial());
    }

    #[test]
    fn genus_zero_is_vacuous() {
        let s = BandSurface::from_file(SurfaceFile { genus: 0, bands: vec![] }).unwrap();
        let d = Decomposer::default();
        for n in 0..5 {
            let Hyperbolicity::Certified(c) = check_n_hyperbolic(&s, &[], n, &d).unwrap() else { panic!() };
            assert!(c.steps.is_empty());
        }
    }

    #[test]
    fn killing_earlier_duals() {
        // gamma2 carries [x1, x2]
        let a = Alphabet::surface(2);
        let w = flatten(&parse("[x1, x2]", &a).unwrap(), a.clone());
        let plus: Vec<(String, String, i64)> = w
            .letters()
            .iter()
            .enumerate()
            .map(|(i, l)| (format!("e{i}"), a.name(l.gen).to_string(), l.sign() as i64))
            .collect();
        let plus: Vec<(&str, &str, i64)> = plus.iter().map(|(i, g, s)| (i.as_str(), g.as_str(), *s)).collect();
        let file = SurfaceFile {
            genus: 2,
            bands: vec![
                band("gamma1", 1, &[]),
                band("beta1", 0, &[]),
                BandFile { pushoff_minus: vec![], ..band("gamma2", 0, &plus) },
                band("beta2", 0, &[]),
            ],
        };
        let s = BandSurface::from_file(file).unwrap();
        let d = Decomposer::default();
        // gamma1 push-off is x1, never in F^(2)
        assert!(matches!(check_n_hyperbolic(&s, &[1, 2], 1, &d).unwrap(), Hyperbolicity::Refused(_)));
        // gamma2 first: [x1,x2] in F^(2); then gamma1 with x2,y2 killed is still x1
        let Hyperbolicity::Refused(r) = check_n_hyperbolic(&s, &[2, 1], 1, &d).unwrap() else { panic!() };
        assert_eq!(r.step, Some(2));
        assert!(check_n_hyperbolic(&s, &[1, 1], 1, &d).is_err());
    }

    #[test]
    fn lint_rules() {
        let mut s = genus_one(&[], 0);
        let set = |s: &mut BandSurface, c: &str, special: Option<usize>| {
            s.bands.get_mut(&Role::Gamma(1)).unwrap().annotation =
                Some(Annotation { commutator: c.into(), special, hook: None });
        };
        assert!(matches!(lint_good_position(&s, Role::Gamma(1)), Err(SurfaceError::MissingAnnotation(_))));
        set(&mut s, "[[x1,y1],y1^-1]", None);
        assert!(lint_good_position(&s, Role::Gamma(1)).unwrap().is_empty());
        set(&mut s, "[[[x1,y1],y1],y1]", None);
        assert_eq!(
            lint_good_position(&s, Role::Gamma(1)).unwrap(),
            vec![Violation::LongRun { start: 2, len: 3, generator: "y1".into() }]
        );
        set(&mut s, "[[[y1,x1],y1],x1^-1]", Some(2));
        assert_eq!(
            lint_good_position(&s, Role::Gamma(1)).unwrap(),
            vec![Violation::HookAfterSpecial { position: 4, letter: "x1^-1".into() }]
        );
        set(&mut s, "[[[y1,x1],y1],x1^-1]", Some(4));
        assert!(lint_good_position(&s, Role::Gamma(1)).unwrap().is_empty());
    }

    #[test]
    fn permutations() {
        let mut v = vec![1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 6);
        assert_eq!(v, vec![3, 2, 1]);
    }
}
