//! The on-disk workspace: plain serde types mirroring the JSON document.
//!
//! Structures refer to each other by name. Basis elements are referred to by
//! label, maps are lists of sparse entries.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

/// A coefficient, written as a string (`"3/4"`, `"-2"`) or a bare integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    pub fn text(&self) -> String {
        match self {
            Coeff::Int(n) => n.to_string(),
            Coeff::Text(s) => s.clone(),
        }
    }
}

/// A basis element; `tgt` is present for bimodules and absent for right modules.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenData {
    pub label: String,
    pub deg: i64,
    #[serde(default)]
    pub src: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tgt: Option<usize>,
}

/// `[[input labels], output label, coefficient]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapEntry(pub Vec<String>, pub String, pub Coeff);

/// `[row label, column label, coefficient]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatEntry(pub String, pub String, pub Coeff);

/// `[label, coefficient]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VecEntry(pub String, pub Coeff);

/// `[left label, right label, coefficient]` for a term `left (x) right`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairEntry(pub String, pub String, pub Coeff);

/// A family of maps indexed by arity, keyed by the arity as a string.
pub type Family = BTreeMap<String, Vec<MapEntry>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraData {
    pub bound: usize,
    pub basis: Vec<GenData>,
    #[serde(default)]
    pub ops: Family,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleData {
    pub algebra: String,
    pub bound: usize,
    pub basis: Vec<GenData>,
    #[serde(default)]
    pub ops: Family,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgMorphismData {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub comps: Family,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgHomotopyData {
    pub f: String,
    pub g: String,
    #[serde(default)]
    pub comps: Family,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModMorphismData {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub degree: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upto: Option<usize>,
    #[serde(default)]
    pub comps: Family,
}

/// A homotopy between module morphisms; `upto` caps the checked arity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModHomotopyData {
    pub f: String,
    pub g: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upto: Option<usize>,
    #[serde(default)]
    pub comps: Family,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarRef {
    pub algebra: String,
    pub level: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BocsGenData {
    pub label: String,
    pub deg: i64,
    #[serde(default)]
    pub src: usize,
    #[serde(default)]
    pub tgt: usize,
    pub layer: usize,
}

/// Either a bar construction (`bar`) or explicit data, or both, in which
/// case the explicit data must agree with the construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BocsData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bar: Option<BarRef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<BocsGenData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub comult: BTreeMap<String, Vec<PairEntry>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub delta: BTreeMap<String, Vec<VecEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BocsMapData {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub degree: i64,
    #[serde(default)]
    pub map: BTreeMap<String, Vec<VecEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BocsHomotopyData {
    pub phi: String,
    pub psi: String,
    #[serde(default)]
    pub map: BTreeMap<String, Vec<VecEntry>>,
}

/// The two components of a morphism of modules over a bocs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Components {
    #[serde(default)]
    pub f0: Vec<MatEntry>,
    #[serde(default)]
    pub f1: BTreeMap<String, Vec<MatEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistedData {
    pub bocs: String,
    pub basis: Vec<GenData>,
    #[serde(default)]
    pub u: Components,
}

/// `source` and `target` name twisted modules or plain spaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GMorphData {
    pub bocs: String,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub degree: i64,
    #[serde(default)]
    pub f0: Vec<MatEntry>,
    #[serde(default)]
    pub f1: BTreeMap<String, Vec<MatEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistedHomotopyData {
    pub f: String,
    pub g: String,
    #[serde(default)]
    pub f0: Vec<MatEntry>,
    #[serde(default)]
    pub f1: BTreeMap<String, Vec<MatEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub format: u32,
    #[serde(default = "default_field")]
    pub field: String,
    #[serde(default = "default_idempotents")]
    pub idempotents: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub algebras: BTreeMap<String, AlgebraData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub alg_morphisms: BTreeMap<String, AlgMorphismData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub alg_homotopies: BTreeMap<String, AlgHomotopyData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub mod_morphisms: BTreeMap<String, ModMorphismData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub mod_homotopies: BTreeMap<String, ModHomotopyData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bocses: BTreeMap<String, BocsData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bocs_maps: BTreeMap<String, BocsMapData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bocs_homotopies: BTreeMap<String, BocsHomotopyData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub spaces: BTreeMap<String, Vec<GenData>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub twisted: BTreeMap<String, TwistedData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub gmorphs: BTreeMap<String, GMorphData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub twisted_homotopies: BTreeMap<String, TwistedHomotopyData>,
}

fn default_field() -> String {
    "q".into()
}

fn default_idempotents() -> usize {
    1
}

impl Document {
    pub fn empty(field: &str, idempotents: usize) -> Document {
        Document {
            format: FORMAT_VERSION,
            field: field.into(),
            idempotents,
            algebras: BTreeMap::new(),
            modules: BTreeMap::new(),
            alg_morphisms: BTreeMap::new(),
            alg_homotopies: BTreeMap::new(),
            mod_morphisms: BTreeMap::new(),
            mod_homotopies: BTreeMap::new(),
            bocses: BTreeMap::new(),
            bocs_maps: BTreeMap::new(),
            bocs_homotopies: BTreeMap::new(),
            spaces: BTreeMap::new(),
            twisted: BTreeMap::new(),
            gmorphs: BTreeMap::new(),
            twisted_homotopies: BTreeMap::new(),
        }
    }

    /// Every name in use, across all sections.
    pub fn names(&self) -> Vec<&str> {
        let mut v: Vec<&str> = Vec::new();
        v.extend(self.algebras.keys().map(String::as_str));
        v.extend(self.modules.keys().map(String::as_str));
        v.extend(self.alg_morphisms.keys().map(String::as_str));
        v.extend(self.alg_homotopies.keys().map(String::as_str));
        v.extend(self.mod_morphisms.keys().map(String::as_str));
        v.extend(self.mod_homotopies.keys().map(String::as_str));
        v.extend(self.bocses.keys().map(String::as_str));
        v.extend(self.bocs_maps.keys().map(String::as_str));
        v.extend(self.bocs_homotopies.keys().map(String::as_str));
        v.extend(self.spaces.keys().map(String::as_str));
        v.extend(self.twisted.keys().map(String::as_str));
        v.extend(self.gmorphs.keys().map(String::as_str));
        v.extend(self.twisted_homotopies.keys().map(String::as_str));
        v
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}
