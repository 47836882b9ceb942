//! The identity registry: a versioned TOML file of named identities.
//!
//! See `registry/identities.toml` for the format. The bundled copy is
//! compiled in; any other file can be loaded at run time.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dsl::{parse, Expr};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

const BUNDLED: &str = include_str!("../registry/identities.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Core,
    Classical,
    Background,
}

impl Tier {
    pub const ALL: [Tier; 3] = [Tier::Core, Tier::Classical, Tier::Background];

    pub fn name(self) -> &'static str {
        match self {
            Tier::Core => "core",
            Tier::Classical => "classical",
            Tier::Background => "background",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Tier::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown tier {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRecord {
    pub id: String,
    pub tier: Tier,
    pub anchor: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub order: i64,
    /// Present for congruence records: `lhs ≡ rhs (mod modulus)` coefficientwise.
    pub modulus: Option<u64>,
}

impl IdentityRecord {
    pub fn new(id: impl Into<String>, tier: Tier, lhs: Expr, rhs: Expr, order: i64) -> Self {
        IdentityRecord { id: id.into(), tier, anchor: String::new(), lhs, rhs, order, modulus: None }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    version: u32,
    #[serde(default)]
    defs: BTreeMap<String, String>,
    #[serde(default)]
    identity: Vec<RawRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    id: String,
    tier: Tier,
    anchor: String,
    lhs: String,
    rhs: String,
    order: i64,
    modulus: Option<u64>,
}

/// Immutable once loaded.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    records: Vec<IdentityRecord>,
    defs: BTreeMap<String, Expr>,
}

impl Registry {
    pub fn bundled() -> Self {
        Self::from_toml_str(BUNDLED).expect("bundled registry is valid")
    }

    pub fn bundled_source() -> &'static str {
        BUNDLED
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Registry(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawFile = toml::from_str(text).map_err(|e| Error::Registry(e.to_string()))?;
        if raw.version != FORMAT_VERSION {
            return Err(Error::Registry(format!(
                "unsupported registry version {} (expected {FORMAT_VERSION})",
                raw.version
            )));
        }
        let expander = Expander { defs: &raw.defs };
        let mut defs = BTreeMap::new();
        for name in raw.defs.keys() {
            let src = expander.expand(&format!("{{{name}}}"), &mut Vec::new())?;
            let e = parse(&src).map_err(|e| Error::Registry(format!("def {name}: {e}")))?;
            defs.insert(name.clone(), e);
        }
        let mut seen = BTreeSet::new();
        let mut records = Vec::with_capacity(raw.identity.len());
        for r in raw.identity {
            if !seen.insert(r.id.clone()) {
                return Err(Error::Registry(format!("duplicate id {:?}", r.id)));
            }
            if r.order < 0 {
                return Err(Error::Registry(format!("{}: order must be nonnegative", r.id)));
            }
            if r.modulus.is_some_and(|m| m < 2) {
                return Err(Error::Registry(format!("{}: modulus must be at least 2", r.id)));
            }
            let side = |label: &str, src: &str| -> Result<Expr> {
                let text = expander.expand(src, &mut Vec::new())?;
                parse(&text).map_err(|e| Error::Registry(format!("{} {label}: {e}", r.id)))
            };
            records.push(IdentityRecord {
                lhs: side("lhs", &r.lhs)?,
                rhs: side("rhs", &r.rhs)?,
                id: r.id,
                tier: r.tier,
                anchor: r.anchor,
                order: r.order,
                modulus: r.modulus,
            });
        }
        records.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(Registry { records, defs })
    }

    /// Records sorted by id.
    pub fn records(&self) -> &[IdentityRecord] {
        &self.records
    }

    pub fn get(&self, id: &str) -> Option<&IdentityRecord> {
        self.records.binary_search_by(|r| r.id.as_str().cmp(id)).ok().map(|i| &self.records[i])
    }

    pub fn def(&self, name: &str) -> Option<&Expr> {
        self.defs.get(name)
    }

    pub fn def_names(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(String::as_str)
    }

    pub fn by_tier(&self, tier: Option<Tier>) -> impl Iterator<Item = &IdentityRecord> {
        self.records.iter().filter(move |r| tier.is_none_or(|t| r.tier == t))
    }
}

struct Expander<'a> {
    defs: &'a BTreeMap<String, String>,
}

impl Expander<'_> {
    fn expand(&self, src: &str, stack: &mut Vec<String>) -> Result<String> {
        let mut out = String::with_capacity(src.len());
        let mut rest = src;
        while let Some(open) = rest.find('{') {
            out.push_str(&rest[..open]);
            let after = &rest[open + 1..];
            let close = after
                .find('}')
                .ok_or_else(|| Error::Registry(format!("unclosed '{{' in {src:?}")))?;
            let name = &after[..close];
            let body = self
                .defs
                .get(name)
                .ok_or_else(|| Error::Registry(format!("undefined name {{{name}}}")))?;
            if stack.iter().any(|s| s == name) {
                return Err(Error::Registry(format!("definition cycle through {{{name}}}")));
            }
            stack.push(name.to_string());
            let inner = self.expand(body, stack)?;
            stack.pop();
            out.push('(');
            out.push_str(inner.trim());
            out.push(')');
            rest = &after[close + 1..];
        }
        out.push_str(rest);
        Ok(out)
    }
}
