//! JSON documents for chains, families, complete sets and corpora.
//!
//! Polynomials, rationals and values travel as strings in their canonical
//! text forms, so serializing a parsed document yields canonical JSON.

use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::convert::{AbkpGroup, AbkpSet};
use crate::corpus::{CorpusSource, CorpusSpec};
use crate::error::{Error, Result};
use crate::family::{ContinuousFamily, FamilyItem, FamilySource};
use crate::rational::{format_rational, parse_rational};
use crate::valuation::{Chain, DepthZero, LimitStep, OrdinaryStep, Step};
use crate::{BaseValuation, QPoly, Rational, Value};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainDoc {
    p: u64,
    root: RootDoc,
    steps: Vec<StepDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RootDoc {
    center: String,
    delta: String,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum StepDoc {
    Ordinary {
        phi: String,
        gamma: String,
    },
    Limit {
        family: FamilyDoc,
        phi: String,
        gamma: String,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum FamilyDoc {
    HenselSqrt { p: u64, u: String },
    Explicit { items: Vec<ItemDoc> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemDoc {
    chi: String,
    gamma: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AbkpDoc {
    p: u64,
    groups: Vec<GroupDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    q: String,
    gamma: String,
    theta: Option<FamilyDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CorpusDoc {
    max_degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    random: Option<RandomDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RandomDoc {
    count: usize,
    height: u64,
    seed: u64,
}

/// Parses a string field, prefixing any error with where it came from.
fn field<T: FromStr<Err = Error>>(path: &str, text: &str) -> Result<T> {
    text.parse().map_err(|e| match e {
        Error::Parse { pos, msg } => Error::Parse {
            pos,
            msg: format!("{path}: {msg}"),
        },
        Error::Invalid(msg) => Error::Invalid(format!("{path}: {msg}")),
        other => other,
    })
}

fn rational(path: &str, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| match e {
        Error::Parse { pos, msg } => Error::Parse {
            pos,
            msg: format!("{path}: {msg}"),
        },
        other => other,
    })
}

fn prime_u64(base: &BaseValuation) -> u64 {
    base.p().to_u64().expect("base primes fit in u64")
}

fn family_from_doc(doc: FamilyDoc, path: &str) -> Result<ContinuousFamily> {
    match doc {
        FamilyDoc::HenselSqrt { p, u } => ContinuousFamily::hensel_sqrt(
            BaseValuation::new(p)?,
            rational(&format!("{path}.u"), &u)?,
        ),
        FamilyDoc::Explicit { items } => {
            let items = items
                .into_iter()
                .enumerate()
                .map(|(i, it)| {
                    Ok(FamilyItem {
                        chi: field(&format!("{path}.items[{i}].chi"), &it.chi)?,
                        gamma: field(&format!("{path}.items[{i}].gamma"), &it.gamma)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            ContinuousFamily::explicit(items)
        }
    }
}

fn family_to_doc(family: &ContinuousFamily) -> FamilyDoc {
    match family.source() {
        FamilySource::HenselSqrt { base, u } => FamilyDoc::HenselSqrt {
            p: prime_u64(base),
            u: format_rational(u),
        },
        FamilySource::Explicit(items) => FamilyDoc::Explicit {
            items: items
                .iter()
                .map(|it| ItemDoc {
                    chi: it.chi.to_string(),
                    gamma: it.gamma.to_string(),
                })
                .collect(),
        },
    }
}

fn pretty<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

pub fn chain_from_json(text: &str) -> Result<Chain> {
    let doc: ChainDoc = serde_json::from_str(text)?;
    let base = BaseValuation::new(doc.p)?;
    let root = DepthZero::new(
        rational("root.center", &doc.root.center)?,
        field("root.delta", &doc.root.delta)?,
    );
    let mut chain = Chain::new(base, root);
    for (k, step) in doc.steps.into_iter().enumerate() {
        let path = format!("steps[{k}]");
        let step = match step {
            StepDoc::Ordinary { phi, gamma } => Step::Ordinary(OrdinaryStep {
                phi: field::<QPoly>(&format!("{path}.phi"), &phi)?,
                gamma: field::<Value>(&format!("{path}.gamma"), &gamma)?,
            }),
            StepDoc::Limit { family, phi, gamma } => Step::Limit(LimitStep {
                family: family_from_doc(family, &format!("{path}.family"))?,
                phi: field(&format!("{path}.phi"), &phi)?,
                gamma: field(&format!("{path}.gamma"), &gamma)?,
            }),
        };
        chain = chain.push(step);
    }
    Ok(chain)
}

pub fn chain_to_json(chain: &Chain) -> String {
    let doc = ChainDoc {
        p: prime_u64(chain.base()),
        root: RootDoc {
            center: format_rational(&chain.root().center),
            delta: chain.root().delta.to_string(),
        },
        steps: chain
            .steps()
            .iter()
            .map(|s| match s {
                Step::Ordinary(o) => StepDoc::Ordinary {
                    phi: o.phi.to_string(),
                    gamma: o.gamma.to_string(),
                },
                Step::Limit(l) => StepDoc::Limit {
                    family: family_to_doc(&l.family),
                    phi: l.phi.to_string(),
                    gamma: l.gamma.to_string(),
                },
            })
            .collect(),
    };
    pretty(&doc)
}

pub fn family_from_json(text: &str) -> Result<ContinuousFamily> {
    family_from_doc(serde_json::from_str(text)?, "family")
}

pub fn family_to_json(family: &ContinuousFamily) -> String {
    pretty(&family_to_doc(family))
}

pub fn abkp_from_json(text: &str) -> Result<AbkpSet> {
    let doc: AbkpDoc = serde_json::from_str(text)?;
    let base = BaseValuation::new(doc.p)?;
    let groups = doc
        .groups
        .into_iter()
        .enumerate()
        .map(|(j, g)| {
            let path = format!("groups[{j}]");
            Ok(AbkpGroup {
                q: field(&format!("{path}.q"), &g.q)?,
                gamma: field(&format!("{path}.gamma"), &g.gamma)?,
                theta: g
                    .theta
                    .map(|t| family_from_doc(t, &format!("{path}.theta")))
                    .transpose()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AbkpSet { base, groups })
}

pub fn abkp_to_json(set: &AbkpSet) -> String {
    let doc = AbkpDoc {
        p: prime_u64(&set.base),
        groups: set
            .groups
            .iter()
            .map(|g| GroupDoc {
                q: g.q.to_string(),
                gamma: g.gamma.to_string(),
                theta: g.theta.as_ref().map(family_to_doc),
            })
            .collect(),
    };
    pretty(&doc)
}

pub fn corpus_from_json(text: &str) -> Result<CorpusSpec> {
    let doc: CorpusDoc = serde_json::from_str(text)?;
    match (doc.coeffs, doc.random) {
        (Some(coeffs), None) => {
            let coeffs = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| rational(&format!("coeffs[{i}]"), c))
                .collect::<Result<Vec<_>>>()?;
            CorpusSpec::exhaustive(doc.max_degree, coeffs)
        }
        (None, Some(r)) => CorpusSpec::random(doc.max_degree, r.count, r.height, r.seed),
        _ => Err(Error::invalid(
            "corpus needs exactly one of coeffs and random",
        )),
    }
}

pub fn corpus_to_json(corpus: &CorpusSpec) -> String {
    let (coeffs, random) = match &corpus.source {
        CorpusSource::Coeffs(c) => (Some(c.iter().map(format_rational).collect()), None),
        CorpusSource::Random {
            count,
            height,
            seed,
        } => (
            None,
            Some(RandomDoc {
                count: *count,
                height: *height,
                seed: *seed,
            }),
        ),
    };
    pretty(&CorpusDoc {
        max_degree: corpus.max_degree,
        coeffs,
        random,
    })
}
