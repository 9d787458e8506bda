//! Complete sets of ABKPs and their conversion to and from MLV chains.
//!
//! A set is stored as groups `(Q_j, γ_j, θ_j)`. Group `j` is the key
//! polynomial `φ_j` of the chain (with `Q_0 = x − a`) together with its
//! value; `θ_j` is the continuous family spliced in right after `Q_j`, and
//! equals the family of the limit step `j + 1`. The last group carries no
//! family.

use crate::corpus::CorpusSpec;
use crate::error::{Error, Result};
use crate::family::ContinuousFamily;
use crate::invariants::is_complete_bounded;
use crate::json;
use crate::report::Report;
use crate::valuation::{Chain, DepthZero, LimitStep, OrdinaryStep, Step, FAMILY_CHECK_PREFIX};
use crate::{BaseValuation, QPoly, Value};

#[derive(Clone, Debug, PartialEq)]
pub struct AbkpGroup {
    pub q: QPoly,
    pub gamma: Value,
    pub theta: Option<ContinuousFamily>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AbkpSet {
    pub base: BaseValuation,
    pub groups: Vec<AbkpGroup>,
}

/// One element of a set in its generated order.
#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub poly: QPoly,
    pub gamma: Value,
    pub label: String,
}

impl AbkpSet {
    /// No group carries a family.
    pub fn is_inductive(&self) -> bool {
        self.groups.iter().all(|g| g.theta.is_none())
    }

    /// Flattened order `Q_0, θ_0[0..prefix], Q_1, …` with families cut to
    /// `prefix` members (or fewer if exhausted).
    pub fn members(&self, prefix: usize) -> Result<Vec<Member>> {
        let mut out = Vec::new();
        for (j, g) in self.groups.iter().enumerate() {
            out.push(Member {
                poly: g.q.clone(),
                gamma: g.gamma.clone(),
                label: format!("Q_{j}"),
            });
            if let Some(fam) = &g.theta {
                let n = fam.explicit_len().map_or(prefix, |len| len.min(prefix));
                for i in 0..n {
                    let item = fam.item(i)?;
                    out.push(Member {
                        poly: item.chi,
                        gamma: item.gamma,
                        label: format!("theta_{j}[{i}]"),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Shape checks that need no valuation: `Q_0` linear, monic members,
    /// growing degrees, family degrees, strictly increasing assigned values.
    pub fn check_shape(&self, prefix: usize) -> Report {
        let mut report = Report::new("check_shape").fingerprint("family_prefix", prefix);
        let Some(first) = self.groups.first() else {
            report.push("empty", "a complete set has at least one element", "set");
            return report;
        };
        if first.q.deg() != 1 || !first.q.is_monic() {
            report.push("q0-degree", "(ii) Q_0 degree one", "Q_0");
        }
        for (j, g) in self.groups.iter().enumerate() {
            let loc = format!("Q_{j}");
            if !g.q.is_monic() {
                report.push("non-monic", format!("{} is not monic", g.q), &loc);
            }
            if j > 0 && g.q.deg() <= self.groups[j - 1].q.deg() {
                report.push(
                    "degree-growth",
                    "degree must grow between consecutive groups",
                    &loc,
                );
            }
            if let Some(fam) = &g.theta {
                if j + 1 == self.groups.len() {
                    report.push(
                        "no-last-element",
                        "(i) the last group carries no family",
                        &loc,
                    );
                }
                if fam.base_prime().is_some_and(|p| p != self.base.p()) {
                    report.push("family-base", "family built over a different prime", &loc);
                }
                match fam.degree() {
                    Ok(d) if d != g.q.deg() => report.push(
                        "family-degree",
                        format!("family degree {d} differs from deg Q = {}", g.q.deg()),
                        &loc,
                    ),
                    Ok(_) => {}
                    Err(e) => report.push_error("family-error", e.to_string(), &loc),
                }
            }
        }
        match self.members(prefix) {
            Ok(members) => {
                for pair in members.windows(2) {
                    if pair[1].gamma <= pair[0].gamma {
                        report.push(
                            "gamma-order",
                            format!("gamma {} not above {}", pair[1].gamma, pair[0].gamma),
                            &pair[1].label,
                        );
                    }
                }
            }
            Err(e) => report.push_error("family-error", e.to_string(), "set"),
        }
        report
    }
}

/// Builds the MLV chain whose key polynomials and values are those of
/// the set, with one limit step per family.
pub fn chain_from_abkps(lambda: &AbkpSet) -> Result<Chain> {
    let shape = lambda.check_shape(FAMILY_CHECK_PREFIX);
    if !shape.is_pass() {
        return Err(Error::Structure(Box::new(shape)));
    }
    let q0 = &lambda.groups[0];
    let root = DepthZero::new(-q0.q.coeff(0), q0.gamma.clone());
    let mut chain = Chain::new(lambda.base.clone(), root);
    for pair in lambda.groups.windows(2) {
        let (prev, next) = (&pair[0], &pair[1]);
        let step = match &prev.theta {
            None => Step::Ordinary(OrdinaryStep {
                phi: next.q.clone(),
                gamma: next.gamma.clone(),
            }),
            Some(family) => Step::Limit(LimitStep {
                family: family.clone(),
                phi: next.q.clone(),
                gamma: next.gamma.clone(),
            }),
        };
        chain = chain.push(step);
    }
    chain.validated()
}

/// Reads the complete set off a valid chain.
pub fn abkps_from_chain(w: &Chain) -> Result<AbkpSet> {
    let report = w.validate();
    if !report.is_pass() {
        return Err(Error::Structure(Box::new(report)));
    }
    let groups = (0..=w.len())
        .map(|j| AbkpGroup {
            q: w.key_polynomial(j),
            gamma: w.gamma(j),
            theta: w.steps().get(j).and_then(|s| s.family().cloned()),
        })
        .collect();
    Ok(AbkpSet {
        base: w.base().clone(),
        groups,
    })
}

#[derive(Clone, Copy, Debug)]
pub enum Start<'a> {
    Chain(&'a Chain),
    Set(&'a AbkpSet),
}

/// Converts both ways and checks that the result is the identity in
/// canonical JSON, that both chains agree on the corpus, that the derived
/// set is complete on the corpus, and that inductiveness is preserved.
pub fn roundtrip_check(start: Start<'_>, corpus: &CorpusSpec, budget: usize) -> Report {
    let mut report = Report::new("roundtrip")
        .fingerprint("corpus", corpus.fingerprint())
        .fingerprint("budget", budget);
    let converted = match start {
        Start::Chain(c) => abkps_from_chain(c).and_then(|set| {
            let back = chain_from_abkps(&set)?;
            if json::chain_to_json(c) != json::chain_to_json(&back) {
                report.push(
                    "not-inverse",
                    "chain -> set -> chain is not the identity",
                    "chain",
                );
            }
            Ok((c.clone(), back, set))
        }),
        Start::Set(s) => chain_from_abkps(s).and_then(|chain| {
            let back = abkps_from_chain(&chain)?;
            if json::abkp_to_json(s) != json::abkp_to_json(&back) {
                report.push(
                    "not-inverse",
                    "set -> chain -> set is not the identity",
                    "set",
                );
            }
            let again = chain_from_abkps(&back)?;
            Ok((chain, again, back))
        }),
    };
    let (chain, back, set) = match converted {
        Ok(t) => t,
        Err(Error::Structure(inner)) => {
            for f in &inner.findings {
                report.push(&f.code, &f.message, &f.location);
            }
            return report;
        }
        Err(e) => {
            report.push_error("conversion", e.to_string(), "input");
            return report;
        }
    };
    let chain = chain.with_budget(budget);
    let back = back.with_budget(budget);
    for f in corpus.polys() {
        match (chain.eval(&f), back.eval(&f)) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(a), Ok(b)) => report.push("eval-mismatch", format!("{a} vs {b}"), f.to_string()),
            (Err(e), _) | (_, Err(e)) => {
                report.push_error("evaluation", e.to_string(), f.to_string())
            }
        }
    }
    match is_complete_bounded(&set, &chain, corpus, budget) {
        Ok(r) => report.absorb(r),
        Err(e) => report.push_error("completeness", e.to_string(), "set"),
    }
    if chain.is_inductive() != set.is_inductive() {
        report.push("inductive-mismatch", "inductive flag not preserved", "set");
    }
    report.set_info("inductive", chain.is_inductive());
    report
}
