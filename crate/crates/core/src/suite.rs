//! The full verification suite behind `valforge verify`.
//!
//! Every check runs over the configured corpus and reports evidence only.
//! Subreports are merged into one report whose `info` records the status
//! of each check under `check.<name>`.

use rayon::prelude::*;

use crate::convert::{abkps_from_chain, chain_from_abkps, roundtrip_check, AbkpSet, Start};
use crate::corpus::{random_polys, CorpusSpec};
use crate::error::{Error, Result};
use crate::invariants::{epsilon, in_phi, is_abkp_bounded, validate_structure};
use crate::report::{Report, Status};
use crate::valuation::{augment_value, Chain, Step, TruncationView, Valuator};
use crate::{QPoly, Value, DEFAULT_BUDGET};

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub corpus: CorpusSpec,
    pub budget: usize,
    pub seed: u64,
    /// Random pairs for the valuation axioms.
    pub pairs: usize,
    pub pair_degree: usize,
    pub pair_height: u64,
    /// Family members taken into pairwise checks.
    pub family_prefix: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            corpus: CorpusSpec::range(4, -2, 2).expect("nonempty range"),
            budget: DEFAULT_BUDGET,
            seed: 0,
            pairs: 500,
            pair_degree: 6,
            pair_height: 100,
            family_prefix: 6,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Subject {
    Chain(Chain),
    Set(AbkpSet),
}

/// Runs every check applicable to the subject. Invalid input is an
/// `Err(Error::Structure)` carrying the validation report.
pub fn verify(subject: &Subject, cfg: &SuiteConfig) -> Result<Report> {
    let (chain, set) = match subject {
        Subject::Chain(c) => {
            let c = c.clone().with_budget(cfg.budget).validated()?;
            let set = abkps_from_chain(&c)?;
            (c, set)
        }
        Subject::Set(s) => (chain_from_abkps(s)?.with_budget(cfg.budget), s.clone()),
    };
    let mut report = Report::new("verify")
        .fingerprint("corpus", cfg.corpus.fingerprint())
        .fingerprint("seed", cfg.seed)
        .fingerprint("budget", cfg.budget)
        .fingerprint(
            "pairs",
            format!(
                "{}x(deg<={},height<={})",
                cfg.pairs, cfg.pair_degree, cfg.pair_height
            ),
        )
        .fingerprint("family_prefix", cfg.family_prefix);
    report.note("corpus-bounded evidence, not proofs");
    report.set_info("classification", chain.classify());
    report.set_info("inductive", chain.is_inductive());

    let polys = cfg.corpus.polys();
    let pairs = random_pairs(cfg.pair_degree, cfg.pairs, cfg.pair_height, cfg.seed);
    record(
        &mut report,
        "valuation_axioms",
        valuation_axioms(&chain, &pairs)?,
    );
    record(&mut report, "key_steps", key_steps(&chain, &cfg.corpus)?);
    record(
        &mut report,
        "sandwich",
        sandwich(&chain, &set, &polys, cfg.family_prefix)?,
    );
    record(
        &mut report,
        "truncation_identities",
        truncation_identities(&chain, &polys, cfg.family_prefix)?,
    );
    let start = match subject {
        Subject::Chain(_) => Start::Chain(&chain),
        Subject::Set(s) => Start::Set(s),
    };
    record(
        &mut report,
        "roundtrip",
        roundtrip_check(start, &cfg.corpus, cfg.budget),
    );
    record(
        &mut report,
        "structure",
        validate_structure(&set, &chain, cfg.family_prefix),
    );
    Ok(report)
}

fn record(report: &mut Report, name: &str, sub: Report) {
    let status = match sub.status {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Error => "error",
    };
    report.set_info(&format!("check.{name}"), status);
    for (k, v) in &sub.info {
        report.set_info(&format!("{name}.{k}"), v);
    }
    report.absorb(sub);
}

/// `count` pairs of seeded random polynomials.
pub fn random_pairs(
    max_degree: usize,
    count: usize,
    height: u64,
    seed: u64,
) -> Vec<(QPoly, QPoly)> {
    let polys = random_polys(max_degree, 2 * count, height, seed);
    polys
        .chunks_exact(2)
        .map(|c| (c[0].clone(), c[1].clone()))
        .collect()
}

/// Multiplicativity, the ultrametric inequality, and equality in it when
/// the two values differ.
pub fn valuation_axioms<W: Valuator + Sync>(w: &W, pairs: &[(QPoly, QPoly)]) -> Result<Report> {
    let mut report = Report::new("valuation_axioms").fingerprint("pairs", pairs.len());
    let outcomes: Vec<Result<Vec<(&'static str, String)>>> = pairs
        .par_iter()
        .map(|(f, g)| {
            let (wf, wg) = (w.value(f)?, w.value(g)?);
            let mut bad = Vec::new();
            let prod = w.value(&(f * g))?;
            if prod != &wf + &wg {
                bad.push((
                    "multiplicativity",
                    format!("w(fg) = {prod}, w(f) + w(g) = {}", &wf + &wg),
                ));
            }
            let sum = w.value(&(f + g))?;
            let floor = wf.clone().min(wg.clone());
            if sum < floor {
                bad.push(("ultrametric", format!("w(f+g) = {sum} < {floor}")));
            } else if wf != wg && sum != floor {
                bad.push((
                    "ultrametric-equality",
                    format!("w(f+g) = {sum} but values {wf} != {wg}"),
                ));
            }
            Ok(bad)
        })
        .collect();
    for ((f, g), outcome) in pairs.iter().zip(outcomes) {
        for (code, msg) in outcome? {
            report.push(code, msg, format!("f = {f}, g = {g}"));
        }
    }
    Ok(report)
}

/// Per chain step `w_j → w_{j+1}`: `ε(φ_j) < ε(φ_{j+1})`, `φ_{j+1}` is an
/// ABKP on the corpus below its degree, `φ_{j+1} ∈ Φ(w_j, w)`, and
/// `w_j ≤ w` with equality below `deg φ_{j+1}` for ordinary steps.
pub fn key_steps(w: &Chain, corpus: &CorpusSpec) -> Result<Report> {
    let mut report = Report::new("key_steps").fingerprint("corpus", corpus.fingerprint());
    let polys = corpus.polys();
    for (j, step) in w.steps().iter().enumerate() {
        let loc = format!("step {}", j + 1);
        let (lower, upper) = (w.key_polynomial(j), step.phi().clone());
        let (el, eu) = (epsilon(w, &lower)?, epsilon(w, &upper)?);
        if el >= eu {
            report.push(
                "epsilon-order",
                format!("epsilon {el} of {lower} not below {eu} of {upper}"),
                &loc,
            );
        }
        let sub = is_abkp_bounded(&upper, w, &corpus.with_max_degree(upper.deg() - 1))?;
        for f in sub.findings {
            report.push(&f.code, f.message, format!("{loc}: {}", f.location));
        }
        let prev = w.level(j);
        if !in_phi(&upper, &prev, w, upper.deg())? {
            report.push(
                "not-in-phi",
                format!("{upper} is not undervalued by w_{j}"),
                &loc,
            );
        }
        let ordinary = matches!(step, Step::Ordinary(_));
        let outcomes: Vec<Result<Option<(&'static str, String)>>> = polys
            .par_iter()
            .map(|f| {
                let (a, b) = (prev.value(f)?, w.eval(f)?);
                Ok(if a > b {
                    Some(("not-below", format!("w_{j}(f) = {a} exceeds w(f) = {b}")))
                } else if ordinary && f.deg() < upper.deg() && a != b {
                    Some((
                        "phi-minimality",
                        format!("w_{j}(f) = {a} differs from w(f) = {b} below deg phi"),
                    ))
                } else {
                    None
                })
            })
            .collect();
        for (f, outcome) in polys.iter().zip(outcomes) {
            if let Some((code, msg)) = outcome? {
                report.push(code, msg, format!("{loc}: {f}"));
            }
        }
    }
    Ok(report)
}

/// Pairwise truncation comparisons over the flattened members `Q < Q'`:
///
/// * `w_Q(Q') < w(Q')` whenever `ε(Q) < ε(Q')`;
/// * for equal degrees, `w(Q) < w(Q')`, `w_Q(Q') < w(Q')` and
///   `ε(Q) < ε(Q')` agree;
/// * `w_Q(f) ≤ w_{Q'}(f) ≤ w(f)` on the corpus, strictly on the left
///   whenever strictly on the right.
pub fn sandwich(w: &Chain, set: &AbkpSet, polys: &[QPoly], family_prefix: usize) -> Result<Report> {
    let mut report = Report::new("sandwich").fingerprint("family_prefix", family_prefix);
    let members = set.members(family_prefix)?;
    let truncations = members
        .iter()
        .map(|m| TruncationView::new(w, m.poly.clone()))
        .collect::<Result<Vec<_>>>()?;
    let eps = members
        .iter()
        .map(|m| epsilon(w, &m.poly))
        .collect::<Result<Vec<_>>>()?;
    let full = eval_all(w, polys)?;
    let table = truncations
        .iter()
        .map(|t| eval_all(t, polys))
        .collect::<Result<Vec<_>>>()?;

    for a in 0..members.len() {
        for b in a + 1..members.len() {
            let (qa, qb) = (&members[a].poly, &members[b].poly);
            let loc = format!("{} < {}", members[a].label, members[b].label);
            let wb = w.eval(qb)?;
            let under = truncations[a].value(qb)? < wb;
            let eps_lt = eps[a] < eps[b];
            if eps_lt && !under {
                report.push("prop-i", "truncation at Q does not undervalue Q'", &loc);
            }
            if qa.deg() == qb.deg() {
                let val_lt = w.eval(qa)? < wb;
                if !(val_lt == under && under == eps_lt) {
                    report.push(
                        "prop-ii",
                        format!("w(Q)<w(Q'): {val_lt}, w_Q(Q')<w(Q'): {under}, eps(Q)<eps(Q'): {eps_lt}"),
                        &loc,
                    );
                }
            }
            if !eps_lt {
                continue;
            }
            for (i, f) in polys.iter().enumerate() {
                let (ta, tb, wf) = (&table[a][i], &table[b][i], &full[i]);
                if ta > tb || tb > wf {
                    report.push(
                        "sandwich",
                        format!("{ta} <= {tb} <= {wf} fails"),
                        format!("{loc}: {f}"),
                    );
                } else if tb < wf && ta >= tb {
                    report.push(
                        "sandwich-strict",
                        format!("{tb} < {wf} but {ta} is not below {tb}"),
                        format!("{loc}: {f}"),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// `w_{φ_k} = w_k` for every level and `w_{χ_i} = ρ_i` for family members.
pub fn truncation_identities(w: &Chain, polys: &[QPoly], family_prefix: usize) -> Result<Report> {
    let mut report = Report::new("truncation_identities");
    for k in 0..=w.len() {
        let sub = truncation_agrees(w, &w.key_polynomial(k), &w.level(k), polys)?;
        for f in sub.findings {
            report.push(&f.code, f.message, format!("level {k}: {}", f.location));
        }
    }
    for (j, step) in w.steps().iter().enumerate() {
        let Some(family) = step.family() else {
            continue;
        };
        let prev = w.level(j);
        let n = family
            .explicit_len()
            .map_or(family_prefix, |len| len.min(family_prefix));
        for i in 0..n {
            let item = family.item(i)?;
            let rho = Augmented {
                prev: &prev,
                phi: &item.chi,
                gamma: &item.gamma,
            };
            let sub = truncation_agrees(w, &item.chi, &rho, polys)?;
            for f in sub.findings {
                report.push(
                    &f.code,
                    f.message,
                    format!("step {} member {i}: {}", j + 1, f.location),
                );
            }
        }
    }
    Ok(report)
}

/// `w_q(f) = expected(f)` on every corpus polynomial.
pub fn truncation_agrees<W, E>(w: W, q: &QPoly, expected: &E, polys: &[QPoly]) -> Result<Report>
where
    W: Valuator + Sync,
    E: Valuator + Sync,
{
    let mut report = Report::new("truncation_agrees").fingerprint("q", q);
    let t = TruncationView::new(w, q.clone())?;
    let lhs = eval_all(&t, polys)?;
    let rhs = eval_all(expected, polys)?;
    for ((f, a), b) in polys.iter().zip(lhs).zip(rhs) {
        if a != b {
            report.push(
                "truncation-mismatch",
                format!("w_q(f) = {a}, expected {b}"),
                f.to_string(),
            );
        }
    }
    Ok(report)
}

/// `[w'; φ, γ]` over a borrowed `w'`.
pub struct Augmented<'a, V> {
    pub prev: &'a V,
    pub phi: &'a QPoly,
    pub gamma: &'a Value,
}

impl<V: Valuator> Valuator for Augmented<'_, V> {
    fn value(&self, f: &QPoly) -> Result<Value> {
        augment_value(self.prev, self.phi, self.gamma, f)
    }
}

fn eval_all<W: Valuator + Sync>(w: &W, polys: &[QPoly]) -> Result<Vec<Value>> {
    polys.par_iter().map(|f| w.value(f)).collect()
}

/// Maps an error to the CLI exit code it should produce.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::Invalid(_) | Error::Json(_) => 2,
        Error::Structure(_) => 3,
        Error::Unstable { .. } | Error::FamilyExhausted { .. } => 4,
    }
}
