//! Executable predicates from the key-polynomial toolkit.
//!
//! `δ(f)` is defined through roots in an algebraic closure. Everywhere it
//! is needed we use the computable invariant
//!
//! ```text
//! ε(f) = max_{1 ≤ b ≤ deg f} (w(f) − w(∂_b f)) / b
//! ```
//!
//! with `∂_b` the Hasse derivative. At depth zero the two are compared
//! against a Newton-polygon oracle. Checks quantified over "every
//! polynomial" run over a finite [`CorpusSpec`] and report evidence only.

use rayon::prelude::*;

use crate::convert::{AbkpSet, Member};
use crate::corpus::CorpusSpec;
use crate::error::{Error, Result};
use crate::report::Report;
use crate::valuation::{Chain, DepthZero, TruncationView, Valuator};
use crate::{BaseValuation, QPoly, Value};

pub fn epsilon(w: &dyn Valuator, f: &QPoly) -> Result<Value> {
    let deg = f.degree().unwrap_or(0);
    if deg == 0 {
        return Err(Error::invalid("epsilon of a constant polynomial"));
    }
    let wf = w.value(f)?;
    if wf.is_infinite() {
        return Err(Error::invalid(format!("w({f}) is infinite")));
    }
    let mut best: Option<Value> = None;
    for b in 1..=deg {
        let d = f.hasse_derivative(b);
        if d.is_zero() {
            continue;
        }
        let diff = wf
            .checked_sub(&w.value(&d)?)
            .ok_or_else(|| Error::invalid("infinite value on a nonzero derivative"))?;
        let candidate = diff.div_int(b as u64)?;
        if best.as_ref().is_none_or(|cur| candidate > *cur) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("the top Hasse derivative of a nonconstant polynomial is nonzero"))
}

/// `δ(f) = max over roots α of min(v̄(α − a), δ)` for `w = w̄_{a,δ}`, using
/// Newton-polygon root valuations of `f(x + a)`.
pub fn delta_oracle_depth_zero(w0: &DepthZero, base: &BaseValuation, f: &QPoly) -> Result<Value> {
    let shifted = f.shift(&w0.center);
    let roots = base.newton_root_valuations(&shifted)?;
    Ok(roots
        .into_iter()
        .map(|r| r.min(w0.delta.clone()))
        .max()
        .expect("a nonconstant polynomial has roots"))
}

/// `f ∼_w g ⟺ w(f − g) > w(f) = w(g)`.
pub fn w_equivalent(w: &dyn Valuator, f: &QPoly, g: &QPoly) -> Result<bool> {
    let (wf, wg) = (w.value(f)?, w.value(g)?);
    Ok(wf == wg && w.value(&(f - g))? > wf)
}

/// Membership in `Φ(w', w)` given the minimal degree of that set.
pub fn in_phi(g: &QPoly, w_prime: &dyn Valuator, w: &dyn Valuator, min_deg: usize) -> Result<bool> {
    if !g.is_monic() {
        return Err(Error::invalid(format!("{g} is not monic")));
    }
    if g.deg() != min_deg {
        return Ok(false);
    }
    Ok(w_prime.value(g)? < w.value(g)?)
}

/// Checks `ε(f) < ε(q)` for every nonconstant corpus `f` with
/// `deg f < deg q`. Constants have no roots and pass vacuously.
pub fn is_abkp_bounded(q: &QPoly, w: &dyn Valuator, corpus: &CorpusSpec) -> Result<Report> {
    if !q.is_monic() || q.deg() == 0 {
        return Err(Error::invalid(
            "ABKP candidate must be monic of positive degree",
        ));
    }
    let corpus = corpus.with_max_degree(q.deg() - 1);
    let mut report = Report::new("is_abkp_bounded").fingerprint("corpus", corpus.fingerprint());
    report.note("bounded evidence over a finite corpus, not a proof");
    let eq = epsilon(w, q)?;
    report.set_info("epsilon", &eq);
    for f in corpus.polys() {
        if f.is_constant() {
            continue;
        }
        let ef = epsilon(w, &f)?;
        if ef >= eq {
            let what = if ef == eq { "non-strict" } else { "exceeds" };
            report.push(
                "epsilon-not-below",
                format!("epsilon {ef} {what} epsilon(q) = {eq}"),
                f.to_string(),
            );
        }
    }
    Ok(report)
}

/// For every corpus `f`, looks for a member `Q_i` with `deg Q_i ≤ deg f`
/// and `w_{Q_i}(f) = w(f)`. Families are scanned for at most `budget`
/// members, stopping early at a member whose value `w(χ_i)` does not
/// stabilize within the chain's own budget.
///
/// Constants are witnessed by `Q_0`, whose truncation agrees with `w` on them.
pub fn is_complete_bounded(
    lambda: &AbkpSet,
    w: &Chain,
    corpus: &CorpusSpec,
    budget: usize,
) -> Result<Report> {
    let mut report = Report::new("is_complete_bounded")
        .fingerprint("corpus", corpus.fingerprint())
        .fingerprint("budget", budget);
    report.note("bounded evidence over a finite corpus, not a proof");
    let truncations = member_truncations(lambda, w, budget, &mut report)?;
    let polys = corpus.polys();
    let outcomes: Vec<Result<bool>> = polys
        .par_iter()
        .map(|f| {
            if f.is_constant() {
                return Ok(true);
            }
            let target = w.eval(f)?;
            for t in truncations.iter().filter(|t| t.q().deg() <= f.deg()) {
                if t.value(f)? == target {
                    return Ok(true);
                }
            }
            Ok(false)
        })
        .collect();
    let mut count = 0usize;
    for (f, outcome) in polys.iter().zip(outcomes) {
        if outcome? {
            count += 1;
        } else {
            report.push(
                "unwitnessed",
                "no truncation of degree <= deg f attains w(f)",
                f.to_string(),
            );
        }
    }
    report.set_info("checked", polys.len());
    report.set_info("witnessed", count);
    Ok(report)
}

fn member_truncations<'a>(
    lambda: &AbkpSet,
    w: &'a Chain,
    budget: usize,
    report: &mut Report,
) -> Result<Vec<TruncationView<&'a Chain>>> {
    let mut out = Vec::new();
    for (j, group) in lambda.groups.iter().enumerate() {
        out.push(TruncationView::new(w, group.q.clone())?);
        let Some(fam) = &group.theta else { continue };
        let mut scanned = 0;
        for i in 0..budget {
            let item = match fam.item(i) {
                Ok(item) => item,
                Err(Error::FamilyExhausted { .. }) => break,
                Err(e) => return Err(e),
            };
            match TruncationView::new(w, item.chi) {
                Ok(t) => out.push(t),
                Err(Error::Unstable { .. }) => break,
                Err(e) => return Err(e),
            }
            scanned += 1;
        }
        report.set_info(&format!("family_members_scanned.{j}"), scanned);
    }
    Ok(out)
}

/// Structural properties of a complete set against its valuation: the
/// shape checks of [`AbkpSet::check_shape`], assigned values equal to
/// `w(Q_i)`, and `ε` strictly increasing along the generated order.
pub fn validate_structure(lambda: &AbkpSet, w: &Chain, family_prefix: usize) -> Report {
    let mut report = lambda.check_shape(family_prefix);
    report.check = "validate_structure".to_owned();
    let members = match lambda.members(family_prefix) {
        Ok(m) => m,
        Err(e) => {
            report.push_error("family-error", e.to_string(), "set");
            return report;
        }
    };
    let mut prev: Option<(Value, &Member)> = None;
    for m in &members {
        if !m.poly.is_monic() || m.poly.deg() == 0 {
            continue;
        }
        match w.eval(&m.poly) {
            Ok(v) if v != m.gamma => report.push(
                "assigned-value",
                format!("assigned value {} differs from w(Q) = {v}", m.gamma),
                &m.label,
            ),
            Ok(_) => {}
            Err(e) => report.push_error("evaluation", e.to_string(), &m.label),
        }
        let eps = match epsilon(w, &m.poly) {
            Ok(e) => e,
            Err(e) => {
                report.push_error("evaluation", e.to_string(), &m.label);
                continue;
            }
        };
        if let Some((pe, pm)) = &prev {
            if eps == *pe {
                report.push(
                    "delta-distinct",
                    "(i) distinct δ",
                    format!("{} and {}", pm.label, m.label),
                );
            } else if eps < *pe {
                report.push(
                    "delta-order",
                    "(v) δ must increase",
                    format!("{} and {}", pm.label, m.label),
                );
            }
        }
        prev = Some((eps, m));
    }
    report
}
