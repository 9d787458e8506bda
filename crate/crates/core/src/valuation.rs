//! Valuations on `Q[x]` given as MacLane–Vaquié chains.
//!
//! A [`Chain`] starts from a depth-zero valuation and applies ordinary
//! augmentations `[w; φ, γ]` and limit augmentations `[𝒲; φ, γ]`. Level `k`
//! of a chain is the valuation `w_k` obtained after the first `k` steps.

use num_traits::Zero;

use crate::corpus::CorpusSpec;
use crate::error::{Error, Result};
use crate::family::{ContinuousFamily, StableResult};
use crate::report::Report;
use crate::{BaseValuation, QPoly, Rational, Value, DEFAULT_BUDGET};

/// Anything that assigns values to polynomials.
pub trait Valuator {
    fn value(&self, f: &QPoly) -> Result<Value>;
}

impl<V: Valuator + ?Sized> Valuator for &V {
    fn value(&self, f: &QPoly) -> Result<Value> {
        (**self).value(f)
    }
}

/// `min_i { prev(f_i) + i·γ }` over the `φ`-expansion of `f`.
pub fn augment_value(prev: &dyn Valuator, phi: &QPoly, gamma: &Value, f: &QPoly) -> Result<Value> {
    expansion_min(f, phi, gamma, |c| prev.value(c))
}

fn expansion_min(
    f: &QPoly,
    phi: &QPoly,
    gamma: &Value,
    mut coeff_value: impl FnMut(&QPoly) -> Result<Value>,
) -> Result<Value> {
    if f.is_zero() {
        return Ok(Value::Infinity);
    }
    let mut best = Value::Infinity;
    for (i, part) in f.phi_expansion(phi)?.iter().enumerate() {
        if part.is_zero() {
            continue;
        }
        let v = &coeff_value(part)? + &gamma.mul_int(i);
        if v < best {
            best = v;
        }
    }
    Ok(best)
}

/// The depth-zero valuation `w̄_{a,δ}`: minimum of `v(c_i) + iδ` over the
/// `(x - a)`-expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthZero {
    pub center: Rational,
    pub delta: Value,
}

impl DepthZero {
    pub fn new(center: Rational, delta: Value) -> Self {
        DepthZero { center, delta }
    }

    /// The Gauss valuation: center 0, `δ = 0`.
    pub fn gauss() -> Self {
        DepthZero::new(Rational::zero(), Value::zero())
    }

    /// `x - a`, the degree-one key polynomial of this valuation.
    pub fn key_polynomial(&self) -> QPoly {
        QPoly::linear(self.center.clone())
    }

    pub fn eval(&self, base: &BaseValuation, f: &QPoly) -> Value {
        f.shift(&self.center)
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| &base.vp(c) + &self.delta.mul_int(i))
            .min()
            .unwrap_or(Value::Infinity)
    }

    pub fn with_base<'a>(&'a self, base: &'a BaseValuation) -> DepthZeroView<'a> {
        DepthZeroView { root: self, base }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DepthZeroView<'a> {
    root: &'a DepthZero,
    base: &'a BaseValuation,
}

impl Valuator for DepthZeroView<'_> {
    fn value(&self, f: &QPoly) -> Result<Value> {
        Ok(self.root.eval(self.base, f))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdinaryStep {
    pub phi: QPoly,
    pub gamma: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitStep {
    pub family: ContinuousFamily,
    pub phi: QPoly,
    pub gamma: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    Ordinary(OrdinaryStep),
    Limit(LimitStep),
}

impl Step {
    pub fn phi(&self) -> &QPoly {
        match self {
            Step::Ordinary(s) => &s.phi,
            Step::Limit(s) => &s.phi,
        }
    }

    pub fn gamma(&self) -> &Value {
        match self {
            Step::Ordinary(s) => &s.gamma,
            Step::Limit(s) => &s.gamma,
        }
    }

    pub fn family(&self) -> Option<&ContinuousFamily> {
        match self {
            Step::Ordinary(_) => None,
            Step::Limit(s) => Some(&s.family),
        }
    }

    pub fn is_limit(&self) -> bool {
        matches!(self, Step::Limit(_))
    }
}

/// Whether `Γ_w / Γ_v` is torsion (residually transcendental) or not.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    ResiduallyTranscendental,
    ValueTranscendental,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::ResiduallyTranscendental => "residually-transcendental",
            Classification::ValueTranscendental => "value-transcendental",
        })
    }
}

/// `w_0 → w_1 → … → w_N`. Construction does not check the MLV conditions;
/// call [`Chain::validate`] for that.
#[derive(Clone, Debug)]
pub struct Chain {
    base: BaseValuation,
    root: DepthZero,
    steps: Vec<Step>,
    budget: usize,
}

impl PartialEq for Chain {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.root == other.root && self.steps == other.steps
    }
}

impl Chain {
    pub fn new(base: BaseValuation, root: DepthZero) -> Self {
        Chain {
            base,
            root,
            steps: Vec::new(),
            budget: DEFAULT_BUDGET,
        }
    }

    /// Maximum number of family members generated per stability decision.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget.max(2);
        self
    }

    pub fn push(mut self, step: Step) -> Self {
        self.steps.push(step);
        self
    }

    pub fn augment(self, phi: QPoly, gamma: Value) -> Self {
        self.push(Step::Ordinary(OrdinaryStep { phi, gamma }))
    }

    pub fn limit_augment(self, family: ContinuousFamily, phi: QPoly, gamma: Value) -> Self {
        self.push(Step::Limit(LimitStep { family, phi, gamma }))
    }

    pub fn base(&self) -> &BaseValuation {
        &self.base
    }

    pub fn root(&self) -> &DepthZero {
        &self.root
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Number of augmentation steps `N`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_inductive(&self) -> bool {
        !self.steps.iter().any(Step::is_limit)
    }

    /// The chain truncated to its first `level` steps.
    pub fn prefix(&self, level: usize) -> Chain {
        Chain {
            base: self.base.clone(),
            root: self.root.clone(),
            steps: self.steps[..level].to_vec(),
            budget: self.budget,
        }
    }

    pub fn level(&self, level: usize) -> ChainLevel<'_> {
        assert!(
            level <= self.len(),
            "level {level} beyond chain length {}",
            self.len()
        );
        ChainLevel { chain: self, level }
    }

    /// `φ_k`, with `φ_0 = x - a` for the root.
    pub fn key_polynomial(&self, level: usize) -> QPoly {
        match level {
            0 => self.root.key_polynomial(),
            k => self.steps[k - 1].phi().clone(),
        }
    }

    /// `γ_k = w_k(φ_k)`; for the root this is `δ`.
    pub fn gamma(&self, level: usize) -> Value {
        match level {
            0 => self.root.delta.clone(),
            k => self.steps[k - 1].gamma().clone(),
        }
    }

    /// `deg(w_k) = deg φ_k`.
    pub fn degree_at(&self, level: usize) -> usize {
        self.key_polynomial(level).deg()
    }

    pub fn eval(&self, f: &QPoly) -> Result<Value> {
        self.eval_level(self.len(), f)
    }

    pub fn eval_level(&self, level: usize, f: &QPoly) -> Result<Value> {
        if level == 0 {
            return Ok(self.root.eval(&self.base, f));
        }
        match &self.steps[level - 1] {
            Step::Ordinary(s) => {
                expansion_min(f, &s.phi, &s.gamma, |c| self.eval_level(level - 1, c))
            }
            Step::Limit(s) => {
                let prev = self.level(level - 1);
                expansion_min(f, &s.phi, &s.gamma, |c| {
                    match s.family.stable_value(&prev, c, self.budget)? {
                        StableResult::Stable { value, .. } => Ok(value),
                        StableResult::Unstable { .. } => Err(Error::Unstable {
                            poly: c.to_string(),
                            budget: self.budget,
                        }),
                    }
                })
            }
        }
    }

    /// Checks the MLV-chain conditions and the step invariants; every
    /// violation becomes a finding.
    pub fn validate(&self) -> Report {
        let mut report = Report::new("validate_chain");
        if self.root.delta.is_infinite() {
            report.push("root-delta", "depth-zero delta must be finite", "root");
        }
        for k in 1..=self.len() {
            let loc = format!("step {k}");
            let step = &self.steps[k - 1];
            let phi = step.phi();
            if !phi.is_monic() || phi.deg() == 0 {
                report.push("non-monic", "phi must be monic of positive degree", loc);
                continue;
            }
            if step.gamma() <= &self.gamma(k - 1) {
                report.push(
                    "gamma-order",
                    "gamma not strictly increasing along the chain",
                    &loc,
                );
            }
            let prev_deg = self.degree_at(k - 1);
            let outcome = match step {
                Step::Ordinary(s) => self.validate_ordinary(k, s, prev_deg, &mut report),
                Step::Limit(s) => self.validate_limit(k, s, prev_deg, &mut report),
            };
            if let Err(e) = outcome {
                report.push_error("evaluation", e.to_string(), loc);
            }
        }
        report
    }

    fn validate_ordinary(
        &self,
        k: usize,
        step: &OrdinaryStep,
        prev_deg: usize,
        report: &mut Report,
    ) -> Result<()> {
        let loc = format!("step {k}");
        if step.gamma <= self.eval_level(k - 1, &step.phi)? {
            report.push(
                "gamma-not-greater",
                "gamma not strictly greater than the previous value of phi",
                &loc,
            );
        }
        let deg = step.phi.deg();
        if deg <= prev_deg {
            report.push(
                "degree-growth",
                "ordinary step requires degree growth",
                &loc,
            );
        } else if !deg.is_multiple_of(prev_deg) {
            report.push(
                "degree-divisibility",
                "deg(w_n) must divide the step degree",
                &loc,
            );
        }
        Ok(())
    }

    fn validate_limit(
        &self,
        k: usize,
        step: &LimitStep,
        prev_deg: usize,
        report: &mut Report,
    ) -> Result<()> {
        let loc = format!("step {k}");
        let family = &step.family;
        if family.base_prime().is_some_and(|p| p != self.base.p()) {
            report.push(
                "family-base",
                "family prime differs from the chain prime",
                &loc,
            );
            return Ok(());
        }
        let fam_deg = family.degree()?;
        if fam_deg != prev_deg {
            report.push(
                "limit-degree",
                "limit step requires the family degree to equal deg(w_n)",
                &loc,
            );
        }
        if step.phi.deg() <= fam_deg {
            report.push(
                "limit-phi-degree",
                "limit key polynomial must exceed the family degree",
                &loc,
            );
            return Ok(());
        }
        let prev = self.level(k - 1);
        let mut axioms = family.check_axioms(&prev, FAMILY_CHECK_PREFIX);
        tag(&mut axioms, &loc);
        report.absorb(axioms);

        let corpus = CorpusSpec::default_for_degree(step.phi.deg() - 1);
        let mut essential = family.check_essential(&prev, &step.phi, &corpus, self.budget);
        tag(&mut essential, &loc);
        report.absorb(essential);
        match family.stable_value(&prev, &step.phi, self.budget)? {
            StableResult::Unstable { prefix } => {
                if prefix.iter().any(|v| v >= &step.gamma) {
                    report.push(
                        "gamma-not-greater",
                        "gamma must exceed every family value of phi",
                        &loc,
                    );
                }
            }
            // already reported by the essentiality check
            StableResult::Stable { .. } => return Ok(()),
        }
        let prev_phi = self.key_polynomial(k - 1);
        if self.eval_level(k - 1, &prev_phi)? < self.eval_level(k, &prev_phi)? {
            report.push(
                "limit-phi-in-Phi",
                "previous key polynomial lies in Phi(w_n, w_n+1)",
                &loc,
            );
        }
        Ok(())
    }

    /// Torsion test of `Γ_w / Γ_v`: every generator must have a multiple in
    /// the base group `(0, Z)`, i.e. a zero dominant coordinate.
    pub fn classify(&self) -> Classification {
        let torsion = |v: &Value| v.hi().is_some_and(Zero::is_zero);
        let mut all = torsion(&self.root.delta);
        for step in &self.steps {
            all &= torsion(step.gamma());
            if let Some(fam) = step.family() {
                all &= fam
                    .generated_values(FAMILY_CHECK_PREFIX)
                    .iter()
                    .all(torsion);
            }
        }
        if all {
            Classification::ResiduallyTranscendental
        } else {
            Classification::ValueTranscendental
        }
    }

    /// Like [`Chain::validate`] but turns findings into an error.
    pub fn validated(self) -> Result<Self> {
        let report = self.validate();
        if report.is_pass() {
            Ok(self)
        } else {
            Err(Error::Structure(Box::new(report)))
        }
    }
}

/// Family members inspected when a check only needs a finite prefix.
pub(crate) const FAMILY_CHECK_PREFIX: usize = 6;

fn tag(report: &mut Report, loc: &str) {
    for f in &mut report.findings {
        f.location = format!("{loc}: {}", f.location);
    }
}

impl Valuator for Chain {
    fn value(&self, f: &QPoly) -> Result<Value> {
        self.eval(f)
    }
}

/// The valuation `w_k` of a chain, borrowed.
#[derive(Clone, Copy, Debug)]
pub struct ChainLevel<'a> {
    chain: &'a Chain,
    level: usize,
}

impl<'a> ChainLevel<'a> {
    pub fn chain(&self) -> &'a Chain {
        self.chain
    }

    pub fn level(&self) -> usize {
        self.level
    }
}

impl Valuator for ChainLevel<'_> {
    fn value(&self, f: &QPoly) -> Result<Value> {
        self.chain.eval_level(self.level, f)
    }
}

/// The `q`-truncation `w_q(f) = min_i w(f_i q^i)` of a valuation `w`.
#[derive(Clone, Debug)]
pub struct TruncationView<V> {
    underlying: V,
    q: QPoly,
    q_value: Value,
}

impl<V: Valuator> TruncationView<V> {
    pub fn new(underlying: V, q: QPoly) -> Result<Self> {
        if !q.is_monic() || q.deg() == 0 {
            return Err(Error::invalid(
                "truncation polynomial must be monic of positive degree",
            ));
        }
        let q_value = underlying.value(&q)?;
        Ok(TruncationView {
            underlying,
            q,
            q_value,
        })
    }

    pub fn underlying(&self) -> &V {
        &self.underlying
    }

    pub fn q(&self) -> &QPoly {
        &self.q
    }
}

impl<V: Valuator> Valuator for TruncationView<V> {
    fn value(&self, f: &QPoly) -> Result<Value> {
        // w(f_i q^i) = w(f_i) + i·w(q) since w is multiplicative
        expansion_min(f, &self.q, &self.q_value, |c| self.underlying.value(c))
    }
}
