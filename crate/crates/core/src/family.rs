//! Continuous families of augmentations `ρ_i = [w'; χ_i, γ_i]` and their
//! stable values.
//!
//! A family is stored independently of the valuation `w'` it augments;
//! operations take `w'` as an argument. Generated members are memoized in an
//! append-only table shared by all clones of the family.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;

use crate::base::HenselLift;
use crate::corpus::CorpusSpec;
use crate::error::{Error, Result};
use crate::invariants::w_equivalent;
use crate::report::Report;
use crate::valuation::{augment_value, Chain, Valuator};
use crate::{BaseValuation, QPoly, Rational, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyItem {
    pub chi: QPoly,
    pub gamma: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySource {
    /// A finite prefix of a family; operations that need members past the
    /// prefix fail with [`Error::FamilyExhausted`].
    Explicit(Vec<FamilyItem>),
    /// `χ_i = x - s`, `γ_i = (0, v_p(s² - u))` over the distinct Hensel
    /// approximations `s` of `√u`.
    HenselSqrt { base: BaseValuation, u: Rational },
}

#[derive(Debug, Default)]
struct Memo {
    items: Vec<FamilyItem>,
    lift: Option<HenselLift>,
}

#[derive(Clone)]
pub struct ContinuousFamily {
    source: Arc<FamilySource>,
    memo: Arc<Mutex<Memo>>,
}

impl fmt::Debug for ContinuousFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ContinuousFamily")
            .field(&self.source)
            .finish()
    }
}

impl PartialEq for ContinuousFamily {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StableResult {
    /// `ρ_{at_index - 1}(f) = ρ_{at_index}(f) = value`.
    Stable { value: Value, at_index: usize },
    /// Strictly increasing values observed before the budget ran out.
    Unstable { prefix: Vec<Value> },
}

impl StableResult {
    pub fn stable_value(&self) -> Option<&Value> {
        match self {
            StableResult::Stable { value, .. } => Some(value),
            StableResult::Unstable { .. } => None,
        }
    }
}

impl ContinuousFamily {
    pub fn explicit(items: Vec<FamilyItem>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::invalid("explicit family needs at least one member"));
        }
        Ok(Self::from_source(FamilySource::Explicit(items)))
    }

    pub fn hensel_sqrt(base: BaseValuation, u: Rational) -> Result<Self> {
        HenselLift::start(&base, &u)?;
        Ok(Self::from_source(FamilySource::HenselSqrt { base, u }))
    }

    fn from_source(source: FamilySource) -> Self {
        ContinuousFamily {
            source: Arc::new(source),
            memo: Arc::new(Mutex::new(Memo::default())),
        }
    }

    pub fn source(&self) -> &FamilySource {
        &self.source
    }

    pub fn base_prime(&self) -> Option<&BigInt> {
        match &*self.source {
            FamilySource::Explicit(_) => None,
            FamilySource::HenselSqrt { base, .. } => Some(base.p()),
        }
    }

    /// Number of members, if the family is an explicit prefix.
    pub fn explicit_len(&self) -> Option<usize> {
        match &*self.source {
            FamilySource::Explicit(items) => Some(items.len()),
            FamilySource::HenselSqrt { .. } => None,
        }
    }

    pub fn item(&self, n: usize) -> Result<FamilyItem> {
        match &*self.source {
            FamilySource::Explicit(items) => items
                .get(n)
                .cloned()
                .ok_or(Error::FamilyExhausted { len: items.len() }),
            FamilySource::HenselSqrt { base, u } => {
                let mut memo = self.memo.lock().expect("family memo poisoned");
                while memo.items.len() <= n {
                    let lift = match memo.lift.take() {
                        Some(lift) => lift,
                        None => HenselLift::start(base, u)?,
                    };
                    let mut lift = lift;
                    let e = lift.excess(base, u);
                    memo.items.push(FamilyItem {
                        chi: QPoly::linear(Rational::from_integer(lift.s.clone())),
                        gamma: Value::int(e as i64),
                    });
                    // s is a root mod p^e; the next distinct approximation lives mod p^(e+1)
                    lift.level = e;
                    lift.lift_to(base, u, e + 1)?;
                    memo.lift = Some(lift);
                }
                Ok(memo.items[n].clone())
            }
        }
    }

    /// Stable degree `deg(𝒲)`.
    pub fn degree(&self) -> Result<usize> {
        Ok(self.item(0)?.chi.deg())
    }

    /// `γ_0, …, γ_{n-1}` (fewer for a short explicit family).
    pub fn generated_values(&self, n: usize) -> Vec<Value> {
        (0..n)
            .map_while(|i| self.item(i).ok().map(|it| it.gamma))
            .collect()
    }

    /// `ρ_n(f)` for `ρ_n = [w'; χ_n, γ_n]`.
    pub fn rho_value(&self, w_prime: &dyn Valuator, n: usize, f: &QPoly) -> Result<Value> {
        let item = self.item(n)?;
        augment_value(w_prime, &item.chi, &item.gamma, f)
    }

    /// The `n`-th member together with `ρ_n` as a one-step extension of
    /// `base_prefix`.
    pub fn family_item(&self, base_prefix: &Chain, n: usize) -> Result<(FamilyItem, Chain)> {
        let item = self.item(n)?;
        let rho = base_prefix
            .clone()
            .augment(item.chi.clone(), item.gamma.clone());
        Ok((item, rho))
    }

    /// Generates `ρ_0(f), ρ_1(f), …` until two consecutive values agree or
    /// `budget` values have been produced.
    pub fn stable_value(
        &self,
        w_prime: &dyn Valuator,
        f: &QPoly,
        budget: usize,
    ) -> Result<StableResult> {
        let budget = budget.max(2);
        let mut prefix: Vec<Value> = Vec::new();
        for n in 0..budget {
            let value = self.rho_value(w_prime, n, f)?;
            if prefix.last() == Some(&value) {
                return Ok(StableResult::Stable { value, at_index: n });
            }
            prefix.push(value);
        }
        Ok(StableResult::Unstable { prefix })
    }

    /// Checks the family axioms on the first `count` members: monic of one
    /// degree, `γ` increasing, `γ_i > w'(χ_i)`, and `χ_j ≁_{ρ_i} χ_i`.
    pub fn check_axioms(&self, w_prime: &dyn Valuator, count: usize) -> Report {
        let mut report = Report::new("family_axioms").fingerprint("members", count);
        let items: Vec<FamilyItem> = match (0..count).map(|i| self.item(i)).collect() {
            Ok(items) => items,
            Err(Error::FamilyExhausted { len }) => (0..len.min(count))
                .filter_map(|i| self.item(i).ok())
                .collect(),
            Err(e) => {
                report.push_error("family-error", e.to_string(), "family");
                return report;
            }
        };
        let deg = items[0].chi.deg();
        for (i, it) in items.iter().enumerate() {
            let loc = format!("member {i}");
            if !it.chi.is_monic() || it.chi.deg() != deg || deg == 0 {
                report.push(
                    "family-degree",
                    "members must be monic of one common degree",
                    loc,
                );
                return report;
            }
            if i > 0 && it.gamma <= items[i - 1].gamma {
                report.push(
                    "family-gamma-order",
                    "family values must strictly increase",
                    &loc,
                );
            }
            match w_prime.value(&it.chi) {
                Ok(v) if it.gamma <= v => report.push(
                    "family-gamma-not-greater",
                    "family value must exceed w'(chi)",
                    &loc,
                ),
                Ok(_) => {}
                Err(e) => report.push_error("evaluation", e.to_string(), &loc),
            }
        }
        for i in 0..items.len() {
            let rho_i = RhoView {
                w_prime,
                item: &items[i],
            };
            for j in i + 1..items.len() {
                match w_equivalent(&rho_i, &items[j].chi, &items[i].chi) {
                    Ok(true) => report.push(
                        "family-equivalent",
                        "later member is equivalent to an earlier one",
                        format!("members {i},{j}"),
                    ),
                    Ok(false) => {}
                    Err(e) => {
                        report.push_error("evaluation", e.to_string(), format!("members {i},{j}"))
                    }
                }
            }
        }
        report
    }

    /// Evidence that `phi` is an MLV limit key polynomial and the family is
    /// essential: `phi` unstable within the budget, every corpus polynomial
    /// of smaller degree stable.
    pub fn check_essential(
        &self,
        w_prime: &dyn Valuator,
        phi: &QPoly,
        corpus: &CorpusSpec,
        budget: usize,
    ) -> Report {
        let mut report = Report::new("check_essential")
            .fingerprint("corpus", corpus.fingerprint())
            .fingerprint("budget", budget);
        report.note("bounded evidence over a finite corpus, not a proof");
        let loc = phi.to_string();
        if !phi.is_monic() {
            report.push("phi-not-monic", "phi must be monic", &loc);
            return report;
        }
        let fam_deg = match self.degree() {
            Ok(d) => d,
            Err(e) => {
                report.push_error("family-error", e.to_string(), &loc);
                return report;
            }
        };
        if phi.deg() <= fam_deg {
            report.push("phi-degree", "phi must exceed the family degree", &loc);
            return report;
        }
        match self.stable_value(w_prime, phi, budget) {
            Ok(StableResult::Stable { value, at_index }) => report.push(
                "phi-stable",
                format!("phi is stable (value {value} at member {at_index})"),
                &loc,
            ),
            Ok(StableResult::Unstable { .. }) => {}
            Err(e) => report.push_error("family-error", e.to_string(), &loc),
        }
        for f in corpus.polys() {
            if f.is_zero() || f.deg() >= phi.deg() {
                continue;
            }
            match self.stable_value(w_prime, &f, budget) {
                Ok(StableResult::Unstable { .. }) => {
                    report.push("unstable-below", "unstable below deg phi", f.to_string())
                }
                Ok(StableResult::Stable { .. }) => {}
                Err(e) => report.push_error("family-error", e.to_string(), f.to_string()),
            }
        }
        report
    }
}

struct RhoView<'a> {
    w_prime: &'a dyn Valuator,
    item: &'a FamilyItem,
}

impl Valuator for RhoView<'_> {
    fn value(&self, f: &QPoly) -> Result<Value> {
        augment_value(self.w_prime, &self.item.chi, &self.item.gamma, f)
    }
}
