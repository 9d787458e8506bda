//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Tolerances are pinned below: every comparison is exact and every pass
//! rate must be 100%. Each criterion must also finish within
//! `TIME_LIMIT`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use valforge::convert::{abkps_from_chain, chain_from_abkps, roundtrip_check, Start};
use valforge::corpus::random_polys;
use valforge::invariants::{delta_oracle_depth_zero, epsilon, in_phi, is_complete_bounded};
use valforge::suite::{random_pairs, sandwich, truncation_agrees, valuation_axioms, Augmented};
use valforge::{fixtures, json, AbkpSet, Chain, CorpusSpec, DepthZero, QPoly, StableResult, Value};
use valforge::{BaseValuation, TruncationView, Valuator};

const TIME_LIMIT: Duration = Duration::from_secs(60);
/// Required fraction of passing cases, as (passed, total) must be equal.
const REQUIRED_PASS_RATE: f64 = 1.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn p(s: &str) -> QPoly {
    s.parse().unwrap()
}

fn v(s: &str) -> Value {
    s.parse().unwrap()
}

fn rate(passed: usize, total: usize) -> Outcome {
    let r = passed as f64 / total as f64;
    if total > 0 && r >= REQUIRED_PASS_RATE {
        Ok(format!("{passed}/{total}"))
    } else {
        Err(format!("{passed}/{total} passed"))
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn no_findings(r: &valforge::Report, what: &str) -> Result<(), String> {
    match r.findings.first() {
        None if r.is_pass() => Ok(()),
        Some(f) => Err(format!(
            "{what}: {} [{}] at {}",
            f.message, f.code, f.location
        )),
        None => Err(format!("{what}: status {:?}", r.status)),
    }
}

fn exact_evaluations() -> Outcome {
    let chain3 = fixtures::inductive_p3();
    let f = p("x^4 + 9");
    let got = chain3.eval(&f).map_err(|e| e.to_string())?;
    ensure(got == v("2"), format!("w(x^4+9) = {got}"))?;
    let oracle = OracleChain {
        p: 3,
        center: q(0),
        delta: qf(1, 2),
        steps: vec![(coeffs(&p("x^2 + 3")), qf(3, 2))],
    };
    ensure(
        as_value(oracle.eval(&coeffs(&f))) == got,
        "oracle disagrees on x^4+9",
    )?;

    let g = p("x^2 + 2x + 4");
    let got = fixtures::depth_zero_p2()
        .eval(&g)
        .map_err(|e| e.to_string())?;
    ensure(got == v("2"), format!("w0(x^2+2x+4) = {got}"))?;
    let oracle = OracleChain {
        p: 2,
        center: q(0),
        delta: q(1),
        steps: vec![],
    };
    ensure(
        as_value(oracle.eval(&coeffs(&g))) == got,
        "oracle disagrees on x^2+2x+4",
    )?;
    Ok("w(x^4+9) = 2, w0(x^2+2x+4) = 2".into())
}

fn valuation_axioms_on_fixtures() -> Outcome {
    let pairs = random_pairs(6, 500, 100, 1);
    let mut parts = Vec::new();
    for (name, chain) in [
        ("depth-zero", fixtures::depth_zero_p3()),
        ("inductive", fixtures::inductive_p3()),
        ("limit", fixtures::limit_p3_u7()),
    ] {
        let r = valuation_axioms(&chain, &pairs).map_err(|e| format!("{name}: {e}"))?;
        no_findings(&r, name)?;
        parts.push(format!("{name} {}/{}", pairs.len(), pairs.len()));
    }
    Ok(parts.join(", "))
}

fn epsilon_equals_delta() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let total = 200;
    let mut passed = 0;
    let mut first_bad = None;
    for i in 0..total {
        let prime = [2u64, 3, 5][rng.gen_range(0..3)];
        let base = BaseValuation::new(prime).unwrap();
        let center = qf(rng.gen_range(-20..=20), rng.gen_range(1..=6));
        let delta = qf(rng.gen_range(-6..=12), rng.gen_range(1..=4));
        let w0 = DepthZero::new(center, Value::base(delta));
        let f = loop {
            let f = random_polys(5, 1, 50, rng.gen()).pop().unwrap();
            if !f.is_constant() {
                break f;
            }
        };
        let chain = Chain::new(base.clone(), w0.clone());
        let eps = epsilon(&chain, &f).map_err(|e| e.to_string())?;
        let delta = delta_oracle_depth_zero(&w0, &base, &f).map_err(|e| e.to_string())?;
        if eps == delta {
            passed += 1;
        } else if first_bad.is_none() {
            first_bad = Some(format!(
                "case {i}: p={prime} f={f}: eps {eps} vs delta {delta}"
            ));
        }
    }
    rate(passed, total).map_err(|e| format!("{e}; first: {}", first_bad.unwrap_or_default()))
}

fn proposition_sandwich() -> Outcome {
    let corpus = CorpusSpec::range(4, -2, 2).unwrap();
    let polys = corpus.polys();
    let chain = fixtures::inductive_p3();
    let set = abkps_from_chain(&chain).map_err(|e| e.to_string())?;
    no_findings(
        &sandwich(&chain, &set, &polys, 6).map_err(|e| e.to_string())?,
        "inductive sandwich",
    )?;

    // family prefix pairs i < j <= 6, values checked against hand formulas:
    // w(χ_j) = e_j and w_{χ_i}(χ_j) = min(v(s_j - s_i), e_i) = e_i
    let limit = fixtures::limit_p3_u7();
    let AbkpSet { groups, .. } = abkps_from_chain(&limit).map_err(|e| e.to_string())?;
    let family = groups[0].theta.clone().unwrap();
    let items: Vec<_> = (0..=6).map(|i| family.item(i).unwrap()).collect();
    let s: Vec<Q> = items.iter().map(|it| -it.chi.coeff(0)).collect();
    let e: Vec<Q> = s
        .iter()
        .map(|s| q(vp(&(s * s - q(7)), 3).unwrap()))
        .collect();
    let mut pairs = 0;
    for j in 0..=6 {
        let wj = limit.eval(&items[j].chi).map_err(|x| x.to_string())?;
        ensure(
            wj == Value::base(e[j].clone()),
            format!("w(chi_{j}) = {wj}, oracle {}", e[j]),
        )?;
        for i in 0..j {
            let t = TruncationView::new(&limit, items[i].chi.clone()).map_err(|x| x.to_string())?;
            let under = t.value(&items[j].chi).map_err(|x| x.to_string())?;
            let oracle = q(vp(&(&s[j] - &s[i]), 3).unwrap()).min(e[i].clone());
            ensure(
                under == Value::base(oracle.clone()),
                format!("w_chi{i}(chi_{j}) = {under}, oracle {oracle}"),
            )?;
            let eps_lt =
                epsilon(&limit, &items[i].chi).unwrap() < epsilon(&limit, &items[j].chi).unwrap();
            let val_lt = Value::base(e[i].clone()) < wj;
            ensure(
                under < wj && val_lt && eps_lt,
                format!("(i)/(ii) disagree on pair {i} < {j}"),
            )?;
            pairs += 1;
        }
    }
    let lset = abkps_from_chain(&limit).unwrap();
    let random = CorpusSpec::random(4, 200, 50, 1).unwrap().polys();
    no_findings(
        &sandwich(&limit, &lset, &random, 7).map_err(|x| x.to_string())?,
        "limit sandwich",
    )?;
    Ok(format!(
        "sandwich on {} polynomials, {pairs} family pairs",
        polys.len()
    ))
}

fn truncation_theorem() -> Outcome {
    let polys = CorpusSpec::range(4, -2, 2).unwrap().polys();
    let chain3 = fixtures::inductive_p3();
    let deep = fixtures::inductive_p3_deep();
    let mut checks = 0;
    for q in [p("x^2 + 3"), p("x^2 + 9x + 3")] {
        // first case: q ∈ Φ(w_0, w), truncation is [w_0; q, w(q)]
        let w0 = chain3.level(0);
        ensure(
            in_phi(&q, &w0, &chain3, 2).unwrap(),
            format!("{q} not in Phi(w_0, w)"),
        )?;
        let wq = chain3.eval(&q).unwrap();
        let aug = Augmented {
            prev: &w0,
            phi: &q,
            gamma: &wq,
        };
        no_findings(
            &truncation_agrees(&chain3, &q, &aug, &polys).map_err(|e| e.to_string())?,
            "first case",
        )?;

        // second case: q ∉ Φ(w_1, w) with deg q = deg w_1, truncation is w_1
        let w1 = deep.level(1);
        ensure(
            w1.value(&q).unwrap() == deep.eval(&q).unwrap(),
            format!("{q} in Phi(w_1, w)"),
        )?;
        no_findings(
            &truncation_agrees(&deep, &q, &w1, &polys).map_err(|e| e.to_string())?,
            "second case",
        )?;
        checks += 2;
    }
    Ok(format!(
        "{checks} identities on {} polynomials",
        polys.len()
    ))
}

fn roundtrip() -> Outcome {
    let exhaustive = CorpusSpec::range(4, -2, 2).unwrap();
    let random = CorpusSpec::random(3, 200, 50, 0).unwrap();
    for (name, chain, corpus, inductive) in [
        ("inductive", fixtures::inductive_p3(), &exhaustive, true),
        ("limit", fixtures::limit_p3_u7(), &random, false),
    ] {
        let set = abkps_from_chain(&chain).map_err(|e| e.to_string())?;
        let back = chain_from_abkps(&set).map_err(|e| e.to_string())?;
        ensure(
            json::chain_to_json(&back) == json::chain_to_json(&chain),
            format!("{name}: chain not restored"),
        )?;
        let again = abkps_from_chain(&back).map_err(|e| e.to_string())?;
        ensure(
            json::abkp_to_json(&again) == json::abkp_to_json(&set),
            format!("{name}: set not restored"),
        )?;
        ensure(
            chain.is_inductive() == inductive && set.is_inductive() == inductive,
            format!("{name}: inductive flag"),
        )?;
        for start in [Start::Chain(&chain), Start::Set(&set)] {
            let r = roundtrip_check(start, corpus, 64);
            no_findings(&r, name)?;
            ensure(
                r.info["inductive"] == inductive.to_string(),
                format!("{name}: reported inductive flag"),
            )?;
        }
    }
    Ok(format!(
        "{} + {} polynomials agree",
        exhaustive.polys().len(),
        random.polys().len()
    ))
}

fn completeness() -> Outcome {
    let exhaustive = CorpusSpec::range(4, -2, 2).unwrap();
    let random = CorpusSpec::random(3, 200, 50, 0).unwrap();
    let mut notes = Vec::new();
    for (name, chain, corpus, top, witness_corpus) in [
        (
            "inductive",
            fixtures::inductive_p3(),
            &exhaustive,
            "x^2 + 3",
            CorpusSpec::range(2, 0, 3).unwrap(),
        ),
        (
            "limit",
            fixtures::limit_p3_u7(),
            &random,
            "x^2 - 7",
            CorpusSpec::exhaustive(2, vec![q(-7), q(0), q(1)]).unwrap(),
        ),
    ] {
        let set = abkps_from_chain(&chain).map_err(|e| e.to_string())?;
        no_findings(
            &is_complete_bounded(&set, &chain, corpus, 64).map_err(|e| e.to_string())?,
            name,
        )?;

        let mut cut = set.clone();
        cut.groups.pop();
        // the corpus of criterion 6 need not contain the deleted polynomial,
        // so it is searched for in a corpus that does
        let r =
            is_complete_bounded(&cut, &chain, &witness_corpus, 64).map_err(|e| e.to_string())?;
        ensure(
            r.findings
                .iter()
                .any(|f| f.code == "unwitnessed" && f.location == top),
            format!("{name}: {top} witnessed after deleting it"),
        )?;
        let r6 = is_complete_bounded(&cut, &chain, corpus, 64).map_err(|e| e.to_string())?;
        notes.push(format!(
            "{name}: {} unwitnessed on corpus 6",
            r6.findings.len()
        ));
    }
    Ok(notes.join(", "))
}

fn family_behaviour() -> Outcome {
    let limit = fixtures::limit_p3_u7();
    let family = limit.steps()[0].family().unwrap().clone();
    let gauss = limit.level(0);
    match family
        .stable_value(&gauss, &p("x - 1"), 64)
        .map_err(|e| e.to_string())?
    {
        StableResult::Stable { value, at_index } => {
            ensure(value == v("1"), format!("stable value of x-1 is {value}"))?;
            ensure(at_index <= 3, format!("x-1 stabilized at index {at_index}"))?;
        }
        StableResult::Unstable { .. } => return Err("x - 1 unstable".into()),
    }
    let prefix = match family
        .stable_value(&gauss, &p("x^2 - 7"), 10)
        .map_err(|e| e.to_string())?
    {
        StableResult::Unstable { prefix } => prefix,
        StableResult::Stable { .. } => return Err("x^2 - 7 stable".into()),
    };
    ensure(
        prefix.len() == 10,
        format!("prefix has {} values", prefix.len()),
    )?;
    ensure(
        prefix.windows(2).all(|w| w[0] < w[1]),
        "prefix not strictly increasing",
    )?;
    ensure(
        prefix[0] == v("1") && prefix[1] == v("2"),
        "prefix does not start (0,1),(0,2)",
    )?;
    // oracle: ρ_n(x² - 7) = v_3(s_n² - 7) with s_n ≡ √7 checked by digit search
    for (n, value) in prefix.iter().enumerate() {
        let s = -family.item(n).unwrap().chi.coeff(0);
        let e = vp(&(&s * &s - q(7)), 3).unwrap();
        ensure(
            *value == Value::int(e),
            format!("rho_{n}(x^2-7) = {value}, oracle {e}"),
        )?;
        let lifted = brute_sqrt(7, 3, 1, e as u32);
        let diff = Q::from_integer(lifted) - &s;
        ensure(
            diff.is_zero() || vp(&diff, 3).unwrap() >= e,
            format!("s_{n} is not a root mod 3^{e}"),
        )?;
        ensure(!s.is_negative(), "negative approximation")?;
    }
    let corpus = CorpusSpec::range(1, -5, 5).unwrap();
    let r = family.check_essential(&gauss, &p("x^2 - 7"), &corpus, 64);
    no_findings(&r, "check_essential")?;
    Ok(format!(
        "x-1 stable, prefix {}",
        prefix
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("exact evaluations", exact_evaluations),
        ("valuation axioms", valuation_axioms_on_fixtures),
        ("epsilon = delta at depth zero", epsilon_equals_delta),
        ("truncation sandwich", proposition_sandwich),
        ("truncation identities", truncation_theorem),
        ("chain/set round trip", roundtrip),
        ("completeness", completeness),
        ("family behaviour", family_behaviour),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > TIME_LIMIT {
            outcome = Err(format!("took {elapsed:.1?}, limit {TIME_LIMIT:?}"));
        }
        match outcome {
            Ok(detail) => println!("PASS {} {name} ({detail}) [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
