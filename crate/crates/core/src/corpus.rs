//! Finite polynomial corpora standing in for "every polynomial f".

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{format_rational, rat};
use crate::{QPoly, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorpusSource {
    /// Every polynomial of degree `≤ max_degree` with coefficients in the set.
    Coeffs(Vec<Rational>),
    /// `count` polynomials with rational coefficients of height `≤ height`.
    Random {
        count: usize,
        height: u64,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    pub max_degree: usize,
    pub source: CorpusSource,
}

/// Exhaustive corpora larger than this are replaced by random samples
/// when a corpus is derived automatically.
const EXHAUSTIVE_LIMIT: usize = 3125;

impl CorpusSpec {
    pub fn exhaustive(max_degree: usize, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("corpus coefficient set is empty"));
        }
        let mut coeffs = coeffs;
        coeffs.sort();
        coeffs.dedup();
        Ok(CorpusSpec {
            max_degree,
            source: CorpusSource::Coeffs(coeffs),
        })
    }

    /// Integer coefficients `lo..=hi`.
    pub fn range(max_degree: usize, lo: i64, hi: i64) -> Result<Self> {
        Self::exhaustive(max_degree, (lo..=hi).map(rat).collect())
    }

    pub fn random(max_degree: usize, count: usize, height: u64, seed: u64) -> Result<Self> {
        if count == 0 || height == 0 {
            return Err(Error::invalid(
                "random corpus needs positive count and height",
            ));
        }
        Ok(CorpusSpec {
            max_degree,
            source: CorpusSource::Random {
                count,
                height,
                seed,
            },
        })
    }

    /// Corpus used when a check needs "all f of degree ≤ d" and the caller
    /// gave none: coefficients `-2..=2`, or a seeded sample once that gets large.
    pub fn default_for_degree(max_degree: usize) -> Self {
        let size = 5usize
            .checked_pow(max_degree as u32 + 1)
            .unwrap_or(usize::MAX);
        if size <= EXHAUSTIVE_LIMIT {
            Self::range(max_degree, -2, 2).expect("nonempty range")
        } else {
            Self::random(max_degree, 200, 10, 0).expect("positive parameters")
        }
    }

    pub fn with_max_degree(&self, max_degree: usize) -> Self {
        CorpusSpec {
            max_degree,
            source: self.source.clone(),
        }
    }

    /// The corpus in degree-lexicographic order (degree, then coefficients
    /// from the leading one down). Deterministic for a fixed spec.
    pub fn polys(&self) -> Vec<QPoly> {
        let mut out = match &self.source {
            CorpusSource::Coeffs(set) => enumerate(self.max_degree, set),
            CorpusSource::Random {
                count,
                height,
                seed,
            } => random_polys(self.max_degree, *count, *height, *seed),
        };
        out.sort_by_key(deg_lex_key);
        out
    }

    pub fn fingerprint(&self) -> String {
        match &self.source {
            CorpusSource::Coeffs(set) => {
                let items: Vec<String> = set.iter().map(format_rational).collect();
                format!(
                    "exhaustive deg<={} coeffs={{{}}}",
                    self.max_degree,
                    items.join(",")
                )
            }
            CorpusSource::Random {
                count,
                height,
                seed,
            } => format!(
                "random deg<={} count={count} height={height} seed={seed}",
                self.max_degree
            ),
        }
    }
}

fn deg_lex_key(f: &QPoly) -> (usize, Vec<Rational>) {
    let deg = f.degree().map_or(0, |d| d + 1);
    (deg, f.coeffs().iter().rev().cloned().collect())
}

fn enumerate(max_degree: usize, set: &[Rational]) -> Vec<QPoly> {
    let len = max_degree + 1;
    let mut idx = vec![0usize; len];
    let mut out = Vec::new();
    loop {
        out.push(QPoly::new(idx.iter().map(|&i| set[i].clone()).collect()));
        let mut k = 0;
        loop {
            if k == len {
                return out;
            }
            idx[k] += 1;
            if idx[k] < set.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn random_rational(rng: &mut ChaCha8Rng, height: u64, nonzero: bool) -> Rational {
    let h = height as i64;
    loop {
        let num: i64 = rng.gen_range(-h..=h);
        let den: i64 = rng.gen_range(1..=h);
        if !nonzero || num != 0 {
            return Rational::new(BigInt::from(num), BigInt::from(den));
        }
    }
}

/// `count` polynomials of uniformly random degree `≤ max_degree` whose
/// coefficients are rationals of height `≤ height`; never the zero polynomial.
pub fn random_polys(max_degree: usize, count: usize, height: u64, seed: u64) -> Vec<QPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let deg = rng.gen_range(0..=max_degree);
            let mut coeffs: Vec<Rational> = (0..deg)
                .map(|_| random_rational(&mut rng, height, false))
                .collect();
            coeffs.push(random_rational(&mut rng, height, true));
            QPoly::new(coeffs)
        })
        .collect()
}
