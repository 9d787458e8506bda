//! Small chains used by tests, the acceptance suite and the CLI examples.

use crate::rational::rat;
use crate::valuation::{Chain, DepthZero};
use crate::{BaseValuation, ContinuousFamily, QPoly, Value};

fn p(s: &str) -> QPoly {
    s.parse().expect("fixture polynomial")
}

fn v(s: &str) -> Value {
    s.parse().expect("fixture value")
}

fn base(p: u64) -> BaseValuation {
    BaseValuation::new(p).expect("fixture prime")
}

/// `w̄_{0,1/2}` over `v_3`.
pub fn depth_zero_p3() -> Chain {
    Chain::new(base(3), DepthZero::new(rat(0), v("1/2")))
}

/// `w̄_{0,1}` over `v_2`.
pub fn depth_zero_p2() -> Chain {
    Chain::new(base(2), DepthZero::new(rat(0), v("1")))
}

/// `[w̄_{0,1/2}; x² + 3, 3/2]` over `v_3`.
pub fn inductive_p3() -> Chain {
    depth_zero_p3().augment(p("x^2 + 3"), v("3/2"))
}

/// [`inductive_p3`] followed by `[· ; x⁴ + 6x² − 18, 7/2]`.
pub fn inductive_p3_deep() -> Chain {
    inductive_p3().augment(p("x^4 + 6x^2 - 18"), v("7/2"))
}

/// Gauss valuation over `v_3` followed by a limit step along the Hensel
/// approximations of `√7`, with key polynomial `x² − 7` and value `(1, 0)`.
pub fn limit_p3_u7() -> Chain {
    let family = ContinuousFamily::hensel_sqrt(base(3), rat(7)).expect("7 is a 3-adic square");
    Chain::new(base(3), DepthZero::gauss()).limit_augment(family, p("x^2 - 7"), v("1|0"))
}
