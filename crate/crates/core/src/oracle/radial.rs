//! Hadamard finite parts of `∫_0^∞ r^s e^{-r²} dr`.

use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

use super::quadrature::GaussLegendre;

/// Cut-off for the outer integral; `r^s e^{-r²}` is below `1e-30` past it
/// for every exponent the probes use.
const OUTER_LIMIT: f64 = 10.0;

/// Memoized finite parts, safe for concurrent readers.
#[derive(Debug, Default)]
pub struct RadialFinitePartTable {
    values: RwLock<BTreeMap<i32, f64>>,
}

impl RadialFinitePartTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide table used by [`radial_finite_part`].
    pub fn shared() -> &'static RadialFinitePartTable {
        static TABLE: OnceLock<RadialFinitePartTable> = OnceLock::new();
        TABLE.get_or_init(RadialFinitePartTable::new)
    }

    pub fn get(&self, s: i32) -> f64 {
        if let Some(v) = self.values.read().expect("radial table lock").get(&s) {
            return *v;
        }
        let v = compute(s);
        self.values.write().expect("radial table lock").insert(s, v);
        v
    }

    /// Number of memoized exponents.
    pub fn len(&self) -> usize {
        self.values.read().expect("radial table lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// F.p. `∫_0^∞ r^s e^{-r²} dr`, coefficient of `ε^0` with `log ε` dropped.
pub fn radial_finite_part(s: i32) -> f64 {
    RadialFinitePartTable::shared().get(s)
}

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(40))
}

fn factorial(j: u32) -> f64 {
    (1..=j).map(f64::from).product()
}

fn compute(s: i32) -> f64 {
    // subtracted Taylor terms: j >= 0 with s + 2j + 1 <= 0
    let count = if s < 0 { ((-(s + 1)) / 2 + 1) as u32 } else { 0 };
    let mut boundary = 0.0;
    for j in 0..count {
        let p = s + 2 * j as i32 + 1;
        if p != 0 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            boundary += sign / (factorial(j) * f64::from(p));
        }
    }
    let inner = rule().integrate(0.0, 1.0, |r| remainder(s, count, r));
    let outer = rule().integrate_composite(1.0, OUTER_LIMIT, 12, |r| r.powi(s) * (-r * r).exp());
    inner + boundary + outer
}

/// `r^s (e^{-r²} - Σ_{j<count} (-r²)^j/j!)`, summed from the tail series so
/// nothing cancels near the origin.
fn remainder(s: i32, count: u32, r: f64) -> f64 {
    let x = -r * r;
    let mut term = x.powi(count as i32) / factorial(count);
    let mut sum = 0.0;
    // r <= 1, so 30 further terms put the truncation below 1/30!
    for j in count + 1..count + 31 {
        sum += term;
        term *= x / f64::from(j);
    }
    sum * r.powi(s)
}
