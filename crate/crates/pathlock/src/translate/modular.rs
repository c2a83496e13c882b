//! Distributing an integer over `r` near-equal components.
//!
//! `mod_encode(n, r)` splits `n` into `r` components that sum to `n` and
//! pairwise differ by at most one, together with the remainder `n mod r`;
//! the larger components occupy the first `n mod r` slots. `mod_add`
//! combines two encodings without reconstructing the integers: knowing the
//! left remainder is enough to decide which component pairs to add, which is
//! what lets a 1-access machine simulate an `r`-access one. Components are
//! kept as counter expressions so the same addition law covers both the
//! integer case and the extended case where the right operand mentions
//! counters.

use crate::machine::{CounterExpr, CounterId};
use crate::{Error, Result};

/// An `(r+1)`-tuple `⟨e_0, …, e_{r-1} : remainder⟩` with expression
/// components. Integer encodings use constant expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularEncoding {
    pub components: Vec<CounterExpr>,
    pub remainder: i64,
}

impl ModularEncoding {
    pub fn modulus(&self) -> i64 {
        self.components.len() as i64
    }

    /// The integer components, if every component is constant.
    pub fn as_ints(&self) -> Option<Vec<i64>> {
        self.components
            .iter()
            .map(|e| e.vars().is_empty().then(|| e.constant_part()))
            .collect()
    }
}

/// Euclidean division helpers: `n mod r` in `[0, r)` for any sign of `n`.
fn rem_euclid(n: i64, r: i64) -> i64 {
    n.rem_euclid(r)
}

fn div_floor(n: i64, r: i64) -> i64 {
    n.div_euclid(r)
}

fn div_ceil(n: i64, r: i64) -> i64 {
    -(-n).div_euclid(r)
}

/// Encodes `n` over `r` components: `⌈n/r⌉` in the first `n mod r` slots and
/// `⌊n/r⌋` in the rest.
pub fn mod_encode(n: i64, r: i64) -> ModularEncoding {
    assert!(r >= 1, "modulus must be positive");
    let rem = rem_euclid(n, r);
    let components = (0..r)
        .map(|i| {
            CounterExpr::constant(if i < rem {
                div_ceil(n, r)
            } else {
                div_floor(n, r)
            })
        })
        .collect();
    ModularEncoding {
        components,
        remainder: rem,
    }
}

fn add_exprs(a: &CounterExpr, b: &CounterExpr) -> CounterExpr {
    let mut vars = a.vars().to_vec();
    vars.extend_from_slice(b.vars());
    CounterExpr::new(vars, a.constant_part() + b.constant_part())
}

/// Componentwise addition: `n_i = ℓ_i + m_{(i - r_ℓ) mod r}` with remainder
/// `(r_ℓ + r_m) mod r`. On integer encodings this agrees with addition of
/// the represented values; the right operand may mention counters.
pub fn mod_add(left: &ModularEncoding, right: &ModularEncoding) -> Result<ModularEncoding> {
    let r = left.modulus();
    if r != right.modulus() {
        return Err(Error::Precondition(format!(
            "modular encodings mix moduli {r} and {}",
            right.modulus()
        )));
    }
    let components = (0..r)
        .map(|i| {
            let j = rem_euclid(i - left.remainder, r) as usize;
            add_exprs(&left.components[i as usize], &right.components[j])
        })
        .collect();
    Ok(ModularEncoding {
        components,
        remainder: rem_euclid(left.remainder + right.remainder, r),
    })
}

/// The tuple `⟨x_0, …, x_{r-1} : α(x)⟩` standing for the distributed value
/// of counter `x`, with components named through `component_var`.
fn var_tuple(
    x: CounterId,
    r: i64,
    alpha_x: i64,
    component_var: &impl Fn(CounterId, usize) -> CounterId,
) -> ModularEncoding {
    ModularEncoding {
        components: (0..r as usize)
            .map(|i| CounterExpr::var_plus(component_var(x, i), 0))
            .collect(),
        remainder: alpha_x,
    }
}

/// Translates one counter expression of an `r`-access machine into the `r`
/// component expressions of its 1-access simulator, given the remainder map
/// `alpha` held in finite-state memory. Every component constant lands in
/// `[-1, 1]`.
pub fn translate_expression_mod(
    expr: &CounterExpr,
    r: i64,
    alpha: &impl Fn(CounterId) -> i64,
    component_var: &impl Fn(CounterId, usize) -> CounterId,
) -> Result<ModularEncoding> {
    let mut acc = mod_encode(expr.constant_part(), r);
    for &x in expr.vars().iter().rev() {
        acc = mod_add(&var_tuple(x, r, alpha(x), component_var), &acc)?;
    }
    for component in &acc.components {
        let c = component.constant_part();
        if !(-1..=1).contains(&c) {
            return Err(Error::Invalid(format!(
                "translated component constant {c} escapes [-1, 1]"
            )));
        }
    }
    Ok(acc)
}
