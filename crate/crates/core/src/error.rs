use thiserror::Error;

/// Errors shared by every module of the engine.
///
/// Construction errors name the witness that broke the invariant (a failing
/// triple, a relator index, an element) so that diagnostics stay actionable
/// when a scenario file is wrong.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("multiplication table is not closed: entry ({a}, {b}) = {value} is out of range")]
    NotClosed { a: usize, b: usize, value: usize },

    #[error("associativity fails on the triple ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },

    #[error("element {0} is not a two-sided identity at index 0")]
    BadIdentity(usize),

    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),

    #[error("group order {order} exceeds the explicit-table bound {bound}")]
    OrderBound { order: usize, bound: usize },

    #[error("search requires {required} assignments, over the budget of {budget}")]
    Capacity { required: u128, budget: u64 },

    #[error("map is not a group morphism: image({a})*image({b}) != image({a}*{b})")]
    NotMorphism { a: usize, b: usize },

    #[error("map with image array {0:?} is not bijective")]
    NotBijective(Vec<usize>),

    #[error("matrix generator {0} is singular")]
    SingularGenerator(usize),

    #[error("word contains the forbidden letter 0")]
    ZeroLetter,

    #[error("letter {letter} references a generator outside 1..={ngens}")]
    LetterOutOfRange { letter: i64, ngens: usize },

    #[error("relator {0} is empty after free reduction")]
    EmptyRelator(usize),

    #[error("genus must be at least 1, got {0}")]
    BadGenus(usize),

    #[error("graph is not connected")]
    Disconnected,

    #[error("relator {relator} acts as a nontrivial automorphism; not a valid action")]
    RelatorActsNontrivially { relator: usize },

    #[error("crossed-morphism relator check failed on relator {relator}")]
    CrossedRelator { relator: usize },

    #[error("value index {0} is out of range for the coefficient group")]
    ValueOutOfRange(usize),

    #[error("nerve overlap ({i}, {j}) is invalid: {reason}")]
    BadOverlap { i: usize, j: usize, reason: String },

    #[error("triple ({i}, {j}, {k}) lacks one of its three double overlaps")]
    BadTriple { i: usize, j: usize, k: usize },

    #[error("twist data violates the automorphism-valued cocycle rule on triple ({i}, {j}, {k})")]
    TwistCocycle { i: usize, j: usize, k: usize },

    #[error("covering invariant failed: {0}")]
    NotCovering(String),

    #[error("cover is not Galois: {0}")]
    NotGalois(String),

    #[error("fibre sizes differ ({left} vs {right}); frame fibres would be empty")]
    FibreMismatch { left: usize, right: usize },

    #[error("torsor fibre action is not simply transitive over vertex {vertex}")]
    NotSimplyTransitive { vertex: usize },

    #[error("quotient data is invalid: {0}")]
    BadQuotient(String),

    #[error("holonomy extraction is inconsistent: {0}")]
    InconsistentHolonomy(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default cap on exhaustive searches: ten million assignments.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Checks an a-priori search size against a budget before enumerating.
pub fn check_budget(required: u128, budget: u64) -> Result<()> {
    if required > budget as u128 {
        Err(Error::Capacity { required, budget })
    } else {
        Ok(())
    }
}

/// `base^exp` in wide arithmetic so capacity reporting never wraps.
pub fn pow_u128(base: usize, exp: usize) -> u128 {
    let mut out: u128 = 1;
    for _ in 0..exp {
        out = out.saturating_mul(base as u128);
    }
    out
}
