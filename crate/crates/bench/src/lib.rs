//! Shared fixtures for the criterion benchmarks.

use torsorforge_core::{FiniteGroup, Nerve, PiGroup, Presentation};

/// Free rank-3 module over the symmetric group on three letters.
pub fn free3_s3_module() -> PiGroup {
    let s3 = FiniteGroup::symmetric(3).unwrap();
    PiGroup::trivial_action(Presentation::free(3), s3).unwrap()
}

/// The circle nerve on four patches.
pub fn circle4() -> Nerve {
    Nerve::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)], vec![]).unwrap()
}

/// The elementary abelian group of order eight.
pub fn elementary_eight() -> FiniteGroup {
    let c2 = FiniteGroup::cyclic(2).unwrap();
    FiniteGroup::direct_product(&FiniteGroup::direct_product(&c2, &c2).unwrap(), &c2).unwrap()
}
