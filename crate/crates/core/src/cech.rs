//! Nonabelian Čech H¹ over finite cover nerves, with constant or twisted
//! coefficients, and the bridge to group cohomology through the edge-path
//! group of the nerve.
//!
//! Cocycles live on the ordered double overlaps; only the canonical
//! direction `i < j` is stored and the antisymmetry law `g_ji = κ_ji(g_ij⁻¹)`
//! is applied on reversed traversal. Patches and overlaps are treated as
//! connected, so a value per overlap is exactly a locally constant section;
//! this is the regime in which the Čech classes compute the torsor
//! classification.

use crate::error::{check_budget, pow_u128, Error, Result};
use crate::fp::Presentation;
use crate::graph::Graph;
use crate::group::{FiniteGroup, GroupMorphism};
use rayon::prelude::*;

/// The nerve of a finite cover: patches, double overlaps and the triples on
/// which the cocycle law is imposed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nerve {
    patches: usize,
    /// Canonical double overlaps, `i < j`, sorted.
    edges: Vec<(usize, usize)>,
    /// Triples `i < j < k`, sorted; all three double overlaps present.
    triples: Vec<(usize, usize, usize)>,
}

impl Nerve {
    pub fn new(
        patches: usize,
        overlaps: Vec<(usize, usize)>,
        triples: Vec<(usize, usize, usize)>,
    ) -> Result<Self> {
        let mut edges = Vec::new();
        for (i, j) in overlaps {
            if i == j {
                return Err(Error::BadOverlap { i, j, reason: "diagonal overlap".into() });
            }
            if i >= patches || j >= patches {
                return Err(Error::BadOverlap { i, j, reason: "patch index out of range".into() });
            }
            let pair = (i.min(j), i.max(j));
            if !edges.contains(&pair) {
                edges.push(pair);
            }
        }
        edges.sort_unstable();
        let mut ts = Vec::new();
        for (a, b, c) in triples {
            let mut t = [a, b, c];
            t.sort_unstable();
            let (i, j, k) = (t[0], t[1], t[2]);
            if i == j || j == k {
                return Err(Error::BadTriple { i, j, k });
            }
            for pair in [(i, j), (j, k), (i, k)] {
                if edges.binary_search(&pair).is_err() {
                    return Err(Error::BadTriple { i, j, k });
                }
            }
            if !ts.contains(&(i, j, k)) {
                ts.push((i, j, k));
            }
        }
        ts.sort_unstable();
        let nerve = Nerve { patches, edges, triples: ts };
        if !nerve.skeleton()?.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(nerve)
    }

    pub fn patches(&self) -> usize {
        self.patches
    }

    pub fn overlaps(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn triples(&self) -> &[(usize, usize, usize)] {
        &self.triples
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        self.edges.binary_search(&(i.min(j), i.max(j))).ok()
    }

    /// The 1-skeleton as a multigraph on the patches.
    pub fn skeleton(&self) -> Result<Graph> {
        Graph::new(self.patches, self.edges.clone())
    }
}

/// Twist data: one automorphism of the coefficient group per canonical
/// overlap, satisfying the automorphism-valued cocycle rule on triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Twist {
    kappa: Vec<Vec<usize>>,
    kappa_inv: Vec<Vec<usize>>,
}

impl Twist {
    pub fn new(nerve: &Nerve, gamma: &FiniteGroup, kappa: Vec<Vec<usize>>) -> Result<Self> {
        if kappa.len() != nerve.overlaps().len() {
            return Err(Error::Invalid("one twist per overlap required".into()));
        }
        let mut kappa_inv = Vec::with_capacity(kappa.len());
        for arr in &kappa {
            let m = GroupMorphism::new(gamma, gamma, arr.clone())?;
            if !m.is_bijective(gamma.order()) {
                return Err(Error::NotBijective(arr.clone()));
            }
            let mut inv = vec![0usize; arr.len()];
            for (x, &y) in arr.iter().enumerate() {
                inv[y] = x;
            }
            kappa_inv.push(inv);
        }
        // κ_ik = κ_ij ∘ κ_jk on every triple
        for &(i, j, k) in nerve.triples() {
            let eij = nerve.edge_index(i, j).unwrap();
            let ejk = nerve.edge_index(j, k).unwrap();
            let eik = nerve.edge_index(i, k).unwrap();
            for x in 0..gamma.order() {
                if kappa[eik][x] != kappa[eij][kappa[ejk][x]] {
                    return Err(Error::TwistCocycle { i, j, k });
                }
            }
        }
        Ok(Twist { kappa, kappa_inv })
    }

    pub fn identity(nerve: &Nerve, gamma: &FiniteGroup) -> Self {
        let id: Vec<usize> = (0..gamma.order()).collect();
        Twist {
            kappa: vec![id.clone(); nerve.overlaps().len()],
            kappa_inv: vec![id; nerve.overlaps().len()],
        }
    }

    /// The twist along the directed overlap `from -> to`.
    pub fn directed(&self, nerve: &Nerve, from: usize, to: usize) -> &[usize] {
        let e = nerve.edge_index(from, to).expect("adjacent patches");
        if from < to {
            &self.kappa[e]
        } else {
            &self.kappa_inv[e]
        }
    }
}

/// A Čech 1-cochain on the canonical overlaps. Validity is the triple law;
/// use [`check_cocycle`] for diagnostics and [`CechCocycle::new`] to
/// construct a verified cocycle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CechCocycle {
    values: Vec<usize>,
}

impl CechCocycle {
    pub fn new(
        nerve: &Nerve,
        gamma: &FiniteGroup,
        twist: &Twist,
        values: Vec<usize>,
    ) -> Result<Self> {
        if values.len() != nerve.overlaps().len() {
            return Err(Error::Invalid("one value per overlap required".into()));
        }
        for &v in &values {
            if v >= gamma.order() {
                return Err(Error::ValueOutOfRange(v));
            }
        }
        let report = check_cocycle(nerve, gamma, twist, &values);
        if let Some(&(i, j, k)) = report.violated_triples.first() {
            return Err(Error::Invalid(format!(
                "cocycle law fails on triple ({i}, {j}, {k})"
            )));
        }
        Ok(CechCocycle { values })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// The value of a cochain along the directed overlap `from -> to`,
/// applying the antisymmetry law when the direction is reversed.
pub fn directed_value(
    nerve: &Nerve,
    gamma: &FiniteGroup,
    twist: &Twist,
    values: &[usize],
    from: usize,
    to: usize,
) -> usize {
    let e = nerve.edge_index(from, to).expect("adjacent patches");
    if from < to {
        values[e]
    } else {
        twist.directed(nerve, from, to)[gamma.inv(values[e])]
    }
}

/// Diagnostic result of the cocycle check.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CocycleReport {
    /// Triples on which `g_ik != g_ij · κ_ij(g_jk)`.
    pub violated_triples: Vec<(usize, usize, usize)>,
}

impl CocycleReport {
    pub fn is_valid(&self) -> bool {
        self.violated_triples.is_empty()
    }
}

/// Lists every triple on which the cocycle law fails; the empty report
/// certifies validity.
pub fn check_cocycle(
    nerve: &Nerve,
    gamma: &FiniteGroup,
    twist: &Twist,
    values: &[usize],
) -> CocycleReport {
    let mut report = CocycleReport::default();
    for &(i, j, k) in nerve.triples() {
        let gij = values[nerve.edge_index(i, j).unwrap()];
        let gjk = values[nerve.edge_index(j, k).unwrap()];
        let gik = values[nerve.edge_index(i, k).unwrap()];
        let kij = twist.directed(nerve, i, j);
        if gik != gamma.mul(gij, kij[gjk]) {
            report.violated_triples.push((i, j, k));
        }
    }
    report
}

/// Classification of all valid cocycles modulo patchwise coboundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CechClassification {
    /// Valid cocycles in lexicographic order of their value tuples.
    pub cocycles: Vec<CechCocycle>,
    pub orbits: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
}

impl CechClassification {
    pub fn class_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn find(&self, values: &[usize]) -> Option<usize> {
        self.cocycles
            .binary_search_by(|c| c.values.as_slice().cmp(values))
            .ok()
    }

    pub fn orbit_of(&self, index: usize) -> Option<usize> {
        self.orbits.iter().position(|o| o.binary_search(&index).is_ok())
    }
}

/// Applies the coboundary `(u_i)` to a cochain:
/// `h_ij = u_i · g_ij · κ_ij(u_j⁻¹)`.
pub fn apply_coboundary(
    nerve: &Nerve,
    gamma: &FiniteGroup,
    twist: &Twist,
    values: &[usize],
    u: &[usize],
) -> Vec<usize> {
    nerve
        .overlaps()
        .iter()
        .enumerate()
        .map(|(e, &(i, j))| {
            let kij = twist.directed(nerve, i, j);
            gamma.mul(gamma.mul(u[i], values[e]), kij[gamma.inv(u[j])])
        })
        .collect()
}

/// Enumerates all valid cocycles and partitions them into coboundary
/// orbits; representatives are lexicographically minimal. The grid `|Γ|^E`
/// is gated by the budget before enumeration.
pub fn cech_h1(
    nerve: &Nerve,
    gamma: &FiniteGroup,
    twist: Option<&Twist>,
    budget: u64,
) -> Result<CechClassification> {
    let identity_twist;
    let twist = match twist {
        Some(t) => t,
        None => {
            identity_twist = Twist::identity(nerve, gamma);
            &identity_twist
        }
    };
    let ne = nerve.overlaps().len();
    check_budget(pow_u128(gamma.order(), ne), budget)?;
    // triples become checkable once their last canonical edge is assigned
    let mut check_at: Vec<Vec<usize>> = vec![Vec::new(); ne + 1];
    for (t, &(i, j, k)) in nerve.triples().iter().enumerate() {
        let last = [(i, j), (j, k), (i, k)]
            .iter()
            .map(|&(a, b)| nerve.edge_index(a, b).unwrap())
            .max()
            .unwrap();
        check_at[last + 1].push(t);
    }
    let triple_holds = |t: usize, values: &[usize]| -> bool {
        let (i, j, k) = nerve.triples()[t];
        let gij = values[nerve.edge_index(i, j).unwrap()];
        let gjk = values[nerve.edge_index(j, k).unwrap()];
        let gik = values[nerve.edge_index(i, k).unwrap()];
        gik == gamma.mul(gij, twist.directed(nerve, i, j)[gjk])
    };
    let mut tuples: Vec<Vec<usize>> = if ne == 0 {
        vec![Vec::new()]
    } else {
        let chunks: Vec<Vec<Vec<usize>>> = (0..gamma.order())
            .into_par_iter()
            .map(|first| {
                let mut values = vec![0usize; ne];
                values[0] = first;
                let mut found = Vec::new();
                if check_at[1].iter().all(|&t| triple_holds(t, &values)) {
                    cech_dfs(gamma, ne, &check_at, &triple_holds, 1, &mut values, &mut found);
                }
                found
            })
            .collect();
        chunks.into_iter().flatten().collect()
    };
    tuples.sort_unstable();
    // orbit saturation with single-patch coboundary generators
    let movers = nerve.patches() * gamma.order();
    let find = |v: &[usize]| tuples.binary_search_by(|x| x.as_slice().cmp(v));
    let mut orbit_id = vec![usize::MAX; tuples.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..tuples.len() {
        if orbit_id[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = vec![start];
        orbit_id[start] = id;
        let mut queue = vec![start];
        while let Some(idx) = queue.pop() {
            for m in 0..movers {
                let mut u = vec![0usize; nerve.patches()];
                u[m / gamma.order()] = m % gamma.order();
                let image = apply_coboundary(nerve, gamma, twist, &tuples[idx], &u);
                let j = find(&image).map_err(|_| {
                    Error::Invalid("coboundary image is not a valid cocycle".into())
                })?;
                if orbit_id[j] == usize::MAX {
                    orbit_id[j] = id;
                    orbit.push(j);
                    queue.push(j);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    let representatives = orbits.iter().map(|o| o[0]).collect();
    let cocycles = tuples.into_iter().map(|values| CechCocycle { values }).collect();
    Ok(CechClassification { cocycles, orbits, representatives })
}

#[allow(clippy::too_many_arguments)]
fn cech_dfs(
    gamma: &FiniteGroup,
    ne: usize,
    check_at: &[Vec<usize>],
    triple_holds: &dyn Fn(usize, &[usize]) -> bool,
    depth: usize,
    values: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    if depth == ne {
        found.push(values.clone());
        return;
    }
    for v in 0..gamma.order() {
        values[depth] = v;
        if check_at[depth + 1].iter().all(|&t| triple_holds(t, values)) {
            cech_dfs(gamma, ne, check_at, triple_holds, depth + 1, values, found);
        }
    }
    values[depth] = 0;
}

/// Searches for a coboundary witness `(u_i)` with `h_ij = u_i g_ij κ_ij(u_j⁻¹)`.
///
/// One patch per connected component carries a free value; the rest is
/// forced along a spanning tree, after which the remaining overlaps are
/// verified. Pinning the free value to the identity would miss witnesses
/// whose root value is not central, so the root value is enumerated over Γ.
pub fn coboundary_equivalent(
    nerve: &Nerve,
    gamma: &FiniteGroup,
    twist: Option<&Twist>,
    c: &CechCocycle,
    c_prime: &CechCocycle,
    budget: u64,
) -> Result<Option<Vec<usize>>> {
    let identity_twist;
    let twist = match twist {
        Some(t) => t,
        None => {
            identity_twist = Twist::identity(nerve, gamma);
            &identity_twist
        }
    };
    if c.values().len() != nerve.overlaps().len() || c_prime.values().len() != nerve.overlaps().len() {
        return Err(Error::Invalid("cocycles must live on the same nerve".into()));
    }
    let skeleton = nerve.skeleton()?;
    check_budget(pow_u128(gamma.order(), 1), budget)?;
    let tree = skeleton.spanning_tree(0)?;
    for root_value in 0..gamma.order() {
        let mut u = vec![0usize; nerve.patches()];
        u[0] = root_value;
        // forced propagation along tree paths: u_b = κ_ab⁻¹(h_ab⁻¹ · u_a · g_ab)
        for v in 0..nerve.patches() {
            let mut at = 0usize;
            for step in &tree.path_from_root[v] {
                let (a, b) = skeleton.step_endpoints(*step);
                debug_assert_eq!(a, at);
                let g_ab = directed_value(nerve, gamma, twist, c.values(), a, b);
                let h_ab = directed_value(nerve, gamma, twist, c_prime.values(), a, b);
                let inner = gamma.mul(gamma.mul(gamma.inv(h_ab), u[a]), g_ab);
                let kab = twist.directed(nerve, a, b);
                let kab_inv = {
                    let mut inv = vec![0usize; kab.len()];
                    for (x, &y) in kab.iter().enumerate() {
                        inv[y] = x;
                    }
                    inv
                };
                u[b] = kab_inv[inner];
                at = b;
            }
        }
        let ok = nerve.overlaps().iter().enumerate().all(|(e, &(i, j))| {
            let kij = twist.directed(nerve, i, j);
            c_prime.values()[e] == gamma.mul(gamma.mul(u[i], c.values()[e]), kij[gamma.inv(u[j])])
        });
        if ok {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

/// Edge-path presentation of the nerve: free on the cotree overlaps, one
/// relator per triple in the orientation matching the cocycle law.
#[derive(Debug, Clone)]
pub struct NervePi1 {
    pub presentation: Presentation,
    pub skeleton: Graph,
    pub free_data: crate::fp::GraphPi1,
}

pub fn nerve_pi1(nerve: &Nerve) -> Result<NervePi1> {
    let skeleton = nerve.skeleton()?;
    let free_data = crate::fp::graph_pi1(&skeleton, 0)?;
    let mut relators = Vec::new();
    for &(i, j, k) in nerve.triples() {
        let wij = &free_data.edge_words[nerve.edge_index(i, j).unwrap()];
        let wjk = &free_data.edge_words[nerve.edge_index(j, k).unwrap()];
        let wik = &free_data.edge_words[nerve.edge_index(i, k).unwrap()];
        let relator = wij.concat(wjk).concat(&wik.inverse());
        if !relator.is_empty() {
            relators.push(relator);
        }
    }
    let presentation = Presentation::new(free_data.presentation.ngens(), relators)?;
    Ok(NervePi1 { presentation, skeleton, free_data })
}

/// The action of each edge-path generator on Γ: the twist holonomy of its
/// loop. Trivial for untwisted coefficients.
pub fn nerve_action(
    nerve: &Nerve,
    gamma: &FiniteGroup,
    twist: &Twist,
    np: &NervePi1,
) -> Vec<Vec<usize>> {
    np.free_data
        .generator_edges
        .iter()
        .map(|&e| {
            let steps = np.skeleton.edge_loop(&np.free_data.tree, e);
            let mut acc: Vec<usize> = (0..gamma.order()).collect();
            for s in steps {
                let (a, b) = np.skeleton.step_endpoints(s);
                let kab = twist.directed(nerve, a, b);
                // path composition: acc ∘ κ_ab
                acc = (0..gamma.order()).map(|x| acc[kab[x]]).collect();
            }
            acc
        })
        .collect()
}

/// The Γ-holonomy of a cochain along each generator loop, composing values
/// by `(v₁, κ₁)·(v₂, κ₂) = (v₁·κ₁(v₂), κ₁∘κ₂)`.
pub fn cocycle_holonomy(
    nerve: &Nerve,
    gamma: &FiniteGroup,
    twist: &Twist,
    np: &NervePi1,
    values: &[usize],
) -> Vec<usize> {
    np.free_data
        .generator_edges
        .iter()
        .map(|&e| {
            let steps = np.skeleton.edge_loop(&np.free_data.tree, e);
            let mut v = gamma.identity();
            let mut k: Vec<usize> = (0..gamma.order()).collect();
            for s in steps {
                let (a, b) = np.skeleton.step_endpoints(s);
                let g_ab = directed_value(nerve, gamma, twist, values, a, b);
                let k_ab = twist.directed(nerve, a, b);
                // (v, k)·(g_ab, κ_ab) = (v·k(g_ab), k ∘ κ_ab)
                v = gamma.mul(v, k[g_ab]);
                k = (0..gamma.order()).map(|x| k[k_ab[x]]).collect();
            }
            v
        })
        .collect()
}

/// Outcome of running both classification routes over the same data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CechComparison {
    pub cech_classes: usize,
    pub group_classes: usize,
    /// Pairs (Čech orbit, group-cohomology orbit) matched through the
    /// edge holonomy of canonical representatives.
    pub pairs: Vec<(usize, usize)>,
    pub matched: bool,
    pub failure: Option<String>,
}

/// Computes the Čech classification and the group-cohomology classification
/// of the edge-path group with the induced action, and matches the two
/// through edge holonomy. A mismatch is reported, never reconciled.
pub fn compare_cech_group_cohomology(
    nerve: &Nerve,
    gamma: &FiniteGroup,
    twist: Option<&Twist>,
    budget: u64,
) -> Result<CechComparison> {
    let identity_twist;
    let twist = match twist {
        Some(t) => t,
        None => {
            identity_twist = Twist::identity(nerve, gamma);
            &identity_twist
        }
    };
    let cech = cech_h1(nerve, gamma, Some(twist), budget)?;
    let np = nerve_pi1(nerve)?;
    let action = nerve_action(nerve, gamma, twist, &np);
    let pg = crate::cohomology::PiGroup::new(np.presentation.clone(), gamma.clone(), action)?;
    let group = crate::cohomology::h1_classes(&pg, budget)?;

    let mut pairs = Vec::new();
    let mut hit = vec![false; group.orbits.len()];
    let mut failure = None;
    'outer: for (c_orbit, &rep) in cech.representatives.iter().enumerate() {
        let hol = cocycle_holonomy(nerve, gamma, twist, &np, cech.cocycles[rep].values());
        match group.find(&hol) {
            None => {
                failure = Some(format!(
                    "holonomy {hol:?} of Čech representative {c_orbit} is not a crossed morphism"
                ));
                break 'outer;
            }
            Some(idx) => {
                let g_orbit = group.orbit_of(idx).expect("classified index");
                if hit[g_orbit] {
                    failure = Some(format!(
                        "two Čech classes map to group-cohomology class {g_orbit}"
                    ));
                    break 'outer;
                }
                hit[g_orbit] = true;
                pairs.push((c_orbit, g_orbit));
            }
        }
    }
    let matched =
        failure.is_none() && cech.class_count() == group.class_count();
    let failure = failure.or_else(|| {
        if cech.class_count() != group.class_count() {
            Some(format!(
                "class counts differ: Čech {} vs group cohomology {}",
                cech.class_count(),
                group.class_count()
            ))
        } else {
            None
        }
    });
    Ok(CechComparison {
        cech_classes: cech.class_count(),
        group_classes: group.class_count(),
        pairs,
        matched,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::DEFAULT_BUDGET;

    fn circle_nerve() -> Nerve {
        Nerve::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![]).unwrap()
    }

    fn triangle_nerve() -> Nerve {
        Nerve::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![(0, 1, 2)]).unwrap()
    }

    fn path_nerve() -> Nerve {
        Nerve::new(3, vec![(0, 1), (1, 2)], vec![]).unwrap()
    }

    #[test]
    fn nerve_validation() {
        assert!(matches!(
            Nerve::new(3, vec![(0, 0)], vec![]),
            Err(Error::BadOverlap { .. })
        ));
        assert!(matches!(
            Nerve::new(3, vec![(0, 1), (1, 2)], vec![(0, 1, 2)]),
            Err(Error::BadTriple { .. })
        ));
        // disconnected skeleton
        assert!(matches!(
            Nerve::new(4, vec![(0, 1), (2, 3)], vec![]),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn check_cocycle_examples() {
        let gamma = FiniteGroup::cyclic(3).unwrap();
        let nerve = triangle_nerve();
        let twist = Twist::identity(&nerve, &gamma);
        // all identities: valid
        assert!(check_cocycle(&nerve, &gamma, &twist, &[0, 0, 0]).is_valid());
        // circle nerve has no triple constraints
        let circle = circle_nerve();
        let tw = Twist::identity(&circle, &gamma);
        assert!(check_cocycle(&circle, &gamma, &tw, &[1, 2, 1]).is_valid());
        // canonical edges of the triangle are (0,1), (0,2), (1,2):
        // g01 = g12 = x and g02 = x² satisfies g02 = g01·g12
        assert!(check_cocycle(&nerve, &gamma, &twist, &[1, 2, 1]).is_valid());
        // g02 = x violates the triple
        let report = check_cocycle(&nerve, &gamma, &twist, &[1, 1, 1]);
        assert_eq!(report.violated_triples, vec![(0, 1, 2)]);
    }

    #[test]
    fn coboundary_equivalence_on_circle_is_conjugacy() {
        // compose the three edge values around the cycle; coboundaries
        // conjugate the product, so classes correspond to conjugacy classes
        let gamma = FiniteGroup::symmetric(3).unwrap();
        let nerve = circle_nerve();
        let twist = Twist::identity(&nerve, &gamma);
        let holonomy = |values: &[usize]| {
            // walk 0 -> 1 -> 2 -> 0
            let mut v = 0usize;
            for (a, b) in [(0usize, 1usize), (1, 2), (2, 0)] {
                v = gamma.mul(v, directed_value(&nerve, &gamma, &twist, values, a, b));
            }
            v
        };
        for x in 0..6 {
            for y in 0..6 {
                let c = CechCocycle::new(&nerve, &gamma, &twist, vec![x, 0, 0]).unwrap();
                let c2 = CechCocycle::new(&nerve, &gamma, &twist, vec![y, 0, 0]).unwrap();
                let equivalent =
                    coboundary_equivalent(&nerve, &gamma, Some(&twist), &c, &c2, DEFAULT_BUDGET)
                        .unwrap();
                let conjugate = (0..6).any(|g| gamma.conjugate(g, holonomy(c.values())) == holonomy(c2.values()));
                assert_eq!(equivalent.is_some(), conjugate, "x={x} y={y}");
                if let Some(u) = equivalent {
                    // witness verifies the displayed relation on every pair
                    for (e, &(i, j)) in nerve.overlaps().iter().enumerate() {
                        assert_eq!(
                            c2.values()[e],
                            gamma.mul(gamma.mul(u[i], c.values()[e]), gamma.inv(u[j]))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn identical_cocycles_admit_identity_witness() {
        let gamma = FiniteGroup::cyclic(3).unwrap();
        let nerve = circle_nerve();
        let twist = Twist::identity(&nerve, &gamma);
        let c = CechCocycle::new(&nerve, &gamma, &twist, vec![1, 2, 0]).unwrap();
        let w = coboundary_equivalent(&nerve, &gamma, None, &c, &c, DEFAULT_BUDGET)
            .unwrap()
            .unwrap();
        assert_eq!(w, vec![0, 0, 0]);
    }

    #[test]
    fn tree_nerve_cocycles_are_all_equivalent() {
        let gamma = FiniteGroup::symmetric(3).unwrap();
        let nerve = path_nerve();
        let twist = Twist::identity(&nerve, &gamma);
        for a in 0..6 {
            for b in 0..6 {
                let c = CechCocycle::new(&nerve, &gamma, &twist, vec![a, b]).unwrap();
                let trivial = CechCocycle::new(&nerve, &gamma, &twist, vec![0, 0]).unwrap();
                assert!(coboundary_equivalent(&nerve, &gamma, None, &c, &trivial, DEFAULT_BUDGET)
                    .unwrap()
                    .is_some());
            }
        }
    }

    #[test]
    fn cech_h1_counts() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let res = cech_h1(&circle_nerve(), &s3, None, DEFAULT_BUDGET).unwrap();
        // classes of the circle correspond to conjugacy classes of S3
        assert_eq!(res.class_count(), 3);

        let res = cech_h1(&path_nerve(), &s3, None, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.class_count(), 1);

        // twisted circle: inversion on one edge of a Z/3 circle
        let c3 = FiniteGroup::cyclic(3).unwrap();
        let nerve = circle_nerve();
        let id: Vec<usize> = (0..3).collect();
        let inv: Vec<usize> = (0..3).map(|x| c3.inv(x)).collect();
        let twist = Twist::new(&nerve, &c3, vec![inv, id.clone(), id]).unwrap();
        let res = cech_h1(&nerve, &c3, Some(&twist), DEFAULT_BUDGET).unwrap();
        assert_eq!(res.class_count(), 1);
    }

    #[test]
    fn representatives_pass_the_cocycle_check() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let nerve = triangle_nerve();
        let twist = Twist::identity(&nerve, &s3);
        let res = cech_h1(&nerve, &s3, None, DEFAULT_BUDGET).unwrap();
        for &rep in &res.representatives {
            assert!(check_cocycle(&nerve, &s3, &twist, res.cocycles[rep].values()).is_valid());
        }
    }

    #[test]
    fn nerve_pi1_examples() {
        assert_eq!(nerve_pi1(&circle_nerve()).unwrap().presentation.ngens(), 1);
        assert_eq!(nerve_pi1(&circle_nerve()).unwrap().presentation.relators().len(), 0);

        // full triangle: rank 1 with one killing relator
        let np = nerve_pi1(&triangle_nerve()).unwrap();
        assert_eq!(np.presentation.ngens(), 1);
        assert_eq!(np.presentation.relators().len(), 1);
        let c5 = FiniteGroup::cyclic(5).unwrap();
        let homs = crate::fp::enumerate_homs(&np.presentation, &c5, DEFAULT_BUDGET).unwrap();
        assert_eq!(homs.len(), 1);

        // two triangles sharing an edge, both triples present: trivial group
        let two = Nerve::new(
            4,
            vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)],
            vec![(0, 1, 2), (1, 2, 3)],
        )
        .unwrap();
        let np = nerve_pi1(&two).unwrap();
        assert_eq!(np.presentation.ngens(), 2);
        let homs = crate::fp::enumerate_homs(&np.presentation, &c5, DEFAULT_BUDGET).unwrap();
        assert_eq!(homs.len(), 1);
    }

    #[test]
    fn comparison_matches_on_standard_nerves() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let cmp = compare_cech_group_cohomology(&circle_nerve(), &s3, None, DEFAULT_BUDGET).unwrap();
        assert!(cmp.matched, "{:?}", cmp.failure);
        assert_eq!(cmp.cech_classes, 3);
        assert_eq!(cmp.group_classes, 3);

        let cmp = compare_cech_group_cohomology(&path_nerve(), &s3, None, DEFAULT_BUDGET).unwrap();
        assert!(cmp.matched);
        assert_eq!(cmp.cech_classes, 1);

        let c3 = FiniteGroup::cyclic(3).unwrap();
        let nerve = circle_nerve();
        let id: Vec<usize> = (0..3).collect();
        let inv: Vec<usize> = (0..3).map(|x| c3.inv(x)).collect();
        let twist = Twist::new(&nerve, &c3, vec![inv, id.clone(), id]).unwrap();
        let cmp = compare_cech_group_cohomology(&nerve, &c3, Some(&twist), DEFAULT_BUDGET).unwrap();
        assert!(cmp.matched, "{:?}", cmp.failure);
        assert_eq!(cmp.cech_classes, 1);
    }

    #[test]
    fn twist_must_satisfy_the_cocycle_rule() {
        let c3 = FiniteGroup::cyclic(3).unwrap();
        let nerve = triangle_nerve();
        let id: Vec<usize> = (0..3).collect();
        let inv: Vec<usize> = (0..3).map(|x| c3.inv(x)).collect();
        // inversion on a single edge of a full triangle breaks κ_ik = κ_ij∘κ_jk
        let err = Twist::new(&nerve, &c3, vec![inv.clone(), id.clone(), id.clone()]).unwrap_err();
        assert!(matches!(err, Error::TwistCocycle { .. }));
        // inversion on (0,1) and (0,2) with identity on (1,2) is consistent
        assert!(Twist::new(&nerve, &c3, vec![inv.clone(), inv, id]).is_ok());
    }
}
