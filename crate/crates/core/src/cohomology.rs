//! Crossed morphisms, coboundary actions and the nonabelian cohomology sets
//! H¹ for every coefficient shape the classification theorems use.
//!
//! Conventions, fixed once for the whole engine:
//!
//! * a coefficient module is a finite group `M` with a left action of the
//!   presented group, given by one automorphism per generator and extended
//!   multiplicatively to words;
//! * a crossed morphism satisfies `ρ(uv) = ρ(u) · (u · ρ(v))`, so the value
//!   on an inverse letter is forced: `ρ(x⁻¹) = x⁻¹ · ρ(x)⁻¹`;
//! * the coboundary action is `(m • ρ)(g) = m · ρ(g) · (g · m)⁻¹`, and H¹ is
//!   the orbit set of this action on the set of crossed morphisms.
//!
//! The section convention (twist applied inside, values living in the group
//! of sections of the pulled-back bundle) is reconciled with the convention
//! above by [`section_to_crossed`]; classification counts agree and that
//! equality is part of the test suite rather than being assumed.

use crate::error::{Error, Result};
use crate::fp::{evaluate_hom, Presentation, Word};
use crate::group::{enumerate_automorphisms, grid_budget, FiniteGroup, GroupMorphism, TABLE_BOUND};
use rayon::prelude::*;

/// A finite coefficient group together with an action of a finitely
/// presented group, specified on generators and validated on relators.
#[derive(Debug, Clone)]
pub struct PiGroup {
    pi: Presentation,
    coeff: FiniteGroup,
    gen_action: Vec<Vec<usize>>,
    gen_action_inv: Vec<Vec<usize>>,
}

impl PiGroup {
    pub fn new(pi: Presentation, coeff: FiniteGroup, gen_action: Vec<Vec<usize>>) -> Result<Self> {
        if gen_action.len() != pi.ngens() {
            return Err(Error::Invalid(format!(
                "need {} generator actions, got {}",
                pi.ngens(),
                gen_action.len()
            )));
        }
        let mut gen_action_inv = Vec::with_capacity(gen_action.len());
        for arr in &gen_action {
            let m = GroupMorphism::new(&coeff, &coeff, arr.clone())?;
            if !m.is_bijective(coeff.order()) {
                return Err(Error::NotBijective(arr.clone()));
            }
            gen_action_inv.push(invert_permutation(arr));
        }
        let pg = PiGroup { pi, coeff, gen_action, gen_action_inv };
        for (i, r) in pg.pi.relators().iter().enumerate() {
            if !pg.word_acts_trivially(r) {
                return Err(Error::RelatorActsNontrivially { relator: i });
            }
        }
        Ok(pg)
    }

    /// Coefficients with every generator acting as the identity.
    pub fn trivial_action(pi: Presentation, coeff: FiniteGroup) -> Result<Self> {
        let id: Vec<usize> = (0..coeff.order()).collect();
        let gen_action = vec![id; pi.ngens()];
        PiGroup::new(pi, coeff, gen_action)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pi
    }

    pub fn coefficients(&self) -> &FiniteGroup {
        &self.coeff
    }

    pub fn generator_action(&self, gen: usize) -> &[usize] {
        &self.gen_action[gen]
    }

    /// Applies the action of a single letter (`+k` or `-k`).
    fn act_letter(&self, letter: i64, m: usize) -> usize {
        let g = (letter.unsigned_abs() as usize) - 1;
        if letter > 0 {
            self.gen_action[g][m]
        } else {
            self.gen_action_inv[g][m]
        }
    }

    /// The left action of a word: `w · m`.
    pub fn act(&self, word: &Word, m: usize) -> usize {
        let mut acc = m;
        for &l in word.letters().iter().rev() {
            acc = self.act_letter(l, acc);
        }
        acc
    }

    fn word_acts_trivially(&self, word: &Word) -> bool {
        (0..self.coeff.order()).all(|m| self.act(word, m) == m)
    }

    /// Extends generator values to a word by the crossed rule
    /// `ρ(xw) = ρ(x) · (x · ρ(w))`.
    pub fn extend_crossed(&self, values: &[usize], word: &Word) -> usize {
        let mut acc = self.coeff.identity();
        for &l in word.letters().iter().rev() {
            let g = (l.unsigned_abs() as usize) - 1;
            let head = if l > 0 {
                values[g]
            } else {
                // forced by ρ(x x⁻¹) = 1
                self.gen_action_inv[g][self.coeff.inv(values[g])]
            };
            acc = self.coeff.mul(head, self.act_letter(l, acc));
        }
        acc
    }

    /// Validates generator values as a crossed morphism.
    pub fn crossed(&self, values: Vec<usize>) -> Result<CrossedMorphism> {
        if values.len() != self.pi.ngens() {
            return Err(Error::Invalid("one value per generator required".into()));
        }
        for &v in &values {
            if v >= self.coeff.order() {
                return Err(Error::ValueOutOfRange(v));
            }
        }
        for (i, r) in self.pi.relators().iter().enumerate() {
            if self.extend_crossed(&values, r) != self.coeff.identity() {
                return Err(Error::CrossedRelator { relator: i });
            }
        }
        Ok(CrossedMorphism { values })
    }

    /// The twisted conjugate `(m • ρ)(g) = m · ρ(g) · (g · m)⁻¹`.
    pub fn coboundary_act(&self, m: usize, rho: &CrossedMorphism) -> CrossedMorphism {
        let minv = self.coeff.inv(m);
        let values = rho
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| self.coeff.mul(self.coeff.mul(m, v), self.gen_action[i][minv]))
            .collect();
        CrossedMorphism { values }
    }
}

fn invert_permutation(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// Generator values of a crossed morphism, validated against the relators of
/// its coefficient module at construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CrossedMorphism {
    values: Vec<usize>,
}

impl CrossedMorphism {
    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// All crossed morphisms together with their coboundary orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationResult {
    /// Every crossed morphism, in lexicographic order of value tuples.
    pub cocycles: Vec<CrossedMorphism>,
    /// Orbit partition of cocycle indices, each orbit sorted, orbits
    /// ordered by their minimal member.
    pub orbits: Vec<Vec<usize>>,
    /// Index of the canonical (lexicographically minimal) member per orbit.
    pub representatives: Vec<usize>,
}

impl ClassificationResult {
    pub fn class_count(&self) -> usize {
        self.orbits.len()
    }

    /// Orbit number of a cocycle index.
    pub fn orbit_of(&self, index: usize) -> Option<usize> {
        self.orbits.iter().position(|o| o.binary_search(&index).is_ok())
    }

    /// Locates a value tuple among the enumerated cocycles.
    pub fn find(&self, values: &[usize]) -> Option<usize> {
        self.cocycles
            .binary_search_by(|c| c.values.as_slice().cmp(values))
            .ok()
    }
}

/// Exactly the value tuples whose crossed extension kills every relator, in
/// lexicographic order. The grid `|M|^ngens` is gated by the budget first.
pub fn enumerate_crossed(coeffs: &PiGroup, budget: u64) -> Result<Vec<CrossedMorphism>> {
    let n = coeffs.presentation().ngens();
    let order = coeffs.coefficients().order();
    grid_budget(order, n, budget)?;
    if n == 0 {
        return Ok(vec![CrossedMorphism { values: Vec::new() }]);
    }
    let mut check_at: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (i, r) in coeffs.presentation().relators().iter().enumerate() {
        check_at[r.max_generator()].push(i);
    }
    let out: Vec<Vec<CrossedMorphism>> = (0..order)
        .into_par_iter()
        .map(|first| {
            let mut values = vec![0usize; n];
            values[0] = first;
            let mut found = Vec::new();
            let ok = check_at[1].iter().all(|&r| {
                coeffs.extend_crossed(&values, &coeffs.presentation().relators()[r])
                    == coeffs.coefficients().identity()
            });
            if ok {
                crossed_dfs(coeffs, &check_at, 1, &mut values, &mut found);
            }
            found
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

fn crossed_dfs(
    coeffs: &PiGroup,
    check_at: &[Vec<usize>],
    depth: usize,
    values: &mut Vec<usize>,
    found: &mut Vec<CrossedMorphism>,
) {
    let n = coeffs.presentation().ngens();
    if depth == n {
        found.push(CrossedMorphism { values: values.clone() });
        return;
    }
    for v in 0..coeffs.coefficients().order() {
        values[depth] = v;
        let ok = check_at[depth + 1].iter().all(|&r| {
            coeffs.extend_crossed(values, &coeffs.presentation().relators()[r])
                == coeffs.coefficients().identity()
        });
        if ok {
            crossed_dfs(coeffs, check_at, depth + 1, values, found);
        }
    }
    values[depth] = 0;
}

/// Orbit partition of a sorted list of value tuples under a family of moves.
/// `movers` indexes the acting group; `apply` must send list members to list
/// members.
fn orbit_partition(
    items: &[Vec<usize>],
    movers: usize,
    apply: impl Fn(usize, &[usize]) -> Vec<usize>,
) -> Result<(Vec<Vec<usize>>, Vec<usize>)> {
    let find = |v: &[usize]| items.binary_search_by(|x| x.as_slice().cmp(v));
    let mut orbit_id = vec![usize::MAX; items.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..items.len() {
        if orbit_id[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = vec![start];
        orbit_id[start] = id;
        let mut queue = vec![start];
        while let Some(idx) = queue.pop() {
            for m in 0..movers {
                let image = apply(m, &items[idx]);
                let j = find(&image).map_err(|_| {
                    Error::Invalid(
                        "coboundary image left the enumerated cocycle set; \
                         action closure violated"
                            .into(),
                    )
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
    Ok((orbits, representatives))
}

/// H¹ of a coefficient module: coboundary orbits of the crossed morphisms,
/// with canonical lexicographically-minimal representatives.
pub fn h1_classes(coeffs: &PiGroup, budget: u64) -> Result<ClassificationResult> {
    let cocycles = enumerate_crossed(coeffs, budget)?;
    let tuples: Vec<Vec<usize>> = cocycles.iter().map(|c| c.values.clone()).collect();
    let order = coeffs.coefficients().order();
    let (orbits, representatives) = orbit_partition(&tuples, order, |m, v| {
        coeffs
            .coboundary_act(m, &CrossedMorphism { values: v.to_vec() })
            .values
    })?;
    Ok(ClassificationResult { cocycles, orbits, representatives })
}

/// Classifies group coverings with fibre `Γ` trivialised by a cover with
/// deck group `pi`: homomorphisms into `Aut(Γ)` up to conjugation, i.e. H¹
/// with coefficients `Aut(Γ)` and trivial action.
pub fn classify_group_coverings(
    pi: &Presentation,
    gamma: &FiniteGroup,
    budget: u64,
) -> Result<ClassificationResult> {
    let auts = enumerate_automorphisms(gamma)?;
    let coeffs = PiGroup::trivial_action(pi.clone(), auts.as_group.clone())?;
    h1_classes(&coeffs, budget)
}

/// Builds the coefficient module `Maps(S, Γ)` for a finite set `S` with a
/// generator-wise action of the presented group, twisted by `φ`: generator
/// `g` sends a map `α` to `s ↦ φ_g⁻¹(α(g·s))`.
///
/// With `|S| = 1` this reduces to `Γ` carrying the inverse twist — the
/// section convention — whose class counts match the direct convention.
pub fn mapped_coefficients(
    pi: &Presentation,
    s_size: usize,
    s_action: &[Vec<usize>],
    gamma: &FiniteGroup,
    phi_gen: &[Vec<usize>],
) -> Result<PiGroup> {
    if s_action.len() != pi.ngens() || phi_gen.len() != pi.ngens() {
        return Err(Error::Invalid("one S-permutation and one twist per generator required".into()));
    }
    for p in s_action {
        if p.len() != s_size || invert_permutation_checked(p).is_none() {
            return Err(Error::NotBijective(p.clone()));
        }
    }
    // relators must act trivially on S itself
    for (i, r) in pi.relators().iter().enumerate() {
        for s in 0..s_size {
            let mut x = s;
            for &l in r.letters().iter().rev() {
                let g = (l.unsigned_abs() as usize) - 1;
                x = if l > 0 {
                    s_action[g][x]
                } else {
                    invert_permutation(&s_action[g])[x]
                };
            }
            if x != s {
                return Err(Error::RelatorActsNontrivially { relator: i });
            }
        }
    }
    let gorder = gamma.order();
    let order = gorder.checked_pow(s_size as u32).unwrap_or(usize::MAX);
    if order > TABLE_BOUND {
        return Err(Error::OrderBound { order, bound: TABLE_BOUND });
    }
    let decode = |code: usize| -> Vec<usize> {
        let mut tuple = vec![0usize; s_size];
        let mut c = code;
        for t in tuple.iter_mut() {
            *t = c % gorder;
            c /= gorder;
        }
        tuple
    };
    let encode = |tuple: &[usize]| -> usize {
        let mut code = 0usize;
        for (i, &t) in tuple.iter().enumerate() {
            code += t * gorder.pow(i as u32);
        }
        code
    };
    let mut table = vec![0usize; order * order];
    for a in 0..order {
        let ta = decode(a);
        for b in 0..order {
            let tb = decode(b);
            let prod: Vec<usize> = (0..s_size).map(|s| gamma.mul(ta[s], tb[s])).collect();
            table[a * order + b] = encode(&prod);
        }
    }
    let m = FiniteGroup::from_table(order, table, None)?;
    let mut gen_action = Vec::with_capacity(pi.ngens());
    for g in 0..pi.ngens() {
        let phi_inv = invert_permutation(&phi_gen[g]);
        let arr: Vec<usize> = (0..order)
            .map(|code| {
                let alpha = decode(code);
                let image: Vec<usize> =
                    (0..s_size).map(|s| phi_inv[alpha[s_action[g][s]]]).collect();
                encode(&image)
            })
            .collect();
        gen_action.push(arr);
    }
    PiGroup::new(pi.clone(), m, gen_action)
}

fn invert_permutation_checked(p: &[usize]) -> Option<Vec<usize>> {
    let mut inv = vec![usize::MAX; p.len()];
    for (i, &x) in p.iter().enumerate() {
        if x >= p.len() || inv[x] != usize::MAX {
            return None;
        }
        inv[x] = i;
    }
    Some(inv)
}

/// Converts section-convention values (twist applied inside) to the
/// engine's convention: per generator, `ρ(g) = φ_g(ψ(g))`.
pub fn section_to_crossed(phi_gen: &[Vec<usize>], psi_values: &[usize]) -> Vec<usize> {
    psi_values
        .iter()
        .enumerate()
        .map(|(i, &v)| phi_gen[i][v])
        .collect()
}

// ---------------------------------------------------------------------------
// Independent oracle: lifts to a semidirect product
// ---------------------------------------------------------------------------

/// Result of the semidirect-product classification: homomorphisms into
/// `Γ ⋊ Q` compatible with a fixed quotient map, modulo conjugation by the
/// embedded `Γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemidirectClassification {
    /// One semidirect element per generator, for each compatible lift,
    /// lexicographically ordered.
    pub lifts: Vec<Vec<usize>>,
    pub orbits: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
    pub q_order: usize,
}

impl SemidirectClassification {
    pub fn class_count(&self) -> usize {
        self.orbits.len()
    }
}

/// Classifies via the independent route: group morphisms `ρ̂ : π → Γ ⋊ Q`
/// whose second component is the given quotient map, modulo conjugation by
/// `Γ ⊂ Γ ⋊ Q`. The class count must equal [`h1_classes`] on the module
/// whose generator `g` acts through `φ(quotient_map(g))`; that equality is
/// the oracle check, not an assumption.
///
/// This path shares no code with the crossed-morphism extension: the
/// semidirect table is built directly and lifts are filtered with the plain
/// homomorphism evaluator.
pub fn h1_via_semidirect(
    pi: &Presentation,
    gamma: &FiniteGroup,
    q: &FiniteGroup,
    quotient_map: &[usize],
    phi_q: &[Vec<usize>],
    budget: u64,
) -> Result<SemidirectClassification> {
    if quotient_map.len() != pi.ngens() {
        return Err(Error::BadQuotient("one Q-element per generator required".into()));
    }
    if phi_q.len() != q.order() {
        return Err(Error::BadQuotient("one automorphism of Γ per Q-element required".into()));
    }
    for &qe in quotient_map {
        if qe >= q.order() {
            return Err(Error::BadQuotient(format!("quotient image {qe} out of range")));
        }
    }
    for arr in phi_q {
        let m = GroupMorphism::new(gamma, gamma, arr.clone())?;
        if !m.is_bijective(gamma.order()) {
            return Err(Error::NotBijective(arr.clone()));
        }
    }
    // φ must be a morphism Q → Aut(Γ)
    for a in 0..q.order() {
        for b in 0..q.order() {
            let ab = q.mul(a, b);
            for x in 0..gamma.order() {
                if phi_q[ab][x] != phi_q[a][phi_q[b][x]] {
                    return Err(Error::BadQuotient(format!(
                        "φ is not a morphism on the Q-pair ({a}, {b})"
                    )));
                }
            }
        }
    }
    // the quotient map must kill the relators
    for (i, r) in pi.relators().iter().enumerate() {
        if evaluate_hom(q, quotient_map, r) != 0 {
            return Err(Error::BadQuotient(format!("relator {i} has nontrivial image in Q")));
        }
    }
    let go = gamma.order();
    let qo = q.order();
    let order = go * qo;
    if order > TABLE_BOUND {
        return Err(Error::OrderBound { order, bound: TABLE_BOUND });
    }
    grid_budget(go, pi.ngens(), budget)?;
    // the semidirect table, pairs (γ, q) indexed as γ·|Q| + q
    let idx = |g_: usize, q_: usize| g_ * qo + q_;
    let mut table = vec![0usize; order * order];
    for g1 in 0..go {
        for q1 in 0..qo {
            for g2 in 0..go {
                for q2 in 0..qo {
                    table[idx(g1, q1) * order + idx(g2, q2)] =
                        idx(gamma.mul(g1, phi_q[q1][g2]), q.mul(q1, q2));
                }
            }
        }
    }
    let sdp = FiniteGroup::from_table(order, table, None)?;
    // enumerate lifts: generator i ranges over the fibre {(γ, quotient_map[i])}
    let n = pi.ngens();
    let mut lifts: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0usize; n];
    fn rec(
        pi: &Presentation,
        sdp: &FiniteGroup,
        go: usize,
        qo: usize,
        quotient_map: &[usize],
        depth: usize,
        current: &mut Vec<usize>,
        lifts: &mut Vec<Vec<usize>>,
    ) {
        let n = pi.ngens();
        if depth == n {
            if pi.relators().iter().all(|r| evaluate_hom(sdp, current, r) == 0) {
                lifts.push(current.clone());
            }
            return;
        }
        for g_ in 0..go {
            current[depth] = g_ * qo + quotient_map[depth];
            rec(pi, sdp, go, qo, quotient_map, depth + 1, current, lifts);
        }
    }
    rec(pi, &sdp, go, qo, quotient_map, 0, &mut current, &mut lifts);
    // conjugation by the embedded Γ
    let (orbits, representatives) = orbit_partition(&lifts, go, |g_, lift| {
        let c = idx(g_, 0);
        lift.iter().map(|&x| sdp.conjugate(c, x)).collect()
    })?;
    Ok(SemidirectClassification { lifts, orbits, representatives, q_order: qo })
}

/// Matches the orbits of a direct classification with those of the
/// semidirect oracle through the lift `ρ ↦ (g ↦ (ρ(g), q̄(g)))`. Returns the
/// orbit pairing; errors if the pairing is not a bijection.
pub fn match_semidirect(
    h1: &ClassificationResult,
    sd: &SemidirectClassification,
    quotient_map: &[usize],
) -> Result<Vec<(usize, usize)>> {
    if h1.class_count() != sd.class_count() {
        return Err(Error::Invalid(format!(
            "class counts differ: direct {} vs semidirect {}",
            h1.class_count(),
            sd.class_count()
        )));
    }
    let mut pairs = Vec::new();
    let mut hit = vec![false; sd.orbits.len()];
    for (h_orbit, &rep) in h1.representatives.iter().enumerate() {
        let values = h1.cocycles[rep].values();
        let lift: Vec<usize> = values
            .iter()
            .zip(quotient_map)
            .map(|(&v, &q_)| v * sd.q_order + q_)
            .collect();
        let idx = sd
            .lifts
            .binary_search_by(|x| x.as_slice().cmp(&lift))
            .map_err(|_| Error::Invalid("representative lift is not a valid semidirect morphism".into()))?;
        let s_orbit = sd
            .orbits
            .iter()
            .position(|o| o.binary_search(&idx).is_ok())
            .expect("every lift belongs to an orbit");
        if hit[s_orbit] {
            return Err(Error::Invalid(
                "two direct classes map to the same semidirect class".into(),
            ));
        }
        hit[s_orbit] = true;
        pairs.push((h_orbit, s_orbit));
    }
    Ok(pairs)
}

// ---------------------------------------------------------------------------
// Crossed morphisms of a finite group given by its full table
// ---------------------------------------------------------------------------

/// H¹ data for a finite acting group: crossed morphisms are stored as full
/// value tables indexed by group elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeckClassification {
    pub cocycles: Vec<Vec<usize>>,
    pub orbits: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
}

impl DeckClassification {
    pub fn class_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn find(&self, table: &[usize]) -> Option<usize> {
        self.cocycles.binary_search_by(|c| c.as_slice().cmp(table)).ok()
    }

    pub fn orbit_of(&self, index: usize) -> Option<usize> {
        self.orbits.iter().position(|o| o.binary_search(&index).is_ok())
    }
}

/// Validates `phi` as an action of the finite group `pi` on `gamma` by
/// automorphisms: one image array per element, multiplicative, identity at
/// the identity.
pub fn validate_deck_action(pi: &FiniteGroup, gamma: &FiniteGroup, phi: &[Vec<usize>]) -> Result<()> {
    if phi.len() != pi.order() {
        return Err(Error::Invalid("one automorphism per deck element required".into()));
    }
    for arr in phi {
        let m = GroupMorphism::new(gamma, gamma, arr.clone())?;
        if !m.is_bijective(gamma.order()) {
            return Err(Error::NotBijective(arr.clone()));
        }
    }
    for a in 0..pi.order() {
        for b in 0..pi.order() {
            let ab = pi.mul(a, b);
            for x in 0..gamma.order() {
                if phi[ab][x] != phi[a][phi[b][x]] {
                    return Err(Error::NotMorphism { a, b });
                }
            }
        }
    }
    Ok(())
}

/// All crossed morphisms `ρ : π → Γ` of a finite group, as full value
/// tables satisfying `ρ(ab) = ρ(a)·φ_a(ρ(b))` on every pair. Enumerated by
/// depth-first search over a generating sequence with closure and a final
/// full-table verification.
pub fn enumerate_deck_crossed(
    pi: &FiniteGroup,
    gamma: &FiniteGroup,
    phi: &[Vec<usize>],
) -> Result<Vec<Vec<usize>>> {
    validate_deck_action(pi, gamma, phi)?;
    let gens = pi.generating_sequence();
    let mut table = vec![usize::MAX; pi.order()];
    table[0] = 0;
    let mut found = Vec::new();
    deck_dfs(pi, gamma, phi, &gens, 0, &mut table, &mut found);
    found.sort();
    Ok(found)
}

fn deck_dfs(
    pi: &FiniteGroup,
    gamma: &FiniteGroup,
    phi: &[Vec<usize>],
    gens: &[usize],
    depth: usize,
    table: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    if depth == gens.len() {
        let total = table.iter().all(|&v| v != usize::MAX);
        if total && deck_table_is_crossed(pi, gamma, phi, table) {
            found.push(table.clone());
        }
        return;
    }
    let g = gens[depth];
    let known: Vec<usize> = (0..pi.order()).filter(|&x| table[x] != usize::MAX).collect();
    for v in 0..gamma.order() {
        let snapshot = table.clone();
        table[g] = v;
        if deck_close(pi, gamma, phi, &known, g, table) {
            deck_dfs(pi, gamma, phi, gens, depth + 1, table, found);
        }
        *table = snapshot;
    }
}

fn deck_close(
    pi: &FiniteGroup,
    gamma: &FiniteGroup,
    phi: &[Vec<usize>],
    known: &[usize],
    new_elem: usize,
    table: &mut [usize],
) -> bool {
    let mut worklist: Vec<usize> = known.to_vec();
    if !worklist.contains(&new_elem) {
        worklist.push(new_elem);
    }
    let mut i = 0;
    while i < worklist.len() {
        let a = worklist[i];
        i += 1;
        let mut j = 0;
        while j < worklist.len() {
            let b = worklist[j];
            j += 1;
            let ab = pi.mul(a, b);
            let value = gamma.mul(table[a], phi[a][table[b]]);
            if table[ab] == usize::MAX {
                table[ab] = value;
                worklist.push(ab);
            } else if table[ab] != value {
                return false;
            }
        }
    }
    true
}

/// Whether a full value table satisfies the crossed condition
/// `ρ(ab) = ρ(a)·φ_a(ρ(b))` on every pair of the finite acting group.
pub fn is_deck_crossed(
    pi: &FiniteGroup,
    gamma: &FiniteGroup,
    phi: &[Vec<usize>],
    table: &[usize],
) -> bool {
    deck_table_is_crossed(pi, gamma, phi, table)
}

fn deck_table_is_crossed(
    pi: &FiniteGroup,
    gamma: &FiniteGroup,
    phi: &[Vec<usize>],
    table: &[usize],
) -> bool {
    table[0] == 0
        && (0..pi.order()).all(|a| {
            (0..pi.order())
                .all(|b| table[pi.mul(a, b)] == gamma.mul(table[a], phi[a][table[b]]))
        })
}

/// H¹ for a finite acting group: coboundary orbits of the full-table
/// crossed morphisms under `(γ • ρ)(f) = γ ρ(f) φ_f(γ⁻¹)`.
pub fn deck_h1_classes(
    pi: &FiniteGroup,
    gamma: &FiniteGroup,
    phi: &[Vec<usize>],
) -> Result<DeckClassification> {
    let cocycles = enumerate_deck_crossed(pi, gamma, phi)?;
    let (orbits, representatives) = orbit_partition(&cocycles, gamma.order(), |g_, table| {
        let ginv = gamma.inv(g_);
        table
            .iter()
            .enumerate()
            .map(|(f, &v)| gamma.mul(gamma.mul(g_, v), phi[f][ginv]))
            .collect()
    })?;
    Ok(DeckClassification { cocycles, orbits, representatives })
}
