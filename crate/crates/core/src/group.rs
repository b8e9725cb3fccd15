//! Finite groups as validated multiplication tables.
//!
//! Every group in the engine is a dense table over element indices
//! `0..order`, with the identity pinned at index 0. Construction verifies
//! the group axioms exhaustively (closure, identity, two-sided inverses and
//! associativity on all triples), so downstream modules never re-check them.
//! The table bound of 256 keeps that verification affordable; larger
//! explicit tables are rejected rather than trusted.

use crate::error::{check_budget, pow_u128, Error, Result};
use std::fmt;

/// Maximum order for an explicit multiplication table.
pub const TABLE_BOUND: usize = 256;

/// Feasibility bound for automorphism-group enumeration.
pub const AUT_BOUND: usize = 64;

/// A finite group given by its multiplication table. Element 0 is the
/// identity; elements are dense indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates and wraps an explicit multiplication table.
    ///
    /// The table is row-major: entry `a * order + b` is the product `a·b`.
    pub fn from_table(order: usize, table: Vec<usize>, labels: Option<Vec<String>>) -> Result<Self> {
        if order == 0 || table.len() != order * order {
            return Err(Error::Invalid(format!(
                "table of length {} does not match order {order}",
                table.len()
            )));
        }
        if order > TABLE_BOUND {
            return Err(Error::OrderBound { order, bound: TABLE_BOUND });
        }
        if let Some(ls) = &labels {
            if ls.len() != order {
                return Err(Error::Invalid("label count differs from order".into()));
            }
        }
        // closure
        for a in 0..order {
            for b in 0..order {
                let v = table[a * order + b];
                if v >= order {
                    return Err(Error::NotClosed { a, b, value: v });
                }
            }
        }
        // identity at index 0
        for a in 0..order {
            if table[a] != a || table[a * order] != a {
                return Err(Error::BadIdentity(a));
            }
        }
        // two-sided inverses
        let mut inverse = vec![usize::MAX; order];
        for a in 0..order {
            let mut found = None;
            for b in 0..order {
                if table[a * order + b] == 0 && table[b * order + a] == 0 {
                    found = Some(b);
                    break;
                }
            }
            match found {
                Some(b) => inverse[a] = b,
                None => return Err(Error::NoInverse(a)),
            }
        }
        // associativity, exhaustively
        for a in 0..order {
            for b in 0..order {
                let ab = table[a * order + b];
                for c in 0..order {
                    let bc = table[b * order + c];
                    if table[ab * order + c] != table[a * order + bc] {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(FiniteGroup { order, table, inverse, labels })
    }

    pub fn trivial() -> Self {
        FiniteGroup::from_table(1, vec![0], None).expect("trivial group is valid")
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("cyclic group needs order >= 1".into()));
        }
        if n > TABLE_BOUND {
            return Err(Error::OrderBound { order: n, bound: TABLE_BOUND });
        }
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = (a + b) % n;
            }
        }
        let labels = (0..n).map(|k| k.to_string()).collect();
        FiniteGroup::from_table(n, table, Some(labels))
    }

    /// The symmetric group on `n` letters, as permutation arrays in
    /// lexicographic order with the identity first.
    pub fn symmetric(n: usize) -> Result<Self> {
        let mut order = 1usize;
        for k in 2..=n {
            order = order.saturating_mul(k);
        }
        if order > TABLE_BOUND {
            return Err(Error::OrderBound { order, bound: TABLE_BOUND });
        }
        let perms = all_permutations(n);
        FiniteGroup::from_permutation_list(n, perms)
    }

    /// Builds a group from an explicit, closed list of permutations.
    /// The list must contain the identity and be closed under composition.
    fn from_permutation_list(degree: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        let order = perms.len();
        if order > TABLE_BOUND {
            return Err(Error::OrderBound { order, bound: TABLE_BOUND });
        }
        let index_of = |p: &[usize]| -> Result<usize> {
            perms
                .iter()
                .position(|q| q == p)
                .ok_or_else(|| Error::Invalid("permutation list is not closed".into()))
        };
        let mut table = vec![0usize; order * order];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                // (p∘q)(x) = p(q(x))
                let composed: Vec<usize> = (0..degree).map(|x| p[q[x]]).collect();
                table[i * order + j] = index_of(&composed)?;
            }
        }
        let labels = perms.iter().map(|p| perm_label(p)).collect();
        FiniteGroup::from_table(order, table, Some(labels))
    }

    /// Closure of a set of permutation generators under composition,
    /// BFS order from the identity for deterministic element numbering.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for g in generators {
            if g.len() != degree || !is_bijection(g, degree) {
                return Err(Error::NotBijective(g.clone()));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity];
        let mut frontier = 0usize;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            frontier += 1;
            for g in generators {
                let prod: Vec<usize> = (0..degree).map(|x| current[g[x]]).collect();
                if !elements.contains(&prod) {
                    if elements.len() >= TABLE_BOUND {
                        return Err(Error::OrderBound {
                            order: elements.len() + 1,
                            bound: TABLE_BOUND,
                        });
                    }
                    elements.push(prod);
                }
            }
        }
        FiniteGroup::from_permutation_list(degree, elements)
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self> {
        let order = a.order * b.order;
        if order > TABLE_BOUND {
            return Err(Error::OrderBound { order, bound: TABLE_BOUND });
        }
        let mut table = vec![0usize; order * order];
        let idx = |x: usize, y: usize| x * b.order + y;
        for x1 in 0..a.order {
            for y1 in 0..b.order {
                for x2 in 0..a.order {
                    for y2 in 0..b.order {
                        table[idx(x1, y1) * order + idx(x2, y2)] = idx(a.mul(x1, x2), b.mul(y1, y2));
                    }
                }
            }
        }
        let labels = (0..order)
            .map(|i| format!("({},{})", a.label(i / b.order), b.label(i % b.order)))
            .collect();
        FiniteGroup::from_table(order, table, Some(labels))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(ls) => ls[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A short generating sequence, chosen greedily: each new generator is
    /// the smallest element outside the subgroup generated so far.
    pub fn generating_sequence(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut subgroup = subgroup_closure(self, &[]);
        while subgroup.len() < self.order {
            let g = (0..self.order)
                .find(|x| !subgroup.contains(x))
                .expect("subgroup is proper");
            gens.push(g);
            subgroup = subgroup_closure(self, &gens);
        }
        gens
    }

    /// Conjugacy classes as a partition, each class sorted, classes ordered
    /// by minimal element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for x in 0..self.order {
            if seen[x] {
                continue;
            }
            let mut class: Vec<usize> = (0..self.order).map(|g| self.conjugate(g, x)).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class);
        }
        classes
    }
}

fn is_bijection(p: &[usize], degree: usize) -> bool {
    let mut seen = vec![false; degree];
    for &x in p {
        if x >= degree || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn perm_label(p: &[usize]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

/// All permutations of `0..n` in lexicographic order (identity first).
pub fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    all_permutations(n)
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                current.push(x);
                rec(n, current, used, out);
                current.pop();
                used[x] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

/// All elements generated by `gens`, sorted.
pub fn subgroup_closure(g: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut in_set = vec![false; g.order()];
    in_set[0] = true;
    let mut list = vec![0usize];
    let mut frontier = 0;
    while frontier < list.len() {
        let x = list[frontier];
        frontier += 1;
        for &h in gens {
            let y = g.mul(x, h);
            if !in_set[y] {
                in_set[y] = true;
                list.push(y);
            }
        }
    }
    list.sort_unstable();
    list
}

/// A group homomorphism given on every source element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMorphism {
    pub image: Vec<usize>,
}

impl GroupMorphism {
    /// Validates `image` as a homomorphism from `source` to `target`.
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, image: Vec<usize>) -> Result<Self> {
        if image.len() != source.order() {
            return Err(Error::Invalid(format!(
                "image array length {} does not match source order {}",
                image.len(),
                source.order()
            )));
        }
        for &v in &image {
            if v >= target.order() {
                return Err(Error::ValueOutOfRange(v));
            }
        }
        if image[0] != 0 {
            return Err(Error::NotMorphism { a: 0, b: 0 });
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if target.mul(image[a], image[b]) != image[source.mul(a, b)] {
                    return Err(Error::NotMorphism { a, b });
                }
            }
        }
        Ok(GroupMorphism { image })
    }

    pub fn apply(&self, a: usize) -> usize {
        self.image[a]
    }

    pub fn is_bijective(&self, target_order: usize) -> bool {
        self.image.len() == target_order && is_bijection(&self.image, target_order)
    }
}

/// The full automorphism group of a finite group, with its composition
/// table materialised as a [`FiniteGroup`].
#[derive(Debug, Clone)]
pub struct AutomorphismGroup {
    /// Automorphisms as image arrays, sorted lexicographically; index 0 is
    /// the identity automorphism.
    pub elements: Vec<Vec<usize>>,
    /// Composition table: element `i` composed after `j`, i.e. `i ∘ j`.
    pub as_group: FiniteGroup,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn apply(&self, aut: usize, x: usize) -> usize {
        self.elements[aut][x]
    }

    /// Index of the given image array, if it is one of the automorphisms.
    pub fn index_of(&self, image: &[usize]) -> Option<usize> {
        self.elements.binary_search_by(|e| e.as_slice().cmp(image)).ok()
    }
}

/// Enumerates all automorphisms of `g` by depth-first search over images of
/// a greedy generating sequence, extending each partial choice through the
/// subgroup it generates and pruning on the first inconsistency.
pub fn enumerate_automorphisms(g: &FiniteGroup) -> Result<AutomorphismGroup> {
    if g.order() > AUT_BOUND {
        return Err(Error::Capacity {
            required: pow_u128(g.order(), 2),
            budget: AUT_BOUND as u64,
        });
    }
    let gens = g.generating_sequence();
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut images = vec![usize::MAX; g.order()];
    images[0] = 0;
    search_automorphisms(g, &gens, 0, &mut images, &mut found);
    found.sort();
    let n = found.len();
    if n > TABLE_BOUND {
        return Err(Error::OrderBound { order: n, bound: TABLE_BOUND });
    }
    let index_of = |im: &[usize]| found.binary_search_by(|e| e.as_slice().cmp(im)).unwrap();
    let mut table = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            let composed: Vec<usize> = (0..g.order()).map(|x| found[i][found[j][x]]).collect();
            table[i * n + j] = index_of(&composed);
        }
    }
    let as_group = FiniteGroup::from_table(n, table, None)?;
    Ok(AutomorphismGroup { elements: found, as_group })
}

fn search_automorphisms(
    g: &FiniteGroup,
    gens: &[usize],
    depth: usize,
    images: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    if depth == gens.len() {
        // the incremental closure does not cover every pair, so accept only
        // after a full homomorphism check
        if is_bijection(images, g.order()) && is_endomorphism(g, images) {
            found.push(images.clone());
        }
        return;
    }
    let gen = gens[depth];
    let gen_order = g.element_order(gen);
    let known: Vec<usize> = (0..g.order()).filter(|&x| images[x] != usize::MAX).collect();
    for candidate in 0..g.order() {
        if g.element_order(candidate) != gen_order {
            continue;
        }
        let snapshot = images.clone();
        images[gen] = candidate;
        if extend_partial_morphism(g, &known, gen, images) {
            search_automorphisms(g, gens, depth + 1, images, found);
        }
        *images = snapshot;
    }
}

fn is_endomorphism(g: &FiniteGroup, images: &[usize]) -> bool {
    (0..g.order()).all(|a| {
        (0..g.order()).all(|b| images[g.mul(a, b)] == g.mul(images[a], images[b]))
    })
}

/// Extends a partial homomorphism to the subgroup generated by the
/// currently-known elements and `new_gen`. Returns false on inconsistency.
fn extend_partial_morphism(g: &FiniteGroup, known: &[usize], new_gen: usize, images: &mut [usize]) -> bool {
    let mut worklist: Vec<usize> = known.to_vec();
    if !worklist.contains(&new_gen) {
        worklist.push(new_gen);
    }
    let mut i = 0;
    while i < worklist.len() {
        let a = worklist[i];
        i += 1;
        let mut j = 0;
        while j < worklist.len() {
            let b = worklist[j];
            j += 1;
            let ab = g.mul(a, b);
            let im = g.mul(images[a], images[b]);
            if images[ab] == usize::MAX {
                images[ab] = im;
                worklist.push(ab);
            } else if images[ab] != im {
                return false;
            }
        }
    }
    true
}

/// The semidirect product `N ⋊ Q` for an action of `Q` on `N` given as a
/// morphism into `Aut(N)`. Pairs `(n, q)` are indexed as `n·|Q| + q` and
/// multiply as `(n1, q1)(n2, q2) = (n1 · act(q1)(n2), q1 q2)`.
pub struct SemidirectProduct {
    pub group: FiniteGroup,
    /// Second-factor projection onto `Q`.
    pub projection: GroupMorphism,
    /// First-factor embedding of `N` (as `n ↦ (n, 1)`).
    pub embedding: GroupMorphism,
}

pub fn semidirect_product(
    n: &FiniteGroup,
    q: &FiniteGroup,
    aut_n: &AutomorphismGroup,
    act: &GroupMorphism,
) -> Result<SemidirectProduct> {
    if act.image.len() != q.order() {
        return Err(Error::Invalid("action must be defined on all of Q".into()));
    }
    for &a in &act.image {
        if a >= aut_n.order() {
            return Err(Error::ValueOutOfRange(a));
        }
    }
    // act must be a morphism Q -> Aut(N)
    GroupMorphism::new(q, &aut_n.as_group, act.image.clone())?;
    let order = n.order() * q.order();
    if order > TABLE_BOUND {
        return Err(Error::OrderBound { order, bound: TABLE_BOUND });
    }
    let idx = |x: usize, y: usize| x * q.order() + y;
    let mut table = vec![0usize; order * order];
    for n1 in 0..n.order() {
        for q1 in 0..q.order() {
            for n2 in 0..n.order() {
                for q2 in 0..q.order() {
                    let twisted = aut_n.apply(act.apply(q1), n2);
                    table[idx(n1, q1) * order + idx(n2, q2)] =
                        idx(n.mul(n1, twisted), q.mul(q1, q2));
                }
            }
        }
    }
    let labels = (0..order)
        .map(|i| format!("({},{})", n.label(i / q.order()), q.label(i % q.order())))
        .collect();
    let group = FiniteGroup::from_table(order, table, Some(labels))?;
    let projection = GroupMorphism::new(&group, q, (0..order).map(|i| i % q.order()).collect())?;
    let embedding = GroupMorphism::new(n, &group, (0..n.order()).map(|x| idx(x, 0)).collect())?;
    Ok(SemidirectProduct { group, projection, embedding })
}

// ---------------------------------------------------------------------------
// Matrix groups over small finite fields
// ---------------------------------------------------------------------------

/// Arithmetic tables for GF(q), q in {2, 3, 4, 5}. GF(4) is the genuine
/// four-element field, not Z/4.
#[derive(Debug, Clone)]
pub struct FiniteField {
    pub q: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self> {
        match q {
            2 | 3 | 5 => {
                let mut add = vec![0; q * q];
                let mut mul = vec![0; q * q];
                for a in 0..q {
                    for b in 0..q {
                        add[a * q + b] = (a + b) % q;
                        mul[a * q + b] = (a * b) % q;
                    }
                }
                Ok(FiniteField { q, add, mul })
            }
            4 => {
                // elements 0, 1, w, w+1 with w^2 = w + 1
                let add_t = [
                    [0, 1, 2, 3],
                    [1, 0, 3, 2],
                    [2, 3, 0, 1],
                    [3, 2, 1, 0],
                ];
                let mul_t = [
                    [0, 0, 0, 0],
                    [0, 1, 2, 3],
                    [0, 2, 3, 1],
                    [0, 3, 1, 2],
                ];
                let mut add = vec![0; 16];
                let mut mul = vec![0; 16];
                for a in 0..4 {
                    for b in 0..4 {
                        add[a * 4 + b] = add_t[a][b];
                        mul[a * 4 + b] = mul_t[a][b];
                    }
                }
                Ok(FiniteField { q: 4, add, mul })
            }
            _ => Err(Error::Invalid(format!("unsupported field size {q}; use 2, 3, 4 or 5"))),
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).unwrap()
    }
}

/// An `n×n` matrix over GF(q), stored row-major.
type Matrix = Vec<usize>;

fn mat_mul(f: &FiniteField, n: usize, a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0;
            for k in 0..n {
                acc = f.add(acc, f.mul(a[i * n + k], b[k * n + j]));
            }
            out[i * n + j] = acc;
        }
    }
    out
}

fn mat_det(f: &FiniteField, n: usize, a: &Matrix) -> usize {
    match n {
        1 => a[0],
        2 => {
            let ad = f.mul(a[0], a[3]);
            let bc = f.mul(a[1], a[2]);
            f.add(ad, f.neg(bc))
        }
        _ => unreachable!("matrix specs are limited to n <= 2"),
    }
}

fn mat_label(n: usize, a: &Matrix) -> String {
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let entries: Vec<String> = (0..n).map(|j| a[i * n + j].to_string()).collect();
            entries.join(" ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

/// The general linear group GL(n, F_q) as an explicit table, together with
/// the matrices themselves for the determinant morphism.
#[derive(Debug)]
pub struct MatrixGroup {
    pub group: FiniteGroup,
    pub matrices: Vec<Matrix>,
    pub field: FiniteField,
    pub n: usize,
}

pub fn general_linear(n: usize, q: usize) -> Result<MatrixGroup> {
    if n == 0 || n > 2 {
        return Err(Error::Invalid(format!("matrix degree {n} not supported; use 1 or 2")));
    }
    let field = FiniteField::new(q)?;
    let cells = n * n;
    let total = pow_u128(q, cells) as usize;
    let mut identity = vec![0; cells];
    for i in 0..n {
        identity[i * n + i] = 1;
    }
    let mut matrices = vec![identity.clone()];
    for code in 0..total {
        let mut m = vec![0; cells];
        let mut c = code;
        for cell in 0..cells {
            m[cell] = c % q;
            c /= q;
        }
        if m != identity && mat_det(&field, n, &m) != 0 {
            matrices.push(m);
        }
    }
    let order = matrices.len();
    if order > TABLE_BOUND {
        return Err(Error::OrderBound { order, bound: TABLE_BOUND });
    }
    let index_of = |m: &Matrix| matrices.iter().position(|x| x == m).unwrap();
    let mut table = vec![0usize; order * order];
    for (i, a) in matrices.iter().enumerate() {
        for (j, b) in matrices.iter().enumerate() {
            table[i * order + j] = index_of(&mat_mul(&field, n, a, b));
        }
    }
    let labels = matrices.iter().map(|m| mat_label(n, m)).collect();
    let group = FiniteGroup::from_table(order, table, Some(labels))?;
    Ok(MatrixGroup { group, matrices, field, n })
}

/// Closure of explicit matrix generators inside GL(n, F_q).
pub fn matrix_group(n: usize, q: usize, generators: &[Matrix]) -> Result<MatrixGroup> {
    if n == 0 || n > 2 {
        return Err(Error::Invalid(format!("matrix degree {n} not supported; use 1 or 2")));
    }
    let field = FiniteField::new(q)?;
    let cells = n * n;
    for (i, g) in generators.iter().enumerate() {
        if g.len() != cells {
            return Err(Error::Invalid(format!("generator {i} has wrong shape")));
        }
        if g.iter().any(|&x| x >= q) {
            return Err(Error::Invalid(format!("generator {i} has entries outside GF({q})")));
        }
        if mat_det(&field, n, g) == 0 {
            return Err(Error::SingularGenerator(i));
        }
    }
    let mut identity = vec![0; cells];
    for i in 0..n {
        identity[i * n + i] = 1;
    }
    let mut matrices = vec![identity];
    let mut frontier = 0;
    while frontier < matrices.len() {
        let current = matrices[frontier].clone();
        frontier += 1;
        for g in generators {
            let prod = mat_mul(&field, n, &current, g);
            if !matrices.contains(&prod) {
                if matrices.len() >= TABLE_BOUND {
                    return Err(Error::OrderBound {
                        order: matrices.len() + 1,
                        bound: TABLE_BOUND,
                    });
                }
                matrices.push(prod);
            }
        }
    }
    let order = matrices.len();
    let index_of = |m: &Matrix| matrices.iter().position(|x| x == m).unwrap();
    let mut table = vec![0usize; order * order];
    for (i, a) in matrices.iter().enumerate() {
        for (j, b) in matrices.iter().enumerate() {
            table[i * order + j] = index_of(&mat_mul(&field, n, a, b));
        }
    }
    let labels = matrices.iter().map(|m| mat_label(n, m)).collect();
    let group = FiniteGroup::from_table(order, table, Some(labels))?;
    Ok(MatrixGroup { group, matrices, field, n })
}

/// The determinant morphism `det : GL(n, F_q) -> F_q^*` together with its
/// kernel SL(n, F_q) and the inclusion `SL -> GL`.
pub struct DeterminantData {
    pub gl: FiniteGroup,
    pub units: FiniteGroup,
    pub det: GroupMorphism,
    pub sl: FiniteGroup,
    pub inclusion: GroupMorphism,
}

pub fn determinant_morphism(n: usize, q: usize) -> Result<DeterminantData> {
    let mg = general_linear(n, q)?;
    let field = &mg.field;
    // multiplicative group of the field: unit 1 first, the rest ascending
    let mut unit_elems = vec![1usize];
    for x in 2..q {
        unit_elems.push(x);
    }
    let u = unit_elems.len();
    let unit_index = |x: usize| unit_elems.iter().position(|&y| y == x).unwrap();
    let mut unit_table = vec![0usize; u * u];
    for (i, &a) in unit_elems.iter().enumerate() {
        for (j, &b) in unit_elems.iter().enumerate() {
            unit_table[i * u + j] = unit_index(field.mul(a, b));
        }
    }
    let unit_labels = unit_elems.iter().map(|x| x.to_string()).collect();
    let units = FiniteGroup::from_table(u, unit_table, Some(unit_labels))?;
    let det_image: Vec<usize> = mg
        .matrices
        .iter()
        .map(|m| unit_index(mat_det(field, n, m)))
        .collect();
    let det = GroupMorphism::new(&mg.group, &units, det_image.clone())?;
    // kernel subgroup, in ambient element order (identity stays first)
    let kernel: Vec<usize> = (0..mg.group.order()).filter(|&g| det_image[g] == 0).collect();
    let k = kernel.len();
    let kernel_index = |g: usize| kernel.iter().position(|&x| x == g).unwrap();
    let mut sl_table = vec![0usize; k * k];
    for (i, &a) in kernel.iter().enumerate() {
        for (j, &b) in kernel.iter().enumerate() {
            sl_table[i * k + j] = kernel_index(mg.group.mul(a, b));
        }
    }
    let sl_labels = kernel.iter().map(|&g| mg.group.label(g)).collect();
    let sl = FiniteGroup::from_table(k, sl_table, Some(sl_labels))?;
    let inclusion = GroupMorphism::new(&sl, &mg.group, kernel)?;
    Ok(DeterminantData { gl: mg.group, units, det, sl, inclusion })
}

// ---------------------------------------------------------------------------
// Group specs
// ---------------------------------------------------------------------------

/// Deterministic recipes for the groups the engine works with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Symmetric(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Gl(usize, usize),
    Sl(usize, usize),
    Table(usize, Vec<usize>),
    Perm(usize, Vec<Vec<usize>>),
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n),
            GroupSpec::Symmetric(n) => FiniteGroup::symmetric(*n),
            GroupSpec::Product(a, b) => FiniteGroup::direct_product(&a.build()?, &b.build()?),
            GroupSpec::Gl(n, q) => Ok(general_linear(*n, *q)?.group),
            GroupSpec::Sl(n, q) => Ok(determinant_morphism(*n, *q)?.sl),
            GroupSpec::Table(order, table) => FiniteGroup::from_table(*order, table.clone(), None),
            GroupSpec::Perm(degree, gens) => FiniteGroup::from_permutations(*degree, gens),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic {n}"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric {n}"),
            GroupSpec::Product(a, b) => write!(f, "product({a},{b})"),
            GroupSpec::Gl(n, q) => write!(f, "gl {n} {q}"),
            GroupSpec::Sl(n, q) => write!(f, "sl {n} {q}"),
            GroupSpec::Table(order, _) => write!(f, "table of order {order}"),
            GroupSpec::Perm(degree, gens) => write!(f, "perm on {degree} points, {} generators", gens.len()),
        }
    }
}

// ---------------------------------------------------------------------------
// Isomorphism testing (brute force with generator-image pruning; exponential,
// desk-scale only — used by tests, examples and the gauge comparison)
// ---------------------------------------------------------------------------

/// Searches for an isomorphism `a -> b` by assigning images to a generating
/// sequence of `a` and closing, returning the first found in deterministic
/// order.
pub fn find_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<GroupMorphism> {
    if a.order() != b.order() {
        return None;
    }
    let gens = a.generating_sequence();
    let mut images = vec![usize::MAX; a.order()];
    images[0] = 0;
    fn rec(
        a: &FiniteGroup,
        b: &FiniteGroup,
        gens: &[usize],
        depth: usize,
        images: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        if depth == gens.len() {
            let total = images.iter().all(|&x| x != usize::MAX);
            if total && is_bijection(images, b.order()) {
                let hom = (0..a.order()).all(|x| {
                    (0..a.order()).all(|y| images[a.mul(x, y)] == b.mul(images[x], images[y]))
                });
                if hom {
                    return Some(images.clone());
                }
            }
            return None;
        }
        let gen = gens[depth];
        let gen_order = a.element_order(gen);
        let known: Vec<usize> = (0..a.order()).filter(|&x| images[x] != usize::MAX).collect();
        for candidate in 0..b.order() {
            if b.element_order(candidate) != gen_order {
                continue;
            }
            let snapshot = images.clone();
            images[gen] = candidate;
            if extend_partial_map(a, b, &known, gen, images) {
                if let Some(found) = rec(a, b, gens, depth + 1, images) {
                    return Some(found);
                }
            }
            *images = snapshot;
        }
        None
    }
    let image = rec(a, b, &gens, 0, &mut images)?;
    Some(GroupMorphism::new(a, b, image).expect("verified isomorphism"))
}

fn extend_partial_map(
    a: &FiniteGroup,
    b: &FiniteGroup,
    known: &[usize],
    new_gen: usize,
    images: &mut [usize],
) -> bool {
    let mut worklist: Vec<usize> = known.to_vec();
    if !worklist.contains(&new_gen) {
        worklist.push(new_gen);
    }
    let mut i = 0;
    while i < worklist.len() {
        let x = worklist[i];
        i += 1;
        let mut j = 0;
        while j < worklist.len() {
            let y = worklist[j];
            j += 1;
            let xy = a.mul(x, y);
            let im = b.mul(images[x], images[y]);
            if images[xy] == usize::MAX {
                images[xy] = im;
                worklist.push(xy);
            } else if images[xy] != im {
                return false;
            }
        }
    }
    true
}

pub fn are_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Guard used by enumerations whose search space is `order^slots`.
pub fn grid_budget(order: usize, slots: usize, budget: u64) -> Result<u128> {
    let required = pow_u128(order, slots);
    check_budget(required, budget)?;
    Ok(required)
}
