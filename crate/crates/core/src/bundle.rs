//! Explicit finite total-space models: Galois covers of graphs, group
//! coverings presented as quotients, torsors built from crossed morphisms,
//! holonomy extraction, and the frame-/associated-/adjoint-bundle machinery.
//!
//! Fibres are kept in chart coordinates: the fibre of a group bundle over
//! every base vertex is the typical fibre group itself, with one
//! automorphism per base edge as transition; the fibre of a torsor is the
//! same set with the right-translation action, and the transport along an
//! edge is the affine map `p ↦ a_e · t_e(p)`. The charts come from canonical
//! basepoint lifts (quotient constructions) or identity frames (frame
//! bundles), and every claimed invariant is swept exhaustively after
//! construction rather than assumed.

use crate::cohomology::validate_deck_action;
use crate::error::{check_budget, Error, Result};
use crate::fp::{graph_pi1, GraphPi1};
use crate::graph::Graph;
use crate::group::{permutations_lex, subgroup_closure, FiniteGroup, GroupMorphism};

// ---------------------------------------------------------------------------
// Coverings of graphs
// ---------------------------------------------------------------------------

/// A Galois cover of graphs with an explicit deck action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringModel {
    base: Graph,
    cover: Graph,
    vertex_proj: Vec<usize>,
    edge_proj: Vec<usize>,
    deck: FiniteGroup,
    deck_vertex: Vec<Vec<usize>>,
    deck_edge: Vec<Vec<usize>>,
}

impl CoveringModel {
    /// Validates explicit covering data: orientation-compatible projection,
    /// local bijection on stars, a free deck action commuting with the
    /// projection and transitive on fibres, and a connected total space.
    pub fn new(
        base: Graph,
        cover: Graph,
        vertex_proj: Vec<usize>,
        edge_proj: Vec<usize>,
        deck: FiniteGroup,
        deck_vertex: Vec<Vec<usize>>,
        deck_edge: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if vertex_proj.len() != cover.num_vertices() || edge_proj.len() != cover.num_edges() {
            return Err(Error::NotCovering("projection data has wrong length".into()));
        }
        for (e, &be) in edge_proj.iter().enumerate() {
            if be >= base.num_edges() {
                return Err(Error::NotCovering(format!("edge {e} projects out of range")));
            }
            let (cu, cv) = cover.edge(e);
            let (bu, bv) = base.edge(be);
            if vertex_proj[cu] != bu || vertex_proj[cv] != bv {
                return Err(Error::NotCovering(format!(
                    "edge {e} does not project onto base edge {be} preserving orientation"
                )));
            }
        }
        for &bv in &vertex_proj {
            if bv >= base.num_vertices() {
                return Err(Error::NotCovering("vertex projects out of range".into()));
            }
        }
        // local bijection on stars: over each base edge, each source lift has
        // exactly one outgoing cover edge, each target lift one incoming
        for be in 0..base.num_edges() {
            let (bu, bv) = base.edge(be);
            for cu in 0..cover.num_vertices() {
                if vertex_proj[cu] == bu {
                    let count = (0..cover.num_edges())
                        .filter(|&e| edge_proj[e] == be && cover.edge(e).0 == cu)
                        .count();
                    if count != 1 {
                        return Err(Error::NotCovering(format!(
                            "vertex {cu} has {count} lifts of base edge {be} as source"
                        )));
                    }
                }
                if vertex_proj[cu] == bv {
                    let count = (0..cover.num_edges())
                        .filter(|&e| edge_proj[e] == be && cover.edge(e).1 == cu)
                        .count();
                    if count != 1 {
                        return Err(Error::NotCovering(format!(
                            "vertex {cu} has {count} lifts of base edge {be} as target"
                        )));
                    }
                }
            }
        }
        if !cover.is_connected() {
            return Err(Error::NotGalois("total space is disconnected".into()));
        }
        // deck action: permutations, action law, identity
        if deck_vertex.len() != deck.order() || deck_edge.len() != deck.order() {
            return Err(Error::NotGalois("one vertex and edge permutation per deck element".into()));
        }
        let id_v: Vec<usize> = (0..cover.num_vertices()).collect();
        let id_e: Vec<usize> = (0..cover.num_edges()).collect();
        if deck_vertex[0] != id_v || deck_edge[0] != id_e {
            return Err(Error::NotGalois("identity deck element must act trivially".into()));
        }
        for f in 0..deck.order() {
            if !is_permutation(&deck_vertex[f], cover.num_vertices())
                || !is_permutation(&deck_edge[f], cover.num_edges())
            {
                return Err(Error::NotGalois(format!("deck element {f} does not act bijectively")));
            }
            for g in 0..deck.order() {
                let fg = deck.mul(f, g);
                for v in 0..cover.num_vertices() {
                    if deck_vertex[fg][v] != deck_vertex[f][deck_vertex[g][v]] {
                        return Err(Error::NotGalois(format!(
                            "vertex action fails the law on ({f}, {g})"
                        )));
                    }
                }
                for e in 0..cover.num_edges() {
                    if deck_edge[fg][e] != deck_edge[f][deck_edge[g][e]] {
                        return Err(Error::NotGalois(format!(
                            "edge action fails the law on ({f}, {g})"
                        )));
                    }
                }
            }
            // compatibility with incidence, orientation and projection
            for e in 0..cover.num_edges() {
                let (u, v) = cover.edge(e);
                let fe = deck_edge[f][e];
                if cover.edge(fe) != (deck_vertex[f][u], deck_vertex[f][v]) {
                    return Err(Error::NotGalois(format!(
                        "deck element {f} breaks incidence on edge {e}"
                    )));
                }
                if edge_proj[fe] != edge_proj[e] {
                    return Err(Error::NotGalois(format!(
                        "deck element {f} does not commute with the projection on edge {e}"
                    )));
                }
            }
            for v in 0..cover.num_vertices() {
                if vertex_proj[deck_vertex[f][v]] != vertex_proj[v] {
                    return Err(Error::NotGalois(format!(
                        "deck element {f} does not commute with the projection on vertex {v}"
                    )));
                }
                if f != 0 && deck_vertex[f][v] == v {
                    return Err(Error::NotGalois(format!(
                        "deck element {f} fixes vertex {v}; action is not free"
                    )));
                }
            }
        }
        // transitivity on fibres
        for bv in 0..base.num_vertices() {
            let fibre: Vec<usize> =
                (0..cover.num_vertices()).filter(|&v| vertex_proj[v] == bv).collect();
            if fibre.len() != deck.order() {
                return Err(Error::NotGalois(format!(
                    "fibre over vertex {bv} has {} points, deck order is {}",
                    fibre.len(),
                    deck.order()
                )));
            }
            let reached: Vec<usize> = (0..deck.order()).map(|f| deck_vertex[f][fibre[0]]).collect();
            for &v in &fibre {
                if !reached.contains(&v) {
                    return Err(Error::NotGalois(format!(
                        "deck action is not transitive on the fibre over {bv}"
                    )));
                }
            }
        }
        Ok(CoveringModel { base, cover, vertex_proj, edge_proj, deck, deck_vertex, deck_edge })
    }

    /// The derived cover of a voltage assignment: vertices `(u, d)`, an edge
    /// `(u,d) → (v, d·g_e)` over each base edge `e = (u,v)`, and the deck
    /// group acting by left multiplication. Connected exactly when the
    /// closed-walk voltages generate the deck group.
    pub fn from_voltages(base: Graph, deck: FiniteGroup, voltages: Vec<usize>) -> Result<Self> {
        if voltages.len() != base.num_edges() {
            return Err(Error::Invalid("one voltage per base edge required".into()));
        }
        for &g in &voltages {
            if g >= deck.order() {
                return Err(Error::ValueOutOfRange(g));
            }
        }
        let n = deck.order();
        let vid = |u: usize, d: usize| u * n + d;
        let mut edges = Vec::new();
        let mut edge_proj = Vec::new();
        for (e, &(u, v)) in base.edges().iter().enumerate() {
            for d in 0..n {
                edges.push((vid(u, d), vid(v, deck.mul(d, voltages[e]))));
                edge_proj.push(e);
            }
        }
        let cover = Graph::new(base.num_vertices() * n, edges)?;
        let vertex_proj: Vec<usize> = (0..cover.num_vertices()).map(|v| v / n).collect();
        let deck_vertex: Vec<Vec<usize>> = (0..n)
            .map(|h| {
                (0..cover.num_vertices())
                    .map(|v| vid(v / n, deck.mul(h, v % n)))
                    .collect()
            })
            .collect();
        let deck_edge: Vec<Vec<usize>> = (0..n)
            .map(|h| {
                (0..cover.num_edges())
                    .map(|e| {
                        let base_e = e / n;
                        let d = e % n;
                        base_e * n + deck.mul(h, d)
                    })
                    .collect()
            })
            .collect();
        CoveringModel::new(base, cover, vertex_proj, edge_proj, deck, deck_vertex, deck_edge)
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn cover(&self) -> &Graph {
        &self.cover
    }

    pub fn deck(&self) -> &FiniteGroup {
        &self.deck
    }

    pub fn vertex_projection(&self, cover_vertex: usize) -> usize {
        self.vertex_proj[cover_vertex]
    }

    pub fn deck_on_vertex(&self, f: usize, v: usize) -> usize {
        self.deck_vertex[f][v]
    }

    /// The smallest cover vertex over a base vertex; the canonical chart
    /// basepoint.
    pub fn canonical_lift(&self, base_vertex: usize) -> usize {
        (0..self.cover.num_vertices())
            .find(|&v| self.vertex_proj[v] == base_vertex)
            .expect("fibres are nonempty")
    }

    /// The unique lift of a base edge with the given source (forward) or
    /// target (backward).
    pub fn lift_edge(&self, base_edge: usize, at: usize, forward: bool) -> usize {
        (0..self.cover.num_edges())
            .find(|&e| {
                self.edge_proj[e] == base_edge
                    && if forward { self.cover.edge(e).0 == at } else { self.cover.edge(e).1 == at }
            })
            .expect("covering invariant: stars lift bijectively")
    }

    /// Lifts a walk of base steps starting from the given cover vertex and
    /// returns its endpoint.
    pub fn lift_walk(&self, steps: &[crate::graph::Step], from: usize) -> usize {
        let mut at = from;
        for s in steps {
            let e = self.lift_edge(s.edge, at, s.forward);
            let (u, v) = self.cover.edge(e);
            at = if s.forward { v } else { u };
        }
        at
    }

    /// The deck element carrying one cover vertex to another in the same
    /// fibre.
    pub fn deck_displacement(&self, from: usize, to: usize) -> Result<usize> {
        (0..self.deck.order())
            .find(|&f| self.deck_vertex[f][from] == to)
            .ok_or_else(|| Error::NotGalois("vertices are not in the same deck orbit".into()))
    }
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in p {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// The edge-path presentation of the base together with the deck image of
/// each generator loop, obtained by endpoint comparison of lifts.
#[derive(Debug, Clone)]
pub struct DeckPresentation {
    pub pi1: GraphPi1,
    /// Deck image of each free generator.
    pub deck_images: Vec<usize>,
    pub basepoint: usize,
}

/// Lifts each generator loop of the base once and reads off the deck element
/// moving the basepoint lift to the endpoint. The images must generate the
/// deck group (they do exactly when the cover is connected Galois) and every
/// relator must map to the identity.
pub fn cover_deck_presentation(c: &CoveringModel, basepoint: usize) -> Result<DeckPresentation> {
    let pi1 = graph_pi1(c.base(), basepoint)?;
    let start = c.canonical_lift(basepoint);
    let mut deck_images = Vec::with_capacity(pi1.presentation.ngens());
    for &e in &pi1.generator_edges {
        let steps = c.base().edge_loop(&pi1.tree, e);
        let end = c.lift_walk(&steps, start);
        deck_images.push(c.deck_displacement(start, end)?);
    }
    for (i, r) in pi1.presentation.relators().iter().enumerate() {
        if crate::fp::evaluate_hom(c.deck(), &deck_images, r) != 0 {
            return Err(Error::NotGalois(format!("relator {i} has nontrivial deck image")));
        }
    }
    if subgroup_closure(c.deck(), &deck_images).len() != c.deck().order() {
        return Err(Error::NotGalois(
            "generator images do not generate the deck group".into(),
        ));
    }
    Ok(DeckPresentation { pi1, deck_images, basepoint })
}

// ---------------------------------------------------------------------------
// Group bundles over a base graph, in chart coordinates
// ---------------------------------------------------------------------------

/// Quotient provenance of a group bundle: the covering, the action, chart
/// lifts and the explicit orbit total space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientData {
    pub covering: CoveringModel,
    /// One automorphism of the fibre group per deck element.
    pub phi: Vec<Vec<usize>>,
    /// Canonical cover lift per base vertex.
    pub base_lifts: Vec<usize>,
    /// Deck displacement along each base edge between canonical lifts.
    pub edge_deck: Vec<usize>,
    /// Orbit representative id for every pair (cover vertex, fibre value).
    pub orbit_of: Vec<usize>,
    /// Total space: the orbit representatives, as (cover vertex, value).
    pub orbit_reps: Vec<(usize, usize)>,
}

/// A group covering over a base graph: fibre group in chart coordinates and
/// one fibre-group automorphism per base edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupBundleModel {
    base: Graph,
    fibre: FiniteGroup,
    transitions: Vec<Vec<usize>>,
    quotient: Option<QuotientData>,
}

impl GroupBundleModel {
    /// Validates chart data directly; transitions must be automorphisms of
    /// the fibre group.
    pub fn from_transitions(
        base: Graph,
        fibre: FiniteGroup,
        transitions: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if transitions.len() != base.num_edges() {
            return Err(Error::Invalid("one transition per base edge required".into()));
        }
        for arr in &transitions {
            let m = GroupMorphism::new(&fibre, &fibre, arr.clone())?;
            if !m.is_bijective(fibre.order()) {
                return Err(Error::NotBijective(arr.clone()));
            }
        }
        Ok(GroupBundleModel { base, fibre, transitions, quotient: None })
    }

    /// The constant group bundle with identity transitions.
    pub fn constant(base: Graph, fibre: FiniteGroup) -> Self {
        let id: Vec<usize> = (0..fibre.order()).collect();
        let transitions = vec![id; base.num_edges()];
        GroupBundleModel { base, fibre, transitions, quotient: None }
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn fibre(&self) -> &FiniteGroup {
        &self.fibre
    }

    pub fn transition(&self, edge: usize) -> &[usize] {
        &self.transitions[edge]
    }

    pub fn quotient(&self) -> Option<&QuotientData> {
        self.quotient.as_ref()
    }

    /// Transition along a directed step (inverse automorphism backwards).
    pub fn step_transition(&self, step: crate::graph::Step) -> Vec<usize> {
        if step.forward {
            self.transitions[step.edge].clone()
        } else {
            let fwd = &self.transitions[step.edge];
            let mut inv = vec![0usize; fwd.len()];
            for (x, &y) in fwd.iter().enumerate() {
                inv[y] = x;
            }
            inv
        }
    }

    /// Structural equality of the visible bundle data (base, fibre table,
    /// transitions), ignoring provenance.
    pub fn same_bundle(&self, other: &GroupBundleModel) -> bool {
        self.base == other.base && self.fibre == other.fibre && self.transitions == other.transitions
    }
}

/// The quotient group covering `π \ (Y × Γ)` of a Galois cover by the deck
/// action twisted through `φ : π → Aut(Γ)`. The total space is materialised
/// as explicit orbit representatives; fibres are charted through canonical
/// basepoint lifts so that every edge transition is the automorphism
/// `φ(f⁻¹)` for the deck displacement `f` along the edge.
pub fn build_group_covering(
    c: &CoveringModel,
    gamma: &FiniteGroup,
    phi: &[Vec<usize>],
) -> Result<GroupBundleModel> {
    validate_deck_action(c.deck(), gamma, phi)?;
    let n_cover = c.cover().num_vertices();
    let go = gamma.order();
    // orbits of the deck action on (cover vertex, value)
    let mut orbit_of = vec![usize::MAX; n_cover * go];
    let mut orbit_reps = Vec::new();
    for point in 0..(n_cover * go) {
        if orbit_of[point] != usize::MAX {
            continue;
        }
        let id = orbit_reps.len();
        orbit_reps.push((point / go, point % go));
        for f in 0..c.deck().order() {
            let moved = c.deck_on_vertex(f, point / go) * go + phi[f][point % go];
            if orbit_of[moved] != usize::MAX && orbit_of[moved] != id {
                return Err(Error::NotGalois("orbit structure is inconsistent".into()));
            }
            orbit_of[moved] = id;
        }
    }
    // each base fibre must carry exactly |Γ| orbits
    for bv in 0..c.base().num_vertices() {
        let count = orbit_reps
            .iter()
            .filter(|&&(xi, _)| c.vertex_projection(xi) == bv)
            .count();
        if count != go {
            return Err(Error::NotGalois(format!(
                "fibre over base vertex {bv} has {count} points, expected {go}"
            )));
        }
    }
    let base_lifts: Vec<usize> =
        (0..c.base().num_vertices()).map(|bv| c.canonical_lift(bv)).collect();
    // well-definedness of the fibrewise product across representatives
    for bv in 0..c.base().num_vertices() {
        let lift = base_lifts[bv];
        for g1 in 0..go {
            for g2 in 0..go {
                let product = orbit_of[lift * go + gamma.mul(g1, g2)];
                for f in 0..c.deck().order() {
                    let xi = c.deck_on_vertex(f, lift);
                    let other = orbit_of[xi * go + gamma.mul(phi[f][g1], phi[f][g2])];
                    if other != product {
                        return Err(Error::NotGalois(
                            "fibrewise product is not well-defined on orbits".into(),
                        ));
                    }
                }
            }
        }
    }
    let mut transitions = Vec::with_capacity(c.base().num_edges());
    let mut edge_deck = Vec::with_capacity(c.base().num_edges());
    for (e, &(u, v)) in c.base().edges().iter().enumerate() {
        let lifted = c.lift_edge(e, base_lifts[u], true);
        let target = c.cover().edge(lifted).1;
        let f = c.deck_displacement(base_lifts[v], target)?;
        edge_deck.push(f);
        let f_inv = c.deck().inv(f);
        transitions.push(phi[f_inv].clone());
    }
    let quotient = QuotientData {
        covering: c.clone(),
        phi: phi.to_vec(),
        base_lifts,
        edge_deck,
        orbit_of,
        orbit_reps,
    };
    let bundle = GroupBundleModel {
        base: c.base().clone(),
        fibre: gamma.clone(),
        transitions,
        quotient: Some(quotient),
    };
    Ok(bundle)
}

// ---------------------------------------------------------------------------
// Torsors
// ---------------------------------------------------------------------------

/// A torsor under a group bundle, in chart coordinates: the fibre over every
/// base vertex is the fibre group acting on itself by right translation, and
/// the transport along edge `e` is `p ↦ offset_e · t_e(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsorModel {
    bundle: GroupBundleModel,
    offsets: Vec<usize>,
    /// The deck-level crossed morphism the torsor was built from, if any.
    rho: Option<Vec<usize>>,
}

impl TorsorModel {
    /// The trivial torsor: the bundle acting on itself.
    pub fn trivial(bundle: &GroupBundleModel) -> Self {
        TorsorModel {
            bundle: bundle.clone(),
            offsets: vec![0; bundle.base().num_edges()],
            rho: None,
        }
    }

    pub fn bundle(&self) -> &GroupBundleModel {
        &self.bundle
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Transport along a directed step, as a map of chart points.
    pub fn step_transport(&self, step: crate::graph::Step, p: usize) -> usize {
        let g = self.bundle.fibre();
        if step.forward {
            g.mul(self.offsets[step.edge], self.bundle.transitions[step.edge][p])
        } else {
            // invert p = a·t(p'): p' = t⁻¹(a⁻¹·p)
            let t = &self.bundle.transitions[step.edge];
            let target = g.mul(g.inv(self.offsets[step.edge]), p);
            t.iter().position(|&y| y == target).expect("transition is bijective")
        }
    }

    /// Sweeps the fibrewise torsor axioms: transports are bijections
    /// equivariant for the bundle transitions, and the action map
    /// `(p, g) ↦ (p, p·g)` is a bijection on every fibre.
    pub fn verify(&self) -> Result<()> {
        let g = self.bundle.fibre();
        for v in 0..self.bundle.base().num_vertices() {
            let mut seen = vec![false; g.order() * g.order()];
            for p in 0..g.order() {
                for x in 0..g.order() {
                    let key = p * g.order() + g.mul(p, x);
                    if seen[key] {
                        return Err(Error::NotSimplyTransitive { vertex: v });
                    }
                    seen[key] = true;
                }
            }
        }
        for e in 0..self.bundle.base().num_edges() {
            let t = &self.bundle.transitions[e];
            let step = crate::graph::Step::new(e, true);
            let mut hit = vec![false; g.order()];
            for p in 0..g.order() {
                let tp = self.step_transport(step, p);
                if hit[tp] {
                    return Err(Error::Invalid(format!("transport along edge {e} is not injective")));
                }
                hit[tp] = true;
                for x in 0..g.order() {
                    if self.step_transport(step, g.mul(p, x)) != g.mul(tp, t[x]) {
                        return Err(Error::Invalid(format!(
                            "transport along edge {e} is not equivariant"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds the torsor `π \ (Y × Γ)` with the action
/// `σ_f(ξ, γ) = (f·ξ, ρ(f)·φ_f(γ))` from a quotient-backed group covering
/// and a crossed morphism `ρ` of the deck group (checked on the full
/// multiplication table).
pub fn build_torsor(bundle: &GroupBundleModel, rho: &[usize]) -> Result<TorsorModel> {
    let q = bundle
        .quotient()
        .ok_or_else(|| Error::Invalid("torsor construction needs a quotient-backed bundle".into()))?;
    let c = &q.covering;
    let gamma = bundle.fibre();
    if rho.len() != c.deck().order() {
        return Err(Error::Invalid("one value per deck element required".into()));
    }
    for &v in rho {
        if v >= gamma.order() {
            return Err(Error::ValueOutOfRange(v));
        }
    }
    if !crate::cohomology::is_deck_crossed(c.deck(), gamma, &q.phi, rho) {
        return Err(Error::Invalid(
            "values fail the crossed condition on the deck multiplication table".into(),
        ));
    }
    let offsets: Vec<usize> = q
        .edge_deck
        .iter()
        .map(|&f| rho[c.deck().inv(f)])
        .collect();
    let torsor = TorsorModel { bundle: bundle.clone(), offsets, rho: Some(rho.to_vec()) };
    torsor.verify()?;
    Ok(torsor)
}

/// All bundle isomorphisms of torsors under the same group bundle:
/// equivariant fibre maps are left translations in chart coordinates, so a
/// morphism is a vertex family `w` with
/// `w(target) = offset_Q · t_e(w(source)) · offset_P⁻¹` on every edge. The
/// root value is enumerated over the fibre and the rest forced along a
/// spanning tree.
pub fn torsor_isomorphisms(p: &TorsorModel, q: &TorsorModel, budget: u64) -> Result<Vec<Vec<usize>>> {
    if !p.bundle.same_bundle(&q.bundle) {
        return Err(Error::Invalid("torsors live under different group bundles".into()));
    }
    let g = p.bundle.fibre();
    let base = p.bundle.base();
    check_budget(g.order() as u128, budget)?;
    let tree = base.spanning_tree(0)?;
    let mut found = Vec::new();
    for root in 0..g.order() {
        let mut w = vec![usize::MAX; base.num_vertices()];
        w[0] = root;
        for v in 0..base.num_vertices() {
            let mut at = 0usize;
            for step in &tree.path_from_root[v] {
                let (a, b) = base.step_endpoints(*step);
                debug_assert_eq!(a, at);
                w[b] = forced_edge_value(p, q, *step, w[a]);
                at = b;
            }
        }
        let ok = (0..base.num_edges()).all(|e| {
            let (a, _) = base.edge(e);
            let step = crate::graph::Step::new(e, true);
            let (_, b) = base.step_endpoints(step);
            w[b] == forced_edge_value(p, q, step, w[a])
        });
        if ok {
            // verified bijective fibrewise: left translations are bijections,
            // checked against the chart explicitly
            for &wx in &w {
                let mut hit = vec![false; g.order()];
                for x in 0..g.order() {
                    let y = g.mul(wx, x);
                    if hit[y] {
                        return Err(Error::Invalid("isomorphism is not fibrewise bijective".into()));
                    }
                    hit[y] = true;
                }
            }
            found.push(w);
        }
    }
    Ok(found)
}

fn forced_edge_value(p: &TorsorModel, q: &TorsorModel, step: crate::graph::Step, wa: usize) -> usize {
    let g = p.bundle.fibre();
    if step.forward {
        let e = step.edge;
        let t = &p.bundle.transitions[e];
        g.mul(g.mul(q.offsets[e], t[wa]), g.inv(p.offsets[e]))
    } else {
        // reverse of w(b) = aQ·t(w(a))·aP⁻¹: w(a) = t⁻¹(aQ⁻¹·w(b)·aP)
        let e = step.edge;
        let t = &p.bundle.transitions[e];
        let target = g.mul(g.mul(g.inv(q.offsets[e]), wa), p.offsets[e]);
        t.iter().position(|&y| y == target).expect("transition is bijective")
    }
}

/// All edge-compatible global sections of a torsor, as chart values per
/// vertex. Nonempty exactly for trivial torsors.
pub fn global_sections(p: &TorsorModel) -> Result<Vec<Vec<usize>>> {
    let g = p.bundle.fibre();
    let base = p.bundle.base();
    let tree = base.spanning_tree(0)?;
    let mut found = Vec::new();
    for root in 0..g.order() {
        let mut s = vec![usize::MAX; base.num_vertices()];
        s[0] = root;
        for v in 0..base.num_vertices() {
            let mut at = 0usize;
            for step in &tree.path_from_root[v] {
                let (a, b) = base.step_endpoints(*step);
                debug_assert_eq!(a, at);
                s[b] = p.step_transport(*step, s[a]);
                at = b;
            }
        }
        let ok = (0..base.num_edges()).all(|e| {
            let (a, b) = base.edge(e);
            p.step_transport(crate::graph::Step::new(e, true), s[a]) == s[b]
        });
        if ok {
            found.push(s);
        }
    }
    Ok(found)
}

/// Extracts the deck-level crossed morphism of a torsor over a
/// quotient-backed bundle by transporting the chart basepoint around each
/// generator loop of the base and descending the generator values to the
/// deck group. The result lands in the coboundary orbit of the morphism the
/// torsor was built from; a different basepoint moves it by a coboundary
/// only.
pub fn holonomy(p: &TorsorModel, basepoint: usize) -> Result<Vec<usize>> {
    let q = p
        .bundle
        .quotient()
        .ok_or_else(|| Error::Invalid("holonomy needs a quotient-backed bundle".into()))?;
    let c = &q.covering;
    let gamma = p.bundle.fibre();
    let deck = cover_deck_presentation(c, basepoint)?;
    // loop transports in chart coordinates, evaluated at the identity
    let mut gen_values = Vec::with_capacity(deck.deck_images.len());
    for (i, &e) in deck.pi1.generator_edges.iter().enumerate() {
        let steps = c.base().edge_loop(&deck.pi1.tree, e);
        let mut point = gamma.identity();
        for s in &steps {
            point = p.step_transport(*s, point);
        }
        // transported identity equals ρ(f⁻¹); recover ρ(f) = φ_f(point⁻¹)
        let f = deck.deck_images[i];
        gen_values.push(q.phi[f][gamma.inv(point)]);
    }
    // descend to a full deck table by breadth-first closure over products
    let mut table = vec![usize::MAX; c.deck().order()];
    table[0] = 0;
    let mut frontier = vec![0usize];
    while let Some(h) = frontier.pop() {
        for (i, &f) in deck.deck_images.iter().enumerate() {
            let hf = c.deck().mul(h, f);
            let value = gamma.mul(table[h], q.phi[h][gen_values[i]]);
            if table[hf] == usize::MAX {
                table[hf] = value;
                frontier.push(hf);
            } else if table[hf] != value {
                return Err(Error::InconsistentHolonomy(format!(
                    "deck element {hf} receives two different values"
                )));
            }
        }
    }
    if table.iter().any(|&v| v == usize::MAX) {
        return Err(Error::InconsistentHolonomy("generator images do not reach the deck group".into()));
    }
    if !crate::cohomology::is_deck_crossed(c.deck(), gamma, &q.phi, &table) {
        return Err(Error::InconsistentHolonomy(
            "extracted values do not satisfy the crossed condition".into(),
        ));
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// Fibre bundles, frames, associated and adjoint bundles
// ---------------------------------------------------------------------------

/// A flat fibre bundle over a base graph: a finite fibre and one bijection
/// per edge; reversed traversal uses the inverse map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreBundleModel {
    base: Graph,
    fibre_size: usize,
    transitions: Vec<Vec<usize>>,
}

impl FibreBundleModel {
    pub fn new(base: Graph, fibre_size: usize, transitions: Vec<Vec<usize>>) -> Result<Self> {
        if transitions.len() != base.num_edges() {
            return Err(Error::Invalid("one transition per base edge required".into()));
        }
        for t in &transitions {
            if !is_permutation(t, fibre_size) {
                return Err(Error::NotBijective(t.clone()));
            }
        }
        Ok(FibreBundleModel { base, fibre_size, transitions })
    }

    pub fn trivial(base: Graph, fibre_size: usize) -> Self {
        let id: Vec<usize> = (0..fibre_size).collect();
        let transitions = vec![id; base.num_edges()];
        FibreBundleModel { base, fibre_size, transitions }
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn fibre_size(&self) -> usize {
        self.fibre_size
    }

    pub fn transition(&self, edge: usize) -> &[usize] {
        &self.transitions[edge]
    }
}

/// All bundle isomorphisms between two fibre bundles over the same base:
/// vertexwise bijections commuting with the transitions, found by
/// enumerating the root bijection and forcing along a spanning tree.
pub fn bundle_isomorphisms(
    e1: &FibreBundleModel,
    e2: &FibreBundleModel,
) -> Result<Vec<Vec<Vec<usize>>>> {
    if e1.base != e2.base {
        return Err(Error::Invalid("bundles live over different bases".into()));
    }
    if e1.fibre_size != e2.fibre_size {
        return Err(Error::FibreMismatch { left: e1.fibre_size, right: e2.fibre_size });
    }
    let n = e1.fibre_size;
    let base = &e1.base;
    let tree = base.spanning_tree(0)?;
    let mut found = Vec::new();
    for root in permutations_lex(n) {
        let mut u: Vec<Vec<usize>> = vec![Vec::new(); base.num_vertices()];
        u[0] = root.clone();
        for v in 0..base.num_vertices() {
            let mut at = 0usize;
            for step in &tree.path_from_root[v] {
                let (a, b) = base.step_endpoints(*step);
                debug_assert_eq!(a, at);
                let t1 = step_map(&e1.transitions[step.edge], step.forward);
                let t2 = step_map(&e2.transitions[step.edge], step.forward);
                // u_b ∘ t1 = t2 ∘ u_a
                let t1_inv = invert(&t1);
                u[b] = (0..n).map(|x| t2[u[a][t1_inv[x]]]).collect();
                at = b;
            }
        }
        let ok = (0..base.num_edges()).all(|e| {
            let (a, b) = base.edge(e);
            (0..n).all(|x| u[b][e1.transitions[e][x]] == e2.transitions[e][u[a][x]])
        });
        if ok {
            found.push(u);
        }
    }
    Ok(found)
}

fn step_map(t: &[usize], forward: bool) -> Vec<usize> {
    if forward {
        t.to_vec()
    } else {
        invert(t)
    }
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// The automorphism group bundle of a flat fibre bundle: fibre `Sym(F)`,
/// transitions by conjugation with the bundle's own transitions.
pub fn automorphism_bundle(e: &FibreBundleModel) -> Result<GroupBundleModel> {
    let perms = permutations_lex(e.fibre_size);
    let sym = FiniteGroup::symmetric(e.fibre_size)?;
    let index_of = |p: &[usize]| {
        perms
            .binary_search_by(|q| q.as_slice().cmp(p))
            .expect("conjugate of a permutation is a permutation")
    };
    let transitions: Vec<Vec<usize>> = e
        .transitions
        .iter()
        .map(|t| {
            let t_inv = invert(t);
            perms
                .iter()
                .map(|p| {
                    let conj: Vec<usize> = (0..e.fibre_size).map(|x| t[p[t_inv[x]]]).collect();
                    index_of(&conj)
                })
                .collect()
        })
        .collect();
    GroupBundleModel::from_transitions(e.base.clone(), sym, transitions)
}

/// The frame bundle of `e_prime` relative to the reference bundle `e`: the
/// torsor of fibrewise bijections `e_x → e'_x` under the automorphism
/// bundle of `e`, with the right action by precomposition. Chart
/// coordinates identify a frame with its permutation; the transport offset
/// along an edge is `T^{E'} ∘ (T^E)⁻¹`.
pub fn frame_bundle(e: &FibreBundleModel, e_prime: &FibreBundleModel) -> Result<TorsorModel> {
    if e.base != e_prime.base {
        return Err(Error::Invalid("bundles live over different bases".into()));
    }
    if e.fibre_size != e_prime.fibre_size {
        return Err(Error::FibreMismatch { left: e.fibre_size, right: e_prime.fibre_size });
    }
    let bundle = automorphism_bundle(e)?;
    let perms = permutations_lex(e.fibre_size);
    let index_of = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
    let offsets: Vec<usize> = (0..e.base.num_edges())
        .map(|edge| {
            let te_inv = invert(&e.transitions[edge]);
            let composed: Vec<usize> =
                (0..e.fibre_size).map(|x| e_prime.transitions[edge][te_inv[x]]).collect();
            index_of(&composed)
        })
        .collect();
    let torsor = TorsorModel { bundle, offsets, rho: None };
    torsor.verify()?;
    Ok(torsor)
}

/// The associated bundle `P[E]`: the quotient of `P ×_X E` by the
/// automorphism bundle of `E`. In chart coordinates its transition along an
/// edge is the frame offset acting after the transition of `E`.
pub fn associated_bundle(p: &TorsorModel, e: &FibreBundleModel) -> Result<FibreBundleModel> {
    let aut = automorphism_bundle(e)?;
    if !p.bundle.same_bundle(&aut) {
        return Err(Error::Invalid(
            "torsor is not under the automorphism bundle of the reference bundle".into(),
        ));
    }
    let perms = permutations_lex(e.fibre_size);
    let transitions: Vec<Vec<usize>> = (0..e.base.num_edges())
        .map(|edge| {
            let offset_perm = &perms[p.offsets[edge]];
            (0..e.fibre_size).map(|x| offset_perm[e.transitions[edge][x]]).collect()
        })
        .collect();
    FibreBundleModel::new(e.base.clone(), e.fibre_size, transitions)
}

/// The adjoint bundle `Ad(P) = P[𝒢]` for the conjugation action: a group
/// bundle with the same fibre group and transitions conjugated by the
/// torsor offsets.
pub fn adjoint_bundle(p: &TorsorModel) -> Result<GroupBundleModel> {
    let g = p.bundle.fibre().clone();
    let transitions: Vec<Vec<usize>> = (0..p.bundle.base().num_edges())
        .map(|e| {
            let t = &p.bundle.transitions[e];
            let a = p.offsets[e];
            (0..g.order()).map(|h| g.mul(g.mul(a, t[h]), g.inv(a))).collect()
        })
        .collect();
    GroupBundleModel::from_transitions(p.bundle.base().clone(), g, transitions)
}

/// The gauge group of a torsor: global sections of `Ad(P)` under pointwise
/// product, together with the section tuples in element order. Section `s`
/// corresponds to the torsor automorphism acting by left translation with
/// `s(x)` on the fibre over `x`.
pub struct GaugeGroup {
    pub group: FiniteGroup,
    pub sections: Vec<Vec<usize>>,
}

pub fn gauge_group(p: &TorsorModel) -> Result<GaugeGroup> {
    let ad = adjoint_bundle(p)?;
    let g = ad.fibre();
    let base = ad.base();
    let tree = base.spanning_tree(0)?;
    let mut sections: Vec<Vec<usize>> = Vec::new();
    for root in 0..g.order() {
        let mut s = vec![usize::MAX; base.num_vertices()];
        s[0] = root;
        for v in 0..base.num_vertices() {
            let mut at = 0usize;
            for step in &tree.path_from_root[v] {
                let (a, b) = base.step_endpoints(*step);
                debug_assert_eq!(a, at);
                let t = ad.step_transition(*step);
                s[b] = t[s[a]];
                at = b;
            }
        }
        let ok = (0..base.num_edges()).all(|e| {
            let (a, b) = base.edge(e);
            ad.transition(e)[s[a]] == s[b]
        });
        if ok {
            sections.push(s);
        }
    }
    sections.sort_unstable();
    let order = sections.len();
    let index_of = |s: &[usize]| {
        sections
            .binary_search_by(|x| x.as_slice().cmp(s))
            .map_err(|_| Error::Invalid("pointwise product left the section set".into()))
    };
    let mut table = vec![0usize; order * order];
    for (i, a) in sections.iter().enumerate() {
        for (j, b) in sections.iter().enumerate() {
            let prod: Vec<usize> = a.iter().zip(b).map(|(&x, &y)| g.mul(x, y)).collect();
            table[i * order + j] = index_of(&prod)?;
        }
    }
    let group = FiniteGroup::from_table(order, table, None)?;
    Ok(GaugeGroup { group, sections })
}

/// The composition group of the torsor automorphisms returned by
/// [`torsor_isomorphisms`], with the identity automorphism at index 0.
pub fn automorphism_composition_group(
    p: &TorsorModel,
    budget: u64,
) -> Result<(FiniteGroup, Vec<Vec<usize>>)> {
    let mut autos = torsor_isomorphisms(p, p, budget)?;
    autos.sort_unstable();
    let g = p.bundle.fibre();
    let order = autos.len();
    let index_of = |w: &[usize]| {
        autos
            .binary_search_by(|x| x.as_slice().cmp(w))
            .map_err(|_| Error::Invalid("composition left the automorphism set".into()))
    };
    let mut table = vec![0usize; order * order];
    for (i, a) in autos.iter().enumerate() {
        for (j, b) in autos.iter().enumerate() {
            // composition of left translations: (a ∘ b)(x) = a(x)·b(x)
            let comp: Vec<usize> = a.iter().zip(b).map(|(&x, &y)| g.mul(x, y)).collect();
            table[i * order + j] = index_of(&comp)?;
        }
    }
    let group = FiniteGroup::from_table(order, table, None)?;
    Ok((group, autos))
}
