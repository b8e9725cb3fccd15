//! Finitely presented groups: free words, presentations and homomorphism
//! enumeration into finite targets.
//!
//! The deck group of a cover and the edge-path group of a nerve both arrive
//! here as presentations. No word-problem machinery beyond free reduction is
//! used: every computation works from generator values and relator checks
//! alone, so presented groups may be infinite.

use crate::error::{Error, Result};
use crate::graph::{Graph, SpanningTree};
use crate::group::FiniteGroup;
use rayon::prelude::*;

/// A freely reduced word: letter `+k` is generator `k`, `-k` its inverse
/// (generators are numbered from 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<i64>,
}

impl Word {
    /// Free reduction: repeatedly cancels adjacent `+k, -k` pairs.
    pub fn reduce(letters: &[i64]) -> Result<Word> {
        let mut stack: Vec<i64> = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 {
                return Err(Error::ZeroLetter);
            }
            if stack.last() == Some(&-l) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Ok(Word { letters: stack })
    }

    pub fn empty() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::reduce(&letters).expect("letters of reduced words are nonzero")
    }

    pub fn inverse(&self) -> Word {
        let letters: Vec<i64> = self.letters.iter().rev().map(|&l| -l).collect();
        Word { letters }
    }

    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|&l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }
}

/// A finitely presented group `<g_1..g_n | r_1..r_m>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    ngens: usize,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(ngens: usize, relators: Vec<Word>) -> Result<Self> {
        for (i, r) in relators.iter().enumerate() {
            if r.is_empty() {
                return Err(Error::EmptyRelator(i));
            }
            if r.max_generator() > ngens {
                let bad = r.letters().iter().find(|l| l.unsigned_abs() as usize > ngens).unwrap();
                return Err(Error::LetterOutOfRange { letter: *bad, ngens });
            }
        }
        Ok(Presentation { ngens, relators })
    }

    pub fn free(ngens: usize) -> Self {
        Presentation { ngens, relators: Vec::new() }
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }
}

/// The fundamental group of a compact orientable surface of genus `g`:
/// generators `a_1, b_1, ..., a_g, b_g` and the single relator
/// `[a_1,b_1]···[a_g,b_g]`.
pub fn surface_presentation(genus: usize) -> Result<Presentation> {
    if genus < 1 {
        return Err(Error::BadGenus(genus));
    }
    let mut letters = Vec::with_capacity(4 * genus);
    for i in 0..genus {
        let a = (2 * i + 1) as i64;
        let b = (2 * i + 2) as i64;
        letters.extend_from_slice(&[a, b, -a, -b]);
    }
    Presentation::new(2 * genus, vec![Word::reduce(&letters)?])
}

/// Presentation data extracted from a connected multigraph: a free group on
/// the cotree edges plus the edge-to-word dictionary used by the bundle and
/// nerve modules.
#[derive(Debug, Clone)]
pub struct GraphPi1 {
    pub presentation: Presentation,
    pub tree: SpanningTree,
    /// For each edge of the graph: the generator word of its loop
    /// (empty for tree edges, a single letter for cotree edges).
    pub edge_words: Vec<Word>,
    /// For each cotree edge position, the edge index it labels.
    pub generator_edges: Vec<usize>,
}

/// Free presentation of the fundamental group of a connected multigraph,
/// rooted at `root`.
pub fn graph_pi1(graph: &Graph, root: usize) -> Result<GraphPi1> {
    let tree = graph.spanning_tree(root)?;
    let generator_edges = tree.cotree_edges.clone();
    let mut edge_words = vec![Word::empty(); graph.num_edges()];
    for (i, &e) in generator_edges.iter().enumerate() {
        edge_words[e] = Word::reduce(&[(i + 1) as i64])?;
    }
    let presentation = Presentation::free(generator_edges.len());
    Ok(GraphPi1 { presentation, tree, edge_words, generator_edges })
}

/// One target value per generator of a presentation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Assignment {
    pub values: Vec<usize>,
}

/// Multiplicative extension of generator values to a word; the empty word
/// maps to the identity.
pub fn evaluate_hom(target: &FiniteGroup, values: &[usize], word: &Word) -> usize {
    let mut acc = target.identity();
    for &l in word.letters() {
        let v = values[(l.unsigned_abs() as usize) - 1];
        let x = if l > 0 { v } else { target.inv(v) };
        acc = target.mul(acc, x);
    }
    acc
}

/// All homomorphisms from a presentation into a finite group, in
/// lexicographic order of their value tuples.
///
/// Depth-first search with prefix pruning: a relator is evaluated as soon as
/// every generator it mentions has been assigned. The a-priori grid size
/// `|G|^ngens` is checked against the budget before anything runs.
pub fn enumerate_homs(p: &Presentation, g: &FiniteGroup, budget: u64) -> Result<Vec<Assignment>> {
    crate::group::grid_budget(g.order(), p.ngens(), budget)?;
    // relators become checkable once their highest generator is assigned
    let mut check_at: Vec<Vec<usize>> = vec![Vec::new(); p.ngens() + 1];
    for (i, r) in p.relators().iter().enumerate() {
        check_at[r.max_generator()].push(i);
    }
    if p.ngens() == 0 {
        return Ok(vec![Assignment { values: Vec::new() }]);
    }
    let out: Vec<Vec<Assignment>> = (0..g.order())
        .into_par_iter()
        .map(|first| {
            let mut values = vec![0usize; p.ngens()];
            values[0] = first;
            let mut found = Vec::new();
            if check_at[1].iter().all(|&r| evaluate_hom(g, &values, &p.relators()[r]) == 0) {
                hom_dfs(p, g, &check_at, 1, &mut values, &mut found);
            }
            found
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

fn hom_dfs(
    p: &Presentation,
    g: &FiniteGroup,
    check_at: &[Vec<usize>],
    depth: usize,
    values: &mut Vec<usize>,
    found: &mut Vec<Assignment>,
) {
    if depth == p.ngens() {
        found.push(Assignment { values: values.clone() });
        return;
    }
    for v in 0..g.order() {
        values[depth] = v;
        let ok = check_at[depth + 1]
            .iter()
            .all(|&r| evaluate_hom(g, values, &p.relators()[r]) == 0);
        if ok {
            hom_dfs(p, g, check_at, depth + 1, values, found);
        }
    }
    values[depth] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::DEFAULT_BUDGET;

    fn w(letters: &[i64]) -> Word {
        Word::reduce(letters).unwrap()
    }

    /// Naive repeated-scan reduction, kept independent of the stack-based
    /// implementation.
    fn naive_reduce(letters: &[i64]) -> Vec<i64> {
        let mut work: Vec<i64> = letters.to_vec();
        loop {
            let mut cancelled = false;
            let mut i = 0;
            while i + 1 < work.len() {
                if work[i] == -work[i + 1] {
                    work.drain(i..=i + 1);
                    cancelled = true;
                } else {
                    i += 1;
                }
            }
            if !cancelled {
                return work;
            }
        }
    }

    #[test]
    fn reduce_cancels_pairs() {
        assert!(w(&[1, -1]).is_empty());
        assert_eq!(w(&[1, 2, -2, 1]).letters(), &[1, 1]);
        assert_eq!(w(&[2, -1, 1, -2, 3]).letters(), naive_reduce(&[2, -1, 1, -2, 3]));
        assert_eq!(w(&[2, -1, 1, -2, 3]).letters(), &[3]);
    }

    #[test]
    fn reduce_rejects_zero() {
        assert_eq!(Word::reduce(&[1, 0]).unwrap_err(), Error::ZeroLetter);
    }

    #[test]
    fn surface_presentations() {
        let torus = surface_presentation(1).unwrap();
        assert_eq!(torus.ngens(), 2);
        assert_eq!(torus.relators()[0].letters(), &[1, 2, -1, -2]);
        let genus2 = surface_presentation(2).unwrap();
        assert_eq!(genus2.ngens(), 4);
        assert_eq!(genus2.relators()[0].len(), 8);
        assert!(surface_presentation(0).is_err());
    }

    #[test]
    fn surface_abelianization_rank() {
        // rank of the abelianization = ngens - rank of the relator exponent
        // matrix over the integers; computed here by fraction-free
        // elimination as an independent oracle
        fn int_rank(mut m: Vec<Vec<i64>>) -> usize {
            let rows = m.len();
            if rows == 0 {
                return 0;
            }
            let cols = m[0].len();
            let mut rank = 0;
            let mut col = 0;
            while rank < rows && col < cols {
                let pivot = (rank..rows).find(|&r| m[r][col] != 0);
                match pivot {
                    None => col += 1,
                    Some(p) => {
                        m.swap(rank, p);
                        for r in 0..rows {
                            if r != rank && m[r][col] != 0 {
                                let (a, b) = (m[rank][col], m[r][col]);
                                for c in 0..cols {
                                    m[r][c] = m[r][c] * a - m[rank][c] * b;
                                }
                            }
                        }
                        rank += 1;
                        col += 1;
                    }
                }
            }
            rank
        }
        let torus = surface_presentation(1).unwrap();
        let mut exponents = vec![vec![0i64; torus.ngens()]; torus.relators().len()];
        for (i, r) in torus.relators().iter().enumerate() {
            for &l in r.letters() {
                let g = (l.unsigned_abs() as usize) - 1;
                exponents[i][g] += l.signum();
            }
        }
        assert_eq!(torus.ngens() - int_rank(exponents), 2);
    }

    #[test]
    fn graph_pi1_ranks() {
        let wedge = Graph::new(1, vec![(0, 0), (0, 0)]).unwrap();
        assert_eq!(graph_pi1(&wedge, 0).unwrap().presentation.ngens(), 2);

        let tree = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(graph_pi1(&tree, 0).unwrap().presentation.ngens(), 0);

        let triangle = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let p = graph_pi1(&triangle, 0).unwrap();
        assert_eq!(p.presentation.ngens(), 1);
        // oracle: E - V + 1
        assert_eq!(3 - 3 + 1, 1);
    }

    #[test]
    fn graph_pi1_rejects_disconnected() {
        let g = Graph::new(2, vec![]).unwrap();
        assert_eq!(graph_pi1(&g, 0).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn evaluate_hom_examples() {
        let g = FiniteGroup::cyclic(5).unwrap();
        assert_eq!(evaluate_hom(&g, &[3], &Word::empty()), 0);
        assert_eq!(evaluate_hom(&g, &[3], &w(&[1, 1])), 1);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        // commutator expansion x y x^-1 y^-1
        for x in 0..6 {
            for y in 0..6 {
                let c = evaluate_hom(&s3, &[x, y], &w(&[1, 2, -1, -2]));
                let direct = s3.mul(s3.mul(s3.mul(x, y), s3.inv(x)), s3.inv(y));
                assert_eq!(c, direct);
            }
        }
    }

    /// Unpruned full-grid oracle for hom enumeration.
    fn grid_homs(p: &Presentation, g: &FiniteGroup) -> Vec<Vec<usize>> {
        let n = p.ngens();
        let mut out = Vec::new();
        let total = g.order().pow(n as u32);
        for code in 0..total {
            let mut values = vec![0usize; n];
            let mut c = code;
            for slot in (0..n).rev() {
                values[slot] = c % g.order();
                c /= g.order();
            }
            // decode so that values are in lexicographic order of tuples
            let ok = p.relators().iter().all(|r| evaluate_hom(g, &values, r) == 0);
            if ok {
                out.push(values);
            }
        }
        out
    }

    #[test]
    fn enumerate_homs_matches_grid_oracle() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let free2 = Presentation::free(2);
        let homs = enumerate_homs(&free2, &s3, DEFAULT_BUDGET).unwrap();
        assert_eq!(homs.len(), 36);
        let oracle = grid_homs(&free2, &s3);
        assert_eq!(homs.iter().map(|a| a.values.clone()).collect::<Vec<_>>(), oracle);

        let c3 = FiniteGroup::cyclic(3).unwrap();
        let p = Presentation::new(1, vec![w(&[1, 1])]).unwrap();
        let homs = enumerate_homs(&p, &c3, DEFAULT_BUDGET).unwrap();
        assert_eq!(homs.len(), 1);
        assert_eq!(grid_homs(&p, &c3).len(), 1);

        let c2 = FiniteGroup::cyclic(2).unwrap();
        let torus = surface_presentation(1).unwrap();
        let homs = enumerate_homs(&torus, &c2, DEFAULT_BUDGET).unwrap();
        assert_eq!(homs.len(), 4);
        assert_eq!(grid_homs(&torus, &c2).len(), 4);
    }

    #[test]
    fn enumerate_homs_respects_budget() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let free4 = Presentation::free(4);
        let err = enumerate_homs(&free4, &s3, 100).unwrap_err();
        match err {
            Error::Capacity { required, budget } => {
                assert_eq!(required, 1296);
                assert_eq!(budget, 100);
            }
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn empty_presentation_has_one_hom() {
        let p = Presentation::free(0);
        let g = FiniteGroup::symmetric(3).unwrap();
        let homs = enumerate_homs(&p, &g, DEFAULT_BUDGET).unwrap();
        assert_eq!(homs.len(), 1);
        assert!(homs[0].values.is_empty());
    }
}
