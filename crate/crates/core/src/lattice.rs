//! Concept lattices: the subconcept order, its covering relation and the
//! object/attribute labels attached to nodes.

use std::collections::HashMap;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::context::{AttributeSet, FormalContext, ObjectSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("concept lattice too large: at least {at_least} concepts")]
    TooLarge { at_least: usize },
    #[error("computation cancelled")]
    Cancelled,
}

/// A formal concept `(extent, intent)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Concept {
    pub extent: ObjectSet,
    pub intent: AttributeSet,
}

impl Concept {
    /// The subconcept relation: `self ≤ other` iff `self`'s extent is
    /// contained in `other`'s.
    pub fn leq(&self, other: &Concept) -> bool {
        self.extent.is_subset(&other.extent)
    }

    /// True when the pair is closed in both directions in `ctx`.
    pub fn is_concept_of(&self, ctx: &FormalContext) -> bool {
        ctx.derive_intent(&self.intent).ok().as_ref() == Some(&self.extent)
            && ctx.derive_extent(&self.extent).ok().as_ref() == Some(&self.intent)
    }
}

#[derive(Debug, Clone)]
pub struct ConceptLattice {
    context: FormalContext,
    concepts: Vec<Concept>,
    covers: Vec<(usize, usize)>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    object_labels: Vec<usize>,
    attribute_labels: Vec<usize>,
    top: usize,
    bottom: usize,
    by_intent: HashMap<AttributeSet, usize>,
}

impl ConceptLattice {
    pub fn build(ctx: &FormalContext) -> Self {
        Self::from_concepts(ctx, ctx.enumerate_concepts())
    }

    /// Builds the lattice unless it has more than `max_concepts` nodes or
    /// `cancelled` reports true during enumeration.
    pub fn build_bounded(
        ctx: &FormalContext,
        max_concepts: usize,
        cancelled: &dyn Fn() -> bool,
    ) -> Result<Self, LatticeError> {
        let mut concepts = Vec::new();
        for c in ctx.concepts() {
            if cancelled() {
                return Err(LatticeError::Cancelled);
            }
            if concepts.len() == max_concepts {
                return Err(LatticeError::TooLarge {
                    at_least: max_concepts + 1,
                });
            }
            concepts.push(c);
        }
        Ok(Self::from_concepts(ctx, concepts))
    }

    fn from_concepts(ctx: &FormalContext, concepts: Vec<Concept>) -> Self {
        let n = concepts.len();
        let by_intent: HashMap<AttributeSet, usize> = concepts
            .iter()
            .enumerate()
            .map(|(i, c)| (c.intent.clone(), i))
            .collect();

        let mut by_size: Vec<usize> = (0..n).collect();
        by_size.sort_by_key(|&i| (concepts[i].extent.len(), i));

        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for &child in &by_size {
            let extent = &concepts[child].extent;
            let mut found: Vec<usize> = Vec::new();
            for &parent in &by_size {
                let candidate = &concepts[parent].extent;
                if candidate.len() <= extent.len() || !extent.is_subset(candidate) {
                    continue;
                }
                // Candidates arrive by ascending extent size, so any
                // intermediate concept has already been accepted.
                if found
                    .iter()
                    .all(|&q| !concepts[q].extent.is_subset(candidate))
                {
                    found.push(parent);
                }
            }
            found.sort_unstable();
            for &p in &found {
                lower[p].push(child);
            }
            upper[child] = found;
        }
        for l in lower.iter_mut() {
            l.sort_unstable();
        }
        let mut covers: Vec<(usize, usize)> = upper
            .iter()
            .enumerate()
            .flat_map(|(c, ps)| ps.iter().map(move |&p| (c, p)))
            .collect();
        covers.sort_unstable();

        let object_labels = (0..ctx.object_count())
            .map(|g| by_intent[ctx.object_intent(g).expect("in range")])
            .collect();
        let attribute_labels = (0..ctx.attribute_count())
            .map(|m| {
                let extent = ctx.attribute_extent(m).expect("in range");
                by_intent[&ctx.common_attributes(extent)]
            })
            .collect();
        let top = by_intent[&ctx.common_attributes(&BitSet::full(ctx.object_count()))];
        let bottom = by_intent[&BitSet::full(ctx.attribute_count())];

        ConceptLattice {
            context: ctx.clone(),
            concepts,
            covers,
            upper,
            lower,
            object_labels,
            attribute_labels,
            top,
            bottom,
            by_intent,
        }
    }

    pub fn context(&self) -> &FormalContext {
        &self.context
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn concept(&self, i: usize) -> &Concept {
        &self.concepts[i]
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    /// Covering pairs `(child, parent)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.upper[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower[i]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    /// Index of the object concept of `g`.
    pub fn object_label(&self, g: usize) -> usize {
        self.object_labels[g]
    }

    /// Index of the attribute concept of `m`.
    pub fn attribute_label(&self, m: usize) -> usize {
        self.attribute_labels[m]
    }

    /// Objects whose label is attached at node `i`.
    pub fn objects_labelled_at(&self, i: usize) -> Vec<usize> {
        (0..self.object_labels.len())
            .filter(|&g| self.object_labels[g] == i)
            .collect()
    }

    /// Attributes whose label is attached at node `i`.
    pub fn attributes_labelled_at(&self, i: usize) -> Vec<usize> {
        (0..self.attribute_labels.len())
            .filter(|&m| self.attribute_labels[m] == i)
            .collect()
    }

    pub fn index_of_intent(&self, intent: &AttributeSet) -> Option<usize> {
        self.by_intent.get(intent).copied()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.concepts[a].leq(&self.concepts[b])
    }

    /// Greatest common subconcept: extents intersect.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        let extent = self.concepts[a].extent.intersection(&self.concepts[b].extent);
        self.by_intent[&self.context.common_attributes(&extent)]
    }

    /// Least common superconcept: intents intersect.
    pub fn join(&self, a: usize, b: usize) -> usize {
        let intent = self.concepts[a].intent.intersection(&self.concepts[b].intent);
        self.by_intent[&self.context.attribute_closure(&intent)]
    }

    fn reachable<'a>(&'a self, start: usize, step: impl Fn(usize) -> &'a [usize]) -> BitSet {
        let mut seen = BitSet::empty(self.concepts.len());
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(i) = stack.pop() {
            for &j in step(i) {
                if !seen.contains(j) {
                    seen.insert(j);
                    stack.push(j);
                }
            }
        }
        seen
    }

    /// Collects the object labels met when walking down the diagram from
    /// node `i`.
    pub fn read_extent_from_diagram(&self, i: usize) -> ObjectSet {
        let below = self.reachable(i, |j| &self.lower[j]);
        let mut extent = BitSet::empty(self.context.object_count());
        for (g, &node) in self.object_labels.iter().enumerate() {
            if below.contains(node) {
                extent.insert(g);
            }
        }
        extent
    }

    /// Collects the attribute labels met on the way down from the top to
    /// node `i`.
    pub fn read_intent_from_diagram(&self, i: usize) -> AttributeSet {
        let above = self.reachable(i, |j| &self.upper[j]);
        let mut intent = BitSet::empty(self.context.attribute_count());
        for (m, &node) in self.attribute_labels.iter().enumerate() {
            if above.contains(node) {
                intent.insert(m);
            }
        }
        intent
    }

    /// The lattice as an abstract finite order on concept indices.
    pub fn to_order(&self) -> FiniteOrder {
        let n = self.concepts.len();
        let up = (0..n)
            .map(|a| BitSet::from_indices(n, (0..n).filter(|&b| self.leq(a, b))).expect("in range"))
            .collect();
        FiniteOrder { up }
    }
}

/// A finite relation on `0..n`, intended to be a partial order.
/// Row `x` holds every `y` with `x ≤ y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteOrder {
    up: Vec<BitSet>,
}

impl FiniteOrder {
    /// Builds an order from a `leq(x, y)` predicate on `0..n`.
    pub fn from_fn(n: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        let up = (0..n)
            .map(|x| BitSet::from_indices(n, (0..n).filter(|&y| leq(x, y))).expect("in range"))
            .collect();
        FiniteOrder { up }
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        Self::from_fn(n, |x, y| x <= y)
    }

    /// Subsets of a `k`-element set ordered by inclusion (bitmask encoding).
    pub fn boolean(k: u32) -> Self {
        Self::from_fn(1 << k, |x, y| x & !y == 0)
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    fn down(&self, x: usize) -> BitSet {
        let n = self.len();
        BitSet::from_indices(n, (0..n).filter(|&y| self.leq(y, x))).expect("in range")
    }

    /// Checks reflexivity, antisymmetry, transitivity and that every pair
    /// has a meet and a join.
    pub fn check_lattice(&self) -> Result<(), LatticeError> {
        let n = self.len();
        if n == 0 {
            return Err(LatticeError::NotALattice("empty order has no top".into()));
        }
        for x in 0..n {
            if !self.leq(x, x) {
                return Err(LatticeError::NotALattice(format!("{x} ≤ {x} fails")));
            }
            for y in 0..n {
                if x != y && self.leq(x, y) && self.leq(y, x) {
                    return Err(LatticeError::NotALattice(format!(
                        "{x} and {y} violate antisymmetry"
                    )));
                }
                if self.leq(x, y) && !self.up[y].is_subset(&self.up[x]) {
                    return Err(LatticeError::NotALattice(format!(
                        "transitivity fails through {x} ≤ {y}"
                    )));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let uppers = self.up[x].intersection(&self.up[y]);
                if !uppers.iter().any(|u| uppers.is_subset(&self.up[u])) {
                    return Err(LatticeError::NotALattice(format!("{x} and {y} have no join")));
                }
                let lowers = self.down(x).intersection(&self.down(y));
                if !lowers.iter().any(|l| lowers.is_subset(&self.down(l))) {
                    return Err(LatticeError::NotALattice(format!("{x} and {y} have no meet")));
                }
            }
        }
        Ok(())
    }

    /// The context `(L, L, ≤)` whose concept lattice is isomorphic to this
    /// lattice.
    pub fn incidence_context(&self) -> FormalContext {
        let n = self.len();
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let rows: Vec<Vec<bool>> = (0..n)
            .map(|x| (0..n).map(|y| self.leq(x, y)).collect())
            .collect();
        FormalContext::from_rows(names.clone(), names, &rows).expect("numeric names are distinct")
    }
}

/// Verifies that `x ↦ (↓x, ↑x)` is an order isomorphism from `order` onto
/// the concept lattice of `(L, L, ≤)`.
pub fn fundamental_theorem_check(order: &FiniteOrder) -> Result<bool, LatticeError> {
    order.check_lattice()?;
    let n = order.len();
    let ctx = order.incidence_context();
    let lattice = ConceptLattice::build(&ctx);
    if lattice.len() != n {
        return Ok(false);
    }
    let mut image = Vec::with_capacity(n);
    for x in 0..n {
        let concept = Concept {
            extent: order.down(x),
            intent: order.up[x].clone(),
        };
        if !concept.is_concept_of(&ctx) {
            return Ok(false);
        }
        match lattice.index_of_intent(&concept.intent) {
            Some(i) => image.push(i),
            None => return Ok(false),
        }
    }
    let mut distinct = image.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != n {
        return Ok(false);
    }
    for x in 0..n {
        for y in 0..n {
            if order.leq(x, y) != lattice.leq(image[x], image[y]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
