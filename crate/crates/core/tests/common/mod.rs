//! Brute-force reference implementations shared by the integration tests.
//! They work on plain bit masks and share no code with the library
//! algorithms they check.
#![allow(dead_code)]

use fcakit::exploration::ExplorationSession;
use fcakit::{AttributeSet, BitSet, FormalContext, Implication};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// A context with at most 32 objects and 32 attributes, rows as masks.
#[derive(Debug, Clone)]
pub struct Naive {
    pub objects: usize,
    pub attributes: usize,
    pub rows: Vec<u32>,
}

pub fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl Naive {
    pub fn of(ctx: &FormalContext) -> Self {
        assert!(ctx.object_count() <= 32 && ctx.attribute_count() <= 32);
        let rows = (0..ctx.object_count())
            .map(|g| {
                (0..ctx.attribute_count())
                    .filter(|&m| ctx.has(g, m))
                    .fold(0, |acc, m| acc | 1 << m)
            })
            .collect();
        Naive {
            objects: ctx.object_count(),
            attributes: ctx.attribute_count(),
            rows,
        }
    }

    /// Attributes shared by all objects in `objs`.
    pub fn common_attributes(&self, objs: u32) -> u32 {
        (0..self.objects)
            .filter(|g| objs >> g & 1 == 1)
            .fold(full_mask(self.attributes), |acc, g| acc & self.rows[g])
    }

    /// Objects having every attribute in `attrs`.
    pub fn common_objects(&self, attrs: u32) -> u32 {
        (0..self.objects)
            .filter(|&g| self.rows[g] & attrs == attrs)
            .fold(0, |acc, g| acc | 1 << g)
    }

    pub fn closure(&self, attrs: u32) -> u32 {
        self.common_attributes(self.common_objects(attrs))
    }

    /// All intents in increasing numeric order.
    pub fn intents(&self) -> Vec<u32> {
        (0..=full_mask(self.attributes))
            .filter(|&b| self.closure(b) == b)
            .collect()
    }

    /// Pseudo-intents by definition: not closed, and containing the closure
    /// of every smaller pseudo-intent they contain.
    pub fn pseudo_intents(&self) -> Vec<u32> {
        let mut sets: Vec<u32> = (0..=full_mask(self.attributes)).collect();
        sets.sort_by_key(|s| (s.count_ones(), *s));
        let mut found: Vec<u32> = Vec::new();
        for p in sets {
            if self.closure(p) == p {
                continue;
            }
            let ok = found
                .iter()
                .filter(|&&q| q & p == q && q != p)
                .all(|&q| self.closure(q) & p == self.closure(q));
            if ok {
                found.push(p);
            }
        }
        found
    }

    pub fn implication_holds(&self, premise: u32, conclusion: u32) -> bool {
        self.rows
            .iter()
            .all(|&r| r & premise != premise || r & conclusion == conclusion)
    }
}

/// Closure of `set` under `(premise, conclusion)` rules, by repeated passes.
pub fn naive_close(rules: &[(u32, u32)], mut set: u32) -> u32 {
    loop {
        let before = set;
        for &(p, c) in rules {
            if set & p == p {
                set |= c;
            }
        }
        if set == before {
            return set;
        }
    }
}

pub fn mask(set: &BitSet) -> u32 {
    set.iter().fold(0, |acc, i| acc | 1 << i)
}

pub fn bits(universe: usize, mask: u32) -> BitSet {
    BitSet::from_indices(universe, (0..universe).filter(|i| mask >> i & 1 == 1)).unwrap()
}

pub fn context_from_rows(objects: usize, attributes: usize, rows: &[u32]) -> FormalContext {
    let cells: Vec<Vec<bool>> = rows
        .iter()
        .map(|r| (0..attributes).map(|m| r >> m & 1 == 1).collect())
        .collect();
    FormalContext::from_rows(
        (0..objects).map(|g| format!("g{g}")).collect(),
        (0..attributes).map(|m| format!("m{m}")).collect(),
        &cells,
    )
    .unwrap()
}

pub fn random_context(rng: &mut StdRng, max_objects: usize, max_attributes: usize) -> FormalContext {
    let objects = rng.gen_range(0..=max_objects);
    let attributes = rng.gen_range(0..=max_attributes);
    let density: f64 = rng.gen_range(0.1..0.9);
    let rows: Vec<u32> = (0..objects)
        .map(|_| {
            (0..attributes)
                .filter(|_| rng.gen_bool(density))
                .fold(0, |acc, m| acc | 1 << m)
        })
        .collect();
    context_from_rows(objects, attributes, &rows)
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Compares the library's concepts and stem base of `ctx` with the
/// brute-force oracle.
pub fn check_against_oracle(ctx: &FormalContext) -> Result<(), String> {
    let naive = Naive::of(ctx);
    let n = ctx.attribute_count();

    let mut got: Vec<u32> = ctx.enumerate_concepts().iter().map(|c| mask(&c.intent)).collect();
    got.sort_unstable();
    let want = naive.intents();
    if got != want {
        return Err(format!("intents {got:?} != oracle {want:?}"));
    }
    for c in ctx.enumerate_concepts() {
        if mask(&c.extent) != naive.common_objects(mask(&c.intent)) {
            return Err(format!("extent of intent {:?} is wrong", c.intent));
        }
    }

    let base = fcakit::stem_base(ctx);
    let mut premises: Vec<u32> = base.iter().map(|r| mask(&r.implication.premise)).collect();
    premises.sort_unstable();
    let mut pseudo = naive.pseudo_intents();
    pseudo.sort_unstable();
    if premises != pseudo {
        return Err(format!("premises {premises:?} != pseudo-intents {pseudo:?}"));
    }
    let rules: Vec<(u32, u32)> = base
        .iter()
        .map(|r| (mask(&r.implication.premise), mask(&r.implication.conclusion)))
        .collect();
    for &(p, c) in &rules {
        if !naive.implication_holds(p, c) {
            return Err(format!("unsound rule {p:b} => {c:b}"));
        }
        if p | c != naive.closure(p) {
            return Err(format!("rule {p:b} does not conclude its closure"));
        }
    }
    // complete: every valid implication follows; checked through closures,
    // since X => Y holds iff Y is inside the closure of X
    for x in 0..=full_mask(n) {
        if naive_close(&rules, x) != naive.closure(x) {
            return Err(format!("base closure of {x:b} differs from context closure"));
        }
    }
    // non-redundant: dropping any rule loses some consequence
    for skip in 0..rules.len() {
        let rest: Vec<(u32, u32)> = rules
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, r)| *r)
            .collect();
        let (p, c) = rules[skip];
        if naive_close(&rest, p) & c == c {
            return Err(format!("rule {p:b} => {c:b} is redundant"));
        }
    }
    Ok(())
}

/// Explores `start` answering from `truth`: a question is accepted iff it
/// holds in `truth`, otherwise the first violating object of `truth` is
/// given. Returns the finished session and the number of answers given.
pub fn explore_truthfully(start: &FormalContext, truth: &FormalContext, max_steps: usize) -> Result<(ExplorationSession, usize), String> {
    let mut session = ExplorationSession::start(start);
    let mut steps = 0;
    while let Some(q) = session.question().cloned() {
        steps += 1;
        if steps > max_steps {
            return Err(format!("no termination after {max_steps} answers"));
        }
        let premise = translate(session.context(), truth, &q.premise);
        let conclusion = translate(session.context(), truth, &q.conclusion);
        let witness = (0..truth.object_count()).find(|&g| {
            let intent = truth.object_intent(g).unwrap();
            premise.is_subset(intent) && !conclusion.is_subset(intent)
        });
        match witness {
            None => session.accept().map_err(|e| e.to_string())?,
            Some(g) => {
                let intent = translate(truth, session.context(), truth.object_intent(g).unwrap());
                session
                    .reject_with_counterexample(&truth.objects()[g], &intent)
                    .map_err(|e| e.to_string())?
            }
        }
    }
    Ok((session, steps))
}

/// Re-expresses an attribute set of `from` over the attributes of `to`
/// by name.
pub fn translate(from: &FormalContext, to: &FormalContext, set: &AttributeSet) -> AttributeSet {
    to.attribute_set(&from.attribute_names(set)).unwrap()
}

/// The stem base as a set of `(premise, conclusion)` name lists,
/// independent of attribute order.
pub fn named_base(ctx: &FormalContext) -> std::collections::BTreeSet<(Vec<String>, Vec<String>)> {
    let named = |imp: &Implication| {
        let mut p: Vec<String> = ctx.attribute_names(&imp.premise).iter().map(|s| s.to_string()).collect();
        let mut c: Vec<String> = ctx.attribute_names(&imp.conclusion).iter().map(|s| s.to_string()).collect();
        p.sort();
        c.sort();
        (p, c)
    };
    fcakit::stem_base(ctx).iter().map(|r| named(&r.implication)).collect()
}
