mod common;

use common::{bits, check_against_oracle, context_from_rows, explore_truthfully, mask, named_base, Naive};
use fcakit::layout::build_scene;
use fcakit::lectic::lectic_cmp;
use fcakit::{close_under, fundamental_theorem_check, parse_cxt, stem_base, write_cxt, ConceptLattice, FormalContext, Implication};
use proptest::prelude::*;

fn context(max_objects: usize, max_attributes: usize) -> impl Strategy<Value = FormalContext> {
    (0..=max_objects, 0..=max_attributes).prop_flat_map(|(g, m)| {
        prop::collection::vec(0u32..(1 << m), g).prop_map(move |rows| context_from_rows(g, m, &rows))
    })
}

fn rules(m: usize) -> impl Strategy<Value = Vec<Implication>> {
    prop::collection::vec((0u32..1 << m, 0u32..1 << m), 0..6).prop_map(move |pairs| {
        pairs
            .into_iter()
            .map(|(p, c)| Implication::new(bits(m, p), bits(m, c)))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn agrees_with_brute_force(ctx in context(7, 6)) {
        if let Err(e) = check_against_oracle(&ctx) {
            prop_assert!(false, "{}\n{}", e, write_cxt(&ctx));
        }
    }

    #[test]
    fn concepts_come_in_lectic_order(ctx in context(6, 6)) {
        let concepts = ctx.enumerate_concepts();
        for c in &concepts {
            prop_assert!(c.is_concept_of(&ctx));
        }
        for w in concepts.windows(2) {
            prop_assert_eq!(lectic_cmp(&w[0].intent, &w[1].intent), std::cmp::Ordering::Less);
        }
    }

    #[test]
    fn close_under_is_a_closure_operator(rules in rules(5), x in 0u32..32, y in 0u32..32) {
        let cl = |s: u32| mask(&close_under(&rules, &bits(5, s)));
        let (cx, cxy) = (cl(x), cl(x | y));
        prop_assert_eq!(cx & x, x, "extensive");
        prop_assert_eq!(cx & cxy, cx, "monotone");
        prop_assert_eq!(cl(cx), cx, "idempotent");
        let pairs: Vec<(u32, u32)> = rules.iter().map(|r| (mask(&r.premise), mask(&r.conclusion))).collect();
        prop_assert_eq!(cx, common::naive_close(&pairs, x));
    }

    #[test]
    fn covers_are_the_transitive_reduction(ctx in context(6, 5)) {
        let lat = ConceptLattice::build(&ctx);
        let n = lat.len();
        let below = |a: usize, b: usize| a != b && lat.concept(a).extent.is_subset(&lat.concept(b).extent);
        let mut expected = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if below(a, b) && !(0..n).any(|c| below(a, c) && below(c, b)) {
                    expected.push((a, b));
                }
            }
        }
        expected.sort_unstable();
        let mut covers = lat.covers().to_vec();
        covers.sort_unstable();
        prop_assert_eq!(covers, expected);
        for i in 0..n {
            prop_assert_eq!(&lat.read_extent_from_diagram(i), &lat.concept(i).extent);
            prop_assert_eq!(&lat.read_intent_from_diagram(i), &lat.concept(i).intent);
        }
        for a in 0..n {
            for b in 0..n {
                let meet = lat.concept(lat.meet(a, b));
                prop_assert_eq!(&meet.extent, &lat.concept(a).extent.intersection(&lat.concept(b).extent));
                let join = lat.concept(lat.join(a, b));
                prop_assert_eq!(&join.intent, &lat.concept(a).intent.intersection(&lat.concept(b).intent));
            }
        }
    }

    #[test]
    fn every_concept_lattice_satisfies_the_fundamental_theorem(ctx in context(5, 5)) {
        let order = ConceptLattice::build(&ctx).to_order();
        prop_assert_eq!(fundamental_theorem_check(&order), Ok(true));
    }

    #[test]
    fn cxt_round_trip(ctx in context(8, 8)) {
        let text = write_cxt(&ctx);
        let back = parse_cxt(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &ctx);
        prop_assert_eq!(write_cxt(&back), text);
    }

    #[test]
    fn layout_is_layered_and_deterministic(ctx in context(6, 6)) {
        let lat = ConceptLattice::build(&ctx);
        let scene = build_scene(&lat);
        prop_assert_eq!(scene.nodes.len(), lat.len());
        for e in &scene.edges {
            prop_assert!(scene.nodes[e.child].layer > scene.nodes[e.parent].layer);
        }
        prop_assert_eq!(scene.nodes[lat.top()].layer, 0);
        prop_assert_eq!(scene.to_svg(), build_scene(&lat).to_svg());
        let svg = scene.to_svg();
        prop_assert_eq!(svg.matches("class=\"object-label\"").count(), ctx.object_count());
        prop_assert_eq!(svg.matches("class=\"attribute-label\"").count(), ctx.attribute_count());
    }

    #[test]
    fn exploration_recovers_a_hidden_universe(universe in context(6, 5), keep in 0u32..64) {
        let mut start = universe.clone();
        for g in (0..universe.object_count()).rev().filter(|g| keep >> g & 1 == 0) {
            start = start.remove_object(g).unwrap();
        }
        let limit = 3usize.pow(universe.attribute_count() as u32);
        let (session, steps) = explore_truthfully(&start, &universe, limit).unwrap();
        prop_assert!(steps <= limit);
        let (result, _) = session.result().unwrap();
        prop_assert_eq!(named_base(&result), named_base(&universe));
        // every implication of the result holds in the universe
        let naive = Naive::of(&universe);
        for r in stem_base(&result) {
            prop_assert!(naive.implication_holds(mask(&r.implication.premise), mask(&r.implication.conclusion)));
        }
    }
}
