//! Attribute implications, their supports, and the canonical
//! (Duquenne–Guigues) base of a context.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::bitset::BitSet;
use crate::context::{AttributeSet, FormalContext, Result};
use crate::lectic::{lectic_cmp, next_closure};

/// `premise ⇒ conclusion` over the attribute set of some context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Implication {
    pub premise: AttributeSet,
    pub conclusion: AttributeSet,
}

impl Implication {
    pub fn new(premise: AttributeSet, conclusion: AttributeSet) -> Self {
        Implication {
            premise,
            conclusion,
        }
    }

    /// True when `set` contains the conclusion whenever it contains the
    /// premise.
    pub fn respected_by(&self, set: &AttributeSet) -> bool {
        !self.premise.is_subset(set) || self.conclusion.is_subset(set)
    }
}

/// Display colour of a listed implication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colour {
    /// Some object has every premise attribute.
    Blue,
    /// No object supports the rule.
    Red,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationReport {
    /// 1-based position in listing order.
    pub id: usize,
    /// Number of objects having every premise attribute.
    pub support: usize,
    pub implication: Implication,
    /// Whether the implication holds in the context.
    pub valid: bool,
}

impl ImplicationReport {
    pub fn new(ctx: &FormalContext, id: usize, implication: Implication) -> Result<Self> {
        Ok(ImplicationReport {
            id,
            support: support(ctx, &implication)?,
            valid: holds(ctx, &implication)?,
            implication,
        })
    }

    pub fn colour(&self) -> Colour {
        if self.support > 0 {
            Colour::Blue
        } else {
            Colour::Red
        }
    }
}

/// Whether every object having all premise attributes also has all
/// conclusion attributes.
pub fn holds(ctx: &FormalContext, imp: &Implication) -> Result<bool> {
    ctx.check_attributes(&imp.premise)?;
    ctx.check_attributes(&imp.conclusion)?;
    let matching = ctx.common_objects(&imp.premise);
    Ok(matching.is_subset(&ctx.common_objects(&imp.conclusion)))
}

/// Number of objects having every premise attribute.
pub fn support(ctx: &FormalContext, imp: &Implication) -> Result<usize> {
    Ok(ctx.derive_intent(&imp.premise)?.len())
}

/// Smallest superset of `set` respecting every implication.
pub fn close_under(implications: &[Implication], set: &AttributeSet) -> AttributeSet {
    let mut closed = set.clone();
    let mut used = vec![false; implications.len()];
    loop {
        let mut changed = false;
        for (imp, used) in implications.iter().zip(used.iter_mut()) {
            if !*used && imp.premise.is_subset(&closed) {
                *used = true;
                if !imp.conclusion.is_subset(&closed) {
                    closed.union_with(&imp.conclusion);
                    changed = true;
                }
            }
        }
        if !changed {
            return closed;
        }
    }
}

/// The canonical base: one implication per pseudo-intent. Conclusions are
/// stored without the premise attributes.
///
/// Reports are listed by premise size, then lectic order of premises (see
/// [`listing_order`]), and numbered from 1 in that order.
pub fn stem_base(ctx: &FormalContext) -> Vec<ImplicationReport> {
    let mut base: Vec<Implication> = Vec::new();
    let mut current = BitSet::empty(ctx.attribute_count());
    loop {
        let closed = ctx.attribute_closure(&current);
        if closed != current {
            base.push(Implication::new(
                current.clone(),
                closed.difference(&current),
            ));
        }
        match next_closure(&current, |s| close_under(&base, s)) {
            Some(next) => current = next,
            None => break,
        }
    }
    base.sort_by(listing_order);
    base.into_iter()
        .enumerate()
        .map(|(i, imp)| ImplicationReport::new(ctx, i + 1, imp).expect("attributes of ctx"))
        .collect()
}

/// Order in which implications are listed: smaller premises first, equal
/// sizes in lectic order.
pub fn listing_order(a: &Implication, b: &Implication) -> Ordering {
    a.premise
        .len()
        .cmp(&b.premise.len())
        .then_with(|| lectic_cmp(&a.premise, &b.premise))
}

/// Attribute names of `set` ordered from most to least specific (fewest
/// objects first), ties broken by column order. This is the order in which
/// the attributes are met walking up the diagram.
fn names_by_specificity<'a>(ctx: &'a FormalContext, set: &AttributeSet) -> Vec<&'a str> {
    let mut ms: Vec<usize> = set.iter().collect();
    ms.sort_by_key(|&m| (ctx.attribute_extent(m).map(BitSet::len).unwrap_or(0), m));
    ms.into_iter().map(|m| ctx.attributes()[m].as_str()).collect()
}

/// Conclusion names as listed: premise attributes dropped, most specific
/// first.
pub fn conclusion_names<'a>(ctx: &'a FormalContext, imp: &Implication) -> Vec<&'a str> {
    names_by_specificity(ctx, &imp.conclusion.difference(&imp.premise))
}

pub fn premise_names<'a>(ctx: &'a FormalContext, imp: &Implication) -> Vec<&'a str> {
    ctx.attribute_names(&imp.premise)
}

/// `premise ==> conclusion` without id or support.
pub fn render_implication(ctx: &FormalContext, imp: &Implication) -> String {
    format!(
        "{} ==> {}",
        premise_names(ctx, imp).join(", "),
        conclusion_names(ctx, imp).join(", ")
    )
}

/// One listing line: `<id> < <support> > <premise> ==> <conclusion>;`
pub fn render_report(ctx: &FormalContext, report: &ImplicationReport) -> String {
    format!(
        "{} < {} > {};",
        report.id,
        report.support,
        render_implication(ctx, &report.implication)
    )
}

/// Listing with one line per report, each terminated by a newline.
pub fn render_listing(ctx: &FormalContext, reports: &[ImplicationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "{}", render_report(ctx, r));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{contranominal, nominal, planets};

    fn imp(ctx: &FormalContext, p: &[&str], c: &[&str]) -> Implication {
        Implication::new(ctx.attribute_set(p).unwrap(), ctx.attribute_set(c).unwrap())
    }

    #[test]
    fn holds_examples() {
        let ctx = planets();
        assert!(holds(&ctx, &imp(&ctx, &["no moon"], &["near sun", "small"])).unwrap());
        assert!(!holds(&ctx, &imp(&ctx, &["small"], &["near sun"])).unwrap());
        let b = &["large", "moon"];
        assert!(holds(&ctx, &imp(&ctx, b, b)).unwrap());
        let bad = Implication::new(BitSet::empty(8), BitSet::empty(7));
        assert!(holds(&ctx, &bad).is_err());
    }

    #[test]
    fn support_examples() {
        let ctx = planets();
        assert_eq!(support(&ctx, &imp(&ctx, &["medium"], &[])).unwrap(), 2);
        assert_eq!(support(&ctx, &imp(&ctx, &["far from sun"], &[])).unwrap(), 5);
        assert_eq!(support(&ctx, &imp(&ctx, &[], &[])).unwrap(), 9);
    }

    #[test]
    fn close_under_examples() {
        let ctx = planets();
        let base: Vec<Implication> = stem_base(&ctx).into_iter().map(|r| r.implication).collect();
        let medium = ctx.attribute_set(&["medium"]).unwrap();
        assert_eq!(
            ctx.attribute_names(&close_under(&base, &medium)),
            ["medium", "far from sun", "moon"]
        );
        let no_moon = ctx.attribute_set(&["no moon"]).unwrap();
        assert_eq!(
            ctx.attribute_names(&close_under(&base, &no_moon)),
            ["small", "near sun", "no moon"]
        );
        assert_eq!(close_under(&[], &medium), medium);
    }

    #[test]
    fn planets_listing() {
        let ctx = planets();
        let base = stem_base(&ctx);
        assert_eq!(
            render_listing(&ctx, &base),
            "1 < 2 > medium ==> far from sun, moon;\n\
             2 < 2 > large ==> far from sun, moon;\n\
             3 < 4 > near sun ==> small;\n\
             4 < 5 > far from sun ==> moon;\n\
             5 < 2 > no moon ==> near sun, small;\n\
             6 < 0 > small, medium, far from sun, moon ==> large, no moon, near sun;\n\
             7 < 0 > small, large, far from sun, moon ==> medium, no moon, near sun;\n\
             8 < 0 > medium, large, far from sun, moon ==> no moon, near sun, small;\n\
             9 < 0 > small, near sun, far from sun, moon ==> medium, large, no moon;\n\
             10 < 0 > small, near sun, moon, no moon ==> medium, large, far from sun;\n"
        );
        assert!(base.iter().all(|r| r.valid));
        let colours: Vec<Colour> = base.iter().map(ImplicationReport::colour).collect();
        assert_eq!(colours[..5], [Colour::Blue; 5]);
        assert_eq!(colours[5..], [Colour::Red; 5]);
    }

    #[test]
    fn full_incidence_base() {
        let ctx = FormalContext::from_rows(
            vec!["g".into(), "h".into()],
            vec!["a".into(), "b".into()],
            &[vec![true, true], vec![true, true]],
        )
        .unwrap();
        let base = stem_base(&ctx);
        assert_eq!(base.len(), 1);
        assert!(base[0].implication.premise.is_empty());
        assert!(base[0].implication.conclusion.is_full());
        assert_eq!(base[0].support, 2);
        assert_eq!(render_report(&ctx, &base[0]), "1 < 2 >  ==> a, b;");
    }

    #[test]
    fn contranominal_base_is_empty() {
        // every attribute subset is an intent of the contranominal scale
        assert!(stem_base(&contranominal(3)).is_empty());
    }

    #[test]
    fn nominal_base_has_pair_premises() {
        let ctx = nominal(3);
        let base = stem_base(&ctx);
        assert_eq!(base.len(), 3);
        for r in &base {
            assert_eq!(r.implication.premise.len(), 2);
            assert!(r.implication.premise.union(&r.implication.conclusion).is_full());
            assert_eq!(r.colour(), Colour::Red);
            assert!(r.valid);
        }
    }

    #[test]
    fn user_rules_are_coloured_by_support() {
        let ctx = planets();
        let red = ImplicationReport::new(&ctx, 1, imp(&ctx, &["small", "large"], &["moon"])).unwrap();
        assert_eq!((red.support, red.valid, red.colour()), (0, true, Colour::Red));
        let invalid = ImplicationReport::new(&ctx, 2, imp(&ctx, &["small"], &["moon"])).unwrap();
        assert!(!invalid.valid);
        assert_eq!(invalid.colour(), Colour::Blue);
    }
}
