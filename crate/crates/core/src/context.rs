//! Formal contexts: objects, attributes and the incidence relation between
//! them, together with the two derivation operators.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::lattice::Concept;
use crate::lectic::ClosedSets;

/// A set of object indices.
pub type ObjectSet = BitSet;
/// A set of attribute indices.
pub type AttributeSet = BitSet;

/// Size of the blank context handed out by [`FormalContext::blank`].
pub const DEFAULT_BLANK_SIZE: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Object,
    Attribute,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dimension::Object => "object",
            Dimension::Attribute => "attribute",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("line {line}: malformed header, expected \"B\"")]
    MalformedHeader { line: usize },
    #[error("line {line}: {message}")]
    DimensionMismatch { line: usize, message: String },
    #[error("line {line}, column {column}: unexpected cell character {found:?}")]
    BadCell {
        line: usize,
        column: usize,
        found: char,
    },
    #[error("input is not valid UTF-8")]
    InvalidEncoding,
    #[error("{0}")]
    ShapeMismatch(String),
    #[error("duplicate {kind} name {name:?}")]
    DuplicateName { kind: Dimension, name: String },
    #[error("invalid {kind} name {name:?}: names must be non-empty and contain no line breaks")]
    InvalidName { kind: Dimension, name: String },
    #[error("unknown {kind} {name:?}")]
    UnknownName { kind: Dimension, name: String },
    #[error("{kind} index {index} out of range for size {size}")]
    IndexOutOfRange {
        kind: Dimension,
        index: usize,
        size: usize,
    },
}

pub type Result<T, E = ContextError> = std::result::Result<T, E>;

/// A formal context `(G, M, I)`.
///
/// Incidence is stored twice, once as a bit row per object and once as a bit
/// column per attribute, so both derivations are word-parallel
/// intersections. Values are immutable: editing operations return a new
/// context.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    rows: Vec<AttributeSet>,
    columns: Vec<ObjectSet>,
}

/// Plain JSON table form of a context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextTable {
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    pub incidence: Vec<Vec<bool>>,
}

fn check_names(kind: Dimension, names: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(names.len());
    for name in names {
        if name.is_empty() || name.contains(['\n', '\r']) {
            return Err(ContextError::InvalidName {
                kind,
                name: name.clone(),
            });
        }
        if !seen.insert(name.as_str()) {
            return Err(ContextError::DuplicateName {
                kind,
                name: name.clone(),
            });
        }
    }
    Ok(())
}

impl FormalContext {
    /// A context with no crosses.
    pub fn new(objects: Vec<String>, attributes: Vec<String>) -> Result<Self> {
        let rows = vec![BitSet::empty(attributes.len()); objects.len()];
        Self::from_bit_rows(objects, attributes, rows)
    }

    /// The default blank context offered by the editor.
    pub fn blank() -> Self {
        let objects = (1..=DEFAULT_BLANK_SIZE).map(|i| format!("g{i}")).collect();
        let attributes = (1..=DEFAULT_BLANK_SIZE).map(|i| format!("m{i}")).collect();
        Self::new(objects, attributes).expect("generated names are valid")
    }

    pub fn from_rows(
        objects: Vec<String>,
        attributes: Vec<String>,
        incidence: &[Vec<bool>],
    ) -> Result<Self> {
        if incidence.len() != objects.len() {
            return Err(ContextError::ShapeMismatch(format!(
                "{} incidence rows for {} objects",
                incidence.len(),
                objects.len()
            )));
        }
        let mut rows = Vec::with_capacity(objects.len());
        for (g, row) in incidence.iter().enumerate() {
            if row.len() != attributes.len() {
                return Err(ContextError::ShapeMismatch(format!(
                    "row {g} has {} cells, expected {}",
                    row.len(),
                    attributes.len()
                )));
            }
            let bits = BitSet::from_indices(
                attributes.len(),
                row.iter().enumerate().filter(|(_, &x)| x).map(|(m, _)| m),
            )
            .expect("indices bounded by row length");
            rows.push(bits);
        }
        Self::from_bit_rows(objects, attributes, rows)
    }

    pub(crate) fn from_bit_rows(
        objects: Vec<String>,
        attributes: Vec<String>,
        rows: Vec<AttributeSet>,
    ) -> Result<Self> {
        check_names(Dimension::Object, &objects)?;
        check_names(Dimension::Attribute, &attributes)?;
        debug_assert!(rows.len() == objects.len());
        debug_assert!(rows.iter().all(|r| r.universe() == attributes.len()));
        let mut columns = vec![BitSet::empty(objects.len()); attributes.len()];
        for (g, row) in rows.iter().enumerate() {
            for m in row {
                columns[m].insert(g);
            }
        }
        Ok(FormalContext {
            objects,
            attributes,
            rows,
            columns,
        })
    }

    pub fn from_table(table: &ContextTable) -> Result<Self> {
        Self::from_rows(
            table.objects.clone(),
            table.attributes.clone(),
            &table.incidence,
        )
    }

    pub fn to_table(&self) -> ContextTable {
        ContextTable {
            objects: self.objects.clone(),
            attributes: self.attributes.clone(),
            incidence: self
                .rows
                .iter()
                .map(|r| (0..self.attributes.len()).map(|m| r.contains(m)).collect())
                .collect(),
        }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn attribute_count(&self) -> usize {
        self.attributes.len()
    }

    /// Number of crosses in the incidence relation.
    pub fn cross_count(&self) -> usize {
        self.rows.iter().map(BitSet::len).sum()
    }

    pub fn has(&self, g: usize, m: usize) -> bool {
        self.rows.get(g).is_some_and(|r| r.contains(m))
    }

    /// The object intent `g′`.
    pub fn object_intent(&self, g: usize) -> Result<&AttributeSet> {
        self.rows.get(g).ok_or(ContextError::IndexOutOfRange {
            kind: Dimension::Object,
            index: g,
            size: self.objects.len(),
        })
    }

    /// The attribute extent `m′`.
    pub fn attribute_extent(&self, m: usize) -> Result<&ObjectSet> {
        self.columns.get(m).ok_or(ContextError::IndexOutOfRange {
            kind: Dimension::Attribute,
            index: m,
            size: self.attributes.len(),
        })
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == name)
    }

    /// Builds an object set from object names.
    pub fn object_set<S: AsRef<str>>(&self, names: &[S]) -> Result<ObjectSet> {
        let mut set = BitSet::empty(self.objects.len());
        for name in names {
            let g = self
                .object_index(name.as_ref())
                .ok_or_else(|| ContextError::UnknownName {
                    kind: Dimension::Object,
                    name: name.as_ref().to_owned(),
                })?;
            set.insert(g);
        }
        Ok(set)
    }

    /// Builds an attribute set from attribute names.
    pub fn attribute_set<S: AsRef<str>>(&self, names: &[S]) -> Result<AttributeSet> {
        let mut set = BitSet::empty(self.attributes.len());
        for name in names {
            let m = self
                .attribute_index(name.as_ref())
                .ok_or_else(|| ContextError::UnknownName {
                    kind: Dimension::Attribute,
                    name: name.as_ref().to_owned(),
                })?;
            set.insert(m);
        }
        Ok(set)
    }

    pub fn object_names(&self, set: &ObjectSet) -> Vec<&str> {
        set.iter().map(|g| self.objects[g].as_str()).collect()
    }

    pub fn attribute_names(&self, set: &AttributeSet) -> Vec<&str> {
        set.iter().map(|m| self.attributes[m].as_str()).collect()
    }

    pub(crate) fn check_objects(&self, set: &ObjectSet) -> Result<()> {
        check_universe(Dimension::Object, set, self.objects.len())
    }

    pub(crate) fn check_attributes(&self, set: &AttributeSet) -> Result<()> {
        check_universe(Dimension::Attribute, set, self.attributes.len())
    }

    /// `A′`: the attributes shared by every object of `objects`.
    /// The empty object set derives to all attributes.
    pub fn derive_extent(&self, objects: &ObjectSet) -> Result<AttributeSet> {
        self.check_objects(objects)?;
        Ok(self.common_attributes(objects))
    }

    /// `B′`: the objects having every attribute of `attributes`.
    pub fn derive_intent(&self, attributes: &AttributeSet) -> Result<ObjectSet> {
        self.check_attributes(attributes)?;
        Ok(self.common_objects(attributes))
    }

    /// `B′′`, the smallest intent containing `attributes`.
    pub fn close_attributes(&self, attributes: &AttributeSet) -> Result<AttributeSet> {
        self.check_attributes(attributes)?;
        Ok(self.attribute_closure(attributes))
    }

    /// `A′′`, the smallest extent containing `objects`.
    pub fn close_objects(&self, objects: &ObjectSet) -> Result<ObjectSet> {
        self.check_objects(objects)?;
        Ok(self.common_objects(&self.common_attributes(objects)))
    }

    pub(crate) fn common_attributes(&self, objects: &ObjectSet) -> AttributeSet {
        let mut out = BitSet::full(self.attributes.len());
        for g in objects {
            out.intersect_with(&self.rows[g]);
        }
        out
    }

    pub(crate) fn common_objects(&self, attributes: &AttributeSet) -> ObjectSet {
        let mut out = BitSet::full(self.objects.len());
        for m in attributes {
            out.intersect_with(&self.columns[m]);
        }
        out
    }

    pub(crate) fn attribute_closure(&self, attributes: &AttributeSet) -> AttributeSet {
        self.common_attributes(&self.common_objects(attributes))
    }

    /// Lazily enumerates all formal concepts in lectic order of their
    /// intents. Dropping the iterator stops the enumeration.
    pub fn concepts(&self) -> impl Iterator<Item = Concept> + '_ {
        ClosedSets::new(self.attributes.len(), move |b: &BitSet| {
            self.attribute_closure(b)
        })
        .map(move |intent| Concept {
            extent: self.common_objects(&intent),
            intent,
        })
    }

    /// All formal concepts, each exactly once, in lectic order of intents.
    pub fn enumerate_concepts(&self) -> Vec<Concept> {
        self.concepts().collect()
    }

    pub fn concept_count(&self) -> usize {
        self.concepts().count()
    }

    fn object_in_range(&self, g: usize) -> Result<()> {
        if g < self.objects.len() {
            Ok(())
        } else {
            Err(ContextError::IndexOutOfRange {
                kind: Dimension::Object,
                index: g,
                size: self.objects.len(),
            })
        }
    }

    fn attribute_in_range(&self, m: usize) -> Result<()> {
        if m < self.attributes.len() {
            Ok(())
        } else {
            Err(ContextError::IndexOutOfRange {
                kind: Dimension::Attribute,
                index: m,
                size: self.attributes.len(),
            })
        }
    }

    /// Returns a copy with cell `(g, m)` set to `value`.
    pub fn set_incidence(&self, g: usize, m: usize, value: bool) -> Result<Self> {
        self.object_in_range(g)?;
        self.attribute_in_range(m)?;
        let mut next = self.clone();
        next.rows[g].set(m, value);
        next.columns[m].set(g, value);
        Ok(next)
    }

    /// Appends an object with no attributes.
    pub fn add_object(&self, name: &str) -> Result<Self> {
        self.add_object_with(name, &BitSet::empty(self.attributes.len()))
    }

    /// Appends an object with the given intent.
    pub fn add_object_with(&self, name: &str, intent: &AttributeSet) -> Result<Self> {
        self.check_attributes(intent)?;
        let mut objects = self.objects.clone();
        objects.push(name.to_owned());
        let mut rows = self.rows.clone();
        rows.push(intent.clone());
        Self::from_bit_rows(objects, self.attributes.clone(), rows)
    }

    pub fn remove_object(&self, g: usize) -> Result<Self> {
        self.object_in_range(g)?;
        let mut objects = self.objects.clone();
        objects.remove(g);
        let mut rows = self.rows.clone();
        rows.remove(g);
        Self::from_bit_rows(objects, self.attributes.clone(), rows)
    }

    /// Appends an attribute that no object has.
    pub fn add_attribute(&self, name: &str) -> Result<Self> {
        let mut attributes = self.attributes.clone();
        attributes.push(name.to_owned());
        let rows = self
            .rows
            .iter()
            .map(|r| r.resized(attributes.len()))
            .collect();
        Self::from_bit_rows(self.objects.clone(), attributes, rows)
    }

    pub fn remove_attribute(&self, m: usize) -> Result<Self> {
        self.attribute_in_range(m)?;
        let mut attributes = self.attributes.clone();
        attributes.remove(m);
        let rows = self.rows.iter().map(|r| r.without_index(m)).collect();
        Self::from_bit_rows(self.objects.clone(), attributes, rows)
    }

    pub fn rename_object(&self, g: usize, name: &str) -> Result<Self> {
        self.object_in_range(g)?;
        let mut next = self.clone();
        next.objects[g] = name.to_owned();
        check_names(Dimension::Object, &next.objects)?;
        Ok(next)
    }

    pub fn rename_attribute(&self, m: usize, name: &str) -> Result<Self> {
        self.attribute_in_range(m)?;
        let mut next = self.clone();
        next.attributes[m] = name.to_owned();
        check_names(Dimension::Attribute, &next.attributes)?;
        Ok(next)
    }
}

fn check_universe(kind: Dimension, set: &BitSet, size: usize) -> Result<()> {
    if set.universe() == size {
        return Ok(());
    }
    // Report the first index that does not fit, or the size disagreement.
    let index = set.iter().find(|&i| i >= size).unwrap_or(set.universe());
    Err(ContextError::IndexOutOfRange { kind, index, size })
}

impl fmt::Debug for FormalContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "FormalContext({} objects x {} attributes)",
            self.objects.len(),
            self.attributes.len()
        )?;
        for (name, row) in self.objects.iter().zip(&self.rows) {
            let cells: String = (0..self.attributes.len())
                .map(|m| if row.contains(m) { 'X' } else { '.' })
                .collect();
            writeln!(f, "  {cells} {name}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::planets;

    fn names(ctx: &FormalContext, set: &BitSet, kind: Dimension) -> Vec<String> {
        match kind {
            Dimension::Object => ctx.object_names(set),
            Dimension::Attribute => ctx.attribute_names(set),
        }
        .into_iter()
        .map(str::to_owned)
        .collect()
    }

    #[test]
    fn derive_extent_examples() {
        let ctx = planets();
        let a = ctx.object_set(&["Uranus (U)", "Neptune (N)"]).unwrap();
        assert_eq!(
            names(&ctx, &ctx.derive_extent(&a).unwrap(), Dimension::Attribute),
            ["medium", "far from sun", "moon"]
        );
        let empty = BitSet::empty(9);
        assert!(ctx.derive_extent(&empty).unwrap().is_full());
        assert!(ctx.derive_extent(&BitSet::full(9)).unwrap().is_empty());
    }

    #[test]
    fn derive_intent_examples() {
        let ctx = planets();
        let b = ctx.attribute_set(&["no moon"]).unwrap();
        assert_eq!(
            names(&ctx, &ctx.derive_intent(&b).unwrap(), Dimension::Object),
            ["Mercury (Me)", "Venus (V)"]
        );
        assert!(ctx.derive_intent(&BitSet::empty(7)).unwrap().is_full());
        let b = ctx.attribute_set(&["small", "far from sun"]).unwrap();
        assert_eq!(
            names(&ctx, &ctx.derive_intent(&b).unwrap(), Dimension::Object),
            ["Pluto (P)"]
        );
    }

    #[test]
    fn wrong_universe_is_out_of_range() {
        let ctx = planets();
        let err = ctx.derive_intent(&BitSet::from_indices(8, [7]).unwrap());
        assert_eq!(
            err,
            Err(ContextError::IndexOutOfRange {
                kind: Dimension::Attribute,
                index: 7,
                size: 7
            })
        );
        assert!(ctx.derive_extent(&BitSet::empty(3)).is_err());
    }

    #[test]
    fn close_attributes_examples() {
        let ctx = planets();
        let medium = ctx.attribute_set(&["medium"]).unwrap();
        assert_eq!(
            names(&ctx, &ctx.close_attributes(&medium).unwrap(), Dimension::Attribute),
            ["medium", "far from sun", "moon"]
        );
        let closed = ctx.attribute_set(&["small", "near sun", "no moon"]).unwrap();
        assert_eq!(ctx.close_attributes(&closed).unwrap(), closed);
        assert!(ctx.close_attributes(&BitSet::full(7)).unwrap().is_full());
    }

    #[test]
    fn small_contexts_enumerate() {
        let one = FormalContext::from_rows(vec!["g".into()], vec!["m".into()], &[vec![true]])
            .unwrap();
        let concepts = one.enumerate_concepts();
        assert_eq!(concepts.len(), 1);
        assert!(concepts[0].extent.is_full() && concepts[0].intent.is_full());

        let names4: Vec<String> = (0..4).map(|i| i.to_string()).collect();
        let rows: Vec<Vec<bool>> = (0..4).map(|g| (0..4).map(|m| g != m).collect()).collect();
        let contra = FormalContext::from_rows(names4.clone(), names4, &rows).unwrap();
        assert_eq!(contra.concept_count(), 16);
    }

    #[test]
    fn empty_contexts_have_one_concept() {
        let no_objects = FormalContext::new(vec![], vec!["a".into(), "b".into()]).unwrap();
        let c = no_objects.enumerate_concepts();
        assert_eq!(c.len(), 1);
        assert!(c[0].intent.is_full() && c[0].extent.is_empty());

        let no_attrs = FormalContext::new(vec!["x".into()], vec![]).unwrap();
        let c = no_attrs.enumerate_concepts();
        assert_eq!(c.len(), 1);
        assert!(c[0].extent.is_full() && c[0].intent.is_empty());

        assert_eq!(FormalContext::new(vec![], vec![]).unwrap().concept_count(), 1);
    }

    #[test]
    fn set_incidence_is_value_like() {
        let ctx = planets();
        let edited = ctx.set_incidence(0, 5, true).unwrap();
        assert!(!ctx.has(0, 5));
        assert!(edited.has(0, 5));
        assert_eq!(edited.set_incidence(0, 5, false).unwrap(), ctx);
        assert_eq!(ctx.set_incidence(0, 0, true).unwrap(), ctx);
        assert!(matches!(
            ctx.set_incidence(0, 7, true),
            Err(ContextError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn structural_edits() {
        let ctx = planets();
        let grown = ctx.add_object("Ceres").unwrap();
        assert_eq!(grown.object_count(), 10);
        assert_eq!(grown.remove_object(9).unwrap(), ctx);
        assert!(matches!(
            ctx.add_object("Pluto (P)"),
            Err(ContextError::DuplicateName { .. })
        ));

        let wider = ctx.add_attribute("rings").unwrap();
        assert_eq!(wider.attribute_count(), 8);
        assert_eq!(wider.remove_attribute(7).unwrap(), ctx);
        let narrower = ctx.remove_attribute(0).unwrap();
        assert_eq!(narrower.attributes()[0], "medium");
        assert!(narrower.has(6, 0));

        let renamed = ctx.rename_object(8, "P").unwrap();
        let back = renamed.rename_object(8, "Pluto (P)").unwrap();
        assert_eq!(back, ctx);
        assert!(ctx.rename_attribute(0, "moon").is_err());
        assert!(ctx.rename_attribute(0, "two\nlines").is_err());
    }

    #[test]
    fn table_round_trip() {
        let ctx = planets();
        let table = ctx.to_table();
        assert_eq!(FormalContext::from_table(&table).unwrap(), ctx);
        let mut bad = table.clone();
        bad.incidence[0].pop();
        assert!(matches!(
            FormalContext::from_table(&bad),
            Err(ContextError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn blank_context_is_fifteen_square() {
        let b = FormalContext::blank();
        assert_eq!((b.object_count(), b.attribute_count()), (15, 15));
        assert_eq!(b.cross_count(), 0);
    }
}
