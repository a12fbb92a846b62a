//! Layered line diagrams of concept lattices and their DOT/SVG/JSON exports.
//!
//! Nodes are placed on layers by their longest cover-chain distance from the
//! top; within a layer the order starts from the lectic concept order and is
//! refined by a bounded number of barycenter sweeps. Attribute labels sit
//! above a node, object labels below it.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::context::{AttributeSet, FormalContext};
use crate::lattice::ConceptLattice;

/// Maximum number of barycenter sweeps.
pub const MAX_SWEEPS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneNode {
    /// Concept index in the lattice.
    pub id: usize,
    /// Canonical intent key, see [`intent_key`].
    pub key: String,
    pub x: f64,
    pub y: f64,
    pub layer: usize,
    pub extent_size: usize,
    pub has_attribute_label: bool,
    pub has_object_label: bool,
    pub attribute_labels: Vec<String>,
    pub object_labels: Vec<String>,
    pub attribute_label_text: String,
    pub object_label_text: String,
    pub pinned: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SceneEdge {
    pub child: usize,
    pub parent: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramScene {
    pub layers: usize,
    pub nodes: Vec<SceneNode>,
    pub edges: Vec<SceneEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

/// Manual node positions keyed by canonical intent.
pub type Pins = BTreeMap<String, Position>;

/// Canonical key of an intent: its attribute names sorted and encoded as a
/// JSON array, e.g. `["far from sun","moon"]`. Keys survive edits that
/// reorder or add objects.
pub fn intent_key(ctx: &FormalContext, intent: &AttributeSet) -> String {
    let mut names = ctx.attribute_names(intent);
    names.sort_unstable();
    serde_json::to_string(&names).expect("strings serialize")
}

/// Longest-path layering from the top: `layer(top) = 0` and every node sits
/// one below its lowest upper cover.
pub fn assign_layers(lat: &ConceptLattice) -> Vec<usize> {
    let mut order: Vec<usize> = (0..lat.len()).collect();
    // larger extents first is a linear extension of ≥
    order.sort_by_key(|&i| std::cmp::Reverse(lat.concept(i).extent.len()));
    let mut layer = vec![0; lat.len()];
    for &i in &order {
        layer[i] = lat
            .upper_covers(i)
            .iter()
            .map(|&p| layer[p] + 1)
            .max()
            .unwrap_or(0);
    }
    layer
}

fn centred(rank: usize, width: usize) -> f64 {
    rank as f64 - (width as f64 - 1.0) / 2.0
}

fn barycenter(neighbours: &[usize], x: &[f64]) -> Option<f64> {
    if neighbours.is_empty() {
        None
    } else {
        Some(neighbours.iter().map(|&n| x[n]).sum::<f64>() / neighbours.len() as f64)
    }
}

/// Horizontal positions: unit-spaced ranks centred on zero within each
/// layer, ordered by barycenter sweeps.
pub fn assign_x(lat: &ConceptLattice, layers: &[usize]) -> Vec<f64> {
    let depth = layers.iter().max().map_or(0, |&d| d + 1);
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); depth];
    for (i, &l) in layers.iter().enumerate() {
        rows[l].push(i);
    }
    let mut x = vec![0.0; lat.len()];
    let place = |row: &[usize], x: &mut [f64]| {
        for (rank, &i) in row.iter().enumerate() {
            x[i] = centred(rank, row.len());
        }
    };
    for row in &rows {
        place(row, &mut x);
    }

    let reorder = |row: &mut Vec<usize>, x: &mut [f64], towards_top: bool| -> bool {
        let keyed: Vec<(f64, usize)> = row
            .iter()
            .map(|&i| {
                let nbrs = if towards_top {
                    lat.upper_covers(i)
                } else {
                    lat.lower_covers(i)
                };
                (barycenter(nbrs, x).unwrap_or(x[i]), i)
            })
            .collect();
        let mut sorted = keyed.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let next: Vec<usize> = sorted.into_iter().map(|(_, i)| i).collect();
        let changed = next != *row;
        *row = next;
        place(row, x);
        changed
    };

    for _ in 0..MAX_SWEEPS {
        let mut changed = false;
        for row in rows.iter_mut().take(depth).skip(1) {
            changed |= reorder(row, &mut x, true);
        }
        for row in rows.iter_mut().take(depth.saturating_sub(1)).rev() {
            changed |= reorder(row, &mut x, false);
        }
        if !changed {
            break;
        }
    }
    x
}

/// Lays out the lattice without any manual pins.
pub fn build_scene(lat: &ConceptLattice) -> DiagramScene {
    let ctx = lat.context();
    let layers = assign_layers(lat);
    let x = assign_x(lat, &layers);
    let nodes = (0..lat.len())
        .map(|i| {
            let concept = lat.concept(i);
            let attribute_labels: Vec<String> = lat
                .attributes_labelled_at(i)
                .into_iter()
                .map(|m| ctx.attributes()[m].clone())
                .collect();
            let object_labels: Vec<String> = lat
                .objects_labelled_at(i)
                .into_iter()
                .map(|g| ctx.objects()[g].clone())
                .collect();
            SceneNode {
                id: i,
                key: intent_key(ctx, &concept.intent),
                x: x[i],
                y: layers[i] as f64,
                layer: layers[i],
                extent_size: concept.extent.len(),
                has_attribute_label: !attribute_labels.is_empty(),
                has_object_label: !object_labels.is_empty(),
                attribute_label_text: attribute_labels.join(", "),
                object_label_text: object_labels.join(", "),
                attribute_labels,
                object_labels,
                pinned: false,
            }
        })
        .collect();
    let edges = lat
        .covers()
        .iter()
        .map(|&(child, parent)| SceneEdge { child, parent })
        .collect();
    DiagramScene {
        layers: layers.iter().max().map_or(0, |&d| d + 1),
        nodes,
        edges,
    }
}

impl DiagramScene {
    /// Returns the first pin key that names no node of this scene.
    pub fn unknown_pin<'a>(&self, pins: &'a Pins) -> Option<&'a str> {
        pins.keys()
            .map(String::as_str)
            .find(|k| !self.nodes.iter().any(|n| n.key == *k))
    }

    /// Overrides positions of pinned nodes. Pins whose intent no longer
    /// exists are ignored.
    pub fn apply_pins(&mut self, pins: &Pins) {
        for node in &mut self.nodes {
            if let Some(p) = pins.get(&node.key) {
                node.x = p.x;
                node.y = p.y;
                node.pinned = true;
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scene serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n");
        out.push_str("  rankdir=TB;\n");
        out.push_str("  node [shape=circle, label=\"\", width=0.18, fixedsize=true];\n");
        out.push_str("  edge [arrowhead=none];\n");
        for n in &self.nodes {
            let mut label = n.attribute_label_text.clone();
            if n.has_object_label {
                if !label.is_empty() {
                    label.push('\n');
                }
                label.push_str(&n.object_label_text);
            }
            let fill = match (n.has_attribute_label, n.has_object_label) {
                (true, true) => "#3b6fd8:black",
                (true, false) => "#3b6fd8:white",
                (false, true) => "white:black",
                (false, false) => "white",
            };
            let _ = writeln!(
                out,
                "  n{} [xlabel=\"{}\", style=wedged, fillcolor=\"{}\"];",
                n.id,
                dot_escape(&label),
                fill
            );
        }
        for layer in 0..self.layers {
            let members: Vec<String> = self
                .nodes
                .iter()
                .filter(|n| n.layer == layer)
                .map(|n| format!("n{}", n.id))
                .collect();
            let _ = writeln!(out, "  {{ rank=same; {}; }}", members.join("; "));
        }
        for e in &self.edges {
            let _ = writeln!(out, "  n{} -> n{};", e.parent, e.child);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_svg(&self) -> String {
        const UNIT_X: f64 = 70.0;
        const UNIT_Y: f64 = 90.0;
        const MARGIN: f64 = 90.0;
        const RADIUS: f64 = 7.0;
        const LINE: f64 = 13.0;

        let (min_x, max_x) = min_max(self.nodes.iter().map(|n| n.x));
        let (min_y, max_y) = min_max(self.nodes.iter().map(|n| n.y));
        let px = |x: f64| MARGIN + (x - min_x) * UNIT_X;
        let py = |y: f64| MARGIN + (y - min_y) * UNIT_Y;
        let width = 2.0 * MARGIN + (max_x - min_x) * UNIT_X;
        let height = 2.0 * MARGIN + (max_y - min_y) * UNIT_Y;

        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.1}\" height=\"{height:.1}\" viewBox=\"0 0 {width:.1} {height:.1}\" font-family=\"sans-serif\" font-size=\"11\">"
        );
        out.push_str("<g class=\"edges\" stroke=\"#444\" stroke-width=\"1\">\n");
        for e in &self.edges {
            let (c, p) = (&self.nodes[e.child], &self.nodes[e.parent]);
            let _ = writeln!(
                out,
                "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\"/>",
                px(p.x),
                py(p.y),
                px(c.x),
                py(c.y)
            );
        }
        out.push_str("</g>\n<g class=\"nodes\">\n");
        for n in &self.nodes {
            let (cx, cy) = (px(n.x), py(n.y));
            let _ = writeln!(
                out,
                "<g class=\"node\" data-id=\"{}\" data-key=\"{}\">",
                n.id,
                xml_escape(&n.key)
            );
            let _ = writeln!(
                out,
                "<circle cx=\"{cx:.1}\" cy=\"{cy:.1}\" r=\"{RADIUS:.1}\" fill=\"white\" stroke=\"black\"/>"
            );
            if n.has_attribute_label {
                let _ = writeln!(
                    out,
                    "<path d=\"M {:.1} {cy:.1} A {RADIUS:.1} {RADIUS:.1} 0 0 1 {:.1} {cy:.1} Z\" fill=\"#3b6fd8\"/>",
                    cx - RADIUS,
                    cx + RADIUS
                );
            }
            if n.has_object_label {
                let _ = writeln!(
                    out,
                    "<path d=\"M {:.1} {cy:.1} A {RADIUS:.1} {RADIUS:.1} 0 0 0 {:.1} {cy:.1} Z\" fill=\"black\"/>",
                    cx - RADIUS,
                    cx + RADIUS
                );
            }
            let count = n.attribute_labels.len();
            for (k, name) in n.attribute_labels.iter().enumerate() {
                let y = cy - RADIUS - 5.0 - LINE * (count - 1 - k) as f64;
                let _ = writeln!(
                    out,
                    "<text class=\"attribute-label\" x=\"{cx:.1}\" y=\"{y:.1}\" text-anchor=\"middle\">{}</text>",
                    xml_escape(name)
                );
            }
            for (k, name) in n.object_labels.iter().enumerate() {
                let y = cy + RADIUS + 13.0 + LINE * k as f64;
                let _ = writeln!(
                    out,
                    "<text class=\"object-label\" x=\"{cx:.1}\" y=\"{y:.1}\" text-anchor=\"middle\">{}</text>",
                    xml_escape(name)
                );
            }
            out.push_str("</g>\n");
        }
        out.push_str("</g>\n</svg>\n");
        out
    }
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if lo.is_finite() {
        (lo, hi)
    } else {
        (0.0, 0.0)
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}
