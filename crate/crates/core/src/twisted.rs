//! Twisted differentials on decorated dual graphs.
//!
//! A twisted differential assigns a meromorphic differential to each vertex
//! of a stable curve's dual graph. The validator checks the matching-order,
//! residue and partial-order conditions at the nodes, the degree of each
//! component, and the restricted global residue conditions used by the two
//! boundary shapes built here (star graphs and cycles with tails).
//!
//! Residues are symbolic: the conditions only constrain which branches carry
//! the common magnitude `r` and with which sign.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::configs::{Boundary, CycleEntry, TypeIConfig, TypeIIConfig};
use crate::stratum::DiffKind;

/// Symbolic residue label on one branch of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ResidueLabel {
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "+r")]
    PlusR,
    #[serde(rename = "-r")]
    MinusR,
    #[serde(rename = "free")]
    Free,
}

impl ResidueLabel {
    pub fn flipped(self) -> Self {
        match self {
            ResidueLabel::PlusR => ResidueLabel::MinusR,
            ResidueLabel::MinusR => ResidueLabel::PlusR,
            other => other,
        }
    }

    fn is_signed(self) -> bool {
        matches!(self, ResidueLabel::PlusR | ResidueLabel::MinusR)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub genus: u32,
    /// `(marking index, order)` pairs for the markings on this component.
    pub markings: Vec<(usize, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    /// Endpoint vertices; a self-node has both entries equal.
    pub v: (usize, usize),
    /// Branch orders on the two sides, in endpoint order.
    pub orders: (i64, i64),
    /// Residue labels on the two branches.
    pub residues: (ResidueLabel, ResidueLabel),
}

/// A twisted differential: decorated dual graph with branch orders and
/// symbolic residue labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedDiff {
    pub kind: DiffKind,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// Optional full order on the vertices extending the partial order from
    /// condition (3); stored but not checked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level_order: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistedError {
    #[error("edge {0} references vertex {1} out of range")]
    BadEdge(usize, usize),
    #[error("graph has no vertices")]
    Empty,
}

/// One violated condition, with the condition id and where it failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: String,
    pub location: String,
    pub message: String,
}

/// Validation outcome; `valid` iff no violations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub verdict: Verdict,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Valid,
    Invalid,
}

impl BoundaryReport {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }

    fn from_violations(violations: Vec<Violation>) -> Self {
        BoundaryReport {
            verdict: if violations.is_empty() {
                Verdict::Valid
            } else {
                Verdict::Invalid
            },
            violations,
        }
    }
}

impl fmt::Display for BoundaryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.verdict {
            Verdict::Valid => write!(f, "valid"),
            Verdict::Invalid => {
                writeln!(f, "invalid:")?;
                for v in &self.violations {
                    writeln!(f, "  [{}] {}: {}", v.condition, v.location, v.message)?;
                }
                Ok(())
            }
        }
    }
}

impl TwistedDiff {
    /// Checks structural sanity (indices in range, nonempty).
    pub fn check_structure(&self) -> Result<(), TwistedError> {
        if self.vertices.is_empty() {
            return Err(TwistedError::Empty);
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.v.0 >= self.vertices.len() {
                return Err(TwistedError::BadEdge(i, e.v.0));
            }
            if e.v.1 >= self.vertices.len() {
                return Err(TwistedError::BadEdge(i, e.v.1));
            }
        }
        Ok(())
    }

    /// Node sum required by the kind: -2 for abelian, -4 for quadratic.
    pub fn node_sum(&self) -> i64 {
        match self.kind {
            DiffKind::Abelian => -2,
            DiffKind::Quadratic => -4,
        }
    }

    /// Degree of the canonical (bicanonical) bundle on a genus-g component.
    fn vertex_degree(&self, genus: u32) -> i64 {
        match self.kind {
            DiffKind::Abelian => 2 * genus as i64 - 2,
            DiffKind::Quadratic => 4 * genus as i64 - 4,
        }
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.v.0].push(e.v.1);
            adj[e.v.1].push(e.v.0);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// First Betti number of the dual graph (assumes connected).
    pub fn betti(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Total arithmetic genus of the stable curve: component genera plus
    /// the Betti number of the dual graph.
    pub fn total_genus(&self) -> i64 {
        self.vertices.iter().map(|v| v.genus as i64).sum::<i64>() + self.betti() as i64
    }

    /// Edge indices whose removal disconnects the graph. The graphs here
    /// are tiny, so each edge is simply removed and connectivity retested.
    fn bridges(&self) -> Vec<bool> {
        let n = self.vertices.len();
        (0..self.edges.len())
            .map(|skip| {
                let e = &self.edges[skip];
                if e.v.0 == e.v.1 {
                    return false;
                }
                let mut adj = vec![Vec::new(); n];
                for (i, e) in self.edges.iter().enumerate() {
                    if i != skip {
                        adj[e.v.0].push(e.v.1);
                        adj[e.v.1].push(e.v.0);
                    }
                }
                let mut seen = vec![false; n];
                let mut stack = vec![e.v.0];
                seen[e.v.0] = true;
                while let Some(v) = stack.pop() {
                    for &w in &adj[v] {
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
                !seen[e.v.1]
            })
            .collect()
    }

    /// The unique cycle of a connected graph with first Betti number 1, as a
    /// closed walk. Returns the sequence of (edge index, entry vertex) along
    /// the traversal; a self-loop yields a single entry.
    fn unique_cycle(&self) -> Option<Vec<(usize, usize)>> {
        if self.betti() != 1 {
            return None;
        }
        // strip leaves until only the cycle remains
        let n = self.vertices.len();
        let mut degree = vec![0usize; n];
        let mut alive_edge = vec![true; self.edges.len()];
        for e in &self.edges {
            if e.v.0 == e.v.1 {
                degree[e.v.0] += 2;
            } else {
                degree[e.v.0] += 1;
                degree[e.v.1] += 1;
            }
        }
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for v in 0..n {
                if alive[v] && degree[v] == 1 {
                    alive[v] = false;
                    for (i, e) in self.edges.iter().enumerate() {
                        if alive_edge[i] && (e.v.0 == v || e.v.1 == v) {
                            alive_edge[i] = false;
                            let other = if e.v.0 == v { e.v.1 } else { e.v.0 };
                            degree[other] -= 1;
                            degree[v] -= 1;
                        }
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        // walk the remaining cycle
        let start = (0..n).find(|&v| alive[v] && degree[v] > 0)?;
        let mut walk = Vec::new();
        let mut at = start;
        let mut last_edge = usize::MAX;
        loop {
            let (i, e) = self
                .edges
                .iter()
                .enumerate()
                .find(|(i, e)| {
                    alive_edge[*i] && *i != last_edge && (e.v.0 == at || e.v.1 == at)
                })?;
            walk.push((i, at));
            if e.v.0 == e.v.1 {
                return Some(walk); // self-loop cycle
            }
            let next = if e.v.0 == at { e.v.1 } else { e.v.0 };
            last_edge = i;
            at = next;
            if at == start {
                return Some(walk);
            }
        }
    }

    /// Checks conditions (0)-(3), per-vertex degrees, and the restricted
    /// residue conditions (vanishing residues into rational centers across
    /// separating nodes; alternating signs around the unique cycle for
    /// abelian graphs; matching-width labels at quadratic (-2,-2) nodes).
    pub fn validate(&self) -> BoundaryReport {
        let mut violations = Vec::new();
        if self.check_structure().is_err() {
            violations.push(Violation {
                condition: "structure".into(),
                location: "graph".into(),
                message: "empty graph or edge endpoint out of range".into(),
            });
            return BoundaryReport::from_violations(violations);
        }
        if !self.is_connected() {
            violations.push(Violation {
                condition: "connected".into(),
                location: "graph".into(),
                message: "dual graph must be connected".into(),
            });
        }

        // (0) each marking index appears exactly once
        let mut marking_orders: BTreeMap<usize, i64> = BTreeMap::new();
        for (vi, v) in self.vertices.iter().enumerate() {
            for &(idx, ord) in &v.markings {
                if marking_orders.insert(idx, ord).is_some() {
                    violations.push(Violation {
                        condition: "0".into(),
                        location: format!("vertex {vi}"),
                        message: format!("marking {idx} appears more than once"),
                    });
                }
            }
        }
        for (pos, idx) in marking_orders.keys().enumerate() {
            if pos != *idx {
                violations.push(Violation {
                    condition: "0".into(),
                    location: "graph".into(),
                    message: format!("marking indices are not contiguous (missing {pos})"),
                });
                break;
            }
        }

        let target = self.node_sum();
        for (i, e) in self.edges.iter().enumerate() {
            // (1) branch orders sum to -2 / -4
            if e.orders.0 + e.orders.1 != target {
                violations.push(Violation {
                    condition: "1".into(),
                    location: format!("edge {i}"),
                    message: format!(
                        "branch orders {} + {} != {target}",
                        e.orders.0, e.orders.1
                    ),
                });
            }
            // (2) simple poles on both branches have opposite residues
            if self.kind == DiffKind::Abelian && e.orders == (-1, -1) {
                let ok = matches!(
                    e.residues,
                    (ResidueLabel::PlusR, ResidueLabel::MinusR)
                        | (ResidueLabel::MinusR, ResidueLabel::PlusR)
                );
                if !ok {
                    violations.push(Violation {
                        condition: "2".into(),
                        location: format!("edge {i}"),
                        message: "simple poles at a node must carry opposite residues".into(),
                    });
                }
            }
            // quadratic analog at (-2,-2) nodes: both half-infinite
            // cylinders must have the same width, so both branches carry
            // the magnitude r. The relative scale between distinct nodes
            // is not tracked.
            if self.kind == DiffKind::Quadratic
                && e.orders == (-2, -2)
                && !(e.residues.0.is_signed() && e.residues.1.is_signed())
            {
                violations.push(Violation {
                    condition: "2q".into(),
                    location: format!("edge {i}"),
                    message: "(-2,-2) node branches must carry the width label r".into(),
                });
            }
            // residue labels only make sense on poles
            for (side, (ord, res)) in [(0, (e.orders.0, e.residues.0)), (1, (e.orders.1, e.residues.1))]
            {
                if ord >= 0 && res != ResidueLabel::Zero {
                    violations.push(Violation {
                        condition: "residue".into(),
                        location: format!("edge {i} branch {side}"),
                        message: "a branch of nonnegative order has residue zero".into(),
                    });
                }
                if self.kind == DiffKind::Abelian && ord == -1 && res == ResidueLabel::Zero {
                    violations.push(Violation {
                        condition: "residue".into(),
                        location: format!("edge {i} branch {side}"),
                        message: "a simple pole cannot have zero residue".into(),
                    });
                }
            }
        }

        // (3) consistent order comparison across parallel edges
        let mut groups: BTreeMap<(usize, usize), Vec<i64>> = BTreeMap::new();
        for e in &self.edges {
            if e.v.0 == e.v.1 {
                continue; // vacuous on a self-node
            }
            let (key, diff) = if e.v.0 < e.v.1 {
                ((e.v.0, e.v.1), e.orders.0 - e.orders.1)
            } else {
                ((e.v.1, e.v.0), e.orders.1 - e.orders.0)
            };
            groups.entry(key).or_default().push(diff);
        }
        for ((a, b), diffs) in &groups {
            let all_pos = diffs.iter().all(|&d| d > 0);
            let all_neg = diffs.iter().all(|&d| d < 0);
            let all_zero = diffs.iter().all(|&d| d == 0);
            if !(all_pos || all_neg || all_zero) {
                violations.push(Violation {
                    condition: "3".into(),
                    location: format!("vertices {a},{b}"),
                    message: "order differences across parallel nodes must agree in sign".into(),
                });
            }
        }

        // per-vertex degree
        for (vi, v) in self.vertices.iter().enumerate() {
            let mut sum: i64 = v.markings.iter().map(|&(_, o)| o).sum();
            for e in &self.edges {
                if e.v.0 == vi {
                    sum += e.orders.0;
                }
                if e.v.1 == vi {
                    sum += e.orders.1;
                }
            }
            let expected = self.vertex_degree(v.genus);
            if sum != expected {
                violations.push(Violation {
                    condition: "degree".into(),
                    location: format!("vertex {vi}"),
                    message: format!("orders sum to {sum}, expected {expected}"),
                });
            }
        }

        // restricted global residue condition (abelian): a pole branch on a
        // rational component across a separating node has vanishing residue.
        // Quadratic separating nodes of type (-2,-2) carry a cylinder width,
        // so no analogous check applies there.
        let bridges = self.bridges();
        for (i, e) in self.edges.iter().enumerate() {
            if !bridges[i] || self.kind != DiffKind::Abelian {
                continue;
            }
            for (side, vtx, ord, res) in [
                (0, e.v.0, e.orders.0, e.residues.0),
                (1, e.v.1, e.orders.1, e.residues.1),
            ] {
                if self.vertices[vtx].genus == 0 && ord <= -1 && res != ResidueLabel::Zero {
                    violations.push(Violation {
                        condition: "grc".into(),
                        location: format!("edge {i} branch {side}"),
                        message: "separating node into a rational component needs residue zero"
                            .into(),
                    });
                }
            }
        }

        // alternating signs around the unique cycle (abelian graphs)
        if self.kind == DiffKind::Abelian && self.betti() == 1 {
            if let Some(walk) = self.unique_cycle() {
                let mut signs: Vec<ResidueLabel> = Vec::new();
                let mut bad_label = false;
                for &(ei, enter) in &walk {
                    let e = &self.edges[ei];
                    let branches = if e.v.0 == e.v.1 {
                        vec![(e.orders.0, e.residues.0), (e.orders.1, e.residues.1)]
                    } else if e.v.0 == enter {
                        vec![(e.orders.0, e.residues.0), (e.orders.1, e.residues.1)]
                    } else {
                        vec![(e.orders.1, e.residues.1), (e.orders.0, e.residues.0)]
                    };
                    for (ord, res) in branches {
                        if ord <= -1 {
                            if res.is_signed() {
                                signs.push(res);
                            } else {
                                bad_label = true;
                            }
                        }
                    }
                }
                if bad_label {
                    violations.push(Violation {
                        condition: "cycle".into(),
                        location: "cycle".into(),
                        message: "every pole branch on the cycle must carry +r or -r".into(),
                    });
                } else {
                    let alternating = !signs.is_empty()
                        && signs.len() % 2 == 0
                        && (0..signs.len()).all(|k| signs[k] != signs[(k + 1) % signs.len()]);
                    if !alternating {
                        violations.push(Violation {
                            condition: "cycle".into(),
                            location: "cycle".into(),
                            message: "residue signs must alternate around the cycle".into(),
                        });
                    }
                }
            }
        }

        BoundaryReport::from_violations(violations)
    }
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// Principal-boundary twisted differential of a type I configuration: the
/// star with a rational center carrying the two chosen zeros, a pole of
/// order `-(a'_i + a''_i + 2)` with vanishing residue toward each tail, and
/// a zero of order `a'_i + a''_i` on the tail side.
pub fn build_type1(c: &TypeIConfig) -> TwistedDiff {
    let mut vertices = vec![Vertex {
        genus: 0,
        markings: vec![(c.i1, c.m1), (c.i2, c.m2)],
    }];
    let mut edges = Vec::new();
    for i in 0..c.p() {
        let tail = vertices.len();
        vertices.push(Vertex {
            genus: c.genera[i],
            markings: c.parts[i].iter().map(|&j| (j, c.mu[j])).collect(),
        });
        let node = c.node_order(i);
        edges.push(Edge {
            v: (0, tail),
            orders: (-node - 2, node),
            residues: (ResidueLabel::Zero, ResidueLabel::Zero),
        });
    }
    TwistedDiff {
        kind: DiffKind::Abelian,
        vertices,
        edges,
        level_order: None,
    }
}

/// Principal-boundary twisted differential of a type II configuration: one
/// rational vertex per junction carrying its newborn zero, poles of order
/// `-(c_i + 2)` with vanishing residue toward the figure-eight tails, poles
/// of order `-(a+2)` / `-(b+2)` toward the pair-of-holes neighbours on the
/// cycle, and pairs of simple poles where a cylinder sat. Signs of the
/// residues alternate around the cycle.
pub fn build_type2(c: &TypeIIConfig) -> Result<TwistedDiff, crate::configs::ConfigError> {
    let junctions = c.junctions()?;
    let jn = junctions.len();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();

    let mut junction_vertex = Vec::with_capacity(jn);
    for j in &junctions {
        junction_vertex.push(vertices.len());
        vertices.push(Vertex {
            genus: 0,
            markings: vec![(j.marking, j.order)],
        });
    }
    let mut surface_vertex = vec![usize::MAX; c.cycle.len()];
    for (pos, entry) in c.cycle.iter().enumerate() {
        if let CycleEntry::Surface { genus, interior, .. } = entry {
            surface_vertex[pos] = vertices.len();
            vertices.push(Vertex {
                genus: *genus,
                markings: interior.iter().map(|&j| (j, c.mu[j])).collect(),
            });
        }
    }

    // figure-eight tails: separating nodes with vanishing residue
    for (q, j) in junctions.iter().enumerate() {
        for &f in &j.fig8 {
            let (c1, c2) = match &c.cycle[f] {
                CycleEntry::Surface {
                    boundary: Boundary::FigureEight(c1, c2),
                    ..
                } => (*c1 as i64, *c2 as i64),
                _ => unreachable!("junction chains contain figure-eight surfaces"),
            };
            let ci = c1 + c2;
            edges.push(Edge {
                v: (junction_vertex[q], surface_vertex[f]),
                orders: (-ci - 2, ci),
                residues: (ResidueLabel::Zero, ResidueLabel::Zero),
            });
        }
    }

    // the cycle: traverse junctions in order; the delimiter after junction q
    // connects it to junction q+1. Each junction vertex carries one -r
    // branch (toward the next junction) and one +r branch (from the
    // previous), which makes the polar branches alternate around the cycle
    // and sum to zero on every rational component.
    for (q, j) in junctions.iter().enumerate() {
        let next = (q + 1) % jn;
        let out_label = ResidueLabel::MinusR;
        let in_label = ResidueLabel::PlusR;
        match &c.cycle[j.right] {
            CycleEntry::Cylinder => {
                // two half-infinite cylinders: simple poles on both sides
                edges.push(Edge {
                    v: (junction_vertex[q], junction_vertex[next]),
                    orders: (-1, -1),
                    residues: (out_label, in_label),
                });
            }
            CycleEntry::Surface {
                boundary: Boundary::PairOfHoles(a, b),
                ..
            } => {
                let sv = surface_vertex[j.right];
                edges.push(Edge {
                    v: (junction_vertex[q], sv),
                    orders: (-(*b as i64) - 2, *b as i64),
                    residues: (out_label, ResidueLabel::Zero),
                });
                edges.push(Edge {
                    v: (sv, junction_vertex[next]),
                    orders: (*a as i64, -(*a as i64) - 2),
                    residues: (ResidueLabel::Zero, in_label),
                });
            }
            CycleEntry::Surface { .. } => unreachable!("delimiter is a cylinder or holes surface"),
        }
    }
    Ok(TwistedDiff {
        kind: DiffKind::Abelian,
        vertices,
        edges,
        level_order: None,
    })
}

/// The three boundary configurations of the stratum Q(2,2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Q22Case {
    /// A genus-1 component in Q(2,-1,-1) meeting a rational component in
    /// Q(2,-3,-3) at two nodes.
    Fig22Left,
    /// Two rational components in Q(2,-2,-2,-2), each with a self-node, and
    /// one connecting node; all nodes of pole type (-2,-2).
    Fig22Middle,
    /// A rational component in Q(-1,-1,-1,-1) meeting two copies of
    /// Q(2,-3,-3) at two nodes each.
    Fig22Right,
}

pub fn build_q22_boundary(case: Q22Case) -> TwistedDiff {
    let (vertices, edges) = match case {
        Q22Case::Fig22Left => (
            vec![
                Vertex {
                    genus: 1,
                    markings: vec![(0, 2)],
                },
                Vertex {
                    genus: 0,
                    markings: vec![(1, 2)],
                },
            ],
            vec![
                Edge {
                    v: (0, 1),
                    orders: (-1, -3),
                    residues: (ResidueLabel::Free, ResidueLabel::Free),
                },
                Edge {
                    v: (0, 1),
                    orders: (-1, -3),
                    residues: (ResidueLabel::Free, ResidueLabel::Free),
                },
            ],
        ),
        Q22Case::Fig22Middle => (
            vec![
                Vertex {
                    genus: 0,
                    markings: vec![(0, 2)],
                },
                Vertex {
                    genus: 0,
                    markings: vec![(1, 2)],
                },
            ],
            vec![
                Edge {
                    v: (0, 1),
                    orders: (-2, -2),
                    residues: (ResidueLabel::PlusR, ResidueLabel::MinusR),
                },
                Edge {
                    v: (0, 0),
                    orders: (-2, -2),
                    residues: (ResidueLabel::PlusR, ResidueLabel::MinusR),
                },
                Edge {
                    v: (1, 1),
                    orders: (-2, -2),
                    residues: (ResidueLabel::PlusR, ResidueLabel::MinusR),
                },
            ],
        ),
        Q22Case::Fig22Right => (
            vec![
                Vertex {
                    genus: 0,
                    markings: vec![],
                },
                Vertex {
                    genus: 0,
                    markings: vec![(0, 2)],
                },
                Vertex {
                    genus: 0,
                    markings: vec![(1, 2)],
                },
            ],
            vec![
                Edge {
                    v: (0, 1),
                    orders: (-1, -3),
                    residues: (ResidueLabel::Free, ResidueLabel::Free),
                },
                Edge {
                    v: (0, 1),
                    orders: (-1, -3),
                    residues: (ResidueLabel::Free, ResidueLabel::Free),
                },
                Edge {
                    v: (0, 2),
                    orders: (-1, -3),
                    residues: (ResidueLabel::Free, ResidueLabel::Free),
                },
                Edge {
                    v: (0, 2),
                    orders: (-1, -3),
                    residues: (ResidueLabel::Free, ResidueLabel::Free),
                },
            ],
        ),
    };
    TwistedDiff {
        kind: DiffKind::Quadratic,
        vertices,
        edges,
        level_order: None,
    }
}

/// Component signatures for the genus-13 boundary check, in the order
/// S1..S5, R1, R2.
pub type Genus13Signatures = [Vec<i64>; 7];

/// Reference signatures of the two rational components in the genus-13
/// boundary example.
pub const GENUS13_R1: [i64; 7] = [30, -2, -2, -4, -4, -6, -16];
pub const GENUS13_R2: [i64; 5] = [8, -2, -2, -4, -4];

/// Validates the genus-13 boundary: the rational components must carry
/// exactly Q(30,-2,-2,-4,-4,-6,-16) and Q(8,-2,-2,-4,-4) (genus 0, degree
/// -4), the graph must have the shape of the worked example (R1 and R2
/// joined by two (-2,-2) nodes, S1 meeting R1 at two order-(-4) nodes, one
/// more tail on R1 at each of the -6 and -16 poles, and a tail on R2 at
/// each remaining -4 pole), and the total arithmetic genus must be 13.
pub fn check_genus13(signatures: &Genus13Signatures) -> BoundaryReport {
    let mut violations = Vec::new();
    let [s1, s2, s3, s4, s5, r1, r2] = signatures;

    let mut check_degree = |name: &str, sig: &[i64]| -> Option<u32> {
        let sum: i64 = sig.iter().sum();
        if (sum + 4) % 4 != 0 || sum + 4 < 0 {
            violations.push(Violation {
                condition: "degree".into(),
                location: name.into(),
                message: format!("signature degree {sum} is not 4g-4 for integer g"),
            });
            None
        } else {
            Some(((sum + 4) / 4) as u32)
        }
    };

    let genera: Vec<Option<u32>> = [
        ("S1", s1.as_slice()),
        ("S2", s2.as_slice()),
        ("S3", s3.as_slice()),
        ("S4", s4.as_slice()),
        ("S5", s5.as_slice()),
        ("R1", r1.as_slice()),
        ("R2", r2.as_slice()),
    ]
    .into_iter()
    .map(|(name, sig)| check_degree(name, sig))
    .collect();

    let mut sorted_r1 = r1.clone();
    sorted_r1.sort_unstable();
    let mut want_r1 = GENUS13_R1.to_vec();
    want_r1.sort_unstable();
    if sorted_r1 != want_r1 {
        violations.push(Violation {
            condition: "signature".into(),
            location: "R1".into(),
            message: "R1 must carry Q(30,-2,-2,-4,-4,-6,-16)".into(),
        });
    }
    let mut sorted_r2 = r2.clone();
    sorted_r2.sort_unstable();
    let mut want_r2 = GENUS13_R2.to_vec();
    want_r2.sort_unstable();
    if sorted_r2 != want_r2 {
        violations.push(Violation {
            condition: "signature".into(),
            location: "R2".into(),
            message: "R2 must carry Q(8,-2,-2,-4,-4)".into(),
        });
    }
    if genera[5] != Some(0) {
        violations.push(Violation {
            condition: "degree".into(),
            location: "R1".into(),
            message: "R1 must be rational with degree -4".into(),
        });
    }
    if genera[6] != Some(0) {
        violations.push(Violation {
            condition: "degree".into(),
            location: "R2".into(),
            message: "R2 must be rational with degree -4".into(),
        });
    }

    // node orders on the S side are forced by the R-side pole orders
    let mut take = |name: &str, sig: &[i64], wanted: &[i64]| -> Vec<i64> {
        let mut rest = sig.to_vec();
        for &w in wanted {
            if let Some(pos) = rest.iter().position(|&x| x == w) {
                rest.remove(pos);
            } else {
                violations.push(Violation {
                    condition: "node".into(),
                    location: name.into(),
                    message: format!("signature is missing the node order {w}"),
                });
            }
        }
        rest
    };
    let s1_int = take("S1", s1, &[0, 0]);
    let s2_int = take("S2", s2, &[2]);
    let s3_int = take("S3", s3, &[12]);
    let s4_int = take("S4", s4, &[0]);
    let s5_int = take("S5", s5, &[0]);

    if !violations.is_empty() {
        return BoundaryReport::from_violations(violations);
    }

    // assemble the dual graph and run the full validator
    let g = |o: Option<u32>| o.unwrap_or(0);
    let mut vertices = Vec::new();
    let mut mark = 0usize;
    let with_interior = |interior: &[i64], genus: u32, mark: &mut usize| -> Vertex {
        let markings = interior
            .iter()
            .map(|&o| {
                let m = (*mark, o);
                *mark += 1;
                m
            })
            .collect();
        Vertex { genus, markings }
    };
    vertices.push(with_interior(&[30], g(genera[5]), &mut mark)); // R1 = 0
    vertices.push(with_interior(&[8], g(genera[6]), &mut mark)); // R2 = 1
    vertices.push(with_interior(&s1_int, g(genera[0]), &mut mark)); // S1 = 2
    vertices.push(with_interior(&s2_int, g(genera[1]), &mut mark)); // S2 = 3
    vertices.push(with_interior(&s3_int, g(genera[2]), &mut mark)); // S3 = 4
    vertices.push(with_interior(&s4_int, g(genera[3]), &mut mark)); // S4 = 5
    vertices.push(with_interior(&s5_int, g(genera[4]), &mut mark)); // S5 = 6

    let free = ResidueLabel::Free;
    let r = (ResidueLabel::PlusR, ResidueLabel::MinusR);
    let edges = vec![
        Edge {
            v: (0, 1),
            orders: (-2, -2),
            residues: r,
        },
        Edge {
            v: (0, 1),
            orders: (-2, -2),
            residues: r,
        },
        Edge {
            v: (0, 2),
            orders: (-4, 0),
            residues: (free, ResidueLabel::Zero),
        },
        Edge {
            v: (0, 2),
            orders: (-4, 0),
            residues: (free, ResidueLabel::Zero),
        },
        Edge {
            v: (0, 3),
            orders: (-6, 2),
            residues: (free, ResidueLabel::Zero),
        },
        Edge {
            v: (0, 4),
            orders: (-16, 12),
            residues: (free, ResidueLabel::Zero),
        },
        Edge {
            v: (1, 5),
            orders: (-4, 0),
            residues: (free, ResidueLabel::Zero),
        },
        Edge {
            v: (1, 6),
            orders: (-4, 0),
            residues: (free, ResidueLabel::Zero),
        },
    ];
    let diff = TwistedDiff {
        kind: DiffKind::Quadratic,
        vertices,
        edges,
        level_order: None,
    };
    let mut report = diff.validate();
    if diff.total_genus() != 13 {
        report.violations.push(Violation {
            condition: "genus".into(),
            location: "graph".into(),
            message: format!("total arithmetic genus {} != 13", diff.total_genus()),
        });
        report.verdict = Verdict::Invalid;
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::{enumerate_type1, enumerate_type2};
    use crate::stratum::Stratum;
    use std::collections::BTreeSet;

    fn h(orders: &[i64]) -> Stratum {
        Stratum::new(DiffKind::Abelian, orders.to_vec()).unwrap()
    }

    /// The boundary graph from the four-tori example: two genus-1 vertices
    /// and four rational vertices in a cycle, each rational vertex carrying
    /// a simple zero, a double pole toward a torus and a simple pole toward
    /// its rational neighbour.
    fn four_p1_cycle() -> TwistedDiff {
        use ResidueLabel::*;
        TwistedDiff {
            kind: DiffKind::Abelian,
            vertices: vec![
                Vertex { genus: 1, markings: vec![] },       // E1
                Vertex { genus: 0, markings: vec![(0, 1)] }, // P1
                Vertex { genus: 0, markings: vec![(1, 1)] }, // P2
                Vertex { genus: 1, markings: vec![] },       // E2
                Vertex { genus: 0, markings: vec![(2, 1)] }, // P3
                Vertex { genus: 0, markings: vec![(3, 1)] }, // P4
            ],
            edges: vec![
                Edge { v: (0, 1), orders: (0, -2), residues: (Zero, PlusR) },
                Edge { v: (1, 2), orders: (-1, -1), residues: (MinusR, PlusR) },
                Edge { v: (2, 3), orders: (-2, 0), residues: (MinusR, Zero) },
                Edge { v: (3, 4), orders: (0, -2), residues: (Zero, PlusR) },
                Edge { v: (4, 5), orders: (-1, -1), residues: (MinusR, PlusR) },
                Edge { v: (5, 0), orders: (-2, 0), residues: (MinusR, Zero) },
            ],
            level_order: None,
        }
    }

    #[test]
    fn four_p1_cycle_is_valid() {
        let d = four_p1_cycle();
        let report = d.validate();
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn bad_edge_sum_rejected() {
        let mut d = four_p1_cycle();
        d.edges[1].orders = (-1, -2);
        assert!(!d.validate().is_valid());
    }

    #[test]
    fn equal_signs_at_simple_poles_rejected() {
        let mut d = four_p1_cycle();
        d.edges[1].residues = (ResidueLabel::PlusR, ResidueLabel::PlusR);
        assert!(!d.validate().is_valid());
    }

    #[test]
    fn broken_alternation_rejected() {
        let mut d = four_p1_cycle();
        // flip the signs on one (-2,0) node and its partner consistently at
        // the local level: residue signs no longer alternate globally
        d.edges[0].residues = (ResidueLabel::Zero, ResidueLabel::MinusR);
        d.edges[1].residues = (ResidueLabel::PlusR, ResidueLabel::MinusR);
        // edge 1's labels still satisfy condition (2), but the traversal
        // E1 -> P1 -> P2 now reads -r, +r, -r, -r at edge 2
        assert!(!d.validate().is_valid());
    }

    #[test]
    fn build_type1_h11() {
        let s = h(&[1, 1]);
        let c = &enumerate_type1(&s, 0, 1, 2).unwrap()[0];
        let d = build_type1(c);
        assert_eq!(d.vertices.len(), 3);
        assert_eq!(d.edges.len(), 2);
        for e in &d.edges {
            assert_eq!(e.orders, (-2, 0));
        }
        let report = d.validate();
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn build_type1_h22_single() {
        let s = h(&[2, 2]);
        let c = &enumerate_type1(&s, 0, 1, 1).unwrap()[0];
        let d = build_type1(c);
        assert_eq!(d.edges[0].orders, (-6, 4));
        assert_eq!(d.vertices[1].genus, 3);
        assert!(d.validate().is_valid());
    }

    #[test]
    fn build_type1_marked_points() {
        let s = Stratum::with_marked_points(DiffKind::Abelian, vec![0, 0, 2]).unwrap();
        let c = crate::configs::TypeIConfig::new(&s, 0, 1, vec![(0, 0)], vec![vec![2]]).unwrap();
        let d = build_type1(&c);
        assert_eq!(d.edges[0].orders, (-2, 0));
        assert_eq!(d.vertices[0].markings, vec![(0, 0), (1, 0)]);
        assert!(d.validate().is_valid());
    }

    #[test]
    fn build_type2_all_small() {
        for orders in [vec![2], vec![1, 1], vec![2, 2], vec![4]] {
            let s = h(&orders);
            for designated in subsets(orders.len()) {
                if designated.is_empty() {
                    continue;
                }
                for c in enumerate_type2(&s, &designated).unwrap() {
                    let d = build_type2(&c).unwrap();
                    let report = d.validate();
                    assert!(report.is_valid(), "{c}: {report}");
                    // one rational vertex per distinct newborn zero
                    let rational = d
                        .vertices
                        .iter()
                        .filter(|v| v.genus == 0 && !v.markings.is_empty())
                        .count();
                    assert_eq!(rational, c.newborn.len());
                }
            }
        }
    }

    fn subsets(n: usize) -> Vec<BTreeSet<usize>> {
        (0..(1usize << n))
            .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
            .collect()
    }

    #[test]
    fn q22_cases_validate() {
        for case in [Q22Case::Fig22Left, Q22Case::Fig22Middle, Q22Case::Fig22Right] {
            let d = build_q22_boundary(case);
            let report = d.validate();
            assert!(report.is_valid(), "{case:?}: {report}");
            assert_eq!(d.total_genus(), 2);
        }
    }

    #[test]
    fn q22_edge_shapes() {
        let left = build_q22_boundary(Q22Case::Fig22Left);
        assert!(left.edges.iter().all(|e| e.orders == (-1, -3)));
        let middle = build_q22_boundary(Q22Case::Fig22Middle);
        assert_eq!(middle.edges.len(), 3);
        assert!(middle.edges.iter().all(|e| e.orders == (-2, -2)));
        let right = build_q22_boundary(Q22Case::Fig22Right);
        assert_eq!(right.edges.len(), 4);
        assert!(right.edges.iter().all(|e| e.orders == (-1, -3)));
    }

    fn genus13_fixture() -> Genus13Signatures {
        [
            vec![0, 0],        // S1: genus 1
            vec![2, 2],        // S2: genus 2, one interior double zero
            vec![12],          // S3: genus 4
            vec![0, 4],        // S4: genus 2, interior zero of order 4
            vec![0, 4],        // S5: genus 2, interior zero of order 4
            GENUS13_R1.to_vec(),
            GENUS13_R2.to_vec(),
        ]
    }

    #[test]
    fn genus13_valid() {
        let report = check_genus13(&genus13_fixture());
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn genus13_mutations_rejected() {
        let mut bad = genus13_fixture();
        bad[6] = vec![8, -2, -2, -4, -2];
        assert!(!check_genus13(&bad).is_valid());

        let mut bad = genus13_fixture();
        bad[5] = vec![30, -2, -2, -3, -4, -6, -16];
        assert!(!check_genus13(&bad).is_valid());
    }

    #[test]
    fn json_round_trip() {
        let d = four_p1_cycle();
        let js = serde_json::to_string(&d).unwrap();
        let back: TwistedDiff = serde_json::from_str(&js).unwrap();
        assert_eq!(back, d);
    }
}
