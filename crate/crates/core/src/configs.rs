//! Configurations of homologous saddle connections.
//!
//! Type I: `p` saddle connections joining two distinct zeros, recorded by the
//! angle decorations `(a'_i, a''_i)`, a partition of the remaining markings
//! onto the tails, and the derived tail genera.
//!
//! Type II: closed saddle connections, each joining a zero to itself. The
//! surface decomposes into a cyclic word of cylinders and bounded surfaces
//! (figure-eight or pair-of-holes boundary); junctions between delimiters
//! carry the newborn zeros.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stratum::{DiffKind, Stratum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("stratum must be abelian")]
    NotAbelian,
    #[error("marking index {0} out of range")]
    BadIndex(usize),
    #[error("the two chosen zeros must be distinct")]
    EqualIndices,
    #[error("angle sums do not match the zero orders: {0}")]
    AngleSum(String),
    #[error("partition does not cover the remaining markings exactly")]
    BadPartition,
    #[error("part {part}: order sum plus node order is odd, no integer genus")]
    GenusParity { part: usize },
    #[error("degree mismatch: m1 + m2 - sum(n_i) must be -2, got {0}")]
    DegreeMismatch(i64),
    #[error("pole order {0} below 2")]
    PoleOrder(i64),
    #[error("pattern {pattern}: {message}")]
    ArityMismatch { pattern: &'static str, message: String },
    #[error("cycle entry {0}: {1}")]
    BadCycle(usize, String),
    #[error("junction {0}: newborn order {1} does not match designated order {2}")]
    NewbornOrder(usize, i64, i64),
}

// ---------------------------------------------------------------------------
// Type I
// ---------------------------------------------------------------------------

/// A type I configuration `(m1, m2, {a'_i, a''_i})` for two chosen zeros,
/// together with the tail data of its configuration graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TypeIConfig {
    /// Orders of every marking of the ambient stratum.
    pub mu: Vec<i64>,
    /// Index of the first chosen zero.
    pub i1: usize,
    /// Index of the second chosen zero.
    pub i2: usize,
    /// Order of the first chosen zero.
    pub m1: i64,
    /// Order of the second chosen zero.
    pub m2: i64,
    /// Angle decorations `(a'_i, a''_i)`; the angle between consecutive
    /// saddle connections is `2pi(a'_i + 1)` at the first zero and
    /// `2pi(a''_i + 1)` at the second.
    pub angles: Vec<(u32, u32)>,
    /// Remaining marking indices attached to each tail.
    pub parts: Vec<Vec<usize>>,
    /// Tail genera, forced by `2g_i - 2 = sum(L_i) + a'_i + a''_i`.
    pub genera: Vec<u32>,
}

impl TypeIConfig {
    /// Builds and fully checks a configuration for `stratum` with chosen
    /// zeros `i1`, `i2`, angles and tail partition.
    pub fn new(
        stratum: &Stratum,
        i1: usize,
        i2: usize,
        angles: Vec<(u32, u32)>,
        parts: Vec<Vec<usize>>,
    ) -> Result<Self, ConfigError> {
        if stratum.kind() != DiffKind::Abelian {
            return Err(ConfigError::NotAbelian);
        }
        let mu = stratum.orders().to_vec();
        if i1 >= mu.len() {
            return Err(ConfigError::BadIndex(i1));
        }
        if i2 >= mu.len() {
            return Err(ConfigError::BadIndex(i2));
        }
        if i1 == i2 {
            return Err(ConfigError::EqualIndices);
        }
        let (m1, m2) = (mu[i1], mu[i2]);
        let p = angles.len();
        if parts.len() != p {
            return Err(ConfigError::BadPartition);
        }
        let sum1: i64 = angles.iter().map(|a| a.0 as i64 + 1).sum();
        let sum2: i64 = angles.iter().map(|a| a.1 as i64 + 1).sum();
        if sum1 != m1 + 1 || sum2 != m2 + 1 {
            return Err(ConfigError::AngleSum(format!(
                "sum(a'+1) = {sum1} vs m1+1 = {}, sum(a''+1) = {sum2} vs m2+1 = {}",
                m1 + 1,
                m2 + 1
            )));
        }
        // the parts must partition the remaining markings
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for part in &parts {
            for &idx in part {
                if idx >= mu.len() || idx == i1 || idx == i2 || !seen.insert(idx) {
                    return Err(ConfigError::BadPartition);
                }
            }
        }
        if seen.len() != mu.len() - 2 {
            return Err(ConfigError::BadPartition);
        }
        let mut genera = Vec::with_capacity(p);
        for (i, part) in parts.iter().enumerate() {
            let interior: i64 = part.iter().map(|&j| mu[j]).sum();
            let twog = interior + angles[i].0 as i64 + angles[i].1 as i64 + 2;
            if twog % 2 != 0 {
                return Err(ConfigError::GenusParity { part: i });
            }
            genera.push((twog / 2) as u32);
        }
        debug_assert_eq!(
            genera.iter().map(|&g| g as i64).sum::<i64>(),
            stratum.genus() as i64
        );
        Ok(TypeIConfig {
            mu,
            i1,
            i2,
            m1,
            m2,
            angles,
            parts,
            genera,
        })
    }

    pub fn p(&self) -> usize {
        self.angles.len()
    }

    /// Node order `a'_i + a''_i` on the tail side.
    pub fn node_order(&self, i: usize) -> i64 {
        self.angles[i].0 as i64 + self.angles[i].1 as i64
    }

    /// Total genus of the smooth surfaces carrying this configuration.
    pub fn genus(&self) -> u32 {
        self.genera.iter().sum()
    }
}

/// All type I configurations of `stratum` for the ordered pair of zeros
/// `(i1, i2)` with exactly `p` saddle connections, in lexicographic order on
/// (angles, partition). Complete and duplicate-free; empty when none exist.
pub fn enumerate_type1(
    stratum: &Stratum,
    i1: usize,
    i2: usize,
    p: usize,
) -> Result<Vec<TypeIConfig>, ConfigError> {
    if stratum.kind() != DiffKind::Abelian {
        return Err(ConfigError::NotAbelian);
    }
    let mu = stratum.orders();
    if i1 >= mu.len() {
        return Err(ConfigError::BadIndex(i1));
    }
    if i2 >= mu.len() {
        return Err(ConfigError::BadIndex(i2));
    }
    if i1 == i2 {
        return Err(ConfigError::EqualIndices);
    }
    if p == 0 {
        return Ok(Vec::new());
    }
    let (m1, m2) = (mu[i1], mu[i2]);
    // sum(a'_i) = m1 + 1 - p >= 0, likewise for a''
    if (m1 + 1) < p as i64 || (m2 + 1) < p as i64 {
        return Ok(Vec::new());
    }
    let rest: Vec<usize> = (0..mu.len()).filter(|&j| j != i1 && j != i2).collect();
    let mut out = Vec::new();
    for a1 in compositions((m1 + 1 - p as i64) as u32, p) {
        for a2 in compositions((m2 + 1 - p as i64) as u32, p) {
            let angles: Vec<(u32, u32)> = a1.iter().copied().zip(a2.iter().copied()).collect();
            for assignment in assignments(rest.len(), p) {
                let mut parts: Vec<Vec<usize>> = vec![Vec::new(); p];
                for (pos, &part) in assignment.iter().enumerate() {
                    parts[part].push(rest[pos]);
                }
                match TypeIConfig::new(stratum, i1, i2, angles.clone(), parts) {
                    Ok(c) => out.push(c),
                    Err(ConfigError::GenusParity { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(out)
}

/// All weak compositions of `total` into `parts` nonnegative summands, in
/// lexicographic order.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

/// All maps `{0..n-1} -> {0..parts-1}`, in lexicographic order.
fn assignments(n: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    loop {
        out.push(cur.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < parts {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Number of integral tuples `{a'_i, a''_i}` with `a'_i, a''_i >= 0`,
/// `a'_i + a''_i + 2 = n_i`, and `sum(a'_i + 1) = m1 + 1`. This counts the
/// points of the zero-residue locus `Z` for the given zero and pole orders.
pub fn count_z(m1: i64, m2: i64, poles: &[i64]) -> Result<u64, ConfigError> {
    for &n in poles {
        if n < 2 {
            return Err(ConfigError::PoleOrder(n));
        }
    }
    let defect = m1 + m2 - poles.iter().sum::<i64>();
    if defect != -2 {
        return Err(ConfigError::DegreeMismatch(defect));
    }
    let p = poles.len() as i64;
    let target = m1 + 1 - p;
    if target < 0 {
        return Ok(0);
    }
    // counts[s] = number of ways to reach a'(chosen so far) summing to s
    let mut counts = vec![0u64; target as usize + 1];
    counts[0] = 1;
    for &n in poles {
        let cap = (n - 2).min(target) as usize;
        let mut next = vec![0u64; target as usize + 1];
        for (s, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for a in 0..=cap {
                if s + a <= target as usize {
                    next[s + a] += c;
                }
            }
        }
        counts = next;
    }
    Ok(counts[target as usize])
}

// ---------------------------------------------------------------------------
// Type II
// ---------------------------------------------------------------------------

/// Gluing pattern of a junction, after the three local models: bounded by
/// two cylinder ends (i), a cylinder end and a pair-of-holes side (ii), or
/// two pair-of-holes sides (iii).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JunctionPattern {
    I,
    II,
    III,
}

/// Newborn-zero order for a junction: `sum(c_i + 2)` over the figure-eight
/// surfaces in the chain, plus `a + 1` and/or `b + 1` for bounding
/// pair-of-holes sides. Pattern (i) takes only `c` (nonempty), (ii) takes
/// `b`, (iii) takes both `a` and `b`.
pub fn newborn_order(
    pattern: JunctionPattern,
    c: &[u32],
    a: Option<u32>,
    b: Option<u32>,
) -> Result<i64, ConfigError> {
    let chain: i64 = c.iter().map(|&ci| ci as i64 + 2).sum();
    match pattern {
        JunctionPattern::I => {
            if c.is_empty() {
                return Err(ConfigError::ArityMismatch {
                    pattern: "i",
                    message: "requires at least one figure-eight surface".into(),
                });
            }
            if a.is_some() || b.is_some() {
                return Err(ConfigError::ArityMismatch {
                    pattern: "i",
                    message: "takes no pair-of-holes decorations".into(),
                });
            }
            Ok(chain)
        }
        JunctionPattern::II => {
            let Some(b) = b else {
                return Err(ConfigError::ArityMismatch {
                    pattern: "ii",
                    message: "requires the pair-of-holes decoration b".into(),
                });
            };
            if a.is_some() {
                return Err(ConfigError::ArityMismatch {
                    pattern: "ii",
                    message: "takes no decoration a".into(),
                });
            }
            Ok(chain + b as i64 + 1)
        }
        JunctionPattern::III => {
            let (Some(a), Some(b)) = (a, b) else {
                return Err(ConfigError::ArityMismatch {
                    pattern: "iii",
                    message: "requires both decorations a and b".into(),
                });
            };
            Ok(chain + a as i64 + 1 + b as i64 + 1)
        }
    }
}

/// Boundary type of a bounded surface in a type II configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "d")]
pub enum Boundary {
    /// A figure-eight boundary: both boundary curves share one zero, with
    /// angles `2pi(c'+1)` and `2pi(c''+1)` inside the surface.
    #[serde(rename = "fig8")]
    FigureEight(u32, u32),
    /// A pair-of-holes boundary: two disjoint boundary curves, with cone
    /// angle `(2a+3)pi` at the zero on the outgoing side and `(2b+3)pi` on
    /// the incoming side.
    #[serde(rename = "holes")]
    PairOfHoles(u32, u32),
}

/// One entry of the cyclic word of a type II configuration.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CycleEntry {
    #[serde(rename = "cyl")]
    Cylinder,
    #[serde(rename = "surf")]
    Surface {
        genus: u32,
        boundary: Boundary,
        interior: Vec<usize>,
    },
}

impl CycleEntry {
    fn is_delimiter(&self) -> bool {
        !matches!(
            self,
            CycleEntry::Surface {
                boundary: Boundary::FigureEight(..),
                ..
            }
        )
    }
}

/// A junction of a type II configuration, read off the cyclic word: the
/// chain of figure-eight surfaces between two consecutive delimiters
/// (cylinders or pair-of-holes surfaces), together with the bounding sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Junction {
    /// Designated marking index of the newborn zero.
    pub marking: usize,
    /// Newborn zero order.
    pub order: i64,
    pub pattern: JunctionPattern,
    /// Positions in the cycle of the figure-eight surfaces of the chain.
    pub fig8: Vec<usize>,
    /// Position of the delimiter before the junction.
    pub left: usize,
    /// Position of the delimiter after the junction.
    pub right: usize,
}

/// A type II configuration: a cyclic word over cylinders and bounded
/// surfaces, plus the assignment of designated markings to its junctions.
/// Stored in rotation-minimal canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TypeIIConfig {
    /// Orders of every marking of the ambient stratum.
    pub mu: Vec<i64>,
    pub cycle: Vec<CycleEntry>,
    /// Designated marking index per junction, listed in delimiter order:
    /// entry `j` belongs to the junction that follows the `j`-th delimiter
    /// of `cycle`.
    pub newborn: Vec<usize>,
}

impl TypeIIConfig {
    /// Builds a configuration and checks every junction and degree
    /// identity; the input word may be in any rotation.
    pub fn new(
        stratum: &Stratum,
        cycle: Vec<CycleEntry>,
        newborn: Vec<usize>,
    ) -> Result<Self, ConfigError> {
        if stratum.kind() != DiffKind::Abelian {
            return Err(ConfigError::NotAbelian);
        }
        let mut config = TypeIIConfig {
            mu: stratum.orders().to_vec(),
            cycle,
            newborn,
        };
        config.check()?;
        config.canonicalize();
        Ok(config)
    }

    /// Positions of the delimiters (cylinders and pair-of-holes surfaces).
    fn delimiters(&self) -> Vec<usize> {
        self.cycle
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_delimiter())
            .map(|(i, _)| i)
            .collect()
    }

    /// Reads the junction structure off the cyclic word.
    pub fn junctions(&self) -> Result<Vec<Junction>, ConfigError> {
        let delims = self.delimiters();
        if delims.is_empty() {
            return Err(ConfigError::BadCycle(
                0,
                "a type II configuration needs at least one cylinder or pair-of-holes surface"
                    .into(),
            ));
        }
        if self.newborn.len() != delims.len() {
            return Err(ConfigError::BadCycle(
                0,
                format!(
                    "{} junctions but {} newborn markings",
                    delims.len(),
                    self.newborn.len()
                ),
            ));
        }
        let n = self.cycle.len();
        let mut out = Vec::with_capacity(delims.len());
        for (j, &left) in delims.iter().enumerate() {
            let right = delims[(j + 1) % delims.len()];
            // figure-eight chain strictly between the two delimiters; with a
            // single delimiter the chain wraps the whole word once
            let mut fig8 = Vec::new();
            let mut pos = (left + 1) % n;
            while pos != right {
                fig8.push(pos);
                pos = (pos + 1) % n;
            }
            let mut order = 0i64;
            for &f in &fig8 {
                match &self.cycle[f] {
                    CycleEntry::Surface {
                        boundary: Boundary::FigureEight(c1, c2),
                        ..
                    } => order += *c1 as i64 + *c2 as i64 + 2,
                    _ => {
                        return Err(ConfigError::BadCycle(
                            f,
                            "junction chain may only contain figure-eight surfaces".into(),
                        ))
                    }
                }
            }
            let left_holes = match &self.cycle[left] {
                CycleEntry::Cylinder => None,
                CycleEntry::Surface {
                    boundary: Boundary::PairOfHoles(a, _),
                    ..
                } => Some(*a),
                _ => unreachable!("delimiters are cylinders or pair-of-holes surfaces"),
            };
            let right_holes = match &self.cycle[right] {
                CycleEntry::Cylinder => None,
                CycleEntry::Surface {
                    boundary: Boundary::PairOfHoles(_, b),
                    ..
                } => Some(*b),
                _ => unreachable!(),
            };
            let pattern = match (left_holes, right_holes) {
                (None, None) => JunctionPattern::I,
                (None, Some(_)) | (Some(_), None) => JunctionPattern::II,
                (Some(_), Some(_)) => JunctionPattern::III,
            };
            if pattern == JunctionPattern::I && fig8.is_empty() {
                return Err(ConfigError::BadCycle(
                    left,
                    "two cylinder ends may not meet without a figure-eight chain".into(),
                ));
            }
            if let Some(a) = left_holes {
                order += a as i64 + 1;
            }
            if let Some(b) = right_holes {
                order += b as i64 + 1;
            }
            out.push(Junction {
                marking: self.newborn[j],
                order,
                pattern,
                fig8,
                left,
                right,
            });
        }
        Ok(out)
    }

    fn check(&self) -> Result<(), ConfigError> {
        let junctions = self.junctions()?;
        let mut used: BTreeSet<usize> = BTreeSet::new();
        for j in &junctions {
            if j.marking >= self.mu.len() || !used.insert(j.marking) {
                return Err(ConfigError::BadIndex(j.marking));
            }
            if j.order != self.mu[j.marking] {
                return Err(ConfigError::NewbornOrder(j.left, j.order, self.mu[j.marking]));
            }
        }
        // interiors exhaust the remaining markings, and every surface has an
        // integer genus matching its declared one
        for (pos, entry) in self.cycle.iter().enumerate() {
            if let CycleEntry::Surface {
                genus,
                boundary,
                interior,
            } = entry
            {
                for &idx in interior {
                    if idx >= self.mu.len() || !used.insert(idx) {
                        return Err(ConfigError::BadIndex(idx));
                    }
                }
                let interior_sum: i64 = interior.iter().map(|&i| self.mu[i]).sum();
                let boundary_sum = match boundary {
                    Boundary::FigureEight(c1, c2) => *c1 as i64 + *c2 as i64,
                    Boundary::PairOfHoles(a, b) => *a as i64 + *b as i64,
                };
                let twog = interior_sum + boundary_sum + 2;
                if twog % 2 != 0 {
                    return Err(ConfigError::GenusParity { part: pos });
                }
                if (twog / 2) as u32 != *genus || *genus < 1 {
                    return Err(ConfigError::BadCycle(
                        pos,
                        format!("declared genus {genus} but degree forces {}", twog / 2),
                    ));
                }
            }
        }
        if used.len() != self.mu.len() {
            return Err(ConfigError::BadPartition);
        }
        // total genus: sum of surface genera is g - 1
        let total: i64 = self
            .cycle
            .iter()
            .map(|e| match e {
                CycleEntry::Surface { genus, .. } => *genus as i64,
                CycleEntry::Cylinder => 0,
            })
            .sum();
        let g = (self.mu.iter().sum::<i64>() + 2) / 2;
        debug_assert_eq!(total, g - 1, "surface genera must sum to g - 1");
        Ok(())
    }

    /// Rotates the word (and the junction markings with it) to the
    /// lexicographically least representative.
    fn canonicalize(&mut self) {
        let n = self.cycle.len();
        if n == 0 {
            return;
        }
        let mut best: Option<(Vec<CycleEntry>, Vec<usize>)> = None;
        for r in 0..n {
            let mut cyc: Vec<CycleEntry> = Vec::with_capacity(n);
            for k in 0..n {
                cyc.push(self.cycle[(r + k) % n].clone());
            }
            // newborn entries follow their delimiters
            let skipped = self.cycle[..r].iter().filter(|e| e.is_delimiter()).count();
            let m = self.newborn.len();
            let mut nb: Vec<usize> = Vec::with_capacity(m);
            for k in 0..m {
                nb.push(self.newborn[(skipped + k) % m]);
            }
            let cand = (cyc, nb);
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
        let (cyc, nb) = best.unwrap();
        self.cycle = cyc;
        self.newborn = nb;
    }

    /// Sum of the surface genera (equals `g - 1`).
    pub fn surface_genus_sum(&self) -> u32 {
        self.cycle
            .iter()
            .map(|e| match e {
                CycleEntry::Surface { genus, .. } => *genus,
                CycleEntry::Cylinder => 0,
            })
            .sum()
    }
}

/// All type II configurations of `stratum` whose junction newborn orders
/// realize exactly the designated markings, one canonical (rotation-minimal)
/// representative per class, in sorted order.
pub fn enumerate_type2(
    stratum: &Stratum,
    designated: &BTreeSet<usize>,
) -> Result<Vec<TypeIIConfig>, ConfigError> {
    if stratum.kind() != DiffKind::Abelian {
        return Err(ConfigError::NotAbelian);
    }
    let mu = stratum.orders();
    for &d in designated {
        if d >= mu.len() {
            return Err(ConfigError::BadIndex(d));
        }
    }
    if designated.is_empty() {
        return Ok(Vec::new());
    }
    let rest: Vec<usize> = (0..mu.len()).filter(|j| !designated.contains(j)).collect();
    let mut found: BTreeSet<TypeIIConfig> = BTreeSet::new();

    let designated: Vec<usize> = designated.iter().copied().collect();
    for perm in permutations(&designated) {
        let orders: Vec<i64> = perm.iter().map(|&d| mu[d]).collect();
        enumerate_delimiters(stratum, &perm, &orders, &rest, &mut found);
    }
    Ok(found.into_iter().collect())
}

/// Delimiter descriptor during enumeration.
#[derive(Clone)]
enum Delim {
    Cyl,
    Holes { a: u32, b: u32 },
}

fn enumerate_delimiters(
    stratum: &Stratum,
    perm: &[usize],
    orders: &[i64],
    rest: &[usize],
    found: &mut BTreeSet<TypeIIConfig>,
) {
    let j = perm.len();
    // each delimiter is a cylinder or a pair-of-holes surface; decorations
    // are bounded by the junction orders on each side
    let mut pattern = vec![false; j]; // true = holes
    loop {
        'pattern: {
            // decoration ranges: delimiter d faces junction d with side a
            // (bounded by orders[d]) and junction d-1 with side b
            let mut choices: Vec<Vec<Delim>> = Vec::with_capacity(j);
            for d in 0..j {
                if !pattern[d] {
                    choices.push(vec![Delim::Cyl]);
                    continue;
                }
                let amax = orders[d] - 1;
                let bmax = orders[(d + j - 1) % j] - 1;
                if amax < 0 || bmax < 0 {
                    break 'pattern;
                }
                let mut v = Vec::new();
                for a in 0..=amax as u32 {
                    for b in 0..=bmax as u32 {
                        v.push(Delim::Holes { a, b });
                    }
                }
                choices.push(v);
            }
            for delims in cartesian(&choices) {
                expand_junctions(stratum, perm, orders, rest, &delims, found);
            }
        }
        // next subset
        let mut i = 0;
        loop {
            if i == j {
                return;
            }
            pattern[i] = !pattern[i];
            if pattern[i] {
                break;
            }
            i += 1;
        }
    }
}

fn expand_junctions(
    stratum: &Stratum,
    perm: &[usize],
    orders: &[i64],
    rest: &[usize],
    delims: &[&Delim],
    found: &mut BTreeSet<TypeIIConfig>,
) {
    let j = perm.len();
    // remaining order at each junction once the bounding sides are counted
    let mut rem = Vec::with_capacity(j);
    for q in 0..j {
        let mut r = orders[q];
        if let Delim::Holes { a, .. } = delims[q] {
            r -= *a as i64 + 1;
        }
        if let Delim::Holes { b, .. } = delims[(q + 1) % j] {
            r -= *b as i64 + 1;
        }
        if r < 0 {
            return;
        }
        let both_cyl =
            matches!(delims[q], Delim::Cyl) && matches!(delims[(q + 1) % j], Delim::Cyl);
        if both_cyl && r == 0 {
            return; // pattern (i) needs at least one figure-eight surface
        }
        rem.push(r);
    }
    // figure-eight chains: ordered compositions of rem into parts c + 2 >= 2,
    // then a split of each c into (c', c'')
    let mut chain_choices: Vec<Vec<Vec<(u32, u32)>>> = Vec::with_capacity(j);
    for &r in &rem {
        let mut chains = Vec::new();
        for comp in compositions_min2(r) {
            let splits: Vec<Vec<(u32, u32)>> = comp
                .iter()
                .map(|&part| {
                    let c = part - 2;
                    (0..=c).map(|c1| (c1 as u32, (c - c1) as u32)).collect()
                })
                .collect();
            for chosen in cartesian(&splits) {
                chains.push(chosen.into_iter().copied().collect::<Vec<(u32, u32)>>());
            }
        }
        chain_choices.push(chains);
    }
    for chains in cartesian(&chain_choices) {
        // surfaces, in cycle order, that can hold interior markings
        // slot list: per junction q: delimiter q (if holes) then its chain
        let mut slots = 0usize;
        for q in 0..j {
            if matches!(delims[q], Delim::Holes { .. }) {
                slots += 1;
            }
            slots += chains[q].len();
        }
        if slots == 0 && !rest.is_empty() {
            continue;
        }
        let interiors = if rest.is_empty() {
            vec![Vec::new()]
        } else {
            assignments(rest.len(), slots)
        };
        'assign: for assignment in interiors {
            let mut by_slot: Vec<Vec<usize>> = vec![Vec::new(); slots.max(1)];
            for (pos, &slot) in assignment.iter().enumerate() {
                by_slot[slot].push(rest[pos]);
            }
            // assemble the word
            let mut cycle = Vec::new();
            let mut newborn = Vec::new();
            let mut slot = 0usize;
            for q in 0..j {
                match delims[q] {
                    Delim::Cyl => cycle.push(CycleEntry::Cylinder),
                    Delim::Holes { a, b } => {
                        let interior = by_slot[slot].clone();
                        slot += 1;
                        let isum: i64 = interior.iter().map(|&i| stratum.orders()[i]).sum();
                        let twog = isum + *a as i64 + *b as i64 + 2;
                        if twog % 2 != 0 {
                            continue 'assign;
                        }
                        cycle.push(CycleEntry::Surface {
                            genus: (twog / 2) as u32,
                            boundary: Boundary::PairOfHoles(*a, *b),
                            interior,
                        });
                    }
                }
                newborn.push(perm[q]);
                for &(c1, c2) in chains[q] {
                    let interior = by_slot[slot].clone();
                    slot += 1;
                    let isum: i64 = interior.iter().map(|&i| stratum.orders()[i]).sum();
                    let twog = isum + c1 as i64 + c2 as i64 + 2;
                    if twog % 2 != 0 {
                        continue 'assign;
                    }
                    cycle.push(CycleEntry::Surface {
                        genus: (twog / 2) as u32,
                        boundary: Boundary::FigureEight(c1, c2),
                        interior,
                    });
                }
            }
            if let Ok(config) = TypeIIConfig::new(stratum, cycle, newborn) {
                found.insert(config);
            }
        }
    }
}

/// Ordered compositions of `total` into parts of size at least 2 (the empty
/// composition for `total = 0`).
fn compositions_min2(total: i64) -> Vec<Vec<i64>> {
    fn rec(total: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if total == 0 {
            out.push(prefix.clone());
            return;
        }
        let mut part = 2;
        while part <= total {
            prefix.push(part);
            rec(total - part, prefix, out);
            prefix.pop();
            part += 1;
        }
    }
    let mut out = Vec::new();
    if total >= 0 {
        rec(total, &mut Vec::new(), &mut out);
    }
    out
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first.clone());
            out.push(tail);
        }
    }
    out
}

fn cartesian<'a, T>(choices: &'a [Vec<T>]) -> Vec<Vec<&'a T>> {
    let mut out: Vec<Vec<&T>> = vec![Vec::new()];
    for c in choices {
        let mut next = Vec::with_capacity(out.len() * c.len().max(1));
        for prefix in &out {
            for item in c {
                let mut row = prefix.clone();
                row.push(item);
                next.push(row);
            }
        }
        out = next;
    }
    out
}

// ---------------------------------------------------------------------------
// Configuration graphs
// ---------------------------------------------------------------------------

/// Dual-graph skeleton of a configuration: a star for type I, a cycle of
/// rational vertices with attached tails for type II.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigGraph {
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphVertex {
    pub genus: u32,
    pub markings: Vec<usize>,
    pub rational: bool,
}

impl ConfigGraph {
    pub fn betti(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }
}

/// Configuration graph of a type I configuration: the star with center
/// `v_R` carrying the two chosen zeros.
pub fn config_graph_type1(c: &TypeIConfig) -> ConfigGraph {
    let mut vertices = vec![GraphVertex {
        genus: 0,
        markings: vec![c.i1, c.i2],
        rational: true,
    }];
    let mut edges = Vec::new();
    for i in 0..c.p() {
        vertices.push(GraphVertex {
            genus: c.genera[i],
            markings: c.parts[i].clone(),
            rational: false,
        });
        edges.push((0, i + 1));
    }
    ConfigGraph { vertices, edges }
}

/// Configuration graph of a type II configuration: a cycle through the
/// junction vertices and the pair-of-holes surfaces, with figure-eight
/// surfaces as tails.
pub fn config_graph_type2(c: &TypeIIConfig) -> Result<ConfigGraph, ConfigError> {
    let junctions = c.junctions()?;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    // one rational vertex per junction
    let mut junction_vertex = Vec::with_capacity(junctions.len());
    for j in &junctions {
        junction_vertex.push(vertices.len());
        vertices.push(GraphVertex {
            genus: 0,
            markings: vec![j.marking],
            rational: true,
        });
    }
    // one vertex per bounded surface
    let mut surface_vertex = vec![usize::MAX; c.cycle.len()];
    for (pos, entry) in c.cycle.iter().enumerate() {
        if let CycleEntry::Surface { genus, interior, .. } = entry {
            surface_vertex[pos] = vertices.len();
            vertices.push(GraphVertex {
                genus: *genus,
                markings: interior.clone(),
                rational: false,
            });
        }
    }
    for (q, j) in junctions.iter().enumerate() {
        let rv = junction_vertex[q];
        for &f in &j.fig8 {
            edges.push((rv, surface_vertex[f]));
        }
        // connection toward the next junction through the right delimiter
        let next = junction_vertex[(q + 1) % junctions.len()];
        match &c.cycle[j.right] {
            CycleEntry::Cylinder => edges.push((rv, next)),
            CycleEntry::Surface { .. } => {
                edges.push((rv, surface_vertex[j.right]));
                edges.push((surface_vertex[j.right], next));
            }
        }
    }
    // a holes surface between two junctions was wired twice (once as right
    // delimiter of one junction, once as target of the previous); dedupe
    edges.sort_unstable();
    edges.dedup();
    Ok(ConfigGraph { vertices, edges })
}

impl fmt::Display for TypeIConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

impl fmt::Display for TypeIIConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stratum::DiffKind;

    fn h(orders: &[i64]) -> Stratum {
        Stratum::new(DiffKind::Abelian, orders.to_vec()).unwrap()
    }

    #[test]
    fn enumerate_h11_p2() {
        let s = h(&[1, 1]);
        let configs = enumerate_type1(&s, 0, 1, 2).unwrap();
        assert_eq!(configs.len(), 1);
        let c = &configs[0];
        assert_eq!(c.angles, vec![(0, 0), (0, 0)]);
        assert_eq!(c.genera, vec![1, 1]);
        assert!(c.parts.iter().all(|p| p.is_empty()));
    }

    #[test]
    fn enumerate_h13_p3_empty() {
        let s = h(&[1, 3]);
        assert!(enumerate_type1(&s, 0, 1, 3).unwrap().is_empty());
    }

    #[test]
    fn enumerate_h22_p1() {
        let s = h(&[2, 2]);
        let configs = enumerate_type1(&s, 0, 1, 1).unwrap();
        assert_eq!(configs.len(), 1);
        assert_eq!(configs[0].angles, vec![(2, 2)]);
        assert_eq!(configs[0].genera, vec![3]);
    }

    #[test]
    fn enumerate_is_sorted_and_unique() {
        let s = h(&[3, 3]);
        for p in 1..=4 {
            let configs = enumerate_type1(&s, 0, 1, p).unwrap();
            for w in configs.windows(2) {
                assert!(w[0] < w[1]);
            }
            for c in &configs {
                let s1: i64 = c.angles.iter().map(|a| a.0 as i64 + 1).sum();
                let s2: i64 = c.angles.iter().map(|a| a.1 as i64 + 1).sum();
                assert_eq!(s1, c.m1 + 1);
                assert_eq!(s2, c.m2 + 1);
                assert_eq!(c.genus(), s.genus());
            }
        }
    }

    #[test]
    fn count_z_worked_examples() {
        assert_eq!(count_z(1, 1, &[2, 2]).unwrap(), 1);
        assert_eq!(count_z(1, 3, &[2, 2, 2]).unwrap(), 0);
        assert_eq!(count_z(2, 2, &[3, 3]).unwrap(), 2);
    }

    #[test]
    fn count_z_degree_mismatch() {
        assert!(matches!(
            count_z(1, 1, &[2, 3]),
            Err(ConfigError::DegreeMismatch(_))
        ));
    }

    #[test]
    fn newborn_order_formulas() {
        assert_eq!(newborn_order(JunctionPattern::I, &[0], None, None).unwrap(), 2);
        assert_eq!(newborn_order(JunctionPattern::II, &[], None, Some(0)).unwrap(), 1);
        assert_eq!(
            newborn_order(JunctionPattern::III, &[2], Some(1), Some(0)).unwrap(),
            7
        );
        assert!(newborn_order(JunctionPattern::I, &[], None, None).is_err());
        assert!(newborn_order(JunctionPattern::II, &[], None, None).is_err());
        assert!(newborn_order(JunctionPattern::III, &[], Some(0), None).is_err());
    }

    #[test]
    fn enumerate_type2_h2() {
        // H(2): one junction of order 2; the pattern (i) block with an empty
        // chain (two adjacent cylinder ends) must not appear
        let s = h(&[2]);
        let designated: BTreeSet<usize> = [0].into();
        let configs = enumerate_type2(&s, &designated).unwrap();
        assert!(!configs.is_empty());
        for c in &configs {
            let junctions = c.junctions().unwrap();
            assert_eq!(junctions.len(), 1);
            assert_eq!(junctions[0].order, 2);
            assert_eq!(c.surface_genus_sum(), s.genus() - 1);
        }
        // the cylinder + figure-eight torus realization is present
        assert!(configs.iter().any(|c| {
            c.cycle.len() == 2
                && c.cycle.iter().any(|e| matches!(e, CycleEntry::Cylinder))
                && c.cycle.iter().any(|e| matches!(
                    e,
                    CycleEntry::Surface {
                        boundary: Boundary::FigureEight(0, 0),
                        ..
                    }
                ))
        }));
    }

    #[test]
    fn enumerate_type2_h1111_tori_chain() {
        // two pair-of-holes tori separated by cylinders, realizing four
        // newborn simple zeros
        let s = h(&[1, 1, 1, 1]);
        let designated: BTreeSet<usize> = [0, 1, 2, 3].into();
        let configs = enumerate_type2(&s, &designated).unwrap();
        assert!(configs.iter().any(|c| {
            let cyls = c.cycle.iter().filter(|e| matches!(e, CycleEntry::Cylinder)).count();
            let tori = c
                .cycle
                .iter()
                .filter(|e| {
                    matches!(
                        e,
                        CycleEntry::Surface {
                            genus: 1,
                            boundary: Boundary::PairOfHoles(0, 0),
                            ..
                        }
                    )
                })
                .count();
            cyls == 2 && tori == 2 && c.cycle.len() == 4
        }));
    }

    #[test]
    fn type2_canonical_under_rotation() {
        let s = h(&[1, 1, 1, 1]);
        let designated: BTreeSet<usize> = [0, 1, 2, 3].into();
        for c in enumerate_type2(&s, &designated).unwrap() {
            let n = c.cycle.len();
            for r in 1..n {
                let mut cyc = c.cycle.clone();
                cyc.rotate_left(r);
                let skipped = c.cycle[..r].iter().filter(|e| e.is_delimiter()).count();
                let mut nb = c.newborn.clone();
                let m = nb.len().max(1);
                nb.rotate_left(skipped % m);
                let again = TypeIIConfig::new(&s, cyc, nb).unwrap();
                assert_eq!(again, c, "rotation changed the canonical form");
            }
        }
    }

    #[test]
    fn single_holes_surface_self_junction() {
        // the m = 1 special case: one pair-of-holes surface whose two sides
        // meet at a single junction
        let s = h(&[2]);
        let cycle = vec![CycleEntry::Surface {
            genus: 1,
            boundary: Boundary::PairOfHoles(0, 0),
            interior: vec![],
        }];
        let c = TypeIIConfig::new(&s, cycle, vec![0]).unwrap();
        let junctions = c.junctions().unwrap();
        assert_eq!(junctions.len(), 1);
        assert_eq!(junctions[0].pattern, JunctionPattern::III);
        assert_eq!(junctions[0].order, 2);
    }

    #[test]
    fn config_graphs() {
        let s = h(&[1, 1]);
        let c = &enumerate_type1(&s, 0, 1, 2).unwrap()[0];
        let g = config_graph_type1(c);
        assert_eq!(g.vertices.len(), 3);
        assert_eq!(g.edges.len(), 2);
        assert_eq!(g.betti(), 0);

        let s2 = h(&[1, 1, 1, 1]);
        let designated: BTreeSet<usize> = [0, 1, 2, 3].into();
        let configs = enumerate_type2(&s2, &designated).unwrap();
        let tori_chain = configs
            .iter()
            .find(|c| c.cycle.len() == 4 && c.cycle.iter().filter(|e| matches!(e, CycleEntry::Cylinder)).count() == 2)
            .unwrap();
        let g2 = config_graph_type2(tori_chain).unwrap();
        assert_eq!(g2.vertices.len(), 6);
        assert_eq!(g2.betti(), 1);
    }

    #[test]
    fn type1_single_edge_graph() {
        let s = h(&[2, 2]);
        let c = &enumerate_type1(&s, 0, 1, 1).unwrap()[0];
        let g = config_graph_type1(c);
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.edges.len(), 1);
    }
}
