//! Network structure: node indexing and the row-stochastic coupling matrix.
//!
//! A hierarchy of depth `L` and breadth `M` is a tree of units. Each unit
//! is a clique of `M + 1` nodes: `M` members at positions `1..=M` and one
//! leader at position `M + 1`. Member `p` of a unit owns the `p`-th
//! sub-unit in the layer below; the leader reports to the owning member in
//! the layer above. Rows of the coupling matrix sum to one: a member
//! splits its attention as `M` shares of `1/(M+beta)` inside the unit plus
//! `beta/(M+beta)` downward, a leader as `M` shares of `1/(M+alpha)` plus
//! `alpha/(M+alpha)` upward. At the boundary layers the downward/upward
//! share becomes a self-loop, which keeps every row stochastic.

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Structural parameters of the hierarchy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HierarchyConfig {
    /// Depth: number of layers, at least 2.
    pub layers: u32,
    /// Breadth: sub-units per unit and members per unit, at least 2.
    pub breadth: u32,
    /// Relative weight of information from the layer above.
    pub alpha: f64,
    /// Relative weight of information from the layer below.
    pub beta: f64,
}

impl HierarchyConfig {
    pub fn new(layers: u32, breadth: u32, alpha: f64, beta: f64) -> Result<Self> {
        let cfg = Self { layers, breadth, alpha, beta };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers < 2 {
            return Err(Error::Invalid("layers must be at least 2"));
        }
        if self.breadth < 2 {
            return Err(Error::Invalid("breadth must be at least 2"));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::Invalid("alpha must be positive and finite"));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::Invalid("beta must be positive and finite"));
        }
        Ok(())
    }

    /// Nodes per unit, `M + 1`.
    pub fn unit_size(&self) -> usize {
        self.breadth as usize + 1
    }
}

/// Position of a node: layer `1..=L` from the top, unit `1..=M^(layer-1)`
/// within the layer, and position `1..=M+1` within the unit. Position
/// `M + 1` is the unit's leader.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeCoord {
    pub layer: u32,
    pub unit: usize,
    pub pos: u32,
}

impl NodeCoord {
    pub fn is_leader(&self, config: &HierarchyConfig) -> bool {
        self.pos == config.breadth + 1
    }
}

/// Dense row-stochastic coupling matrix together with its generating
/// configuration. Constructed by [`build_weight_matrix`] or
/// [`build_weight_matrix_blockform`]; rows sum to one by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    entries: DMatrix<f64>,
    config: HierarchyConfig,
}

impl WeightMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn config(&self) -> &HierarchyConfig {
        &self.config
    }

    /// Entry accessor with 1-based indices, matching the coordinate maps.
    ///
    /// Panics if an index is outside `1..=n`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i >= 1 && i <= self.n && j >= 1 && j <= self.n);
        self.entries[(i - 1, j - 1)]
    }
}

/// Number of units in the given layer, `M^(layer-1)`.
fn units_in_layer(breadth: usize, layer: u32) -> Result<usize> {
    breadth
        .checked_pow(layer - 1)
        .ok_or(Error::ConfigTooLarge)
}

/// Number of nodes in all layers above `layer`.
fn layer_offset(breadth: usize, layer: u32) -> Result<usize> {
    let mut units_above = 0usize;
    let mut units = 1usize;
    for _ in 1..layer {
        units_above = units_above.checked_add(units).ok_or(Error::ConfigTooLarge)?;
        units = units.checked_mul(breadth).ok_or(Error::ConfigTooLarge)?;
    }
    units_above
        .checked_mul(breadth + 1)
        .ok_or(Error::ConfigTooLarge)
}

/// Total number of nodes, `(M+1)(M^L - 1)/(M - 1)`, in exact integer
/// arithmetic. Overflow reports the configuration as too large.
pub fn node_count(config: &HierarchyConfig) -> Result<usize> {
    config.validate()?;
    let m = config.breadth as usize;
    let mut units_total = 1usize;
    let mut units = 1usize;
    for _ in 1..config.layers {
        units = units.checked_mul(m).ok_or(Error::ConfigTooLarge)?;
        units_total = units_total.checked_add(units).ok_or(Error::ConfigTooLarge)?;
    }
    units_total.checked_mul(m + 1).ok_or(Error::ConfigTooLarge)
}

/// Flat 1-based index of a coordinate:
/// `pos + (unit - 1)(M + 1) + (M + 1)(M^(layer-1) - 1)/(M - 1)`.
pub fn coord_to_index(c: NodeCoord, config: &HierarchyConfig) -> Result<usize> {
    config.validate()?;
    let m = config.breadth as usize;
    if c.layer < 1 || c.layer > config.layers {
        return Err(Error::InvalidCoordinate);
    }
    if c.unit < 1 || c.unit > units_in_layer(m, c.layer)? {
        return Err(Error::InvalidCoordinate);
    }
    if c.pos < 1 || c.pos as usize > m + 1 {
        return Err(Error::InvalidCoordinate);
    }
    let offset = layer_offset(m, c.layer)?;
    let within = (c.unit - 1)
        .checked_mul(m + 1)
        .and_then(|x| x.checked_add(c.pos as usize))
        .ok_or(Error::ConfigTooLarge)?;
    offset.checked_add(within).ok_or(Error::ConfigTooLarge)
}

/// Inverse of [`coord_to_index`] on `1..=node_count(config)`.
pub fn index_to_coord(i: usize, config: &HierarchyConfig) -> Result<NodeCoord> {
    config.validate()?;
    let n = node_count(config)?;
    if i < 1 || i > n {
        return Err(Error::InvalidIndex);
    }
    let m = config.breadth as usize;
    let mut layer = 1u32;
    let mut offset = 0usize;
    let mut units = 1usize;
    // Walk down until i falls inside the current layer's index range.
    while i > offset + units * (m + 1) {
        offset += units * (m + 1);
        units *= m;
        layer += 1;
    }
    let r = i - offset - 1;
    Ok(NodeCoord {
        layer,
        unit: r / (m + 1) + 1,
        pos: (r % (m + 1) + 1) as u32,
    })
}

/// Builds the coupling matrix by enumerating each node's outgoing edges:
/// `M` in-unit edges plus exactly one downward edge (members) or upward
/// edge (leaders), with the boundary layers turning that edge into a
/// self-loop. Row sums are exactly one by construction.
pub fn build_weight_matrix(config: &HierarchyConfig) -> Result<WeightMatrix> {
    config.validate()?;
    let n = node_count(config)?;
    let m = config.breadth as usize;
    let mf = m as f64;
    let member_in = 1.0 / (mf + config.beta);
    let leader_in = 1.0 / (mf + config.alpha);
    let down = config.beta / (mf + config.beta);
    let up = config.alpha / (mf + config.alpha);

    let mut w = DMatrix::zeros(n, n);
    for i in 1..=n {
        let c = index_to_coord(i, config)?;
        let leader = c.is_leader(config);
        let in_unit = if leader { leader_in } else { member_in };
        let unit_base = i - c.pos as usize;
        for p in 1..=m + 1 {
            if p != c.pos as usize {
                w[(i - 1, unit_base + p - 1)] = in_unit;
            }
        }
        if leader {
            if c.layer == 1 {
                // The top leader has no layer above; its upward share loops back.
                w[(i - 1, i - 1)] = up;
            } else {
                let parent = NodeCoord {
                    layer: c.layer - 1,
                    unit: (c.unit - 1) / m + 1,
                    pos: ((c.unit - 1) % m + 1) as u32,
                };
                let j = coord_to_index(parent, config)?;
                w[(i - 1, j - 1)] = up;
            }
        } else if c.layer == config.layers {
            // Bottom members have no sub-unit; the downward share loops back.
            w[(i - 1, i - 1)] = down;
        } else {
            let child_leader = NodeCoord {
                layer: c.layer + 1,
                unit: m * (c.unit - 1) + c.pos as usize,
                pos: (m + 1) as u32,
            };
            let j = coord_to_index(child_leader, config)?;
            w[(i - 1, j - 1)] = down;
        }
    }
    Ok(WeightMatrix { n, entries: w, config: *config })
}

/// Builds the two-layer coupling matrix from its block decomposition: the
/// in-unit block `P`, the bottom self-loop block `Q`, and rank-one blocks
/// `E(x, i) = x/(M+x) e_i e_{M+1}^T` for the cross-layer edges. Agrees
/// entry-for-entry with [`build_weight_matrix`]; kept as an independent
/// construction for cross-checking.
pub fn build_weight_matrix_blockform(config: &HierarchyConfig) -> Result<WeightMatrix> {
    config.validate()?;
    if config.layers != 2 {
        return Err(Error::TwoLayersOnly);
    }
    let m = config.breadth as usize;
    let s = m + 1;
    let n = s * s;
    let mf = m as f64;

    // P: complete graph within one unit, member rows weighted 1/(M+beta),
    // the leader row 1/(M+alpha).
    let mut p = DMatrix::zeros(s, s);
    for r in 0..s {
        let weight = if r < m { 1.0 / (mf + config.beta) } else { 1.0 / (mf + config.alpha) };
        for c in 0..s {
            if r != c {
                p[(r, c)] = weight;
            }
        }
    }
    // Q: self-loops of the bottom members.
    let mut q = DMatrix::zeros(s, s);
    for r in 0..m {
        q[(r, r)] = config.beta / (mf + config.beta);
    }
    // E(x, i): a single entry x/(M+x) in row i, column M+1 (1-based).
    let e = |x: f64, i: usize| {
        let mut blk = DMatrix::zeros(s, s);
        blk[(i - 1, m)] = x / (mf + x);
        blk
    };

    let mut w = DMatrix::zeros(n, n);
    w.view_mut((0, 0), (s, s)).copy_from(&(&p + e(config.alpha, s)));
    for j in 1..=m {
        w.view_mut((0, j * s), (s, s)).copy_from(&e(config.beta, j));
        w.view_mut((j * s, 0), (s, s)).copy_from(&e(config.alpha, j).transpose());
        w.view_mut((j * s, j * s), (s, s)).copy_from(&(&p + &q));
    }
    Ok(WeightMatrix { n, entries: w, config: *config })
}
