//! Spanning-tree assignment and fundamental-loop analysis.
//!
//! The quantization pipeline needs a spanning tree in which every capacitor
//! and every transformer primary winding is a tree branch, while junctions,
//! inductors, nonreciprocal coupler ports, transformer secondary windings
//! and transmission-line ports are chords.  Each chord then defines one
//! fundamental loop through the tree, and the integer loop matrix `F`
//! collects them: entry `F[t][c]` is `+1` (`-1`) when tree branch `t` is
//! traversed along (against) its orientation on the unique tree path from
//! the tail of chord `c` to its head, and `0` when it is not on that path.
//!
//! With this sign convention the Kirchhoff laws read `F I_ch = -I_tr`
//! (currents positive along branch orientation) and
//! `F^T V_tr = V_ch + dPhi_ext/dt`.
//!
//! Tree selection is deterministic: capacitors enter the tree first, in
//! declaration order (a capacitor whose endpoints are already connected
//! closes a capacitor-only loop, which is rejected); the tree is then
//! completed breadth-first from the ground component using transformer
//! primary windings, scanning in branch-id order within each frontier pass.

use std::ops::Range;

use crate::error::NetlistError;
use crate::matrix::{IntMatrix, RealMatrix};
use crate::types::{BranchKind, CircuitNetlist};

/// Tree-side branch classes, in row order of the loop matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeClass {
    /// Capacitor branches (including expanded junction shunts).
    Capacitor,
    /// Transformer primary windings.
    TransformerPrimary,
}

/// Chord-side branch classes, in column order of the loop matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChordClass {
    /// Josephson tunnel elements.
    Junction,
    /// Inductors.
    Inductor,
    /// Gyrator and circulator ports.
    CouplerPort,
    /// Transformer secondary windings.
    TransformerSecondary,
    /// Transmission-line ports.
    TlPort,
}

const CHORD_CLASS_ORDER: [ChordClass; 5] = [
    ChordClass::Junction,
    ChordClass::Inductor,
    ChordClass::CouplerPort,
    ChordClass::TransformerSecondary,
    ChordClass::TlPort,
];

fn chord_class(kind: &BranchKind) -> Option<ChordClass> {
    match kind {
        BranchKind::Junction { .. } => Some(ChordClass::Junction),
        BranchKind::Inductor { .. } => Some(ChordClass::Inductor),
        BranchKind::CouplerPort { .. } => Some(ChordClass::CouplerPort),
        BranchKind::TransformerSecondary { .. } => Some(ChordClass::TransformerSecondary),
        BranchKind::TlPort { .. } => Some(ChordClass::TlPort),
        BranchKind::Capacitor { .. } | BranchKind::TransformerPrimary { .. } => None,
    }
}

/// Loop blocks relating capacitor tree branches to the chord classes after
/// transformer elimination.  Rows are capacitor tree branches; the
/// secondary-winding columns are gone, absorbed into the other blocks
/// through the turns matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveBlocks {
    /// Capacitor rows x junction chords (unchanged by elimination).
    pub f_cj: RealMatrix,
    /// Capacitor rows x inductor chords.
    pub f_cl: RealMatrix,
    /// Capacitor rows x coupler-port chords.
    pub f_cg: RealMatrix,
    /// Capacitor rows x transmission-line-port chords.
    pub f_cp: RealMatrix,
}

/// Spanning-tree partition and fundamental-loop matrix of a circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopStructure {
    /// Branch ids of tree branches: capacitors first (in id order), then
    /// transformer primary windings (in id order).
    pub tree: Vec<usize>,
    /// Branch ids of chord branches, grouped by [`ChordClass`] in the order
    /// junctions, inductors, coupler ports, secondary windings, line ports;
    /// id order within each class.
    pub chords: Vec<usize>,
    /// Number of leading tree rows that are capacitors.
    pub capacitor_rows: usize,
    /// Chord class of each column — see [`LoopStructure::chords`].
    pub chord_classes: Vec<ChordClass>,
    /// Fundamental loop matrix; rows follow [`LoopStructure::tree`], columns
    /// follow [`LoopStructure::chords`], entries are in `{-1, 0, 1}`.
    pub f: IntMatrix,
    /// Global turns matrix: one row per secondary winding (in column order
    /// of the secondary class), one column per primary winding (in row
    /// order of the primary tree section); block diagonal over transformers.
    pub turns: RealMatrix,
    /// External flux (weber) threading each chord's fundamental loop.
    pub external_flux: Vec<f64>,
    /// Effective capacitor-row blocks, set by [`eliminate_transformers`].
    pub effective: Option<EffectiveBlocks>,
}

impl LoopStructure {
    /// Row range of a tree class.
    pub fn tree_rows(&self, class: TreeClass) -> Range<usize> {
        match class {
            TreeClass::Capacitor => 0..self.capacitor_rows,
            TreeClass::TransformerPrimary => self.capacitor_rows..self.tree.len(),
        }
    }

    /// Column range of a chord class.
    pub fn chord_cols(&self, class: ChordClass) -> Range<usize> {
        let start = self
            .chord_classes
            .iter()
            .position(|&c| c == class)
            .unwrap_or(self.chord_classes.len());
        let len = self
            .chord_classes
            .iter()
            .filter(|&&c| c == class)
            .count();
        start..start + len
    }

    /// The integer loop sub-block for a tree class and a chord class.
    pub fn f_block(&self, rows: TreeClass, cols: ChordClass) -> IntMatrix {
        self.f.submatrix(self.tree_rows(rows), self.chord_cols(cols))
    }
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Build the deterministic spanning tree and fundamental-loop matrix of a
/// circuit.
///
/// The tree contains every capacitor and every transformer primary winding;
/// all other branches are chords.  The returned matrix satisfies the current
/// law `F I_ch = -I_tr` exactly, which is re-verified internally on unit
/// chord currents before returning.
///
/// # Errors
///
/// [`NetlistError::Disconnected`] when the circuit multigraph has no path
/// from some node to ground; [`NetlistError::NoValidTree`] when a
/// capacitor-only loop exists, a node has no capacitive/primary-winding path
/// to ground, a primary winding would close a tree loop, or a junction's
/// loop is not a single parallel capacitor.
pub fn build_loop_structure(net: &CircuitNetlist) -> Result<LoopStructure, NetlistError> {
    let n_nodes = net.nodes.len();

    // Whole-multigraph connectivity (chords included).
    let mut conn = DisjointSet::new(n_nodes);
    for b in &net.branches {
        conn.union(b.from, b.to);
    }
    let ground_root = conn.find(net.ground);
    for node in 0..n_nodes {
        if conn.find(node) != ground_root {
            return Err(NetlistError::Disconnected {
                node: net.nodes[node].clone(),
            });
        }
    }

    // Phase 1: capacitors in declaration order.
    let mut ds = DisjointSet::new(n_nodes);
    let mut tree: Vec<usize> = Vec::new();
    for b in &net.branches {
        if let BranchKind::Capacitor { .. } = b.kind {
            if !ds.union(b.from, b.to) {
                return Err(NetlistError::NoValidTree {
                    reason: format!(
                        "capacitor-only loop: capacitor branch {} ({}-{}) closes a loop \
                         of capacitors",
                        b.id,
                        net.node_name(b.from),
                        net.node_name(b.to)
                    ),
                });
            }
            tree.push(b.id);
        }
    }
    let capacitor_rows = tree.len();

    // Phase 2: breadth-first completion from the ground component with
    // transformer primary windings, id order within each frontier pass.
    let primaries: Vec<usize> = net
        .branches
        .iter()
        .filter(|b| matches!(b.kind, BranchKind::TransformerPrimary { .. }))
        .map(|b| b.id)
        .collect();
    let mut used = vec![false; primaries.len()];
    loop {
        let mut changed = false;
        for (k, &id) in primaries.iter().enumerate() {
            if used[k] {
                continue;
            }
            let b = &net.branches[id];
            let (ra, rb) = (ds.find(b.from), ds.find(b.to));
            let rg = ds.find(net.ground);
            if ra != rb && (ra == rg || rb == rg) {
                ds.union(b.from, b.to);
                tree.push(id);
                used[k] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for node in 0..n_nodes {
        if ds.find(node) != ds.find(net.ground) {
            return Err(NetlistError::NoValidTree {
                reason: format!(
                    "node `{}` has no capacitive or transformer-primary path to ground",
                    net.node_name(node)
                ),
            });
        }
    }
    if let Some(k) = used.iter().position(|&u| !u) {
        let b = &net.branches[primaries[k]];
        return Err(NetlistError::NoValidTree {
            reason: format!(
                "transformer primary winding branch {} ({}-{}) would close a loop among \
                 capacitors and primary windings",
                b.id,
                net.node_name(b.from),
                net.node_name(b.to)
            ),
        });
    }
    // Keep row order deterministic: capacitors (already in id order) then
    // primaries in id order, regardless of the frontier order that added
    // them.
    tree[capacitor_rows..].sort_unstable();

    // Chords, grouped by class in id order.
    let mut chords: Vec<usize> = Vec::new();
    let mut chord_classes: Vec<ChordClass> = Vec::new();
    for class in CHORD_CLASS_ORDER {
        for b in &net.branches {
            if chord_class(&b.kind) == Some(class) {
                chords.push(b.id);
                chord_classes.push(class);
            }
        }
    }

    // Rooted-tree arrays for path walks: parent node, connecting branch and
    // the sign of traversing that branch child -> parent.
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_nodes]; // (branch, other)
    for &id in &tree {
        let b = &net.branches[id];
        adjacency[b.from].push((id, b.to));
        adjacency[b.to].push((id, b.from));
    }
    let mut parent = vec![usize::MAX; n_nodes];
    let mut parent_branch = vec![usize::MAX; n_nodes];
    let mut depth = vec![0usize; n_nodes];
    let mut order = vec![net.ground];
    parent[net.ground] = net.ground;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &(id, v) in &adjacency[u] {
            if parent[v] == usize::MAX {
                parent[v] = u;
                parent_branch[v] = id;
                depth[v] = depth[u] + 1;
                order.push(v);
            }
        }
    }

    let row_of: Vec<usize> = {
        let mut map = vec![usize::MAX; net.branches.len()];
        for (row, &id) in tree.iter().enumerate() {
            map[id] = row;
        }
        map
    };

    // Sign of traversing tree branch `id` while stepping from node `x` to
    // parent(x): +1 when that step runs tail -> head.
    let step_sign = |id: usize, x: usize| -> i8 {
        let b = &net.branches[id];
        if b.tail() == x {
            1
        } else {
            -1
        }
    };

    let mut f = IntMatrix::zeros(tree.len(), chords.len());
    for (col, &cid) in chords.iter().enumerate() {
        let cb = &net.branches[cid];
        let (mut u, mut v) = (cb.tail(), cb.head());
        // Climb to the least common ancestor, filling signs: the u side is
        // walked tail -> LCA (child-to-parent steps as-is), the v side is
        // walked LCA -> head (child-to-parent steps reversed).
        while depth[u] > depth[v] {
            f.set(row_of[parent_branch[u]], col, step_sign(parent_branch[u], u));
            u = parent[u];
        }
        while depth[v] > depth[u] {
            f.set(row_of[parent_branch[v]], col, -step_sign(parent_branch[v], v));
            v = parent[v];
        }
        while u != v {
            f.set(row_of[parent_branch[u]], col, step_sign(parent_branch[u], u));
            f.set(row_of[parent_branch[v]], col, -step_sign(parent_branch[v], v));
            u = parent[u];
            v = parent[v];
        }
    }

    // Junction loops must be a single parallel capacitor.
    for (col, &cid) in chords.iter().enumerate() {
        if chord_classes[col] != ChordClass::Junction {
            continue;
        }
        let on_path: Vec<usize> = (0..tree.len()).filter(|&r| f.at(r, col) != 0).collect();
        let single_capacitor =
            on_path.len() == 1 && on_path[0] < capacitor_rows;
        if !single_capacitor {
            let b = &net.branches[cid];
            return Err(NetlistError::NoValidTree {
                reason: format!(
                    "junction branch {} ({}-{}) lacks a parallel capacitance",
                    b.id,
                    net.node_name(b.from),
                    net.node_name(b.to)
                ),
            });
        }
    }

    // Global turns matrix, block diagonal over transformers.
    let n_primary = tree.len() - capacitor_rows;
    let n_secondary = chord_classes
        .iter()
        .filter(|&&c| c == ChordClass::TransformerSecondary)
        .count();
    let mut turns = RealMatrix::zeros(n_secondary, n_primary);
    {
        let (mut row0, mut col0) = (0, 0);
        for t in &net.transformers {
            for (i, row) in t.turns.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    turns.set(row0 + i, col0 + j, v);
                }
            }
            row0 += t.secondary_branches.len();
            col0 += t.primary_branches.len();
        }
    }

    let external_flux = chords
        .iter()
        .map(|&id| net.branches[id].phi_ext)
        .collect();

    let ls = LoopStructure {
        tree,
        chords,
        capacitor_rows,
        chord_classes,
        f,
        turns,
        external_flux,
        effective: None,
    };

    // Self-check the current law on unit chord currents.
    for col in 0..ls.chords.len() {
        let mut currents = vec![0i64; ls.chords.len()];
        currents[col] = 1;
        assert!(
            verify_current_law(net, &ls, &currents),
            "internal error: loop matrix violates the current law on chord {}",
            ls.chords[col]
        );
    }

    Ok(ls)
}

/// Check Kirchhoff's current law for a chord current assignment.
///
/// Tree currents are taken as `I_tr = -F I_ch`; the function then verifies,
/// in exact integer arithmetic, that the net current at every node is zero
/// (currents positive along branch orientation).
pub fn verify_current_law(
    net: &CircuitNetlist,
    ls: &LoopStructure,
    chord_currents: &[i64],
) -> bool {
    assert_eq!(
        chord_currents.len(),
        ls.chords.len(),
        "one current per chord required"
    );
    let mut node_balance = vec![0i64; net.nodes.len()];
    let mut add = |branch_id: usize, current: i64| {
        let b = &net.branches[branch_id];
        node_balance[b.tail()] -= current;
        node_balance[b.head()] += current;
    };
    for (row, &tid) in ls.tree.iter().enumerate() {
        let mut tree_current = 0i64;
        for (col, &i_ch) in chord_currents.iter().enumerate() {
            tree_current -= i64::from(ls.f.at(row, col)) * i_ch;
        }
        add(tid, tree_current);
    }
    for (col, &cid) in ls.chords.iter().enumerate() {
        add(cid, chord_currents[col]);
    }
    node_balance.iter().all(|&b| b == 0)
}

/// Eliminate transformer windings from the loop structure.
///
/// Requires that no secondary-winding loop passes through a primary winding
/// (the primary/secondary block of the loop matrix is zero).  The secondary
/// columns are then absorbed: for each chord class `X` the effective block
/// is `F_CX + F_CS * N * F_PX`, with `F_CS` the capacitor/secondary block,
/// `N` the global turns matrix and `F_PX` the primary-row block of class
/// `X`.  The result keeps only capacitor rows, junction, inductor,
/// coupler-port and line-port columns; these are the loop blocks entering
/// the circuit matrices.
///
/// Without transformers this is the identity on the capacitor-row blocks.
///
/// # Errors
///
/// [`NetlistError::TransformerLoop`] when a primary winding lies in the
/// fundamental loop of a secondary winding.
pub fn eliminate_transformers(mut ls: LoopStructure) -> Result<LoopStructure, NetlistError> {
    let prim_rows = ls.tree_rows(TreeClass::TransformerPrimary);
    let sec_cols = ls.chord_cols(ChordClass::TransformerSecondary);
    for r in prim_rows.clone() {
        for c in sec_cols.clone() {
            if ls.f.at(r, c) != 0 {
                return Err(NetlistError::TransformerLoop {
                    primary_branch: ls.tree[r],
                    secondary_branch: ls.chords[c],
                });
            }
        }
    }

    let cap = TreeClass::Capacitor;
    let prim = TreeClass::TransformerPrimary;
    let f_cs = ls.f_block(cap, ChordClass::TransformerSecondary).to_real();
    let fold = |class: ChordClass, ls: &LoopStructure| -> RealMatrix {
        let direct = ls.f_block(cap, class).to_real();
        let through = f_cs.mul(&ls.turns).mul(&ls.f_block(prim, class).to_real());
        direct.add(&through)
    };

    let effective = EffectiveBlocks {
        f_cj: ls.f_block(cap, ChordClass::Junction).to_real(),
        f_cl: fold(ChordClass::Inductor, &ls),
        f_cg: fold(ChordClass::CouplerPort, &ls),
        f_cp: fold(ChordClass::TlPort, &ls),
    };
    ls.effective = Some(effective);
    Ok(ls)
}
