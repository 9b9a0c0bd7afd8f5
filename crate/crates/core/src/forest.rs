//! Twins of size at least `ceil(n/2) - 1` in every forest.
//!
//! The construction goes through *good twins*: a partial 2-colouring
//! `(A, B)` that is a twin pair and whose uncoloured vertices hang off at most
//! two exceptional vertices of `A` in a controlled way. Good twins are built by
//! peeling leaves: pick `u` adjacent to a leaf and to at most one non-leaf,
//! delete its leaves, solve the smaller forest, then restore the leaves and
//! repair the colouring with one of a fixed set of cases. The repairs are
//! compositions of (re)colourings and `(x, y)`-moves, which hand equally many
//! uncoloured leaves of `x` and of `y` to the opposite sides.
//!
//! The assembly then colours all but at most two vertices.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{canonical, check_twins, Graph, TwinPair, Violation};

/// Forests above this order are verified only once at the end of the
/// recursion instead of after every frame.
pub const FRAME_CHECK_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodTwinColoring {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl GoodTwinColoring {
    pub fn new(a: &[usize], b: &[usize]) -> Self {
        GoodTwinColoring { a: canonical(a), b: canonical(b) }
    }

    fn sides(&self, n: usize) -> Vec<Option<Side>> {
        let mut color = vec![None; n];
        for &v in self.a.iter().filter(|&&v| v < n) {
            color[v] = Some(Side::A);
        }
        for &v in self.b.iter().filter(|&&v| v < n) {
            color[v] = Some(Side::B);
        }
        color
    }

    pub fn uncolored(&self, g: &Graph) -> Vec<usize> {
        let color = self.sides(g.n());
        (0..g.n()).filter(|&v| color[v].is_none()).collect()
    }

    /// `L(v)`: the uncoloured neighbours of `v`.
    pub fn uncolored_neighbors(&self, g: &Graph, v: usize) -> Vec<usize> {
        let color = self.sides(g.n());
        g.neighbors(v).iter().copied().filter(|&w| color[w].is_none()).collect()
    }

    /// Coloured vertices with at least one uncoloured neighbour.
    pub fn exceptional(&self, g: &Graph) -> Vec<usize> {
        let color = self.sides(g.n());
        (0..g.n())
            .filter(|&v| color[v].is_some() && g.neighbors(v).iter().any(|&w| color[w].is_none()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub x: usize,
    pub y: usize,
    /// `L'(y)`, coloured like `x`.
    pub moved_to_x_side: Vec<usize>,
    /// `L'(x)`, coloured like `y`.
    pub moved_to_y_side: Vec<usize>,
}

/// One atomic change of the colouring. Every step leaves a twin pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    /// Colour previously uncoloured vertices.
    Color { to_a: Vec<usize>, to_b: Vec<usize> },
    /// Move a leaf of the coloured graph to the other side and compensate
    /// with newly coloured vertices on the side it left.
    Recolor { vertex: usize, to: Side, compensation: Vec<usize> },
    /// Exchange the sides of two coloured vertices.
    SwapColors { u: usize, v: usize },
    Move(MoveRecord),
    /// Exchange the names of the two sides.
    Flip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "1")]
    Case1,
    #[serde(rename = "2.1")]
    Case2_1,
    #[serde(rename = "2.2")]
    Case2_2,
    /// Already good; nothing to do.
    #[serde(rename = "2.3-good")]
    Case2_3Good,
    #[serde(rename = "2.3")]
    Case2_3,
    /// Roles of `u` and `w` exchanged before recolouring.
    #[serde(rename = "2.3-swapped")]
    Case2_3Swapped,
    #[serde(rename = "3.1.a")]
    Case3_1a,
    #[serde(rename = "3.1.b")]
    Case3_1b,
    /// `u` hangs off `w`, which already has another neighbour in `A`;
    /// a single `(w, u)`-move suffices.
    #[serde(rename = "3.1.b*-move")]
    Case3_1bRepairMove,
    /// As above, but `v` is recoloured first and both `u` and `v` are
    /// saturated from `w`.
    #[serde(rename = "3.1.b*-recolor")]
    Case3_1bRepairRecolor,
    #[serde(rename = "3.2.a-moves")]
    Case3_2aMoves,
    #[serde(rename = "3.2.a-recolor")]
    Case3_2aRecolor,
    #[serde(rename = "3.2.b")]
    Case3_2b,
    #[serde(rename = "3.3.a")]
    Case3_3a,
    #[serde(rename = "3.3.b")]
    Case3_3b,
    #[serde(rename = "3.4")]
    Case3_4,
    #[serde(rename = "3.4-swapped")]
    Case3_4Swapped,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json_free_label(*self);
        f.write_str(s)
    }
}

fn serde_json_free_label(c: CaseLabel) -> &'static str {
    use CaseLabel::*;
    match c {
        Case1 => "1",
        Case2_1 => "2.1",
        Case2_2 => "2.2",
        Case2_3Good => "2.3-good",
        Case2_3 => "2.3",
        Case2_3Swapped => "2.3-swapped",
        Case3_1a => "3.1.a",
        Case3_1b => "3.1.b",
        Case3_1bRepairMove => "3.1.b*-move",
        Case3_1bRepairRecolor => "3.1.b*-recolor",
        Case3_2aMoves => "3.2.a-moves",
        Case3_2aRecolor => "3.2.a-recolor",
        Case3_2b => "3.2.b",
        Case3_3a => "3.3.a",
        Case3_3b => "3.3.b",
        Case3_4 => "3.4",
        Case3_4Swapped => "3.4-swapped",
    }
}

/// One level of the recursion: `u`, the leaves deleted below it, and the
/// repair applied after they were restored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub u: usize,
    pub removed_leaves: Vec<usize>,
    pub case: CaseLabel,
    pub steps: Vec<Step>,
}

/// Frames in the order they are applied, innermost first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodTwinsTrace {
    pub frames: Vec<Frame>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "bullet", rename_all = "kebab-case")]
pub enum GoodTwinViolation {
    UncoloredDegree { vertex: usize, degree: usize },
    IsolatedColored { vertex: usize },
    ExceptionalOutsideA { vertex: usize },
    TooManyExceptional { count: usize },
    ExceptionalShape { leaves: usize, non_leaves: usize },
    NonLeafANeighbors { vertex: usize, count: usize },
    LeafNotSmaller { leaf: usize, non_leaf: usize, leaf_count: usize, non_leaf_count: usize },
    NotTwins { violations: Vec<Violation> },
}

/// Working colouring of the forest restricted to its `alive` vertices.
struct State<'g> {
    g: &'g Graph,
    alive: Vec<bool>,
    color: Vec<Option<Side>>,
    size: [usize; 2],
    edges: [usize; 2],
    steps: Vec<Step>,
}

fn idx(s: Side) -> usize {
    match s {
        Side::A => 0,
        Side::B => 1,
    }
}

impl<'g> State<'g> {
    fn new(g: &'g Graph, alive: Vec<bool>) -> Self {
        State { g, alive, color: vec![None; g.n()], size: [0, 0], edges: [0, 0], steps: Vec::new() }
    }

    fn from_coloring(g: &'g Graph, coloring: &GoodTwinColoring) -> Self {
        let mut st = State::new(g, vec![true; g.n()]);
        for &v in &coloring.a {
            st.set(v, Some(Side::A));
        }
        for &v in &coloring.b {
            st.set(v, Some(Side::B));
        }
        st
    }

    fn coloring(&self) -> GoodTwinColoring {
        let pick = |s: Side| (0..self.g.n()).filter(|&v| self.color[v] == Some(s)).collect();
        GoodTwinColoring { a: pick(Side::A), b: pick(Side::B) }
    }

    fn nbrs(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.g.neighbors(v).iter().copied().filter(move |&w| self.alive[w])
    }

    fn degree(&self, v: usize) -> usize {
        self.nbrs(v).count()
    }

    /// `L(v)` in ascending order.
    fn free(&self, v: usize) -> Vec<usize> {
        self.nbrs(v).filter(|&w| self.color[w].is_none()).collect()
    }

    fn colored_degree(&self, v: usize) -> usize {
        self.nbrs(v).filter(|&w| self.color[w].is_some()).count()
    }

    fn side_degree(&self, v: usize, s: Side) -> usize {
        self.nbrs(v).filter(|&w| self.color[w] == Some(s)).count()
    }

    fn exceptional(&self) -> Vec<usize> {
        (0..self.g.n())
            .filter(|&v| self.alive[v] && self.color[v].is_some() && self.nbrs(v).any(|w| self.color[w].is_none()))
            .collect()
    }

    /// Changes one colour, keeping sizes and induced edge counts current.
    fn set(&mut self, v: usize, c: Option<Side>) {
        if let Some(old) = self.color[v] {
            self.size[idx(old)] -= 1;
            self.edges[idx(old)] -= self.side_degree(v, old);
        }
        self.color[v] = c;
        if let Some(new) = c {
            self.size[idx(new)] += 1;
            self.edges[idx(new)] += self.side_degree(v, new);
        }
    }

    fn is_twins(&self) -> bool {
        self.size[0] == self.size[1] && self.edges[0] == self.edges[1]
    }

    fn commit(&mut self, step: Step, what: &str) -> Result<()> {
        self.steps.push(step);
        if !self.is_twins() {
            return Err(Error::Internal(format!(
                "{what}: sides are not twins (sizes {:?}, edges {:?})",
                self.size, self.edges
            )));
        }
        Ok(())
    }

    fn color_step(&mut self, to_a: &[usize], to_b: &[usize], what: &str) -> Result<()> {
        for &v in to_a {
            self.set(v, Some(Side::A));
        }
        for &v in to_b {
            self.set(v, Some(Side::B));
        }
        self.commit(Step::Color { to_a: to_a.to_vec(), to_b: to_b.to_vec() }, what)
    }

    /// Moves `vertex` from `A` to `B` and colours `compensation` with `A`.
    fn recolor_step(&mut self, vertex: usize, compensation: &[usize], what: &str) -> Result<()> {
        if self.color[vertex] != Some(Side::A) || self.colored_degree(vertex) != 1 {
            return Err(Error::Internal(format!("{what}: recoloured vertex {vertex} is not a leaf in A")));
        }
        self.set(vertex, Some(Side::B));
        for &v in compensation {
            self.set(v, Some(Side::A));
        }
        self.commit(Step::Recolor { vertex, to: Side::B, compensation: compensation.to_vec() }, what)
    }

    fn swap_step(&mut self, u: usize, v: usize, what: &str) -> Result<()> {
        let (cu, cv) = (self.color[u], self.color[v]);
        self.set(u, cv);
        self.set(v, cu);
        self.commit(Step::SwapColors { u, v }, what)
    }

    fn flip(&mut self) {
        for c in self.color.iter_mut().flatten() {
            *c = c.other();
        }
        self.size.swap(0, 1);
        self.edges.swap(0, 1);
        self.steps.push(Step::Flip);
    }

    fn do_move(&mut self, x: usize, y: usize, what: &str) -> Result<MoveRecord> {
        let (Some(cx), Some(cy)) = (self.color[x], self.color[y]) else {
            return Err(Error::Internal(format!("{what}: move between uncoloured vertices {x}, {y}")));
        };
        if cx == cy {
            return Err(Error::Internal(format!("{what}: move endpoints {x}, {y} on the same side")));
        }
        let (lx, ly) = (self.free(x), self.free(y));
        if lx.iter().any(|v| ly.contains(v)) {
            return Err(Error::Internal(format!("{what}: L({x}) and L({y}) overlap")));
        }
        if let Some(&bad) = lx.iter().chain(&ly).find(|&&v| self.degree(v) != 1) {
            return Err(Error::Internal(format!("{what}: uncoloured neighbour {bad} is not a leaf")));
        }
        let k = lx.len().min(ly.len());
        let owners_before = self.exceptional().len();
        for &v in &ly[..k] {
            self.set(v, Some(cx));
        }
        for &v in &lx[..k] {
            self.set(v, Some(cy));
        }
        let rec = MoveRecord { x, y, moved_to_x_side: ly[..k].to_vec(), moved_to_y_side: lx[..k].to_vec() };
        self.commit(Step::Move(rec.clone()), what)?;
        if k > 0 && self.exceptional().len() >= owners_before {
            return Err(Error::Internal(format!("{what}: move ({x}, {y}) did not saturate either endpoint")));
        }
        Ok(rec)
    }

    /// Makes the exceptional set lie in `A` when it lies entirely in `B`.
    fn orient(&mut self) {
        let s = self.exceptional();
        if !s.is_empty() && s.iter().all(|&v| self.color[v] == Some(Side::B)) {
            self.flip();
        }
    }

    fn violations(&self) -> Vec<GoodTwinViolation> {
        let mut out = Vec::new();
        let n = self.g.n();
        for v in (0..n).filter(|&v| self.alive[v]) {
            match self.color[v] {
                None if self.degree(v) > 1 => {
                    out.push(GoodTwinViolation::UncoloredDegree { vertex: v, degree: self.degree(v) })
                }
                Some(_) if self.colored_degree(v) == 0 => out.push(GoodTwinViolation::IsolatedColored { vertex: v }),
                _ => {}
            }
        }
        let s = self.exceptional();
        for &v in &s {
            if self.color[v] != Some(Side::A) {
                out.push(GoodTwinViolation::ExceptionalOutsideA { vertex: v });
            }
        }
        if s.len() > 2 {
            out.push(GoodTwinViolation::TooManyExceptional { count: s.len() });
        }
        let (leaves, non_leaves): (Vec<usize>, Vec<usize>) = s.iter().partition(|&&v| self.colored_degree(v) <= 1);
        if leaves.len() > 1 || non_leaves.len() > 1 {
            out.push(GoodTwinViolation::ExceptionalShape { leaves: leaves.len(), non_leaves: non_leaves.len() });
        }
        if let Some(&w) = non_leaves.first() {
            let count = self.side_degree(w, Side::A);
            if count > 1 {
                out.push(GoodTwinViolation::NonLeafANeighbors { vertex: w, count });
            }
            if let Some(&v) = leaves.first() {
                let (lv, lw) = (self.free(v).len(), self.free(w).len());
                if lv >= lw {
                    out.push(GoodTwinViolation::LeafNotSmaller { leaf: v, non_leaf: w, leaf_count: lv, non_leaf_count: lw });
                }
            }
        }
        if !self.is_twins() {
            let c = self.coloring();
            out.push(GoodTwinViolation::NotTwins { violations: check_twins(self.g, &c.a, &c.b).violations });
        }
        out
    }
}

/// Every violated good-twins condition of `coloring` in the forest `f`.
pub fn is_good(f: &Graph, coloring: &GoodTwinColoring) -> Vec<GoodTwinViolation> {
    let check = check_twins(f, &coloring.a, &coloring.b);
    if check.violations.contains(&Violation::Overlap) || check.violations.contains(&Violation::OutOfRange) {
        return vec![GoodTwinViolation::NotTwins { violations: check.violations }];
    }
    State::from_coloring(f, coloring).violations()
}

/// A single `(x, y)`-move on a colouring of `g`: `min(|L(x)|, |L(y)|)` of the
/// lowest-index uncoloured neighbours of each endpoint join the other side.
pub fn xy_move(g: &Graph, coloring: &GoodTwinColoring, x: usize, y: usize) -> Result<(GoodTwinColoring, MoveRecord)> {
    let mut st = State::from_coloring(g, coloring);
    let (Some(cx), Some(cy)) = (st.color.get(x).copied().flatten(), st.color.get(y).copied().flatten()) else {
        return Err(Error::Precondition(format!("move endpoints {x}, {y} must both be coloured")));
    };
    if cx == cy {
        return Err(Error::Precondition(format!("move endpoints {x}, {y} are on the same side")));
    }
    let (lx, ly) = (st.free(x), st.free(y));
    if let Some(v) = lx.iter().find(|v| ly.contains(v)) {
        return Err(Error::Precondition(format!("L({x}) and L({y}) share vertex {v}")));
    }
    let k = lx.len().min(ly.len());
    for &v in &ly[..k] {
        st.set(v, Some(cx));
    }
    for &v in &lx[..k] {
        st.set(v, Some(cy));
    }
    let rec = MoveRecord { x, y, moved_to_x_side: ly[..k].to_vec(), moved_to_y_side: lx[..k].to_vec() };
    Ok((st.coloring(), rec))
}

/// Lowest-index alive vertex adjacent to a leaf and to at most one non-leaf.
fn pick_u(st: &State) -> Option<usize> {
    (0..st.g.n()).find(|&v| {
        if !st.alive[v] {
            return false;
        }
        let (mut leaves, mut others) = (0, 0);
        for w in st.nbrs(v) {
            if st.degree(w) == 1 {
                leaves += 1;
            } else {
                others += 1;
            }
        }
        leaves >= 1 && others <= 1
    })
}

fn first(list: &[usize], what: &str) -> Result<usize> {
    list.first().copied().ok_or_else(|| Error::Internal(format!("{what}: expected an uncoloured neighbour")))
}

fn case_two(st: &mut State, u: usize, w: usize) -> Result<CaseLabel> {
    match st.color[u] {
        Some(Side::B) => {
            st.do_move(w, u, "2.1")?;
            Ok(CaseLabel::Case2_1)
        }
        None => {
            let x = first(&st.free(u), "2.2")?;
            st.color_step(&[x], &[u], "2.2")?;
            st.do_move(w, u, "2.2")?;
            Ok(CaseLabel::Case2_2)
        }
        Some(Side::A) => {
            let (lu, lw) = (st.free(u).len(), st.free(w).len());
            let w_is_leaf = st.colored_degree(w) == 1;
            if lw > lu && !w_is_leaf {
                return Ok(CaseLabel::Case2_3Good);
            }
            // `q` is recoloured, `p` keeps its side.
            let (p, q, label) = if lw > lu { (u, w, CaseLabel::Case2_3Swapped) } else { (w, u, CaseLabel::Case2_3) };
            let what = serde_json_free_label(label);
            let x = first(&st.free(p), what)?;
            let y = first(&st.free(q), what)?;
            st.recolor_step(q, &[x, y], what)?;
            st.do_move(p, q, what)?;
            Ok(label)
        }
    }
}

fn case_three(st: &mut State, u: usize, s: &[usize]) -> Result<CaseLabel> {
    let (v, w) = match (st.colored_degree(s[0]) == 1, st.colored_degree(s[1]) == 1) {
        (true, false) => (s[0], s[1]),
        (false, true) => (s[1], s[0]),
        _ => return Err(Error::Internal(format!("case 3: exceptional set {s:?} is not one leaf and one non-leaf"))),
    };
    let (lu, lv, lw) = (st.free(u).len(), st.free(v).len(), st.free(w).len());
    match st.color[u] {
        Some(Side::B) => {
            if lu >= lv {
                st.do_move(v, u, "3.1.a")?;
                st.do_move(w, u, "3.1.a")?;
                return Ok(CaseLabel::Case3_1a);
            }
            let crowded = st.g.has_edge(u, w) && st.nbrs(w).any(|t| t != v && st.color[t] == Some(Side::A));
            if !crowded {
                st.swap_step(u, v, "3.1.b")?;
                st.do_move(u, v, "3.1.b")?;
                st.do_move(w, v, "3.1.b")?;
                return Ok(CaseLabel::Case3_1b);
            }
            if lw > lu + lv {
                st.do_move(w, u, "3.1.b*")?;
                return Ok(CaseLabel::Case3_1bRepairMove);
            }
            let y = if lu >= 2 { first(&st.free(u), "3.1.b*")? } else { first(&st.free(v), "3.1.b*")? };
            let z = first(&st.free(w), "3.1.b*")?;
            st.recolor_step(v, &[y, z], "3.1.b*")?;
            st.do_move(w, u, "3.1.b*")?;
            st.do_move(w, v, "3.1.b*")?;
            Ok(CaseLabel::Case3_1bRepairRecolor)
        }
        None if st.free(v).contains(&u) => {
            let x = first(&st.free(u), "3.3")?;
            if lv <= lu {
                st.color_step(&[x], &[u], "3.3.a")?;
                st.do_move(v, u, "3.3.a")?;
                st.do_move(w, u, "3.3.a")?;
                Ok(CaseLabel::Case3_3a)
            } else {
                st.recolor_step(v, &[u, x], "3.3.b")?;
                st.do_move(u, v, "3.3.b")?;
                st.do_move(w, v, "3.3.b")?;
                Ok(CaseLabel::Case3_3b)
            }
        }
        None => {
            // `u` hangs off `w` or was isolated; sizes are taken after colouring it.
            let x = first(&st.free(u), "3.2")?;
            st.color_step(&[x], &[u], "3.2")?;
            let (lu, lv, lw) = (st.free(u).len(), st.free(v).len(), st.free(w).len());
            if lw > lu + lv {
                st.do_move(w, u, "3.2.b")?;
                Ok(CaseLabel::Case3_2b)
            } else if lw < lu {
                st.do_move(w, u, "3.2.a")?;
                st.do_move(v, u, "3.2.a")?;
                Ok(CaseLabel::Case3_2aMoves)
            } else {
                let y = if lu >= 1 { first(&st.free(u), "3.2.a")? } else { first(&st.free(v), "3.2.a")? };
                let z = first(&st.free(w), "3.2.a")?;
                st.recolor_step(v, &[y, z], "3.2.a")?;
                st.do_move(w, u, "3.2.a")?;
                st.do_move(w, v, "3.2.a")?;
                Ok(CaseLabel::Case3_2aRecolor)
            }
        }
        Some(Side::A) => {
            let (p, q, label) = if lu >= lv { (u, v, CaseLabel::Case3_4) } else { (v, u, CaseLabel::Case3_4Swapped) };
            let x = first(&st.free(p), "3.4")?;
            let y = first(&st.free(q), "3.4")?;
            st.recolor_step(p, &[x, y], "3.4")?;
            st.do_move(q, p, "3.4")?;
            st.do_move(w, p, "3.4")?;
            Ok(label)
        }
    }
}

fn apply_frame(st: &mut State, u: usize) -> Result<CaseLabel> {
    let s: Vec<usize> = st.exceptional().into_iter().filter(|&v| v != u).collect();
    if let Some(&bad) = s.iter().find(|&&v| st.color[v] != Some(Side::A)) {
        return Err(Error::Internal(format!("exceptional vertex {bad} is not in A before repairing at {u}")));
    }
    let label = match s.len() {
        0 => {
            if st.color[u].is_none() {
                let x = first(&st.free(u), "1")?;
                st.color_step(&[u], &[x], "1")?;
            }
            CaseLabel::Case1
        }
        1 => case_two(st, u, s[0])?,
        2 => case_three(st, u, &s)?,
        k => return Err(Error::Internal(format!("{k} exceptional vertices before repairing at {u}"))),
    };
    st.orient();
    Ok(label)
}

/// Good twins of the forest `f`, with the full repair trace.
pub fn good_twins(f: &Graph) -> Result<(GoodTwinColoring, GoodTwinsTrace)> {
    if !f.is_forest() {
        return Err(Error::NotAForest);
    }
    let n = f.n();
    let mut st = State::new(f, vec![true; n]);
    let mut stack: Vec<(usize, Vec<usize>)> = Vec::new();
    while let Some(u) = pick_u(&st) {
        let leaves: Vec<usize> = st.nbrs(u).filter(|&w| st.degree(w) == 1).collect();
        for &l in &leaves {
            st.alive[l] = false;
        }
        stack.push((u, leaves));
    }
    if st.alive.iter().enumerate().any(|(v, &a)| a && st.degree(v) > 0) {
        return Err(Error::Internal("leaf peeling stopped while edges remain".into()));
    }

    let check_frames = n <= FRAME_CHECK_LIMIT;
    let mut frames = Vec::with_capacity(stack.len());
    while let Some((u, leaves)) = stack.pop() {
        for &l in &leaves {
            st.alive[l] = true;
        }
        let case = apply_frame(&mut st, u)?;
        if check_frames {
            let bad = st.violations();
            if !bad.is_empty() {
                return Err(Error::Internal(format!("case {case} at u = {u} left a bad colouring: {bad:?}")));
            }
        }
        frames.push(Frame { u, removed_leaves: leaves, case, steps: std::mem::take(&mut st.steps) });
    }
    let bad = st.violations();
    if !bad.is_empty() {
        return Err(Error::Internal(format!("final colouring is not good: {bad:?}")));
    }
    Ok((st.coloring(), GoodTwinsTrace { frames }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssemblyCase {
    /// No uncoloured leaves: only isolated vertices remain.
    Isolated,
    /// One exceptional vertex, with no neighbour in `A`; it is uncoloured.
    UncolorFree,
    /// One exceptional vertex with a neighbour in `A`; it is uncoloured and
    /// a vertex of `B` with one coloured neighbour moves to `A`.
    UncolorShift,
    /// As above, but no such vertex exists; a degree-matched exchange
    /// restores the balance instead.
    UncolorExchange,
    /// Two exceptional vertices.
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyTrace {
    pub isolated_edges: Vec<(usize, usize)>,
    pub good_twins: GoodTwinColoring,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub s3: Vec<usize>,
    pub v: Option<usize>,
    pub w: Option<usize>,
    pub case_taken: AssemblyCase,
    /// Vertex moved from `B` to `A`, with the vertex it was exchanged for in
    /// the exchange variant.
    pub shifted: Option<usize>,
    pub exchanged: Option<usize>,
    pub dropped: Vec<usize>,
    pub trace: GoodTwinsTrace,
}

/// Twins of size at least `ceil(n/2) - 1` in the forest `f`.
pub fn forest_twins(f: &Graph) -> Result<(TwinPair, AssemblyTrace)> {
    if !f.is_forest() {
        return Err(Error::NotAForest);
    }
    let n = f.n();
    let isolated_edges: Vec<(usize, usize)> = f
        .components()
        .into_iter()
        .filter(|c| c.len() == 2)
        .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
        .collect();
    let mut on_edge = vec![false; n];
    let endpoints: Vec<usize> = isolated_edges.iter().flat_map(|&(x, y)| [x, y]).collect();
    for &v in &endpoints {
        on_edge[v] = true;
    }
    let core = f.isolate(&endpoints);
    let (coloring, trace) = good_twins(&core)?;

    let mut st = State::from_coloring(&core, &coloring);
    let s = st.exceptional();
    let (mut v, mut w) = (None, None);
    for &x in &s {
        if st.colored_degree(x) == 1 {
            v = Some(x);
        } else {
            w = Some(x);
        }
    }
    let s1: Vec<usize> = (0..n).filter(|&x| !on_edge[x] && st.color[x].is_none() && core.degree(x) == 0).collect();
    let s2 = v.map(|x| st.free(x)).unwrap_or_default();
    let s3 = w.map(|x| st.free(x)).unwrap_or_default();
    let uncolored = (0..n).filter(|&x| !on_edge[x] && st.color[x].is_none()).count();
    if s1.len() + s2.len() + s3.len() != uncolored {
        return Err(Error::Internal("uncoloured vertices are not split into isolated vertices and leaves".into()));
    }

    let mut shifted = None;
    let mut exchanged = None;
    let mut free: BTreeSet<usize> = s1.iter().copied().collect();
    let case_taken = match (v, w) {
        (None, None) => AssemblyCase::Isolated,
        (Some(x), None) | (None, Some(x)) => {
            free.extend(st.free(x));
            let has_a = st.side_degree(x, Side::A) > 0;
            st.set(x, None);
            let f0 = free.pop_first().expect("exceptional vertex has a leaf");
            if !has_a {
                st.set(f0, Some(Side::A));
                AssemblyCase::UncolorFree
            } else {
                let n_core = core.n();
                let one_colored = |st: &State, z: usize| st.colored_degree(z) == 1;
                let leaf = (0..n_core)
                    .filter(|&z| st.color[z] == Some(Side::B) && core.degree(z) == 1 && one_colored(&st, z))
                    .chain((0..n_core).filter(|&z| st.color[z] == Some(Side::B) && one_colored(&st, z)))
                    .next();
                if let Some(z) = leaf {
                    st.set(z, Some(Side::A));
                    st.set(f0, Some(Side::B));
                    shifted = Some(z);
                    AssemblyCase::UncolorShift
                } else {
                    st.set(f0, Some(Side::A));
                    let (y, z) = degree_exchange(&st).ok_or_else(|| {
                        Error::Internal("no vertex pair restores balance after uncolouring".into())
                    })?;
                    st.set(y, Some(Side::B));
                    st.set(z, Some(Side::A));
                    shifted = Some(z);
                    exchanged = Some(y);
                    AssemblyCase::UncolorExchange
                }
            }
        }
        (Some(vv), Some(ww)) => {
            let mut s2r = s2.clone();
            let mut s3r = s3.clone();
            if st.side_degree(ww, Side::A) > 0 {
                st.set(s2r.remove(0), Some(Side::A));
            } else {
                st.set(s3r.remove(0), Some(Side::A));
            }
            st.set(ww, None);
            if s3r.len() < s2r.len() {
                return Err(Error::Internal(format!("leaves of {ww} cannot cover those of {vv}")));
            }
            for (&b, &a) in s2r.iter().zip(&s3r) {
                st.set(b, Some(Side::B));
                st.set(a, Some(Side::A));
            }
            free.extend(&s3r[s2r.len()..]);
            AssemblyCase::Both
        }
    };
    if !st.is_twins() {
        return Err(Error::Internal(format!("assembly {case_taken:?} broke the twin property")));
    }
    let free: Vec<usize> = free.into_iter().collect();
    for pair in free.chunks_exact(2) {
        st.set(pair[0], Some(Side::A));
        st.set(pair[1], Some(Side::B));
    }
    let dropped: Vec<usize> = (0..n).filter(|&x| !on_edge[x] && st.color[x].is_none()).collect();
    let mut fin = st.coloring();
    for &(x, y) in &isolated_edges {
        fin.a.push(x);
        fin.b.push(y);
    }
    let pair = TwinPair::new(f, &fin.a, &fin.b)?;
    if !pair.is_twins() || dropped.len() > 2 || pair.size() + 1 < n.div_ceil(2) {
        return Err(Error::Internal(format!(
            "assembly produced size {} with discrepancy {} and {} dropped",
            pair.size(),
            pair.disc,
            dropped.len()
        )));
    }
    let trace = AssemblyTrace {
        isolated_edges,
        good_twins: coloring,
        s1,
        s2,
        s3,
        v,
        w,
        case_taken,
        shifted,
        exchanged,
        dropped,
        trace,
    };
    Ok((pair, trace))
}

/// `y ∈ A`, `z ∈ B` with `d(z) = d(y) + 1` in the coloured graph. When
/// `e(A) = e(B) - 1` and the sides cover the coloured graph, exchanging them
/// balances the edge counts.
fn degree_exchange(st: &State) -> Option<(usize, usize)> {
    let n = st.g.n();
    let deg: Vec<usize> = (0..n).map(|v| st.colored_degree(v)).collect();
    (0..n).filter(|&y| st.color[y] == Some(Side::A)).find_map(|y| {
        (0..n).find(|&z| st.color[z] == Some(Side::B) && deg[z] == deg[y] + 1).map(|z| (y, z))
    })
}
