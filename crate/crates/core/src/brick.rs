//! Brick diagram of a positive braid closure on the annulus S¹ × I.
//!
//! Rows are numbered 1..=m from the top. Letter `j` with generator `i` becomes
//! a vertical segment from the up-vertex `(i, j)` to the down-vertex `(i+1, j)`.
//! Points on a row are addressed by an integer coordinate on a circle of length
//! `4 · letters`; the vertices of letter `j` sit at coordinate `4j`, which
//! leaves room for distinct non-vertex points on either side of every vertex.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{components_of, BraidWord, ComponentPartition};

pub const SCALE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BrickError {
    #[error("no vertex at row {row}, coordinate {coord}")]
    NotAVertex { row: usize, coord: usize },
    #[error("points lie on different rows ({0} and {1})")]
    DifferentRows(usize, usize),
    #[error("row {row} has no {kind:?}-vertices")]
    NoSuchVertex { row: usize, kind: VertexKind },
    #[error("row {0} does not exist")]
    NoRow(usize),
    #[error("region {side:?} row {row} at coordinate {coord} is not a brick")]
    NotABrick { row: usize, coord: usize, side: Side },
    #[error("empty diagram")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Above,
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub row: usize,
    pub pos: usize,
    pub kind: VertexKind,
}

impl Vertex {
    pub fn point(&self) -> RowPoint {
        RowPoint { row: self.row, coord: self.pos * SCALE }
    }
}

/// A point on a row: either a vertex or a point strictly between vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowPoint {
    pub row: usize,
    pub coord: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub pos: usize,
    pub generator: usize,
}

impl Segment {
    pub fn up(&self) -> Vertex {
        Vertex { row: self.generator, pos: self.pos, kind: VertexKind::Up }
    }

    pub fn down(&self) -> Vertex {
        Vertex { row: self.generator + 1, pos: self.pos, kind: VertexKind::Down }
    }
}

/// Innermost rectangle between two consecutive segments of the same generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Brick {
    pub top_row: usize,
    pub left_pos: usize,
    pub right_pos: usize,
}

impl Brick {
    pub fn upper_left(&self) -> Vertex {
        Vertex { row: self.top_row, pos: self.left_pos, kind: VertexKind::Up }
    }
    pub fn upper_right(&self) -> Vertex {
        Vertex { row: self.top_row, pos: self.right_pos, kind: VertexKind::Up }
    }
    pub fn lower_left(&self) -> Vertex {
        Vertex { row: self.top_row + 1, pos: self.left_pos, kind: VertexKind::Down }
    }
    pub fn lower_right(&self) -> Vertex {
        Vertex { row: self.top_row + 1, pos: self.right_pos, kind: VertexKind::Down }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcClass {
    Under,
    Over,
    /// Both ends are up-vertices: left half under, right half over.
    SplitUu,
    /// Both ends are down-vertices: left half over, right half under.
    SplitDd,
}

/// The piece of a row between two cyclically consecutive vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub row: usize,
    pub left: Vertex,
    pub right: Vertex,
    pub class: ArcClass,
    pub strand: usize,
    pub component: usize,
}

/// An open coordinate interval `(start, end)` of a row, unwrapped so that
/// `start < end` (coordinates are reduced modulo the circle length on use).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Portion {
    pub row: usize,
    pub start: usize,
    pub end: usize,
    pub under: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Bigon(Brick),
    NotBigon,
    Boundary,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BrickDiagram {
    word: BraidWord,
    rows: Vec<Vec<Vertex>>,
    segments: Vec<Segment>,
    bricks: Vec<Brick>,
    arcs: Vec<Vec<Arc>>,
    #[serde(skip)]
    parts: Option<ComponentPartition>,
}

pub fn build_brick_diagram(word: &BraidWord) -> BrickDiagram {
    let m = word.strands();
    let letters = word.letters();
    let segments: Vec<Segment> = letters
        .iter()
        .enumerate()
        .map(|(pos, &generator)| Segment { pos, generator })
        .collect();
    let mut rows = vec![Vec::new(); m];
    for s in &segments {
        rows[s.generator - 1].push(s.up());
        rows[s.generator].push(s.down());
    }
    for row in &mut rows {
        row.sort_by_key(|v| v.pos);
    }
    let mut bricks = Vec::new();
    for gap in 1..m {
        let pos: Vec<usize> = segments
            .iter()
            .filter(|s| s.generator == gap)
            .map(|s| s.pos)
            .collect();
        if pos.len() < 2 {
            continue;
        }
        for (k, &left) in pos.iter().enumerate() {
            let right = pos[(k + 1) % pos.len()];
            bricks.push(Brick { top_row: gap, left_pos: left, right_pos: right });
        }
    }
    let parts = components_of(word);
    let table = word.level_table();
    let mut arcs = Vec::with_capacity(m);
    for (r0, row) in rows.iter().enumerate() {
        let mut list = Vec::with_capacity(row.len());
        for (k, &left) in row.iter().enumerate() {
            let right = row[(k + 1) % row.len()];
            let class = match (left.kind, right.kind) {
                (VertexKind::Up, VertexKind::Down) => ArcClass::Under,
                (VertexKind::Down, VertexKind::Up) => ArcClass::Over,
                (VertexKind::Up, VertexKind::Up) => ArcClass::SplitUu,
                (VertexKind::Down, VertexKind::Down) => ArcClass::SplitDd,
            };
            let strand = table[left.pos + 1][r0];
            list.push(Arc {
                row: r0 + 1,
                left,
                right,
                class,
                strand,
                component: parts.of_strand(strand),
            });
        }
        arcs.push(list);
    }
    BrickDiagram { word: word.clone(), rows, segments, bricks, arcs, parts: Some(parts) }
}

impl BrickDiagram {
    pub fn word(&self) -> &BraidWord {
        &self.word
    }

    pub fn strands(&self) -> usize {
        self.word.strands()
    }

    pub fn letters(&self) -> usize {
        self.word.len()
    }

    /// Length of the coordinate circle.
    pub fn circle(&self) -> usize {
        self.word.len() * SCALE
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment(&self, pos: usize) -> Segment {
        self.segments[pos]
    }

    pub fn bricks(&self) -> &[Brick] {
        &self.bricks
    }

    pub fn row_vertices(&self, row: usize) -> &[Vertex] {
        &self.rows[row - 1]
    }

    pub fn arcs(&self, row: usize) -> &[Arc] {
        &self.arcs[row - 1]
    }

    pub fn partition(&self) -> ComponentPartition {
        self.parts.clone().unwrap_or_else(|| components_of(&self.word))
    }

    /// Cyclic offset travelling rightwards from `from` to `to`, in `[0, circle)`.
    pub fn offset(&self, from: usize, to: usize) -> usize {
        let l = self.circle();
        (to + l - from % l) % l
    }

    pub fn vertex_at(&self, p: RowPoint) -> Option<Vertex> {
        if p.row == 0 || p.row > self.strands() || p.coord % SCALE != 0 {
            return None;
        }
        self.rows[p.row - 1]
            .iter()
            .copied()
            .find(|v| v.pos * SCALE == p.coord % self.circle().max(1))
    }

    pub fn opp(&self, v: Vertex) -> Result<Vertex, BrickError> {
        let p = v.point();
        let found = self
            .vertex_at(p)
            .filter(|w| *w == v)
            .ok_or(BrickError::NotAVertex { row: p.row, coord: p.coord })?;
        let seg = self.segments[found.pos];
        Ok(match found.kind {
            VertexKind::Up => seg.down(),
            VertexKind::Down => seg.up(),
        })
    }

    /// Number of vertices of `kind` strictly inside the rightward traversal
    /// from `p1` to `p2`; the whole row when `p1 == p2`.
    pub fn count_vertices(
        &self,
        p1: RowPoint,
        p2: RowPoint,
        kind: VertexKind,
    ) -> Result<usize, BrickError> {
        if p1.row != p2.row {
            return Err(BrickError::DifferentRows(p1.row, p2.row));
        }
        if p1.row == 0 || p1.row > self.strands() {
            return Err(BrickError::NoRow(p1.row));
        }
        let mut span = self.offset(p1.coord, p2.coord);
        if span == 0 {
            span = self.circle();
        }
        Ok(self.rows[p1.row - 1]
            .iter()
            .filter(|v| v.kind == kind)
            .filter(|v| {
                let o = self.offset(p1.coord, v.pos * SCALE);
                o > 0 && o < span
            })
            .count())
    }

    pub fn d_up(&self, p1: RowPoint, p2: RowPoint) -> Result<usize, BrickError> {
        self.count_vertices(p1, p2, VertexKind::Up)
    }

    pub fn d_down(&self, p1: RowPoint, p2: RowPoint) -> Result<usize, BrickError> {
        self.count_vertices(p1, p2, VertexKind::Down)
    }

    /// First vertex of `kind` met moving from `p` in `dir`, not counting `p`
    /// itself unless it is the only such vertex on the row.
    pub fn nearest(
        &self,
        p: RowPoint,
        dir: Direction,
        kind: VertexKind,
    ) -> Result<Vertex, BrickError> {
        if p.row == 0 || p.row > self.strands() {
            return Err(BrickError::NoRow(p.row));
        }
        let l = self.circle();
        self.rows[p.row - 1]
            .iter()
            .copied()
            .filter(|v| v.kind == kind)
            .min_by_key(|v| {
                let c = v.pos * SCALE;
                let o = match dir {
                    Direction::Left => self.offset(c, p.coord),
                    Direction::Right => self.offset(p.coord, c),
                };
                if o == 0 {
                    l
                } else {
                    o
                }
            })
            .ok_or(BrickError::NoSuchVertex { row: p.row, kind })
    }

    /// Positions of the segments of generator `gap`, sorted.
    pub fn gap_segments(&self, gap: usize) -> Vec<usize> {
        self.segments
            .iter()
            .filter(|s| s.generator == gap)
            .map(|s| s.pos)
            .collect()
    }

    /// Complementary region between rows `gap` and `gap + 1` containing the
    /// vertical line at `coord`. `gap = 0` is above the first row, `gap = m`
    /// below the last.
    pub fn region(&self, gap: usize, coord: usize) -> Option<Region> {
        if gap == 0 || gap >= self.strands() {
            return Some(Region::Boundary);
        }
        let pos = self.gap_segments(gap);
        if pos.len() < 2 {
            return Some(Region::NotBigon);
        }
        let c = coord % self.circle();
        if pos.iter().any(|&p| p * SCALE == c) {
            return None;
        }
        let right_idx = pos.iter().position(|&p| p * SCALE > c).unwrap_or(0);
        let left_idx = (right_idx + pos.len() - 1) % pos.len();
        Some(Region::Bigon(Brick {
            top_row: gap,
            left_pos: pos[left_idx],
            right_pos: pos[right_idx],
        }))
    }

    /// Classifies the region directly above or below a row point.
    pub fn region_check(&self, p: RowPoint, side: Side) -> Region {
        let gap = match side {
            Side::Above => p.row - 1,
            Side::Below => p.row,
        };
        self.region(gap, p.coord).unwrap_or(Region::NotBigon)
    }

    /// The brick directly below (or above) a vertex or row point.
    pub fn brick_adjacent(&self, p: RowPoint, side: Side) -> Result<Brick, BrickError> {
        let not_brick = BrickError::NotABrick { row: p.row, coord: p.coord, side };
        match (side, p.row) {
            (Side::Below, r) if r >= self.strands() => return Err(not_brick),
            (Side::Above, r) if r <= 1 => return Err(not_brick),
            _ => {}
        }
        match self.region_check(p, side) {
            Region::Bigon(b) => Ok(b),
            _ => Err(not_brick),
        }
    }

    /// Coordinates covered by the interior of a brick, as an unwrapped open interval.
    pub fn brick_span(&self, b: &Brick) -> (usize, usize) {
        let start = b.left_pos * SCALE;
        let mut len = self.offset(start, b.right_pos * SCALE);
        if len == 0 {
            len = self.circle();
        }
        (start, start + len)
    }

    /// The arc of `row` containing the non-vertex coordinate `coord`.
    pub fn arc_at(&self, row: usize, coord: usize) -> Option<&Arc> {
        let c = coord % self.circle();
        self.arcs(row).iter().find(|a| {
            let start = a.left.pos * SCALE;
            let mut len = self.offset(start, a.right.pos * SCALE);
            if len == 0 {
                len = self.circle();
            }
            let o = self.offset(start, c);
            o > 0 && o < len
        })
    }

    /// Under/over pieces of an arc. Split arcs are cut two units right of the
    /// left vertex.
    pub fn portions(&self, arc: &Arc) -> Vec<Portion> {
        let start = arc.left.pos * SCALE;
        let mut len = self.offset(start, arc.right.pos * SCALE);
        if len == 0 {
            len = self.circle();
        }
        let end = start + len;
        let cut = start + 2;
        let piece = |s, e, under| Portion { row: arc.row, start: s, end: e, under };
        match arc.class {
            ArcClass::Under => vec![piece(start, end, true)],
            ArcClass::Over => vec![piece(start, end, false)],
            ArcClass::SplitUu => vec![piece(start, cut, true), piece(cut, end, false)],
            ArcClass::SplitDd => vec![piece(start, cut, false), piece(cut, end, true)],
        }
    }

    /// Whether the non-vertex point lies on an under-type portion.
    pub fn is_under(&self, p: RowPoint) -> bool {
        if self.vertex_at(p).is_some() || p.coord % SCALE == 2 && self.is_cut(p) {
            return false;
        }
        let Some(arc) = self.arc_at(p.row, p.coord) else {
            return false;
        };
        let l = self.circle();
        self.portions(arc).iter().any(|q| {
            q.under && {
                let o = self.offset(q.start % l, p.coord % l);
                o > 0 && o < q.end - q.start
            }
        })
    }

    fn is_cut(&self, p: RowPoint) -> bool {
        self.arc_at(p.row, p.coord).is_some_and(|a| {
            matches!(a.class, ArcClass::SplitUu | ArcClass::SplitDd)
                && (a.left.pos * SCALE + 2) % self.circle() == p.coord % self.circle()
        })
    }

    /// JSON dump with deterministic ordering by (row, pos).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "strands": self.strands(),
            "letters": self.word.letters(),
            "rows": self.rows,
            "segments": self.segments,
            "bricks": self.bricks,
            "arcs": self.arcs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> BrickDiagram {
        build_brick_diagram(&BraidWord::new(2, vec![1, 1, 1]).unwrap())
    }

    fn up(row: usize, pos: usize) -> Vertex {
        Vertex { row, pos, kind: VertexKind::Up }
    }

    fn down(row: usize, pos: usize) -> Vertex {
        Vertex { row, pos, kind: VertexKind::Down }
    }

    #[test]
    fn trefoil_layout() {
        let d = trefoil();
        assert_eq!(d.segments().len(), 3);
        assert_eq!(d.row_vertices(1), &[up(1, 0), up(1, 1), up(1, 2)]);
        assert_eq!(d.row_vertices(2), &[down(2, 0), down(2, 1), down(2, 2)]);
        let pairs: Vec<(usize, usize)> =
            d.bricks().iter().map(|b| (b.left_pos, b.right_pos)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2), (2, 0)]);
        assert!(d.arcs(1).iter().all(|a| a.class == ArcClass::SplitUu));
        assert!(d.arcs(2).iter().all(|a| a.class == ArcClass::SplitDd));
    }

    #[test]
    fn opp_pairs() {
        let d = trefoil();
        assert_eq!(d.opp(up(1, 1)).unwrap(), down(2, 1));
        for row in 1..=2 {
            for &v in d.row_vertices(row) {
                assert_eq!(d.opp(d.opp(v).unwrap()).unwrap(), v);
            }
        }
        assert!(d.opp(up(2, 1)).is_err());
    }

    #[test]
    fn counting() {
        let d = trefoil();
        let q = RowPoint { row: 1, coord: 9 };
        assert_eq!(d.d_up(q, q).unwrap(), 3);
        assert_eq!(d.d_up(up(1, 0).point(), up(1, 1).point()).unwrap(), 0);
        assert_eq!(d.d_down(q, q).unwrap(), 0);
        assert!(d.d_up(q, RowPoint { row: 2, coord: 9 }).is_err());
    }

    #[test]
    fn nearest_vertices() {
        let d = trefoil();
        let q = RowPoint { row: 1, coord: 11 };
        assert_eq!(d.nearest(q, Direction::Left, VertexKind::Up).unwrap(), up(1, 2));
        assert_eq!(d.nearest(q, Direction::Right, VertexKind::Up).unwrap(), up(1, 0));
        assert_eq!(
            d.nearest(up(1, 2).point(), Direction::Left, VertexKind::Up).unwrap(),
            up(1, 1)
        );
        assert!(d.nearest(q, Direction::Left, VertexKind::Down).is_err());
    }

    #[test]
    fn adjacent_bricks_and_regions() {
        let d = trefoil();
        let just_left_of_u0 = RowPoint { row: 1, coord: 11 };
        let b = d.brick_adjacent(just_left_of_u0, Side::Below).unwrap();
        assert_eq!((b.left_pos, b.right_pos), (2, 0));
        let b = d.brick_adjacent(RowPoint { row: 2, coord: 5 }, Side::Above).unwrap();
        assert_eq!((b.left_pos, b.right_pos), (1, 2));
        assert!(d.brick_adjacent(down(2, 1).point(), Side::Below).is_err());

        assert_eq!(d.region_check(RowPoint { row: 1, coord: 1 }, Side::Above), Region::Boundary);
        assert!(matches!(
            d.region_check(RowPoint { row: 1, coord: 2 }, Side::Below),
            Region::Bigon(Brick { left_pos: 0, right_pos: 1, .. })
        ));
    }

    #[test]
    fn single_segment_gap_is_not_a_bigon() {
        let d = build_brick_diagram(&BraidWord::new(3, vec![1, 2, 2, 2]).unwrap());
        assert_eq!(d.region_check(RowPoint { row: 1, coord: 5 }, Side::Below), Region::NotBigon);
    }

    #[test]
    fn interleaved_rows() {
        let d = build_brick_diagram(&BraidWord::new(3, vec![1, 2, 1, 2]).unwrap());
        assert_eq!(d.bricks().len(), 4);
        // row 2 alternates down (σ1) and up (σ2) vertices
        let classes: Vec<ArcClass> = d.arcs(2).iter().map(|a| a.class).collect();
        assert_eq!(
            classes,
            vec![ArcClass::Over, ArcClass::Under, ArcClass::Over, ArcClass::Under]
        );
    }

    #[test]
    fn under_points() {
        let d = trefoil();
        assert!(d.is_under(RowPoint { row: 1, coord: 1 }));
        assert!(!d.is_under(RowPoint { row: 1, coord: 2 }));
        assert!(!d.is_under(RowPoint { row: 1, coord: 3 }));
        assert!(d.is_under(RowPoint { row: 2, coord: 3 }));
        assert!(!d.is_under(RowPoint { row: 2, coord: 0 }));
    }
}
