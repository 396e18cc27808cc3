//! Checks on a curve family that use only the curves and the diagram, never the
//! construction log.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brick::{Brick, BrickDiagram, Region, RowPoint, Side, Vertex, VertexKind, SCALE};
use crate::curves::{Curve, CurveEdge, CurveFamily};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("curve is not closed")]
    NotClosed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Something wrong with a whole curve.
    Curve { curve: usize, detail: String },
    Edge { curve: usize, edge: CurveEdge, detail: String },
    Point { curve: usize, row: usize, coord: usize },
    Column { curve: usize, coord: usize, detail: String },
    Brick { curves: Vec<usize>, brick: Brick },
    /// Two consecutive curves, `upper` and `upper + 1` (1-based).
    Pair { upper: usize, coord: Option<usize>, detail: String },
    UnderArc { row: usize, start: usize, end: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub pass: bool,
    pub witness: Option<Witness>,
}

impl Check {
    fn ok() -> Self {
        Check { pass: true, witness: None }
    }
    fn ok_with(w: Witness) -> Self {
        Check { pass: true, witness: Some(w) }
    }
    fn fail(w: Witness) -> Self {
        Check { pass: false, witness: Some(w) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub simple: Check,
    pub g1: Check,
    pub g2: Check,
    pub g3: Check,
    pub g4: Check,
    pub g5: Check,
    pub g6: Check,
    pub g7: Check,
    pub g8: Check,
    pub row_sandwich: Check,
}

impl PropertyReport {
    pub fn checks(&self) -> [(&'static str, &Check); 10] {
        [
            ("simple", &self.simple),
            ("g1", &self.g1),
            ("g2", &self.g2),
            ("g3", &self.g3),
            ("g4", &self.g4),
            ("g5", &self.g5),
            ("g6", &self.g6),
            ("g7", &self.g7),
            ("g8", &self.g8),
            ("row_sandwich", &self.row_sandwich),
        ]
    }

    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.pass)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks().iter().filter(|(_, c)| !c.pass).map(|(n, _)| *n).collect()
    }
}

fn row_len(d: &BrickDiagram, from: usize, to: usize) -> usize {
    match d.offset(from, to) {
        0 => d.circle(),
        o => o,
    }
}

fn brick_is_real(d: &BrickDiagram, b: &Brick) -> bool {
    d.bricks().contains(b)
}

/// Endpoints of an edge, or a reason it does not fit the diagram.
fn endpoints(d: &BrickDiagram, e: &CurveEdge) -> Result<(RowPoint, RowPoint), String> {
    let l = d.circle();
    match *e {
        CurveEdge::RowArc { row, from, to } => {
            if row == 0 || row > d.strands() || from >= l || to >= l {
                return Err("row arc outside the diagram".into());
            }
            Ok((RowPoint { row, coord: from }, RowPoint { row, coord: to }))
        }
        CurveEdge::Vertical { pos } => {
            if pos >= d.letters() {
                return Err("no such segment".into());
            }
            let s = d.segment(pos);
            Ok((s.up().point(), s.down().point()))
        }
        CurveEdge::BrickArc { brick, from, to } => {
            if !brick_is_real(d, &brick) {
                return Err("not a brick of the diagram".into());
            }
            let corners = [brick.upper_left(), brick.upper_right(), brick.lower_left(), brick.lower_right()];
            if !corners.contains(&from) || !corners.contains(&to) || from == to {
                return Err("brick arc ends are not two corners of its brick".into());
            }
            Ok((from.point(), to.point()))
        }
    }
}

/// Edge order around the curve and traversal direction, if it closes up.
fn assemble(d: &BrickDiagram, ci: usize, curve: &Curve) -> Result<Vec<(usize, bool)>, Witness> {
    if curve.edges.is_empty() {
        return Err(Witness::Curve { curve: ci, detail: "empty path".into() });
    }
    let mut ends = Vec::with_capacity(curve.edges.len());
    let mut at: HashMap<RowPoint, Vec<(usize, usize)>> = HashMap::new();
    for (i, e) in curve.edges.iter().enumerate() {
        let (p, q) = endpoints(d, e)
            .map_err(|detail| Witness::Edge { curve: ci, edge: *e, detail })?;
        at.entry(p).or_default().push((i, 0));
        at.entry(q).or_default().push((i, 1));
        ends.push([p, q]);
    }
    let mut bad: Vec<(&RowPoint, usize)> =
        at.iter().filter(|(_, v)| v.len() != 2).map(|(p, v)| (p, v.len())).collect();
    bad.sort();
    if let Some((p, n)) = bad.first() {
        let detail = if *n < 2 { "path is open here" } else { "path touches itself here" };
        return Err(Witness::Column { curve: ci, coord: p.coord, detail: format!("{detail} (row {})", p.row) });
    }
    let mut order = vec![(0, true)];
    let mut seen = vec![false; curve.edges.len()];
    seen[0] = true;
    let (mut edge, mut end) = (0usize, 1usize);
    loop {
        let p = ends[edge][end];
        let &(next, next_end) = at[&p]
            .iter()
            .find(|&&(i, e)| (i, e) != (edge, end))
            .expect("degree two");
        if next == 0 {
            break;
        }
        if seen[next] {
            return Err(Witness::Curve { curve: ci, detail: "edge repeated in walk".into() });
        }
        seen[next] = true;
        order.push((next, next_end == 0));
        edge = next;
        end = 1 - next_end;
    }
    if order.len() != curve.edges.len() {
        return Err(Witness::Curve {
            curve: ci,
            detail: format!("splits into several loops ({} of {} edges reached)", order.len(), curve.edges.len()),
        });
    }
    Ok(order)
}

fn brick_corner_side(b: &Brick, v: &Vertex) -> i8 {
    if v.pos == b.left_pos {
        -1
    } else if v.pos == b.right_pos {
        1
    } else {
        0
    }
}

/// Signed rightward displacement of an edge traversed forwards.
fn displacement(d: &BrickDiagram, e: &CurveEdge) -> i64 {
    match *e {
        CurveEdge::RowArc { from, to, .. } => row_len(d, from, to) as i64,
        CurveEdge::Vertical { .. } => 0,
        CurveEdge::BrickArc { brick, from, to } => {
            let (s, t) = d.brick_span(&brick);
            let span = (t - s) as i64;
            match (brick_corner_side(&brick, &from), brick_corner_side(&brick, &to)) {
                (-1, 1) => span,
                (1, -1) => -span,
                _ => 0,
            }
        }
    }
}

pub fn check_simple(d: &BrickDiagram, curve: &Curve) -> Result<Check, VerifyError> {
    if curve.edges.is_empty() {
        return Err(VerifyError::NotClosed);
    }
    simple_at(d, 0, curve)
}

fn simple_at(d: &BrickDiagram, ci: usize, curve: &Curve) -> Result<Check, VerifyError> {
    if curve.edges.is_empty() {
        return Err(VerifyError::NotClosed);
    }
    let mut joints: HashMap<RowPoint, usize> = HashMap::new();
    let mut verticals = BTreeSet::new();
    let mut bricks = BTreeSet::new();
    let mut rows: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for e in &curve.edges {
        if let Ok((p, q)) = endpoints(d, e) {
            *joints.entry(p).or_default() += 1;
            *joints.entry(q).or_default() += 1;
        }
        match *e {
            CurveEdge::Vertical { pos } => {
                if !verticals.insert(pos) {
                    return Ok(Check::fail(Witness::Edge { curve: ci, edge: *e, detail: "segment used twice".into() }));
                }
            }
            CurveEdge::BrickArc { brick, .. } => {
                if !bricks.insert(brick) {
                    return Ok(Check::fail(Witness::Edge { curve: ci, edge: *e, detail: "brick entered twice".into() }));
                }
            }
            CurveEdge::RowArc { row, from, to } => {
                let len = row_len(d, from, to);
                let list = rows.entry(row).or_default();
                for &(s, l) in list.iter() {
                    if d.offset(s, from) < l || d.offset(from, s) < len {
                        return Ok(Check::fail(Witness::Edge { curve: ci, edge: *e, detail: "overlaps another row arc".into() }));
                    }
                }
                list.push((from, len));
            }
        }
    }
    let mut touching: Vec<&RowPoint> = joints.iter().filter(|(_, &n)| n > 2).map(|(p, _)| p).collect();
    touching.sort();
    if let Some(p) = touching.first() {
        return Ok(Check::fail(Witness::Point { curve: ci, row: p.row, coord: p.coord }));
    }
    Ok(Check::ok())
}

/// Where one curve meets each vertical line.
struct Trace {
    /// Doubled heights: row r is 2r, the open gap below it is 2r + 1.
    heights: Vec<Option<(usize, usize)>>,
    /// (row, coord) of every point on a row, vertices included.
    row_points: BTreeSet<(usize, usize)>,
    /// (coord, top_row) of brick interior points.
    brick_points: BTreeSet<(usize, usize)>,
    bricks: Vec<Brick>,
}

fn trace(d: &BrickDiagram, curve: &Curve) -> Trace {
    let l = d.circle();
    let mut t = Trace {
        heights: vec![None; l],
        row_points: BTreeSet::new(),
        brick_points: BTreeSet::new(),
        bricks: Vec::new(),
    };
    let mark = |heights: &mut Vec<Option<(usize, usize)>>, c: usize, lo: usize, hi: usize| {
        let slot = &mut heights[c % l];
        *slot = Some(match *slot {
            None => (lo, hi),
            Some((a, b)) => (a.min(lo), b.max(hi)),
        });
    };
    for e in &curve.edges {
        if endpoints(d, e).is_err() {
            continue;
        }
        match *e {
            CurveEdge::RowArc { row, from, to } => {
                for o in 0..=row_len(d, from, to) {
                    mark(&mut t.heights, from + o, 2 * row, 2 * row);
                    t.row_points.insert((row, (from + o) % l));
                }
            }
            CurveEdge::Vertical { pos } => {
                let g = d.segment(pos).generator;
                mark(&mut t.heights, pos * SCALE, 2 * g, 2 * g + 2);
            }
            CurveEdge::BrickArc { brick, from, to } => {
                t.bricks.push(brick);
                let (s, e) = d.brick_span(&brick);
                for c in s + 1..e {
                    mark(&mut t.heights, c, 2 * brick.top_row + 1, 2 * brick.top_row + 1);
                    t.brick_points.insert((c % l, brick.top_row));
                }
                for v in [from, to] {
                    mark(&mut t.heights, v.pos * SCALE, 2 * v.row, 2 * v.row);
                }
            }
        }
    }
    t
}

/// Maximal under-arcs as lists of (row, start, end) under portions.
pub fn under_arcs(d: &BrickDiagram) -> Vec<Vec<(usize, usize, usize)>> {
    let mut portions = Vec::new();
    // under portion ending at the down-vertex of letter a, starting at its up-vertex
    let mut ends_at_down: HashMap<usize, usize> = HashMap::new();
    let mut starts_at_up: HashMap<usize, usize> = HashMap::new();
    for row in 1..=d.strands() {
        for arc in d.arcs(row) {
            for p in d.portions(arc) {
                if !p.under {
                    continue;
                }
                let id = portions.len();
                portions.push((row, p.start, p.end));
                if (p.end % d.circle()) == arc.right.pos * SCALE && arc.right.kind == VertexKind::Down {
                    ends_at_down.insert(arc.right.pos, id);
                }
                if p.start == arc.left.pos * SCALE && arc.left.kind == VertexKind::Up {
                    starts_at_up.insert(arc.left.pos, id);
                }
            }
        }
    }
    let mut parent: Vec<usize> = (0..portions.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for (pos, &a) in &ends_at_down {
        if let Some(&b) = starts_at_up.get(pos) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let mut classes: BTreeMap<usize, Vec<(usize, usize, usize)>> = BTreeMap::new();
    for i in 0..portions.len() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(portions[i]);
    }
    let mut out: Vec<Vec<(usize, usize, usize)>> = classes.into_values().collect();
    for c in &mut out {
        c.sort();
    }
    out.sort();
    out
}

fn under_point(d: &BrickDiagram, row: usize, coord: usize) -> bool {
    d.is_under(RowPoint { row, coord })
}

fn boundary_side(d: &BrickDiagram, t: &Trace, ci: usize, side: Side) -> Check {
    for &(row, coord) in &t.row_points {
        let p = RowPoint { row, coord };
        if !under_point(d, row, coord) {
            continue;
        }
        if matches!(d.region_check(p, side), Region::NotBigon | Region::Boundary) {
            return Check::ok_with(Witness::Point { curve: ci, row, coord });
        }
    }
    let detail = match side {
        Side::Above => "every under point has a brick directly above",
        Side::Below => "every under point has a brick directly below",
    };
    Check::fail(Witness::Curve { curve: ci, detail: detail.into() })
}

pub fn check_properties(family: &CurveFamily, d: &BrickDiagram) -> PropertyReport {
    let k = family.curves.len();
    if k == 0 {
        let w = Witness::Curve { curve: 0, detail: "no curves".into() };
        let f = Check::fail(w);
        return PropertyReport {
            simple: f.clone(),
            g1: f.clone(),
            g2: f.clone(),
            g3: f.clone(),
            g4: f.clone(),
            g5: f.clone(),
            g6: f.clone(),
            g7: f.clone(),
            g8: f.clone(),
            row_sandwich: f,
        };
    }
    let l = d.circle() as i64;
    let traces: Vec<Trace> = family.curves.iter().map(|c| trace(d, c)).collect();

    let mut simple = Check::ok();
    for (i, c) in family.curves.iter().enumerate() {
        let r = simple_at(d, i + 1, c).unwrap_or_else(|_| {
            Check::fail(Witness::Curve { curve: i + 1, detail: "empty path".into() })
        });
        if !r.pass {
            simple = r;
            break;
        }
    }

    let mut g1 = Check::ok();
    'curves: for (i, c) in family.curves.iter().enumerate() {
        let order = match assemble(d, i + 1, c) {
            Ok(o) => o,
            Err(w) => {
                g1 = Check::fail(w);
                break;
            }
        };
        let signed: Vec<(usize, i64)> = order
            .iter()
            .map(|&(e, fwd)| {
                let x = displacement(d, &c.edges[e]);
                (e, if fwd { x } else { -x })
            })
            .collect();
        let total: i64 = signed.iter().map(|&(_, x)| x).sum();
        let sign = if total < 0 { -1 } else { 1 };
        if total * sign != l {
            g1 = Check::fail(Witness::Curve {
                curve: i + 1,
                detail: format!("winds {} instead of once around ({} of {})", total, total.abs(), l),
            });
            break;
        }
        for &(e, x) in &signed {
            let edge = c.edges[e];
            let moves = !matches!(edge, CurveEdge::Vertical { .. });
            if moves && x * sign <= 0 {
                g1 = Check::fail(Witness::Edge {
                    curve: i + 1,
                    edge,
                    detail: "doubles back against the direction of travel".into(),
                });
                break 'curves;
            }
        }
        if let Some(c) = traces[i].heights.iter().position(|h| h.is_none()) {
            g1 = Check::fail(Witness::Column { curve: i + 1, coord: c, detail: "vertical line missed".into() });
            break;
        }
    }

    let mut g2 = Check::ok();
    for (i, c) in family.curves.iter().enumerate() {
        let arcs: Vec<&CurveEdge> =
            c.edges.iter().filter(|e| matches!(e, CurveEdge::BrickArc { .. })).collect();
        if arcs.len() != 1 {
            g2 = Check::fail(Witness::Curve {
                curve: i + 1,
                detail: format!("{} interior arcs, expected one", arcs.len()),
            });
            break;
        }
        if let CurveEdge::BrickArc { brick, from, to } = *arcs[0] {
            let sides = (brick_corner_side(&brick, &from), brick_corner_side(&brick, &to));
            let real = brick_is_real(d, &brick) && endpoints(d, arcs[0]).is_ok();
            if !real || sides.0 == sides.1 || sides.0 == 0 || sides.1 == 0 {
                g2 = Check::fail(Witness::Edge {
                    curve: i + 1,
                    edge: *arcs[0],
                    detail: "interior arc does not join the two sides of a brick".into(),
                });
                break;
            }
        }
    }

    let mut g3 = Check::ok();
    'pairs: for i in 0..k.saturating_sub(1) {
        for c in 0..d.circle() {
            if let (Some((_, hi)), Some((lo, _))) = (traces[i].heights[c], traces[i + 1].heights[c]) {
                if hi > lo {
                    g3 = Check::fail(Witness::Pair {
                        upper: i + 1,
                        coord: Some(c),
                        detail: "upper curve dips below the next one".into(),
                    });
                    break 'pairs;
                }
            }
        }
    }

    let mut g4 = Check::ok();
    let mut owners: BTreeMap<Brick, Vec<usize>> = BTreeMap::new();
    for (i, t) in traces.iter().enumerate() {
        for b in &t.bricks {
            owners.entry(*b).or_default().push(i + 1);
        }
    }
    if let Some((b, cs)) = owners.iter().find(|(_, cs)| cs.len() > 1) {
        g4 = Check::fail(Witness::Brick { curves: cs.clone(), brick: *b });
    }

    let g5 = boundary_side(d, &traces[0], 1, Side::Above);
    let g6 = boundary_side(d, &traces[k - 1], k, Side::Below);

    let mut g7 = Check::ok();
    for i in 0..k - 1 {
        let (upper, lower) = (&traces[i], &traces[i + 1]);
        let below_row = upper
            .row_points
            .iter()
            .find(|&&(r, c)| under_point(d, r, c) && lower.brick_points.contains(&(c, r)))
            .map(|&(_, c)| c);
        let above_row = || {
            lower
                .row_points
                .iter()
                .find(|&&(r, c)| r > 1 && under_point(d, r, c) && upper.brick_points.contains(&(c, r - 1)))
                .map(|&(_, c)| c)
        };
        if below_row.or_else(above_row).is_none() {
            g7 = Check::fail(Witness::Pair {
                upper: i + 1,
                coord: None,
                detail: "no vertical connection from an under point into the neighbouring brick".into(),
            });
            break;
        }
    }

    let mut g8 = Check::ok();
    let occupied: BTreeSet<(usize, usize)> =
        traces.iter().flat_map(|t| t.row_points.iter().copied()).collect();
    for class in under_arcs(d) {
        let free = class.iter().any(|&(row, s, e)| {
            (s + 1..e).any(|c| {
                let c = c % d.circle();
                under_point(d, row, c) && !occupied.contains(&(row, c))
            })
        });
        if !free {
            let (row, start, end) = class[0];
            g8 = Check::fail(Witness::UnderArc { row, start, end });
            break;
        }
    }

    let mut row_sandwich = Check::ok();
    if family.row_assignment.len() != k + 1 || family.row_assignment.windows(2).any(|w| w[0] >= w[1]) {
        row_sandwich = Check::fail(Witness::Curve { curve: 0, detail: "row assignment not increasing".into() });
    } else {
        'sandwich: for (i, t) in traces.iter().enumerate() {
            let (top, bottom) = (2 * family.row_assignment[i], 2 * family.row_assignment[i + 1]);
            for (c, h) in t.heights.iter().enumerate() {
                if let Some((lo, hi)) = *h {
                    if lo < top || hi > bottom {
                        row_sandwich = Check::fail(Witness::Column {
                            curve: i + 1,
                            coord: c,
                            detail: format!("leaves rows {}..={}", top / 2, bottom / 2),
                        });
                        break 'sandwich;
                    }
                }
            }
        }
    }

    PropertyReport { simple, g1, g2, g3, g4, g5, g6, g7, g8, row_sandwich }
}
