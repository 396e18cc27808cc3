//! Greedy construction of the curves γ₁…γ_k on the brick diagram.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::ComponentStats;
use crate::brick::{
    ArcClass, Brick, BrickDiagram, BrickError, Direction, RowPoint, Side, Vertex, VertexKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "edge", rename_all = "snake_case")]
pub enum CurveEdge {
    /// Rightward piece of a row from `from` to `to` (full row when equal).
    RowArc { row: usize, from: usize, to: usize },
    /// The whole vertical segment of the letter at `pos`.
    Vertical { pos: usize },
    /// Arc through the interior of a brick between two of its corners.
    BrickArc { brick: Brick, from: Vertex, to: Vertex },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub edges: Vec<CurveEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Procedure {
    CrossBrickStep,
    StepBelow,
    StepAbove,
    CloseAndStore,
    RestartBelow,
    RestartAbove,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub step: usize,
    pub procedure: Procedure,
    /// Row holding A and B when the procedure starts.
    pub row: usize,
    pub touched: Vec<Vertex>,
    /// Letter positions designated Type X by this step.
    pub x: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventLog {
    pub events: Vec<Event>,
}

impl EventLog {
    pub fn count(&self, p: Procedure) -> usize {
        self.events.iter().filter(|e| e.procedure == p).count()
    }

    /// Row gap of the brick crossed by the single CrossBrickStep.
    pub fn crossed_gap(&self) -> Option<usize> {
        self.events
            .iter()
            .find(|e| e.procedure == Procedure::CrossBrickStep)
            .map(|e| e.row)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFamily {
    /// Ordered top to bottom.
    pub curves: Vec<Curve>,
    /// 1-based index of the curve through `q`.
    pub s: usize,
    pub q: RowPoint,
    /// r₁ < … < r_{k+1}; curve i lies between rows `row_assignment[i-1]` and `row_assignment[i]`.
    pub row_assignment: Vec<usize>,
}

impl CurveFamily {
    pub fn k(&self) -> usize {
        self.curves.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum MinimalityWitness {
    /// Nothing left to cross: an unknot component runs through the start row.
    UnknotComponent { row: usize },
    /// The generator occurs once, so a strand can be removed.
    SingleOccurrence { generator: usize },
    /// The word has the strand-reducing shape starting at `i` after `j` descents.
    Strand2 { i: usize, j: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("no component of positive genus")]
    NoNontrivialComponent,
    #[error("no admissible initial point")]
    NoAdmissiblePoint,
    #[error("input is not strand-minimal ({count} up-vertices at the crossing step): {witness:?}")]
    NonMinimalInput { count: usize, witness: MinimalityWitness },
    #[error("no brick {side:?} row {row} at coordinate {coord}")]
    MissingBrick { row: usize, coord: usize, side: Side },
    #[error("construction did not terminate within {0} steps")]
    Runaway(usize),
    #[error(transparent)]
    Diagram(#[from] BrickError),
}

/// Deliberate constructor faults, used to check that the verifier notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mutation {
    /// Forget the first Type X designation.
    DropXDesignation,
    /// Leave out the closing row segment of the first stored curve.
    SkipCloseSegment,
    /// Restart below from the lower-right corner instead of the lower-left.
    WrongRestartCorner,
    /// Exchange the new A and B after a step below.
    SwapAbUpdate,
    /// Exclude the lower end of the step guard, stepping only on three or more vertices.
    OffByOneInterval,
}

impl Mutation {
    pub const ALL: [Mutation; 5] = [
        Mutation::DropXDesignation,
        Mutation::SkipCloseSegment,
        Mutation::WrongRestartCorner,
        Mutation::SwapAbUpdate,
        Mutation::OffByOneInterval,
    ];
}

/// Start point: on the topmost row met by a component of positive genus, in
/// the under half of an arc bounded by two up-vertices.
pub fn choose_initial_point(
    d: &BrickDiagram,
    stats: &ComponentStats,
) -> Result<RowPoint, ConstructionError> {
    let nontrivial: Vec<bool> = (0..stats.components.len()).map(|k| !stats.is_unknot(k)).collect();
    if !nontrivial.iter().any(|&b| b) {
        return Err(ConstructionError::NoNontrivialComponent);
    }
    let row = (1..=d.strands())
        .find(|&r| d.arcs(r).iter().any(|a| nontrivial[a.component]))
        .ok_or(ConstructionError::NoAdmissiblePoint)?;
    d.arcs(row)
        .iter()
        .filter(|a| nontrivial[a.component] && a.class == ArcClass::SplitUu)
        .map(|a| a.left.pos)
        .min()
        .map(|pos| RowPoint { row, coord: pos * crate::brick::SCALE + 1 })
        .ok_or(ConstructionError::NoAdmissiblePoint)
}

struct State<'a> {
    d: &'a BrickDiagram,
    a: RowPoint,
    b: RowPoint,
    gamma: Vec<CurveEdge>,
    stored: Vec<(Curve, usize)>,
    log: EventLog,
    mutation: Option<Mutation>,
    dropped_x: bool,
    skipped_close: bool,
}

fn row_arc(from: RowPoint, to: RowPoint) -> CurveEdge {
    CurveEdge::RowArc { row: from.row, from: from.coord, to: to.coord }
}

impl<'a> State<'a> {
    /// Whether the interval holds enough vertices to keep stepping.
    fn can_step(&self, count: usize) -> bool {
        if self.mutation == Some(Mutation::OffByOneInterval) {
            count > 2
        } else {
            count >= 2
        }
    }

    fn log(&mut self, procedure: Procedure, row: usize, touched: Vec<Vertex>, mut x: Vec<usize>) {
        if self.mutation == Some(Mutation::DropXDesignation) && !self.dropped_x && !x.is_empty() {
            x.remove(0);
            self.dropped_x = true;
        }
        let step = self.log.events.len();
        self.log.events.push(Event { step, procedure, row, touched, x });
    }

    fn step_below(&mut self) -> Result<(), ConstructionError> {
        let row = self.a.row;
        let a1 = self.d.nearest(self.a, Direction::Left, VertexKind::Up)?;
        let b1 = self.d.nearest(self.b, Direction::Right, VertexKind::Up)?;
        self.gamma.push(row_arc(a1.point(), self.a));
        self.gamma.push(row_arc(self.b, b1.point()));
        self.gamma.push(CurveEdge::Vertical { pos: a1.pos });
        self.gamma.push(CurveEdge::Vertical { pos: b1.pos });
        let (na, nb) = (self.d.opp(a1)?.point(), self.d.opp(b1)?.point());
        if self.mutation == Some(Mutation::SwapAbUpdate) {
            (self.a, self.b) = (nb, na);
        } else {
            (self.a, self.b) = (na, nb);
        }
        self.log(Procedure::StepBelow, row, vec![a1, b1], vec![a1.pos]);
        Ok(())
    }

    fn step_above(&mut self) -> Result<(), ConstructionError> {
        let row = self.a.row;
        let a1 = self.d.nearest(self.a, Direction::Right, VertexKind::Down)?;
        let b1 = self.d.nearest(self.b, Direction::Left, VertexKind::Down)?;
        self.gamma.push(row_arc(b1.point(), self.b));
        self.gamma.push(row_arc(self.a, a1.point()));
        self.gamma.push(CurveEdge::Vertical { pos: a1.pos });
        self.gamma.push(CurveEdge::Vertical { pos: b1.pos });
        (self.a, self.b) = (self.d.opp(a1)?.point(), self.d.opp(b1)?.point());
        self.log(Procedure::StepAbove, row, vec![a1, b1], vec![a1.pos]);
        Ok(())
    }

    fn cross_brick_step(&mut self, q: RowPoint, descents: usize) -> Result<(), ConstructionError> {
        let row = self.a.row;
        let count = self.d.count_vertices(self.b, self.a, VertexKind::Up)?;
        if count < 3 {
            let witness = match (count, descents) {
                (0, _) => MinimalityWitness::UnknotComponent { row },
                (_, 0) => MinimalityWitness::SingleOccurrence { generator: q.row },
                (_, j) => MinimalityWitness::Strand2 { i: q.row, j },
            };
            return Err(ConstructionError::NonMinimalInput { count, witness });
        }
        let a1 = self.d.nearest(self.a, Direction::Left, VertexKind::Up)?;
        let b1 = self.d.nearest(self.b, Direction::Right, VertexKind::Up)?;
        let a2 = self.d.nearest(a1.point(), Direction::Left, VertexKind::Up)?;
        let brick = Brick { top_row: row, left_pos: a2.pos, right_pos: a1.pos };
        let low_left = self.d.opp(a2)?;
        self.gamma.push(row_arc(a1.point(), self.a));
        self.gamma.push(row_arc(self.b, b1.point()));
        self.gamma.push(CurveEdge::Vertical { pos: b1.pos });
        self.gamma.push(CurveEdge::BrickArc { brick, from: low_left, to: a1 });
        (self.a, self.b) = (low_left.point(), self.d.opp(b1)?.point());
        self.log(Procedure::CrossBrickStep, row, vec![a1, b1, a2], vec![a2.pos, a1.pos]);
        Ok(())
    }

    fn close_and_store(&mut self, from: RowPoint, to: RowPoint) {
        let row = self.a.row;
        if self.mutation == Some(Mutation::SkipCloseSegment) && !self.skipped_close {
            self.skipped_close = true;
        } else {
            self.gamma.push(row_arc(from, to));
        }
        let edges = std::mem::take(&mut self.gamma);
        self.stored.push((Curve { edges }, row));
        self.log(Procedure::CloseAndStore, row, Vec::new(), Vec::new());
    }

    fn restart(&mut self, side: Side) -> Result<(), ConstructionError> {
        let row = self.a.row;
        let brick = self.d.brick_adjacent(self.a, side).map_err(|_| {
            ConstructionError::MissingBrick { row, coord: self.a.coord, side }
        })?;
        match side {
            Side::Below => {
                let (ll, lr) = (brick.lower_left(), brick.lower_right());
                self.gamma = vec![CurveEdge::BrickArc { brick, from: ll, to: lr }];
                if self.mutation == Some(Mutation::WrongRestartCorner) {
                    (self.a, self.b) = (lr.point(), ll.point());
                } else {
                    (self.a, self.b) = (ll.point(), lr.point());
                }
                self.log(Procedure::RestartBelow, row, vec![ll, lr], vec![brick.left_pos]);
            }
            Side::Above => {
                let (ul, ur) = (brick.upper_left(), brick.upper_right());
                self.gamma = vec![CurveEdge::BrickArc { brick, from: ul, to: ur }];
                (self.a, self.b) = (ur.point(), ul.point());
                self.log(Procedure::RestartAbove, row, vec![ul, ur], vec![brick.right_pos]);
            }
        }
        Ok(())
    }
}

pub fn run_construction(
    d: &BrickDiagram,
    q: RowPoint,
) -> Result<(CurveFamily, EventLog), ConstructionError> {
    run_construction_with(d, q, None)
}

/// As [`run_construction`], optionally with a deliberate fault.
pub fn run_construction_with(
    d: &BrickDiagram,
    q: RowPoint,
    mutation: Option<Mutation>,
) -> Result<(CurveFamily, EventLog), ConstructionError> {
    let m = d.strands();
    let limit = 4 * m + 8;
    let mut st = State {
        d,
        a: q,
        b: q,
        gamma: Vec::new(),
        stored: Vec::new(),
        log: EventLog::default(),
        mutation,
        dropped_x: false,
        skipped_close: false,
    };
    let mut descents = 0;
    while st.d.count_vertices(st.b, st.a, VertexKind::Up)? == 2 {
        st.step_below()?;
        descents += 1;
        if descents > limit {
            return Err(ConstructionError::Runaway(limit));
        }
    }
    st.cross_brick_step(q, descents)?;
    let mut guard = 0;
    while st.a.row < m {
        if st.can_step(st.d.count_vertices(st.b, st.a, VertexKind::Up)?) {
            st.step_below()?;
        } else {
            st.close_and_store(st.b, st.a);
            st.restart(Side::Below)?;
        }
        guard += 1;
        if guard > limit {
            return Err(ConstructionError::Runaway(limit));
        }
    }
    st.close_and_store(st.b, st.a);
    let below = std::mem::take(&mut st.stored);

    if q.row > 1 {
        st.a = q;
        st.b = q;
        st.restart(Side::Above)?;
        while st.a.row > 1 {
            if st.can_step(st.d.count_vertices(st.a, st.b, VertexKind::Down)?) {
                st.step_above()?;
            } else {
                st.close_and_store(st.a, st.b);
                st.restart(Side::Above)?;
            }
            guard += 1;
            if guard > limit {
                return Err(ConstructionError::Runaway(limit));
            }
        }
        st.close_and_store(st.a, st.b);
    }
    let above = std::mem::take(&mut st.stored);

    let s = above.len() + 1;
    let mut curves = Vec::with_capacity(above.len() + below.len());
    let mut row_assignment = Vec::with_capacity(curves.capacity() + 1);
    for (c, row) in above.into_iter().rev() {
        curves.push(c);
        row_assignment.push(row);
    }
    row_assignment.push(q.row);
    for (c, row) in below {
        curves.push(c);
        row_assignment.push(row);
    }
    Ok((CurveFamily { curves, s, q, row_assignment }, st.log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{component_stats, components_of, BraidWord};
    use crate::brick::build_brick_diagram;

    fn setup(m: usize, letters: &[usize]) -> (BrickDiagram, ComponentStats) {
        let w = BraidWord::new(m, letters.to_vec()).unwrap();
        let stats = component_stats(&w, &components_of(&w)).unwrap();
        (build_brick_diagram(&w), stats)
    }

    fn up(row: usize, pos: usize) -> Vertex {
        Vertex { row, pos, kind: VertexKind::Up }
    }

    fn down(row: usize, pos: usize) -> Vertex {
        Vertex { row, pos, kind: VertexKind::Down }
    }

    #[test]
    fn trefoil_trace() {
        let (d, stats) = setup(2, &[1, 1, 1]);
        let q = choose_initial_point(&d, &stats).unwrap();
        assert_eq!(q, RowPoint { row: 1, coord: 1 });
        let (fam, log) = run_construction(&d, q).unwrap();
        assert_eq!(fam.k(), 1);
        assert_eq!(fam.s, 1);
        assert_eq!(fam.row_assignment, vec![1, 2]);
        let brick = Brick { top_row: 1, left_pos: 2, right_pos: 0 };
        assert_eq!(
            fam.curves[0].edges,
            vec![
                CurveEdge::RowArc { row: 1, from: 0, to: 1 },
                CurveEdge::RowArc { row: 1, from: 1, to: 4 },
                CurveEdge::Vertical { pos: 1 },
                CurveEdge::BrickArc { brick, from: down(2, 2), to: up(1, 0) },
                CurveEdge::RowArc { row: 2, from: 4, to: 8 },
            ]
        );
        assert_eq!(log.count(Procedure::CrossBrickStep), 1);
        assert_eq!(log.events[0].x, vec![2, 0]);
        assert_eq!(log.crossed_gap(), Some(1));
    }

    #[test]
    fn hopf_has_no_start() {
        let (d, stats) = setup(2, &[1, 1]);
        assert_eq!(
            choose_initial_point(&d, &stats),
            Err(ConstructionError::NoNontrivialComponent)
        );
    }

    #[test]
    fn start_row_for_split_genus() {
        let (d, stats) = setup(3, &[1, 1, 1, 2, 2]);
        let q = choose_initial_point(&d, &stats).unwrap();
        assert_eq!(q.row, 1);
        assert!(d.is_under(q));
        let arc = d.arc_at(q.row, q.coord).unwrap();
        assert_eq!(arc.left, up(1, 0));
    }

    #[test]
    fn single_occurrence_is_non_minimal() {
        let (d, stats) = setup(3, &[1, 2, 2, 2]);
        let q = choose_initial_point(&d, &stats).unwrap();
        let err = run_construction(&d, q).unwrap_err();
        assert!(matches!(
            err,
            ConstructionError::NonMinimalInput { count: 1, .. }
        ));
    }

    #[test]
    fn step_count_identity() {
        for (m, w) in [
            (3, vec![1, 1, 2, 1, 1, 2, 2]),
            (3, vec![1, 2, 1, 2, 1, 2, 1, 2]),
            (4, [1, 2, 3].repeat(5)),
        ] {
            let (d, stats) = setup(m, &w);
            let q = choose_initial_point(&d, &stats).unwrap();
            let (fam, log) = run_construction(&d, q).unwrap();
            let moves = [
                Procedure::StepBelow,
                Procedure::StepAbove,
                Procedure::RestartBelow,
                Procedure::RestartAbove,
            ]
            .iter()
            .map(|&p| log.count(p))
            .sum::<usize>();
            assert_eq!(moves, m - 2, "{w:?}");
            let xs: usize = log.events.iter().map(|e| e.x.len()).sum();
            assert_eq!(xs, m);
            assert_eq!(fam.row_assignment.len(), fam.k() + 1);
            assert!(fam.row_assignment.windows(2).all(|p| p[0] < p[1]));
            assert_eq!(*fam.row_assignment.last().unwrap(), m);
        }
    }

    #[test]
    fn deterministic_log() {
        let (d, stats) = setup(3, &[1, 2, 1, 2, 1, 2, 1, 2]);
        let q = choose_initial_point(&d, &stats).unwrap();
        let a = serde_json::to_string(&run_construction(&d, q).unwrap()).unwrap();
        let b = serde_json::to_string(&run_construction(&d, q).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
