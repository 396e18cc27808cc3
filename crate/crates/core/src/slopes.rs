//! Type X / Y crossings, r-vectors and the admissible multislope region.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{ComponentPartition, ComponentStats};
use crate::brick::{BrickDiagram, SCALE};
use crate::curves::{EventLog, Procedure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("event log does not match the diagram: {0}")]
    LogInconsistent(String),
    #[error("point at coordinate {0} lies on a vertical segment column")]
    OnSegment(usize),
    #[error("gap {0} is outside the diagram")]
    NoGap(usize),
    #[error("r(x_{index}) - r(x_{prev}) is {got:?}, expected one step in component {expected}", prev = index - 1)]
    Increment { index: usize, expected: usize, got: Vec<i64> },
    #[error("expected {expected} slopes, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cannot parse slope {0:?}")]
    BadSlope(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingClass {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub pos: usize,
    pub generator: usize,
    pub class: CrossingClass,
    pub procedure: Option<Procedure>,
    pub over_strand_component: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSlope {
    pub component: usize,
    /// Crossings with both strands in this component (blackboard framing).
    pub n: usize,
    /// Type X crossings whose over-strand lies in this component.
    pub x: usize,
    pub realized_slope: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub crossings: Vec<Crossing>,
    pub components: Vec<ComponentSlope>,
}

impl CrossingReport {
    pub fn x_count(&self) -> usize {
        self.crossings.iter().filter(|c| c.class == CrossingClass::X).count()
    }

    /// x_k = m_k and N_k - x_k = 2g_k - 1 for every component.
    pub fn identities_hold(&self, stats: &ComponentStats) -> bool {
        self.components.len() == stats.components.len()
            && self.components.iter().zip(&stats.components).all(|(c, s)| {
                c.x == s.strand_count && c.realized_slope == 2 * s.genus as i64 - 1
            })
    }
}

/// Strand on `row` just right of coordinate `coord`, which must avoid segment columns.
fn strand_at(d: &BrickDiagram, table: &[Vec<usize>], row: usize, coord: usize) -> usize {
    let j = (coord % d.circle()) / SCALE;
    table[j + 1][row - 1]
}

pub fn classify_crossings(
    d: &BrickDiagram,
    log: &EventLog,
    parts: &ComponentPartition,
) -> Result<CrossingReport, SlopeError> {
    let table = d.word().level_table();
    let mut designated: Vec<Option<Procedure>> = vec![None; d.letters()];
    for e in &log.events {
        for &pos in &e.x {
            let slot = designated
                .get_mut(pos)
                .ok_or_else(|| SlopeError::LogInconsistent(format!("no letter at {pos}")))?;
            if slot.is_some() {
                return Err(SlopeError::LogInconsistent(format!("letter {pos} designated twice")));
            }
            *slot = Some(e.procedure);
        }
    }
    let mut components: Vec<ComponentSlope> = (0..parts.count())
        .map(|k| ComponentSlope { component: k, n: 0, x: 0, realized_slope: 0 })
        .collect();
    let mut crossings = Vec::with_capacity(d.letters());
    for (pos, seg) in d.segments().iter().enumerate() {
        let g = seg.generator;
        let over = parts.of_strand(table[pos][g - 1]);
        let under = parts.of_strand(table[pos][g]);
        if over == under {
            components[over].n += 1;
        }
        let class = if designated[pos].is_some() { CrossingClass::X } else { CrossingClass::Y };
        if class == CrossingClass::X {
            components[over].x += 1;
        }
        crossings.push(Crossing {
            pos,
            generator: g,
            class,
            procedure: designated[pos],
            over_strand_component: over,
        });
    }
    for c in &mut components {
        c.realized_slope = c.n as i64 - c.x as i64;
    }
    Ok(CrossingReport { crossings, components })
}

/// Strands crossed, per component, by a vertical descent from above the first
/// row into gap `gap` (0 is above row 1, m below row m) at `coord`.
pub fn r_vector(
    d: &BrickDiagram,
    parts: &ComponentPartition,
    gap: usize,
    coord: usize,
) -> Result<Vec<usize>, SlopeError> {
    if gap > d.strands() {
        return Err(SlopeError::NoGap(gap));
    }
    if coord % SCALE == 0 {
        return Err(SlopeError::OnSegment(coord));
    }
    let table = d.word().level_table();
    let mut r = vec![0; parts.count()];
    for row in 1..=gap {
        r[parts.of_strand(strand_at(d, &table, row, coord))] += 1;
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XPoint {
    pub index: usize,
    pub gap: usize,
    pub coord: usize,
    pub r: Vec<usize>,
}

/// The crossings c₁…c_m in order, read off the log.
pub fn ordered_x_crossings(d: &BrickDiagram, log: &EventLog) -> Result<Vec<usize>, SlopeError> {
    let m = d.strands();
    let cross = log
        .events
        .iter()
        .find(|e| e.procedure == Procedure::CrossBrickStep)
        .ok_or_else(|| SlopeError::LogInconsistent("no crossing step".into()))?;
    let t = cross.row;
    let (left, right) = match cross.x[..] {
        [l, r] => (l, r),
        _ => return Err(SlopeError::LogInconsistent("crossing step must mark two letters".into())),
    };
    let mut by_gap: Vec<Vec<usize>> = vec![Vec::new(); m];
    for e in &log.events {
        if e.procedure == Procedure::CrossBrickStep {
            continue;
        }
        for &pos in &e.x {
            if pos >= d.letters() {
                return Err(SlopeError::LogInconsistent(format!("no letter at {pos}")));
            }
            by_gap[d.segment(pos).generator].push(pos);
        }
    }
    let mut c = vec![0usize; m + 1];
    for (g, list) in by_gap.iter().enumerate().skip(1) {
        let expected = if g == t { 0 } else { 1 };
        if list.len() != expected {
            return Err(SlopeError::LogInconsistent(format!(
                "gap {g} has {} Type X crossings outside the crossing step, expected {expected}",
                list.len()
            )));
        }
        if g < t {
            c[g] = list[0];
        } else if g > t {
            c[g + 1] = list[0];
        }
    }
    c[t] = right;
    c[t + 1] = left;
    Ok(c[1..].to_vec())
}

/// Points x₀…x_m with their r-vectors, checked to step by one over-strand at a time.
pub fn select_x_points(
    d: &BrickDiagram,
    log: &EventLog,
    parts: &ComponentPartition,
) -> Result<Vec<XPoint>, SlopeError> {
    let m = d.strands();
    let l = d.circle();
    let c = ordered_x_crossings(d, log)?;
    let t = log.crossed_gap().expect("checked above");
    let table = d.word().level_table();
    let mut points = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let coord = if i == 0 || i == m {
            1
        } else if i <= t {
            (c[i - 1] * SCALE + l - 1) % l
        } else {
            c[i] * SCALE + 1
        };
        points.push(XPoint { index: i, gap: i, coord, r: r_vector(d, parts, i, coord)? });
    }
    for i in 1..=m {
        let pos = c[i - 1];
        let g = d.segment(pos).generator;
        let expected = parts.of_strand(table[pos][g - 1]);
        let got: Vec<i64> = points[i]
            .r
            .iter()
            .zip(&points[i - 1].r)
            .map(|(&a, &b)| a as i64 - b as i64)
            .collect();
        let unit = got.iter().enumerate().all(|(k, &v)| v == i64::from(k == expected));
        if !unit {
            return Err(SlopeError::Increment { index: i, expected, got });
        }
    }
    Ok(points)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// Weight on the framed longitudinal route.
    pub a: BigInt,
    /// Weight on the meridian route.
    pub b: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDecision {
    pub component: usize,
    pub slope: BigRational,
    /// 2g - 1; admissible slopes lie strictly below it.
    pub bound: i64,
    pub admissible: bool,
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultislopeDecision {
    pub admissible: bool,
    pub components: Vec<ComponentDecision>,
}

pub fn slope_bounds(stats: &ComponentStats) -> Vec<i64> {
    stats.components.iter().map(|c| 2 * c.genus as i64 - 1).collect()
}

pub fn admissible_multislope(
    stats: &ComponentStats,
    s: &[BigRational],
) -> Result<MultislopeDecision, SlopeError> {
    let bounds = slope_bounds(stats);
    if s.len() != bounds.len() {
        return Err(SlopeError::DimensionMismatch { expected: bounds.len(), got: s.len() });
    }
    let components: Vec<ComponentDecision> = s
        .iter()
        .zip(&bounds)
        .enumerate()
        .map(|(k, (slope, &bound))| {
            let gap = BigRational::from_integer(bound.into()) - slope;
            let certificate = gap.is_positive().then(|| Certificate {
                a: gap.denom().clone(),
                b: gap.numer().clone(),
            });
            ComponentDecision {
                component: k,
                slope: slope.clone(),
                bound,
                admissible: certificate.is_some(),
                certificate,
            }
        })
        .collect();
    Ok(MultislopeDecision { admissible: components.iter().all(|c| c.admissible), components })
}

/// Rebuilds a slope from its certificate: (2g - 1) - b/a.
pub fn certificate_slope(bound: i64, cert: &Certificate) -> BigRational {
    BigRational::from_integer(bound.into()) - BigRational::new(cert.b.clone(), cert.a.clone())
}

pub fn parse_slope(text: &str) -> Result<BigRational, SlopeError> {
    let t = text.trim();
    let bad = || SlopeError::BadSlope(text.to_string());
    let r: BigRational = t.parse().map_err(|_| bad())?;
    if r.denom().is_zero() {
        return Err(bad());
    }
    Ok(r)
}

pub fn parse_multislope(text: &str) -> Result<Vec<BigRational>, SlopeError> {
    text.split(',').map(parse_slope).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{component_stats, components_of, BraidWord};
    use crate::brick::build_brick_diagram;
    use crate::curves::{choose_initial_point, run_construction};

    struct Run {
        d: BrickDiagram,
        parts: ComponentPartition,
        stats: ComponentStats,
        log: EventLog,
    }

    fn run(m: usize, letters: &[usize]) -> Run {
        let w = BraidWord::new(m, letters.to_vec()).unwrap();
        let parts = components_of(&w);
        let stats = component_stats(&w, &parts).unwrap();
        let d = build_brick_diagram(&w);
        let q = choose_initial_point(&d, &stats).unwrap();
        let (_, log) = run_construction(&d, q).unwrap();
        Run { d, parts, stats, log }
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn trefoil_crossings() {
        let r = run(2, &[1, 1, 1]);
        let rep = classify_crossings(&r.d, &r.log, &r.parts).unwrap();
        let classes: Vec<CrossingClass> = rep.crossings.iter().map(|c| c.class).collect();
        // start point sits left of s₁ here, so X = {s₀, s₂} in these coordinates
        assert_eq!(classes, vec![CrossingClass::X, CrossingClass::Y, CrossingClass::X]);
        assert_eq!(rep.x_count(), 2);
        assert_eq!(rep.components[0].n, 3);
        assert_eq!(rep.components[0].realized_slope, 1);
        assert!(rep.identities_hold(&r.stats));
    }

    #[test]
    fn split_genus_crossings() {
        let r = run(3, &[1, 1, 1, 2, 2]);
        let rep = classify_crossings(&r.d, &r.log, &r.parts).unwrap();
        assert_eq!(rep.x_count(), 3);
        let slopes: Vec<(usize, i64)> =
            rep.components.iter().map(|c| (c.x, c.realized_slope)).collect();
        assert_eq!(slopes, vec![(2, 1), (1, -1)]);
        assert!(rep.identities_hold(&r.stats));
    }

    #[test]
    fn trefoil_r_vectors() {
        let r = run(2, &[1, 1, 1]);
        assert_eq!(r_vector(&r.d, &r.parts, 0, 1).unwrap(), vec![0]);
        assert_eq!(r_vector(&r.d, &r.parts, 1, 5).unwrap(), vec![1]);
        assert_eq!(r_vector(&r.d, &r.parts, 2, 7).unwrap(), vec![2]);
        assert!(r_vector(&r.d, &r.parts, 1, 4).is_err());
    }

    #[test]
    fn x_points_step_by_over_strands() {
        for (m, w) in [
            (2, vec![1, 1, 1]),
            (3, vec![1, 1, 1, 2, 2]),
            (3, vec![1, 2, 1, 2, 1, 2, 1, 2]),
            (3, vec![1, 1, 1, 2, 1, 1, 2, 2]),
        ] {
            let r = run(m, &w);
            let xs = select_x_points(&r.d, &r.log, &r.parts).unwrap();
            assert_eq!(xs.len(), m + 1);
            assert!(xs[0].r.iter().all(|&v| v == 0));
            let last: Vec<usize> = r.stats.components.iter().map(|c| c.strand_count).collect();
            assert_eq!(xs[m].r, last);
        }
    }

    #[test]
    fn multislope_examples() {
        let r = run(2, &[1, 1, 1]);
        let dec = admissible_multislope(&r.stats, &[rat(-3, 1)]).unwrap();
        assert!(dec.admissible);
        let cert = dec.components[0].certificate.clone().unwrap();
        assert_eq!((cert.a, cert.b), (BigInt::from(1), BigInt::from(4)));
        assert!(!admissible_multislope(&r.stats, &[rat(1, 1)]).unwrap().admissible);
        assert!(admissible_multislope(&r.stats, &[]).is_err());

        let r = run(3, &[1, 1, 1, 2, 2]);
        let dec = admissible_multislope(&r.stats, &[rat(0, 1), rat(-2, 1)]).unwrap();
        assert!(dec.admissible);
        for c in &dec.components {
            let cert = c.certificate.clone().unwrap();
            assert_eq!((cert.a, cert.b), (BigInt::from(1), BigInt::from(1)));
        }
    }

    #[test]
    fn slope_parsing() {
        assert_eq!(parse_slope("-7/2").unwrap(), rat(-7, 2));
        assert_eq!(parse_slope(" 3 ").unwrap(), rat(3, 1));
        assert!(parse_slope("1/0").is_err());
        assert!(parse_slope("x").is_err());
        assert_eq!(parse_multislope("0,-2").unwrap(), vec![rat(0, 1), rat(-2, 1)]);
    }
}
