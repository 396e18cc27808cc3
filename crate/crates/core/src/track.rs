//! Oriented train tracks on the torus with exact transverse measures.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrackError {
    #[error("malformed track: {0}")]
    Malformed(String),
    #[error("Euler characteristic V - E + F = {v} - {e} + {f} is not 0")]
    Euler { v: usize, e: usize, f: usize },
    #[error("track is not recurrent")]
    NotRecurrent,
    #[error("complement is not a union of bigons")]
    NotAllBigons,
    #[error("measure violates the switch equation at switch {0}")]
    SwitchEquation(usize),
    #[error("measure has {got} weights for {expected} branches")]
    WrongLength { expected: usize, got: usize },
    #[error("more than {0} cycles")]
    TooManyCycles(usize),
    #[error("cannot parse slope {0:?}")]
    BadSlope(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Switch {
    #[serde(rename = "in")]
    pub inbound: Vec<usize>,
    pub out: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub from: usize,
    pub to: usize,
    /// Homology class `[q, p]`, read as slope p/q.
    pub class: [i64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub walk: Vec<usize>,
    pub cusps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusTrack {
    pub switches: Vec<Switch>,
    pub branches: Vec<Branch>,
    pub faces: Vec<Face>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub face_index: Vec<Rational64>,
    pub all_bigons: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measure {
    pub weights: Vec<BigRational>,
    pub positive: bool,
}

impl Measure {
    pub fn new(weights: Vec<BigRational>) -> Self {
        let positive = weights.iter().all(|w| w.is_positive());
        Measure { weights, positive }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slope {
    Rational(BigRational),
    Infinity,
}

impl Slope {
    /// Primitive class (q, p) of p/q with q > 0; (0, 1) for infinity.
    pub fn class(&self) -> [BigInt; 2] {
        match self {
            Slope::Infinity => [BigInt::zero(), BigInt::one()],
            Slope::Rational(r) => [r.denom().clone(), r.numer().clone()],
        }
    }
}

impl std::str::FromStr for Slope {
    type Err = TrackError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if matches!(t, "inf" | "infinity" | "∞" | "1/0") {
            return Ok(Slope::Infinity);
        }
        t.parse::<BigRational>()
            .map(Slope::Rational)
            .map_err(|_| TrackError::BadSlope(s.to_string()))
    }
}

impl std::fmt::Display for Slope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Slope::Infinity => write!(f, "inf"),
            Slope::Rational(r) => write!(f, "{r}"),
        }
    }
}

fn check_incidence(t: &TorusTrack) -> Result<(), TrackError> {
    let bad = |s: String| Err(TrackError::Malformed(s));
    let nb = t.branches.len();
    let mut seen_in = vec![0usize; nb];
    let mut seen_out = vec![0usize; nb];
    for (s, sw) in t.switches.iter().enumerate() {
        for &b in &sw.inbound {
            if b >= nb {
                return bad(format!("switch {s} lists unknown branch {b}"));
            }
            if t.branches[b].to != s {
                return bad(format!("branch {b} enters switch {s} but ends at {}", t.branches[b].to));
            }
            seen_in[b] += 1;
        }
        for &b in &sw.out {
            if b >= nb {
                return bad(format!("switch {s} lists unknown branch {b}"));
            }
            if t.branches[b].from != s {
                return bad(format!("branch {b} leaves switch {s} but starts at {}", t.branches[b].from));
            }
            seen_out[b] += 1;
        }
    }
    for b in 0..nb {
        let br = &t.branches[b];
        if br.from >= t.switches.len() || br.to >= t.switches.len() {
            return bad(format!("branch {b} has an endpoint outside the switch list"));
        }
        if seen_in[b] != 1 || seen_out[b] != 1 {
            return bad(format!("branch {b} must appear once on each side"));
        }
    }
    for (i, f) in t.faces.iter().enumerate() {
        if f.walk.is_empty() {
            return bad(format!("face {i} has an empty boundary walk"));
        }
        if let Some(b) = f.walk.iter().find(|&&b| b >= nb) {
            return bad(format!("face {i} walks over unknown branch {b}"));
        }
    }
    Ok(())
}

pub fn validate_track(t: &TorusTrack) -> Result<TrackReport, TrackError> {
    check_incidence(t)?;
    let (v, e, f) = (t.switches.len(), t.branches.len(), t.faces.len());
    if v + f != e {
        return Err(TrackError::Euler { v, e, f });
    }
    let face_index: Vec<Rational64> =
        t.faces.iter().map(|f| Rational64::new(2 - f.cusps as i64, 2)).collect();
    let all_bigons = t.faces.iter().all(|f| f.cusps == 2);
    Ok(TrackReport { vertices: v, edges: e, faces: f, face_index, all_bigons })
}

/// Every branch lies on a directed cycle of the switch graph.
pub fn is_recurrent(t: &TorusTrack) -> bool {
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..t.switches.len()).map(|_| g.add_node(())).collect();
    for b in &t.branches {
        if b.from < nodes.len() && b.to < nodes.len() {
            g.add_edge(nodes[b.from], nodes[b.to], ());
        }
    }
    let mut scc_of = vec![usize::MAX; nodes.len()];
    for (i, comp) in tarjan_scc(&g).iter().enumerate() {
        for n in comp {
            scc_of[n.index()] = i;
        }
    }
    t.branches.iter().all(|b| {
        b.from < nodes.len() && b.to < nodes.len() && (b.from == b.to || scc_of[b.from] == scc_of[b.to])
    })
}

fn switch_matrix(t: &TorusTrack) -> Vec<Vec<BigRational>> {
    let mut rows = vec![vec![BigRational::zero(); t.branches.len()]; t.switches.len()];
    for (s, sw) in t.switches.iter().enumerate() {
        for &b in &sw.inbound {
            rows[s][b] += BigRational::one();
        }
        for &b in &sw.out {
            rows[s][b] -= BigRational::one();
        }
    }
    rows
}

/// Basis of the rational solutions of the switch equations.
pub fn measure_kernel(t: &TorusTrack) -> Vec<Vec<BigRational>> {
    let n = t.branches.len();
    let mut a = switch_matrix(t);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let delta = &f * &a[row][c];
                    a[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigRational::zero(); n];
            v[fc] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][fc].clone();
            }
            v
        })
        .collect()
}

fn check_switches(t: &TorusTrack, w: &[BigRational]) -> Result<(), TrackError> {
    if w.len() != t.branches.len() {
        return Err(TrackError::WrongLength { expected: t.branches.len(), got: w.len() });
    }
    for (s, row) in switch_matrix(t).iter().enumerate() {
        let total: BigRational = row.iter().zip(w).map(|(a, b)| a * b).sum();
        if !total.is_zero() {
            return Err(TrackError::SwitchEquation(s));
        }
    }
    Ok(())
}

pub fn homology_of(t: &TorusTrack, mu: &Measure) -> Result<[BigRational; 2], TrackError> {
    check_switches(t, &mu.weights)?;
    let mut h = [BigRational::zero(), BigRational::zero()];
    for (b, w) in t.branches.iter().zip(&mu.weights) {
        for k in 0..2 {
            h[k] += w * BigRational::from_integer(b.class[k].into());
        }
    }
    Ok(h)
}

const CYCLE_CAP: usize = 100_000;

/// Simple directed cycles of the switch graph, as branch lists.
pub fn simple_cycles(t: &TorusTrack) -> Result<Vec<Vec<usize>>, TrackError> {
    let nv = t.switches.len();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (i, b) in t.branches.iter().enumerate() {
        out_edges[b.from].push(i);
    }
    let mut cycles = Vec::new();
    for start in 0..nv {
        let mut on_path = vec![false; nv];
        let mut path = Vec::new();
        // stack of (vertex, next out-edge index)
        let mut stack = vec![(start, 0usize)];
        on_path[start] = true;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < out_edges[v].len() {
                let e = out_edges[v][*next];
                *next += 1;
                let w = t.branches[e].to;
                if w == start {
                    let mut c = path.clone();
                    c.push(e);
                    cycles.push(c);
                    if cycles.len() > CYCLE_CAP {
                        return Err(TrackError::TooManyCycles(CYCLE_CAP));
                    }
                } else if w > start && !on_path[w] {
                    on_path[w] = true;
                    path.push(e);
                    stack.push((w, 0));
                }
            } else {
                on_path[v] = false;
                stack.pop();
                path.pop();
            }
        }
    }
    Ok(cycles)
}

fn dot(a: &[BigRational; 2], b: &[BigRational; 2]) -> BigRational {
    &a[0] * &b[0] + &a[1] * &b[1]
}

/// Positive weights λ on the generators with Σλ·gen proportional to `d` by a
/// positive factor, if any exist.
fn positive_combination(gens: &[[BigRational; 2]], d: &[BigRational; 2]) -> Option<Vec<BigRational>> {
    let n = [-d[1].clone(), d[0].clone()];
    let a: Vec<BigRational> = gens.iter().map(|g| dot(&n, g)).collect();
    let b: Vec<BigRational> = gens.iter().map(|g| dot(d, g)).collect();
    let mut lambda = vec![BigRational::one(); gens.len()];
    let total_a: BigRational = a.iter().sum();
    if !total_a.is_zero() {
        // push the normal component back to zero with a generator on the other side
        let j = (0..gens.len()).find(|&j| a[j].is_positive() != total_a.is_positive() && !a[j].is_zero())?;
        lambda[j] += -&total_a / &a[j];
    }
    let total_b: BigRational = lambda.iter().zip(&b).map(|(l, x)| l * x).sum();
    if total_b.is_positive() {
        return Some(lambda);
    }
    // a direction inside {a·x = 0, x >= 0} that gains along d
    let mut dir: Option<(Vec<(usize, BigRational)>, BigRational)> = None;
    for i in 0..gens.len() {
        if a[i].is_zero() && b[i].is_positive() {
            dir = Some((vec![(i, BigRational::one())], b[i].clone()));
            break;
        }
    }
    if dir.is_none() {
        'pairs: for i in 0..gens.len() {
            if !a[i].is_positive() {
                continue;
            }
            for j in 0..gens.len() {
                if !a[j].is_negative() {
                    continue;
                }
                let (ci, cj) = (-a[j].clone(), a[i].clone());
                let gain = &ci * &b[i] + &cj * &b[j];
                if gain.is_positive() {
                    dir = Some((vec![(i, ci), (j, cj)], gain));
                    break 'pairs;
                }
            }
        }
    }
    let (u, gain) = dir?;
    let scale = -&total_b / &gain + BigRational::one();
    for (i, c) in u {
        lambda[i] += &scale * c;
    }
    Some(lambda)
}

/// A strictly positive measure whose class is a positive multiple of the
/// slope's class (or of its negative), or `None` when the track carries none.
pub fn realize_slope(t: &TorusTrack, s: &Slope) -> Result<Option<Measure>, TrackError> {
    let report = validate_track(t)?;
    if !report.all_bigons {
        return Err(TrackError::NotAllBigons);
    }
    if !is_recurrent(t) {
        return Err(TrackError::NotRecurrent);
    }
    if t.branches.is_empty() {
        return Ok(None);
    }
    let cycles = simple_cycles(t)?;
    let gens: Vec<[BigRational; 2]> = cycles
        .iter()
        .map(|c| {
            let mut h = [BigRational::zero(), BigRational::zero()];
            for &e in c {
                for k in 0..2 {
                    h[k] += BigRational::from_integer(t.branches[e].class[k].into());
                }
            }
            h
        })
        .collect();
    let [q, p] = s.class();
    let d = [BigRational::from_integer(q), BigRational::from_integer(p)];
    let neg = [-d[0].clone(), -d[1].clone()];
    for target in [&d, &neg] {
        let Some(lambda) = positive_combination(&gens, target) else {
            continue;
        };
        let mut w = vec![BigRational::zero(); t.branches.len()];
        for (c, l) in cycles.iter().zip(&lambda) {
            for &e in c {
                w[e] += l;
            }
        }
        let mu = Measure::new(w);
        let h = homology_of(t, &mu)?;
        let normal = [-target[1].clone(), target[0].clone()];
        assert!(mu.positive, "cycle combination must be positive on a recurrent track");
        assert!(dot(&normal, &h).is_zero() && dot(target, &h).is_positive());
        return Ok(Some(mu));
    }
    Ok(None)
}

/// One switch, branches with classes (1, n) and (0, -1), one bigon face.
pub fn two_branch_track(n: i64) -> TorusTrack {
    TorusTrack {
        switches: vec![Switch { inbound: vec![0, 1], out: vec![0, 1] }],
        branches: vec![
            Branch { from: 0, to: 0, class: [1, n] },
            Branch { from: 0, to: 0, class: [0, -1] },
        ],
        faces: vec![Face { walk: vec![0, 1, 0, 1], cusps: 2 }],
    }
}

/// Whether `h` is a nonzero multiple of the class of `s`.
pub fn proportional(h: &[BigRational; 2], s: &Slope) -> bool {
    let [q, p] = s.class();
    let d = [BigRational::from_integer(q), BigRational::from_integer(p)];
    let cross = &h[0] * &d[1] - &h[1] * &d[0];
    cross.is_zero() && !(h[0].is_zero() && h[1].is_zero())
}
