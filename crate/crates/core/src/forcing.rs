//! The eight-point configuration built from two `(a,a,a)`, two `(b,b,b)` and
//! two `(c,c,c)` equilateral triangles, and exhaustive checks that every
//! two-coloring of it (with three points fixed) has the forced monochromatic
//! triple.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colorings::Color;
use crate::geom::{third_vertex, GeomError, Orientation, Point, RigidMotion, TriangleSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
    C,
    D,
    #[serde(rename = "A'")]
    APrime,
    #[serde(rename = "B'")]
    BPrime,
    #[serde(rename = "C'")]
    CPrime,
    #[serde(rename = "D'")]
    DPrime,
}

impl Label {
    pub const ALL: [Label; 8] =
        [Label::A, Label::B, Label::C, Label::D, Label::APrime, Label::BPrime, Label::CPrime, Label::DPrime];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["A", "B", "C", "D", "A'", "B'", "C'", "D'"][self.index()]
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ForcingError {
    #[error(transparent)]
    Infeasible(#[from] GeomError),
    #[error("no mirror choice satisfies all six equilateral constraints for sides ({0}, {1}, {2})")]
    ConstructionInconsistent(f64, f64, f64),
    #[error("side lengths {0:?} differ by no more than the tolerance; multisets cannot be told apart")]
    DegenerateSides(Vec<f64>),
}

/// The labeled points `A, B, C, D, A', B', C', D'`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EightPointConfig {
    points: [Point; 8],
    sides: [f64; 3],
    /// Orientations chosen for `D, B', C', A', D'`.
    choices: [Orientation; 5],
}

impl EightPointConfig {
    pub fn point(&self, l: Label) -> Point {
        self.points[l.index()]
    }

    pub fn points(&self) -> &[Point; 8] {
        &self.points
    }

    pub fn sides(&self) -> [f64; 3] {
        self.sides
    }

    pub fn choices(&self) -> [Orientation; 5] {
        self.choices
    }

    /// The six equilateral triangles with their side length.
    pub fn constraints(&self) -> [([Label; 3], f64); 6] {
        use Label::*;
        let [a, b, c] = self.sides;
        [
            ([A, B, C], a),
            ([APrime, BPrime, CPrime], a),
            ([A, D, BPrime], b),
            ([APrime, DPrime, B], b),
            ([B, D, CPrime], c),
            ([BPrime, DPrime, C], c),
        ]
    }

    /// Largest deviation of any constraint edge from its required length.
    pub fn constraint_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (t, s) in self.constraints() {
            for (i, j) in [(0, 1), (1, 2), (0, 2)] {
                worst = worst.max((self.point(t[i]).dist(self.point(t[j])) - s).abs());
            }
        }
        worst
    }

    pub fn transformed(&self, m: &RigidMotion) -> EightPointConfig {
        EightPointConfig { points: self.points.map(|p| m.apply(p)), ..self.clone() }
    }
}

/// Builds the configuration: `A = (0,0)`, `B = (a,0)`, `C` the ccw apex of
/// `ABC`; `D` with `|AD| = b`, `|BD| = c`; then `B'`, `C'`, `A'`, `D'` by
/// completing the equilateral triangles, backtracking over mirror choices.
pub fn build_config(a: f64, b: f64, c: f64, tol: f64) -> Result<EightPointConfig, ForcingError> {
    use Orientation::{Ccw, Cw};
    TriangleSpec::with_tolerance(a, b, c, tol)?;
    let pa = Point::ORIGIN;
    let pb = Point::new(a, 0.0);
    let pc = third_vertex(pa, pb, a, a, a, Ccw, tol)?;
    for d_or in [Cw, Ccw] {
        let d = third_vertex(pa, pb, a, b, c, d_or, tol)?;
        for b_or in [Ccw, Cw] {
            let Ok(bp) = third_vertex(pa, d, b, b, b, b_or, tol) else { continue };
            for c_or in [Ccw, Cw] {
                let Ok(cp) = third_vertex(pb, d, c, c, c, c_or, tol) else { continue };
                if (bp.dist(cp) - a).abs() > tol || (bp.dist(pc) - c).abs() > tol {
                    continue;
                }
                for a_or in [Ccw, Cw] {
                    let Ok(ap) = third_vertex(bp, cp, a, a, a, a_or, tol) else { continue };
                    for dp_or in [Cw, Ccw] {
                        let Ok(dp) = third_vertex(bp, pc, c, c, c, dp_or, tol) else { continue };
                        if (dp.dist(ap) - b).abs() > tol || (dp.dist(pb) - b).abs() > tol {
                            continue;
                        }
                        let cfg = EightPointConfig {
                            points: [pa, pb, pc, d, ap, bp, cp, dp],
                            sides: [a, b, c],
                            choices: [d_or, b_or, c_or, a_or, dp_or],
                        };
                        if cfg.constraint_error() <= tol {
                            return Ok(cfg);
                        }
                    }
                }
            }
        }
    }
    Err(ForcingError::ConstructionInconsistent(a, b, c))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TripleClass {
    pub labels: [Label; 3],
    /// Sorted side lengths.
    pub sides: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TripleClassification {
    pub triples: Vec<TripleClass>,
}

impl TripleClassification {
    /// Triples whose multiset equals `target` (sorted) within `tol`.
    pub fn matching<'a>(&'a self, target: [f64; 3], tol: f64) -> impl Iterator<Item = &'a TripleClass> + 'a {
        self.triples.iter().filter(move |t| multiset_eq(t.sides, target, tol))
    }
}

fn sorted3(mut v: [f64; 3]) -> [f64; 3] {
    v.sort_by(f64::total_cmp);
    v
}

fn multiset_eq(x: [f64; 3], y: [f64; 3], tol: f64) -> bool {
    x.iter().zip(y.iter()).all(|(p, q)| (p - q).abs() <= tol)
}

/// All 56 triples with their sorted side multisets.
pub fn classify_triples(cfg: &EightPointConfig) -> TripleClassification {
    let mut triples = Vec::with_capacity(56);
    for i in 0..8 {
        for j in (i + 1)..8 {
            for k in (j + 1)..8 {
                let [p, q, r] = [i, j, k].map(|n| cfg.points[n]);
                triples.push(TripleClass {
                    labels: [Label::ALL[i], Label::ALL[j], Label::ALL[k]],
                    sides: sorted3([p.dist(q), q.dist(r), p.dist(r)]),
                });
            }
        }
    }
    TripleClassification { triples }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForcingPart {
    /// `A, B, C` black; looks for an `(a,b,c)` triple.
    #[serde(rename = "i")]
    I,
    /// `B, A, D` white; looks for an `(x,x,x)` triple, `x ∈ {a,b,c}`.
    #[serde(rename = "ii")]
    II,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColoringLog {
    pub assignment: Vec<(Label, Color)>,
    pub forced_triple: Option<[Label; 3]>,
    pub multiset: Option<[f64; 3]>,
    pub color: Option<Color>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForcingVerdict {
    pub part: ForcingPart,
    pub sides: [f64; 3],
    pub verified: bool,
    pub tested_colorings: usize,
    pub counterexample: Option<Vec<(Label, Color)>>,
    pub forced_triples_log: Vec<ColoringLog>,
}

/// Rejects side lists where two distinct values are within `tol`.
fn check_separated(values: &[f64], tol: f64) -> Result<(), ForcingError> {
    for (i, x) in values.iter().enumerate() {
        for y in &values[i + 1..] {
            let d = (x - y).abs();
            if d > 0.0 && d <= tol {
                return Err(ForcingError::DegenerateSides(vec![*x, *y]));
            }
        }
    }
    Ok(())
}

pub fn forcing_check(part: ForcingPart, a: f64, b: f64, c: f64, tol: f64) -> Result<ForcingVerdict, ForcingError> {
    use Label::*;
    TriangleSpec::with_tolerance(a, b, c, tol)?;
    check_separated(&[a, b, c], tol)?;
    let cfg = build_config(a, b, c, tol)?;
    let classes = classify_triples(&cfg);
    let (fixed, fixed_color, free, targets): (_, _, _, Vec<[f64; 3]>) = match part {
        ForcingPart::I => ([A, B, C], Color::Black, [D, APrime, BPrime, CPrime, DPrime], vec![sorted3([a, b, c])]),
        ForcingPart::II => ([B, A, D], Color::White, [BPrime, C, CPrime, APrime, DPrime], vec![[a; 3], [b; 3], [c; 3]]),
    };
    let candidates: Vec<&TripleClass> =
        classes.triples.iter().filter(|t| targets.iter().any(|&g| multiset_eq(t.sides, g, tol))).collect();

    let mut log = Vec::with_capacity(32);
    let mut counterexample = None;
    for bits in 0u32..32 {
        let mut colors = [fixed_color; 8];
        let mut assignment: Vec<(Label, Color)> = fixed.iter().map(|&l| (l, fixed_color)).collect();
        for (k, &l) in free.iter().enumerate() {
            // Bit 4 drives the first free point so the all-zero pattern is all white.
            let c = if bits >> (4 - k) & 1 == 1 { Color::Black } else { Color::White };
            colors[l.index()] = c;
            assignment.push((l, c));
        }
        let hit = candidates.iter().find(|t| {
            let [p, q, r] = t.labels.map(|l| colors[l.index()]);
            p == q && q == r
        });
        if hit.is_none() && counterexample.is_none() {
            counterexample = Some(assignment.clone());
        }
        log.push(ColoringLog {
            assignment,
            forced_triple: hit.map(|t| t.labels),
            multiset: hit.map(|t| t.sides),
            color: hit.map(|t| colors[t.labels[0].index()]),
        });
    }
    Ok(ForcingVerdict {
        part,
        sides: [a, b, c],
        verified: counterexample.is_none(),
        tested_colorings: log.len(),
        counterexample,
        forced_triples_log: log,
    })
}

pub fn forcing_check_i(a: f64, b: f64, c: f64, tol: f64) -> Result<ForcingVerdict, ForcingError> {
    forcing_check(ForcingPart::I, a, b, c, tol)
}

pub fn forcing_check_ii(a: f64, b: f64, c: f64, tol: f64) -> Result<ForcingVerdict, ForcingError> {
    forcing_check(ForcingPart::II, a, b, c, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::DEFAULT_TOLERANCE as TOL;
    use proptest::prelude::*;

    const H: f64 = 0.866_025_403_784_438_6;

    #[test]
    fn unit_config_lies_on_lattice() {
        let cfg = build_config(1.0, 1.0, 1.0, TOL).unwrap();
        for p in cfg.points() {
            let j = p.y / H;
            let i = p.x - 0.5 * j;
            assert!((j - j.round()).abs() < 1e-9 && (i - i.round()).abs() < 1e-9, "{p}");
        }
        assert!(cfg.constraint_error() < 1e-12);
    }

    #[test]
    fn constraint_examples() {
        for (a, b, c) in [(2.0, 2.0, 3.0), (1.0, 1.0, 2.0), (1.0, 2.0, 3.0), (3.0, 4.0, 5.0)] {
            let cfg = build_config(a, b, c, TOL).unwrap();
            for (t, s) in cfg.constraints() {
                let [p, q, r] = t.map(|l| cfg.point(l));
                for d in [p.dist(q), q.dist(r), p.dist(r)] {
                    assert!((d - s).abs() < 1e-9, "{t:?}");
                }
            }
        }
        assert!(matches!(build_config(1.0, 1.0, 3.0, TOL), Err(ForcingError::Infeasible(_))));
    }

    #[test]
    fn classification_examples() {
        let unit = classify_triples(&build_config(1.0, 1.0, 1.0, TOL).unwrap());
        assert_eq!(unit.triples.len(), 56);
        let abc = unit.triples.iter().find(|t| t.labels == [Label::A, Label::B, Label::C]).unwrap();
        assert!(multiset_eq(abc.sides, [1.0; 3], 1e-12));

        let cfg = build_config(2.0, 2.0, 3.0, TOL).unwrap();
        let cls = classify_triples(&cfg);
        let abd = cls.triples.iter().find(|t| t.labels == [Label::A, Label::B, Label::D]).unwrap();
        assert!(multiset_eq(abd.sides, [2.0, 2.0, 3.0], 1e-9));
        let adb = cls.triples.iter().find(|t| t.labels == [Label::A, Label::D, Label::BPrime]).unwrap();
        assert!(multiset_eq(adb.sides, [2.0; 3], 1e-9));
    }

    #[test]
    fn verdict_examples() {
        for (a, b, c) in [(1.0, 1.0, 1.0), (2.0, 2.0, 3.0), (1.0, 1.0, 2.0)] {
            let v = forcing_check_i(a, b, c, TOL).unwrap();
            assert!(v.verified && v.tested_colorings == 32, "({a},{b},{c})");
        }
        for (a, b, c) in [(1.0, 1.0, 1.0), (3.0, 4.0, 5.0), (1.0, 2.0, 3.0)] {
            let v = forcing_check_ii(a, b, c, TOL).unwrap();
            assert!(v.verified && v.tested_colorings == 32, "({a},{b},{c})");
        }
    }

    #[test]
    fn near_equal_sides_are_rejected() {
        let r = forcing_check_i(1.0, 1.0 + 5e-10, 1.5, TOL);
        assert!(matches!(r, Err(ForcingError::DegenerateSides(_))));
    }

    #[test]
    fn all_white_extension_log() {
        let v = forcing_check_i(2.0, 2.0, 3.0, TOL).unwrap();
        let entry = &v.forced_triples_log[0];
        assert!(entry.assignment[3..].iter().all(|(_, c)| *c == Color::White));
        let labels = entry.forced_triple.unwrap();
        let cfg = build_config(2.0, 2.0, 3.0, TOL).unwrap();
        let [p, q, r] = labels.map(|l| cfg.point(l));
        assert!(multiset_eq(sorted3([p.dist(q), q.dist(r), p.dist(r)]), [2.0, 2.0, 3.0], 1e-9));
        let colors: Vec<Color> =
            labels.iter().map(|l| entry.assignment.iter().find(|(m, _)| m == l).unwrap().1).collect();
        assert!(colors.iter().all(|&c| c == colors[0]));
    }

    #[test]
    fn every_constraint_triangle_is_classified() {
        let cfg = build_config(2.0, 2.5, 3.0, TOL).unwrap();
        let cls = classify_triples(&cfg);
        for s in cfg.sides() {
            assert!(cls.matching([s; 3], 1e-9).count() >= 2);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn both_parts_hold(a in 0.1f64..5.0, b in 0.1f64..5.0, t in 0.0f64..=1.0) {
            let c = (a - b).abs() + t * (a + b - (a - b).abs());
            let i = forcing_check_i(a, b, c, TOL);
            let ii = forcing_check_ii(a, b, c, TOL);
            if let (Err(ForcingError::DegenerateSides(_)), _) | (_, Err(ForcingError::DegenerateSides(_))) = (&i, &ii) {
                return Ok(());
            }
            prop_assert!(i.unwrap().verified);
            prop_assert!(ii.unwrap().verified);
        }

        #[test]
        fn classification_is_motion_invariant(angle in 0.0..std::f64::consts::TAU, tx in -10.0f64..10.0, ty in -10.0f64..10.0) {
            let cfg = build_config(1.3, 2.1, 2.9, TOL).unwrap();
            let m = RigidMotion::new(angle, Point::new(tx, ty));
            let a = classify_triples(&cfg);
            let b = classify_triples(&cfg.transformed(&m));
            for (x, y) in a.triples.iter().zip(&b.triples) {
                prop_assert_eq!(x.labels, y.labels);
                prop_assert!(multiset_eq(x.sides, y.sides, 1e-9));
            }
        }
    }
}
