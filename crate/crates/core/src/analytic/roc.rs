use serde::Serialize;

/// How operating points between stored points are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    /// Points sample a smooth curve.
    Continuous,
    /// Points are deterministic-test vertices; anything between two
    /// neighbours is reached by randomizing between them.
    RandomizedSegments,
}

/// Provenance of a stored point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    /// Deterministic threshold test.
    Vertex,
    /// Interior point of a randomized segment.
    Segment,
    /// Sample of a continuous curve.
    Sample,
    /// (0, 0) or (1, 1).
    Endpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    pub p_false_alarm: f64,
    pub p_detect: f64,
    pub kind: PointKind,
}

/// Ordered `(P_F, P_D)` operating points, `P_F` strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    points: Vec<RocPoint>,
    interpolation: Interpolation,
}

impl RocCurve {
    /// Builds a curve from points already ordered by `P_F`.
    ///
    /// Panics if the ordering invariant does not hold; every constructor in
    /// this crate produces ordered points.
    pub(crate) fn from_sorted(points: Vec<RocPoint>, interpolation: Interpolation) -> Self {
        let curve = Self { points, interpolation };
        debug_assert!(curve.check().is_ok(), "{:?}", curve.check());
        curve
    }

    pub fn points(&self) -> &[RocPoint] {
        &self.points
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn vertices(&self) -> impl Iterator<Item = &RocPoint> {
        self.points.iter().filter(|p| p.kind == PointKind::Vertex)
    }

    /// `P_D` of the piecewise-linear envelope at `p_false_alarm`.
    pub fn p_detect_at(&self, p_false_alarm: f64) -> f64 {
        let pts = &self.points;
        let pf = p_false_alarm.clamp(0.0, 1.0);
        if pf <= pts[0].p_false_alarm {
            return pts[0].p_detect;
        }
        let last = pts[pts.len() - 1];
        if pf >= last.p_false_alarm {
            return last.p_detect;
        }
        let i = pts.partition_point(|p| p.p_false_alarm <= pf);
        let (a, b) = (pts[i - 1], pts[i]);
        let t = (pf - a.p_false_alarm) / (b.p_false_alarm - a.p_false_alarm);
        a.p_detect + t * (b.p_detect - a.p_detect)
    }

    /// Stored points plus `per_segment` evenly spaced interior points on
    /// every randomized segment. Continuous curves are returned unchanged.
    pub fn materialize(&self, per_segment: usize) -> Vec<RocPoint> {
        if self.interpolation == Interpolation::Continuous || per_segment == 0 {
            return self.points.clone();
        }
        let mut out = Vec::with_capacity(self.points.len() * (per_segment + 1));
        for w in self.points.windows(2) {
            out.push(w[0]);
            for k in 1..=per_segment {
                let t = k as f64 / (per_segment + 1) as f64;
                out.push(RocPoint {
                    p_false_alarm: w[0].p_false_alarm + t * (w[1].p_false_alarm - w[0].p_false_alarm),
                    p_detect: w[0].p_detect + t * (w[1].p_detect - w[0].p_detect),
                    kind: PointKind::Segment,
                });
            }
        }
        out.push(*self.points.last().expect("curve is nonempty"));
        out
    }

    /// Checks ordering, range, monotonicity and (for randomized curves)
    /// concavity of the envelope.
    pub fn check(&self) -> Result<(), String> {
        let pts = &self.points;
        if pts.len() < 2 {
            return Err("curve needs at least two points".into());
        }
        for p in pts {
            if !(0.0..=1.0).contains(&p.p_false_alarm) || !(0.0..=1.0).contains(&p.p_detect) {
                return Err(format!("point out of range: {p:?}"));
            }
        }
        for w in pts.windows(2) {
            if w[1].p_false_alarm <= w[0].p_false_alarm {
                return Err(format!("P_F not strictly increasing at {:?}", w[1]));
            }
            if w[1].p_detect < w[0].p_detect {
                return Err(format!("P_D decreasing at {:?}", w[1]));
            }
        }
        let last = pts[pts.len() - 1];
        if last.p_false_alarm != 1.0 || last.p_detect != 1.0 {
            return Err("curve must end at (1, 1)".into());
        }
        if self.interpolation == Interpolation::RandomizedSegments {
            for w in pts.windows(3) {
                let s1 = (w[1].p_detect - w[0].p_detect) / (w[1].p_false_alarm - w[0].p_false_alarm);
                let s2 = (w[2].p_detect - w[1].p_detect) / (w[2].p_false_alarm - w[1].p_false_alarm);
                if s2 > s1 * (1.0 + 1e-9) + 1e-12 {
                    return Err(format!("envelope not concave at {:?}", w[1]));
                }
            }
        }
        Ok(())
    }
}
