//! Canonical text form. Parsing the output reproduces the construction.

use super::{Construction, Predicate, Step, StepKind};
use std::fmt;

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use StepKind::*;
        let kw = self.object_kind().keyword();
        let id = &self.id;
        match &self.kind {
            FreePoint { at: None } => write!(f, "point {id} free"),
            FreePoint { at: Some(c) } => {
                let coords: Vec<String> = c.iter().map(|r| r.to_string()).collect();
                write!(f, "point {id} free at ({})", coords.join(", "))
            }
            PointOnLine(l) => write!(f, "{kw} {id} = on_line({l})"),
            PointOnCircle(c) => write!(f, "{kw} {id} = on_circle({c})"),
            Midpoint(a, b) => write!(f, "{kw} {id} = midpoint({a}, {b})"),
            Line(a, b) => write!(f, "{kw} {id} = line({a}, {b})"),
            Segment(a, b) => write!(f, "{kw} {id} = segment({a}, {b})"),
            Circle(a, b) => write!(f, "{kw} {id} = circle({a}, {b})"),
            CircleDiameter(a, b) => write!(f, "{kw} {id} = circle_diameter({a}, {b})"),
            IntersectLines(a, b) => write!(f, "{kw} {id} = intersect({a}, {b})"),
            IntersectLineCircle(a, b, k) => write!(f, "{kw} {id} = intersect({a}, {b}, {k})"),
            Foot(a, b) => write!(f, "{kw} {id} = foot({a}, {b})"),
            PerpendicularLine(a, b) => write!(f, "{kw} {id} = perpendicular({a}, {b})"),
            ParallelLine(a, b) => write!(f, "{kw} {id} = parallel({a}, {b})"),
            Reflect(a, b) => write!(f, "{kw} {id} = reflect({a}, {b})"),
            Rotate90(a, b, s) => write!(f, "{kw} {id} = rotate90({a}, {b}, {s})"),
            Divide(a, b, i, n) => write!(f, "{kw} {id} = divide({a}, {b}, {i}, {n})"),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Collinear(a, b, c) => write!(f, "collinear({a}, {b}, {c})"),
            Predicate::Parallel(a, b) => write!(f, "parallel({a}, {b})"),
            Predicate::Perpendicular(a, b) => write!(f, "perpendicular({a}, {b})"),
            Predicate::EqualLength(a, b) => write!(f, "equal_length({a}, {b})"),
            Predicate::Concyclic(a, b, c, d) => write!(f, "concyclic({a}, {b}, {c}, {d})"),
            Predicate::PointOn(p, o) => write!(f, "point_on({p}, {o})"),
            Predicate::Coincide(a, b) => write!(f, "coincide({a}, {b})"),
            Predicate::MidpointOf(m, a, b) => write!(f, "midpoint_of({m}, {a}, {b})"),
            Predicate::Equal(a, b) => write!(f, "eq({a}, {b})"),
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dimension != 2 {
            writeln!(f, "dimension {}", self.dimension)?;
        }
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        for m in &self.measures {
            writeln!(f, "measure {} = {}", m.name, m.expr)?;
        }
        for s in &self.statements {
            writeln!(f, "statement {} = {}", s.label, s.predicate)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::construction::parse;

    #[test]
    fn round_trip() {
        let src = "dimension 3\npoint A free at (1, -1/2, 0.25)\npoint B free\npoint M = midpoint(A, B)\n\
                   segment s = segment(A, M)\npoint P = on_line(s)\nstatement t = collinear(A, P, B)";
        let c = parse(src).unwrap();
        let printed = c.to_string();
        assert!(printed.contains("point A free at (1, -1/2, 1/4)"));
        assert_eq!(parse(&printed).unwrap(), c);
    }
}
