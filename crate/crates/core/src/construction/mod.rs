//! Construction programs: the typed step list, statements and measure
//! expressions, plus the text format that describes them.

mod lexer;
mod measure;
mod parser;
mod printer;

pub use measure::{MeasureExpr, Primitive};
pub use parser::{parse, parse_measure, parse_predicate, ErrorKind, ParseError};

use mg_poly::Rat;
use std::collections::BTreeMap;
use std::fmt;

/// What an identifier names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjectKind {
    Point,
    Line,
    Segment,
    Circle,
}

impl ObjectKind {
    /// Lines and segments both carry a direction.
    pub fn is_linear(self) -> bool {
        matches!(self, ObjectKind::Line | ObjectKind::Segment)
    }

    pub fn keyword(self) -> &'static str {
        match self {
            ObjectKind::Point => "point",
            ObjectKind::Line => "line",
            ObjectKind::Segment => "segment",
            ObjectKind::Circle => "circle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// A free point, optionally pinned to exact coordinates.
    FreePoint { at: Option<Vec<Rat>> },
    PointOnLine(String),
    PointOnCircle(String),
    Midpoint(String, String),
    Line(String, String),
    Segment(String, String),
    /// Circle with the given center through the given point.
    Circle(String, String),
    CircleDiameter(String, String),
    IntersectLines(String, String),
    /// Branch 1 is the intersection further along the line's direction.
    IntersectLineCircle(String, String, u8),
    Foot(String, String),
    PerpendicularLine(String, String),
    ParallelLine(String, String),
    /// Reflection of a point in a point or in a line.
    Reflect(String, String),
    /// Quarter turn of a point about a center, counterclockwise for +1.
    Rotate90(String, String, i8),
    /// The point `i/n` of the way from the first point to the second.
    Divide(String, String, u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub id: String,
    pub kind: StepKind,
}

impl Step {
    pub fn object_kind(&self) -> ObjectKind {
        match self.kind {
            StepKind::Line(..) | StepKind::PerpendicularLine(..) | StepKind::ParallelLine(..) => ObjectKind::Line,
            StepKind::Segment(..) => ObjectKind::Segment,
            StepKind::Circle(..) | StepKind::CircleDiameter(..) => ObjectKind::Circle,
            _ => ObjectKind::Point,
        }
    }

    /// Identifiers this step refers to.
    pub fn dependencies(&self) -> Vec<&str> {
        use StepKind::*;
        match &self.kind {
            FreePoint { .. } => vec![],
            PointOnLine(a) | PointOnCircle(a) => vec![a],
            Midpoint(a, b)
            | Line(a, b)
            | Segment(a, b)
            | Circle(a, b)
            | CircleDiameter(a, b)
            | IntersectLines(a, b)
            | IntersectLineCircle(a, b, _)
            | Foot(a, b)
            | PerpendicularLine(a, b)
            | ParallelLine(a, b)
            | Reflect(a, b)
            | Rotate90(a, b, _)
            | Divide(a, b, _, _) => vec![a, b],
        }
    }

    /// Whether the step draws fresh random values when sampled.
    pub fn is_random(&self) -> bool {
        matches!(
            self.kind,
            StepKind::FreePoint { at: None } | StepKind::PointOnLine(_) | StepKind::PointOnCircle(_)
        )
    }
}

/// A segment argument: two points, or a named line or segment.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SegRef {
    Points(String, String),
    Object(String),
}

impl fmt::Display for SegRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegRef::Points(a, b) => write!(f, "seg({a}, {b})"),
            SegRef::Object(id) => write!(f, "{id}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    Collinear(String, String, String),
    Parallel(SegRef, SegRef),
    Perpendicular(SegRef, SegRef),
    EqualLength(SegRef, SegRef),
    Concyclic(String, String, String, String),
    /// A point lying on a line, segment, circle or point.
    PointOn(String, String),
    Coincide(String, String),
    /// The first point is the midpoint of the other two.
    MidpointOf(String, String, String),
    /// Equality of two measure expressions.
    Equal(MeasureExpr, MeasureExpr),
}

/// The predicate families, used to select candidates in discovery.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PredicateKind {
    Collinear,
    Parallel,
    Perpendicular,
    EqualLength,
    Concyclic,
    PointOn,
    Coincide,
    MidpointOf,
    Equal,
}

impl PredicateKind {
    pub const ALL: [PredicateKind; 9] = [
        PredicateKind::Collinear,
        PredicateKind::Parallel,
        PredicateKind::Perpendicular,
        PredicateKind::EqualLength,
        PredicateKind::Concyclic,
        PredicateKind::PointOn,
        PredicateKind::Coincide,
        PredicateKind::MidpointOf,
        PredicateKind::Equal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PredicateKind::Collinear => "collinear",
            PredicateKind::Parallel => "parallel",
            PredicateKind::Perpendicular => "perpendicular",
            PredicateKind::EqualLength => "equal_length",
            PredicateKind::Concyclic => "concyclic",
            PredicateKind::PointOn => "point_on",
            PredicateKind::Coincide => "coincide",
            PredicateKind::MidpointOf => "midpoint_of",
            PredicateKind::Equal => "eq",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for PredicateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Predicate {
    pub fn kind(&self) -> PredicateKind {
        match self {
            Predicate::Collinear(..) => PredicateKind::Collinear,
            Predicate::Parallel(..) => PredicateKind::Parallel,
            Predicate::Perpendicular(..) => PredicateKind::Perpendicular,
            Predicate::EqualLength(..) => PredicateKind::EqualLength,
            Predicate::Concyclic(..) => PredicateKind::Concyclic,
            Predicate::PointOn(..) => PredicateKind::PointOn,
            Predicate::Coincide(..) => PredicateKind::Coincide,
            Predicate::MidpointOf(..) => PredicateKind::MidpointOf,
            Predicate::Equal(..) => PredicateKind::Equal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub label: String,
    pub predicate: Predicate,
}

/// A named measure expression, usable by name in other expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureDef {
    pub name: String,
    pub expr: MeasureExpr,
}

/// A validated construction program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub dimension: usize,
    pub steps: Vec<Step>,
    pub statements: Vec<Statement>,
    pub measures: Vec<MeasureDef>,
}

impl Construction {
    pub fn step(&self, id: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.id == id)
    }

    pub fn kind_of(&self, id: &str) -> Option<ObjectKind> {
        self.step(id).map(Step::object_kind)
    }

    pub fn statement(&self, label: &str) -> Option<&Statement> {
        self.statements.iter().find(|s| s.label == label)
    }

    pub fn measure(&self, name: &str) -> Option<&MeasureExpr> {
        self.measures.iter().find(|m| m.name == name).map(|m| &m.expr)
    }

    /// Identifier kinds, for resolving references.
    pub fn kinds(&self) -> BTreeMap<String, ObjectKind> {
        self.steps.iter().map(|s| (s.id.clone(), s.object_kind())).collect()
    }

    /// Point identifiers in step order.
    pub fn points(&self) -> Vec<&str> {
        self.steps.iter().filter(|s| s.object_kind() == ObjectKind::Point).map(|s| s.id.as_str()).collect()
    }

    /// Point identifiers a user would see: helper points introduced by
    /// macros (ids containing `__`) are left out.
    pub fn visible_points(&self) -> Vec<&str> {
        self.points().into_iter().filter(|p| !p.contains("__")).collect()
    }

    /// The two points a line or segment was drawn through, if it was.
    pub fn defining_points(&self, id: &str) -> Option<(&str, &str)> {
        match &self.step(id)?.kind {
            StepKind::Line(a, b) | StepKind::Segment(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Ids of free points without pinned coordinates.
    pub fn unpinned_free_points(&self) -> Vec<&str> {
        self.steps
            .iter()
            .filter(|s| matches!(s.kind, StepKind::FreePoint { at: None }))
            .map(|s| s.id.as_str())
            .collect()
    }

    /// Whether some free point has pinned coordinates.
    pub fn has_pinned_points(&self) -> bool {
        self.steps.iter().any(|s| matches!(s.kind, StepKind::FreePoint { at: Some(_) }))
    }
}
