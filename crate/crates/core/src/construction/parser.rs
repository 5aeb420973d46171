//! Line-oriented parser for construction programs.
//!
//! ```text
//! # a comment
//! dimension 3
//! point A free
//! point B free at (1, 0, 1/2)
//! point M = midpoint(A, B)
//! line l = line(A, B)
//! statement s1 = collinear(A, M, B)
//! measure half = 1/2*length(A, B)
//! ```

use super::lexer::{tokenize, Tok, Token};
use super::measure::{MeasureExpr, Primitive};
use super::{Construction, MeasureDef, ObjectKind, Predicate, SegRef, Statement, Step, StepKind};
use mg_poly::Rat;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Semantic,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorKind::Syntax => f.write_str("syntax error"),
            ErrorKind::Semantic => f.write_str("semantic error"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub kind: ErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Parses and validates a construction program.
pub fn parse(source: &str) -> Result<Construction, ParseError> {
    let mut b = Builder::new();
    for (i, raw) in source.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(text).map_err(|(column, c)| ParseError {
            kind: ErrorKind::Syntax,
            line: i + 1,
            column,
            message: format!("unexpected character `{c}`"),
        })?;
        if tokens.is_empty() {
            continue;
        }
        let end = text.chars().count() + 1;
        b.line(Cursor { toks: &tokens, pos: 0, line: i + 1, end })?;
    }
    Ok(b.c)
}

/// Parses a measure expression against an existing construction (named
/// measures of `c` may be referenced).
pub fn parse_measure(text: &str, c: &Construction) -> Result<MeasureExpr, ParseError> {
    let b = Builder::from(c.clone());
    let tokens = tokenize(text).map_err(|(column, ch)| ParseError {
        kind: ErrorKind::Syntax,
        line: 1,
        column,
        message: format!("unexpected character `{ch}`"),
    })?;
    let mut cur = Cursor { toks: &tokens, pos: 0, line: 1, end: text.chars().count() + 1 };
    let e = b.expr(&mut cur)?;
    cur.finish()?;
    Ok(e)
}

/// Parses a predicate such as `parallel(seg(A, B), l)` against `c`.
pub fn parse_predicate(text: &str, c: &Construction) -> Result<Predicate, ParseError> {
    let b = Builder::from(c.clone());
    let tokens = tokenize(text).map_err(|(column, ch)| ParseError {
        kind: ErrorKind::Syntax,
        line: 1,
        column,
        message: format!("unexpected character `{ch}`"),
    })?;
    let mut cur = Cursor { toks: &tokens, pos: 0, line: 1, end: text.chars().count() + 1 };
    let p = b.predicate(&mut cur)?;
    cur.finish()?;
    Ok(p)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.column)
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError { kind: ErrorKind::Syntax, line: self.line, column: self.column(), message: message.into() }
    }

    fn semantic(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { kind: ErrorKind::Semantic, line: self.line, column, message: message.into() }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        match self.toks.get(self.pos) {
            Some(Token { tok: Tok::Ident(s), column }) => {
                self.pos += 1;
                Ok((s.clone(), *column))
            }
            _ => Err(self.syntax(format!("expected {what}"))),
        }
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{c}`")))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// An optionally signed rational literal `[-]n[/d]` or decimal.
    fn rational(&mut self) -> Result<Rat, ParseError> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let Some(Tok::Number(n)) = self.peek().cloned() else {
            return Err(self.syntax("expected a number"));
        };
        self.pos += 1;
        let mut text = n;
        if self.peek() == Some(&Tok::Sym('/')) {
            if let Some(Token { tok: Tok::Number(d), .. }) = self.toks.get(self.pos + 1) {
                text = format!("{text}/{d}");
                self.pos += 2;
            }
        }
        let r: Rat = text.parse().map_err(|_| self.syntax(format!("invalid number `{text}`")))?;
        Ok(if neg { -r } else { r })
    }

    fn integer(&mut self) -> Result<(i64, usize), ParseError> {
        let column = self.column();
        let r = self.rational()?;
        if !r.is_integer() {
            return Err(self.semantic(column, "expected an integer"));
        }
        let v = r.numer().to_string().parse::<i64>().map_err(|_| self.semantic(column, "integer out of range"))?;
        Ok((v, column))
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            Err(self.syntax("unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

/// Call argument: an identifier or an integer.
#[derive(Clone, Debug)]
enum Arg {
    Id(String, usize),
    Int(i64, usize),
}

impl Arg {
    fn column(&self) -> usize {
        match self {
            Arg::Id(_, c) | Arg::Int(_, c) => *c,
        }
    }
}

struct Builder {
    c: Construction,
    kinds: BTreeMap<String, ObjectKind>,
    labels: BTreeSet<String>,
    dimension_locked: bool,
}

impl Builder {
    fn new() -> Self {
        Builder {
            c: Construction { dimension: 2, steps: Vec::new(), statements: Vec::new(), measures: Vec::new() },
            kinds: BTreeMap::new(),
            labels: BTreeSet::new(),
            dimension_locked: false,
        }
    }

    fn from(c: Construction) -> Self {
        let kinds = c.kinds();
        let labels = c
            .statements
            .iter()
            .map(|s| s.label.clone())
            .chain(c.measures.iter().map(|m| m.name.clone()))
            .collect();
        Builder { c, kinds, labels, dimension_locked: true }
    }

    fn line(&mut self, mut cur: Cursor) -> Result<(), ParseError> {
        let (head, col) = cur.ident("a declaration keyword")?;
        match head.as_str() {
            "dimension" => {
                let (d, dcol) = cur.integer()?;
                cur.finish()?;
                if self.dimension_locked {
                    return Err(cur.semantic(col, "`dimension` must precede every other declaration"));
                }
                if d != 2 && d != 3 {
                    return Err(cur.semantic(dcol, "dimension must be 2 or 3"));
                }
                self.c.dimension = d as usize;
                self.dimension_locked = true;
            }
            "point" | "line" | "segment" | "circle" => {
                self.dimension_locked = true;
                let (id, idcol) = cur.ident("an identifier")?;
                self.fresh(&cur, &id, idcol)?;
                if head == "point" && cur.peek() == Some(&Tok::Ident("free".into())) {
                    cur.pos += 1;
                    let at = if cur.peek() == Some(&Tok::Ident("at".into())) {
                        cur.pos += 1;
                        let pcol = cur.column();
                        cur.sym('(')?;
                        let mut coords = vec![cur.rational()?];
                        while cur.eat(',') {
                            coords.push(cur.rational()?);
                        }
                        cur.sym(')')?;
                        if coords.len() != self.c.dimension {
                            return Err(cur.semantic(
                                pcol,
                                format!("{} coordinates given in dimension {}", coords.len(), self.c.dimension),
                            ));
                        }
                        Some(coords)
                    } else {
                        None
                    };
                    cur.finish()?;
                    self.push(Step { id, kind: StepKind::FreePoint { at } });
                    return Ok(());
                }
                cur.sym('=')?;
                let (name, ncol) = cur.ident("a construction")?;
                let args = self.call_args(&mut cur)?;
                cur.finish()?;
                self.construct(&cur, &head, id, (&name, ncol), args)?;
            }
            "statement" => {
                self.dimension_locked = true;
                let (label, lcol) = cur.ident("a statement label")?;
                self.fresh_label(&cur, &label, lcol)?;
                cur.sym('=')?;
                let predicate = self.predicate(&mut cur)?;
                cur.finish()?;
                self.labels.insert(label.clone());
                self.c.statements.push(Statement { label, predicate });
            }
            "measure" => {
                self.dimension_locked = true;
                let (name, ncol) = cur.ident("a measure name")?;
                self.fresh_label(&cur, &name, ncol)?;
                if self.kinds.contains_key(&name) {
                    return Err(cur.semantic(ncol, format!("`{name}` is already an object")));
                }
                cur.sym('=')?;
                let expr = self.expr(&mut cur)?;
                cur.finish()?;
                self.labels.insert(name.clone());
                self.c.measures.push(MeasureDef { name, expr });
            }
            other => return Err(cur.semantic(col, format!("unknown declaration `{other}`"))),
        }
        Ok(())
    }

    fn fresh(&self, cur: &Cursor, id: &str, col: usize) -> Result<(), ParseError> {
        if self.kinds.contains_key(id) {
            return Err(cur.semantic(col, format!("duplicate identifier `{id}`")));
        }
        if self.labels.contains(id) {
            return Err(cur.semantic(col, format!("`{id}` is already a statement or measure")));
        }
        Ok(())
    }

    fn fresh_label(&self, cur: &Cursor, label: &str, col: usize) -> Result<(), ParseError> {
        if self.labels.contains(label) {
            return Err(cur.semantic(col, format!("duplicate label `{label}`")));
        }
        Ok(())
    }

    fn push(&mut self, step: Step) {
        self.kinds.insert(step.id.clone(), step.object_kind());
        self.c.steps.push(step);
    }

    fn call_args(&self, cur: &mut Cursor) -> Result<Vec<Arg>, ParseError> {
        cur.sym('(')?;
        let mut args = Vec::new();
        if cur.eat(')') {
            return Ok(args);
        }
        loop {
            let column = cur.column();
            match cur.peek() {
                Some(Tok::Ident(s)) => {
                    args.push(Arg::Id(s.clone(), column));
                    cur.pos += 1;
                }
                _ => {
                    let (v, column) = cur.integer()?;
                    args.push(Arg::Int(v, column));
                }
            }
            if cur.eat(')') {
                return Ok(args);
            }
            cur.sym(',')?;
        }
    }

    /// Checks that `arg` names an existing object of one of `kinds`.
    fn object(&self, cur: &Cursor, arg: &Arg, kinds: &[ObjectKind]) -> Result<String, ParseError> {
        let want = kinds.iter().map(|k| k.keyword()).collect::<Vec<_>>().join(" or ");
        match arg {
            Arg::Id(id, col) => match self.kinds.get(id) {
                None => Err(cur.semantic(*col, format!("undefined identifier `{id}`"))),
                Some(k) if kinds.contains(k) => Ok(id.clone()),
                Some(k) => Err(cur.semantic(*col, format!("`{id}` is a {}, expected a {want}", k.keyword()))),
            },
            Arg::Int(_, col) => Err(cur.semantic(*col, format!("expected a {want}"))),
        }
    }

    fn int_arg(&self, cur: &Cursor, arg: &Arg) -> Result<i64, ParseError> {
        match arg {
            Arg::Int(v, _) => Ok(*v),
            Arg::Id(_, col) => Err(cur.semantic(*col, "expected an integer")),
        }
    }

    fn planar(&self, cur: &Cursor, col: usize, what: &str) -> Result<(), ParseError> {
        if self.c.dimension != 2 {
            return Err(cur.semantic(col, format!("{what} requires dimension 2")));
        }
        Ok(())
    }

    fn construct(
        &mut self,
        cur: &Cursor,
        head: &str,
        id: String,
        (name, ncol): (&str, usize),
        args: Vec<Arg>,
    ) -> Result<(), ParseError> {
        use ObjectKind::*;
        const LINEAR: &[ObjectKind] = &[Line, Segment];
        let arity = |lo: usize, hi: usize| -> Result<(), ParseError> {
            if args.len() < lo || args.len() > hi {
                let expected = if lo == hi { lo.to_string() } else { format!("{lo} to {hi}") };
                return Err(cur.semantic(ncol, format!("`{name}` takes {expected} arguments, got {}", args.len())));
            }
            Ok(())
        };
        let distinct = |a: &str, b: &str| -> Result<(), ParseError> {
            if a == b {
                return Err(cur.semantic(args[1].column(), format!("`{name}` needs two different objects")));
            }
            Ok(())
        };
        let expected = match name {
            "on_line" | "on_circle" | "midpoint" | "intersect" | "foot" | "reflect" | "rotate90" | "divide"
            | "equilateral" => Point,
            "line" | "perpendicular" | "parallel" => Line,
            "segment" => Segment,
            "circle" | "circle_diameter" => Circle,
            _ => return Err(cur.semantic(ncol, format!("unknown construction `{name}`"))),
        };
        if expected.keyword() != head {
            return Err(cur.semantic(ncol, format!("`{name}` builds a {}, not a {head}", expected.keyword())));
        }
        let kind = match name {
            "on_line" => {
                arity(1, 1)?;
                StepKind::PointOnLine(self.object(cur, &args[0], LINEAR)?)
            }
            "on_circle" => {
                arity(1, 1)?;
                self.planar(cur, ncol, "on_circle")?;
                StepKind::PointOnCircle(self.object(cur, &args[0], &[Circle])?)
            }
            "midpoint" | "line" | "segment" | "circle" | "circle_diameter" => {
                arity(2, 2)?;
                let a = self.object(cur, &args[0], &[Point])?;
                let b = self.object(cur, &args[1], &[Point])?;
                distinct(&a, &b)?;
                if head == "circle" {
                    self.planar(cur, ncol, "a circle")?;
                }
                match name {
                    "midpoint" => StepKind::Midpoint(a, b),
                    "line" => StepKind::Line(a, b),
                    "segment" => StepKind::Segment(a, b),
                    "circle" => StepKind::Circle(a, b),
                    _ => StepKind::CircleDiameter(a, b),
                }
            }
            "intersect" => {
                arity(2, 3)?;
                let l = self.object(cur, &args[0], LINEAR)?;
                let second = self.object(cur, &args[1], &[Line, Segment, Circle])?;
                if self.kinds[&second] == Circle {
                    self.planar(cur, ncol, "a line-circle intersection")?;
                    let branch = match args.get(2) {
                        Some(a) => self.int_arg(cur, a)?,
                        None => 1,
                    };
                    if branch != 0 && branch != 1 {
                        return Err(cur.semantic(args[2].column(), "branch must be 0 or 1"));
                    }
                    StepKind::IntersectLineCircle(l, second, branch as u8)
                } else {
                    if args.len() == 3 {
                        return Err(cur.semantic(args[2].column(), "two lines meet in one point; no branch"));
                    }
                    distinct(&l, &second)?;
                    StepKind::IntersectLines(l, second)
                }
            }
            "foot" | "perpendicular" | "parallel" => {
                arity(2, 2)?;
                let p = self.object(cur, &args[0], &[Point])?;
                let l = self.object(cur, &args[1], LINEAR)?;
                match name {
                    "foot" => StepKind::Foot(p, l),
                    "perpendicular" => {
                        self.planar(cur, ncol, "a perpendicular line")?;
                        StepKind::PerpendicularLine(p, l)
                    }
                    _ => StepKind::ParallelLine(p, l),
                }
            }
            "reflect" => {
                arity(2, 2)?;
                let p = self.object(cur, &args[0], &[Point])?;
                let about = self.object(cur, &args[1], &[Point, Line, Segment])?;
                distinct(&p, &about)?;
                StepKind::Reflect(p, about)
            }
            "rotate90" => {
                arity(2, 3)?;
                self.planar(cur, ncol, "rotate90")?;
                let p = self.object(cur, &args[0], &[Point])?;
                let o = self.object(cur, &args[1], &[Point])?;
                distinct(&p, &o)?;
                let sign = match args.get(2) {
                    Some(a) => self.int_arg(cur, a)?,
                    None => 1,
                };
                if sign != 1 && sign != -1 {
                    return Err(cur.semantic(args[2].column(), "rotation sign must be 1 or -1"));
                }
                StepKind::Rotate90(p, o, sign as i8)
            }
            "divide" => {
                arity(4, 4)?;
                let a = self.object(cur, &args[0], &[Point])?;
                let b = self.object(cur, &args[1], &[Point])?;
                distinct(&a, &b)?;
                let i = self.int_arg(cur, &args[2])?;
                let n = self.int_arg(cur, &args[3])?;
                if n < 1 || i < 0 || i > n {
                    return Err(cur.semantic(args[2].column(), "divide needs 0 <= i <= n and n >= 1"));
                }
                StepKind::Divide(a, b, i as u32, n as u32)
            }
            "equilateral" => {
                arity(2, 3)?;
                self.planar(cur, ncol, "equilateral")?;
                let a = self.object(cur, &args[0], &[Point])?;
                let b = self.object(cur, &args[1], &[Point])?;
                distinct(&a, &b)?;
                let branch = match args.get(2) {
                    Some(arg) => self.int_arg(cur, arg)?,
                    None => 1,
                };
                if branch != 0 && branch != 1 {
                    return Err(cur.semantic(args[2].column(), "branch must be 0 or 1"));
                }
                return self.equilateral(cur, ncol, id, a, b, branch as u8);
            }
            _ => unreachable!("checked above"),
        };
        self.push(Step { id, kind });
        Ok(())
    }

    /// Expands `equilateral(A, B)`: the apex is where the perpendicular
    /// bisector of AB meets the circle about A through B. Branch 1 puts it
    /// to the left of A→B.
    fn equilateral(&mut self, cur: &Cursor, col: usize, id: String, a: String, b: String, branch: u8) -> Result<(), ParseError> {
        let stem = id.clone();
        let h = |s: &str| format!("{stem}__{s}");
        for helper in [h("ab"), h("mid"), h("bis"), h("circ")] {
            self.fresh(cur, &helper, col)?;
        }
        self.push(Step { id: h("ab"), kind: StepKind::Line(a.clone(), b.clone()) });
        self.push(Step { id: h("mid"), kind: StepKind::Midpoint(a.clone(), b.clone()) });
        self.push(Step { id: h("bis"), kind: StepKind::PerpendicularLine(h("mid"), h("ab")) });
        self.push(Step { id: h("circ"), kind: StepKind::Circle(a, b) });
        self.push(Step { id, kind: StepKind::IntersectLineCircle(h("bis"), h("circ"), branch) });
        Ok(())
    }

    fn point(&self, cur: &mut Cursor) -> Result<(String, usize), ParseError> {
        let (id, col) = cur.ident("a point")?;
        let id = self.object(cur, &Arg::Id(id, col), &[ObjectKind::Point])?;
        Ok((id, col))
    }

    fn points(&self, cur: &mut Cursor, n: usize) -> Result<Vec<String>, ParseError> {
        let mut out: Vec<String> = Vec::new();
        for i in 0..n {
            if i > 0 {
                cur.sym(',')?;
            }
            let (p, col) = self.point(cur)?;
            if out.contains(&p) {
                return Err(cur.semantic(col, format!("`{p}` repeated; the statement would be vacuous")));
            }
            out.push(p);
        }
        Ok(out)
    }

    fn seg(&self, cur: &mut Cursor) -> Result<(SegRef, usize), ParseError> {
        let (id, col) = cur.ident("a segment")?;
        if id == "seg" && cur.peek() == Some(&Tok::Sym('(')) && !self.kinds.contains_key("seg") {
            cur.sym('(')?;
            let pts = self.points(cur, 2)?;
            cur.sym(')')?;
            return Ok((SegRef::Points(pts[0].clone(), pts[1].clone()), col));
        }
        let id = self.object(cur, &Arg::Id(id, col), &[ObjectKind::Line, ObjectKind::Segment])?;
        Ok((SegRef::Object(id), col))
    }

    fn predicate(&self, cur: &mut Cursor) -> Result<Predicate, ParseError> {
        let (name, ncol) = cur.ident("a predicate")?;
        cur.sym('(')?;
        let pred = match name.as_str() {
            "collinear" => {
                let p = self.points(cur, 3)?;
                Predicate::Collinear(p[0].clone(), p[1].clone(), p[2].clone())
            }
            "parallel" | "perpendicular" | "equal_length" => {
                let (a, _) = self.seg(cur)?;
                cur.sym(',')?;
                let (b, bcol) = self.seg(cur)?;
                if same_segment(&a, &b) {
                    return Err(cur.semantic(bcol, "both arguments are the same segment"));
                }
                match name.as_str() {
                    "parallel" => Predicate::Parallel(a, b),
                    "perpendicular" => Predicate::Perpendicular(a, b),
                    _ => {
                        for (s, col) in [(&a, ncol), (&b, bcol)] {
                            if let SegRef::Object(id) = s {
                                if self.c.defining_points(id).is_none() {
                                    return Err(cur.semantic(col, format!("`{id}` has no endpoints to measure")));
                                }
                            }
                        }
                        Predicate::EqualLength(a, b)
                    }
                }
            }
            "concyclic" => {
                self.planar(cur, ncol, "concyclic")?;
                let p = self.points(cur, 4)?;
                Predicate::Concyclic(p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone())
            }
            "point_on" => {
                let (p, _) = self.point(cur)?;
                cur.sym(',')?;
                let (o, ocol) = cur.ident("an object")?;
                let o = self.object(cur, &Arg::Id(o, ocol), &[ObjectKind::Point, ObjectKind::Line, ObjectKind::Segment, ObjectKind::Circle])?;
                if o == p {
                    return Err(cur.semantic(ocol, "a point trivially lies on itself"));
                }
                Predicate::PointOn(p, o)
            }
            "coincide" => {
                let p = self.points(cur, 2)?;
                Predicate::Coincide(p[0].clone(), p[1].clone())
            }
            "midpoint_of" => {
                let p = self.points(cur, 3)?;
                Predicate::MidpointOf(p[0].clone(), p[1].clone(), p[2].clone())
            }
            "eq" => {
                let a = self.expr(cur)?;
                cur.sym(',')?;
                let b = self.expr(cur)?;
                Predicate::Equal(a, b)
            }
            _ => return Err(cur.semantic(ncol, format!("unknown predicate `{name}`"))),
        };
        cur.sym(')')?;
        Ok(pred)
    }

    fn expr(&self, cur: &mut Cursor) -> Result<MeasureExpr, ParseError> {
        let mut acc = if cur.eat('-') {
            self.term(cur)?.scale(&Rat::from_int(-1))
        } else {
            cur.eat('+');
            self.term(cur)?
        };
        loop {
            if cur.eat('+') {
                acc = acc.add(&self.term(cur)?);
            } else if cur.eat('-') {
                acc = acc.sub(&self.term(cur)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&self, cur: &mut Cursor) -> Result<MeasureExpr, ParseError> {
        let mut acc = self.power(cur)?;
        loop {
            if cur.eat('*') {
                acc = acc.mul(&self.power(cur)?);
            } else if cur.peek() == Some(&Tok::Sym('/')) {
                cur.pos += 1;
                let col = cur.column();
                let d = self.power(cur)?;
                match d.constant_value() {
                    Some(k) if !k.is_zero() => acc = acc.scale(&k.recip()),
                    _ => return Err(cur.semantic(col, "only division by a nonzero constant is supported")),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&self, cur: &mut Cursor) -> Result<MeasureExpr, ParseError> {
        let base = self.atom(cur)?;
        if cur.eat('^') {
            let (e, col) = cur.integer()?;
            if !(0..=16).contains(&e) {
                return Err(cur.semantic(col, "exponent must be between 0 and 16"));
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn atom(&self, cur: &mut Cursor) -> Result<MeasureExpr, ParseError> {
        match cur.peek().cloned() {
            Some(Tok::Number(_)) => {
                let Some(Tok::Number(n)) = cur.peek().cloned() else { unreachable!() };
                cur.pos += 1;
                let r: Rat = n.parse().map_err(|_| cur.syntax(format!("invalid number `{n}`")))?;
                Ok(MeasureExpr::constant(r))
            }
            Some(Tok::Sym('(')) => {
                cur.pos += 1;
                let e = self.expr(cur)?;
                cur.sym(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                let col = cur.column();
                cur.pos += 1;
                let arity = match name.as_str() {
                    "length" | "sqdist" => 2,
                    "area" | "circumradius" => 3,
                    _ => {
                        return self
                            .c
                            .measure(&name)
                            .cloned()
                            .ok_or_else(|| cur.semantic(col, format!("unknown measure `{name}`")));
                    }
                };
                if arity == 3 {
                    self.planar(cur, col, &name)?;
                }
                cur.sym('(')?;
                let p = self.points(cur, arity)?;
                cur.sym(')')?;
                let prim = match name.as_str() {
                    "length" => Primitive::Length(p[0].clone(), p[1].clone()),
                    "sqdist" => Primitive::SqDist(p[0].clone(), p[1].clone()),
                    "area" => Primitive::Area(p[0].clone(), p[1].clone(), p[2].clone()),
                    _ => Primitive::Circumradius(p[0].clone(), p[1].clone(), p[2].clone()),
                };
                Ok(MeasureExpr::primitive(prim))
            }
            _ => Err(cur.syntax("expected a measure expression")),
        }
    }
}

fn same_segment(a: &SegRef, b: &SegRef) -> bool {
    match (a, b) {
        (SegRef::Points(p, q), SegRef::Points(r, s)) => (p == r && q == s) || (p == s && q == r),
        (SegRef::Object(x), SegRef::Object(y)) => x == y,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_program() {
        let c = parse("point A free\npoint B free\npoint M = midpoint(A, B)").unwrap();
        assert_eq!(c.steps.len(), 3);
        assert_eq!(c.steps[2].kind, StepKind::Midpoint("A".into(), "B".into()));
    }

    #[test]
    fn undefined_identifier() {
        let e = parse("point M = midpoint(A, B)").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Semantic);
        assert_eq!((e.line, e.column), (1, 20));
        assert!(e.message.contains("`A`"));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse("point A free\npoint B = midpoint(A A)").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
        assert_eq!((e.line, e.column), (2, 22));
        let e = parse("point A free\n\npoint B free at (1, 2").unwrap_err();
        assert_eq!((e.line, e.column), (3, 22));
    }

    #[test]
    fn semantic_checks() {
        let bad = [
            ("point A free\npoint A free", "duplicate"),
            ("point A free\npoint B free\nline l = line(A, B)\npoint C = midpoint(A, l)", "is a line"),
            ("point A free\npoint B free\npoint M = midpoint(A, B, A)", "takes 2"),
            ("dimension 3\npoint A free at (0, 1)", "dimension 3"),
            ("point A free\ndimension 3", "precede"),
            ("point A free\npoint B free\nstatement s = collinear(A, A, B)", "vacuous"),
            ("dimension 3\npoint A free\npoint B free\ncircle c = circle(A, B)", "dimension 2"),
            ("point A free\npoint B free\nline l = line(A, B)\npoint X = intersect(l, l)", "different"),
        ];
        for (src, needle) in bad {
            let e = parse(src).unwrap_err();
            assert_eq!(e.kind, ErrorKind::Semantic, "{src}");
            assert!(e.message.contains(needle), "{src}: {}", e.message);
        }
    }

    #[test]
    fn equilateral_macro_expands() {
        let c = parse("point A free\npoint B free\npoint C = equilateral(A, B)").unwrap();
        assert_eq!(c.steps.len(), 7);
        assert_eq!(c.steps[6].kind, StepKind::IntersectLineCircle("C__bis".into(), "C__circ".into(), 1));
        assert_eq!(c.visible_points(), vec!["A", "B", "C"]);
    }

    #[test]
    fn measures_and_eq() {
        let src = "point A free\npoint B free\npoint C free\nmeasure p = length(A, B) + length(B, C) + length(C, A)\n\
                   statement s = eq(2*p - length(B, A), 1/2*(sqdist(A, C))^2)";
        let c = parse(src).unwrap();
        let Predicate::Equal(l, r) = &c.statements[0].predicate else { panic!() };
        assert_eq!(l.to_string(), "length(A, B) + 2*length(A, C) + 2*length(B, C)");
        assert_eq!(r.to_string(), "1/2*sqdist(A, C)^2");
        assert!(parse_measure("length(A, B) / length(B, C)", &c).is_err());
        assert_eq!(parse_measure("p - length(A,B)", &c).unwrap().to_string(), "length(A, C) + length(B, C)");
    }
}
