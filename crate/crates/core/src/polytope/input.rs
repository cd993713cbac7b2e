//! Text input format.
//!
//! ```text
//! amb_space 3
//! inequalities 2      # r rows of n integers, each a form >= 0
//! 1 0 0
//! 0 1 0
//! equations 1         # s rows of n integers, each a form = 0
//! 1 1 -1
//! grading             # one row of n integers
//! 0 0 1
//! ```
//!
//! `total_degree` may replace `grading` (δ = sum of coordinates). A
//! V-description uses `vertices m` followed by `m` rows of `n + 1` rationals;
//! the last entry of a row is a positive denominator for the others. The
//! grading of a V-description is the homogenizing coordinate. Text after `#`
//! is a comment.

use num_traits::{One, Signed, Zero};

use super::{ConstraintSystem, PolytopeInput, VDescription};
use crate::error::{Error, Result};
use crate::linalg::{Int, Rat};

struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .flat_map(|(i, line)| {
                let line = line.split('#').next().unwrap_or("");
                line.split_whitespace().map(move |t| (i + 1, t))
            })
            .collect();
        Self { items, pos: 0 }
    }

    fn line(&self) -> usize {
        self.items
            .get(self.pos)
            .or(self.items.last())
            .map_or(1, |(l, _)| *l)
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let t = self.items.get(self.pos).copied();
        self.pos += 1;
        t
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let line = self.line();
        self.next()
            .ok_or_else(|| err(line, format!("unexpected end of input, expected {what}")))
    }

    fn count(&mut self, what: &str) -> Result<usize> {
        let (line, t) = self.expect(what)?;
        t.parse()
            .map_err(|_| err(line, format!("expected {what}, found `{t}`")))
    }

    fn int(&mut self) -> Result<Int> {
        let (line, t) = self.expect("an integer")?;
        t.parse()
            .map_err(|_| err(line, format!("expected an integer, found `{t}`")))
    }

    fn rational(&mut self) -> Result<Rat> {
        let (line, t) = self.expect("a rational number")?;
        parse_rational(t)
            .ok_or_else(|| err(line, format!("expected a rational number, found `{t}`")))
    }

    fn int_rows(&mut self, rows: usize, cols: usize) -> Result<Vec<Vec<Int>>> {
        (0..rows)
            .map(|_| (0..cols).map(|_| self.int()).collect())
            .collect()
    }
}

fn err(line: usize, message: String) -> Error {
    Error::Parse { line, message }
}

fn parse_rational(t: &str) -> Option<Rat> {
    match t.split_once('/') {
        Some((a, b)) => {
            let a: Int = a.parse().ok()?;
            let b: Int = b.parse().ok()?;
            if b.is_zero() {
                return None;
            }
            Some(Rat::new(a, b))
        }
        None => Some(Rat::from_integer(t.parse().ok()?)),
    }
}

/// Parses a polytope description.
pub fn parse_input(text: &str) -> Result<PolytopeInput> {
    let mut tok = Tokens::new(text);
    let (line, kw) = tok.expect("`amb_space`")?;
    if kw != "amb_space" {
        return Err(err(line, format!("expected `amb_space`, found `{kw}`")));
    }
    let n = tok.count("the ambient dimension")?;
    let mut inequalities: Option<Vec<Vec<Int>>> = None;
    let mut equations: Option<Vec<Vec<Int>>> = None;
    let mut vertices: Option<(usize, Vec<Vec<Rat>>)> = None;
    let mut grading: Option<(usize, Vec<Int>)> = None;
    while let Some((line, kw)) = tok.next() {
        match kw {
            "inequalities" | "equations" => {
                let r = tok.count("a row count")?;
                let rows = tok.int_rows(r, n)?;
                let slot = if kw == "inequalities" {
                    &mut inequalities
                } else {
                    &mut equations
                };
                slot.get_or_insert_with(Vec::new).extend(rows);
            }
            "vertices" => {
                let m = tok.count("a row count")?;
                let mut pts = vertices.take().map_or_else(Vec::new, |(_, p)| p);
                for _ in 0..m {
                    let row_line = tok.line();
                    let entries: Vec<Rat> =
                        (0..=n).map(|_| tok.rational()).collect::<Result<_>>()?;
                    let den = &entries[n];
                    if !den.is_positive() {
                        return Err(err(row_line, "vertex denominator must be positive".into()));
                    }
                    pts.push(entries[..n].iter().map(|x| x / den).collect());
                }
                vertices = Some((line, pts));
            }
            "grading" => {
                let row = tok.int_rows(1, n)?.remove(0);
                grading = Some((line, row));
            }
            "total_degree" => grading = Some((line, vec![Int::one(); n])),
            other => return Err(err(line, format!("unknown keyword `{other}`"))),
        }
    }
    match (vertices, inequalities.is_some() || equations.is_some()) {
        (Some((line, _)), true) => Err(err(
            line,
            "vertices cannot be combined with inequalities or equations".into(),
        )),
        (Some(_), false) if grading.is_some() => {
            let (gline, _) = grading.expect("checked");
            Err(err(
                gline,
                "a vertex description has an implicit grading".into(),
            ))
        }
        (Some((_, points)), false) => Ok(PolytopeInput::V(VDescription {
            ambient_dim: n,
            points,
        })),
        (None, true) => {
            let Some((gline, grading_form)) = grading else {
                return Err(err(
                    tok.line(),
                    "an H-description needs `grading` or `total_degree`".into(),
                ));
            };
            if grading_form.iter().all(Zero::is_zero) {
                return Err(err(gline, "grading must not vanish".into()));
            }
            Ok(PolytopeInput::H(ConstraintSystem {
                ambient_dim: n,
                inequalities: inequalities.unwrap_or_default(),
                equations: equations.unwrap_or_default(),
                grading_form,
            }))
        }
        (None, false) => Err(err(
            tok.line(),
            "no `inequalities` or `vertices` block".into(),
        )),
    }
}

/// Renders an H-description in the input format.
pub fn write_constraints(sys: &ConstraintSystem) -> String {
    let mut out = format!("amb_space {}\n", sys.ambient_dim);
    let row = |r: &Vec<Int>| {
        r.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    if !sys.inequalities.is_empty() {
        out.push_str(&format!("inequalities {}\n", sys.inequalities.len()));
        for r in &sys.inequalities {
            out.push_str(&row(r));
            out.push('\n');
        }
    }
    if !sys.equations.is_empty() {
        out.push_str(&format!("equations {}\n", sys.equations.len()));
        for r in &sys.equations {
            out.push_str(&row(r));
            out.push('\n');
        }
    }
    out.push_str("grading\n");
    out.push_str(&row(&sys.grading_form));
    out.push('\n');
    out
}
