//! Decoding of command-line values and input files.

use std::fmt;
use std::path::Path;

use qpcount::arith::{parse_int_poly, parse_multi_poly, parse_rational, IntPoly};
use qpcount::formula::{parse_formula, Formula, Program, VarKind};
use qpcount::geometry::Q;
use qpcount::qpoly::{Chamber, Coset, Pqp, PqpPiece};
use serde::Deserialize;

/// Malformed arguments or unreadable input; exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn read_file(path: &Path) -> Result<String, UsageError> {
    std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))
}

/// Formula text from `--formula FILE` or `--expr TEXT`.
pub fn formula_source(file: Option<&Path>, expr: Option<&str>) -> Result<String, UsageError> {
    match (file, expr) {
        (Some(p), None) => read_file(p),
        (None, Some(e)) => Ok(e.to_string()),
        (None, None) => Err(UsageError("one of --formula or --expr is required".into())),
        (Some(_), Some(_)) => Err(UsageError("--formula and --expr are exclusive".into())),
    }
}

pub fn load_program(file: Option<&Path>, expr: Option<&str>) -> Result<Result<Program, qpcount::Error>, UsageError> {
    Ok(parse_formula(&formula_source(file, expr)?))
}

/// `name=value`.
pub fn parse_assignment(s: &str) -> Result<(String, i64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let value = value
        .trim()
        .parse()
        .map_err(|_| format!("`{value}` is not an integer"))?;
    Ok((name.trim().to_string(), value))
}

/// `lo..hi`, inclusive.
pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got `{s}`"))?;
    let lo = lo.trim().parse().map_err(|_| format!("`{lo}` is not an integer"))?;
    let hi = hi.trim().parse().map_err(|_| format!("`{hi}` is not an integer"))?;
    Ok((lo, hi))
}

/// `name=lo..hi`.
pub fn parse_named_range(s: &str) -> Result<(String, (i64, i64)), String> {
    let (name, range) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=LO..HI, got `{s}`"))?;
    Ok((name.trim().to_string(), parse_range(range)?))
}

/// Parameter values in declaration order from `name=value` pairs.
pub fn param_values(prog: &Program, given: &[(String, i64)]) -> Result<Vec<i64>, UsageError> {
    let params = prog.params();
    for (name, _) in given {
        if !params.iter().any(|&v| prog.name(v) == name) {
            return Err(UsageError(format!("`{name}` is not a declared parameter")));
        }
    }
    params
        .iter()
        .map(|&v| {
            let name = prog.name(v);
            given
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, x)| *x)
                .ok_or_else(|| UsageError(format!("missing --param {name}=VALUE")))
        })
        .collect()
}

/// Box for the free variables in declaration order; every free variable must be named.
pub fn free_box(prog: &Program, given: &[(String, (i64, i64))]) -> Result<Option<Vec<(i64, i64)>>, UsageError> {
    if given.is_empty() {
        return Ok(None);
    }
    let free = prog.free_vars();
    for (name, _) in given {
        if !free.iter().any(|&v| prog.name(v) == name) {
            return Err(UsageError(format!("`{name}` is not a free variable")));
        }
    }
    free.iter()
        .map(|&v| {
            let name = prog.name(v);
            given
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, r)| *r)
                .ok_or_else(|| UsageError(format!("--box must bound every free variable; `{name}` is missing")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

/// Keep the listed free variables; the others become existentially quantified.
pub fn project(prog: &Program, keep: &[String]) -> Result<Program, UsageError> {
    let free = prog.free_vars();
    for name in keep {
        if !free.iter().any(|&v| prog.name(v) == name) {
            return Err(UsageError(format!("`{name}` is not a free variable")));
        }
    }
    let mut out = prog.clone();
    let mut formula = prog.formula.clone();
    for &v in free.iter().rev() {
        if !keep.iter().any(|n| n == prog.name(v)) {
            out.decls[v].kind = VarKind::Bound;
            formula = Formula::exists(v, formula);
        }
    }
    out.formula = formula;
    Ok(out)
}

pub fn int_poly(s: &str) -> Result<IntPoly, UsageError> {
    parse_int_poly(s, "t").map_err(|e| UsageError(format!("bad polynomial `{s}`: {e}")))
}

/// `x1,y1;x2,y2;...` with rational coordinates.
pub fn parse_vertices(s: &str) -> Result<Vec<Vec<Q>>, UsageError> {
    let pts: Vec<Vec<Q>> = s
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split(',')
                .map(|c| parse_rational(c.trim()).map_err(|e| UsageError(format!("bad coordinate `{c}`: {e}"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if pts.is_empty() {
        return Err(UsageError("no vertices given".into()));
    }
    if pts.iter().any(|p| p.len() != pts[0].len() || p.is_empty()) {
        return Err(UsageError("vertices must all have the same positive dimension".into()));
    }
    Ok(pts)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PqpFile {
    params: Vec<String>,
    pieces: Vec<PieceFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceFile {
    #[serde(default)]
    chamber: Vec<InequalityFile>,
    coset: Option<CosetFile>,
    polynomial: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InequalityFile {
    normal: Vec<i64>,
    bound: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CosetFile {
    moduli: Vec<i64>,
    residues: Vec<i64>,
}

/// PQP from its JSON form; structural problems are reported as library errors.
pub fn load_pqp(path: &Path) -> Result<Result<Pqp, qpcount::Error>, UsageError> {
    let text = read_file(path)?;
    let file: PqpFile =
        serde_json::from_str(&text).map_err(|e| UsageError(format!("bad PQP file {}: {e}", path.display())))?;
    let names: Vec<&str> = file.params.iter().map(String::as_str).collect();
    let k = names.len();
    let mut pieces = Vec::new();
    for p in file.pieces {
        let poly = match parse_multi_poly(&p.polynomial, &names) {
            Ok(poly) => poly,
            Err(e) => return Ok(Err(e)),
        };
        pieces.push(PqpPiece {
            chamber: Chamber {
                inequalities: p.chamber.into_iter().map(|i| (i.normal, i.bound)).collect(),
            },
            coset: p.coset.map_or_else(
                || Coset::trivial(k),
                |c| Coset {
                    moduli: c.moduli,
                    residues: c.residues,
                },
            ),
            poly,
        });
    }
    Ok(Pqp::new(file.params, pieces))
}
