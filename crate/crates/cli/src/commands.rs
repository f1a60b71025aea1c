//! One function per subcommand, each producing a JSON value.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use num_bigint::BigInt;
use qpcount::cooper::eliminate_program;
use qpcount::eval::{argmax_point, count_points, first_points, Cardinality, Method};
use qpcount::fit::{detect_and_fit_eqp, verify_eqp};
use qpcount::formula::{print_program, Program};
use qpcount::frobenius::{analyze_semigroup, distinct_values_bounded, parametric_frobenius, Semigroup};
use qpcount::geometry::{
    count_polytope_points, ehrhart_qp, integer_hull_2d, parametric_count_eqp, parametric_hull_vertices,
    twisting_square, verify_pqp_on_grid, HPolytope, PolytopeSpec,
};
use qpcount::qpoly::{eqp_gcd_many, poly_floor_div_with};
use serde_json::{json, Map, Value};

use crate::input::{self, UsageError};
use crate::render;
use crate::settings::Settings;

/// Library errors exit with 2, argument problems with 1.
pub enum Failure {
    Usage(UsageError),
    Compute(qpcount::Error),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e)
    }
}

impl From<qpcount::Error> for Failure {
    fn from(e: qpcount::Error) -> Self {
        Failure::Compute(e)
    }
}

type Out = Result<Value, Failure>;

#[derive(Args, Debug)]
pub struct FormulaArgs {
    /// Formula file
    #[arg(long, value_name = "FILE")]
    pub formula: Option<PathBuf>,
    /// Formula text given inline
    #[arg(long, value_name = "TEXT")]
    pub expr: Option<String>,
    /// Parameter value, repeatable
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = input::parse_assignment, allow_hyphen_values = true)]
    pub params: Vec<(String, i64)>,
}

impl FormulaArgs {
    fn program(&self) -> Result<Program, Failure> {
        Ok(input::load_program(self.formula.as_deref(), self.expr.as_deref())??)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Default)]
pub enum MethodArg {
    #[default]
    Enumerate,
    Qe,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Enumerate => Method::Enumerate,
            MethodArg::Qe => Method::QeThenEnumerate,
        }
    }
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub formula: FormulaArgs,
    #[arg(long, value_enum, default_value_t)]
    pub method: MethodArg,
    /// Search box for a free variable, repeatable; all free variables must be bounded
    #[arg(long = "box", value_name = "NAME=LO..HI", value_parser = input::parse_named_range, allow_hyphen_values = true)]
    pub boxes: Vec<(String, (i64, i64))>,
    /// Also list the first N solutions in lexicographic order
    #[arg(long, value_name = "N")]
    pub list: Option<usize>,
}

pub fn count(a: &CountArgs, s: &Settings) -> Out {
    let prog = a.formula.program()?;
    let params = input::param_values(&prog, &a.formula.params)?;
    let mut opts = s.with_method(a.method.into());
    opts.user_box = input::free_box(&prog, &a.boxes)?;
    let r = count_points(&prog, &params, &opts)?;
    let mut m = Map::new();
    m.insert(
        "count".into(),
        match &r.cardinality {
            Cardinality::Finite(n) => render::int(n),
            Cardinality::Infinite => json!("infinite"),
        },
    );
    if let Some(n) = a.list {
        let names: Vec<&str> = prog.free_vars().iter().map(|&v| prog.name(v)).collect();
        m.insert("variables".into(), json!(names));
        m.insert("points".into(), json!(first_points(&prog, &params, n, &opts)?));
    }
    Ok(Value::Object(m))
}

#[derive(Args, Debug)]
pub struct ArgmaxArgs {
    #[command(flatten)]
    pub formula: FormulaArgs,
    #[arg(long, value_enum, default_value_t)]
    pub method: MethodArg,
    /// Objective coefficients, one per free variable
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub dir: Vec<i64>,
}

pub fn argmax(a: &ArgmaxArgs, s: &Settings) -> Out {
    let prog = a.formula.program()?;
    let params = input::param_values(&prog, &a.formula.params)?;
    let best = argmax_point(&prog, &params, &a.dir, &s.with_method(a.method.into()))?;
    let names: Vec<&str> = prog.free_vars().iter().map(|&v| prog.name(v)).collect();
    let value = best
        .as_ref()
        .map(|p| p.iter().zip(&a.dir).map(|(x, c)| BigInt::from(*x) * c).sum::<BigInt>());
    Ok(json!({
        "variables": names,
        "point": best,
        "value": value.as_ref().map_or(Value::Null, render::int),
    }))
}

pub fn qe(a: &FormulaArgs) -> Out {
    let prog = a.program()?;
    let out = eliminate_program(&prog)?;
    Ok(json!({"formula": print_program(&out).trim_end()}))
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[command(flatten)]
    pub formula: FormulaArgs,
    /// Free variables to count; the others are projected away [default: all]
    #[arg(long, value_delimiter = ',')]
    pub count_free: Vec<String>,
    /// Sampling starts at LO; the fitted result is then checked on every t in the range
    #[arg(long, value_name = "LO..HI", value_parser = input::parse_range, allow_hyphen_values = true)]
    pub t_range: Option<(i64, i64)>,
    #[arg(long, value_enum, default_value_t)]
    pub method: MethodArg,
}

pub fn fit(a: &FitArgs, s: &Settings) -> Out {
    let prog = a.formula.program()?;
    if prog.params().len() != 1 {
        return Err(UsageError("fit needs a formula with exactly one parameter".into()).into());
    }
    if !a.formula.params.is_empty() {
        return Err(UsageError("fit varies the parameter; --param is not accepted".into()).into());
    }
    let prog = if a.count_free.is_empty() {
        prog
    } else {
        input::project(&prog, &a.count_free)?
    };
    let var = prog.param_name().to_string();
    let opts = s.with_method(a.method.into());
    let oracle = |t: i64| -> qpcount::Result<BigInt> {
        match count_points(&prog, &[t], &opts)?.cardinality {
            Cardinality::Finite(n) => Ok(n),
            Cardinality::Infinite => Err(qpcount::Error::InvalidInput(format!(
                "infinitely many solutions at {var} = {t}"
            ))),
        }
    };
    let mut config = s.fit.clone();
    if let Some((lo, _)) = a.t_range {
        config.sample_start = lo;
    }
    let out = detect_and_fit_eqp(&oracle, &config)?;
    let mut m = render::fit(&out, &var);
    if let Some((lo, hi)) = a.t_range {
        let r = verify_eqp(&out.eqp, &oracle, lo, hi);
        m.insert(
            "checked".into(),
            json!({"range": [lo, hi], "ok": r.ok, "first_mismatch": r.first_mismatch}),
        );
    }
    Ok(Value::Object(m))
}

#[derive(Args, Debug)]
pub struct FloorDivArgs {
    /// Numerator, an integer polynomial in t
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    /// Denominator, an integer polynomial in t
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
}

pub fn floordiv(a: &FloorDivArgs, s: &Settings) -> Out {
    let (f, g) = (input::int_poly(&a.f)?, input::int_poly(&a.g)?);
    let d = poly_floor_div_with(&f, &g, s.fit.max_period)?;
    let mut m = render::eqp(&d.eqp, "t");
    m.insert("status".into(), json!("certified"));
    m.insert("certified_from".into(), json!(d.certified_from));
    Ok(Value::Object(m))
}

#[derive(Args, Debug)]
pub struct GcdArgs {
    /// Integer polynomials in t, comma-separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub polys: Vec<String>,
}

pub fn gcd(a: &GcdArgs) -> Out {
    let polys = a
        .polys
        .iter()
        .map(|p| input::int_poly(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Value::Object(render::eqp(&eqp_gcd_many(&polys)?, "t")))
}

#[derive(Args, Debug)]
pub struct EhrhartArgs {
    /// Vertices as `x1,y1;x2,y2;...`, rational coordinates allowed
    #[arg(long, allow_hyphen_values = true)]
    pub vertices: Option<String>,
    /// Parameter-free formula describing the polytope
    #[arg(long, value_name = "FILE")]
    pub formula: Option<PathBuf>,
}

pub fn ehrhart(a: &EhrhartArgs) -> Out {
    let spec = match (&a.vertices, &a.formula) {
        (Some(v), None) => PolytopeSpec::Vertices(input::parse_vertices(v)?),
        (None, Some(path)) => {
            let prog = input::load_program(Some(path), None)??;
            if !prog.params().is_empty() {
                return Err(UsageError("the polytope must not have parameters; its dilates are counted".into()).into());
            }
            PolytopeSpec::Rows(HPolytope::from_program(&prog)?)
        }
        _ => return Err(UsageError("exactly one of --vertices or --formula is required".into()).into()),
    };
    let e = ehrhart_qp(&spec)?;
    let mut m = render::qp(&e.qp, "t");
    m.insert("degree".into(), json!(e.degree));
    m.insert("volume".into(), e.volume.as_ref().map_or(Value::Null, render::rational));
    m.insert(
        "vertices".into(),
        e.vertices
            .iter()
            .map(|v| v.iter().map(render::rational).collect::<Value>())
            .collect(),
    );
    Ok(Value::Object(m))
}

#[derive(Args, Debug)]
pub struct TwistArgs {
    /// Count at this t instead of fitting the whole family
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<i64>,
}

pub fn twist_count(a: &TwistArgs, s: &Settings) -> Out {
    let p = twisting_square();
    match a.t {
        Some(t) => Ok(json!({"t": t, "count": render::int(&count_polytope_points(&p, t)?)})),
        None => Ok(Value::Object(render::fit(&parametric_count_eqp(&p, &s.fit)?, "t"))),
    }
}

#[derive(Args, Debug)]
pub struct HullArgs {
    /// Two-variable formula with at most one parameter t; defaults to the twisting square
    #[arg(long, value_name = "FILE")]
    pub formula: Option<PathBuf>,
    /// Integer hull at this t instead of vertex formulas per residue class
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<i64>,
}

pub fn hull(a: &HullArgs, s: &Settings) -> Out {
    let p = match &a.formula {
        Some(path) => HPolytope::from_program(&input::load_program(Some(path), None)??)?,
        None => twisting_square(),
    };
    if p.dim != 2 {
        return Err(UsageError("integer hulls are computed in the plane only".into()).into());
    }
    if let Some(t) = a.t {
        let h = integer_hull_2d(&p, t)?;
        let vs: Vec<Value> = h
            .vertices
            .iter()
            .map(|(x, y)| json!([render::rational(x), render::rational(y)]))
            .collect();
        return Ok(json!({"t": t, "vertices": vs}));
    }
    let fit = parametric_hull_vertices(&p, &s.fit)?;
    let classes: Vec<Value> = fit
        .classes
        .iter()
        .map(|c| {
            json!({
                "residue": c.residue,
                "threshold": c.threshold,
                "vertices": c.vertices.iter().map(|(x, y)| json!([x.fmt_with("t"), y.fmt_with("t")])).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({"period": fit.period, "classes": classes}))
}

#[derive(Args, Debug)]
pub struct FrobeniusArgs {
    /// Generators: integers, or integer polynomials in t for a parametric family
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub gens: Vec<String>,
    /// Count the distinct values of Σ λ_i a_i with 0 <= λ_i <= bound_i instead
    #[arg(long, value_delimiter = ',')]
    pub bounds: Vec<i64>,
}

pub fn frobenius(a: &FrobeniusArgs, s: &Settings) -> Out {
    let numeric: Option<Vec<i64>> = a.gens.iter().map(|g| g.trim().parse().ok()).collect();
    match numeric {
        Some(gens) if !a.bounds.is_empty() => {
            Ok(json!({"distinct_values": distinct_values_bounded(&gens, &a.bounds)?}))
        }
        Some(gens) => Ok(render::gap_data(&analyze_semigroup(&Semigroup::new(&gens)?)?)),
        None if !a.bounds.is_empty() => Err(UsageError("--bounds needs numeric generators".into()).into()),
        None => {
            let polys = a
                .gens
                .iter()
                .map(|g| input::int_poly(g))
                .collect::<Result<Vec<_>, _>>()?;
            let p = parametric_frobenius(&polys, &s.fit)?;
            Ok(json!({
                "modulus": p.classes.modulus,
                "excluded_residues": p.excluded_residues(),
                "gcd": render::eqp(&p.gcd, "t"),
                "frobenius": render::fit(&p.frobenius, "t"),
                "genus": render::fit(&p.genus, "t"),
            }))
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyPqpArgs {
    /// Formula whose counts the PQP should match
    #[arg(long, value_name = "FILE")]
    pub formula: PathBuf,
    /// PQP in the JSON schema printed by this command
    #[arg(long, value_name = "FILE")]
    pub pqp: PathBuf,
    /// Grid range per parameter, repeatable
    #[arg(long = "grid", value_name = "NAME=LO..HI", value_parser = input::parse_named_range, allow_hyphen_values = true)]
    pub grid: Vec<(String, (i64, i64))>,
    /// Skip grid points outside every piece instead of failing
    #[arg(long)]
    pub domain_only: bool,
}

pub fn verify_pqp(a: &VerifyPqpArgs) -> Out {
    let prog = input::load_program(Some(&a.formula), None)??;
    let pqp = input::load_pqp(&a.pqp)??;
    let ranges = pqp
        .params
        .iter()
        .map(|name| {
            a.grid
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, r)| *r)
                .ok_or_else(|| UsageError(format!("missing --grid {name}=LO..HI")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if let Some((n, _)) = a.grid.iter().find(|(n, _)| !pqp.params.contains(n)) {
        return Err(UsageError(format!("`{n}` is not a PQP parameter")).into());
    }
    let report = verify_pqp_on_grid(&pqp, &prog, &ranges, a.domain_only)?;
    Ok(json!({
        "ok": report.ok,
        "points_checked": report.points_checked,
        "first_mismatch": report.first_mismatch,
        "pqp": render::pqp(&pqp),
    }))
}
