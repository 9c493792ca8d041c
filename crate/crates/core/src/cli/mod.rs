//! Job files in, JSON reports out.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, ErrorClass, Result};
use crate::graph::{from_json, to_dot, to_json, GraphJson, MetricGraph};
use crate::kummer::superelliptic::SuperellipticOptions;
use crate::kummer::{superelliptic, SuperellipticInput};
use crate::s3cover::{classify_with, closure_covering_data_inertia, elliptic_skeleton, galois_closure, CubicClass, S3Options};
use crate::septree::{separate_with, Point};
use crate::valfield::{field, parse_poly, parse_series, FieldData, Q};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Inertia,
    Quadratic,
    Both,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    #[serde(default = "default_p")]
    pub p: u32,
    #[serde(default = "default_m")]
    pub tower_degree: usize,
    #[serde(default = "default_prec")]
    pub precision: i64,
}

fn default_p() -> u32 {
    13
}
fn default_m() -> usize {
    1
}
fn default_prec() -> i64 {
    crate::valfield::DEFAULT_PREC
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig { p: default_p(), tower_degree: default_m(), precision: default_prec() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Payload {
    /// Marked points as series literals, or "inf".
    Septree { points: Vec<String> },
    Superelliptic { n: u64, f: String },
    Cubic { p: String, q: String },
    Elliptic { a: String, b: String },
    Jacobian { graph: GraphJson },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JobSpec {
    pub schema: u32,
    #[serde(default)]
    pub field: FieldConfig,
    /// Length of leaves at every marked point, as a rational literal.
    #[serde(default)]
    pub point_leaves: Option<String>,
    #[serde(default)]
    pub route: Option<Route>,
    #[serde(flatten)]
    pub payload: Payload,
}

impl std::str::FromStr for JobSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let job: JobSpec = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if job.schema != SCHEMA {
            return Err(Error::Input(format!("unsupported schema {}", job.schema)));
        }
        Ok(job)
    }
}

/// Flags that override the job file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub p: Option<u32>,
    pub tower_degree: Option<usize>,
    pub precision: Option<i64>,
    pub point_leaves: Option<String>,
    pub route: Option<Route>,
}

impl Overrides {
    fn apply(&self, job: &JobSpec) -> JobSpec {
        let mut j = job.clone();
        if let Some(p) = self.p {
            j.field.p = p;
        }
        if let Some(m) = self.tower_degree {
            j.field.tower_degree = m;
        }
        if let Some(n) = self.precision {
            j.field.precision = n;
        }
        if self.point_leaves.is_some() {
            j.point_leaves = self.point_leaves.clone();
        }
        if self.route.is_some() {
            j.route = self.route;
        }
        j
    }
}

/// A report: JSON body plus named graphs for DOT output.
#[derive(Clone, Debug)]
pub struct Report {
    pub body: Value,
    pub graphs: Vec<(String, MetricGraph)>,
}

fn canonical(g: &MetricGraph) -> GraphJson {
    to_json(&g.canonicalized())
}

fn leaves(job: &JobSpec) -> Result<Option<Q>> {
    job.point_leaves.as_deref().map(crate::graph::parse_length).transpose()
}

fn parse_point(s: &str, f: &'static FieldData) -> Result<Point> {
    match s.trim() {
        "inf" | "infinity" => Ok(Point::Infinity),
        t => Ok(Point::Finite(parse_series(t, f)?)),
    }
}

fn s3_options(job: &JobSpec) -> Result<S3Options> {
    Ok(S3Options { precision: job.field.precision, point_leaves: leaves(job)? })
}

pub fn run(job: &JobSpec) -> Result<Report> {
    let f = field(job.field.p, job.field.tower_degree)?;
    let prec = job.field.precision;
    let mut graphs = Vec::new();
    let body = match &job.payload {
        Payload::Septree { points } => {
            let pts = points.iter().map(|s| parse_point(s, f)).collect::<Result<Vec<_>>>()?;
            let mut tree = separate_with(&pts, prec)?;
            if let Some(len) = leaves(job)? {
                tree = tree.attach_point_leaves(len)?;
            }
            graphs.push(("tree".into(), tree.graph.clone()));
            json!({ "kind": "septree", "tree": tree.to_json() })
        }
        Payload::Superelliptic { n, f: poly } => {
            let poly = parse_poly(poly, f, "x")?;
            let opts = SuperellipticOptions { precision: prec, point_leaves: leaves(job)? };
            let s = superelliptic(*n, &SuperellipticInput::Poly(poly), &opts)?;
            let skeleton = s.cover.cover.minimal_skeleton();
            let ok = s.cover.cover.total_genus()? as u32 == s.genus;
            graphs.push(("tree".into(), s.tree.graph.clone()));
            graphs.push(("cover".into(), s.cover.cover.clone()));
            graphs.push(("skeleton".into(), skeleton.clone()));
            json!({
                "kind": "superelliptic",
                "degree": n,
                "genus": s.genus,
                "genus_check": ok,
                "tower_degree": s.tower_degree,
                "tree": s.tree.to_json(),
                "covering": s.cover.to_json(),
                "edge_inertia": s.data.edge_inertia,
                "decomposition": s.data.decomposition,
                "skeleton": canonical(&skeleton),
            })
        }
        Payload::Cubic { p, q } => {
            let p = parse_poly(p, f, "x")?;
            let q = parse_poly(q, f, "x")?;
            match classify_with(&p, &q, prec)? {
                CubicClass::S3 => cubic_report(job, &p, &q, &mut graphs)?,
                CubicClass::Abelian if p.is_zero() => {
                    let opts = SuperellipticOptions { precision: prec, point_leaves: leaves(job)? };
                    let s = superelliptic(3, &SuperellipticInput::Poly(q.neg()), &opts)?;
                    let skeleton = s.cover.cover.minimal_skeleton();
                    graphs.push(("skeleton".into(), skeleton.clone()));
                    json!({
                        "kind": "cubic",
                        "class": CubicClass::Abelian,
                        "genus": s.genus,
                        "covering": s.cover.to_json(),
                        "skeleton": canonical(&skeleton),
                    })
                }
                CubicClass::Abelian => return Err(Error::Unsupported("Galois cubic with p != 0".into())),
                CubicClass::Reducible => return Err(Error::Unsupported("reducible cubic".into())),
            }
        }
        Payload::Elliptic { a, b } => {
            let a = parse_series(a, f)?;
            let b = parse_series(b, f)?;
            let r = elliptic_skeleton(&a, &b, &s3_options(job)?)?;
            graphs.push(("skeleton".into(), r.skeleton.clone()));
            json!({
                "kind": "elliptic",
                "case": r.case,
                "v_delta": r.v_delta.to_string(),
                "reduction": r.reduction,
                "skeleton": canonical(&r.skeleton),
                "ledger": r.closure.ledger,
            })
        }
        Payload::Jacobian { graph } => {
            let g = from_json(graph)?;
            let jac = g.jacobian()?;
            graphs.push(("graph".into(), g.clone()));
            json!({
                "kind": "jacobian",
                "order": jac.order.to_string(),
                "factors": jac.factors.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            })
        }
    };
    Ok(Report { body, graphs })
}

fn cubic_report(
    job: &JobSpec,
    p: &crate::valfield::ValuedPoly,
    q: &crate::valfield::ValuedPoly,
    graphs: &mut Vec<(String, MetricGraph)>,
) -> Result<Value> {
    let opts = s3_options(job)?;
    let route = job.route.unwrap_or(Route::Quadratic);
    let r = galois_closure(p, q, &opts)?;
    let mut body = json!({
        "kind": "cubic",
        "class": CubicClass::S3,
        "tower_degree": r.tower_degree,
        "tree": r.quadratic.tree.to_json(),
        "ledger": r.ledger,
        "ledger_ok": r.ledger.check().is_ok(),
    });
    let quadratic = json!({
        "edge_preimages": r.edge_preimages(),
        "vertex_preimages": r.vertex_preimages(),
    });
    if route != Route::Inertia {
        body["quadratic_subfield"] = json!({
            "covering_data": quadratic,
            "d": r.quadratic.cover.to_json(),
            "w_potential": r.w.psi.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "closure": r.closure.to_json(),
            "tau": { "vertex": r.tau.vertex, "edge": r.tau.edge },
        });
    }
    if route != Route::Quadratic {
        // the inertia route works over the field the closure needed
        let ir = closure_covering_data_inertia(&r.cubic, &opts)?;
        let data = json!({ "edge_preimages": ir.edge_preimages(), "vertex_preimages": ir.vertex_preimages() });
        body["inertia"] = json!({
            "covering_data": data,
            "scale": ir.scale,
            "vertical_inertia": ir.vertex_inertia,
            "borrowed": ir.borrowed,
        });
        if route == Route::Both {
            let agree = data == quadratic;
            body["routes_agree"] = json!(agree);
            if !agree {
                return Err(Error::Inconsistent("inertia and quadratic routes disagree".into()));
            }
        }
    }
    body["quotient"] = json!(canonical(&r.quotient.graph));
    body["skeleton"] = json!(canonical(&r.skeleton));
    body["genus"] = json!(r.skeleton.total_genus()?);
    graphs.push(("d".into(), r.quadratic.cover.cover.clone()));
    graphs.push(("closure".into(), r.closure.cover.clone()));
    graphs.push(("quotient".into(), r.quotient.graph.clone()));
    graphs.push(("skeleton".into(), r.skeleton.clone()));
    Ok(body)
}

pub fn exit_code(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::Input => 2,
        ErrorClass::Precision => 3,
        ErrorClass::Unsupported => 4,
        ErrorClass::Internal => 5,
    }
}

fn error_body(e: &Error) -> Value {
    let class = match e.class() {
        ErrorClass::Input => "input",
        ErrorClass::Precision => "precision",
        ErrorClass::Unsupported => "unsupported",
        ErrorClass::Internal => "internal",
    };
    json!({ "schema": SCHEMA, "error": { "class": class, "message": e.to_string() } })
}

fn finish(r: Result<Report>) -> (Value, i32, Vec<(String, MetricGraph)>) {
    match r {
        Ok(mut rep) => {
            rep.body["schema"] = json!(SCHEMA);
            (rep.body, 0, rep.graphs)
        }
        Err(e) => (error_body(&e), exit_code(e.class()), vec![]),
    }
}

fn write_dots(dir: &Path, prefix: &str, graphs: &[(String, MetricGraph)]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, g) in graphs {
        std::fs::write(dir.join(format!("{prefix}{name}.dot")), to_dot(g, name))?;
    }
    Ok(())
}

#[derive(Parser, Debug)]
#[command(name = "skeleta", about = "Skeleta of Kummer and trigonal covers of the projective line")]
pub struct Args {
    /// Job file (JSON); stdin when absent or "-".
    pub job: Option<PathBuf>,
    /// Residue characteristic.
    #[arg(long)]
    pub field_char: Option<u32>,
    /// Initial degree of the residue field over F_p.
    #[arg(long)]
    pub tower_deg: Option<usize>,
    #[arg(long)]
    pub precision: Option<i64>,
    /// Attach leaves of this length at every marked point.
    #[arg(long)]
    pub point_leaves: Option<String>,
    /// Write one DOT file per graph into this directory.
    #[arg(long)]
    pub emit_dot: Option<PathBuf>,
    /// Covering-data route for cubic jobs.
    #[arg(long, value_enum)]
    pub route: Option<Route>,
    /// The input is a JSON array of jobs, run concurrently.
    #[arg(long)]
    pub batch: bool,
}

fn read_input(path: &Option<PathBuf>) -> std::io::Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

/// Run the command line; returns the process exit code.
pub fn main_with(args: Args) -> i32 {
    let ov = Overrides {
        p: args.field_char,
        tower_degree: args.tower_deg,
        precision: args.precision,
        point_leaves: args.point_leaves.clone(),
        route: args.route,
    };
    let text = match read_input(&args.job) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("skeleta: {e}");
            return exit_code(ErrorClass::Input);
        }
    };
    let (out, code) = if args.batch {
        let jobs: std::result::Result<Vec<Value>, _> = serde_json::from_str(&text);
        let jobs = match jobs {
            Ok(j) => j,
            Err(e) => {
                let e = Error::Parse(e.to_string());
                println!("{}", error_body(&e));
                return exit_code(e.class());
            }
        };
        let results: Vec<_> = std::thread::scope(|s| {
            let handles: Vec<_> = jobs
                .iter()
                .map(|j| {
                    let ov = &ov;
                    s.spawn(move || finish(j.to_string().parse::<JobSpec>().and_then(|job| run(&ov.apply(&job)))))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("job thread")).collect()
        });
        let mut code = 0;
        let mut bodies = Vec::new();
        for (i, (body, c, graphs)) in results.into_iter().enumerate() {
            if let Some(dir) = &args.emit_dot {
                if let Err(e) = write_dots(dir, &format!("job{i}_"), &graphs) {
                    eprintln!("skeleta: {e}");
                }
            }
            code = code.max(c);
            bodies.push(body);
        }
        (Value::Array(bodies), code)
    } else {
        let (body, code, graphs) = finish(text.parse::<JobSpec>().and_then(|job| run(&ov.apply(&job))));
        if let Some(dir) = &args.emit_dot {
            if let Err(e) = write_dots(dir, "", &graphs) {
                eprintln!("skeleta: {e}");
            }
        }
        (body, code)
    };
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&out).expect("report serializes"));
    let ledger_failed = |v: &Value| v.get("ledger_ok") == Some(&Value::Bool(false));
    let failed = match &out {
        Value::Array(xs) => xs.iter().any(ledger_failed),
        v => ledger_failed(v),
    };
    if failed {
        return exit_code(ErrorClass::Internal);
    }
    code
}

pub fn main() -> i32 {
    main_with(Args::parse())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(s: &str) -> JobSpec {
        s.parse::<JobSpec>().unwrap()
    }

    #[test]
    fn banana_jacobian() {
        let j = job(r#"{"schema":1,"kind":"jacobian","graph":{"vertices":[{"id":0,"weight":0},{"id":1,"weight":0}],
            "edges":[{"id":0,"from":0,"to":1,"length":"1"},{"id":1,"from":0,"to":1,"length":"1"},{"id":2,"from":0,"to":1,"length":"1"}]}}"#);
        let r = run(&j).unwrap();
        assert_eq!(r.body["order"], "3");
    }

    #[test]
    fn cubic_report_is_deterministic() {
        let j = job(r#"{"schema":1,"kind":"cubic","p":"x^3","q":"x^3+pi^3","field":{"precision":32},"route":"both"}"#);
        let a = run(&j).unwrap().body;
        let b = run(&j).unwrap().body;
        assert_eq!(a.to_string(), b.to_string());
        assert_eq!(a["genus"], 3);
        assert_eq!(a["routes_agree"], true);
        assert_eq!(a["skeleton"]["vertices"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn elliptic_multiplicative() {
        let j = job(r#"{"schema":1,"kind":"elliptic","a":"-3","b":"2 + pi^4","field":{"precision":24}}"#);
        let r = run(&j).unwrap().body;
        assert_eq!(r["reduction"]["cycle_length"], "4");
    }

    #[test]
    fn errors_map_to_exit_codes() {
        assert!(matches!(r#"{"schema":2,"kind":"septree","points":[]}"#.parse::<JobSpec>(), Err(Error::Input(_))));
        let j = job(r#"{"schema":1,"kind":"superelliptic","n":13,"f":"x^2+1"}"#);
        let (body, code, _) = finish(run(&j));
        assert_eq!(code, 4);
        assert_eq!(body["error"]["class"], "unsupported");
        let (_, code, _) = finish("{".parse::<JobSpec>().and_then(|j| run(&j)));
        assert_eq!(code, 2);
    }

    #[test]
    fn overrides_win() {
        let j = job(r#"{"schema":1,"kind":"septree","points":["0","pi","inf"]}"#);
        let ov = Overrides { p: Some(37), precision: Some(8), ..Default::default() };
        let k = ov.apply(&j);
        assert_eq!((k.field.p, k.field.precision), (37, 8));
        assert!(run(&k).is_ok());
    }
}
