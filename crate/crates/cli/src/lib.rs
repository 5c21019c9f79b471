//! Command implementations behind the `orbigraph` binary. Every command
//! returns its full output as a string so it can be tested without a process.

use std::fmt::Write as _;
use std::path::PathBuf;

use orbigraph::cohomology::{self, Domain};
use orbigraph::exact::{format_rat, Int, IntegerLattice};
use orbigraph::facering::{int_json, FaceMonomial, FaceRing};
use orbigraph::fixtures::{self, Fixture};
use orbigraph::graph::{validate, FaceId, OrbifoldGkmGraph, ValidationMode};
use orbigraph::quotient::{derive_graph, CharacteristicPair, DerivedGraph};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input or a failed check; exit code 2.
    #[error("{0}")]
    Invalid(String),
    /// Anything else; exit code 1.
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Path(PathBuf),
    Fixture(String),
    Text(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Human,
    Json,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: Source,
    pub degree: Option<u32>,
    pub max_degree: Option<u32>,
    pub domain: Domain,
    pub check: ValidationMode,
    pub format: Format,
    pub face: Option<String>,
}

impl RunConfig {
    pub fn new(source: Source) -> Self {
        RunConfig {
            source,
            degree: None,
            max_degree: None,
            domain: Domain::Integral,
            check: ValidationMode::Torus,
            format: Format::Human,
            face: None,
        }
    }

    pub fn fixture(name: &str) -> Self {
        Self::new(Source::Fixture(name.to_string()))
    }

    pub fn json(mut self) -> Self {
        self.format = Format::Json;
        self
    }

    pub fn degree(mut self, d: u32) -> Self {
        self.degree = Some(d);
        self
    }

    pub fn max_degree(mut self, d: u32) -> Self {
        self.max_degree = Some(d);
        self
    }
}

/// Printed text plus whether the command's check passed (exit 0 vs 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }

    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            2
        }
    }
}

#[derive(Debug, Clone)]
pub enum Input {
    Graph(OrbifoldGkmGraph),
    Pair(CharacteristicPair),
}

/// Graph JSON carries `torus_rank`; anything else is read as a pair.
pub fn parse_input(text: &str) -> Result<Input, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| invalid(format!("malformed JSON: {e}")))?;
    if value.get("torus_rank").is_some() {
        OrbifoldGkmGraph::from_json_str(text).map(Input::Graph).map_err(invalid)
    } else {
        CharacteristicPair::from_json_str(text).map(Input::Pair).map_err(invalid)
    }
}

pub fn load(source: &Source) -> Result<Input, CliError> {
    match source {
        Source::Path(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Internal(format!("cannot read {}: {e}", p.display())))?;
            parse_input(&text)
        }
        Source::Text(t) => parse_input(t),
        Source::Fixture(name) => match fixtures::by_name(name) {
            Some(Fixture::Graph(g)) => Ok(Input::Graph(g)),
            Some(Fixture::Pair(p)) => Ok(Input::Pair(p)),
            None => Err(invalid(format!(
                "unknown fixture `{name}`; known: {}",
                fixtures::NAMES.join(", ")
            ))),
        },
    }
}

/// A face ring with display names, plus the pair data when there is one.
struct Context {
    ring: FaceRing,
    derived: Option<DerivedGraph>,
    names: Vec<String>,
}

impl Context {
    fn build(input: Input) -> Result<Self, CliError> {
        match input {
            Input::Graph(g) => {
                let report = validate(&g, ValidationMode::Torus);
                if !report.is_valid() {
                    return Err(invalid(format!("not an orbifold torus graph:\n{}", violations(&report))));
                }
                let ring = FaceRing::new(g).map_err(invalid)?;
                let names = (0..ring.poset().len()).map(|f| ring.face_label(f)).collect();
                Ok(Context { ring, derived: None, names })
            }
            Input::Pair(p) => {
                let d = derive_graph(&p).map_err(invalid)?;
                let ring = FaceRing::new(d.graph.clone()).map_err(invalid)?;
                let names = d.face_names(&ring).map_err(invalid)?;
                Ok(Context { ring, derived: Some(d), names })
            }
        }
    }

    fn graph(&self) -> &OrbifoldGkmGraph {
        self.ring.graph()
    }

    fn face_by_name(&self, name: &str) -> Result<FaceId, CliError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| invalid(format!("no face named `{name}`; faces: {}", self.names.join(", "))))
    }

    fn monomial(&self, m: &FaceMonomial) -> String {
        m.iter().map(|&f| format!("x[{}]", self.names[f])).collect::<Vec<_>>().join("*")
    }

    fn is_facet(&self, f: FaceId) -> bool {
        self.ring.poset().face(f).dim + 1 == self.ring.valence()
    }
}

fn violations(report: &orbigraph::graph::ValidationReport) -> String {
    report.violations.iter().map(|v| format!("  {v}\n")).collect()
}

fn mode_name(m: ValidationMode) -> &'static str {
    match m {
        ValidationMode::Gkm => "gkm",
        ValidationMode::Torus => "torus",
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn lattice_rows(l: &IntegerLattice) -> Vec<Vec<Value>> {
    l.basis().rows_iter().map(|r| r.iter().map(int_json).collect()).collect()
}

fn row_string(r: &[Int]) -> String {
    let parts: Vec<String> = r.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn index_string(l: &IntegerLattice) -> String {
    l.index().map_or_else(|| "infinite".to_string(), |i| i.to_string())
}

pub fn cmd_validate(cfg: &RunConfig) -> Result<Output, CliError> {
    let (kind, graph, extra) = match load(&cfg.source)? {
        Input::Graph(g) => ("graph", g, Value::Null),
        Input::Pair(p) => {
            let d = match derive_graph(&p) {
                Ok(d) => d,
                Err(e) => {
                    let msg = format!("invalid characteristic pair: {e}");
                    let text = match cfg.format {
                        Format::Json => pretty(&json!({"kind": "pair", "valid": false, "violations": [e.to_string()]})),
                        Format::Human => format!("{msg}\n"),
                    };
                    return Ok(Output { text, ok: false });
                }
            };
            let dets: Vec<Value> = d.dets.iter().map(int_json).collect();
            ("pair", d.graph, json!({ "determinants": dets }))
        }
    };
    let report = validate(&graph, cfg.check);
    let ok = report.is_valid();
    let text = match cfg.format {
        Format::Json => {
            let mut v = json!({
                "kind": kind,
                "mode": mode_name(cfg.check),
                "valid": ok,
                "vertices": graph.num_vertices(),
                "edges": graph.num_edges(),
                "violations": report.violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            if let Value::Object(m) = extra {
                v.as_object_mut().expect("object").extend(m);
            }
            pretty(&v)
        }
        Format::Human => {
            let mut s = format!(
                "{kind}: {} vertices, {} edges, torus rank {}\n",
                graph.num_vertices(),
                graph.num_edges(),
                graph.torus_rank()
            );
            if let Some(dets) = extra.get("determinants") {
                let _ = writeln!(s, "|det| at vertices: {dets}");
            }
            if ok {
                let _ = writeln!(s, "valid ({} mode)", mode_name(cfg.check));
            } else {
                let _ = writeln!(s, "INVALID ({} mode):", mode_name(cfg.check));
                s.push_str(&violations(&report));
            }
            s
        }
    };
    Ok(Output { text, ok })
}

pub fn cmd_derive(cfg: &RunConfig) -> Result<Output, CliError> {
    let Input::Pair(p) = load(&cfg.source)? else {
        return Err(invalid("derive needs a characteristic pair"));
    };
    let d = derive_graph(&p).map_err(invalid)?;
    let g = &d.graph;
    let text = match cfg.format {
        Format::Json => {
            let mut s = g.to_json_string();
            s.push('\n');
            s
        }
        Format::Human => {
            let mut s = String::new();
            for v in 0..g.num_vertices() {
                let _ = writeln!(s, "{} (|det| = {})", g.vertex_name(v), d.dets[v].magnitude());
                for &e in g.darts_at(v) {
                    let _ = writeln!(s, "  -> {}: {}", g.vertex_name(g.terminus(e)), g.alpha(e));
                }
            }
            s
        }
    };
    Ok(Output::ok(text))
}

pub fn cmd_faces(cfg: &RunConfig) -> Result<Output, CliError> {
    let ctx = Context::build(load(&cfg.source)?)?;
    let g = ctx.graph();
    let poset = ctx.ring.poset();
    let text = match cfg.format {
        Format::Json => {
            let faces: Vec<Value> = poset
                .faces()
                .iter()
                .enumerate()
                .map(|(id, f)| {
                    json!({
                        "id": id,
                        "dim": f.dim,
                        "name": ctx.names[id],
                        "vertices": f.vertices.iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>(),
                        "edges": f.edges,
                    })
                })
                .collect();
            pretty(&json!({ "counts_by_dim": poset.count_by_dim(), "faces": faces }))
        }
        Format::Human => {
            let mut s = format!("face counts by dimension: {:?}\n", poset.count_by_dim());
            for (id, f) in poset.faces().iter().enumerate() {
                let vs: Vec<&str> = f.vertices.iter().map(|&v| g.vertex_name(v)).collect();
                let _ = writeln!(
                    s,
                    "[{id}] dim {} {}: vertices {{{}}} edges {:?}",
                    f.dim,
                    ctx.names[id],
                    vs.join(", "),
                    f.edges
                );
            }
            s
        }
    };
    Ok(Output::ok(text))
}

/// Faces listed by `thom`: the named one, or every proper face with facets first.
fn thom_faces(ctx: &Context, cfg: &RunConfig) -> Result<Vec<FaceId>, CliError> {
    if let Some(name) = &cfg.face {
        return Ok(vec![ctx.face_by_name(name)?]);
    }
    let poset = ctx.ring.poset();
    let mut ids: Vec<FaceId> = (0..poset.len()).filter(|&f| f != ctx.ring.top()).collect();
    ids.sort_by_key(|&f| (std::cmp::Reverse(poset.face(f).dim), f));
    Ok(ids)
}

pub fn cmd_thom(cfg: &RunConfig) -> Result<Output, CliError> {
    let ctx = Context::build(load(&cfg.source)?)?;
    let g = ctx.graph();
    let mut entries = Vec::new();
    let mut human = String::new();
    for f in thom_faces(&ctx, cfg)? {
        let class = ctx.ring.thom_class(f).map_err(invalid)?;
        let ell = ctx.ring.minimal_thom(f).map_err(invalid)?;
        let bound = match &ctx.derived {
            Some(d) if ctx.is_facet(f) => Some(d.lcm_bound(&ctx.ring, f)),
            _ => None,
        };
        let dim = ctx.ring.poset().face(f).dim;
        let _ = write!(human, "{} (dim {dim}): minimal multiplier {ell}", ctx.names[f]);
        if let Some(b) = &bound {
            let _ = write!(human, ", lcm bound {b}");
        }
        human.push('\n');
        for (v, p) in class.values.iter().enumerate() {
            if !p.is_zero() {
                let _ = writeln!(human, "  {}: {p}", g.vertex_name(v));
            }
        }
        entries.push(json!({
            "face": ctx.names[f],
            "dim": dim,
            "minimal_multiplier": int_json(&ell),
            "lcm_bound": bound.as_ref().map(int_json),
            "thom_class": class.to_json(g),
        }));
    }
    let text = match cfg.format {
        Format::Json => pretty(&json!({ "faces": entries })),
        Format::Human => human,
    };
    Ok(Output::ok(text))
}

pub fn cmd_lattice(cfg: &RunConfig) -> Result<Output, CliError> {
    let ctx = Context::build(load(&cfg.source)?)?;
    let d = cfg.degree.unwrap_or(1);
    let z = ctx.ring.integrality_lattice(d, None);
    let text = match cfg.format {
        Format::Json => {
            let names = &ctx.names;
            let j = ctx.ring.lattice_json(&z, |f| names[f].clone());
            pretty(&serde_json::to_value(j).expect("lattice JSON"))
        }
        Format::Human => {
            let mut s = format!(
                "integrality lattice in degree {} (polynomial degree {d}): {} monomials, rank {}, index {}\n",
                2 * d,
                z.monomials.len(),
                z.lattice.rank(),
                index_string(&z.lattice)
            );
            let mons: Vec<String> = z.monomials.iter().map(|m| ctx.monomial(m)).collect();
            let _ = writeln!(s, "monomials: {}", mons.join(", "));
            s.push_str("HNF basis:\n");
            for r in z.lattice.basis().rows_iter() {
                let _ = writeln!(s, "  {}", row_string(r));
            }
            s
        }
    };
    Ok(Output::ok(text))
}

pub fn cmd_cohomology(cfg: &RunConfig) -> Result<Output, CliError> {
    let ctx = Context::build(load(&cfg.source)?)?;
    let g = ctx.graph();
    let d_max = cfg.max_degree.unwrap_or(ctx.ring.valence() as u32);
    let ranks = cohomology::ordinary_ranks(g, d_max).map_err(invalid)?;
    let mut degrees = Vec::new();
    let mut human = String::new();
    for d in 0..=d_max {
        match cfg.domain {
            Domain::Integral => {
                let basis = cohomology::basis(g, d).map_err(invalid)?;
                let _ = writeln!(human, "degree {} (polynomial degree {d}): rank {}", 2 * d, basis.len());
                for (i, c) in basis.iter().enumerate() {
                    let vals: Vec<String> =
                        c.values.iter().enumerate().map(|(v, p)| format!("{}={p}", g.vertex_name(v))).collect();
                    let _ = writeln!(human, "  b{i}: {}", vals.join(", "));
                }
                let classes: Vec<Value> =
                    basis.iter().map(|c| serde_json::to_value(c.to_json(g)).expect("class JSON")).collect();
                degrees.push(json!({ "degree": 2 * d, "rank": basis.len(), "basis": classes }));
            }
            Domain::Rational => {
                let rows = cohomology::rational_basis(g, d).map_err(invalid)?;
                let _ = writeln!(human, "degree {} (polynomial degree {d}): dimension {}", 2 * d, rows.len());
                let coords: Vec<Vec<String>> =
                    rows.iter().map(|r| r.iter().map(format_rat).collect()).collect();
                for r in &coords {
                    let _ = writeln!(human, "  [{}]", r.join(", "));
                }
                degrees.push(json!({ "degree": 2 * d, "dimension": rows.len(), "basis_coordinates": coords }));
            }
        }
    }
    let ordinary: Vec<usize> = ranks.iter().map(|&(_, r)| r).collect();
    let _ = writeln!(human, "ordinary ranks (degrees 0,2,..,{}): {:?}", 2 * d_max, ordinary);
    let text = match cfg.format {
        Format::Json => pretty(&json!({
            "domain": match cfg.domain { Domain::Integral => "integral", Domain::Rational => "rational" },
            "degrees": degrees,
            "ordinary_ranks": ranks.iter().map(|&(deg, r)| json!({"degree": deg, "rank": r})).collect::<Vec<_>>(),
        })),
        Format::Human => human,
    };
    Ok(Output::ok(text))
}

pub fn cmd_polygon(cfg: &RunConfig) -> Result<Output, CliError> {
    let Input::Pair(p) = load(&cfg.source)? else {
        return Err(invalid("polygon needs a polygon characteristic pair"));
    };
    let poly = p.polygon().ok_or_else(|| invalid("input is not a polygon pair"))?.clone();
    let n = cfg.degree.unwrap_or(1) as usize;
    let check = poly.gcd_check();
    let lattice = if check.holds { Some(poly.generators(n).map_err(invalid)?) } else { None };
    let names: Vec<String> = (1..=poly.m()).map(|k| format!("F{k}")).collect();
    let monomials: Vec<String> = (0..poly.m())
        .flat_map(|i| {
            let names = &names;
            (0..n).map(move |a| {
                let next = &names[(i + 1) % names.len()];
                let mut parts = Vec::new();
                if n - a > 0 {
                    parts.push(power(&names[i], n - a));
                }
                if a > 0 {
                    parts.push(power(next, a));
                }
                parts.join("*")
            })
        })
        .collect();
    let text = match cfg.format {
        Format::Json => pretty(&json!({
            "degree": 2 * n,
            "d": check.ds.iter().map(int_json).collect::<Vec<_>>(),
            "gcd": int_json(&check.gcd),
            "gcd_condition": check.holds,
            "monomials": monomials,
            "generators": lattice.as_ref().map(lattice_rows),
            "rank": lattice.as_ref().map(IntegerLattice::rank),
        })),
        Format::Human => {
            let ds: Vec<String> = check.ds.iter().map(ToString::to_string).collect();
            let mut s = format!("D = ({}), gcd = {}\n", ds.join(", "), check.gcd);
            match &lattice {
                None => s.push_str("gcd condition fails: no generator lattice\n"),
                Some(l) => {
                    let _ = writeln!(
                        s,
                        "degree {} (n = {n}) generators: rank {}, index {}",
                        2 * n,
                        l.rank(),
                        index_string(l)
                    );
                    let _ = writeln!(s, "coordinates: {}", monomials.join(", "));
                    for r in l.basis().rows_iter() {
                        let _ = writeln!(s, "  {}", row_string(r));
                    }
                }
            }
            s
        }
    };
    Ok(Output::ok(text))
}

fn power(name: &str, e: usize) -> String {
    if e == 1 {
        format!("x[{name}]")
    } else {
        format!("x[{name}]^{e}")
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Output, CliError> {
    let ctx = Context::build(load(&cfg.source)?)?;
    let d_max = cfg.max_degree.unwrap_or(2);
    let mut ok = true;
    let mut rows = Vec::new();
    let mut human = String::new();
    for d in 1..=d_max {
        let r = ctx.ring.check_iso_degree(d).map_err(invalid)?;
        ok &= r.holds();
        let _ = writeln!(
            human,
            "degree {} (polynomial degree {d}): {} ({} monomials, image rank {}, cohomology rank {}, {}/{} relations vanish)",
            2 * d,
            if r.holds() { "isomorphic" } else { "MISMATCH" },
            r.monomial_count,
            r.image_rank,
            r.cohomology_rank,
            r.relations_checked - r.relations_failed.len(),
            r.relations_checked
        );
        rows.push(json!({
            "degree": 2 * d,
            "holds": r.holds(),
            "monomials": r.monomial_count,
            "image_rank": r.image_rank,
            "cohomology_rank": r.cohomology_rank,
            "lattices_equal": r.lattices_equal,
            "relations_checked": r.relations_checked,
            "relations_failed": r.relations_failed.iter().map(|&(a, b)| [ctx.names[a].clone(), ctx.names[b].clone()]).collect::<Vec<_>>(),
        }));
    }
    let text = match cfg.format {
        Format::Json => pretty(&json!({ "holds": ok, "degrees": rows })),
        Format::Human => human,
    };
    Ok(Output { text, ok })
}

/// Canonical JSON of the input (graph or pair), for fixture export.
pub fn cmd_emit(cfg: &RunConfig) -> Result<Output, CliError> {
    let mut text = match load(&cfg.source)? {
        Input::Graph(g) => g.to_json_string(),
        Input::Pair(p) => p.to_json_string().map_err(invalid)?,
    };
    text.push('\n');
    Ok(Output::ok(text))
}
