//! Line-oriented text formats for instances, assignments, linear forms and
//! regions. `#` starts a comment; blank lines are ignored.

use crate::graph::{Graph, GraphError};
use crate::lp::{LinearForm, LinearSystem, Relation, Var};
use crate::model::{normalize, AgentId, Assignment, EdgePiece, Instance, ModelError, Variant};
use crate::rational::{self, Rational};
use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use thiserror::Error;

pub const INSTANCE_HEADER: &str = "efgc-instance v1";
pub const ASSIGNMENT_HEADER: &str = "efgc-assignment v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    /// The text parsed but the result breaks an invariant, named here.
    #[error("invalid instance: must be {0}")]
    Validation(String),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments removed, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn expect_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    header: &str,
) -> Result<(), FormatError> {
    match lines.next() {
        Some((_, l)) if l.split_whitespace().collect::<Vec<_>>().join(" ") == header => Ok(()),
        Some((n, _)) => Err(parse_err(n, format!("expected header `{header}`"))),
        None => Err(parse_err(1, format!("expected header `{header}`"))),
    }
}

fn parse_value(line: usize, s: &str) -> Result<Rational, FormatError> {
    rational::parse_rational(s).ok_or_else(|| parse_err(line, format!("bad rational `{s}`")))
}

/// Parses and validates an instance, then normalizes the utilities.
/// Utilities missing from an `agent` line are 0.
pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, INSTANCE_HEADER)?;
    let mut variant: Option<Variant> = None;
    let mut vertices: Option<Vec<String>> = None;
    let mut edges: Vec<(String, String, String)> = Vec::new();
    let mut edge_ids: HashSet<String> = HashSet::new();
    let mut agents: Vec<(usize, String, Vec<(String, Rational)>)> = Vec::new();
    for (n, line) in lines {
        let mut words = line.split_whitespace();
        let keyword = words.next().expect("line is non-empty");
        let rest: Vec<&str> = words.collect();
        match keyword {
            "variant" => {
                if variant.is_some() {
                    return Err(parse_err(n, "variant given twice"));
                }
                variant = Some(match rest.as_slice() {
                    ["gc"] => Variant::Gc,
                    ["vdgc"] => Variant::Vdgc,
                    _ => return Err(parse_err(n, "variant must be `gc` or `vdgc`")),
                });
            }
            "vertices" => {
                if vertices.is_some() {
                    return Err(parse_err(n, "vertices given twice"));
                }
                let vs: Vec<String> = rest.iter().map(|s| s.to_string()).collect();
                let mut seen = HashSet::new();
                for v in &vs {
                    if !seen.insert(v) {
                        return Err(parse_err(n, format!("duplicate vertex `{v}`")));
                    }
                }
                vertices = Some(vs);
            }
            "edge" => {
                let [id, u, v] = rest.as_slice() else {
                    return Err(parse_err(n, "expected `edge ID U V`"));
                };
                if !edge_ids.insert(id.to_string()) {
                    return Err(parse_err(n, format!("duplicate edge id `{id}`")));
                }
                let known = vertices.as_ref().ok_or_else(|| parse_err(n, "edge before vertices"))?;
                for w in [u, v] {
                    if !known.iter().any(|x| x == w) {
                        return Err(parse_err(n, format!("unknown vertex `{w}`")));
                    }
                }
                edges.push((id.to_string(), u.to_string(), v.to_string()));
            }
            "agent" => {
                let Some((name, pairs)) = rest.split_first() else {
                    return Err(parse_err(n, "expected `agent NAME EDGE=VALUE ...`"));
                };
                if agents.iter().any(|(_, a, _)| a == name) {
                    return Err(parse_err(n, format!("duplicate agent `{name}`")));
                }
                let mut values = Vec::new();
                for p in pairs {
                    let (e, v) = p
                        .split_once('=')
                        .ok_or_else(|| parse_err(n, format!("expected EDGE=VALUE, got `{p}`")))?;
                    if values.iter().any(|(x, _): &(String, Rational)| x == e) {
                        return Err(parse_err(n, format!("utility for `{e}` given twice")));
                    }
                    values.push((e.to_string(), parse_value(n, v)?));
                }
                agents.push((n, name.to_string(), values));
            }
            other => return Err(parse_err(n, format!("unknown keyword `{other}`"))),
        }
    }
    let variant = variant.ok_or_else(|| parse_err(1, "missing `variant` line"))?;
    let vertices = vertices.ok_or_else(|| parse_err(1, "missing `vertices` line"))?;
    let graph = Graph::new(&vertices, &edges).map_err(|e| match e {
        GraphError::Disconnected => FormatError::Validation("connected".into()),
        GraphError::NoEdges => FormatError::Validation("non-empty (at least one edge)".into()),
        GraphError::SelfLoop(_) | GraphError::ParallelEdge(..) => FormatError::Validation("simple".into()),
        other => parse_err(1, other.to_string()),
    })?;
    let mut names = Vec::new();
    let mut rows = Vec::new();
    for (n, name, values) in agents {
        let mut row = vec![rational::zero(); graph.num_edges()];
        for (e, v) in values {
            let id = graph
                .edge_by_name(&e)
                .ok_or_else(|| parse_err(n, format!("unknown edge `{e}`")))?;
            row[id.0] = v;
        }
        names.push(name);
        rows.push(row);
    }
    let inst = Instance::new(graph, names, rows, variant).map_err(|e| match e {
        ModelError::NoAgents => FormatError::Validation("non-empty (at least one agent)".into()),
        ModelError::NegativeUtility { .. } => FormatError::Validation("non-negative utilities".into()),
        ModelError::AllZeroAgent(a) => FormatError::Validation(format!("positive total utility for agent `{a}`")),
        other => FormatError::Validation(other.to_string()),
    })?;
    normalize(&inst).map_err(|e| FormatError::Validation(e.to_string()))
}

pub fn emit_instance(instance: &Instance) -> String {
    let g = instance.graph();
    let mut out = String::new();
    writeln!(out, "{INSTANCE_HEADER}").unwrap();
    writeln!(out, "variant {}", instance.variant()).unwrap();
    writeln!(out, "vertices {}", g.vertex_names().join(" ")).unwrap();
    for e in g.edges() {
        writeln!(out, "edge {} {} {}", e.name, g.vertex_name(e.low), g.vertex_name(e.high)).unwrap();
    }
    for a in instance.agent_ids() {
        write!(out, "agent {}", instance.agent_name(a)).unwrap();
        for e in g.edge_ids() {
            write!(out, " {}={}", g.edge(e).name, rational::format_rational(instance.utility(a, e))).unwrap();
        }
        out.push('\n');
    }
    out
}

fn closure(closed: bool) -> &'static str {
    if closed {
        "closed"
    } else {
        "open"
    }
}

/// One `piece` line per edge piece, agents in instance order.
pub fn emit_assignment(instance: &Instance, assignment: &Assignment) -> String {
    let mut out = String::new();
    writeln!(out, "{ASSIGNMENT_HEADER}").unwrap();
    for (a, piece) in assignment.pieces.iter().enumerate() {
        for ep in &piece.edge_pieces {
            writeln!(
                out,
                "piece {} {} {} {} {} {}",
                instance.agent_name(AgentId(a)),
                instance.graph().edge(ep.edge).name,
                rational::format_rational(&ep.lo),
                rational::format_rational(&ep.hi),
                closure(ep.lo_closed),
                closure(ep.hi_closed)
            )
            .unwrap();
        }
    }
    out
}

pub fn parse_assignment(text: &str, instance: &Instance) -> Result<Assignment, FormatError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, ASSIGNMENT_HEADER)?;
    let mut asg = Assignment::empty(instance.num_agents());
    for (n, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        let ["piece", agent, edge, lo, hi, lc, hc] = words.as_slice() else {
            return Err(parse_err(n, "expected `piece AGENT EDGE LO HI closed|open closed|open`"));
        };
        let a = instance
            .agent_by_name(agent)
            .ok_or_else(|| parse_err(n, format!("unknown agent `{agent}`")))?;
        let e = instance
            .graph()
            .edge_by_name(edge)
            .ok_or_else(|| parse_err(n, format!("unknown edge `{edge}`")))?;
        let flag = |s: &str| match s {
            "closed" => Ok(true),
            "open" => Ok(false),
            _ => Err(parse_err(n, format!("expected `closed` or `open`, got `{s}`"))),
        };
        asg.pieces[a.0].edge_pieces.push(EdgePiece {
            edge: e,
            lo: parse_value(n, lo)?,
            hi: parse_value(n, hi)?,
            lo_closed: flag(lc)?,
            hi_closed: flag(hc)?,
        });
    }
    Ok(asg)
}

/// Parses `NAME=VALUE` terms (and `const=VALUE`) into a form over `vars`.
fn parse_form(line: usize, terms: &[&str], vars: &BTreeMap<String, usize>) -> Result<LinearForm, FormatError> {
    let mut f = LinearForm::zero();
    for t in terms {
        let (name, v) = t
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected NAME=VALUE, got `{t}`")))?;
        let v = parse_value(line, v)?;
        if name == "const" {
            f.add_constant(&v);
        } else {
            let i = vars
                .get(name)
                .ok_or_else(|| parse_err(line, format!("unknown variable `{name}`")))?;
            f.add_term(Var(*i), &v);
        }
    }
    Ok(f)
}

fn parse_vars(line: usize, names: &[&str]) -> Result<BTreeMap<String, usize>, FormatError> {
    let mut vars = BTreeMap::new();
    for (i, v) in names.iter().enumerate() {
        if v == &"const" || vars.insert(v.to_string(), i).is_some() {
            return Err(parse_err(line, format!("bad or duplicate variable `{v}`")));
        }
    }
    Ok(vars)
}

/// A `vars` line followed by `form` lines.
pub fn parse_forms(text: &str) -> Result<(Vec<String>, Vec<LinearForm>), FormatError> {
    let mut lines = content_lines(text);
    let (n, first) = lines.next().ok_or_else(|| parse_err(1, "expected `vars ...`"))?;
    let words: Vec<&str> = first.split_whitespace().collect();
    if words[0] != "vars" {
        return Err(parse_err(n, "expected `vars ...`"));
    }
    let vars = parse_vars(n, &words[1..])?;
    let names = words[1..].iter().map(|s| s.to_string()).collect();
    let mut forms = Vec::new();
    for (n, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        if words[0] != "form" {
            return Err(parse_err(n, "expected `form ...`"));
        }
        forms.push(parse_form(n, &words[1..], &vars)?);
    }
    Ok((names, forms))
}

/// `ge` and `eq` lines over the given variables (`form >= 0`, `form = 0`).
/// An optional leading `vars` line must list the same variables.
pub fn parse_region(text: &str, var_names: &[String]) -> Result<LinearSystem, FormatError> {
    let vars: BTreeMap<String, usize> = var_names.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    let mut sys = LinearSystem::with_vars(var_names.iter().cloned());
    for (n, line) in content_lines(text) {
        let words: Vec<&str> = line.split_whitespace().collect();
        let rel = match words[0] {
            "vars" => {
                if words[1..].iter().map(|s| s.to_string()).collect::<Vec<_>>() != var_names {
                    return Err(parse_err(n, "region variables differ from the forms file"));
                }
                continue;
            }
            "ge" => Relation::Ge,
            "eq" => Relation::Eq,
            other => return Err(parse_err(n, format!("expected `ge` or `eq`, got `{other}`"))),
        };
        sys.add(parse_form(n, &words[1..], &vars)?, rel);
    }
    Ok(sys)
}
