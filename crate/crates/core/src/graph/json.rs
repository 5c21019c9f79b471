use serde::{Deserialize, Serialize};

use super::{Edge, GraphError, OrbifoldGkmGraph};
use crate::exact::{format_rat, parse_rat, Rat};
use crate::poly::LinearForm;

/// Wire format. Rationals are strings such as `"-3/2"`; bare integers are
/// accepted on input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub torus_rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: String,
    pub to: String,
    pub alpha_from: Vec<RatJson>,
    pub alpha_to: Vec<RatJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatJson {
    Text(String),
    Int(i64),
}

impl RatJson {
    fn parse(&self) -> Result<Rat, GraphError> {
        match self {
            RatJson::Text(s) => parse_rat(s).map_err(|e| GraphError::BadRational(e.to_string())),
            RatJson::Int(v) => Ok(Rat::from_integer((*v).into())),
        }
    }
}

fn form_to_json(f: &LinearForm) -> Vec<RatJson> {
    f.coefficients().iter().map(|q| RatJson::Text(format_rat(q))).collect()
}

fn form_from_json(v: &[RatJson]) -> Result<LinearForm, GraphError> {
    Ok(LinearForm::new(v.iter().map(RatJson::parse).collect::<Result<_, _>>()?))
}

impl OrbifoldGkmGraph {
    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            torus_rank: self.torus_rank,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    from: self.vertices[e.from].clone(),
                    to: self.vertices[e.to].clone(),
                    alpha_from: form_to_json(&e.alpha_from),
                    alpha_to: form_to_json(&e.alpha_to),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<Self, GraphError> {
        let find = |s: &str| {
            j.vertices
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| GraphError::UnknownVertex(s.to_string()))
        };
        let edges = j
            .edges
            .iter()
            .map(|e| {
                Ok(Edge {
                    from: find(&e.from)?,
                    to: find(&e.to)?,
                    alpha_from: form_from_json(&e.alpha_from)?,
                    alpha_to: form_from_json(&e.alpha_to)?,
                })
            })
            .collect::<Result<Vec<_>, GraphError>>()?;
        Self::new(j.torus_rank, j.vertices.clone(), edges)
    }

    pub fn from_json_str(s: &str) -> Result<Self, GraphError> {
        let j: GraphJson = serde_json::from_str(s).map_err(|e| GraphError::Json(e.to_string()))?;
        Self::from_json(&j)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("graph JSON serializes")
    }
}
