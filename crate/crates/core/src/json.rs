//! JSON documents for arrangements, graphs and blow-up traces.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::blowup::{BlowupTrace, CenterRecord, DivisorTable};
use crate::diagonal::{
    Anchor, AnchoredBlock, AnchoredModel, AnchoredPolydiagonal, Polydiagonal, PolydiagonalModel,
};
use crate::dim::Dim;
use crate::error::{input, Result};
use crate::graph::LabeledGraph;
use crate::linear::{format_rational, parse_rational, LinearModel, Subspace};
use crate::model::Model;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: u32,
    pub edges: Vec<[u32; 2]>,
}

impl GraphDoc {
    pub fn from_graph(g: &LabeledGraph) -> Self {
        GraphDoc {
            n: g.n(),
            edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<LabeledGraph> {
        LabeledGraph::new(self.n, self.edges.iter().map(|e| (e[0], e[1])))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchoredBlockDoc {
    pub members: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementDoc {
    Linear {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        conormal: Vec<Vec<String>>,
    },
    Polydiagonal {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        blocks: Vec<Vec<u32>>,
    },
    Anchored {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        blocks: Vec<AnchoredBlockDoc>,
    },
}

impl ElementDoc {
    pub fn name(&self) -> Option<&str> {
        match self {
            ElementDoc::Linear { name, .. }
            | ElementDoc::Polydiagonal { name, .. }
            | ElementDoc::Anchored { name, .. } => name.as_deref(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientDoc {
    /// Number of factors (polydiagonal and anchored models).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Dimension of ℚ^d (linear model).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub projective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementDoc {
    /// `linear`, `polydiagonal` or `anchored`.
    pub model: String,
    pub ambient: AmbientDoc,
    pub elements: Vec<ElementDoc>,
    /// Names of the building-set members; all elements when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub building: Option<Vec<String>>,
    /// Named blow-up orders.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub orders: BTreeMap<String, Vec<String>>,
}

/// A decoded arrangement document for one model.
#[derive(Debug, Clone)]
pub struct Instance<M: Model> {
    pub model: M,
    pub elements: Vec<M::Elem>,
    pub building: Vec<M::Elem>,
    pub orders: BTreeMap<String, Vec<M::Elem>>,
}

impl<M: Model> Instance<M> {
    /// An instance whose elements and building set coincide.
    pub fn new(model: M, building: Vec<M::Elem>) -> Self {
        Instance {
            model,
            elements: building.clone(),
            building,
            orders: BTreeMap::new(),
        }
    }

    pub fn with_order(mut self, name: &str, order: Vec<M::Elem>) -> Self {
        self.orders.insert(name.to_string(), order);
        self
    }

    /// Looks up an element by label or by the ASCII spelling (`D12`, `D45,inf`).
    pub fn resolve(&self, name: &str) -> Result<M::Elem> {
        let wanted = normalize_name(name);
        let pool = self.elements.iter().chain(&self.building);
        for e in pool {
            if normalize_name(&self.model.label(e)) == wanted {
                return Ok(e.clone());
            }
        }
        input(format!("unknown element {name}"))
    }

    pub fn resolve_all(&self, names: &[String]) -> Result<Vec<M::Elem>> {
        names.iter().map(|n| self.resolve(n)).collect()
    }

    fn names(&self, items: &[M::Elem]) -> Vec<String> {
        items.iter().map(|e| self.model.label(e)).collect()
    }

    fn finish_doc(
        &self,
        model: &str,
        ambient: AmbientDoc,
        elements: Vec<ElementDoc>,
    ) -> ArrangementDoc {
        let building = (self.building != self.elements).then(|| self.names(&self.building));
        let orders = self
            .orders
            .iter()
            .map(|(k, v)| (k.clone(), self.names(v)))
            .collect();
        ArrangementDoc {
            model: model.to_string(),
            ambient,
            elements,
            building,
            orders,
        }
    }
}

fn normalize_name(s: &str) -> String {
    let s = s.trim();
    let s = s
        .strip_prefix('D')
        .map(|r| format!("Δ{r}"))
        .unwrap_or_else(|| s.to_string());
    s.replace("inf", "∞").replace(' ', "")
}

#[derive(Debug, Clone)]
pub enum AnyInstance {
    Linear(Instance<LinearModel>),
    Polydiagonal(Instance<PolydiagonalModel>),
    Anchored(Instance<AnchoredModel>),
}

impl AnyInstance {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ArrangementDoc = serde_json::from_str(text)
            .map_err(|e| crate::Error::Input(format!("malformed arrangement JSON: {e}")))?;
        AnyInstance::from_doc(&doc)
    }

    pub fn from_doc(doc: &ArrangementDoc) -> Result<Self> {
        match doc.model.as_str() {
            "linear" => {
                let Some(d) = doc.ambient.dim else {
                    return input("linear model needs ambient.dim");
                };
                let mut model = LinearModel::new(d, doc.ambient.projective);
                let mut elements = Vec::new();
                for (i, e) in doc.elements.iter().enumerate() {
                    let s = linear_element(d, e)?;
                    model.check(&s)?;
                    let name = e
                        .name()
                        .map(str::to_string)
                        .unwrap_or_else(|| format!("S{}", i + 1));
                    model.name(&s, name);
                    elements.push(s);
                }
                finish(doc, model, elements).map(AnyInstance::Linear)
            }
            "polydiagonal" => {
                let n = ambient_n(doc)?;
                let elements = doc
                    .elements
                    .iter()
                    .map(|e| match e {
                        ElementDoc::Polydiagonal { blocks, .. } => {
                            Polydiagonal::new(n, blocks.clone())
                        }
                        _ => input("polydiagonal elements need integer blocks"),
                    })
                    .collect::<Result<Vec<_>>>()?;
                finish(doc, PolydiagonalModel { n }, elements).map(AnyInstance::Polydiagonal)
            }
            "anchored" => {
                let n = ambient_n(doc)?;
                let elements = doc
                    .elements
                    .iter()
                    .map(|e| anchored_element(n, e))
                    .collect::<Result<Vec<_>>>()?;
                finish(doc, AnchoredModel { n }, elements).map(AnyInstance::Anchored)
            }
            other => input(format!("unknown model {other}")),
        }
    }

    pub fn to_doc(&self) -> ArrangementDoc {
        match self {
            AnyInstance::Linear(inst) => {
                let elements = inst
                    .elements
                    .iter()
                    .map(|s| ElementDoc::Linear {
                        name: Some(inst.model.label(s)),
                        conormal: s
                            .conormal()
                            .iter()
                            .map(|r| r.iter().map(format_rational).collect())
                            .collect(),
                    })
                    .collect();
                let ambient = AmbientDoc {
                    n: None,
                    dim: Some(inst.model.dim),
                    projective: inst.model.projective,
                };
                inst.finish_doc("linear", ambient, elements)
            }
            AnyInstance::Polydiagonal(inst) => {
                let elements = inst
                    .elements
                    .iter()
                    .map(|p| ElementDoc::Polydiagonal {
                        name: Some(p.label()),
                        blocks: p.blocks().to_vec(),
                    })
                    .collect();
                let ambient = AmbientDoc {
                    n: Some(inst.model.n),
                    ..AmbientDoc::default()
                };
                inst.finish_doc("polydiagonal", ambient, elements)
            }
            AnyInstance::Anchored(inst) => {
                let elements = inst
                    .elements
                    .iter()
                    .map(|p| ElementDoc::Anchored {
                        name: Some(p.label()),
                        blocks: p
                            .blocks()
                            .iter()
                            .map(|b| AnchoredBlockDoc {
                                members: b.members.clone(),
                                anchor: b.anchor.map(|a| a.json_tag().to_string()),
                            })
                            .collect(),
                    })
                    .collect();
                let ambient = AmbientDoc {
                    n: Some(inst.model.n),
                    ..AmbientDoc::default()
                };
                inst.finish_doc("anchored", ambient, elements)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).unwrap_or_default()
    }
}

fn ambient_n(doc: &ArrangementDoc) -> Result<u32> {
    match doc.ambient.n {
        Some(n) => Ok(n),
        None => input(format!("{} model needs ambient.n", doc.model)),
    }
}

fn linear_element(d: usize, e: &ElementDoc) -> Result<Subspace> {
    let ElementDoc::Linear { conormal, .. } = e else {
        return input("linear elements need a conormal matrix");
    };
    let rows = conormal
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| parse_rational(x))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Subspace::new(d, rows)
}

fn anchored_element(n: u32, e: &ElementDoc) -> Result<AnchoredPolydiagonal> {
    let blocks = match e {
        ElementDoc::Anchored { blocks, .. } => blocks
            .iter()
            .map(|b| {
                let anchor = b.anchor.as_deref().map(Anchor::from_tag).transpose()?;
                Ok(AnchoredBlock {
                    members: b.members.clone(),
                    anchor,
                })
            })
            .collect::<Result<Vec<_>>>()?,
        ElementDoc::Polydiagonal { blocks, .. } => blocks
            .iter()
            .map(|b| AnchoredBlock {
                members: b.clone(),
                anchor: None,
            })
            .collect(),
        ElementDoc::Linear { .. } => return input("anchored elements need blocks"),
    };
    AnchoredPolydiagonal::new(n, blocks)
}

fn finish<M: Model>(doc: &ArrangementDoc, model: M, elements: Vec<M::Elem>) -> Result<Instance<M>> {
    let mut inst = Instance {
        model,
        elements: elements.clone(),
        building: elements,
        orders: BTreeMap::new(),
    };
    for (i, e) in inst.elements.iter().enumerate() {
        if inst.elements[..i].contains(e) {
            return input(format!("duplicate element {}", inst.model.label(e)));
        }
    }
    if let Some(names) = &doc.building {
        inst.building = inst.resolve_all(names)?;
    }
    for (k, v) in &doc.orders {
        let order = inst.resolve_all(v)?;
        inst.orders.insert(k.clone(), order);
    }
    Ok(inst)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub j: usize,
    pub center: String,
    pub dim: String,
    pub codim: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorDoc {
    pub name: String,
    pub codim: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRowDoc {
    pub divisors: Vec<String>,
    pub nonempty: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codim: Option<String>,
    pub transversal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub steps: Vec<StepDoc>,
    pub divisors: Vec<DivisorDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nest_table: Vec<TableRowDoc>,
}

/// Dimensions are symbolic (`3m-1`) unless `m` is given.
pub fn dim_string(d: Dim, m: Option<i64>) -> String {
    match m {
        Some(m) => d.at(m).to_string(),
        None => d.to_string(),
    }
}

impl TraceDoc {
    pub fn from_trace(trace: &BlowupTrace, m: Option<i64>) -> Self {
        let steps = trace
            .steps
            .iter()
            .map(|r| StepDoc::from_record(r, m))
            .collect();
        let (divisors, nest_table) = match &trace.table {
            Some(t) => table_docs(t, m),
            None => (Vec::new(), Vec::new()),
        };
        TraceDoc {
            steps,
            divisors,
            nest_table,
        }
    }
}

impl StepDoc {
    pub fn from_record(r: &CenterRecord, m: Option<i64>) -> Self {
        StepDoc {
            j: r.j,
            center: r.center.clone(),
            dim: dim_string(r.dim, m),
            codim: dim_string(r.codim, m),
        }
    }
}

pub fn table_docs(t: &DivisorTable, m: Option<i64>) -> (Vec<DivisorDoc>, Vec<TableRowDoc>) {
    let divisors = t
        .names
        .iter()
        .zip(&t.codims)
        .map(|(n, &c)| DivisorDoc {
            name: n.clone(),
            codim: dim_string(c, m),
        })
        .collect();
    let rows = t
        .rows
        .iter()
        .map(|r| TableRowDoc {
            divisors: r.members.clone(),
            nonempty: r.nonempty,
            codim: r.codim.map(|c| dim_string(c, m)),
            transversal: r.additive,
        })
        .collect();
    (divisors, rows)
}
