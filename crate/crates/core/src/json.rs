//! JSON encodings of groups, subgroups, metric groups, extensions and reports.
//!
//! Rationals are `"num/den"` strings; elements are integer arrays; the only
//! floats are modular-data matrix entries, written as `[re, im]` pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::{MetricGroup, QuadraticForm};
use crate::group::{FinAbGroup, GroupElt, Subgroup};
use crate::lagrangian::LagrangianExtension;
use crate::modular::ModularData;
use crate::orbifold::{CentralCharge, OrbifoldReport};
use crate::qmodz::QmodZ;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub factors: Vec<i64>,
}

impl GroupJson {
    pub fn from_group(g: &FinAbGroup) -> Self {
        GroupJson {
            factors: g.factors().iter().map(|&d| d as i64).collect(),
        }
    }

    pub fn to_group(&self) -> Result<FinAbGroup> {
        FinAbGroup::new(&self.factors)
    }
}

fn elt_json(a: &GroupElt) -> Vec<i64> {
    a.coords().iter().map(|&c| c as i64).collect()
}

fn elt_from(g: &FinAbGroup, v: &[i64]) -> Result<GroupElt> {
    g.element(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupJson {
    pub generators: Vec<Vec<i64>>,
}

impl SubgroupJson {
    pub fn from_subgroup(h: &Subgroup) -> Self {
        SubgroupJson {
            generators: h.generators().iter().map(elt_json).collect(),
        }
    }

    pub fn to_subgroup(&self, g: &FinAbGroup) -> Result<Subgroup> {
        let gens = self
            .generators
            .iter()
            .map(|v| elt_from(g, v))
            .collect::<Result<Vec<_>>>()?;
        g.subgroup_generated(&gens)
    }
}

/// `pairing` is the Gram matrix of `dq`; its diagonal (`2 q(e_i)`) is
/// written out but ignored when reading.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricJson {
    pub group: GroupJson,
    pub q_diag: Vec<QmodZ>,
    pub pairing: Vec<Vec<QmodZ>>,
}

impl MetricJson {
    pub fn from_form(f: &QuadraticForm) -> Self {
        MetricJson {
            group: GroupJson::from_group(f.group()),
            q_diag: f.diag().to_vec(),
            pairing: f.pairing().to_vec(),
        }
    }

    pub fn from_metric(m: &MetricGroup) -> Self {
        Self::from_form(m.form())
    }

    pub fn to_form(&self) -> Result<QuadraticForm> {
        QuadraticForm::new(
            self.group.to_group()?,
            self.q_diag.clone(),
            self.pairing.clone(),
        )
    }

    /// Degenerate forms are reported as invalid input.
    pub fn to_metric(&self) -> Result<MetricGroup> {
        MetricGroup::new(self.to_form()?).map_err(|e| match e {
            Error::Degenerate(msg) => Error::InvalidInput(format!("degenerate form: {msg}")),
            other => other,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionJson {
    pub metric: MetricJson,
    pub iota_images: Vec<Vec<i64>>,
    pub quot_generator_lift: Vec<i64>,
}

impl ExtensionJson {
    pub fn from_extension(e: &LagrangianExtension) -> Self {
        ExtensionJson {
            metric: MetricJson::from_metric(e.metric()),
            iota_images: vec![elt_json(e.iota())],
            quot_generator_lift: elt_json(e.lift()),
        }
    }

    /// `n` is recovered as the square root of the group order.
    pub fn to_extension(&self) -> Result<LagrangianExtension> {
        let metric = self.metric.to_metric()?;
        let g = metric.group().clone();
        let order = g.order();
        let n = (order as f64).sqrt().round() as u64;
        if n * n != order {
            return Err(Error::invalid(format!(
                "group order {order} is not a square"
            )));
        }
        let [iota] = self.iota_images.as_slice() else {
            return Err(Error::invalid("iota_images must hold exactly one element"));
        };
        let iota = elt_from(&g, iota)?;
        let lift = elt_from(&g, &self.quot_generator_lift)?;
        LagrangianExtension::new(n, metric, iota, lift)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub n: u64,
    pub c: u64,
    pub k: u64,
    pub spectrum: Vec<QmodZ>,
    pub anomalous: bool,
    pub anomaly_index: u64,
    /// The orbifold representation category as a Lagrangian extension.
    pub metric_group: ExtensionJson,
    pub dual_lagrangian: Option<SubgroupJson>,
}

impl ReportJson {
    pub fn from_report(r: &OrbifoldReport) -> Self {
        ReportJson {
            n: r.n,
            c: r.c.c(),
            k: r.k(),
            spectrum: r.spectrum.clone(),
            anomalous: r.anomalous,
            anomaly_index: r.anomaly_index,
            metric_group: ExtensionJson::from_extension(&r.rep_category),
            dual_lagrangian: r.dual_lagrangian.as_ref().map(SubgroupJson::from_subgroup),
        }
    }

    pub fn to_report(&self) -> Result<OrbifoldReport> {
        let c = CentralCharge::new(self.c)?;
        if c.k() != self.k {
            return Err(Error::invalid(format!(
                "k = {} does not match c = {}",
                self.k, self.c
            )));
        }
        let rep_category = self.metric_group.to_extension()?;
        if rep_category.n() != self.n {
            return Err(Error::invalid("extension does not match n"));
        }
        let dual_lagrangian = self
            .dual_lagrangian
            .as_ref()
            .map(|s| s.to_subgroup(rep_category.group()))
            .transpose()?;
        Ok(OrbifoldReport {
            n: self.n,
            c,
            spectrum: self.spectrum.clone(),
            anomalous: self.anomalous,
            anomaly_index: self.anomaly_index,
            rep_category,
            dual_lagrangian,
        })
    }
}

/// Either an extension or an orbifold report (whose extension is used).
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ExtensionInput {
    Extension(ExtensionJson),
    Report(Box<ReportJson>),
}

impl ExtensionInput {
    pub fn to_extension(&self) -> Result<LagrangianExtension> {
        match self {
            ExtensionInput::Extension(e) => e.to_extension(),
            ExtensionInput::Report(r) => r.metric_group.to_extension(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModularDataJson {
    pub labels: Vec<Vec<i64>>,
    pub sigma: u8,
    #[serde(rename = "S")]
    pub s: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "T")]
    pub t: Vec<[f64; 2]>,
}

impl ModularDataJson {
    pub fn from_modular_data(md: &ModularData) -> Self {
        ModularDataJson {
            labels: md.labels().iter().map(elt_json).collect(),
            sigma: md.sigma(),
            s: md
                .s()
                .rows()
                .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            t: md.t().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

/// Parse JSON text, reporting syntax and schema errors as invalid input.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed JSON: {e}")))
}

/// Pretty JSON with a trailing newline.
pub fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}
