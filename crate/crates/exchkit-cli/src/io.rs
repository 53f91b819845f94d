//! Instance files and report serialization.
//!
//! The instance format is a stable JSON contract: `format_version` "1",
//! alphabet size `c`, length `n`, `lambda` as `n` rows of `c` positive
//! weights, `g` as the `c^n` symmetric kernel values indexed with the first
//! coordinate most significant, and an optional generation `seed`. Doubles
//! round-trip exactly (shortest-decimal serialization on both paths).

use exchkit::{
    BoundReport, Instance, SymmetricKernel, TupleDistribution, WeightFunction, WeightProfile,
};
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Write;
use std::path::Path;

#[derive(Serialize, Deserialize)]
pub struct InstanceFile {
    pub format_version: String,
    pub c: usize,
    pub n: usize,
    pub lambda: Vec<Vec<f64>>,
    pub g: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance) -> Self {
        let profile = instance.profile();
        InstanceFile {
            format_version: "1".to_string(),
            c: instance.c(),
            n: instance.n(),
            lambda: (0..instance.n())
                .map(|i| profile.entry(i).values().to_vec())
                .collect(),
            g: instance.kernel().values().to_vec(),
            seed: instance.seed(),
        }
    }

    fn profile(&self) -> Result<WeightProfile, String> {
        if self.format_version != "1" {
            return Err(format!(
                "unsupported format_version {:?} (expected \"1\")",
                self.format_version
            ));
        }
        if self.lambda.len() != self.n {
            return Err(format!(
                "lambda has {} rows, expected n = {}",
                self.lambda.len(),
                self.n
            ));
        }
        let rows: Result<Vec<WeightFunction>, String> = self
            .lambda
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != self.c {
                    return Err(format!(
                        "lambda row {} has {} entries, expected c = {}",
                        i,
                        row.len(),
                        self.c
                    ));
                }
                WeightFunction::new(row.clone()).map_err(|e| format!("lambda row {i}: {e}"))
            })
            .collect();
        WeightProfile::new(rows?).map_err(|e| format!("lambda: {e}"))
    }

    pub fn to_instance(&self) -> Result<Instance, String> {
        let profile = self.profile()?;
        let kernel =
            SymmetricKernel::new(self.c, self.n, self.g.clone()).map_err(|e| format!("g: {e}"))?;
        Instance::new(profile, kernel, self.seed).map_err(|e| e.to_string())
    }

    /// The raw tilted law `g(x) prod_i lambda_i(x_i)`, normalized, without
    /// requiring `g` to be symmetric. This is what `check` diagnoses: a
    /// hand-edited kernel must be caught as a property violation, not as a
    /// malformed file.
    pub fn raw_law(&self) -> Result<(WeightProfile, TupleDistribution), String> {
        let profile = self.profile()?;
        let expected = exchkit::space::tuple_count(self.c, self.n)
            .map_err(|e| e.to_string())?;
        if self.g.len() != expected {
            return Err(format!("g has {} entries, expected c^n = {}", self.g.len(), expected));
        }
        for (index, &value) in self.g.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(format!("g[{index}] = {value} is not a positive number"));
            }
        }
        let mut weights = self.g.clone();
        exchkit::space::for_each_tuple(self.c, self.n, |index, tuple| {
            weights[index] *= profile.tuple_weight(tuple);
        });
        let law = TupleDistribution::from_weights(self.c, self.n, weights)
            .map_err(|e| e.to_string())?;
        Ok((profile, law))
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("instance serialization");
        text.push('\n');
        text
    }
}

/// Writes to the path when given, stdout otherwise.
pub fn emit(out: Option<&Path>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| format!("cannot write stdout: {e}"))
        }
    }
}

pub const REPORT_HEADER: &str =
    "seed,c,n,k,tv_exact,bound_general,bound_finite,prod_r_k,prod_r_n,pass_general,pass_finite";

pub fn report_row(r: &BoundReport) -> String {
    let seed = match r.seed {
        Some(s) => s.to_string(),
        None => String::new(),
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        seed,
        r.c,
        r.n,
        r.k,
        r.tv_exact,
        r.bound_general,
        r.bound_finite,
        r.prod_r_k,
        r.prod_r_n,
        r.pass_general,
        r.pass_finite
    )
}

pub fn report_csv(rows: &[BoundReport]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(REPORT_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&report_row(row));
        out.push('\n');
    }
    out
}
