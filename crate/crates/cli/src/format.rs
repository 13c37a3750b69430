//! Problem and metric file formats.
//!
//! Problems are human-editable JSON:
//!
//! ```json
//! {
//!   "n": 2, "p": 2,
//!   "Q": [[1.0, 0.0], [0.0, 1.0]],        // row-major dense, or {"diag": [..]}
//!   "q": [-3.0, 0.0],
//!   "alpha": 1.0,
//!   "F": "identity",                      // "identity", {"diag": [..]}, or dense
//!   "A": "identity", "B": "identity", "c": [0.0, 0.0]
//! }
//! ```
//!
//! Missing `A`, `B`, `c` default to identity, identity, and zero. Numbers are
//! serialized in shortest round-trip form, so a spec survives a write/read
//! cycle bit-exactly.

use equilibrate::{DMatrix, DVector, ProblemSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixRepr {
    Named(String),
    Diag { diag: Vec<f64> },
    Dense(Vec<Vec<f64>>),
}

impl MatrixRepr {
    pub fn to_matrix(&self, rows: usize, cols: usize, field: &str) -> anyhow::Result<DMatrix<f64>> {
        match self {
            MatrixRepr::Named(name) if name == "identity" => {
                if rows != cols {
                    anyhow::bail!("field {field}: \"identity\" needs square dimensions, got {rows}x{cols}");
                }
                Ok(DMatrix::identity(rows, cols))
            }
            MatrixRepr::Named(name) => anyhow::bail!("field {field}: unknown matrix name {name:?}"),
            MatrixRepr::Diag { diag } => {
                if diag.len() != rows || rows != cols {
                    anyhow::bail!(
                        "field {field}: diagonal of length {} cannot fill {rows}x{cols}",
                        diag.len()
                    );
                }
                Ok(DMatrix::from_diagonal(&DVector::from_vec(diag.clone())))
            }
            MatrixRepr::Dense(data) => {
                if data.len() != rows || data.iter().any(|r| r.len() != cols) {
                    anyhow::bail!("field {field}: dense data does not fill {rows}x{cols}");
                }
                let flat: Vec<f64> = data.iter().flatten().copied().collect();
                Ok(DMatrix::from_row_slice(rows, cols, &flat))
            }
        }
    }

    pub fn from_matrix(m: &DMatrix<f64>) -> MatrixRepr {
        if m.is_identity(0.0) {
            return MatrixRepr::Named("identity".into());
        }
        if m.nrows() == m.ncols() {
            let mut diagonal = true;
            'outer: for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    if i != j && m[(i, j)] != 0.0 {
                        diagonal = false;
                        break 'outer;
                    }
                }
            }
            if diagonal {
                return MatrixRepr::Diag { diag: m.diagonal().iter().copied().collect() };
            }
        }
        MatrixRepr::Dense(
            (0..m.nrows())
                .map(|i| m.row(i).iter().copied().collect())
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    pub n: usize,
    pub p: usize,
    #[serde(rename = "Q")]
    pub q_mat: MatrixRepr,
    pub q: Vec<f64>,
    pub alpha: f64,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub f_mat: Option<MatrixRepr>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a_mat: Option<MatrixRepr>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b_mat: Option<MatrixRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
}

impl ProblemFile {
    pub fn to_spec(&self) -> anyhow::Result<ProblemSpec> {
        let (n, p) = (self.n, self.p);
        if self.q.len() != n {
            anyhow::bail!("field q: length {} does not match n = {n}", self.q.len());
        }
        let q_mat = self.q_mat.to_matrix(n, n, "Q")?;
        let identity = MatrixRepr::Named("identity".into());
        let f_mat = self.f_mat.as_ref().unwrap_or(&identity).to_matrix(p, n, "F")?;
        let a_mat = self.a_mat.as_ref().unwrap_or(&identity).to_matrix(p, n, "A")?;
        let b_mat = self.b_mat.as_ref().unwrap_or(&identity).to_matrix(p, p, "B")?;
        let c_vec = match &self.c {
            Some(c) => {
                if c.len() != p {
                    anyhow::bail!("field c: length {} does not match p = {p}", c.len());
                }
                DVector::from_vec(c.clone())
            }
            None => DVector::zeros(p),
        };
        Ok(ProblemSpec::general(
            q_mat,
            DVector::from_vec(self.q.clone()),
            self.alpha,
            f_mat,
            a_mat,
            b_mat,
            c_vec,
        ))
    }

    pub fn from_spec(spec: &ProblemSpec) -> ProblemFile {
        ProblemFile {
            n: spec.n(),
            p: spec.p(),
            q_mat: MatrixRepr::from_matrix(&spec.q_mat),
            q: spec.q_vec.iter().copied().collect(),
            alpha: spec.alpha,
            f_mat: Some(MatrixRepr::from_matrix(&spec.f_mat)),
            a_mat: Some(MatrixRepr::from_matrix(&spec.a_mat)),
            b_mat: Some(MatrixRepr::from_matrix(&spec.b_mat)),
            c: Some(spec.c_vec.iter().copied().collect()),
        }
    }
}

pub fn read_problem(path: &std::path::Path) -> anyhow::Result<ProblemSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    let file: ProblemFile = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    file.to_spec()
}

pub fn write_problem(path: &std::path::Path, spec: &ProblemSpec) -> anyhow::Result<()> {
    let file = ProblemFile::from_spec(spec);
    std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

/// Metric file: `{"m": [..]}` on the `m` scale (`M^{-1} v = m ⊙ v`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricFile {
    pub m: Vec<f64>,
}

pub fn read_metric(path: &std::path::Path) -> anyhow::Result<DVector<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    let file: MetricFile = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    Ok(DVector::from_vec(file.m))
}
