//! JSON wire formats for vectors, matrices, operators, generators and
//! structured specifications.

use serde::{Deserialize, Serialize};

use crate::displacement::{DisplacementGenerator, OperatorSpec};
use crate::error::{Result, StruxError};
use crate::numkernel::{ComplexVector, DenseMatrix, C64};
use crate::structured::{CauchySpec, FCirculantSpec, HankelSpec, ToeplitzSpec, VandermondeSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorKind {
    Zf,
    ZfT,
    Diag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub kind: OperatorKind,
    pub f: Option<ScalarJson>,
    pub knots: Option<VectorJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub op_a: OperatorJson,
    pub op_b: OperatorJson,
    #[serde(rename = "F")]
    pub f: MatrixJson,
    #[serde(rename = "G")]
    pub g: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum StructuredJson {
    Toeplitz { first_col: VectorJson, first_row: VectorJson },
    Hankel { values: VectorJson },
    Vandermonde {
        knots: VectorJson,
        #[serde(default)]
        transposed: bool,
    },
    Cauchy { row_knots: VectorJson, col_knots: VectorJson },
    Fcirculant { f: ScalarJson, first_col: VectorJson },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformReportJson {
    pub input_length: usize,
    pub output_length: usize,
    pub residual: f64,
}

impl From<C64> for ScalarJson {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl ScalarJson {
    pub fn to_complex(&self) -> Result<C64> {
        let z = C64::new(self.re, self.im);
        if z.is_finite() {
            Ok(z)
        } else {
            Err(StruxError::NonFinite("scalar"))
        }
    }
}

impl From<&[C64]> for VectorJson {
    fn from(v: &[C64]) -> Self {
        Self {
            re: v.iter().map(|z| z.re).collect(),
            im: v.iter().map(|z| z.im).collect(),
        }
    }
}

impl From<&ComplexVector> for VectorJson {
    fn from(v: &ComplexVector) -> Self {
        Self::from(v.as_slice())
    }
}

impl TryFrom<&VectorJson> for ComplexVector {
    type Error = StruxError;
    fn try_from(v: &VectorJson) -> Result<Self> {
        if v.re.len() != v.im.len() {
            return Err(StruxError::Format(format!(
                "vector has {} real and {} imaginary parts",
                v.re.len(),
                v.im.len()
            )));
        }
        ComplexVector::new(v.re.iter().zip(&v.im).map(|(&a, &b)| C64::new(a, b)).collect())
    }
}

impl From<&DenseMatrix> for MatrixJson {
    fn from(m: &DenseMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            re: m.data().iter().map(|z| z.re).collect(),
            im: m.data().iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<&MatrixJson> for DenseMatrix {
    type Error = StruxError;
    fn try_from(m: &MatrixJson) -> Result<Self> {
        let count = m.rows.checked_mul(m.cols).ok_or_else(|| StruxError::Format("matrix too large".into()))?;
        if m.re.len() != count || m.im.len() != count {
            return Err(StruxError::Format(format!(
                "matrix {}x{} needs {count} entries per part",
                m.rows, m.cols
            )));
        }
        let data: Vec<C64> = m.re.iter().zip(&m.im).map(|(&a, &b)| C64::new(a, b)).collect();
        if data.iter().any(|z| !z.is_finite()) {
            return Err(StruxError::NonFinite("matrix"));
        }
        DenseMatrix::new(m.rows, m.cols, data)
    }
}

impl From<&OperatorSpec> for OperatorJson {
    fn from(op: &OperatorSpec) -> Self {
        match op {
            OperatorSpec::UnitCirculantShift(f) => Self {
                kind: OperatorKind::Zf,
                f: Some((*f).into()),
                knots: None,
            },
            OperatorSpec::UnitCirculantShiftTransposed(f) => Self {
                kind: OperatorKind::ZfT,
                f: Some((*f).into()),
                knots: None,
            },
            OperatorSpec::Diagonal(d) => Self {
                kind: OperatorKind::Diag,
                f: None,
                knots: Some(d.into()),
            },
        }
    }
}

impl TryFrom<&OperatorJson> for OperatorSpec {
    type Error = StruxError;
    fn try_from(op: &OperatorJson) -> Result<Self> {
        let scalar = || {
            op.f
                .as_ref()
                .ok_or_else(|| StruxError::Format("shift operator needs a scalar f".into()))?
                .to_complex()
        };
        match op.kind {
            OperatorKind::Zf => Ok(OperatorSpec::shift(scalar()?)),
            OperatorKind::ZfT => Ok(OperatorSpec::shift_t(scalar()?)),
            OperatorKind::Diag => {
                let knots = op
                    .knots
                    .as_ref()
                    .ok_or_else(|| StruxError::Format("diagonal operator needs knots".into()))?;
                Ok(OperatorSpec::diag(ComplexVector::try_from(knots)?))
            }
        }
    }
}

impl From<&DisplacementGenerator> for GeneratorJson {
    fn from(g: &DisplacementGenerator) -> Self {
        Self {
            op_a: (&g.a).into(),
            op_b: (&g.b).into(),
            f: (&g.f_factor).into(),
            g: (&g.g_factor).into(),
        }
    }
}

impl TryFrom<&GeneratorJson> for DisplacementGenerator {
    type Error = StruxError;
    fn try_from(g: &GeneratorJson) -> Result<Self> {
        DisplacementGenerator::new(
            OperatorSpec::try_from(&g.op_a)?,
            OperatorSpec::try_from(&g.op_b)?,
            DenseMatrix::try_from(&g.f)?,
            DenseMatrix::try_from(&g.g)?,
        )
    }
}

/// A structured matrix read from JSON.
#[derive(Debug, Clone, PartialEq)]
pub enum Structured {
    Toeplitz(ToeplitzSpec),
    Hankel(HankelSpec),
    Vandermonde(VandermondeSpec),
    Cauchy(CauchySpec),
    FCirculant(FCirculantSpec),
}

impl Structured {
    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Self::Toeplitz(t) => t.to_dense(),
            Self::Hankel(h) => h.to_dense(),
            Self::Vandermonde(v) => v.to_dense(),
            Self::Cauchy(c) => c.to_dense(),
            Self::FCirculant(c) => c.to_dense(),
        }
    }
}

impl TryFrom<&StructuredJson> for Structured {
    type Error = StruxError;
    fn try_from(s: &StructuredJson) -> Result<Self> {
        let v = |x: &VectorJson| ComplexVector::try_from(x);
        Ok(match s {
            StructuredJson::Toeplitz { first_col, first_row } => {
                Self::Toeplitz(ToeplitzSpec::new(v(first_col)?, v(first_row)?)?)
            }
            StructuredJson::Hankel { values } => Self::Hankel(HankelSpec::new(v(values)?)?),
            StructuredJson::Vandermonde { knots, transposed } => {
                Self::Vandermonde(VandermondeSpec::new(v(knots)?, *transposed))
            }
            StructuredJson::Cauchy { row_knots, col_knots } => {
                Self::Cauchy(CauchySpec::new(v(row_knots)?, v(col_knots)?)?)
            }
            StructuredJson::Fcirculant { f, first_col } => {
                Self::FCirculant(FCirculantSpec::new(f.to_complex()?, v(first_col)?))
            }
        })
    }
}

impl From<&Structured> for StructuredJson {
    fn from(s: &Structured) -> Self {
        match s {
            Structured::Toeplitz(t) => Self::Toeplitz {
                first_col: (&t.first_col).into(),
                first_row: (&t.first_row).into(),
            },
            Structured::Hankel(h) => Self::Hankel {
                values: (&h.skew_diagonal_values).into(),
            },
            Structured::Vandermonde(v) => Self::Vandermonde {
                knots: (&v.knots).into(),
                transposed: v.transposed,
            },
            Structured::Cauchy(c) => Self::Cauchy {
                row_knots: (&c.row_knots).into(),
                col_knots: (&c.col_knots).into(),
            },
            Structured::FCirculant(c) => Self::Fcirculant {
                f: c.f.into(),
                first_col: (&c.first_col).into(),
            },
        }
    }
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| StruxError::Format(e.to_string()))
}

pub fn render<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("wire types always serialize")
}
