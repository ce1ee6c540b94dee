use super::{Body, SectionFrame, Shape};
use crate::error::Error;
use crate::linalg::{matrix_to_rows, rows_to_matrix};
use serde::{Deserialize, Serialize};

/// Wire form of a [`Body`]: a `type` tag plus its numeric payload.
/// Matrices are row-major arrays of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Ellipsoid {
        matrix: Vec<Vec<f64>>,
    },
    LpBall {
        p: f64,
        scales: Vec<f64>,
    },
    HPolytope {
        functionals: Vec<Vec<f64>>,
    },
    VPolytope {
        generators: Vec<Vec<f64>>,
    },
    LinearImage {
        matrix: Vec<Vec<f64>>,
        inner: Box<BodySpec>,
    },
    Section {
        normal: Vec<f64>,
        basis: [Vec<f64>; 2],
        inner: Box<BodySpec>,
    },
}

impl TryFrom<BodySpec> for Body {
    type Error = Error;

    fn try_from(spec: BodySpec) -> Result<Self, Error> {
        match spec {
            BodySpec::Ellipsoid { matrix } => Body::ellipsoid(matrix),
            BodySpec::LpBall { p, scales } => Body::lp_ball_scaled(p, scales),
            BodySpec::HPolytope { functionals } => Body::h_polytope(functionals),
            BodySpec::VPolytope { generators } => Body::v_polytope(generators),
            BodySpec::LinearImage { matrix, inner } => {
                let inner = Body::try_from(*inner)?;
                let t = rows_to_matrix(&matrix)
                    .ok_or_else(|| Error::InvalidBody("linear map is ragged or empty".into()))?;
                inner.apply_linear_matrix(t)
            }
            BodySpec::Section {
                normal,
                basis,
                inner,
            } => {
                let inner = Body::try_from(*inner)?;
                let [v1, v2] = basis;
                let frame = SectionFrame::new(normal, v1, v2)?;
                inner.section_wrapper_checked(&frame)
            }
        }
    }
}

impl From<Body> for BodySpec {
    fn from(body: Body) -> Self {
        BodySpec::from(&body)
    }
}

impl From<&Body> for BodySpec {
    fn from(body: &Body) -> Self {
        match &body.shape {
            Shape::Ellipsoid { matrix, .. } => BodySpec::Ellipsoid {
                matrix: matrix_to_rows(matrix),
            },
            Shape::LpBall { p, scales } => BodySpec::LpBall {
                p: *p,
                scales: scales.clone(),
            },
            Shape::HPolytope { functionals, .. } => BodySpec::HPolytope {
                functionals: functionals.clone(),
            },
            Shape::VPolytope { generators, .. } => BodySpec::VPolytope {
                generators: generators.clone(),
            },
            Shape::LinearImage { map, inner, .. } => BodySpec::LinearImage {
                matrix: matrix_to_rows(map),
                inner: Box::new(BodySpec::from(inner.as_ref())),
            },
            Shape::Section { frame, inner, .. } => BodySpec::Section {
                normal: frame.normal.clone(),
                basis: frame.basis.clone(),
                inner: Box::new(BodySpec::from(inner.as_ref())),
            },
        }
    }
}

impl Body {
    /// Wrapper section used by deserialization, which keeps the stored form verbatim.
    pub(super) fn section_wrapper_checked(&self, frame: &SectionFrame) -> Result<Body, Error> {
        if self.dim != 3 {
            return Err(Error::Domain("sections are taken of three-dimensional bodies".into()));
        }
        frame.validate()?;
        self.section_wrapper(frame)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("bodies always serialize")
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
