use serde::{Deserialize, Serialize};

use crate::{CMatrix, Complex64, Error, Result};

/// Wire format of a square complex matrix: `{"dim": n, "re": [[..]], "im": [[..]]}`.
///
/// `im` may be omitted for real matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let rows = |part: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| part(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            dim: m.nrows(),
            re: rows(|z| z.re),
            im: Some(rows(|z| z.im)),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let check = |part: &[Vec<f64>]| -> Result<()> {
            if part.len() != n {
                return Err(Error::NotSquare { rows: part.len(), cols: n });
            }
            if let Some(row) = part.iter().find(|r| r.len() != n) {
                return Err(Error::NotSquare { rows: n, cols: row.len() });
            }
            Ok(())
        };
        check(&self.re)?;
        if let Some(im) = &self.im {
            check(im)?;
        }
        Ok(CMatrix::from_fn(n, n, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |im| im[i][j]);
            Complex64::new(self.re[i][j], im)
        }))
    }
}
