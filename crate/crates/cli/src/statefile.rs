//! State files: a JSON document holding a 4×4 matrix as nested `[re, im]`
//! pairs, row-major, basis `|00⟩, |01⟩, |10⟩, |11⟩`.
//!
//! ```json
//! [[[0.5, 0], [0, 0], [0, 0], [0.5, 0]],
//!  [[0, 0],   [0, 0], [0, 0], [0, 0]],
//!  [[0, 0],   [0, 0], [0, 0], [0, 0]],
//!  [[0.5, 0], [0, 0], [0, 0], [0.5, 0]]]
//! ```

use std::path::Path;

use chsh_atlas::{Complex64, ComplexMatrix, DensityMatrix};

use crate::{CliError, CliResult};

type Rows = Vec<Vec<[f64; 2]>>;

/// Parses the document into a raw matrix without physical validation.
pub fn parse_matrix(text: &str) -> CliResult<ComplexMatrix> {
    let rows: Rows = serde_json::from_str(text)
        .map_err(|e| CliError::Usage(format!("cannot parse state file: {e}")))?;
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(CliError::Usage(
            "cannot parse state file: expected 4 rows of 4 [re, im] pairs".into(),
        ));
    }
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| CliError::Usage(format!("cannot parse state file: {e}")))
}

pub fn parse_state(text: &str) -> CliResult<DensityMatrix> {
    DensityMatrix::validate(parse_matrix(text)?).map_err(CliError::InvalidState)
}

pub fn load(path: &Path) -> CliResult<DensityMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_state(&text)
}

pub fn to_json(m: &ComplexMatrix) -> String {
    let rows: Rows = (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    serde_json::to_string(&rows).expect("matrix serializes")
}
