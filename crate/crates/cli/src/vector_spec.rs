//! Parsing of `--vector` arguments.

use std::path::Path;

use shiftdyn::sampling::{random_vector, seeded_rng, SAMPLE_INDEX_RADIUS};
use shiftdyn::ScaledVector;

use crate::error::{CliError, CliResult};

/// Builds the vector named by `spec`:
///
/// - `e<n>`: the basis vector `b_n`;
/// - `harmonic:<K>`: `Σ_{0<|n|≤K} |n|^{-1} b_n`;
/// - `random:<size>:<seed>`: `size` unit-order complex coefficients on
///   distinct indices in `[-30, 30]`;
/// - `file:<path>`: an `index,coefficient` CSV, header optional.
pub fn parse_vector(spec: &str) -> CliResult<ScaledVector> {
    let bad = |why: &str| CliError::Usage(format!("bad vector spec {spec:?}: {why}"));
    if let Some(index) = spec.strip_prefix('e') {
        let n: i64 = index.parse().map_err(|_| bad("expected e<integer>"))?;
        return Ok(ScaledVector::basis(n));
    }
    let (kind, rest) = spec.split_once(':').ok_or_else(|| bad("unknown form"))?;
    match kind {
        "harmonic" => {
            let k: i64 = rest.parse().map_err(|_| bad("expected harmonic:<K>"))?;
            Ok(ScaledVector::harmonic(k)?)
        }
        "random" => {
            let (size, seed) = rest.split_once(':').ok_or_else(|| bad("expected random:<size>:<seed>"))?;
            let size: usize = size.parse().map_err(|_| bad("size must be a positive integer"))?;
            let seed: u64 = seed.parse().map_err(|_| bad("seed must be a non-negative integer"))?;
            let mut rng = seeded_rng(seed);
            Ok(random_vector(&mut rng, size, -SAMPLE_INDEX_RADIUS, SAMPLE_INDEX_RADIUS, true)?)
        }
        "file" => read_vector_file(Path::new(rest)),
        _ => Err(bad("unknown form")),
    }
}

fn read_vector_file(path: &Path) -> CliResult<ScaledVector> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut entries = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        if record.len() != 2 {
            return Err(CliError::Usage(format!("{}:{}: expected 2 columns", path.display(), line + 1)));
        }
        let parsed = (record[0].parse::<i64>(), record[1].parse::<f64>());
        match parsed {
            (Ok(n), Ok(c)) => entries.push((n, c)),
            _ if line == 0 => continue,
            _ => return Err(CliError::Usage(format!("{}:{}: cannot parse {:?}", path.display(), line + 1, record))),
        }
    }
    Ok(ScaledVector::from_real(entries)?)
}
