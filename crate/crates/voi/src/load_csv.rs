use std::io::Read;
use std::path::Path;

use voi_core::cases::gshp::HourlyLoadProfile;

use crate::error::CliError;

/// Read an hourly load profile: one `kw` column, one row per hour.
/// Returns the profile and any warnings about deviations from the reference
/// annual energy and peak.
pub fn read_load_profile<R: Read>(reader: R) -> Result<(HourlyLoadProfile, Vec<String>), CliError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| CliError::config(format!("load csv: {e}")))?.clone();
    let column =
        headers.iter().position(|h| h == "kw").ok_or_else(|| CliError::config("load csv: missing `kw` column"))?;
    let mut values = Vec::with_capacity(8760);
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| CliError::config(format!("load csv: {e}")))?;
        let field = record.get(column).unwrap_or("");
        let v: f64 = field
            .parse()
            .map_err(|_| CliError::config(format!("load csv row {}: `{field}` is not a number", i + 1)))?;
        values.push(v);
    }
    Ok(HourlyLoadProfile::from_values(values)?)
}

pub fn read_load_profile_file(path: &Path) -> Result<(HourlyLoadProfile, Vec<String>), CliError> {
    let file =
        std::fs::File::open(path).map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    read_load_profile(file)
}
