//! Machine-readable output: fixed key order and 17 significant digits.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

/// Compact JSON with every float written as `{:.16e}`; non-finite values
/// become `null`.
#[derive(Debug, Default, Clone, Copy)]
pub struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

/// Float formatting shared with CSV output.
pub fn fmt_f64(value: f64) -> String {
    if value.is_finite() {
        format!("{value:.16e}")
    } else {
        String::new()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport<P: Serialize, R: Serialize> {
    pub command: String,
    pub parameters: P,
    pub results: R,
    pub threads: usize,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
