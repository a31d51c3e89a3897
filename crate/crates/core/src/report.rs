//! Stable JSON report emission.
//!
//! Reports are byte-reproducible: struct fields serialize in declaration
//! order, maps are avoided in report types, and every f64 prints with 17
//! significant digits (enough to round-trip the value exactly). Non-finite
//! numbers serialize as `null`, matching serde_json's convention; norm
//! exponents that can be infinite are handled at the type level instead.

use crate::error::Result;
use serde::Serialize;
use serde_json::ser::Formatter;
use std::io;

#[derive(Default)]
pub struct SigDigitFormatter;

impl Formatter for SigDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if value.is_finite() {
            // +0.0 normalizes the sign of negative zero
            write!(writer, "{:.16e}", value + 0.0)
        } else {
            writer.write_all(b"null")
        }
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut serializer = serde_json::Serializer::with_formatter(&mut out, SigDigitFormatter);
    value.serialize(&mut serializer)?;
    Ok(String::from_utf8(out).expect("serde_json emits utf-8"))
}

/// Report document followed by a newline, the exact bytes the CLI writes.
pub fn to_json_document<T: Serialize>(value: &T) -> Result<String> {
    Ok(to_json_string(value)? + "\n")
}
