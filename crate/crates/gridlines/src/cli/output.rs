//! Row emission in the fixed CSV and JSON schemas.
//!
//! CSV header: `quantity,q,dims,n,method,value[,seconds]`. JSON documents
//! carry a `schema` tag and represent every value as a decimal string so
//! exactness survives JSON number limits.

use std::io::{self, Write};

use serde::Serialize;

use crate::ExactInt;

pub(crate) const JSON_SCHEMA: &str = "gridlines/1";

/// One output row. `method` is a plain token so benchmark rows can
/// distinguish the two explicit evaluators (`naive` / `mobius`).
#[derive(Debug, Clone)]
pub(crate) struct Row {
    pub quantity: &'static str,
    pub q: u64,
    pub dims: String,
    pub n: u64,
    pub method: &'static str,
    pub value: ExactInt,
    pub seconds: Option<f64>,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    quantity: &'a str,
    q: u64,
    dims: &'a str,
    n: u64,
    method: &'a str,
    value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    schema: &'a str,
    rows: Vec<JsonRow<'a>>,
}

pub(crate) fn emit_csv(rows: &[Row], with_seconds: bool, w: &mut impl Write) -> io::Result<()> {
    if with_seconds {
        writeln!(w, "quantity,q,dims,n,method,value,seconds")?;
    } else {
        writeln!(w, "quantity,q,dims,n,method,value")?;
    }
    for row in rows {
        write!(
            w,
            "{},{},{},{},{},{}",
            row.quantity, row.q, row.dims, row.n, row.method, row.value
        )?;
        if with_seconds {
            write!(w, ",{:.6}", row.seconds.unwrap_or(0.0))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub(crate) fn emit_json(rows: &[Row], w: &mut impl Write) -> io::Result<()> {
    let doc = JsonDoc {
        schema: JSON_SCHEMA,
        rows: rows
            .iter()
            .map(|r| JsonRow {
                quantity: r.quantity,
                q: r.q,
                dims: &r.dims,
                n: r.n,
                method: r.method,
                value: r.value.to_string(),
                seconds: r.seconds,
            })
            .collect(),
    };
    let text = serde_json::to_string(&doc).expect("row serialization is infallible");
    writeln!(w, "{text}")
}
