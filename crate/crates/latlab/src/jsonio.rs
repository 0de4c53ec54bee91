//! JSON and Markdown serialization for lattices, sublattices, and reports.
//!
//! All integers are arbitrary precision. The wire rule is bit-exact:
//! magnitudes below 2^53 are emitted as JSON numbers, anything larger as
//! decimal strings, and both forms are accepted on input. Field order is
//! fixed so that parsing an emitted report and re-serializing reproduces
//! it byte for byte. Nothing here ever prints a float.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::glue::{Gluing, GLUE_ENUM_BUDGET};
use crate::k3::{CounterexampleRow, ModuliInvariants, MukaiVector, ObstructionReport};
use crate::lattice::{Lattice, Sublattice};
use crate::linalg::{IntMatrix, IntVec};
use crate::oracle::CampaignOutcome;

/// Largest magnitude serialized as a plain JSON number.
fn number_limit() -> BigInt {
    BigInt::from(1i64 << 53)
}

/// One arbitrary-precision integer to its wire form.
pub fn int_to_value(x: &BigInt) -> Value {
    if x.abs() < number_limit() {
        // Exact: |x| < 2^53 fits an i64 and a double-precision mantissa.
        Value::from(x.to_i64().expect("bounded integer fits i64"))
    } else {
        Value::String(x.to_string())
    }
}

/// One integer from its wire form; `field` names the location in errors.
pub fn int_from_value(v: &Value, field: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::Parameter(format!(
                    "field `{field}` must be an integer, got a float"
                )))
            }
        }
        Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|_| Error::Parameter(format!("field `{field}` is not a decimal integer"))),
        _ => Err(Error::Parameter(format!(
            "field `{field}` must be an integer or decimal string"
        ))),
    }
}

pub fn vector_to_value(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_to_value).collect())
}

pub fn vector_from_value(v: &Value, field: &str) -> Result<IntVec> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parameter(format!("field `{field}` must be an array")))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| int_from_value(x, &format!("{field}[{i}]")))
        .collect()
}

pub fn matrix_to_value(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_to_value(m.row(i))).collect())
}

pub fn matrix_from_value(v: &Value, field: &str) -> Result<IntMatrix> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parameter(format!("field `{field}` must be an array of rows")))?;
    let mut rows: Vec<IntVec> = Vec::with_capacity(arr.len());
    for (i, row) in arr.iter().enumerate() {
        rows.push(vector_from_value(row, &format!("{field}[{i}]"))?);
    }
    if let Some(w) = rows.first().map(Vec::len) {
        if rows.iter().any(|r| r.len() != w) {
            return Err(Error::Parameter(format!(
                "field `{field}` has rows of unequal length"
            )));
        }
    }
    IntMatrix::from_rows(rows)
}

/// `{"label": ..., "gram": [[...]]}`; the label is omitted when absent.
pub fn lattice_to_value(l: &Lattice) -> Value {
    let mut map = Map::new();
    if let Some(label) = l.label() {
        map.insert("label".into(), Value::String(label.to_string()));
    }
    map.insert("gram".into(), matrix_to_value(l.gram()));
    Value::Object(map)
}

pub fn lattice_from_value(v: &Value) -> Result<Lattice> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parameter("lattice must be a JSON object".into()))?;
    for key in obj.keys() {
        if key != "label" && key != "gram" {
            return Err(Error::Parameter(format!(
                "unknown field `{key}` in lattice object"
            )));
        }
    }
    let gram = obj
        .get("gram")
        .ok_or_else(|| Error::Parameter("missing field `gram`".into()))?;
    let gram = matrix_from_value(gram, "gram")?;
    let lattice = Lattice::new(gram)?;
    match obj.get("label") {
        None => Ok(lattice),
        Some(Value::String(s)) => Ok(lattice.with_label(s)),
        Some(_) => Err(Error::Parameter("field `label` must be a string".into())),
    }
}

/// `{"ambient": <lattice>, "basis": [[...]]}`.
pub fn sublattice_to_value(s: &Sublattice) -> Value {
    let mut map = Map::new();
    map.insert("ambient".into(), lattice_to_value(s.ambient()));
    map.insert("basis".into(), matrix_to_value(s.basis()));
    Value::Object(map)
}

pub fn sublattice_from_value(v: &Value) -> Result<Sublattice> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parameter("sublattice must be a JSON object".into()))?;
    for key in obj.keys() {
        if key != "ambient" && key != "basis" {
            return Err(Error::Parameter(format!(
                "unknown field `{key}` in sublattice object"
            )));
        }
    }
    let ambient = obj
        .get("ambient")
        .ok_or_else(|| Error::Parameter("missing field `ambient`".into()))?;
    let basis = obj
        .get("basis")
        .ok_or_else(|| Error::Parameter("missing field `basis`".into()))?;
    let ambient = lattice_from_value(ambient)?;
    let basis = matrix_from_value(basis, "basis")?;
    ambient.span(basis)
}

/// Parse a JSON document, reporting line and column on malformed input.
pub fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parameter(format!(
            "malformed JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

pub fn lattice_from_json(text: &str) -> Result<Lattice> {
    lattice_from_value(&parse_document(text)?)
}

pub fn sublattice_from_json(text: &str) -> Result<Sublattice> {
    sublattice_from_value(&parse_document(text)?)
}

/// Gluing summary: group order and shape, the three discriminants, and the
/// two structural checks.
pub fn glue_report_value(g: &Gluing) -> Result<Value> {
    let mut map = Map::new();
    map.insert("order".into(), int_to_value(g.order()));
    map.insert(
        "invariant_factors".into(),
        Value::Array(g.invariant_factors().iter().map(int_to_value).collect()),
    );
    map.insert("disc_N".into(), int_to_value(&g.n_lattice().disc()));
    map.insert("disc_T".into(), int_to_value(&g.t_lattice().disc()));
    map.insert("disc_H".into(), int_to_value(&g.ambient().disc()));
    map.insert("identity_holds".into(), Value::Bool(g.identity_holds()));
    map.insert(
        "anti_isometry_holds".into(),
        Value::Bool(g.anti_isometry_holds(GLUE_ENUM_BUDGET)?),
    );
    Ok(Value::Object(map))
}

/// Moduli invariants in fixed field order.
pub fn moduli_report_value(inv: &ModuliInvariants) -> Value {
    let mut map = Map::new();
    map.insert("n".into(), int_to_value(&inv.n));
    map.insert("div".into(), int_to_value(&inv.div_v));
    map.insert("crs".into(), int_to_value(&inv.crs));
    map.insert("disc_T".into(), int_to_value(&inv.disc_t));
    map.insert("gluing_order".into(), int_to_value(&inv.gluing_order));
    map.insert("disc_ns".into(), int_to_value(&inv.disc_ns));
    map.insert("fine".into(), Value::Bool(inv.fine));
    Value::Object(map)
}

fn mukai_vector_value(v: &MukaiVector) -> Value {
    vector_to_value(&v.coords())
}

/// One comparison row. `flag_mismatch` appends a `dimension_mismatch`
/// marker when the two squares differ (comparison command only; the
/// counterexample table never trips it).
pub fn comparison_row_value(g: u64, rep: &ObstructionReport, flag_mismatch: bool) -> Value {
    let mut map = Map::new();
    map.insert("g".into(), int_to_value(&BigInt::from(g)));
    map.insert("v".into(), mukai_vector_value(&rep.v));
    map.insert("u".into(), mukai_vector_value(&rep.u));
    map.insert("crs_v".into(), int_to_value(&rep.v_invariants.crs));
    map.insert("crs_u".into(), int_to_value(&rep.u_invariants.crs));
    map.insert(
        "gluing_order_v".into(),
        int_to_value(&rep.v_invariants.gluing_order),
    );
    map.insert(
        "gluing_order_u".into(),
        int_to_value(&rep.u_invariants.gluing_order),
    );
    map.insert("disc_ns_v".into(), int_to_value(&rep.v_invariants.disc_ns));
    map.insert("disc_ns_u".into(), int_to_value(&rep.u_invariants.disc_ns));
    map.insert("verdict".into(), Value::String(rep.verdict.as_str().into()));
    map.insert("d_equivalence".into(), Value::String("cited".into()));
    if flag_mismatch && rep.dimension_mismatch {
        map.insert("dimension_mismatch".into(), Value::Bool(true));
    }
    Value::Object(map)
}

/// The counterexample table as an array of rows.
pub fn counterexample_table_value(rows: &[CounterexampleRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| comparison_row_value(r.g, &r.report, false))
            .collect(),
    )
}

/// Campaign outcomes for the verification command.
pub fn campaign_report_value(seed: u64, trials: u32, outcomes: &[CampaignOutcome]) -> Value {
    let campaigns: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "name": o.name,
                "instances": o.instances,
                "checks": o.checks,
                "failures": o.failures,
            })
        })
        .collect();
    let mut map = Map::new();
    map.insert("seed".into(), int_to_value(&BigInt::from(seed)));
    map.insert("trials".into(), int_to_value(&BigInt::from(trials)));
    map.insert("campaigns".into(), Value::Array(campaigns));
    map.insert(
        "passed".into(),
        Value::Bool(outcomes.iter().all(CampaignOutcome::passed)),
    );
    Value::Object(map)
}

/// Compact JSON, the canonical output form.
pub fn to_json_string(v: &Value) -> String {
    serde_json::to_string(v).expect("report serialization cannot fail")
}

fn markdown_cell(v: &Value) -> String {
    match v {
        Value::Array(items) => items
            .iter()
            .map(markdown_cell)
            .collect::<Vec<_>>()
            .join(","),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Render one object as a two-row Markdown table, or an array of objects
/// as one table with a row per element. Columns follow JSON field order.
pub fn render_markdown(v: &Value) -> String {
    let rows: Vec<&Map<String, Value>> = match v {
        Value::Object(map) => vec![map],
        Value::Array(items) => items.iter().filter_map(Value::as_object).collect(),
        _ => return markdown_cell(v) + "\n",
    };
    let Some(first) = rows.first() else {
        return "(no rows)\n".into();
    };
    let headers: Vec<&String> = first.keys().collect();
    let mut out = String::new();
    out.push_str("| ");
    out.push_str(
        &headers
            .iter()
            .map(|h| h.as_str())
            .collect::<Vec<_>>()
            .join(" | "),
    );
    out.push_str(" |\n| ");
    out.push_str(&vec!["---"; headers.len()].join(" | "));
    out.push_str(" |\n");
    for row in &rows {
        let cells: Vec<String> = headers
            .iter()
            .map(|h| row.get(*h).map(markdown_cell).unwrap_or_default())
            .collect();
        out.push_str("| ");
        out.push_str(&cells.join(" | "));
        out.push_str(" |\n");
    }
    out
}
