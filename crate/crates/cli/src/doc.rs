use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// An output document: the query, top-level fields, and optionally rows
/// under `"values"` (tables) or `"report"` (verification suites).
#[derive(Clone, Debug, PartialEq)]
pub struct Doc {
    query: Value,
    fields: Map<String, Value>,
    rows: Option<(&'static str, Vec<Map<String, Value>>)>,
}

impl Doc {
    pub fn single(query: Value, key: &str, value: Value) -> Self {
        let mut fields = Map::new();
        fields.insert(key.to_string(), value);
        Doc { query, fields, rows: None }
    }

    pub fn fields(query: Value, fields: Map<String, Value>) -> Self {
        Doc { query, fields, rows: None }
    }

    pub fn table(query: Value, rows: Vec<Map<String, Value>>) -> Self {
        Doc { query, fields: Map::new(), rows: Some(("values", rows)) }
    }

    pub fn report(query: Value, fields: Map<String, Value>, rows: Vec<Map<String, Value>>) -> Self {
        Doc { query, fields, rows: Some(("report", rows)) }
    }

    pub fn to_json(&self) -> Value {
        let mut top = Map::new();
        top.insert("query".into(), self.query.clone());
        for (k, v) in &self.fields {
            top.insert(k.clone(), v.clone());
        }
        if let Some((key, rows)) = &self.rows {
            top.insert((*key).into(), Value::Array(rows.iter().cloned().map(Value::Object).collect()));
        }
        Value::Object(top)
    }

    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.to_json()).map(|s| s + "\n").map_err(|e| e.to_string()),
            Format::Csv => self.to_csv(),
        }
    }

    /// Header row with the query columns first; one row per table/report row,
    /// or a single row of the top-level fields.
    fn to_csv(&self) -> Result<String, String> {
        let query = match &self.query {
            Value::Object(m) => m.clone(),
            _ => Map::new(),
        };
        let rows: Vec<Map<String, Value>> = match &self.rows {
            Some((_, rows)) => rows.clone(),
            None => vec![self.fields.clone()],
        };
        let mut header: Vec<String> = query.keys().cloned().collect();
        for row in &rows {
            for k in row.keys() {
                if !header.contains(k) {
                    header.push(k.clone());
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header).map_err(|e| e.to_string())?;
        for row in &rows {
            let rec: Vec<String> = header.iter().map(|k| row.get(k).or(query.get(k)).map(cell).unwrap_or_default()).collect();
            w.write_record(&rec).map_err(|e| e.to_string())?;
        }
        let bytes = w.into_inner().map_err(|e| e.to_string())?;
        String::from_utf8(bytes).map_err(|e| e.to_string())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(cell).collect::<Vec<_>>().join(","),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
