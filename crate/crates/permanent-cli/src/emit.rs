//! Minimal JSON writer with a fixed number layout.
//!
//! Every float is printed as `{:.16e}` — 17 significant digits, enough
//! to reproduce any double exactly — so output bytes are stable across
//! runs and platforms.  Fields appear in insertion order; nested values
//! render on one line under a pretty-printed top level.

/// An in-progress JSON object.
pub struct Object {
    fields: Vec<(String, String)>,
}

/// Escapes a string for a JSON literal.
fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// The fixed float layout used everywhere.
fn number(v: f64) -> String {
    format!("{v:.16e}")
}

impl Object {
    pub fn new() -> Self {
        Object { fields: Vec::new() }
    }

    fn push(&mut self, key: &str, rendered: String) {
        self.fields.push((key.to_string(), rendered));
    }

    pub fn float(&mut self, key: &str, v: f64) {
        self.push(key, number(v));
    }

    pub fn integer(&mut self, key: &str, v: u64) {
        self.push(key, v.to_string());
    }

    pub fn string(&mut self, key: &str, v: &str) {
        self.push(key, quote(v));
    }

    pub fn boolean(&mut self, key: &str, v: bool) {
        self.push(key, v.to_string());
    }

    pub fn null(&mut self, key: &str) {
        self.push(key, "null".to_string());
    }

    pub fn float_array(&mut self, key: &str, vs: &[f64]) {
        let body: Vec<String> = vs.iter().map(|&v| number(v)).collect();
        self.push(key, format!("[{}]", body.join(", ")));
    }

    pub fn object(&mut self, key: &str, o: Object) {
        let inline = o.finish_inline();
        self.push(key, inline);
    }

    pub fn array_of_objects<I: Iterator<Item = Object>>(&mut self, key: &str, objects: I) {
        let body: Vec<String> = objects.map(|o| o.finish_inline()).collect();
        self.push(key, format!("[{}]", body.join(", ")));
    }

    /// Renders as a single-line object.
    fn finish_inline(self) -> String {
        let body: Vec<String> = self
            .fields
            .into_iter()
            .map(|(k, v)| format!("{}: {v}", quote(&k)))
            .collect();
        format!("{{{}}}", body.join(", "))
    }

    /// Renders as a pretty top-level object, one field per line, with a
    /// trailing newline.
    pub fn finish(self) -> String {
        let body: Vec<String> = self
            .fields
            .into_iter()
            .map(|(k, v)| format!("  {}: {v}", quote(&k)))
            .collect();
        format!("{{\n{}\n}}\n", body.join(",\n"))
    }
}
