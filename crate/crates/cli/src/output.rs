//! CSV bodies with trailing `# key=value` metadata.

/// A rendered table plus run metadata.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    /// Header and data rows, newline terminated.
    pub body: String,
    /// Emitted as `# key=value` after the rows, before the hash line.
    pub notes: Vec<(String, String)>,
    /// An identity failed outside its exceptional set.
    pub finding: bool,
    /// Human-readable lines for stderr.
    pub summary: Vec<String>,
}

impl Output {
    pub fn from_body(body: String) -> Self {
        Output { body, ..Default::default() }
    }

    /// Quotes cells as needed; field specs contain commas.
    pub fn table(header: &[&str], rows: &[Vec<String>]) -> Self {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(header).expect("in-memory write");
        for r in rows {
            w.write_record(r).expect("in-memory write");
        }
        let bytes = w.into_inner().expect("in-memory flush");
        Output::from_body(String::from_utf8(bytes).expect("utf-8 cells"))
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self, hash: &str) -> String {
        let mut s = self.body.clone();
        for (k, v) in &self.notes {
            s.push_str(&format!("# {k}={v}\n"));
        }
        s.push_str(&format!("# config_hash={hash}\n"));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting_and_trailer() {
        let mut o = Output::table(&["field", "p"], &[vec!["poly:-1,-2,1,1".into(), "7".into()]]);
        o.note("m", 7);
        let text = o.render("abc");
        assert_eq!(text, "field,p\n\"poly:-1,-2,1,1\",7\n# m=7\n# config_hash=abc\n");
    }
}
