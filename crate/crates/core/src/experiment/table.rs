use crate::{Error, Result};

/// A CSV table of string cells with a mandatory header row.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width differs from header");
        self.rows.push(row);
    }

    pub fn append(&mut self, other: &Table) -> Result<()> {
        if other.header != self.header {
            return Err(Error::Validation("cannot append tables with different headers".into()));
        }
        self.rows.extend(other.rows.iter().cloned());
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Cell `name` of row `i`.
    pub fn get(&self, i: usize, name: &str) -> Option<&str> {
        self.column(name).map(|c| self.rows[i][c].as_str())
    }

    /// Column names from `names` absent from the header.
    pub fn missing(&self, names: &[&str]) -> Vec<String> {
        names
            .iter()
            .filter(|n| self.column(n).is_none())
            .map(|n| n.to_string())
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("cells are UTF-8")
    }

    pub fn header_csv(&self) -> String {
        Table::new(&[]).with_header(&self.header).to_csv()
    }

    /// CSV lines for rows `from..` without the header.
    pub fn rows_csv(&self, from: usize) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .flexible(true)
            .from_writer(Vec::new());
        for r in &self.rows[from..] {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("cells are UTF-8")
    }

    fn with_header(mut self, header: &[String]) -> Self {
        self.header = header.to_vec();
        self
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let header: Vec<String> = r
            .headers()
            .map_err(|e| Error::parse(1, e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| Error::parse(i + 2, e.to_string()))?;
            rows.push(rec.iter().map(str::to_string).collect());
        }
        Ok(Table { header, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_with_quoting() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "x, y".into()]);
        t.push(vec!["2".into(), String::new()]);
        let text = t.to_csv();
        assert_eq!(text, "a,b\n1,\"x, y\"\n2,\n");
        assert_eq!(Table::from_csv(&text).unwrap(), t);
        assert_eq!(t.header_csv(), "a,b\n");
        assert_eq!(t.rows_csv(1), "2,\n");
        assert_eq!(t.missing(&["a", "c"]), vec!["c".to_string()]);
    }
}
