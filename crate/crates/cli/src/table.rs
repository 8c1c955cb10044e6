/// Left-aligned text table; column widths count characters, not bytes.
pub struct Table<const N: usize> {
    header: [String; N],
    rows: Vec<[String; N]>,
}

impl<const N: usize> Table<N> {
    pub fn new(header: [&str; N]) -> Self {
        Table {
            header: header.map(String::from),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: [String; N]) {
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut widths = [0usize; N];
        for r in std::iter::once(&self.header).chain(&self.rows) {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |r: &[String; N]| {
            let cells: Vec<String> = r
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            format!("{}\n", cells.join("  ").trim_end())
        };
        let rule: [String; N] = widths.map(|w| "-".repeat(w));
        std::iter::once(line(&self.header))
            .chain(std::iter::once(line(&rule)))
            .chain(self.rows.iter().map(line))
            .collect()
    }
}
