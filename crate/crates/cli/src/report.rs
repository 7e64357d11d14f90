//! Report documents: a header, ordered sections of lines, and a failure
//! count that decides the exit status.

use std::fmt;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Section {
    pub title: String,
    pub lines: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportDocument {
    pub header: Vec<String>,
    pub sections: Vec<Section>,
    pub failures: usize,
}

impl ReportDocument {
    pub fn section(&mut self, title: impl Into<String>) -> &mut Section {
        self.sections.push(Section {
            title: title.into(),
            lines: Vec::new(),
        });
        self.sections.last_mut().unwrap()
    }

    /// Adds a line to the last section, opening an untitled one if needed.
    pub fn line(&mut self, line: impl Into<String>) {
        if self.sections.is_empty() {
            self.section("");
        }
        self.sections.last_mut().unwrap().lines.push(line.into());
    }

    /// Records a check outcome; failing checks count toward the exit status.
    pub fn check(&mut self, ok: bool, line: impl Into<String>) {
        if !ok {
            self.failures += 1;
        }
        self.line(line);
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for ReportDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.header {
            writeln!(f, "# {h}")?;
        }
        for s in &self.sections {
            if !s.title.is_empty() {
                writeln!(f, "## {}", s.title)?;
            }
            for l in &s.lines {
                writeln!(f, "{l}")?;
            }
        }
        if self.failures > 0 {
            writeln!(f, "# status=fail failures={}", self.failures)?;
        } else {
            writeln!(f, "# status=pass")?;
        }
        Ok(())
    }
}
