//! Self-contained bundles of input files and a command line that replay a
//! harness failure with the CLI.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use lts_refine::formats::{write_interface, write_lts, write_property};
use lts_refine::{InterfaceSpec, Lts, PropertySpec};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Reproducer {
    /// File name and contents, in creation order.
    pub files: Vec<(String, String)>,
    /// Run from the directory holding the files.
    pub command: String,
}

impl Reproducer {
    pub fn new(command: impl Into<String>) -> Self {
        Reproducer {
            files: Vec::new(),
            command: command.into(),
        }
    }

    pub fn process(mut self, name: &str, p: &Lts) -> Self {
        self.files.push((format!("{name}.aut"), write_lts(p)));
        self
    }

    pub fn interface(mut self, name: &str, m: &InterfaceSpec) -> Self {
        self.files.push((format!("{name}.iface"), write_interface(m)));
        self
    }

    /// Properties given by acceptors have no file form and are described
    /// in a comment instead.
    pub fn property(mut self, name: &str, spec: &PropertySpec) -> Self {
        let text = write_property(spec).unwrap_or_else(|| format!("# not serialisable: {spec:?}\n"));
        self.files.push((format!("{name}.prop"), text));
        self
    }

    pub fn write_to(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        for (name, text) in &self.files {
            fs::write(dir.join(name), text)?;
        }
        fs::write(dir.join("command.sh"), format!("{}\n", self.command))
    }
}

impl fmt::Display for Reproducer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command: {}", self.command)?;
        for (name, text) in &self.files {
            writeln!(f, "--- {name}")?;
            f.write_str(text)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lts_refine::fixtures;
    use lts_refine::formats::parse_lts;

    #[test]
    fn files_round_trip_through_disk() {
        let dir = std::env::temp_dir().join(format!("lts-refine-repro-{}", std::process::id()));
        let r = Reproducer::new("ltsrefine check L R --preorder liveness --witness")
            .process("L", &fixtures::cond_pair_left())
            .process("R", &fixtures::cond_pair_right());
        r.write_to(&dir).unwrap();
        let back = parse_lts(&fs::read_to_string(dir.join("L.aut")).unwrap()).unwrap();
        assert_eq!(back, fixtures::cond_pair_left());
        assert!(r.to_string().starts_with("command: ltsrefine check"));
        fs::remove_dir_all(dir).unwrap();
    }
}
