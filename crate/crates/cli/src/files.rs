//! Resolution of names in expressions to files in the include directories.
//!
//! A process `P` is read from `P.aut`, an interface `M` from `M.iface` and a
//! renaming `R` from `R.ren`. A name that already ends in the extension, or
//! contains a path separator, is used as a path.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use lts_refine::formats::{parse_dfa, parse_interface, parse_lts, parse_property, parse_renaming, MapEnvironment, ProcessExpr};
use lts_refine::{Error, PropertySpec};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: PathBuf, source: std::io::Error },
    /// A malformed or ill-typed input file.
    File { path: PathBuf, source: Error },
    /// An error in an expression given on the command line.
    Expr { source: Error },
    Engine(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::File { path, source } => write!(f, "{}:{source}", path.display()),
            CliError::Expr { source } => write!(f, "expression:{source}"),
            CliError::Engine(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

pub struct Files {
    include: Vec<PathBuf>,
}

impl Files {
    /// Searches `include` in order, then the working directory.
    pub fn new(include: &[PathBuf]) -> Self {
        let mut include = include.to_vec();
        include.push(PathBuf::from("."));
        Files { include }
    }

    fn locate(&self, name: &str, extension: &str) -> Option<PathBuf> {
        let file = if name.ends_with(extension) || name.contains('/') {
            name.to_string()
        } else {
            format!("{name}{extension}")
        };
        let direct = Path::new(&file);
        if direct.is_absolute() {
            return direct.is_file().then(|| direct.to_path_buf());
        }
        self.include.iter().map(|d| d.join(&file)).find(|p| p.is_file())
    }

    fn read(path: &Path) -> Result<String, CliError> {
        fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    fn load<T>(&self, name: &str, extension: &str, parse: impl Fn(&str) -> lts_refine::Result<T>) -> Result<Option<T>, CliError> {
        let Some(path) = self.locate(name, extension) else {
            return Ok(None);
        };
        let text = Self::read(&path)?;
        parse(&text).map(Some).map_err(|source| CliError::File { path, source })
    }

    /// Loads every file the expression refers to. Names without a file are
    /// left out and reported by evaluation at their position.
    pub fn environment(&self, e: &ProcessExpr) -> Result<MapEnvironment, CliError> {
        let mut env = MapEnvironment::new();
        let mut refs = References::default();
        refs.collect(e);
        for name in refs.processes {
            if let Some(p) = self.load(name, ".aut", parse_lts)? {
                env.processes.insert(name.to_string(), p);
            }
        }
        for name in refs.interfaces {
            if let Some(m) = self.load(name, ".iface", parse_interface)? {
                env.interfaces.insert(name.to_string(), m);
            }
        }
        for name in refs.renamings {
            if let Some(r) = self.load(name, ".ren", parse_renaming)? {
                env.renamings.insert(name.to_string(), r);
            }
        }
        Ok(env)
    }

    /// Reads a property file; `@dfa` paths are relative to its directory.
    pub fn property(&self, name: &str) -> Result<PropertySpec, CliError> {
        let path = self
            .locate(name, ".prop")
            .ok_or_else(|| CliError::Usage(format!("property file `{name}` not found")))?;
        let text = Self::read(&path)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let mut load_dfa = |file: &str| {
            let dfa_path = dir.join(file);
            let text = fs::read_to_string(&dfa_path).map_err(|e| Error::InvalidTester(format!("{}: {e}", dfa_path.display())))?;
            parse_dfa(&text).map_err(|e| Error::InvalidTester(format!("{}:{e}", dfa_path.display())))
        };
        parse_property(&text, &mut load_dfa).map_err(|source| CliError::File { path, source })
    }
}

#[derive(Default)]
struct References<'a> {
    processes: Vec<&'a str>,
    interfaces: Vec<&'a str>,
    renamings: Vec<&'a str>,
}

impl<'a> References<'a> {
    fn collect(&mut self, e: &'a ProcessExpr) {
        match e {
            ProcessExpr::Name { name, .. } => push_new(&mut self.processes, name),
            ProcessExpr::Par { left, right, .. } => {
                self.collect(left);
                self.collect(right);
            }
            ProcessExpr::Hide { body, .. } => self.collect(body),
            ProcessExpr::State { interface, body, .. } => {
                push_new(&mut self.interfaces, interface);
                self.collect(body);
            }
            ProcessExpr::Rename { renaming, body, .. } => {
                push_new(&mut self.renamings, renaming);
                self.collect(body);
            }
        }
    }
}

fn push_new<'a>(list: &mut Vec<&'a str>, name: &'a str) {
    if !list.contains(&name) {
        list.push(name);
    }
}
