//! The `.nws` workspace format.
//!
//! A workspace is a sequence of sections, each holding `key = value` lines.
//! Values are quoted strings, bare tokens, or bracketed lists of either;
//! lists may span several lines. `#` starts a comment outside strings.
//!
//! ```text
//! [field]
//! name = "GF(13)"
//! roots = ["i:4"]
//!
//! [algebra S]
//! generators = [x, y, z]
//! degrees = [1, 1, 1]
//! relations = ["x*y + y*x - z^2", "x*z + z*x", "y*z + z*y"]
//!
//! [algebra A]
//! base = "S"
//! extra_relations = ["x^2 + y^2"]
//!
//! [module X1]
//! algebra = "A"
//! kind = cyclic
//! of = ["x - y + z"]
//! ```
//!
//! Modules of kind `sum` list module names, optionally shifted as `M(2)`;
//! the name of an algebra stands for its rank-one free module.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use ncg_core::freealg::{parse_poly, Symbols};
use ncg_core::scalars::{FieldKind, Rationals};
use ncg_core::Error as CoreError;
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorkspaceError {
    #[error("line {line}, column {column}: {message}{}", expected_suffix(.expected))]
    Parse {
        line: usize,
        column: usize,
        message: String,
        expected: Vec<String>,
    },
    #[error("line {line}: unknown reference `{name}`")]
    UnknownReference { line: usize, name: String },
    #[error("line {line}: `{text}` is not homogeneous")]
    NonHomogeneous { line: usize, text: String },
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected one of: {})", expected.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FieldDecl {
    pub name: String,
    /// `(symbol, order)`: the symbol names a primitive root of unity.
    pub roots: Vec<(String, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraSource {
    Free {
        generators: Vec<String>,
        degrees: Vec<u32>,
        relations: Vec<String>,
    },
    Quotient {
        base: String,
        extra_relations: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDecl {
    pub name: String,
    pub source: AlgebraSource,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandRef {
    pub name: String,
    pub shift: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleKind {
    Cyclic { of: Vec<String> },
    Free { shifts: Vec<i64> },
    Sum { of: Vec<SummandRef> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleDecl {
    pub name: String,
    pub algebra: String,
    pub kind: ModuleKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismDecl {
    pub name: String,
    pub algebra: String,
    pub images: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WindowDecl {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
    pub homological_max: Option<usize>,
    pub degree_cap: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WorkspaceFile {
    pub field: Option<FieldDecl>,
    pub algebras: Vec<AlgebraDecl>,
    pub modules: Vec<ModuleDecl>,
    pub automorphisms: Vec<AutomorphismDecl>,
    pub window: Option<WindowDecl>,
}

impl WorkspaceFile {
    pub fn algebra(&self, name: &str) -> Option<&AlgebraDecl> {
        self.algebras.iter().find(|a| a.name == name)
    }

    pub fn module(&self, name: &str) -> Option<&ModuleDecl> {
        self.modules.iter().find(|m| m.name == name)
    }

    pub fn automorphism(&self, name: &str) -> Option<&AutomorphismDecl> {
        self.automorphisms.iter().find(|a| a.name == name)
    }

    /// Field kind declared in the file, `GF(13)` when absent.
    pub fn field_kind(&self) -> Result<FieldKind, CoreError> {
        match &self.field {
            Some(f) => f.name.parse(),
            None => Ok(FieldKind::Prime(13)),
        }
    }

    /// Generator names and degrees of an algebra, following `base` links.
    pub fn generators(&self, name: &str) -> Option<(Vec<String>, Vec<u32>)> {
        let mut cur = self.algebra(name)?;
        for _ in 0..=self.algebras.len() {
            match &cur.source {
                AlgebraSource::Free {
                    generators, degrees, ..
                } => return Some((generators.clone(), degrees.clone())),
                AlgebraSource::Quotient { base, .. } => cur = self.algebra(base)?,
            }
        }
        None
    }

    /// All relations of an algebra, base relations first.
    pub fn relations(&self, name: &str) -> Option<Vec<String>> {
        let a = self.algebra(name)?;
        match &a.source {
            AlgebraSource::Free { relations, .. } => Some(relations.clone()),
            AlgebraSource::Quotient { base, extra_relations } => {
                let mut r = self.relations(base)?;
                r.extend(extra_relations.iter().cloned());
                Some(r)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Lexing

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Str(String),
    Bare(String),
    List(Vec<Value>),
}

impl Value {
    fn text(&self) -> Option<&str> {
        match self {
            Value::Str(s) | Value::Bare(s) => Some(s),
            Value::List(_) => None,
        }
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> WorkspaceError {
        WorkspaceError::Parse {
            line: self.line,
            column: self.col,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Skips blanks and comments on the current line.
    fn skip_inline(&mut self) {
        while let Some(c) = self.peek() {
            if c == ' ' || c == '\t' || c == '\r' {
                self.bump();
            } else if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    /// Skips whitespace, newlines and comments.
    fn skip_all(&mut self) {
        loop {
            self.skip_inline();
            if self.peek() == Some('\n') {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn end_of_line(&mut self) -> Result<(), WorkspaceError> {
        self.skip_inline();
        match self.peek() {
            None => Ok(()),
            Some('\n') => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"), &["end of line"])),
        }
    }

    fn ident(&mut self) -> Result<String, WorkspaceError> {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if s.is_empty() {
            return Err(self.error("expected a name", &["identifier"]));
        }
        Ok(s)
    }

    fn string(&mut self) -> Result<String, WorkspaceError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err(self.error("unterminated string", &["`\"`"])),
                Some('"') => return Ok(s),
                Some('\\') => match self.bump() {
                    Some(c @ ('"' | '\\')) => s.push(c),
                    _ => return Err(self.error("bad escape", &["`\\\"`", "`\\\\`"])),
                },
                Some(c) => s.push(c),
            }
        }
    }

    fn bare(&mut self) -> Result<String, WorkspaceError> {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == ',' || c == ']' || c == '[' || c == '#' || c == '"' {
                break;
            }
            s.push(c);
            self.bump();
        }
        if s.is_empty() {
            return Err(self.error("expected a value", &["string", "token", "list"]));
        }
        Ok(s)
    }

    fn value(&mut self) -> Result<Value, WorkspaceError> {
        match self.peek() {
            Some('"') => Ok(Value::Str(self.string()?)),
            Some('[') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_all();
                    match self.peek() {
                        Some(']') => {
                            self.bump();
                            return Ok(Value::List(items));
                        }
                        None => return Err(self.error("unterminated list", &["`]`"])),
                        Some('"') => items.push(Value::Str(self.string()?)),
                        Some(_) => items.push(Value::Bare(self.bare()?)),
                    }
                    self.skip_all();
                    match self.peek() {
                        Some(',') => {
                            self.bump();
                        }
                        Some(']') => {}
                        _ => return Err(self.error("expected `,` or `]`", &["`,`", "`]`"])),
                    }
                }
            }
            _ => Ok(Value::Bare(self.bare()?)),
        }
    }
}

/// A raw section before interpretation.
struct RawSection {
    kind: String,
    name: Option<String>,
    line: usize,
    entries: Vec<(String, Value, usize, usize)>,
}

fn lex(text: &str) -> Result<Vec<RawSection>, WorkspaceError> {
    let mut c = Cursor::new(text);
    let mut sections: Vec<RawSection> = Vec::new();
    loop {
        c.skip_all();
        match c.peek() {
            None => return Ok(sections),
            Some('[') => {
                let line = c.line;
                c.bump();
                c.skip_inline();
                let kind = c.ident()?;
                c.skip_inline();
                let name = if c.peek() == Some(']') { None } else { Some(c.ident()?) };
                c.skip_inline();
                if c.peek() != Some(']') {
                    return Err(c.error("expected `]`", &["`]`"]));
                }
                c.bump();
                c.end_of_line()?;
                sections.push(RawSection {
                    kind,
                    name,
                    line,
                    entries: Vec::new(),
                });
            }
            Some(_) => {
                let (line, col) = (c.line, c.col);
                let key = c.ident()?;
                let Some(sec) = sections.last_mut() else {
                    return Err(WorkspaceError::Parse {
                        line,
                        column: col,
                        message: "key outside of a section".into(),
                        expected: vec!["`[section]`".into()],
                    });
                };
                c.skip_inline();
                if c.peek() != Some('=') {
                    return Err(c.error("expected `=`", &["`=`"]));
                }
                c.bump();
                c.skip_inline();
                let v = c.value()?;
                c.end_of_line()?;
                sec.entries.push((key, v, line, col));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Interpretation

fn perr(line: usize, column: usize, message: impl Into<String>, expected: &[&str]) -> WorkspaceError {
    WorkspaceError::Parse {
        line,
        column,
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

struct Entries {
    map: BTreeMap<String, (Value, usize, usize)>,
    line: usize,
}

impl Entries {
    fn new(sec: RawSection, allowed: &[&str]) -> Result<Self, WorkspaceError> {
        let mut map = BTreeMap::new();
        for (k, v, line, col) in sec.entries {
            if !allowed.contains(&k.as_str()) {
                return Err(perr(line, col, format!("unknown key `{k}` in [{}]", sec.kind), allowed));
            }
            if map.insert(k.clone(), (v, line, col)).is_some() {
                return Err(perr(line, col, format!("duplicate key `{k}`"), &[]));
            }
        }
        Ok(Entries { map, line: sec.line })
    }

    fn line_of(&self, key: &str) -> usize {
        self.map.get(key).map_or(self.line, |e| e.1)
    }

    fn text(&self, key: &str) -> Result<Option<String>, WorkspaceError> {
        match self.map.get(key) {
            None => Ok(None),
            Some((v, line, col)) => v
                .text()
                .map(|s| Some(s.to_string()))
                .ok_or_else(|| perr(*line, *col, format!("`{key}` takes a single value"), &["string"])),
        }
    }

    fn required(&self, key: &str) -> Result<String, WorkspaceError> {
        self.text(key)?
            .ok_or_else(|| perr(self.line, 1, format!("missing key `{key}`"), &[key]))
    }

    fn list(&self, key: &str) -> Result<Option<Vec<String>>, WorkspaceError> {
        match self.map.get(key) {
            None => Ok(None),
            Some((Value::List(items), line, col)) => items
                .iter()
                .map(|v| {
                    v.text()
                        .map(str::to_string)
                        .ok_or_else(|| perr(*line, *col, "nested lists are not allowed", &["string"]))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
            Some((v, _, _)) => Ok(Some(vec![v.text().unwrap_or_default().to_string()])),
        }
    }

    fn int<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, WorkspaceError> {
        let Some(s) = self.text(key)? else { return Ok(None) };
        let (_, line, col) = &self.map[key];
        s.trim()
            .parse()
            .map(Some)
            .map_err(|_| perr(*line, *col, format!("`{key}` must be an integer"), &["integer"]))
    }

    fn int_list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, WorkspaceError> {
        let Some(items) = self.list(key)? else { return Ok(None) };
        let (_, line, col) = &self.map[key];
        items
            .iter()
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| perr(*line, *col, format!("`{s}` is not an integer"), &["integer"]))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

fn parse_root(s: &str, line: usize) -> Result<(String, u64), WorkspaceError> {
    let bad = || perr(line, 1, format!("bad root declaration `{s}`"), &["`name:order`"]);
    let (name, order) = s.split_once(':').ok_or_else(bad)?;
    let order = order.trim().parse().map_err(|_| bad())?;
    Ok((name.trim().to_string(), order))
}

fn parse_summand(s: &str, line: usize) -> Result<SummandRef, WorkspaceError> {
    let s = s.trim();
    if let Some(open) = s.find('(') {
        let inner = s[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| perr(line, 1, format!("bad summand `{s}`"), &["`M`", "`M(n)`"]))?;
        let shift = inner
            .trim()
            .parse()
            .map_err(|_| perr(line, 1, format!("bad shift in `{s}`"), &["integer"]))?;
        Ok(SummandRef {
            name: s[..open].trim().to_string(),
            shift,
        })
    } else {
        Ok(SummandRef {
            name: s.to_string(),
            shift: 0,
        })
    }
}

/// Parses and validates a workspace: syntax, unique names, acyclic
/// references, and homogeneity of every expression.
pub fn parse_workspace(text: &str) -> Result<WorkspaceFile, WorkspaceError> {
    let mut ws = WorkspaceFile::default();
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut ref_lines: HashMap<(&'static str, usize), usize> = HashMap::new();
    for sec in lex(text)? {
        let line = sec.line;
        let named = |sec: &RawSection| -> Result<String, WorkspaceError> {
            let name = sec
                .name
                .clone()
                .ok_or_else(|| perr(sec.line, 1, format!("[{}] needs a name", sec.kind), &["name"]))?;
            Ok(name)
        };
        match sec.kind.as_str() {
            "field" | "window" if sec.name.is_some() => {
                return Err(perr(line, 1, format!("[{}] takes no name", sec.kind), &["`]`"]));
            }
            "field" => {
                if ws.field.is_some() {
                    return Err(perr(line, 1, "duplicate [field] section", &[]));
                }
                let e = Entries::new(sec, &["name", "roots"])?;
                let name = e.required("name")?;
                name.parse::<FieldKind>()
                    .map_err(|err| perr(e.line_of("name"), 1, err.to_string(), &["GF(p)", "QQ"]))?;
                let roots = e
                    .list("roots")?
                    .unwrap_or_default()
                    .iter()
                    .map(|r| parse_root(r, e.line_of("roots")))
                    .collect::<Result<_, _>>()?;
                ws.field = Some(FieldDecl { name, roots });
            }
            "window" => {
                if ws.window.is_some() {
                    return Err(perr(line, 1, "duplicate [window] section", &[]));
                }
                let e = Entries::new(sec, &["lo", "hi", "homological_max", "degree_cap"])?;
                ws.window = Some(WindowDecl {
                    lo: e.int("lo")?,
                    hi: e.int("hi")?,
                    homological_max: e.int("homological_max")?,
                    degree_cap: e.int("degree_cap")?,
                });
            }
            "algebra" | "module" | "automorphism" => {
                let name = named(&sec)?;
                if names.insert(name.clone(), line).is_some() {
                    return Err(perr(line, 1, format!("name `{name}` is already defined"), &[]));
                }
                match sec.kind.as_str() {
                    "algebra" => {
                        let e = Entries::new(sec, &["generators", "degrees", "relations", "base", "extra_relations"])?;
                        let source = if let Some(base) = e.text("base")? {
                            for k in ["generators", "degrees", "relations"] {
                                if e.map.contains_key(k) {
                                    return Err(perr(e.line_of(k), 1, format!("`{k}` cannot be combined with `base`"), &["extra_relations"]));
                                }
                            }
                            ref_lines.insert(("algebra", ws.algebras.len()), e.line_of("base"));
                            AlgebraSource::Quotient {
                                base,
                                extra_relations: e.list("extra_relations")?.unwrap_or_default(),
                            }
                        } else {
                            if e.map.contains_key("extra_relations") {
                                return Err(perr(e.line_of("extra_relations"), 1, "`extra_relations` needs `base`", &["base"]));
                            }
                            let generators = e
                                .list("generators")?
                                .ok_or_else(|| perr(line, 1, "missing key `generators`", &["generators", "base"]))?;
                            let degrees = e.int_list("degrees")?.unwrap_or_else(|| vec![1; generators.len()]);
                            if degrees.len() != generators.len() {
                                return Err(perr(e.line_of("degrees"), 1, "one degree per generator", &[]));
                            }
                            ref_lines.insert(("algebra", ws.algebras.len()), e.line_of("relations"));
                            AlgebraSource::Free {
                                generators,
                                degrees,
                                relations: e.list("relations")?.unwrap_or_default(),
                            }
                        };
                        ws.algebras.push(AlgebraDecl { name, source });
                    }
                    "module" => {
                        let e = Entries::new(sec, &["algebra", "kind", "of", "shifts"])?;
                        let algebra = e.required("algebra")?;
                        let kind_name = e.required("kind")?;
                        let kind = match kind_name.as_str() {
                            "cyclic" => ModuleKind::Cyclic {
                                of: e.list("of")?.unwrap_or_default(),
                            },
                            "free" => ModuleKind::Free {
                                shifts: e.int_list("shifts")?.unwrap_or_else(|| vec![0]),
                            },
                            "sum" => ModuleKind::Sum {
                                of: e
                                    .list("of")?
                                    .unwrap_or_default()
                                    .iter()
                                    .map(|s| parse_summand(s, e.line_of("of")))
                                    .collect::<Result<_, _>>()?,
                            },
                            other => {
                                return Err(perr(e.line_of("kind"), 1, format!("unknown module kind `{other}`"), &["cyclic", "free", "sum"]));
                            }
                        };
                        ref_lines.insert(("module", ws.modules.len()), e.line_of("of").max(e.line_of("algebra")));
                        ref_lines.insert(("module-algebra", ws.modules.len()), e.line_of("algebra"));
                        ws.modules.push(ModuleDecl { name, algebra, kind });
                    }
                    _ => {
                        let e = Entries::new(sec, &["algebra", "images"])?;
                        ref_lines.insert(("automorphism", ws.automorphisms.len()), e.line_of("images"));
                        ref_lines.insert(("automorphism-algebra", ws.automorphisms.len()), e.line_of("algebra"));
                        ws.automorphisms.push(AutomorphismDecl {
                            name,
                            algebra: e.required("algebra")?,
                            images: e.list("images")?.unwrap_or_default(),
                        });
                    }
                }
            }
            other => {
                return Err(perr(line, 1, format!("unknown section `[{other}]`"), &["field", "algebra", "module", "automorphism", "window"]));
            }
        }
    }
    validate(&ws, &ref_lines)?;
    Ok(ws)
}

fn validate(
    ws: &WorkspaceFile,
    ref_lines: &HashMap<(&'static str, usize), usize>,
) -> Result<(), WorkspaceError> {
    let unknown = |line: usize, name: &str| WorkspaceError::UnknownReference {
        line,
        name: name.to_string(),
    };
    let roots: Vec<String> = ws.field.iter().flat_map(|f| f.roots.iter().map(|r| r.0.clone())).collect();

    // Algebra bases resolve and do not loop.
    for (i, a) in ws.algebras.iter().enumerate() {
        let line = ref_lines[&("algebra", i)];
        let mut seen = vec![a.name.as_str()];
        let mut cur = a;
        while let AlgebraSource::Quotient { base, .. } = &cur.source {
            cur = ws.algebra(base).ok_or_else(|| unknown(line, base))?;
            if seen.contains(&cur.name.as_str()) {
                return Err(perr(line, 1, format!("algebra `{}` is its own base", a.name), &[]));
            }
            seen.push(&cur.name);
        }
        let (gens, degrees) = ws.generators(&a.name).expect("resolved above");
        let own = match &a.source {
            AlgebraSource::Free { relations, .. } => relations,
            AlgebraSource::Quotient { extra_relations, .. } => extra_relations,
        };
        for r in own {
            check_homogeneous(r, &gens, &degrees, &roots, line, false)?;
        }
    }

    // Modules: algebra, summands and generators.
    for (i, m) in ws.modules.iter().enumerate() {
        let aline = ref_lines[&("module-algebra", i)];
        let line = ref_lines[&("module", i)];
        let (gens, degrees) = ws.generators(&m.algebra).ok_or_else(|| unknown(aline, &m.algebra))?;
        match &m.kind {
            ModuleKind::Cyclic { of } => {
                for p in of {
                    check_homogeneous(p, &gens, &degrees, &roots, line, true)?;
                }
            }
            ModuleKind::Free { .. } => {}
            ModuleKind::Sum { of } => {
                for s in of {
                    let known = ws.algebra(&s.name).is_some() || ws.module(&s.name).is_some();
                    if !known || ws.automorphism(&s.name).is_some() {
                        return Err(unknown(line, &s.name));
                    }
                }
            }
        }
    }
    check_module_cycles(ws, ref_lines)?;

    for (i, a) in ws.automorphisms.iter().enumerate() {
        let aline = ref_lines[&("automorphism-algebra", i)];
        let line = ref_lines[&("automorphism", i)];
        let (gens, degrees) = ws.generators(&a.algebra).ok_or_else(|| unknown(aline, &a.algebra))?;
        if a.images.len() != gens.len() {
            return Err(perr(line, 1, format!("`{}` needs {} images", a.name, gens.len()), &[]));
        }
        for p in &a.images {
            check_homogeneous(p, &gens, &degrees, &roots, line, true)?;
        }
    }
    Ok(())
}

fn check_module_cycles(ws: &WorkspaceFile, ref_lines: &HashMap<(&'static str, usize), usize>) -> Result<(), WorkspaceError> {
    fn visit<'a>(ws: &'a WorkspaceFile, name: &'a str, stack: &mut Vec<&'a str>) -> bool {
        if stack.contains(&name) {
            return false;
        }
        let Some(m) = ws.module(name) else { return true };
        stack.push(name);
        let ok = match &m.kind {
            ModuleKind::Sum { of } => of.iter().all(|s| visit(ws, &s.name, stack)),
            _ => true,
        };
        stack.pop();
        ok
    }
    for (i, m) in ws.modules.iter().enumerate() {
        if !visit(ws, &m.name, &mut Vec::new()) {
            return Err(perr(ref_lines[&("module", i)], 1, format!("module `{}` contains itself", m.name), &[]));
        }
    }
    Ok(())
}

/// Parses over `QQ` with root symbols replaced by distinct generic
/// scalars, which is enough to decide homogeneity.
fn check_homogeneous(
    text: &str,
    gens: &[String],
    degrees: &[u32],
    roots: &[String],
    line: usize,
    allow_zero: bool,
) -> Result<(), WorkspaceError> {
    let q = Rationals;
    let constants: HashMap<String, BigRational> = roots
        .iter()
        .enumerate()
        .map(|(k, r)| (r.clone(), BigRational::new(BigInt::from(1_000_003 + 2 * k as i64), BigInt::from(7))))
        .collect();
    let sym = Symbols {
        generators: gens,
        constants: &constants,
    };
    let p = parse_poly(&q, text, &sym).map_err(|e| match e {
        CoreError::Parse { column, message, .. } => perr(line, column, format!("in `{text}`: {message}"), &[]),
        other => perr(line, 1, other.to_string(), &[]),
    })?;
    if p.is_zero() && allow_zero {
        return Ok(());
    }
    match p.homogeneous_degree(degrees) {
        None => Err(WorkspaceError::NonHomogeneous {
            line,
            text: text.to_string(),
        }),
        Some(_) => Ok(()),
    }
}

// ---------------------------------------------------------------------------
// Serialization

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn quoted_list(items: &[String]) -> String {
    let q: Vec<String> = items.iter().map(|s| quote(s)).collect();
    format!("[{}]", q.join(", "))
}

fn bare_list<T: ToString>(items: &[T]) -> String {
    let q: Vec<String> = items.iter().map(|s| s.to_string()).collect();
    format!("[{}]", q.join(", "))
}

/// Canonical text form; reparses to an equal workspace.
pub fn serialize_workspace(ws: &WorkspaceFile) -> String {
    let mut out = String::new();
    if let Some(f) = &ws.field {
        let _ = writeln!(out, "[field]\nname = {}", quote(&f.name));
        if !f.roots.is_empty() {
            let roots: Vec<String> = f.roots.iter().map(|(n, o)| format!("{n}:{o}")).collect();
            let _ = writeln!(out, "roots = {}", quoted_list(&roots));
        }
        out.push('\n');
    }
    for a in &ws.algebras {
        let _ = writeln!(out, "[algebra {}]", a.name);
        match &a.source {
            AlgebraSource::Free {
                generators,
                degrees,
                relations,
            } => {
                let _ = writeln!(out, "generators = {}", bare_list(generators));
                let _ = writeln!(out, "degrees = {}", bare_list(degrees));
                let _ = writeln!(out, "relations = {}", quoted_list(relations));
            }
            AlgebraSource::Quotient { base, extra_relations } => {
                let _ = writeln!(out, "base = {}", quote(base));
                let _ = writeln!(out, "extra_relations = {}", quoted_list(extra_relations));
            }
        }
        out.push('\n');
    }
    for m in &ws.modules {
        let _ = writeln!(out, "[module {}]\nalgebra = {}", m.name, quote(&m.algebra));
        match &m.kind {
            ModuleKind::Cyclic { of } => {
                let _ = writeln!(out, "kind = cyclic\nof = {}", quoted_list(of));
            }
            ModuleKind::Free { shifts } => {
                let _ = writeln!(out, "kind = free\nshifts = {}", bare_list(shifts));
            }
            ModuleKind::Sum { of } => {
                let items: Vec<String> = of
                    .iter()
                    .map(|s| if s.shift == 0 { s.name.clone() } else { format!("{}({})", s.name, s.shift) })
                    .collect();
                let _ = writeln!(out, "kind = sum\nof = {}", quoted_list(&items));
            }
        }
        out.push('\n');
    }
    for a in &ws.automorphisms {
        let _ = writeln!(
            out,
            "[automorphism {}]\nalgebra = {}\nimages = {}\n",
            a.name,
            quote(&a.algebra),
            quoted_list(&a.images)
        );
    }
    if let Some(w) = &ws.window {
        out.push_str("[window]\n");
        if let Some(v) = w.lo {
            let _ = writeln!(out, "lo = {v}");
        }
        if let Some(v) = w.hi {
            let _ = writeln!(out, "hi = {v}");
        }
        if let Some(v) = w.homological_max {
            let _ = writeln!(out, "homological_max = {v}");
        }
        if let Some(v) = w.degree_cap {
            let _ = writeln!(out, "degree_cap = {v}");
        }
    }
    out
}

/// The workspace shipped with the binary.
pub const EXAMPLE: &str = include_str!("../data/example_paper.nws");
