//! The algebra definition format.
//!
//! ```text
//! # comments run to the end of the line
//! algebra sl2ish over GF(3)
//! basis x y z
//! bracket [x,y] = 1*z
//! bracket [z,x] = 2*x + 1*y
//! pmap x^[p] = 0
//! pmap y^[p] = 1*y
//! pmap z^[p] = 0
//! module std dim 2
//! action x = [[0,1];[0,0]]
//! ```
//!
//! Undeclared brackets are zero, and a bracket declared in one order fixes the
//! opposite order by antisymmetry unless that order is declared too. Every basis
//! element needs a `pmap` line and every module needs one `action` per basis
//! element. Coefficients are integers reduced mod p.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{is_prime, Prime};
use crate::gmod::RestrictedModule;
use crate::liealg::RestrictedLieAlgebra;
use crate::linalg::FpMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleBlock {
    pub name: String,
    pub dim: usize,
    /// One row-major m×m matrix per basis element, in basis order.
    pub actions: Vec<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraFile {
    pub name: String,
    pub p: u32,
    pub basis: Vec<String>,
    /// `structure[i][j]` holds the coordinates of [e_i, e_j].
    pub structure: Vec<Vec<Vec<u32>>>,
    pub pmap: Vec<Vec<u32>>,
    pub modules: Vec<ModuleBlock>,
}

struct Cursor<'a> {
    text: &'a str,
    line: usize,
    pos: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Cursor<'a> {
        Cursor { text, line, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn col(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn err(&self, expected: impl Into<String>) -> Error {
        Error::Syntax { line: self.line, col: self.col(), expected: expected.into() }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(format!("'{c}'")))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        let hit = self.peek() == Some(c);
        if hit {
            self.pos += c.len_utf8();
        }
        hit
    }

    /// An identifier and the column where it starts.
    fn ident(&mut self, what: &str) -> Result<(String, usize)> {
        self.skip_ws();
        let col = self.col();
        let mut chars = self.rest().chars();
        match chars.next() {
            Some(c) if is_ident_start(c) => {}
            _ => return Err(self.err(what)),
        }
        let len = self.rest().find(|c: char| !is_ident_char(c)).unwrap_or(self.rest().len());
        let word = self.rest()[..len].to_string();
        self.pos += len;
        Ok((word, col))
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let save = self.pos;
        match self.ident(&format!("'{kw}'")) {
            Ok((w, _)) if w == kw => Ok(()),
            _ => {
                self.pos = save;
                self.skip_ws();
                Err(self.err(format!("'{kw}'")))
            }
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.rest().starts_with('-');
        if neg {
            self.pos += 1;
        }
        let len = self.rest().find(|c: char| !c.is_ascii_digit()).unwrap_or(self.rest().len());
        if len == 0 {
            self.pos = start;
            return Err(self.err("integer"));
        }
        let digits = &self.rest()[..len];
        let value: i64 = digits.parse().map_err(|_| {
            let mut c = Cursor::new(self.text, self.line);
            c.pos = start;
            c.err("integer that fits in 64 bits")
        })?;
        self.pos += len;
        Ok(if neg { -value } else { value })
    }

    fn end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.err("end of line")),
        }
    }
}

/// A linear combination `0` or `c*id + c*id + ...`.
fn term_sum(cur: &mut Cursor) -> Result<Vec<(i64, String)>> {
    let mut out = Vec::new();
    loop {
        let c = cur.integer()?;
        if out.is_empty() && c == 0 && cur.peek().is_none() {
            return Ok(out);
        }
        cur.expect('*')?;
        let (id, _) = cur.ident("basis label")?;
        out.push((c, id));
        if !cur.eat('+') {
            cur.end()?;
            return Ok(out);
        }
    }
}

fn strip_comment(line: &str) -> &str {
    line.find('#').map_or(line, |i| &line[..i])
}

struct Parser {
    p: Prime,
    name: String,
    basis: Vec<String>,
    structure: Vec<Vec<Vec<u32>>>,
    declared: Vec<Vec<bool>>,
    pmap: Vec<Option<Vec<u32>>>,
    modules: Vec<(ModuleBlock, Vec<Option<Vec<Vec<u32>>>>)>,
}

impl Parser {
    fn label(&self, id: &str) -> Result<usize> {
        self.basis.iter().position(|b| b == id).ok_or_else(|| Error::UnresolvedReference(format!("basis label {id}")))
    }

    fn vector(&self, terms: &[(i64, String)]) -> Result<Vec<u32>> {
        let mut v = vec![0; self.basis.len()];
        for (c, id) in terms {
            let k = self.label(id)?;
            v[k] = self.p.add(v[k], self.p.reduce(*c));
        }
        Ok(v)
    }

    fn bracket(&mut self, cur: &mut Cursor) -> Result<()> {
        cur.expect('[')?;
        let (a, _) = cur.ident("basis label")?;
        cur.expect(',')?;
        let (b, _) = cur.ident("basis label")?;
        cur.expect(']')?;
        cur.expect('=')?;
        let terms = term_sum(cur)?;
        let i = self.label(&a)?;
        let j = self.label(&b)?;
        if self.declared[i][j] {
            return Err(Error::DuplicateLabel(format!("bracket [{a},{b}]")));
        }
        let v = self.vector(&terms)?;
        self.declared[i][j] = true;
        if !self.declared[j][i] {
            self.structure[j][i] = self.p.vneg(&v);
        }
        self.structure[i][j] = v;
        Ok(())
    }

    fn pmap(&mut self, cur: &mut Cursor) -> Result<()> {
        let (a, _) = cur.ident("basis label")?;
        cur.expect('^')?;
        cur.expect('[')?;
        cur.keyword("p")?;
        cur.expect(']')?;
        cur.expect('=')?;
        let terms = term_sum(cur)?;
        let i = self.label(&a)?;
        if self.pmap[i].is_some() {
            return Err(Error::DuplicateLabel(format!("pmap {a}^[p]")));
        }
        self.pmap[i] = Some(self.vector(&terms)?);
        Ok(())
    }

    fn module(&mut self, cur: &mut Cursor) -> Result<()> {
        let (name, _) = cur.ident("module name")?;
        cur.keyword("dim")?;
        cur.skip_ws();
        let dim_col = cur.col();
        let dim = cur.integer()?;
        cur.end()?;
        if dim < 0 {
            return Err(Error::Syntax { line: cur.line, col: dim_col, expected: "nonnegative dimension".into() });
        }
        if self.modules.iter().any(|(m, _)| m.name == name) {
            return Err(Error::DuplicateLabel(format!("module {name}")));
        }
        let block = ModuleBlock { name, dim: dim as usize, actions: Vec::new() };
        self.modules.push((block, vec![None; self.basis.len()]));
        Ok(())
    }

    fn action(&mut self, cur: &mut Cursor) -> Result<()> {
        let p = self.p;
        let Some((block, slots)) = self.modules.last_mut() else {
            return Err(cur.err("'module' before 'action'"));
        };
        let (a, _) = cur.ident("basis label")?;
        cur.expect('=')?;
        let m = block.dim;
        let mut rows = Vec::with_capacity(m);
        cur.expect('[')?;
        for r in 0..m {
            if r > 0 {
                cur.expect(';')?;
            }
            cur.expect('[')?;
            let mut row = Vec::with_capacity(m);
            for c in 0..m {
                if c > 0 {
                    cur.expect(',')?;
                }
                row.push(p.reduce(cur.integer()?));
            }
            cur.expect(']')?;
            rows.push(row);
        }
        cur.expect(']')?;
        cur.end()?;
        let Some(i) = self.basis.iter().position(|b| *b == a) else {
            return Err(Error::UnresolvedReference(format!("basis label {a}")));
        };
        if slots[i].is_some() {
            return Err(Error::DuplicateLabel(format!("action {a} in module {}", block.name)));
        }
        slots[i] = Some(rows);
        Ok(())
    }
}

/// Parse an algebra file.
pub fn parse(text: &str) -> Result<AlgebraFile> {
    parse_impl(text, true)
}

/// Parse a file whose `pmap` lines may be missing; missing values are zero. Used
/// when the p-operator is to be inferred.
pub fn parse_structure(text: &str) -> Result<AlgebraFile> {
    parse_impl(text, false)
}

fn parse_impl(text: &str, require_pmap: bool) -> Result<AlgebraFile> {
    let mut lines =
        text.lines().enumerate().map(|(k, l)| (k + 1, strip_comment(l))).filter(|(_, l)| !l.trim().is_empty());

    let Some((ln, header)) = lines.next() else {
        return Err(Error::Syntax { line: text.lines().count().max(1), col: 1, expected: "'algebra'".into() });
    };
    let mut cur = Cursor::new(header, ln);
    cur.keyword("algebra")?;
    let (name, _) = cur.ident("algebra name")?;
    cur.keyword("over")?;
    cur.keyword("GF")?;
    cur.expect('(')?;
    cur.skip_ws();
    let p_col = cur.col();
    let p = cur.integer()?;
    cur.expect(')')?;
    cur.end()?;
    if p < 2 || !is_prime(p as u64) {
        if p < 0 {
            return Err(Error::Syntax { line: ln, col: p_col, expected: "positive modulus".into() });
        }
        return Err(Error::NonPrimeModulus(p as u64));
    }
    let p = Prime::new(p as u64)?;

    let Some((ln, basis_line)) = lines.next() else {
        return Err(Error::Syntax { line: ln + 1, col: 1, expected: "'basis'".into() });
    };
    let mut cur = Cursor::new(basis_line, ln);
    cur.keyword("basis")?;
    let mut basis = Vec::new();
    let mut seen = BTreeSet::new();
    while cur.peek().is_some() {
        let (id, _) = cur.ident("basis label")?;
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateLabel(format!("basis label {id}")));
        }
        basis.push(id);
    }
    if basis.is_empty() {
        return Err(cur.err("basis label"));
    }
    let n = basis.len();
    let mut parser = Parser {
        p,
        name,
        basis,
        structure: vec![vec![vec![0; n]; n]; n],
        declared: vec![vec![false; n]; n],
        pmap: vec![None; n],
        modules: Vec::new(),
    };

    for (ln, line) in lines {
        let mut cur = Cursor::new(line, ln);
        let save = cur.pos;
        let (kw, _) = cur.ident("'bracket', 'pmap', 'module' or 'action'")?;
        match kw.as_str() {
            "bracket" => parser.bracket(&mut cur)?,
            "pmap" => parser.pmap(&mut cur)?,
            "module" => parser.module(&mut cur)?,
            "action" => parser.action(&mut cur)?,
            _ => {
                cur.pos = save;
                cur.skip_ws();
                return Err(cur.err("'bracket', 'pmap', 'module' or 'action'"));
            }
        }
    }

    let mut pmap = Vec::with_capacity(n);
    for (i, v) in parser.pmap.into_iter().enumerate() {
        match v {
            Some(v) => pmap.push(v),
            None if !require_pmap => pmap.push(vec![0; n]),
            None => return Err(Error::UnresolvedReference(format!("pmap {}^[p]", parser.basis[i]))),
        }
    }
    let mut modules = Vec::new();
    for (mut block, slots) in parser.modules {
        for (i, slot) in slots.into_iter().enumerate() {
            let rows = slot.ok_or_else(|| {
                Error::UnresolvedReference(format!("action {} in module {}", parser.basis[i], block.name))
            })?;
            block.actions.push(rows);
        }
        modules.push(block);
    }
    Ok(AlgebraFile { name: parser.name, p: p.get(), basis: parser.basis, structure: parser.structure, pmap, modules })
}

fn emit_sum(out: &mut String, basis: &[String], v: &[u32]) {
    let terms: Vec<String> = v.iter().zip(basis).filter(|(c, _)| **c != 0).map(|(c, b)| format!("{c}*{b}")).collect();
    if terms.is_empty() {
        out.push('0');
    } else {
        out.push_str(&terms.join(" + "));
    }
}

/// Write a file that parses back to `file`. Every ordered bracket is written.
pub fn emit(file: &AlgebraFile) -> String {
    let mut out = format!("algebra {} over GF({})\nbasis {}\n", file.name, file.p, file.basis.join(" "));
    let n = file.basis.len();
    for i in 0..n {
        for j in 0..n {
            out.push_str(&format!("bracket [{},{}] = ", file.basis[i], file.basis[j]));
            emit_sum(&mut out, &file.basis, &file.structure[i][j]);
            out.push('\n');
        }
    }
    for i in 0..n {
        out.push_str(&format!("pmap {}^[p] = ", file.basis[i]));
        emit_sum(&mut out, &file.basis, &file.pmap[i]);
        out.push('\n');
    }
    for m in &file.modules {
        out.push_str(&format!("module {} dim {}\n", m.name, m.dim));
        for (i, rows) in m.actions.iter().enumerate() {
            let rows: Vec<String> = rows
                .iter()
                .map(|r| format!("[{}]", r.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))
                .collect();
            out.push_str(&format!("action {} = [{}]\n", file.basis[i], rows.join(";")));
        }
    }
    out
}

impl AlgebraFile {
    pub fn prime(&self) -> Prime {
        Prime::new(self.p as u64).expect("parsed modulus is prime")
    }

    /// Build without checking the axioms.
    pub fn algebra_unchecked(&self) -> Result<RestrictedLieAlgebra> {
        RestrictedLieAlgebra::from_parts_unchecked(self.prime(), self.structure.clone(), self.pmap.clone())
    }

    /// Build and validate.
    pub fn algebra(&self) -> Result<RestrictedLieAlgebra> {
        RestrictedLieAlgebra::new(self.prime(), self.structure.clone(), self.pmap.clone())
    }

    fn module_matrices(&self, block: &ModuleBlock) -> Vec<FpMatrix> {
        let p = self.prime();
        block.actions.iter().map(|rows| FpMatrix::from_row_vectors(p, block.dim, rows)).collect()
    }

    /// Declared modules, without the module axioms checked.
    pub fn modules_unchecked(&self, alg: &Arc<RestrictedLieAlgebra>) -> Result<Vec<(String, RestrictedModule)>> {
        self.modules
            .iter()
            .map(|b| {
                Ok((b.name.clone(), RestrictedModule::from_matrices_unchecked(alg.clone(), self.module_matrices(b))?))
            })
            .collect()
    }

    /// The named module, or the built-in `trivial` and `adjoint` modules, validated.
    pub fn module(&self, alg: &Arc<RestrictedLieAlgebra>, name: &str) -> Result<RestrictedModule> {
        if let Some(b) = self.modules.iter().find(|b| b.name == name) {
            return RestrictedModule::new(alg.clone(), self.module_matrices(b));
        }
        match name {
            "trivial" => Ok(RestrictedModule::trivial(alg)),
            "adjoint" => Ok(RestrictedModule::adjoint(alg)),
            _ => Err(Error::UnresolvedReference(format!("module {name}"))),
        }
    }

    /// The file describing `alg` with basis labels `labels` (default `e0, e1, ...`).
    pub fn from_algebra(name: &str, alg: &RestrictedLieAlgebra, labels: Option<Vec<String>>) -> AlgebraFile {
        let n = alg.dim();
        AlgebraFile {
            name: name.to_string(),
            p: alg.p().get(),
            basis: labels.unwrap_or_else(|| (0..n).map(|i| format!("e{i}")).collect()),
            structure: alg.structure_constants(),
            pmap: alg.pi_values().to_vec(),
            modules: Vec::new(),
        }
    }

    pub fn add_module(&mut self, name: &str, module: &RestrictedModule) {
        self.modules.push(ModuleBlock {
            name: name.to_string(),
            dim: module.dim(),
            actions: module.rhos().iter().map(FpMatrix::row_vectors).collect(),
        });
    }
}

/// The Witt algebra file with labels D0, ..., D_{p-1}.
pub fn witt_file(p: Prime) -> AlgebraFile {
    let (alg, _) = crate::liealg::witt_algebra(p);
    let labels = (0..alg.dim()).map(|i| format!("D{i}")).collect();
    AlgebraFile::from_algebra(&format!("witt{}", p.get()), &alg, Some(labels))
}
