//! The scenario file format.
//!
//! One directive per line; `#` starts a comment. Blocks opened by
//! `category` and `presheaf` run to a line reading `end`. A matrix is
//! written as the lines of integers directly below its header, one row per
//! line.
//!
//! ```text
//! name gp-dual-numbers
//! modulus 2
//! cosmos finvect            # or: cosmos chain <lo> <hi>
//! seed 0
//! max-dim 8
//! probes objects=2 morphisms=50
//!
//! category R algebra 2
//!   unit 1 0
//!   mult
//!     1 0 0 0
//!     0 1 1 0
//! end
//!
//! presheaf k on R
//!   value R 1
//!   action R R
//!     1 0
//! end
//!
//! check gp R generators=representables
//! ```
//!
//! Category kinds: `unit`; `algebra <dim>` with `unit` and `mult`;
//! `quiver` with `objects` and `arrow <name> <src> <dst>` lines (the free
//! category); `ordinary` with `objects`, `arrow` and `compose <g> <f> <gf>`
//! lines, identities named `1_<object>`; `explicit` with `objects`,
//! `hom <a> <b> <dim>`, `comp <a> <b> <c>` and `ident <a>` (missing
//! composites are zero); and, over the chain cosmos, `complexes` with
//! `complex <label> <lo> <dims...>` and `d <label> <degree>`.
//!
//! A presheaf on `C` lists `value <object> <dim>` and `action <x> <y>`, the
//! map `C(y,x) ⊗ P(x) → P(y)` with input index `g·dim P(x) + v`.

use std::collections::BTreeMap;

use vcosmos::Error;

/// A position in the scenario text, 1-based.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub fn error(self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: Vec<Vec<i64>>,
    pub pos: Pos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosmosDecl {
    FinVect,
    Chain { lo: i32, hi: i32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowDecl {
    pub name: Token,
    pub src: Token,
    pub dst: Token,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexDecl {
    pub label: Token,
    pub lo: i32,
    pub dims: Vec<usize>,
    pub diffs: Vec<(i32, Matrix)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CategoryKind {
    Unit,
    Algebra {
        dim: usize,
        unit: Vec<i64>,
        mult: Option<Matrix>,
    },
    Quiver {
        objects: Vec<Token>,
        arrows: Vec<ArrowDecl>,
    },
    Ordinary {
        objects: Vec<Token>,
        arrows: Vec<ArrowDecl>,
        compose: Vec<(Token, Token, Token)>,
    },
    Explicit {
        objects: Vec<Token>,
        homs: Vec<(Token, Token, usize)>,
        comps: Vec<([Token; 3], Matrix)>,
        idents: Vec<(Token, Matrix)>,
    },
    Complexes {
        complexes: Vec<ComplexDecl>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryDecl {
    pub name: Token,
    pub kind: CategoryKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafDecl {
    pub name: Token,
    pub category: Token,
    pub values: Vec<(Token, usize)>,
    pub actions: Vec<(Token, Token, Matrix)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckDecl {
    pub kind: Token,
    pub target: Option<Token>,
    pub args: BTreeMap<String, Token>,
}

impl CheckDecl {
    pub fn arg(&self, key: &str) -> Option<&Token> {
        self.args.get(key)
    }

    pub fn usize_arg(&self, key: &str, default: usize) -> Result<usize, Error> {
        match self.args.get(key) {
            None => Ok(default),
            Some(t) => parse_num(t),
        }
    }

    pub fn list_arg(&self, key: &str) -> Option<Vec<String>> {
        self.args.get(key).map(|t| t.text.split(',').map(str::to_string).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub modulus: u32,
    /// Where the modulus was given, for the primality error.
    pub modulus_pos: Pos,
    pub cosmos: CosmosDecl,
    pub seed: u64,
    pub max_dim: usize,
    pub probe_objects: usize,
    pub probe_morphisms: usize,
    pub categories: Vec<CategoryDecl>,
    pub presheaves: Vec<PresheafDecl>,
    pub checks: Vec<CheckDecl>,
}

fn tokenize(line: &str, number: usize) -> Vec<Token> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in code.char_indices().chain(std::iter::once((code.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: code[s..i].to_string(),
                    pos: Pos {
                        line: number,
                        column: code[..s].chars().count() + 1,
                    },
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn parse_num<T: std::str::FromStr>(t: &Token) -> Result<T, Error> {
    t.text
        .parse()
        .map_err(|_| t.pos.error(format!("expected a number, found `{}`", t.text)))
}

fn is_matrix_row(tokens: &[Token]) -> bool {
    tokens
        .first()
        .is_some_and(|t| t.text.parse::<i64>().is_ok())
}

struct Lines {
    lines: Vec<Vec<Token>>,
    /// Line number of each entry, for end-of-file errors.
    numbers: Vec<usize>,
    next: usize,
}

impl Lines {
    fn new(text: &str) -> Self {
        let mut lines = Vec::new();
        let mut numbers = Vec::new();
        for (i, l) in text.lines().enumerate() {
            let t = tokenize(l, i + 1);
            if !t.is_empty() {
                lines.push(t);
                numbers.push(i + 1);
            }
        }
        Self { lines, numbers, next: 0 }
    }

    fn next_line(&mut self) -> Option<Vec<Token>> {
        let l = self.lines.get(self.next).cloned();
        self.next += 1;
        l
    }

    fn peek(&self) -> Option<&Vec<Token>> {
        self.lines.get(self.next)
    }

    fn eof_pos(&self) -> Pos {
        Pos {
            line: self.numbers.last().copied().unwrap_or(0) + 1,
            column: 1,
        }
    }

    fn matrix(&mut self, header: Pos) -> Result<Matrix, Error> {
        let mut rows = Vec::new();
        while self.peek().is_some_and(|l| is_matrix_row(l)) {
            let l = self.next_line().expect("peeked");
            rows.push(l.iter().map(parse_num).collect::<Result<Vec<i64>, _>>()?);
        }
        if let Some(w) = rows.first().map(Vec::len) {
            if rows.iter().any(|r| r.len() != w) {
                return Err(header.error("matrix rows have different lengths"));
            }
        }
        Ok(Matrix { rows, pos: header })
    }

    /// Lines up to the matching `end`.
    fn block(&mut self, open: Pos, mut each: impl FnMut(&mut Self, Vec<Token>) -> Result<(), Error>) -> Result<(), Error> {
        loop {
            let Some(l) = self.next_line() else {
                return Err(Pos {
                    line: self.eof_pos().line,
                    column: 1,
                }
                .error(format!("block opened at line {} is missing `end`", open.line)));
            };
            if l[0].text == "end" {
                return Ok(());
            }
            each(self, l)?;
        }
    }
}

fn expect_len(l: &[Token], n: usize, usage: &str) -> Result<(), Error> {
    if l.len() < n {
        let last = l.last().expect("lines are non-empty");
        return Err(Pos {
            line: last.pos.line,
            column: last.pos.column + last.text.chars().count(),
        }
        .error(format!("expected `{usage}`")));
    }
    if l.len() > n {
        return Err(l[n].pos.error(format!("unexpected `{}`; expected `{usage}`", l[n].text)));
    }
    Ok(())
}

fn parse_category(lines: &mut Lines, l: Vec<Token>) -> Result<CategoryDecl, Error> {
    if l.len() < 3 {
        expect_len(&l, 3, "category <name> <kind>")?;
    }
    let name = l[1].clone();
    let open = l[0].pos;
    let kind_tok = &l[2];
    let unknown = |t: &Token, kind: &str| t.pos.error(format!("unknown directive `{}` in a {kind} category", t.text));
    let kind = match kind_tok.text.as_str() {
        "unit" => {
            expect_len(&l, 3, "category <name> unit")?;
            CategoryKind::Unit
        }
        "algebra" => {
            expect_len(&l, 4, "category <name> algebra <dim>")?;
            let dim = parse_num(&l[3])?;
            let mut unit = Vec::new();
            let mut mult = None;
            lines.block(open, |lines, b| {
                match b[0].text.as_str() {
                    "unit" => unit = b[1..].iter().map(parse_num).collect::<Result<_, _>>()?,
                    "mult" => {
                        expect_len(&b, 1, "mult")?;
                        mult = Some(lines.matrix(b[0].pos)?);
                    }
                    _ => return Err(unknown(&b[0], "algebra")),
                }
                Ok(())
            })?;
            CategoryKind::Algebra { dim, unit, mult }
        }
        "quiver" | "ordinary" => {
            expect_len(&l, 3, "category <name> quiver")?;
            let ordinary = kind_tok.text == "ordinary";
            let mut objects = Vec::new();
            let mut arrows = Vec::new();
            let mut compose = Vec::new();
            lines.block(open, |_, b| {
                match b[0].text.as_str() {
                    "objects" => objects.extend(b[1..].iter().cloned()),
                    "arrow" => {
                        expect_len(&b, 4, "arrow <name> <src> <dst>")?;
                        arrows.push(ArrowDecl {
                            name: b[1].clone(),
                            src: b[2].clone(),
                            dst: b[3].clone(),
                        });
                    }
                    "compose" if ordinary => {
                        expect_len(&b, 4, "compose <g> <f> <g∘f>")?;
                        compose.push((b[1].clone(), b[2].clone(), b[3].clone()));
                    }
                    _ => return Err(unknown(&b[0], &kind_tok.text)),
                }
                Ok(())
            })?;
            if ordinary {
                CategoryKind::Ordinary { objects, arrows, compose }
            } else {
                CategoryKind::Quiver { objects, arrows }
            }
        }
        "explicit" => {
            expect_len(&l, 3, "category <name> explicit")?;
            let mut objects = Vec::new();
            let mut homs = Vec::new();
            let mut comps = Vec::new();
            let mut idents = Vec::new();
            lines.block(open, |lines, b| {
                match b[0].text.as_str() {
                    "objects" => objects.extend(b[1..].iter().cloned()),
                    "hom" => {
                        expect_len(&b, 4, "hom <a> <b> <dim>")?;
                        homs.push((b[1].clone(), b[2].clone(), parse_num(&b[3])?));
                    }
                    "comp" => {
                        expect_len(&b, 4, "comp <a> <b> <c>")?;
                        let m = lines.matrix(b[0].pos)?;
                        comps.push(([b[1].clone(), b[2].clone(), b[3].clone()], m));
                    }
                    "ident" => {
                        expect_len(&b, 2, "ident <a>")?;
                        let m = lines.matrix(b[0].pos)?;
                        idents.push((b[1].clone(), m));
                    }
                    _ => return Err(unknown(&b[0], "explicit")),
                }
                Ok(())
            })?;
            CategoryKind::Explicit {
                objects,
                homs,
                comps,
                idents,
            }
        }
        "complexes" => {
            expect_len(&l, 3, "category <name> complexes")?;
            let mut complexes: Vec<ComplexDecl> = Vec::new();
            lines.block(open, |lines, b| {
                match b[0].text.as_str() {
                    "complex" => {
                        if b.len() < 4 {
                            expect_len(&b, 4, "complex <label> <lo> <dims...>")?;
                        }
                        complexes.push(ComplexDecl {
                            label: b[1].clone(),
                            lo: parse_num(&b[2])?,
                            dims: b[3..].iter().map(parse_num).collect::<Result<_, _>>()?,
                            diffs: Vec::new(),
                        });
                    }
                    "d" => {
                        expect_len(&b, 3, "d <label> <degree>")?;
                        let degree = parse_num(&b[2])?;
                        let m = lines.matrix(b[0].pos)?;
                        let c = complexes
                            .iter_mut()
                            .find(|c| c.label.text == b[1].text)
                            .ok_or_else(|| b[1].pos.error(format!("unknown complex `{}`", b[1].text)))?;
                        c.diffs.push((degree, m));
                    }
                    _ => return Err(unknown(&b[0], "complexes")),
                }
                Ok(())
            })?;
            CategoryKind::Complexes { complexes }
        }
        other => return Err(kind_tok.pos.error(format!("unknown category kind `{other}`"))),
    };
    Ok(CategoryDecl { name, kind })
}

fn parse_presheaf(lines: &mut Lines, l: Vec<Token>) -> Result<PresheafDecl, Error> {
    expect_len(&l, 4, "presheaf <name> on <category>")?;
    if l[2].text != "on" {
        return Err(l[2].pos.error("expected `on`"));
    }
    let mut values = Vec::new();
    let mut actions = Vec::new();
    lines.block(l[0].pos, |lines, b| {
        match b[0].text.as_str() {
            "value" => {
                expect_len(&b, 3, "value <object> <dim>")?;
                values.push((b[1].clone(), parse_num(&b[2])?));
            }
            "action" => {
                expect_len(&b, 3, "action <x> <y>")?;
                let m = lines.matrix(b[0].pos)?;
                actions.push((b[1].clone(), b[2].clone(), m));
            }
            _ => return Err(b[0].pos.error(format!("unknown directive `{}` in a presheaf", b[0].text))),
        }
        Ok(())
    })?;
    Ok(PresheafDecl {
        name: l[1].clone(),
        category: l[3].clone(),
        values,
        actions,
    })
}

fn parse_check(l: Vec<Token>) -> Result<CheckDecl, Error> {
    if l.len() < 2 {
        expect_len(&l, 2, "check <kind> [target] [key=value...]")?;
    }
    let mut target = None;
    let mut args = BTreeMap::new();
    for t in &l[2..] {
        match t.text.split_once('=') {
            Some((k, v)) => {
                let value = Token {
                    text: v.to_string(),
                    pos: Pos {
                        line: t.pos.line,
                        column: t.pos.column + k.chars().count() + 1,
                    },
                };
                if args.insert(k.to_string(), value).is_some() {
                    return Err(t.pos.error(format!("argument `{k}` given twice")));
                }
            }
            None if target.is_none() && args.is_empty() => target = Some(t.clone()),
            None => return Err(t.pos.error(format!("unexpected `{}`", t.text))),
        }
    }
    Ok(CheckDecl {
        kind: l[1].clone(),
        target,
        args,
    })
}

impl Scenario {
    pub fn parse(text: &str, default_name: &str) -> Result<Self, Error> {
        let mut lines = Lines::new(text);
        let mut s = Scenario {
            name: default_name.to_string(),
            modulus: 2,
            modulus_pos: Pos { line: 1, column: 1 },
            cosmos: CosmosDecl::FinVect,
            seed: 0,
            max_dim: 8,
            probe_objects: 2,
            probe_morphisms: 50,
            categories: Vec::new(),
            presheaves: Vec::new(),
            checks: Vec::new(),
        };
        let mut seen_modulus = false;
        while let Some(l) = lines.next_line() {
            let head = &l[0];
            match head.text.as_str() {
                "name" => {
                    expect_len(&l, 2, "name <text>")?;
                    s.name = l[1].text.clone();
                }
                "modulus" => {
                    expect_len(&l, 2, "modulus <p>")?;
                    s.modulus = parse_num(&l[1])?;
                    s.modulus_pos = l[1].pos;
                    seen_modulus = true;
                }
                "cosmos" => {
                    s.cosmos = match l.get(1).map(|t| t.text.as_str()) {
                        Some("finvect") => {
                            expect_len(&l, 2, "cosmos finvect")?;
                            CosmosDecl::FinVect
                        }
                        Some("chain") => {
                            expect_len(&l, 4, "cosmos chain <lo> <hi>")?;
                            CosmosDecl::Chain {
                                lo: parse_num(&l[2])?,
                                hi: parse_num(&l[3])?,
                            }
                        }
                        Some(other) => return Err(l[1].pos.error(format!("unknown cosmos `{other}`"))),
                        None => return Err(head.pos.error("expected `cosmos finvect` or `cosmos chain <lo> <hi>`")),
                    };
                }
                "seed" => {
                    expect_len(&l, 2, "seed <n>")?;
                    s.seed = parse_num(&l[1])?;
                }
                "max-dim" => {
                    expect_len(&l, 2, "max-dim <n>")?;
                    s.max_dim = parse_num(&l[1])?;
                }
                "probes" => {
                    for t in &l[1..] {
                        match t.text.split_once('=') {
                            Some(("objects", v)) => s.probe_objects = parse_num(&Token { text: v.into(), pos: t.pos })?,
                            Some(("morphisms", v)) => s.probe_morphisms = parse_num(&Token { text: v.into(), pos: t.pos })?,
                            _ => return Err(t.pos.error(format!("unknown probe setting `{}`", t.text))),
                        }
                    }
                }
                "category" => {
                    let c = parse_category(&mut lines, l)?;
                    if s.categories.iter().any(|d| d.name.text == c.name.text) {
                        return Err(c.name.pos.error(format!("category `{}` declared twice", c.name.text)));
                    }
                    s.categories.push(c);
                }
                "presheaf" => {
                    let p = parse_presheaf(&mut lines, l)?;
                    if s.presheaves.iter().any(|d| d.name.text == p.name.text) {
                        return Err(p.name.pos.error(format!("presheaf `{}` declared twice", p.name.text)));
                    }
                    s.presheaves.push(p);
                }
                "check" => s.checks.push(parse_check(l)?),
                "end" => return Err(head.pos.error("`end` without an open block")),
                other => return Err(head.pos.error(format!("unknown directive `{other}`"))),
            }
        }
        if !seen_modulus {
            return Err(Pos { line: 1, column: 1 }.error("missing `modulus` directive"));
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err_pos(text: &str) -> (usize, usize) {
        match Scenario::parse(text, "t") {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn parses_blocks_and_checks() {
        let s = Scenario::parse(
            "modulus 3\ncategory R algebra 1\n  unit 1\n  mult\n    1\nend\ncheck yoneda R random=4 # trailing\n",
            "t",
        )
        .unwrap();
        assert_eq!(s.modulus, 3);
        assert_eq!(s.categories.len(), 1);
        let c = &s.checks[0];
        assert_eq!(c.kind.text, "yoneda");
        assert_eq!(c.target.as_ref().unwrap().text, "R");
        assert_eq!(c.usize_arg("random", 0).unwrap(), 4);
    }

    #[test]
    fn errors_carry_line_and_column() {
        assert_eq!(err_pos("modulus 2\nfrobnicate\n"), (2, 1));
        assert_eq!(err_pos("modulus x\n"), (1, 9));
        assert_eq!(err_pos("modulus 2\ncategory R algebra 2\n  unit 1 0\n"), (4, 1));
        assert_eq!(err_pos("modulus 2\ncategory R algebra 2\n  mult\n    1 0\n    1\nend\n"), (3, 3));
        assert_eq!(err_pos("cosmos finvect\n"), (1, 1));
    }
}
