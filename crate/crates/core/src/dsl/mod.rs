//! Text front-end for knowledge bases (`.rck` files) and queries.
//!
//! ```text
//! file      := line*
//! line      := decl | stmt | comment
//! decl      := "class" ID | "property" ID | "individual" ID
//!            | "sentence" ID "iff" propexpr "(" ID ")"
//! stmt      := "stat" "%(" classexpr "," propexpr ")" ("=" NUM | "in" "[" NUM "," NUM "]")
//!            | "member" ID "in" classexpr
//!            | "subset" classexpr "<" classexpr
//!            | "equiv" ID ID
//! classexpr := ID ("&" ID)*
//! propexpr  := unary ("&" unary)*
//! unary     := "!" unary | "(" propexpr ")" | ID
//! NUM       := decimal in [0, 1], or INT "/" INT
//! ```
//!
//! Declarations may appear anywhere in the file. Every error is reported with
//! its line and column; a file with any error yields no knowledge base.

mod lexer;
mod render;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::class::{ClassExpr, UNIVERSAL_NAME};
use crate::error::{KbError, Namespace};
use crate::interval::{parse_decimal, Interval, Rational};
use crate::kb::{is_keyword, KbBuilder, Statement};
use crate::property::{CanonicalProperty, PropExpr};

use lexer::{lex_line, Tok, Token};
pub use render::render;

/// 1-based line and column (in characters).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    Undeclared,
    Duplicate,
    MalformedInterval,
    Invalid,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl Diagnostic {
    fn new(pos: Pos, kind: DiagnosticKind, message: impl Into<String>) -> Self {
        Diagnostic {
            pos,
            kind,
            message: message.into(),
        }
    }

    fn from_kb(pos: Pos, err: KbError) -> Self {
        let kind = match err {
            KbError::Undeclared { .. } => DiagnosticKind::Undeclared,
            KbError::Duplicate { .. } => DiagnosticKind::Duplicate,
            KbError::InvalidInterval { .. } => DiagnosticKind::MalformedInterval,
            _ => DiagnosticKind::Invalid,
        };
        Diagnostic::new(pos, kind, err.to_string())
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.pos.line, self.pos.column, self.message)
    }
}

impl std::error::Error for Diagnostic {}

type Name = (String, Pos);

#[derive(Debug)]
struct ClassAst {
    expr: ClassExpr,
    atoms: Vec<Name>,
}

#[derive(Debug)]
struct PropAst {
    expr: PropExpr,
    atoms: Vec<Name>,
}

#[derive(Debug)]
enum Item {
    Decl(Namespace, Name),
    Sentence {
        name: Name,
        prop: PropAst,
        individual: Name,
    },
    Stat {
        class: ClassAst,
        prop: PropAst,
        lo: Rational,
        hi: Rational,
        pos: Pos,
    },
    Member {
        individual: Name,
        class: ClassAst,
    },
    Subset {
        sub: ClassAst,
        sup: ClassAst,
        pos: Pos,
    },
    Equiv(Name, Name),
}

struct Parser<'a> {
    toks: &'a [Token],
    k: usize,
    end: Pos,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Token], line_no: usize, line: &str) -> Self {
        Parser {
            toks,
            k: 0,
            end: Pos {
                line: line_no,
                column: line.chars().count() + 1,
            },
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.k).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.k).map_or(self.end, |t| t.pos)
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        let found = self
            .peek()
            .map_or("end of line".to_string(), Tok::describe);
        Diagnostic::new(
            self.pos(),
            DiagnosticKind::Syntax,
            format!("expected {expected}, found {found}"),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, Diagnostic> {
        if self.peek() == Some(&tok) {
            let pos = self.pos();
            self.k += 1;
            Ok(pos)
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), Diagnostic> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.k += 1;
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    fn ident(&mut self) -> Result<Name, Diagnostic> {
        match self.peek() {
            Some(Tok::Ident(s)) if !is_keyword(s) => {
                let name = (s.clone(), self.pos());
                self.k += 1;
                Ok(name)
            }
            Some(Tok::Ident(s)) => Err(Diagnostic::new(
                self.pos(),
                DiagnosticKind::Syntax,
                format!("expected identifier, found keyword `{s}`"),
            )),
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn finish(&self) -> Result<(), Diagnostic> {
        if self.k == self.toks.len() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    fn class_expr(&mut self) -> Result<ClassAst, Diagnostic> {
        let first = self.ident()?;
        let mut expr = ClassExpr::atom(first.0.clone());
        let mut atoms = vec![first];
        while self.peek() == Some(&Tok::Amp) {
            self.k += 1;
            let next = self.ident()?;
            expr = expr.and(ClassExpr::atom(next.0.clone()));
            atoms.push(next);
        }
        Ok(ClassAst { expr, atoms })
    }

    fn prop_expr(&mut self) -> Result<PropAst, Diagnostic> {
        let mut atoms = Vec::new();
        let expr = self.prop_conj(&mut atoms)?;
        Ok(PropAst { expr, atoms })
    }

    fn prop_conj(&mut self, atoms: &mut Vec<Name>) -> Result<PropExpr, Diagnostic> {
        let mut expr = self.prop_unary(atoms)?;
        while self.peek() == Some(&Tok::Amp) {
            self.k += 1;
            expr = expr.and(self.prop_unary(atoms)?);
        }
        Ok(expr)
    }

    fn prop_unary(&mut self, atoms: &mut Vec<Name>) -> Result<PropExpr, Diagnostic> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.k += 1;
                Ok(self.prop_unary(atoms)?.not())
            }
            Some(Tok::LParen) => {
                self.k += 1;
                let inner = self.prop_conj(atoms)?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::Ident(_)) => {
                let name = self.ident()?;
                let expr = PropExpr::atom(name.0.clone());
                atoms.push(name);
                Ok(expr)
            }
            _ => Err(self.unexpected("property expression")),
        }
    }

    /// `propexpr "(" ID ")"`
    fn application(&mut self) -> Result<(PropAst, Name), Diagnostic> {
        let prop = self.prop_expr()?;
        self.expect(Tok::LParen)?;
        let individual = self.ident()?;
        self.expect(Tok::RParen)?;
        Ok((prop, individual))
    }

    fn number(&mut self) -> Result<Rational, Diagnostic> {
        let pos = self.pos();
        let Some(Tok::Number(text)) = self.peek().cloned() else {
            return Err(self.unexpected("number"));
        };
        self.k += 1;
        let malformed = |msg: String| Diagnostic::new(pos, DiagnosticKind::MalformedInterval, msg);
        let value = if self.peek() == Some(&Tok::Slash) {
            self.k += 1;
            let Some(Tok::Number(den)) = self.peek().cloned() else {
                return Err(self.unexpected("denominator"));
            };
            self.k += 1;
            let (Ok(n), Ok(d)) = (text.parse::<BigInt>(), den.parse::<BigInt>()) else {
                return Err(malformed(format!("malformed fraction `{text}/{den}`")));
            };
            if d.is_zero() {
                return Err(malformed(format!("zero denominator in `{text}/{den}`")));
            }
            Rational::new(n, d)
        } else {
            parse_decimal(&text).ok_or_else(|| malformed(format!("malformed number `{text}`")))?
        };
        if value > Rational::one() {
            return Err(malformed(format!("{text} is not in [0, 1]")));
        }
        Ok(value)
    }

    fn item(&mut self) -> Result<Option<Item>, Diagnostic> {
        let head = match self.peek() {
            None => return Ok(None),
            Some(Tok::Ident(s)) => s.clone(),
            Some(_) => return Err(self.unexpected("declaration or statement")),
        };
        let head_pos = self.pos();
        self.k += 1;
        let item = match head.as_str() {
            "class" => Item::Decl(Namespace::Class, self.ident()?),
            "property" => Item::Decl(Namespace::Property, self.ident()?),
            "individual" => Item::Decl(Namespace::Individual, self.ident()?),
            "sentence" => {
                let name = self.ident()?;
                self.keyword("iff")?;
                let (prop, individual) = self.application()?;
                Item::Sentence {
                    name,
                    prop,
                    individual,
                }
            }
            "stat" => {
                self.expect(Tok::Percent)?;
                self.expect(Tok::LParen)?;
                let class = self.class_expr()?;
                self.expect(Tok::Comma)?;
                let prop = self.prop_expr()?;
                self.expect(Tok::RParen)?;
                let (lo, hi, pos) = match self.peek() {
                    Some(Tok::Eq) => {
                        self.k += 1;
                        let pos = self.pos();
                        let x = self.number()?;
                        (x.clone(), x, pos)
                    }
                    Some(Tok::Ident(s)) if s == "in" => {
                        self.k += 1;
                        let pos = self.expect(Tok::LBracket)?;
                        let lo = self.number()?;
                        self.expect(Tok::Comma)?;
                        let hi = self.number()?;
                        self.expect(Tok::RBracket)?;
                        (lo, hi, pos)
                    }
                    _ => return Err(self.unexpected("`=` or `in`")),
                };
                Item::Stat {
                    class,
                    prop,
                    lo,
                    hi,
                    pos,
                }
            }
            "member" => {
                let individual = self.ident()?;
                self.keyword("in")?;
                Item::Member {
                    individual,
                    class: self.class_expr()?,
                }
            }
            "subset" => {
                let sub = self.class_expr()?;
                self.expect(Tok::Lt)?;
                let sup = self.class_expr()?;
                Item::Subset {
                    sub,
                    sup,
                    pos: head_pos,
                }
            }
            "equiv" => Item::Equiv(self.ident()?, self.ident()?),
            other => {
                return Err(Diagnostic::new(
                    head_pos,
                    DiagnosticKind::Syntax,
                    format!("expected declaration or statement, found `{other}`"),
                ))
            }
        };
        self.finish()?;
        Ok(Some(item))
    }
}

fn parse_line(line: &str, line_no: usize) -> Result<Option<Item>, Diagnostic> {
    let toks = lex_line(line, line_no)?;
    Parser::new(&toks, line_no, line).item()
}

fn check_atoms(builder: &KbBuilder, ns: Namespace, atoms: &[Name]) -> Result<(), Diagnostic> {
    for (name, pos) in atoms {
        if ns == Namespace::Class && name == UNIVERSAL_NAME {
            return Err(Diagnostic::from_kb(*pos, KbError::UniversalClass));
        }
        let declared = match ns {
            Namespace::Class => builder.classes().contains(name),
            Namespace::Property => builder.properties().contains(name),
            Namespace::Individual => builder.individuals().contains(name),
            Namespace::Sentence => builder.form_of(name).is_some(),
        };
        if !declared {
            return Err(Diagnostic::from_kb(
                *pos,
                KbError::Undeclared {
                    namespace: ns,
                    name: name.clone(),
                },
            ));
        }
    }
    Ok(())
}

fn resolve_class(
    builder: &KbBuilder,
    ast: &ClassAst,
) -> Result<crate::class::CanonicalClass, Diagnostic> {
    check_atoms(builder, Namespace::Class, &ast.atoms)?;
    builder
        .class(&ast.expr)
        .map_err(|e| Diagnostic::from_kb(ast.atoms[0].1, e))
}

fn resolve_prop(builder: &KbBuilder, ast: &PropAst) -> Result<CanonicalProperty, Diagnostic> {
    check_atoms(builder, Namespace::Property, &ast.atoms)?;
    builder
        .property(&ast.expr)
        .map_err(|e| Diagnostic::from_kb(ast.atoms[0].1, e))
}

fn apply(builder: &mut KbBuilder, item: &Item) -> Result<(), Diagnostic> {
    match item {
        Item::Decl(..) => Ok(()),
        Item::Sentence {
            name,
            prop,
            individual,
        } => {
            let prop = resolve_prop(builder, prop)?;
            check_atoms(builder, Namespace::Individual, std::slice::from_ref(individual))?;
            if builder.form_of(&name.0).is_some() {
                return Err(Diagnostic::from_kb(
                    name.1,
                    KbError::Duplicate {
                        namespace: Namespace::Sentence,
                        name: name.0.clone(),
                    },
                ));
            }
            builder
                .assert(Statement::form(name.0.clone(), prop, individual.0.clone()))
                .map(drop)
                .map_err(|e| Diagnostic::from_kb(name.1, e))
        }
        Item::Stat {
            class,
            prop,
            lo,
            hi,
            pos,
        } => {
            let class = resolve_class(builder, class)?;
            let prop = resolve_prop(builder, prop)?;
            let interval =
                Interval::new(lo.clone(), hi.clone()).map_err(|e| Diagnostic::from_kb(*pos, e))?;
            builder
                .assert(Statement::stat(class, prop, interval))
                .map(drop)
                .map_err(|e| Diagnostic::from_kb(*pos, e))
        }
        Item::Member { individual, class } => {
            check_atoms(builder, Namespace::Individual, std::slice::from_ref(individual))?;
            let class = resolve_class(builder, class)?;
            builder
                .assert(Statement::member(individual.0.clone(), class))
                .map(drop)
                .map_err(|e| Diagnostic::from_kb(individual.1, e))
        }
        Item::Subset { sub, sup, pos } => {
            let sub = resolve_class(builder, sub)?;
            let sup = resolve_class(builder, sup)?;
            builder
                .assert(Statement::subset(sub, sup))
                .map(drop)
                .map_err(|e| Diagnostic::from_kb(*pos, e))
        }
        Item::Equiv(a, b) => {
            check_atoms(builder, Namespace::Sentence, &[a.clone(), b.clone()])?;
            builder
                .assert(Statement::equiv(a.0.clone(), b.0.clone()))
                .map(drop)
                .map_err(|e| Diagnostic::from_kb(a.1, e))
        }
    }
}

/// Parses a knowledge-base document, collecting every diagnostic.
pub fn parse_kb(text: &str) -> Result<KbBuilder, Vec<Diagnostic>> {
    let mut diagnostics = Vec::new();
    let mut items = Vec::new();
    for (k, line) in text.lines().enumerate() {
        match parse_line(line, k + 1) {
            Ok(Some(item)) => items.push(item),
            Ok(None) => {}
            Err(d) => diagnostics.push(d),
        }
    }

    let mut builder = KbBuilder::new();
    for item in &items {
        if let Item::Decl(ns, (name, pos)) = item {
            let declared = match ns {
                Namespace::Class => builder.declare_class(name),
                Namespace::Property => builder.declare_property(name),
                Namespace::Individual => builder.declare_individual(name),
                Namespace::Sentence => unreachable!(),
            };
            if let Err(e) = declared {
                diagnostics.push(Diagnostic::from_kb(*pos, e));
            }
        }
    }
    // sentences first so `equiv` may refer to later declarations
    let (sentences, statements): (Vec<&Item>, Vec<&Item>) = items
        .iter()
        .partition(|item| matches!(item, Item::Sentence { .. }));
    for item in sentences.into_iter().chain(statements) {
        if let Err(d) = apply(&mut builder, item) {
            diagnostics.push(d);
        }
    }

    if diagnostics.is_empty() {
        Ok(builder)
    } else {
        diagnostics.sort_by_key(|d| d.pos);
        Err(diagnostics)
    }
}

/// A probability query: a declared sentence label, or an inline form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Sentence(String),
    Inline { prop: PropExpr, individual: String },
}

/// Parses `S14` or `heads(t14)`. Names are checked by [`Query::resolve`].
pub fn parse_query(text: &str) -> Result<Query, Diagnostic> {
    let toks = lex_line(text, 1)?;
    let mut parser = Parser::new(&toks, 1, text);
    if toks.len() == 1 {
        let (name, _) = parser.ident()?;
        return Ok(Query::Sentence(name));
    }
    let (prop, individual) = parser.application()?;
    parser.finish()?;
    Ok(Query::Inline {
        prop: prop.expr,
        individual: individual.0,
    })
}

impl Query {
    /// Resolves to a sentence label, declaring an anonymous sentence for
    /// inline forms.
    pub fn resolve(&self, builder: &mut KbBuilder) -> Result<String, Diagnostic> {
        let at = Pos { line: 1, column: 1 };
        match self {
            Query::Sentence(label) => {
                if builder.form_of(label).is_none() {
                    return Err(Diagnostic::from_kb(
                        at,
                        KbError::Undeclared {
                            namespace: Namespace::Sentence,
                            name: label.clone(),
                        },
                    ));
                }
                Ok(label.clone())
            }
            Query::Inline { prop, individual } => {
                let prop = builder.property(prop).map_err(|e| Diagnostic::from_kb(at, e))?;
                builder
                    .anonymous_sentence(prop, individual)
                    .map_err(|e| Diagnostic::from_kb(at, e))
            }
        }
    }
}

/// Parses a bare property expression such as `!a & (b & !c)`.
pub fn parse_prop_expr(text: &str) -> Result<PropExpr, Diagnostic> {
    let toks = lex_line(text, 1)?;
    let mut parser = Parser::new(&toks, 1, text);
    let ast = parser.prop_expr()?;
    parser.finish()?;
    Ok(ast.expr)
}
