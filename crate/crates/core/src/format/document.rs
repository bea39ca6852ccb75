use crate::arith::{qt, Field, PrimeField, RatFunField, Rationals};
use crate::error::{Error, Result};
use crate::weyl::{ComponentRule, MonomialOrder, Op, OrderKind, WeylAlgebra};

use super::expr::{parse_operator, print_operator};

/// Coefficient field named in a document header.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Q,
    QT,
    Fp(u64),
    FpT(u64),
}

impl FieldSpec {
    fn parse(s: &str) -> Option<Self> {
        let s = s.replace(' ', "");
        match s.as_str() {
            "Q" | "QQ" => return Some(FieldSpec::Q),
            "Q(t)" | "QQ(t)" => return Some(FieldSpec::QT),
            _ => {}
        }
        let (inner, param) = match s.strip_suffix("(t)") {
            Some(r) => (r, true),
            None => (s.as_str(), false),
        };
        let p: u64 = inner.strip_prefix("GF(")?.strip_suffix(')')?.parse().ok()?;
        if !(3..1 << 31).contains(&p) || !crate::arith::is_prime_u32_range(p) {
            return None;
        }
        Some(if param { FieldSpec::FpT(p) } else { FieldSpec::Fp(p) })
    }

    fn text(&self) -> String {
        match self {
            FieldSpec::Q => "Q".into(),
            FieldSpec::QT => "Q(t)".into(),
            FieldSpec::Fp(p) => format!("GF({p})"),
            FieldSpec::FpT(p) => format!("GF({p})(t)"),
        }
    }

    pub fn has_parameter(&self) -> bool {
        matches!(self, FieldSpec::QT | FieldSpec::FpT(_))
    }
}

/// Variables, field, rank and order of a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub names: Vec<String>,
    pub field: FieldSpec,
    pub rank: usize,
    pub order: MonomialOrder,
    /// Whether `∂_t` is a generator.
    pub dt: bool,
}

impl AlgebraSpec {
    pub fn new(names: &[&str], field: FieldSpec, order: MonomialOrder) -> Self {
        AlgebraSpec {
            names: names.iter().map(|s| s.to_string()).collect(),
            field,
            rank: 1,
            order,
            dt: false,
        }
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    /// Builds the algebra over a concrete field value matching `self.field`.
    pub fn algebra<K: Field>(&self, field: K) -> Result<WeylAlgebra<K>> {
        if self.dt {
            WeylAlgebra::with_dt(field, self.n(), self.rank, self.order.clone())
        } else {
            WeylAlgebra::new(field, self.n(), self.rank, self.order.clone())
        }
    }

    fn order_text(&self) -> String {
        match &self.order.kind {
            OrderKind::Grevlex => "grevlex".into(),
            OrderKind::Block => "block".into(),
            OrderKind::Lex(seq) => {
                let n = self.n();
                let names: Vec<String> = seq
                    .iter()
                    .map(|&i| {
                        if i < n {
                            self.names[i].clone()
                        } else {
                            format!("d{}", self.names[i - n])
                        }
                    })
                    .collect();
                format!("lex {}", names.join(" "))
            }
            OrderKind::Weight(w) => {
                let ws: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                format!("weight {}", ws.join(" "))
            }
        }
    }

    fn parse_order(&self, s: &str) -> Option<MonomialOrder> {
        let mut it = s.split_whitespace();
        let kind = match it.next()? {
            "grevlex" => OrderKind::Grevlex,
            "block" => OrderKind::Block,
            "lex" => {
                let n = self.n();
                let seq: Option<Vec<usize>> = it
                    .by_ref()
                    .map(|v| {
                        self.names.iter().position(|x| x == v).or_else(|| {
                            let r = v.strip_prefix('d')?;
                            self.names.iter().position(|x| x == r).map(|i| i + n)
                        })
                    })
                    .collect();
                OrderKind::Lex(seq?)
            }
            "weight" => {
                let w: std::result::Result<Vec<u32>, _> = it.by_ref().map(str::parse).collect();
                OrderKind::Weight(w.ok()?)
            }
            _ => return None,
        };
        if it.next().is_some() {
            return None;
        }
        Some(MonomialOrder::new(kind))
    }
}

/// A header plus named sections of expressions.
///
/// ```text
/// vars = x y z
/// field = Q(t)
/// order = block
/// [generators]
/// dx - x^2 + t + 2*z
/// ```
///
/// Matrix rows separate their entries with commas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorDocument {
    pub spec: AlgebraSpec,
    pub sections: Vec<(String, Vec<String>)>,
}

const RESERVED: [&str; 2] = ["t", "dt"];

impl OperatorDocument {
    pub fn new(spec: AlgebraSpec) -> Self {
        OperatorDocument {
            spec,
            sections: Vec::new(),
        }
    }

    pub fn section(&self, name: &str) -> Option<&[String]> {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn push_section(&mut self, name: &str, lines: Vec<String>) {
        self.sections.push((name.to_string(), lines));
    }

    /// Parses a document; the header is validated, expressions are kept as text.
    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Option<Vec<String>> = None;
        let mut field = FieldSpec::Q;
        let mut rank = 1usize;
        let mut order_src: Option<(usize, String)> = None;
        let mut components = ComponentRule::default();
        let mut dt = false;
        let mut sections: Vec<(String, Vec<String>)> = Vec::new();
        let mut offset = 0usize;
        for raw in text.split_inclusive('\n') {
            let line_start = offset;
            offset += raw.len();
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::Parse {
                pos: line_start,
                msg,
            };
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                sections.push((name.trim().to_string(), Vec::new()));
                continue;
            }
            if let Some((_, body)) = sections.last_mut() {
                body.push(line.to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected 'key = value', got '{line}'")))?;
            let value = value.trim();
            match key.trim() {
                "vars" => {
                    let v: Vec<String> = value.split_whitespace().map(String::from).collect();
                    for name in &v {
                        let ok = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                            && !RESERVED.contains(&name.as_str())
                            && !name.starts_with('d')
                            && !(name.starts_with('e') && name[1..].parse::<usize>().is_ok());
                        if !ok {
                            return Err(bad(format!("invalid variable name '{name}'")));
                        }
                    }
                    names = Some(v);
                }
                "field" => {
                    field = FieldSpec::parse(value)
                        .ok_or_else(|| bad(format!("unknown field '{value}'")))?
                }
                "rank" => {
                    rank = value
                        .parse()
                        .ok()
                        .filter(|&r: &usize| r > 0)
                        .ok_or_else(|| bad(format!("invalid rank '{value}'")))?
                }
                "order" => order_src = Some((line_start, value.to_string())),
                "components" => {
                    components = match value {
                        "top" => ComponentRule::TermOverPosition,
                        "pot" => ComponentRule::PositionOverTerm,
                        _ => return Err(bad(format!("unknown component rule '{value}'"))),
                    }
                }
                "dt" => {
                    dt = match value {
                        "yes" | "true" => true,
                        "no" | "false" => false,
                        _ => return Err(bad(format!("invalid dt flag '{value}'"))),
                    }
                }
                other => return Err(bad(format!("unknown header key '{other}'"))),
            }
        }
        let names = names.unwrap_or_default();
        let mut spec = AlgebraSpec {
            names,
            field,
            rank,
            order: MonomialOrder::block(),
            dt,
        };
        if let Some((pos, src)) = order_src {
            spec.order = spec.parse_order(&src).ok_or(Error::Parse {
                pos,
                msg: format!("invalid order '{src}'"),
            })?;
        }
        spec.order.components = components;
        if !spec.order.validate(spec.n()) {
            return Err(Error::Parse {
                pos: 0,
                msg: "order does not list every variable".into(),
            });
        }
        if dt && !field.has_parameter() {
            return Err(Error::Parse {
                pos: 0,
                msg: "dt requires a field containing t".into(),
            });
        }
        let doc = OperatorDocument { spec, sections };
        doc.validate()?;
        Ok(doc)
    }

    /// Checks every expression against the header.
    pub fn validate(&self) -> Result<()> {
        match self.spec.field {
            FieldSpec::Q => self.validate_with(Rationals),
            FieldSpec::QT => self.validate_with(qt()),
            FieldSpec::Fp(p) => self.validate_with(PrimeField::new(p)),
            FieldSpec::FpT(p) => self.validate_with(RatFunField::new(PrimeField::new(p))),
        }
    }

    fn validate_with<K: Field>(&self, k: K) -> Result<()> {
        let alg = self.spec.algebra(k)?;
        for (name, _) in &self.sections {
            self.rows(&alg, name)?;
        }
        Ok(())
    }

    /// Parses a section as a list of expressions (one per line).
    pub fn operators<K: Field>(&self, alg: &WeylAlgebra<K>, name: &str) -> Result<Vec<Op<K>>> {
        Ok(self.rows(alg, name)?.into_iter().flatten().collect())
    }

    /// Parses a section as rows of comma-separated expressions.
    pub fn rows<K: Field>(&self, alg: &WeylAlgebra<K>, name: &str) -> Result<Vec<Vec<Op<K>>>> {
        let lines = self
            .section(name)
            .ok_or_else(|| Error::Invalid(format!("missing section [{name}]")))?;
        lines
            .iter()
            .map(|l| {
                l.split(',')
                    .map(|e| parse_operator(alg, &self.spec.names, e))
                    .collect()
            })
            .collect()
    }

    /// Renders the document in canonical form.
    pub fn to_text(&self) -> String {
        let s = &self.spec;
        let mut out = String::new();
        out.push_str(&format!("vars = {}\n", s.names.join(" ")));
        out.push_str(&format!("field = {}\n", s.field.text()));
        out.push_str(&format!("rank = {}\n", s.rank));
        out.push_str(&format!("order = {}\n", s.order_text()));
        if s.order.components == ComponentRule::PositionOverTerm {
            out.push_str("components = pot\n");
        }
        if s.dt {
            out.push_str("dt = yes\n");
        }
        for (name, lines) in &self.sections {
            out.push_str(&format!("[{name}]\n"));
            for l in lines {
                out.push_str(l);
                out.push('\n');
            }
        }
        out
    }

    /// Adds a section holding printed operators.
    pub fn push_operators<K: Field>(&mut self, alg: &WeylAlgebra<K>, name: &str, ops: &[Op<K>]) {
        let lines = ops
            .iter()
            .map(|o| print_operator(alg, &self.spec.names, o))
            .collect();
        self.push_section(name, lines);
    }
}
