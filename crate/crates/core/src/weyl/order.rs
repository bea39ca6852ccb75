use std::cmp::Ordering;

use super::monomial::Monomial;

/// The term part of a monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderKind {
    /// Grevlex on `x₁ > … > xₙ > ∂₁ > … > ∂ₙ`.
    Grevlex,
    /// Grevlex on the x-part, ties broken by grevlex on the ∂-part.
    Block,
    /// Lex along a variable sequence (indices into `[x₁..xₙ, ∂₁..∂ₙ]`,
    /// largest first). Must list every variable.
    Lex(Vec<usize>),
    /// Nonnegative weights on `[x₁..xₙ, ∂₁..∂ₙ]`, ties broken by grevlex.
    Weight(Vec<u32>),
}

/// How components are compared; `e₁ ≻ e₂ ≻ …` in both cases.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ComponentRule {
    #[default]
    TermOverPosition,
    PositionOverTerm,
}

/// A monomial order on `W_x^r` (or `W_{t,x}^r`, where `∂_t` is always
/// eliminated first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub components: ComponentRule,
}

fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    pub fn new(kind: OrderKind) -> Self {
        MonomialOrder {
            kind,
            components: ComponentRule::default(),
        }
    }

    pub fn grevlex() -> Self {
        Self::new(OrderKind::Grevlex)
    }

    pub fn block() -> Self {
        Self::new(OrderKind::Block)
    }

    pub fn lex(seq: Vec<usize>) -> Self {
        Self::new(OrderKind::Lex(seq))
    }

    pub fn weight(w: Vec<u32>) -> Self {
        Self::new(OrderKind::Weight(w))
    }

    pub fn with_components(mut self, rule: ComponentRule) -> Self {
        self.components = rule;
        self
    }

    fn cmp_terms(&self, a: &[u16], b: &[u16]) -> Ordering {
        let n = a.len() / 2;
        match &self.kind {
            OrderKind::Grevlex => grevlex(&a[..2 * n], &b[..2 * n]),
            OrderKind::Block => grevlex(&a[..n], &b[..n])
                .then_with(|| grevlex(&a[n..2 * n], &b[n..2 * n])),
            OrderKind::Lex(seq) => {
                for &i in seq {
                    match a[i].cmp(&b[i]) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::Weight(w) => {
                let wa: u64 = a.iter().zip(w).map(|(&e, &c)| e as u64 * c as u64).sum();
                let wb: u64 = b.iter().zip(w).map(|(&e, &c)| e as u64 * c as u64).sum();
                wa.cmp(&wb).then_with(|| grevlex(&a[..2 * n], &b[..2 * n]))
            }
        }
    }

    /// Total order on monomials of the same layout.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let term = || {
            a.dt()
                .cmp(&b.dt())
                .then_with(|| self.cmp_terms(a.exps(), b.exps()))
        };
        // Smaller component index is larger.
        let pos = || b.comp().cmp(&a.comp());
        match self.components {
            ComponentRule::TermOverPosition => term().then_with(pos),
            ComponentRule::PositionOverTerm => pos().then_with(term),
        }
    }

    /// Whether `{α : x^α γ ≼ η}` is finite for all γ, η, for `n` variables.
    pub fn satisfies_finiteness(&self, n: usize) -> bool {
        match &self.kind {
            OrderKind::Grevlex | OrderKind::Block => true,
            OrderKind::Weight(w) => w.len() == 2 * n && w[..n].iter().all(|&c| c > 0),
            // Lex bounds x^α below η only when a single x leads everything.
            OrderKind::Lex(seq) => n == 1 && seq.first() == Some(&0),
        }
    }

    /// Checks that the order is well-formed for `n` variables.
    pub fn validate(&self, n: usize) -> bool {
        match &self.kind {
            OrderKind::Grevlex | OrderKind::Block => true,
            OrderKind::Lex(seq) => {
                let mut s = seq.clone();
                s.sort_unstable();
                s == (0..2 * n).collect::<Vec<_>>()
            }
            OrderKind::Weight(w) => w.len() == 2 * n,
        }
    }

    /// Largest monomial of degree `s` (no `∂_t`) in a rank-`r` module.
    pub fn largest_of_degree(&self, n: usize, r: usize, s: u32) -> Monomial {
        assert!(r >= 1);
        let closed = match &self.kind {
            OrderKind::Grevlex | OrderKind::Block if n > 0 => Some(0),
            OrderKind::Lex(seq) => seq.first().copied(),
            _ => None,
        };
        if let Some(v) = closed {
            let mut m = Monomial::one(n, false);
            let mut e = m.exps().to_vec();
            if !e.is_empty() {
                e[v] = s as u16;
            }
            m = Monomial::from_exps(e.into_iter().collect(), 0);
            return m;
        }
        let mut best: Option<Monomial> = None;
        for e in compositions(2 * n, s) {
            for c in 0..r {
                let m = Monomial::from_exps(e.iter().copied().collect(), c);
                if best.as_ref().is_none_or(|b| self.cmp(&m, b) == Ordering::Greater) {
                    best = Some(m);
                }
            }
        }
        best.unwrap_or_else(|| Monomial::one(n, false))
    }
}

/// All exponent vectors of length `len` summing to `s`.
pub fn compositions(len: usize, s: u32) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; len];
    fn rec(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if i + 1 >= cur.len() {
            if let Some(last) = cur.last_mut() {
                *last = left as u16;
                out.push(cur.clone());
            } else if left == 0 {
                out.push(Vec::new());
            }
            return;
        }
        for v in 0..=left {
            cur[i] = v as u16;
            rec(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, s, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: &[u16], b: &[u16]) -> Monomial {
        Monomial::from_parts(a, b, None, 0)
    }

    #[test]
    fn grevlex_examples() {
        let o = MonomialOrder::grevlex();
        assert_eq!(o.cmp(&m(&[2, 0], &[0, 0]), &m(&[1, 1], &[0, 0])), Ordering::Greater);
        let x = m(&[1, 0], &[0, 0]);
        assert_eq!(o.cmp(&x, &x), Ordering::Equal);
    }

    #[test]
    fn block_example() {
        let o = MonomialOrder::block();
        // y∂z ≺ z² under grevlex(x,y,z) > grevlex(∂).
        assert_eq!(o.cmp(&m(&[0, 1, 0], &[0, 0, 1]), &m(&[0, 0, 2], &[0, 0, 0])), Ordering::Less);
    }

    #[test]
    fn finiteness_flags() {
        assert!(MonomialOrder::grevlex().satisfies_finiteness(3));
        assert!(MonomialOrder::block().satisfies_finiteness(3));
        assert!(!MonomialOrder::lex(vec![0, 1, 2, 3]).satisfies_finiteness(2));
        assert!(MonomialOrder::lex(vec![0, 1]).satisfies_finiteness(1));
        assert!(!MonomialOrder::lex(vec![1, 0]).satisfies_finiteness(1));
    }

    #[test]
    fn largest_by_scan_matches_closed_form() {
        let o = MonomialOrder::weight(vec![1, 1, 1, 1]);
        let top = o.largest_of_degree(2, 2, 3);
        assert_eq!(top, m(&[3, 0], &[0, 0]));
        assert_eq!(MonomialOrder::block().largest_of_degree(2, 2, 3), top);
        assert_eq!(compositions(3, 2).len(), 6);
    }
}
