use crate::arith::{Field, RatFun, UniPoly};

/// Incremental search for the first linear dependency among vectors over
/// `F(t)`. Vectors are cleared of denominators and eliminated fraction-free
/// over `F[t]`, each row carrying its combination of the inputs; rows are
/// divided by their content after every step.
#[derive(Clone, Debug)]
pub struct RelationSearch<F: Field> {
    field: F,
    rows: Vec<Row<F::Elem>>,
    pushed: usize,
}

#[derive(Clone, Debug)]
struct Row<E> {
    pivot: usize,
    vec: Vec<UniPoly<E>>,
    combo: Vec<UniPoly<E>>,
}

impl<F: Field> RelationSearch<F> {
    pub fn new(field: F) -> Self {
        RelationSearch {
            field,
            rows: Vec::new(),
            pushed: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.pushed
    }

    pub fn is_empty(&self) -> bool {
        self.pushed == 0
    }

    /// Adds `g_N`; returns `(c_0, …, c_N)` with `Σ c_i g_i = 0` if `g_N`
    /// depends on the earlier vectors, normalized by [`normalize_relation`].
    pub fn push(&mut self, v: &[RatFun<F::Elem>]) -> Option<Vec<UniPoly<F::Elem>>> {
        let k = &self.field;
        let n = self.pushed;
        self.pushed += 1;
        let mut l = UniPoly::one(k);
        for x in v {
            let g = l.gcd(k, x.den());
            l = l.mul(k, &x.den().exact_div(k, &g));
        }
        let mut w: Vec<UniPoly<F::Elem>> = v
            .iter()
            .map(|x| x.num().mul(k, &l.exact_div(k, x.den())))
            .collect();
        let mut combo = vec![UniPoly::zero(); n + 1];
        combo[n] = l;
        for r in &self.rows {
            let a = w[r.pivot].clone();
            if a.is_zero() {
                continue;
            }
            let p = &r.vec[r.pivot];
            for (x, y) in w.iter_mut().zip(&r.vec) {
                *x = x.mul(k, p).sub(k, &y.mul(k, &a));
            }
            for (i, x) in combo.iter_mut().enumerate() {
                let y = r.combo.get(i).cloned().unwrap_or_else(UniPoly::zero);
                *x = x.mul(k, p).sub(k, &y.mul(k, &a));
            }
            strip_content(k, &mut w, &mut combo);
        }
        match w.iter().position(|x| !x.is_zero()) {
            None => Some(normalize_relation(k, &combo)),
            Some(pivot) => {
                self.rows.push(Row {
                    pivot,
                    vec: w,
                    combo,
                });
                None
            }
        }
    }
}

fn strip_content<F: Field>(k: &F, a: &mut [UniPoly<F::Elem>], b: &mut [UniPoly<F::Elem>]) {
    let mut g = UniPoly::zero();
    for x in a.iter().chain(b.iter()) {
        if !x.is_zero() {
            g = g.gcd(k, x);
            if g.is_constant() {
                return;
            }
        }
    }
    if g.is_zero() {
        return;
    }
    for x in a.iter_mut().chain(b.iter_mut()) {
        *x = x.exact_div(k, &g);
    }
}

/// Scales a polynomial relation so that its entries have no common factor and
/// the last one is monic.
pub fn normalize_relation<F: Field>(k: &F, c: &[UniPoly<F::Elem>]) -> Vec<UniPoly<F::Elem>> {
    let mut g = UniPoly::zero();
    for x in c {
        g = g.gcd(k, x);
    }
    let last = c.iter().rposition(|x| !x.is_zero()).expect("nonzero relation");
    let c = &c[..=last];
    let lc = c[last].exact_div(k, &g).lc().cloned().unwrap();
    let inv = k.inv(&lc).unwrap();
    c.iter().map(|x| x.exact_div(k, &g).scale(k, &inv)).collect()
}

/// First dependency among `vectors`, as normalized polynomial coefficients.
pub fn relation_search<F: Field>(field: F, vectors: &[Vec<RatFun<F::Elem>>]) -> Option<Vec<UniPoly<F::Elem>>> {
    let mut s = RelationSearch::new(field);
    vectors.iter().find_map(|v| s.push(v))
}
