//! Independent check for the Griffiths–Dwork case `S = ⟨∂_i − ∂f/∂x_i⟩`:
//! the irreducible monomials are the standard monomials of the Jacobian ideal.

use num_rational::BigRational;
use num_traits::One;

use crate::arith::{grevlex, CommPoly};
use crate::error::{Error, Result};
use crate::weyl::compositions;

fn lead(p: &CommPoly) -> (Vec<u32>, BigRational) {
    let (e, c) = p.leading_grevlex().expect("nonzero polynomial");
    (e.clone(), c.clone())
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn reduce(p: &CommPoly, basis: &[CommPoly]) -> CommPoly {
    let n = p.nvars();
    let mut rem = CommPoly::zero(n);
    let mut cur = p.clone();
    while !cur.is_zero() {
        let (e, c) = lead(&cur);
        match basis.iter().find(|g| divides(&lead(g).0, &e)) {
            Some(g) => {
                let (ge, gc) = lead(g);
                let q: Vec<u32> = e.iter().zip(&ge).map(|(a, b)| a - b).collect();
                cur = cur.sub(&CommPoly::term(n, q, c / gc).mul(g));
            }
            None => {
                let t = CommPoly::term(n, e, c);
                rem = rem.add(&t);
                cur = cur.sub(&t);
            }
        }
    }
    rem
}

/// Reduced Gröbner basis over ℚ under grevlex (first variable largest).
pub fn commutative_groebner(gens: &[CommPoly]) -> Vec<CommPoly> {
    let mut basis: Vec<CommPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    while let Some((i, j)) = pairs.pop() {
        let (ei, ci) = lead(&basis[i]);
        let (ej, cj) = lead(&basis[j]);
        // Coprime leading terms give a zero S-polynomial remainder.
        if ei.iter().zip(&ej).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let n = ei.len();
        let l: Vec<u32> = ei.iter().zip(&ej).map(|(a, b)| *a.max(b)).collect();
        let mi: Vec<u32> = l.iter().zip(&ei).map(|(a, b)| a - b).collect();
        let mj: Vec<u32> = l.iter().zip(&ej).map(|(a, b)| a - b).collect();
        let s = CommPoly::term(n, mi, BigRational::one() / ci)
            .mul(&basis[i])
            .sub(&CommPoly::term(n, mj, BigRational::one() / cj).mul(&basis[j]));
        let r = reduce(&s, &basis);
        if !r.is_zero() {
            let k = basis.len();
            pairs.extend((0..k).map(|i| (i, k)));
            basis.push(r);
        }
    }
    // Minimalize, then tail-reduce and normalize.
    let mut minimal: Vec<CommPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let e = lead(g).0;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let f = lead(h).0;
            j != i && divides(&f, &e) && (f != e || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out: Vec<CommPoly> = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<CommPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let (e, c) = lead(&minimal[i]);
        let head = CommPoly::term(e.len(), e, c.clone());
        let tail = reduce(&minimal[i].sub(&head), &others);
        out.push(head.add(&tail).scale(&(BigRational::one() / c)));
    }
    out.sort_by(|a, b| grevlex(&lead(a).0, &lead(b).0));
    out
}

/// Standard monomials of the Jacobian ideal of `f` up to a degree cap.
#[derive(Clone, Debug)]
pub struct GdOracle {
    pub basis: Vec<CommPoly>,
    pub leading: Vec<Vec<u32>>,
    pub cap: u32,
}

impl GdOracle {
    pub fn is_standard(&self, exps: &[u32]) -> bool {
        !self.leading.iter().any(|l| divides(l, exps))
    }

    /// Ascending under grevlex.
    pub fn standard_monomials(&self, n: usize) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = (0..=self.cap)
            .flat_map(|d| compositions(n, d))
            .map(|c| c.into_iter().map(u32::from).collect::<Vec<u32>>())
            .filter(|e| self.is_standard(e))
            .collect();
        out.sort_by(|a, b| grevlex(a, b));
        out
    }
}

/// Fails unless `f` is homogeneous.
pub fn gd_irreducibility_oracle(f: &CommPoly, cap: u32) -> Result<GdOracle> {
    if !f.is_homogeneous() {
        return Err(Error::Invalid("f must be homogeneous".into()));
    }
    let n = f.nvars();
    let jac: Vec<CommPoly> = (0..n).map(|i| f.partial(i)).collect();
    let basis = commutative_groebner(&jac);
    let leading = basis.iter().map(|g| lead(g).0).collect();
    Ok(GdOracle { basis, leading, cap })
}
