//! Ordinary differential equations for generating functions of k-regular
//! graphs, through the scalar product `⟨e^f, e^{tg}⟩` of symmetric functions.
//!
//! Variables `p_1..p_k` are the Weyl variables `x_1..x_k`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{qt, CommPoly, Field, QT};
use crate::error::{Error, Result};
use crate::telescoping::{DerivedPresentation, Telescoper};
use crate::weyl::{MonomialOrder, Op, WeylAlgebra};

/// Largest vertex count accepted by [`count_regular_graphs`].
pub const MAX_COUNT_VERTICES: usize = 20;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

/// Exponent vectors `r` with `Σ i·r_i = k`, i.e. partitions of `k`.
fn partitions(k: usize) -> Vec<Vec<u32>> {
    fn go(part: usize, rest: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if part == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for m in 0..=rest / part {
            cur[part - 1] = m as u32;
            go(part - 1, rest - m * part, cur, out);
        }
        cur[part - 1] = 0;
    }
    let mut out = Vec::new();
    go(k, k, &mut vec![0; k], &mut out);
    out
}

/// `z_r = Π r_i!·i^{r_i}`.
pub fn z_factor(r: &[u32]) -> BigInt {
    r.iter()
        .enumerate()
        .map(|(i, &m)| factorial(m) * BigInt::from(i + 1).pow(m))
        .product()
}

/// `(f, g)` for loopless simple graphs with all degrees equal to `k`.
pub fn model_polynomials(k: usize) -> Result<(CommPoly, CommPoly)> {
    if k < 2 {
        return Err(Error::Invalid(format!("k must be at least 2, got {k}")));
    }
    let p = |i: usize| CommPoly::var(k, i - 1);
    let mut f = CommPoly::zero(k);
    for d in 1..=k {
        let sign = if d % 2 == 1 { 1 } else { -1 };
        let mut part = p(d).pow(2);
        if 2 * d <= k {
            part = part.sub(&p(2 * d));
        }
        f = f.add(&part.scale(&rat(sign, 2 * d as i64)));
    }
    let mut g = CommPoly::zero(k);
    for r in partitions(k) {
        let z = BigRational::from_integer(z_factor(&r));
        g = g.add(&CommPoly::term(k, r, BigRational::one() / z));
    }
    Ok((f, g))
}

/// `(f, g)` together with `g̃` and the operators `u_j = ∂f/∂p_j − ∂_j`.
#[derive(Clone, Debug)]
pub struct ScalarProductInput {
    pub f: CommPoly,
    pub g: CommPoly,
    pub g_tilde: CommPoly,
    pub u: Vec<Op<QT>>,
    alg: WeylAlgebra<QT>,
}

/// Evaluates a commutative polynomial at pairwise commuting operators.
pub fn eval_at_operators<K: Field>(alg: &WeylAlgebra<K>, p: &CommPoly, ops: &[Op<K>]) -> Op<K> {
    let k = alg.field();
    let mut powers: Vec<Vec<Op<K>>> = ops.iter().map(|_| vec![alg.one()]).collect();
    let mut acc: Op<K> = crate::weyl::WeylOperator::zero();
    for (e, c) in p.terms() {
        let mut m = alg.constant(k.from_rational(c).expect("rational coefficient"));
        for (j, &d) in e.iter().enumerate() {
            while powers[j].len() <= d as usize {
                let next = alg.mul(powers[j].last().unwrap(), &ops[j]);
                powers[j].push(next);
            }
            if d > 0 {
                m = alg.mul(&m, &powers[j][d as usize]);
            }
        }
        acc = alg.add(&acc, &m);
    }
    acc
}

fn commpoly_to_operator<K: Field>(alg: &WeylAlgebra<K>, p: &CommPoly) -> Op<K> {
    let xs: Vec<Op<K>> = (0..alg.n()).map(|i| alg.x(i)).collect();
    eval_at_operators(alg, p, &xs)
}

impl ScalarProductInput {
    /// Checks that the `u_j` commute pairwise.
    pub fn new(f: CommPoly, g: CommPoly) -> Result<Self> {
        let k = f.nvars();
        if g.nvars() != k {
            return Err(Error::Mismatch(format!("f has {k} variables, g has {}", g.nvars())));
        }
        let alg = WeylAlgebra::new(qt(), k, 1, MonomialOrder::grevlex())?;
        let scales: Vec<BigRational> = (1..=k).map(|i| BigRational::from_integer(BigInt::from(i))).collect();
        let g_tilde = g.scale_vars(&scales);
        let u: Vec<Op<QT>> = (0..k)
            .map(|j| alg.sub(&commpoly_to_operator(&alg, &f.partial(j)), &alg.d(j)))
            .collect();
        for i in 0..k {
            for j in i + 1..k {
                if !alg.commutator(&u[i], &u[j]).is_zero() {
                    return Err(Error::Invalid(format!("u_{} and u_{} do not commute", i + 1, j + 1)));
                }
            }
        }
        Ok(ScalarProductInput { f, g, g_tilde, u, alg })
    }

    pub fn model(k: usize) -> Result<Self> {
        let (f, g) = model_polynomials(k)?;
        Self::new(f, g)
    }

    pub fn k(&self) -> usize {
        self.f.nvars()
    }

    /// `W_p(t)` under grevlex.
    pub fn algebra(&self) -> &WeylAlgebra<QT> {
        &self.alg
    }

    /// `p_i − t·∂g̃/∂X_i(u)` for `i = 1..k`.
    pub fn build_ideal(&self) -> Vec<Op<QT>> {
        let alg = &self.alg;
        let t = alg.constant(alg.field().parameter().unwrap());
        (0..self.k())
            .map(|i| {
                let d = eval_at_operators(alg, &self.g_tilde.partial(i), &self.u);
                alg.sub(&alg.x(i), &alg.mul(&t, &d))
            })
            .collect()
    }

    /// `Λ = g̃(u)`, so that `L(a) = a·Λ`.
    pub fn derivation_l(&self) -> Op<QT> {
        eval_at_operators(&self.alg, &self.g_tilde, &self.u)
    }

    /// The presentation fed to the telescoping algorithms, with integrand 1.
    pub fn presentation(&self) -> Result<DerivedPresentation<QT>> {
        DerivedPresentation::new(
            self.alg.clone(),
            self.build_ideal(),
            vec![vec![self.derivation_l()]],
            self.alg.one(),
        )
    }
}

/// Splits `p` by weighted degree under `p_i ↦ i`.
fn weighted_components(p: &CommPoly) -> BTreeMap<u32, Vec<(Vec<u32>, BigRational)>> {
    let mut out: BTreeMap<u32, Vec<(Vec<u32>, BigRational)>> = BTreeMap::new();
    for (e, c) in p.terms() {
        out.entry(weight(e)).or_default().push((e.clone(), c.clone()));
    }
    out
}

fn weight(e: &[u32]) -> u32 {
    e.iter().enumerate().map(|(i, &d)| (i as u32 + 1) * d).sum()
}

/// Coefficients of `t^0..t^N` in `⟨e^f, e^{tg}⟩`.
///
/// `e^f` is expanded one weighted-homogeneous component at a time through
/// `n·E_n = Σ_m m·f_m·E_{n−m}`, which follows from applying the weighted
/// Euler operator to `E = e^f`. Only components up to the largest weight
/// occurring in `g^N` are needed since the pairing matches monomials exactly.
pub fn scalar_product_series(f: &CommPoly, g: &CommPoly, n: usize) -> Result<Vec<BigRational>> {
    let nv = f.nvars();
    if g.nvars() != nv {
        return Err(Error::Mismatch("f and g have different variable counts".into()));
    }
    if !f.coeff(&vec![0; nv]).is_zero() {
        return Err(Error::Invalid("f must have no constant term".into()));
    }
    let gw = g.terms().map(|(e, _)| weight(e)).max().unwrap_or(0);
    let max = gw * n as u32;
    let fc = weighted_components(f);

    let mut e_parts: Vec<HashMap<Vec<u32>, BigRational>> = Vec::with_capacity(max as usize + 1);
    let mut one = HashMap::new();
    one.insert(vec![0; nv], BigRational::one());
    e_parts.push(one);
    for deg in 1..=max {
        let mut acc: HashMap<Vec<u32>, BigRational> = HashMap::new();
        for (&m, terms) in fc.range(1..=deg) {
            let scale = BigRational::from_integer(BigInt::from(m));
            for (e1, c1) in terms {
                let c1 = c1 * &scale;
                for (e2, c2) in &e_parts[(deg - m) as usize] {
                    let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                    *acc.entry(e).or_insert_with(BigRational::zero) += &c1 * c2;
                }
            }
        }
        let inv = BigRational::new(BigInt::one(), BigInt::from(deg));
        acc.retain(|_, v| !v.is_zero());
        for v in acc.values_mut() {
            *v *= &inv;
        }
        e_parts.push(acc);
    }

    let mut out = Vec::with_capacity(n + 1);
    let mut gj = CommPoly::constant(nv, BigRational::one());
    for j in 0..=n {
        if j > 0 {
            gj = gj.mul(g);
        }
        let mut s = BigRational::zero();
        for (e, c) in gj.terms() {
            if let Some(a) = e_parts.get(weight(e) as usize).and_then(|part| part.get(e)) {
                s += a * c * BigRational::from_integer(z_factor(e));
            }
        }
        out.push(s / BigRational::from_integer(factorial(j as u32)));
    }
    Ok(out)
}

/// Number of labeled simple loopless graphs on `n` vertices with all degrees
/// equal to `k`.
///
/// Vertices are completed in order: vertex `v` picks its missing neighbours
/// among later vertices with residual degree left. Partial states are
/// memoized on the residual degrees of the vertices not yet completed.
pub fn count_regular_graphs(k: usize, n: usize) -> Result<u128> {
    if n > MAX_COUNT_VERTICES {
        return Err(Error::BudgetExhausted(format!(
            "counting is limited to {MAX_COUNT_VERTICES} vertices"
        )));
    }
    if (k * n) % 2 == 1 || (n > 0 && k >= n) {
        return Ok(u128::from(k == 0));
    }
    let mut memo: HashMap<Vec<u8>, u128> = HashMap::new();
    Ok(count_from(&vec![k as u8; n], &mut memo))
}

fn count_from(res: &[u8], memo: &mut HashMap<Vec<u8>, u128>) -> u128 {
    let Some((&need, rest)) = res.split_first() else {
        return 1;
    };
    if let Some(&c) = memo.get(res) {
        return c;
    }
    let open: Vec<usize> = (0..rest.len()).filter(|&i| rest[i] > 0).collect();
    let total = if (need as usize) > open.len() {
        0
    } else {
        let mut sum = 0u128;
        let mut pick: Vec<usize> = (0..need as usize).collect();
        loop {
            let mut next = rest.to_vec();
            for &i in &pick {
                next[open[i]] -= 1;
            }
            sum += count_from(&next, memo);
            // next combination of `need` indices among `open`
            let m = open.len();
            let mut i = pick.len();
            loop {
                if i == 0 {
                    memo.insert(res.to_vec(), sum);
                    return sum;
                }
                i -= 1;
                if pick[i] < m - pick.len() + i {
                    pick[i] += 1;
                    for j in i + 1..pick.len() {
                        pick[j] = pick[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    };
    memo.insert(res.to_vec(), total);
    total
}

/// Whether `P` annihilates a truncated series `Σ a_m t^m` on the
/// coefficients the truncation determines, those of `t^0..t^{len−1−order}`.
pub fn verify_ode_on_series(p: &Telescoper, series: &[BigRational]) -> Result<bool> {
    if series.len() <= p.order() {
        return Err(Error::SeriesTooShort(format!(
            "{} coefficients do not determine anything for order {}",
            series.len(),
            p.order()
        )));
    }
    Ok(p.apply_to_series(series).iter().all(|c| c.is_zero()))
}
