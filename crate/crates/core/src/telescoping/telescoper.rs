use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::{PrimeField, Rationals, UniPoly};
use crate::error::{Error, Result};

/// `P = c_0 + c_1 ∂_t + … + c_N ∂_t^N` with `c_i ∈ ℤ[t]`, collectively
/// primitive, and `c_N` with a positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Telescoper {
    /// `coeffs[i]` holds `c_i`, lowest degree first, no trailing zeros.
    coeffs: Vec<Vec<BigInt>>,
}

impl Telescoper {
    /// Normalizes a relation with rational polynomial coefficients.
    pub fn from_rational(c: &[UniPoly<BigRational>]) -> Result<Self> {
        let last = c
            .iter()
            .rposition(|x| !x.is_zero())
            .ok_or(Error::ZeroOperator)?;
        let mut den = BigInt::from(1);
        for x in &c[..=last] {
            for q in x.coeffs() {
                den = den.lcm(q.denom());
            }
        }
        let mut coeffs: Vec<Vec<BigInt>> = c[..=last]
            .iter()
            .map(|x| {
                x.coeffs()
                    .iter()
                    .map(|q| (q * BigRational::from_integer(den.clone())).to_integer())
                    .collect()
            })
            .collect();
        let mut g = BigInt::zero();
        for v in coeffs.iter().flatten() {
            g = g.gcd(v);
        }
        let lead_negative = coeffs[last].last().is_some_and(|x| x.is_negative());
        for v in coeffs.iter_mut().flatten() {
            *v = &*v / &g;
            if lead_negative {
                *v = -&*v;
            }
        }
        Ok(Telescoper { coeffs })
    }

    /// From integer coefficient arrays, normalizing as usual.
    pub fn from_integers(c: Vec<Vec<BigInt>>) -> Result<Self> {
        let q = Rationals;
        let polys: Vec<UniPoly<BigRational>> = c
            .into_iter()
            .map(|v| UniPoly::from_coeffs(&q, v.into_iter().map(BigRational::from_integer).collect()))
            .collect();
        Self::from_rational(&polys)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest t-degree among the coefficients.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().map(|v| v.len().saturating_sub(1)).max().unwrap_or(0)
    }

    pub fn coefficients(&self) -> &[Vec<BigInt>] {
        &self.coeffs
    }

    pub fn coefficient_polys(&self) -> Vec<UniPoly<BigRational>> {
        let q = Rationals;
        self.coeffs
            .iter()
            .map(|v| UniPoly::from_coeffs(&q, v.iter().cloned().map(BigRational::from_integer).collect()))
            .collect()
    }

    /// Image modulo `p` normalized like a per-prime relation (`c_N` monic).
    pub fn reduce_mod(&self, p: u64) -> Option<Vec<UniPoly<u64>>> {
        let k = PrimeField::new(p);
        let polys: Vec<UniPoly<u64>> = self
            .coeffs
            .iter()
            .map(|v| UniPoly::from_coeffs(&k, v.iter().map(|x| k.reduce_bigint(x)).collect()))
            .collect();
        if polys.last()?.degree() != self.coeffs.last()?.len().checked_sub(1) {
            return None;
        }
        Some(super::relation::normalize_relation(&k, &polys))
    }

    /// Text such as `7*dt^2 - t`, highest order first.
    pub fn to_text(&self) -> String {
        let q = Rationals;
        let mut out = String::new();
        for (i, c) in self.coefficient_polys().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let d = match i {
                0 => String::new(),
                1 => "dt".to_string(),
                _ => format!("dt^{i}"),
            };
            let single = c.coeffs().iter().filter(|x| !x.is_zero()).count() == 1;
            let (negative, body) = if single {
                let s = c.to_text(&q, "t");
                match s.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, s),
                }
            } else {
                (false, format!("({})", c.to_text(&q, "t")))
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if d.is_empty() {
                out.push_str(&body);
            } else if body == "1" {
                out.push_str(&d);
            } else {
                out.push_str(&body);
                out.push('*');
                out.push_str(&d);
            }
        }
        out
    }

    /// Human-readable line plus one line of comma-separated integers per
    /// coefficient `c_i`, lowest degree first.
    pub fn to_document(&self) -> String {
        let mut out = format!("telescoper = {}\n[coefficients]\n", self.to_text());
        for c in &self.coeffs {
            if c.is_empty() {
                out.push_str("0\n");
            } else {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                out.push_str(&parts.join(", "));
                out.push('\n');
            }
        }
        out
    }

    /// Reads the `[coefficients]` section written by [`Self::to_document`].
    pub fn from_document(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut inside = false;
        let mut offset = 0;
        for raw in text.split_inclusive('\n') {
            let pos = offset;
            offset += raw.len();
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                inside = line == "[coefficients]";
                continue;
            }
            if !inside {
                continue;
            }
            let row = line
                .split(',')
                .map(|x| x.trim().parse::<BigInt>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    pos,
                    msg: format!("bad coefficient: {e}"),
                })?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse {
                pos: 0,
                msg: "missing [coefficients] section".into(),
            });
        }
        for r in &mut rows {
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        Self::from_integers(rows)
    }

    /// Applies `Σ c_i(t) (d/dt)^i` to a truncated power series `Σ a_m t^m`.
    /// Entries of the result past `len(series) − 1 − order` are not determined
    /// and are omitted.
    pub fn apply_to_series(&self, series: &[BigRational]) -> Vec<BigRational> {
        let n = self.order();
        if series.len() <= n {
            return Vec::new();
        }
        let valid = series.len() - n;
        let mut out = vec![BigRational::zero(); valid];
        let mut deriv: Vec<BigRational> = series.to_vec();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                deriv = deriv
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(m, a)| a * BigRational::from_integer(BigInt::from(m)))
                    .collect();
            }
            for (e, ce) in c.iter().enumerate() {
                if ce.is_zero() {
                    continue;
                }
                for m in e..valid {
                    if let Some(a) = deriv.get(m - e) {
                        out[m] += a * BigRational::from_integer(ce.clone());
                    }
                }
            }
        }
        out
    }
}

impl std::fmt::Display for Telescoper {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}
