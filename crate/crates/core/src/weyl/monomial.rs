use smallvec::SmallVec;

pub type Exps = SmallVec<[u16; 16]>;

/// `x^α ∂^β [∂_t^k] e_c`, with exponents laid out as
/// `[α₁..αₙ, β₁..βₙ]` followed by `k` when the algebra has `∂_t`.
/// Components are 0-based; scalar operators use component 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Exps,
    comp: u16,
}

impl Monomial {
    pub fn one(n: usize, dt: bool) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, 2 * n + dt as usize),
            comp: 0,
        }
    }

    pub fn from_parts(alpha: &[u16], beta: &[u16], dt: Option<u16>, comp: usize) -> Self {
        assert_eq!(alpha.len(), beta.len());
        let mut exps: Exps = alpha.iter().chain(beta).copied().collect();
        if let Some(k) = dt {
            exps.push(k);
        }
        Monomial {
            exps,
            comp: comp as u16,
        }
    }

    pub fn from_exps(exps: Exps, comp: usize) -> Self {
        Monomial {
            exps,
            comp: comp as u16,
        }
    }

    /// Number of x-variables.
    pub fn n(&self) -> usize {
        self.exps.len() / 2
    }

    pub fn has_dt(&self) -> bool {
        self.exps.len() % 2 == 1
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn alpha(&self) -> &[u16] {
        &self.exps[..self.n()]
    }

    pub fn beta(&self) -> &[u16] {
        let n = self.n();
        &self.exps[n..2 * n]
    }

    /// Exponent of `∂_t` (0 when absent).
    pub fn dt(&self) -> u16 {
        if self.has_dt() {
            self.exps[self.exps.len() - 1]
        } else {
            0
        }
    }

    pub fn comp(&self) -> usize {
        self.comp as usize
    }

    pub fn with_comp(&self, comp: usize) -> Self {
        Monomial {
            exps: self.exps.clone(),
            comp: comp as u16,
        }
    }

    /// `|α| + |β|` (the ∂_t exponent is not counted).
    pub fn degree(&self) -> u32 {
        self.exps[..2 * self.n()].iter().map(|&e| e as u32).sum()
    }

    pub fn is_d_free(&self) -> bool {
        self.beta().iter().all(|&b| b == 0) && self.dt() == 0
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Exponent-wise product; components add (one side must be 0).
    pub fn mul_shadow(&self, o: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&o.exps)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
            comp: self.comp + o.comp,
        }
    }

    /// Whether `self` divides `o` in the commutative shadow, same component.
    pub fn divides(&self, o: &Monomial) -> bool {
        self.comp == o.comp && self.exps.iter().zip(&o.exps).all(|(a, b)| a <= b)
    }

    /// `o / self` in the shadow, as a scalar (component 0) monomial.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        debug_assert!(self.divides(o));
        Monomial {
            exps: o.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
            comp: 0,
        }
    }

    /// Least common multiple of the shadows (components must agree).
    pub fn lcm(&self, o: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&o.exps).map(|(a, b)| *a.max(b)).collect(),
            comp: self.comp,
        }
    }

    /// Multiplies the x-part by `x^γ`.
    pub fn shift_x(&self, gamma: &[u16]) -> Monomial {
        let mut m = self.clone();
        for (i, g) in gamma.iter().enumerate() {
            m.exps[i] += g;
        }
        m
    }
}
