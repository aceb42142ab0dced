//! Exact polynomial algebra over Q and F_p.
//!
//! This module is the independent oracle for everything the polyhedral
//! formulas compute: Buchberger Groebner bases with staircase counting for
//! global (torus) root counts, and Mora's tangent-cone algorithm with the
//! local degree ordering for intersection multiplicities at the origin.
//! Everything is exact; the only escape hatch is an explicit step budget so
//! that runaway standard-basis computations report "budget exceeded" instead
//! of hanging.

use num::rational::BigRational;
use num::{BigInt, One, Zero};
use rand::Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("coefficient field mismatch")]
    FieldMismatch,
    #[error("variable count mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("division by zero coefficient")]
    DivisionByZero,
    #[error("computation exceeded the step budget of {0}")]
    BudgetExceeded(u64),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;

/// Coefficient field: the rationals or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Field {
    Q,
    Fp(u64),
}

/// A coefficient in one of the supported fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coef {
    Q(BigRational),
    Fp(u64),
}

impl Field {
    pub fn zero(&self) -> Coef {
        match self {
            Field::Q => Coef::Q(BigRational::zero()),
            Field::Fp(_) => Coef::Fp(0),
        }
    }

    pub fn one(&self) -> Coef {
        match self {
            Field::Q => Coef::Q(BigRational::one()),
            Field::Fp(_) => Coef::Fp(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Coef {
        match self {
            Field::Q => Coef::Q(BigRational::from_integer(BigInt::from(v))),
            Field::Fp(p) => Coef::Fp(v.rem_euclid(*p as i64) as u64),
        }
    }

    pub fn is_zero(&self, c: &Coef) -> bool {
        match c {
            Coef::Q(x) => x.is_zero(),
            Coef::Fp(x) => *x == 0,
        }
    }

    pub fn add(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (Field::Q, Coef::Q(x), Coef::Q(y)) => Coef::Q(x + y),
            (Field::Fp(p), Coef::Fp(x), Coef::Fp(y)) => Coef::Fp((x + y) % p),
            _ => panic!("coefficient/field mismatch"),
        }
    }

    pub fn neg(&self, a: &Coef) -> Coef {
        match (self, a) {
            (Field::Q, Coef::Q(x)) => Coef::Q(-x),
            (Field::Fp(p), Coef::Fp(x)) => Coef::Fp(if *x == 0 { 0 } else { p - x }),
            _ => panic!("coefficient/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Coef, b: &Coef) -> Coef {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (Field::Q, Coef::Q(x), Coef::Q(y)) => Coef::Q(x * y),
            (Field::Fp(p), Coef::Fp(x), Coef::Fp(y)) => {
                Coef::Fp(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("coefficient/field mismatch"),
        }
    }

    pub fn inv(&self, a: &Coef) -> Result<Coef> {
        if self.is_zero(a) {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(match (self, a) {
            (Field::Q, Coef::Q(x)) => Coef::Q(x.recip()),
            (Field::Fp(p), Coef::Fp(x)) => Coef::Fp(pow_mod(*x, p - 2, *p)),
            _ => panic!("coefficient/field mismatch"),
        })
    }

    pub fn div(&self, a: &Coef, b: &Coef) -> Result<Coef> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

fn pow_mod(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    acc as u64
}

pub type Exp = Vec<u32>;

fn total_degree(e: &Exp) -> u64 {
    e.iter().map(|&x| x as u64).sum()
}

fn exp_divides(a: &Exp, b: &Exp) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x <= y)
}

fn exp_sub(a: &Exp, b: &Exp) -> Exp {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

fn exp_add(a: &Exp, b: &Exp) -> Exp {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

fn exp_lcm(a: &Exp, b: &Exp) -> Exp {
    a.iter().zip(b).map(|(&x, &y)| x.max(y)).collect()
}

/// Monomial orders. `GrevLex` is the usual global graded reverse
/// lexicographic order. `LocalDs` is its local counterpart: lower total
/// degree is LARGER (leading terms have minimal degree), ties broken by
/// grevlex, as used by the tangent-cone algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    GrevLex,
    LocalDs,
}

/// Compare exponents; `Greater` means "closer to leading".
pub fn cmp_exp(order: Order, a: &Exp, b: &Exp) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let (da, db) = (total_degree(a), total_degree(b));
    let by_degree = match order {
        Order::GrevLex => da.cmp(&db),
        Order::LocalDs => db.cmp(&da),
    };
    if by_degree != Ordering::Equal {
        return by_degree;
    }
    // Reverse-lex tiebreak: the last non-zero entry of a - b decides;
    // negative means a is larger.
    for i in (0..a.len()).rev() {
        let diff = a[i] as i64 - b[i] as i64;
        if diff != 0 {
            return if diff < 0 { Ordering::Greater } else { Ordering::Less };
        }
    }
    Ordering::Equal
}

/// Sparse multivariate polynomial with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    pub n: usize,
    pub field: Field,
    pub terms: BTreeMap<Exp, Coef>,
}

impl SparsePolynomial {
    pub fn zero(n: usize, field: Field) -> Self {
        SparsePolynomial { n, field, terms: BTreeMap::new() }
    }

    pub fn from_terms(n: usize, field: Field, terms: Vec<(Exp, Coef)>) -> Result<Self> {
        let mut map: BTreeMap<Exp, Coef> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != n {
                return Err(AlgebraError::DimensionMismatch { expected: n, got: e.len() });
            }
            let entry = map.entry(e).or_insert_with(|| field.zero());
            *entry = field.add(entry, &c);
        }
        map.retain(|_, c| !field.is_zero(c));
        Ok(SparsePolynomial { n, field, terms: map })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exponent vectors of the support, as signed vectors for the geometry
    /// layer.
    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as i64).collect()).collect()
    }

    pub fn leading_exp(&self, order: Order) -> Option<&Exp> {
        self.terms
            .keys()
            .max_by(|a, b| cmp_exp(order, a, b))
    }

    pub fn leading_term(&self, order: Order) -> Option<(&Exp, &Coef)> {
        self.leading_exp(order).map(|e| (e, &self.terms[e]))
    }

    /// Max total degree minus total degree of the leading monomial; the
    /// "ecart" steering Mora reductions (zero for homogeneous polynomials).
    pub fn ecart(&self, order: Order) -> u64 {
        let lead = self.leading_exp(order).map(|e| total_degree(e)).unwrap_or(0);
        let max = self.terms.keys().map(total_degree).max().unwrap_or(0);
        max - lead.min(max)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(|| self.field.zero());
            *entry = self.field.add(entry, c);
        }
        terms.retain(|_, c| !self.field.is_zero(c));
        SparsePolynomial { n: self.n, field: self.field, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, c: &Coef) -> Self {
        if self.field.is_zero(c) {
            return SparsePolynomial::zero(self.n, self.field);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, x)| (e.clone(), self.field.mul(x, c)))
            .collect();
        SparsePolynomial { n: self.n, field: self.field, terms }
    }

    /// Multiply by `c * x^e`.
    pub fn mul_term(&self, e: &Exp, c: &Coef) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(a, x)| (exp_add(a, e), self.field.mul(x, c)))
            .filter(|(_, x)| !self.field.is_zero(x))
            .collect();
        SparsePolynomial { n: self.n, field: self.field, terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = SparsePolynomial::zero(self.n, self.field);
        for (e, c) in &other.terms {
            acc = acc.add(&self.mul_term(e, c));
        }
        acc
    }

    /// Formal partial derivative with respect to variable `i`; in positive
    /// characteristic, terms whose exponent is divisible by p drop out.
    pub fn partial(&self, i: usize) -> Self {
        let mut terms: Vec<(Exp, Coef)> = Vec::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            let factor = self.field.from_i64(e[i] as i64);
            let c2 = self.field.mul(c, &factor);
            if !self.field.is_zero(&c2) {
                terms.push((e2, c2));
            }
        }
        SparsePolynomial::from_terms(self.n, self.field, terms).expect("same arity")
    }

    /// Set the variables outside `coords` to zero and renumber the survivors
    /// by `coords` (sorted): the restriction of the polynomial to the
    /// coordinate subspace.
    pub fn restrict(&self, coords: &[usize]) -> Self {
        let terms: Vec<(Exp, Coef)> = self
            .terms
            .iter()
            .filter(|(e, _)| (0..self.n).all(|j| coords.contains(&j) || e[j] == 0))
            .map(|(e, c)| (coords.iter().map(|&j| e[j]).collect(), c.clone()))
            .collect();
        SparsePolynomial::from_terms(coords.len(), self.field, terms).expect("restricted arity")
    }

    /// Terms extremal for a weight: initial form (Min) or leading form (Max).
    pub fn extremal_form(&self, w: &[i64], sense: crate::geometry::Sense) -> Self {
        use crate::geometry::Sense;
        let vals: Vec<i64> = self
            .terms
            .keys()
            .map(|e| e.iter().zip(w).map(|(&x, &c)| x as i64 * c).sum())
            .collect();
        let opt = match sense {
            Sense::Min => vals.iter().min(),
            Sense::Max => vals.iter().max(),
        };
        let Some(&opt) = opt else { return SparsePolynomial::zero(self.n, self.field) };
        let terms = self
            .terms
            .iter()
            .zip(&vals)
            .filter(|&(_, &v)| v == opt)
            .map(|((e, c), _)| (e.clone(), c.clone()))
            .collect();
        SparsePolynomial { n: self.n, field: self.field, terms }
    }

    /// Monic rescale by the leading coefficient.
    pub fn monic(&self, order: Order) -> Result<Self> {
        match self.leading_term(order) {
            None => Ok(self.clone()),
            Some((_, c)) => {
                let inv = self.field.inv(c)?;
                Ok(self.scale(&inv))
            }
        }
    }
}

/// Step budget shared across a basis computation.
pub struct Budget {
    pub limit: u64,
    pub used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(AlgebraError::BudgetExceeded(self.limit));
        }
        Ok(())
    }
}

fn s_poly(f: &SparsePolynomial, g: &SparsePolynomial, order: Order) -> SparsePolynomial {
    let (ef, cf) = f.leading_term(order).expect("non-zero");
    let (eg, cg) = g.leading_term(order).expect("non-zero");
    let l = exp_lcm(ef, eg);
    let field = f.field;
    let a = f.mul_term(&exp_sub(&l, ef), &field.inv(cf).expect("non-zero lead"));
    let b = g.mul_term(&exp_sub(&l, eg), &field.inv(cg).expect("non-zero lead"));
    a.sub(&b)
}

/// Full normal form with respect to `basis` under a global order.
fn reduce_global(
    f: &SparsePolynomial,
    basis: &[SparsePolynomial],
    order: Order,
    budget: &mut Budget,
) -> Result<SparsePolynomial> {
    let field = f.field;
    let mut rem = SparsePolynomial::zero(f.n, field);
    let mut h = f.clone();
    'outer: while let Some((eh, ch)) = h.leading_term(order).map(|(e, c)| (e.clone(), c.clone())) {
        budget.tick()?;
        for g in basis {
            let Some((eg, cg)) = g.leading_term(order) else { continue };
            if exp_divides(eg, &eh) {
                let q = field.div(&ch, cg)?;
                h = h.sub(&g.mul_term(&exp_sub(&eh, eg), &q));
                continue 'outer;
            }
        }
        // Leading term irreducible: move it to the remainder.
        let single = SparsePolynomial::from_terms(f.n, field, vec![(eh.clone(), ch)])?;
        rem = rem.add(&single);
        h = h.sub(&single);
    }
    Ok(rem)
}

/// Buchberger's algorithm with the coprime-leading-term criterion, returning
/// the reduced Groebner basis under grevlex.
pub fn buchberger(polys: &[SparsePolynomial], budget: &mut Budget) -> Result<Vec<SparsePolynomial>> {
    let order = Order::GrevLex;
    let mut basis: Vec<SparsePolynomial> = polys
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| f.monic(order))
        .collect::<Result<_>>()?;
    if basis.is_empty() {
        return Ok(vec![]);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        budget.tick()?;
        let (ei, ej) = (
            basis[i].leading_exp(order).unwrap().clone(),
            basis[j].leading_exp(order).unwrap().clone(),
        );
        if exp_lcm(&ei, &ej) == exp_add(&ei, &ej) {
            continue; // coprime leading terms reduce to zero
        }
        let s = s_poly(&basis[i], &basis[j], order);
        let r = reduce_global(&s, &basis, order, budget)?;
        if !r.is_zero() {
            let r = r.monic(order)?;
            let k = basis.len();
            for t in 0..k {
                pairs.push((t, k));
            }
            basis.push(r);
        }
    }
    // Minimalize: drop members whose lead is divisible by another lead.
    let leads: Vec<Exp> = basis.iter().map(|f| f.leading_exp(order).unwrap().clone()).collect();
    let keep: Vec<bool> = (0..basis.len())
        .map(|i| {
            !(0..basis.len()).any(|j| {
                j != i
                    && exp_divides(&leads[j], &leads[i])
                    && (leads[j] != leads[i] || j < i)
            })
        })
        .collect();
    let minimal: Vec<SparsePolynomial> = basis
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(f, _)| f.clone())
        .collect();
    // Fully reduce each member against the others.
    let mut reduced = Vec::with_capacity(minimal.len());
    for (i, f) in minimal.iter().enumerate() {
        let others: Vec<SparsePolynomial> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let r = reduce_global(f, &others, order, budget)?;
        if !r.is_zero() {
            reduced.push(r.monic(order)?);
        }
    }
    reduced.sort_by(|a, b| {
        cmp_exp(order, a.leading_exp(order).unwrap(), b.leading_exp(order).unwrap())
    });
    Ok(reduced)
}

/// Count monomials outside the staircase of the given leading exponents:
/// the K-dimension of the quotient. `None` when the quotient is
/// infinite-dimensional (some variable has no pure power among the leads).
pub fn staircase_count(leads: &[Exp], n: usize) -> Option<u64> {
    if leads.iter().any(|e| e.iter().all(|&x| x == 0)) {
        return Some(0); // the ideal is the whole ring
    }
    let mut bounds = vec![None::<u32>; n];
    for e in leads {
        let nz: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
        if nz.len() == 1 {
            let i = nz[0];
            bounds[i] = Some(bounds[i].map_or(e[i], |b| b.min(e[i])));
        }
    }
    let bounds: Vec<u32> = bounds.into_iter().collect::<Option<Vec<_>>>()?;
    // Enumerate the box under the pure-power bounds, dropping multiples of
    // any leading exponent.
    let mut count = 0u64;
    let mut cur = vec![0u32; n];
    loop {
        if !leads.iter().any(|e| exp_divides(e, &cur)) {
            count += 1;
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == n {
                return Some(count);
            }
            cur[i] += 1;
            if cur[i] < bounds[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// K-dimension of `K[x]/I` (roots counted with multiplicity when zero
/// dimensional); `None` if the quotient is infinite-dimensional.
pub fn quotient_dimension(
    polys: &[SparsePolynomial],
    budget: &mut Budget,
) -> Result<Option<u64>> {
    let gb = buchberger(polys, budget)?;
    if gb.is_empty() {
        return Ok(None); // zero ideal
    }
    let n = polys[0].n;
    let leads: Vec<Exp> = gb
        .iter()
        .map(|f| f.leading_exp(Order::GrevLex).unwrap().clone())
        .collect();
    Ok(staircase_count(&leads, n))
}

/// Number of common zeros in the torus `(K*)^n`, counted with multiplicity,
/// via the saturation variable `t * x_1 ... x_n - 1`; `None` if infinite.
pub fn torus_root_count(
    polys: &[SparsePolynomial],
    budget: &mut Budget,
) -> Result<Option<u64>> {
    let Some(first) = polys.first() else { return Ok(None) };
    let n = first.n;
    let field = first.field;
    let mut lifted: Vec<SparsePolynomial> = polys
        .iter()
        .map(|f| {
            let terms = f
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.push(0);
                    (e2, c.clone())
                })
                .collect();
            SparsePolynomial::from_terms(n + 1, field, terms).expect("lift arity")
        })
        .collect();
    let mut all_ones: Exp = vec![1; n];
    all_ones.push(1);
    let sat = SparsePolynomial::from_terms(
        n + 1,
        field,
        vec![(all_ones, field.one()), (vec![0; n + 1], field.from_i64(-1))],
    )?;
    lifted.push(sat);
    quotient_dimension(&lifted, budget)
}

/// Whether the polynomials have a common zero with all coordinates non-zero.
pub fn torus_has_common_zero(
    polys: &[SparsePolynomial],
    budget: &mut Budget,
) -> Result<bool> {
    let nonzero: Vec<SparsePolynomial> =
        polys.iter().filter(|f| !f.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        // No equations at all: the whole torus satisfies the (empty) system.
        return Ok(true);
    }
    match torus_root_count(&nonzero, budget)? {
        None => Ok(true),
        Some(c) => Ok(c > 0),
    }
}

/// Outcome of a local multiplicity computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalMult {
    Finite(u64),
    Infinite,
}

/// Mora normal form under the local order: reductions may recruit earlier
/// partial remainders (when their ecart is smaller) to guarantee
/// termination in the localized ring.
fn mora_normal_form(
    f: &SparsePolynomial,
    basis: &[SparsePolynomial],
    budget: &mut Budget,
) -> Result<SparsePolynomial> {
    let order = Order::LocalDs;
    let field = f.field;
    let mut reducers: Vec<SparsePolynomial> = basis.to_vec();
    let mut h = f.clone();
    loop {
        let Some((eh, ch)) = h.leading_term(order).map(|(e, c)| (e.clone(), c.clone())) else {
            return Ok(h);
        };
        budget.tick()?;
        let candidates: Vec<usize> = reducers
            .iter()
            .enumerate()
            .filter(|(_, g)| {
                g.leading_exp(order).is_some_and(|eg| exp_divides(eg, &eh))
            })
            .map(|(i, _)| i)
            .collect();
        if candidates.is_empty() {
            return Ok(h);
        }
        let &best = candidates
            .iter()
            .min_by_key(|&&i| reducers[i].ecart(order))
            .expect("non-empty");
        if reducers[best].ecart(order) > h.ecart(order) {
            reducers.push(h.clone());
        }
        let g = reducers[best].clone();
        let (eg, cg) = g.leading_term(order).expect("non-zero");
        let q = field.div(&ch, cg)?;
        h = h.sub(&g.mul_term(&exp_sub(&eh, eg), &q));
    }
}

/// Local standard basis under the local order via Mora's algorithm.
pub fn mora_standard_basis(
    polys: &[SparsePolynomial],
    budget: &mut Budget,
) -> Result<Vec<SparsePolynomial>> {
    let order = Order::LocalDs;
    let mut basis: Vec<SparsePolynomial> = polys
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| f.monic(order))
        .collect::<Result<_>>()?;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        budget.tick()?;
        let (ei, ej) = (
            basis[i].leading_exp(order).unwrap().clone(),
            basis[j].leading_exp(order).unwrap().clone(),
        );
        if exp_lcm(&ei, &ej) == exp_add(&ei, &ej) {
            continue;
        }
        let s = s_poly(&basis[i], &basis[j], order);
        let r = mora_normal_form(&s, &basis, budget)?;
        if !r.is_zero() {
            let r = r.monic(order)?;
            let k = basis.len();
            for t in 0..k {
                pairs.push((t, k));
            }
            basis.push(r);
        }
    }
    Ok(basis)
}

/// Multiplicity of the origin as a solution of the system: the K-dimension
/// of the localized quotient, read off the staircase of the local standard
/// basis. `Infinite` when the origin is not isolated.
pub fn local_multiplicity(
    polys: &[SparsePolynomial],
    budget: &mut Budget,
) -> Result<LocalMult> {
    let basis = mora_standard_basis(polys, budget)?;
    if basis.is_empty() {
        return Ok(LocalMult::Infinite); // zero ideal: nothing vanishes
    }
    let n = basis[0].n;
    let leads: Vec<Exp> = basis
        .iter()
        .map(|f| f.leading_exp(Order::LocalDs).unwrap().clone())
        .collect();
    Ok(match staircase_count(&leads, n) {
        Some(c) => LocalMult::Finite(c),
        None => LocalMult::Infinite,
    })
}

/// Sample a system with the given supports and coefficients drawn uniformly
/// from the non-zero elements of the field (rationals use non-zero integers
/// in `[-10^4, 10^4]`). Every support point receives a non-zero coefficient,
/// so the Newton polytopes of the samples are exactly the prescribed hulls.
pub fn sample_with_supports<R: Rng>(
    supports: &[Vec<Vec<i64>>],
    n: usize,
    field: Field,
    rng: &mut R,
) -> Result<Vec<SparsePolynomial>> {
    let mut out = Vec::with_capacity(supports.len());
    for sup in supports {
        let mut terms = Vec::with_capacity(sup.len());
        for pt in sup {
            if pt.len() != n {
                return Err(AlgebraError::DimensionMismatch { expected: n, got: pt.len() });
            }
            let coef = match field {
                Field::Fp(p) => Coef::Fp(rng.gen_range(1..p)),
                Field::Q => {
                    let mut v: i64 = 0;
                    while v == 0 {
                        v = rng.gen_range(-10_000..=10_000);
                    }
                    Coef::Q(BigRational::from_integer(BigInt::from(v)))
                }
            };
            let exp: Exp = pt.iter().map(|&x| x as u32).collect();
            terms.push((exp, coef));
        }
        out.push(SparsePolynomial::from_terms(n, field, terms)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qpoly(n: usize, terms: &[(&[u32], i64)]) -> SparsePolynomial {
        SparsePolynomial::from_terms(
            n,
            Field::Q,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), Field::Q.from_i64(*c)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn grevlex_ordering() {
        use std::cmp::Ordering;
        // x^2 > xy > y^2 > x > y > 1 in grevlex for 2 variables.
        assert_eq!(cmp_exp(Order::GrevLex, &vec![2, 0], &vec![1, 1]), Ordering::Greater);
        assert_eq!(cmp_exp(Order::GrevLex, &vec![1, 1], &vec![0, 2]), Ordering::Greater);
        assert_eq!(cmp_exp(Order::GrevLex, &vec![0, 2], &vec![1, 0]), Ordering::Greater);
        // Local order flips the degree comparison.
        assert_eq!(cmp_exp(Order::LocalDs, &vec![1, 0], &vec![0, 2]), Ordering::Greater);
    }

    #[test]
    fn quotient_dimension_of_pure_powers() {
        let f = qpoly(2, &[(&[2, 0], 1)]);
        let g = qpoly(2, &[(&[0, 3], 1)]);
        let mut b = Budget::new(100_000);
        assert_eq!(quotient_dimension(&[f, g], &mut b).unwrap(), Some(6));
    }

    #[test]
    fn buchberger_finds_hidden_generator() {
        // <x^2 - y, y^2 - x> has quotient dimension 4 (four intersection
        // points of the two parabolas).
        let f = qpoly(2, &[(&[2, 0], 1), (&[0, 1], -1)]);
        let g = qpoly(2, &[(&[0, 2], 1), (&[1, 0], -1)]);
        let mut b = Budget::new(100_000);
        assert_eq!(quotient_dimension(&[f, g], &mut b).unwrap(), Some(4));
    }

    #[test]
    fn torus_membership() {
        let mut b = Budget::new(100_000);
        // x - 1, y - 1 vanish at (1,1) in the torus.
        let f = qpoly(2, &[(&[1, 0], 1), (&[0, 0], -1)]);
        let g = qpoly(2, &[(&[0, 1], 1), (&[0, 0], -1)]);
        assert!(torus_has_common_zero(&[f.clone(), g], &mut b).unwrap());
        // x, y - 1 only vanish on the coordinate hyperplane x = 0.
        let h = qpoly(2, &[(&[1, 0], 1)]);
        let g = qpoly(2, &[(&[0, 1], 1), (&[0, 0], -1)]);
        let mut b = Budget::new(100_000);
        assert!(!torus_has_common_zero(&[h, g], &mut b).unwrap());
    }

    #[test]
    fn torus_count_matches_degree() {
        // x^2 - 1 and y - 1: two torus roots.
        let f = qpoly(2, &[(&[2, 0], 1), (&[0, 0], -1)]);
        let g = qpoly(2, &[(&[0, 1], 1), (&[0, 0], -1)]);
        let mut b = Budget::new(100_000);
        assert_eq!(torus_root_count(&[f, g], &mut b).unwrap(), Some(2));
    }

    #[test]
    fn local_multiplicity_of_cusps() {
        // x^2 - y^3 and y^2 - x^3 meet at the origin with multiplicity 4.
        let f = qpoly(2, &[(&[2, 0], 1), (&[0, 3], -1)]);
        let g = qpoly(2, &[(&[0, 2], 1), (&[3, 0], -1)]);
        let mut b = Budget::new(1_000_000);
        assert_eq!(local_multiplicity(&[f, g], &mut b).unwrap(), LocalMult::Finite(4));
    }

    #[test]
    fn local_multiplicity_sees_only_the_origin() {
        // x(x-1) and y have global dimension 2 but local multiplicity 1.
        let f = qpoly(2, &[(&[2, 0], 1), (&[1, 0], -1)]);
        let g = qpoly(2, &[(&[0, 1], 1)]);
        let mut b = Budget::new(100_000);
        assert_eq!(local_multiplicity(&[f, g], &mut b).unwrap(), LocalMult::Finite(1));
    }

    #[test]
    fn local_multiplicity_detects_non_isolated() {
        // A single equation in two variables never isolates the origin.
        let f = qpoly(2, &[(&[2, 0], 1), (&[0, 3], 5)]);
        let mut b = Budget::new(100_000);
        assert_eq!(local_multiplicity(&[f], &mut b).unwrap(), LocalMult::Infinite);
    }

    #[test]
    fn partial_derivative_respects_characteristic() {
        let f = SparsePolynomial::from_terms(
            1,
            Field::Fp(3),
            vec![(vec![3], Coef::Fp(1)), (vec![1], Coef::Fp(2))],
        )
        .unwrap();
        let d = f.partial(0);
        // d/dx (x^3 + 2x) = 2 in characteristic 3.
        assert_eq!(d.terms.len(), 1);
        assert_eq!(d.terms[&vec![0u32]], Coef::Fp(2));
    }

    #[test]
    fn budget_is_enforced() {
        let f = qpoly(2, &[(&[2, 0], 1), (&[0, 1], -1)]);
        let g = qpoly(2, &[(&[0, 2], 1), (&[1, 0], -1)]);
        let mut b = Budget::new(2);
        assert!(matches!(
            quotient_dimension(&[f, g], &mut b),
            Err(AlgebraError::BudgetExceeded(2))
        ));
    }

    #[test]
    fn deterministic_sampling() {
        use rand::SeedableRng;
        let supports = vec![vec![vec![0, 0], vec![1, 0], vec![0, 1]]];
        let mut r1 = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let mut r2 = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let a = sample_with_supports(&supports, 2, Field::Fp(32003), &mut r1).unwrap();
        let b = sample_with_supports(&supports, 2, Field::Fp(32003), &mut r2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].terms.len(), 3);
    }
}
