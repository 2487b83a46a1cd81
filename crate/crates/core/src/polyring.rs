//! Polynomials over the rationals, monomial orders, Buchberger's algorithm
//! and finite-dimensional quotient algebras.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactla::{axpy, q, rational_string, Rational, SparseVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("truncation level must be at least 1, got {0}")]
    BadLevel(usize),
    #[error("no generators given")]
    NoGenerators,
    #[error("polynomials over {expected} variables mixed with {found}")]
    VariableCount { expected: usize, found: usize },
    #[error("quotient is not finite dimensional: no leading monomial is a power of variable {0}")]
    InfiniteDimensional(usize),
    #[error("ideal is not homogeneous: generator {0} mixes degrees")]
    NonHomogeneous(String),
    #[error("monomial {0} is not a standard monomial of the algebra")]
    NotStandard(String),
}

/// Exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Weighted degree with one weight vector per variable.
    pub fn weighted_degree(&self, weights: &[Vec<i64>]) -> Vec<i64> {
        let g = weights.first().map_or(0, |w| w.len());
        let mut out = vec![0i64; g];
        for (e, w) in self.0.iter().zip(weights) {
            for (o, x) in out.iter_mut().zip(w) {
                *o += *e as i64 * x;
            }
        }
        out
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial(
                self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
            ))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// All monomials in `nvars` variables of total degree `d`.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial(vec![]));
            }
            return out;
        }
        rec(0, d, &mut cur, &mut out);
        out
    }
}

pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("x{i}")).collect()
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&default_names(self.nvars)))
    }
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Rational::one())
    }

    /// Builds from (coefficient, exponents) pairs.
    pub fn from_terms(nvars: usize, terms: &[(i64, Vec<u32>)]) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(Monomial(e.clone()), q(*c));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), -c.clone());
        }
        p
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(t, x)| (t.mul(m), x * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for (m, c) in &other.terms {
            for (t, x) in &self.terms {
                p.add_term(t.mul(m), x * c);
            }
        }
        p
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut p = Polynomial::constant(self.nvars, Rational::one());
        for _ in 0..e {
            p = p.mul(self);
        }
        p
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[i] -= 1;
                p.add_term(m2, c * q(e as i64));
            }
        }
        p
    }

    /// Substitutes `images[i]` for variable `i`; images share a ring.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        let nv = images.first().map_or(0, |p| p.nvars);
        let mut out = Polynomial::zero(nv);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(nv, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e));
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn is_weighted_homogeneous(&self, weights: &[Vec<i64>]) -> bool {
        let mut degs = self.terms.keys().map(|m| m.weighted_degree(weights));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn leading(&self, order: &MonomialOrder) -> Option<(&Monomial, &Rational)> {
        self.terms
            .iter()
            .max_by(|a, b| order.compare(a.0, b.0))
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = *c < Rational::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.render(names);
            if a.is_one() {
                s.push_str(&mono);
            } else if mono == "1" {
                s.push_str(&rational_string(&a));
            } else {
                s.push_str(&format!("{}*{}", rational_string(&a), mono));
            }
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    GradedLex,
    GradedRevLex,
}

/// Term order; `perm[k]` is the variable ranked `k`-th (most significant first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub perm: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder {
            kind,
            perm: (0..nvars).collect(),
        }
    }

    pub fn with_perm(kind: OrderKind, perm: Vec<usize>) -> Self {
        MonomialOrder { kind, perm }
    }

    pub fn grevlex(nvars: usize) -> Self {
        Self::new(OrderKind::GradedRevLex, nvars)
    }

    pub fn lex(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, nvars)
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let lex = || {
            for &v in &self.perm {
                match a.0[v].cmp(&b.0[v]) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        };
        match self.kind {
            OrderKind::Lex => lex(),
            OrderKind::GradedLex => a.degree().cmp(&b.degree()).then_with(lex),
            OrderKind::GradedRevLex => a.degree().cmp(&b.degree()).then_with(|| {
                for &v in self.perm.iter().rev() {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub order: MonomialOrder,
    pub elements: Vec<Polynomial>,
}

fn make_monic(p: &Polynomial, order: &MonomialOrder) -> Polynomial {
    match p.leading(order) {
        Some((_, c)) => p.scale(&c.recip()),
        None => p.clone(),
    }
}

/// Full reduction of `p` by a list of polynomials with known leading terms.
fn reduce_by(p: &Polynomial, divisors: &[(Monomial, Rational, &Polynomial)], order: &MonomialOrder) -> Polynomial {
    let mut p = p.clone();
    let mut rem = Polynomial::zero(p.nvars);
    while let Some((lm, lc)) = p.leading(order).map(|(m, c)| (m.clone(), c.clone())) {
        let hit = divisors.iter().find(|(m, _, _)| m.divides(&lm));
        match hit {
            Some((m, c, g)) => {
                let t = lm.div(m).expect("divisibility checked");
                let f = -(lc / c);
                p = p.add(&g.mul_term(&t, &f));
            }
            None => {
                p.terms.remove(&lm);
                rem.add_term(lm, lc);
            }
        }
    }
    rem
}

impl GroebnerBasis {
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .filter_map(|g| g.leading(&self.order).map(|(m, _)| m.clone()))
            .collect()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        let divs: Vec<(Monomial, Rational, &Polynomial)> = self
            .elements
            .iter()
            .filter_map(|g| {
                g.leading(&self.order)
                    .map(|(m, c)| (m.clone(), c.clone(), g))
            })
            .collect();
        reduce_by(p, &divs, &self.order)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Whether every standard monomial test agrees: same leading ideal and
    /// each element of one reduces to zero modulo the other.
    pub fn same_ideal(&self, other: &GroebnerBasis) -> bool {
        self.elements.iter().all(|g| other.contains(g))
            && other.elements.iter().all(|g| self.contains(g))
    }
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (mf, cf) = f.leading(order).expect("nonzero");
    let (mg, cg) = g.leading(order).expect("nonzero");
    let l = mf.lcm(mg);
    let a = f.mul_term(&l.div(mf).unwrap(), &cf.recip());
    let b = g.mul_term(&l.div(mg).unwrap(), &cg.recip());
    a.sub(&b)
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[Polynomial], order: &MonomialOrder) -> Result<GroebnerBasis, PolyError> {
    let first = gens.first().ok_or(PolyError::NoGenerators)?;
    let nv = first.nvars;
    for g in gens {
        if g.nvars != nv {
            return Err(PolyError::VariableCount {
                expected: nv,
                found: g.nvars,
            });
        }
    }
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut lts: Vec<(Monomial, Rational)> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let push = |p: Polynomial,
                    basis: &mut Vec<Polynomial>,
                    lts: &mut Vec<(Monomial, Rational)>,
                    pairs: &mut Vec<(usize, usize)>| {
        let p = make_monic(&p, order);
        let (m, c) = p.leading(order).map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let k = basis.len();
        for i in 0..k {
            pairs.push((i, k));
        }
        basis.push(p);
        lts.push((m, c));
    };
    // Seed with reduced generators, monomials first so they prune quickly.
    let mut seeds: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    seeds.sort_by_key(|g| g.terms.len());
    for g in seeds {
        let divs: Vec<(Monomial, Rational, &Polynomial)> = basis
            .iter()
            .zip(&lts)
            .map(|(b, (m, c))| (m.clone(), c.clone(), b))
            .collect();
        let r = reduce_by(&g, &divs, order);
        if !r.is_zero() {
            push(r, &mut basis, &mut lts, &mut pairs);
        }
    }
    while let Some((i, j)) = pairs.pop() {
        if lts[i].0.coprime(&lts[j].0) {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let divs: Vec<(Monomial, Rational, &Polynomial)> = basis
            .iter()
            .zip(&lts)
            .map(|(b, (m, c))| (m.clone(), c.clone(), b))
            .collect();
        let r = reduce_by(&s, &divs, order);
        if !r.is_zero() {
            push(r, &mut basis, &mut lts, &mut pairs);
        }
    }
    // Minimalize then interreduce.
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..basis.len() {
        let redundant = (0..basis.len()).any(|j| {
            j != i
                && lts[j].0.divides(&lts[i].0)
                && (lts[j].0 != lts[i].0 || j < i)
        });
        if !redundant {
            keep.push(i);
        }
    }
    let minimal: Vec<Polynomial> = keep.iter().map(|&i| basis[i].clone()).collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (k, g) in minimal.iter().enumerate() {
        let others: Vec<(Monomial, Rational, &Polynomial)> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, h)| {
                let (m, c) = h.leading(order).unwrap();
                (m.clone(), c.clone(), h)
            })
            .collect();
        let (lm, lc) = g.leading(order).map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut tail = g.clone();
        tail.terms.remove(&lm);
        let mut r = reduce_by(&tail, &others, order);
        r.add_term(lm, lc);
        reduced.push(make_monic(&r, order));
    }
    reduced.sort_by(|a, b| {
        let la = a.leading(order).unwrap().0;
        let lb = b.leading(order).unwrap().0;
        order.compare(la, lb)
    });
    Ok(GroebnerBasis {
        order: order.clone(),
        elements: reduced,
    })
}

pub fn normal_form(p: &Polynomial, gb: &GroebnerBasis) -> Polynomial {
    gb.normal_form(p)
}

/// Commutative algebra `k[x]/I` of finite dimension, with standard
/// monomials as basis.
#[derive(Debug)]
pub struct FiniteAlgebra {
    names: Vec<String>,
    ideal: Vec<Polynomial>,
    gb: GroebnerBasis,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    table: OnceLock<Vec<Vec<SparseVec>>>,
}

impl Clone for FiniteAlgebra {
    fn clone(&self) -> Self {
        FiniteAlgebra {
            names: self.names.clone(),
            ideal: self.ideal.clone(),
            gb: self.gb.clone(),
            basis: self.basis.clone(),
            index: self.index.clone(),
            table: OnceLock::new(),
        }
    }
}

impl FiniteAlgebra {
    pub fn new(
        names: Vec<String>,
        ideal: Vec<Polynomial>,
        order: &MonomialOrder,
    ) -> Result<Self, PolyError> {
        let nv = names.len();
        for g in &ideal {
            if g.nvars != nv {
                return Err(PolyError::VariableCount {
                    expected: nv,
                    found: g.nvars,
                });
            }
        }
        if ideal.is_empty() {
            return if nv == 0 {
                Self::from_gb(names, ideal, GroebnerBasis { order: order.clone(), elements: vec![] })
            } else {
                Err(PolyError::InfiniteDimensional(0))
            };
        }
        let gb = buchberger(&ideal, order)?;
        Self::from_gb(names, ideal, gb)
    }

    fn from_gb(names: Vec<String>, ideal: Vec<Polynomial>, gb: GroebnerBasis) -> Result<Self, PolyError> {
        let nv = names.len();
        let lms = gb.leading_monomials();
        for v in 0..nv {
            let pure = lms
                .iter()
                .any(|m| m.0[v] > 0 && m.0.iter().enumerate().all(|(i, &e)| i == v || e == 0));
            if !pure {
                return Err(PolyError::InfiniteDimensional(v));
            }
        }
        let mut basis = Vec::new();
        let mut d = 0u32;
        loop {
            let layer: Vec<Monomial> = Monomial::all_of_degree(nv, d)
                .into_iter()
                .filter(|m| !lms.iter().any(|l| l.divides(m)))
                .collect();
            if layer.is_empty() {
                break;
            }
            basis.extend(layer);
            d += 1;
        }
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(FiniteAlgebra {
            names,
            ideal,
            gb,
            basis,
            index,
            table: OnceLock::new(),
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn ideal(&self) -> &[Polynomial] {
        &self.ideal
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn label(&self, i: usize) -> String {
        self.basis[i].render(&self.names)
    }

    /// Total degree of basis element `i`.
    pub fn grading(&self, i: usize) -> u32 {
        self.basis[i].degree()
    }

    /// Coordinates of a polynomial's class.
    pub fn coords(&self, p: &Polynomial) -> SparseVec {
        let r = self.gb.normal_form(p);
        r.terms
            .iter()
            .map(|(m, c)| (self.index[m], c.clone()))
            .collect()
    }

    pub fn monomial_coords(&self, m: &Monomial) -> SparseVec {
        if let Some(&i) = self.index.get(m) {
            let mut v = SparseVec::new();
            v.insert(i, Rational::one());
            return v;
        }
        self.coords(&Polynomial::monomial(m.clone()))
    }

    pub fn to_polynomial(&self, v: &SparseVec) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars());
        for (&i, c) in v {
            p.add_term(self.basis[i].clone(), c.clone());
        }
        p
    }

    /// Structure constants `b_i * b_j`, computed on first use.
    pub fn mult_table(&self) -> &Vec<Vec<SparseVec>> {
        self.table.get_or_init(|| {
            let n = self.dim();
            let mut t = vec![vec![SparseVec::new(); n]; n];
            for i in 0..n {
                for j in i..n {
                    let v = self.monomial_coords(&self.basis[i].mul(&self.basis[j]));
                    t[j][i] = v.clone();
                    t[i][j] = v;
                }
            }
            t
        })
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult_table()[i][j]
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, x) in a {
            for (&j, y) in b {
                let c = x * y;
                axpy(&mut out, &c, self.mul_basis(i, j));
            }
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        self.ideal.iter().all(|g| g.is_homogeneous())
    }

    /// Number of basis monomials in each total degree.
    pub fn hilbert_function(&self) -> Result<Vec<usize>, PolyError> {
        if let Some(g) = self.ideal.iter().find(|g| !g.is_homogeneous()) {
            return Err(PolyError::NonHomogeneous(g.render(&self.names)));
        }
        let top = self.basis.iter().map(|m| m.degree()).max().unwrap_or(0) as usize;
        let mut h = vec![0usize; top + 1];
        for m in &self.basis {
            h[m.degree() as usize] += 1;
        }
        Ok(h)
    }
}

/// `k[x_1..x_N] / (gens + m^n)` with the default graded reverse lex order.
pub fn truncated_quotient(ideal_gens: &[Polynomial], n: usize) -> Result<FiniteAlgebra, PolyError> {
    if n < 1 {
        return Err(PolyError::BadLevel(n));
    }
    let nv = ideal_gens.first().ok_or(PolyError::NoGenerators)?.nvars;
    let mut gens: Vec<Polynomial> = ideal_gens.to_vec();
    for m in Monomial::all_of_degree(nv, n as u32) {
        gens.push(Polynomial::monomial(m));
    }
    FiniteAlgebra::new(default_names(nv), gens, &MonomialOrder::grevlex(nv))
}

/// The cone equation `x1 x2 - x3 x4`.
pub fn segre_relation() -> Polynomial {
    Polynomial::from_terms(4, &[(1, vec![1, 1, 0, 0]), (-1, vec![0, 0, 1, 1])])
}

/// `Q_n = k[x1..x4]/(x1 x2 - x3 x4, m^n)`.
pub fn segre_truncation(n: usize) -> Result<FiniteAlgebra, PolyError> {
    truncated_quotient(&[segre_relation()], n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_leading_term_of_relation() {
        let f = segre_relation();
        let o = MonomialOrder::grevlex(4);
        assert_eq!(f.leading(&o).unwrap().0, &Monomial(vec![1, 1, 0, 0]));
    }

    #[test]
    fn normal_form_examples() {
        let f = segre_relation();
        let gb = buchberger(&[f.clone()], &MonomialOrder::lex(4)).unwrap();
        let x1x2 = Polynomial::monomial(Monomial(vec![1, 1, 0, 0]));
        let x3x4 = Polynomial::monomial(Monomial(vec![0, 0, 1, 1]));
        assert_eq!(gb.normal_form(&x1x2), x3x4);
        assert_eq!(gb.normal_form(&x3x4), x3x4);
        assert!(gb.normal_form(&f).is_zero());
    }

    #[test]
    fn qn_dimensions() {
        assert_eq!(segre_truncation(1).unwrap().dim(), 1);
        assert_eq!(segre_truncation(2).unwrap().dim(), 5);
        assert_eq!(segre_truncation(3).unwrap().dim(), 14);
        assert!(matches!(segre_truncation(0), Err(PolyError::BadLevel(0))));
    }

    #[test]
    fn hilbert_of_small_algebras() {
        let x2 = Polynomial::from_terms(1, &[(1, vec![2])]);
        let a = FiniteAlgebra::new(default_names(1), vec![x2], &MonomialOrder::lex(1)).unwrap();
        assert_eq!(a.hilbert_function().unwrap(), vec![1, 1]);
        let inhom = Polynomial::from_terms(1, &[(1, vec![2]), (-1, vec![1])]);
        let cube = Polynomial::from_terms(1, &[(1, vec![3])]);
        let b = FiniteAlgebra::new(default_names(1), vec![inhom, cube], &MonomialOrder::lex(1)).unwrap();
        assert!(b.hilbert_function().is_err());
    }
}
