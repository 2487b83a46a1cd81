//! Kähler differentials, de Rham complexes and naive cotangent modules of
//! graded presentations.
//!
//! A presentation `k[x]/I` carries a multigrading by nonnegative weight
//! vectors with every variable of nonzero weight, so each graded piece is
//! finite dimensional. Forms of degree `m` in multidegree `δ` are computed
//! as `(⊕_I C_{δ - w(I)} dx_I) / (C · dg ∧ dx_J)`, exactly, one piece at a
//! time. Finite algebras are the case where only finitely many pieces are
//! nonzero; chart algebras are handled through an explicit list of degrees.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::exactla::{
    axpy, kernel_basis, q, quotient_space, rank, unit, LinalgError, LinearMap, Quotient,
    Rational, SparseMatrix, SparseVec, Subspace, VectorSpace,
};
use crate::polyring::{
    buchberger, segre_relation, GroebnerBasis, Monomial, MonomialOrder, OrderKind, PolyError,
    Polynomial,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KaehlerError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("variable {0} has a zero or negative weight")]
    BadWeight(String),
    #[error("generator {0} is not homogeneous for the grading")]
    Inhomogeneous(String),
    #[error("presentation is infinite dimensional; supply a degree box")]
    NeedsDegreeBox,
    #[error("de Rham differential undefined: differential relations omit ideal generators")]
    NoDeRham,
    #[error("base relation {0} involves a fiber variable, so the ambient ring is not polynomial over the base")]
    NotPolynomialOverBase(String),
    #[error("level must be at least {min}, got {got}")]
    BadLevel { min: usize, got: usize },
    #[error("form degree {m} exceeds the maximum {max}")]
    FormDegree { m: usize, max: usize },
    #[error("map is not surjective at level {0}")]
    NotSurjective(usize),
    #[error("truncation leaves the kernel at level {0}")]
    LeavesKernel(usize),
    #[error(transparent)]
    Pro(#[from] crate::prosys::ProError),
}

/// Wedge of `dx_i` over the bits of a variable mask.
pub type Mask = u32;

pub fn mask_of(vars: &[usize]) -> Mask {
    vars.iter().fold(0, |m, &v| m | (1 << v))
}

pub fn mask_vars(mask: Mask) -> Vec<usize> {
    (0..32).filter(|&i| mask & (1 << i) != 0).collect()
}

/// Sign of `dx_i ∧ dx_J` relative to the sorted wedge.
pub fn insert_sign(i: usize, mask: Mask) -> Rational {
    if (mask & ((1u32 << i) - 1)).count_ones() % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Sign of `dx_A ∧ dx_B` relative to the sorted wedge of `A ∪ B`, or
/// `None` when they overlap.
pub fn wedge_sign(a: Mask, b: Mask) -> Option<Rational> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    for i in mask_vars(a) {
        inversions += (b & ((1u32 << i) - 1)).count_ones();
    }
    Some(if inversions % 2 == 0 { q(1) } else { q(-1) })
}

/// Subsets of `vars` with exactly `k` elements, as masks.
pub fn subsets_of(vars: &[usize], k: usize) -> Vec<Mask> {
    let mut out = Vec::new();
    fn rec(start: usize, vars: &[usize], k: usize, cur: Mask, out: &mut Vec<Mask>) {
        if k == 0 {
            out.push(cur);
            return;
        }
        for i in start..vars.len() {
            rec(i + 1, vars, k - 1, cur | (1 << vars[i]), out);
        }
    }
    rec(0, vars, k, 0, &mut out);
    out
}

fn sub_deg(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add_deg(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `k[vars]/ideal`, possibly relative to a base whose variables carry no
/// differentials.
#[derive(Clone, Debug)]
pub struct AlgebraPresentation {
    pub names: Vec<String>,
    pub weights: Vec<Vec<i64>>,
    /// Generators of the full ideal, base relations included.
    pub ideal_gens: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub base: Base,
    /// Generators whose differentials are imposed. `None` means all ideal
    /// generators, giving the genuine module of differentials.
    pub differential_relations: Option<Vec<Polynomial>>,
}

#[derive(Clone, Debug)]
pub enum Base {
    Field,
    /// The first `base.names.len()` variables belong to the base.
    Presented(Box<AlgebraPresentation>),
}

impl AlgebraPresentation {
    pub fn over_field(
        names: Vec<String>,
        weights: Vec<Vec<i64>>,
        ideal_gens: Vec<Polynomial>,
        order: MonomialOrder,
    ) -> Self {
        AlgebraPresentation {
            names,
            weights,
            ideal_gens,
            order,
            base: Base::Field,
            differential_relations: None,
        }
    }

    /// `base[new vars] / relations`; relations are written in the base
    /// variables followed by the new ones.
    pub fn relative(
        base: AlgebraPresentation,
        new_names: Vec<String>,
        new_weights: Vec<Vec<i64>>,
        relations: Vec<Polynomial>,
        order: MonomialOrder,
    ) -> Self {
        let nb = base.names.len();
        let total = nb + new_names.len();
        let mut names = base.names.clone();
        names.extend(new_names);
        let mut weights = base.weights.clone();
        weights.extend(new_weights);
        let mut ideal_gens: Vec<Polynomial> = base
            .ideal_gens
            .iter()
            .map(|g| extend_vars(g, total))
            .collect();
        ideal_gens.extend(relations);
        AlgebraPresentation {
            names,
            weights,
            ideal_gens,
            order,
            base: Base::Presented(Box::new(base)),
            differential_relations: None,
        }
    }

    pub fn with_differential_relations(mut self, rels: Vec<Polynomial>) -> Self {
        self.differential_relations = Some(rels);
        self
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn base_var_count(&self) -> usize {
        match &self.base {
            Base::Field => 0,
            Base::Presented(b) => b.names.len(),
        }
    }

    /// Variables carrying differentials.
    pub fn form_vars(&self) -> Vec<usize> {
        (self.base_var_count()..self.nvars()).collect()
    }

    pub fn base_relations(&self) -> Vec<Polynomial> {
        match &self.base {
            Base::Field => vec![],
            Base::Presented(b) => b
                .ideal_gens
                .iter()
                .map(|g| extend_vars(g, self.nvars()))
                .collect(),
        }
    }

    /// Relations added on top of the base.
    pub fn fiber_relations(&self) -> Vec<Polynomial> {
        let nb = match &self.base {
            Base::Field => 0,
            Base::Presented(b) => b.ideal_gens.len(),
        };
        self.ideal_gens[nb..].to_vec()
    }

    pub fn grading_dim(&self) -> usize {
        self.weights.first().map_or(0, |w| w.len())
    }
}

fn extend_vars(p: &Polynomial, total: usize) -> Polynomial {
    let mut out = Polynomial::zero(total);
    for (m, c) in p.terms() {
        let mut e = m.0.clone();
        e.resize(total, 0);
        out.add_term(Monomial(e), c.clone());
    }
    out
}

/// Generator of a free form module: `monomial · dx_mask`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeLabel {
    pub mono: Monomial,
    pub mask: Mask,
}

impl FreeLabel {
    pub fn render(&self, names: &[String]) -> String {
        let coeff = self.mono.render(names);
        if self.mask == 0 {
            return coeff;
        }
        let wedge: Vec<String> = mask_vars(self.mask)
            .iter()
            .map(|&i| format!("d{}", names[i]))
            .collect();
        if coeff == "1" {
            wedge.join("^")
        } else {
            format!("{} {}", coeff, wedge.join("^"))
        }
    }
}

/// Forms of a fixed form degree in one multidegree.
#[derive(Clone, Debug)]
pub struct FormPiece {
    pub degree: Vec<i64>,
    pub m: usize,
    pub free: Vec<FreeLabel>,
    pub free_space: VectorSpace,
    index: HashMap<FreeLabel, usize>,
    pub quotient: Quotient,
}

impl FormPiece {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn free_index(&self, l: &FreeLabel) -> Option<usize> {
        self.index.get(l).copied()
    }

    /// Free label lifting quotient basis vector `k`.
    pub fn basis_label(&self, k: usize) -> &FreeLabel {
        let (&j, _) = self.quotient.lifts[k].iter().next().expect("unit lift");
        &self.free[j]
    }
}

/// A presentation together with its Gröbner basis; computes graded pieces
/// of forms on demand.
#[derive(Clone, Debug)]
pub struct FormEngine {
    pres: AlgebraPresentation,
    gb: GroebnerBasis,
    lms: Vec<Monomial>,
    form_vars: Vec<usize>,
    diff_rels: Vec<(Polynomial, Vec<i64>)>,
    de_rham: bool,
}

impl FormEngine {
    pub fn new(pres: AlgebraPresentation) -> Result<Self, KaehlerError> {
        let nv = pres.nvars();
        for (i, w) in pres.weights.iter().enumerate() {
            if w.iter().any(|&x| x < 0) || w.iter().all(|&x| x == 0) {
                return Err(KaehlerError::BadWeight(pres.names[i].clone()));
            }
        }
        for g in &pres.ideal_gens {
            if !g.is_weighted_homogeneous(&pres.weights) {
                return Err(KaehlerError::Inhomogeneous(g.render(&pres.names)));
            }
        }
        let gb = if pres.ideal_gens.iter().all(|g| g.is_zero()) {
            GroebnerBasis {
                order: pres.order.clone(),
                elements: vec![],
            }
        } else {
            buchberger(&pres.ideal_gens, &pres.order)?
        };
        let lms = gb.leading_monomials();
        let form_vars = pres.form_vars();
        let de_rham = pres.differential_relations.is_none();
        let rels = pres
            .differential_relations
            .clone()
            .unwrap_or_else(|| pres.ideal_gens.clone());
        let mut diff_rels = Vec::new();
        for g in rels {
            if g.is_zero() {
                continue;
            }
            if !g.is_weighted_homogeneous(&pres.weights) {
                return Err(KaehlerError::Inhomogeneous(g.render(&pres.names)));
            }
            let d = g.terms().keys().next().unwrap().weighted_degree(&pres.weights);
            diff_rels.push((g, d));
        }
        debug_assert_eq!(nv, pres.weights.len());
        Ok(FormEngine {
            pres,
            gb,
            lms,
            form_vars,
            diff_rels,
            de_rham,
        })
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.pres
    }

    pub fn names(&self) -> &[String] {
        &self.pres.names
    }

    pub fn form_vars(&self) -> &[usize] {
        &self.form_vars
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn has_de_rham(&self) -> bool {
        self.de_rham
    }

    pub fn weight_of_mask(&self, mask: Mask) -> Vec<i64> {
        let mut d = vec![0; self.pres.grading_dim()];
        for v in mask_vars(mask) {
            d = add_deg(&d, &self.pres.weights[v]);
        }
        d
    }

    pub fn degree_of(&self, m: &Monomial) -> Vec<i64> {
        m.weighted_degree(&self.pres.weights)
    }

    /// All monomials of the ambient ring with the given multidegree.
    pub fn monomials_of_degree(&self, deg: &[i64]) -> Vec<Monomial> {
        let nv = self.pres.nvars();
        let mut out = Vec::new();
        if deg.iter().any(|&x| x < 0) {
            return out;
        }
        let w = &self.pres.weights;
        fn rec(
            v: usize,
            left: &mut Vec<i64>,
            cur: &mut Vec<u32>,
            w: &[Vec<i64>],
            out: &mut Vec<Monomial>,
        ) {
            if v == w.len() {
                if left.iter().all(|&x| x == 0) {
                    out.push(Monomial(cur.clone()));
                }
                return;
            }
            let mut e = 0u32;
            loop {
                rec(v + 1, left, cur, w, out);
                for (l, x) in left.iter_mut().zip(&w[v]) {
                    *l -= x;
                }
                e += 1;
                cur[v] = e;
                if left.iter().any(|&x| x < 0) {
                    break;
                }
            }
            for (l, x) in left.iter_mut().zip(&w[v]) {
                *l += x * e as i64;
            }
            cur[v] = 0;
        }
        let mut left = deg.to_vec();
        let mut cur = vec![0u32; nv];
        rec(0, &mut left, &mut cur, w, &mut out);
        out.sort();
        out
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.lms.iter().any(|l| l.divides(m))
    }

    /// Standard monomials (a basis of the quotient ring) in one multidegree.
    pub fn standard_monomials(&self, deg: &[i64]) -> Vec<Monomial> {
        self.monomials_of_degree(deg)
            .into_iter()
            .filter(|m| self.is_standard(m))
            .collect()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        if self.gb.elements.is_empty() {
            return p.clone();
        }
        self.gb.normal_form(p)
    }

    /// All standard monomials, when the quotient is finite dimensional.
    pub fn finite_basis(&self) -> Result<Vec<Monomial>, KaehlerError> {
        let nv = self.pres.nvars();
        for v in 0..nv {
            let pure = self.lms.iter().any(|m| {
                m.0[v] > 0 && m.0.iter().enumerate().all(|(i, &e)| i == v || e == 0)
            });
            if !pure {
                return Err(KaehlerError::NeedsDegreeBox);
            }
        }
        let mut out = Vec::new();
        let mut d = 0;
        loop {
            let layer: Vec<Monomial> = Monomial::all_of_degree(nv, d)
                .into_iter()
                .filter(|m| self.is_standard(m))
                .collect();
            if layer.is_empty() {
                break;
            }
            out.extend(layer);
            d += 1;
        }
        Ok(out)
    }

    /// Multidegrees where some free generator of forms of degree ≤ `up_to`
    /// lives, for a finite-dimensional quotient.
    pub fn finite_degrees(&self, up_to: usize) -> Result<Vec<Vec<i64>>, KaehlerError> {
        let basis = self.finite_basis()?;
        let mut degs = BTreeSet::new();
        for m in 0..=up_to.min(self.form_vars.len()) {
            for mask in subsets_of(&self.form_vars, m) {
                let wm = self.weight_of_mask(mask);
                for t in &basis {
                    degs.insert(add_deg(&self.degree_of(t), &wm));
                }
            }
        }
        Ok(degs.into_iter().collect())
    }

    fn free_labels(&self, deg: &[i64], m: usize) -> Vec<FreeLabel> {
        let mut out = Vec::new();
        for mask in subsets_of(&self.form_vars, m) {
            let rest = sub_deg(deg, &self.weight_of_mask(mask));
            for mono in self.standard_monomials(&rest) {
                out.push(FreeLabel { mono, mask });
            }
        }
        out.sort();
        out
    }

    /// Free-module vector of `Σ coeff · dx_mask`; coefficients are reduced
    /// to normal form. Terms whose wedge involves base variables vanish.
    pub fn free_vector(&self, piece: &FormPiece, terms: &[(Polynomial, Mask)]) -> SparseVec {
        let fm = mask_of(&self.form_vars);
        let mut v = SparseVec::new();
        for (p, mask) in terms {
            if mask & !fm != 0 {
                continue;
            }
            let nf = self.normal_form(p);
            for (mono, c) in nf.terms() {
                let l = FreeLabel {
                    mono: mono.clone(),
                    mask: *mask,
                };
                let j = piece
                    .free_index(&l)
                    .unwrap_or_else(|| panic!("term {} outside degree {:?}", l.render(self.names()), piece.degree));
                axpy(&mut v, c, &unit(j));
            }
        }
        v
    }

    /// Class of `Σ coeff · dx_mask` in the piece.
    pub fn form_coords(&self, piece: &FormPiece, terms: &[(Polynomial, Mask)]) -> SparseVec {
        piece.quotient.project(&self.free_vector(piece, terms))
    }

    /// Relation vectors `t · dg ∧ dx_J` landing in the given piece.
    fn relation_vectors(&self, deg: &[i64], m: usize, index: &HashMap<FreeLabel, usize>) -> Vec<SparseVec> {
        let mut rels = Vec::new();
        if m == 0 {
            return rels;
        }
        for (g, gdeg) in &self.diff_rels {
            let partials: Vec<(usize, Polynomial)> = self
                .form_vars
                .iter()
                .map(|&i| (i, g.derivative(i)))
                .filter(|(_, p)| !p.is_zero())
                .collect();
            if partials.is_empty() {
                continue;
            }
            for jmask in subsets_of(&self.form_vars, m - 1) {
                let rest = sub_deg(&sub_deg(deg, gdeg), &self.weight_of_mask(jmask));
                for t in self.standard_monomials(&rest) {
                    let mut v = SparseVec::new();
                    for (i, p) in &partials {
                        if jmask & (1 << i) != 0 {
                            continue;
                        }
                        let sign = insert_sign(*i, jmask);
                        let coeff = self.normal_form(&p.mul_term(&t, &Rational::one()));
                        for (mono, c) in coeff.terms() {
                            let l = FreeLabel {
                                mono: mono.clone(),
                                mask: jmask | (1 << i),
                            };
                            let j = index[&l];
                            let x = c * &sign;
                            axpy(&mut v, &x, &unit(j));
                        }
                    }
                    if !v.is_empty() {
                        rels.push(v);
                    }
                }
            }
        }
        rels
    }

    pub fn piece(&self, deg: &[i64], m: usize) -> FormPiece {
        let free = self.free_labels(deg, m);
        let index: HashMap<FreeLabel, usize> =
            free.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let labels: Vec<String> = free.iter().map(|l| l.render(self.names())).collect();
        let free_space = VectorSpace::new(labels).expect("free labels are distinct");
        let rels = self.relation_vectors(deg, m, &index);
        let quotient = quotient_space(&free_space, &rels).expect("relations lie in the free module");
        FormPiece {
            degree: deg.to_vec(),
            m,
            free,
            free_space,
            index,
            quotient,
        }
    }

    /// Free-level image of `t dx_I` under d.
    fn d_free(&self, l: &FreeLabel) -> Vec<(Polynomial, Mask)> {
        let mut out = Vec::new();
        let p = Polynomial::monomial(l.mono.clone());
        for &i in &self.form_vars {
            if l.mask & (1 << i) != 0 {
                continue;
            }
            let dp = p.derivative(i);
            if dp.is_zero() {
                continue;
            }
            out.push((dp.scale(&insert_sign(i, l.mask)), l.mask | (1 << i)));
        }
        out
    }

    /// de Rham differential between pieces of form degree `m` and `m+1`.
    pub fn d_map(&self, src: &FormPiece, dst: &FormPiece) -> Result<LinearMap, KaehlerError> {
        if !self.de_rham {
            return Err(KaehlerError::NoDeRham);
        }
        let images: Vec<SparseVec> = (0..src.dim())
            .map(|k| self.form_coords(dst, &self.d_free(src.basis_label(k))))
            .collect();
        Ok(LinearMap::from_images(
            src.quotient.space.clone(),
            dst.quotient.space.clone(),
            &images,
        )?)
    }

    /// d applied to an arbitrary free-level form (given in the source piece).
    pub fn d_of(&self, src: &FormPiece, dst: &FormPiece, coords: &SparseVec) -> Result<SparseVec, KaehlerError> {
        let f = self.d_map(src, dst)?;
        Ok(f.apply(coords)?)
    }

    /// Multiplication by a homogeneous ring element `s`.
    pub fn mul_map(&self, src: &FormPiece, dst: &FormPiece, s: &Polynomial) -> Result<LinearMap, KaehlerError> {
        let images: Vec<SparseVec> = (0..src.dim())
            .map(|k| {
                let l = src.basis_label(k);
                let p = s.mul_term(&l.mono, &Rational::one());
                self.form_coords(dst, &[(p, l.mask)])
            })
            .collect();
        Ok(LinearMap::from_images(
            src.quotient.space.clone(),
            dst.quotient.space.clone(),
            &images,
        )?)
    }

    /// Map into another engine's piece induced by the identity on free
    /// labels (ring map = reduction, wedge terms outside the target's form
    /// variables dropped). Variable sets must agree.
    pub fn induced_map(&self, src: &FormPiece, other: &FormEngine, dst: &FormPiece) -> Result<LinearMap, KaehlerError> {
        let images: Vec<SparseVec> = (0..src.dim())
            .map(|k| {
                let l = src.basis_label(k);
                other.form_coords(dst, &[(Polynomial::monomial(l.mono.clone()), l.mask)])
            })
            .collect();
        Ok(LinearMap::from_images(
            src.quotient.space.clone(),
            dst.quotient.space.clone(),
            &images,
        )?)
    }

    /// All pieces of form degree `0..=up_to` in one multidegree, with d.
    pub fn block(&self, deg: &[i64], up_to: usize) -> Result<GradedBlock, KaehlerError> {
        let top = up_to.min(self.form_vars.len());
        let pieces: Vec<FormPiece> = (0..=up_to).map(|m| {
            if m <= top {
                self.piece(deg, m)
            } else {
                self.piece_zero(deg, m)
            }
        }).collect();
        let mut d = Vec::new();
        if self.de_rham {
            for m in 0..up_to {
                d.push(self.d_map(&pieces[m], &pieces[m + 1])?);
            }
        }
        Ok(GradedBlock {
            degree: deg.to_vec(),
            pieces,
            d,
        })
    }

    fn piece_zero(&self, deg: &[i64], m: usize) -> FormPiece {
        let free_space = VectorSpace::zero();
        let quotient = quotient_space(&free_space, &[]).unwrap();
        FormPiece {
            degree: deg.to_vec(),
            m,
            free: vec![],
            free_space,
            index: HashMap::new(),
            quotient,
        }
    }
}

/// Forms of all degrees `0..=up_to` in one multidegree.
#[derive(Clone, Debug)]
pub struct GradedBlock {
    pub degree: Vec<i64>,
    pub pieces: Vec<FormPiece>,
    /// `d[m]: pieces[m] → pieces[m+1]`; empty when d is undefined.
    pub d: Vec<LinearMap>,
}

impl GradedBlock {
    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.dim()).collect()
    }
}

/// Forms on a finite-dimensional algebra, or on a chart algebra restricted
/// to a list of multidegrees.
#[derive(Clone, Debug)]
pub struct DifferentialModule {
    pub engine: FormEngine,
    pub max_form: usize,
    pub blocks: BTreeMap<Vec<i64>, GradedBlock>,
}

impl DifferentialModule {
    pub fn dim(&self, m: usize) -> usize {
        self.blocks.values().map(|b| b.pieces.get(m).map_or(0, |p| p.dim())).sum()
    }

    pub fn block(&self, deg: &[i64]) -> Option<&GradedBlock> {
        self.blocks.get(deg)
    }

    pub fn degrees(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.blocks.keys()
    }

    /// Total space of `m`-forms: direct sum of the pieces in degree order.
    pub fn space(&self, m: usize) -> VectorSpace {
        let labels: Vec<String> = self
            .blocks
            .values()
            .flat_map(|b| b.pieces[m].quotient.space.labels().to_vec())
            .collect();
        VectorSpace::new(labels).expect("labels distinct across degrees")
    }

    /// Offsets of each degree's piece inside `space(m)`.
    pub fn offsets(&self, m: usize) -> BTreeMap<Vec<i64>, usize> {
        let mut off = 0;
        let mut out = BTreeMap::new();
        for (d, b) in &self.blocks {
            out.insert(d.clone(), off);
            off += b.pieces[m].dim();
        }
        out
    }

    /// Total d as a block-diagonal map.
    pub fn d_map(&self, m: usize) -> Result<LinearMap, KaehlerError> {
        if !self.engine.has_de_rham() {
            return Err(KaehlerError::NoDeRham);
        }
        if m >= self.max_form {
            return Err(KaehlerError::FormDegree { m: m + 1, max: self.max_form });
        }
        let per: BTreeMap<Vec<i64>, &LinearMap> =
            self.blocks.iter().map(|(k, b)| (k.clone(), &b.d[m])).collect();
        assemble_block_map(self, m, self, m + 1, |deg| per.get(deg).map(|f| f.matrix.clone()))
    }

    /// Vector in `space(m)` from a vector in one degree's piece.
    pub fn embed(&self, m: usize, deg: &[i64], v: &SparseVec) -> SparseVec {
        let off = self.offsets(m)[deg];
        v.iter().map(|(&i, x)| (i + off, x.clone())).collect()
    }

    /// Class of a homogeneous form `Σ coeff dx_mask` in `space(m)`.
    pub fn form(&self, m: usize, terms: &[(Polynomial, Mask)]) -> Option<SparseVec> {
        let (p, mask) = terms.iter().find(|(p, _)| !p.is_zero())?;
        let mono = p.terms().keys().next().unwrap();
        let deg = add_deg(&self.engine.degree_of(mono), &self.engine.weight_of_mask(*mask));
        let block = self.blocks.get(&deg)?;
        let local = self.engine.form_coords(&block.pieces[m], terms);
        Some(self.embed(m, &deg, &local))
    }
}

/// Builds a block-diagonal map between two graded modules given per-degree
/// matrices (missing degrees map to zero).
pub fn assemble_block_map<F>(
    src: &DifferentialModule,
    sm: usize,
    dst: &DifferentialModule,
    dm: usize,
    per_degree: F,
) -> Result<LinearMap, KaehlerError>
where
    F: Fn(&Vec<i64>) -> Option<SparseMatrix>,
{
    let so = src.offsets(sm);
    let d_off = dst.offsets(dm);
    let source = src.space(sm);
    let target = dst.space(dm);
    let mut m = SparseMatrix::zeros(target.dim(), source.dim());
    for (deg, &s0) in &so {
        let Some(&t0) = d_off.get(deg) else { continue };
        if let Some(block) = per_degree(deg) {
            for i in 0..block.rows() {
                for (&j, x) in block.row(i) {
                    m.set(t0 + i, s0 + j, x.clone())?;
                }
            }
        }
    }
    Ok(LinearMap::new(source, target, m)?)
}

/// Builds the module of forms up to degree `up_to` on a finite-dimensional
/// presentation.
pub fn build_differential_module(pres: AlgebraPresentation, up_to: usize) -> Result<DifferentialModule, KaehlerError> {
    let engine = FormEngine::new(pres)?;
    let degrees = engine.finite_degrees(up_to)?;
    build_on_degrees(engine, up_to, &degrees)
}

/// Builds the module restricted to the given multidegrees.
pub fn build_on_degrees(engine: FormEngine, up_to: usize, degrees: &[Vec<i64>]) -> Result<DifferentialModule, KaehlerError> {
    let blocks: Result<Vec<GradedBlock>, KaehlerError> =
        degrees.par_iter().map(|d| engine.block(d, up_to)).collect();
    let blocks = blocks?
        .into_iter()
        .map(|b| (b.degree.clone(), b))
        .collect();
    Ok(DifferentialModule {
        engine,
        max_form: up_to,
        blocks,
    })
}

/// Top Hodge piece `Ω^m / dΩ^{m-1}`, per degree.
#[derive(Clone, Debug)]
pub struct HodgeTop {
    pub m: usize,
    pub blocks: BTreeMap<Vec<i64>, Quotient>,
}

impl HodgeTop {
    pub fn dim(&self) -> usize {
        self.blocks.values().map(|q| q.dim()).sum()
    }

    pub fn space(&self) -> VectorSpace {
        let labels: Vec<String> = self
            .blocks
            .values()
            .flat_map(|q| q.space.labels().to_vec())
            .collect();
        VectorSpace::new(labels).expect("distinct labels")
    }

    pub fn offsets(&self) -> BTreeMap<Vec<i64>, usize> {
        let mut off = 0;
        let mut out = BTreeMap::new();
        for (d, q) in &self.blocks {
            out.insert(d.clone(), off);
            off += q.dim();
        }
        out
    }

    /// Projection from `space(m)` of the module.
    pub fn projection(&self, dm: &DifferentialModule) -> Result<LinearMap, KaehlerError> {
        let so = dm.offsets(self.m);
        let to = self.offsets();
        let source = dm.space(self.m);
        let target = self.space();
        let mut mat = SparseMatrix::zeros(target.dim(), source.dim());
        for (deg, qt) in &self.blocks {
            let (s0, t0) = (so[deg], to[deg]);
            let p = &qt.projection.matrix;
            for i in 0..p.rows() {
                for (&j, x) in p.row(i) {
                    mat.set(t0 + i, s0 + j, x.clone())?;
                }
            }
        }
        Ok(LinearMap::new(source, target, mat)?)
    }
}

pub fn hodge_piece_hc(dm: &DifferentialModule, m: usize) -> Result<HodgeTop, KaehlerError> {
    if m > dm.max_form {
        return Err(KaehlerError::FormDegree { m, max: dm.max_form });
    }
    let mut blocks = BTreeMap::new();
    for (deg, b) in &dm.blocks {
        let piece = &b.pieces[m];
        let sub: Vec<SparseVec> = if m == 0 {
            vec![]
        } else {
            if b.d.is_empty() {
                return Err(KaehlerError::NoDeRham);
            }
            b.d[m - 1].matrix.columns()
        };
        blocks.insert(deg.clone(), quotient_space(&piece.quotient.space, &sub)?);
    }
    Ok(HodgeTop { m, blocks })
}

// ---------------------------------------------------------------------------
// Structural checks.

/// `d ∘ d = 0` on every block.
pub fn check_d_squared(dm: &DifferentialModule) -> Result<Verdict, KaehlerError> {
    let mut v = Verdict::pass(0);
    for (deg, b) in &dm.blocks {
        for m in 0..b.d.len().saturating_sub(1) {
            let dd = b.d[m + 1].after(&b.d[m])?;
            v = v.and(if dd.is_zero() {
                Verdict::pass(1)
            } else {
                Verdict::fail(1, format!("d∘d ≠ 0 on {m}-forms of degree {deg:?}"))
            });
        }
    }
    Ok(v)
}

/// `d(x_i ω) = dx_i ∧ ω + x_i dω` for every variable and basis form whose
/// product degree lies among the module's blocks.
pub fn check_leibniz(dm: &DifferentialModule) -> Result<Verdict, KaehlerError> {
    let e = &dm.engine;
    let nv = e.presentation().nvars();
    let weights = e.presentation().weights.clone();
    let form_mask = mask_of(e.form_vars());
    let mut v = Verdict::pass(0);
    for (deg, b) in &dm.blocks {
        for m in 0..b.d.len() {
            for i in 0..nv {
                let Some(tb) = dm.blocks.get(&add_deg(deg, &weights[i])) else { continue };
                let xi = Polynomial::var(nv, i);
                let mul_m = e.mul_map(&b.pieces[m], &tb.pieces[m], &xi)?;
                let mul_m1 = e.mul_map(&b.pieces[m + 1], &tb.pieces[m + 1], &xi)?;
                for k in 0..b.pieces[m].dim() {
                    let w = unit(k);
                    let lhs = tb.d[m].apply(&mul_m.apply(&w)?)?;
                    let mut rhs = mul_m1.apply(&b.d[m].apply(&w)?)?;
                    if form_mask & (1 << i) != 0 {
                        let free = b.pieces[m].quotient.lift(&w);
                        let mut terms = Vec::new();
                        for (j, c) in free {
                            let l = &b.pieces[m].free[j];
                            if l.mask & (1 << i) == 0 {
                                let sign = insert_sign(i, l.mask);
                                terms.push((Polynomial::term(l.mono.clone(), c * sign), l.mask | (1 << i)));
                            }
                        }
                        let wedge = e.form_coords(&tb.pieces[m + 1], &terms);
                        axpy(&mut rhs, &Rational::one(), &wedge);
                    }
                    rhs.retain(|_, x| *x != q(0));
                    v = v.and(if lhs == rhs {
                        Verdict::pass(1)
                    } else {
                        Verdict::fail(1, format!("Leibniz fails for x{} times basis {k} of {m}-forms in degree {deg:?}", i + 1))
                    });
                }
            }
        }
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// Concrete presentations.

/// Characters of `x1..x4` under `x1 = z1z3, x2 = z2z4, x3 = z1z4, x4 = z2z3`.
pub const CONE_CHARACTERS: [[i64; 4]; 4] = [[1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 0, 1], [0, 1, 1, 0]];

/// Chart multidegrees `(x1-degree, y3-degree, y4-degree)` of `x1..x4`
/// under `x2 = y3 y4 x1, x3 = y3 x1, x4 = y4 x1`.
pub const CHART_WEIGHTS: [[i64; 3]; 4] = [[1, 0, 0], [1, 1, 1], [1, 1, 0], [1, 0, 1]];

fn xnames() -> Vec<String> {
    (1..=4).map(|i| format!("x{i}")).collect()
}

fn max_ideal_power(nvars: usize, vars: &[usize], n: usize) -> Vec<Polynomial> {
    Monomial::all_of_degree(vars.len(), n as u32)
        .into_iter()
        .map(|m| {
            let mut e = vec![0u32; nvars];
            for (k, &v) in vars.iter().enumerate() {
                e[v] = m.0[k];
            }
            Polynomial::monomial(Monomial(e))
        })
        .collect()
}

/// `Q_n` graded by torus characters.
pub fn qn_presentation(n: usize) -> Result<AlgebraPresentation, KaehlerError> {
    if n < 1 {
        return Err(KaehlerError::BadLevel { min: 1, got: n });
    }
    let mut gens = vec![segre_relation()];
    gens.extend(max_ideal_power(4, &[0, 1, 2, 3], n));
    Ok(AlgebraPresentation::over_field(
        xnames(),
        CONE_CHARACTERS.iter().map(|c| c.to_vec()).collect(),
        gens,
        MonomialOrder::grevlex(4),
    ))
}

/// `Ω_Q ⊗ Q_n`: forms on `Q_n` where only `d(x1x2 - x3x4)` is imposed.
pub fn qn_cone_model(n: usize) -> Result<AlgebraPresentation, KaehlerError> {
    Ok(qn_presentation(n)?.with_differential_relations(vec![segre_relation()]))
}

pub fn qn_module(n: usize, up_to: usize) -> Result<DifferentialModule, KaehlerError> {
    build_differential_module(qn_presentation(n)?, up_to)
}

/// `A = k[y3, y4]`.
pub fn chart_base() -> AlgebraPresentation {
    AlgebraPresentation::over_field(
        vec!["y3".into(), "y4".into()],
        vec![vec![0, 1, 0], vec![0, 0, 1]],
        vec![],
        MonomialOrder::grevlex(2),
    )
}

/// `B_n = k[x1]/(x1^n)`.
pub fn chart_fiber(n: usize) -> AlgebraPresentation {
    AlgebraPresentation::over_field(
        vec!["x1".into()],
        vec![vec![1, 0, 0]],
        vec![Polynomial::from_terms(1, &[(1, vec![n as u32])])],
        MonomialOrder::lex(1),
    )
}

/// `A_n = k[y3, y4, x1]/(x1^n)` over the field.
pub fn chart_algebra(n: usize) -> AlgebraPresentation {
    AlgebraPresentation::over_field(
        vec!["y3".into(), "y4".into(), "x1".into()],
        vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]],
        vec![Polynomial::from_terms(3, &[(1, vec![0, 0, n as u32])])],
        MonomialOrder::grevlex(3),
    )
}

/// `A_n` relative to `A`.
pub fn chart_algebra_over_base(n: usize) -> AlgebraPresentation {
    AlgebraPresentation::relative(
        chart_base(),
        vec!["x1".into()],
        vec![vec![1, 0, 0]],
        vec![Polynomial::from_terms(3, &[(1, vec![0, 0, n as u32])])],
        MonomialOrder::grevlex(3),
    )
}

/// `Q_n` with chart multidegrees, as a base ring in `x1..x4`.
pub fn qn_chart_graded(n: usize) -> AlgebraPresentation {
    let mut gens = vec![segre_relation()];
    gens.extend(max_ideal_power(4, &[0, 1, 2, 3], n));
    AlgebraPresentation::over_field(
        xnames(),
        CHART_WEIGHTS.iter().map(|c| c.to_vec()).collect(),
        gens,
        MonomialOrder::grevlex(4),
    )
}

/// Generators of `J = (x2 - y3 y4 x1, x3 - y3 x1, x4 - y4 x1)` in
/// variables `x1..x4, y3, y4`.
pub fn chart_ideal_j() -> Vec<Polynomial> {
    vec![
        Polynomial::from_terms(6, &[(1, vec![0, 1, 0, 0, 0, 0]), (-1, vec![1, 0, 0, 0, 1, 1])]),
        Polynomial::from_terms(6, &[(1, vec![0, 0, 1, 0, 0, 0]), (-1, vec![1, 0, 0, 0, 1, 0])]),
        Polynomial::from_terms(6, &[(1, vec![0, 0, 0, 1, 0, 0]), (-1, vec![1, 0, 0, 0, 0, 1])]),
    ]
}

/// `A_n = Q_n[y3, y4]/J` relative to `Q_n`.
pub fn chart_algebra_over_qn(n: usize) -> AlgebraPresentation {
    // Eliminate x2, x3, x4 first.
    let order = MonomialOrder::with_perm(OrderKind::Lex, vec![1, 2, 3, 0, 4, 5]);
    AlgebraPresentation::relative(
        qn_chart_graded(n),
        vec!["y3".into(), "y4".into()],
        vec![vec![0, 1, 0], vec![0, 0, 1]],
        chart_ideal_j(),
        order,
    )
}

/// Chart multidegrees `(i, b, c)` with `i ≤ imax` and `b + c ≤ ybox`.
pub fn chart_degrees(imax: i64, ybox: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..=imax {
        for b in 0..=ybox {
            for c in 0..=(ybox - b) {
                out.push(vec![i, b, c]);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Naive cotangent module.

/// `D_1` per multidegree.
#[derive(Clone, Debug)]
pub struct CotangentData {
    pub presentation: String,
    pub dims: BTreeMap<Vec<i64>, usize>,
}

impl CotangentData {
    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }
}

/// Kernel of `I/I² → ⊕ C dy` for `C = P/I`, `P` polynomial over the base.
pub fn naive_cotangent_d1(pres: &AlgebraPresentation, degrees: &[Vec<i64>]) -> Result<CotangentData, KaehlerError> {
    let nb = pres.base_var_count();
    let base_rels = pres.base_relations();
    for g in &base_rels {
        if g.terms().keys().any(|m| m.0[nb..].iter().any(|&e| e > 0)) {
            return Err(KaehlerError::NotPolynomialOverBase(g.render(&pres.names)));
        }
    }
    let fiber_rels = pres.fiber_relations();
    let engine = FormEngine::new(pres.clone())?;
    let dims: Result<Vec<(Vec<i64>, usize)>, KaehlerError> = degrees
        .par_iter()
        .map(|deg| Ok((deg.clone(), d1_in_degree(&engine, &base_rels, &fiber_rels, deg)?)))
        .collect();
    let names = pres.names.join(",");
    Ok(CotangentData {
        presentation: format!("k[{}]/({} relations)", names, pres.ideal_gens.len()),
        dims: dims?.into_iter().collect(),
    })
}

fn d1_in_degree(
    engine: &FormEngine,
    base_rels: &[Polynomial],
    fiber_rels: &[Polynomial],
    deg: &[i64],
) -> Result<usize, KaehlerError> {
    let monos = engine.monomials_of_degree(deg);
    if monos.is_empty() {
        return Ok(0);
    }
    let idx: HashMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let to_vec = |p: &Polynomial| -> SparseVec {
        p.terms().iter().map(|(m, c)| (idx[m], c.clone())).collect()
    };
    let multiples = |g: &Polynomial| -> Vec<SparseVec> {
        if g.is_zero() {
            return vec![];
        }
        let gd = engine.degree_of(g.terms().keys().next().unwrap());
        let rest = sub_deg(deg, &gd);
        engine
            .monomials_of_degree(&rest)
            .into_iter()
            .map(|t| to_vec(&g.mul_term(&t, &Rational::one())))
            .collect()
    };
    let mut big: Vec<SparseVec> = Vec::new();
    let mut small: Vec<SparseVec> = Vec::new();
    for g in base_rels {
        let ms = multiples(g);
        big.extend(ms.iter().cloned());
        small.extend(ms);
    }
    for g in fiber_rels {
        big.extend(multiples(g));
    }
    for (a, g) in fiber_rels.iter().enumerate() {
        for h in &fiber_rels[a..] {
            small.extend(multiples(&g.mul(h)));
        }
    }
    let ideal = Subspace::span(monos.len(), &big);
    let square = Subspace::span(monos.len(), &small);
    // Target: ⊕_y C_{deg - w_y} dy, in standard-monomial coordinates.
    let mut tindex: HashMap<(usize, Monomial), usize> = HashMap::new();
    for &y in engine.form_vars() {
        let rest = sub_deg(deg, &engine.presentation().weights[y]);
        for m in engine.standard_monomials(&rest) {
            let k = tindex.len();
            tindex.insert((y, m), k);
        }
    }
    let jac = |v: &SparseVec| -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, c) in v {
            let p = Polynomial::term(monos[i].clone(), c.clone());
            for &y in engine.form_vars() {
                let dp = engine.normal_form(&p.derivative(y));
                for (m, x) in dp.terms() {
                    axpy(&mut out, x, &unit(tindex[&(y, m.clone())]));
                }
            }
        }
        out
    };
    let basis = ideal.basis();
    let images: Vec<SparseVec> = basis.iter().map(jac).collect();
    let mat = SparseMatrix::from_columns(tindex.len(), &images)?;
    let ker = basis.len() - rank(&mat);
    debug_assert!(ideal.contains_subspace(&square));
    for v in square.basis() {
        debug_assert!(jac(&v).is_empty(), "I² must map to zero");
    }
    Ok(ker - square.dim())
}

// ---------------------------------------------------------------------------
// Explicit model of D_1(A_n/Q_n).

/// Free module `⊕_{i=2,3,4} A_n dx_i` in one chart multidegree.
#[derive(Clone, Debug)]
pub struct LocalFreeModule {
    pub n: usize,
    pub degree: Vec<i64>,
    /// (wedge index 0..3 for dx2, dx3, dx4; exponents (a, b, c) of x1^a y3^b y4^c)
    pub labels: Vec<(usize, [u32; 3])>,
    index: HashMap<(usize, [u32; 3]), usize>,
}

const DX_WEIGHTS: [[i64; 3]; 3] = [[1, 1, 1], [1, 1, 0], [1, 0, 1]];

impl LocalFreeModule {
    pub fn new(n: usize, deg: &[i64]) -> Self {
        let mut labels = Vec::new();
        for (k, w) in DX_WEIGHTS.iter().enumerate() {
            let r = [deg[0] - w[0], deg[1] - w[1], deg[2] - w[2]];
            if r.iter().all(|&x| x >= 0) && (r[0] as usize) < n {
                labels.push((k, [r[0] as u32, r[1] as u32, r[2] as u32]));
            }
        }
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        LocalFreeModule {
            n,
            degree: deg.to_vec(),
            labels,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Vector of `Σ c · x1^a y3^b y4^c dx_k`, dropping terms with `a ≥ n`.
    pub fn vector(&self, terms: &[(i64, usize, [u32; 3])]) -> SparseVec {
        let mut v = SparseVec::new();
        for &(c, k, e) in terms {
            if e[0] as usize >= self.n {
                continue;
            }
            let j = self.index[&(k, e)];
            axpy(&mut v, &q(c), &unit(j));
        }
        v
    }

    pub fn index_of(&self, k: usize, e: [u32; 3]) -> Option<usize> {
        self.index.get(&(k, e)).copied()
    }
}

fn monomials3(deg: [i64; 3], n: usize) -> Vec<[u32; 3]> {
    if deg.iter().any(|&x| x < 0) || deg[0] as usize >= n {
        return vec![];
    }
    vec![[deg[0] as u32, deg[1] as u32, deg[2] as u32]]
}

/// `G_n` and `J_n` in one multidegree, as subspaces of the free module.
#[derive(Clone, Debug)]
pub struct LocalAqPiece {
    pub free: LocalFreeModule,
    pub g: Subspace,
    pub j: Subspace,
}

impl LocalAqPiece {
    pub fn dim(&self) -> usize {
        self.g.sum(&self.j).dim() - self.j.dim()
    }
}

/// Image under `x1 ↦ x1, x2 ↦ x1 y3 y4, x3 ↦ x1 y3, x4 ↦ x1 y4` of `x^a`.
fn chart_image(a: &[u32; 4]) -> [u32; 3] {
    [
        a[0] + a[1] + a[2] + a[3],
        a[1] + a[2],
        a[1] + a[3],
    ]
}

pub fn local_aq_piece(n: usize, deg: &[i64]) -> LocalAqPiece {
    let free = LocalFreeModule::new(n, deg);
    let d = [deg[0], deg[1], deg[2]];
    let mut g_vecs = Vec::new();
    // f dx2 - f y4 dx3 - f y3 dx4
    for e in monomials3([d[0] - 1, d[1] - 1, d[2] - 1], n) {
        g_vecs.push(free.vector(&[
            (1, 0, e),
            (-1, 1, [e[0], e[1], e[2] + 1]),
            (-1, 2, [e[0], e[1] + 1, e[2]]),
        ]));
    }
    // x1^{n-1} g dx3 and x1^{n-1} h dx4
    let nn = n as i64 - 1;
    for e in monomials3([d[0] - 1 - nn, d[1] - 1, d[2]], n) {
        g_vecs.push(free.vector(&[(1, 1, [e[0] + nn as u32, e[1], e[2]])]));
    }
    for e in monomials3([d[0] - 1 - nn, d[1], d[2] - 1], n) {
        g_vecs.push(free.vector(&[(1, 2, [e[0] + nn as u32, e[1], e[2]])]));
    }
    let mut j_vecs = Vec::new();
    // s (x1 dx2 - y4 x1 dx3 - y3 x1 dx4)
    for e in monomials3([d[0] - 2, d[1] - 1, d[2] - 1], n) {
        j_vecs.push(free.vector(&[
            (1, 0, [e[0] + 1, e[1], e[2]]),
            (-1, 1, [e[0] + 1, e[1], e[2] + 1]),
            (-1, 2, [e[0] + 1, e[1] + 1, e[2]]),
        ]));
    }
    // s d(x^a), |a| = n, relative to x1 (dx1 = 0), coefficients through the chart map.
    for a in Monomial::all_of_degree(4, n as u32) {
        let a4 = [a.0[0], a.0[1], a.0[2], a.0[3]];
        let img = chart_image(&a4);
        let w_total = [img[0] as i64, img[1] as i64, img[2] as i64];
        let s_deg = [d[0] - w_total[0], d[1] - w_total[1], d[2] - w_total[2]];
        if s_deg.iter().any(|&x| x < 0) {
            continue;
        }
        let s = [s_deg[0] as u32, s_deg[1] as u32, s_deg[2] as u32];
        let mut terms = Vec::new();
        for (k, var) in [1usize, 2, 3].iter().enumerate() {
            if a4[*var] == 0 {
                continue;
            }
            let mut b = a4;
            b[*var] -= 1;
            let ci = chart_image(&b);
            terms.push((a4[*var] as i64, k, [ci[0] + s[0], ci[1] + s[1], ci[2] + s[2]]));
        }
        let v = free.vector(&terms);
        if !v.is_empty() {
            j_vecs.push(v);
        }
    }
    let dim = free.dim();
    LocalAqPiece {
        g: Subspace::span(dim, &g_vecs),
        j: Subspace::span(dim, &j_vecs),
        free,
    }
}

/// `G_n / J_n` dimension per multidegree.
pub fn local_aq_model(n: usize, degrees: &[Vec<i64>]) -> Result<CotangentData, KaehlerError> {
    if n < 2 {
        return Err(KaehlerError::BadLevel { min: 2, got: n });
    }
    let dims = degrees
        .par_iter()
        .map(|d| (d.clone(), local_aq_piece(n, d).dim()))
        .collect();
    Ok(CotangentData {
        presentation: format!("G_{n}/J_{n}"),
        dims,
    })
}

/// `ker β_n = (x1^{n-1} A_n dx3 ⊕ x1^{n-1} A_n dx4 + J_n) / J_n` in one
/// multidegree, inside `free / J_n`.
struct BetaKernelPiece {
    free: LocalFreeModule,
    quotient: Quotient,
    kernel: Subspace,
    /// `{g ∈ G_n + J_n : g ≡ 0 mod x1}` in the same quotient.
    divisible: Subspace,
}

fn beta_kernel_piece(n: usize, deg: &[i64]) -> Result<BetaKernelPiece, KaehlerError> {
    let piece = local_aq_piece(n, deg);
    let free = piece.free;
    let labels = VectorSpace::indexed("e", free.dim());
    let quotient = quotient_space(&labels, &piece.j.basis())?;
    let top: Vec<SparseVec> = free
        .labels
        .iter()
        .enumerate()
        .filter(|(_, (k, e))| *k > 0 && e[0] as usize + 1 == n)
        .map(|(i, _)| quotient.project(&unit(i)))
        .collect();
    let kernel = Subspace::span(quotient.dim(), &top);
    let x1_multiples: Vec<SparseVec> = free
        .labels
        .iter()
        .enumerate()
        .filter(|(_, (_, e))| e[0] >= 1)
        .map(|(i, _)| unit(i))
        .collect();
    let inside = piece.g.sum(&piece.j).intersect(&Subspace::span(free.dim(), &x1_multiples));
    let divisible = Subspace::span(
        quotient.dim(),
        &inside.basis().iter().map(|v| quotient.project(v)).collect::<Vec<_>>(),
    );
    Ok(BetaKernelPiece { free, quotient, kernel, divisible })
}

/// The pro-system `{ker β_n}` for `n = 2..=nmax` over a box of chart
/// degrees, with transitions induced by `x1^{n+1} ↦ x1^n` truncation.
/// The verdict records whether the kernel agrees with the multiples of
/// `x1` in `G_n + J_n` at every degree.
pub fn beta_kernel_system(nmax: usize, degrees: &[Vec<i64>]) -> Result<(crate::prosys::ProVectorSystem, Verdict), KaehlerError> {
    if nmax < 2 {
        return Err(KaehlerError::BadLevel { min: 2, got: nmax });
    }
    let levels: Vec<Vec<(Vec<i64>, BetaKernelPiece)>> = (2..=nmax)
        .map(|n| {
            degrees
                .par_iter()
                .map(|d| Ok((d.clone(), beta_kernel_piece(n, d)?)))
                .collect::<Result<Vec<_>, KaehlerError>>()
        })
        .collect::<Result<_, _>>()?;
    let mut verdict = Verdict::pass(0);
    for (k, lvl) in levels.iter().enumerate() {
        for (d, p) in lvl {
            let ok = p.kernel.same_as(&p.divisible);
            verdict = verdict.and(if ok {
                Verdict::pass(1)
            } else {
                Verdict::fail(1, format!("n={} degree {:?}: kernel dim {} vs x1-multiples dim {}", k + 2, d, p.kernel.dim(), p.divisible.dim()))
            });
        }
    }
    let spaces: Vec<VectorSpace> = levels
        .iter()
        .map(|lvl| {
            let labels = lvl
                .iter()
                .flat_map(|(d, p)| (0..p.kernel.dim()).map(move |i| format!("{:?}#{i}", d)))
                .collect();
            VectorSpace::new(labels).expect("distinct labels")
        })
        .collect();
    let mut transitions = Vec::new();
    for k in 0..levels.len() - 1 {
        let (hi, lo) = (&levels[k + 1], &levels[k]);
        let n = k + 2;
        let mut cols = Vec::new();
        let mut off = 0;
        for ((_, ph), (_, pl)) in hi.iter().zip(lo.iter()) {
            for b in ph.kernel.basis() {
                let amb = ph.quotient.lift(&b);
                let mut down = SparseVec::new();
                for (i, x) in amb {
                    let (kk, e) = ph.free.labels[i];
                    if (e[0] as usize) < n {
                        let j = pl.free.index_of(kk, e).expect("label survives truncation");
                        down.insert(j, x);
                    }
                }
                let coords = pl
                    .kernel
                    .coordinates(&pl.quotient.project(&down))
                    .ok_or(KaehlerError::LeavesKernel(n))?;
                cols.push(coords.into_iter().map(|(i, x)| (i + off, x)).collect());
            }
            off += pl.kernel.dim();
        }
        transitions.push(LinearMap::from_images(spaces[k + 1].clone(), spaces[k].clone(), &cols)?);
    }
    let sys = crate::prosys::ProVectorSystem::new(2, spaces, transitions)?;
    Ok((sys, verdict))
}

// ---------------------------------------------------------------------------
// Chart-level verifications.

/// Outcome of a boxed verification: pass flag, compared quantities, and a
/// human-readable witness on failure.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass(checked: usize) -> Self {
        Verdict { pass: true, checked, witness: None }
    }

    pub fn fail(checked: usize, witness: String) -> Self {
        Verdict { pass: false, checked, witness: Some(witness) }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        if !self.pass {
            return self;
        }
        if !other.pass {
            return Verdict { checked: self.checked + other.checked, ..other };
        }
        Verdict::pass(self.checked + other.checked)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "PASS ({} checks)", self.checked),
            Some(w) => write!(f, "FAIL after {} checks: {}", self.checked, w),
        }
    }
}

fn piece_dims_by_degree(engine: &FormEngine, m: usize, degrees: &[Vec<i64>]) -> BTreeMap<Vec<i64>, usize> {
    degrees
        .par_iter()
        .map(|d| {
            let dim = if m > engine.form_vars().len() { 0 } else { engine.piece(d, m).dim() };
            (d.clone(), dim)
        })
        .collect()
}

/// Dimension of a tensor product of graded spaces in each degree.
fn tensor_dims(
    a: &BTreeMap<Vec<i64>, usize>,
    b: &BTreeMap<Vec<i64>, usize>,
    deg: &[i64],
) -> usize {
    let mut total = 0;
    for (da, &xa) in a {
        let rest = sub_deg(deg, da);
        if let Some(&xb) = b.get(&rest) {
            total += xa * xb;
        }
    }
    total
}

/// Compares `dim Ω^m_{A_n}` with `(Ω^m_A ⊗ B_n) ⊕ (Ω^{m-1}_A ⊗ Ω^1_{B_n})`
/// in every degree of the box.
pub fn verify_chart_splitting(m: usize, n: usize, degrees: &[Vec<i64>]) -> Result<Verdict, KaehlerError> {
    let an = FormEngine::new(chart_algebra(n))?;
    let a = FormEngine::new(chart_base())?;
    let bn = FormEngine::new(chart_fiber(n))?;
    let lhs = piece_dims_by_degree(&an, m, degrees);
    // Factor degrees: A lives in (0, b, c), B_n in (i, 0, 0).
    let mut a_degs = BTreeSet::new();
    let mut b_degs = BTreeSet::new();
    for d in degrees {
        a_degs.insert(vec![0, d[1], d[2]]);
        b_degs.insert(vec![d[0], 0, 0]);
    }
    let a_degs: Vec<Vec<i64>> = a_degs.into_iter().collect();
    let b_degs: Vec<Vec<i64>> = b_degs.into_iter().collect();
    let a_m = piece_dims_by_degree(&a, m, &a_degs);
    let b_0 = piece_dims_by_degree(&bn, 0, &b_degs);
    let b_1 = piece_dims_by_degree(&bn, 1, &b_degs);
    let a_m1 = if m >= 1 { piece_dims_by_degree(&a, m - 1, &a_degs) } else { BTreeMap::new() };
    let mut checked = 0;
    for d in degrees {
        let rhs = tensor_dims(&a_m, &b_0, d) + if m >= 1 { tensor_dims(&a_m1, &b_1, d) } else { 0 };
        checked += 1;
        if lhs[d] != rhs {
            return Ok(Verdict::fail(
                checked,
                format!("degree {:?}: dim Ω^{} = {} but split side = {}", d, m, lhs[d], rhs),
            ));
        }
    }
    Ok(Verdict::pass(checked))
}

/// Kernel of d on reduced forms of the chart algebra: maps isomorphically
/// onto relative 1-forms in form degree 1, and equals `d(Ω^{m-1}_A ⊗ (x1))`
/// in form degrees ≥ 2.
pub fn verify_ker_d_claims(n: usize, degrees: &[Vec<i64>]) -> Result<Verdict, KaehlerError> {
    if n < 1 {
        return Err(KaehlerError::BadLevel { min: 1, got: n });
    }
    let abs = FormEngine::new(chart_algebra(n))?;
    let rel = FormEngine::new(chart_algebra_over_base(n))?;
    let x1 = 2usize;
    let results: Result<Vec<Verdict>, KaehlerError> = degrees
        .par_iter()
        .map(|deg| -> Result<Verdict, KaehlerError> {
            let block = abs.block(deg, 3)?;
            let mut v = Verdict::pass(0);
            if deg[0] == 0 {
                // Reduced forms vanish in x1-degree 0.
                return Ok(v);
            }
            // d0 is injective on reduced functions.
            let k0 = kernel_basis(&block.d[0].matrix).len();
            v = v.and(if k0 == 0 {
                Verdict::pass(1)
            } else {
                Verdict::fail(1, format!("degree {:?}: ker d0 has dim {}", deg, k0))
            });
            // Claim 1.
            let ker1 = kernel_basis(&block.d[1].matrix);
            let rel_piece = rel.piece(deg, 1);
            let proj = abs.induced_map(&block.pieces[1], &rel, &rel_piece)?;
            let imgs: Vec<SparseVec> = ker1.iter().map(|k| proj.apply(k)).collect::<Result<_, _>>()?;
            let r = rank(&SparseMatrix::from_columns(rel_piece.dim(), &imgs)?);
            v = v.and(if r == ker1.len() && r == rel_piece.dim() {
                Verdict::pass(1)
            } else {
                Verdict::fail(
                    1,
                    format!(
                        "degree {:?}: ker d1 dim {}, relative forms dim {}, image rank {}",
                        deg,
                        ker1.len(),
                        rel_piece.dim(),
                        r
                    ),
                )
            });
            // Claim 2 for m = 2, 3.
            for m in 2..=3usize {
                let piece = &block.pieces[m];
                let ker = if m < 3 {
                    Subspace::span(piece.dim(), &kernel_basis(&block.d[m].matrix))
                } else {
                    Subspace::full(piece.dim())
                };
                let src = &block.pieces[m - 1];
                let mut gens = Vec::new();
                for mask in subsets_of(&[0, 1], m - 1) {
                    let rest = sub_deg(deg, &abs.weight_of_mask(mask));
                    for mono in abs.standard_monomials(&rest) {
                        if mono.0[x1] == 0 {
                            continue;
                        }
                        let c = abs.form_coords(src, &[(Polynomial::monomial(mono), mask)]);
                        gens.push(block.d[m - 1].apply(&c)?);
                    }
                }
                let img = Subspace::span(piece.dim(), &gens);
                v = v.and(if img.same_as(&ker) {
                    Verdict::pass(1)
                } else {
                    Verdict::fail(
                        1,
                        format!("degree {:?}, m = {}: ker d dim {}, image dim {}", deg, m, ker.dim(), img.dim()),
                    )
                });
            }
            Ok(v)
        })
        .collect();
    Ok(results?.into_iter().fold(Verdict::pass(0), Verdict::and))
}

/// Relative 1-forms of `A_n` over `Q_n` agree with `Ω^1_{A/k}` in every
/// degree, through the restriction `x1 ↦ 0`.
pub fn verify_relative_forms_collapse(n: usize, degrees: &[Vec<i64>]) -> Result<Verdict, KaehlerError> {
    if n < 1 {
        return Err(KaehlerError::BadLevel { min: 1, got: n });
    }
    let rel = FormEngine::new(chart_algebra_over_qn(n))?;
    let a = FormEngine::new(chart_base())?;
    let mut checked = 0;
    for deg in degrees {
        checked += 1;
        let p = rel.piece(deg, 1);
        let expected = if deg[0] == 0 { a.piece(deg, 1).dim() } else { 0 };
        if p.dim() != expected {
            return Ok(Verdict::fail(
                checked,
                format!("degree {:?}: relative forms dim {} vs Ω¹_A dim {}", deg, p.dim(), expected),
            ));
        }
        if deg[0] == 0 && expected > 0 {
            // Restriction to A: free labels in x1-degree 0 involve only y's.
            let ap = a.piece(deg, 1);
            let images: Vec<SparseVec> = (0..p.dim())
                .map(|k| {
                    let l = p.basis_label(k);
                    let mono = Monomial(vec![l.mono.0[4], l.mono.0[5]]);
                    let mask = l.mask >> 4;
                    a.form_coords(&ap, &[(Polynomial::monomial(mono), mask)])
                })
                .collect();
            let r = rank(&SparseMatrix::from_columns(ap.dim(), &images)?);
            if r != expected {
                return Ok(Verdict::fail(checked, format!("degree {:?}: restriction has rank {}", deg, r)));
            }
        }
    }
    Ok(Verdict::pass(checked))
}

/// `d(f'·(y3 x1 - x3))` agrees with `ᾱ(f')·x1 dy3` in the free module over
/// `A_n`, and dies in relative forms.
pub fn relative_differential_identity(n: usize, f_prime: &Polynomial) -> Result<bool, KaehlerError> {
    let rel = FormEngine::new(chart_algebra_over_qn(n))?;
    let j = &chart_ideal_j()[1];
    let g = f_prime.mul(j).scale(&q(-1));
    let y3 = 4usize;
    let gdeg = rel.degree_of(g.terms().keys().next().expect("nonzero"));
    let piece = rel.piece(&gdeg, 1);
    let lhs: Vec<(Polynomial, Mask)> = rel
        .form_vars()
        .iter()
        .map(|&y| (g.derivative(y), 1 << y))
        .collect();
    let x1 = Polynomial::var(6, 0);
    let alpha: Vec<Polynomial> = vec![
        x1.clone(),
        Polynomial::from_terms(6, &[(1, vec![1, 0, 0, 0, 1, 1])]),
        Polynomial::from_terms(6, &[(1, vec![1, 0, 0, 0, 1, 0])]),
        Polynomial::from_terms(6, &[(1, vec![1, 0, 0, 0, 0, 1])]),
        Polynomial::var(6, 4),
        Polynomial::var(6, 5),
    ];
    let f = f_prime.substitute(&alpha);
    let rhs = vec![(f.mul(&x1), 1u32 << y3)];
    let a = rel.free_vector(&piece, &lhs);
    let b = rel.free_vector(&piece, &rhs);
    Ok(a == b && piece.quotient.project(&a).is_empty())
}

/// Per-level record of the cone model `Ω^4_Q ⊗ Q_n`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Omega4Level {
    pub n: usize,
    pub model_dim: usize,
    pub actual_dim: usize,
    pub omega_nonzero: bool,
    pub annihilated_by_vars: bool,
    pub transition_preserves_omega: Option<bool>,
}

pub fn omega_mask() -> Mask {
    0b1111
}

/// `Ω^4_Q ⊗ Q_n = kω` with `x_i ω = 0`, compatibly in `n`.
pub fn omega4_cone_check(nmax: usize) -> Result<(Verdict, Vec<Omega4Level>), KaehlerError> {
    if nmax < 1 {
        return Err(KaehlerError::BadLevel { min: 1, got: nmax });
    }
    let mut levels = Vec::new();
    let mut prev: Option<DifferentialModule> = None;
    let mut verdict = Verdict::pass(0);
    let one = Polynomial::constant(4, Rational::one());
    for n in (1..=nmax).rev() {
        let model = build_differential_module(qn_cone_model(n)?, 4)?;
        let actual = qn_module(n, 4)?;
        let omega = model.form(4, &[(one.clone(), omega_mask())]);
        let omega_nonzero = omega.as_ref().is_some_and(|v| !v.is_empty());
        let wdeg: Vec<i64> = vec![2, 2, 2, 2];
        let mut annihilated = true;
        for i in 0..4 {
            let xi = Polynomial::var(4, i);
            let target_deg = add_deg(&wdeg, &CONE_CHARACTERS[i]);
            let src = &model.blocks[&wdeg].pieces[4];
            let dst = model.engine.piece(&target_deg, 4);
            let mm = model.engine.mul_map(src, &dst, &xi)?;
            if !mm.is_zero() {
                annihilated = false;
            }
        }
        let transition = match &prev {
            None => None,
            Some(up) => {
                let src = &up.blocks[&wdeg].pieces[4];
                let dst = &model.blocks[&wdeg].pieces[4];
                let t = up.engine.induced_map(src, &model.engine, dst)?;
                let w_up = up.engine.form_coords(src, &[(one.clone(), omega_mask())]);
                let w_dn = model.engine.form_coords(dst, &[(one.clone(), omega_mask())]);
                Some(t.apply(&w_up)? == w_dn)
            }
        };
        let rec = Omega4Level {
            n,
            model_dim: model.dim(4),
            actual_dim: actual.dim(4),
            omega_nonzero,
            annihilated_by_vars: annihilated,
            transition_preserves_omega: transition,
        };
        let ok = rec.model_dim == 1
            && rec.omega_nonzero
            && rec.annihilated_by_vars
            && rec.transition_preserves_omega != Some(false)
            && rec.actual_dim == usize::from(n >= 2);
        verdict = verdict.and(if ok {
            Verdict::pass(1)
        } else {
            Verdict::fail(1, format!("{:?}", rec))
        });
        levels.push(rec);
        prev = Some(model);
    }
    levels.reverse();
    Ok((verdict, levels))
}

/// A tower of finite presentations with a levelwise map from a source
/// model of forms to the genuine forms (identity on free generators).
#[derive(Clone, Debug)]
pub struct SurjectionSystem {
    /// `(source, target)` presentations for levels `1..`.
    pub levels: Vec<(AlgebraPresentation, AlgebraPresentation)>,
}

impl SurjectionSystem {
    /// `{Ω_Q ⊗ Q_n → Ω_{Q_n}}`.
    pub fn cone_forms(nmax: usize) -> Result<Self, KaehlerError> {
        let levels = (1..=nmax)
            .map(|n| Ok((qn_cone_model(n)?, qn_presentation(n)?)))
            .collect::<Result<Vec<_>, KaehlerError>>()?;
        Ok(SurjectionSystem { levels })
    }

    /// Identity maps `Ω_{Q_n} → Ω_{Q_n}`.
    pub fn identity(nmax: usize) -> Result<Self, KaehlerError> {
        let levels = (1..=nmax)
            .map(|n| Ok((qn_presentation(n)?, qn_presentation(n)?)))
            .collect::<Result<Vec<_>, KaehlerError>>()?;
        Ok(SurjectionSystem { levels })
    }

    /// Builds the strict pro-map on `r`-forms.
    pub fn exterior_power(&self, r: usize) -> Result<crate::prosys::StrictProMap, KaehlerError> {
        use crate::prosys::{ProVectorSystem, StrictProMap};
        let mods: Vec<(DifferentialModule, DifferentialModule)> = self
            .levels
            .par_iter()
            .map(|(s, t)| {
                Ok((
                    build_differential_module(s.clone(), r)?,
                    build_differential_module(t.clone(), r)?,
                ))
            })
            .collect::<Result<_, KaehlerError>>()?;
        let mut comps = Vec::new();
        for (lvl, (s, t)) in mods.iter().enumerate() {
            let f = assemble_block_map(s, r, t, r, |deg| {
                let sp = &s.blocks[deg].pieces[r];
                let tp = &t.blocks.get(deg)?.pieces[r];
                s.engine.induced_map(sp, &t.engine, tp).ok().map(|m| m.matrix)
            })?;
            if f.rank() != f.target.dim() {
                return Err(KaehlerError::NotSurjective(lvl + 1));
            }
            comps.push(f);
        }
        let trans = |k: usize, src: bool| -> Result<LinearMap, KaehlerError> {
            let (hi, lo) = if src {
                (&mods[k + 1].0, &mods[k].0)
            } else {
                (&mods[k + 1].1, &mods[k].1)
            };
            transition_map(hi, lo, r)
        };
        let mut s_tr = Vec::new();
        let mut t_tr = Vec::new();
        for k in 0..mods.len().saturating_sub(1) {
            s_tr.push(trans(k, true)?);
            t_tr.push(trans(k, false)?);
        }
        let source = ProVectorSystem::new(1, mods.iter().map(|m| m.0.space(r)).collect(), s_tr)?;
        let target = ProVectorSystem::new(1, mods.iter().map(|m| m.1.space(r)).collect(), t_tr)?;
        Ok(StrictProMap::new(source, target, comps)?)
    }
}

/// Map `space(m)` of a higher level to a lower one, induced by reduction.
pub fn transition_map(hi: &DifferentialModule, lo: &DifferentialModule, m: usize) -> Result<LinearMap, KaehlerError> {
    assemble_block_map(hi, m, lo, m, |deg| {
        let sp = &hi.blocks[deg].pieces[m];
        let tp = &lo.blocks.get(deg)?.pieces[m];
        hi.engine.induced_map(sp, &lo.engine, tp).ok().map(|f| f.matrix)
    })
}

/// Result of the exterior-power check.
#[derive(Clone, Debug)]
pub struct ExteriorPowerReport {
    pub r: usize,
    pub window: usize,
    pub degree_one: crate::prosys::ProVerdict,
    pub power: crate::prosys::ProVerdict,
}

/// Checks that `Λ^r` of a levelwise surjective pro-isomorphism of
/// differentials is again a pro-isomorphism within the window.
pub fn pro_exterior_power_check(r: usize, system: &SurjectionSystem, window: usize) -> Result<ExteriorPowerReport, KaehlerError> {
    use crate::prosys::certify_pro_iso;
    let one = system.exterior_power(1)?;
    let degree_one = certify_pro_iso(&one, window)?;
    let power = certify_pro_iso(&system.exterior_power(r)?, window)?;
    Ok(ExteriorPowerReport { r, window, degree_one, power })
}

// ---------------------------------------------------------------------------
// Modules over a finite algebra.

/// `A^rank / (A-span of relations)` over a finite algebra.
#[derive(Clone, Debug)]
pub struct PresentedModule<'a> {
    pub algebra: &'a crate::polyring::FiniteAlgebra,
    pub rank: usize,
    /// Each relation lists one algebra element (coordinates) per generator.
    pub relations: Vec<Vec<SparseVec>>,
}

impl<'a> PresentedModule<'a> {
    pub fn free(algebra: &'a crate::polyring::FiniteAlgebra, rank: usize) -> Self {
        PresentedModule { algebra, rank, relations: vec![] }
    }

    fn flat(&self, rel: &[SparseVec]) -> SparseVec {
        let d = self.algebra.dim();
        let mut v = SparseVec::new();
        for (g, a) in rel.iter().enumerate() {
            for (&i, x) in a {
                v.insert(g * d + i, x.clone());
            }
        }
        v
    }

    /// Dimension over the ground field.
    pub fn dim(&self) -> usize {
        let d = self.algebra.dim();
        let mut span = Vec::new();
        for rel in &self.relations {
            for b in 0..d {
                let bv = unit(b);
                let shifted: Vec<SparseVec> = rel.iter().map(|a| self.algebra.mul(&bv, a)).collect();
                span.push(self.flat(&shifted));
            }
        }
        self.rank * d - Subspace::span(self.rank * d, &span).dim()
    }

    /// `Λ^m` over the algebra.
    pub fn exterior_power(&self, m: usize) -> PresentedModule<'a> {
        let vars: Vec<usize> = (0..self.rank).collect();
        let top: Vec<Mask> = subsets_of(&vars, m);
        let idx: HashMap<Mask, usize> = top.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut relations = Vec::new();
        if m >= 1 {
            for rel in &self.relations {
                for j in subsets_of(&vars, m - 1) {
                    let mut out = vec![SparseVec::new(); top.len()];
                    let mut nonzero = false;
                    for (g, a) in rel.iter().enumerate() {
                        if a.is_empty() || j & (1 << g) != 0 {
                            continue;
                        }
                        let s = insert_sign(g, j);
                        let k = idx[&(j | (1 << g))];
                        axpy(&mut out[k], &s, a);
                        nonzero = true;
                    }
                    if nonzero {
                        relations.push(out);
                    }
                }
            }
        }
        PresentedModule { algebra: self.algebra, rank: top.len(), relations }
    }

    /// Tensor product over the algebra.
    pub fn tensor(&self, other: &PresentedModule<'a>) -> PresentedModule<'a> {
        let rank = self.rank * other.rank;
        let mut relations = Vec::new();
        for rel in &self.relations {
            for j in 0..other.rank {
                let mut out = vec![SparseVec::new(); rank];
                for (g, a) in rel.iter().enumerate() {
                    out[g * other.rank + j] = a.clone();
                }
                relations.push(out);
            }
        }
        for rel in &other.relations {
            for i in 0..self.rank {
                let mut out = vec![SparseVec::new(); rank];
                for (g, a) in rel.iter().enumerate() {
                    out[i * other.rank + g] = a.clone();
                }
                relations.push(out);
            }
        }
        PresentedModule { algebra: self.algebra, rank, relations }
    }

    /// Direct sum.
    pub fn direct_sum(&self, other: &PresentedModule<'a>) -> PresentedModule<'a> {
        let rank = self.rank + other.rank;
        let mut relations = Vec::new();
        for rel in &self.relations {
            let mut out = rel.clone();
            out.resize(rank, SparseVec::new());
            relations.push(out);
        }
        for rel in &other.relations {
            let mut out = vec![SparseVec::new(); self.rank];
            out.extend(rel.iter().cloned());
            relations.push(out);
        }
        PresentedModule { algebra: self.algebra, rank, relations }
    }
}

/// Upper bound `Σ_i dim(Λ^i M' ⊗ Λ^{m-i} M'')` from the filtration of
/// `Λ^m M` attached to `0 → M' → M → M'' → 0`.
pub fn exterior_filtration_bound(sub: &PresentedModule, quot: &PresentedModule, m: usize) -> usize {
    (0..=m)
        .map(|i| sub.exterior_power(i).tensor(&quot.exterior_power(m - i)).dim())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs() {
        assert_eq!(insert_sign(0, 0b110), q(1));
        assert_eq!(insert_sign(2, 0b011), q(1));
        assert_eq!(insert_sign(1, 0b101), q(-1));
        assert_eq!(wedge_sign(0b10, 0b01), Some(q(-1)));
        assert_eq!(wedge_sign(0b1, 0b1), None);
    }

    #[test]
    fn dual_numbers_have_one_dimensional_forms() {
        let p = AlgebraPresentation::over_field(
            vec!["x".into()],
            vec![vec![1]],
            vec![Polynomial::from_terms(1, &[(1, vec![2])])],
            MonomialOrder::lex(1),
        );
        let dm = build_differential_module(p, 1).unwrap();
        assert_eq!(dm.dim(0), 2);
        assert_eq!(dm.dim(1), 1);
    }

    #[test]
    fn q1_has_no_forms() {
        let dm = qn_module(1, 4).unwrap();
        assert_eq!(dm.dim(0), 1);
        for m in 1..=4 {
            assert_eq!(dm.dim(m), 0);
        }
    }

    #[test]
    fn monomial_enumeration_by_weight() {
        let e = FormEngine::new(chart_algebra_over_qn(3)).unwrap();
        let ms = e.monomials_of_degree(&[1, 1, 0]);
        // x3 and x1 y3
        assert_eq!(ms.len(), 2);
    }
}
