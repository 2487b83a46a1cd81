//! Finite-level reductions of the K-groups of the cone.
//!
//! The relative groups `K̃_m` sit in a short exact sequence of pro-groups
//! whose outer terms are built from the top Hodge pieces `Ω^m/dΩ^{m-1}` of
//! the truncations `Q_n` and from global sections on the neighborhoods
//! `E_n`. This module builds those terms as strict maps of pro-systems
//! and certifies vanishing or non-vanishing within a finite window. The
//! identification with K-theory itself rests on pro-descent, which is
//! taken as an input and not checked.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactla::{q, unit, LinalgError, LinearMap, Rational, SparseVec};
use crate::kaehler::{
    build_differential_module, hodge_piece_hc, omega4_cone_check, omega_mask, qn_presentation, transition_map,
    DifferentialModule, HodgeTop, KaehlerError, Omega4Level, Verdict, CHART_WEIGHTS, CONE_CHARACTERS,
};
use crate::polyring::{Monomial, Polynomial};
use crate::prosys::{certify_pro_iso, certify_pro_zero, pro_cokernel, pro_kernel, ProError, ProVectorSystem, ProVerdict, StrictProMap};
use crate::sheafcalc::{
    filtration_tilde_omega, h_filtered, level, BlowUp, GlobalSections, SheafError, SheafModel,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KTheoryError {
    #[error(transparent)]
    Kaehler(#[from] KaehlerError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Pro(#[from] ProError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("level must be at least {min}, got {got}")]
    BadLevel { min: usize, got: usize },
    #[error("form degree {0} out of range")]
    FormDegree(usize),
    #[error("target at level {n} disagrees: Čech {cech}, filtration {filtered}")]
    TargetDisagreement { n: usize, cech: usize, filtered: usize },
    #[error("pulled-back form is not a global section at character {0:?}")]
    NotGlobal(Vec<i64>),
    #[error("chart coordinates of the cone generators disagree with the chart algebra grading")]
    ChartMismatch,
}

/// Parameters shared by every computation: top level, certification
/// window and padding of the character box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Params {
    pub nmax: usize,
    pub window: usize,
    pub pad: i64,
}

impl Default for Params {
    fn default() -> Self {
        Params { nmax: 5, window: 3, pad: 4 }
    }
}

/// Kähler forms of `Q_1 .. Q_nmax`, up to degree 5.
pub struct ConeLevels {
    pub modules: Vec<DifferentialModule>,
}

impl ConeLevels {
    pub fn build(nmax: usize) -> Result<Self, KTheoryError> {
        if nmax < 1 {
            return Err(KTheoryError::BadLevel { min: 1, got: nmax });
        }
        let modules = (1..=nmax)
            .into_par_iter()
            .map(|n| Ok(build_differential_module(qn_presentation(n)?, 5)?))
            .collect::<Result<Vec<_>, KTheoryError>>()?;
        Ok(ConeLevels { modules })
    }

    pub fn nmax(&self) -> usize {
        self.modules.len()
    }

    pub fn module(&self, n: usize) -> &DifferentialModule {
        &self.modules[n - 1]
    }

    /// `{Ω^m_{Q_n}}` with the truncation maps.
    pub fn forms_system(&self, m: usize) -> Result<ProVectorSystem, KTheoryError> {
        let levels = self.modules.iter().map(|dm| dm.space(m)).collect();
        let transitions = self
            .modules
            .windows(2)
            .map(|w| transition_map(&w[1], &w[0], m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ProVectorSystem::new(1, levels, transitions)?)
    }

    /// Top Hodge pieces `HC_m(Q_n) = Ω^m/dΩ^{m-1}`; for `m = 0` the
    /// reduced piece `m̄/m̄^n`.
    pub fn hodge_tops(&self, m: usize) -> Result<Vec<HodgeTop>, KTheoryError> {
        self.modules
            .iter()
            .map(|dm| {
                let mut h = hodge_piece_hc(dm, m)?;
                if m == 0 {
                    h.blocks.retain(|deg, _| deg.iter().any(|&x| x != 0));
                }
                Ok(h)
            })
            .collect()
    }

    pub fn hc_system(&self, m: usize) -> Result<(Vec<HodgeTop>, ProVectorSystem), KTheoryError> {
        let tops = self.hodge_tops(m)?;
        let mut transitions = Vec::new();
        for k in 0..tops.len().saturating_sub(1) {
            let t = transition_map(&self.modules[k + 1], &self.modules[k], m)?;
            let lift = hodge_lift(&tops[k + 1], &self.modules[k + 1])?;
            let proj = tops[k].projection(&self.modules[k])?;
            transitions.push(proj.after(&t.after(&lift)?)?);
        }
        let levels = tops.iter().map(|h| h.space()).collect();
        Ok((tops, ProVectorSystem::new(1, levels, transitions)?))
    }
}

/// Section of the projection `Ω^m → HC_m` given by the chosen lifts.
fn hodge_lift(h: &HodgeTop, dm: &DifferentialModule) -> Result<LinearMap, KTheoryError> {
    let so = dm.offsets(h.m);
    let mut cols = Vec::new();
    for (deg, q) in &h.blocks {
        for v in &q.lifts {
            cols.push(v.iter().map(|(&i, x)| (i + so[deg], x.clone())).collect());
        }
    }
    Ok(LinearMap::from_images(h.space(), dm.space(h.m), &cols)?)
}

/// `π^*` of a form given in piece coordinates at block `deg`, as an
/// ambient exterior vector in the dlog frame.
fn pullback_piece(bu: &BlowUp, dm: &DifferentialModule, deg: &[i64], m: usize, coords: &SparseVec) -> SparseVec {
    let piece = &dm.blocks[deg].pieces[m];
    let free = piece.quotient.lift(coords);
    let mut out = SparseVec::new();
    for (i, c) in free {
        let label = &piece.free[i];
        for (j, x) in bu.pullback_form(label.mask) {
            let e = out.entry(j).or_insert_with(|| q(0));
            *e += x * &c;
        }
    }
    out.retain(|_, x| *x != q(0));
    out
}

/// Coordinates in `gs` of a diagonal ambient section at character `u`.
fn diagonal_in(bu: &BlowUp, gs: &GlobalSections, u: &[i64], w: &SparseVec) -> Result<SparseVec, KTheoryError> {
    if w.is_empty() {
        return Ok(SparseVec::new());
    }
    if let Some(c) = gs.chars.get(u) {
        return gs.coords_at(u, &c.diagonal(w)).ok_or_else(|| KTheoryError::NotGlobal(u.to_vec()));
    }
    // No sections here: the pullback must vanish on every chart.
    let h0 = bu.complex(gs.model, gs.m, u).global_sections();
    if h0.diagonal(w).is_empty() {
        Ok(SparseVec::new())
    } else {
        Err(KTheoryError::NotGlobal(u.to_vec()))
    }
}

/// Level map `π^*: Ω^m_{Q_n} → H^0(E_n, model^m)`.
pub fn forms_to_sections(bu: &BlowUp, dm: &DifferentialModule, m: usize, gs: &GlobalSections) -> Result<LinearMap, KTheoryError> {
    let mut cols = Vec::new();
    for (deg, b) in &dm.blocks {
        for k in 0..b.pieces[m].dim() {
            let w = pullback_piece(bu, dm, deg, m, &unit(k));
            cols.push(in_range(bu, gs, deg, &w)?);
        }
    }
    Ok(LinearMap::from_images(dm.space(m), gs.space(), &cols)?)
}

fn in_range(bu: &BlowUp, gs: &GlobalSections, deg: &[i64], w: &SparseVec) -> Result<SparseVec, KTheoryError> {
    let lv = level(deg);
    let lo = if matches!(gs.model, SheafModel::Omega | SheafModel::PullbackFromE) { 0 } else { 1 };
    if lv < lo || lv >= gs.n as i64 {
        return Ok(SparseVec::new());
    }
    diagonal_in(bu, gs, deg, w)
}

/// Level map `HC_m(Q_n) → H^0(E_n, HC-top^m)`.
pub fn hc_to_sections(bu: &BlowUp, dm: &DifferentialModule, h: &HodgeTop, gs: &GlobalSections) -> Result<LinearMap, KTheoryError> {
    let mut cols = Vec::new();
    for (deg, q) in &h.blocks {
        for v in &q.lifts {
            let w = pullback_piece(bu, dm, deg, h.m, v);
            cols.push(in_range(bu, gs, deg, &w)?);
        }
    }
    Ok(LinearMap::from_images(h.space(), gs.space(), &cols)?)
}

/// `{H^0(E_n, model^m)}` for `n = 1..=nmax` with truncation transitions.
pub fn sections_system(bu: &BlowUp, model: SheafModel, m: usize, nmax: usize, pad: i64) -> Result<(Vec<GlobalSections>, ProVectorSystem), KTheoryError> {
    let secs = (1..=nmax)
        .into_par_iter()
        .map(|n| bu.global_sections(model, m, n, pad))
        .collect::<Result<Vec<_>, SheafError>>()?;
    let transitions = secs
        .windows(2)
        .map(|w| w[1].truncate_to(&w[0]))
        .collect::<Result<Vec<_>, SheafError>>()?;
    let levels = secs.iter().map(|s| s.space()).collect();
    Ok((secs, ProVectorSystem::new(1, levels, transitions)?))
}

/// Generator-level agreement of the two encodings of `π^*`: the chart-0
/// coordinates of each cone generator equal its chart-algebra degree
/// under `x2 = y3 y4 x1, x3 = y3 x1, x4 = y4 x1`.
pub fn pullback_consistency(bu: &BlowUp) -> Result<(), KTheoryError> {
    for (v, w) in CONE_CHARACTERS.iter().zip(CHART_WEIGHTS.iter()) {
        let b = bu.to_b(v);
        let expect: Vec<Rational> = w.iter().map(|&x| q(x)).collect();
        if b != expect {
            return Err(KTheoryError::ChartMismatch);
        }
    }
    Ok(())
}

/// `HC_m(Q_n) → H^0(E_n, HC-top^m)` as a strict map, `n = 1..=nmax`.
pub fn comparison(cone: &ConeLevels, bu: &BlowUp, m: usize, pad: i64) -> Result<StrictProMap, KTheoryError> {
    if m > 4 {
        return Err(KTheoryError::FormDegree(m));
    }
    pullback_consistency(bu)?;
    let (tops, src) = cone.hc_system(m)?;
    let (secs, tgt) = sections_system(bu, SheafModel::HcTop, m, cone.nmax(), pad)?;
    let comps = (0..cone.nmax())
        .into_par_iter()
        .map(|k| hc_to_sections(bu, &cone.modules[k], &tops[k], &secs[k]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StrictProMap::new(src, tgt, comps)?)
}

/// `Ω^1_{Q_n} → H^0(E_n, Ω̃^1)`.
pub fn forms_comparison(cone: &ConeLevels, bu: &BlowUp, pad: i64) -> Result<StrictProMap, KTheoryError> {
    pullback_consistency(bu)?;
    let src = cone.forms_system(1)?;
    let (secs, tgt) = sections_system(bu, SheafModel::TildeOmega, 1, cone.nmax(), pad)?;
    let comps = (0..cone.nmax())
        .into_par_iter()
        .map(|k| forms_to_sections(bu, &cone.modules[k], 1, &secs[k]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StrictProMap::new(src, tgt, comps)?)
}

/// Levelwise summary of a pro-system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemTable {
    pub start: usize,
    pub dims: Vec<usize>,
    /// Rank of `V_{n+1} → V_n`, indexed from the first level.
    pub transition_ranks: Vec<usize>,
}

impl SystemTable {
    pub fn of(sys: &ProVectorSystem) -> Self {
        SystemTable {
            start: sys.start,
            dims: sys.dims(),
            transition_ranks: sys.transitions.iter().map(|t| t.rank()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelIso {
    pub n: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub hilbert_sum: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K1Report {
    pub pass: bool,
    /// `{Ω^1_{Q_n}} → {H^0(Ω̃^1)}` certified within the window.
    pub forms_iso: ProVerdict,
    /// `m̄/m̄^n → H^0(ℐ/ℐ^n)` at each level.
    pub reduced_iso: Vec<LevelIso>,
    pub forms_source: SystemTable,
    pub forms_target: SystemTable,
}

/// `Σ_{j=1}^{n-1} (j+1)^2`.
pub fn reduced_hilbert_sum(n: usize) -> usize {
    (1..n).map(|j| (j + 1) * (j + 1)).sum()
}

pub fn verify_k1(cone: &ConeLevels, bu: &BlowUp, p: Params) -> Result<K1Report, KTheoryError> {
    if p.nmax < 3 {
        return Err(KTheoryError::BadLevel { min: 3, got: p.nmax });
    }
    let f = forms_comparison(cone, bu, p.pad)?;
    let forms_iso = certify_pro_iso(&f, p.window)?;
    let g = comparison(cone, bu, 0, p.pad)?;
    let reduced_iso: Vec<LevelIso> = g
        .components
        .iter()
        .enumerate()
        .map(|(k, c)| LevelIso {
            n: k + 1,
            source_dim: c.source.dim(),
            target_dim: c.target.dim(),
            hilbert_sum: reduced_hilbert_sum(k + 1),
            rank: c.rank(),
        })
        .collect();
    let levelwise = reduced_iso
        .iter()
        .all(|l| l.source_dim == l.hilbert_sum && l.target_dim == l.hilbert_sum && l.rank == l.hilbert_sum);
    Ok(K1Report {
        pass: forms_iso.pass && levelwise,
        forms_iso,
        reduced_iso,
        forms_source: SystemTable::of(&f.source),
        forms_target: SystemTable::of(&f.target),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K4Level {
    pub n: usize,
    pub dim: usize,
    /// Rank of the transition into this level from the next.
    pub transition_rank: Option<usize>,
    pub transition_surjective: Option<bool>,
    /// The class of `x1 dx2 dx3 dx4` has nonzero `d` in `Ω^4_{Q_n}`.
    pub witness_nonzero: bool,
    /// The class at level `n+1` maps to the class at level `n`.
    pub witness_compatible: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K4Report {
    pub pass: bool,
    pub levels: Vec<K4Level>,
    pub top_forms: Vec<Omega4Level>,
    pub top_forms_verdict: Verdict,
    /// Windows at which pro-vanishing fails. The class starts at level 2, so
    /// every window `≤ nmax - 2` must appear.
    pub nonvanishing_windows: Vec<usize>,
}

fn witness_terms() -> Vec<(Polynomial, u32)> {
    vec![(Polynomial::monomial(Monomial(vec![1, 0, 0, 0])), 0b1110)]
}

fn witness_degree() -> Vec<i64> {
    vec![2, 2, 2, 2]
}

/// Class of `x1 dx2 dx3 dx4` in `HC_3` at one level.
fn witness_class(dm: &DifferentialModule, h: &HodgeTop) -> SparseVec {
    let deg = witness_degree();
    let (Some(b), Some(q)) = (dm.blocks.get(&deg), h.blocks.get(&deg)) else {
        return SparseVec::new();
    };
    let coords = dm.engine.form_coords(&b.pieces[3], &witness_terms());
    let off = h.offsets()[&deg];
    q.project(&coords).into_iter().map(|(i, x)| (i + off, x)).collect()
}

/// `d: HC_3 → Ω^4` at one level.
fn hc3_to_top(dm: &DifferentialModule, h: &HodgeTop) -> Result<LinearMap, KTheoryError> {
    let lift = hodge_lift(h, dm)?;
    Ok(dm.d_map(3)?.after(&lift)?)
}

pub fn compute_k4(cone: &ConeLevels) -> Result<(ProVectorSystem, K4Report), KTheoryError> {
    let nmax = cone.nmax();
    if nmax < 2 {
        return Err(KTheoryError::BadLevel { min: 2, got: nmax });
    }
    let (tops, sys) = cone.hc_system(3)?;
    let classes: Vec<SparseVec> = (0..nmax).map(|k| witness_class(&cone.modules[k], &tops[k])).collect();
    let mut levels = Vec::new();
    let mut pass = true;
    for k in 0..nmax {
        let n = k + 1;
        let d = hc3_to_top(&cone.modules[k], &tops[k])?;
        let witness_nonzero = !d.apply(&classes[k])?.is_empty();
        let (rank, surj, compat) = if k + 1 < nmax {
            let t = sys.transition(n);
            let r = t.rank();
            (Some(r), Some(r == t.target.dim()), Some(t.apply(&classes[k + 1])? == classes[k]))
        } else {
            (None, None, None)
        };
        // The class lives in degree 4, so it only survives from level 2 on.
        pass &= witness_nonzero == (n >= 2) && surj != Some(false) && compat != Some(false);
        levels.push(K4Level {
            n,
            dim: sys.level(n).dim(),
            transition_rank: rank,
            transition_surjective: surj,
            witness_nonzero,
            witness_compatible: compat,
        });
    }
    let (top_forms_verdict, top_forms) = omega4_cone_check(nmax)?;
    pass &= top_forms_verdict.pass;
    // The compatible nonzero class rules out pro-vanishing at every window.
    let nonvanishing_windows: Vec<usize> = (1..nmax)
        .filter(|&c| certify_pro_zero(&sys, c).map(|v| !v.pass).unwrap_or(false))
        .collect();
    pass &= (1..nmax - 1).all(|c| nonvanishing_windows.contains(&c));
    Ok((sys, K4Report { pass, levels, top_forms, top_forms_verdict, nonvanishing_windows }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K5Level {
    pub n: usize,
    pub dim_omega3: usize,
    pub dim_omega4: usize,
    pub rank_d3: usize,
    pub dim_omega5: usize,
    pub dim_hc4: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K5Report {
    pub pass: bool,
    pub levels: Vec<K5Level>,
}

pub fn verify_k5plus_inputs(cone: &ConeLevels) -> Result<K5Report, KTheoryError> {
    let mut levels = Vec::new();
    for (k, dm) in cone.modules.iter().enumerate() {
        let rank_d3 = dm.d_map(3)?.rank();
        let hc4 = hodge_piece_hc(dm, 4)?.dim();
        levels.push(K5Level {
            n: k + 1,
            dim_omega3: dm.dim(3),
            dim_omega4: dm.dim(4),
            rank_d3,
            dim_omega5: dm.dim(5),
            dim_hc4: hc4,
        });
    }
    let pass = levels.iter().all(|l| l.rank_d3 == l.dim_omega4 && l.dim_omega5 == 0 && l.dim_hc4 == 0);
    Ok(K5Report { pass, levels })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K3Level {
    pub n: usize,
    pub source_dim: usize,
    pub target_cech: usize,
    pub target_filtered: usize,
    pub kernel_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K3Report {
    /// Both target computations agree at every level.
    pub pass: bool,
    pub levels: Vec<K3Level>,
    pub kernel: SystemTable,
}

/// `{ker(HC_2(Q_n) → H^0(E_n, HC-top^2))}`; the target dimension is
/// computed by Čech and, independently, as the filtered `h^0` of `Ω̃^2`
/// minus the Čech `h^0` of the image of `d`.
pub fn compute_k3(cone: &ConeLevels, bu: &BlowUp, pad: i64) -> Result<(ProVectorSystem, K3Report), KTheoryError> {
    let nmax = cone.nmax();
    if nmax < 2 {
        return Err(KTheoryError::BadLevel { min: 2, got: nmax });
    }
    let f = comparison(cone, bu, 2, pad)?;
    let ker = pro_kernel(&f)?;
    let mut levels = Vec::new();
    for n in 1..=nmax {
        let cech = f.target.level(n).dim();
        let filtered = if n >= 2 {
            let fh = h_filtered(&filtration_tilde_omega(2, n)?, 0);
            let img = bu.cohomology(SheafModel::ImageD, 2, n, pad)?[0];
            if !fh.certified {
                return Err(KTheoryError::TargetDisagreement { n, cech, filtered: fh.dim });
            }
            fh.dim - img.min(fh.dim)
        } else {
            0
        };
        if filtered != cech {
            return Err(KTheoryError::TargetDisagreement { n, cech, filtered });
        }
        levels.push(K3Level {
            n,
            source_dim: f.source.level(n).dim(),
            target_cech: cech,
            target_filtered: filtered,
            kernel_dim: ker.level(n).dim(),
        });
    }
    let report = K3Report { pass: true, levels, kernel: SystemTable::of(&ker) };
    Ok((ker, report))
}

/// Dimensions of both outer terms of the sequence for `K̃_m` at one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryLevel {
    pub n: usize,
    /// `coker(HC_m(Q_n) → H^0(E_n, HC-top^m))`.
    pub left: usize,
    /// `ker(HC_{m-1}(Q_n) → H^0(E_n, HC-top^{m-1}))`.
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryReport {
    pub m: usize,
    pub levels: Vec<BoundaryLevel>,
    pub left_pro_zero: Option<ProVerdict>,
    pub right_pro_zero: Option<ProVerdict>,
    /// For `m = 2` the extension is unresolved: `left ≤ K̃_2 ≤ left + right`.
    pub bounds_only: bool,
}

pub fn report_mt_general(cone: &ConeLevels, bu: &BlowUp, m: usize, p: Params) -> Result<BoundaryReport, KTheoryError> {
    if !(1..=4).contains(&m) {
        return Err(KTheoryError::FormDegree(m));
    }
    let left = pro_cokernel(&comparison(cone, bu, m, p.pad)?)?;
    let right = pro_kernel(&comparison(cone, bu, m - 1, p.pad)?)?;
    let levels = (1..=cone.nmax())
        .map(|n| BoundaryLevel { n, left: left.level(n).dim(), right: right.level(n).dim() })
        .collect();
    let certify = |s: &ProVectorSystem| certify_pro_zero(s, p.window).ok();
    Ok(BoundaryReport {
        m,
        levels,
        left_pro_zero: certify(&left),
        right_pro_zero: certify(&right),
        bounds_only: m == 2,
    })
}

/// Per-level dimension table of the truncations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelDims {
    pub n: usize,
    pub dim_q: usize,
    pub dim_omega: Vec<usize>,
    pub dim_hc: Vec<usize>,
    pub dim_h0_tilde_omega: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KReport {
    pub params: Params,
    pub conditional_on: &'static str,
    pub tables: Vec<LevelDims>,
    pub k1: K1Report,
    pub k3: K3Report,
    pub k4: K4Report,
    pub k5plus: K5Report,
    pub boundaries: BTreeMap<usize, BoundaryReport>,
}

pub fn build_report(p: Params) -> Result<KReport, KTheoryError> {
    let cone = ConeLevels::build(p.nmax)?;
    let bu = BlowUp::new();
    let mut tables = Vec::new();
    for n in 1..=p.nmax {
        let dm = cone.module(n);
        let dim_hc = (1..=4).map(|m| Ok(hodge_piece_hc(dm, m)?.dim())).collect::<Result<Vec<_>, KTheoryError>>()?;
        let dim_h0 = (0..=3)
            .map(|m| Ok(bu.global_sections(SheafModel::TildeOmega, m, n, p.pad)?.dim()))
            .collect::<Result<Vec<_>, KTheoryError>>()?;
        tables.push(LevelDims {
            n,
            dim_q: dm.dim(0),
            dim_omega: (0..=4).map(|m| dm.dim(m)).collect(),
            dim_hc,
            dim_h0_tilde_omega: dim_h0,
        });
    }
    let k1 = verify_k1(&cone, &bu, p)?;
    let (_, k3) = compute_k3(&cone, &bu, p.pad)?;
    let (_, k4) = compute_k4(&cone)?;
    let k5plus = verify_k5plus_inputs(&cone)?;
    let mut boundaries = BTreeMap::new();
    for m in 1..=4 {
        boundaries.insert(m, report_mt_general(&cone, &bu, m, p)?);
    }
    Ok(KReport {
        params: p,
        conditional_on: "pro-descent for the blow-up square of the cone at its vertex",
        tables,
        k1,
        k3,
        k4,
        k5plus,
        boundaries,
    })
}

/// `ω = dx1 dx2 dx3 dx4` in `Ω^4_{Q_n}`, if nonzero.
pub fn top_form(dm: &DifferentialModule) -> Option<SparseVec> {
    dm.form(4, &[(Polynomial::constant(4, Rational::one()), omega_mask())])
}
