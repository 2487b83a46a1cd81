//! Pro-systems of finite-dimensional vector spaces indexed by `n ≥ start`,
//! with levelwise kernels and cokernels and windowed pro-zero certificates.

use std::fmt;

use thiserror::Error;

use crate::exactla::{
    kernel_basis, quotient_space, LinalgError, LinearMap, SparseVec, VectorSpace,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("system has no levels")]
    Empty,
    #[error("expected {expected} transitions, got {found}")]
    TransitionCount { expected: usize, found: usize },
    #[error("transition into level {0} does not match the level dimensions")]
    TransitionShape(usize),
    #[error("square at level {0} does not commute")]
    NotCommuting(usize),
    #[error("source and target cover different levels")]
    LevelMismatch,
    #[error("window {window} leaves no level to check among {levels} levels")]
    WindowTooLarge { window: usize, levels: usize },
}

/// `V_start ← V_{start+1} ← ...`; `transitions[k]` maps level
/// `start+k+1` to level `start+k`.
#[derive(Clone, Debug)]
pub struct ProVectorSystem {
    pub start: usize,
    pub levels: Vec<VectorSpace>,
    pub transitions: Vec<LinearMap>,
}

impl ProVectorSystem {
    pub fn new(start: usize, levels: Vec<VectorSpace>, transitions: Vec<LinearMap>) -> Result<Self, ProError> {
        if levels.is_empty() {
            return Err(ProError::Empty);
        }
        if transitions.len() + 1 != levels.len() {
            return Err(ProError::TransitionCount {
                expected: levels.len() - 1,
                found: transitions.len(),
            });
        }
        for (k, t) in transitions.iter().enumerate() {
            if t.source.dim() != levels[k + 1].dim() || t.target.dim() != levels[k].dim() {
                return Err(ProError::TransitionShape(start + k));
            }
        }
        Ok(ProVectorSystem { start, levels, transitions })
    }

    /// Constant system with identity transitions.
    pub fn constant(start: usize, space: VectorSpace, count: usize) -> Result<Self, ProError> {
        let levels = vec![space.clone(); count];
        let transitions = (1..count).map(|_| LinearMap::identity(&space)).collect();
        Self::new(start, levels, transitions)
    }

    /// Same spaces, all transitions zero.
    pub fn with_zero_transitions(start: usize, levels: Vec<VectorSpace>) -> Result<Self, ProError> {
        let transitions = (1..levels.len())
            .map(|k| LinearMap::zero(&levels[k], &levels[k - 1]))
            .collect();
        Self::new(start, levels, transitions)
    }

    pub fn last(&self) -> usize {
        self.start + self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &VectorSpace {
        &self.levels[n - self.start]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.dim()).collect()
    }

    /// `V_{n+1} → V_n`.
    pub fn transition(&self, n: usize) -> &LinearMap {
        &self.transitions[n - self.start]
    }

    /// Composite `V_{n+c} → V_n`.
    pub fn composite(&self, n: usize, c: usize) -> Result<LinearMap, ProError> {
        let mut f = LinearMap::identity(self.level(n + c));
        for k in (n..n + c).rev() {
            f = self.transition(k).after(&f)?;
        }
        Ok(f)
    }
}

/// Levelwise maps commuting with transitions.
#[derive(Clone, Debug)]
pub struct StrictProMap {
    pub source: ProVectorSystem,
    pub target: ProVectorSystem,
    pub components: Vec<LinearMap>,
}

impl StrictProMap {
    pub fn new(source: ProVectorSystem, target: ProVectorSystem, components: Vec<LinearMap>) -> Result<Self, ProError> {
        if source.start != target.start || source.levels.len() != target.levels.len() || components.len() != source.levels.len() {
            return Err(ProError::LevelMismatch);
        }
        for (k, f) in components.iter().enumerate() {
            if f.source.dim() != source.levels[k].dim() || f.target.dim() != target.levels[k].dim() {
                return Err(ProError::LevelMismatch);
            }
        }
        for k in 0..source.transitions.len() {
            let a = components[k].after(&source.transitions[k])?;
            let b = target.transitions[k].after(&components[k + 1])?;
            if a.matrix != b.matrix {
                return Err(ProError::NotCommuting(source.start + k));
            }
        }
        Ok(StrictProMap { source, target, components })
    }

    pub fn component(&self, n: usize) -> &LinearMap {
        &self.components[n - self.source.start]
    }
}

/// Levelwise kernels with restricted transitions.
pub fn pro_kernel(f: &StrictProMap) -> Result<ProVectorSystem, ProError> {
    let src = &f.source;
    let bases: Vec<Vec<SparseVec>> = f.components.iter().map(|c| kernel_basis(&c.matrix)).collect();
    let levels: Vec<VectorSpace> = bases
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let labels = b.iter().map(|v| describe(&src.levels[k], v)).collect();
            VectorSpace::new(labels).unwrap_or_else(|_| VectorSpace::indexed("ker", b.len()))
        })
        .collect();
    let mut transitions = Vec::new();
    for k in 0..src.transitions.len() {
        let images = bases[k + 1]
            .iter()
            .map(|v| {
                let w = src.transitions[k].apply(v)?;
                Ok(coords_in_basis(&bases[k], &w))
            })
            .collect::<Result<Vec<_>, ProError>>()?;
        transitions.push(LinearMap::from_images(levels[k + 1].clone(), levels[k].clone(), &images)?);
    }
    ProVectorSystem::new(src.start, levels, transitions)
}

fn coords_in_basis(basis: &[SparseVec], w: &SparseVec) -> SparseVec {
    // Each kernel basis vector owns a position no other vector touches.
    let mut out = SparseVec::new();
    for (i, b) in basis.iter().enumerate() {
        let (&p, x) = b.iter().find(|(j, _)| basis.iter().enumerate().all(|(k, o)| k == i || !o.contains_key(j))).expect("free position");
        if let Some(y) = w.get(&p) {
            out.insert(i, y / x);
        }
    }
    out
}

/// Levelwise cokernels with induced transitions.
pub fn pro_cokernel(f: &StrictProMap) -> Result<ProVectorSystem, ProError> {
    let tgt = &f.target;
    let quots = f
        .components
        .iter()
        .enumerate()
        .map(|(k, c)| quotient_space(&tgt.levels[k], &c.matrix.columns()))
        .collect::<Result<Vec<_>, _>>()?;
    let levels: Vec<VectorSpace> = quots.iter().map(|q| q.space.clone()).collect();
    let mut transitions = Vec::new();
    for k in 0..tgt.transitions.len() {
        let images = quots[k + 1]
            .lifts
            .iter()
            .map(|v| Ok(quots[k].project(&tgt.transitions[k].apply(v)?)))
            .collect::<Result<Vec<_>, ProError>>()?;
        transitions.push(LinearMap::from_images(levels[k + 1].clone(), levels[k].clone(), &images)?);
    }
    ProVectorSystem::new(tgt.start, levels, transitions)
}

fn describe(space: &VectorSpace, v: &SparseVec) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|(&i, x)| format!("{}*[{}]", crate::exactla::rational_string(x), space.label(i)))
        .collect();
    parts.join(" + ")
}

/// Outcome of a windowed pro-zero or pro-iso certificate.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ProVerdict {
    pub pass: bool,
    pub window: usize,
    /// Levels `n` at which `V_{n+window} → V_n` was checked.
    pub checked: Vec<usize>,
    /// Smallest failing level.
    pub failing_level: Option<usize>,
    pub witness: Option<String>,
}

impl fmt::Display for ProVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            write!(f, "PASS (window {}, levels {:?})", self.window, self.checked)
        } else {
            write!(
                f,
                "FAIL at level {} (window {}): {}",
                self.failing_level.unwrap_or(0),
                self.window,
                self.witness.as_deref().unwrap_or("")
            )
        }
    }
}

/// Checks that every `V_{n+window} → V_n` in range is zero.
pub fn certify_pro_zero(sys: &ProVectorSystem, window: usize) -> Result<ProVerdict, ProError> {
    if sys.levels.len() <= window {
        return Err(ProError::WindowTooLarge { window, levels: sys.levels.len() });
    }
    let mut checked = Vec::new();
    for n in sys.start..=sys.last() - window {
        checked.push(n);
        let f = sys.composite(n, window)?;
        if let Some(j) = (0..f.source.dim()).find(|&j| !f.matrix.column(j).is_empty()) {
            let img = f.matrix.column(j);
            return Ok(ProVerdict {
                pass: false,
                window,
                checked,
                failing_level: Some(n),
                witness: Some(format!(
                    "[{}] at level {} maps to {} at level {}",
                    f.source.label(j),
                    n + window,
                    describe(&f.target, &img),
                    n
                )),
            });
        }
    }
    Ok(ProVerdict { pass: true, window, checked, failing_level: None, witness: None })
}

/// Kernel and cokernel both pro-zero within the window.
pub fn certify_pro_iso(f: &StrictProMap, window: usize) -> Result<ProVerdict, ProError> {
    let k = certify_pro_zero(&pro_kernel(f)?, window)?;
    if !k.pass {
        return Ok(ProVerdict {
            witness: k.witness.map(|w| format!("kernel: {w}")),
            ..k
        });
    }
    let c = certify_pro_zero(&pro_cokernel(f)?, window)?;
    if !c.pass {
        return Ok(ProVerdict {
            witness: c.witness.map(|w| format!("cokernel: {w}")),
            ..c
        });
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::SparseMatrix;

    fn space(d: usize) -> VectorSpace {
        VectorSpace::indexed("e", d)
    }

    #[test]
    fn constant_system_is_not_pro_zero() {
        let s = ProVectorSystem::constant(1, space(2), 4).unwrap();
        let v = certify_pro_zero(&s, 2).unwrap();
        assert!(!v.pass);
        assert_eq!(v.failing_level, Some(1));
    }

    #[test]
    fn zero_transitions_are_pro_zero() {
        let s = ProVectorSystem::with_zero_transitions(1, vec![space(2); 4]).unwrap();
        assert!(certify_pro_zero(&s, 1).unwrap().pass);
    }

    #[test]
    fn shift_is_pro_zero_at_window_two() {
        // k^2 with transition e1 -> e0 -> 0.
        let t = LinearMap::new(space(2), space(2), SparseMatrix::from_i64(&[vec![0, 1], vec![0, 0]])).unwrap();
        let s = ProVectorSystem::new(1, vec![space(2); 5], vec![t; 4]).unwrap();
        assert!(!certify_pro_zero(&s, 1).unwrap().pass);
        assert!(certify_pro_zero(&s, 2).unwrap().pass);
    }

    #[test]
    fn kernel_and_cokernel_of_projection() {
        let a = ProVectorSystem::constant(1, space(2), 3).unwrap();
        let b = ProVectorSystem::constant(1, space(1), 3).unwrap();
        let p = LinearMap::new(space(2), space(1), SparseMatrix::from_i64(&[vec![1, 0]])).unwrap();
        let f = StrictProMap::new(a, b, vec![p; 3]).unwrap();
        let k = pro_kernel(&f).unwrap();
        assert_eq!(k.dims(), vec![1, 1, 1]);
        assert!(!k.transition(1).is_zero());
        assert_eq!(pro_cokernel(&f).unwrap().dims(), vec![0, 0, 0]);
        assert!(!certify_pro_iso(&f, 1).unwrap().pass);
    }

    #[test]
    fn window_larger_than_range_errors() {
        let s = ProVectorSystem::constant(1, space(1), 2).unwrap();
        assert!(matches!(certify_pro_zero(&s, 2), Err(ProError::WindowTooLarge { .. })));
    }
}
