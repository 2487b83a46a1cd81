//! Affine monoids inside ℕ^r: membership, divisibility and normality
//! predicates, and the toric ideal of the associated monomial map.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::exactla::{q, rank, SparseMatrix};
use crate::polyring::{buchberger, Monomial, MonomialOrder, PolyError, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("divisor must be at least 2, got {0}")]
    BadDivisor(u32),
    #[error("generator {0} is zero")]
    ZeroGenerator(usize),
    #[error("generator {index} has length {found}, expected {expected}")]
    WrongLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("polynomial arithmetic failed: {0}")]
    Poly(#[from] PolyError),
}

/// Finitely generated submonoid of ℕ^r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMonoid {
    rank: usize,
    generators: Vec<Vec<u32>>,
}

impl AffineMonoid {
    pub fn new(rank: usize, generators: Vec<Vec<u32>>) -> Result<Self, MonoidError> {
        for (i, g) in generators.iter().enumerate() {
            if g.len() != rank {
                return Err(MonoidError::WrongLength {
                    index: i,
                    expected: rank,
                    found: g.len(),
                });
            }
            if g.iter().all(|&x| x == 0) {
                return Err(MonoidError::ZeroGenerator(i));
            }
        }
        Ok(AffineMonoid { rank, generators })
    }

    /// Free monoid ℕ^r on the unit vectors.
    pub fn free(rank: usize) -> Self {
        let gens = (0..rank)
            .map(|i| (0..rank).map(|j| u32::from(i == j)).collect())
            .collect();
        AffineMonoid {
            rank,
            generators: gens,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    /// Same monoid with generators listed as `perm[0], perm[1], ...`.
    pub fn reordered(&self, perm: &[usize]) -> Self {
        AffineMonoid {
            rank: self.rank,
            generators: perm.iter().map(|&i| self.generators[i].clone()).collect(),
        }
    }

    /// Rank of the group generated by the monoid.
    pub fn group_rank(&self) -> usize {
        let rows: Vec<Vec<i64>> = self
            .generators
            .iter()
            .map(|g| g.iter().map(|&x| x as i64).collect())
            .collect();
        rank(&SparseMatrix::from_i64(&rows))
    }

    /// Whether `x` is an ℕ-combination of the generators.
    pub fn contains(&self, x: &[i64]) -> bool {
        let mut memo = HashMap::new();
        self.contains_memo(x, &mut memo)
    }

    fn contains_memo(&self, x: &[i64], memo: &mut HashMap<Vec<i64>, bool>) -> bool {
        if x.iter().any(|&c| c < 0) {
            return false;
        }
        if x.iter().all(|&c| c == 0) {
            return true;
        }
        if let Some(&b) = memo.get(x) {
            return b;
        }
        let mut found = false;
        for g in &self.generators {
            let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| a - *b as i64).collect();
            if y.iter().all(|&c| c >= 0) && self.contains_memo(&y, memo) {
                found = true;
                break;
            }
        }
        memo.insert(x.to_vec(), found);
        found
    }

    /// Elements reachable with at most `d` generators, in order of first
    /// appearance (by generator count, then by generator index).
    pub fn elements_up_to(&self, d: u32) -> Vec<Vec<i64>> {
        let k = self.generators.len();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for deg in 0..=d {
            for m in combos_with_repetition(k, deg) {
                let mut x = vec![0i64; self.rank];
                for (&c, g) in m.iter().zip(&self.generators) {
                    for (xi, gi) in x.iter_mut().zip(g) {
                        *xi += c as i64 * *gi as i64;
                    }
                }
                if seen.insert(x.clone()) {
                    out.push(x);
                }
            }
        }
        out
    }
}

/// Exponent vectors of length `k` summing to `d`, lexicographically by
/// the multiset of generator indices.
fn combos_with_repetition(k: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(start: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..cur.len() {
            cur[i] += 1;
            rec(i, left - 1, cur, out);
            cur[i] -= 1;
        }
    }
    let mut cur = vec![0u32; k];
    rec(0, d, &mut cur, &mut out);
    out
}

/// The monoid generated by `e1+e3, e1+e4, e2+e3, e2+e4` in ℕ⁴.
pub fn gubeladze_monoid() -> AffineMonoid {
    AffineMonoid {
        rank: 4,
        generators: vec![
            vec![1, 0, 1, 0],
            vec![1, 0, 0, 1],
            vec![0, 1, 1, 0],
            vec![0, 1, 0, 1],
        ],
    }
}

/// Generator order matching the cone coordinates `x1..x4` with
/// `x1 x2 = x3 x4`: x1 = z1z3, x2 = z2z4, x3 = z1z4, x4 = z2z3.
pub const CONE_ORDER: [usize; 4] = [0, 3, 1, 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisibility {
    pub divisible: bool,
    /// First element found without a c-th divisor.
    pub witness: Option<Vec<i64>>,
    pub checked: usize,
}

/// Whether `x` has some `y` in the monoid with `c y = x`.
pub fn has_divisor(m: &AffineMonoid, x: &[i64], c: u32) -> bool {
    let c = c as i64;
    if x.iter().any(|&v| v % c != 0) {
        return false;
    }
    let y: Vec<i64> = x.iter().map(|&v| v / c).collect();
    m.contains(&y)
}

pub fn is_c_divisible(m: &AffineMonoid, c: u32, degree_bound: u32) -> Result<Divisibility, MonoidError> {
    if c < 2 {
        return Err(MonoidError::BadDivisor(c));
    }
    let elems = m.elements_up_to(degree_bound);
    for (k, x) in elems.iter().enumerate() {
        if !has_divisor(m, x, c) {
            return Ok(Divisibility {
                divisible: false,
                witness: Some(x.clone()),
                checked: k + 1,
            });
        }
    }
    Ok(Divisibility {
        divisible: true,
        witness: None,
        checked: elems.len(),
    })
}

/// Integer lattice spanned by row vectors, in echelon form.
#[derive(Clone, Debug)]
pub struct IntLattice {
    rows: Vec<(usize, Vec<i128>)>,
}

impl IntLattice {
    pub fn spanned_by(gens: &[Vec<i64>]) -> Self {
        let mut work: Vec<Vec<i128>> = gens
            .iter()
            .map(|g| g.iter().map(|&x| x as i128).collect())
            .collect();
        let width = work.first().map_or(0, |r| r.len());
        let mut rows = Vec::new();
        for col in 0..width {
            loop {
                let mut nz: Vec<usize> = (0..work.len()).filter(|&i| work[i][col] != 0).collect();
                if nz.len() <= 1 {
                    if let Some(&i) = nz.first() {
                        let mut r = work.swap_remove(i);
                        if r[col] < 0 {
                            r.iter_mut().for_each(|x| *x = -*x);
                        }
                        rows.push((col, r));
                    }
                    break;
                }
                nz.sort_by_key(|&i| work[i][col].abs());
                let p = nz[0];
                let pivot = work[p].clone();
                for &i in &nz[1..] {
                    let f = work[i][col] / pivot[col];
                    for (x, y) in work[i].iter_mut().zip(&pivot) {
                        *x -= f * y;
                    }
                }
            }
        }
        IntLattice { rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, a: &[i64]) -> bool {
        let mut v: Vec<i128> = a.iter().map(|&x| x as i128).collect();
        for (col, r) in &self.rows {
            if v[*col] % r[*col] != 0 {
                return false;
            }
            let f = v[*col] / r[*col];
            for (x, y) in v.iter_mut().zip(r) {
                *x -= f * y;
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

fn det_i64(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<num_rational::BigRational>> =
        m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let mut det = q(1);
    for c in 0..n {
        let p = match (c..n).find(|&i| a[i][c] != q(0)) {
            Some(p) => p,
            None => return 0,
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for i in c + 1..n {
            let f = a[i][c].clone() / a[c][c].clone();
            for j in c..n {
                let t = f.clone() * a[c][j].clone();
                a[i][j] -= t;
            }
        }
    }
    det.to_integer().try_into().unwrap_or(i64::MAX)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Largest absolute square minor of the generator matrix. Every lattice
/// point of the cone has this multiple (or a smaller one) inside the monoid.
pub fn cone_denominator_bound(m: &AffineMonoid) -> i64 {
    let g: Vec<Vec<i64>> = m
        .generators
        .iter()
        .map(|v| v.iter().map(|&x| x as i64).collect())
        .collect();
    let k = g.len();
    let r = m.rank;
    let mut best = 1;
    for size in 1..=k.min(r) {
        for gs in subsets(k, size) {
            for cs in subsets(r, size) {
                let sub: Vec<Vec<i64>> = gs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| g[i][j]).collect())
                    .collect();
                best = best.max(det_i64(&sub).abs());
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normality {
    pub normal: bool,
    pub witness: Option<Vec<i64>>,
    /// Lattice points of the cone examined.
    pub checked: usize,
}

fn points_with_sum_at_most(r: usize, d: u32) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for s in 0..=d {
        for m in Monomial::all_of_degree(r, s) {
            out.push(m.0.iter().map(|&x| x as i64).collect());
        }
    }
    out
}

pub fn is_normal_up_to(m: &AffineMonoid, degree_bound: u32) -> Normality {
    let gens: Vec<Vec<i64>> = m
        .generators
        .iter()
        .map(|v| v.iter().map(|&x| x as i64).collect())
        .collect();
    let lattice = IntLattice::spanned_by(&gens);
    let mmax = cone_denominator_bound(m);
    let mut checked = 0;
    for a in points_with_sum_at_most(m.rank, degree_bound) {
        if !lattice.contains(&a) {
            continue;
        }
        let in_cone = (1..=mmax).any(|k| {
            let ka: Vec<i64> = a.iter().map(|x| x * k).collect();
            m.contains(&ka)
        });
        if !in_cone {
            continue;
        }
        checked += 1;
        if !m.contains(&a) {
            return Normality {
                normal: false,
                witness: Some(a),
                checked,
            };
        }
    }
    Normality {
        normal: true,
        witness: None,
        checked,
    }
}

/// Binomial generators of the kernel of `x_i ↦ z^{g_i}`, found among
/// monomials of degree at most `degree_bound` and pruned to a minimal set.
pub fn toric_ideal_up_to(m: &AffineMonoid, degree_bound: u32) -> Result<Vec<Polynomial>, MonoidError> {
    let k = m.generators.len();
    let mut fibers: BTreeMap<Vec<i64>, Vec<Monomial>> = BTreeMap::new();
    for d in 0..=degree_bound {
        for mono in Monomial::all_of_degree(k, d) {
            let mut img = vec![0i64; m.rank];
            for (&e, g) in mono.0.iter().zip(&m.generators) {
                for (x, y) in img.iter_mut().zip(g) {
                    *x += e as i64 * *y as i64;
                }
            }
            fibers.entry(img).or_default().push(mono);
        }
    }
    let mut candidates: Vec<Polynomial> = Vec::new();
    for monos in fibers.values() {
        for i in 0..monos.len() {
            for j in i + 1..monos.len() {
                if !monos[i].coprime(&monos[j]) {
                    continue;
                }
                candidates.push(
                    Polynomial::monomial(monos[i].clone()).sub(&Polynomial::monomial(monos[j].clone())),
                );
            }
        }
    }
    candidates.sort_by_key(|p| p.terms().keys().map(|t| t.degree()).max().unwrap_or(0));
    let order = MonomialOrder::grevlex(k);
    let mut kept: Vec<Polynomial> = Vec::new();
    for c in candidates {
        if !kept.is_empty() {
            let gb = buchberger(&kept, &order)?;
            if gb.contains(&c) {
                continue;
            }
        }
        kept.push(c);
    }
    Ok(kept)
}

pub fn toric_ideal(m: &AffineMonoid) -> Result<Vec<Polynomial>, MonoidError> {
    toric_ideal_up_to(m, 4)
}

/// Whether two generator lists define the same ideal (mutual reduction).
pub fn same_ideal(a: &[Polynomial], b: &[Polynomial], order: &MonomialOrder) -> Result<bool, MonoidError> {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return Ok(true),
        (true, false) => return Ok(b.iter().all(|p| p.is_zero())),
        (false, true) => return Ok(a.iter().all(|p| p.is_zero())),
        _ => {}
    }
    let ga = buchberger(a, order)?;
    let gb = buchberger(b, order)?;
    Ok(ga.same_ideal(&gb) && ga == gb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_membership() {
        let l = IntLattice::spanned_by(&[vec![2, 0], vec![1, 1]]);
        assert!(l.contains(&[1, 1]));
        assert!(l.contains(&[0, 2]));
        assert!(!l.contains(&[1, 0]));
    }

    #[test]
    fn element_enumeration_order() {
        let m = AffineMonoid::new(1, vec![vec![2], vec![3]]).unwrap();
        assert_eq!(m.elements_up_to(1), vec![vec![0], vec![2], vec![3]]);
    }

    #[test]
    fn denominator_bound_for_cone() {
        assert!(cone_denominator_bound(&gubeladze_monoid()) >= 1);
        assert_eq!(cone_denominator_bound(&AffineMonoid::free(3)), 1);
    }
}
