//! The Neron-Severi lattice of the surface with its negative semi-definite
//! intersection form, and the exact minimisation behind `m(2, c1)`.
//!
//! `m(2, c1) = -(1/2) max_{mu in NS} q(c1/2 - mu)` is a closest-vector
//! problem for the positive semi-definite form `-q` on the coset
//! `c1/2 + NS`.  Ranks here are tiny, so it is solved exactly: degenerate
//! directions are split off by a unimodular column transform, the positive
//! definite rest is decomposed as `R^T D R` over the rationals, and the
//! coset is enumerated with exact pruning.

use num_traits::Zero;

use crate::rational::{rat, rat_int, rat_round, rat_to_f64, Rational};
use crate::{Error, Result};

/// Neron-Severi lattice: free abelian group of the given rank with a
/// symmetric negative semi-definite integer intersection form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NSLattice {
    rank: usize,
    gram: Vec<Vec<i64>>,
}

/// Chern data of a rank-2 bundle: determinant class in `NS(X)` and the
/// integer second Chern class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernData {
    pub c1: Vec<i64>,
    pub c2: i64,
}

/// Exact positive semi-definiteness test by symmetric elimination: a zero
/// pivot is legal only when its whole row already vanishes.
fn is_psd(mut a: Vec<Vec<Rational>>) -> bool {
    let n = a.len();
    for i in 0..n {
        if a[i][i] < Rational::zero() {
            return false;
        }
        if a[i][i].is_zero() {
            if (0..n).any(|j| !a[i][j].is_zero()) {
                return false;
            }
            continue;
        }
        let p = a[i][i];
        for j in (i + 1)..n {
            let f = a[i][j] / p;
            for k in (i + 1)..n {
                let delta = f * a[i][k];
                a[j][k] -= delta;
            }
            a[j][i] = Rational::zero();
            a[i][j] = Rational::zero();
        }
        // keep the matrix symmetric for the zero-row test above
        for j in (i + 1)..n {
            for k in (i + 1)..j {
                a[j][k] = a[k][j];
            }
        }
    }
    true
}

impl NSLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<NSLattice> {
        let rank = gram.len();
        for row in &gram {
            if row.len() != rank {
                return Err(Error::model("gram matrix is not square"));
            }
        }
        for i in 0..rank {
            for j in 0..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::model("gram matrix is not symmetric"));
                }
            }
        }
        let neg: Vec<Vec<Rational>> = (0..rank)
            .map(|i| (0..rank).map(|j| rat_int(-gram[i][j] as i128)).collect())
            .collect();
        if !is_psd(neg) {
            return Err(Error::model(
                "intersection form is not negative semi-definite",
            ));
        }
        Ok(NSLattice { rank, gram })
    }

    /// Rank-0 lattice (no algebraic classes beyond torsion).
    pub fn trivial() -> NSLattice {
        NSLattice {
            rank: 0,
            gram: vec![],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::model(format!(
                "class has {} coordinates, lattice rank is {}",
                v.len(),
                self.rank
            )));
        }
        Ok(())
    }

    /// Intersection form `v . w` on integer classes.
    pub fn pair(&self, v: &[i64], w: &[i64]) -> Result<i128> {
        self.check_len(v)?;
        self.check_len(w)?;
        let mut s: i128 = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += v[i] as i128 * self.gram[i][j] as i128 * w[j] as i128;
            }
        }
        Ok(s)
    }

    /// Self-intersection `q(v) = v . v` on integer classes.
    pub fn q_int(&self, v: &[i64]) -> Result<i128> {
        self.pair(v, v)
    }

    /// `q` extended to rational classes (half-integer coordinates mostly).
    pub fn q_rat(&self, v: &[Rational]) -> Result<Rational> {
        if v.len() != self.rank {
            return Err(Error::model("rational class has the wrong length"));
        }
        let mut s = Rational::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += v[i] * rat_int(self.gram[i][j] as i128) * v[j];
            }
        }
        Ok(s)
    }
}

/// Unimodular column reduction `H = A * U`: returns `(U, kernel_cols)`
/// where the listed columns of `U` span the kernel of `A` (they are exactly
/// the columns of `H` that vanish) and the rest map to independent columns.
fn column_echelon_unimodular(a: &[Vec<i128>]) -> (Vec<Vec<i128>>, Vec<usize>) {
    let n = a.len();
    let mut h: Vec<Vec<i128>> = a.to_vec();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let col_swap = |m: &mut Vec<Vec<i128>>, p: usize, q: usize| {
        for row in m.iter_mut() {
            row.swap(p, q);
        }
    };
    let col_axpy = |m: &mut Vec<Vec<i128>>, dst: usize, src: usize, f: i128| {
        for row in m.iter_mut() {
            let t = row[src];
            row[dst] -= f * t;
        }
    };
    let mut lead = 0usize;
    for r in 0..n {
        if lead >= n {
            break;
        }
        // gcd-reduce row r across columns lead..n
        loop {
            let mut pivot: Option<usize> = None;
            for j in lead..n {
                if h[r][j] != 0
                    && pivot.map_or(true, |p| h[r][j].unsigned_abs() < h[r][p].unsigned_abs())
                {
                    pivot = Some(j);
                }
            }
            let Some(p) = pivot else { break };
            if p != lead {
                col_swap(&mut h, lead, p);
                col_swap(&mut u, lead, p);
            }
            let mut dirty = false;
            for j in (lead + 1)..n {
                if h[r][j] != 0 {
                    let f = h[r][j].div_euclid(h[r][lead]);
                    if f != 0 {
                        col_axpy(&mut h, j, lead, f);
                        col_axpy(&mut u, j, lead, f);
                    }
                    if h[r][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                lead += 1;
                break;
            }
        }
    }
    let kernel: Vec<usize> = (0..n)
        .filter(|&j| (0..n).all(|i| h[i][j] == 0))
        .collect();
    (u, kernel)
}

/// `R^T D R` decomposition of a positive definite rational matrix, with `R`
/// unit upper triangular; the quadratic form becomes
/// `sum_i d_i (x_i + sum_{j>i} R[i][j] x_j)^2`.
fn ldl_decompose(a: &[Vec<Rational>]) -> Result<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let n = a.len();
    let mut d = vec![Rational::zero(); n];
    let mut r: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| rat_int(i128::from(i == j))).collect())
        .collect();
    for i in 0..n {
        let mut di = a[i][i];
        for k in 0..i {
            di -= d[k] * r[k][i] * r[k][i];
        }
        if di <= Rational::zero() {
            return Err(Error::internal(
                "reduced form is not positive definite; kernel split failed",
            ));
        }
        d[i] = di;
        for j in (i + 1)..n {
            let mut v = a[i][j];
            for k in 0..i {
                v -= d[k] * r[k][i] * r[k][j];
            }
            r[i][j] = v / di;
        }
    }
    Ok((d, r))
}

/// Solve `A x = b` for positive definite rational `A` by elimination.
fn solve_pd(a: &[Vec<Rational>], b: &[Rational]) -> Vec<Rational> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = a[i].clone();
            row.push(b[i]);
            row
        })
        .collect();
    for i in 0..n {
        let piv = (i..n).find(|&k| !m[k][i].is_zero()).expect("pd matrix");
        m.swap(i, piv);
        let p = m[i][i];
        for j in i..=n {
            m[i][j] /= p;
        }
        for k in 0..n {
            if k != i && !m[k][i].is_zero() {
                let f = m[k][i];
                for j in i..=n {
                    let t = m[i][j];
                    m[k][j] -= f * t;
                }
            }
        }
    }
    (0..n).map(|i| m[i][n]).collect()
}

struct CvpProblem {
    /// columns spanning a complement of the kernel (rank x m)
    m_cols: Vec<Vec<i128>>,
    d: Vec<Rational>,
    r: Vec<Vec<Rational>>,
    t: Vec<Rational>,
    /// constant term `w^T A w - t^T A' t` of the shifted form
    base: Rational,
}

/// Exact enumeration of `f(a) = sum_i d_i (a_i - c_i(a))^2` below a budget.
/// `collect_ties` switches between strict minimisation and gathering every
/// optimum.
fn enumerate(
    p: &CvpProblem,
    best: &mut Rational,
    acc: &mut Vec<i128>,
    level: isize,
    partial: Rational,
    out: Option<&mut Vec<Vec<i128>>>,
) {
    let m = p.d.len();
    if level < 0 {
        if let Some(out) = out {
            if partial == *best {
                out.push(acc.clone());
            }
        } else if partial < *best {
            *best = partial;
        }
        return;
    }
    let i = level as usize;
    // centre of the level-i coordinate given the deeper choices
    let mut c = p.t[i];
    for j in (i + 1)..m {
        c -= p.r[i][j] * (rat_int(acc[j]) - p.t[j]);
    }
    let budget = *best - partial;
    if budget < Rational::zero() {
        return;
    }
    let radius = (rat_to_f64(budget) / rat_to_f64(p.d[i])).max(0.0).sqrt();
    let c_f = rat_to_f64(c);
    let lo = (c_f - radius).floor() as i128 - 1;
    let hi = (c_f + radius).ceil() as i128 + 1;
    let collecting = out.is_some();
    let mut out = out;
    for a_i in lo..=hi {
        let y = rat_int(a_i) - c;
        let contrib = p.d[i] * y * y;
        let next = partial + contrib;
        let admissible = if collecting { next <= *best } else { next < *best };
        if admissible {
            acc[i] = a_i;
            enumerate(p, best, acc, level - 1, next, out.as_deref_mut());
        }
    }
}

/// Shared CVP core: minimum of `-q(c1/2 - mu)` over integer classes `mu`
/// with kernel directions pinned to the zero representative, plus every
/// minimiser expressed as a class.
fn cvp_optimal(ns: &NSLattice, c1: &[i64]) -> Result<(Rational, Vec<Vec<i128>>)> {
    ns.check_len(c1)?;
    let n = ns.rank;
    // A = -G is positive semi-definite
    let a_int: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| -(ns.gram[i][j] as i128)).collect())
        .collect();
    let (u, kernel) = column_echelon_unimodular(&a_int);
    let reg: Vec<usize> = (0..n).filter(|j| !kernel.contains(j)).collect();
    let m = reg.len();
    let m_cols: Vec<Vec<i128>> = reg
        .iter()
        .map(|&j| (0..n).map(|i| u[i][j]).collect())
        .collect();
    let w: Vec<Rational> = c1.iter().map(|&x| rat(x as i128, 2)).collect();
    let aw: Vec<Rational> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| rat_int(a_int[i][j]) * w[j])
                .sum::<Rational>()
        })
        .collect();
    let waw: Rational = (0..n).map(|i| w[i] * aw[i]).sum();
    if m == 0 {
        // totally degenerate form: f is constant, mu = 0 is the pinned optimum
        return Ok((waw, vec![vec![0; n]]));
    }
    // A' = M^T A M, b = M^T A w
    let a_red: Vec<Vec<Rational>> = (0..m)
        .map(|p| {
            (0..m)
                .map(|q| {
                    let mut s: i128 = 0;
                    for i in 0..n {
                        for j in 0..n {
                            s += m_cols[p][i] * a_int[i][j] * m_cols[q][j];
                        }
                    }
                    rat_int(s)
                })
                .collect()
        })
        .collect();
    let b_red: Vec<Rational> = (0..m)
        .map(|p| (0..n).map(|i| rat_int(m_cols[p][i]) * aw[i]).sum())
        .collect();
    let t = solve_pd(&a_red, &b_red);
    let (d, r) = ldl_decompose(&a_red)?;
    let tat: Rational = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| t[i] * a_red[i][j] * t[j])
                .sum::<Rational>()
        })
        .sum();
    let base = waw - tat;
    let p = CvpProblem {
        m_cols,
        d,
        r,
        t,
        base,
    };
    // first guess: componentwise rounding of the centre
    let a0: Vec<i128> = p.t.iter().map(|&ti| rat_round(ti)).collect();
    let f = |a: &[i128]| -> Rational {
        let mut s = p.base;
        for i in 0..m {
            let mut y = rat_int(a[i]) - p.t[i];
            for j in (i + 1)..m {
                y += p.r[i][j] * (rat_int(a[j]) - p.t[j]);
            }
            s += p.d[i] * y * y;
        }
        s
    };
    let mut best = f(&a0);
    let mut acc = vec![0i128; m];
    enumerate(&p, &mut best, &mut acc, m as isize - 1, p.base, None);
    let mut ties: Vec<Vec<i128>> = Vec::new();
    enumerate(
        &p,
        &mut best,
        &mut acc,
        m as isize - 1,
        p.base,
        Some(&mut ties),
    );
    // map coefficient vectors back to classes mu = M a
    let mus: Vec<Vec<i128>> = ties
        .iter()
        .map(|a| {
            (0..n)
                .map(|i| (0..m).map(|q| p.m_cols[q][i] * a[q]).sum())
                .collect()
        })
        .collect();
    Ok((best, mus))
}

/// `m(2, c1) = -(1/2) max_{mu in NS} q(c1/2 - mu)`, exact and nonnegative.
pub fn m_two(ns: &NSLattice, c1: &[i64]) -> Result<Rational> {
    let (min_f, _) = cvp_optimal(ns, c1)?;
    Ok(min_f / rat_int(2))
}

/// The distinguished determinant class: `d in c1 + 2 NS` with
/// `-(1/2) q(d/2) = m(2, c1)`, ties broken by the lexicographically
/// smallest coordinate vector.  Kernel directions of the form carry no
/// information and are pinned to the representative produced by the column
/// reduction, so the choice is stable across runs.
pub fn select_delta_class(ns: &NSLattice, c1: &[i64]) -> Result<Vec<i64>> {
    let (_, mus) = cvp_optimal(ns, c1)?;
    let mut deltas: Vec<Vec<i128>> = mus
        .iter()
        .map(|mu| {
            (0..ns.rank)
                .map(|i| c1[i] as i128 - 2 * mu[i])
                .collect()
        })
        .collect();
    deltas.sort();
    let d = deltas.into_iter().next().expect("enumeration is nonempty");
    d.into_iter()
        .map(|x| {
            i64::try_from(x).map_err(|_| Error::internal("delta class exceeds i64"))
        })
        .collect()
}

/// `Delta(2, c1, c2) = (1/2)(c2 - q(c1)/4)`.
pub fn discriminant_numeric(ns: &NSLattice, c: &ChernData) -> Result<Rational> {
    let q = ns.q_int(&c.c1)?;
    Ok((rat_int(c.c2 as i128) - rat(q, 4)) / rat_int(2))
}

/// Filtrable bundles with the given Chern data exist iff
/// `Delta(2, c1, c2) >= m(2, c1)`.
pub fn filtrable_exists(ns: &NSLattice, c: &ChernData) -> Result<bool> {
    Ok(discriminant_numeric(ns, c)? >= m_two(ns, &c.c1)?)
}

/// Lower bound `c2 >= -2 m(2, c1)` and the band `[-2m, 0)` where every
/// bundle is unfiltrable, hence stable.  The band is `None` when it is
/// empty (`m = 0`).
pub fn c2_admissible_range(
    ns: &NSLattice,
    c1: &[i64],
) -> Result<(Rational, Option<(Rational, Rational)>)> {
    let m = m_two(ns, c1)?;
    let c2_min = rat_int(-2) * m;
    let band = if m > Rational::zero() {
        Some((c2_min, Rational::zero()))
    } else {
        None
    };
    Ok((c2_min, band))
}

/// Check that `v` is an integer class congruent to `c1` mod `2 NS`.
pub fn congruent_mod_two(ns: &NSLattice, v: &[i64], c1: &[i64]) -> Result<bool> {
    ns.check_len(v)?;
    ns.check_len(c1)?;
    Ok(v.iter().zip(c1).all(|(a, b)| (a - b).rem_euclid(2) == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn ns(gram: Vec<Vec<i64>>) -> NSLattice {
        NSLattice::new(gram).unwrap()
    }

    /// Brute-force oracle: scan the box `||mu||_inf <= 20` directly.
    fn m_two_brute(l: &NSLattice, c1: &[i64]) -> Rational {
        let n = l.rank();
        if n == 0 {
            return rat_int(0);
        }
        let mut best: Option<Rational> = None;
        let mut mu = vec![-20i64; n];
        loop {
            let v: Vec<Rational> = (0..n).map(|i| rat(c1[i] as i128, 2) - rat_int(mu[i] as i128)).collect();
            let q = l.q_rat(&v).unwrap();
            if best.map_or(true, |b| q > b) {
                best = Some(q);
            }
            let mut k = 0;
            loop {
                if k == n {
                    return best.unwrap() * rat(-1, 2);
                }
                mu[k] += 1;
                if mu[k] <= 20 {
                    break;
                }
                mu[k] = -20;
                k += 1;
            }
        }
    }

    #[test]
    fn zero_form_gives_zero_and_keeps_c1() {
        for rank in [0usize, 1, 3] {
            let l = ns(vec![vec![0; rank]; rank]);
            let c1: Vec<i64> = (0..rank as i64).map(|i| i - 1).collect();
            assert_eq!(m_two(&l, &c1).unwrap(), rat_int(0));
            assert_eq!(select_delta_class(&l, &c1).unwrap(), c1);
        }
    }

    #[test]
    fn rank_one_examples() {
        let l = ns(vec![vec![-2]]);
        assert_eq!(m_two(&l, &[1]).unwrap(), rat(1, 4));
        assert_eq!(m_two(&l, &[2]).unwrap(), rat_int(0));
        assert_eq!(select_delta_class(&l, &[1]).unwrap(), vec![-1]);
        assert_eq!(select_delta_class(&l, &[2]).unwrap(), vec![0]);
        let l4 = ns(vec![vec![-4]]);
        assert_eq!(m_two(&l4, &[1]).unwrap(), rat(1, 2));
    }

    #[test]
    fn indefinite_or_asymmetric_rejected() {
        assert!(NSLattice::new(vec![vec![1]]).is_err());
        assert!(NSLattice::new(vec![vec![-2, 3], vec![3, -2]]).is_err());
        assert!(NSLattice::new(vec![vec![-2, 1], vec![0, -2]]).is_err());
        assert!(NSLattice::new(vec![vec![0, 1], vec![1, 0]]).is_err());
        // semi-definite with kernel is fine
        assert!(NSLattice::new(vec![vec![-2, 2], vec![2, -2]]).is_ok());
    }

    #[test]
    fn delta_attains_m_and_is_congruent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..40 {
            let l = random_nsd(&mut rng);
            let n = l.rank();
            let c1: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
            let m = m_two(&l, &c1).unwrap();
            assert!(m >= rat_int(0), "m must be nonnegative");
            let d = select_delta_class(&l, &c1).unwrap();
            assert!(congruent_mod_two(&l, &d, &c1).unwrap());
            let half: Vec<Rational> = d.iter().map(|&x| rat(x as i128, 2)).collect();
            let q = l.q_rat(&half).unwrap();
            assert_eq!(q * rat(-1, 2), m, "delta does not attain m");
        }
    }

    #[test]
    fn matches_brute_force_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..30 {
            let l = random_nsd(&mut rng);
            let n = l.rank();
            let c1: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
            let fast = m_two(&l, &c1).unwrap();
            let brute = m_two_brute(&l, &c1);
            assert_eq!(fast, brute, "lattice {:?} c1 {:?}", l.gram(), c1);
        }
    }

    #[test]
    fn invariant_under_even_shifts() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let l = random_nsd(&mut rng);
            let n = l.rank();
            let c1: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
            let mu: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..=6)).collect();
            let shifted: Vec<i64> = c1.iter().zip(&mu).map(|(a, b)| a + 2 * b).collect();
            assert_eq!(m_two(&l, &c1).unwrap(), m_two(&l, &shifted).unwrap());
        }
    }

    #[test]
    fn select_is_deterministic() {
        let l = ns(vec![vec![-2, 0], vec![0, -2]]);
        let first = select_delta_class(&l, &[1, 1]).unwrap();
        for _ in 0..5 {
            assert_eq!(select_delta_class(&l, &[1, 1]).unwrap(), first);
        }
        // all four (+-1, +-1) attain the optimum; lexicographic pick
        assert_eq!(first, vec![-1, -1]);
    }

    #[test]
    fn discriminant_and_filtrability_examples() {
        let l0 = ns(vec![vec![0]]);
        assert_eq!(
            discriminant_numeric(&l0, &ChernData { c1: vec![0], c2: 2 }).unwrap(),
            rat_int(1)
        );
        assert_eq!(
            discriminant_numeric(&l0, &ChernData { c1: vec![3], c2: 0 }).unwrap(),
            rat_int(0)
        );
        let l2 = ns(vec![vec![-2]]);
        assert_eq!(
            discriminant_numeric(&l2, &ChernData { c1: vec![1], c2: 0 }).unwrap(),
            rat(1, 4)
        );
        assert!(filtrable_exists(&l0, &ChernData { c1: vec![0], c2: 1 }).unwrap());
        assert!(!filtrable_exists(&l2, &ChernData { c1: vec![1], c2: -1 }).unwrap());
        assert!(filtrable_exists(&l2, &ChernData { c1: vec![1], c2: 0 }).unwrap());
    }

    #[test]
    fn admissible_range_examples() {
        let l0 = ns(vec![vec![0]]);
        assert_eq!(c2_admissible_range(&l0, &[1]).unwrap(), (rat_int(0), None));
        let l2 = ns(vec![vec![-2]]);
        assert_eq!(
            c2_admissible_range(&l2, &[1]).unwrap(),
            (rat(-1, 2), Some((rat(-1, 2), rat_int(0))))
        );
        let l4 = ns(vec![vec![-4]]);
        assert_eq!(
            c2_admissible_range(&l4, &[1]).unwrap(),
            (rat_int(-1), Some((rat_int(-1), rat_int(0))))
        );
    }

    #[test]
    fn degenerate_directions_are_quotiented() {
        // rank 2 with one-dimensional kernel: gram = -[[2,2],[2,2]]
        let l = ns(vec![vec![-2, -2], vec![-2, -2]]);
        let m = m_two(&l, &[1, 0]).unwrap();
        assert_eq!(m, m_two_brute(&l, &[1, 0]));
        let d = select_delta_class(&l, &[1, 0]).unwrap();
        let half: Vec<Rational> = d.iter().map(|&x| rat(x as i128, 2)).collect();
        assert_eq!(l.q_rat(&half).unwrap() * rat(-1, 2), m);
    }

    fn random_nsd(rng: &mut rand_chacha::ChaCha8Rng) -> NSLattice {
        // G = -B^T B with small entries stays within |gram| <= 10
        loop {
            let n = rng.gen_range(1..=3usize);
            let k = rng.gen_range(0..=n);
            let b: Vec<Vec<i64>> = (0..k)
                .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
                .collect();
            let mut gram = vec![vec![0i64; n]; n];
            for (i, row) in gram.iter_mut().enumerate() {
                for j in 0..n {
                    row[j] = -(0..k).map(|r| b[r][i] * b[r][j]).sum::<i64>();
                }
            }
            if gram.iter().flatten().all(|&x| x.abs() <= 10) {
                return NSLattice::new(gram).expect("constructed NSD form");
            }
        }
    }
}
