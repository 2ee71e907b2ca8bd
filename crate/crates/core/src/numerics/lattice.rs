//! Integer lattice routines: integral LLL reduction, integer kernels and
//! torsion of quotient lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type IVec = Vec<BigInt>;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `round(a / b)` for `b > 0`, halves rounded up.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two_a: BigInt = a * 2u32 + b;
    two_a.div_floor(&(b * 2u32))
}

/// Result of LLL reduction with the integral Gram–Schmidt data.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub basis: Vec<IVec>,
    /// `d[i] = Π_{j<i} ‖b*_j‖²`, with `d[0] = 1`; length `n + 1`.
    pub d: Vec<BigInt>,
}

impl Reduced {
    /// `‖b*_i‖² = d[i+1] / d[i]` as a pair.
    pub fn gs_norm_sq(&self, i: usize) -> (BigInt, BigInt) {
        (self.d[i + 1].clone(), self.d[i].clone())
    }

    /// Smallest Gram–Schmidt squared norm over indices `from..n`; every
    /// lattice vector outside `span(b_0..b_from)` is at least this long.
    pub fn min_gs_norm_sq(&self, from: usize) -> Option<f64> {
        (from..self.basis.len())
            .map(|i| ratio_f64(&self.d[i + 1], &self.d[i]))
            .reduce(f64::min)
    }
}

fn ratio_f64(a: &BigInt, b: &BigInt) -> f64 {
    let shift = a.bits().max(b.bits()).saturating_sub(900) as usize;
    let (a, b) = (a >> shift, b >> shift);
    a.to_f64().unwrap_or(f64::INFINITY) / b.to_f64().unwrap_or(f64::INFINITY)
}

/// Integral LLL with `δ = 3/4` on linearly independent row vectors.
///
/// Panics if the input vectors are dependent.
pub fn lll(basis: Vec<IVec>) -> Reduced {
    let n = basis.len();
    let mut b = basis;
    if n == 0 {
        return Reduced { basis: b, d: vec![BigInt::one()] };
    }
    // d[i+1] stores Cohen's d_i (1-based); lam[k][j] for j < k.
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[0] = BigInt::one();
    d[1] = dot(&b[0], &b[0]);
    let mut k = 1usize;
    let mut kmax = 0usize;

    let red = |b: &mut Vec<IVec>, lam: &mut Vec<Vec<BigInt>>, d: &Vec<BigInt>, k: usize, l: usize| {
        if (&lam[k][l] * 2u32).abs() > d[l + 1] {
            let q = round_div(&lam[k][l], &d[l + 1]);
            let bl = b[l].clone();
            for (x, y) in b[k].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            lam[k][l] = &lam[k][l] - &q * &d[l + 1];
            for i in 0..l {
                let t = &q * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    };

    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    assert!(!u.is_zero(), "LLL input vectors are linearly dependent");
                    d[k + 1] = u;
                }
            }
        }
        loop {
            red(&mut b, &mut lam, &d, k, k - 1);
            // Lovász: 4·d_k·d_{k-2} < 3·d_{k-1}² − 4·λ² triggers a swap.
            let lhs = &d[k + 1] * &d[k - 1] * 4;
            let rhs = &d[k] * &d[k] * 3 - &lam[k][k - 1] * &lam[k][k - 1] * 4;
            if lhs < rhs {
                b.swap(k, k - 1);
                for j in 0..k - 1 {
                    let t = lam[k][j].clone();
                    lam[k][j] = lam[k - 1][j].clone();
                    lam[k - 1][j] = t;
                }
                let l = lam[k][k - 1].clone();
                let bb = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
                for i in k + 1..=kmax {
                    let t = lam[i][k].clone();
                    lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
                    lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k + 1];
                }
                d[k] = bb;
                if k > 1 {
                    k -= 1;
                }
            } else {
                for l in (0..k - 1).rev() {
                    red(&mut b, &mut lam, &d, k, l);
                }
                k += 1;
                break;
            }
        }
    }
    Reduced { basis: b, d }
}

/// Basis of the integer kernel `{x ∈ Zⁿ : A·x = 0}` for an `r × n` integer
/// matrix given by rows.
pub fn integer_kernel(rows: &[IVec], n: usize) -> Vec<IVec> {
    // Column operations on A, mirrored on U = identity.
    let mut cols: Vec<IVec> = (0..n)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let mut u: Vec<IVec> = (0..n)
        .map(|j| (0..n).map(|i| BigInt::from((i == j) as i64)).collect())
        .collect();
    let mut pivot = 0usize;
    for i in 0..rows.len() {
        loop {
            let nonzero: Vec<usize> = (pivot..n).filter(|&j| !cols[j][i].is_zero()).collect();
            if nonzero.len() <= 1 {
                if let Some(&p) = nonzero.first() {
                    cols.swap(p, pivot);
                    u.swap(p, pivot);
                    pivot += 1;
                }
                break;
            }
            let p = *nonzero
                .iter()
                .min_by(|&&a, &&b| cols[a][i].abs().cmp(&cols[b][i].abs()))
                .unwrap();
            for &j in &nonzero {
                if j == p {
                    continue;
                }
                let q = cols[j][i].div_floor(&cols[p][i]);
                let (cp, up) = (cols[p].clone(), u[p].clone());
                for (x, y) in cols[j].iter_mut().zip(&cp) {
                    *x -= &q * y;
                }
                for (x, y) in u[j].iter_mut().zip(&up) {
                    *x -= &q * y;
                }
            }
        }
    }
    u.split_off(pivot)
}

/// Product of the invariant factors of the row lattice spanned by `rows`
/// inside `Zⁿ`, i.e. the order of the torsion of `Zⁿ / span(rows)`.
/// Rows must be linearly independent.
pub fn torsion_order(rows: &[IVec]) -> BigInt {
    let mut m: Vec<IVec> = rows.to_vec();
    let r = m.len();
    if r == 0 {
        return BigInt::one();
    }
    let n = m[0].len();
    let mut prod = BigInt::one();
    for t in 0..r {
        loop {
            // pivot: smallest nonzero |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in m.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    if !x.is_zero()
                        && best.is_none_or(|(bi, bj)| x.abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                panic!("rows are linearly dependent");
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t].clone();
            let mut clean = true;
            for i in t + 1..r {
                let q = m[i][t].div_floor(&p);
                let pr = m[t].clone();
                for (x, y) in m[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
                clean &= m[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = m[t][j].div_floor(&p);
                for row in m.iter_mut() {
                    let y = row[t].clone();
                    row[j] -= &q * y;
                }
                clean &= m[t][j].is_zero();
            }
            if clean {
                prod *= p.abs();
                break;
            }
        }
    }
    prod
}

/// All nonzero lattice vectors (up to sign) of squared norm ≤ `radius_sq`,
/// by Fincke–Pohst enumeration over an LLL-reduced basis. Floating-point
/// bounds are padded; callers re-check candidates exactly.
pub fn short_vectors(reduced: &[IVec], radius_sq: f64, limit: usize) -> Vec<IVec> {
    let n = reduced.len();
    if n == 0 {
        return vec![];
    }
    let dim = reduced[0].len();
    let bf: Vec<Vec<f64>> = reduced
        .iter()
        .map(|v| v.iter().map(|x| x.to_f64().unwrap()).collect())
        .collect();
    let mut bstar: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    let mut bn = vec![0.0; n];
    for i in 0..n {
        let mut v = bf[i].clone();
        for j in 0..i {
            let m = bf[i].iter().zip(&bstar[j]).map(|(a, b)| a * b).sum::<f64>() / bn[j];
            mu[i][j] = m;
            for (x, y) in v.iter_mut().zip(&bstar[j]) {
                *x -= m * y;
            }
        }
        bn[i] = v.iter().map(|x| x * x).sum();
        bstar.push(v);
    }
    let r2 = radius_sq * (1.0 + 1e-9) + 1e-9;
    let mut out = Vec::new();
    let mut coeffs = vec![0i64; n];
    fn rec(
        level: usize,
        partial: f64,
        coeffs: &mut Vec<i64>,
        mu: &[Vec<f64>],
        bn: &[f64],
        r2: f64,
        out: &mut Vec<Vec<i64>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        let n = coeffs.len();
        let center: f64 = -(level + 1..n).map(|j| coeffs[j] as f64 * mu[j][level]).sum::<f64>();
        let span = ((r2 - partial) / bn[level]).max(0.0).sqrt();
        let lo = (center - span).ceil() as i64;
        let hi = (center + span).floor() as i64;
        for x in lo..=hi {
            let t = x as f64 - center;
            let p = partial + t * t * bn[level];
            if p > r2 {
                continue;
            }
            coeffs[level] = x;
            if level == 0 {
                if coeffs.iter().any(|&c| c != 0) {
                    out.push(coeffs.clone());
                }
            } else {
                rec(level - 1, p, coeffs, mu, bn, r2, out, limit);
            }
        }
        coeffs[level] = 0;
    }
    let mut found = Vec::new();
    rec(n - 1, 0.0, &mut coeffs, &mu, &bn, r2, &mut found, limit);
    for c in found {
        // keep one of ±v: first nonzero coefficient positive
        if c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            continue;
        }
        let mut v = vec![BigInt::zero(); dim];
        for (ci, b) in c.iter().zip(reduced) {
            for (x, y) in v.iter_mut().zip(b) {
                *x += y * *ci;
            }
        }
        out.push(v);
    }
    out
}

pub fn to_ivec(v: &[i64]) -> IVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    /// Independent check of the LLL conditions with rational Gram–Schmidt.
    fn is_lll_reduced(b: &[IVec]) -> bool {
        let n = b.len();
        let q = |x: &BigInt| BigRational::from_integer(x.clone());
        let mut bstar: Vec<Vec<BigRational>> = vec![];
        let mut norms: Vec<BigRational> = vec![];
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let mut v: Vec<BigRational> = b[i].iter().map(q).collect();
            for j in 0..i {
                let m: BigRational =
                    b[i].iter().zip(&bstar[j]).map(|(x, y)| q(x) * y).sum::<BigRational>() / &norms[j];
                for (x, y) in v.iter_mut().zip(&bstar[j]) {
                    *x -= &m * y;
                }
                mu[i][j] = m;
            }
            norms.push(v.iter().map(|x| x * x).sum());
            bstar.push(v);
        }
        let half = BigRational::new(1.into(), 2.into());
        let three_q = BigRational::new(3.into(), 4.into());
        for i in 0..n {
            for j in 0..i {
                if mu[i][j].abs() > half {
                    return false;
                }
            }
            if i > 0 {
                let lhs = &norms[i];
                let rhs = (&three_q - &mu[i][i - 1] * &mu[i][i - 1]) * &norms[i - 1];
                if *lhs < rhs {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn lll_reduces_a_skewed_basis() {
        let b = vec![to_ivec(&[1, 0, 0, 1345]), to_ivec(&[0, 1, 0, 35]), to_ivec(&[0, 0, 1, 154])];
        let r = lll(b);
        assert!(is_lll_reduced(&r.basis));
    }

    #[test]
    fn lll_finds_a_planted_relation() {
        // 3·x1 + 2·x2 − x3 = 0 for x = (1000003, 2000017, 7000043)
        let c = 1i64;
        let x = [1000003i64, 2000017, 3 * 1000003 + 2 * 2000017];
        let b = (0..3)
            .map(|i| {
                let mut v = vec![0i64; 4];
                v[i] = 1;
                v[3] = c * x[i] * 1000;
                to_ivec(&v)
            })
            .collect();
        let r = lll(b);
        assert!(is_lll_reduced(&r.basis));
        let first = &r.basis[0];
        assert!(first[3].is_zero());
        let s: Vec<i64> = first[..3].iter().map(|x| x.to_i64().unwrap()).collect();
        assert!(s == vec![3, 2, -1] || s == vec![-3, -2, 1]);
    }

    #[test]
    fn kernel_of_small_matrix() {
        // x + 2y + 3z = 0
        let k = integer_kernel(&[to_ivec(&[1, 2, 3])], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((&v[0] + &v[1] * 2u32 + &v[2] * 3u32).is_zero());
        }
        // the kernel must be saturated: torsion of Z³/K is trivial
        assert_eq!(torsion_order(&k), BigInt::zero() + 1);
    }

    #[test]
    fn torsion_of_even_sum_lattice() {
        let rows = vec![to_ivec(&[2, 0]), to_ivec(&[1, 1])];
        assert_eq!(torsion_order(&rows), BigInt::from(2));
        let rows = vec![to_ivec(&[2, 0, 0]), to_ivec(&[0, -2, 1])];
        assert_eq!(torsion_order(&rows), BigInt::from(2));
    }

    #[test]
    fn short_vector_enumeration() {
        let r = lll(vec![to_ivec(&[1, 0]), to_ivec(&[0, 1])]);
        let v = short_vectors(&r.basis, 1.0, 100);
        assert_eq!(v.len(), 2);
    }

    proptest::proptest! {
        #[test]
        fn lll_output_is_reduced(rows in proptest::collection::vec(proptest::collection::vec(-50i64..50, 4), 3)) {
            let b: Vec<IVec> = rows.iter().map(|r| to_ivec(r)).collect();
            proptest::prop_assume!(integer_kernel(&transpose(&b), 3).is_empty());
            let r = lll(b);
            proptest::prop_assert!(is_lll_reduced(&r.basis));
        }
    }

    fn transpose(b: &[IVec]) -> Vec<IVec> {
        (0..b[0].len()).map(|j| b.iter().map(|r| r[j].clone()).collect()).collect()
    }
}
