//! Test support: a random corpus of valid gluing matrices and independent
//! brute-force oracles that never call into the library's Smith normal form.
#![allow(dead_code)]

use heegaard::exactalg::IntMatrix;
use heegaard::gluing::GluingData;
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::Rng;

pub type Mat = Vec<Vec<i64>>;

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().copied().map(BigInt::from).collect()
}

pub fn small(v: &[BigInt]) -> Vec<i64> {
    v.iter()
        .map(|x| i64::try_from(x).expect("small entry"))
        .collect()
}

pub fn mat_small(m: &IntMatrix) -> Mat {
    m.to_rows().iter().map(|r| small(r)).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l] != 0 {
                for j in 0..m {
                    out[i][j] += a[i][l] * b[l][j];
                }
            }
        }
    }
    out
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn transpose(a: &Mat) -> Mat {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j]).collect())
        .collect()
}

fn max_abs(a: &Mat) -> i64 {
    a.iter().flatten().map(|x| x.abs()).max().unwrap_or(0)
}

/// `Ω = [[0, 1], [−1, 0]]` in `g × g` blocks.
pub fn omega(g: usize) -> Mat {
    let mut w = vec![vec![0i64; 2 * g]; 2 * g];
    for i in 0..g {
        w[i][g + i] = 1;
        w[g + i][i] = -1;
    }
    w
}

/// The six block relations are equivalent to `M Ω Mᵀ = −Ω`.
pub fn is_anti_symplectic(m: &Mat) -> bool {
    let g = m.len() / 2;
    let lhs = mat_mul(&mat_mul(m, &omega(g)), &transpose(m));
    let neg: Mat = omega(g)
        .into_iter()
        .map(|r| r.into_iter().map(|x| -x).collect())
        .collect();
    lhs == neg
}

/// `[[r, p], [s, q]]` with `ps − rq = 1`, found by search over `r` in order
/// of increasing magnitude.
fn lens_block(p: i64, q: i64) -> Option<Mat> {
    for r in (0..=12i64).flat_map(|a| [a, -a]) {
        let num = 1 + r * q;
        if p == 0 {
            if num == 0 {
                // p = 0 forces rq = −1; s is free, take 0
                return Some(vec![vec![r, 0], vec![0, q]]);
            }
            continue;
        }
        if num % p == 0 {
            return Some(vec![vec![r, p], vec![num / p, q]]);
        }
    }
    None
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Places genus-1 blocks `[[r,p],[s,q]]` into a genus-`g` matrix `[[R,P],[S,Q]]`.
fn block_diagonal(blocks: &[Mat]) -> Mat {
    let g = blocks.len();
    let mut m = vec![vec![0i64; 2 * g]; 2 * g];
    for (i, b) in blocks.iter().enumerate() {
        m[i][i] = b[0][0];
        m[i][g + i] = b[0][1];
        m[g + i][i] = b[1][0];
        m[g + i][g + i] = b[1][1];
    }
    m
}

/// A random symplectic generator: `diag(W, W⁻ᵀ)` with `W` elementary, or a
/// shear `[[1, X], [0, 1]]` / `[[1, 0], [X, 1]]` with `X` symmetric elementary.
fn random_symplectic(rng: &mut StdRng, g: usize) -> Mat {
    let mut a = identity(2 * g);
    let c = if rng.gen_bool(0.5) { 1 } else { -1 };
    let i = rng.gen_range(0..g);
    let j = rng.gen_range(0..g);
    match rng.gen_range(0..4) {
        0 if i != j => {
            // W = 1 + c E_ij, W⁻ᵀ = 1 − c E_ji
            a[i][j] = c;
            a[g + j][g + i] = -c;
        }
        0 | 1 => {
            // W = diag(…, −1, …) or a transposition; both equal their own inverse transpose
            if i == j {
                a[i][i] = -1;
                a[g + i][g + i] = -1;
            } else {
                for off in [0, g] {
                    a[off + i][off + i] = 0;
                    a[off + j][off + j] = 0;
                    a[off + i][off + j] = 1;
                    a[off + j][off + i] = 1;
                }
            }
        }
        kind => {
            let (ro, co) = if kind == 2 { (0, g) } else { (g, 0) };
            a[ro + i][co + j] += c;
            if i != j {
                a[ro + j][co + i] += c;
            }
        }
    }
    a
}

/// Random valid gluing matrix of genus `1..=max_genus` with entries bounded
/// by `max_entry`: connected sums of lens blocks, then random symplectic
/// moves on both sides that keep the bound.
pub fn random_gluing_matrix(rng: &mut StdRng, max_genus: usize, max_entry: i64) -> Mat {
    let g = rng.gen_range(1..=max_genus);
    let blocks: Vec<Mat> = (0..g)
        .map(|_| loop {
            let p = rng.gen_range(0..=6i64);
            let q = rng.gen_range(-6..=6i64);
            if gcd(p, q) != 1 {
                continue;
            }
            if let Some(b) = lens_block(p, q) {
                if max_abs(&b) <= max_entry {
                    break b;
                }
            }
        })
        .collect();
    let mut m = block_diagonal(&blocks);
    for _ in 0..rng.gen_range(0..=12) {
        let a = random_symplectic(rng, g);
        let next = if rng.gen_bool(0.5) {
            mat_mul(&a, &m)
        } else {
            mat_mul(&m, &a)
        };
        if max_abs(&next) <= max_entry {
            m = next;
        }
    }
    assert!(
        is_anti_symplectic(&m),
        "corpus generator produced an invalid matrix"
    );
    m
}

pub fn to_gluing(m: &Mat) -> GluingData {
    GluingData::from_matrix(&IntMatrix::from_rows(m).unwrap()).expect("corpus matrices are valid")
}

/// The `P` block (upper right) of a `2g × 2g` matrix.
pub fn p_block(m: &Mat) -> Mat {
    let g = m.len() / 2;
    m[..g].iter().map(|r| r[g..].to_vec()).collect()
}

pub fn q_block(m: &Mat) -> Mat {
    let g = m.len() / 2;
    m[g..].iter().map(|r| r[g..].to_vec()).collect()
}

// ---------------------------------------------------------------------------
// Oracles for coker P, computed without any Smith normal form.
// ---------------------------------------------------------------------------

/// Rank over ℚ by fraction-free elimination.
pub fn rank(m: &Mat) -> usize {
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let (f, g) = (a[i][c], a[r][c]);
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x = *x * g - y * f;
                }
                let d = a[i].iter().fold(0i128, |acc, &x| gcd128(acc, x));
                if d > 1 {
                    a[i].iter_mut().for_each(|x| *x /= d);
                }
            }
        }
        r += 1;
    }
    r
}

fn gcd128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd128(b, a % b)
    }
}

/// Determinant by permutation expansion; only for tiny matrices.
fn det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut total = 0i128;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] as i128 * det(&minor);
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Order of the torsion subgroup of `coker M`: the gcd of the maximal
/// nonvanishing minors.
pub fn torsion_order(m: &Mat) -> u64 {
    let r = rank(m);
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut g = 0i128;
    for rs in subsets(rows, r) {
        for cs in subsets(cols, r) {
            let minor: Vec<Vec<i64>> = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| m[i][j]).collect())
                .collect();
            g = gcd128(g, det(&minor));
        }
    }
    u64::try_from(g.max(1)).unwrap()
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `|(ℤ/n)^g / (M·(ℤ/n)^g)|` by enumerating the image of the box `(ℤ/n)^g`.
pub fn coker_mod_n_order(m: &Mat, n: u64) -> u64 {
    let g = m.len();
    let n_i = n as i64;
    let size = n.pow(g as u32) as usize;
    let mut seen = vec![false; size];
    let mut x = vec![0i64; g];
    let mut hits = 0u64;
    loop {
        let mut idx = 0usize;
        for row in m {
            let v: i64 = row
                .iter()
                .zip(&x)
                .map(|(a, b)| a * b)
                .sum::<i64>()
                .rem_euclid(n_i);
            idx = idx * n as usize + v as usize;
        }
        if !seen[idx] {
            seen[idx] = true;
            hits += 1;
        }
        let mut k = 0;
        loop {
            if k == g {
                return size as u64 / hits;
            }
            x[k] += 1;
            if x[k] < n_i {
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

/// Largest box side `ℓ^v` the homology oracle will enumerate for `m`.
pub fn oracle_box_side(m: &Mat) -> u64 {
    prime_factors(torsion_order(m))
        .into_iter()
        .map(|(l, e)| l.pow(e))
        .max()
        .unwrap_or(1)
}

/// Free rank and invariant factors (ascending, each `> 1`) of `coker M` for
/// square `M`, from counts of `coker M ⊗ ℤ/ℓ^j`.
pub fn oracle_homology(m: &Mat) -> (usize, Vec<u64>) {
    let g = m.len();
    let free = g - rank(m);
    let t = torsion_order(m);
    let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    for (l, e) in prime_factors(t) {
        // cnt[j] = #{ cyclic ℓ-parts of order ≥ ℓ^j }
        let mut counts = Vec::new();
        let mut prev_log = 0u32;
        let mut total = 0u32;
        for j in 1..=e {
            let n = l.pow(j);
            let torsion_part = coker_mod_n_order(m, n) / n.pow(free as u32);
            let log = torsion_part.ilog(l);
            assert_eq!(l.pow(log), torsion_part, "count is not a power of {l}");
            counts.push(log - prev_log);
            total += log - prev_log;
            prev_log = log;
        }
        assert_eq!(total, e, "ℓ-adic counts disagree with the minor gcd");
        per_prime.push((l, counts));
    }
    let width = per_prime
        .iter()
        .map(|(_, c)| c.first().copied().unwrap_or(0))
        .max()
        .unwrap_or(0) as usize;
    let mut factors = vec![1u64; width];
    for (l, counts) in &per_prime {
        // the i-th largest factor has ℓ-exponent #{j : counts[j] > i}
        for (i, f) in factors.iter_mut().rev().enumerate() {
            let exp = counts.iter().filter(|&&c| c as usize > i).count() as u32;
            *f *= l.pow(exp);
        }
    }
    (free, factors)
}

/// `v mod n ∈ M·(ℤ/n)^cols`, by enumerating the box.
fn in_image_mod(m: &Mat, v: &[i64], n: i64) -> bool {
    let cols = m.first().map_or(0, Vec::len);
    let mut x = vec![0i64; cols];
    loop {
        let hit = m.iter().zip(v).all(|(row, &b)| {
            (row.iter().zip(&x).map(|(a, y)| a * y).sum::<i64>() - b).rem_euclid(n) == 0
        });
        if hit {
            return true;
        }
        let mut k = 0;
        loop {
            if k == cols {
                return false;
            }
            x[k] += 1;
            if x[k] < n {
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

/// Membership `v ∈ M·ℤ^n` for small matrices: solvable over ℚ, and solvable
/// modulo each prime power dividing the torsion order of the cokernel.
pub fn oracle_in_image(m: &Mat, v: &[i64]) -> bool {
    let aug: Mat = m
        .iter()
        .zip(v)
        .map(|(r, &x)| r.iter().copied().chain([x]).collect())
        .collect();
    if rank(&aug) != rank(m) {
        return false;
    }
    prime_factors(torsion_order(m))
        .into_iter()
        .all(|(l, e)| in_image_mod(m, v, l.pow(e) as i64))
}

/// Corpus entries small enough for the box-enumeration oracles, together
/// with the number of draws rejected for exceeding `max_box`.
pub fn oracle_friendly_corpus(rng: &mut StdRng, count: usize, max_box: u64) -> (Vec<Mat>, usize) {
    let mut out = Vec::with_capacity(count);
    let mut rejected = 0;
    while out.len() < count {
        let m = random_gluing_matrix(rng, 3, 6);
        let p = p_block(&m);
        if oracle_box_side(&p).pow(p.len() as u32) <= max_box {
            out.push(m);
        } else {
            rejected += 1;
        }
    }
    (out, rejected)
}

pub fn random_vec(rng: &mut StdRng, len: usize, bound: i64) -> Vec<i64> {
    (0..len).map(|_| rng.gen_range(-bound..=bound)).collect()
}

pub fn mat_vec(m: &Mat, v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}
