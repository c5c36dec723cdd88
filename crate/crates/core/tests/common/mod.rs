//! Independent oracles shared by the integration tests and the acceptance
//! suite: dense CMV and Jacobi truncations, resolvents, quadrature and
//! Cauchy integrals.

#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use opuc::coeffs::{Descriptor, Generator, JacobiPair, Orientation, Tail};
use opuc::{Jacobi, Verblunsky, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the disc `|z| <= r`.
pub fn disc_point(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    C64::from_polar(r * rng.random::<f64>().sqrt(), rng.random_range(0.0..2.0 * PI))
}

/// Whole-line sequence with random values on `-len/2 .. len/2` and random
/// constant tails.
pub fn random_whole_line(rng: &mut ChaCha8Rng, len: usize, r: f64) -> Verblunsky {
    let values = (0..len).map(|_| disc_point(rng, r)).collect();
    let tail = Tail::Constant { value: disc_point(rng, r) };
    let left_tail = Tail::Constant { value: disc_point(rng, r) };
    Descriptor::whole_line(Generator::Explicit { start: -(len as i64) / 2, values, tail, left_tail }).unwrap()
}

/// Whole-line sequence with `count` random nonzero values in `-6..6`.
pub fn random_finite_support(rng: &mut ChaCha8Rng, count: usize, r: f64) -> Verblunsky {
    let mut idx: Vec<i64> = Vec::new();
    while idx.len() < count {
        let i = rng.random_range(-6..6);
        if !idx.contains(&i) {
            idx.push(i);
        }
    }
    idx.sort();
    let support = idx.into_iter().map(|i| (i, disc_point(rng, r))).collect();
    Descriptor::finite_support(Orientation::WholeLine, support).unwrap()
}

pub fn random_jacobi(rng: &mut ChaCha8Rng, len: usize) -> Jacobi {
    let pair = |rng: &mut ChaCha8Rng| JacobiPair::new(rng.random_range(0.3..2.0), rng.random_range(-1.5..1.5));
    let values = (0..len).map(|_| pair(rng)).collect();
    let tail = Tail::Constant { value: pair(rng) };
    let left_tail = Tail::Constant { value: pair(rng) };
    Descriptor::whole_line(Generator::Explicit { start: -(len as i64) / 2, values, tail, left_tail }).unwrap()
}

/// `2 x 2` block `[[conj a, rho], [rho, -a]]`.
fn theta(a: C64) -> [[C64; 2]; 2] {
    let rho = C64::from((1.0 - a.norm_sqr()).sqrt());
    [[a.conj(), rho], [rho, -a]]
}

/// Dense CMV truncation on rows `lo ..= hi` assembled as `L M` from the
/// coefficient function; `L` carries the blocks at even sites and `M` those
/// at odd sites.
pub fn dense_cmv(alpha: impl Fn(i64) -> C64, lo: i64, hi: i64) -> DMatrix<C64> {
    let dim = (hi - lo + 1) as usize;
    let mut l = DMatrix::<C64>::zeros(dim, dim);
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for k in lo - 1..=hi {
        let target = if k.rem_euclid(2) == 0 { &mut l } else { &mut m };
        let b = theta(alpha(k));
        for (di, row) in b.iter().enumerate() {
            for (dj, v) in row.iter().enumerate() {
                let (i, j) = (k + di as i64, k + dj as i64);
                if (lo..=hi).contains(&i) && (lo..=hi).contains(&j) {
                    target[((i - lo) as usize, (j - lo) as usize)] = *v;
                }
            }
        }
    }
    l * m
}

/// `[E^ell]_{n,n}` from a dense truncation with margin `2 ell + 6`.
pub fn dense_moment(desc: &Verblunsky, n: i64, ell: usize) -> C64 {
    let w = 2 * ell as i64 + 6;
    let e = dense_cmv(|k| desc.value(k).unwrap(), n - w, n + w);
    let mut p = e.clone();
    for _ in 1..ell {
        p = &p * &e;
    }
    p[(w as usize, w as usize)]
}

/// Schur function of the diagonal measure at `n` from the resolvent
/// `F(z) = <d_n, (1 + z E*) (1 - z E*)^{-1} d_n>` of a dense truncation,
/// with `z f = (F - 1) / (F + 1)`.
pub fn dense_diag_schur(desc: &Verblunsky, n: i64, z: C64, margin: i64) -> C64 {
    let e = dense_cmv(|k| desc.value(k).unwrap(), n - margin, n + margin);
    let dim = e.nrows();
    let k = margin as usize;
    let es = e.adjoint();
    let a = DMatrix::<C64>::identity(dim, dim) - &es * z;
    let mut rhs = DMatrix::<C64>::zeros(dim, 1);
    rhs[(k, 0)] = C64::new(1.0, 0.0);
    let x = a.lu().solve(&rhs).unwrap();
    let y = &x + (&es * &x) * z;
    let big_f = y[(k, 0)];
    (big_f - 1.0) / ((big_f + 1.0) * z)
}

/// `(H - z)^{-1}_{n,n}` of the truncation to rows `n - hw ..= n + hw`, by
/// forward and backward tridiagonal elimination.
pub fn dense_jacobi_resolvent(desc: &Jacobi, n: i64, z: C64, hw: i64) -> C64 {
    let lo = n - hw;
    let dim = (2 * hw + 1) as usize;
    let p: Vec<_> = (0..dim).map(|i| desc.value(lo + i as i64).unwrap()).collect();
    let diag = |i: usize| C64::from(p[i].b) - z;
    // Schur complements from the top and from the bottom
    let mut top = vec![C64::new(0.0, 0.0); dim];
    top[0] = diag(0);
    for i in 1..dim {
        top[i] = diag(i) - p[i - 1].a * p[i - 1].a / top[i - 1];
    }
    let mut bottom = vec![C64::new(0.0, 0.0); dim];
    bottom[dim - 1] = diag(dim - 1);
    for i in (0..dim - 1).rev() {
        bottom[i] = diag(i) - p[i].a * p[i].a / bottom[i + 1];
    }
    let k = hw as usize;
    C64::new(1.0, 0.0) / (top[k] + bottom[k] - diag(k))
}

/// Trapezoid rule for a smooth `2 pi`-periodic integrand, divided by `2 pi`.
pub fn circle_mean(f: impl Fn(f64) -> f64, nodes: usize) -> f64 {
    let h = 2.0 * PI / nodes as f64;
    (0..nodes).map(|j| f(j as f64 * h)).sum::<f64>() / nodes as f64
}

/// Poisson kernel `Re((e^{it} + z) / (e^{it} - z))`.
pub fn poisson(z: C64, t: f64) -> f64 {
    let e = C64::from_polar(1.0, t);
    ((e + z) / (e - z)).re
}

/// Taylor coefficients `c_0 .. c_{len-1}` of `f` at 0 by a Cauchy integral
/// on `|z| = r` with `nodes` points.
pub fn cauchy_taylor(f: impl Fn(C64) -> C64, len: usize, r: f64, nodes: usize) -> Vec<C64> {
    let vals: Vec<C64> = (0..nodes)
        .map(|j| f(C64::from_polar(r, 2.0 * PI * j as f64 / nodes as f64)))
        .collect();
    (0..len)
        .map(|k| {
            let s: C64 = vals
                .iter()
                .enumerate()
                .map(|(j, v)| v * C64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / nodes as f64))
                .sum();
            s / (nodes as f64 * r.powi(k as i32))
        })
        .collect()
}
