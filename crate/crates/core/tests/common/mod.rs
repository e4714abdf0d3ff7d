//! Independent closed forms and class builders shared by the integration
//! tests. Nothing here calls the localization code.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use wallcross::{
    build_sphere_product, class_generator, weyl_correct, EquivariantClass, Generator, MultiPoly, Rational,
    TorusModel,
};

pub fn int(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// `C(a, b)`, zero unless `0 ≤ b ≤ a`.
pub fn binom(a: i64, b: i64) -> BigInt {
    if b < 0 || a < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut out = BigInt::one();
    for i in 0..b {
        out = out * big(a - i) / big(i + 1);
    }
    out
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn multinomial(parts: &[usize]) -> BigInt {
    let n: usize = parts.iter().sum();
    parts
        .iter()
        .fold(factorial(n as u64), |acc, &p| acc / factorial(p as u64))
}

pub fn ipow(base: i64, e: u32) -> BigInt {
    num_traits::pow(big(base), e as usize)
}

/// `Σ_{k=0}^{(n-1)/2} (-1)^k C(n,k) (n-2k)^e`.
pub fn sphere_alternating_sum(n: usize, e: u32) -> BigInt {
    let n = n as i64;
    (0..=(n - 1) / 2)
        .map(|k| {
            let term = binom(n, k) * ipow(n - 2 * k, e);
            if k % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// `-½ (-1)^h Σ_{K ⊂ {1..n-1}, |K| = h} (-1)^{|K ∩ {1..m}|}`, `h = (n-1)/2`,
/// by enumerating the subsets.
pub fn so3_subset_form(n: usize, m: usize) -> Rational {
    let h = (n - 1) / 2;
    let mut total = 0i64;
    for mask in 0u32..(1 << (n - 1)) {
        if mask.count_ones() as usize != h {
            continue;
        }
        let inside = (0..m).filter(|&i| mask >> i & 1 == 1).count();
        total += if inside % 2 == 0 { 1 } else { -1 };
    }
    let sign = if h % 2 == 0 { -1 } else { 1 };
    Rational::new(big(sign * total), big(2))
}

/// `½ (-1)^h (C(n-1, h) - 2 Σ_{j=0}^{m/2} C(m, 2j) C(n-1-m, h-2j))`.
pub fn so3_binomial_form(n: usize, m: usize) -> Rational {
    let (n, m) = (n as i64, m as i64);
    let h = (n - 1) / 2;
    let even: BigInt = (0..=m / 2).map(|j| binom(m, 2 * j) * binom(n - 1 - m, h - 2 * j)).sum();
    let inner = binom(n - 1, h) - big(2) * even;
    let sign = if h % 2 == 0 { 1 } else { -1 };
    Rational::new(inner * big(sign), big(2))
}

/// `C(a, b)` extended by `C(-1, -1) = 1`, the value of the coefficient of
/// `x^a` in `(1-x)^{-(b+1)}` at `b = -1`.
fn binom_series(a: i64, b: i64) -> BigInt {
    if a == -1 && b == -1 {
        BigInt::one()
    } else {
        binom(a, b)
    }
}

/// Closed form of `λ_Θ(u_1^{j1} u_2^{j2})` at a fixed point of `(ℂP²)ⁿ`
/// with `i = (|I_1|, |I_2|, |I_3|)`, for `Θ_1` (`theta = 1`) or `Θ_2`.
pub fn cp2_lambda_closed(i: [usize; 3], j1: u32, j2: u32, theta: u8) -> BigInt {
    let [i1, i2, i3] = i.map(|x| x as i64);
    let n = i1 + i2 + i3;
    let (j1, j2) = (j1 as i64, j2 as i64);
    if j1 + j2 != 2 * n - 2 {
        return BigInt::zero();
    }
    let (sign_exp, j, threshold, top) = match theta {
        1 => (i1 + 1, j2, i1 + 2 * i2 + i3 - 1, j2 - i2 - i3),
        2 => (i2 + 1, j1, 2 * i1 + i2 + i3 - 1, j1 - i1 - i3),
        _ => panic!("theta must be 1 or 2"),
    };
    if j < threshold {
        return BigInt::zero();
    }
    let c = binom_series(top, i1 + i2 - 1);
    if sign_exp % 2 == 0 {
        c
    } else {
        -c
    }
}

/// One summand (without the multinomial) of the closed-form double sum for
/// the `(ℂP²)ⁿ` volume, with `x` standing for `i_3` (first sum) or `i_2`
/// (second sum). `shift` is the constant in the base `3i_1 + 3x - shift`:
/// the printed formula has `n`, the prequantum class gives `2n`.
pub fn cp2_display_summand(n: usize, i1: usize, x: usize, shift: i64) -> BigInt {
    let (n, i1, x) = (n as i64, i1 as i64, x as i64);
    let a = n - 3 * i1;
    let b = 3 * i1 + 3 * x - shift;
    let pow = |base: i64, e: i64| if e < 0 { BigInt::zero() } else { ipow(base, e as u32) };
    let c1 = binom(2 * n - 8, i1 + x - 4);
    let t1 = if c1.is_zero() {
        BigInt::zero()
    } else {
        c1 * pow(a, i1 + x - 4) * pow(b, 2 * n - 4 - i1 - x) * big(2 + x - n)
    };
    let c2 = binom(2 * n - 8, i1 + x - 3);
    let t2 = if c2.is_zero() {
        BigInt::zero()
    } else {
        c2 * pow(a, i1 + x - 3) * pow(b, 2 * n - 5 - i1 - x)
    };
    let mut t3 = BigInt::zero();
    for j in 0..=(i1 + x - 5) {
        let c = binom(n + i1 - 6 - j, n - x - 3) * binom(2 * n - 8, j);
        if !c.is_zero() {
            t3 += c * pow(a, j) * pow(b, 2 * n - 8 - j);
        }
    }
    let body = t1 - t2 - t3;
    if i1 % 2 == 0 {
        -body
    } else {
        body
    }
}

/// The closed-form double sum for `(2n-8)!/(2π)^{2n-8} · vol`.
pub fn cp2_display_total(n: usize, shift: i64) -> BigInt {
    let mut total = BigInt::zero();
    for i1 in 0..=n {
        for x in 0..=n - i1 {
            let rest = n - i1 - x;
            let first = 3 * i1 > n && 3 * x > n;
            let second = 3 * i1 < n && 3 * x < n;
            if first || second {
                total += multinomial(&[i1, x, rest]) * cp2_display_summand(n, i1, x, shift);
            }
        }
    }
    total
}

pub fn prequantum(model: &TorusModel) -> EquivariantClass {
    class_generator(model, &Generator::Prequantum).unwrap()
}

/// `∏ v_i^{l_i}` on `(S²)ⁿ`.
pub fn v_monomial(model: &TorusModel, exps: &[u32]) -> EquivariantClass {
    let mut out = EquivariantClass::constant(model, int(1));
    for (i, &e) in exps.iter().enumerate() {
        if e > 0 {
            let v = class_generator(model, &Generator::V(i + 1)).unwrap();
            out = out.mul(&v.pow(e));
        }
    }
    out
}

/// All exponent vectors of length `len` summing to `total`.
pub fn compositions(len: usize, total: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(len - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A random class `Σ c · L^a ∏ v_i^{b_i}` of total exponent `degree` on
/// `(S²)ⁿ`.
pub fn random_sphere_class<R: Rng>(rng: &mut R, n: usize, degree: u32) -> EquivariantClass {
    let model = build_sphere_product(n);
    random_sphere_class_on(rng, &model, n, degree)
}

pub fn random_sphere_class_on<R: Rng>(
    rng: &mut R,
    model: &TorusModel,
    n: usize,
    degree: u32,
) -> EquivariantClass {
    let l = prequantum(model);
    let mut out = EquivariantClass::constant(model, int(0));
    for _ in 0..rng.gen_range(1..=3) {
        let mut exps = vec![0u32; n + 1];
        for _ in 0..degree {
            exps[rng.gen_range(0..=n)] += 1;
        }
        let c = Rational::new(big(rng.gen_range(-9..=9)), big(rng.gen_range(1..=4)));
        let term = l.pow(exps[0]).mul(&v_monomial(model, &exps[1..])).scale(&c);
        out = out.add(&term);
    }
    out
}

/// `L^{2n-8}/(2n-8)!` corrected by the `PU(3)` roots.
pub fn cp2_volume_class(model: &TorusModel, n: usize) -> EquivariantClass {
    let e = 2 * n as u32 - 8;
    let scale = Rational::new(BigInt::one(), factorial(e as u64));
    weyl_correct(model, &prequantum(model).pow(e).scale(&scale)).unwrap()
}

/// `u_1^{j1} u_2^{j2}` at every fixed point.
pub fn cp_monomial(model: &TorusModel, j1: u32, j2: u32) -> EquivariantClass {
    let p = MultiPoly::monomial(vec![j1, j2], int(1));
    EquivariantClass::constant(model, int(0)).map(|_, _| p.clone())
}

/// Any fixed point id of `(ℂP²)ⁿ` with the given composition.
pub fn cp_point_with(i: [usize; 3]) -> String {
    let mut s = String::from("F");
    for (j, &count) in i.iter().enumerate() {
        for _ in 0..count {
            s.push_str(&(j + 1).to_string());
        }
    }
    s
}
