//! Independent oracles: closed-form intersection numbers expanded by brute
//! force over all choices of basis vector per factor.
#![allow(dead_code)]

use num_traits::{One, Zero};
use stability_core::arith::rat;
use stability_core::{Class, Rational};

/// `L^i H^{n−i}` on the Wu bundle with base degree `d` and weights `a`.
pub fn wu_number(d: i64, a: &[i64], l_power: usize) -> Rational {
    match l_power {
        0 => rat(d * a.iter().sum::<i64>(), 1),
        1 => rat(d, 1),
        _ => Rational::zero(),
    }
}

/// `H^i E^{n−i}` on the blow-up of `P^n` at a point.
pub fn blowup_number(n: usize, h_power: usize) -> Rational {
    if h_power == n {
        Rational::one()
    } else if h_power == 0 {
        rat(if n % 2 == 1 { 1 } else { -1 }, 1)
    } else {
        Rational::zero()
    }
}

/// `∫ c_1 ⋯ c_n` on a rank 2 ring, given `number(k)` for the monomial with
/// `k` factors of the first basis vector.
pub fn brute_force(classes: &[&Class], number: impl Fn(usize) -> Rational) -> Rational {
    let n = classes.len();
    let mut total = Rational::zero();
    for mask in 0u32..(1 << n) {
        let mut term = Rational::one();
        let mut k = 0;
        for (i, c) in classes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                term *= &c.coords()[0];
                k += 1;
            } else {
                term *= &c.coords()[1];
            }
        }
        if !term.is_zero() {
            total += term * number(k);
        }
    }
    total
}

/// `∫ α^i β^j` on the Wu bundle by brute force.
pub fn wu_powers(d: i64, a: &[i64], alpha: &Class, i: usize, beta: &Class, j: usize) -> Rational {
    let mut v: Vec<&Class> = std::iter::repeat(alpha).take(i).collect();
    v.extend(std::iter::repeat(beta).take(j));
    brute_force(&v, |k| wu_number(d, a, k))
}

pub fn c2(a: Rational, b: Rational) -> Class {
    Class::new(vec![a, b])
}

/// `μ_{α,β}` on Wu(1,(1,3)) for `α = L+H`, `β = L+bH`.
pub fn table_mu(b: &Rational) -> Rational {
    rat(3, 7) * (Rational::one() + rat(6, 1) * b)
}

/// `μ − μ(S)` for the same family: `(26b − 5)/21`.
pub fn table_gap_s(b: &Rational) -> Rational {
    (rat(26, 1) * b - rat(5, 1)) / rat(21, 1)
}

/// `μ − μ(C)` for the same family.
pub fn table_gap_c(b: &Rational) -> Rational {
    table_mu(b) - Rational::one()
}
