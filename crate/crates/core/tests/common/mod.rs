//! Shared test oracles, independent of the library's solver paths.

use ctxharvest::ctxscen::IncidenceMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite probability")
}

/// Exact optimum of `max 1·b` subject to `M b <= v`, `b >= 0`, by a
/// Bland-rule simplex in arbitrary-precision rational arithmetic.
///
/// Every pivot is exact, so the returned value is the true optimum of the
/// rationalized data: a second, tolerance-free method against which the
/// floating-point solver is checked.
#[allow(clippy::needless_range_loop)]
pub fn exact_ncf(m: &IncidenceMatrix, v: &[f64]) -> f64 {
    let rows = m.rows;
    let cols = m.cols;
    let total = cols + rows;
    let zero = BigRational::from_integer(BigInt::from(0));
    let one = BigRational::from_integer(BigInt::from(1));

    let mut t = vec![vec![zero.clone(); total + 1]; rows];
    for i in 0..rows {
        for j in 0..cols {
            if m.get(i, j) {
                t[i][j] = one.clone();
            }
        }
        t[i][cols + i] = one.clone();
        t[i][total] = rational(v[i].max(0.0));
    }
    let mut basis: Vec<usize> = (cols..total).collect();
    let mut obj = vec![zero.clone(); total + 1];
    for cell in obj.iter_mut().take(cols) {
        *cell = one.clone();
    }

    while let Some(e) = (0..total).find(|&j| obj[j] > zero) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..rows {
            if t[i][e] > zero {
                let ratio = &t[i][total] / &t[i][e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (l, _) = leave.expect("the program is bounded");
        let piv = t[l][e].clone();
        for x in t[l].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..rows {
            if i != l && t[i][e] != zero {
                let f = t[i][e].clone();
                for j in 0..=total {
                    let delta = &f * &t[l][j];
                    t[i][j] = &t[i][j] - &delta;
                }
            }
        }
        if obj[e] != zero {
            let f = obj[e].clone();
            for j in 0..=total {
                let delta = &f * &t[l][j];
                obj[j] = &obj[j] - &delta;
            }
        }
        basis[l] = e;
    }

    let mut value = zero;
    for (i, &bi) in basis.iter().enumerate() {
        if bi < cols {
            value = &value + &t[i][total];
        }
    }
    // The exact rational optimum, rounded once to f64 for comparison.
    let num = value.numer();
    let den = value.denom();
    bigint_to_f64(num) / bigint_to_f64(den)
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    // Values live in [0, 52]; the rational parts can be huge, so convert via
    // string-free scaling: use the built-in conversion which saturates safely.
    use num_bigint::Sign;
    let (sign, digits) = b.to_u64_digits();
    let mut v = 0.0f64;
    for &d in digits.iter().rev() {
        v = v * 1.8446744073709552e19 + d as f64;
    }
    if sign == Sign::Minus {
        -v
    } else {
        v
    }
}
