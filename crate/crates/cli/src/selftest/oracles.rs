//! Brute-force counts over `F_p[x]` that share no code with the series
//! engine: sieving multiples of k-th powers, and the totient from an
//! explicit factorization.

/// Coefficients mod `p`, ascending, no trailing zeros.
type Poly = Vec<u64>;

fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Quotient by a monic divisor, or `None` if the remainder is nonzero.
fn div_exact(a: &[u64], m: &[u64], p: u64) -> Option<Poly> {
    let dm = m.len() - 1;
    if a.len() < m.len() {
        return None;
    }
    let mut r = a.to_vec();
    let mut quot = vec![0u64; a.len() - dm];
    for i in (dm..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        quot[i - dm] = c;
        for (j, &mj) in m.iter().enumerate() {
            let k = i - dm + j;
            r[k] = (r[k] + p - c * mj % p) % p;
        }
    }
    r[..dm].iter().all(|&c| c == 0).then_some(quot)
}

/// Monic polynomial of degree `d` whose lower coefficients are the base-`p`
/// digits of `index`.
fn monic(p: u64, d: usize, mut index: u64) -> Poly {
    let mut f = vec![0u64; d + 1];
    for c in f.iter_mut().take(d) {
        *c = index % p;
        index /= p;
    }
    f[d] = 1;
    f
}

fn lower_index(f: &[u64], p: u64) -> usize {
    f[..f.len() - 1].iter().rev().fold(0u64, |acc, &c| acc * p + c) as usize
}

/// Number of k-free monic polynomials of degree `< x` over `F_p`.
pub fn kfree_below(p: u64, k: u32, x: u32) -> u128 {
    let k = k as usize;
    let mut total = 0u128;
    for deg in 0..x as usize {
        let size = p.pow(deg as u32);
        let mut hit = vec![false; size as usize];
        for d in 1..=deg / k {
            for mi in 0..p.pow(d as u32) {
                let m = monic(p, d, mi);
                let mut mk = vec![1u64];
                for _ in 0..k {
                    mk = mul(&mk, &m, p);
                }
                let rest = deg - k * d;
                for ci in 0..p.pow(rest as u32) {
                    let f = mul(&mk, &monic(p, rest, ci), p);
                    hit[lower_index(&f, p)] = true;
                }
            }
        }
        total += hit.iter().filter(|&&h| !h).count() as u128;
    }
    total
}

/// `Phi(f) = prod_{P^e || f} q^{d(e-1)} (q^d - 1)`, `d = deg P`.
///
/// Candidate divisors are tried by increasing degree and divided out
/// completely, so each one that divides is irreducible.
pub fn totient(f: &[u64], p: u64) -> u128 {
    let mut f = f.to_vec();
    let mut phi = 1u128;
    let mut d = 1;
    while f.len() > 1 {
        let rest = f.len() - 1;
        if 2 * d > rest {
            // no factor of degree <= rest/2 is left, so f is irreducible
            phi *= (p as u128).pow(rest as u32) - 1;
            break;
        }
        for mi in 0..p.pow(d as u32) {
            let m = monic(p, d, mi);
            let mut e = 0;
            while let Some(q) = div_exact(&f, &m, p) {
                f = q;
                e += 1;
            }
            if e > 0 {
                let qd = (p as u128).pow(d as u32);
                phi *= (qd - 1) * qd.pow(e - 1);
            }
        }
        d += 1;
    }
    phi
}

/// Sum of `Phi(f)` over monic `f` of degree `< x` over `F_p`.
pub fn totient_below(p: u64, x: u32) -> u128 {
    let mut total = 0u128;
    for deg in 0..x as usize {
        for i in 0..p.pow(deg as u32) {
            total += totient(&monic(p, deg, i), p);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        // monic squarefree quadratics over F_2: x^2 + x + 1, x^2 + x
        assert_eq!(kfree_below(2, 2, 3) - kfree_below(2, 2, 2), 2);
        assert_eq!(totient(&[1, 1], 3), 2);
        assert_eq!(totient(&[0, 0, 1], 3), 6);
        assert_eq!(totient(&[1], 5), 1);
    }
}
