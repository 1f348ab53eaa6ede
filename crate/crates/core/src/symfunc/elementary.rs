//! Elementary symmetric polynomials by the additive recurrence
//! `e_j <- e_j + x * e_{j-1}` (O(n k), no cancellation for positive input).

use crate::real::Real;

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut b = 1.0;
    for i in 0..k {
        b = b * (n - i) as f64 / (i + 1) as f64;
    }
    b
}

/// Fill `out[0..=kmax]` with the unnormalized sigma_j of the values yielded by `x`.
pub fn sigma_all<T: Real>(x: impl IntoIterator<Item = T>, kmax: usize, out: &mut [T]) {
    out[0] = T::cst(1.0);
    for s in out.iter_mut().take(kmax + 1).skip(1) {
        *s = T::cst(0.0);
    }
    for xi in x {
        for j in (1..=kmax).rev() {
            out[j] = out[j] + xi * out[j - 1];
        }
    }
}

/// Normalized mean curvatures E_0..E_kmax of `kappa` (E_0 = 1).
pub fn mean_curvatures<T: Real>(kappa: &[T], kmax: usize, out: &mut [T]) {
    let n = kappa.len();
    sigma_all(kappa.iter().copied(), kmax, out);
    for (j, e) in out.iter_mut().enumerate().take(kmax + 1).skip(1) {
        *e = e.scale(1.0 / binomial(n, j));
    }
}

/// Normalized E_k of a plain slice.
pub fn e_k(kappa: &[f64], k: usize) -> f64 {
    let mut buf = [0.0; 33];
    if k < buf.len() {
        mean_curvatures(kappa, k, &mut buf[..=k]);
        buf[k]
    } else {
        let mut v = vec![0.0; k + 1];
        mean_curvatures(kappa, k, &mut v);
        v[k]
    }
}

/// Unnormalized sigma_k of `kappa` with the listed indices removed.
pub fn sigma_without(kappa: &[f64], k: usize, skip: &[usize]) -> f64 {
    let mut v = vec![0.0; k + 1];
    sigma_all(
        kappa
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip.contains(i))
            .map(|(_, &x)| x),
        k,
        &mut v,
    );
    v[k]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_sigma(x: &[f64], k: usize) -> f64 {
        let n = x.len();
        let mut total = 0.0;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == k {
                total += (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| x[i])
                    .product::<f64>();
            }
        }
        total
    }

    #[test]
    fn recurrence_matches_subset_enumeration() {
        let x = [0.3, 1.7, 2.2, 0.9, 4.1];
        let mut out = [0.0; 6];
        sigma_all(x, 5, &mut out);
        for k in 0..=5 {
            let b = brute_sigma(&x, k);
            assert!((out[k] - b).abs() <= 1e-13 * b.abs().max(1.0), "k={k}");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(4, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
    }

    #[test]
    fn normalized_at_ones_is_one() {
        for k in 0..=4 {
            assert!((e_k(&[1.0; 4], k) - 1.0).abs() < 1e-15);
        }
    }
}
