use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{validate_tangle, Mode, TangleWord};
use crate::error::{Error, Result};

/// Framed linking matrix of a closed-up tangle and its signature data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingData {
    /// Diagonal: framings. Off-diagonal: linking numbers.
    pub matrix: Vec<Vec<i64>>,
    pub n_components: usize,
    pub b_plus: usize,
    pub b_minus: usize,
    pub nullity: usize,
}

/// Linking matrix of the closure of a string link, of a handle closed by
/// cups, or of a closed link.
pub fn closure_linking(w: &TangleWord) -> Result<LinkingData> {
    let rep = [Mode::StringLink, Mode::Handle, Mode::ClosedLink]
        .iter()
        .find_map(|&m| validate_tangle(w, m).ok().filter(|r| m != Mode::ClosedLink || r.arcs.is_empty()))
        .ok_or_else(|| Error::Pairing("not a string link, handle, or closed link".into()))?;
    let n = rep.n_components;
    let mut twice = vec![vec![0i64; n]; n];
    for e in 0..w.events.len() {
        if let Some((s, a, b)) = rep.crossing_sign(w, e) {
            if a == b {
                twice[a][a] += 2 * s as i64;
            } else {
                twice[a][b] += s as i64;
                twice[b][a] += s as i64;
            }
        }
    }
    let mut matrix = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            if twice[i][j] % 2 != 0 {
                return Err(Error::Other(format!("odd crossing count between components {i} and {j}")));
            }
            matrix[i][j] = twice[i][j] / 2;
        }
    }
    let (b_plus, b_minus, nullity) = inertia(&matrix);
    Ok(LinkingData { matrix, n_components: n, b_plus, b_minus, nullity })
}

/// Number of negative eigenvalues of a symmetric integer matrix.
pub fn b_minus(m: &[Vec<i64>]) -> usize {
    inertia(m).1
}

/// (positive, negative, zero) eigenvalue counts, exactly.
///
/// The characteristic polynomial of a symmetric matrix is real-rooted, so
/// Descartes' rule of signs counts its positive and negative roots exactly.
fn inertia(m: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = m.len();
    if n == 0 {
        return (0, 0, 0);
    }
    let c = char_poly(m);
    let nullity = c.iter().position(|x| !x.is_zero()).unwrap_or(n);
    let changes = |coeffs: &[BigRational]| -> usize {
        let signs: Vec<bool> = coeffs.iter().filter(|x| !x.is_zero()).map(|x| x.is_positive()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let pos = changes(&c);
    let neg_coeffs: Vec<BigRational> =
        c.iter().enumerate().map(|(k, x)| if k % 2 == 1 { -x.clone() } else { x.clone() }).collect();
    (pos, changes(&neg_coeffs), nullity)
}

/// Coefficients of det(xI − M), lowest degree first (Faddeev–LeVerrier).
fn char_poly(m: &[Vec<i64>]) -> Vec<BigRational> {
    let n = m.len();
    let a: Vec<Vec<BigRational>> =
        m.iter().map(|row| row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::from_integer(1.into());
    let mut mk = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·I
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigRational::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !mk[l][j].is_zero() {
                        acc += &a[i][l] * &mk[l][j];
                    }
                }
                next[i][j] = acc;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        mk = next;
        let mut tr = BigRational::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &mk[l][i];
            }
        }
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k as i64));
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::TangleEvent::*;

    #[test]
    fn inertia_of_small_matrices() {
        assert_eq!(inertia(&[vec![1]]), (1, 0, 0));
        assert_eq!(inertia(&[vec![-3]]), (0, 1, 0));
        assert_eq!(inertia(&[vec![0]]), (0, 0, 1));
        assert_eq!(inertia(&[vec![0, 1], vec![1, 0]]), (1, 1, 0));
        assert_eq!(inertia(&[vec![2, 1], vec![1, 2]]), (2, 0, 0));
        assert_eq!(inertia(&[vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, -2]]), (1, 1, 1));
    }

    #[test]
    fn hopf_clasp_links_once() {
        let w = TangleWord::new(2, vec![Cross { pos: 1, sign: 1 }, Cross { pos: 1, sign: 1 }]).unwrap();
        let l = closure_linking(&w).unwrap();
        assert_eq!(l.matrix, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(l.b_minus, 1);
    }

    #[test]
    fn kink_gives_framing() {
        let w = TangleWord::new(1, vec![Cup { pos: 2 }, Cross { pos: 1, sign: -1 }, Cap { pos: 2 }]).unwrap();
        assert_eq!(closure_linking(&w).unwrap().matrix, vec![vec![-1]]);
    }
}
