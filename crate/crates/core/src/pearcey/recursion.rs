//! The WKB recursion for `S = d1 log psi`, `T = d2 log psi` of the Pearcey system and the
//! exact checks of closedness and of the homogeneous primitives.

use serde::Serialize;

use super::field::CubicFieldElement as E;
use super::poly2::Poly2;
use crate::error::{Error, Result};
use crate::series::{q, qi};

/// `S_k`, `T_k` for `-1 <= k <= order`, stored at index `k + 1`.
#[derive(Clone, Debug)]
pub struct PearceyWkb {
    pub s: Vec<E>,
    pub t: Vec<E>,
}

impl PearceyWkb {
    pub fn order(&self) -> i64 {
        self.s.len() as i64 - 2
    }

    pub fn s_k(&self, k: i64) -> &E {
        &self.s[(k + 1) as usize]
    }

    pub fn t_k(&self, k: i64) -> &E {
        &self.t[(k + 1) as usize]
    }
}

pub fn pearcey_recursion(order: usize) -> Result<PearceyWkb> {
    let l = E::l();
    let inv_l = l.inv()?;
    let mut s: Vec<E> = vec![E::s()];
    let mut ds: Vec<E> = vec![E::s().d(0)];
    // S_0 = -(1/2) d1 log(6S^2 + x2)
    s.push(l.d(0).mul(&inv_l).scale(&q(-1, 2)));
    ds.push(s[1].d(0));
    let at = |v: &Vec<E>, k: i64| v[(k + 1) as usize].clone();
    for k in 1..=order as i64 {
        let mut cubic = E::zero();
        for k1 in -1..k {
            for k2 in -1..k {
                let k3 = k - 2 - k1 - k2;
                if (-1..k).contains(&k3) {
                    cubic = cubic.add(&at(&s, k1).mul(&at(&s, k2)).mul(&at(&s, k3)));
                }
            }
        }
        let mut cross = E::zero();
        for k1 in -1..k {
            let k2 = k - 2 - k1;
            if (-1..k).contains(&k2) {
                cross = cross.add(&at(&s, k1).mul(&at(&ds, k2)));
            }
        }
        let second = at(&ds, k - 2).d(0);
        let bracket = cubic.add(&cross.scale(&qi(3))).add(&second);
        let sk = bracket.mul(&inv_l).scale(&qi(-2));
        ds.push(sk.d(0));
        s.push(sk);
    }
    let mut t = vec![E::s().mul(&E::s())];
    for k in 0..=order as i64 {
        let mut tk = at(&ds, k - 1);
        for j in -1..=k {
            tk = tk.add(&at(&s, j).mul(&at(&s, k - j - 1)));
        }
        t.push(tk);
    }
    Ok(PearceyWkb { s, t })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub order: usize,
    /// `(k, holds)` for every checked `k`.
    pub checked: Vec<(i64, bool)>,
    pub first_failure: Option<i64>,
}

impl IdentityReport {
    fn from(order: usize, checked: Vec<(i64, bool)>) -> Self {
        let first_failure = checked.iter().find(|(_, ok)| !ok).map(|(k, _)| *k);
        IdentityReport { order, checked, first_failure }
    }

    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// `d2 S_k = d1 T_k` for `-1 <= k <= order`.
pub fn check_closedness(w: &PearceyWkb) -> IdentityReport {
    let order = w.order();
    let checked = (-1..=order).map(|k| (k, w.s_k(k).d(1) == w.t_k(k).d(0))).collect();
    IdentityReport::from(order.max(0) as usize, checked)
}

/// `-(1/(4k)) (3 x1 S_k + 2 x2 T_k)` for `k != 0`.
pub fn primitive(w: &PearceyWkb, k: i64) -> Result<E> {
    if k == 0 {
        return Err(Error::Precondition("the k = 0 primitive is logarithmic".into()));
    }
    let sum = w.s_k(k).mul_poly(&Poly2::x1().scale(&qi(3))).add(&w.t_k(k).mul_poly(&Poly2::x2().scale(&qi(2))));
    Ok(sum.scale(&q(-1, 4 * k)))
}

/// Both partials of the primitives for `k = -1, 1..=order`, and for `k = 0` the partials
/// of `-(1/2) log(6S^2 + x2)`.
pub fn check_primitives(w: &PearceyWkb) -> Result<IdentityReport> {
    let order = w.order();
    let mut checked = Vec::new();
    let l = E::l();
    let inv_l = l.inv()?;
    for k in -1..=order {
        let ok = if k == 0 {
            let p1 = l.d(0).mul(&inv_l).scale(&q(-1, 2));
            let p2 = l.d(1).mul(&inv_l).scale(&q(-1, 2));
            p1 == *w.s_k(0) && p2 == *w.t_k(0)
        } else {
            let p = primitive(w, k)?;
            p.d(0) == *w.s_k(k) && p.d(1) == *w.t_k(k)
        };
        checked.push((k, ok));
    }
    Ok(IdentityReport::from(order.max(0) as usize, checked))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_terms() {
        let w = pearcey_recursion(2).unwrap();
        let s = E::s();
        assert_eq!(*w.t_k(-1), s.mul(&s));
        // 2 (6S^2 + x2) S_0 + d1 (6S^2 + x2) = 0, reduced independently
        let l = E::l();
        assert!(l.mul(w.s_k(0)).scale(&qi(2)).add(&l.d(0)).is_zero());
        // T_0 = d1 S_{-1} + 2 S_{-1} S_0
        assert_eq!(*w.t_k(0), s.d(0).add(&s.mul(w.s_k(0)).scale(&qi(2))));
        for k in 1..=2 {
            assert!(w.s_k(k).disc_power() >= 1);
        }
    }

    #[test]
    fn closed_and_primitive_to_order_four() {
        let w = pearcey_recursion(4).unwrap();
        assert!(check_closedness(&w).passed());
        assert!(check_primitives(&w).unwrap().passed());
    }

    #[test]
    fn riccati_equation_numerically() {
        // coefficient of eta^{-1} in 4S^3 + 2 eta^2 x2 S + eta^3 x1 + 12 S d1 S + 4 d1^2 S
        use num_complex::Complex64;
        let w = pearcey_recursion(3).unwrap();
        let (x1, x2) = (Complex64::new(0.4, -0.3), Complex64::new(0.7, 0.5));
        let roots = crate::numeric::roots::poly_roots(&[x1, 2.0 * x2, Complex64::new(0.0, 0.0), Complex64::new(4.0, 0.0)])
            .unwrap();
        let root = roots[0];
        // the order eta^{-1} coefficient only involves S_{-1}..S_3
        let sk = |k: i64| w.s_k(k).eval(x1, x2, root);
        let dsk = |k: i64| w.s_k(k).d(0).eval(x1, x2, root);
        let d2sk = |k: i64| w.s_k(k).d(0).d(0).eval(x1, x2, root);
        let m = 3i64; // coefficient of eta^{-(m-2)}
        let mut cubic = Complex64::new(0.0, 0.0);
        for a in -1..=m {
            for b in -1..=m {
                let c = m - 2 - a - b;
                if (-1..=m).contains(&c) {
                    cubic += sk(a) * sk(b) * sk(c);
                }
            }
        }
        let mut cross = Complex64::new(0.0, 0.0);
        for a in -1..=m {
            let b = m - 2 - a;
            if (-1..=m).contains(&b) {
                cross += sk(a) * dsk(b);
            }
        }
        let parts = [4.0 * cubic, 2.0 * x2 * sk(m), 12.0 * cross, 4.0 * d2sk(m - 2)];
        let total: Complex64 = parts.iter().sum();
        let size: f64 = parts.iter().map(|p| p.norm()).sum();
        assert!(total.norm() < 1e-12 * size, "{total} against {size}");
    }
}
