//! Reference values of Ai and Bi from their Maclaurin series, summed in fixed-point
//! big-integer arithmetic so that cancellation at moderate `|z|` stays under control.
//!
//! `Ai = c1 f - c2 g`, `Bi = sqrt3 (c1 f + c2 g)` with
//! `f = sum 3^k (1/3)_k z^{3k} / (3k)!`, `g = sum 3^k (2/3)_k z^{3k+1} / (3k+1)!`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// `Ai(0) = 3^{-2/3} / Gamma(2/3)` to 45 digits.
const C1: &str = "355028053887817239260063186004183176397979174";
/// `-Ai'(0) = 3^{-1/3} / Gamma(1/3)` to 45 digits.
const C2: &str = "258819403792806798405183560189203963479091138";
const CONST_DIGITS: u32 = 45;
const CONST_ERROR: f64 = 1e-45;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AiryValues {
    #[serde(with = "crate::util::c64")]
    pub ai: Complex64,
    #[serde(with = "crate::util::c64")]
    pub ai_prime: Complex64,
    #[serde(with = "crate::util::c64")]
    pub bi: Complex64,
    #[serde(with = "crate::util::c64")]
    pub bi_prime: Complex64,
    /// Bound on the absolute error of each value.
    pub error_bound: f64,
}

#[derive(Clone, Debug)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

struct Fixed {
    bits: u32,
}

impl Fixed {
    fn encode(&self, x: f64) -> BigInt {
        if x == 0.0 {
            return BigInt::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let mant = if exp == 0 { (bits & 0xf_ffff_ffff_ffff) << 1 } else { (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000 };
        let shift = exp - 1075 + self.bits as i64;
        let m = BigInt::from(mant) * sign;
        if shift >= 0 {
            m << shift as usize
        } else {
            m >> (-shift) as usize
        }
    }

    fn c(&self, z: Complex64) -> Fx {
        Fx { re: self.encode(z.re), im: self.encode(z.im) }
    }

    fn decimal(&self, digits: &str, scale: u32) -> BigInt {
        let n: BigInt = digits.parse().expect("decimal constant");
        (n << self.bits as usize) / BigInt::from(10u32).pow(scale)
    }

    fn mul(&self, a: &Fx, b: &Fx) -> Fx {
        let re = (&a.re * &b.re - &a.im * &b.im) >> self.bits as usize;
        let im = (&a.re * &b.im + &a.im * &b.re) >> self.bits as usize;
        Fx { re, im }
    }

    fn scale_real(&self, a: &Fx, r: &BigInt) -> Fx {
        Fx { re: (&a.re * r) >> self.bits as usize, im: (&a.im * r) >> self.bits as usize }
    }

    fn to_c64(&self, a: &Fx) -> Complex64 {
        let conv = |v: &BigInt| {
            let lost = (v.bits() as i64 - 60).max(0) as usize;
            let top = (v >> lost).to_f64().unwrap_or(f64::NAN);
            top * 2f64.powi(lost as i32 - self.bits as i32)
        };
        Complex64::new(conv(&a.re), conv(&a.im))
    }
}

fn add(a: &Fx, b: &Fx) -> Fx {
    Fx { re: &a.re + &b.re, im: &a.im + &b.im }
}

fn sub(a: &Fx, b: &Fx) -> Fx {
    Fx { re: &a.re - &b.re, im: &a.im - &b.im }
}

fn div_small(a: &Fx, d: u64) -> Fx {
    Fx { re: &a.re / d, im: &a.im / d }
}

fn mul_small(a: &Fx, m: u64) -> Fx {
    Fx { re: &a.re * m, im: &a.im * m }
}

/// Ai, Ai', Bi, Bi' at `z`, each with absolute error below `tol * |value|`.
pub fn airy_reference(z: Complex64, tol: f64) -> Result<AiryValues> {
    if !z.is_finite() {
        return Err(Error::Precondition(format!("non-finite argument {z}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let v_abs = z.norm().powi(3);
    // largest term of the series is about exp((2/3)|z|^{3/2})
    let growth = (2.0 / 3.0) * z.norm().powf(1.5) / std::f64::consts::LN_2;
    let bits = (128.0 + growth + (1.0 / tol).log2().max(0.0)).ceil() as u32;
    let fx = Fixed { bits };
    let one = BigInt::one() << bits as usize;
    let zf = fx.c(z);
    let z2 = fx.mul(&zf, &zf);
    let v = fx.mul(&z2, &zf);

    let unit = Fx { re: one.clone(), im: BigInt::zero() };
    let mut a = unit.clone();
    let mut b = unit.clone();
    let mut w = div_small(&unit, 6);
    let (mut f0, mut g0, mut g1) = (a.clone(), b.clone(), b.clone());
    let mut f1 = mul_small(&w, 3);
    let (mut ma, mut mb, mut mw) = (1.0f64, 1.0f64, 1.0f64 / 6.0);
    let ulp = 2f64.powi(-(bits as i32));
    let mut k: u64 = 1;
    loop {
        let k3 = 3 * k;
        a = div_small(&fx.mul(&a, &v), k3 * (k3 - 1));
        b = div_small(&fx.mul(&b, &v), (k3 + 1) * k3);
        ma *= v_abs / (k3 * (k3 - 1)) as f64;
        mb *= v_abs / ((k3 + 1) * k3) as f64;
        f0 = add(&f0, &a);
        g0 = add(&g0, &b);
        g1 = add(&g1, &mul_small(&b, k3 + 1));
        // w_{k+1} = A_{k+1} v^k feeds f' = z^2 sum_k 3k A_k v^{k-1}
        let kk = k3 + 3;
        w = div_small(&fx.mul(&w, &v), kk * (kk - 1));
        mw *= v_abs / (kk * (kk - 1)) as f64;
        f1 = add(&f1, &mul_small(&w, kk));
        let shrinking = v_abs / ((k3 * k3) as f64) < 0.25;
        if shrinking && ma.max(mb).max(mw) * (k3 + 4) as f64 <= ulp {
            break;
        }
        k += 1;
        if k > 1_000_000 {
            return Err(Error::Precision(format!("Maclaurin series at {z} did not settle")));
        }
    }

    let c1 = fx.decimal(C1, CONST_DIGITS);
    let c2 = fx.decimal(C2, CONST_DIGITS);
    let sqrt3 = (BigInt::from(3) << (2 * bits as usize)).sqrt();
    let f = f0;
    let fp = fx.mul(&z2, &f1);
    let g = fx.mul(&zf, &g0);
    let gp = g1;
    let (c1f, c2g) = (fx.scale_real(&f, &c1), fx.scale_real(&g, &c2));
    let (c1fp, c2gp) = (fx.scale_real(&fp, &c1), fx.scale_real(&gp, &c2));
    let ai = fx.to_c64(&sub(&c1f, &c2g));
    let ai_prime = fx.to_c64(&sub(&c1fp, &c2gp));
    let bi = fx.to_c64(&fx.scale_real(&add(&c1f, &c2g), &sqrt3));
    let bi_prime = fx.to_c64(&fx.scale_real(&add(&c1fp, &c2gp), &sqrt3));

    let mag = |x: &Fx| fx.to_c64(x).norm();
    let scale = mag(&f) + mag(&g) + mag(&fp) + mag(&gp);
    let rounding = (k as f64 + 8.0).powi(2) * 16.0 * ulp * (1.0 + scale);
    let error_bound = 2.0 * CONST_ERROR * scale + rounding;
    for (name, val) in [("Ai", ai), ("Bi", bi)] {
        if error_bound > tol * val.norm() {
            return Err(Error::Precision(format!(
                "{name}({z}): error bound {error_bound:.2e} from the {CONST_DIGITS}-digit constants exceeds tol * |{name}|"
            )));
        }
    }
    Ok(AiryValues { ai, ai_prime, bi, bi_prime, error_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm()
    }

    #[test]
    fn values_at_zero() {
        let r = airy_reference(Complex64::new(0.0, 0.0), 1e-15).unwrap();
        assert!(close(r.ai, Complex64::new(0.355_028_053_887_817_2, 0.0), 1e-15));
        assert!(close(r.bi, r.ai * 3f64.sqrt(), 1e-15));
        assert!(close(r.bi, Complex64::new(0.614_926_627_446_000_7, 0.0), 1e-15));
        assert!(close(r.bi_prime, Complex64::new(0.448_288_357_353_826_4, 0.0), 1e-15));
    }

    #[test]
    fn wronskian_and_real_point() {
        let r = airy_reference(Complex64::new(1.3, 0.0), 1e-14).unwrap();
        let w = r.ai * r.bi_prime - r.ai_prime * r.bi;
        assert!((w.re - std::f64::consts::FRAC_1_PI).abs() < 1e-14);
        assert!(close(r.ai, Complex64::new(0.093_474_665_771_502_71, 0.0), 1e-14));
        assert!(close(r.ai_prime, Complex64::new(-0.120_333_865_590_183_58, 0.0), 1e-14));
        assert!(close(r.bi, Complex64::new(1.552_284_162_344_543_8, 0.0), 1e-14));
    }

    #[test]
    fn complex_points() {
        let r = airy_reference(Complex64::new(-2.0, 1.0), 1e-14).unwrap();
        assert!(close(r.ai, Complex64::new(0.556_304_539_371_192_5, 0.789_801_438_188_275_9), 1e-14));
        assert!(close(r.bi, Complex64::new(-0.866_943_386_725_254_2, 0.480_098_103_640_651_53), 1e-14));
        let r = airy_reference(Complex64::new(5.0, -3.0), 1e-12).unwrap();
        assert!(close(r.ai, Complex64::new(0.000_223_262_806_099_438_78, 0.000_169_633_646_096_079_7), 1e-13));
    }

    #[test]
    fn unreachable_tolerance_is_reported() {
        let e = airy_reference(Complex64::new(30.0, 0.0), 1e-40).unwrap_err();
        assert!(matches!(e, Error::Precision(_)));
    }
}
