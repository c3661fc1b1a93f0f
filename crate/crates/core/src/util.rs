//! Serialization helpers for complex numbers (as `[re, im]` pairs).

pub mod c64 {
    use num_complex::Complex64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([z.re, z.im])
    }
}

pub mod c64_array {
    use num_complex::Complex64;
    use serde::Serializer;

    pub fn serialize<S: Serializer, const N: usize>(z: &[Complex64; N], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(z.iter().map(|v| [v.re, v.im]))
    }
}

pub mod c64_vec {
    use num_complex::Complex64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(z: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(z.iter().map(|v| [v.re, v.im]))
    }
}

pub mod c64_opt {
    use num_complex::Complex64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        match z {
            Some(v) => s.collect_seq([v.re, v.im]),
            None => s.serialize_none(),
        }
    }
}
