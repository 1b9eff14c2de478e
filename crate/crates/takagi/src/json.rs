//! Serde helpers for the shared wire formats.
//!
//! Complex numbers travel as `[re, im]` pairs; a bare number is accepted on
//! input and means `[re, 0]`.

use num_complex::Complex64;
use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrPair {
    Bare(f64),
    Pair([f64; 2]),
}

impl From<NumOrPair> for Complex64 {
    fn from(v: NumOrPair) -> Self {
        match v {
            NumOrPair::Bare(re) => Complex64::new(re, 0.0),
            NumOrPair::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([z.re, z.im])
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        NumOrPair::deserialize(d).map(Into::into)
    }
}

pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|z| [z.re, z.im]))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let raw = Vec::<NumOrPair>::deserialize(d)?;
        Ok(raw.into_iter().map(Into::into).collect())
    }
}

pub mod complex_opt {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        match z {
            Some(z) => s.collect_seq([z.re, z.im]),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        Ok(Option::<NumOrPair>::deserialize(d)?.map(Into::into))
    }
}

/// Parse a complex number from command-line text: `re`, `re,im`, or `re+imi`
/// style inputs like `1.5`, `0,-2`, `1+2i`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t = text.trim();
    if let Some((re, im)) = t.split_once(',') {
        let re: f64 = re.trim().parse().map_err(|_| format!("bad real part in {t:?}"))?;
        let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part in {t:?}"))?;
        return Ok(Complex64::new(re, im));
    }
    if let Some(body) = t.strip_suffix(['i', 'I']) {
        // split at the last +/- that is not an exponent sign
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k];
            if (c == b'+' || c == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        if let Some(k) = split {
            let re: f64 = body[..k].trim().parse().map_err(|_| format!("bad real part in {t:?}"))?;
            let im_txt = body[k..].trim();
            let im: f64 = if im_txt == "+" {
                1.0
            } else if im_txt == "-" {
                -1.0
            } else {
                im_txt.parse().map_err(|_| format!("bad imaginary part in {t:?}"))?
            };
            return Ok(Complex64::new(re, im));
        }
        let im: f64 = if body.is_empty() || body == "+" {
            1.0
        } else if body == "-" {
            -1.0
        } else {
            body.trim().parse().map_err(|_| format!("bad imaginary part in {t:?}"))?
        };
        return Ok(Complex64::new(0.0, im));
    }
    let re: f64 = t.parse().map_err(|_| format!("not a number: {t:?}"))?;
    Ok(Complex64::new(re, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_scalar_and_pair() {
        assert_eq!(parse_complex("2.5").unwrap(), Complex64::new(2.5, 0.0));
        assert_eq!(parse_complex("1,-2").unwrap(), Complex64::new(1.0, -2.0));
        assert_eq!(parse_complex("1+2i").unwrap(), Complex64::new(1.0, 2.0));
        assert_eq!(parse_complex("-3i").unwrap(), Complex64::new(0.0, -3.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("1e-3,2").unwrap(), Complex64::new(1e-3, 2.0));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_complex("one").is_err());
        assert!(parse_complex("1,,2").is_err());
    }
}
