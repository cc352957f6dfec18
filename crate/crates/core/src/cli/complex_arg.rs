use num_complex::Complex64;

/// Parses `re`, `re+im i`, `re-im i`, or `im i` (e.g. `0.6`, `0.6+0.8i`, `-1e-3-2i`, `0.8i`, `-i`).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let err = || format!("invalid complex number {s:?} (expected re[+im i])");
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(err());
    }
    let Some(body) = t.strip_suffix('i') else {
        let re: f64 = t.parse().map_err(|_| err())?;
        return finite(Complex64::new(re, 0.0)).ok_or_else(err);
    };
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse().map_err(|_| err())?,
    };
    let re: f64 = re.parse().map_err(|_| err())?;
    finite(Complex64::new(re, im)).ok_or_else(err)
}

fn finite(z: Complex64) -> Option<Complex64> {
    (z.re.is_finite() && z.im.is_finite()).then_some(z)
}

/// An apparatus state: `0`, `1`, `+`, `-`, or two comma-separated amplitudes.
pub fn parse_qubit_pair(s: &str) -> Result<[Complex64; 2], String> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match s.trim() {
        "0" => Ok([one, zero]),
        "1" => Ok([zero, one]),
        "+" => Ok([Complex64::new(h, 0.0), Complex64::new(h, 0.0)]),
        "-" => Ok([Complex64::new(h, 0.0), Complex64::new(-h, 0.0)]),
        t => {
            let (a, b) = t
                .split_once(',')
                .ok_or_else(|| format!("invalid apparatus state {s:?} (expected 0, 1, +, - or AMP0,AMP1)"))?;
            Ok([parse_complex(a)?, parse_complex(b)?])
        }
    }
}
