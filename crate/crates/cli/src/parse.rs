//! Value parsers for the command line: integer vectors `a,b,c`, lattices
//! `v1;v2`, degree maps `c0:n0,c1:n1`, and reals with `pi` literals.

use std::f64::consts::PI;

pub fn ivec3(s: &str) -> Result<[i64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated integers, got {s:?}"));
    }
    let mut out = [0i64; 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|_| format!("{p:?} is not an integer"))?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generators(pub Vec<[i64; 3]>);

pub fn lattice(s: &str) -> Result<Generators, String> {
    s.split(';').filter(|v| !v.trim().is_empty()).map(ivec3).collect::<Result<_, _>>().map(Generators)
}

/// A real number, optionally times π: `1.5`, `pi`, `-2pi`, `3*pi`, `pi/4`,
/// `2pi/3`.
pub fn real(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let bad = || format!("{s:?} is not a real number");
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim().to_string(), Some(b.trim().parse::<f64>().map_err(|_| bad())?)),
        None => (t.clone(), None),
    };
    let value = match num.strip_suffix("pi") {
        Some(coef) => {
            let coef = coef.trim().trim_end_matches('*').trim();
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            c * PI
        }
        None => num.parse::<f64>().map_err(|_| bad())?,
    };
    let value = match den {
        Some(d) if d != 0.0 => value / d,
        Some(_) => return Err(bad()),
        None => value,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

pub fn rvec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated reals, got {s:?}"));
    }
    Ok([real(parts[0])?, real(parts[1])?, real(parts[2])?])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeMap(pub Vec<(usize, i64)>);

/// `c0:n0,c1:n1`, coset index to degree.
pub fn degrees(s: &str) -> Result<DegreeMap, String> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (c, n) = p.split_once(':').ok_or_else(|| format!("{p:?} is not of the form coset:degree"))?;
            let c = c.trim().parse().map_err(|_| format!("{c:?} is not a coset index"))?;
            let n = n.trim().parse().map_err(|_| format!("{n:?} is not an integer degree"))?;
            Ok((c, n))
        })
        .collect::<Result<_, String>>()
        .map(DegreeMap)
}
