//! JSON encodings of spectra, subsets, filtrations, complexes and objects.
//!
//! Integers whose absolute value exceeds 2^53 are written as decimal strings;
//! both forms are accepted on input.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Map, Value};

use crate::derived::cech::{OracleDegree, OracleReport};
use crate::derived::{Atom, ElementaryModule, FormalObject, TruncationResult};
use crate::error::{Error, Result};
use crate::filtration::{CousinReport, SpFiltration, StabilizationReport};
use crate::spectrum::poset::PointSet;
use crate::spectrum::{FinPoset, PrimeSet, SpecZ, Spectrum, ZCodim, ZSubset};
use crate::zmodules::{FgZModule, FreeComplex, IntMatrix, Prime};

pub const SCHEMA: &str = "tstruct/1";

const SAFE: i64 = 1 << 53;

fn err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

/// Parses JSON text, reporting line and column on failure.
pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

/// Adds the schema tag to an object.
pub fn with_schema(v: Value) -> Value {
    match v {
        Value::Object(mut m) => {
            let mut out = Map::new();
            out.insert("schema".into(), Value::from(SCHEMA));
            out.append(&mut m);
            Value::Object(out)
        }
        other => json!({ "schema": SCHEMA, "value": other }),
    }
}

pub fn int(x: i64) -> Value {
    if x.abs() > SAFE {
        Value::from(x.to_string())
    } else {
        Value::from(x)
    }
}

pub fn uint(x: u64) -> Value {
    if x > SAFE as u64 {
        Value::from(x.to_string())
    } else {
        Value::from(x)
    }
}

pub fn big(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if v.abs() <= SAFE => Value::from(v),
        _ => Value::from(x.to_string()),
    }
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| err(path, format!("missing field \"{key}\"")))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| err(path, "expected a string"))
}

pub fn read_big(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => Ok(BigInt::from(i)),
            (None, Some(u)) => Ok(BigInt::from(u)),
            _ => Err(err(path, "expected an integer")),
        },
        Value::String(s) => s.trim().parse().map_err(|_| err(path, format!("\"{s}\" is not an integer"))),
        _ => Err(err(path, "expected an integer")),
    }
}

pub fn read_i64(v: &Value, path: &str) -> Result<i64> {
    read_big(v, path)?.to_i64().ok_or_else(|| err(path, "integer out of range"))
}

fn read_u64(v: &Value, path: &str) -> Result<u64> {
    read_big(v, path)?.to_u64().ok_or_else(|| err(path, "expected a nonnegative integer"))
}

fn read_u32(v: &Value, path: &str) -> Result<u32> {
    read_big(v, path)?.to_u32().ok_or_else(|| err(path, "expected a small nonnegative integer"))
}

fn read_prime(v: &Value, path: &str) -> Result<Prime> {
    Prime::new(read_u64(v, path)?).map_err(|e| err(path, e))
}

fn read_primes(v: Option<&Value>, path: &str) -> Result<Vec<Prime>> {
    match v {
        None => Ok(vec![]),
        Some(v) => {
            as_array(v, path)?.iter().enumerate().map(|(i, p)| read_prime(p, &format!("{path}[{i}]"))).collect()
        }
    }
}

fn primes_json<'a>(ps: impl IntoIterator<Item = &'a Prime>) -> Value {
    Value::Array(ps.into_iter().map(|p| uint(p.get())).collect())
}

// ---- spectra and subsets ----

pub fn poset_to_json(p: &FinPoset) -> Value {
    let ids = p.ids();
    json!({
        "points": ids.iter().map(|id| json!({ "id": id })).collect::<Vec<_>>(),
        "covers": p.covers().iter().map(|(a, b)| json!([ids[*a], ids[*b]])).collect::<Vec<_>>(),
    })
}

pub fn poset_from_json(v: &Value) -> Result<FinPoset> {
    let pts = as_array(field(v, "points", "poset")?, "poset.points")?;
    let ids: Vec<String> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let path = format!("poset.points[{i}]");
            match p {
                Value::String(s) => Ok(s.clone()),
                _ => Ok(as_str(field(p, "id", &path)?, &format!("{path}.id"))?.to_string()),
            }
        })
        .collect::<Result<_>>()?;
    let covers = match v.get("covers") {
        None => vec![],
        Some(c) => as_array(c, "poset.covers")?
            .iter()
            .enumerate()
            .map(|(i, pair)| {
                let path = format!("poset.covers[{i}]");
                let a = as_array(pair, &path)?;
                if a.len() != 2 {
                    return Err(err(&path, "expected a pair"));
                }
                Ok((as_str(&a[0], &path)?.to_string(), as_str(&a[1], &path)?.to_string()))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    FinPoset::new(&ids, &covers)
}

pub fn prime_set_to_json(s: &PrimeSet) -> Value {
    match s {
        PrimeSet::Finite(ps) => json!({ "kind": "finite", "primes": primes_json(ps) }),
        PrimeSet::Cofinite(ps) => json!({ "kind": "cofinite", "primes": primes_json(ps) }),
    }
}

pub fn prime_set_from_json(v: &Value, path: &str) -> Result<PrimeSet> {
    if v.is_array() {
        return Ok(PrimeSet::finite(read_primes(Some(v), path)?));
    }
    let kind = as_str(field(v, "kind", path)?, path)?;
    let ps = read_primes(v.get("primes"), &format!("{path}.primes"))?;
    match kind {
        "finite" => Ok(PrimeSet::finite(ps)),
        "cofinite" => Ok(PrimeSet::cofinite(ps)),
        other => Err(err(path, format!("unknown prime set kind \"{other}\""))),
    }
}

pub fn zsubset_to_json(z: &ZSubset) -> Value {
    match z {
        ZSubset::Whole => json!({ "kind": "whole" }),
        ZSubset::Maximals(s) => prime_set_to_json(s),
    }
}

pub fn zsubset_from_json(v: &Value, path: &str) -> Result<ZSubset> {
    match v.get("kind").and_then(Value::as_str) {
        Some("whole") => Ok(ZSubset::Whole),
        Some("points") => {
            let pts = as_array(field(v, "points", path)?, path)?;
            let names: Vec<_> = pts
                .iter()
                .map(|p| SpecZ.parse_point(as_str(p, path)?))
                .collect::<Result<_>>()
                .map_err(|e| err(path, e))?;
            SpecZ.specialization_closure(&names)
        }
        _ => Ok(ZSubset::Maximals(prime_set_from_json(v, path)?)),
    }
}

pub fn point_set_to_json(sp: &FinPoset, z: &PointSet) -> Value {
    json!({ "kind": "points", "points": z.iter().map(|i| sp.ids()[*i].clone()).collect::<Vec<_>>() })
}

pub fn point_set_from_json(sp: &FinPoset, v: &Value, path: &str) -> Result<PointSet> {
    match as_str(field(v, "kind", path)?, path)? {
        "whole" => Ok(sp.whole()),
        "points" => {
            let pts = match v.get("points") {
                Some(p) => as_array(p, path)?.clone(),
                None => vec![],
            };
            let set: PointSet = pts
                .iter()
                .map(|p| sp.index_of(as_str(p, path)?))
                .collect::<Result<_>>()
                .map_err(|e| err(path, e))?;
            sp.validate_subset(&set).map_err(|e| err(path, e))?;
            Ok(set)
        }
        other => Err(err(path, format!("subset kind \"{other}\" is not valid over a poset"))),
    }
}

// ---- filtrations ----

/// A filtration over either kind of spectrum.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyFiltration {
    Z(SpFiltration<SpecZ>),
    Poset(SpFiltration<FinPoset>),
}

fn filtration_body<S: Spectrum>(f: &SpFiltration<S>, spectrum: Value, sub: impl Fn(&S::Subset) -> Value) -> Value {
    json!({
        "spectrum": spectrum,
        "tail": sub(f.tail()),
        "window": { "start": int(f.start()), "end": int(f.end()) },
        "levels": f.levels().iter().map(&sub).collect::<Vec<_>>(),
        "head": sub(f.head()),
        "constant": f.is_constant(),
        "finite": f.is_finite(),
        "length": f.length(),
    })
}

pub fn zfiltration_to_json(f: &SpFiltration<SpecZ>) -> Value {
    filtration_body(f, Value::from("Z"), zsubset_to_json)
}

pub fn poset_filtration_to_json(f: &SpFiltration<FinPoset>) -> Value {
    let sp = f.spectrum().clone();
    filtration_body(f, poset_to_json(&sp), |z| point_set_to_json(&sp, z))
}

pub fn filtration_to_json(f: &AnyFiltration) -> Value {
    match f {
        AnyFiltration::Z(f) => zfiltration_to_json(f),
        AnyFiltration::Poset(f) => poset_filtration_to_json(f),
    }
}

fn read_filtration<S: Spectrum>(
    sp: S,
    v: &Value,
    sub: impl Fn(&Value, &str) -> Result<S::Subset>,
) -> Result<SpFiltration<S>> {
    let levels: Vec<S::Subset> = match v.get("levels") {
        Some(l) => as_array(l, "levels")?
            .iter()
            .enumerate()
            .map(|(i, z)| sub(z, &format!("levels[{i}]")))
            .collect::<Result<_>>()?,
        None => vec![],
    };
    let start = match v.get("window") {
        Some(w) => {
            let s = read_i64(field(w, "start", "window")?, "window.start")?;
            if let Some(e) = w.get("end") {
                let e = read_i64(e, "window.end")?;
                if e - s + 1 != levels.len() as i64 {
                    return Err(err("window", format!("[{s}, {e}] does not match {} levels", levels.len())));
                }
            }
            s
        }
        None => 0,
    };
    let tail = match v.get("tail") {
        Some(t) => sub(t, "tail")?,
        None => levels.first().cloned().ok_or_else(|| err("tail", "missing tail and no levels"))?,
    };
    let head = match v.get("head") {
        Some(h) => sub(h, "head")?,
        None => sp.empty(),
    };
    SpFiltration::new(sp, tail, start, levels, head)
}

pub fn filtration_from_json(v: &Value) -> Result<AnyFiltration> {
    match v.get("spectrum") {
        None => Ok(AnyFiltration::Z(read_filtration(SpecZ, v, zsubset_from_json)?)),
        Some(Value::String(s)) if s == "Z" => Ok(AnyFiltration::Z(read_filtration(SpecZ, v, zsubset_from_json)?)),
        Some(Value::String(s)) => Err(err("spectrum", format!("unknown spectrum \"{s}\""))),
        Some(p) => {
            let poset = poset_from_json(p)?;
            let sp = poset.clone();
            Ok(AnyFiltration::Poset(read_filtration(poset, v, |z, path| point_set_from_json(&sp, z, path))?))
        }
    }
}

pub fn zcodim_from_json(v: &Value) -> Result<ZCodim> {
    let mut d = ZCodim::standard();
    if let Some(g) = v.get("generic") {
        d.generic = read_i64(g, "generic")?;
    }
    if let Some(m) = v.get("maximal") {
        d.maximal = read_i64(m, "maximal")?;
    }
    if let Some(Value::Object(ex)) = v.get("exceptions") {
        for (k, val) in ex {
            let p = Prime::new(k.parse().map_err(|_| err("exceptions", format!("\"{k}\" is not a prime")))?)
                .map_err(|e| err("exceptions", e))?;
            d.exceptions.insert(p, read_i64(val, &format!("exceptions.{k}"))?);
        }
    }
    Ok(d)
}

pub fn poset_codim_from_json(sp: &FinPoset, v: &Value) -> Result<Vec<i64>> {
    let vals = field(v, "values", "codim")?;
    sp.ids().iter().map(|id| read_i64(field(vals, id, "codim.values")?, &format!("codim.values.{id}"))).collect()
}

pub fn cousin_to_json<P>(r: &CousinReport<P>, name: impl Fn(&P) -> String) -> Value {
    Value::Array(r.witnesses.iter().map(|(j, q, p)| json!([int(*j), name(q), name(p)])).collect())
}

pub fn stabilization_to_json<Z>(r: &StabilizationReport<Z>, sub: impl Fn(&Z) -> Value) -> Value {
    json!({
        "j0": int(r.j0),
        "top": sub(&r.top),
        "topOpenClosed": r.top_open_closed,
        "bottom": sub(&r.bottom),
        "bottomOpenClosed": r.bottom_open_closed,
        "separated": r.separated,
        "eventuallyEmpty": r.eventually_empty,
        "constant": r.constant,
        "weakCousin": r.weak_cousin,
        "discreteness": r.discreteness,
    })
}

// ---- complexes and modules ----

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(big).collect())).collect())
}

pub fn complex_to_json(x: &FreeComplex) -> Value {
    json!({
        "minDeg": int(x.min_deg()),
        "ranks": x.ranks(),
        "diffs": x.diffs().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn complex_from_json(v: &Value) -> Result<FreeComplex> {
    let min_deg = read_i64(field(v, "minDeg", "complex")?, "complex.minDeg")?;
    let ranks: Vec<usize> = as_array(field(v, "ranks", "complex")?, "complex.ranks")?
        .iter()
        .enumerate()
        .map(|(i, r)| Ok(read_u32(r, &format!("complex.ranks[{i}]"))? as usize))
        .collect::<Result<_>>()?;
    let diffs_v = match v.get("diffs") {
        Some(d) => as_array(d, "complex.diffs")?.clone(),
        None => vec![],
    };
    let diffs = diffs_v
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let path = format!("complex.diffs[{k}]");
            let rows = as_array(m, &path)?;
            let (r, c) = (ranks.get(k + 1).copied().unwrap_or(0), ranks.get(k).copied().unwrap_or(0));
            if rows.len() != r {
                return Err(err(&path, format!("expected {r} rows, found {}", rows.len())));
            }
            let mut data = Vec::with_capacity(r * c);
            for (i, row) in rows.iter().enumerate() {
                let row = as_array(row, &format!("{path}[{i}]"))?;
                if row.len() != c {
                    return Err(err(&format!("{path}[{i}]"), format!("expected {c} entries, found {}", row.len())));
                }
                for (j, e) in row.iter().enumerate() {
                    data.push(read_big(e, &format!("{path}[{i}][{j}]"))?);
                }
            }
            Ok(IntMatrix::from_fn(r, c, |i, j| data[i * c + j].clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    FreeComplex::new(min_deg, ranks, diffs)
}

pub fn atom_to_json(a: &Atom) -> Value {
    match a {
        Atom::Free { rank } => json!({ "kind": "free", "rank": rank }),
        Atom::Localized { inverted, rank } => {
            json!({ "kind": "localized", "inverted": prime_set_to_json(inverted), "rank": rank })
        }
        Atom::Torsion { prime, exponent, mult } => {
            json!({ "kind": "torsion", "prime": uint(prime.get()), "exponent": exponent, "mult": mult })
        }
        Atom::Prufer { primes, mult } => json!({ "kind": "prufer", "primes": prime_set_to_json(primes), "mult": mult }),
    }
}

fn opt_u32(v: &Value, key: &str, default: u32, path: &str) -> Result<u32> {
    v.get(key).map(|x| read_u32(x, &format!("{path}.{key}"))).transpose().map(|x| x.unwrap_or(default))
}

pub fn atom_from_json(v: &Value, path: &str) -> Result<Atom> {
    let kind = as_str(field(v, "kind", path)?, path)?;
    Ok(match kind {
        "free" => Atom::Free { rank: opt_u32(v, "rank", 1, path)? },
        "localized" => Atom::Localized {
            inverted: prime_set_from_json(field(v, "inverted", path)?, &format!("{path}.inverted"))?,
            rank: opt_u32(v, "rank", 1, path)?,
        },
        "torsion" => Atom::Torsion {
            prime: read_prime(field(v, "prime", path)?, &format!("{path}.prime"))?,
            exponent: opt_u32(v, "exponent", 1, path)?,
            mult: opt_u32(v, "mult", 1, path)?,
        },
        "prufer" => Atom::Prufer {
            primes: prime_set_from_json(field(v, "primes", path)?, &format!("{path}.primes"))?,
            mult: opt_u32(v, "mult", 1, path)?,
        },
        other => return Err(err(path, format!("unknown atom kind \"{other}\""))),
    })
}

pub fn module_to_json(m: &ElementaryModule) -> Value {
    Value::Array(m.atoms().iter().map(atom_to_json).collect())
}

pub fn object_to_json(x: &FormalObject) -> Value {
    Value::Array(x.iter().map(|(j, m)| json!({ "degree": int(j), "atoms": module_to_json(m) })).collect())
}

pub fn object_from_json(v: &Value) -> Result<FormalObject> {
    let parts = as_array(v, "object")?;
    let mut x = FormalObject::zero();
    for (i, p) in parts.iter().enumerate() {
        let path = format!("object[{i}]");
        let deg = read_i64(field(p, "degree", &path)?, &format!("{path}.degree"))?;
        let atoms: Vec<Atom> = as_array(field(p, "atoms", &path)?, &path)?
            .iter()
            .enumerate()
            .map(|(k, a)| atom_from_json(a, &format!("{path}.atoms[{k}]")))
            .collect::<Result<_>>()?;
        x.add(deg, &ElementaryModule::from_atoms(&atoms));
    }
    Ok(x)
}

/// Reads either a free complex (through its cohomology) or a graded object.
pub fn object_or_complex_from_json(v: &Value) -> Result<(FormalObject, Option<FreeComplex>)> {
    if v.get("minDeg").is_some() {
        let c = complex_from_json(v)?;
        Ok((FormalObject::from_free_complex(&c), Some(c)))
    } else {
        Ok((object_from_json(v)?, None))
    }
}

pub fn fg_module_to_json(m: &FgZModule) -> Value {
    json!({
        "rank": m.rank,
        "torsion": m.torsion.iter().map(|((p, e), k)| json!([uint(p.get()), e, k])).collect::<Vec<_>>(),
    })
}

pub fn truncation_to_json(t: &TruncationResult) -> Value {
    json!({
        "lower": object_to_json(&t.lower),
        "upper": object_to_json(&t.upper),
        "determinate": t.determinate,
        "fg": { "lower": t.lower.is_fg(), "upper": t.upper.is_fg() },
    })
}

pub fn oracle_report_to_json(r: &OracleReport) -> Value {
    Value::Array(
        r.iter()
            .map(|(j, d): (&i64, &OracleDegree)| {
                json!({
                    "degree": int(*j),
                    "rank": d.rank,
                    "torsion": d.torsion.iter().map(|((p, e), k)| json!([uint(p.get()), e, k])).collect::<Vec<_>>(),
                    "prufer": d.prufer.iter().map(|(p, k)| json!([uint(p.get()), k])).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

/// A map from degrees to values as a JSON object keyed by degree.
pub fn degree_map<T>(m: &BTreeMap<i64, T>, f: impl Fn(&T) -> Value) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.to_string(), f(v))).collect())
}

pub fn is_big(x: &BigInt) -> bool {
    x.abs() > BigInt::from(SAFE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_integers_become_strings() {
        assert_eq!(int(5), json!(5));
        assert_eq!(int(1 << 60), json!((1i64 << 60).to_string()));
        assert_eq!(read_big(&json!("123456789012345678901234567890"), "x").unwrap().to_string(), "123456789012345678901234567890");
        assert!(read_big(&json!(1.5), "x").is_err());
    }

    #[test]
    fn complex_round_trip() {
        let x = FreeComplex::koszul(&[4, 6]);
        let back = complex_from_json(&complex_to_json(&x)).unwrap();
        assert_eq!(back, x);
        let huge = json!({"minDeg": 0, "ranks": [1, 1], "diffs": [[["36893488147419103232"]]]});
        let c = complex_from_json(&huge).unwrap();
        assert_eq!(complex_to_json(&c)["diffs"][0][0][0], json!("36893488147419103232"));
    }

    #[test]
    fn filtration_round_trip() {
        let f = SpFiltration::new(
            SpecZ,
            ZSubset::Whole,
            0,
            vec![ZSubset::primes(&[2, 3]).unwrap(), ZSubset::Maximals(PrimeSet::cofinite([Prime::new(5).unwrap()]))],
            ZSubset::empty(),
        );
        assert!(f.is_err());
        let f = SpFiltration::new(
            SpecZ,
            ZSubset::Whole,
            0,
            vec![ZSubset::Maximals(PrimeSet::cofinite([Prime::new(5).unwrap()])), ZSubset::primes(&[2, 3]).unwrap()],
            ZSubset::empty(),
        )
        .unwrap();
        let back = filtration_from_json(&zfiltration_to_json(&f)).unwrap();
        assert_eq!(back, AnyFiltration::Z(f));
        let c = FinPoset::chain(2);
        let g = SpFiltration::new(c.clone(), c.whole(), 0, vec![[1].into_iter().collect()], PointSet::new()).unwrap();
        let back = filtration_from_json(&poset_filtration_to_json(&g)).unwrap();
        assert_eq!(back, AnyFiltration::Poset(g));
    }

    #[test]
    fn object_round_trip() {
        let two = Prime::new(2).unwrap();
        let x = FormalObject::from_degrees([
            (0, ElementaryModule::free(2).direct_sum(&ElementaryModule::torsion(two, 3, 1))),
            (1, ElementaryModule::prufer(PrimeSet::single(two), 1)),
            (-1, ElementaryModule::localized(PrimeSet::cofinite([two]), 1)),
        ]);
        assert_eq!(object_from_json(&object_to_json(&x)).unwrap(), x);
    }

    #[test]
    fn errors_carry_locations() {
        let e = parse("{\"a\": ").unwrap_err();
        assert!(matches!(e, Error::Parse(ref m) if m.contains("line 1")));
        let v = json!({"minDeg": 0, "ranks": [1, 1], "diffs": [[[1, 2]]]});
        let e = complex_from_json(&v).unwrap_err();
        assert!(matches!(e, Error::Parse(ref m) if m.contains("complex.diffs[0][0]")));
    }
}
