//! JSON machine specifications and element expressions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::Value;

use selfsim::constructions::{
    C2Elem, C2Extension, DirectProduct, EconomicalPower, LampElem, Lamplighter, Pair, Tuple,
};
use selfsim::padic::{eta_value, make_eta};
use selfsim::{
    AddingMachine, DigitWord, DyadicMachine, Eta, EtaSpec, Machine, Padic2, Vect, ZOmegaMachine,
};

use crate::dynamic::{AnyElem, AnyMachine, Kind};
use crate::CliError;

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// Reads `--machine`: `@path` loads a file, anything that is not JSON is
/// taken as a bare type name.
pub fn load_json(arg: &str) -> Result<Value, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| bad(format!("{path}: {e}")))?,
        None => arg.to_string(),
    };
    Ok(serde_json::from_str(&text).unwrap_or_else(|_| Value::String(text.trim().to_string())))
}

fn field<'a>(obj: &'a Value, key: &str, ty: &str) -> Result<&'a Value, CliError> {
    obj.get(key)
        .ok_or_else(|| bad(format!("machine `{ty}` needs field `{key}`")))
}

fn uint(v: &Value, what: &str) -> Result<u64, CliError> {
    match v {
        Value::Number(n) => n.as_u64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
    .ok_or_else(|| bad(format!("{what}: expected a non-negative integer, got {v}")))
}

fn bigint(v: &Value, what: &str) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => n.to_string().parse().ok(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
    .ok_or_else(|| bad(format!("{what}: expected an integer, got {v}")))
}

pub fn parse_eta(s: &str) -> Result<Eta, CliError> {
    Ok(make_eta(&s.parse::<EtaSpec>()?)?)
}

/// `p/q` or an integer; `q` must be odd.
pub fn parse_rational(s: &str) -> Result<Padic2, CliError> {
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: BigInt = p.trim().parse().map_err(|_| bad(format!("bad rational `{s}`")))?;
    let q: BigInt = q.trim().parse().map_err(|_| bad(format!("bad rational `{s}`")))?;
    Ok(Padic2::rational(p, q)?)
}

pub fn build_machine(spec: &Value) -> Result<AnyMachine, CliError> {
    let (ty, obj) = match spec {
        Value::String(s) => (s.as_str(), spec),
        Value::Object(o) => match o.get("type") {
            Some(Value::String(s)) => (s.as_str(), spec),
            _ => return Err(bad("machine spec needs a string field `type`")),
        },
        _ => return Err(bad(format!("bad machine spec {spec}"))),
    };
    let eta = || -> Result<Eta, CliError> {
        match field(obj, "eta", ty)? {
            Value::String(s) => parse_eta(s),
            v => Err(bad(format!("eta spec must be a string, got {v}"))),
        }
    };
    let sub = |key: &str| build_machine(field(obj, key, ty)?);
    let kind = match ty {
        "adding" => Kind::Adding(AddingMachine::new()),
        "dyadic" => Kind::Dyadic(DyadicMachine::new(eta()?)),
        "zomega" => {
            let max_index = match obj.get("max_index") {
                Some(v) => uint(v, "max_index")? as usize,
                None => 8,
            };
            Kind::ZOmega(ZOmegaMachine::new(eta()?, max_index)?)
        }
        "product" => Kind::Product(Box::new(DirectProduct::new(sub("left")?, sub("right")?))),
        "economical" => {
            let d = uint(field(obj, "d", ty)?, "d")? as usize;
            Kind::Economical(Box::new(EconomicalPower::new(sub("base")?, d)?))
        }
        "c2" => {
            let base = sub("base")?;
            Kind::C2(Box::new(match obj.get("span") {
                Some(v) => C2Extension::with_span(base, uint(v, "span")? as usize),
                None => C2Extension::new(base),
            }))
        }
        "lamplighter" => {
            let k = u32::try_from(uint(field(obj, "k", ty)?, "k")?)
                .map_err(|_| bad("k is too large"))?;
            Kind::Lamplighter(Box::new(Lamplighter::new(sub("base")?, k)?))
        }
        other => return Err(bad(format!("unknown machine type `{other}`"))),
    };
    Ok(AnyMachine::new(kind))
}

/// Parses `--element`. Besides the structured forms, the strings
/// `identity` and any generator name are accepted for every machine.
pub fn parse_element_arg(m: &AnyMachine, arg: &str) -> Result<AnyElem, CliError> {
    let v = serde_json::from_str(arg).unwrap_or_else(|_| Value::String(arg.trim().to_string()));
    parse_element(m, &v)
}

fn named(m: &AnyMachine, name: &str) -> Option<AnyElem> {
    if name == "identity" {
        return Some(m.identity());
    }
    m.generators()
        .into_iter()
        .find(|g| g.name == name)
        .map(|g| g.elem)
}

pub fn parse_element(m: &AnyMachine, v: &Value) -> Result<AnyElem, CliError> {
    if let Value::String(s) = v {
        if let Some(e) = named(m, s) {
            return Ok(e);
        }
    }
    let fail = || bad(format!("`{v}` is not an element of this machine"));
    match m.kind() {
        Kind::Adding(_) => {
            let n = bigint(v, "adding element")?;
            i64::try_from(n).map(AnyElem::Int).map_err(|_| bad("integer out of range"))
        }
        Kind::Dyadic(d) => {
            if let Some(r) = v.get("rational") {
                let s = match r {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                return Ok(AnyElem::Padic(parse_rational(&s)?));
            }
            if let Some(Value::Array(ds)) = v.get("digits") {
                let digits = ds
                    .iter()
                    .map(|x| uint(x, "digit").map(|d| d as u8))
                    .collect::<Result<Vec<_>, _>>()?;
                return Ok(AnyElem::Padic(eta_value(&DigitWord::new(digits)?, d.eta())));
            }
            match v {
                Value::Number(n) => Ok(AnyElem::Padic(parse_rational(&n.to_string())?)),
                Value::String(s) => Ok(AnyElem::Padic(parse_rational(s)?)),
                _ => Err(fail()),
            }
        }
        Kind::ZOmega(_) => {
            let obj = v.as_object().ok_or_else(fail)?;
            let mut pairs = Vec::new();
            for (k, c) in obj {
                let i: usize = k.trim().parse().map_err(|_| bad(format!("bad index `{k}`")))?;
                pairs.push((i, bigint(c, "coefficient")?));
            }
            Ok(AnyElem::Vect(Vect::from_pairs(pairs)))
        }
        Kind::Product(p) => {
            let left = parse_element(p.left(), v.get("left").ok_or_else(fail)?)?;
            let right = parse_element(p.right(), v.get("right").ok_or_else(fail)?)?;
            Ok(AnyElem::Pair(Box::new(Pair::new(left, right))))
        }
        Kind::Economical(e) => {
            let items = v.as_array().ok_or_else(fail)?;
            if items.len() != e.arity() {
                return Err(bad(format!("expected {} entries, got {}", e.arity(), items.len())));
            }
            let entries = items
                .iter()
                .map(|x| parse_element(e.base(), x))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(AnyElem::Tuple(Tuple(entries)))
        }
        Kind::C2(c) => {
            let mut coords = Vec::new();
            if let Some(vec) = v.get("vec") {
                for (k, x) in vec.as_object().ok_or_else(fail)? {
                    let i: usize = k.trim().parse().map_err(|_| bad(format!("bad index `{k}`")))?;
                    coords.push((i, parse_element(c.base(), x)?));
                }
            }
            let sigma = match v.get("sigma") {
                None => false,
                Some(s) => match uint(s, "sigma")? {
                    0 => false,
                    1 => true,
                    _ => return Err(bad("sigma must be 0 or 1")),
                },
            };
            let C2Elem { vec, .. } = c.from_coords(coords);
            Ok(AnyElem::C2(C2Elem { vec, sigma }))
        }
        Kind::Lamplighter(l) => {
            let base = match v.get("base") {
                Some(b) => parse_element(l.base(), b)?,
                None => l.base().identity(),
            };
            let mut lamps: BTreeMap<AnyElem, u32> = BTreeMap::new();
            if let Some(list) = v.get("lamps") {
                for lamp in list.as_array().ok_or_else(fail)? {
                    let pos = parse_element(l.base(), lamp.get("pos").ok_or_else(fail)?)?;
                    let val = bigint(lamp.get("val").ok_or_else(fail)?, "lamp value")?;
                    let k = BigInt::from(l.modulus());
                    let val = u32::try_from(((val % &k) + &k) % &k).expect("residue below k");
                    let slot = lamps.entry(pos).or_insert(0);
                    *slot = (*slot + val) % l.modulus();
                }
            }
            lamps.retain(|_, v| *v != 0);
            Ok(AnyElem::Lamp(Box::new(LampElem { lamps, base })))
        }
    }
}
