use crate::classes::Sample;
use crate::error::{Error, Result};
use crate::kuranishi::KuranishiFamily;
use crate::C64;
use serde_json::Value;

/// Parses `a`, `a+bi`, `a-bi`, `bi`, `i`, `-i` with optional exponents.
pub fn parse_complex(text: &str) -> Result<C64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("invalid complex number `{text}`"));
    if s.is_empty() {
        return Err(bad());
    }
    let real = |p: &str| p.parse::<f64>().map_err(|_| bad());
    let imag = |p: &str| match p {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(p),
    };
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return Ok(C64::new(real(&s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(C64::new(real(&body[..k])?, imag(&body[k..])?)),
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

fn value_to_complex(v: &Value) -> Result<C64> {
    match v {
        Value::Number(x) => Ok(C64::new(x.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::String(s) => parse_complex(s),
        Value::Array(a) if a.len() == 2 => match (a[0].as_f64(), a[1].as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(Error::Parse(format!("expected [re, im], got {v}"))),
        },
        _ => Err(Error::Parse(format!("expected a number, [re, im] or string, got {v}"))),
    }
}

fn assign(fam: &KuranishiFamily, t: &mut [C64], name: &str, value: C64) -> Result<()> {
    let i = fam
        .param_index(name)
        .ok_or_else(|| Error::Parse(format!("unknown parameter `{name}` (known: {})", fam.param_names.join(", "))))?;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Parse(format!("parameter `{name}` is not finite")));
    }
    t[i] = value;
    Ok(())
}

/// Parses `t1=0.05,t_23=0.01-0.02i`; unnamed parameters are zero.
pub fn parse_assignments(spec: &str, fam: &KuranishiFamily) -> Result<Vec<C64>> {
    let mut t = vec![C64::new(0.0, 0.0); fam.r()];
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected NAME=VALUE, got `{part}`")))?;
        assign(fam, &mut t, name.trim(), parse_complex(value)?)?;
    }
    Ok(t)
}

/// Sample file: a JSON list whose entries are either `{"label": .., "values": {..}}`
/// or a bare `{name: value}` mapping. Values are numbers, `[re, im]` or strings.
pub fn parse_samples(text: &str, fam: &KuranishiFamily) -> Result<Vec<Sample>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("sample file: {e}")))?;
    let list = doc
        .as_array()
        .ok_or_else(|| Error::Parse("sample file must be a JSON list".into()))?;
    list.iter()
        .enumerate()
        .map(|(k, entry)| {
            let obj = entry
                .as_object()
                .ok_or_else(|| Error::Parse(format!("sample {k} is not an object")))?;
            let (label, values) = match obj.get("values") {
                Some(Value::Object(values)) => {
                    for key in obj.keys() {
                        if key != "label" && key != "values" {
                            return Err(Error::Parse(format!("sample {k}: unknown field `{key}`")));
                        }
                    }
                    let label = match obj.get("label") {
                        Some(Value::String(s)) => s.clone(),
                        None => format!("sample{}", k + 1),
                        Some(other) => return Err(Error::Parse(format!("sample {k}: label must be a string, got {other}"))),
                    };
                    (label, values)
                }
                Some(_) => return Err(Error::Parse(format!("sample {k}: `values` must be an object"))),
                None => (format!("sample{}", k + 1), obj),
            };
            let mut t = vec![C64::new(0.0, 0.0); fam.r()];
            for (name, v) in values {
                assign(fam, &mut t, name, value_to_complex(v)?)?;
            }
            Ok(Sample { label, t })
        })
        .collect()
}
