//! Text addressing of corpus entries: `phi0(alpha=2,beta=2)`-style calls,
//! and the shipped manifest the CLI and the acceptance harness iterate.

use num_rational::BigRational;

use crate::realsets::{parse_rational, CantorLike, EpsilonSeq, SymbolicClosedSet};
use crate::scalar::Real;

use super::{
    cantor_function, conditional_example, fat_union, phi0, phi_countable_uniform, phi_interval,
    volterra, CorpusError, FunctionEntry,
};

/// A parsed constructor argument.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Number(f64),
    Rational(BigRational),
    /// `num/den` multiples of pi, e.g. `pi/2`.
    PiMultiple { num: i64, den: i64 },
    Word(String),
}

impl ParamValue {
    fn as_f64(&self) -> Option<f64> {
        match self {
            ParamValue::Number(v) => Some(*v),
            ParamValue::Rational(q) => Some(crate::scalar::rational_to_real(q)),
            ParamValue::PiMultiple { num, den } => {
                Some(std::f64::consts::PI * *num as f64 / *den as f64)
            }
            ParamValue::Word(_) => None,
        }
    }

    fn as_count(&self) -> Option<u32> {
        match self {
            ParamValue::Number(v) if v.fract() == 0.0 && *v >= 0.0 => Some(*v as u32),
            ParamValue::Rational(q) if q.is_integer() => {
                use num_traits::ToPrimitive;
                q.to_integer().to_u32()
            }
            _ => None,
        }
    }
}

fn parse_value(s: &str) -> ParamValue {
    let t = s.trim();
    if let Some(rest) = t.strip_prefix("pi") {
        if rest.is_empty() {
            return ParamValue::PiMultiple { num: 1, den: 1 };
        }
        if let Some(den) = rest.strip_prefix('/') {
            if let Ok(d) = den.parse::<i64>() {
                return ParamValue::PiMultiple { num: 1, den: d };
            }
        }
    }
    if t.contains('/') || t.starts_with("invsq:") {
        if let Some(q) = t
            .strip_prefix("invsq:")
            .map(parse_rational)
            .unwrap_or_else(|| parse_rational(t))
        {
            return ParamValue::Rational(q);
        }
    }
    if let Ok(v) = t.parse::<f64>() {
        return ParamValue::Number(v);
    }
    ParamValue::Word(t.to_string())
}

/// Parse a `name(key=value,...)` corpus call.
pub fn parse_entry_call<R: Real>(text: &str) -> Result<FunctionEntry<R>, CorpusError> {
    let text = text.trim();
    let open = text.find('(').ok_or(CorpusError::Parse {
        position: text.len(),
        detail: "expected '(' after constructor name".into(),
    })?;
    if !text.ends_with(')') {
        return Err(CorpusError::Parse {
            position: text.len(),
            detail: "expected closing ')'".into(),
        });
    }
    let name = &text[..open];
    let body = &text[open + 1..text.len() - 1];
    let mut args: Vec<(String, ParamValue, usize)> = Vec::new();
    if !body.trim().is_empty() {
        let mut offset = open + 1;
        for piece in body.split(',') {
            let position = offset;
            offset += piece.len() + 1;
            let (k, v) = piece.split_once('=').ok_or(CorpusError::Parse {
                position,
                detail: format!("expected key=value, got '{}'", piece.trim()),
            })?;
            args.push((k.trim().to_string(), parse_value(v), position));
        }
    }
    build_entry(name, &args)
}

fn lookup<'a>(
    args: &'a [(String, ParamValue, usize)],
    key: &str,
) -> Option<&'a ParamValue> {
    args.iter().find(|(k, _, _)| k == key).map(|(_, v, _)| v)
}

fn need_f64(
    args: &[(String, ParamValue, usize)],
    key: &str,
    name: &str,
) -> Result<f64, CorpusError> {
    lookup(args, key)
        .and_then(|v| v.as_f64())
        .ok_or_else(|| CorpusError::InvalidParameter {
            detail: format!("{name} requires numeric {key}="),
        })
}

fn need_count(
    args: &[(String, ParamValue, usize)],
    key: &str,
    name: &str,
) -> Result<u32, CorpusError> {
    lookup(args, key)
        .and_then(|v| v.as_count())
        .ok_or_else(|| CorpusError::InvalidParameter {
            detail: format!("{name} requires integer {key}="),
        })
}

fn check_keys(
    name: &str,
    args: &[(String, ParamValue, usize)],
    allowed: &[&str],
) -> Result<(), CorpusError> {
    for (k, _, position) in args {
        if !allowed.contains(&k.as_str()) {
            return Err(CorpusError::Parse {
                position: *position,
                detail: format!("unknown {name} parameter '{k}'"),
            });
        }
    }
    Ok(())
}

/// Epsilon descriptor from `eps=` (constant or `invsq:` rational) or
/// `theta=` (`eps_n = (theta/pi)^2 / n^2`, exact for pi-multiples).
fn epsilon_from_args(
    args: &[(String, ParamValue, usize)],
    name: &str,
) -> Result<EpsilonSeq, CorpusError> {
    if let Some(v) = lookup(args, "eps") {
        return match v {
            ParamValue::Rational(q) => Ok(EpsilonSeq::Const(q.clone())),
            ParamValue::Number(x) => BigRational::from_float(*x)
                .map(EpsilonSeq::Const)
                .ok_or_else(|| CorpusError::InvalidParameter {
                    detail: format!("invalid eps {x}"),
                }),
            other => Err(CorpusError::InvalidParameter {
                detail: format!("{name}: eps must be rational, got {other:?}"),
            }),
        };
    }
    if let Some(v) = lookup(args, "theta") {
        let c = match v {
            ParamValue::PiMultiple { num, den } => {
                // theta = (num/den) pi, so (theta/pi)^2 = num^2/den^2 exactly.
                crate::scalar::ratio(num * num, den * den)
            }
            ParamValue::Number(theta) => {
                let c = theta * theta / (std::f64::consts::PI * std::f64::consts::PI);
                BigRational::from_float(c).ok_or_else(|| CorpusError::InvalidParameter {
                    detail: format!("invalid theta {theta}"),
                })?
            }
            other => {
                return Err(CorpusError::InvalidParameter {
                    detail: format!("{name}: theta must be numeric or a pi fraction, got {other:?}"),
                })
            }
        };
        return Ok(EpsilonSeq::InverseSquare(c));
    }
    Err(CorpusError::InvalidParameter {
        detail: format!("{name} requires eps= or theta="),
    })
}

fn build_entry<R: Real>(
    name: &str,
    args: &[(String, ParamValue, usize)],
) -> Result<FunctionEntry<R>, CorpusError> {
    match name {
        "phi0" => {
            check_keys(name, args, &["alpha", "beta"])?;
            phi0(need_f64(args, "alpha", name)?, need_f64(args, "beta", name)?)
        }
        "phi_interval" => {
            check_keys(name, args, &["a", "b", "alpha", "beta"])?;
            phi_interval(
                need_f64(args, "a", name)?,
                need_f64(args, "b", name)?,
                need_f64(args, "alpha", name)?,
                need_f64(args, "beta", name)?,
            )
        }
        "phi_countable" => {
            check_keys(name, args, &["seq", "terms", "alpha", "beta"])?;
            let seq = match lookup(args, "seq") {
                Some(ParamValue::Word(w)) => w.clone(),
                None => "reciprocal".to_string(),
                other => {
                    return Err(CorpusError::InvalidParameter {
                        detail: format!("invalid seq {other:?}"),
                    })
                }
            };
            phi_countable_uniform(
                &seq,
                need_count(args, "terms", name)? as usize,
                need_f64(args, "alpha", name)?,
                need_f64(args, "beta", name)?,
            )
        }
        "volterra" => {
            check_keys(name, args, &["eps", "theta", "alpha", "beta", "depth"])?;
            let eps = epsilon_from_args(args, name)?;
            let cantor = CantorLike::new(
                crate::scalar::ratio(0, 1),
                crate::scalar::ratio(1, 1),
                eps,
            )
            .map_err(|e| CorpusError::InvalidParameter {
                detail: e.to_string(),
            })?;
            volterra(
                &SymbolicClosedSet::CantorLike(cantor),
                need_f64(args, "alpha", name)?,
                need_f64(args, "beta", name)?,
                need_count(args, "depth", name)?,
            )
        }
        "fat_union" => {
            check_keys(name, args, &["n", "alpha", "beta", "depth"])?;
            fat_union(
                need_count(args, "n", name)?,
                need_f64(args, "alpha", name)?,
                need_f64(args, "beta", name)?,
                need_count(args, "depth", name)?,
            )
        }
        "cantor_function" => {
            check_keys(name, args, &["depth"])?;
            cantor_function(need_count(args, "depth", name)?)
        }
        "conditional_example" => {
            check_keys(name, args, &[])?;
            Ok(conditional_example())
        }
        other => Err(CorpusError::UnknownConstructor {
            name: other.to_string(),
        }),
    }
}

/// The corpus shipped with the crate: the entries every integrator is run
/// against in the consistency harness. One constructor call per line;
/// `#` starts a comment.
pub fn default_manifest() -> &'static str {
    "\
# Oscillating power functions: smooth, unbounded-conditional, and
# unbounded-but-absolutely-integrable regimes.
phi0(alpha=4,beta=2)
phi0(alpha=2,beta=2)
phi0(alpha=2.5,beta=2)
phi0(alpha=3,beta=1.5)
phi_interval(a=0,b=1,alpha=4,beta=2)
# The flagship conditionally integrable derivative.
conditional_example()
# Countable singular set along 1/n.
phi_countable(seq=reciprocal,terms=6,alpha=2.5,beta=2)
# Volterra functions over thin and fat Cantor sets.
volterra(eps=1/3,alpha=4,beta=2,depth=8)
volterra(theta=pi/2,alpha=4,beta=2,depth=6)
fat_union(n=3,alpha=4,beta=2,depth=6)
# The Cantor function itself (bounded, monotone integrand).
cantor_function(depth=20)
"
}

/// Parse a manifest: one constructor call per non-comment line.
pub fn parse_manifest<R: Real>(text: &str) -> Result<Vec<FunctionEntry<R>>, CorpusError> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_entry_call(line)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_calls_with_varied_values() {
        let e = parse_entry_call::<f64>("phi0(alpha=2,beta=2)").unwrap();
        assert_eq!(e.canonical_id(), "phi0(alpha=2,beta=2)");
        let v = parse_entry_call::<f64>("volterra(theta=pi/2,alpha=4,beta=2,depth=4)").unwrap();
        assert_eq!(v.params()["eps"], "invsq:1/4");
        let c = parse_entry_call::<f64>("conditional_example()").unwrap();
        assert_eq!(c.canonical_id(), "conditional_example()");
    }

    #[test]
    fn rejects_unknown_names_and_keys() {
        assert!(matches!(
            parse_entry_call::<f64>("mystery(x=1)"),
            Err(CorpusError::UnknownConstructor { .. })
        ));
        assert!(matches!(
            parse_entry_call::<f64>("phi0(alpha=2,gamma=1)"),
            Err(CorpusError::Parse { .. })
        ));
    }

    #[test]
    fn shipped_manifest_parses_and_admits() {
        let entries = parse_manifest::<f64>(default_manifest()).unwrap();
        assert!(entries.len() >= 10);
        for e in &entries {
            if e.has_primitive() {
                e.spot_check(1, 60)
                    .unwrap_or_else(|err| panic!("{} failed admission: {err}", e.canonical_id()));
            }
        }
    }

    #[test]
    fn manifest_ids_are_unique_and_deterministic() {
        let entries = parse_manifest::<f64>(default_manifest()).unwrap();
        let ids: Vec<String> = entries.iter().map(|e| e.canonical_id()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
    }
}
