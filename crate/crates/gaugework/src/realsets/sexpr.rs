//! Canonical s-expression form for set expressions, used by the CLI and
//! golden-file tests.
//!
//! Examples: `(finite 0.5)`, `(interval 1 2)`,
//! `(union (finite 0) (omega-seq limit=0 gen=reciprocal))`,
//! `(cantor lo=0 hi=1 eps=1/3)`, `(rank-tower lo=0 hi=1 depth=omega)`.
//! Floating literals print as shortest round-trip decimals; rational
//! parameters print exactly as `p/q`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::scalar::Real;

use super::cantor::{CantorLike, EpsilonSeq};
use super::symbolic::{OmegaSeq, RankTower, SeqGen, SymbolicClosedSet, TowerDepth};
use super::{Interval, SetError};

/// Render a set expression in canonical form.
pub fn to_sexpr<R: Real>(set: &SymbolicClosedSet<R>) -> String {
    let mut out = String::new();
    write_set(set, &mut out);
    out
}

fn write_set<R: Real>(set: &SymbolicClosedSet<R>, out: &mut String) {
    match set {
        SymbolicClosedSet::Empty => out.push_str("(empty)"),
        SymbolicClosedSet::FinitePoints(pts) => {
            out.push_str("(finite");
            for p in pts {
                out.push(' ');
                out.push_str(&format_num(p.as_f64()));
            }
            out.push(')');
        }
        SymbolicClosedSet::ClosedInterval(i) => {
            out.push_str("(interval ");
            out.push_str(&format_num(i.lo().as_f64()));
            out.push(' ');
            out.push_str(&format_num(i.hi().as_f64()));
            out.push(')');
        }
        SymbolicClosedSet::OmegaSeq(seq) => {
            out.push_str("(omega-seq limit=");
            out.push_str(&format_num(seq.limit().as_f64()));
            let (span, first, gen_name, ratio) = match *seq.gen() {
                SeqGen::Reciprocal { span, first } => (span, first, "reciprocal", None),
                SeqGen::Geometric { span, ratio, first } => {
                    (span, first, "geometric", Some(ratio))
                }
            };
            if span.as_f64() != 1.0 {
                out.push_str(" span=");
                out.push_str(&format_num(span.as_f64()));
            }
            if first != 1 {
                out.push_str(&format!(" first={first}"));
            }
            out.push_str(" gen=");
            out.push_str(gen_name);
            if let Some(r) = ratio {
                out.push_str(" ratio=");
                out.push_str(&format_num(r.as_f64()));
            }
            out.push(')');
        }
        SymbolicClosedSet::Union(members) => {
            out.push_str("(union");
            for m in members {
                out.push(' ');
                write_set(m, out);
            }
            out.push(')');
        }
        SymbolicClosedSet::RankTower(t) => {
            out.push_str("(rank-tower lo=");
            out.push_str(&format_num(t.interval().lo().as_f64()));
            out.push_str(" hi=");
            out.push_str(&format_num(t.interval().hi().as_f64()));
            out.push_str(" depth=");
            match t.depth() {
                TowerDepth::Omega => out.push_str("omega"),
                TowerDepth::Finite(d) => out.push_str(&d.to_string()),
            }
            out.push(')');
        }
        SymbolicClosedSet::CantorLike(c) => {
            out.push_str("(cantor lo=");
            out.push_str(&c.lo().to_string());
            out.push_str(" hi=");
            out.push_str(&c.hi().to_string());
            out.push_str(" eps=");
            match c.eps() {
                EpsilonSeq::Const(q) => out.push_str(&q.to_string()),
                EpsilonSeq::InverseSquare(q) => {
                    out.push_str("invsq:");
                    out.push_str(&q.to_string());
                }
            }
            out.push(')');
        }
    }
}

fn format_num(x: f64) -> String {
    // `{}` on f64 is the shortest representation that round-trips.
    format!("{x}")
}

/// Parse a canonical set expression; errors carry the byte position.
pub fn from_sexpr<R: Real>(text: &str) -> Result<SymbolicClosedSet<R>, SetError> {
    let mut parser = Parser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
    };
    let set = parser.parse_set()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.error("trailing input after set expression"));
    }
    Ok(set)
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, detail: &str) -> SetError {
        SetError::Parse {
            position: self.pos,
            detail: detail.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), SetError> {
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == byte {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", byte as char)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn atom(&mut self) -> Result<&'a str, SetError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() || b == b'(' || b == b')' {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an atom"));
        }
        Ok(&self.text[start..self.pos])
    }

    fn parse_set<R: Real>(&mut self) -> Result<SymbolicClosedSet<R>, SetError> {
        self.expect(b'(')?;
        let head = self.atom()?;
        let set = match head {
            "empty" => SymbolicClosedSet::Empty,
            "finite" => {
                let mut pts = Vec::new();
                while self.peek() != Some(b')') {
                    pts.push(self.number::<R>()?);
                }
                SymbolicClosedSet::finite_points(pts)
            }
            "interval" => {
                let lo = self.number::<R>()?;
                let hi = self.number::<R>()?;
                SymbolicClosedSet::ClosedInterval(Interval::closed(lo, hi).map_err(|e| {
                    SetError::Parse {
                        position: self.pos,
                        detail: e.to_string(),
                    }
                })?)
            }
            "omega-seq" => self.parse_omega_seq()?,
            "union" => {
                let mut members = Vec::new();
                while self.peek() == Some(b'(') {
                    members.push(self.parse_set()?);
                }
                if members.is_empty() {
                    return Err(self.error("union needs at least one member"));
                }
                SymbolicClosedSet::Union(members)
            }
            "rank-tower" => self.parse_rank_tower()?,
            "cantor" => self.parse_cantor()?,
            other => return Err(self.error(&format!("unknown set constructor '{other}'"))),
        };
        self.expect(b')')?;
        Ok(set)
    }

    fn number<R: Real>(&mut self) -> Result<R, SetError> {
        let pos = self.pos;
        let a = self.atom()?;
        parse_number::<R>(a).ok_or(SetError::Parse {
            position: pos,
            detail: format!("invalid number '{a}'"),
        })
    }

    fn key_values(&mut self) -> Result<Vec<(String, String)>, SetError> {
        let mut kvs = Vec::new();
        while !matches!(self.peek(), Some(b')') | None) {
            let pos = self.pos;
            let a = self.atom()?;
            let (k, v) = a.split_once('=').ok_or(SetError::Parse {
                position: pos,
                detail: format!("expected key=value, got '{a}'"),
            })?;
            kvs.push((k.to_string(), v.to_string()));
        }
        Ok(kvs)
    }

    fn parse_omega_seq<R: Real>(&mut self) -> Result<SymbolicClosedSet<R>, SetError> {
        let pos = self.pos;
        let kvs = self.key_values()?;
        let mut limit = None;
        let mut span = R::one();
        let mut first = 1u32;
        let mut gen_name = String::from("reciprocal");
        let mut ratio = None;
        for (k, v) in kvs {
            match k.as_str() {
                "limit" => limit = parse_number::<R>(&v),
                "span" => {
                    span = parse_number::<R>(&v).ok_or(SetError::Parse {
                        position: pos,
                        detail: format!("invalid span '{v}'"),
                    })?
                }
                "first" => {
                    first = v.parse().map_err(|_| SetError::Parse {
                        position: pos,
                        detail: format!("invalid first index '{v}'"),
                    })?
                }
                "gen" => gen_name = v,
                "ratio" => ratio = parse_number::<R>(&v),
                other => {
                    return Err(SetError::Parse {
                        position: pos,
                        detail: format!("unknown omega-seq key '{other}'"),
                    })
                }
            }
        }
        let limit = limit.ok_or(SetError::Parse {
            position: pos,
            detail: "omega-seq requires limit=".into(),
        })?;
        let gen = match gen_name.as_str() {
            "reciprocal" => SeqGen::Reciprocal { span, first },
            "geometric" => SeqGen::Geometric {
                span,
                ratio: ratio.ok_or(SetError::Parse {
                    position: pos,
                    detail: "geometric generator requires ratio=".into(),
                })?,
                first,
            },
            other => {
                return Err(SetError::Parse {
                    position: pos,
                    detail: format!("unknown generator '{other}'"),
                })
            }
        };
        Ok(SymbolicClosedSet::OmegaSeq(
            OmegaSeq::new(limit, gen).map_err(|e| SetError::Parse {
                position: pos,
                detail: e.to_string(),
            })?,
        ))
    }

    fn parse_rank_tower<R: Real>(&mut self) -> Result<SymbolicClosedSet<R>, SetError> {
        let pos = self.pos;
        let kvs = self.key_values()?;
        let mut lo = None;
        let mut hi = None;
        let mut depth = TowerDepth::Omega;
        for (k, v) in kvs {
            match k.as_str() {
                "lo" => lo = parse_number::<R>(&v),
                "hi" => hi = parse_number::<R>(&v),
                "depth" => {
                    depth = if v == "omega" {
                        TowerDepth::Omega
                    } else {
                        TowerDepth::Finite(v.parse().map_err(|_| SetError::Parse {
                            position: pos,
                            detail: format!("invalid tower depth '{v}'"),
                        })?)
                    }
                }
                other => {
                    return Err(SetError::Parse {
                        position: pos,
                        detail: format!("unknown rank-tower key '{other}'"),
                    })
                }
            }
        }
        let (lo, hi) = match (lo, hi) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => {
                return Err(SetError::Parse {
                    position: pos,
                    detail: "rank-tower requires lo= and hi=".into(),
                })
            }
        };
        let interval = Interval::closed(lo, hi).map_err(|e| SetError::Parse {
            position: pos,
            detail: e.to_string(),
        })?;
        Ok(SymbolicClosedSet::RankTower(
            RankTower::new(interval, depth).map_err(|e| SetError::Parse {
                position: pos,
                detail: e.to_string(),
            })?,
        ))
    }

    fn parse_cantor<R: Real>(&mut self) -> Result<SymbolicClosedSet<R>, SetError> {
        let pos = self.pos;
        let kvs = self.key_values()?;
        let mut lo = BigRational::from_integer(0.into());
        let mut hi = BigRational::from_integer(1.into());
        let mut eps = None;
        for (k, v) in kvs {
            match k.as_str() {
                "lo" => {
                    lo = parse_rational(&v).ok_or(SetError::Parse {
                        position: pos,
                        detail: format!("invalid rational '{v}'"),
                    })?
                }
                "hi" => {
                    hi = parse_rational(&v).ok_or(SetError::Parse {
                        position: pos,
                        detail: format!("invalid rational '{v}'"),
                    })?
                }
                "eps" => {
                    eps = Some(if let Some(rest) = v.strip_prefix("invsq:") {
                        EpsilonSeq::InverseSquare(parse_rational(rest).ok_or(
                            SetError::Parse {
                                position: pos,
                                detail: format!("invalid rational '{rest}'"),
                            },
                        )?)
                    } else {
                        EpsilonSeq::Const(parse_rational(&v).ok_or(SetError::Parse {
                            position: pos,
                            detail: format!("invalid rational '{v}'"),
                        })?)
                    })
                }
                other => {
                    return Err(SetError::Parse {
                        position: pos,
                        detail: format!("unknown cantor key '{other}'"),
                    })
                }
            }
        }
        let eps = eps.ok_or(SetError::Parse {
            position: pos,
            detail: "cantor requires eps=".into(),
        })?;
        Ok(SymbolicClosedSet::CantorLike(
            CantorLike::new(lo, hi, eps).map_err(|e| SetError::Parse {
                position: pos,
                detail: e.to_string(),
            })?,
        ))
    }
}

fn parse_number<R: Real>(s: &str) -> Option<R> {
    if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num.parse().ok()?;
        let d: f64 = den.parse().ok()?;
        if d == 0.0 {
            return None;
        }
        return Some(R::of(n / d));
    }
    s.parse::<f64>().ok().map(R::of)
}

/// Parse `p/q` or an integer or a decimal (decimals convert exactly from
/// their binary value).
pub fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).ok()?;
        let d = BigInt::from_str(den.trim()).ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s.trim()) {
        return Some(BigRational::from_integer(n));
    }
    let f: f64 = s.trim().parse().ok()?;
    BigRational::from_float(f)
}
