//! Text formats: space files, definable-set literals, net and subnet literals.
//!
//! Space files are line oriented (`#` starts a comment; `;` also separates
//! statements):
//!
//! ```text
//! space (finite|vspace|rational) [name "<str>"]
//! points <id>+
//! chain <id>
//! rel <elem> <= <elem>          # elem := <id> | <id>@<nat>
//! rel chain_below <id> <id>
//! sup <chain-id> = <id>
//! interval <bound> <bound>      # bound := <rat> (open|closed) | unbounded
//! topology (alexandroff|scott|upper)
//! ```
//!
//! Set literals are unions of atoms separated by `|`: `{top}`, `{A@3}`,
//! `tail(A,5)`, `seg(A,2,7)`, `(0,1/2]`, `(sqrt(2)/2,1)`, `empty`, `all`.
//! Surd bounds accept `sqrt(d)`, `B*sqrt(d)`, `A+B*sqrt(d)`, `A-B*sqrt(d)`
//! and an optional `/R` divisor after `sqrt(d)`.

use crate::error::Error;
use crate::exact::{Rat, Surd, SurdOrRat};
use crate::nets::{IndexOrder, NetSpec, SubnetSpec, ValueTerm};
use crate::point::PointId;
use crate::sets::{Atom, DefinableSet, HiBound, Interval, LoBound};
use crate::space::{BaseTopology, OrderRelation, SpaceKind, SpacePresentation};
use std::str::FromStr;

fn perr(line: usize, expected: &str) -> Error {
    Error::Parse {
        line,
        expected: expected.to_string(),
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    Rat::from_str(s.trim()).ok()
}

/// `A+B*sqrt(d)` and friends; `None` when the text is not a surd form.
pub fn parse_surd(s: &str) -> Option<SurdOrRat> {
    let s = s.trim().replace(' ', "");
    let pos = s.find("sqrt(")?;
    let close = s[pos..].find(')')? + pos;
    let d: u64 = s[pos + 5..close].parse().ok()?;
    let before = &s[..pos];
    let after = &s[close + 1..];
    let mut b;
    let mut a = Rat::from_integer(0.into());
    if before.is_empty() {
        b = Rat::from_integer(1.into());
    } else if before == "-" {
        b = -Rat::from_integer(1.into());
    } else if let Some(coef) = before.strip_suffix('*') {
        // coef may carry a leading A+ / A- part
        if let Some(r) = parse_rat(coef) {
            b = r;
        } else {
            let (apart, bpart, neg) = split_additive(coef)?;
            a = parse_rat(apart)?;
            b = parse_rat(bpart)?;
            if neg {
                b = -b;
            }
        }
    } else if let Some(apart) = before.strip_suffix('+') {
        a = parse_rat(apart)?;
        b = Rat::from_integer(1.into());
    } else {
        let apart = before.strip_suffix('-')?;
        a = parse_rat(apart)?;
        b = -Rat::from_integer(1.into());
    }
    if !after.is_empty() {
        let div = after.strip_prefix('/')?;
        let r = parse_rat(div)?;
        if r == Rat::from_integer(0.into()) {
            return None;
        }
        b /= r;
    }
    Some(Surd::make(a, b, d))
}

fn split_additive(s: &str) -> Option<(&str, &str, bool)> {
    // find the last top-level + or - that separates two terms
    let bytes = s.as_bytes();
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && bytes[i - 1].is_ascii_digit() {
            return Some((&s[..i], &s[i + 1..], c == '-'));
        }
    }
    None
}

pub fn parse_point(s: &str) -> Result<PointId, Error> {
    let s = s.trim();
    if let Some((cell, idx)) = s.split_once('@') {
        let index: u64 = idx
            .parse()
            .map_err(|_| perr(0, "a natural chain index after '@'"))?;
        return Ok(PointId::chain_at(cell, index));
    }
    if let Some(q) = parse_rat(s) {
        if s.chars().next().is_some_and(|c| c.is_ascii_digit() || c == '-') {
            return Ok(PointId::Rational(q));
        }
    }
    if s.is_empty() || !s.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return Err(perr(0, "a point literal (name, cell@index, or rational)"));
    }
    Ok(PointId::Finite(s.to_string()))
}

pub fn parse_space(text: &str) -> Result<SpacePresentation, Error> {
    let mut kind: Option<SpaceKind> = None;
    let mut name = None;
    let mut points = Vec::new();
    let mut cells = Vec::new();
    let mut relations = Vec::new();
    let mut sups = Vec::new();
    let mut interval = None;
    let mut topology = None;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        for stmt in line.split(';') {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            let mut words = stmt.split_whitespace();
            let head = words.next().unwrap();
            match head {
                "space" => {
                    let k = words.next().ok_or_else(|| perr(lineno, "a space kind"))?;
                    kind = Some(match k {
                        "finite" => SpaceKind::Finite,
                        "vspace" => SpaceKind::V,
                        "rational" => SpaceKind::Rational,
                        _ => return Err(perr(lineno, "finite, vspace or rational")),
                    });
                    if let Some(w) = words.next() {
                        if w != "name" {
                            return Err(perr(lineno, "optional 'name \"<str>\"'"));
                        }
                        let rest: Vec<&str> = words.collect();
                        let joined = rest.join(" ");
                        let trimmed = joined.trim_matches('"');
                        name = Some(trimmed.to_string());
                        continue;
                    }
                }
                "points" => {
                    for w in words {
                        points.push(w.to_string());
                    }
                }
                "chain" => {
                    let c = words.next().ok_or_else(|| perr(lineno, "a chain name"))?;
                    cells.push(c.to_string());
                }
                "rel" => {
                    let first = words.next().ok_or_else(|| perr(lineno, "a relation"))?;
                    if first == "chain_below" {
                        let c = words
                            .next()
                            .ok_or_else(|| perr(lineno, "a chain name"))?
                            .to_string();
                        let p = words
                            .next()
                            .ok_or_else(|| perr(lineno, "a point name"))?
                            .to_string();
                        relations.push(OrderRelation::ChainBelowPoint { cell: c, point: p });
                        continue;
                    }
                    let le = words.next().ok_or_else(|| perr(lineno, "'<='"))?;
                    if le != "<=" {
                        return Err(perr(lineno, "'<='"));
                    }
                    let second = words.next().ok_or_else(|| perr(lineno, "an element"))?;
                    let lo = parse_elem(first).map_err(|_| perr(lineno, "an element"))?;
                    let hi = parse_elem(second).map_err(|_| perr(lineno, "an element"))?;
                    let rel = match (lo, hi) {
                        (Elem::Point(a), Elem::Point(b)) => {
                            OrderRelation::PointBelowPoint { lo: a, hi: b }
                        }
                        (Elem::Point(a), Elem::ChainAt(c, k)) => OrderRelation::PointBelowChainAt {
                            point: a,
                            cell: c,
                            index: k,
                        },
                        (Elem::ChainAt(c, k), Elem::Point(b)) => OrderRelation::ChainAtBelowPoint {
                            cell: c,
                            index: k,
                            point: b,
                        },
                        (Elem::ChainAt(..), Elem::ChainAt(..)) => {
                            return Err(perr(
                                lineno,
                                "cross-chain relations must go through a point",
                            ))
                        }
                    };
                    relations.push(rel);
                }
                "sup" => {
                    let c = words
                        .next()
                        .ok_or_else(|| perr(lineno, "a chain name"))?
                        .to_string();
                    let eq = words.next().ok_or_else(|| perr(lineno, "'='"))?;
                    if eq != "=" {
                        return Err(perr(lineno, "'='"));
                    }
                    let p = words
                        .next()
                        .ok_or_else(|| perr(lineno, "a point name"))?
                        .to_string();
                    sups.push((c, p));
                }
                "interval" => {
                    let rest: Vec<&str> = words.collect();
                    let (lo, used) = parse_lo_bound(&rest, lineno)?;
                    let (hi, used2) = parse_hi_bound(&rest[used..], lineno)?;
                    if used + used2 != rest.len() {
                        return Err(perr(lineno, "end of interval statement"));
                    }
                    interval = Some(Interval::new(lo, hi));
                }
                "topology" => {
                    let t = words.next().ok_or_else(|| perr(lineno, "a topology"))?;
                    topology = Some(match t {
                        "alexandroff" => BaseTopology::Alexandroff,
                        "scott" => BaseTopology::Scott,
                        "upper" => BaseTopology::Upper,
                        _ => return Err(perr(lineno, "alexandroff, scott or upper")),
                    });
                }
                _ => return Err(perr(lineno, "a space-file statement")),
            }
        }
    }

    let kind = kind.ok_or_else(|| perr(0, "a 'space' statement"))?;
    let topology = topology.ok_or_else(|| perr(0, "a 'topology' statement"))?;
    SpacePresentation::build(name, kind, points, cells, relations, sups, interval, topology)
}

enum Elem {
    Point(String),
    ChainAt(String, u64),
}

fn parse_elem(s: &str) -> Result<Elem, ()> {
    match s.split_once('@') {
        Some((c, i)) => Ok(Elem::ChainAt(c.to_string(), i.parse().map_err(|_| ())?)),
        None => Ok(Elem::Point(s.to_string())),
    }
}

fn parse_lo_bound(words: &[&str], lineno: usize) -> Result<(LoBound, usize), Error> {
    match words.first() {
        Some(&"unbounded") => Ok((LoBound::Unbounded, 1)),
        Some(v) => {
            let q = parse_rat(v).ok_or_else(|| perr(lineno, "a rational bound"))?;
            match words.get(1) {
                Some(&"open") => Ok((LoBound::Open(q), 2)),
                Some(&"closed") => Ok((LoBound::Closed(q), 2)),
                Some(&"unbounded") => Ok((LoBound::Unbounded, 2)),
                _ => Err(perr(lineno, "open, closed or unbounded")),
            }
        }
        None => Err(perr(lineno, "an interval bound")),
    }
}

fn parse_hi_bound(words: &[&str], lineno: usize) -> Result<(HiBound, usize), Error> {
    let (lo, used) = parse_lo_bound(words, lineno)?;
    let hi = match lo {
        LoBound::Unbounded => HiBound::Unbounded,
        LoBound::Open(q) => HiBound::Open(q),
        LoBound::Closed(q) => HiBound::Closed(q),
        LoBound::Cut(s) => HiBound::Cut(s),
    };
    Ok((hi, used))
}

/// Parse a definable-set literal against a presentation (atoms are clipped
/// to the carrier).
pub fn parse_set(space: &SpacePresentation, text: &str) -> Result<DefinableSet, Error> {
    let text = text.trim();
    if text == "empty" {
        return Ok(DefinableSet::empty());
    }
    if text == "all" {
        return Ok(space.whole_space());
    }
    let mut atoms = Vec::new();
    for part in split_top(text, '|') {
        let part = part.trim();
        if part == "empty" {
            continue;
        }
        if part == "all" {
            return Ok(space.whole_space());
        }
        if let Some(inner) = part.strip_prefix('{').and_then(|p| p.strip_suffix('}')) {
            let p = parse_point(inner)?;
            space.check_point(&p)?;
            match p {
                PointId::Finite(n) => atoms.push(Atom::FinPoint(n)),
                PointId::ChainAt { cell, index } => atoms.push(Atom::Seg {
                    cell,
                    from: index,
                    to: index,
                }),
                PointId::Rational(q) => atoms.push(Atom::Ival(Interval::singleton(q))),
            }
            continue;
        }
        if let Some(args) = strip_call(part, "tail") {
            let (c, k) = two_args(&args).ok_or_else(|| perr(0, "tail(cell,index)"))?;
            let from: u64 = k.parse().map_err(|_| perr(0, "a natural index"))?;
            atoms.push(Atom::Tail { cell: c, from });
            continue;
        }
        if let Some(args) = strip_call(part, "seg") {
            let parts: Vec<String> = split_top(&args, ',').iter().map(|s| s.trim().to_string()).collect();
            if parts.len() != 3 {
                return Err(perr(0, "seg(cell,from,to)"));
            }
            let from: u64 = parts[1].parse().map_err(|_| perr(0, "a natural index"))?;
            let to: u64 = parts[2].parse().map_err(|_| perr(0, "a natural index"))?;
            atoms.push(Atom::Seg {
                cell: parts[0].clone(),
                from,
                to,
            });
            continue;
        }
        if (part.starts_with('(') || part.starts_with('['))
            && (part.ends_with(')') || part.ends_with(']'))
        {
            atoms.push(Atom::Ival(parse_interval_literal(part)?));
            continue;
        }
        return Err(perr(0, "a set atom"));
    }
    space.normalize_set(&DefinableSet::from_atoms(atoms))
}

fn parse_interval_literal(s: &str) -> Result<Interval, Error> {
    let lo_closed = s.starts_with('[');
    let hi_closed = s.ends_with(']');
    let inner = &s[1..s.len() - 1];
    let parts = split_top(inner, ',');
    if parts.len() != 2 {
        return Err(perr(0, "an interval with two bounds"));
    }
    let lo_txt = parts[0].trim();
    let hi_txt = parts[1].trim();
    let lo = if lo_txt == "-inf" || lo_txt == "inf" || lo_txt == "*" {
        LoBound::Unbounded
    } else if let Some(q) = parse_rat(lo_txt) {
        if lo_closed {
            LoBound::Closed(q)
        } else {
            LoBound::Open(q)
        }
    } else if let Some(sr) = parse_surd(lo_txt) {
        match sr {
            SurdOrRat::Rational(q) => {
                if lo_closed {
                    LoBound::Closed(q)
                } else {
                    LoBound::Open(q)
                }
            }
            SurdOrRat::Irrational(su) => {
                if lo_closed {
                    return Err(perr(0, "an open bracket at an irrational cut"));
                }
                LoBound::Cut(su)
            }
        }
    } else {
        return Err(perr(0, "a rational or surd bound"));
    };
    let hi = if hi_txt == "+inf" || hi_txt == "inf" || hi_txt == "*" {
        HiBound::Unbounded
    } else if let Some(q) = parse_rat(hi_txt) {
        if hi_closed {
            HiBound::Closed(q)
        } else {
            HiBound::Open(q)
        }
    } else if let Some(sr) = parse_surd(hi_txt) {
        match sr {
            SurdOrRat::Rational(q) => {
                if hi_closed {
                    HiBound::Closed(q)
                } else {
                    HiBound::Open(q)
                }
            }
            SurdOrRat::Irrational(su) => {
                if hi_closed {
                    return Err(perr(0, "an open bracket at an irrational cut"));
                }
                HiBound::Cut(su)
            }
        }
    } else {
        return Err(perr(0, "a rational or surd bound"));
    };
    Ok(Interval::new(lo, hi))
}

fn strip_call(s: &str, name: &str) -> Option<String> {
    let body = s.strip_prefix(name)?.trim();
    let inner = body.strip_prefix('(')?.strip_suffix(')')?;
    Some(inner.to_string())
}

fn two_args(s: &str) -> Option<(String, String)> {
    let parts = split_top(s, ',');
    if parts.len() != 2 {
        return None;
    }
    Some((parts[0].trim().to_string(), parts[1].trim().to_string()))
}

/// Split on a separator at bracket depth zero.
fn split_top(s: &str, sep: char) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ => {}
        }
        if ch == sep && depth == 0 {
            parts.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    parts.push(cur);
    parts
}

/// Net literals: `const(p)`, `chain(A)`, `ratascent(q)`,
/// `interleave(t1,t2)`, `explicit{0:p0,1:p1,...}`.
pub fn parse_net(space: &SpacePresentation, text: &str) -> Result<NetSpec, Error> {
    let term = parse_value_term(space, text.trim())?;
    let index = match &term {
        ValueTerm::Explicit(table) => IndexOrder::finite_chain(table.len()),
        _ => IndexOrder::Omega,
    };
    NetSpec::new(index, term, space)
}

fn parse_value_term(space: &SpacePresentation, s: &str) -> Result<ValueTerm, Error> {
    if let Some(arg) = strip_call(s, "const") {
        let p = parse_point(&arg)?;
        space.check_point(&p)?;
        return Ok(ValueTerm::Const(p));
    }
    if let Some(arg) = strip_call(s, "chain") {
        if !space.has_cell(arg.trim()) {
            return Err(Error::InvalidNet(format!("unknown chain {arg}")));
        }
        return Ok(ValueTerm::ChainAscent(arg.trim().to_string()));
    }
    if let Some(arg) = strip_call(s, "ratascent") {
        let q = parse_rat(&arg).ok_or_else(|| Error::InvalidNet("ratascent needs a rational".into()))?;
        space.check_point(&PointId::Rational(q.clone()))?;
        return Ok(ValueTerm::RationalAscent(q));
    }
    if let Some(arg) = strip_call(s, "interleave") {
        let parts = split_top(&arg, ',');
        if parts.len() != 2 {
            return Err(Error::InvalidNet("interleave needs two terms".into()));
        }
        let a = parse_value_term(space, parts[0].trim())?;
        let b = parse_value_term(space, parts[1].trim())?;
        return Ok(ValueTerm::Interleave(Box::new(a), Box::new(b)));
    }
    if let Some(body) = s.strip_prefix("explicit{").and_then(|b| b.strip_suffix('}')) {
        let mut table = Vec::new();
        for entry in split_top(body, ',') {
            let entry = entry.trim();
            if entry.is_empty() {
                continue;
            }
            let (idx, val) = entry
                .split_once(':')
                .ok_or_else(|| Error::InvalidNet("explicit entries are idx:point".into()))?;
            let i: usize = idx
                .trim()
                .parse()
                .map_err(|_| Error::InvalidNet("explicit index must be a natural".into()))?;
            let p = parse_point(val)?;
            space.check_point(&p)?;
            table.push((i, p));
        }
        table.sort_by_key(|(i, _)| *i);
        if table.iter().enumerate().any(|(pos, (i, _))| pos != *i) {
            return Err(Error::InvalidNet("explicit indices must be 0..n-1".into()));
        }
        return Ok(ValueTerm::Explicit(table.into_iter().map(|(_, p)| p).collect()));
    }
    Err(Error::InvalidNet(format!("unrecognized net term: {s}")))
}

/// Subnet literals: `affine(a,b)`, `parity(even|odd)`.
pub fn parse_subnet(text: &str) -> Result<SubnetSpec, Error> {
    let s = text.trim();
    if let Some(arg) = strip_call(s, "affine") {
        let (a, b) = two_args(&arg).ok_or_else(|| Error::InvalidSubnet("affine(a,b)".into()))?;
        let a: u64 = a.parse().map_err(|_| Error::InvalidSubnet("affine(a,b)".into()))?;
        let b: u64 = b.parse().map_err(|_| Error::InvalidSubnet("affine(a,b)".into()))?;
        return SubnetSpec::affine(a, b);
    }
    if let Some(arg) = strip_call(s, "parity") {
        return match arg.trim() {
            "even" => Ok(SubnetSpec::parity_even()),
            "odd" => Ok(SubnetSpec::parity_odd()),
            _ => Err(Error::InvalidSubnet("parity(even|odd)".into())),
        };
    }
    Err(Error::InvalidSubnet(format!("unrecognized subnet: {s}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_chain_parses() {
        let s = parse_space("space finite; points a b; rel a <= b; topology alexandroff").unwrap();
        assert_eq!(s.kind, SpaceKind::Finite);
        assert!(s
            .leq(&PointId::finite("a"), &PointId::finite("b"))
            .unwrap());
        assert!(!s
            .leq(&PointId::finite("b"), &PointId::finite("a"))
            .unwrap());
    }

    #[test]
    fn round_trip_canonical_file() {
        let text = "space vspace name \"lambda\"\npoints top\nchain A\nchain B\nrel chain_below A top\nrel chain_below B top\nsup A = top\nsup B = top\ntopology scott\n";
        let s = parse_space(text).unwrap();
        let emitted = s.to_space_file();
        let s2 = parse_space(&emitted).unwrap();
        assert_eq!(emitted, s2.to_space_file());
    }

    #[test]
    fn surd_literals() {
        match parse_surd("1/2*sqrt(2)").unwrap() {
            SurdOrRat::Irrational(s) => assert_eq!(s.d, 2),
            _ => panic!(),
        }
        match parse_surd("sqrt(2)/2").unwrap() {
            SurdOrRat::Irrational(s) => {
                assert_eq!(s.d, 2);
                assert_eq!(s.b, crate::exact::rat(1, 2));
            }
            _ => panic!(),
        }
        match parse_surd("1+1/2*sqrt(9)").unwrap() {
            SurdOrRat::Rational(r) => assert_eq!(r, crate::exact::rat(5, 2)),
            _ => panic!(),
        }
    }
}
