//! Text format for group shifts.
//!
//! ```text
//! # comment
//! group: Z4 x Z2
//! gen @-1: (1,0) (2,1)
//! tap @0: (1,0)
//! index-cap: 8
//! ```
//!
//! Symbols are coordinate tuples in the declared cyclic factors; a plain
//! integer is accepted when the group has a single declared factor. `tap`
//! lines describe an explicit encoder to certify instead of the canonical one.

use std::fmt;

use groupshift::horizon::Horizons;
use groupshift::{FiniteAbelianGroup, GroupElement, GroupShift, Word};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

/// Horizon overrides, by their spec-file / flag names.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub margin: Option<usize>,
    pub past: Option<usize>,
    pub index_cap: Option<usize>,
    pub memory_cap: Option<usize>,
    pub support_cap: Option<usize>,
    pub block_cap: Option<usize>,
    pub verify: Option<usize>,
}

impl Overrides {
    pub const KEYS: [&'static str; 7] =
        ["margin", "past", "index-cap", "memory-cap", "support-cap", "block-cap", "verify"];

    fn slot(&mut self, key: &str) -> Option<&mut Option<usize>> {
        Some(match key {
            "margin" => &mut self.margin,
            "past" => &mut self.past,
            "index-cap" => &mut self.index_cap,
            "memory-cap" => &mut self.memory_cap,
            "support-cap" => &mut self.support_cap,
            "block-cap" => &mut self.block_cap,
            "verify" => &mut self.verify,
            _ => return None,
        })
    }

    fn entries(&self) -> [(&'static str, Option<usize>); 7] {
        [
            ("margin", self.margin),
            ("past", self.past),
            ("index-cap", self.index_cap),
            ("memory-cap", self.memory_cap),
            ("support-cap", self.support_cap),
            ("block-cap", self.block_cap),
            ("verify", self.verify),
        ]
    }

    /// Values set in `other` win.
    pub fn merge(&self, other: &Overrides) -> Overrides {
        let mut out = *self;
        for (key, v) in other.entries() {
            if v.is_some() {
                *out.slot(key).unwrap() = v;
            }
        }
        out
    }

    pub fn apply(&self, mut hz: Horizons) -> Horizons {
        hz.margin = self.margin.unwrap_or(hz.margin);
        hz.past = self.past.or(hz.past);
        hz.index_cap = self.index_cap.unwrap_or(hz.index_cap);
        hz.memory_cap = self.memory_cap.unwrap_or(hz.memory_cap);
        hz.support_cap = self.support_cap.unwrap_or(hz.support_cap);
        hz.block_cap = self.block_cap.unwrap_or(hz.block_cap);
        hz.verify = self.verify.unwrap_or(hz.verify);
        hz
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftSpec {
    pub group: FiniteAbelianGroup,
    pub generators: Vec<Word>,
    pub taps: Vec<Word>,
    pub overrides: Overrides,
}

impl ShiftSpec {
    pub fn shift(&self) -> GroupShift {
        GroupShift::new(self.group.clone(), self.generators.clone()).expect("generators validated by the parser")
    }

    pub fn horizons(&self, flags: &Overrides) -> Horizons {
        self.overrides.merge(flags).apply(Horizons::for_shift(&self.shift()))
    }
}

/// `Z4 x Z2 x Z9`: case-insensitive, `x` or `*` between factors.
pub fn parse_group(text: &str) -> Result<FiniteAbelianGroup, String> {
    let lower = text.trim().to_ascii_lowercase();
    let mut orders = Vec::new();
    for token in lower.split(['x', '*']) {
        let token = token.trim();
        let digits = token.strip_prefix('z').ok_or_else(|| format!("unknown group token `{token}`"))?;
        let n: u64 = digits.trim().parse().map_err(|_| format!("unknown group token `{token}`"))?;
        if n == 0 {
            return Err("cyclic factor Z0 is not finite".into());
        }
        if n > u32::MAX as u64 {
            return Err(format!("cyclic factor Z{n} is too large"));
        }
        orders.push(n);
    }
    FiniteAbelianGroup::from_cyclic_orders(&orders).map_err(|e| e.to_string())
}

/// Splits on whitespace, keeping parenthesised tuples whole.
fn tokens(text: &str) -> Result<Vec<&str>, String> {
    let mut out = Vec::new();
    let mut start = None;
    let mut depth = 0usize;
    for (i, c) in text.char_indices() {
        match c {
            '(' => {
                if depth == 0 && start.is_none() {
                    start = Some(i);
                }
                depth += 1;
            }
            ')' => {
                depth = depth.checked_sub(1).ok_or("unbalanced `)`")?;
            }
            c if c.is_whitespace() && depth == 0 => {
                if let Some(s) = start.take() {
                    out.push(&text[s..i]);
                }
            }
            _ => {
                start.get_or_insert(i);
            }
        }
    }
    if depth != 0 {
        return Err("unbalanced `(`".into());
    }
    if let Some(s) = start {
        out.push(&text[s..]);
    }
    Ok(out)
}

/// Coordinates of one symbol checked against `orders`.
pub fn parse_coords(token: &str, orders: &[u64]) -> Result<Vec<u64>, String> {
    let inner = match token.strip_prefix('(') {
        Some(rest) => rest.strip_suffix(')').ok_or_else(|| format!("malformed symbol `{token}`"))?,
        None if orders.len() == 1 => token,
        None => return Err(format!("symbol `{token}` needs {} coordinates", orders.len())),
    };
    let coords: Vec<u64> = inner
        .split(',')
        .map(|c| c.trim().parse::<u64>().map_err(|_| format!("malformed symbol `{token}`")))
        .collect::<Result<_, _>>()?;
    if coords.len() != orders.len() {
        return Err(format!("symbol `{token}` has {} coordinates, expected {}", coords.len(), orders.len()));
    }
    for (&c, &o) in coords.iter().zip(orders) {
        if c >= o {
            return Err(format!("symbol `{token}` out of range: {c} is not below {o}"));
        }
    }
    Ok(coords)
}

fn parse_word(h: &FiniteAbelianGroup, first: i64, body: &str) -> Result<Word, String> {
    let syms = tokens(body)?
        .into_iter()
        .map(|t| parse_coords(t, h.declared_orders()).map(|c| h.from_declared(&c).expect("arity checked")))
        .collect::<Result<Vec<GroupElement>, String>>()?;
    if syms.is_empty() {
        return Err("empty generator".into());
    }
    let w = Word::new(first, syms);
    if w.is_zero() {
        return Err("generator is the zero word".into());
    }
    Ok(w)
}

pub fn parse_spec(text: &str) -> Result<ShiftSpec, ParseError> {
    let mut group: Option<FiniteAbelianGroup> = None;
    let mut generators = Vec::new();
    let mut taps = Vec::new();
    let mut overrides = Overrides::default();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let err = |m: String| ParseError::new(line, m);
        let (key, value) = content.split_once(':').ok_or_else(|| err(format!("expected `key: value`, found `{content}`")))?;
        let key = key.trim();
        if key.eq_ignore_ascii_case("group") {
            if group.is_some() {
                return Err(err("duplicate group line".into()));
            }
            group = Some(parse_group(value).map_err(err)?);
            continue;
        }
        if let Some(at) = key.strip_prefix("gen").or_else(|| key.strip_prefix("tap")) {
            let h = group.as_ref().ok_or_else(|| err("generator before the group line".into()))?;
            let first = at
                .trim()
                .strip_prefix('@')
                .and_then(|n| n.trim().parse::<i64>().ok())
                .ok_or_else(|| err(format!("expected `{} @<index>`", &key[..3])))?;
            let w = parse_word(h, first, value).map_err(err)?;
            if key.starts_with("gen") { &mut generators } else { &mut taps }.push(w);
            continue;
        }
        let slot = overrides.slot(key).ok_or_else(|| err(format!("unknown key `{key}`")))?;
        let n: usize = value.trim().parse().map_err(|_| err(format!("`{key}` needs a non-negative integer")))?;
        *slot = Some(n);
    }
    let group = group.ok_or_else(|| ParseError::new(last.max(1), "missing group line"))?;
    Ok(ShiftSpec { group, generators, taps, overrides })
}

pub fn format_symbol(h: &FiniteAbelianGroup, s: &GroupElement) -> String {
    let c = h.to_declared(s);
    if c.len() == 1 {
        c[0].to_string()
    } else {
        let inner: Vec<String> = c.iter().map(u64::to_string).collect();
        format!("({})", inner.join(","))
    }
}

/// `@first s s ...`, or `0` for the zero word.
pub fn format_word(h: &FiniteAbelianGroup, w: &Word) -> String {
    match w.first() {
        None => "0".into(),
        Some(first) => {
            let syms: Vec<String> = w.symbols().iter().map(|s| format_symbol(h, s)).collect();
            format!("@{first} {}", syms.join(" "))
        }
    }
}

impl fmt::Display for ShiftSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group: {}", self.group)?;
        for (kind, words) in [("gen", &self.generators), ("tap", &self.taps)] {
            for w in words {
                let s = format_word(&self.group, w);
                let (at, body) = s.split_once(' ').unwrap();
                writeln!(f, "{kind} {at}: {body}")?;
            }
        }
        for (key, v) in self.overrides.entries() {
            if let Some(v) = v {
                writeln!(f, "{key}: {v}")?;
            }
        }
        Ok(())
    }
}
