//! Events over `A_1..A_n` as unions of atoms.
//!
//! Atom `C_J` is the outcome where exactly the events in `J` occur. It is
//! identified by a bitmask with bit `j` set iff `A_(j+1)` occurs, so `A1` is
//! bit 0. Every event in the algebra generated by `A_1..A_n` is a set of
//! atoms, and its probability is the sum of their masses.
//!
//! Expression grammar, with precedence `!` > `&` > `|`:
//!
//! ```text
//! expr   := term ("|" term)*
//! term   := factor ("&" factor)*
//! factor := "!" factor | "A" digits | "N" ("=" | ">=") digits | "(" expr ")"
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::construction::SymmetricDistribution;
use crate::error::{DistributionError, EventError};
use crate::exactmath::Rational;

/// Largest `n` for which atom-level structures are materialized.
pub const MAX_ATOM_EVENTS: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Atom(pub u32);

impl Atom {
    pub fn occurs(self, index: u32) -> bool {
        self.0 >> (index - 1) & 1 == 1
    }

    /// Number of events occurring in this atom.
    pub fn count(self) -> u32 {
        self.0.count_ones()
    }
}

/// All `2^n` atoms in bitmask order.
pub fn atoms(n: u32) -> impl Iterator<Item = Atom> {
    (0..1u32 << n).map(Atom)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventExpr {
    /// `A_k`, 1-based.
    Event(u32),
    Not(Box<EventExpr>),
    And(Box<EventExpr>, Box<EventExpr>),
    Or(Box<EventExpr>, Box<EventExpr>),
    /// `N = m`.
    CountEq(u32),
    /// `N >= m`.
    CountAtLeast(u32),
}

impl EventExpr {
    pub fn not(e: EventExpr) -> Self {
        EventExpr::Not(Box::new(e))
    }

    pub fn and(a: EventExpr, b: EventExpr) -> Self {
        EventExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: EventExpr, b: EventExpr) -> Self {
        EventExpr::Or(Box::new(a), Box::new(b))
    }

    /// `A_i1 & A_i2 & ...`; the sure event `N>=0` for an empty list.
    pub fn all_of(indices: impl IntoIterator<Item = u32>) -> Self {
        indices
            .into_iter()
            .map(EventExpr::Event)
            .reduce(EventExpr::and)
            .unwrap_or(EventExpr::CountAtLeast(0))
    }

    /// Checks indices and counts against `n`.
    pub fn validate(&self, n: u32) -> Result<(), EventError> {
        match self {
            EventExpr::Event(k) if *k < 1 || *k > n => {
                Err(EventError::IndexOutOfRange { index: *k, n })
            }
            EventExpr::CountEq(m) | EventExpr::CountAtLeast(m) if *m > n => {
                Err(EventError::CountOutOfRange { count: *m, n })
            }
            EventExpr::Event(_) | EventExpr::CountEq(_) | EventExpr::CountAtLeast(_) => Ok(()),
            EventExpr::Not(e) => e.validate(n),
            EventExpr::And(a, b) | EventExpr::Or(a, b) => {
                a.validate(n)?;
                b.validate(n)
            }
        }
    }

    pub fn contains(&self, atom: Atom) -> bool {
        match self {
            EventExpr::Event(k) => atom.occurs(*k),
            EventExpr::Not(e) => !e.contains(atom),
            EventExpr::And(a, b) => a.contains(atom) && b.contains(atom),
            EventExpr::Or(a, b) => a.contains(atom) || b.contains(atom),
            EventExpr::CountEq(m) => atom.count() == *m,
            EventExpr::CountAtLeast(m) => atom.count() >= *m,
        }
    }
}

impl fmt::Display for EventExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventExpr::Event(k) => write!(f, "A{k}"),
            EventExpr::Not(e) => write!(f, "!{e}"),
            EventExpr::And(a, b) => write!(f, "({a} & {b})"),
            EventExpr::Or(a, b) => write!(f, "({a} | {b})"),
            EventExpr::CountEq(m) => write!(f, "N={m}"),
            EventExpr::CountAtLeast(m) => write!(f, "N>={m}"),
        }
    }
}

/// Parses and validates an event expression for `n` events.
pub fn parse_event(text: &str, n: u32) -> Result<EventExpr, EventError> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0 };
    let expr = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    expr.validate(n)?;
    Ok(expr)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: &str) -> EventError {
        EventError::Syntax { position: self.pos, message: message.to_string() }
    }

    fn eat(&mut self, token: &[u8]) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<EventExpr, EventError> {
        let mut lhs = self.term()?;
        while self.eat(b"|") {
            lhs = EventExpr::or(lhs, self.term()?);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<EventExpr, EventError> {
        let mut lhs = self.factor()?;
        while self.eat(b"&") {
            lhs = EventExpr::and(lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<EventExpr, EventError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(EventExpr::not(self.factor()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b")") {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(b'A') => {
                self.pos += 1;
                Ok(EventExpr::Event(self.number()?))
            }
            Some(b'N') => {
                self.pos += 1;
                if self.eat(b">=") {
                    Ok(EventExpr::CountAtLeast(self.number()?))
                } else if self.eat(b"=") {
                    Ok(EventExpr::CountEq(self.number()?))
                } else {
                    Err(self.error("expected '=' or '>=' after 'N'"))
                }
            }
            Some(_) => Err(self.error("expected '!', '(', 'A<k>' or 'N'")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    /// Unsigned decimal, optionally preceded by whitespace.
    fn number(&mut self) -> Result<u32, EventError> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            if self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
                self.skip_ws();
                return self.number();
            }
            return Err(self.error("expected digits"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| EventError::Syntax { position: start, message: "number too large".into() })
    }
}

/// Membership set over the `2^n` atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomSet {
    n: u32,
    members: Vec<bool>,
}

impl AtomSet {
    pub fn empty(n: u32) -> Self {
        AtomSet { n, members: vec![false; 1 << n] }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn contains(&self, atom: Atom) -> bool {
        self.members[atom.0 as usize]
    }

    pub fn insert(&mut self, atom: Atom) {
        self.members[atom.0 as usize] = true;
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.contains(&true)
    }

    pub fn iter(&self) -> impl Iterator<Item = Atom> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| Atom(i as u32))
    }

    /// Membership as a 0/1 indicator row.
    pub fn indicator(&self) -> Vec<Rational> {
        self.members
            .iter()
            .map(|&b| if b { Rational::one() } else { Rational::zero() })
            .collect()
    }
}

/// The exact set of atoms making up `e`. `e` must already be validated for
/// `n`; `n` is limited to [`MAX_ATOM_EVENTS`].
pub fn compile_to_atoms(e: &EventExpr, n: u32) -> AtomSet {
    assert!(n <= MAX_ATOM_EVENTS, "atom expansion supports n <= {MAX_ATOM_EVENTS}");
    let mut set = AtomSet::empty(n);
    for atom in atoms(n) {
        if e.contains(atom) {
            set.insert(atom);
        }
    }
    set
}

/// Explicit probability per atom, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomDistribution {
    n: u32,
    probabilities: Vec<Rational>,
}

impl AtomDistribution {
    pub fn new(n: u32, probabilities: Vec<Rational>) -> Result<Self, DistributionError> {
        if !(1..=MAX_ATOM_EVENTS).contains(&n) {
            return Err(DistributionError::UnsupportedSize { n, max: MAX_ATOM_EVENTS });
        }
        let expected = 1usize << n;
        if probabilities.len() != expected {
            return Err(DistributionError::AtomCount { expected, got: probabilities.len() });
        }
        if let Some((i, x)) = probabilities.iter().enumerate().find(|(_, x)| x.is_negative()) {
            return Err(DistributionError::NegativeAtom { atom: i as u32, value: x.clone() });
        }
        let total: Rational = probabilities.iter().sum();
        if total != Rational::one() {
            return Err(DistributionError::Normalization(total));
        }
        Ok(AtomDistribution { n, probabilities })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.probabilities
    }

    pub fn probability(&self, atom: Atom) -> &Rational {
        &self.probabilities[atom.0 as usize]
    }
}

/// `P(e)` under `d`.
pub fn event_probability(d: &AtomDistribution, e: &EventExpr) -> Result<Rational, EventError> {
    e.validate(d.n)?;
    Ok(atoms(d.n)
        .filter(|&a| e.contains(a))
        .map(|a| d.probability(a))
        .sum())
}

/// Gives each atom with `m` occurring events the mass `x_m`.
pub fn expand_levels(d: &SymmetricDistribution) -> Result<AtomDistribution, DistributionError> {
    let n = d.n();
    if n > MAX_ATOM_EVENTS {
        return Err(DistributionError::UnsupportedSize { n, max: MAX_ATOM_EVENTS });
    }
    let probabilities = atoms(n).map(|a| d.levels()[a.count() as usize].clone()).collect();
    Ok(AtomDistribution { n, probabilities })
}
