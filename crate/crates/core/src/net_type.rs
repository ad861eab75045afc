//! The five b-bounded type-of-nets families over the states `{0..b}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// b-bounded place/transition nets.
    Pt,
    /// Pure b-bounded place/transition nets.
    Ppt,
    /// `Pt` extended by the group `Z_{b+1}`.
    Zpt,
    /// `Ppt` extended by the group `Z_{b+1}`.
    Zppt,
    /// `Zpt` with pair events restricted to exact tests.
    Rzpt,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Pt, Family::Ppt, Family::Zpt, Family::Zppt, Family::Rzpt];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Pt => "pt",
            Family::Ppt => "ppt",
            Family::Zpt => "zpt",
            Family::Zppt => "zppt",
            Family::Rzpt => "rzpt",
        }
    }

    /// Families whose event set contains the group `Z_{b+1}`.
    pub fn has_group(self) -> bool {
        matches!(self, Family::Zpt | Family::Zppt | Family::Rzpt)
    }

    pub fn is_pure(self) -> bool {
        matches!(self, Family::Ppt | Family::Zppt)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = NetTypeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pt" => Ok(Family::Pt),
            "ppt" => Ok(Family::Ppt),
            "zpt" => Ok(Family::Zpt),
            "zppt" => Ok(Family::Zppt),
            "rzpt" => Ok(Family::Rzpt),
            _ => Err(NetTypeError::UnknownFamily(s.to_string())),
        }
    }
}

/// An event of a type of nets: a consume/produce pair or a group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TauEvent {
    Pair(u32, u32),
    Group(u32),
}

impl TauEvent {
    /// `sig⁻`
    pub fn minus(self) -> u32 {
        match self {
            TauEvent::Pair(m, _) => m,
            TauEvent::Group(_) => 0,
        }
    }

    /// `sig⁺`
    pub fn plus(self) -> u32 {
        match self {
            TauEvent::Pair(_, n) => n,
            TauEvent::Group(_) => 0,
        }
    }

    /// `|sig|`
    pub fn absval(self) -> u32 {
        match self {
            TauEvent::Pair(..) => 0,
            TauEvent::Group(k) => k,
        }
    }

    pub fn accessors(self) -> (u32, u32, u32) {
        (self.minus(), self.plus(), self.absval())
    }
}

impl fmt::Display for TauEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauEvent::Pair(m, n) => write!(f, "{m},{n}"),
            TauEvent::Group(k) => write!(f, "g:{k}"),
        }
    }
}

impl FromStr for TauEvent {
    type Err = NetTypeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || NetTypeError::BadEventSpec(s.to_string());
        if let Some(k) = s.strip_prefix("g:") {
            return k.parse().map(TauEvent::Group).map_err(|_| bad());
        }
        let (m, n) = s.split_once(',').ok_or_else(bad)?;
        Ok(TauEvent::Pair(m.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetTypeError {
    #[error("bound must be positive")]
    ZeroBound,
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("malformed event `{0}` (expected `m,n` or `g:k`)")]
    BadEventSpec(String),
    #[error("foreign event {event} for {family}^{b}")]
    ForeignEvent { event: TauEvent, family: Family, b: u32 },
    #[error("state {s} outside 0..={b}")]
    StateOutOfRange { s: u32, b: u32 },
}

/// A type of nets `τ = ({0..b}, E_τ, δ_τ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetType {
    family: Family,
    b: u32,
    events: Vec<TauEvent>,
}

impl NetType {
    pub fn new(family: Family, b: u32) -> Result<Self, NetTypeError> {
        if b == 0 {
            return Err(NetTypeError::ZeroBound);
        }
        let mut events = Vec::new();
        for m in 0..=b {
            for n in 0..=b {
                let e = TauEvent::Pair(m, n);
                if admits(family, b, e) {
                    events.push(e);
                }
            }
        }
        if family.has_group() {
            events.extend((0..=b).map(TauEvent::Group));
        }
        Ok(NetType { family, b, events })
    }

    pub fn family(&self) -> Family {
        self.family
    }
    pub fn bound(&self) -> u32 {
        self.b
    }
    pub fn events(&self) -> &[TauEvent] {
        &self.events
    }

    pub fn contains(&self, e: TauEvent) -> bool {
        admits(self.family, self.b, e)
    }

    /// The neutral event: enabled everywhere with no effect.
    pub fn neutral(&self) -> TauEvent {
        if self.family.has_group() {
            TauEvent::Group(0)
        } else {
            TauEvent::Pair(0, 0)
        }
    }

    /// `δ_τ(s, e)`; errors on events outside `E_τ` or states above `b`.
    pub fn delta(&self, s: u32, e: TauEvent) -> Result<Option<u32>, NetTypeError> {
        if !self.contains(e) {
            return Err(NetTypeError::ForeignEvent { event: e, family: self.family, b: self.b });
        }
        if s > self.b {
            return Err(NetTypeError::StateOutOfRange { s, b: self.b });
        }
        Ok(self.step(s, e))
    }

    /// `δ_τ(s, e)` without membership checks.
    #[inline]
    pub fn step(&self, s: u32, e: TauEvent) -> Option<u32> {
        match e {
            TauEvent::Group(k) => Some((s + k) % (self.b + 1)),
            TauEvent::Pair(m, n) if self.family == Family::Rzpt => (s == m).then_some(n),
            TauEvent::Pair(m, n) => (s >= m && s - m + n <= self.b).then(|| s - m + n),
        }
    }
}

fn admits(family: Family, b: u32, e: TauEvent) -> bool {
    match e {
        TauEvent::Group(k) => family.has_group() && k <= b,
        TauEvent::Pair(m, n) => {
            if m > b || n > b {
                return false;
            }
            if family.is_pure() && m >= 1 && n >= 1 {
                return false;
            }
            !(family.has_group() && m == 0 && n == 0)
        }
    }
}

impl fmt::Display for NetType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.family, self.b)
    }
}
