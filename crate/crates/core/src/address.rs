//! Multi-indices naming cylinder subarcs.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Deepest address any operation will build.
pub const DEPTH_CAP: usize = 64;

/// A finite word `j_1 … j_k` over `{1..m}`. The empty address names the
/// whole arc.
///
/// Letters are stored zero-based; `Display` and `FromStr` use the one-based
/// convention (`"14"` is `[0, 3]`). Alphabets larger than 9 are written with
/// dots between letters (`"1.12.3"`).
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address(Vec<u8>);

/// Containment relation between two cylinders named by addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddressRelation {
    /// The first address is a proper prefix: its cylinder contains the other.
    Ancestor,
    /// The second address is a proper prefix of the first.
    Descendant,
    /// Neither is a prefix: the cylinders are disjoint or share one endpoint.
    DisjointOrAdjacent,
    Equal,
}

impl Address {
    pub fn root() -> Self {
        Address(Vec::new())
    }

    /// From zero-based letters.
    pub fn from_indices(letters: Vec<u8>) -> Self {
        Address(letters)
    }

    /// From one-based letters, checked against an alphabet of size `m`.
    pub fn from_letters(letters: &[usize], m: usize) -> Result<Self> {
        letters
            .iter()
            .map(|&l| {
                if l == 0 || l > m || l > u8::MAX as usize {
                    Err(Error::InvalidAddress { letter: l, m })
                } else {
                    Ok((l - 1) as u8)
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Address)
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, index: u8) {
        self.0.push(index);
    }

    pub fn child(&self, index: u8) -> Address {
        let mut v = self.0.clone();
        v.push(index);
        Address(v)
    }

    /// Checks every letter lies in `0..m`.
    pub fn check(&self, m: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l as usize >= m) {
            Some(&l) => Err(Error::InvalidAddress { letter: l as usize + 1, m }),
            None => Ok(()),
        }
    }

    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn common_prefix_len(&self, other: &Address) -> usize {
        self.0.iter().zip(other.0.iter()).take_while(|(a, b)| a == b).count()
    }

    pub fn relation(&self, other: &Address) -> AddressRelation {
        if self == other {
            AddressRelation::Equal
        } else if self.is_prefix_of(other) {
            AddressRelation::Ancestor
        } else if other.is_prefix_of(self) {
            AddressRelation::Descendant
        } else {
            AddressRelation::DisjointOrAdjacent
        }
    }
}

/// Free-function form of [`Address::relation`].
pub fn address_relation(a: &Address, b: &Address) -> AddressRelation {
    a.relation(b)
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let wide = self.0.iter().any(|&l| l >= 9);
        for (k, l) in self.0.iter().enumerate() {
            if wide && k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}", *l as usize + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Address({self})")
    }
}

impl FromStr for Address {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |letter: usize| Error::InvalidAddress { letter, m: 255 };
        if s.is_empty() || s == "ε" {
            return Ok(Address::root());
        }
        let letters: Vec<usize> = if s.contains('.') {
            s.split('.').map(|p| p.parse::<usize>().map_err(|_| bad(0))).collect::<Result<_>>()?
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| bad(0))).collect::<Result<_>>()?
        };
        Address::from_letters(&letters, 255)
    }
}

impl serde::Serialize for Address {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
