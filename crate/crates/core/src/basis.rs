//! Rydberg-blockade Hilbert spaces.
//!
//! A configuration of `L` two-level atoms is stored as the low `L` bits of a
//! `u32`: bit `i` set means atom `i` is excited (`n_i = 1`). The blockade
//! forbids two excited neighbours, so the allowed configurations are the
//! binary strings without adjacent ones. Their count is a Fibonacci number for
//! an open chain and a Lucas number for a ring.
//!
//! Text renderings of configurations list site 0 first, so `"0100"` has only
//! site 1 excited.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::state::{BasisTag, StateVector};

/// Largest chain length representable in one machine word.
pub const MAX_SITES: usize = 32;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Open,
    #[default]
    Periodic,
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryCondition::Open => write!(f, "open"),
            BoundaryCondition::Periodic => write!(f, "periodic"),
        }
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "open" => Ok(BoundaryCondition::Open),
            "periodic" | "pbc" => Ok(BoundaryCondition::Periodic),
            other => argument(format!("unknown boundary condition `{other}`")),
        }
    }
}

#[inline]
pub(crate) fn mask(len: usize) -> u32 {
    if len >= 32 {
        u32::MAX
    } else {
        (1u32 << len) - 1
    }
}

/// Blockade check on a raw bit pattern.
#[inline]
pub fn bits_valid(bits: u32, len: usize, bc: BoundaryCondition) -> bool {
    if bits & (bits >> 1) != 0 {
        return false;
    }
    match bc {
        BoundaryCondition::Open => true,
        BoundaryCondition::Periodic => len < 2 || !(bits & 1 == 1 && (bits >> (len - 1)) & 1 == 1),
    }
}

/// Cyclic translation by one site: the excitation on site `i` moves to `i + 1`.
#[inline]
pub fn translate(bits: u32, len: usize) -> u32 {
    ((bits << 1) | (bits >> (len - 1))) & mask(len)
}

/// Spatial reflection `i -> L - 1 - i`.
#[inline]
pub fn reflect(bits: u32, len: usize) -> u32 {
    bits.reverse_bits() >> (32 - len)
}

/// Excitation pattern of `L` atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinConfiguration {
    bits: u32,
    len: u8,
}

impl SpinConfiguration {
    pub fn new(bits: u32, len: usize) -> Result<Self> {
        if !(2..=MAX_SITES).contains(&len) {
            return argument(format!("chain length {len} outside 2..={MAX_SITES}"));
        }
        if bits & !mask(len) != 0 {
            return argument(format!("bit pattern {bits:#b} wider than {len} sites"));
        }
        Ok(Self { bits, len: len as u8 })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// `n_i`
    pub fn is_excited(&self, site: usize) -> bool {
        (self.bits >> site) & 1 == 1
    }

    pub fn excitations(&self) -> u32 {
        self.bits.count_ones()
    }
}

impl fmt::Display for SpinConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self.bits, self.len()))
    }
}

impl FromStr for SpinConfiguration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = 0u32;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' if i < 32 => bits |= 1 << i,
                _ => return argument(format!("bad configuration string `{s}`")),
            }
        }
        SpinConfiguration::new(bits, s.len())
    }
}

pub(crate) fn render(bits: u32, len: usize) -> String {
    (0..len)
        .map(|i| if (bits >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// True iff no two neighbouring atoms are excited (including the pair
/// `(L-1, 0)` on a ring).
pub fn is_valid(config: SpinConfiguration, bc: BoundaryCondition) -> bool {
    bits_valid(config.bits, config.len(), bc)
}

/// Closed-form size of the blockade space: `F(L+2)` open, `Lucas(L)` periodic.
pub fn dimension(len: usize, bc: BoundaryCondition) -> usize {
    match bc {
        BoundaryCondition::Open => {
            // F(1) = F(2) = 1
            let (mut a, mut b) = (1usize, 1usize);
            for _ in 2..len + 2 {
                (a, b) = (b, a + b);
            }
            b
        }
        BoundaryCondition::Periodic => {
            if len == 1 {
                return 1;
            }
            // Lucas(1) = 1, Lucas(2) = 3
            let (mut a, mut b) = (1usize, 3usize);
            for _ in 2..len {
                (a, b) = (b, a + b);
            }
            b
        }
    }
}

/// Common view of the configuration spaces states live on.
pub trait Space: Sync {
    fn num_sites(&self) -> usize;
    fn dim(&self) -> usize;
    /// Bit pattern of basis state `index`.
    fn config(&self, index: usize) -> u32;
    fn index_of(&self, bits: u32) -> Option<usize>;
    fn tag(&self) -> BasisTag;

    fn configs(&self) -> Box<dyn Iterator<Item = u32> + '_> {
        Box::new((0..self.dim()).map(move |i| self.config(i)))
    }
}

/// Ordered enumeration of the blockade-allowed configurations.
#[derive(Clone, Debug)]
pub struct ConstrainedBasis {
    len: usize,
    bc: BoundaryCondition,
    states: Vec<u32>,
}

impl ConstrainedBasis {
    /// Enumerates all allowed configurations in ascending bit-pattern order.
    pub fn enumerate(len: usize, bc: BoundaryCondition) -> Result<Self> {
        if !(2..=MAX_SITES).contains(&len) {
            return argument(format!("chain length {len} outside 2..={MAX_SITES}"));
        }
        let mut states = Vec::with_capacity(dimension(len, BoundaryCondition::Open));
        // Deciding bits from the most significant down, zero before one,
        // emits the patterns in ascending order.
        fn descend(pos: isize, acc: u32, out: &mut Vec<u32>) {
            if pos < 0 {
                out.push(acc);
                return;
            }
            descend(pos - 1, acc, out);
            if acc & (1 << (pos + 1)) == 0 {
                descend(pos - 1, acc | (1 << pos), out);
            }
        }
        // the top site has no upper neighbour: start with an empty virtual bit
        fn start(len: usize, out: &mut Vec<u32>) {
            let top = len as isize - 1;
            descend(top - 1, 0, out);
            descend(top - 1, 1 << top, out);
        }
        start(len, &mut states);
        if bc == BoundaryCondition::Periodic {
            states.retain(|&s| bits_valid(s, len, bc));
        }
        Ok(Self { len, bc, states })
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn states(&self) -> &[u32] {
        &self.states
    }

    pub fn configuration(&self, index: usize) -> SpinConfiguration {
        SpinConfiguration {
            bits: self.states[index],
            len: self.len as u8,
        }
    }

    pub fn index(&self, config: SpinConfiguration) -> Option<usize> {
        if config.len() != self.len {
            return None;
        }
        self.index_of(config.bits)
    }

    /// Debug dump: one 0/1 string per line, in enumeration order.
    pub fn write_dump<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for &s in &self.states {
            writeln!(out, "{}", render(s, self.len))?;
        }
        Ok(())
    }
}

impl Space for ConstrainedBasis {
    fn num_sites(&self) -> usize {
        self.len
    }

    fn dim(&self) -> usize {
        self.states.len()
    }

    #[inline]
    fn config(&self, index: usize) -> u32 {
        self.states[index]
    }

    #[inline]
    fn index_of(&self, bits: u32) -> Option<usize> {
        self.states.binary_search(&bits).ok()
    }

    fn tag(&self) -> BasisTag {
        BasisTag::Constrained {
            sites: self.len,
            bc: self.bc,
        }
    }

    fn configs(&self) -> Box<dyn Iterator<Item = u32> + '_> {
        Box::new(self.states.iter().copied())
    }
}

/// The unconstrained `2^L` space, used for the LMG reference model.
#[derive(Clone, Copy, Debug)]
pub struct FullBasis {
    len: usize,
}

impl FullBasis {
    pub fn new(len: usize) -> Result<Self> {
        if !(2..=MAX_SITES).contains(&len) {
            return argument(format!("chain length {len} outside 2..={MAX_SITES}"));
        }
        Ok(Self { len })
    }
}

impl Space for FullBasis {
    fn num_sites(&self) -> usize {
        self.len
    }

    fn dim(&self) -> usize {
        1usize << self.len
    }

    #[inline]
    fn config(&self, index: usize) -> u32 {
        index as u32
    }

    #[inline]
    fn index_of(&self, bits: u32) -> Option<usize> {
        (bits & !mask(self.len) == 0).then_some(bits as usize)
    }

    fn tag(&self) -> BasisTag {
        BasisTag::Full { sites: self.len }
    }
}

/// Density-wave product states used as quench initial states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedState {
    Vacuum,
    Z2,
    Z2Shifted,
    Z3,
    Z4,
}

impl NamedState {
    /// Spatial period of the excitation pattern (1 for the vacuum).
    pub fn period(self) -> usize {
        match self {
            NamedState::Vacuum => 1,
            NamedState::Z2 | NamedState::Z2Shifted => 2,
            NamedState::Z3 => 3,
            NamedState::Z4 => 4,
        }
    }

    /// Bit pattern on `len` sites. Site 0 carries the first excitation,
    /// except for the shifted Néel state which is translated by one site.
    pub fn pattern(self, len: usize) -> Result<u32> {
        let p = self.period();
        if len % p != 0 {
            return argument(format!("period {p} of {self:?} does not divide L = {len}"));
        }
        if self == NamedState::Vacuum {
            return Ok(0);
        }
        let offset = usize::from(self == NamedState::Z2Shifted);
        Ok((0..len)
            .filter(|i| i % p == offset)
            .fold(0u32, |acc, i| acc | (1 << i)))
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NamedState::Vacuum => "vacuum",
            NamedState::Z2 => "z2",
            NamedState::Z2Shifted => "z2_shifted",
            NamedState::Z3 => "z3",
            NamedState::Z4 => "z4",
        };
        f.write_str(s)
    }
}

impl FromStr for NamedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vacuum" | "0" => Ok(NamedState::Vacuum),
            "z2" | "neel" => Ok(NamedState::Z2),
            "z2_shifted" | "z2-shifted" => Ok(NamedState::Z2Shifted),
            "z3" => Ok(NamedState::Z3),
            "z4" => Ok(NamedState::Z4),
            other => argument(format!("unknown named state `{other}`")),
        }
    }
}

/// Unit vector on the named product configuration.
pub fn named_state(space: &dyn Space, name: NamedState) -> Result<StateVector> {
    let bits = name.pattern(space.num_sites())?;
    let index = space
        .index_of(bits)
        .ok_or_else(|| Error::Argument(format!("{name} is not a basis state of this space")))?;
    let mut amps = vec![C64::new(0.0, 0.0); space.dim()];
    amps[index] = C64::new(1.0, 0.0);
    Ok(StateVector::new(amps, space.tag()))
}
