//! The underlying inner-product space and the creation/annihilation mode labels.
//!
//! Modes are labelled by their *field index*: `u_(n)` is the coefficient of
//! `z^{-n-1}` in the generating field `u(z)`, so every mode index is an integer
//! and `u_(n)` creates iff `n < 0`. The conventional mode index used in
//! expressions (half-integers for Neveu-Schwarz fermions, `phi_0` for the
//! Ramond zero modes) is `n + shift`, see [`SpaceSpec::index_shift2`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    NS,
    R,
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sector::NS => write!(f, "NS"),
            Sector::R => write!(f, "R"),
        }
    }
}

impl std::str::FromStr for Sector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "NS" | "ns" => Ok(Sector::NS),
            "R" | "r" => Ok(Sector::R),
            other => Err(Error::InvalidSpace(format!("unknown sector {other:?}"))),
        }
    }
}

/// Generator letters. Declaration order is the canonical order: fermions first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    Phi,
    Psi,
    A,
    B,
    C,
}

impl Letter {
    pub fn is_fermionic(self) -> bool {
        matches!(self, Letter::Phi | Letter::Psi)
    }

    pub fn name(self) -> &'static str {
        match self {
            Letter::Phi => "phi",
            Letter::Psi => "psi",
            Letter::A => "a",
            Letter::B => "b",
            Letter::C => "c",
        }
    }

    pub fn from_name(name: &str) -> Option<Letter> {
        match name {
            "phi" => Some(Letter::Phi),
            "psi" => Some(Letter::Psi),
            "a" => Some(Letter::A),
            "b" => Some(Letter::B),
            "c" => Some(Letter::C),
            _ => None,
        }
    }
}

/// One basis vector of `T` in its bosonic or fermionic copy. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Gen {
    pub letter: Letter,
    pub index: u32,
}

impl Gen {
    pub const fn new(letter: Letter, index: u32) -> Gen {
        Gen { letter, index }
    }

    pub fn is_fermionic(self) -> bool {
        self.letter.is_fermionic()
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter.name(), self.index)
    }
}

/// The mode `gen_(n)` in field-index convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mode {
    pub gen: Gen,
    pub n: i32,
}

impl Mode {
    pub const fn new(gen: Gen, n: i32) -> Mode {
        Mode { gen, n }
    }

    pub fn is_creation(self) -> bool {
        self.n < 0
    }

    pub fn is_fermionic(self) -> bool {
        self.gen.is_fermionic()
    }
}

/// Which `(L_0, J_0)` pair is used to grade states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Grading {
    /// `L_0` and `J_0` of the untwisted N=2 structure.
    Untwisted,
    /// `T_0 = L_0 - J_0/2` and `J_0^top = J_0`.
    A,
    /// `T_0 = L_0 + J_0/2` and `J_0^top = -J_0`.
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceSpec {
    dim: usize,
    sector: Sector,
    polarized: bool,
    quaternionic: bool,
}

impl SpaceSpec {
    pub fn new(dim: usize, sector: Sector, polarized: bool, quaternionic: bool) -> Result<SpaceSpec> {
        if dim == 0 {
            return Err(Error::InvalidSpace("dim T must be positive".into()));
        }
        if sector == Sector::R && !polarized {
            return Err(Error::InvalidSpace("R requires polarization".into()));
        }
        if polarized && dim % 2 != 0 {
            return Err(Error::InvalidSpace(format!("a polarized space needs even dim, got {dim}")));
        }
        if quaternionic && dim % 4 != 0 {
            return Err(Error::InvalidSpace(format!(
                "a quaternionic space needs dim divisible by 4, got {dim}"
            )));
        }
        if quaternionic && !polarized {
            return Err(Error::InvalidSpace("quaternionic requires polarization".into()));
        }
        Ok(SpaceSpec { dim, sector, polarized, quaternionic })
    }

    /// Orthonormal NS space with generators `a^i`, `phi^i`.
    pub fn orthonormal(dim: usize) -> Result<SpaceSpec> {
        SpaceSpec::new(dim, Sector::NS, false, false)
    }

    /// Polarized space with `dim T' = dim_prime` and generators `b, c, phi, psi`.
    pub fn polarized(dim_prime: usize, sector: Sector) -> Result<SpaceSpec> {
        SpaceSpec::new(2 * dim_prime, sector, true, false)
    }

    pub fn quaternionic(dim: usize, sector: Sector) -> Result<SpaceSpec> {
        SpaceSpec::new(dim, sector, true, true)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn is_polarized(&self) -> bool {
        self.polarized
    }

    pub fn is_quaternionic(&self) -> bool {
        self.quaternionic
    }

    /// Number of generators per letter: `dim T` when orthonormal, `dim T'` when polarized.
    pub fn rank(&self) -> usize {
        if self.polarized {
            self.dim / 2
        } else {
            self.dim
        }
    }

    pub fn letters(&self) -> &'static [Letter] {
        if self.polarized {
            &[Letter::Phi, Letter::Psi, Letter::B, Letter::C]
        } else {
            &[Letter::Phi, Letter::A]
        }
    }

    pub fn generators(&self) -> Vec<Gen> {
        self.letters()
            .iter()
            .flat_map(|&l| (1..=self.rank() as u32).map(move |i| Gen::new(l, i)))
            .collect()
    }

    pub fn contains(&self, gen: Gen) -> bool {
        self.letters().contains(&gen.letter) && gen.index >= 1 && gen.index as usize <= self.rank()
    }

    pub fn check_gen(&self, gen: Gen) -> Result<()> {
        if self.contains(gen) {
            Ok(())
        } else {
            Err(Error::UnknownGenerator { name: gen.letter.name().into(), index: gen.index })
        }
    }

    /// `g(u, v)` on basis vectors: `delta_ij` on an orthonormal basis, and the
    /// `b/c`, `phi/psi` pairing on a polarized one.
    pub fn pairing(&self, u: Gen, v: Gen) -> i64 {
        if u.index != v.index {
            return 0;
        }
        let paired = match (u.letter, v.letter) {
            (Letter::A, Letter::A) => true,
            (Letter::Phi, Letter::Phi) => !self.polarized,
            (Letter::B, Letter::C) | (Letter::C, Letter::B) => true,
            (Letter::Phi, Letter::Psi) | (Letter::Psi, Letter::Phi) => true,
            _ => false,
        };
        i64::from(paired)
    }

    /// Twice the offset between the conventional mode index and the field index.
    pub fn index_shift2(&self, letter: Letter) -> i32 {
        match (letter, self.sector) {
            (Letter::Phi | Letter::Psi, Sector::NS) => 1,
            (Letter::Phi, Sector::R) => 2,
            _ => 0,
        }
    }

    /// Conventional index of a mode, e.g. `-1/2` for `phi_(-1)` in NS.
    pub fn conventional_index(&self, mode: Mode) -> Rational {
        rat(2 * mode.n as i64 + self.index_shift2(mode.gen.letter) as i64, 2)
    }

    /// Build a mode from its conventional index, checking the sector's parity class.
    pub fn mode_from_index(&self, gen: Gen, index: &Rational) -> Result<Mode> {
        self.check_gen(gen)?;
        let twice = index * rat(2, 1);
        let parity_error = || Error::ModeParity {
            name: gen.letter.name().into(),
            gen_index: gen.index,
            index: format_rational(index),
            sector: self.sector.to_string(),
        };
        if !twice.is_integer() {
            return Err(parity_error());
        }
        let twice: i64 = twice.to_integer().try_into().map_err(|_| parity_error())?;
        let shifted = twice - self.index_shift2(gen.letter) as i64;
        if shifted % 2 != 0 {
            return Err(parity_error());
        }
        let n = i32::try_from(shifted / 2).map_err(|_| parity_error())?;
        Ok(Mode::new(gen, n))
    }

    /// Twice the weight contributed by a creation mode under the given grading.
    pub fn mode_weight2(&self, mode: Mode, grading: Grading) -> i32 {
        let depth = -mode.n; // >= 1 for creation modes
        match mode.gen.letter {
            Letter::A | Letter::B | Letter::C => 2 * depth,
            Letter::Phi | Letter::Psi if !self.polarized => 2 * depth - 1,
            Letter::Phi => match grading {
                Grading::Untwisted => 2 * depth - 1,
                Grading::A => 2 * depth,
                Grading::B => 2 * depth - 2,
            },
            Letter::Psi => match grading {
                Grading::Untwisted => 2 * depth - 1,
                Grading::A => 2 * depth - 2,
                Grading::B => 2 * depth,
            },
        }
    }

    /// Charge contributed by a mode: `psi` counts `+1`, `phi` counts `-1` under `J_0`;
    /// the B twist negates it. Zero on orthonormal spaces.
    pub fn mode_charge(&self, mode: Mode, grading: Grading) -> i32 {
        if !self.polarized {
            return 0;
        }
        let j0 = match mode.gen.letter {
            Letter::Psi => 1,
            Letter::Phi => -1,
            _ => 0,
        };
        match grading {
            Grading::B => -j0,
            _ => j0,
        }
    }

    /// Twice the conformal weight of the generating field `gen(z)`.
    pub fn field_weight2(&self, gen: Gen) -> i32 {
        if gen.is_fermionic() {
            1
        } else {
            2
        }
    }

    /// Central-charge prefactor exponent `-dim T / 16` of the graded characters.
    pub fn ground_energy(&self) -> Rational {
        rat(-(self.dim as i64), 16)
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dim {} {} {}",
            self.dim,
            self.sector,
            if self.quaternionic {
                "quaternionic"
            } else if self.polarized {
                "polarized"
            } else {
                "orthonormal"
            }
        )
    }
}
