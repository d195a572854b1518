//! Arithmetic in `Z[zeta]/3^k` for a primitive cube root of unity `zeta`,
//! and the 1-unit cube computation at level 9.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// `x + y zeta` modulo `3^level`, with `zeta^2 = -zeta - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EisensteinResidue {
    x: u64,
    y: u64,
    level: u32,
}

impl EisensteinResidue {
    pub fn new(x: i64, y: i64, level: u32) -> Self {
        let m = 3i64.pow(level);
        EisensteinResidue {
            x: x.rem_euclid(m) as u64,
            y: y.rem_euclid(m) as u64,
            level,
        }
    }

    pub fn one(level: u32) -> Self {
        Self::new(1, 0, level)
    }

    pub fn zeta(level: u32) -> Self {
        Self::new(0, 1, level)
    }

    pub fn modulus(&self) -> u64 {
        3u64.pow(self.level)
    }

    pub fn parts(&self) -> (u64, u64) {
        (self.x, self.y)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.level);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = ring_mul(&acc, &base).expect("same level");
            }
            base = ring_mul(&base, &base).expect("same level");
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::new(c * self.x as i64, c * self.y as i64, self.level)
    }
}

impl fmt::Display for EisensteinResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}z (mod {})", self.x, self.y, self.modulus())
    }
}

fn same_level(a: &EisensteinResidue, b: &EisensteinResidue) -> Result<u64> {
    if a.level != b.level {
        return Err(Error::LevelMismatch(a.level, b.level));
    }
    Ok(a.modulus())
}

pub fn ring_add(a: &EisensteinResidue, b: &EisensteinResidue) -> Result<EisensteinResidue> {
    let m = same_level(a, b)?;
    Ok(EisensteinResidue {
        x: (a.x + b.x) % m,
        y: (a.y + b.y) % m,
        level: a.level,
    })
}

pub fn ring_sub(a: &EisensteinResidue, b: &EisensteinResidue) -> Result<EisensteinResidue> {
    let m = same_level(a, b)?;
    Ok(EisensteinResidue {
        x: (a.x + m - b.x) % m,
        y: (a.y + m - b.y) % m,
        level: a.level,
    })
}

/// `(x1 + y1 z)(x2 + y2 z) = (x1 x2 - y1 y2) + (x1 y2 + x2 y1 - y1 y2) z`.
pub fn ring_mul(a: &EisensteinResidue, b: &EisensteinResidue) -> Result<EisensteinResidue> {
    let m = same_level(a, b)? as i64;
    let (x1, y1, x2, y2) = (a.x as i64, a.y as i64, b.x as i64, b.y as i64);
    let yy = y1 * y2;
    Ok(EisensteinResidue {
        x: (x1 * x2 - yy).rem_euclid(m) as u64,
        y: (x1 * y2 + x2 * y1 - yy).rem_euclid(m) as u64,
        level: a.level,
    })
}

/// All residues at the given level.
pub fn all_residues(level: u32) -> impl Iterator<Item = EisensteinResidue> {
    let m = 3i64.pow(level);
    (0..m).flat_map(move |x| (0..m).map(move |y| EisensteinResidue::new(x, y, level)))
}

/// `1 + (zeta - 1) a`.
pub fn one_unit(a: &EisensteinResidue) -> EisensteinResidue {
    let level = a.level;
    let zm1 = ring_sub(&EisensteinResidue::zeta(level), &EisensteinResidue::one(level)).expect("level");
    ring_add(&EisensteinResidue::one(level), &ring_mul(&zm1, a).expect("level")).expect("level")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubeKillingReport {
    pub cases: usize,
    pub failures: Vec<(u64, u64)>,
}

impl CubeKillingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check `(1 + (zeta - 1) a)^3 = 1` in `Z[zeta]/9` for every residue `a`.
pub fn cube_killing_report() -> CubeKillingReport {
    let one = EisensteinResidue::one(2);
    let mut failures = Vec::new();
    let mut cases = 0;
    for a in all_residues(2) {
        cases += 1;
        if one_unit(&a).pow(3) != one {
            failures.push(a.parts());
        }
    }
    CubeKillingReport { cases, failures }
}

pub fn verify_cube_killing() -> bool {
    cube_killing_report().passed()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OneUnitQuotient {
    /// Size of the image of the 1-units in `(Z[zeta]/9)^*`.
    pub units: usize,
    /// Size of the subgroup of cubes.
    pub cubes: usize,
    /// `units / cubes`.
    pub quotient_order: usize,
}

/// `|U / U^3|` for the image `U` of the 1-units in `(Z[zeta]/9)^*`.
pub fn one_unit_cube_quotient() -> OneUnitQuotient {
    let units: HashSet<EisensteinResidue> = all_residues(2).map(|a| one_unit(&a)).collect();
    let cubes: HashSet<EisensteinResidue> = units.iter().map(|u| u.pow(3)).collect();
    OneUnitQuotient {
        units: units.len(),
        cubes: cubes.len(),
        quotient_order: units.len() / cubes.len(),
    }
}

pub fn one_unit_cube_quotient_order() -> usize {
    one_unit_cube_quotient().quotient_order
}
