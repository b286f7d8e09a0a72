//! Prints the special-holonomy OPE tables with their discrepancy notes.

use scva_core::holonomy::{cy_check, g2_check, qk_check};
use scva_core::{Sector, SpaceSpec};

fn main() -> scva_core::Result<()> {
    print!("{}", g2_check(&SpaceSpec::orthonormal(7)?)?.to_text());
    for n in [1, 2] {
        print!("\n{}", qk_check(&SpaceSpec::orthonormal(4 * n)?)?.to_text());
    }
    for n in 1..=4 {
        print!("\n{}", cy_check(&SpaceSpec::polarized(n, Sector::NS)?)?.to_text());
    }
    Ok(())
}
