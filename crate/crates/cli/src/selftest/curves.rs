//! Built-in curves.

use ffsum_core::{field_of_size, Family, HyperellipticCurve, Result};

pub const WORKED: &str = "q=5;f=0,1,0,1";

/// Simple-zero curves with generic angles, two of genus 1 and two of
/// genus 2; all Bessel arguments `2|sigma| y` stay below 60 for `y <= 2`.
pub const GENERIC: [&str; 4] = ["q=5;f=0,1,0,1", "q=3^2;f=0:0,1:0,2:1,1:0", "q=3;f=0,1,0,0,1,1", "q=7;f=1,0,3,0,0,1"];

/// Three squarefree members from each of `q in {3, 5, 7, 9}`, `g in {1, 2}`,
/// spread across the family index range.
pub fn oracle_curves() -> Result<Vec<HyperellipticCurve>> {
    let mut out = Vec::new();
    for q in ["3", "5", "7", "9"] {
        let field = field_of_size(q)?;
        for g in [1, 2] {
            let fam = Family::new(&field, g)?;
            for t in 1..=3u64 {
                let start = fam.size() * t / 4;
                if let Some(c) = (start..fam.size()).find_map(|i| fam.curve(i)) {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}
