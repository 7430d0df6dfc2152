//! Input validation and seeded random problem instances.

use rand::Rng;

use crate::arith::{BiPoly, PrimeField};
use crate::error::{Error, Result};

/// Degrees `(d, h)` of a valid equation: `deg_y E = d >= 1`, `deg_x E = h`.
///
/// Valid means `E(0, 0) = 0` and `E_y(0, 0) != 0`, so that `E(x, f) = 0`
/// has a unique root `f` in `F_p[[x]]` with `f(0) = 0`.
pub fn validate(e: &BiPoly) -> Result<(usize, usize)> {
    if e.coeff(0, 0) != 0 {
        return Err(Error::InvalidInput("E(0,0) must vanish".into()));
    }
    if e.coeff(0, 1) == 0 {
        return Err(Error::InvalidInput("E_y(0,0) must be nonzero".into()));
    }
    Ok((e.deg_y().unwrap(), e.deg_x().unwrap()))
}

/// A random valid equation with `deg_y E = d` and `deg_x E <= h`.
///
/// Coefficients are uniform except for the constraints `E(0,0) = 0`,
/// `E_y(0,0) != 0` and a nonzero coefficient in y-degree `d`.
pub fn random_equation<R: Rng>(rng: &mut R, field: PrimeField, d: usize, h: usize) -> BiPoly {
    let p = field.modulus();
    let nx = h + 1;
    loop {
        let mut grid: Vec<u64> = (0..nx * (d + 1)).map(|_| rng.gen_range(0..p)).collect();
        grid[0] = 0;
        grid[nx] = rng.gen_range(1..p);
        let e = BiPoly::from_grid(field, nx, d + 1, grid);
        if e.deg_y() == Some(d) {
            return e;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_equations_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for &p in &[2u64, 3, 13] {
            let f = PrimeField::new(p).unwrap();
            for d in 1..=4 {
                for h in 0..=3 {
                    let e = random_equation(&mut rng, f, d, h);
                    let (dd, hh) = validate(&e).unwrap();
                    assert_eq!(dd, d);
                    assert!(hh <= h);
                }
            }
        }
    }

    #[test]
    fn rejects_singular_equations() {
        let f = PrimeField::new(5).unwrap();
        let e = BiPoly::from_terms(f, &[(0, 0, 1), (0, 1, 1)]);
        assert!(validate(&e).is_err());
        let e = BiPoly::from_terms(f, &[(1, 0, 1), (0, 2, 1)]);
        assert!(validate(&e).is_err());
    }
}
