//! Built-in test symbols.

use std::f64::consts::PI;

use super::{parse_rational, ClosedEntry, Entry, HomogeneousSymbol};
use crate::error::{Error, Result};
use crate::linalg::{C64, I};

pub const BUILTIN_NAMES: [&str; 4] = ["identity", "halfplane_scalar", "jordan2", "rational_scalar"];

fn rational(src: &str) -> Entry {
    Entry::Rational(parse_rational(src).expect("built-in expression parses"))
}

/// (ξₙ + i|ξ′|)/|ξ| on the slice.
fn halfplane(t: C64) -> C64 {
    (t + I) / (1.0 + t * t).sqrt()
}

fn jordan_y(t: C64) -> C64 {
    (t * t + 2.0) / (t * t + 1.0)
}

/// arg(t + i) for real t, continued analytically off the axis.
fn jordan_beta(t: C64) -> C64 {
    ((t + I).ln() - (t - I).ln()) / (2.0 * I)
}

fn jordan_q(t: C64) -> C64 {
    1.0 / (t + 2.0 * I) + 0.5 / (t - 3.0 * I)
}

fn jordan_diag(t: C64) -> C64 {
    jordan_y(t)
}

fn jordan_corner(t: C64) -> C64 {
    jordan_y(t) * jordan_beta(t) / PI + jordan_q(t)
}

fn zero(_: C64) -> C64 {
    C64::new(0.0, 0.0)
}

/// Looks up a built-in symbol by name.
///
/// `jordan2` is [[y, w], [0, y]] with y = (t²+2)/(t²+1) and w = y·arg(t+i)/π + q,
/// q rational and decaying, so E₊ = I, E₋ = [[1, 1], [0, 1]] and the normalized
/// symbol is rational.
pub fn builtin(name: &str) -> Result<HomogeneousSymbol> {
    let one = C64::new(1.0, 0.0);
    let nil = C64::new(0.0, 0.0);
    match name {
        "identity" => HomogeneousSymbol::new(
            name,
            2,
            0.0,
            2,
            vec![rational("1"), rational("0"), rational("0"), rational("1")],
        ),
        "halfplane_scalar" => HomogeneousSymbol::new(
            name,
            1,
            0.0,
            2,
            vec![Entry::Closed(ClosedEntry {
                eval: halfplane,
                at_plus_inf: one,
                at_minus_inf: -one,
            })],
        ),
        "rational_scalar" => HomogeneousSymbol::new(name, 1, 0.0, 2, vec![rational("(t^2 + 1)/(t^2 + 4)")]),
        "jordan2" => {
            let diag = Entry::Closed(ClosedEntry {
                eval: jordan_diag,
                at_plus_inf: one,
                at_minus_inf: one,
            });
            let corner = Entry::Closed(ClosedEntry {
                eval: jordan_corner,
                at_plus_inf: nil,
                at_minus_inf: one,
            });
            let zero = Entry::Closed(ClosedEntry {
                eval: zero,
                at_plus_inf: nil,
                at_minus_inf: nil,
            });
            HomogeneousSymbol::new(name, 2, 0.0, 2, vec![diag.clone(), corner, zero, diag])
        }
        other => Err(Error::InvalidSymbol(format!(
            "unknown built-in '{other}' (known: {})",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}
