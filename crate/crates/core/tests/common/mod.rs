//! Strategies shared by the property and acceptance targets.
#![allow(dead_code)]

use proptest::prelude::*;

use planemap::poly::{BPoly, Rat, UPoly, Var};

pub fn bpoly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = BPoly> {
    prop::collection::vec((-5i64..=5, 0..=max_deg, 0..=max_deg), 1..=max_terms).prop_map(move |ts| {
        BPoly::from_terms(
            ts.into_iter()
                .filter(|&(_, i, j)| i + j <= max_deg)
                .map(|(c, i, j)| (Rat::from_integer(c.into()), i, j)),
        )
    })
}

/// Nonzero, with positive degree in `y`.
pub fn y_poly(max_deg: u32) -> impl Strategy<Value = BPoly> {
    bpoly(max_deg, 5).prop_filter("needs y", |p| p.degree_in(Var::Y) >= 1)
}

pub fn upoly(max_deg: usize) -> impl Strategy<Value = UPoly> {
    prop::collection::vec(-6i64..=6, 2..=max_deg + 1)
        .prop_map(|cs| UPoly::from_ints(&cs))
        .prop_filter("degree at least 1", |p| p.deg() >= 1)
}

pub fn proportional(a: &BPoly, b: &BPoly) -> bool {
    match (a.leading_term(), b.leading_term()) {
        (Some((_, ca)), Some((_, cb))) => a.scale(&cb) == b.scale(&ca),
        _ => a.is_zero() && b.is_zero(),
    }
}
