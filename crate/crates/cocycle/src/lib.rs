//! Exact computational algebra for symmetric 2-cocycles of one-dimensional
//! formal groups: zeta polynomials and their gathered bases, Artin-Hasse
//! cocycle extensions, half-Weil obstruction tests, tangent spectral sequence
//! pages, and the resulting ring presentations.

pub mod cochain;
pub mod numtheory;
pub mod ringpres;
pub mod series;
pub mod spectral;
pub mod weil;
