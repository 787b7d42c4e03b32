//! Finite-model kernel for the algebra of binary multirelations.
//!
//! Layers, bottom up: typed finite carriers and bit-mask subsets
//! ([`finsets`]), heterogeneous relation algebra ([`relcore`]), the
//! multirelational operations proper ([`mrcore`]), up/down/convex closures
//! with the associated preorders and quotients ([`closures`]), and a small
//! law-checking DSL with exhaustive and sampling backends ([`lawlab`]).

pub mod closures;
pub mod demos;
pub mod error;
pub mod finsets;
pub mod lawlab;
pub mod mrcore;
pub mod relcore;
pub mod suite;
