//! Exact noncommutative computer algebra for quantized enveloping algebras:
//! graded free algebras over ℚ(q), rewriting presentations with diamond-lemma
//! certification, Cartan data and diagram-automorphism foldings, full U_q(g)
//! arithmetic with Lusztig braid automorphisms, folding maps and their
//! uberalgebras, Hecke braidings, and semiclassical Poisson limits.

pub mod cartan;
pub mod freealg;
pub mod linalg;
pub mod qrat;
pub mod rewrite;
pub mod uqfull;
pub mod folding;
pub mod uber;
