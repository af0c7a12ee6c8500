//! Finitely presented algebras, normal forms, morphisms and tensor products.

mod confluence;
mod morphism;
mod ncpoly;
mod presentation;
mod probe;
mod tensor;

pub use confluence::{check_local_confluence, ConfluenceReport, CriticalPairFailure};
pub use morphism::AlgebraMorphism;
pub use ncpoly::{Letter, NCPoly, Word};
pub use presentation::{fmt_terms, Generator, LetterInfo, Presentation, PresentationBuilder, Rule};
pub use probe::{basis_independence_probe, is_dependency, normal_words, ProbeReport};
pub use tensor::{tensor_product, TensorProduct};

#[cfg(test)]
mod tests;
