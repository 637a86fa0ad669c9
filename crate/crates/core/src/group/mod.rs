//! Exact integer matrix groups: Γ₀*(4), the theta group H(2), PSL₂(ℤ), word
//! decompositions, the coset map u and the twist κ.

mod matrix;
mod word;

pub use matrix::GroupElement;
pub use word::{
    coset_times, coset_u, decompose_gamma04star, decompose_psl2z, decompose_theta, kappa, CosetRep, Generator,
    GroupTag, Word,
};
