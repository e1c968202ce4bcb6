//! Constant-coefficient exterior algebra on `ℝⁿ`.
//!
//! Coordinates on `ℝ²ⁿ` are ordered `(x₁,…,xₙ, y₁,…,yₙ)`; `e_i` is the
//! `i`-th coordinate vector and `f_i` the `(n+i)`-th. The pullback
//! convention is `A*α = α ∘ (A × … × A)`, so `(AB)* = B* ∘ A*`.

mod complex;
mod json;
mod kform;
mod multi_index;


pub use complex::ComplexKForm;
pub use json::{FormDocument, TermDocument};
pub use kform::{lefschetz_matrix, omega_k_sum_formula, ExactForm, FloatForm, KForm};
pub use multi_index::{sort_with_sign, Combinations, MultiIndex};
