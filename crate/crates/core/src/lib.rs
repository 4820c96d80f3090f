//! Knot groups, their Dehn-filling quotients, and normal closures of slopes.

pub mod closures;
pub mod fpgroup;
pub mod knotpres;
pub mod seifert;
pub mod suite;
