pub mod abstraction;
pub mod corpus;
pub mod eval;
pub mod game;
pub mod number;
pub mod recipe;
pub mod service;
pub mod signature;
pub mod syntax;
