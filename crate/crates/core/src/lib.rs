pub mod algebra;
pub mod assignment;
pub mod cli;
pub mod experiments;
pub mod fixpoint;
pub mod generators;
pub mod henkin;
pub mod io;
pub mod modal;
pub mod syntax;
