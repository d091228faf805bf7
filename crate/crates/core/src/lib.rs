pub mod cli;
pub mod corpus;
pub mod error;
pub mod gerbe;
pub mod io;
pub mod lifting;
pub mod netbundle;
pub mod poset;
pub mod presentation;
pub mod tannaka;
pub mod unitary;

pub use error::{Error, Result};
