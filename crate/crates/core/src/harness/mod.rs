pub mod cli;
pub mod formats;
pub mod generate;
pub mod grammar;
pub mod verify;
