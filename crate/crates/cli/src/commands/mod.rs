pub mod disk;
pub mod expand;
pub mod milne;
pub mod probe;
pub mod verify;
