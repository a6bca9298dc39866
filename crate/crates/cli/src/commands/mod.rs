pub mod data;
pub mod sim;
pub mod verify;
