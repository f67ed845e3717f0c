pub mod error;
pub mod fock_space;
pub mod jc_dynamics;
pub mod linalg;
pub mod quadrature;
pub mod bell_optimizer;
pub mod entanglement_tools;
pub mod sweep_cli;
