pub mod graphs;
pub mod rational;
pub mod hopf;
pub mod regalg;
pub mod characters;
pub mod birkhoff;
pub mod rgflow;
pub mod connection;
pub mod toyrules;
pub mod sample;
pub mod selftest;
pub mod cli;
