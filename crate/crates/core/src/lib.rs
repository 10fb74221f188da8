pub mod cyclo;
pub mod help;
pub mod rational;
pub mod tables;
pub mod tree;
pub mod verdict;
