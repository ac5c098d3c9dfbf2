pub mod modring;
pub mod primes;
pub mod sequences;
pub mod expr;
pub mod identities;
pub mod report;
pub mod suite;
