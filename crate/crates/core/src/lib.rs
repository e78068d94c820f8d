pub mod configs;
pub mod stratum;
pub mod twisted;
