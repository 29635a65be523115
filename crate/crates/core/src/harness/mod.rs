pub mod ber;
pub mod config;
pub mod ergodic;
pub mod outage;
pub mod run;
pub mod sweep;
