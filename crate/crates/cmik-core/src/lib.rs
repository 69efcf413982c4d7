#![cfg_attr(not(test), no_std)]
extern crate alloc;
pub mod arith;
pub mod classify;
pub mod divpoly;
pub mod ecmodel;
pub mod field;
pub mod frobverify;
pub mod hilbert;
pub mod modgroup;
pub mod poly;
pub mod quadfield;
pub mod zfactor;
