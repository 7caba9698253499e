//! Ideal class groups of abelian fields of prime conductor and the
//! capitulation of their classes in cyclotomic fields.

pub mod arith;
pub mod criteria;
pub mod cycunits;
pub mod fields;
pub mod iwasawa;
pub mod quadforms;
pub mod survey;
