pub mod bound;
pub mod covcheck;
pub mod defect;
pub mod moment;
pub mod simulate;
pub mod volterra;
