//! Exact scalars, points and small geometric helpers.

pub mod geom;
mod point;
mod rational;

pub use point::{comp_inf_sup, phi_sort, set_dist, set_dist_at_most, set_dist_f64, Interval, Point};
pub use rational::{q, Rational};
