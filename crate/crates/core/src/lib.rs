pub mod cli;
pub mod covering;
pub mod fractional;
pub mod polydisc;
pub mod setcover;
pub mod simplex;
pub mod svg;
pub mod torus;
pub mod zonoid;
pub mod zonotope;
