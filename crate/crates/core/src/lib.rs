pub mod acceptance;
pub mod contagion;
pub mod geometry;
pub mod hilbert;
pub mod rational;
pub mod surd;
pub mod torus;
