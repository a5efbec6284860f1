pub mod riemann;
