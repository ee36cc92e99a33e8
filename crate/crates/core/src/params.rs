use crate::error::{Error, Result};
use std::fmt;

/// Which degree coordinate a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    In,
    Out,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::In, Side::Out];

    pub fn as_str(self) -> &'static str {
        match self {
            Side::In => "in",
            Side::Out => "out",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters of the directed linear preferential attachment model.
///
/// `alpha` is the probability that a new node links *to* an existing node
/// chosen by in-degree; with probability `gamma = 1 - alpha` an existing node
/// chosen by out-degree links to the new node. The derived growth exponents are
/// `c_in = alpha / (1 + delta_in)` and `c_out = gamma / (1 + delta_out)`, and the
/// tail indices are their reciprocals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    alpha: f64,
    gamma: f64,
    delta_in: f64,
    delta_out: f64,
    c_in: f64,
    c_out: f64,
    iota_in: f64,
    iota_out: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, delta_in: f64, delta_out: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::ParameterDomain(format!("alpha must lie in (0,1), got {alpha}")));
        }
        if !(delta_in > 0.0 && delta_in.is_finite()) {
            return Err(Error::ParameterDomain(format!("delta_in must be positive, got {delta_in}")));
        }
        if !(delta_out > 0.0 && delta_out.is_finite()) {
            return Err(Error::ParameterDomain(format!("delta_out must be positive, got {delta_out}")));
        }
        let gamma = 1.0 - alpha;
        let c_in = alpha / (1.0 + delta_in);
        let c_out = gamma / (1.0 + delta_out);
        assert!(c_in + c_out <= 1.0);
        Ok(Self { alpha, gamma, delta_in, delta_out, c_in, c_out, iota_in: 1.0 / c_in, iota_out: 1.0 / c_out })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta_in(&self) -> f64 {
        self.delta_in
    }
    pub fn delta_out(&self) -> f64 {
        self.delta_out
    }
    pub fn c_in(&self) -> f64 {
        self.c_in
    }
    pub fn c_out(&self) -> f64 {
        self.c_out
    }
    pub fn iota_in(&self) -> f64 {
        self.iota_in
    }
    pub fn iota_out(&self) -> f64 {
        self.iota_out
    }

    pub fn delta(&self, side: Side) -> f64 {
        match side {
            Side::In => self.delta_in,
            Side::Out => self.delta_out,
        }
    }

    pub fn c(&self, side: Side) -> f64 {
        match side {
            Side::In => self.c_in,
            Side::Out => self.c_out,
        }
    }

    pub fn iota(&self, side: Side) -> f64 {
        match side {
            Side::In => self.iota_in,
            Side::Out => self.iota_out,
        }
    }

    /// Probability of the scheme that increments `side` at an existing node.
    pub fn scheme_prob(&self, side: Side) -> f64 {
        match side {
            Side::In => self.alpha,
            Side::Out => self.gamma,
        }
    }

    /// The same model with the roles of in and out exchanged.
    pub fn mirrored(&self) -> Self {
        Self::new(self.gamma, self.delta_out, self.delta_in).expect("mirror of valid params is valid")
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={} delta_in={} delta_out={}", self.alpha, self.delta_in, self.delta_out)
    }
}
