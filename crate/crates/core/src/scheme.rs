use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Time-evolution scheme: `e^{−itĤ}` or its continuation `e^{−tĤ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Scheme {
    RealTime,
    #[default]
    ImaginaryTime,
}

impl Scheme {
    /// Evolution factor for energy `e` over time `t`.
    pub fn factor(self, e: f64, t: f64) -> Complex64 {
        match self {
            Scheme::RealTime => Complex64::from_polar(1.0, -e * t),
            Scheme::ImaginaryTime => Complex64::new((-e * t).exp(), 0.0),
        }
    }

    /// `−i` in real time, `−1` in imaginary time: `dψ/dt = factor · Ĥψ`.
    pub fn generator(self) -> Complex64 {
        match self {
            Scheme::RealTime => Complex64::new(0.0, -1.0),
            Scheme::ImaginaryTime => Complex64::new(-1.0, 0.0),
        }
    }
}
