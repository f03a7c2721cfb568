use serde::Serialize;
use std::fmt;

/// Exact non-negative ratio, e.g. a solution size over the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        Ratio { num, den }
    }

    /// Ratio of a solution value to an optimum, with 0/0 read as 1.
    pub fn of(value: u64, optimum: u64) -> Self {
        if optimum == 0 && value == 0 {
            Ratio::new(1, 1)
        } else {
            Ratio::new(value, optimum)
        }
    }

    pub fn as_f64(&self) -> f64 {
        if self.den == 0 {
            f64::INFINITY
        } else {
            self.num as f64 / self.den as f64
        }
    }

    /// `self <= bound_num / bound_den`, evaluated exactly.
    pub fn at_most(&self, bound_num: u64, bound_den: u64) -> bool {
        self.den != 0 && (self.num as u128) * (bound_den as u128) <= (bound_num as u128) * (self.den as u128)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Verdict of a problem-specific validator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub valid: bool,
    pub quality: Option<Ratio>,
}

impl Verdict {
    pub fn valid(valid: bool) -> Self {
        Verdict { valid, quality: None }
    }
}

/// Record of one online execution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport<O> {
    pub index: usize,
    pub rounds: usize,
    pub messages: u64,
    pub local_steps: u64,
    pub outputs: Vec<Option<O>>,
    pub valid: Option<bool>,
    pub quality: Option<Ratio>,
    pub error: Option<String>,
}

impl<O> RunReport<O> {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    /// All outputs, panicking if some node never halted.
    pub fn unwrap_outputs(&self) -> Vec<O>
    where
        O: Clone,
    {
        self.outputs.iter().map(|o| o.clone().expect("every node produced an output")).collect()
    }

    pub const CSV_HEADER: &'static str = "index,rounds,valid,quality,messages";

    pub fn csv_row(&self) -> String {
        let valid = match self.valid {
            Some(true) => "true",
            Some(false) => "false",
            None => "",
        };
        let quality = self.quality.map(|q| format!("{:.6}", q.as_f64())).unwrap_or_default();
        format!("{},{},{},{},{}", self.index, self.rounds, valid, quality, self.messages)
    }
}

impl<O: Serialize> RunReport<O> {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}
