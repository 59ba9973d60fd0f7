use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;

#[derive(Debug, Parser)]
#[command(name = "hgm", version, about = "Finite-field hypergeometric sums and zeta functions of cyclic covers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn common(&self) -> &Common {
        match &self.command {
            Command::Count(c)
            | Command::Hsum(c)
            | Command::Gauss(c)
            | Command::Jacobi(c)
            | Command::Zeta(c)
            | Command::Verify(c)
            | Command::SeriesCheck(c) => c,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count points of Y, its strata and X; decompose #X into divisor pieces.
    Count(Common),
    /// Evaluate H(alpha, beta, t).
    Hsum(Common),
    /// Gauss sums g(alpha) for each entry of --alpha.
    Gauss(Common),
    /// Jacobi sums J(alpha_i, beta_i).
    Jacobi(Common),
    /// Factor the local zeta function of X and check it against point counts.
    Zeta(Common),
    /// Run identity suites.
    Verify(Common),
    /// Check that the hypergeometric operator annihilates its series solutions.
    SeriesCheck(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Cover exponents a (comma-separated integers).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Option<Vec<i64>>,
    /// Cover exponents b (comma-separated integers).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub b: Option<Vec<i64>>,
    /// Cover degree m.
    #[arg(long)]
    pub m: Option<u64>,
    /// Parameters alpha (comma-separated rationals).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Option<Vec<Rational>>,
    /// Parameters beta (comma-separated rationals).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub beta: Option<Vec<Rational>>,
    /// Characteristic.
    #[arg(long)]
    pub p: Option<u64>,
    /// Extension degree, q = p^r.
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    /// Run over every field F_q with q ≤ q-max instead of a single --p.
    #[arg(long = "q-max")]
    pub q_max: Option<u64>,
    /// t as a rational "n/d" or a field element "[c0,c1,...]".
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<TValue>,
    /// Working precision in bits; only 53 (f64) is supported.
    #[arg(long = "precision-bits", default_value_t = 53)]
    pub precision_bits: u32,
    /// Series order (zeta: default 4; series-check: default 24).
    #[arg(long = "series-order")]
    pub series_order: Option<usize>,
    /// Write records to this path instead of stdout.
    #[arg(long)]
    pub out: Option<String>,
    /// Suites to run (comma-separated); all when omitted.
    #[arg(long, value_delimiter = ',')]
    pub suite: Option<Vec<String>>,
    /// Record wall-clock time in each record.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational(pub Ratio<i64>);

impl FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let parse = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("bad rational {s:?}: {e}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let d = parse(d)?;
                if d == 0 {
                    return Err(format!("bad rational {s:?}: zero denominator"));
                }
                Ok(Rational(Ratio::new(parse(n)?, d)))
            }
            None => Ok(Rational(Ratio::from_integer(parse(s)?))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TValue {
    Rational(Ratio<i64>),
    Element(Vec<u32>),
}

impl FromStr for TValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
            let coeffs = inner
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| x.trim().parse::<u32>().map_err(|e| format!("bad field element {s:?}: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(TValue::Element(coeffs));
        }
        Ok(TValue::Rational(s.parse::<Rational>()?.0))
    }
}

impl TValue {
    pub fn describe(&self) -> String {
        match self {
            TValue::Rational(r) => r.to_string(),
            TValue::Element(c) => format!("{c:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_t() {
        assert_eq!("3/4".parse::<TValue>().unwrap(), TValue::Rational(Ratio::new(3, 4)));
        assert_eq!("-2".parse::<TValue>().unwrap(), TValue::Rational(Ratio::from_integer(-2)));
        assert_eq!("[1, 2]".parse::<TValue>().unwrap(), TValue::Element(vec![1, 2]));
        assert!("1/0".parse::<TValue>().is_err());
        assert!("[a]".parse::<TValue>().is_err());
    }
}
