use crate::error::{Error, Result};
use crate::monomial::binomial;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// A projective variety whose secant varieties are studied.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VarietySpec {
    /// `nu_d(P^n)`.
    Veronese { n: usize, d: u32 },
    /// `P^{n_1} x ... x P^{n_t}`.
    Segre { dims: Vec<usize> },
    /// `P^{n_1} x ... x P^{n_t}` embedded by `O(d_1, ..., d_t)`.
    SegreVeronese { dims: Vec<usize>, degrees: Vec<u32> },
    /// `G(k, n)`: projective `k`-planes in `P^n`, in its Plücker embedding.
    Grassmannian { k: usize, n: usize },
    /// Products `L_1^{d_1} ... L_t^{d_t}` of powers of linear forms on `P^n`.
    Chow { n: usize, partition: Vec<u32> },
    /// `k`-th powers of forms of degree `d / k` on `P^n`.
    Powers { n: usize, k: u32, d: u32 },
    /// Tangential variety of `nu_d(P^n)`: forms `L^{d-1} M`.
    TangentialVeronese { n: usize, d: u32 },
}

fn big(v: u64) -> Result<u64> {
    if v > 1 << 40 {
        return Err(Error::Argument("ambient space too large".into()));
    }
    Ok(v)
}

impl VarietySpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Argument(m.to_string()));
        match self {
            VarietySpec::Veronese { n, d } if *n == 0 || *d == 0 => bad("veronese needs n >= 1 and d >= 1"),
            VarietySpec::Segre { dims } if dims.is_empty() || dims.contains(&0) => {
                bad("segre needs at least one factor, each of dimension >= 1")
            }
            VarietySpec::SegreVeronese { dims, degrees }
                if dims.is_empty() || dims.len() != degrees.len() || dims.contains(&0) || degrees.contains(&0) =>
            {
                bad("segre-veronese needs matching positive dimensions and degrees")
            }
            VarietySpec::Grassmannian { k, n } if k >= n => bad("grassmannian needs k < n"),
            VarietySpec::Chow { n, partition } if *n == 0 || partition.is_empty() || partition.contains(&0) => {
                bad("chow needs n >= 1 and a partition of positive parts")
            }
            VarietySpec::Powers { n, k, d } if *n == 0 || *k < 2 || *d == 0 || d % k != 0 => {
                bad("powers needs n >= 1, k >= 2 and k dividing d")
            }
            VarietySpec::TangentialVeronese { n, d } if *n == 0 || *d < 2 => bad("tangential needs n >= 1 and d >= 2"),
            _ => Ok(()),
        }?;
        big(self.ambient_dim() + 1).map(|_| ())
    }

    /// Projective dimension `N` of the ambient space.
    pub fn ambient_dim(&self) -> u64 {
        let forms = |n: usize, d: u32| binomial(n as i64 + d as i64, n as i64);
        let dim = match self {
            VarietySpec::Veronese { n, d } | VarietySpec::Powers { n, d, .. } | VarietySpec::TangentialVeronese { n, d } => {
                forms(*n, *d)
            }
            VarietySpec::Segre { dims } => dims.iter().map(|&n| n as u64 + 1).product(),
            VarietySpec::SegreVeronese { dims, degrees } => dims.iter().zip(degrees).map(|(&n, &d)| forms(n, d)).product(),
            VarietySpec::Grassmannian { k, n } => binomial(*n as i64 + 1, *k as i64 + 1),
            VarietySpec::Chow { n, partition } => forms(*n, partition.iter().sum()),
        };
        dim - 1
    }

    /// Dimension of the variety itself.
    pub fn dim(&self) -> u64 {
        match self {
            VarietySpec::Veronese { n, .. } => *n as u64,
            VarietySpec::Segre { dims } | VarietySpec::SegreVeronese { dims, .. } => dims.iter().sum::<usize>() as u64,
            VarietySpec::Grassmannian { k, n } => ((k + 1) * (n - k)) as u64,
            VarietySpec::Chow { n, partition } => (n * partition.len()) as u64,
            VarietySpec::Powers { n, k, d } => binomial(*n as i64 + (d / k) as i64, *n as i64) - 1,
            VarietySpec::TangentialVeronese { n, .. } => 2 * *n as u64,
        }
        .min(self.ambient_dim())
    }

    /// `min{N, s (dim X + 1) - 1}`.
    pub fn expected_secant_dim(&self, s: u64) -> u64 {
        (s * (self.dim() + 1)).saturating_sub(1).min(self.ambient_dim())
    }
}

fn list<T: fmt::Display>(v: &[T], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for VarietySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietySpec::Veronese { n, d } => write!(f, "veronese:{n},{d}"),
            VarietySpec::Segre { dims } => write!(f, "segre:{}", list(dims, "x")),
            VarietySpec::SegreVeronese { dims, degrees } => {
                write!(f, "segre-veronese:{};{}", list(dims, ","), list(degrees, ","))
            }
            VarietySpec::Grassmannian { k, n } => write!(f, "grass:{k},{n}"),
            VarietySpec::Chow { n, partition } => write!(f, "chow:{n};{}", list(partition, ",")),
            VarietySpec::Powers { n, k, d } => write!(f, "powers:{n},{k},{d}"),
            VarietySpec::TangentialVeronese { n, d } => write!(f, "tangential:{n},{d}"),
        }
    }
}

fn numbers<T: FromStr>(s: &str, sep: char, what: &str) -> Result<Vec<T>> {
    s.split(sep)
        .map(|t| {
            t.trim()
                .parse::<T>()
                .map_err(|_| Error::Argument(format!("invalid number {t:?} in {what}")))
        })
        .collect()
}

fn exactly<T: Copy, const K: usize>(v: Vec<T>, what: &str) -> Result<[T; K]> {
    <[T; K]>::try_from(v).map_err(|_| Error::Argument(format!("{what} expects {K} numbers")))
}

impl FromStr for VarietySpec {
    type Err = Error;

    /// `veronese:n,d`, `segre:n1xn2x...`, `segre-veronese:n1,..;d1,..`,
    /// `grass:k,n`, `chow:n;d1,..`, `powers:n,k,d`, `tangential:n,d`.
    fn from_str(text: &str) -> Result<Self> {
        let (kind, args) = text
            .split_once(':')
            .ok_or_else(|| Error::Argument(format!("variety spec {text:?} lacks a ':'")))?;
        let spec = match kind.trim() {
            "veronese" => {
                let [n, d] = exactly(numbers::<u64>(args, ',', kind)?, kind)?;
                VarietySpec::Veronese { n: n as usize, d: d as u32 }
            }
            "segre" => VarietySpec::Segre { dims: numbers(args, 'x', kind)? },
            "segre-veronese" => {
                let (a, b) = args
                    .split_once(';')
                    .ok_or_else(|| Error::Argument("segre-veronese expects dims;degrees".into()))?;
                VarietySpec::SegreVeronese { dims: numbers(a, ',', kind)?, degrees: numbers(b, ',', kind)? }
            }
            "grass" => {
                let [k, n] = exactly(numbers::<usize>(args, ',', kind)?, kind)?;
                VarietySpec::Grassmannian { k, n }
            }
            "chow" => {
                let (a, b) = args
                    .split_once(';')
                    .ok_or_else(|| Error::Argument("chow expects n;d1,..,dt".into()))?;
                let [n] = exactly(numbers::<usize>(a, ',', kind)?, kind)?;
                let mut partition: Vec<u32> = numbers(b, ',', kind)?;
                partition.sort_unstable_by(|x, y| y.cmp(x));
                VarietySpec::Chow { n, partition }
            }
            "powers" => {
                let [n, k, d] = exactly(numbers::<u64>(args, ',', kind)?, kind)?;
                VarietySpec::Powers { n: n as usize, k: k as u32, d: d as u32 }
            }
            "tangential" => {
                let [n, d] = exactly(numbers::<u64>(args, ',', kind)?, kind)?;
                VarietySpec::TangentialVeronese { n: n as usize, d: d as u32 }
            }
            other => return Err(Error::Argument(format!("unknown variety kind {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_dimensions() {
        let cases = [
            ("veronese:2,2", 5, 2),
            ("segre:1x1x1x1", 15, 4),
            ("segre-veronese:1,1;2,2", 8, 2),
            ("grass:2,6", 34, 12),
            ("chow:2;2,1", 9, 4),
            ("powers:1,2,4", 4, 2),
            ("tangential:2,3", 9, 4),
        ];
        for (text, n, dim) in cases {
            let spec: VarietySpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
            assert_eq!((spec.ambient_dim(), spec.dim()), (n, dim), "{text}");
        }
        assert!("veronese:2".parse::<VarietySpec>().is_err());
        assert!("powers:2,3,4".parse::<VarietySpec>().is_err());
        assert!("grass:3,3".parse::<VarietySpec>().is_err());
    }

    #[test]
    fn expected_dimensions() {
        let v: VarietySpec = "veronese:4,3".parse().unwrap();
        assert_eq!(v.expected_secant_dim(7), 34);
        let g: VarietySpec = "grass:2,6".parse().unwrap();
        assert_eq!(g.expected_secant_dim(3), 34);
        assert_eq!(g.expected_secant_dim(1), g.dim());
    }
}
