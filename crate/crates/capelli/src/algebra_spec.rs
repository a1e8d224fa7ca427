//! Named-algebra syntax: `full:<n>`, `E:<l>,<m>`, `T:<l>,<m>`,
//! `blocks:<l1>,<l2>,...`, `twisted:<l>`, `diagonal:<n>`, `scalars:<n>` and
//! `file:<path>` (generators in the matrix JSON encoding, closed on load).

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use capelli_core::algebra::{
    closure, make_block_upper, make_diagonal, make_e, make_full, make_scalars, make_t,
    make_twisted_diagonal,
};
use capelli_core::AlgebraBasis;

use crate::error::CliError;
use crate::json::{decode_matrices, read_file, JsonField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraSpec {
    Full(usize),
    E(usize, usize),
    T(usize, usize),
    Blocks(Vec<usize>),
    Twisted(usize),
    Diagonal(usize),
    Scalars(usize),
    File(PathBuf),
}

fn sizes(s: &str, what: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .ok()
                .filter(|&k| k > 0)
                .ok_or_else(|| {
                    CliError::Usage(format!("{what}: expected positive integers, got {s:?}"))
                })
        })
        .collect()
}

fn exactly<const K: usize>(s: &str, what: &str) -> Result<[usize; K], CliError> {
    let v = sizes(s, what)?;
    v.try_into().map_err(|_| {
        CliError::Usage(format!(
            "{what}: expected {K} comma-separated sizes, got {s:?}"
        ))
    })
}

impl FromStr for AlgebraSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("algebra spec {s:?} has no ':'")))?;
        Ok(match kind {
            "full" => AlgebraSpec::Full(exactly::<1>(rest, s)?[0]),
            "E" => {
                let [l, m] = exactly(rest, s)?;
                AlgebraSpec::E(l, m)
            }
            "T" => {
                let [l, m] = exactly(rest, s)?;
                AlgebraSpec::T(l, m)
            }
            "blocks" => AlgebraSpec::Blocks(sizes(rest, s)?),
            "twisted" => AlgebraSpec::Twisted(exactly::<1>(rest, s)?[0]),
            "diagonal" => AlgebraSpec::Diagonal(exactly::<1>(rest, s)?[0]),
            "scalars" => AlgebraSpec::Scalars(exactly::<1>(rest, s)?[0]),
            "file" if !rest.is_empty() => AlgebraSpec::File(PathBuf::from(rest)),
            _ => return Err(CliError::Usage(format!("unknown algebra spec {s:?}"))),
        })
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraSpec::Full(n) => write!(f, "full:{n}"),
            AlgebraSpec::E(l, m) => write!(f, "E:{l},{m}"),
            AlgebraSpec::T(l, m) => write!(f, "T:{l},{m}"),
            AlgebraSpec::Blocks(b) => {
                let parts: Vec<String> = b.iter().map(|k| k.to_string()).collect();
                write!(f, "blocks:{}", parts.join(","))
            }
            AlgebraSpec::Twisted(l) => write!(f, "twisted:{l}"),
            AlgebraSpec::Diagonal(n) => write!(f, "diagonal:{n}"),
            AlgebraSpec::Scalars(n) => write!(f, "scalars:{n}"),
            AlgebraSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl AlgebraSpec {
    pub fn build<F: JsonField>(&self, field: &F) -> Result<AlgebraBasis<F>, CliError> {
        Ok(match self {
            AlgebraSpec::Full(n) => make_full(field, *n)?,
            AlgebraSpec::E(l, m) => make_e(field, *l, *m)?,
            AlgebraSpec::T(l, m) => make_t(field, *l, *m)?,
            AlgebraSpec::Blocks(b) => make_block_upper(field, b)?,
            AlgebraSpec::Twisted(l) => make_twisted_diagonal(field, *l)?,
            AlgebraSpec::Diagonal(n) => make_diagonal(field, *n)?,
            AlgebraSpec::Scalars(n) => make_scalars(field, *n)?,
            AlgebraSpec::File(path) => {
                let file = read_file(path)?;
                let gens = decode_matrices(field, &file)?;
                closure(field, file.n, &gens, false)?.with_name(self.to_string())
            }
        })
    }
}
