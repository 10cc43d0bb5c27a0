//! Generator and phase-1 spec grammars.
//!
//! Generator: `name:key=value,key=value` with names `blobs` and
//! `moons`. Phase-1: `kmeans:k=3` or `dbscan:eps=0.3,min_pts=5`.

use std::collections::BTreeMap;

use bacteria_farm::{
    gen_blobs, gen_moons, Dataset64, DbscanParams, Error, KMeansParams, Phase1, Result,
};

#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    Blobs {
        n: usize,
        k: usize,
        spread: f64,
        dim: usize,
        seed: u64,
    },
    Moons {
        n: usize,
        jitter: f64,
        seed: u64,
    },
}

fn key_values(body: &str, what: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for part in body.split(',') {
        if part.is_empty() {
            continue;
        }
        let (key, value) = part.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("{what}: expected key=value, got {part:?}"))
        })?;
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(Error::InvalidArgument(format!(
                "{what}: duplicate key {key:?}"
            )));
        }
    }
    Ok(map)
}

fn take<T: std::str::FromStr>(
    map: &mut BTreeMap<String, String>,
    key: &str,
    what: &str,
) -> Result<Option<T>> {
    match map.remove(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|_| Error::InvalidArgument(format!("{what}: bad value for {key}: {raw:?}"))),
    }
}

fn require<T>(value: Option<T>, key: &str, what: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidArgument(format!("{what}: missing required key {key}")))
}

fn reject_leftovers(map: &BTreeMap<String, String>, what: &str) -> Result<()> {
    if let Some(key) = map.keys().next() {
        return Err(Error::InvalidArgument(format!(
            "{what}: unknown key {key:?}"
        )));
    }
    Ok(())
}

impl GenSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let (name, body) = s.split_once(':').unwrap_or((s, ""));
        let what = format!("generator spec {s:?}");
        let mut map = key_values(body, &what)?;
        let spec = match name {
            "blobs" => GenSpec::Blobs {
                n: require(take(&mut map, "n", &what)?, "n", &what)?,
                k: require(take(&mut map, "k", &what)?, "k", &what)?,
                spread: require(take(&mut map, "spread", &what)?, "spread", &what)?,
                dim: take(&mut map, "dim", &what)?.unwrap_or(2),
                seed: take(&mut map, "seed", &what)?.unwrap_or(0),
            },
            "moons" => GenSpec::Moons {
                n: require(take(&mut map, "n", &what)?, "n", &what)?,
                jitter: take(&mut map, "jitter", &what)?.unwrap_or(0.05),
                seed: take(&mut map, "seed", &what)?.unwrap_or(0),
            },
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown generator {other:?}; expected blobs or moons"
                )))
            }
        };
        reject_leftovers(&map, &what)?;
        Ok(spec)
    }

    pub fn generate(&self) -> Result<Dataset64> {
        match *self {
            GenSpec::Blobs {
                n,
                k,
                spread,
                dim,
                seed,
            } => Ok(gen_blobs(n, k, dim, spread, seed)?.0),
            GenSpec::Moons { n, jitter, seed } => gen_moons(n, jitter, seed),
        }
    }

    /// The natural cluster count, used as the default k for k-means
    /// and phase-1 seeding.
    pub fn default_k(&self) -> usize {
        match self {
            GenSpec::Blobs { k, .. } => *k,
            GenSpec::Moons { .. } => 2,
        }
    }
}

/// Parses a phase-1 spec. The seed threads into k-means so the whole
/// pipeline stays deterministic under one `--seed`.
pub fn parse_phase1(s: &str, seed: u64) -> Result<Phase1> {
    let (name, body) = s.split_once(':').unwrap_or((s, ""));
    let what = format!("phase-1 spec {s:?}");
    let mut map = key_values(body, &what)?;
    let phase1 = match name {
        "kmeans" => {
            let k = require(take(&mut map, "k", &what)?, "k", &what)?;
            Phase1::KMeans(KMeansParams::new(k).with_seed(seed))
        }
        "dbscan" => {
            let eps = require(take(&mut map, "eps", &what)?, "eps", &what)?;
            let min_pts = take(&mut map, "min_pts", &what)?.unwrap_or(5);
            Phase1::Dbscan(DbscanParams::new(eps, min_pts))
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown phase-1 algorithm {other:?}; expected kmeans or dbscan"
            )))
        }
    };
    reject_leftovers(&map, &what)?;
    Ok(phase1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blobs_spec_round_trip() {
        let spec = GenSpec::parse("blobs:n=300,k=3,spread=0.5").unwrap();
        assert_eq!(
            spec,
            GenSpec::Blobs {
                n: 300,
                k: 3,
                spread: 0.5,
                dim: 2,
                seed: 0
            }
        );
        let ds = spec.generate().unwrap();
        assert_eq!(ds.n(), 300);
        assert_eq!(ds.dim(), 2);
        assert_eq!(spec.default_k(), 3);
    }

    #[test]
    fn blobs_spec_with_dim_and_seed() {
        let spec = GenSpec::parse("blobs:n=150,k=3,spread=0.4,dim=4,seed=9").unwrap();
        let ds = spec.generate().unwrap();
        assert_eq!((ds.n(), ds.dim()), (150, 4));
    }

    #[test]
    fn moons_spec_defaults() {
        let spec = GenSpec::parse("moons:n=400").unwrap();
        assert_eq!(
            spec,
            GenSpec::Moons {
                n: 400,
                jitter: 0.05,
                seed: 0
            }
        );
        assert_eq!(spec.default_k(), 2);
    }

    #[test]
    fn bad_specs_are_rejected() {
        for s in [
            "rings:n=10",
            "blobs:n=10,k=2",          // missing spread
            "blobs:n=10,k=2,spread=x", // bad number
            "blobs:n=10,k=2,spread=0.5,blur=1",
            "blobs:n=10,k=2,spread=0.5,n=20",
            "blobs:n",
        ] {
            assert!(GenSpec::parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn phase1_specs_parse() {
        assert!(matches!(
            parse_phase1("kmeans:k=3", 1).unwrap(),
            Phase1::KMeans(_)
        ));
        assert!(matches!(
            parse_phase1("dbscan:eps=0.3,min_pts=4", 1).unwrap(),
            Phase1::Dbscan(_)
        ));
        assert!(matches!(
            parse_phase1("dbscan:eps=0.3", 1).unwrap(),
            Phase1::Dbscan(DbscanParams { min_pts: 5, .. })
        ));
        assert!(parse_phase1("kmeans", 1).is_err());
        assert!(parse_phase1("spectral:k=2", 1).is_err());
    }
}
