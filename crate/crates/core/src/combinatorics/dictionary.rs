use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use super::space::{hamming, SearchSpace};
use super::wavelet::binary_wavelet_matrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DictionaryKind {
    DiverseRandomBinary,
    DiverseRandomCategorical,
    NaiveRandom,
    BinaryWavelet,
    Explicit,
}

/// Which construction a BO run uses to draw its per-iteration dictionary.
///
/// `DiverseRandom` picks the binary algorithm on binary spaces and the
/// simplex-based categorical algorithm otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DictionaryStrategy {
    DiverseRandom,
    NaiveRandom,
    BinaryWavelet,
}

impl DictionaryStrategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            DictionaryStrategy::DiverseRandom => "diverse_random",
            DictionaryStrategy::NaiveRandom => "naive_random",
            DictionaryStrategy::BinaryWavelet => "binary_wavelet",
        }
    }
}

impl std::str::FromStr for DictionaryStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diverse_random" | "diverse" => Ok(Self::DiverseRandom),
            "naive_random" | "naive" => Ok(Self::NaiveRandom),
            "binary_wavelet" | "wavelet" => Ok(Self::BinaryWavelet),
            other => Err(Error::InvalidParameter(format!("unknown dictionary kind '{other}'"))),
        }
    }
}

/// Hamming-distance feature vector of one discrete input.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    pub values: Vec<f64>,
}

impl Embedding {
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The anchor set: `m` rows, each a valid discrete point of the space.
#[derive(Clone, Debug, PartialEq)]
pub struct Dictionary {
    entries: Vec<usize>,
    m: usize,
    cardinalities: Vec<usize>,
    kind: DictionaryKind,
    seed: u64,
}

impl Dictionary {
    pub fn new(space: &SearchSpace, rows: Vec<Vec<usize>>, kind: DictionaryKind, seed: u64) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidParameter("dictionary needs at least one row".into()));
        }
        let mut entries = Vec::with_capacity(rows.len() * space.dim());
        for row in &rows {
            space.validate_discrete(row)?;
            entries.extend_from_slice(row);
        }
        Ok(Self { entries, m: rows.len(), cardinalities: space.cardinalities().to_vec(), kind, seed })
    }

    /// A user-supplied dictionary.
    pub fn explicit(space: &SearchSpace, rows: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(space, rows, DictionaryKind::Explicit, 0)
    }

    fn from_flat(space: &SearchSpace, entries: Vec<usize>, kind: DictionaryKind, seed: u64) -> Self {
        let m = entries.len() / space.dim();
        debug_assert!(m >= 1 && entries.len() == m * space.dim());
        Self { entries, m, cardinalities: space.cardinalities().to_vec(), kind, seed }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.cardinalities.len()
    }

    pub fn kind(&self) -> DictionaryKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cardinalities
    }

    pub fn is_binary(&self) -> bool {
        self.cardinalities.iter().all(|&t| t == 2)
    }

    pub fn row(&self, i: usize) -> &[usize] {
        let d = self.d();
        &self.entries[i * d..(i + 1) * d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.entries.chunks_exact(self.d())
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        self.rows().map(<[usize]>::to_vec).collect()
    }

    fn check_input(&self, z: &[usize]) -> Result<()> {
        if z.len() != self.d() {
            return Err(Error::Dimension { expected: self.d(), got: z.len() });
        }
        if let Some(j) = z.iter().zip(&self.cardinalities).position(|(&v, &t)| v >= t) {
            return Err(Error::Domain(format!("category {} of variable {j} out of range", z[j])));
        }
        Ok(())
    }

    /// `φ_A(z)`: Hamming distance from `z` to every row.
    pub fn embed(&self, z: &[usize]) -> Result<Embedding> {
        self.check_input(z)?;
        let mut values = vec![0.0; self.m];
        self.embed_into(z, &mut values);
        Ok(Embedding { values })
    }

    /// Unchecked embedding into a caller-provided buffer of length `m`.
    pub fn embed_into(&self, z: &[usize], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(self.rows()) {
            *o = hamming(row, z) as f64;
        }
    }

    /// Adjusts an embedding in place for coordinate `coord` switching from
    /// category `from` to category `to`. Each component moves by at most one.
    pub fn update_embedding(&self, embedding: &mut [f64], coord: usize, from: usize, to: usize) {
        if from == to {
            return;
        }
        let d = self.d();
        for (i, e) in embedding.iter_mut().enumerate() {
            let a = self.entries[i * d + coord];
            if a == from {
                *e += 1.0;
            } else if a == to {
                *e -= 1.0;
            }
        }
    }

    /// The embedding computed through the ±1 encoding:
    /// `(d·1 − Ā z̄) / 2` with `ā = 2a − 1`, `z̄ = 2z − 1`.
    pub fn embed_affine(&self, z: &[usize]) -> Result<Embedding> {
        if !self.is_binary() {
            return Err(Error::UnsupportedSpace("affine embedding requires a binary space".into()));
        }
        self.check_input(z)?;
        let d = self.d() as i64;
        let zbar: Vec<i64> = z.iter().map(|&v| 2 * v as i64 - 1).collect();
        let values = self
            .rows()
            .map(|row| {
                let dot: i64 = row.iter().zip(&zbar).map(|(&a, &zb)| (2 * a as i64 - 1) * zb).sum();
                debug_assert_eq!((d - dot) % 2, 0);
                ((d - dot) / 2) as f64
            })
            .collect();
        Ok(Embedding { values })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&DictionaryDoc {
            kind: self.kind,
            seed: self.seed,
            m: self.m,
            d: self.d(),
            rows: self.to_rows(),
        })?)
    }

    pub fn from_json(text: &str, space: &SearchSpace) -> Result<Self> {
        let doc: DictionaryDoc = serde_json::from_str(text)?;
        if doc.d != space.dim() {
            return Err(Error::Dimension { expected: space.dim(), got: doc.d });
        }
        if doc.m != doc.rows.len() {
            return Err(Error::InvalidParameter(format!(
                "dictionary declares m = {} but has {} rows",
                doc.m,
                doc.rows.len()
            )));
        }
        Self::new(space, doc.rows, doc.kind, doc.seed)
    }
}

/// On-disk form of a dictionary.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DictionaryDoc {
    pub kind: DictionaryKind,
    pub seed: u64,
    pub m: usize,
    pub d: usize,
    pub rows: Vec<Vec<usize>>,
}

fn check_size(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter("dictionary size m must be >= 1".into()));
    }
    Ok(())
}

/// Rows drawn Bernoulli(θ_i) with a fresh θ_i ~ Uniform(0, 1) per row.
pub fn build_diverse_random_binary(d: usize, m: usize, seed: u64) -> Result<Dictionary> {
    check_size(m)?;
    let space = SearchSpace::binary(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(m * d);
    for _ in 0..m {
        let theta: f64 = rng.gen();
        entries.extend((0..d).map(|_| usize::from(rng.gen::<f64>() < theta)));
    }
    Ok(Dictionary::from_flat(&space, entries, DictionaryKind::DiverseRandomBinary, seed))
}

/// Categorical generalisation: each row draws a weight vector from the
/// `τ_max`-simplex, and each variable takes `τ_j` of those weights (without
/// replacement, renormalised) as its category distribution.
pub fn build_diverse_random_categorical(space: &SearchSpace, m: usize, seed: u64) -> Result<Dictionary> {
    check_size(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau_max = space.max_cardinality();
    let mut entries = Vec::with_capacity(m * space.dim());
    let mut theta = vec![0.0; tau_max];
    for _ in 0..m {
        // uniform Dirichlet(1, ..., 1) via normalised exponentials
        for t in theta.iter_mut() {
            *t = Exp1.sample(&mut rng);
        }
        let total: f64 = theta.iter().sum();
        theta.iter_mut().for_each(|t| *t /= total);

        for &tau in space.cardinalities() {
            // the chosen subset keeps θ's order, so τ_j = τ_max reuses θ as is
            let mut picked = index::sample(&mut rng, tau_max, tau).into_vec();
            picked.sort_unstable();
            let weights: Vec<f64> = picked.iter().map(|&k| theta[k]).collect();
            let norm: f64 = weights.iter().sum();
            let u = rng.gen::<f64>() * norm;
            let mut acc = 0.0;
            let mut category = tau - 1;
            for (c, w) in weights.iter().enumerate() {
                acc += w;
                if u < acc {
                    category = c;
                    break;
                }
            }
            entries.push(category);
        }
    }
    Ok(Dictionary::from_flat(space, entries, DictionaryKind::DiverseRandomCategorical, seed))
}

/// Every entry uniform over its category set.
pub fn build_naive_random(space: &SearchSpace, m: usize, seed: u64) -> Result<Dictionary> {
    check_size(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(m * space.dim());
    for _ in 0..m {
        entries.extend(space.sample_discrete(&mut rng));
    }
    Ok(Dictionary::from_flat(space, entries, DictionaryKind::NaiveRandom, seed))
}

/// Sub-sampled binary wavelet dictionary.
///
/// Builds `B_p` for the smallest power of two `p >= d`, keeps `d` of its
/// columns (all of them when `p == d`) and `m` of its rows. Selected indices
/// are kept in ascending order so rows stay sorted by sequency. When
/// `m > p` every row is used once and the excess is drawn with replacement.
pub fn build_wavelet_dictionary(d: usize, m: usize, seed: u64) -> Result<Dictionary> {
    check_size(m)?;
    let space = SearchSpace::binary(d)?;
    let p = d.next_power_of_two().max(2);
    let basis = binary_wavelet_matrix(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let columns: Vec<usize> = if p == d {
        (0..d).collect()
    } else {
        let mut c = index::sample(&mut rng, p, d).into_vec();
        c.sort_unstable();
        c
    };
    let rows: Vec<usize> = if m <= p {
        let mut r = index::sample(&mut rng, p, m).into_vec();
        r.sort_unstable();
        r
    } else {
        let mut r: Vec<usize> = (0..p).collect();
        r.extend((0..m - p).map(|_| rng.gen_range(0..p)));
        r
    };

    let mut entries = Vec::with_capacity(m * d);
    for &r in &rows {
        entries.extend(columns.iter().map(|&c| usize::from(basis[r][c])));
    }
    Ok(Dictionary::from_flat(&space, entries, DictionaryKind::BinaryWavelet, seed))
}

/// Dispatches to the builder matching `strategy`.
pub fn build_dictionary(strategy: DictionaryStrategy, space: &SearchSpace, m: usize, seed: u64) -> Result<Dictionary> {
    match strategy {
        DictionaryStrategy::DiverseRandom if space.is_binary() => build_diverse_random_binary(space.dim(), m, seed),
        DictionaryStrategy::DiverseRandom => build_diverse_random_categorical(space, m, seed),
        DictionaryStrategy::NaiveRandom => build_naive_random(space, m, seed),
        DictionaryStrategy::BinaryWavelet if space.is_binary() => build_wavelet_dictionary(space.dim(), m, seed),
        DictionaryStrategy::BinaryWavelet => {
            Err(Error::UnsupportedSpace("wavelet dictionaries require a binary space".into()))
        }
    }
}
