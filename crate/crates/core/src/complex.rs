//! Simplicial complexes, the order-complex and face-poset functors, and the
//! integer chain complex of a simplicial complex.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poset::{is_order_preserving, Poset, PosetMap};

/// Sorted, duplicate-free vertex list.
pub type Simplex = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl SimplicialComplex {
    /// The downward closure of `simplices` on vertices `0..labels.len()`.
    /// Every vertex is a 0-simplex even if no listed simplex mentions it.
    pub fn from_simplices<I>(labels: Vec<String>, simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let n = labels.len();
        let mut all: std::collections::BTreeSet<Simplex> = (0..n).map(|v| vec![v]).collect();
        for mut s in simplices {
            if s.is_empty() {
                return Err(Error::InvalidMap("empty simplex".into()));
            }
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidMap(format!("repeated vertex in {s:?}")));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= n) {
                return Err(Error::NotFound(format!("vertex #{v}")));
            }
            if all.contains(&s) {
                continue;
            }
            // All non-empty subsets; simplices here are small.
            let k = s.len();
            for mask in 1u64..(1u64 << k) {
                let face: Simplex = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                all.insert(face);
            }
        }
        Ok(Self::from_closed(labels, all.into_iter()))
    }

    fn from_closed(labels: Vec<String>, simplices: impl Iterator<Item = Simplex>) -> Self {
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for s in simplices {
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(s);
        }
        for layer in &mut by_dim {
            layer.sort();
        }
        let index = by_dim
            .iter()
            .map(|layer| layer.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        SimplicialComplex {
            labels,
            by_dim,
            index,
        }
    }

    /// The path `v_0 - v_1 - ... - v_n`: a triangulated interval with `n` edges.
    pub fn interval_triangulation(n: usize) -> Self {
        let labels = (0..=n).map(|i| format!("v{i}")).collect();
        Self::from_simplices(labels, (0..n).map(|i| vec![i, i + 1])).expect("path complex")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Top dimension; `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn simplices(&self, dim: usize) -> &[Simplex] {
        self.by_dim.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices(dim).len()
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// All simplices ordered by dimension, then lexicographically.
    pub fn all_simplices(&self) -> Vec<Simplex> {
        self.by_dim.iter().flatten().cloned().collect()
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s.len().checked_sub(1)?)?.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index_of(s).is_some()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, l)| {
                if d % 2 == 0 {
                    l.len() as i64
                } else {
                    -(l.len() as i64)
                }
            })
            .sum()
    }

    pub fn chain_complex(&self) -> ChainComplex {
        ChainComplex::of(self)
    }
}

/// The order complex: one simplex per non-empty chain of `p`.
pub fn order_complex(p: &Poset) -> SimplicialComplex {
    let chains = p.chains().into_iter().map(|mut c| {
        c.sort_unstable();
        c
    });
    SimplicialComplex::from_closed(p.labels().to_vec(), chains)
}

/// The poset of simplices ordered by inclusion. Element `i` is
/// `simplices[i]`, in the order of [`SimplicialComplex::all_simplices`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePoset {
    pub poset: Poset,
    pub simplices: Vec<Simplex>,
}

fn is_face(s: &[usize], t: &[usize]) -> bool {
    s.iter().all(|v| t.binary_search(v).is_ok())
}

pub fn face_poset(k: &SimplicialComplex) -> FacePoset {
    let simplices = k.all_simplices();
    let labels = simplices
        .iter()
        .map(|s| {
            let names: Vec<&str> = s.iter().map(|&v| k.labels[v].as_str()).collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    // Strict inclusions between consecutive dimensions generate the order.
    let mut relation = Vec::new();
    let mut offset = 0;
    for d in 1..k.by_dim.len() {
        let lower = offset;
        offset += k.by_dim[d - 1].len();
        for (j, t) in k.by_dim[d].iter().enumerate() {
            for (i, s) in k.by_dim[d - 1].iter().enumerate() {
                if is_face(s, t) {
                    relation.push((lower + i, offset + j));
                }
            }
        }
    }
    let poset = Poset::from_relation(labels, relation).expect("inclusion is a partial order");
    FacePoset { poset, simplices }
}

/// A simplicial map given on vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    pub vertex_images: Vec<usize>,
}

impl SimplicialMap {
    /// Image vertex set of `s`, sorted and deduplicated.
    pub fn image(&self, s: &[usize]) -> Simplex {
        let mut img: Simplex = s.iter().map(|&v| self.vertex_images[v]).collect();
        img.sort_unstable();
        img.dedup();
        img
    }

    /// Checks that every simplex of `domain` lands on a simplex of `codomain`.
    pub fn validate(&self, domain: &SimplicialComplex, codomain: &SimplicialComplex) -> Result<()> {
        if self.vertex_images.len() != domain.vertex_count() {
            return Err(Error::InvalidMap(format!(
                "{} vertex images for {} vertices",
                self.vertex_images.len(),
                domain.vertex_count()
            )));
        }
        for s in domain.by_dim.iter().flatten() {
            let img = self.image(s);
            if !codomain.contains(&img) {
                return Err(Error::InvalidMap(format!(
                    "simplex {s:?} maps to {img:?}, which is not a simplex"
                )));
            }
        }
        Ok(())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMap) -> SimplicialMap {
        SimplicialMap {
            vertex_images: self
                .vertex_images
                .iter()
                .map(|&v| other.vertex_images[v])
                .collect(),
        }
    }

    /// The chain map in dimension `dim` as an integer matrix with rows
    /// indexed by `codomain` simplices. Degenerate images map to zero.
    pub fn chain_matrix(
        &self,
        domain: &SimplicialComplex,
        codomain: &SimplicialComplex,
        dim: usize,
    ) -> Matrix<i64> {
        let mut m = Matrix::zeros(codomain.count(dim), domain.count(dim));
        for (j, s) in domain.simplices(dim).iter().enumerate() {
            let mut img: Vec<usize> = s.iter().map(|&v| self.vertex_images[v]).collect();
            let sign = sort_with_sign(&mut img);
            if img.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let i = codomain
                .index_of(&img)
                .expect("validated simplicial map lands on simplices");
            m[(i, j)] = sign;
        }
        m
    }
}

/// Sorts in place and returns the sign of the sorting permutation.
fn sort_with_sign(v: &mut [usize]) -> i64 {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

/// `K(f)`: an order-preserving map sends chains to chains, so it is simplicial
/// on order complexes with the same vertex assignment.
pub fn induced_simplicial_map(x: &Poset, y: &Poset, f: &PosetMap) -> Result<SimplicialMap> {
    if let Some(v) = is_order_preserving(x, y, f)? {
        return Err(Error::InvalidMap(format!(
            "{} <= {} but their images are not ordered",
            x.label(v.lower),
            x.label(v.upper)
        )));
    }
    Ok(SimplicialMap {
        vertex_images: f.images.clone(),
    })
}

/// `X(g)`: `σ -> g(σ)` between face posets, indexed as in [`face_poset`].
pub fn induced_poset_map(
    k: &SimplicialComplex,
    n: &SimplicialComplex,
    g: &SimplicialMap,
) -> Result<PosetMap> {
    g.validate(k, n)?;
    let mut offsets = vec![0usize];
    for d in 0..n.by_dim.len() {
        offsets.push(offsets[d] + n.by_dim[d].len());
    }
    let images = k
        .by_dim
        .iter()
        .flatten()
        .map(|s| {
            let img = g.image(s);
            offsets[img.len() - 1] + n.index_of(&img).expect("validated")
        })
        .collect();
    Ok(PosetMap::new(images))
}

/// Boundary matrices `∂_k : C_k -> C_{k-1}` for `k >= 1`, with columns
/// indexed by `k`-simplices and the sign `(-1)^i` for dropping vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub ranks: Vec<usize>,
    boundaries: Vec<Matrix<i64>>,
}

impl ChainComplex {
    pub fn of(k: &SimplicialComplex) -> Self {
        let ranks: Vec<usize> = k.by_dim.iter().map(Vec::len).collect();
        let mut boundaries = Vec::new();
        for d in 1..k.by_dim.len() {
            let mut m = Matrix::zeros(ranks[d - 1], ranks[d]);
            for (j, s) in k.by_dim[d].iter().enumerate() {
                for i in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(i);
                    let row = k.index[d - 1][&face];
                    m[(row, j)] = if i % 2 == 0 { 1 } else { -1 };
                }
            }
            boundaries.push(m);
        }
        ChainComplex { ranks, boundaries }
    }

    /// Highest dimension with chains, `None` when empty.
    pub fn top_dim(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    /// `∂_k` for `k >= 1`; a zero matrix of the right shape outside the range.
    pub fn boundary(&self, k: usize) -> Matrix<i64> {
        assert!(k >= 1, "use augmentation() for degree 0");
        self.boundaries
            .get(k - 1)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.rank(k - 1), self.rank(k)))
    }

    /// `ε : C_0 -> Z`, the all-ones row.
    pub fn augmentation(&self) -> Matrix<i64> {
        Matrix::from_fn(1, self.rank(0), |_, _| 1)
    }

    /// Checks `∂_{k-1} ∂_k = 0` for all `k`, and `ε ∂_1 = 0`.
    pub fn is_valid(&self) -> bool {
        if !self.boundaries.is_empty() && !self.augmentation().mul(&self.boundaries[0]).is_zero() {
            return false;
        }
        self.boundaries.windows(2).all(|w| w[0].mul(&w[1]).is_zero())
    }
}
