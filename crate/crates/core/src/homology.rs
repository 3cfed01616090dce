//! Integral reduced homology through Smith normal form, and rational
//! homology with explicit cycle bases for induced maps and traces.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::complex::{induced_simplicial_map, order_complex, ChainComplex, SimplicialComplex};
use crate::error::Result;
use crate::linalg::{self, Field, SmallRational};
use crate::matrix::Matrix;
use crate::poset::{Core, Poset, PosetMap};
use crate::snf::invariant_factors;

fn bigints_as_strings<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: i64,
    pub betti: usize,
    /// Invariant factors greater than one.
    #[serde(serialize_with = "bigints_as_strings")]
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroups {
    pub reduced: bool,
    pub groups: Vec<HomologyGroup>,
}

impl HomologyGroups {
    pub fn betti(&self, degree: i64) -> usize {
        self.group(degree).map_or(0, |g| g.betti)
    }

    pub fn group(&self, degree: i64) -> Option<&HomologyGroup> {
        self.groups.iter().find(|g| g.degree == degree)
    }

    pub fn is_trivial(&self) -> bool {
        self.groups.iter().all(|g| g.betti == 0 && g.torsion.is_empty())
    }
}

/// Integral homology of `k`. With `reduced`, degree 0 uses the augmentation
/// and the empty complex has `H̃_{-1} = Z`.
pub fn homology(k: &SimplicialComplex, reduced: bool) -> HomologyGroups {
    let cc = k.chain_complex();
    let Some(top) = cc.top_dim() else {
        let groups = if reduced {
            vec![HomologyGroup {
                degree: -1,
                betti: 1,
                torsion: Vec::new(),
            }]
        } else {
            Vec::new()
        };
        return HomologyGroups { reduced, groups };
    };
    // factors[d] = invariant factors of ∂_d, with ∂_0 = ε or 0.
    let mut factors: Vec<Vec<BigInt>> = Vec::with_capacity(top + 2);
    factors.push(if reduced {
        invariant_factors(&cc.augmentation())
    } else {
        Vec::new()
    });
    for d in 1..=top {
        factors.push(invariant_factors(&cc.boundary(d)));
    }
    factors.push(Vec::new());
    let groups = (0..=top)
        .map(|d| {
            let betti = cc.rank(d) - factors[d].len() - factors[d + 1].len();
            let torsion = factors[d + 1].iter().filter(|x| !x.is_one()).cloned().collect();
            HomologyGroup {
                degree: d as i64,
                betti,
                torsion,
            }
        })
        .collect();
    HomologyGroups { reduced, groups }
}

pub fn reduced_homology(k: &SimplicialComplex) -> HomologyGroups {
    homology(k, true)
}

pub fn reduced_homology_of_poset(p: &Poset) -> HomologyGroups {
    reduced_homology(&order_complex(p))
}

/// All reduced integral homology of the order complex vanishes. The empty
/// poset is not acyclic.
pub fn is_acyclic(p: &Poset) -> bool {
    if p.is_empty() {
        return false;
    }
    // A greatest or least element makes the order complex a cone.
    if p.maximum().is_some() || p.minimum().is_some() {
        return true;
    }
    core_is_acyclic(p, &p.core())
}

/// Acyclicity of the subposet induced on `within`, without building it
/// unless the beat-point core is non-trivial.
pub fn is_acyclic_within(p: &Poset, within: &FixedBitSet) -> bool {
    if within.count_ones(..) == 0 {
        return false;
    }
    core_is_acyclic(p, &p.core_within(within))
}

fn core_is_acyclic(p: &Poset, core: &Core) -> bool {
    if core.elements.len() == 1 {
        return true;
    }
    let c = p.induced(&core.elements);
    c.is_connected() && reduced_homology_of_poset(&c).is_trivial()
}

/// Per-degree data for rational homology: representative cycles and a
/// solver expressing any cycle in that basis modulo boundaries.
#[derive(Clone, Debug)]
pub(crate) struct DegreeBasis<F> {
    reps: Vec<Vec<F>>,
    // rows: R with R * [B | H] = [I; 0]
    solver: Matrix<F>,
    boundary_rank: usize,
}

impl<F: Field> DegreeBasis<F> {
    pub(crate) fn dim(&self) -> usize {
        self.reps.len()
    }

    fn coordinates(&self, cycle: &[F]) -> Option<Vec<F>> {
        let full = linalg::mat_vec(&self.solver, cycle)?;
        Some(full[self.boundary_rank..self.boundary_rank + self.reps.len()].to_vec())
    }
}

fn columns_matrix<F: Field>(rows: usize, cols: &[Vec<F>]) -> Matrix<F> {
    Matrix::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
}

/// Unreduced rational homology with deterministic bases.
pub(crate) fn rational_bases<F: Field>(cc: &ChainComplex) -> Option<Vec<DegreeBasis<F>>> {
    let Some(top) = cc.top_dim() else {
        return Some(Vec::new());
    };
    let mut out = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let n = cc.rank(d);
        let cycles: Vec<Vec<F>> = if d == 0 {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { F::one() } else { F::zero() })
                        .collect()
                })
                .collect()
        } else {
            linalg::kernel(&linalg::from_int::<F>(&cc.boundary(d)))?
        };
        let next: Matrix<F> = linalg::from_int(&cc.boundary(d + 1));
        let (_, pivots, _) = linalg::rref(&next)?;
        let boundaries: Vec<Vec<F>> = pivots.iter().map(|&c| next.column(c)).collect();
        let b = boundaries.len();

        let mut stacked = boundaries.clone();
        stacked.extend(cycles.iter().cloned());
        let (_, pivots, _) = linalg::rref(&columns_matrix(n, &stacked))?;
        let reps: Vec<Vec<F>> = pivots
            .iter()
            .filter(|&&c| c >= b)
            .map(|&c| cycles[c - b].clone())
            .collect();

        let mut basis = boundaries;
        basis.extend(reps.iter().cloned());
        let (_, _, solver) = linalg::rref(&columns_matrix(n, &basis))?;
        out.push(DegreeBasis {
            reps,
            solver,
            boundary_rank: b,
        });
    }
    Some(out)
}

/// A poset together with its order complex and rational homology bases.
pub(crate) struct PosetHomology<F> {
    pub(crate) complex: SimplicialComplex,
    pub(crate) bases: Vec<DegreeBasis<F>>,
}

impl<F: Field> PosetHomology<F> {
    pub(crate) fn new(p: &Poset) -> Option<Self> {
        let complex = order_complex(p);
        let bases = rational_bases(&complex.chain_complex())?;
        Some(PosetHomology { complex, bases })
    }

    pub(crate) fn betti(&self, d: usize) -> usize {
        self.bases.get(d).map_or(0, DegreeBasis::dim)
    }

    pub(crate) fn degrees(&self) -> usize {
        self.bases.len()
    }
}

/// Matrices of `f_*` in degrees `0..degrees`, shaped `h_d(Y) x h_d(X)`.
/// `f` must already be known to be order-preserving.
pub(crate) fn induced_matrices<F: Field>(
    src: &PosetHomology<F>,
    dst: &PosetHomology<F>,
    f: &PosetMap,
    degrees: usize,
) -> Option<Vec<Matrix<F>>> {
    let g = crate::complex::SimplicialMap {
        vertex_images: f.images.clone(),
    };
    let mut out = Vec::with_capacity(degrees);
    for d in 0..degrees {
        let (hs, hd) = (src.betti(d), dst.betti(d));
        let mut m = Matrix::zeros(hd, hs);
        if hs > 0 && hd > 0 {
            let chain: Matrix<F> = linalg::from_int(&g.chain_matrix(&src.complex, &dst.complex, d));
            for (j, z) in src.bases[d].reps.iter().enumerate() {
                let image = linalg::mat_vec(&chain, z)?;
                let coords = dst.bases[d].coordinates(&image)?;
                for (i, c) in coords.into_iter().enumerate() {
                    m[(i, j)] = c;
                }
            }
        }
        out.push(m);
    }
    Some(out)
}

fn try_homology_map<F: Field>(x: &Poset, y: &Poset, f: &PosetMap) -> Option<Vec<Matrix<BigRational>>> {
    let hx = PosetHomology::<F>::new(x)?;
    let hy = PosetHomology::<F>::new(y)?;
    let degrees = hx.degrees().max(hy.degrees());
    let maps = induced_matrices(&hx, &hy, f, degrees)?;
    Some(maps.iter().map(|m| m.map(Field::to_big)).collect())
}

/// Matrices of `f_* : H_d(X; Q) -> H_d(Y; Q)` for every degree up to the
/// larger of the two dimensions.
pub fn rational_homology_map(x: &Poset, y: &Poset, f: &PosetMap) -> Result<Vec<Matrix<BigRational>>> {
    induced_simplicial_map(x, y, f)?;
    Ok(try_homology_map::<SmallRational>(x, y, f)
        .or_else(|| try_homology_map::<BigRational>(x, y, f))
        .expect("big rational arithmetic cannot overflow"))
}

/// Rational Betti numbers `dim H_d(X; Q)` of the order complex.
pub fn rational_betti_numbers(p: &Poset) -> Vec<usize> {
    fn go<F: Field>(p: &Poset) -> Option<Vec<usize>> {
        let h = PosetHomology::<F>::new(p)?;
        Some(h.bases.iter().map(DegreeBasis::dim).collect())
    }
    go::<SmallRational>(p)
        .or_else(|| go::<BigRational>(p))
        .expect("big rational arithmetic cannot overflow")
}

/// `Σ (-1)^d tr(f_*d)` for an order-preserving self-map.
pub fn lefschetz_number_of_map(x: &Poset, f: &PosetMap) -> Result<BigRational> {
    let maps = rational_homology_map(x, x, f)?;
    let mut total = BigRational::zero();
    for (d, m) in maps.iter().enumerate() {
        let t = linalg::trace(m).expect("big rational");
        if d % 2 == 0 {
            total += t;
        } else {
            total -= t;
        }
    }
    Ok(total)
}
