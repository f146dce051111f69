//! Families of closure operators: uniform matroids, digraph closures, the
//! chain operator, unions of two operators, random Moore families and the
//! tree operators whose entropy can be any rational above one.

use alloc::string::ToString;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::closure::ClosureOperator;
use crate::error::{Error, Result};
use crate::subset::{all_subsets, Subset, MAX_VERTICES};

/// `U_{r,n}`: `cl(X) = V` if `|X| >= r`, else `X`.
pub fn uniform(r: usize, n: usize) -> Result<ClosureOperator> {
    if r > n {
        return Err(Error::InvalidArgument(format!(
            "uniform matroid needs r <= n, got r = {r}, n = {n}"
        )));
    }
    let v = Subset::full(n);
    ClosureOperator::from_fn(n, format!("U({r},{n})"), move |x| {
        if x.len() >= r {
            v
        } else {
            x
        }
    })
}

/// `cl(∅) = ∅`, `cl(X) = {1..max X}`.
pub fn chain(n: usize) -> Result<ClosureOperator> {
    ClosureOperator::from_fn(n, format!("chain({n})"), |x| match x.max() {
        None => Subset::EMPTY,
        Some(m) => Subset::full(m),
    })
}

/// A digraph on `{1..n}`; loops allowed, repeated arcs are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    in_neighbors: Vec<Subset>,
}

impl Digraph {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::InvalidArgument(format!(
                "digraph needs 1 <= n <= {MAX_VERTICES}, got {n}"
            )));
        }
        Ok(Digraph {
            n,
            arcs: Vec::new(),
            in_neighbors: vec![Subset::EMPTY; n],
        })
    }

    pub fn from_arcs<I: IntoIterator<Item = (usize, usize)>>(n: usize, arcs: I) -> Result<Self> {
        let mut d = Digraph::new(n)?;
        for (u, v) in arcs {
            d.add_arc(u, v)?;
        }
        Ok(d)
    }

    /// Adds `u -> v`; rejects out-of-range endpoints and duplicates.
    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        for w in [u, v] {
            if w == 0 || w > self.n {
                return Err(Error::InvalidArgument(format!(
                    "vertex {w} outside 1..={}",
                    self.n
                )));
            }
        }
        if self.in_neighbors[v - 1].contains(u) {
            return Err(Error::InvalidArgument(format!("duplicate arc {u} -> {v}")));
        }
        self.in_neighbors[v - 1] = self.in_neighbors[v - 1].with(u);
        self.arcs.push((u, v));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// `N⁻(v)`.
    pub fn in_neighbors(&self, v: usize) -> Subset {
        self.in_neighbors[v - 1]
    }

    pub fn directed_cycle(n: usize) -> Result<Self> {
        Digraph::from_arcs(n, (1..=n).map(|i| (i, i % n + 1)))
    }

    /// Undirected cycle `1 - 2 - ... - n - 1`, each edge as two arcs.
    pub fn bidirected_cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument("cycle needs n >= 3".into()));
        }
        Digraph::from_arcs(
            n,
            (1..=n).flat_map(|i| {
                let j = i % n + 1;
                [(i, j), (j, i)]
            }),
        )
    }

    /// All arcs between distinct vertices, no loops.
    pub fn complete(n: usize) -> Result<Self> {
        Digraph::from_arcs(
            n,
            (1..=n).flat_map(move |u| (1..=n).filter(move |&v| v != u).map(move |v| (u, v))),
        )
    }

    pub fn all_loops(n: usize) -> Result<Self> {
        Digraph::from_arcs(n, (1..=n).map(|i| (i, i)))
    }

    /// Whether the induced subdigraph on `y` has no cycle (loops count).
    pub fn is_acyclic_on(&self, y: Subset) -> bool {
        let mut rest = y;
        loop {
            let sources: Subset = rest
                .vertices()
                .filter(|&v| !self.in_neighbors(v).intersects(rest))
                .fold(Subset::EMPTY, |acc, v| acc.with(v));
            if sources.is_empty() {
                return rest.is_empty();
            }
            rest = rest - sources;
        }
    }
}

/// The digraph closure `cl_D`, computed as the least fixpoint of
/// `Z ↦ Z ∪ {v : N⁻(v) ⊆ Z}` starting from `X`.
pub fn from_digraph(d: &Digraph) -> Result<ClosureOperator> {
    let n = d.n();
    let inn: Vec<Subset> = (1..=n).map(|v| d.in_neighbors(v)).collect();
    ClosureOperator::from_fn(n, format!("digraph({n},{} arcs)", d.arcs().len()), move |x| {
        let mut z = x;
        loop {
            let mut grown = z;
            for v in z.complement(n).vertices() {
                if inn[v - 1].is_subset_of(z) {
                    grown = grown.with(v);
                }
            }
            if grown == z {
                return z;
            }
            z = grown;
        }
    })
}

/// Cross-check oracle for [`from_digraph`]: `X` plus the largest acyclic
/// `Y ⊆ V \ X` whose in-neighbours stay inside `X ∪ Y`, by enumeration.
pub fn digraph_closure_bruteforce(d: &Digraph, x: Subset) -> Result<Subset> {
    if d.n() > 7 {
        return Err(Error::TooLarge {
            what: "brute-force digraph closure",
            n: d.n(),
            cap: 7,
        });
    }
    let outside = x.complement(d.n());
    let mut best = Subset::EMPTY;
    for y in outside.subsets() {
        let closed_in = y.vertices().all(|v| d.in_neighbors(v).is_subset_of(x | y));
        if closed_in && d.is_acyclic_on(y) && y.len() > best.len() {
            best = y;
        }
    }
    Ok(x | best)
}

/// Smallest feedback vertex set by brute force (`n <= 20`).
pub fn min_feedback_vertex_set(d: &Digraph) -> Result<Subset> {
    crate::closure::require_table(d.n(), "feedback vertex set search")?;
    let v = Subset::full(d.n());
    Ok(v
        .subsets_by_size()
        .find(|&f| d.is_acyclic_on(v - f))
        .expect("removing every vertex leaves an acyclic digraph"))
}

/// How two operators on disjoint vertex ranges are glued together.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnionKind {
    Disjoint,
    Unidirectional,
    Bidirectional,
}

impl UnionKind {
    pub const ALL: [UnionKind; 3] = [
        UnionKind::Disjoint,
        UnionKind::Unidirectional,
        UnionKind::Bidirectional,
    ];
}

impl FromStr for UnionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disjoint" => Ok(UnionKind::Disjoint),
            "uni" | "unidirectional" => Ok(UnionKind::Unidirectional),
            "bi" | "bidirectional" => Ok(UnionKind::Bidirectional),
            other => Err(Error::InvalidArgument(format!("unknown union kind '{other}'"))),
        }
    }
}

impl fmt::Display for UnionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnionKind::Disjoint => "disjoint",
            UnionKind::Unidirectional => "uni",
            UnionKind::Bidirectional => "bi",
        })
    }
}

/// Combines `cl_1` on `V1 = {1..n1}` with `cl_2` on `V2 = {n1+1..n1+n2}`.
///
/// With `X_i = X ∩ V_i`:
/// - disjoint: `cl_1(X_1) ∪ cl_2(X_2)`
/// - unidirectional: `V_1 ∪ cl_2(X_2)` if `cl_1(X_1) = V_1`, else `cl_1(X_1) ∪ X_2`
/// - bidirectional: `V_1 ∪ cl_2(X_2)` if `X_1 = V_1`, `cl_1(X_1) ∪ V_2` if
///   `X_2 = V_2`, else `X`
pub fn union_combine(
    op1: &ClosureOperator,
    op2: &ClosureOperator,
    kind: UnionKind,
) -> Result<ClosureOperator> {
    let (n1, n2) = (op1.n(), op2.n());
    let n = n1 + n2;
    if n > MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "union of operators",
            n,
            cap: MAX_VERTICES,
        });
    }
    let v1 = Subset::full(n1);
    let v2 = Subset::from_bits(Subset::full(n2).bits() << n1);
    let (a, b) = (op1.clone(), op2.clone());
    let label = format!("{kind}({}, {})", op1.label(), op2.label());
    ClosureOperator::from_fn(n, label, move |x| {
        let x1 = x & v1;
        let x2 = Subset::from_bits((x & v2).bits() >> n1);
        let lift = |s: Subset| Subset::from_bits(s.bits() << n1);
        match kind {
            UnionKind::Disjoint => a.close(x1) | lift(b.close(x2)),
            UnionKind::Unidirectional => {
                let c1 = a.close(x1);
                if c1 == v1 {
                    v1 | lift(b.close(x2))
                } else {
                    c1 | lift(x2)
                }
            }
            UnionKind::Bidirectional => {
                if x1 == v1 {
                    v1 | lift(b.close(x2))
                } else if x & v2 == v2 {
                    a.close(x1) | v2
                } else {
                    x
                }
            }
        }
    })
}

/// Shape and numbers behind a tree operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSpec {
    /// Rank `r` (number of trees).
    pub rank: usize,
    /// Target entropy `H = (1/D) Σ N_t`.
    pub entropy: BigRational,
    /// `D`.
    pub scale: usize,
    /// `N_1..N_r`, with `N_r = D`.
    pub shares: Vec<usize>,
    pub trees: Vec<TreeShape>,
    /// Indexed by vertex - 1.
    pub vertices: Vec<TreeVertex>,
}

/// An `(L, C)`-tree: `L + 1` levels, level `k` vertices have `C - k` children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeShape {
    pub depth: usize,
    pub branching: usize,
    pub root: usize,
    pub members: Subset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeVertex {
    pub tree: usize,
    pub level: usize,
    pub parent: Option<usize>,
    pub children: Subset,
}

impl TreeSpec {
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    /// `|Σ| = DH`.
    pub fn sigma_len(&self) -> usize {
        self.shares.iter().sum()
    }

    pub fn roots(&self) -> Subset {
        Subset::from_vertices(self.trees.iter().map(|t| t.root))
    }

    /// `a(v)`: `v` and all of its ancestors.
    pub fn ancestry(&self, v: usize) -> Subset {
        let mut out = Subset::singleton(v);
        let mut cur = self.vertices[v - 1].parent;
        while let Some(p) = cur {
            out = out.with(p);
            cur = self.vertices[p - 1].parent;
        }
        out
    }

    pub fn children(&self, v: usize) -> Subset {
        self.vertices[v - 1].children
    }

    /// Vertices on level `k` of tree `t` (0-indexed tree).
    pub fn level(&self, t: usize, k: usize) -> Subset {
        Subset::from_vertices(
            self.vertices
                .iter()
                .enumerate()
                .filter(|(_, w)| w.tree == t && w.level == k)
                .map(|(i, _)| i + 1),
        )
    }

    fn build(rank: usize, entropy: BigRational, scale: usize, shares: Vec<usize>) -> Result<Self> {
        let sigma: usize = shares.iter().sum();
        let mut trees = Vec::with_capacity(rank);
        let mut vertices: Vec<TreeVertex> = Vec::new();
        for (t, &share) in shares.iter().enumerate() {
            let depth = scale - share;
            let branching = sigma - share;
            let root = vertices.len() + 1;
            vertices.push(TreeVertex {
                tree: t,
                level: 0,
                parent: None,
                children: Subset::EMPTY,
            });
            let mut frontier = vec![root];
            for k in 0..depth {
                let mut next = Vec::new();
                for &p in &frontier {
                    for _ in 0..branching - k {
                        let id = vertices.len() + 1;
                        if id > MAX_VERTICES {
                            return Err(Error::TooLarge {
                                what: "tree operator",
                                n: id,
                                cap: MAX_VERTICES,
                            });
                        }
                        vertices.push(TreeVertex {
                            tree: t,
                            level: k + 1,
                            parent: Some(p),
                            children: Subset::EMPTY,
                        });
                        vertices[p - 1].children = vertices[p - 1].children.with(id);
                        next.push(id);
                    }
                }
                frontier = next;
            }
            let members = Subset::from_vertices(root..=vertices.len());
            trees.push(TreeShape {
                depth,
                branching,
                root,
                members,
            });
        }
        Ok(TreeSpec {
            rank,
            entropy,
            scale,
            shares,
            trees,
            vertices,
        })
    }
}

/// Picks `D` and `N_1..N_r` for target `H = a/b` with `1 < H < r`: the
/// smallest multiple `D` of `b` with `D >= (r-1)/(H-1)` for which
/// `D(H-1)` splits into `r-1` parts in `[1, D-1]`; the split is balanced.
fn tree_parameters(r: usize, a: usize, b: usize) -> (usize, Vec<usize>) {
    let excess = a - b;
    let mut k = ((r - 1) + excess - 1) / excess;
    k = k.max(1);
    loop {
        let d = b * k;
        let total = excess * k;
        if total >= r - 1 && total <= (r - 1) * (d - 1) {
            let base = total / (r - 1);
            let extra = total % (r - 1);
            let mut shares: Vec<usize> = (0..r - 1)
                .map(|i| if i < extra { base + 1 } else { base })
                .collect();
            shares.push(d);
            return (d, shares);
        }
        k += 1;
    }
}

/// The tree operator of rank `r` whose entropy is exactly `H`, `1 < H <= r`.
///
/// `cl(X) = V` if some non-leaf `v` has `c(v) ⊆ a(X)` or `X` meets every
/// tree; otherwise `cl(X) = a(X)`. For `H = r` every tree is a single
/// vertex and the operator is `U_{r,r}`.
pub fn density_tree(r: usize, entropy: &BigRational) -> Result<(ClosureOperator, TreeSpec)> {
    if r < 2 {
        return Err(Error::InvalidArgument("tree operator needs r >= 2".into()));
    }
    let one = BigRational::one();
    let rank = BigRational::from_integer(BigInt::from(r));
    if entropy <= &one || entropy > &rank || entropy.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "entropy must lie in (1, {r}], got {entropy}"
        )));
    }
    let (a, b) = (
        entropy.numer().to_usize().ok_or_else(too_big)?,
        entropy.denom().to_usize().ok_or_else(too_big)?,
    );
    let (scale, shares) = if a == r * b {
        (1, vec![1; r])
    } else {
        tree_parameters(r, a, b)
    };
    let spec = TreeSpec::build(r, entropy.clone(), scale, shares)?;
    let op = tree_operator(&spec)?;
    Ok((op, spec))
}

fn too_big() -> Error {
    Error::InvalidArgument("entropy numerator/denominator too large".into())
}

pub(crate) fn tree_operator(spec: &TreeSpec) -> Result<ClosureOperator> {
    let n = spec.n();
    let ancestry: Vec<Subset> = (1..=n).map(|v| spec.ancestry(v)).collect();
    let child_sets: Vec<Subset> = (1..=n)
        .map(|v| spec.children(v))
        .filter(|c| !c.is_empty())
        .collect();
    let tree_sets: Vec<Subset> = spec.trees.iter().map(|t| t.members).collect();
    let v = Subset::full(n);
    let label = format!("tree(r={}, H={})", spec.rank, spec.entropy);
    ClosureOperator::from_fn(n, label, move |x| {
        if tree_sets.iter().all(|t| t.intersects(x)) {
            return v;
        }
        let ax = x
            .vertices()
            .fold(Subset::EMPTY, |acc, u| acc | ancestry[u - 1]);
        if child_sets.iter().any(|c| c.is_subset_of(ax)) {
            v
        } else {
            ax
        }
    })
}

/// Random operator from a random Moore family on `n <= 10` vertices.
///
/// A random family of subsets plus `V` is closed under intersection and
/// `cl(X)` is its smallest member containing `X`. Deterministic per seed.
pub fn random_moore(n: usize, seed: u64) -> Result<ClosureOperator> {
    if n == 0 || n > 10 {
        return Err(Error::TooLarge {
            what: "random Moore family",
            n,
            cap: 10,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // density in [0, 1/2); sparse families are the interesting ones
    let density = (rng.next_u32() % 512) as u64;
    let family: Vec<Subset> = all_subsets(n)
        .filter(|_| (rng.next_u32() as u64 % 1024) < density)
        .chain(core::iter::once(Subset::full(n)))
        .collect();
    random_moore_from_family(n, &family).map(|op| op.with_label(format!("moore(n={n}, seed={seed})")))
}

/// The operator whose closed sets are the intersection closure of
/// `family ∪ {V}`.
pub fn random_moore_from_family(n: usize, family: &[Subset]) -> Result<ClosureOperator> {
    crate::closure::require_table(n, "Moore family")?;
    let full = Subset::full(n);
    let mut table = vec![full; 1usize << n];
    for &m in family {
        if !m.fits(n) {
            return Err(Error::MaskOutOfRange { mask: m, n });
        }
        for x in m.subsets() {
            table[x.bits() as usize] &= m;
        }
    }
    ClosureOperator::from_table(n, table, "moore".to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::{closed_sets, rank_and_bases, validate_closure};

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn uniform_examples() {
        let u03 = uniform(0, 3).unwrap();
        assert_eq!(u03.close(Subset::EMPTY), Subset::full(3));
        let u24 = uniform(2, 4).unwrap();
        assert_eq!(u24.close(Subset::singleton(1)), Subset::singleton(1));
        assert_eq!(u24.close(Subset::from_vertices([1, 3])), Subset::full(4));
        let id = uniform(4, 4).unwrap();
        assert!(all_subsets(4).all(|x| id.close(x) == x));
        assert!(uniform(5, 4).is_err());
    }

    #[test]
    fn chain_examples() {
        let c = chain(3).unwrap();
        assert_eq!(c.close(Subset::singleton(2)), Subset::from_vertices([1, 2]));
        assert_eq!(c.close(Subset::singleton(3)), Subset::full(3));
        assert_eq!(c.rank(), 1);
        assert!(validate_closure(&chain(1).unwrap()).unwrap().is_valid());
    }

    #[test]
    fn digraph_rejects_duplicates_and_range() {
        let mut d = Digraph::new(2).unwrap();
        d.add_arc(1, 2).unwrap();
        assert!(d.add_arc(1, 2).is_err());
        assert!(d.add_arc(1, 3).is_err());
        assert!(d.add_arc(0, 1).is_err());
    }

    #[test]
    fn digraph_families_are_uniform() {
        for n in 3..=5 {
            let cases = [
                (Digraph::directed_cycle(n).unwrap(), 1),
                (Digraph::complete(n).unwrap(), n - 1),
                (Digraph::all_loops(n).unwrap(), n),
                (Digraph::new(n).unwrap(), 0),
            ];
            for (d, r) in cases {
                let op = from_digraph(&d).unwrap();
                assert!(op.same_map(&uniform(r, n).unwrap()).unwrap(), "n={n} r={r}");
            }
        }
    }

    #[test]
    fn fixpoint_matches_bruteforce_on_bidirected_cycles() {
        for n in 3..=6 {
            let d = Digraph::bidirected_cycle(n).unwrap();
            let op = from_digraph(&d).unwrap();
            for x in all_subsets(n) {
                assert_eq!(op.close(x), digraph_closure_bruteforce(&d, x).unwrap());
            }
            assert_eq!(op.rank(), min_feedback_vertex_set(&d).unwrap().len());
        }
    }

    #[test]
    fn bidirectional_rank() {
        let u = uniform(1, 2).unwrap();
        let bi = union_combine(&u, &u, UnionKind::Bidirectional).unwrap();
        assert!(validate_closure(&bi).unwrap().is_valid());
        assert_eq!(bi.rank(), 3);
        let dj = union_combine(&u, &u, UnionKind::Disjoint).unwrap();
        assert_eq!(dj.rank(), 2);
    }

    #[test]
    fn unidirectional_non_spanning_case() {
        let c = chain(3).unwrap();
        let u = uniform(1, 2).unwrap();
        let op = union_combine(&c, &u, UnionKind::Unidirectional).unwrap();
        // X1 = {2} does not span chain(3): cl(X) = cl_1(X1) ∪ X2
        let x = Subset::from_vertices([2, 4]);
        assert_eq!(op.close(x), Subset::from_vertices([1, 2, 4]));
        let y = Subset::from_vertices([3, 4]);
        assert_eq!(op.close(y), Subset::full(5));
    }

    #[test]
    fn union_kind_parsing() {
        assert_eq!("uni".parse::<UnionKind>().unwrap(), UnionKind::Unidirectional);
        assert!("sideways".parse::<UnionKind>().is_err());
    }

    #[test]
    fn tree_three_halves_shape() {
        let (op, spec) = density_tree(2, &q(3, 2)).unwrap();
        assert_eq!(spec.scale, 2);
        assert_eq!(spec.shares, vec![1, 2]);
        assert_eq!((spec.trees[0].depth, spec.trees[0].branching), (1, 2));
        assert_eq!((spec.trees[1].depth, spec.trees[1].branching), (0, 1));
        assert_eq!(op.n(), 4);
        assert!(validate_closure(&op).unwrap().is_valid());
        assert_eq!(rank_and_bases(&op).unwrap().0, 2);
        // vertices: 1 = R_1, 2 and 3 its leaves, 4 = R_2
        assert_eq!(op.close(Subset::singleton(2)), Subset::from_vertices([1, 2]));
        assert_eq!(op.close(Subset::from_vertices([2, 3])), Subset::full(4));
    }

    #[test]
    fn tree_at_full_entropy_is_identity() {
        let (op, spec) = density_tree(3, &q(3, 1)).unwrap();
        assert_eq!(spec.n(), 3);
        assert!(op.same_map(&uniform(3, 3).unwrap()).unwrap());
    }

    #[test]
    fn tree_parameters_need_feasible_split() {
        // r = 3, H = 5/2: D = 2 would ask for N_1 + N_2 = 3 with N_t <= 1
        let (_, spec) = density_tree(3, &q(5, 2)).unwrap();
        assert_eq!(spec.scale, 4);
        assert_eq!(spec.shares, vec![3, 3, 4]);
        assert!(spec.shares[..2].iter().all(|&s| s >= 1 && s < spec.scale));
    }

    #[test]
    fn tree_rejects_out_of_range_entropy() {
        assert!(density_tree(2, &q(1, 1)).is_err());
        assert!(density_tree(2, &q(5, 2)).is_err());
        assert!(density_tree(1, &q(3, 2)).is_err());
    }

    #[test]
    fn moore_extremes() {
        let constant = random_moore_from_family(3, &[Subset::full(3)]).unwrap();
        assert!(all_subsets(3).all(|x| constant.close(x) == Subset::full(3)));
        let all: Vec<Subset> = all_subsets(3).collect();
        let id = random_moore_from_family(3, &all).unwrap();
        assert!(all_subsets(3).all(|x| id.close(x) == x));
    }

    #[test]
    fn moore_is_deterministic_and_valid() {
        for seed in 0..50 {
            let a = random_moore(6, seed).unwrap();
            let b = random_moore(6, seed).unwrap();
            assert!(a.same_map(&b).unwrap());
            assert!(validate_closure(&a).unwrap().is_valid());
            assert!(closed_sets(&a).unwrap().contains(&Subset::full(6)));
        }
    }
}
