//! Arbitrary set maps `a: 2^V -> 2^V` and their reduction to an equivalent
//! closure operator.
//!
//! A tuple of partitions `f` is a coding function for `a` when every part
//! count is at most `q` and `f_a(X) = f_X` for all `X`. Two maps are
//! equivalent when they admit the same coding functions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::closure::{require_pairs, ClosureOperator};
use crate::error::{Error, Result};
use crate::partition::{canonical_partitions, count_partitions, Partition};
use crate::subset::{all_subsets, Subset};

/// Vertex cap for [`reduce_to_closure`].
pub const REDUCE_MAX_N: usize = 10;
/// Vertex cap for set-operator tables.
pub const SETOP_MAX_N: usize = 16;
/// Default candidate budget for coding-function enumeration.
pub const DEFAULT_ENUM_BUDGET: u128 = 1 << 22;

/// A total map on `2^V`; no axioms assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetOperator {
    n: usize,
    table: Vec<Subset>,
    label: String,
}

impl SetOperator {
    pub fn from_table(n: usize, table: Vec<Subset>, label: impl Into<String>) -> Result<Self> {
        require_pairs(n, SETOP_MAX_N, "set-operator table")?;
        if table.len() != 1 << n {
            return Err(Error::InvalidArgument(format!(
                "{} table entries for {} subsets",
                table.len(),
                1usize << n
            )));
        }
        if let Some(&bad) = table.iter().find(|s| !s.fits(n)) {
            return Err(Error::MaskOutOfRange { mask: bad, n });
        }
        Ok(SetOperator {
            n,
            table,
            label: label.into(),
        })
    }

    pub fn from_fn(n: usize, label: impl Into<String>, f: impl FnMut(Subset) -> Subset) -> Result<Self> {
        require_pairs(n, SETOP_MAX_N, "set-operator table")?;
        let table = all_subsets(n).map(f).collect();
        Self::from_table(n, table, label)
    }

    pub fn from_closure(op: &ClosureOperator) -> Result<Self> {
        Self::from_table(op.n(), op.table()?, op.label())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn apply(&self, x: Subset) -> Subset {
        self.table[x.bits() as usize]
    }

    pub fn table(&self) -> &[Subset] {
        &self.table
    }

    /// Interprets the table as a closure operator, validated.
    pub fn to_closure(&self) -> Result<ClosureOperator> {
        let op = ClosureOperator::from_table(self.n, self.table.clone(), self.label.clone())?;
        crate::closure::validate_closure(&op)?.into_result()?;
        Ok(op)
    }
}

/// Intermediate tables of [`reduce_to_closure`], indexed by subset bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    /// Component index of each subset in the graph `Y -> a(Y)`.
    pub component: Vec<usize>,
    /// `b(X) = ⋃_{Y ∈ C(X)} (Y ∪ a(Y))`.
    pub b: Vec<Subset>,
    /// `c(X) = ⋃_{Y ⊆ X} b(Y)`.
    pub c: Vec<Subset>,
    /// Applications of `c` needed to reach the fixpoint, maximised over `X`.
    pub iterations: usize,
    /// First `X` not contained in `⋃_{Y ∈ C(X)} a(Y)`. Adding the members
    /// of the component to `b` makes it extensive there.
    pub extensivity_patch: Option<Subset>,
}

/// Three-step reduction of `a` to an equivalent closure operator.
pub fn reduce_to_closure(a: &SetOperator) -> Result<(ClosureOperator, ReductionTrace)> {
    let n = a.n;
    require_pairs(n, REDUCE_MAX_N, "reduction")?;
    let size = 1usize << n;

    // step 1: weak components of Y -> a(Y)
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for y in 0..size {
        let (ry, ra) = (find(&mut parent, y), find(&mut parent, a.table[y].bits() as usize));
        if ry != ra {
            parent[ry.max(ra)] = ry.min(ra);
        }
    }
    let component: Vec<usize> = (0..size).map(|x| find(&mut parent, x)).collect();
    let mut images = alloc::vec![Subset::EMPTY; size];
    let mut members = alloc::vec![Subset::EMPTY; size];
    for y in 0..size {
        images[component[y]] = images[component[y]] | a.table[y];
        members[component[y]] = members[component[y]] | Subset::from_bits(y as u64);
    }
    let mut extensivity_patch = None;
    let b: Vec<Subset> = all_subsets(n)
        .map(|x| {
            let k = component[x.bits() as usize];
            if extensivity_patch.is_none() && !x.is_subset_of(images[k]) {
                extensivity_patch = Some(x);
            }
            images[k] | members[k]
        })
        .collect();

    // step 2: c(X) = b(X) ∪ ⋃_v c(X \ v)
    let mut c = b.clone();
    for x in all_subsets(n) {
        let mut acc = c[x.bits() as usize];
        for v in x.vertices() {
            acc = acc | c[x.without(v).bits() as usize];
        }
        c[x.bits() as usize] = acc;
    }

    // step 3: iterate c to its fixpoint
    let mut iterations = 0;
    let cl: Vec<Subset> = all_subsets(n)
        .map(|x| {
            let mut cur = x;
            let mut steps = 0;
            loop {
                let next = c[cur.bits() as usize];
                if next == cur {
                    break;
                }
                cur = next;
                steps += 1;
            }
            iterations = iterations.max(steps);
            cur
        })
        .collect();
    debug_assert!(iterations <= n);

    let op = ClosureOperator::from_table(n, cl, format!("reduce({})", a.label))?;
    Ok((
        op,
        ReductionTrace {
            component,
            b,
            c,
            iterations,
            extensivity_patch,
        },
    ))
}

/// All coding functions of `a` with alphabet `q` on a carrier of `m`
/// elements, in lexicographic order of canonical partitions.
pub fn enumerate_coding_functions(
    a: &SetOperator,
    q: usize,
    m: usize,
    budget: u128,
) -> Result<Vec<Vec<Partition>>> {
    if q < 2 || m == 0 {
        return Err(Error::InvalidArgument("need q >= 2 and m >= 1".into()));
    }
    let per_vertex = count_partitions(m, q);
    let needed = (0..a.n).fold(1u128, |acc, _| acc.saturating_mul(per_vertex));
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let n = a.n;
    let candidates = canonical_partitions(m, q);
    // constraint (X, a(X)) is checked once both are inside the prefix
    let mut checks: Vec<Vec<(usize, usize)>> = alloc::vec![Vec::new(); n + 1];
    for x in all_subsets(n) {
        let ax = a.apply(x);
        if ax != x {
            let depth = (x | ax).max().unwrap_or(0);
            checks[depth].push((x.bits() as usize, ax.bits() as usize));
        }
    }
    let mut out = Vec::new();
    let mut table = alloc::vec![Partition::universal(m)];
    let mut chosen = Vec::with_capacity(n);
    enumerate(&candidates, &checks, 1, n, &mut table, &mut chosen, &mut out);
    Ok(out)
}

fn enumerate(
    candidates: &[Partition],
    checks: &[Vec<(usize, usize)>],
    depth: usize,
    n: usize,
    table: &mut Vec<Partition>,
    chosen: &mut Vec<Partition>,
    out: &mut Vec<Vec<Partition>>,
) {
    if depth > n {
        out.push(chosen.clone());
        return;
    }
    for p in candidates {
        let base = table.len();
        for x in 0..base {
            let joined = table[x].join_unchecked(p);
            table.push(joined);
        }
        if checks[depth].iter().all(|&(x, ax)| table[x] == table[ax]) {
            chosen.push(p.clone());
            enumerate(candidates, checks, depth + 1, n, table, chosen, out);
            chosen.pop();
        }
        table.truncate(base);
    }
}

/// Whether `a` and `b` admit the same coding functions at this `(q, m)`.
/// Agreement at one `(q, m)` is evidence of equivalence, not a proof.
pub fn operators_equivalent(
    a: &SetOperator,
    b: &SetOperator,
    q: usize,
    m: usize,
    budget: u128,
) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::GroundMismatch {
            left: a.n,
            right: b.n,
        });
    }
    Ok(enumerate_coding_functions(a, q, m, budget)? == enumerate_coding_functions(b, q, m, budget)?)
}

/// Deterministic pseudo-random set operator on `n` vertices.
pub fn random_set_operator(n: usize, seed: u64) -> Result<SetOperator> {
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};
    require_pairs(n, SETOP_MAX_N, "set-operator table")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = Subset::full(n).bits();
    SetOperator::from_fn(n, format!("random-setop(n={n}, seed={seed})"), |_| {
        Subset::from_bits(rng.next_u64() & mask)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::validate_closure;
    use crate::constructors::{chain, uniform};

    fn s(v: &[usize]) -> Subset {
        Subset::from_vertices(v.iter().copied())
    }

    fn setop(n: usize, table: &[&[usize]]) -> SetOperator {
        SetOperator::from_table(n, table.iter().map(|v| s(v)).collect(), "t").unwrap()
    }

    #[test]
    fn swap_on_one_vertex() {
        let a = setop(1, &[&[1], &[]]);
        let (cl, trace) = reduce_to_closure(&a).unwrap();
        assert_eq!(cl.close(s(&[])), s(&[1]));
        assert_eq!(cl.close(s(&[1])), s(&[1]));
        assert_eq!(trace.b, vec![s(&[1]), s(&[1])]);
        assert_eq!(trace.extensivity_patch, None);
        let fs = enumerate_coding_functions(&a, 2, 3, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(fs, vec![vec![Partition::universal(3)]]);
    }

    #[test]
    fn empty_map_needs_the_patch() {
        let a = setop(1, &[&[], &[]]);
        let (cl, trace) = reduce_to_closure(&a).unwrap();
        assert_eq!(trace.extensivity_patch, Some(s(&[1])));
        assert!(validate_closure(&cl).unwrap().is_valid());
        // f_1 = f_a(1) = f_0 forces f_1 universal, so cl(0) must be {1}
        assert_eq!(cl.close(s(&[])), s(&[1]));
        assert!(operators_equivalent(&a, &SetOperator::from_closure(&cl).unwrap(), 2, 3, DEFAULT_ENUM_BUDGET).unwrap());
    }

    #[test]
    fn constant_full_map() {
        let a = SetOperator::from_fn(3, "V", |_| Subset::full(3)).unwrap();
        let (cl, _) = reduce_to_closure(&a).unwrap();
        assert!(all_subsets(3).all(|x| cl.close(x) == Subset::full(3)));
        let fs = enumerate_coding_functions(&a, 2, 3, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(fs.len(), 1);
        assert!(fs[0].iter().all(Partition::is_universal));
    }

    #[test]
    fn identity_admits_everything() {
        let a = SetOperator::from_fn(2, "id", |x| x).unwrap();
        assert_eq!(enumerate_coding_functions(&a, 2, 3, DEFAULT_ENUM_BUDGET).unwrap().len(), 16);
    }

    #[test]
    fn closure_input_is_preserved_up_to_equivalence() {
        let op = chain(3).unwrap();
        let a = SetOperator::from_closure(&op).unwrap();
        let (cl, trace) = reduce_to_closure(&a).unwrap();
        assert!(trace.iterations <= 3);
        let b = SetOperator::from_closure(&cl).unwrap();
        assert!(operators_equivalent(&a, &b, 2, 3, DEFAULT_ENUM_BUDGET).unwrap());
    }

    #[test]
    fn u12_and_u22_differ() {
        let a = SetOperator::from_closure(&uniform(1, 2).unwrap()).unwrap();
        let b = SetOperator::from_closure(&uniform(2, 2).unwrap()).unwrap();
        assert!(!operators_equivalent(&a, &b, 2, 3, DEFAULT_ENUM_BUDGET).unwrap());
        assert!(operators_equivalent(&a, &a, 2, 3, DEFAULT_ENUM_BUDGET).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let a = SetOperator::from_fn(3, "id", |x| x).unwrap();
        assert!(matches!(
            enumerate_coding_functions(&a, 2, 4, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
