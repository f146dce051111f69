//! Coding functions: one partition of the carrier per vertex, compatible
//! with a closure operator.
//!
//! For `X ⊆ V`, `f_X` is the join of the partitions of the vertices of `X`
//! (`f_∅` is the universal partition). `f` is a coding function for `cl`
//! when every vertex partition has at most `q` parts and `f_X = f_cl(X)`
//! for all `X`; it is a solution when `f_V` is the equality partition.

use alloc::string::ToString;
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::closure::{require_table, ClosureOperator, ValidationReport};
use crate::constructors::{from_digraph, Digraph, TreeSpec};
use crate::closure::Axiom;
use crate::error::{Error, Result};
use crate::partition::{
    canonical_partitions, count_partitions, exponent_of, join_all, partition_entropy, Entropy,
    Partition,
};
use crate::ranks::RankProfile;
use crate::subset::{all_subsets, Subset};

/// Largest carrier the exhaustive tables accept.
pub const MAX_CARRIER: usize = 1 << 16;

#[derive(Clone, Debug)]
pub struct CodingFunction {
    op: ClosureOperator,
    q: usize,
    parts: Vec<Partition>,
}

impl CodingFunction {
    /// One partition per vertex, all on the same carrier.
    pub fn new(op: ClosureOperator, q: usize, parts: Vec<Partition>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument("alphabet needs q >= 2".into()));
        }
        if parts.len() != op.n() {
            return Err(Error::InvalidArgument(format!(
                "{} partitions for {} vertices",
                parts.len(),
                op.n()
            )));
        }
        let m = parts.first().map_or(0, Partition::len);
        if let Some(p) = parts.iter().find(|p| p.len() != m) {
            return Err(Error::CarrierMismatch {
                left: m,
                right: p.len(),
            });
        }
        if m == 0 || m > MAX_CARRIER {
            return Err(Error::InvalidArgument(format!(
                "carrier size {m} outside 1..={MAX_CARRIER}"
            )));
        }
        Ok(CodingFunction { op, q, parts })
    }

    pub fn op(&self) -> &ClosureOperator {
        &self.op
    }

    pub fn alphabet(&self) -> usize {
        self.q
    }

    pub fn carrier(&self) -> usize {
        self.parts[0].len()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.parts
    }

    /// `f_v`, 1-indexed.
    pub fn partition(&self, v: usize) -> &Partition {
        &self.parts[v - 1]
    }

    /// `r` with `carrier = q^r`, if the carrier has that shape.
    pub fn carrier_exponent(&self) -> Option<usize> {
        exponent_of(self.carrier(), self.q)
    }

    /// `f_X`.
    pub fn restrict(&self, x: Subset) -> Result<Partition> {
        if !x.fits(self.op.n()) {
            return Err(Error::MaskOutOfRange {
                mask: x,
                n: self.op.n(),
            });
        }
        join_all(self.carrier(), x.vertices().map(|v| &self.parts[v - 1]))
    }

    /// `f_X` for every `X`, indexed by bits.
    pub fn all_restrictions(&self) -> Result<Vec<Partition>> {
        subset_joins(self.op.n(), self.carrier(), &self.parts)
    }
}

pub(crate) fn subset_joins(n: usize, m: usize, parts: &[Partition]) -> Result<Vec<Partition>> {
    require_table(n, "coding-function table")?;
    if (m as u128) << n > 1u128 << 28 {
        return Err(Error::TooLarge {
            what: "coding-function table (carrier * 2^n)",
            n,
            cap: 28usize.saturating_sub(m.ilog2() as usize),
        });
    }
    let mut table = Vec::with_capacity(1 << n);
    table.push(Partition::universal(m));
    for x in 1usize..1 << n {
        let low = x.trailing_zeros() as usize;
        let joined = table[x & (x - 1)].join_unchecked(&parts[low]);
        table.push(joined);
    }
    Ok(table)
}

/// Part-count bound per vertex and `f_X = f_cl(X)` for every `X`.
pub fn coding_validate(f: &CodingFunction) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    for (i, p) in f.parts.iter().enumerate() {
        if p.parts() > f.q {
            report.push(Axiom::PartCount, vec![Subset::singleton(i + 1)]);
        }
    }
    let table = f.all_restrictions()?;
    if !table[0].is_universal() {
        report.push(Axiom::EmptyUniversal, vec![Subset::EMPTY]);
    }
    for x in all_subsets(f.op.n()) {
        let cx = f.op.close(x);
        if cx != x && table[x.bits() as usize] != table[cx.bits() as usize] {
            report.push(Axiom::Compatible, vec![x, cx]);
        }
    }
    Ok(report)
}

fn entropy_exponent(f: &CodingFunction) -> Result<usize> {
    f.carrier_exponent().ok_or(Error::CarrierMismatch {
        left: f.carrier(),
        right: f.q,
    })
}

/// `H_f(X) = H(f_X)`.
pub fn entropy_of(f: &CodingFunction, x: Subset) -> Result<Entropy> {
    entropy_exponent(f)?;
    partition_entropy(&f.restrict(x)?, f.q)
}

/// `f_V` is the equality partition on a carrier of size `q^r`, `r` the rank.
pub fn is_solution(f: &CodingFunction) -> Result<bool> {
    let r = entropy_exponent(f)?;
    if r != f.op.rank() {
        return Ok(false);
    }
    Ok(f.restrict(f.op.ground())?.is_equality())
}

fn require_valid(f: &CodingFunction) -> Result<Vec<Partition>> {
    let report = coding_validate(f)?;
    if let Some(v) = report.first() {
        return Err(Error::InvalidCoding {
            reason: format!("{} fails at {:?}", v.axiom, v.witness),
        });
    }
    f.all_restrictions()
}

/// `cl_f(X) = {v : f_{X ∪ v} = f_X}`.
pub fn induced_closure(f: &CodingFunction) -> Result<ClosureOperator> {
    let table = require_valid(f)?;
    let n = f.op.n();
    let cl: Vec<Subset> = all_subsets(n)
        .map(|x| {
            let fx = &table[x.bits() as usize];
            Subset::from_vertices((1..=n).filter(|&v| &table[x.with(v).bits() as usize] == fx))
        })
        .collect();
    ClosureOperator::from_table(n, cl, format!("induced({})", f.op.label()))
}

fn entropies(f: &CodingFunction, table: &[Partition]) -> Result<Vec<Entropy>> {
    table.iter().map(|p| partition_entropy(p, f.q)).collect()
}

fn min_entropy<I: Iterator<Item = Entropy>>(values: I) -> Entropy {
    values
        .reduce(|a, b| if b.compare(&a).is_lt() { b } else { a })
        .expect("nonempty")
}

/// `lrk_f(X) = min{H_f(Y) : cl(Y ∪ (V \ X)) = V}` and
/// `urk_f(X) = H_f(V) - lrk_f(V \ X)`.
pub fn coding_rank_bounds(f: &CodingFunction, x: Subset) -> Result<(Entropy, Entropy)> {
    let table = require_valid(f)?;
    let h = entropies(f, &table)?;
    Ok(rank_bounds_from(f, &h, x))
}

fn rank_bounds_from(f: &CodingFunction, h: &[Entropy], x: Subset) -> (Entropy, Entropy) {
    let n = f.op.n();
    let lrk = |x: Subset| {
        let rest = x.complement(n);
        min_entropy(
            all_subsets(n)
                .filter(|&y| f.op.is_spanning(y | rest))
                .map(|y| h[y.bits() as usize].clone()),
        )
    };
    let full = f.op.ground();
    let lower = lrk(x);
    let upper = h[full.bits() as usize].sub(&lrk(x.complement(n)));
    (lower, upper)
}

/// The chain
/// `H_f(V) - H_f(V \ cl(X)) <= lrk_f(cl(X)) <= urk_f(X) <= H_f(X) <= ork(X)`
/// at one subset.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundChain {
    pub set: Subset,
    pub trivial: Entropy,
    pub lower_of_closure: Entropy,
    pub upper: Entropy,
    pub entropy: Entropy,
    pub outer_rank: usize,
}

impl BoundChain {
    pub fn holds(&self) -> bool {
        self.trivial.le(&self.lower_of_closure)
            && self.lower_of_closure.le(&self.upper)
            && self.upper.le(&self.entropy)
            && self.entropy.le(&Entropy::integer(self.outer_rank))
    }
}

/// The bound chain at every subset.
pub fn bound_chains(f: &CodingFunction) -> Result<Vec<BoundChain>> {
    let table = require_valid(f)?;
    let h = entropies(f, &table)?;
    let profile = RankProfile::compute(&f.op)?;
    let n = f.op.n();
    let full = f.op.ground();
    Ok(all_subsets(n)
        .map(|x| {
            let cx = f.op.close(x);
            let hv = &h[full.bits() as usize];
            BoundChain {
                set: x,
                trivial: hv.sub(&h[(full - cx).bits() as usize]),
                lower_of_closure: rank_bounds_from(f, &h, cx).0,
                upper: rank_bounds_from(f, &h, x).1,
                entropy: h[x.bits() as usize].clone(),
                outer_rank: profile.ork(x),
            }
        })
        .collect())
}

/// Result of an exhaustive search for a best coding function.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    /// Largest `H_f(V)` found.
    pub max_entropy: Entropy,
    /// First coding function (in search order) reaching it.
    pub best: CodingFunction,
    /// The optimum is certified: the search finished, or it met the
    /// rank bound `H_f(V) = r`.
    pub complete: bool,
    /// Search nodes visited.
    pub nodes: u64,
    /// `(#partitions of q^r into <= q parts)^n`, saturating.
    pub candidates: u128,
}

impl SolveOutcome {
    pub fn budget_exceeded(&self) -> bool {
        !self.complete
    }
}

/// Depth-first search over coding functions for `op` at alphabet `q`.
///
/// Vertices are assigned canonical partitions of `q^r` elements in order;
/// a branch is cut as soon as some `X` with `X ∪ cl(X)` inside the assigned
/// prefix has `f_X != f_cl(X)`. `budget` bounds the number of search nodes.
pub fn solve_exhaustive(op: &ClosureOperator, q: usize, budget: u64) -> Result<SolveOutcome> {
    let mut search = Search::new(op, q)?;
    let mut best: Option<(Entropy, Vec<Partition>)> = None;
    let target = Entropy::integer(search.rank);
    let finished = search.run(budget, None, &mut |parts, h| {
        let better = best.as_ref().is_none_or(|(b, _)| h.compare(b).is_gt());
        if better {
            best = Some((h.clone(), parts.to_vec()));
        }
        !h.same(&target)
    });
    let (max_entropy, parts) = best.expect("the all-universal assignment is always compatible");
    let reached_rank = max_entropy.same(&target);
    Ok(SolveOutcome {
        best: CodingFunction::new(op.clone(), q, parts)?,
        max_entropy,
        complete: finished || reached_rank,
        nodes: search.nodes,
        candidates: search.candidates(),
    })
}

/// Outcome of [`solve_branch`].
#[derive(Debug, Clone)]
pub struct BranchOutcome {
    /// Best entropy in this branch and the first assignment reaching it;
    /// `None` when no compatible assignment was seen.
    pub best: Option<(Entropy, CodingFunction)>,
    /// The branch was searched to the end, or stopped at the rank bound.
    pub finished: bool,
    pub nodes: u64,
}

/// Same search restricted to one canonical partition for vertex 1;
/// branches can run independently and be merged in index order.
pub fn solve_branch(op: &ClosureOperator, q: usize, budget: u64, first: usize) -> Result<BranchOutcome> {
    let mut search = Search::new(op, q)?;
    if first >= search.candidates.len() {
        return Err(Error::InvalidArgument(format!(
            "branch {first} out of {}",
            search.candidates.len()
        )));
    }
    let mut best: Option<(Entropy, Vec<Partition>)> = None;
    let target = Entropy::integer(search.rank);
    let finished = search.run(budget, Some(first), &mut |parts, h| {
        if best.as_ref().is_none_or(|(b, _)| h.compare(b).is_gt()) {
            best = Some((h.clone(), parts.to_vec()));
        }
        !h.same(&target)
    });
    let best = match best {
        None => None,
        Some((h, parts)) => Some((h, CodingFunction::new(op.clone(), q, parts)?)),
    };
    Ok(BranchOutcome {
        best,
        finished,
        nodes: search.nodes,
    })
}

/// Number of canonical first-vertex choices for [`solve_branch`].
pub fn branch_count(op: &ClosureOperator, q: usize) -> Result<usize> {
    Ok(Search::new(op, q)?.candidates.len())
}

/// Every solution (`H_f(V) = r`) for `op` at alphabet `q`, in search order.
/// The flag is false when the budget ran out first.
pub fn solutions(op: &ClosureOperator, q: usize, budget: u64) -> Result<(Vec<CodingFunction>, bool)> {
    let mut search = Search::new(op, q)?;
    let target = Entropy::integer(search.rank);
    let mut found = Vec::new();
    let finished = search.run(budget, None, &mut |parts, h| {
        if h.same(&target) {
            found.push(parts.to_vec());
        }
        true
    });
    let fs = found
        .into_iter()
        .map(|p| CodingFunction::new(op.clone(), q, p))
        .collect::<Result<Vec<_>>>()?;
    Ok((fs, finished))
}

struct Search<'a> {
    op: &'a ClosureOperator,
    q: usize,
    rank: usize,
    m: usize,
    candidates: Vec<Partition>,
    /// per depth k (vertex k+1 just assigned): pairs (X, cl(X)) to check
    checks: Vec<Vec<(usize, usize)>>,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(op: &'a ClosureOperator, q: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument("alphabet needs q >= 2".into()));
        }
        let n = op.n();
        require_table(n, "coding-function search")?;
        let rank = op.rank();
        let m = q
            .checked_pow(rank as u32)
            .filter(|&m| m <= MAX_CARRIER)
            .ok_or_else(|| Error::InvalidArgument(format!("carrier {q}^{rank} too large")))?;
        let candidates = canonical_partitions(m, q);
        let mut checks = vec![Vec::new(); n];
        for x in all_subsets(n) {
            let cx = op.close(x);
            if cx == x {
                continue;
            }
            // checked once both X and cl(X) are assigned
            let depth = (x | cx).max().expect("nonempty") - 1;
            checks[depth].push((x.bits() as usize, cx.bits() as usize));
        }
        Ok(Search {
            op,
            q,
            rank,
            m,
            candidates,
            checks,
            nodes: 0,
        })
    }

    fn candidates(&self) -> u128 {
        let c = count_partitions(self.m, self.q);
        (0..self.op.n()).fold(1u128, |acc, _| acc.saturating_mul(c))
    }

    /// Runs the search; `visit` sees each complete compatible assignment
    /// with its entropy and returns false to stop. Returns true when the
    /// search space was exhausted (or `visit` asked to stop) within budget.
    fn run(
        &mut self,
        budget: u64,
        first: Option<usize>,
        visit: &mut dyn FnMut(&[Partition], &Entropy) -> bool,
    ) -> bool {
        let n = self.op.n();
        let mut table: Vec<Partition> = vec![Partition::universal(self.m)];
        table.reserve(1 << n);
        let mut chosen: Vec<Partition> = Vec::with_capacity(n);
        matches!(
            self.descend(0, budget, first, &mut table, &mut chosen, visit),
            Flow::Done | Flow::Stop
        )
    }

    fn descend(
        &mut self,
        depth: usize,
        budget: u64,
        first: Option<usize>,
        table: &mut Vec<Partition>,
        chosen: &mut Vec<Partition>,
        visit: &mut dyn FnMut(&[Partition], &Entropy) -> bool,
    ) -> Flow {
        let n = self.op.n();
        if depth == n {
            let fv = &table[(1 << n) - 1];
            let h = partition_entropy(fv, self.q).expect("carrier is q^r");
            return if visit(chosen, &h) { Flow::Done } else { Flow::Stop };
        }
        let range = match (depth, first) {
            (0, Some(i)) => i..i + 1,
            _ => 0..self.candidates.len(),
        };
        for idx in range {
            if self.nodes >= budget {
                return Flow::OutOfBudget;
            }
            self.nodes += 1;
            let p = self.candidates[idx].clone();
            let base = table.len();
            for x in 0..base {
                let joined = table[x].join_unchecked(&p);
                table.push(joined);
            }
            let ok = self.checks[depth]
                .iter()
                .all(|&(x, cx)| table[x] == table[cx]);
            if ok {
                chosen.push(p);
                let flow = self.descend(depth + 1, budget, first, table, chosen, visit);
                chosen.pop();
                if !matches!(flow, Flow::Done) {
                    table.truncate(base);
                    return flow;
                }
            }
            table.truncate(base);
        }
        Flow::Done
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    Done,
    Stop,
    OutOfBudget,
}

fn coordinate(q: usize, coord: usize) -> Partition {
    let labels: Vec<usize> = (0..q * q)
        .map(|x| if coord == 0 { x / q } else { x % q })
        .collect();
    Partition::from_dense_labels(&labels)
}

fn bidirected_square() -> Result<ClosureOperator> {
    Ok(from_digraph(&Digraph::bidirected_cycle(4)?)?.with_label("C4"))
}

/// Solution of the bidirected 4-cycle `1-2-3-4-1` over any alphabet:
/// `f_1 = f_2` is the first coordinate of `A^2`, `f_3 = f_4` the second.
pub fn c4_solution(q: usize) -> Result<CodingFunction> {
    let (a, b) = (coordinate(q, 0), coordinate(q, 1));
    CodingFunction::new(bidirected_square()?, q, vec![a.clone(), a, b.clone(), b])
}

/// The pairing `f_1 = f_3`, `f_2 = f_4`. Not a coding function of the
/// 4-cycle: `{1, 3}` spans, but `f_{13}` has only `q` parts.
pub fn c4_opposite_pairing(q: usize) -> Result<CodingFunction> {
    let (a, b) = (coordinate(q, 0), coordinate(q, 1));
    CodingFunction::new(bidirected_square()?, q, vec![a.clone(), b.clone(), a, b])
}

/// `S(v) ⊆ {1..DH}` for each vertex of a tree operator: roots take
/// consecutive blocks of sizes `N_1..N_r`; the children of `v` extend
/// `S(v)` by the remaining elements of `Σ`, one each, in increasing order.
pub fn density_labels(spec: &TreeSpec) -> Vec<Subset> {
    let mut labels = vec![Subset::EMPTY; spec.n()];
    let sigma = Subset::full(spec.sigma_len());
    let mut offset = 0;
    for (t, tree) in spec.trees.iter().enumerate() {
        let share = spec.shares[t];
        labels[tree.root - 1] = Subset::from_vertices(offset + 1..=offset + share);
        offset += share;
    }
    // parents precede children in vertex order
    for v in 1..=spec.n() {
        let fresh = sigma - labels[v - 1];
        for (child, extra) in spec.children(v).vertices().zip(fresh.vertices()) {
            labels[child - 1] = labels[v - 1].with(extra);
        }
    }
    labels
}

/// The coding function of a tree operator with entropy exactly `H`.
///
/// With `A = B^D`, the carrier is `B^{rD}` and `f_v = g_{S(v)}`, the
/// partition by the coordinates in `S(v)`.
pub fn density_coding(spec: &TreeSpec, base: usize) -> Result<CodingFunction> {
    if base < 2 {
        return Err(Error::InvalidArgument("base alphabet needs |B| >= 2".into()));
    }
    let width = spec.rank * spec.scale;
    base
        .checked_pow(width as u32)
        .filter(|&m| m <= MAX_CARRIER)
        .ok_or_else(|| Error::InvalidArgument(format!("carrier {base}^{width} too large")))?;
    let q = base.pow(spec.scale as u32);
    let labels = density_labels(spec);
    let parts = labels
        .iter()
        .map(|s| coordinate_partition(base, width, *s))
        .collect();
    CodingFunction::new(spec.closure_operator()?, q, parts)
        .map(|f| CodingFunction {
            op: f.op.with_label(format!("tree(r={}, H={})", spec.rank, spec.entropy)),
            ..f
        })
}

/// `g_S` on `B^width`: two words agree iff they agree on the coordinates in `S`.
pub fn coordinate_partition(base: usize, width: usize, coords: Subset) -> Partition {
    let m = base.pow(width as u32);
    let labels: Vec<usize> = (0..m)
        .map(|x| {
            let mut key = 0usize;
            for c in coords.vertices() {
                let digit = (x / base.pow((c - 1) as u32)) % base;
                key = key * base + digit;
            }
            key
        })
        .collect();
    Partition::from_dense_labels(&labels)
}

impl TreeSpec {
    /// Rebuilds the tree operator described by this spec.
    pub fn closure_operator(&self) -> Result<ClosureOperator> {
        crate::constructors::tree_operator(self)
    }
}

/// The all-universal coding function: compatible with every operator.
pub fn universal_coding(op: &ClosureOperator, q: usize) -> Result<CodingFunction> {
    let r = op.rank();
    let m = q.pow(r as u32).max(1);
    CodingFunction::new(op.clone(), q, vec![Partition::universal(m); op.n()])
}

/// Renders the per-vertex restricted-growth strings, one per line.
pub fn rgs_lines(f: &CodingFunction) -> Vec<alloc::string::String> {
    f.parts
        .iter()
        .map(|p| p.rgs().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","))
        .collect()
}
