//! Outer, inner, lower and upper ranks; flats and spans; matroid tests;
//! complemented sets and the unsolvability obstruction.
//!
//! Two routes are provided for every rank. The per-subset functions
//! ([`outer_rank`], [`inner_rank`], [`lower_upper_rank`]) sweep candidate
//! sets by increasing size and return the first witness by bits, so they
//! also work on lazily evaluated operators. [`RankProfile`] tabulates all
//! four ranks at once with superset-minimum transforms.

use alloc::vec::Vec;

use crate::closure::{
    closed_sets, rank_and_bases, require_table, validate_closure, ClosureOperator,
    ValidationReport,
};
use crate::constructors::UnionKind;
use crate::error::Result;
use crate::subset::{all_subsets, Subset};

/// `ork(X) = min{|b| : X ⊆ cl(b)}` and the first such `b` by bits.
pub fn outer_rank(op: &ClosureOperator, x: Subset) -> Result<(usize, Subset)> {
    op.closure_of(x)?;
    let b = op
        .ground()
        .subsets_by_size()
        .find(|&b| x.is_subset_of(op.close(b)))
        .expect("V covers every subset of an extensive operator");
    Ok((b.len(), b))
}

/// `irk(X) = min{|b| : cl(b) = cl(X)}` and the first such `b` by bits.
pub fn inner_rank(op: &ClosureOperator, x: Subset) -> Result<(usize, Subset)> {
    let cx = op.closure_of(x)?;
    // cl(b) = cl(X) forces b ⊆ cl(X)
    let b = cx
        .subsets_by_size()
        .find(|&b| op.close(b) == cx)
        .expect("cl(X) generates itself");
    Ok((b.len(), b))
}

/// `lrk(X) = min{|Y| : cl(Y ∪ (V \ X)) = V}`, with the first minimal `Y`.
///
/// A minimal `Y` can always be taken inside `X`.
pub fn lower_rank(op: &ClosureOperator, x: Subset) -> Result<(usize, Subset)> {
    op.closure_of(x)?;
    let rest = x.complement(op.n());
    let y = x
        .subsets_by_size()
        .find(|&y| op.is_spanning(y | rest))
        .expect("X ∪ (V \\ X) = V spans");
    Ok((y.len(), y))
}

/// `urk(X) = r - lrk(V \ X)`.
pub fn upper_rank(op: &ClosureOperator, x: Subset) -> Result<usize> {
    op.closure_of(x)?;
    let r = op.rank();
    Ok(r - lower_rank(op, x.complement(op.n()))?.0)
}

/// `(lrk(X), urk(X))`.
pub fn lower_upper_rank(op: &ClosureOperator, x: Subset) -> Result<(usize, usize)> {
    Ok((lower_rank(op, x)?.0, upper_rank(op, x)?))
}

/// `urk(X) = r - min{ork(Y) : cl(X ∪ Y) = V}`, the alternate form.
pub fn upper_rank_via_outer(op: &ClosureOperator, x: Subset) -> Result<usize> {
    let profile = RankProfile::compute(op)?;
    Ok(profile.upper_rank_via_outer(x))
}

/// Every rank of every subset, tabulated.
#[derive(Debug, Clone)]
pub struct RankProfile {
    n: usize,
    rank: usize,
    closure: Vec<Subset>,
    ork: Vec<u8>,
    irk: Vec<u8>,
    lrk: Vec<u8>,
    urk: Vec<u8>,
}

const INF: u8 = u8::MAX;

fn superset_min(values: &mut [u8], n: usize) {
    for i in 0..n {
        let bit = 1usize << i;
        for x in 0..values.len() {
            if x & bit == 0 {
                let up = values[x | bit];
                if up < values[x] {
                    values[x] = up;
                }
            }
        }
    }
}

impl RankProfile {
    pub fn compute(op: &ClosureOperator) -> Result<Self> {
        let n = op.n();
        require_table(n, "rank profile")?;
        let size = 1usize << n;
        let closure = op.table()?;
        let full = op.ground();

        // smallest generator of each closed set
        let mut gen = alloc::vec![INF; size];
        for (b, &c) in closure.iter().enumerate() {
            let k = (b as u64).count_ones() as u8;
            let slot = &mut gen[c.bits() as usize];
            if k < *slot {
                *slot = k;
            }
        }
        let rank = gen[full.bits() as usize] as usize;
        let irk: Vec<u8> = closure.iter().map(|c| gen[c.bits() as usize]).collect();

        let mut ork = gen.clone();
        superset_min(&mut ork, n);

        let mut spanning: Vec<u8> = (0..size)
            .map(|z| {
                if closure[z] == full {
                    (z as u64).count_ones() as u8
                } else {
                    INF
                }
            })
            .collect();
        superset_min(&mut spanning, n);
        let lrk: Vec<u8> = (0..size)
            .map(|x| {
                let rest = !x & (size - 1);
                spanning[rest] - rest.count_ones() as u8
            })
            .collect();
        let urk: Vec<u8> = (0..size)
            .map(|x| rank as u8 - lrk[!x & (size - 1)])
            .collect();

        Ok(RankProfile {
            n,
            rank,
            closure,
            ork,
            irk,
            lrk,
            urk,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn close(&self, x: Subset) -> Subset {
        self.closure[x.bits() as usize]
    }

    #[inline]
    pub fn ork(&self, x: Subset) -> usize {
        self.ork[x.bits() as usize] as usize
    }

    #[inline]
    pub fn irk(&self, x: Subset) -> usize {
        self.irk[x.bits() as usize] as usize
    }

    #[inline]
    pub fn lrk(&self, x: Subset) -> usize {
        self.lrk[x.bits() as usize] as usize
    }

    #[inline]
    pub fn urk(&self, x: Subset) -> usize {
        self.urk[x.bits() as usize] as usize
    }

    pub fn ground(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn subsets(&self) -> impl Iterator<Item = Subset> {
        all_subsets(self.n)
    }

    /// `r - min{ork(Y) : cl(X ∪ Y) = V}`.
    pub fn upper_rank_via_outer(&self, x: Subset) -> usize {
        let full = self.ground();
        let best = self
            .subsets()
            .filter(|&y| self.close(x | y) == full)
            .map(|y| self.ork(y))
            .min()
            .expect("Y = V spans");
        self.rank - best
    }

    /// `r - min{ork(F) : F flat, cl(X ∪ F) = V}`.
    pub fn upper_rank_via_flats(&self, x: Subset) -> usize {
        let full = self.ground();
        let best = self
            .subsets()
            .filter(|&f| self.is_flat(f) && self.close(x | f) == full)
            .map(|f| self.ork(f))
            .min()
            .expect("V is a flat");
        self.rank - best
    }

    /// No single vertex can be added without raising `ork`.
    pub fn is_flat(&self, f: Subset) -> bool {
        let k = self.ork(f);
        f.complement(self.n)
            .vertices()
            .all(|v| self.ork(f.with(v)) > k)
    }

    /// No strict superset has the same outer rank.
    pub fn is_flat_by_definition(&self, f: Subset) -> bool {
        let k = self.ork(f);
        f.complement(self.n)
            .subsets()
            .filter(|s| !s.is_empty())
            .all(|s| self.ork(f | s) != k)
    }

    pub fn is_upper_flat(&self, f: Subset) -> bool {
        let k = self.urk(f);
        f.complement(self.n)
            .vertices()
            .all(|v| self.urk(f.with(v)) > k)
    }

    /// `span(X) = {v : ork(X ∪ v) = ork(X)}`.
    pub fn span(&self, x: Subset) -> Subset {
        let k = self.ork(x);
        Subset::from_vertices((1..=self.n).filter(|&v| self.ork(x.with(v)) == k))
    }

    /// `uspan(X) = {v : urk(X ∪ v) = urk(X)}`.
    pub fn upper_span(&self, x: Subset) -> Subset {
        let k = self.urk(x);
        Subset::from_vertices((1..=self.n).filter(|&v| self.urk(x.with(v)) == k))
    }

    /// Union of the flats containing `X` with the same outer rank.
    pub fn span_by_flats(&self, x: Subset) -> Subset {
        let k = self.ork(x);
        self.subsets()
            .filter(|&f| x.is_subset_of(f) && self.ork(f) == k && self.is_flat(f))
            .fold(Subset::EMPTY, |acc, f| acc | f)
    }

    pub fn flats(&self) -> Vec<Subset> {
        self.subsets().filter(|&f| self.is_flat(f)).collect()
    }

    pub fn is_outer_complemented(&self, x: Subset) -> bool {
        self.ork(x) == self.urk(x)
    }

    pub fn is_inner_complemented(&self, x: Subset) -> bool {
        self.irk(x) == self.urk(x)
    }

    /// Some `Z` disjoint from `X` with `ork(X) + ork(Z) = r` and
    /// `cl(X ∪ Z) = V`.
    pub fn has_outer_complement(&self, x: Subset) -> bool {
        let full = self.ground();
        x.complement(self.n)
            .subsets()
            .any(|z| self.ork(x) + self.ork(z) == self.rank && self.close(x | z) == full)
    }

    /// Every set of size `ork(X)` whose closure covers `X` lies in a basis.
    pub fn outer_bases_extend(&self, x: Subset) -> bool {
        let k = self.ork(x);
        self.ground()
            .subsets_of_size(k)
            .filter(|&o| x.is_subset_of(self.close(o)))
            .all(|o| self.extends_to_basis(o))
    }

    /// Every set of size `irk(X)` generating `cl(X)` lies in a basis.
    pub fn inner_bases_extend(&self, x: Subset) -> bool {
        let k = self.irk(x);
        let cx = self.close(x);
        cx.subsets_of_size(k)
            .filter(|&i| self.close(i) == cx)
            .all(|i| self.extends_to_basis(i))
    }

    fn extends_to_basis(&self, s: Subset) -> bool {
        if s.len() > self.rank {
            return false;
        }
        let full = self.ground();
        s.complement(self.n)
            .subsets_of_size(self.rank - s.len())
            .any(|z| self.close(s | z) == full)
    }
}

/// Flats: sets where adding any vertex raises the outer rank. Sorted.
pub fn flats(op: &ClosureOperator) -> Result<Vec<Subset>> {
    Ok(RankProfile::compute(op)?.flats())
}

/// `span(X)` by single-vertex sweeps.
pub fn span(op: &ClosureOperator, x: Subset) -> Result<Subset> {
    let k = outer_rank(op, x)?.0;
    let mut out = Subset::EMPTY;
    for v in 1..=op.n() {
        if outer_rank(op, x.with(v))?.0 == k {
            out = out.with(v);
        }
    }
    Ok(out)
}

/// `uspan(X)` by single-vertex sweeps.
pub fn upper_span(op: &ClosureOperator, x: Subset) -> Result<Subset> {
    let k = upper_rank(op, x)?;
    let mut out = Subset::EMPTY;
    for v in 1..=op.n() {
        if upper_rank(op, x.with(v))? == k {
            out = out.with(v);
        }
    }
    Ok(out)
}

/// A violation of Steinitz–Mac Lane exchange:
/// `u ∈ cl(X ∪ v) \ cl(X)` but `v ∉ cl(X ∪ u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExchangeWitness {
    pub set: Subset,
    pub u: usize,
    pub v: usize,
}

pub fn exchange_witness(op: &ClosureOperator) -> Result<Option<ExchangeWitness>> {
    require_table(op.n(), "exchange check")?;
    let n = op.n();
    for x in all_subsets(n) {
        let cx = op.close(x);
        for v in x.complement(n).vertices() {
            let cxv = op.close(x.with(v));
            for u in (cxv - cx).vertices() {
                if !op.close(x.with(u)).contains(v) {
                    return Ok(Some(ExchangeWitness { set: x, u, v }));
                }
            }
        }
    }
    Ok(None)
}

/// The five matroid characterizations, each evaluated independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatroidReport {
    pub exchange: bool,
    pub exchange_witness: Option<ExchangeWitness>,
    /// `cl(X) = span(X)` for all `X`.
    pub closed_eq_span: bool,
    /// Every closed set is `span(Y)` for some `Y`.
    pub closed_are_spans: bool,
    /// `cl(X) = uspan(X)` for all `X`.
    pub closed_eq_upper_span: bool,
    /// Every closed set is `uspan(Y)` for some `Y`.
    pub closed_are_upper_spans: bool,
}

impl MatroidReport {
    pub fn is_matroid(&self) -> bool {
        self.exchange
    }

    /// True when all five criteria give the same answer.
    pub fn consistent(&self) -> bool {
        let e = self.exchange;
        self.closed_eq_span == e
            && self.closed_are_spans == e
            && self.closed_eq_upper_span == e
            && self.closed_are_upper_spans == e
    }
}

pub fn matroid_check(op: &ClosureOperator) -> Result<MatroidReport> {
    let profile = RankProfile::compute(op)?;
    matroid_check_with(op, &profile)
}

pub fn matroid_check_with(op: &ClosureOperator, profile: &RankProfile) -> Result<MatroidReport> {
    let witness = exchange_witness(op)?;
    let closed = closed_sets(op)?;
    let spans: Vec<Subset> = profile.subsets().map(|x| profile.span(x)).collect();
    let uspans: Vec<Subset> = profile.subsets().map(|x| profile.upper_span(x)).collect();
    let image = |table: &[Subset]| {
        let mut v = table.to_vec();
        v.sort_unstable();
        v.dedup();
        v
    };
    let span_image = image(&spans);
    let uspan_image = image(&uspans);
    Ok(MatroidReport {
        exchange: witness.is_none(),
        exchange_witness: witness,
        closed_eq_span: profile
            .subsets()
            .all(|x| profile.close(x) == spans[x.bits() as usize]),
        closed_are_spans: closed.iter().all(|c| span_image.binary_search(c).is_ok()),
        closed_eq_upper_span: profile
            .subsets()
            .all(|x| profile.close(x) == uspans[x.bits() as usize]),
        closed_are_upper_spans: closed.iter().all(|c| uspan_image.binary_search(c).is_ok()),
    })
}

/// `(outer, inner)`: `ork(X) = urk(X)` and `irk(X) = urk(X)`.
pub fn complemented_status(op: &ClosureOperator, x: Subset) -> Result<(bool, bool)> {
    let ork = outer_rank(op, x)?.0;
    let irk = inner_rank(op, x)?.0;
    let urk = upper_rank(op, x)?;
    Ok((ork == urk, irk == urk))
}

/// Every subset is outer complemented.
pub fn is_outer_complemented(op: &ClosureOperator) -> Result<bool> {
    let p = RankProfile::compute(op)?;
    Ok(p.subsets().all(|x| p.is_outer_complemented(x)))
}

/// First `X` (by bits) that is outer complemented, whose span is outer
/// complemented and has strictly larger outer rank. Such an `X` rules out
/// solutions over every alphabet.
pub fn unsolvability_obstruction(op: &ClosureOperator) -> Result<Option<Subset>> {
    let p = RankProfile::compute(op)?;
    Ok(obstruction_in(&p))
}

pub fn obstruction_in(p: &RankProfile) -> Option<Subset> {
    p.subsets().find(|&x| {
        if !p.is_outer_complemented(x) {
            return false;
        }
        let s = p.span(x);
        p.ork(s) > p.ork(x) && p.is_outer_complemented(s)
    })
}

/// What the span operator says about solvability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanVerdict {
    /// Outer complemented, and span is not a matroid of rank `r`.
    Unsolvable,
    /// Outer complemented and span is a matroid of rank `r`: solvable iff
    /// that matroid is; deciding it is out of reach here.
    Undetermined,
    /// Not every set is outer complemented.
    NotApplicable,
}

impl SpanVerdict {
    pub fn id(self) -> &'static str {
        match self {
            SpanVerdict::Unsolvable => "unsolvable",
            SpanVerdict::Undetermined => "undetermined",
            SpanVerdict::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpanOperator {
    /// `X ↦ span(X)` as a table; may fail the closure axioms.
    pub candidate: ClosureOperator,
    pub report: ValidationReport,
    pub is_matroid: bool,
    pub rank: Option<usize>,
    pub outer_complemented: bool,
    pub verdict: SpanVerdict,
}

pub fn span_operator(op: &ClosureOperator) -> Result<SpanOperator> {
    let p = RankProfile::compute(op)?;
    let table: Vec<Subset> = p.subsets().map(|x| p.span(x)).collect();
    let candidate =
        ClosureOperator::from_table(op.n(), table, alloc::format!("span({})", op.label()))?;
    let report = validate_closure(&candidate)?;
    let is_matroid = report.is_valid() && exchange_witness(&candidate)?.is_none();
    let rank = if report.is_valid() {
        Some(rank_and_bases(&candidate)?.0)
    } else {
        None
    };
    let outer_complemented = p.subsets().all(|x| p.is_outer_complemented(x));
    let verdict = if !outer_complemented {
        SpanVerdict::NotApplicable
    } else if is_matroid && rank == Some(p.rank()) {
        SpanVerdict::Undetermined
    } else {
        SpanVerdict::Unsolvable
    };
    Ok(SpanOperator {
        candidate,
        report,
        is_matroid,
        rank,
        outer_complemented,
        verdict,
    })
}

/// First pair `(X, Y)` with `ork(X) + ork(Y) < ork(X ∪ Y) + ork(X ∩ Y)`.
pub fn outer_rank_submodularity_violation(p: &RankProfile) -> Option<(Subset, Subset)> {
    for x in p.subsets() {
        for y in p.subsets().filter(|&y| y > x) {
            if p.ork(x) + p.ork(y) < p.ork(x | y) + p.ork(x & y) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Rank of a union of operators of ranks `r1`, `r2` on `n1`, `n2` vertices.
pub fn union_rank(kind: UnionKind, n1: usize, r1: usize, n2: usize, r2: usize) -> usize {
    match kind {
        UnionKind::Disjoint | UnionKind::Unidirectional => r1 + r2,
        UnionKind::Bidirectional => (n1 + r2).min(n2 + r1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnionRanks {
    pub ork: usize,
    pub irk: usize,
    pub urk: usize,
    pub lrk: usize,
}

/// The closed-form ranks of `X` in a union, from the ranks of its parts
/// `X1 = X ∩ V1` and `X2` (shifted down to `1..n2`).
pub fn predicted_union_ranks(
    kind: UnionKind,
    p1: &RankProfile,
    p2: &RankProfile,
    x: Subset,
) -> UnionRanks {
    let (n1, n2) = (p1.n(), p2.n());
    let (r1, r2) = (p1.rank(), p2.rank());
    let (v1, v2) = (p1.ground(), p2.ground());
    let x1 = x & v1;
    let x2 = Subset::from_bits(x.bits() >> n1);
    let (k1, k2) = (x1.len(), x2.len());
    match kind {
        UnionKind::Disjoint => UnionRanks {
            ork: p1.ork(x1) + p2.ork(x2),
            irk: p1.irk(x1) + p2.irk(x2),
            urk: p1.urk(x1) + p2.urk(x2),
            lrk: p1.lrk(x1) + p2.lrk(x2),
        },
        UnionKind::Unidirectional => UnionRanks {
            ork: (r1 + p2.ork(x2)).min(p1.ork(x1) + k2),
            // an inner basis spans V1 exactly when X1 does
            irk: if p1.close(x1) == v1 {
                r1 + p2.irk(x2)
            } else {
                p1.irk(x1) + k2
            },
            urk: p1.urk(x1) + p2.urk(x2),
            lrk: p1.lrk(x1) + p2.lrk(x2),
        },
        UnionKind::Bidirectional => {
            let r = union_rank(kind, n1, r1, n2, r2);
            let spans1 = p1.close(x1) == v1;
            let spans2 = p2.close(x2) == v2;
            let irk = if (x1 == v1 && spans2) || (x2 == v2 && spans1) {
                r
            } else if x1 == v1 {
                n1 + p2.irk(x2)
            } else if x2 == v2 {
                n2 + p1.irk(x1)
            } else {
                k1 + k2
            };
            UnionRanks {
                ork: (n1 + p2.ork(x2)).min(n2 + p1.ork(x1)).min(k1 + k2),
                irk,
                urk: r - (n1 - k1 + r2 - p2.urk(x2)).min(n2 - k2 + r1 - p1.urk(x1)),
                lrk: (k1 + p2.lrk(x2)).min(k2 + p1.lrk(x1)),
            }
        }
    }
}
