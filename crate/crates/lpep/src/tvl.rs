//! A ternary-vector-list Boolean engine.
//!
//! A [`TernaryVectorList`] denotes a Boolean function as a union of cubes:
//! each row assigns 0, 1 or dash (don't-care) to every variable, and the
//! list's solution set is the union of the assignments its rows cover. The
//! empty list is constant false. Conjunction intersects cubes pairwise,
//! disjunction concatenates rows; neither result is minimized — correctness
//! here is semantic, and orthogonalization would be an optimization, not a
//! contract.
//!
//! On top of the two connectives the module provides the function templates
//! the cover solver composes: symmetric threshold functions ("exactly k of
//! these variables are 1") and the two requirement shapes (all-or-nothing,
//! time-ordered prefix of groups).

use std::fmt;

use thiserror::Error;

/// Default cap on the width accepted by [`TernaryVectorList::solutions`].
pub const DEFAULT_ENUMERATION_BOUND: usize = 24;

/// Rows are stored as a pair of u64 masks, which caps the engine width.
pub const MAX_WIDTH: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TvlError {
    #[error("width mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },
    #[error("width {width} exceeds the {max} variable storage limit")]
    WidthTooLarge { width: usize, max: usize },
    #[error("enumeration too large: width {width} exceeds bound {bound}")]
    EnumerationTooLarge { width: usize, bound: usize },
    #[error("variable {var} out of range for width {width}")]
    VarOutOfRange { var: usize, width: usize },
    #[error("duplicate variable {var}")]
    DuplicateVar { var: usize },
    #[error("threshold {k} out of range for {n} variables")]
    ThresholdOutOfRange { k: usize, n: usize },
    #[error("requirement needs at least one variable")]
    EmptyVars,
    #[error("requirement needs at least one group")]
    EmptyGroups,
}

/// Index of one Boolean variable within a fixed-width variable table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

/// One row: for each variable either a fixed bit or a dash.
///
/// `fixed` has a 1 wherever the row pins a variable, `value` holds the
/// pinned bits (and is 0 wherever `fixed` is 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TernaryVector {
    fixed: u64,
    value: u64,
}

impl TernaryVector {
    /// All-dash row (the full cube).
    pub fn all_dash() -> Self {
        TernaryVector { fixed: 0, value: 0 }
    }

    pub fn set(&mut self, var: VarId, bit: bool) {
        let m = 1u64 << var.0;
        self.fixed |= m;
        if bit {
            self.value |= m;
        } else {
            self.value &= !m;
        }
    }

    pub fn get(&self, var: VarId) -> Option<bool> {
        let m = 1u64 << var.0;
        if self.fixed & m == 0 {
            None
        } else {
            Some(self.value & m != 0)
        }
    }

    /// True when the cubes denoted by the two rows are disjoint.
    fn conflicts(&self, other: &TernaryVector) -> bool {
        (self.value ^ other.value) & self.fixed & other.fixed != 0
    }

    /// Cube intersection; only meaningful when the rows do not conflict.
    fn merge(&self, other: &TernaryVector) -> TernaryVector {
        TernaryVector {
            fixed: self.fixed | other.fixed,
            value: self.value | other.value,
        }
    }

    /// Whether the full assignment (bit i = variable i) lies in this cube.
    pub fn covers(&self, assignment: u64) -> bool {
        (assignment ^ self.value) & self.fixed == 0
    }

    /// Parse from a string of `0`, `1` and `-`, variable 0 first.
    pub fn parse(s: &str) -> Result<Self, TvlError> {
        let mut row = TernaryVector::all_dash();
        for (i, c) in s.chars().enumerate() {
            if i >= MAX_WIDTH {
                return Err(TvlError::WidthTooLarge {
                    width: s.len(),
                    max: MAX_WIDTH,
                });
            }
            match c {
                '0' => row.set(VarId(i), false),
                '1' => row.set(VarId(i), true),
                '-' => {}
                _ => {
                    return Err(TvlError::VarOutOfRange {
                        var: i,
                        width: s.len(),
                    })
                }
            }
        }
        Ok(row)
    }
}

fn width_mask(width: usize) -> u64 {
    if width == 0 {
        0
    } else if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Key that orders assignments lexicographically by the bit of variable 0
/// first, then variable 1, and so on.
fn lex_key(assignment: u64, width: usize) -> u64 {
    if width == 0 {
        0
    } else {
        assignment.reverse_bits() >> (64 - width)
    }
}

/// A set of ternary rows over a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryVectorList {
    width: usize,
    rows: Vec<TernaryVector>,
}

impl TernaryVectorList {
    pub fn new(width: usize, rows: Vec<TernaryVector>) -> Result<Self, TvlError> {
        if width > MAX_WIDTH {
            return Err(TvlError::WidthTooLarge {
                width,
                max: MAX_WIDTH,
            });
        }
        let mask = width_mask(width);
        for row in &rows {
            if row.fixed & !mask != 0 {
                return Err(TvlError::VarOutOfRange {
                    var: (63 - (row.fixed & !mask).leading_zeros()) as usize,
                    width,
                });
            }
        }
        Ok(TernaryVectorList { width, rows })
    }

    /// Constant false: no rows.
    pub fn constant_false(width: usize) -> Self {
        TernaryVectorList {
            width,
            rows: Vec::new(),
        }
    }

    /// Constant true: the single all-dash row.
    pub fn constant_true(width: usize) -> Self {
        TernaryVectorList {
            width,
            rows: vec![TernaryVector::all_dash()],
        }
    }

    /// Parse rows like `["1-0", "01-"]`; all strings must share one length.
    pub fn parse(rows: &[&str]) -> Result<Self, TvlError> {
        let width = rows.first().map_or(0, |r| r.len());
        let mut parsed = Vec::with_capacity(rows.len());
        for r in rows {
            if r.len() != width {
                return Err(TvlError::WidthMismatch {
                    left: width,
                    right: r.len(),
                });
            }
            parsed.push(TernaryVector::parse(r)?);
        }
        Self::new(width, parsed)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[TernaryVector] {
        &self.rows
    }

    pub fn is_constant_false(&self) -> bool {
        self.rows.is_empty()
    }

    /// Conjunction: pairwise cube intersection, clashing pairs dropped.
    pub fn and(&self, other: &TernaryVectorList) -> Result<TernaryVectorList, TvlError> {
        if self.width != other.width {
            return Err(TvlError::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        let mut rows = Vec::new();
        for a in &self.rows {
            for b in &other.rows {
                if !a.conflicts(b) {
                    rows.push(a.merge(b));
                }
            }
        }
        Ok(TernaryVectorList {
            width: self.width,
            rows,
        })
    }

    /// Disjunction: row concatenation (no minimization).
    pub fn or(&self, other: &TernaryVectorList) -> Result<TernaryVectorList, TvlError> {
        if self.width != other.width {
            return Err(TvlError::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        Ok(TernaryVectorList {
            width: self.width,
            rows,
        })
    }

    /// Whether any row covers the given full assignment.
    pub fn contains(&self, assignment: u64) -> bool {
        self.rows.iter().any(|r| r.covers(assignment))
    }

    /// All satisfying total assignments, deduplicated, in lexicographic
    /// order (variable 0 varies slowest). Uses the default width bound.
    pub fn solutions(&self) -> Result<Vec<u64>, TvlError> {
        self.solutions_bounded(DEFAULT_ENUMERATION_BOUND)
    }

    /// As [`solutions`](Self::solutions) with an explicit width bound.
    pub fn solutions_bounded(&self, bound: usize) -> Result<Vec<u64>, TvlError> {
        if self.width > bound {
            return Err(TvlError::EnumerationTooLarge {
                width: self.width,
                bound,
            });
        }
        let mask = width_mask(self.width);
        let mut out = Vec::new();
        for row in &self.rows {
            let free = !row.fixed & mask;
            // iterate all subsets of the free bits
            let mut sub = 0u64;
            loop {
                out.push(row.value | sub);
                if sub == free {
                    break;
                }
                sub = (sub.wrapping_sub(free)) & free;
            }
        }
        out.sort_by_key(|&a| lex_key(a, self.width));
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for TernaryVectorList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for v in 0..self.width {
                match row.get(VarId(v)) {
                    Some(true) => write!(f, "1")?,
                    Some(false) => write!(f, "0")?,
                    None => write!(f, "-")?,
                }
            }
        }
        Ok(())
    }
}

fn check_vars(vars: &[VarId], width: usize) -> Result<(), TvlError> {
    let mut seen = 0u64;
    for v in vars {
        if v.0 >= width {
            return Err(TvlError::VarOutOfRange {
                var: v.0,
                width,
            });
        }
        let m = 1u64 << v.0;
        if seen & m != 0 {
            return Err(TvlError::DuplicateVar { var: v.0 });
        }
        seen |= m;
    }
    Ok(())
}

/// The symmetric threshold function: true exactly when `k` of `vars` are 1.
/// Variables outside `vars` stay dash. Represented as one row per
/// k-combination, which is the minimal cube cover of a symmetric function.
pub fn symmetric(vars: &[VarId], k: usize, width: usize) -> Result<TernaryVectorList, TvlError> {
    check_vars(vars, width)?;
    if k > vars.len() {
        return Err(TvlError::ThresholdOutOfRange { k, n: vars.len() });
    }
    let mut rows = Vec::new();
    let mut chosen = vec![false; vars.len()];
    build_combinations(vars, k, 0, &mut chosen, &mut rows);
    TernaryVectorList::new(width, rows)
}

fn build_combinations(
    vars: &[VarId],
    remaining: usize,
    from: usize,
    chosen: &mut Vec<bool>,
    rows: &mut Vec<TernaryVector>,
) {
    if vars.len() - from < remaining {
        return;
    }
    if from == vars.len() {
        let mut row = TernaryVector::all_dash();
        for (i, v) in vars.iter().enumerate() {
            row.set(*v, chosen[i]);
        }
        rows.push(row);
        return;
    }
    if remaining > 0 {
        chosen[from] = true;
        build_combinations(vars, remaining - 1, from + 1, chosen, rows);
        chosen[from] = false;
    }
    build_combinations(vars, remaining, from + 1, chosen, rows);
}

/// Accept every variable or none: two rows, `1…1` and `0…0` over `vars`.
pub fn requirement_all_or_nothing(
    vars: &[VarId],
    width: usize,
) -> Result<TernaryVectorList, TvlError> {
    if vars.is_empty() {
        return Err(TvlError::EmptyVars);
    }
    check_vars(vars, width)?;
    let mut all_on = TernaryVector::all_dash();
    let mut all_off = TernaryVector::all_dash();
    for v in vars {
        all_on.set(*v, true);
        all_off.set(*v, false);
    }
    TernaryVectorList::new(width, vec![all_off, all_on])
}

/// Accept a time-ordered prefix of whole groups: for some `p`, groups
/// `0..p` are fully 1 and the rest fully 0. One row per prefix length,
/// `groups.len() + 1` rows in total.
pub fn requirement_prefix(
    groups: &[Vec<VarId>],
    width: usize,
) -> Result<TernaryVectorList, TvlError> {
    if groups.is_empty() || groups.iter().any(|g| g.is_empty()) {
        return Err(TvlError::EmptyGroups);
    }
    let flat: Vec<VarId> = groups.iter().flatten().copied().collect();
    check_vars(&flat, width)?;
    let mut rows = Vec::with_capacity(groups.len() + 1);
    for p in 0..=groups.len() {
        let mut row = TernaryVector::all_dash();
        for (gi, group) in groups.iter().enumerate() {
            for v in group {
                row.set(*v, gi < p);
            }
        }
        rows.push(row);
    }
    TernaryVectorList::new(width, rows)
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn oracle(tvl: &TernaryVectorList) -> Vec<u64> {
        (0..(1u64 << tvl.width()))
            .filter(|&a| tvl.contains(a))
            .collect()
    }

    fn sorted(mut v: Vec<u64>) -> Vec<u64> {
        v.sort_unstable();
        v
    }

    fn arb_tvl(width: usize) -> impl Strategy<Value = TernaryVectorList> {
        proptest::collection::vec(
            proptest::collection::vec(0u8..3, width),
            0..6,
        )
        .prop_map(move |rows| {
            let rows = rows
                .into_iter()
                .map(|trits| {
                    let mut row = TernaryVector::all_dash();
                    for (i, t) in trits.iter().enumerate() {
                        match t {
                            0 => row.set(VarId(i), false),
                            1 => row.set(VarId(i), true),
                            _ => {}
                        }
                    }
                    row
                })
                .collect();
            TernaryVectorList::new(width, rows).unwrap()
        })
    }

    proptest! {
        #[test]
        fn and_matches_set_intersection((a, b) in (1usize..=8).prop_flat_map(|w| (arb_tvl(w), arb_tvl(w)))) {
            let c = a.and(&b).unwrap();
            let expect: Vec<u64> = oracle(&a)
                .into_iter()
                .filter(|x| b.contains(*x))
                .collect();
            prop_assert_eq!(sorted(c.solutions().unwrap()), expect);
        }

        #[test]
        fn or_matches_set_union((a, b) in (1usize..=8).prop_flat_map(|w| (arb_tvl(w), arb_tvl(w)))) {
            let c = a.or(&b).unwrap();
            let mut expect = oracle(&a);
            expect.extend(oracle(&b));
            expect.sort_unstable();
            expect.dedup();
            prop_assert_eq!(sorted(c.solutions().unwrap()), expect);
        }

        #[test]
        fn and_is_semantically_commutative_and_associative(
            (a, b, c) in (1usize..=6).prop_flat_map(|w| (arb_tvl(w), arb_tvl(w), arb_tvl(w)))
        ) {
            let ab = a.and(&b).unwrap();
            let ba = b.and(&a).unwrap();
            prop_assert_eq!(ab.solutions().unwrap(), ba.solutions().unwrap());
            let left = ab.and(&c).unwrap();
            let right = a.and(&b.and(&c).unwrap()).unwrap();
            prop_assert_eq!(left.solutions().unwrap(), right.solutions().unwrap());
        }

        #[test]
        fn symmetric_solution_count(width in 1usize..=8, k in 0usize..=8) {
            prop_assume!(k <= width);
            let vars: Vec<VarId> = (0..width).map(VarId).collect();
            let s = symmetric(&vars, k, width).unwrap();
            let n = s.solutions().unwrap().len();
            let binomial = (0..k).fold(1usize, |acc, i| acc * (width - i) / (i + 1));
            prop_assert_eq!(n, binomial);
        }

        #[test]
        fn prefix_group_level_solution_count(sizes in proptest::collection::vec(1usize..=3, 1..=4)) {
            let mut groups = Vec::new();
            let mut next = 0;
            for s in &sizes {
                groups.push((next..next + s).map(VarId).collect::<Vec<_>>());
                next += s;
            }
            let r = requirement_prefix(&groups, next).unwrap();
            prop_assert_eq!(r.solutions().unwrap().len(), sizes.len() + 1);
        }
    }
}
