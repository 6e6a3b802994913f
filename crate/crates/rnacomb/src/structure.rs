//! Diagrams and secondary structures: validation against arc-length and
//! stack-length constraints, brute-force enumeration, and the dot-bracket
//! text format.
//!
//! Vertices are 1-indexed throughout, matching the usual diagram convention,
//! and all serialized formats are 1-indexed as well.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;

/// Hard cap for the brute-force enumerator; beyond this the number of
/// noncrossing matchings makes exhaustive generation pointless.
pub const BRUTE_FORCE_CAP: usize = 14;

/// The constraint pair: minimum arc-length `lambda` and minimum stack-length `r`.
///
/// `lambda = 1` permits 1-arcs (i, i+1); `r = 1` permits isolated arcs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StructureClass {
    lambda: u32,
    r: u32,
}

impl StructureClass {
    pub fn new(lambda: u32, r: u32) -> Result<Self, Error> {
        if lambda < 1 || r < 1 {
            return Err(Error::InvalidClass { lambda, r });
        }
        Ok(Self { lambda, r })
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn r(&self) -> u32 {
        self.r
    }
}

impl fmt::Display for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(lambda={}, r={})", self.lambda, self.r)
    }
}

/// A maximal run of parallel nested arcs ((i,j), (i+1,j-1), ...).
///
/// Stacks are always derived from the arc set on demand, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stack {
    /// Outermost arc of the run.
    pub first: (usize, usize),
    /// Number of parallel arcs in the run.
    pub len: usize,
}

/// One violated constraint reported by [`SecondaryStructure::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// A vertex is an endpoint of more than one arc.
    SharedEndpoint { vertex: usize },
    /// Two arcs cross: i1 < i2 < j1 < j2.
    Crossing { first: (usize, usize), second: (usize, usize) },
    /// An arc shorter than the class minimum arc-length.
    ArcTooShort { arc: (usize, usize), len: usize, min: u32 },
    /// A maximal stack shorter than the class minimum stack-length.
    StackTooShort { stack: Stack, min: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SharedEndpoint { vertex } => {
                write!(f, "vertex {vertex} is an endpoint of more than one arc")
            }
            Violation::Crossing { first, second } => {
                write!(f, "arcs {first:?} and {second:?} cross")
            }
            Violation::ArcTooShort { arc, len, min } => {
                write!(f, "arc {arc:?} has length {len} < minimum arc-length {min}")
            }
            Violation::StackTooShort { stack, min } => write!(
                f,
                "stack at {:?} has length {} < minimum stack-length {min}",
                stack.first, stack.len
            ),
        }
    }
}

/// An arc diagram on `n` ordered vertices: a set of arcs (i, j), 1 <= i < j <= n.
///
/// Construction rejects malformed arcs (out of range, i >= j, duplicates).
/// Structural constraints (shared endpoints, crossings, arc-length,
/// stack-length) are *not* enforced at construction; [`Self::validate`]
/// reports them so that offending inputs can be diagnosed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SecondaryStructure {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

impl SecondaryStructure {
    pub fn new(n: usize, mut arcs: Vec<(usize, usize)>) -> Result<Self, Error> {
        for &(i, j) in &arcs {
            if i == 0 || j > n || i >= j {
                return Err(Error::MalformedArc { i, j, n });
            }
        }
        arcs.sort_unstable();
        for pair in arcs.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateArc { i: pair[0].0, j: pair[0].1 });
            }
        }
        Ok(Self { n, arcs })
    }

    /// The empty structure on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self { n, arcs: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Arcs sorted by left endpoint.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Maximal stacks derived from the arc set, sorted by outer arc.
    pub fn stacks(&self) -> Vec<Stack> {
        let set: std::collections::HashSet<(usize, usize)> = self.arcs.iter().copied().collect();
        let mut out = Vec::new();
        for &(i, j) in &self.arcs {
            if i > 1 && set.contains(&(i - 1, j + 1)) {
                continue; // interior arc of a larger run
            }
            let mut len = 1;
            while j >= len + 1 && set.contains(&(i + len, j - len)) {
                len += 1;
            }
            out.push(Stack { first: (i, j), len });
        }
        out
    }

    /// Every violated constraint of `class`; an empty list means the
    /// structure is r-canonical with minimum arc-length lambda.
    pub fn validate(&self, class: StructureClass) -> Vec<Violation> {
        let mut out = Vec::new();

        let mut endpoint_count: BTreeMap<usize, usize> = BTreeMap::new();
        for &(i, j) in &self.arcs {
            *endpoint_count.entry(i).or_insert(0) += 1;
            *endpoint_count.entry(j).or_insert(0) += 1;
        }
        for (&vertex, &count) in &endpoint_count {
            if count > 1 {
                out.push(Violation::SharedEndpoint { vertex });
            }
        }

        for (idx, &(i1, j1)) in self.arcs.iter().enumerate() {
            for &(i2, j2) in &self.arcs[idx + 1..] {
                if i2 >= j1 {
                    break; // arcs sorted by left endpoint; no later arc can cross
                }
                if i1 < i2 && i2 < j1 && j1 < j2 {
                    out.push(Violation::Crossing { first: (i1, j1), second: (i2, j2) });
                }
            }
        }

        for &(i, j) in &self.arcs {
            let len = j - i;
            if (len as u64) < class.lambda() as u64 {
                out.push(Violation::ArcTooShort { arc: (i, j), len, min: class.lambda() });
            }
        }

        for stack in self.stacks() {
            if (stack.len as u64) < class.r() as u64 {
                out.push(Violation::StackTooShort { stack, min: class.r() });
            }
        }

        out
    }

    /// Dot-bracket encoding: '(' and ')' for arc endpoints, '.' for unpaired.
    ///
    /// Requires distinct endpoints and noncrossing arcs; anything else is not
    /// representable in this format.
    pub fn to_dot_bracket(&self) -> Result<String, Error> {
        let mut buf = vec![b'.'; self.n];
        for &(i, j) in &self.arcs {
            if buf[i - 1] != b'.' || buf[j - 1] != b'.' {
                return Err(Error::UnencodableStructure);
            }
            buf[i - 1] = b'(';
            buf[j - 1] = b')';
        }
        // shared endpoints are caught above; crossings survive to here
        let any_crossing = self.arcs.iter().enumerate().any(|(idx, &(i1, j1))| {
            self.arcs[idx + 1..]
                .iter()
                .any(|&(i2, j2)| i1 < i2 && i2 < j1 && j1 < j2)
        });
        if any_crossing {
            return Err(Error::UnencodableStructure);
        }
        Ok(String::from_utf8(buf).expect("ascii"))
    }

    /// Parse a dot-bracket line; the inverse of [`Self::to_dot_bracket`].
    pub fn from_dot_bracket(text: &str) -> Result<Self, Error> {
        let bytes = text.as_bytes();
        let mut open: Vec<usize> = Vec::new();
        let mut arcs = Vec::new();
        for (pos, &b) in bytes.iter().enumerate() {
            match b {
                b'.' => {}
                b'(' => open.push(pos + 1),
                b')' => {
                    let i = open
                        .pop()
                        .ok_or(Error::DotBracket { pos, reason: "unmatched ')'" })?;
                    arcs.push((i, pos + 1));
                }
                _ => return Err(Error::DotBracket { pos, reason: "illegal character" }),
            }
        }
        if let Some(&pos) = open.first() {
            return Err(Error::DotBracket { pos: pos - 1, reason: "unmatched '('" });
        }
        Self::new(bytes.len(), arcs)
    }
}

/// All noncrossing partial matchings on the half-open position range
/// [lo, hi) with arc length >= lambda.
fn matchings(lo: usize, hi: usize, lambda: usize) -> Vec<Vec<(usize, usize)>> {
    if lo >= hi {
        return vec![Vec::new()];
    }
    // first position unpaired
    let mut out = matchings(lo + 1, hi, lambda);
    // first position paired to j (arc length j - lo >= lambda)
    let mut j = lo + lambda;
    while j < hi {
        let inner = matchings(lo + 1, j, lambda);
        let outer = matchings(j + 1, hi, lambda);
        for inn in &inner {
            for out_part in &outer {
                let mut arcs = Vec::with_capacity(1 + inn.len() + out_part.len());
                arcs.push((lo, j));
                arcs.extend_from_slice(inn);
                arcs.extend_from_slice(out_part);
                out.push(arcs);
            }
        }
        j += 1;
    }
    out
}

/// Exhaustively generate every valid structure of `class` on `n` vertices.
///
/// This is the certification oracle for the counting machinery; it refuses
/// n above [`BRUTE_FORCE_CAP`].
pub fn enumerate_structures(
    class: StructureClass,
    n: usize,
) -> Result<Vec<SecondaryStructure>, Error> {
    if n > BRUTE_FORCE_CAP {
        return Err(Error::BruteForceCap { n, cap: BRUTE_FORCE_CAP });
    }
    let mut out = Vec::new();
    for arcs in matchings(1, n + 1, class.lambda() as usize) {
        let s = SecondaryStructure::new(n, arcs).expect("generator emits well-formed arcs");
        let violations = s.validate(class);
        debug_assert!(
            violations
                .iter()
                .all(|v| matches!(v, Violation::StackTooShort { .. })),
            "generator must only ever trip the stack filter"
        );
        if violations.is_empty() {
            out.push(s);
        }
    }
    Ok(out)
}

/// Brute-force counts of valid structures on `n` vertices, keyed by arc count.
///
/// Every feasible arc count l = 0..floor(n/2) appears as a key, possibly
/// with count 0 for l >= 1; the l = 0 entry is always 1 (empty structure).
pub fn enumerate(class: StructureClass, n: usize) -> Result<BTreeMap<usize, u64>, Error> {
    let structures = enumerate_structures(class, n)?;
    let mut counts: BTreeMap<usize, u64> = (0..=n / 2).map(|l| (l, 0)).collect();
    for s in &structures {
        *counts.get_mut(&s.arc_count()).expect("l <= n/2") += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(lambda: u32, r: u32) -> StructureClass {
        StructureClass::new(lambda, r).unwrap()
    }

    fn s(n: usize, arcs: &[(usize, usize)]) -> SecondaryStructure {
        SecondaryStructure::new(n, arcs.to_vec()).unwrap()
    }

    #[test]
    fn class_requires_positive_parameters() {
        assert!(StructureClass::new(0, 1).is_err());
        assert!(StructureClass::new(1, 0).is_err());
        assert!(StructureClass::new(1, 1).is_ok());
        assert!(StructureClass::new(7, 5).is_ok());
    }

    #[test]
    fn malformed_arcs_rejected() {
        assert!(matches!(
            SecondaryStructure::new(3, vec![(2, 2)]),
            Err(Error::MalformedArc { .. })
        ));
        assert!(matches!(
            SecondaryStructure::new(3, vec![(3, 1)]),
            Err(Error::MalformedArc { .. })
        ));
        assert!(matches!(
            SecondaryStructure::new(3, vec![(1, 4)]),
            Err(Error::MalformedArc { .. })
        ));
        assert!(matches!(
            SecondaryStructure::new(3, vec![(0, 2)]),
            Err(Error::MalformedArc { .. })
        ));
        assert!(matches!(
            SecondaryStructure::new(4, vec![(1, 3), (1, 3)]),
            Err(Error::DuplicateArc { .. })
        ));
    }

    #[test]
    fn validate_single_one_arc() {
        assert!(s(2, &[(1, 2)]).validate(class(1, 1)).is_empty());
    }

    #[test]
    fn validate_lone_arc_is_a_short_stack() {
        let v = s(3, &[(1, 3)]).validate(class(2, 2));
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::StackTooShort { .. }));
    }

    #[test]
    fn validate_crossing() {
        let v = s(4, &[(1, 3), (2, 4)]).validate(class(2, 1));
        assert!(v.iter().any(|x| matches!(x, Violation::Crossing { .. })));
    }

    #[test]
    fn validate_two_stack_with_inner_one_arc() {
        assert!(s(4, &[(1, 4), (2, 3)]).validate(class(1, 2)).is_empty());
    }

    #[test]
    fn validate_shared_endpoint() {
        let v = s(3, &[(1, 2), (2, 3)]).validate(class(1, 1));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::SharedEndpoint { vertex: 2 })));
    }

    #[test]
    fn validate_arc_too_short() {
        let v = s(5, &[(1, 3)]).validate(class(3, 1));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::ArcTooShort { len: 2, .. })));
    }

    #[test]
    fn stacks_are_maximal_runs() {
        let st = s(8, &[(1, 8), (2, 7), (4, 5)]).stacks();
        assert_eq!(
            st,
            vec![
                Stack { first: (1, 8), len: 2 },
                Stack { first: (4, 5), len: 1 }
            ]
        );
    }

    #[test]
    fn empty_structure_valid_for_any_class() {
        for lambda in 1..=4 {
            for r in 1..=3 {
                assert!(SecondaryStructure::empty(0).validate(class(lambda, r)).is_empty());
                assert!(SecondaryStructure::empty(5).validate(class(lambda, r)).is_empty());
            }
        }
    }

    #[test]
    fn enumerate_small_cases() {
        let m: BTreeMap<usize, u64> = enumerate(class(1, 1), 2).unwrap();
        assert_eq!(m, BTreeMap::from([(0, 1), (1, 1)]));

        let m = enumerate(class(2, 1), 5).unwrap();
        assert_eq!(m[&1], 6);

        let m = enumerate(class(1, 2), 4).unwrap();
        assert_eq!(m, BTreeMap::from([(0, 1), (1, 0), (2, 1)]));

        let m = enumerate(class(2, 2), 4).unwrap();
        assert_eq!(m, BTreeMap::from([(0, 1), (1, 0), (2, 0)]));
    }

    #[test]
    fn enumerate_refuses_above_cap() {
        assert!(matches!(
            enumerate(class(1, 1), BRUTE_FORCE_CAP + 1),
            Err(Error::BruteForceCap { .. })
        ));
    }

    #[test]
    fn enumerate_counts_respect_arc_packing_bound() {
        for lambda in 1..=4u32 {
            for r in 1..=3u32 {
                for n in 0..=10usize {
                    let m = enumerate(class(lambda, r), n).unwrap();
                    let bound = (n + 1).saturating_sub(lambda as usize) / 2;
                    for (&l, &count) in &m {
                        if l > bound {
                            assert_eq!(count, 0, "class ({lambda},{r}) n={n} l={l}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn enumerate_monotone_under_tightening() {
        for n in 0..=10usize {
            let base = enumerate(class(1, 1), n).unwrap();
            for lambda in 1..=4u32 {
                for r in 1..=3u32 {
                    let tightened = enumerate(class(lambda, r), n).unwrap();
                    for (&l, &count) in &tightened {
                        assert!(count <= *base.get(&l).unwrap_or(&0));
                    }
                }
            }
        }
    }

    #[test]
    fn dot_bracket_examples() {
        assert_eq!(s(3, &[(1, 3)]).to_dot_bracket().unwrap(), "(.)");
        assert_eq!(
            SecondaryStructure::from_dot_bracket("....").unwrap(),
            SecondaryStructure::empty(4)
        );
        assert_eq!(
            SecondaryStructure::from_dot_bracket("((..))").unwrap(),
            s(6, &[(1, 6), (2, 5)])
        );
        assert_eq!(SecondaryStructure::from_dot_bracket("").unwrap(), SecondaryStructure::empty(0));
    }

    #[test]
    fn dot_bracket_rejects_bad_input() {
        assert!(matches!(
            SecondaryStructure::from_dot_bracket("(()"),
            Err(Error::DotBracket { reason: "unmatched '('", .. })
        ));
        assert!(matches!(
            SecondaryStructure::from_dot_bracket(").("),
            Err(Error::DotBracket { reason: "unmatched ')'", .. })
        ));
        assert!(matches!(
            SecondaryStructure::from_dot_bracket("(x)"),
            Err(Error::DotBracket { reason: "illegal character", .. })
        ));
    }

    #[test]
    fn dot_bracket_rejects_crossing_structure() {
        assert!(matches!(
            s(4, &[(1, 3), (2, 4)]).to_dot_bracket(),
            Err(Error::UnencodableStructure)
        ));
    }

    #[test]
    fn dot_bracket_roundtrip_over_enumeration() {
        for n in 0..=8usize {
            for st in enumerate_structures(class(1, 1), n).unwrap() {
                let text = st.to_dot_bracket().unwrap();
                assert_eq!(SecondaryStructure::from_dot_bracket(&text).unwrap(), st);
            }
        }
    }
}
