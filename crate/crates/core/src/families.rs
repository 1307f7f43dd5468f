//! Uniform set families: intersecting tests, the encoding of an
//! intersecting family as an independent set of the layer graph, stars and
//! the Hilton–Milner bound, and the "nice" family test.

use std::fmt;

use serde::Serialize;

use crate::combinatorics::{binomial, binomial_u64, BigCount};
use crate::error::{Error, Result};
use crate::graph::{LayerGraph, LayerGraphParams};
use crate::subset::{colex_rank, KSubsets, SubsetWord, MAX_GROUND};
use crate::vertex_set::VertexSet;

/// A duplicate-free family of `k`-subsets of `[n]`, kept in colex order.
///
/// For sets of equal size colex order coincides with the numeric order of
/// the bit patterns, so canonical order is a plain sort.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct KFamily {
    n: u32,
    k: u32,
    members: Vec<SubsetWord>,
}

impl KFamily {
    pub fn new<I: IntoIterator<Item = SubsetWord>>(n: u32, k: u32, members: I) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::invalid(format!("ground size {n} exceeds {MAX_GROUND}")));
        }
        if k == 0 || k > n {
            return Err(Error::invalid(format!("need 1 <= k <= n, got n={n}, k={k}")));
        }
        let ground = SubsetWord::ground(n);
        let mut members: Vec<SubsetWord> = members.into_iter().collect();
        for &set in &members {
            if set.len() != k || !set.is_subset_of(ground) {
                return Err(Error::invalid(format!("{set} is not a {k}-subset of [{n}]")));
            }
        }
        members.sort_unstable();
        if let Some(pair) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate member {}", pair[0])));
        }
        Ok(KFamily { n, k, members })
    }

    pub fn empty(n: u32, k: u32) -> Result<Self> {
        KFamily::new(n, k, [])
    }

    /// Builds a family from members already known to be valid and sorted.
    pub(crate) fn from_sorted(n: u32, k: u32, members: Vec<SubsetWord>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        KFamily { n, k, members }
    }

    /// Full star: every `k`-subset of `[n]` containing `x`.
    pub fn star(n: u32, k: u32, x: u32) -> Result<Self> {
        if x == 0 || x > n {
            return Err(Error::invalid(format!("center {x} outside [{n}]")));
        }
        let members: Vec<SubsetWord> = KSubsets::new(n, k).filter(|s| s.contains(x)).collect();
        KFamily::new(n, k, members)
    }

    /// Parses the text format: a header line `n k`, then one member per
    /// line with space-separated elements. Blank lines and `#` comments are
    /// skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `n k` header".into(),
        })?;
        let numbers = parse_numbers(header.split_whitespace(), line)?;
        let [n, k] = numbers[..] else {
            return Err(Error::Parse {
                line,
                message: format!("expected `n k`, found `{header}`"),
            });
        };
        let mut members = Vec::new();
        for (line, text) in lines {
            let elements = parse_numbers(text.split_whitespace(), line)?;
            members.push(SubsetWord::from_elements(elements).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?);
        }
        KFamily::new(n, k, members)
    }

    /// Parses the inline syntax `1,2;1,3;2,3`.
    pub fn parse_inline(spec: &str, n: u32, k: u32) -> Result<Self> {
        let mut members = Vec::new();
        for (i, part) in spec.split(';').map(str::trim).filter(|p| !p.is_empty()).enumerate() {
            let elements = parse_numbers(part.split(',').map(str::trim), i + 1)?;
            members.push(SubsetWord::from_elements(elements)?);
        }
        KFamily::new(n, k, members)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for set in &self.members {
            let elements: Vec<String> = set.elements().map(|e| e.to_string()).collect();
            out.push_str(&elements.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[SubsetWord] {
        &self.members
    }

    pub fn contains(&self, set: SubsetWord) -> bool {
        self.members.binary_search(&set).is_ok()
    }

    /// Number of members containing `x`.
    pub fn degree(&self, x: u32) -> usize {
        self.members.iter().filter(|s| s.contains(x)).count()
    }
}

impl fmt::Debug for KFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KFamily(n={}, k={}, ", self.n, self.k)?;
        f.debug_list().entries(&self.members).finish()?;
        write!(f, ")")
    }
}

fn parse_numbers<'a, I: Iterator<Item = &'a str>>(fields: I, line: usize) -> Result<Vec<u32>> {
    fields
        .map(|f| {
            f.parse::<u32>().map_err(|_| Error::Parse {
                line,
                message: format!("`{f}` is not a non-negative integer"),
            })
        })
        .collect()
}

pub fn is_intersecting(family: &KFamily) -> bool {
    disjoint_pair(family).is_none()
}

/// First disjoint pair of members in colex order, if any.
pub fn disjoint_pair(family: &KFamily) -> Option<(SubsetWord, SubsetWord)> {
    let m = family.members();
    (0..m.len())
        .flat_map(|i| (i + 1..m.len()).map(move |j| (i, j)))
        .find(|&(i, j)| !m[i].intersects(m[j]))
        .map(|(i, j)| (m[i], m[j]))
}

fn require_intersecting(family: &KFamily) -> Result<()> {
    match disjoint_pair(family) {
        Some((a, b)) => Err(Error::NotIntersecting(a.to_string(), b.to_string())),
        None => Ok(()),
    }
}

/// Most frequent element; ties go to the largest label.
pub fn frequent_element(family: &KFamily) -> Result<u32> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let (mut best, mut best_count) = (0, 0);
    for x in 1..=family.n() {
        let count = family.degree(x);
        if count >= best_count {
            best = x;
            best_count = count;
        }
    }
    Ok(best)
}

/// Image of an intersecting family in the layer graph `H(n, k, n - 2k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PhiImage {
    pub params: LayerGraphParams,
    /// The frequent element, relabeled to `n` before encoding.
    pub f: u32,
    /// Complements in `[n-1]` of members avoiding `f`: sets of `L_{k+r-1}`.
    pub a: Vec<SubsetWord>,
    /// Members containing `f`, with `f` deleted: sets of `L_{k-1}`.
    pub b: Vec<SubsetWord>,
    /// `a` as colex indices of the top layer.
    pub a_indices: VertexSet,
    /// `b` as colex indices of the bottom layer.
    pub b_indices: VertexSet,
}

impl PhiImage {
    /// No member of `b` is contained in a member of `a`.
    pub fn is_independent(&self) -> bool {
        self.a
            .iter()
            .all(|&top| self.b.iter().all(|&bottom| !bottom.is_subset_of(top)))
    }

    pub fn len(&self) -> usize {
        self.a.len() + self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }
}

/// The set-level part of φ: `(f, A, B)` with both lists sorted.
///
/// Also defined at `n = 2k`, where both layers are `L_{k-1}` and
/// containment between them is equality.
pub fn phi_sets(family: &KFamily) -> Result<(u32, Vec<SubsetWord>, Vec<SubsetWord>)> {
    let (n, k) = (family.n(), family.k());
    if n < 2 * k {
        return Err(Error::invalid(format!("need n >= 2k, got n={n}, k={k}")));
    }
    require_intersecting(family)?;
    let f = frequent_element(family)?;
    let rest = SubsetWord::ground(n - 1);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for &member in family.members() {
        let member = member.swap_elements(f, n);
        if member.contains(n) {
            b.push(member.without(n));
        } else {
            a.push(rest.difference(member));
        }
    }
    a.sort_unstable();
    b.sort_unstable();
    Ok((f, a, b))
}

pub fn phi_map(family: &KFamily) -> Result<PhiImage> {
    let params = LayerGraphParams::from_nk(family.n(), family.k())?;
    let (f, a, b) = phi_sets(family)?;
    let top_len = params.top_len() as usize;
    let bottom_len = params.bottom_len() as usize;
    let a_indices = VertexSet::from_indices(top_len, a.iter().map(|&s| colex_rank(s) as usize));
    let b_indices = VertexSet::from_indices(bottom_len, b.iter().map(|&s| colex_rank(s) as usize));
    Ok(PhiImage {
        params,
        f,
        a,
        b,
        a_indices,
        b_indices,
    })
}

/// Recovers the family from its image.
pub fn phi_inverse(image: &PhiImage) -> Result<KFamily> {
    let LayerGraphParams { n, k, .. } = image.params;
    let rest = SubsetWord::ground(n - 1);
    let members = image
        .a
        .iter()
        .map(|&top| rest.difference(top))
        .chain(image.b.iter().map(|&bottom| bottom.with(n)))
        .map(|s| s.swap_elements(image.f, n));
    KFamily::new(n, k, members)
}

/// The layer graph a family of the given shape encodes into.
pub fn phi_graph(n: u32, k: u32) -> Result<LayerGraph> {
    LayerGraph::new(LayerGraphParams::from_nk(n, k)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub trivial: bool,
    /// Elements common to every member (all of `[n]` for the empty family).
    pub centers: Vec<u32>,
    /// Set for the empty family, which is trivial only by convention.
    pub degenerate: bool,
}

pub fn classify_family(family: &KFamily) -> Classification {
    let common = family
        .members()
        .iter()
        .fold(SubsetWord::ground(family.n()), |acc, &s| acc.intersection(s));
    Classification {
        trivial: !common.is_empty(),
        centers: common.elements().collect(),
        degenerate: family.is_empty(),
    }
}

/// Extends an intersecting family greedily, scanning `k`-sets in colex
/// order and adding each one that meets every current member.
pub fn maximal_completion(family: &KFamily) -> Result<KFamily> {
    require_intersecting(family)?;
    let mut members = family.members().to_vec();
    for candidate in KSubsets::new(family.n(), family.k()) {
        if !family.contains(candidate) && members.iter().all(|m| m.intersects(candidate)) {
            members.push(candidate);
        }
    }
    KFamily::new(family.n(), family.k(), members)
}

/// True when the family is intersecting and no further `k`-set can be added.
pub fn is_maximal(family: &KFamily) -> bool {
    is_intersecting(family)
        && KSubsets::new(family.n(), family.k())
            .all(|c| family.contains(c) || family.members().iter().any(|m| !m.intersects(c)))
}

/// `C(n-1, k-1) - C(n-k-1, k-1) + 1`.
pub fn hilton_milner_bound(n: u32, k: u32) -> Result<BigCount> {
    if k == 0 || n < 2 * k + 1 {
        return Err(Error::invalid(format!("need k >= 1 and n >= 2k + 1, got n={n}, k={k}")));
    }
    let (n, k) = (u64::from(n), u64::from(k));
    Ok(binomial(n - 1, k - 1) - binomial(n - k - 1, k - 1) + 1u32)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NearestStar {
    pub center: u32,
    /// `|F Δ S_center|`, minimal over all centers.
    pub distance: u64,
    /// `1 - |F| / C(n-1, k-1)`.
    #[serde(serialize_with = "crate::report::real12")]
    pub alpha: f64,
    /// `distance / (alpha n / (n - 2k) C(n-1, k-1))`, the constant the
    /// removal lemma would need for this family. Absent when `alpha <= 0`
    /// or `n <= 2k`.
    #[serde(serialize_with = "crate::report::opt_real12")]
    pub empirical_constant: Option<f64>,
}

/// Nearest full star. `|F Δ S_x| = |F| + |S_x| - 2 deg(x)`, so the best
/// center is a most frequent element; ties go to the largest label.
pub fn nearest_star(family: &KFamily) -> NearestStar {
    let (n, k) = (family.n(), family.k());
    let star = binomial_u64(u64::from(n - 1), u64::from(k - 1));
    let center = frequent_element(family).unwrap_or(n);
    let size = family.len() as u64;
    let distance = size + star - 2 * family.degree(center) as u64;
    let alpha = 1.0 - size as f64 / star as f64;
    let empirical_constant = (alpha > 0.0 && n > 2 * k).then(|| {
        let scale = alpha * f64::from(n) / f64::from(n - 2 * k) * star as f64;
        distance as f64 / scale
    });
    NearestStar {
        center,
        distance,
        alpha,
        empirical_constant,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NiceReport {
    pub nice: bool,
    /// Every index for which both conditions hold.
    pub witnesses: Vec<u32>,
}

/// Niceness for `n = 2k + 1`: some index `i` splits the family into the
/// members avoiding `i`, whose "share `k-1` elements" graph has only
/// components of size 1 or 2, and the rest, each meeting every avoider.
pub fn is_nice(family: &KFamily) -> Result<NiceReport> {
    let (n, k) = (family.n(), family.k());
    if n != 2 * k + 1 {
        return Err(Error::invalid(format!("niceness needs n = 2k + 1, got n={n}, k={k}")));
    }
    let witnesses: Vec<u32> = (1..=n).filter(|&i| nice_at(family, i)).collect();
    Ok(NiceReport {
        nice: !witnesses.is_empty(),
        witnesses,
    })
}

fn nice_at(family: &KFamily, i: u32) -> bool {
    let (avoiding, containing): (Vec<SubsetWord>, Vec<SubsetWord>) =
        family.members().iter().partition(|s| !s.contains(i));
    let k = family.k();
    let adjacent = |x: SubsetWord, y: SubsetWord| x.intersection(y).len() == k - 1;
    // Components of size <= 2 means no vertex has two neighbors and no
    // edge touches a third vertex: every vertex has degree at most one.
    let small_components = avoiding
        .iter()
        .all(|&x| avoiding.iter().filter(|&&y| y != x && adjacent(x, y)).count() <= 1);
    small_components
        && avoiding
            .iter()
            .all(|&a| containing.iter().all(|&b| a.intersects(b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: u32, k: u32, sets: &[&[u32]]) -> KFamily {
        KFamily::new(
            n,
            k,
            sets.iter().map(|s| SubsetWord::from_elements(s.iter().copied()).unwrap()),
        )
        .unwrap()
    }

    fn triangle() -> KFamily {
        fam(5, 2, &[&[1, 2], &[1, 3], &[2, 3]])
    }

    fn fano() -> KFamily {
        fam(
            7,
            3,
            &[&[1, 2, 3], &[1, 4, 5], &[1, 6, 7], &[2, 4, 6], &[2, 5, 7], &[3, 4, 7], &[3, 5, 6]],
        )
    }

    #[test]
    fn construction_rejects_bad_members() {
        assert!(KFamily::new(4, 2, [SubsetWord::from_elements([1, 2, 3]).unwrap()]).is_err());
        assert!(KFamily::new(4, 2, [SubsetWord::from_elements([1, 5]).unwrap()]).is_err());
        let s = SubsetWord::from_elements([1, 2]).unwrap();
        assert!(KFamily::new(4, 2, [s, s]).is_err());
        assert!(KFamily::new(4, 0, []).is_err());
    }

    #[test]
    fn canonical_order_is_colex() {
        let f = fam(4, 2, &[&[3, 4], &[1, 2], &[1, 3]]);
        let ranks: Vec<u64> = f.members().iter().map(|&s| colex_rank(s)).collect();
        assert_eq!(ranks, vec![0, 1, 5]);
    }

    #[test]
    fn text_formats() {
        let f = KFamily::parse("5 2\n1 2\n# comment\n\n1 3\n2 3\n").unwrap();
        assert_eq!(f, triangle());
        assert_eq!(KFamily::parse(&f.to_text()).unwrap(), f);
        assert_eq!(KFamily::parse_inline("1,2; 1,3;2,3", 5, 2).unwrap(), f);
        assert!(matches!(KFamily::parse("5 2\n1 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(KFamily::parse("5\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn intersecting_examples() {
        assert!(is_intersecting(&KFamily::star(5, 2, 1).unwrap()));
        assert!(!is_intersecting(&fam(5, 2, &[&[1, 2], &[3, 4]])));
        assert!(is_intersecting(&fano()));
    }

    #[test]
    fn frequent_element_examples() {
        assert_eq!(frequent_element(&KFamily::star(5, 2, 1).unwrap()).unwrap(), 1);
        assert_eq!(frequent_element(&triangle()).unwrap(), 3);
        assert_eq!(frequent_element(&fam(5, 2, &[&[1, 2]])).unwrap(), 2);
        assert!(matches!(frequent_element(&KFamily::empty(5, 2).unwrap()), Err(Error::EmptyFamily)));
    }

    #[test]
    fn phi_of_triangle() {
        let image = phi_map(&triangle()).unwrap();
        assert_eq!(image.f, 3);
        let show = |v: &[SubsetWord]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(show(&image.a), vec!["{3,4}"]);
        assert_eq!(show(&image.b), vec!["{1}", "{2}"]);
        assert!(image.is_independent());
        assert_eq!(image.len(), 3);
        assert_eq!(phi_inverse(&image).unwrap(), triangle());
    }

    #[test]
    fn phi_of_star_at_n() {
        let image = phi_map(&KFamily::star(5, 2, 5).unwrap()).unwrap();
        assert!(image.a.is_empty());
        assert_eq!(image.b.len(), 4);
        assert!(phi_map(&KFamily::empty(5, 2).unwrap()).is_err());
        assert!(matches!(
            phi_map(&fam(5, 2, &[&[1, 2], &[3, 4]])),
            Err(Error::NotIntersecting(..))
        ));
        assert!(phi_map(&fam(4, 2, &[&[1, 2]])).is_err());
    }

    #[test]
    fn classification() {
        let star = KFamily::star(5, 2, 1).unwrap();
        let c = classify_family(&star);
        assert!(c.trivial && !c.degenerate);
        assert_eq!(c.centers, vec![1]);
        assert!(!classify_family(&triangle()).trivial);
        let empty = classify_family(&KFamily::empty(5, 2).unwrap());
        assert!(empty.trivial && empty.degenerate);
        assert_eq!(empty.centers.len(), 5);
    }

    #[test]
    fn completion_is_greedy_in_colex_order() {
        let done = maximal_completion(&fam(4, 2, &[&[1, 2]])).unwrap();
        assert_eq!(done, fam(4, 2, &[&[1, 2], &[1, 3], &[2, 3]]));
        assert!(is_maximal(&done));
        let from_empty = maximal_completion(&KFamily::empty(5, 2).unwrap()).unwrap();
        assert!(is_maximal(&from_empty));
        assert!(matches!(from_empty.len(), 3 | 4));
        let star = KFamily::star(5, 2, 2).unwrap();
        assert_eq!(maximal_completion(&star).unwrap(), star);
    }

    #[test]
    fn hilton_milner_values() {
        assert_eq!(hilton_milner_bound(7, 3).unwrap(), BigCount::from(13u8));
        assert_eq!(hilton_milner_bound(5, 2).unwrap(), BigCount::from(3u8));
        assert_eq!(hilton_milner_bound(6, 2).unwrap(), BigCount::from(3u8));
        assert!(hilton_milner_bound(4, 2).is_err());
    }

    #[test]
    fn nearest_star_examples() {
        let s = nearest_star(&KFamily::star(5, 2, 4).unwrap());
        assert_eq!((s.center, s.distance), (4, 0));
        assert_eq!(s.empirical_constant, None);
        let t = nearest_star(&triangle());
        assert_eq!(t.distance, 3);
        for x in 1..=3 {
            let star = KFamily::star(5, 2, x).unwrap();
            let sym = triangle().members().iter().filter(|m| !star.contains(**m)).count()
                + star.members().iter().filter(|m| !triangle().contains(**m)).count();
            assert_eq!(sym, 3);
        }
        assert!((t.alpha - 0.25).abs() < 1e-12);
        let e = nearest_star(&KFamily::empty(5, 2).unwrap());
        assert_eq!(e.distance, 4);
    }

    #[test]
    fn niceness() {
        let star = is_nice(&KFamily::star(5, 2, 3).unwrap()).unwrap();
        assert!(star.nice && star.witnesses.contains(&3));
        let single = is_nice(&fam(5, 2, &[&[1, 2]])).unwrap();
        assert!(single.nice && single.witnesses.contains(&5));
        let all_of_4 = fam(5, 2, &[&[1, 2], &[1, 3], &[2, 3], &[1, 4], &[2, 4], &[3, 4]]);
        let report = is_nice(&all_of_4).unwrap();
        assert!(!report.nice && report.witnesses.is_empty());
        assert!(is_nice(&fam(6, 2, &[&[1, 2]])).is_err());
    }
}
