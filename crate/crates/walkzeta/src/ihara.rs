//! Classical Ihara zeta machinery: Bass's determinant formula, the
//! non-backtracking (Hashimoto) arc matrix, prime-cycle enumeration, and
//! Euler-product truncations.
//!
//! These are the independent combinatorial oracles for everything else in
//! the crate: the same zeta function is reachable through
//!
//!   * Bass:  Z(u)^-1 = (1 - u^2)^(r-1) det(I - uA + u^2 (D - I)),
//!   * the arc route:  Z(u)^-1 = det(I - uB),
//!   * the Euler product over prime cycles, truncated as a power series,
//!
//! and the tests insist all three agree coefficientwise.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{self};
use crate::poly::{ComplexPolynomial, PowerSeries, ONE, ZERO};

type C = Complex64;

/// Default cap on prime-cycle enumeration length; the search grows like
/// (d - 1)^L.
pub const ENUMERATION_CAP: usize = 16;

/// The 2m x 2m non-backtracking arc adjacency: B_{ef} = 1 iff f continues e
/// without reversing (t(e) = o(f), f != e^-1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashimotoMatrix {
    pub matrix: DMatrix<i64>,
}

pub fn hashimoto_matrix(g: &Graph) -> HashimotoMatrix {
    let n = g.arc_count();
    let mut b = DMatrix::<i64>::zeros(n, n);
    for e in g.arcs() {
        for f in g.arcs() {
            if e.terminal == f.origin && f.index != g.arc_inverse(e.index) {
                b[(e.index, f.index)] = 1;
            }
        }
    }
    HashimotoMatrix { matrix: b }
}

impl HashimotoMatrix {
    pub fn to_complex(&self) -> linalg::CMatrix {
        self.matrix.map(|x| C::new(x as f64, 0.0))
    }
}

/// Reciprocal Ihara zeta by Bass's three-term determinant.
///
/// For trees r = 0 makes the (1 - u^2)^(r-1) factor rational; the
/// determinant is then divided exactly by 1 - u^2, which must (and for
/// trees does) leave no remainder.
pub fn ihara_bass(g: &Graph) -> Result<ComplexPolynomial> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let r = g.betti_number()?;
    let dd = g.adjacency_and_degree();
    let n = g.vertex_count();

    // det(I - uA + u^2 (D - I)) = det(I - uT) for the 2n x 2n companion
    // linearization T = [[A, -(D - I)], [I, 0]] of the quadratic pencil.
    let mut companion = linalg::CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            companion[(i, j)] = C::new(dd.adjacency[(i, j)], 0.0);
        }
        companion[(i, n + i)] = C::new(1.0 - dd.degrees[i] as f64, 0.0);
        companion[(n + i, i)] = ONE;
    }
    let poly = linalg::det_resolvent_poly(&companion)?;

    let one_minus_u2 = ComplexPolynomial::new(vec![ONE, ZERO, C::new(-1.0, 0.0)]);
    if r == 0 {
        poly.div_exact(&one_minus_u2, 1e-9)
    } else {
        Ok(one_minus_u2.pow(r - 1).mul(&poly))
    }
}

/// Reciprocal Ihara zeta as det(I - uB) over the Hashimoto matrix.
pub fn ihara_edge(g: &Graph) -> Result<ComplexPolynomial> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    linalg::det_resolvent_poly(&hashimoto_matrix(g).to_complex())
}

/// Prime-cycle counts per length, with one representative arc sequence per
/// length when the table came from enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeCycleTable {
    max_length: usize,
    /// counts[l - 1] = number of prime cycles of length l.
    counts: Vec<u64>,
    /// Lexicographically minimal rotation of one cycle per length;
    /// None when counts were derived from traces.
    representatives: Vec<Option<Vec<usize>>>,
}

impl PrimeCycleTable {
    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn count(&self, length: usize) -> u64 {
        if length == 0 || length > self.max_length {
            0
        } else {
            self.counts[length - 1]
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn representative(&self, length: usize) -> Option<&[usize]> {
        self.representatives
            .get(length.checked_sub(1)?)
            .and_then(|r| r.as_deref())
    }
}

/// Enumerates prime cycles (equivalence classes of primitive reduced closed
/// paths, up to rotation) of length at most `max_length` by depth-first
/// search over non-backtracking arc paths.
///
/// A class and its inverse are distinct and counted separately. Each class
/// is counted exactly once by keeping only paths equal to the minimal
/// rotation of their arc-index sequence.
pub fn prime_cycles(g: &Graph, max_length: usize) -> Result<PrimeCycleTable> {
    prime_cycles_capped(g, max_length, ENUMERATION_CAP)
}

/// As `prime_cycles` with an explicit enumeration cap override.
pub fn prime_cycles_capped(g: &Graph, max_length: usize, cap: usize) -> Result<PrimeCycleTable> {
    if max_length > cap {
        return Err(Error::LimitExceeded { requested: max_length, cap });
    }
    let mut counts = vec![0u64; max_length];
    let mut representatives: Vec<Option<Vec<usize>>> = vec![None; max_length];

    // arcs leaving each vertex
    let mut out = vec![Vec::new(); g.vertex_count()];
    for arc in g.arcs() {
        out[arc.origin].push(arc.index);
    }

    let mut path: Vec<usize> = Vec::with_capacity(max_length);
    for start in 0..g.arc_count() {
        path.push(start);
        dfs_cycles(g, &out, &mut path, start, max_length, &mut counts, &mut representatives);
        path.pop();
    }
    Ok(PrimeCycleTable { max_length, counts, representatives })
}

fn dfs_cycles(
    g: &Graph,
    out: &[Vec<usize>],
    path: &mut Vec<usize>,
    start: usize,
    max_length: usize,
    counts: &mut [u64],
    representatives: &mut [Option<Vec<usize>>],
) {
    let last = *path.last().unwrap();
    let here = g.arc(last).terminal;

    // closing the cycle: reduced requires no backtrack across the wrap
    if here == g.arc(start).origin && start != g.arc_inverse(last) {
        let len = path.len();
        if is_minimal_rotation(path) && is_primitive(path) {
            counts[len - 1] += 1;
            if representatives[len - 1].is_none() {
                representatives[len - 1] = Some(path.clone());
            }
        }
    }

    if path.len() == max_length {
        return;
    }
    for &next in &out[here] {
        if next == g.arc_inverse(last) {
            continue;
        }
        // only minimal rotations are kept, so never start below the minimum
        if next < start {
            continue;
        }
        path.push(next);
        dfs_cycles(g, out, path, start, max_length, counts, representatives);
        path.pop();
    }
}

/// True iff the sequence is the lexicographically minimal among its
/// rotations (ties broken by the total order on arc indices).
fn is_minimal_rotation(seq: &[usize]) -> bool {
    let n = seq.len();
    for shift in 1..n {
        for k in 0..n {
            let a = seq[(k + shift) % n];
            let b = seq[k];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => continue,
            }
        }
    }
    true
}

/// True iff the sequence is not a repetition of a strictly shorter block.
fn is_primitive(seq: &[usize]) -> bool {
    let n = seq.len();
    for period in 1..n {
        if n % period != 0 {
            continue;
        }
        if (period..n).all(|k| seq[k] == seq[k - period]) {
            return false;
        }
    }
    true
}

/// N_l = Tr(B^l): the number of basepointed reduced closed paths of each
/// length, exact in integer arithmetic.
pub fn reduced_cycle_counts(g: &Graph, max_length: usize) -> Vec<i64> {
    let b = hashimoto_matrix(g).matrix;
    let mut out = Vec::with_capacity(max_length);
    let mut power = b.clone();
    for l in 1..=max_length {
        if l > 1 {
            power = &power * &b;
        }
        out.push(power.trace());
    }
    out
}

/// Prime-cycle counts recovered from the trace sequence by Moebius
/// inversion of N_l = sum over d | l of d * (primes of length d).
///
/// No representatives are produced; this route stays exact on graphs far
/// too dense to enumerate.
pub fn prime_cycle_table_from_traces(g: &Graph, max_length: usize) -> Result<PrimeCycleTable> {
    let traces = reduced_cycle_counts(g, max_length);
    let mut counts = vec![0u64; max_length];
    for l in 1..=max_length {
        let mut acc: i64 = 0;
        for d in divisors(l) {
            acc += moebius(l / d) * traces[d - 1];
        }
        if acc < 0 || acc % l as i64 != 0 {
            // cannot happen for a genuine trace sequence
            return Err(Error::Parse(format!(
                "trace sequence is not a cycle count sequence at length {l}"
            )));
        }
        counts[l - 1] = (acc / l as i64) as u64;
    }
    Ok(PrimeCycleTable { max_length, counts, representatives: vec![None; max_length] })
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn moebius(n: usize) -> i64 {
    let mut n = n;
    let mut factors = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            factors += 1;
            if n % p == 0 {
                return 0;
            }
        }
        p += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Truncated Euler product over the table's prime cycles:
/// prod over lengths l of (1 - u^l)^(-count_l), modulo u^(order+1).
pub fn euler_product_series(table: &PrimeCycleTable, order: usize) -> Result<PowerSeries> {
    if table.max_length() < order {
        return Err(Error::InsufficientEnumeration { have: table.max_length(), need: order });
    }
    let mut acc = PowerSeries::one(order);
    for length in 1..=order.min(table.max_length()) {
        let count = table.count(length);
        if count == 0 {
            continue;
        }
        // (1 - x)^(-count) = sum_j binom(count + j - 1, j) x^j, x = u^length
        let mut coeffs = vec![ZERO; order + 1];
        let mut binom = 1.0f64;
        let mut j = 0usize;
        while j * length <= order {
            coeffs[j * length] = C::new(binom, 0.0);
            j += 1;
            binom = binom * (count as f64 + j as f64 - 1.0) / j as f64;
        }
        acc = acc.mul(&PowerSeries::from_coeffs(order, coeffs));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::series_log;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// det(I - uB) for K4, expanded; equals
    /// (1 - u^2)^2 (1 - u)(1 - 2u)(1 + u + 2u^2)^3.
    fn k4_golden() -> ComplexPolynomial {
        let ints = [1, 0, 0, -8, -6, 0, 16, 24, -3, -16, -24, 0, 16];
        ComplexPolynomial::new(ints.iter().map(|&k| C::new(k as f64, 0.0)).collect())
    }

    #[test]
    fn hashimoto_of_single_edge_is_zero() {
        let g = Graph::path(2).unwrap();
        let b = hashimoto_matrix(&g);
        assert!(b.matrix.iter().all(|&x| x == 0));
    }

    #[test]
    fn hashimoto_of_triangle_is_two_three_cycles() {
        let g = Graph::cycle(3).unwrap();
        let b = hashimoto_matrix(&g);
        // permutation: each row and column sums to 1, trace 0, B^3 = I
        for k in 0..6 {
            assert_eq!(b.matrix.row(k).iter().sum::<i64>(), 1);
            assert_eq!(b.matrix.column(k).iter().sum::<i64>(), 1);
        }
        assert_eq!(b.matrix.trace(), 0);
        let b3 = &b.matrix * &b.matrix * &b.matrix;
        assert_eq!(b3, DMatrix::<i64>::identity(6, 6));
    }

    #[test]
    fn hashimoto_row_sums_are_degree_minus_one() {
        let g = Graph::complete(4).unwrap();
        let b = hashimoto_matrix(&g);
        for k in 0..12 {
            assert_eq!(b.matrix.row(k).iter().sum::<i64>(), 2);
        }
    }

    #[test]
    fn bass_on_triangle() {
        let want = ComplexPolynomial::new(
            [1.0, 0.0, 0.0, -2.0, 0.0, 0.0, 1.0].iter().map(|&x| C::new(x, 0.0)).collect(),
        );
        let got = ihara_bass(&Graph::cycle(3).unwrap()).unwrap();
        assert!(got.max_coeff_deviation(&want) < 1e-11);
    }

    #[test]
    fn bass_on_k4_matches_golden() {
        let got = ihara_bass(&Graph::complete(4).unwrap()).unwrap();
        assert!(got.max_coeff_deviation(&k4_golden()) < 1e-10);
    }

    #[test]
    fn edge_route_on_k4_matches_golden() {
        let got = ihara_edge(&Graph::complete(4).unwrap()).unwrap();
        assert!(got.max_coeff_deviation(&k4_golden()) < 1e-10);
    }

    #[test]
    fn trees_have_trivial_zeta() {
        for g in [Graph::path(2).unwrap(), Graph::path(5).unwrap()] {
            let bass = ihara_bass(&g).unwrap();
            assert!(bass.max_coeff_deviation(&ComplexPolynomial::one()) < 1e-10);
            let edge = ihara_edge(&g).unwrap();
            assert!(edge.max_coeff_deviation(&ComplexPolynomial::one()) < 1e-10);
        }
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(ihara_bass(&g), Err(Error::NotConnected)));
        assert!(matches!(ihara_edge(&g), Err(Error::NotConnected)));
    }

    fn random_connected_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
        loop {
            let n = rng.random_range(2..=max_n);
            let mut edges = Vec::new();
            for v in 1..n {
                edges.push((rng.random_range(0..v), v));
            }
            let density: f64 = rng.random();
            for u in 0..n {
                for v in u + 1..n {
                    if !edges.contains(&(u, v)) && !edges.contains(&(v, u))
                        && rng.random::<f64>() < density
                    {
                        edges.push((u, v));
                    }
                }
            }
            if let Ok(g) = Graph::new(n, &edges) {
                if g.is_connected() {
                    return g;
                }
            }
        }
    }

    #[test]
    fn bass_equals_edge_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let g = random_connected_graph(&mut rng, 8);
            let bass = ihara_bass(&g).unwrap();
            let edge = ihara_edge(&g).unwrap();
            assert!(
                bass.max_coeff_deviation(&edge) < 1e-9,
                "n={} m={}",
                g.vertex_count(),
                g.edge_count()
            );
        }
    }

    #[test]
    fn prime_cycle_enumeration_small_cases() {
        let tree = prime_cycles(&Graph::path(5).unwrap(), 8).unwrap();
        assert!(tree.counts().iter().all(|&c| c == 0));

        let c3 = prime_cycles(&Graph::cycle(3).unwrap(), 6).unwrap();
        assert_eq!(c3.count(3), 2);
        assert_eq!(c3.count(6), 0);
        let rep = c3.representative(3).unwrap();
        assert_eq!(rep.len(), 3);

        let k4 = prime_cycles(&Graph::complete(4).unwrap(), 3).unwrap();
        assert_eq!(k4.count(3), 8);
    }

    #[test]
    fn enumeration_cap_enforced() {
        let g = Graph::cycle(3).unwrap();
        assert!(matches!(
            prime_cycles(&g, 17),
            Err(Error::LimitExceeded { requested: 17, cap: 16 })
        ));
        assert!(prime_cycles_capped(&g, 17, 20).is_ok());
    }

    #[test]
    fn reduced_counts_examples() {
        let tree = reduced_cycle_counts(&Graph::path(4).unwrap(), 8);
        assert!(tree.iter().all(|&x| x == 0));

        let c3 = reduced_cycle_counts(&Graph::cycle(3).unwrap(), 6);
        assert_eq!(c3[2], 6);
        assert_eq!(c3[5], 6);

        let k4 = reduced_cycle_counts(&Graph::complete(4).unwrap(), 3);
        assert_eq!(k4[2], 24);
    }

    #[test]
    fn traces_tie_enumeration_together() {
        // N_l = sum over d | l of d * pi_d, exact integers
        for g in [Graph::cycle(3).unwrap(), Graph::complete(4).unwrap()] {
            let l_max = 10;
            let table = prime_cycles(&g, l_max).unwrap();
            let traces = reduced_cycle_counts(&g, l_max);
            for l in 1..=l_max {
                let total: i64 = divisors(l)
                    .into_iter()
                    .map(|d| d as i64 * table.count(d) as i64)
                    .sum();
                assert_eq!(total, traces[l - 1], "length {l}");
            }
            // and the Moebius route reproduces the enumeration counts
            let from_traces = prime_cycle_table_from_traces(&g, l_max).unwrap();
            assert_eq!(from_traces.counts(), table.counts());
        }
    }

    #[test]
    fn euler_product_examples() {
        let empty = PrimeCycleTable {
            max_length: 8,
            counts: vec![0; 8],
            representatives: vec![None; 8],
        };
        let s = euler_product_series(&empty, 8).unwrap();
        assert!(s.max_coeff_deviation(&PowerSeries::one(8)) < 1e-15);

        // C3: (1 - u^3)^(-2) = 1 + 2u^3 + 3u^6 + ...
        let c3 = prime_cycles(&Graph::cycle(3).unwrap(), 6).unwrap();
        let s = euler_product_series(&c3, 6).unwrap();
        assert!((s.coeff(3) - C::new(2.0, 0.0)).norm() < 1e-12);
        assert!((s.coeff(6) - C::new(3.0, 0.0)).norm() < 1e-12);

        // K4 through order 8 matches the reciprocal of the Bass polynomial
        let table = prime_cycles(&Graph::complete(4).unwrap(), 8).unwrap();
        let euler = euler_product_series(&table, 8).unwrap();
        let bass = ihara_bass(&Graph::complete(4).unwrap()).unwrap();
        let recip = bass.as_series(8).reciprocal().unwrap();
        assert!(euler.max_coeff_deviation(&recip) < 1e-9);
    }

    #[test]
    fn insufficient_table_rejected() {
        let c3 = prime_cycles(&Graph::cycle(3).unwrap(), 4).unwrap();
        assert!(matches!(
            euler_product_series(&c3, 6),
            Err(Error::InsufficientEnumeration { have: 4, need: 6 })
        ));
    }

    #[test]
    fn log_of_edge_zeta_recovers_traces() {
        // coefficient l of log Z = N_l / l
        for g in [Graph::cycle(3).unwrap(), Graph::complete(4).unwrap()] {
            let order = 12;
            let edge = ihara_edge(&g).unwrap();
            let log_z = series_log(&edge, order).unwrap().scale(C::new(-1.0, 0.0));
            let traces = reduced_cycle_counts(&g, order);
            for l in 1..=order {
                let want = traces[l - 1] as f64 / l as f64;
                assert!((log_z.coeff(l) - C::new(want, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn moebius_small_values() {
        let want = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &w) in want.iter().enumerate() {
            assert_eq!(moebius(i + 1), w, "mu({})", i + 1);
        }
    }
}
