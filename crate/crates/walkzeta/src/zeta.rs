//! Zeta functions of finite graphs built from walk evolution matrices.
//!
//! The reciprocal zeta is det(I - uU). For U = SC it factors through an
//! n-dimensional vertex pencil; for U = C1 C2 through the p x p pencil
//! K = d1 d2* d2 d1*:
//!
//!   det(I - uU) = (1 - b1 b2 u)^(2m-p-q) (1 - a2 b1 u)^(q-p)
//!                 det((1 - a1 b2 u)(1 - a2 b1 u) I_p - c1 c2 u K)
//!
//! with c_i = a_i - b_i, p <= q. The same factorization evaluated at
//! u = 1/lambda gives the characteristic polynomial in closed form, and its
//! roots give the full spectrum with multiplicities 2p, q-p and 2m-p-q.
//! Every factored result here is checked against the direct dense
//! determinant in the tests; none of these identities needs unit-modulus
//! parameters — they are polynomial identities in (a_i, b_i).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{self, CMatrix};
use crate::poly::{ComplexPolynomial, PowerSeries, ONE, ZERO};
use crate::walk::{shift_matrix, CoinParams, Isometry};

type C = Complex64;

/// How a reciprocal zeta polynomial was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaMethod {
    /// Dense det(I - uU).
    Direct,
    /// Factored form for U = SC.
    FactoredSingleCoin,
    /// Factored form for U = C1 C2.
    FactoredTwoCoin,
}

impl ZetaMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ZetaMethod::Direct => "direct",
            ZetaMethod::FactoredSingleCoin => "factored-single-coin",
            ZetaMethod::FactoredTwoCoin => "factored-two-coin",
        }
    }
}

/// Exponents and pencil of a factored reciprocal zeta.
#[derive(Debug, Clone)]
pub struct Factorization {
    /// Exponent of the (1 - b1 b2 u) scalar factor (2m - p - q). Negative
    /// when p + q exceeds the arc count (vertex builders on trees); the
    /// pencil determinant is then exactly divisible by the deficit power.
    pub scalar_exponent: i64,
    /// Exponent of the (1 - a2 b1 u) scalar factor (q - p).
    pub cross_exponent: usize,
    /// The pencil matrix: d S d* (single coin) or d1 d2* d2 d1* (two coin).
    pub pencil: CMatrix,
    /// Set when the two coins were exchanged to keep q >= p
    /// (det(I - u C1 C2) = det(I - u C2 C1)).
    pub swapped: bool,
}

/// A reciprocal zeta polynomial det(I - uU) with provenance.
#[derive(Debug, Clone)]
pub struct ZetaResult {
    pub reciprocal: ComplexPolynomial,
    pub method: ZetaMethod,
    pub factorization: Option<Factorization>,
}

/// det(I - uU) for an explicit evolution matrix.
pub fn zeta_reciprocal_direct(u: &CMatrix) -> Result<ZetaResult> {
    let reciprocal = linalg::det_resolvent_poly(u)?;
    Ok(ZetaResult { reciprocal, method: ZetaMethod::Direct, factorization: None })
}

/// Factored det(I - uSC) for a single-coin walk:
/// (1 - b^2 u^2)^(m - q) det((1 - a b u^2) I_q - c u d S d*), q = rank d.
pub fn zeta_reciprocal_single_coin(
    g: &Graph,
    d: &Isometry,
    params: CoinParams,
) -> Result<ZetaResult> {
    if d.arc_dim() != g.arc_count() {
        return Err(Error::DimensionMismatch(format!(
            "isometry covers {} arcs, graph has {}",
            d.arc_dim(),
            g.arc_count()
        )));
    }
    let m = g.edge_count();
    let q = d.rank();
    let (a, b) = (params.a, params.b);
    let c = params.c();
    let pencil = d.matrix() * shift_matrix(g) * d.matrix().adjoint();

    // (1 - abu^2) I_q - cu * pencil
    let alpha = ComplexPolynomial::new(vec![ONE, ZERO, -a * b]);
    let beta = ComplexPolynomial::linear(ZERO, c);
    let pencil_det = linalg::affine_pencil_det(&alpha, &beta, &pencil)?;

    let scalar = ComplexPolynomial::new(vec![ONE, ZERO, -b * b]).pow(m - q.min(m));
    let reciprocal = if q > m {
        // q in (m, 2m]: the exponent m - q is negative; divide exactly
        let divisor = ComplexPolynomial::new(vec![ONE, ZERO, -b * b]).pow(q - m);
        pencil_det.div_exact(&divisor, 1e-9)?
    } else {
        scalar.mul(&pencil_det)
    };

    Ok(ZetaResult {
        reciprocal,
        method: ZetaMethod::FactoredSingleCoin,
        factorization: Some(Factorization {
            scalar_exponent: m as i64 - q as i64,
            cross_exponent: 0,
            pencil,
            swapped: false,
        }),
    })
}

struct TwoCoinData {
    arc_count: usize,
    p: usize,
    q: usize,
    a1: C,
    b1: C,
    a2: C,
    b2: C,
    pencil: CMatrix,
    swapped: bool,
}

/// Orders the two coins so that q >= p and forms the p x p pencil.
fn two_coin_data(
    g: &Graph,
    d1: &Isometry,
    p1: CoinParams,
    d2: &Isometry,
    p2: CoinParams,
) -> Result<TwoCoinData> {
    for d in [d1, d2] {
        if d.arc_dim() != g.arc_count() {
            return Err(Error::DimensionMismatch(format!(
                "isometry covers {} arcs, graph has {}",
                d.arc_dim(),
                g.arc_count()
            )));
        }
    }
    let swapped = d2.rank() < d1.rank();
    let (da, pa, db, pb) =
        if swapped { (d2, p2, d1, p1) } else { (d1, p1, d2, p2) };
    let cross = da.matrix() * db.matrix().adjoint();
    Ok(TwoCoinData {
        arc_count: g.arc_count(),
        p: da.rank(),
        q: db.rank(),
        a1: pa.a,
        b1: pa.b,
        a2: pb.a,
        b2: pb.b,
        pencil: &cross * cross.adjoint(),
        swapped,
    })
}

/// Factored det(I - u C1 C2) for a two-coin walk.
///
/// When rank d2 < rank d1 the coins are exchanged first (same determinant),
/// recorded in the factorization diagnostics.
pub fn zeta_reciprocal_two_coin(
    g: &Graph,
    d1: &Isometry,
    p1: CoinParams,
    d2: &Isometry,
    p2: CoinParams,
) -> Result<ZetaResult> {
    let t = two_coin_data(g, d1, p1, d2, p2)?;
    let c1c2 = (t.a1 - t.b1) * (t.a2 - t.b2);

    let lin = |z: C| ComplexPolynomial::linear(ONE, -z);
    let alpha = lin(t.a1 * t.b2).mul(&lin(t.a2 * t.b1));
    let beta = ComplexPolynomial::linear(ZERO, c1c2);
    let pencil_det = linalg::affine_pencil_det(&alpha, &beta, &t.pencil)?;

    let scalar_exponent = t.arc_count as i64 - t.p as i64 - t.q as i64;
    let cross_exponent = t.q - t.p;
    let with_cross = lin(t.a2 * t.b1).pow(cross_exponent).mul(&pencil_det);
    let reciprocal = apply_signed_power(&with_cross, &lin(t.b1 * t.b2), scalar_exponent)?;

    Ok(ZetaResult {
        reciprocal,
        method: ZetaMethod::FactoredTwoCoin,
        factorization: Some(Factorization {
            scalar_exponent,
            cross_exponent,
            pencil: t.pencil,
            swapped: t.swapped,
        }),
    })
}

/// base * factor^exponent, where a negative exponent is an exact division
/// (the factored formulas guarantee divisibility).
fn apply_signed_power(
    base: &ComplexPolynomial,
    factor: &ComplexPolynomial,
    exponent: i64,
) -> Result<ComplexPolynomial> {
    if exponent >= 0 {
        Ok(base.mul(&factor.pow(exponent as usize)))
    } else {
        base.div_exact(&factor.pow((-exponent) as usize), 1e-9)
    }
}

/// Closed-form characteristic polynomial det(lambda I - U) of U = C1 C2:
/// (lambda - b1 b2)^(2m-p-q) (lambda - a2 b1)^(q-p)
/// det((lambda - a1 b2)(lambda - a2 b1) I_p - c1 c2 lambda K).
pub fn char_poly_two_coin(
    g: &Graph,
    d1: &Isometry,
    p1: CoinParams,
    d2: &Isometry,
    p2: CoinParams,
) -> Result<ComplexPolynomial> {
    let t = two_coin_data(g, d1, p1, d2, p2)?;
    let c1c2 = (t.a1 - t.b1) * (t.a2 - t.b2);

    let lin = |z: C| ComplexPolynomial::linear(-z, ONE);
    let alpha = lin(t.a1 * t.b2).mul(&lin(t.a2 * t.b1));
    let beta = ComplexPolynomial::linear(ZERO, c1c2);
    let pencil_det = linalg::affine_pencil_det(&alpha, &beta, &t.pencil)?;

    let scalar_exponent = t.arc_count as i64 - t.p as i64 - t.q as i64;
    let with_cross = lin(t.a2 * t.b1).pow(t.q - t.p).mul(&pencil_det);
    apply_signed_power(&with_cross, &lin(t.b1 * t.b2), scalar_exponent)
}

/// Provenance of one eigenvalue in the closed-form spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EigenClass {
    /// Root of lambda^2 - (a1 b2 + a2 b1 + c1 c2 mu) lambda + a1 a2 b1 b2
    /// for mu in Spec(d1 d2* d2 d1*); 2p eigenvalues in total.
    QuadraticPair { mu: C },
    /// b1 a2, multiplicity q - p.
    B1A2,
    /// b1 b2, multiplicity 2m - p - q.
    B1B2,
}

/// One eigenvalue of U = C1 C2 with its provenance class.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumEntry {
    pub value: C,
    pub class: EigenClass,
}

/// Closed-form spectrum of a two-coin walk with multiplicity accounting.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub entries: Vec<SpectrumEntry>,
    /// p = rank of the first (possibly swapped) isometry.
    pub p: usize,
    /// q = rank of the second.
    pub q: usize,
    /// Arc count 2m.
    pub arc_count: usize,
    pub swapped: bool,
}

impl SpectrumReport {
    pub fn values(&self) -> Vec<C> {
        let mut v: Vec<C> = self.entries.iter().map(|e| e.value).collect();
        linalg::sort_eigenvalues(&mut v);
        v
    }

    /// (2p, q - p, 2m - p - q): always sums to the arc count. The last
    /// entry goes negative exactly when unit pencil eigenvalues cancel
    /// quadratic roots against the b1 b2 class.
    pub fn multiplicity_ledger(&self) -> (i64, i64, i64) {
        let (p, q, r) = (self.p as i64, self.q as i64, self.arc_count as i64);
        (2 * p, q - p, r - p - q)
    }
}

/// Spectrum of U = C1 C2 in closed form: for each eigenvalue mu of the
/// pencil, the two roots of
/// (lambda - a1 b2)(lambda - a2 b1) - c1 c2 mu lambda = 0,
/// plus b1 a2 with multiplicity q - p and b1 b2 with multiplicity 2m - p - q.
pub fn spectrum_two_coin(
    g: &Graph,
    d1: &Isometry,
    p1: CoinParams,
    d2: &Isometry,
    p2: CoinParams,
) -> Result<SpectrumReport> {
    let t = two_coin_data(g, d1, p1, d2, p2)?;
    let c1c2 = (t.a1 - t.b1) * (t.a2 - t.b2);
    let product = t.a1 * t.a2 * t.b1 * t.b2;

    let mut entries = Vec::with_capacity(t.arc_count);
    for mu in linalg::eigenvalues(&t.pencil)? {
        // lambda^2 - (a1 b2 + a2 b1 + c1 c2 mu) lambda + a1 a2 b1 b2 = 0
        let trace = t.a1 * t.b2 + t.a2 * t.b1 + c1c2 * mu;
        let disc = (trace * trace - product.scale(4.0)).sqrt();
        for root in [(trace + disc).scale(0.5), (trace - disc).scale(0.5)] {
            entries.push(SpectrumEntry { value: root, class: EigenClass::QuadraticPair { mu } });
        }
    }
    // p + q > 2m: unit pencil eigenvalues produce b1 b2 roots that the
    // negative b1 b2 multiplicity cancels
    let deficit = (t.p + t.q).saturating_sub(t.arc_count);
    let b1b2 = t.b1 * t.b2;
    for _ in 0..deficit {
        let (idx, dist) = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (i, (e.value - b1b2).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("2p quadratic roots with p >= deficit");
        debug_assert!(dist < 1e-6, "cancelled root should equal b1 b2, off by {dist:.3e}");
        entries.swap_remove(idx);
    }
    for _ in 0..(t.q - t.p) {
        entries.push(SpectrumEntry { value: t.b1 * t.a2, class: EigenClass::B1A2 });
    }
    for _ in 0..(t.arc_count + deficit - t.p - t.q) {
        entries.push(SpectrumEntry { value: b1b2, class: EigenClass::B1B2 });
    }

    Ok(SpectrumReport {
        entries,
        p: t.p,
        q: t.q,
        arc_count: t.arc_count,
        swapped: t.swapped,
    })
}

/// log zeta as a power series: coefficient of u^k is Tr(U^k) / k,
/// so that the series equals -log det(I - uU) through the given order.
pub fn log_zeta_series(u: &CMatrix, order: usize) -> Result<PowerSeries> {
    let k = u.nrows();
    if u.ncols() != k {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    linalg::check_finite(u)?;
    let mut coeffs = vec![ZERO; order + 1];
    let mut power = CMatrix::identity(k, k);
    for step in 1..=order {
        power = &power * u;
        coeffs[step] = power.trace() / C::new(step as f64, 0.0);
    }
    Ok(PowerSeries::from_coeffs(order, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::series_log;
    use crate::walk::{
        coin_operator, evolution, origin_grover_isometry, random_isometry,
        terminal_grover_isometry, WalkSpec,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn phase(t: f64) -> C {
        c(t.cos(), t.sin())
    }

    fn random_params(rng: &mut ChaCha8Rng) -> CoinParams {
        let two_pi = 2.0 * std::f64::consts::PI;
        CoinParams::new(phase(rng.random::<f64>() * two_pi), phase(rng.random::<f64>() * two_pi))
            .unwrap()
    }

    /// (1 - u^3)^2 expanded.
    fn one_minus_u_cubed_squared() -> ComplexPolynomial {
        ComplexPolynomial::new(vec![ONE, ZERO, ZERO, c(-2.0, 0.0), ZERO, ZERO, ONE])
    }

    #[test]
    fn direct_zeta_of_triangle_grover_walk() {
        let g = Graph::cycle(3).unwrap();
        let d = origin_grover_isometry(&g).unwrap();
        let spec = WalkSpec::shift_coin(g, d, CoinParams::grover()).unwrap();
        let z = zeta_reciprocal_direct(&evolution(&spec)).unwrap();
        assert!(z.reciprocal.max_coeff_deviation(&one_minus_u_cubed_squared()) < 1e-10);
        assert_eq!(z.reciprocal.coeff(0), ONE);
    }

    #[test]
    fn single_coin_factored_matches_direct_on_triangle() {
        let g = Graph::cycle(3).unwrap();
        let d = origin_grover_isometry(&g).unwrap();
        let z = zeta_reciprocal_single_coin(&g, &d, CoinParams::grover()).unwrap();
        assert!(z.reciprocal.max_coeff_deviation(&one_minus_u_cubed_squared()) < 1e-10);
    }

    #[test]
    fn single_coin_factored_matches_direct_on_k4() {
        let g = Graph::complete(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for q in [2usize, 4, 6, 12] {
            let d = random_isometry(q, &g, 300 + q as u64).unwrap();
            let params = random_params(&mut rng);
            let spec = WalkSpec::shift_coin(g.clone(), d.clone(), params).unwrap();
            let direct = zeta_reciprocal_direct(&evolution(&spec)).unwrap();
            let fact = zeta_reciprocal_single_coin(&g, &d, params).unwrap();
            assert!(
                fact.reciprocal.max_coeff_deviation(&direct.reciprocal) < 1e-10,
                "q={q}"
            );
        }
    }

    #[test]
    fn single_coin_degenerate_params_has_no_graph_dependence() {
        // a = b: the pencil collapses and the result is scalar
        let g = Graph::complete(4).unwrap();
        let d = origin_grover_isometry(&g).unwrap();
        let a = phase(0.9);
        let params = CoinParams::new_unchecked(a, a);
        let z = zeta_reciprocal_single_coin(&g, &d, params).unwrap();
        let factor = ComplexPolynomial::new(vec![ONE, ZERO, -a * a]);
        let want = factor.pow(2).mul(&factor.pow(4));
        assert!(z.reciprocal.max_coeff_deviation(&want) < 1e-12);
    }

    #[test]
    fn two_coin_factored_matches_direct_grover_pair_on_triangle() {
        let g = Graph::cycle(3).unwrap();
        let d1 = origin_grover_isometry(&g).unwrap();
        let d2 = terminal_grover_isometry(&g).unwrap();
        let gr = CoinParams::grover();
        let spec =
            WalkSpec::two_coin(g.clone(), d1.clone(), gr, d2.clone(), gr).unwrap();
        let direct = zeta_reciprocal_direct(&evolution(&spec)).unwrap();
        let fact = zeta_reciprocal_two_coin(&g, &d1, gr, &d2, gr).unwrap();
        assert!(fact.reciprocal.max_coeff_deviation(&direct.reciprocal) < 1e-10);
    }

    #[test]
    fn two_coin_factored_matches_direct_on_k4_random_instances() {
        let g = Graph::complete(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for seed in 1..=20u64 {
            let p = rng.random_range(1..=4usize);
            let q = rng.random_range(1..=4usize);
            let d1 = random_isometry(p, &g, seed).unwrap();
            let d2 = random_isometry(q, &g, seed + 1000).unwrap();
            let (p1, p2) = (random_params(&mut rng), random_params(&mut rng));
            let spec =
                WalkSpec::two_coin(g.clone(), d1.clone(), p1, d2.clone(), p2).unwrap();
            let direct = zeta_reciprocal_direct(&evolution(&spec)).unwrap();
            let fact = zeta_reciprocal_two_coin(&g, &d1, p1, &d2, p2).unwrap();
            let dev = fact.reciprocal.max_coeff_deviation(&direct.reciprocal);
            assert!(dev < 1e-8, "seed {seed}: deviation {dev:.3e}");
            assert_eq!(fact.factorization.as_ref().unwrap().swapped, q < p);
        }
    }

    #[test]
    fn two_coin_scalar_first_coin() {
        // c1 = 0: C1 = a1 I, so det(I - uU) = det(I - u a1 C2)
        let g = Graph::cycle(3).unwrap();
        let a1 = phase(1.1);
        let p1 = CoinParams::new_unchecked(a1, a1);
        let d1 = random_isometry(2, &g, 5).unwrap();
        let d2 = random_isometry(3, &g, 6).unwrap();
        let p2 = CoinParams::new(phase(0.3), phase(2.2)).unwrap();
        let fact = zeta_reciprocal_two_coin(&g, &d1, p1, &d2, p2).unwrap();
        let u = coin_operator(&d2, p2).map(|z| z * a1);
        let direct = zeta_reciprocal_direct(&u).unwrap();
        assert!(fact.reciprocal.max_coeff_deviation(&direct.reciprocal) < 1e-10);
    }

    #[test]
    fn vertex_builders_on_trees_exceed_the_arc_count() {
        // p = q = n > m on a tree: the scalar exponent 2m - p - q is
        // negative and the pencil determinant absorbs it by exact division
        for g in [Graph::path(2).unwrap(), Graph::path(4).unwrap()] {
            let d1 = origin_grover_isometry(&g).unwrap();
            let d2 = terminal_grover_isometry(&g).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(61);
            let (p1, p2) = (random_params(&mut rng), random_params(&mut rng));
            let spec =
                WalkSpec::two_coin(g.clone(), d1.clone(), p1, d2.clone(), p2).unwrap();
            let u_mat = evolution(&spec);

            let direct = zeta_reciprocal_direct(&u_mat).unwrap();
            let fact = zeta_reciprocal_two_coin(&g, &d1, p1, &d2, p2).unwrap();
            assert!(fact.reciprocal.max_coeff_deviation(&direct.reciprocal) < 1e-9);
            assert!(fact.factorization.unwrap().scalar_exponent < 0);

            let dense = linalg::char_poly(&u_mat).unwrap();
            let closed = char_poly_two_coin(&g, &d1, p1, &d2, p2).unwrap();
            assert!(closed.max_coeff_deviation(&dense) < 1e-9);

            let report = spectrum_two_coin(&g, &d1, p1, &d2, p2).unwrap();
            assert_eq!(report.entries.len(), g.arc_count());
            let numeric = linalg::eigenvalues(&u_mat).unwrap();
            let dist = linalg::multiset_pairing_distance(&report.values(), &numeric).unwrap();
            assert!(dist < 1e-7);
        }
    }

    #[test]
    fn two_coin_is_symmetric_under_coin_exchange() {
        let g = Graph::complete(4).unwrap();
        let d1 = random_isometry(2, &g, 71).unwrap();
        let d2 = random_isometry(3, &g, 72).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let (p1, p2) = (random_params(&mut rng), random_params(&mut rng));
        let ab = zeta_reciprocal_two_coin(&g, &d1, p1, &d2, p2).unwrap();
        let ba = zeta_reciprocal_two_coin(&g, &d2, p2, &d1, p1).unwrap();
        assert!(ab.reciprocal.max_coeff_deviation(&ba.reciprocal) < 1e-10);
    }

    #[test]
    fn char_poly_closed_form_matches_dense() {
        let g = Graph::complete(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for seed in 1..=10u64 {
            let p = rng.random_range(1..=4usize);
            let q = rng.random_range(1..=4usize);
            let d1 = random_isometry(p, &g, seed * 7).unwrap();
            let d2 = random_isometry(q, &g, seed * 7 + 3).unwrap();
            let (p1, p2) = (random_params(&mut rng), random_params(&mut rng));
            let spec =
                WalkSpec::two_coin(g.clone(), d1.clone(), p1, d2.clone(), p2).unwrap();
            let dense = linalg::char_poly(&evolution(&spec)).unwrap();
            let closed = char_poly_two_coin(&g, &d1, p1, &d2, p2).unwrap();
            assert!(closed.max_coeff_deviation(&dense) < 1e-8);
        }
    }

    #[test]
    fn char_poly_at_zero_has_unit_modulus_for_unitary_walks() {
        // |det(-U)| = 1 for unitary U
        let g = Graph::cycle(3).unwrap();
        let d1 = random_isometry(2, &g, 81).unwrap();
        let d2 = random_isometry(4, &g, 82).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let (p1, p2) = (random_params(&mut rng), random_params(&mut rng));
        let closed = char_poly_two_coin(&g, &d1, p1, &d2, p2).unwrap();
        assert!((closed.eval(ZERO).norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn char_poly_with_trivial_second_coin() {
        // C2 = I: (lambda - a1)^p (lambda - b1)^(2m - p)
        let g = Graph::cycle(3).unwrap();
        let d1 = random_isometry(2, &g, 91).unwrap();
        let d2 = terminal_grover_isometry(&g).unwrap();
        let a1 = phase(0.4);
        let b1 = phase(1.9);
        let closed = char_poly_two_coin(
            &g,
            &d1,
            CoinParams::new(a1, b1).unwrap(),
            &d2,
            CoinParams::new_unchecked(ONE, ONE),
        )
        .unwrap();
        let lin = |z: C| ComplexPolynomial::linear(-z, ONE);
        let want = lin(a1).pow(2).mul(&lin(b1).pow(4));
        assert!(closed.max_coeff_deviation(&want) < 1e-10);
    }

    #[test]
    fn spectrum_closed_form_matches_eigensolver() {
        let g = Graph::complete(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for seed in 1..=10u64 {
            let p = rng.random_range(1..=4usize);
            let q = rng.random_range(1..=4usize);
            let d1 = random_isometry(p, &g, seed * 13).unwrap();
            let d2 = random_isometry(q, &g, seed * 13 + 5).unwrap();
            let (p1, p2) = (random_params(&mut rng), random_params(&mut rng));
            let spec =
                WalkSpec::two_coin(g.clone(), d1.clone(), p1, d2.clone(), p2).unwrap();
            let numeric = linalg::eigenvalues(&evolution(&spec)).unwrap();
            let report = spectrum_two_coin(&g, &d1, p1, &d2, p2).unwrap();
            let dist = linalg::multiset_pairing_distance(&report.values(), &numeric).unwrap();
            assert!(dist < 1e-7, "seed {seed}: pairing distance {dist:.3e}");

            let (two_p, q_minus_p, rest) = report.multiplicity_ledger();
            assert_eq!(two_p + q_minus_p + rest, g.arc_count() as i64);
            assert_eq!(report.entries.len(), g.arc_count());
            // strict-unitary instances stay on the unit circle
            for e in &report.entries {
                assert!((e.value.norm() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn spectrum_quadratic_by_hand() {
        // a1 = a2 = 1, b1 = b2 = -1, mu = 1: lambda^2 - 2 lambda + 1
        let trace = c(-1.0, 0.0) + c(-1.0, 0.0) + c(4.0, 0.0);
        let disc = (trace * trace - c(4.0, 0.0)).sqrt();
        let r1 = (trace + disc).scale(0.5);
        let r2 = (trace - disc).scale(0.5);
        assert!((r1 - ONE).norm() < 1e-14);
        assert!((r2 - ONE).norm() < 1e-14);
    }

    #[test]
    fn log_zeta_series_basics() {
        let zero = CMatrix::zeros(3, 3);
        let s = log_zeta_series(&zero, 6).unwrap();
        assert!(s.coeffs().iter().all(|z| z.norm() == 0.0));

        // U = I (k x k): sum k u^m / m
        let id = CMatrix::identity(4, 4);
        let s = log_zeta_series(&id, 5).unwrap();
        for m in 1..=5 {
            assert!((s.coeff(m) - c(4.0 / m as f64, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn trace_log_bridge_on_k4_grover() {
        let g = Graph::complete(4).unwrap();
        let d = origin_grover_isometry(&g).unwrap();
        let spec = WalkSpec::shift_coin(g, d, CoinParams::grover()).unwrap();
        let u = evolution(&spec);
        let bridge = log_zeta_series(&u, 10).unwrap();
        let direct = zeta_reciprocal_direct(&u).unwrap();
        let neg_log = series_log(&direct.reciprocal, 10).unwrap().scale(c(-1.0, 0.0));
        assert!(bridge.max_coeff_deviation(&neg_log) < 1e-8);
    }
}
