//! Batch randomized verification of every determinant identity in the
//! crate, against independent oracles.
//!
//! Each instance draws a random connected graph, random isometries (vertex
//! builders or seeded Gram-Schmidt) and random unit-modulus coin
//! parameters, then checks the factored zeta, closed-form characteristic
//! polynomial and closed-form spectrum against dense computations, plus
//! the classical zeta triple (Bass determinant, non-backtracking
//! determinant, Euler product). The periodic suite sweeps the standard
//! lattices. Reports are byte-deterministic for a fixed seed: instances
//! fan out over a thread pool but records are emitted in instance order,
//! and timing is never part of a record.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::graph::Graph;
use crate::ihara;
use crate::linalg;
use crate::periodic::{CrystalGraph, PeriodicOptions, PeriodicWalkEvaluator, PeriodicWalkSpec};
use crate::poly::series_log;
use crate::walk::{
    evolution, origin_grover_isometry, random_isometry, terminal_grover_isometry, CoinParams,
    Isometry, WalkSpec,
};
use crate::zeta;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Finite,
    Periodic,
    All,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub instances: usize,
    pub seed: u64,
    pub nmax: usize,
    /// Grid per dimension for the periodic suite.
    pub grid: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { suite: Suite::All, instances: 100, seed: 1, nmax: 8, grid: 256 }
    }
}

/// One identity checked on one instance. Deviations are recomputed values,
/// never cached constants.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub instance: usize,
    pub name: String,
    pub anchor: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    fn new(instance: usize, name: &str, anchor: &str, deviation: f64, tolerance: f64) -> Self {
        CheckRecord {
            instance,
            name: name.to_string(),
            anchor: anchor.to_string(),
            deviation,
            tolerance,
            pass: deviation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config: VerifyConfig,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&CheckRecord> {
        self.records.iter().filter(|r| !r.pass).collect()
    }

    /// Largest deviation among records of one identity.
    pub fn max_deviation(&self, name: &str) -> f64 {
        self.records
            .iter()
            .filter(|r| r.name == name)
            .map(|r| r.deviation)
            .fold(0.0, f64::max)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!(
                "[{:04}] {:<28} anchor={:<26} dev={:.6e} tol={:.1e} {}\n",
                r.instance,
                r.name,
                r.anchor,
                r.deviation,
                r.tolerance,
                if r.pass { "PASS" } else { "FAIL" }
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("instance,name,anchor,deviation,tolerance,pass\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{:.6e},{:.1e},{}\n",
                r.instance, r.name, r.anchor, r.deviation, r.tolerance, r.pass
            ));
        }
        out
    }
}

fn instance_rng(seed: u64, instance: usize) -> ChaCha8Rng {
    // splitmix-style stream separation per instance
    let mut z = seed ^ (instance as u64).wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

/// Random connected graph with 2..=nmax vertices: a random spanning tree
/// plus extra edges at a random density.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, nmax: usize) -> Graph {
    let n = rng.random_range(2..=nmax.max(2));
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    let density: f64 = rng.random();
    for u in 0..n {
        for v in u + 1..n {
            let present = edges.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u));
            if !present && rng.random::<f64>() < density {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("tree plus extra simple edges is a valid graph")
}

/// Uniform unit-modulus coin pair.
pub fn random_coin(rng: &mut ChaCha8Rng) -> CoinParams {
    let mut phase = || {
        let t: f64 = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
        C::new(t.cos(), t.sin())
    };
    CoinParams::new(phase(), phase()).expect("phases are unit modulus")
}

fn finite_instance(instance: usize, cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let mut rng = instance_rng(cfg.seed, instance);
    let g = random_connected_graph(&mut rng, cfg.nmax);
    let n = g.vertex_count();
    let arcs = g.arc_count();
    let mut records = Vec::new();

    // isometries: vertex builders a quarter of the time, else random ranks
    let (d1, d2): (Isometry, Isometry) = if rng.random::<f64>() < 0.25 {
        (origin_grover_isometry(&g)?, terminal_grover_isometry(&g)?)
    } else {
        let p = rng.random_range(1..=n);
        let q = rng.random_range(1..=n);
        (
            random_isometry(p, &g, rng.random::<u64>())?,
            random_isometry(q, &g, rng.random::<u64>())?,
        )
    };
    let (c1, c2) = (random_coin(&mut rng), random_coin(&mut rng));

    // two-coin walk against the dense determinant
    let spec = WalkSpec::two_coin(g.clone(), d1.clone(), c1, d2.clone(), c2)?;
    let u_mat = evolution(&spec);
    let direct = zeta::zeta_reciprocal_direct(&u_mat)?;
    let factored = zeta::zeta_reciprocal_two_coin(&g, &d1, c1, &d2, c2)?;
    records.push(CheckRecord::new(
        instance,
        "two-coin-factorization",
        "det(I-uC1C2) factored",
        factored.reciprocal.max_coeff_deviation(&direct.reciprocal),
        1e-8,
    ));

    // closed-form characteristic polynomial
    let dense_char = linalg::char_poly(&u_mat)?;
    let closed_char = zeta::char_poly_two_coin(&g, &d1, c1, &d2, c2)?;
    records.push(CheckRecord::new(
        instance,
        "char-poly-closed-form",
        "det(lI-U) factored",
        closed_char.max_coeff_deviation(&dense_char),
        1e-8,
    ));

    // closed-form spectrum
    let numeric = linalg::eigenvalues(&u_mat)?;
    let report = zeta::spectrum_two_coin(&g, &d1, c1, &d2, c2)?;
    records.push(CheckRecord::new(
        instance,
        "spectrum-closed-form",
        "eigenvalue classes",
        linalg::multiset_pairing_distance(&report.values(), &numeric)?,
        1e-7,
    ));
    let (a, b, c) = report.multiplicity_ledger();
    let ledger_dev = (a + b + c - arcs as i64).abs().max(report.entries.len() as i64 - arcs as i64);
    records.push(CheckRecord::new(
        instance,
        "multiplicity-ledger",
        "2p + (q-p) + (2m-p-q) = 2m",
        ledger_dev as f64,
        0.0,
    ));

    // single-coin walk against the dense determinant
    let sc_spec = WalkSpec::shift_coin(g.clone(), d1.clone(), c1)?;
    let sc_mat = evolution(&sc_spec);
    let sc_direct = zeta::zeta_reciprocal_direct(&sc_mat)?;
    let sc_factored = zeta::zeta_reciprocal_single_coin(&g, &d1, c1)?;
    records.push(CheckRecord::new(
        instance,
        "single-coin-factorization",
        "det(I-uSC) factored",
        sc_factored.reciprocal.max_coeff_deviation(&sc_direct.reciprocal),
        1e-8,
    ));

    // strict-unitary invariants
    let unit_dev = linalg::unitary_deviation(&u_mat).max(linalg::unitary_deviation(&sc_mat));
    records.push(CheckRecord::new(instance, "unitarity", "U*U = I", unit_dev, 1e-10));
    let modulus_dev = numeric.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    records.push(CheckRecord::new(
        instance,
        "spectrum-modulus",
        "|lambda| = 1",
        modulus_dev,
        1e-9,
    ));

    // trace-log bridge through order 10. The log coefficients are O(2m)
    // but extracting them from det(I-uU) cancels terms as large as that
    // polynomial's own coefficients, so the deviation is measured relative
    // to the input scale.
    let bridge = zeta::log_zeta_series(&u_mat, 10)?;
    let neg_log = series_log(&direct.reciprocal, 10)?.scale(C::new(-1.0, 0.0));
    let absolute = (0..=10usize)
        .map(|k| (bridge.coeff(k) - neg_log.coeff(k)).norm())
        .fold(0.0, f64::max);
    records.push(CheckRecord::new(
        instance,
        "trace-log-bridge",
        "log det vs power traces",
        absolute / direct.reciprocal.max_norm().max(1.0),
        1e-8,
    ));

    // classical zeta triple
    let bass = ihara::ihara_bass(&g)?;
    let edge = ihara::ihara_edge(&g)?;
    records.push(CheckRecord::new(
        instance,
        "bass-vs-edge",
        "three-term det vs arc det",
        bass.max_coeff_deviation(&edge),
        1e-9,
    ));

    let order = 12;
    let table = ihara::prime_cycle_table_from_traces(&g, order)?;
    let euler = ihara::euler_product_series(&table, order)?;
    let recip = bass.as_series(order).reciprocal()?;
    records.push(CheckRecord::new(
        instance,
        "euler-product",
        "prime-cycle product vs 1/Z^-1",
        euler.max_coeff_deviation(&recip),
        1e-9,
    ));

    // trace counts are exact integers
    let traces = ihara::reduced_cycle_counts(&g, order);
    let integer_dev = traces
        .iter()
        .map(|&t| {
            // N_1 = N_2 = 0 on simple graphs; all others nonnegative
            if t < 0 {
                1.0
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);
    records.push(CheckRecord::new(
        instance,
        "trace-counts-integer",
        "N_l = Tr(B^l)",
        integer_dev + (traces[0] + traces[1]).abs() as f64,
        0.0,
    ));

    // full enumeration cross-check when the cycle population is small
    if traces[order - 1] < 200_000 {
        let enumerated = ihara::prime_cycles_capped(&g, order, order)?;
        let mismatch = (1..=order)
            .map(|l| (enumerated.count(l) as i64 - table.count(l) as i64).abs())
            .max()
            .unwrap_or(0);
        records.push(CheckRecord::new(
            instance,
            "prime-count-cross-check",
            "enumeration vs trace route",
            mismatch as f64,
            0.0,
        ));
    }

    Ok(records)
}

fn periodic_records(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    let opts = PeriodicOptions { grid: cfg.grid, u_max: 0.5 };
    let mut records = Vec::new();
    let mut idx = 0usize;

    let lattices: [(&str, CrystalGraph); 3] = [
        ("integer-lattice", CrystalGraph::integer_lattice()),
        ("ladder", CrystalGraph::ladder()),
        ("square-lattice", CrystalGraph::square_lattice()),
    ];
    let coin_pairs =
        [CoinParams::grover(), CoinParams::new_unchecked(C::new(0.0, 1.0), C::new(0.0, -1.0))];
    let u_values: Vec<C> = [0.05, 0.1, 0.15, 0.2]
        .iter()
        .flat_map(|&r| [C::new(r, 0.0), C::new(0.0, r)])
        .collect();

    for (name, cg) in &lattices {
        for (ci, &coin2) in coin_pairs.iter().enumerate() {
            let spec = PeriodicWalkSpec::TwoCoin { coin1: CoinParams::grover(), coin2 };
            let eval = PeriodicWalkEvaluator::new(cg, &spec, &opts)?;
            records.push(CheckRecord::new(
                idx,
                &format!("fiber-unitarity[{name}/{ci}]"),
                "U(theta)*U(theta) = I",
                eval.max_unitary_deviation(),
                1e-10,
            ));
            for &u in &u_values {
                let direct = eval.direct(u)?;
                let factored = eval.factored(u)?;
                records.push(CheckRecord::new(
                    idx,
                    &format!("periodic-factorization[{name}/{ci}]"),
                    "det_G(I-uU) factored",
                    (factored.reciprocal - direct.reciprocal).norm(),
                    1e-6,
                ));
                idx += 1;
            }
        }
    }

    // degeneration: trivial group reproduces the finite computations
    let g3 = Graph::cycle(3).unwrap();
    let cg3 = CrystalGraph::from_graph(&g3);
    let spec = PeriodicWalkSpec::TwoCoin {
        coin1: CoinParams::grover(),
        coin2: CoinParams::grover(),
    };
    let eval = PeriodicWalkEvaluator::new(&cg3, &spec, &opts)?;
    let finite = zeta::zeta_reciprocal_two_coin(
        &g3,
        &origin_grover_isometry(&g3)?,
        CoinParams::grover(),
        &terminal_grover_isometry(&g3)?,
        CoinParams::grover(),
    )?;
    let u = C::new(0.1, 0.0);
    records.push(CheckRecord::new(
        idx,
        "walk-degeneration",
        "trivial group = finite walk zeta",
        (eval.direct(u)?.reciprocal - finite.reciprocal.eval(u)).norm(),
        1e-9,
    ));
    idx += 1;

    // the infinite path has no cycles: Z = 1 on the certified disc
    let zline = CrystalGraph::integer_lattice();
    for &r in &[0.1, 0.3, 0.5] {
        let res = crate::periodic::ihara_periodic(&zline, C::new(r, 0.0), &opts)?;
        records.push(CheckRecord::new(
            idx,
            "periodic-ihara-tree",
            "integer lattice Z(u) = 1",
            (res.zeta - C::new(1.0, 0.0)).norm(),
            1e-8,
        ));
        records.push(CheckRecord::new(
            idx,
            "periodic-ihara-forms",
            "covolume vs euler-characteristic exponent",
            (res.zeta - res.zeta_from_euler_characteristic).norm(),
            1e-9,
        ));
        idx += 1;
    }

    // trivial-shift K4 matches the finite Bass polynomial
    let g4 = Graph::complete(4).unwrap();
    let cg4 = CrystalGraph::from_graph(&g4);
    let bass = ihara::ihara_bass(&g4)?;
    for &r in &[0.1, 0.2] {
        let u = C::new(r, 0.0);
        let res = crate::periodic::ihara_periodic(&cg4, u, &opts)?;
        records.push(CheckRecord::new(
            idx,
            "ihara-degeneration",
            "trivial group = finite Bass",
            (res.zeta - C::new(1.0, 0.0) / bass.eval(u)).norm(),
            1e-9,
        ));
        idx += 1;
    }

    Ok(records)
}

/// Runs the configured suites; deterministic for a fixed config.
pub fn run_verify(cfg: &VerifyConfig) -> Result<Report> {
    let mut records = Vec::new();
    if matches!(cfg.suite, Suite::Finite | Suite::All) {
        let per_instance: Vec<Result<Vec<CheckRecord>>> =
            (0..cfg.instances).into_par_iter().map(|i| finite_instance(i, cfg)).collect();
        for r in per_instance {
            records.extend(r?);
        }
    }
    if matches!(cfg.suite, Suite::Periodic | Suite::All) {
        records.extend(periodic_records(cfg)?);
    }
    Ok(Report { config: *cfg, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_finite_suite_passes_and_is_deterministic() {
        let cfg = VerifyConfig { suite: Suite::Finite, instances: 6, seed: 7, nmax: 5, grid: 8 };
        let a = run_verify(&cfg).unwrap();
        assert!(a.all_pass(), "failures: {:?}", a.failures());
        let b = run_verify(&cfg).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn small_periodic_suite_passes() {
        let cfg =
            VerifyConfig { suite: Suite::Periodic, instances: 0, seed: 1, nmax: 4, grid: 64 };
        let report = run_verify(&cfg).unwrap();
        assert!(report.all_pass(), "failures: {:?}", report.failures());
        assert!(report.max_deviation("walk-degeneration") < 1e-9);
    }

    #[test]
    fn random_graphs_are_connected_and_in_range() {
        let mut rng = instance_rng(3, 0);
        for _ in 0..40 {
            let g = random_connected_graph(&mut rng, 8);
            assert!(g.is_connected());
            assert!(g.vertex_count() >= 2 && g.vertex_count() <= 8);
        }
    }
}
