//! Property campaigns behind `tait verify`.
//!
//! Each campaign returns a [`VerifyReport`] listing, per property, how many
//! instances were checked, how many failed and the largest deviation seen.
//! The first failing instance, if any, is kept in serialized form.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog;
use crate::laurent::p3;
use crate::map::CombinatorialMap;
use crate::reduce::{euler_characteristic, reduce, ReductionTrace, RelationWeights, TraceStep};
use crate::su3::{
    check_order_two_product, decoration_to_representation, random_orthogonal_unit, random_phase,
    random_su3, random_unit_vector, reflection_from_line, representation_to_decoration,
    sample_admissible_decoration, vertex_relation_defect, Complex3Vector, UnitaryMatrix3, C64,
};
use crate::tait::count_tait;
use crate::text::serialize_map;

pub const DEFAULT_PRODUCT_TRIALS: usize = 1000;
pub const DEFAULT_ROUNDTRIP_TRIALS: usize = 100;
pub const SAMPLER_RETRIES: usize = 10_000;
/// Largest graph (in edges) whose reduction intermediates are brute-forced.
pub const CONSERVATION_MAX_EDGES: usize = 12;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PropertyResult {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    /// Largest numerical residual, for floating-point properties.
    pub max_deviation: Option<f64>,
    pub passed: bool,
}

impl PropertyResult {
    fn new(name: &str) -> Self {
        PropertyResult {
            name: name.to_string(),
            checked: 0,
            failures: 0,
            max_deviation: None,
            passed: true,
        }
    }

    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            self.passed = false;
        }
    }

    fn deviation(&mut self, d: f64) {
        self.max_deviation = Some(self.max_deviation.map_or(d, |m| m.max(d)));
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VerifyReport {
    pub suite: String,
    /// `None` for the exact suites, which use neither.
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub trials: usize,
    pub properties: Vec<PropertyResult>,
    /// Informational lines, one per checked instance where that is useful.
    pub details: Vec<String>,
    /// The first failing instance, serialized.
    pub failing_instance: Option<String>,
}

impl VerifyReport {
    fn new(suite: &str, trials: usize, tol: Option<f64>, seed: Option<u64>) -> Self {
        VerifyReport {
            suite: suite.to_string(),
            seed,
            tol,
            trials,
            properties: Vec::new(),
            details: Vec::new(),
            failing_instance: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    fn fail_with(&mut self, instance: impl FnOnce() -> String) {
        if self.failing_instance.is_none() {
            self.failing_instance = Some(instance());
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite: {}", self.suite)?;
        match (self.seed, self.tol) {
            (Some(seed), Some(tol)) => writeln!(f, "seed: {seed}\ntol: {tol:e}")?,
            _ => writeln!(f, "exact: integer and polynomial equality")?,
        }
        writeln!(f, "trials: {}", self.trials)?;
        for d in &self.details {
            writeln!(f, "  {d}")?;
        }
        for p in &self.properties {
            let dev = p
                .max_deviation
                .map_or("-".to_string(), |d| format!("{d:.3e}"));
            writeln!(
                f,
                "{} {}: checked {} failures {} max_deviation {}",
                if p.passed { "PASS" } else { "FAIL" },
                p.name,
                p.checked,
                p.failures,
                dev
            )?;
        }
        if let Some(inst) = &self.failing_instance {
            writeln!(f, "failing instance:")?;
            write!(f, "{inst}")?;
            if !inst.ends_with('\n') {
                writeln!(f)?;
            }
        }
        writeln!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// χ via reduction equals the Tait count on every bipartite fixture; so does
/// `P3(1)`, and `P3` is invariant under `q -> 1/q`.
pub fn euler_equals_tait() -> VerifyReport {
    let fixtures = catalog::bipartite_fixtures();
    let mut report = VerifyReport::new("theorem1", fixtures.len(), None, None);
    let mut chi_prop = PropertyResult::new("euler_equals_tait");
    let mut p3_prop = PropertyResult::new("p3_at_one_equals_tait");
    let mut bar_prop = PropertyResult::new("p3_bar_symmetric");
    for (name, g) in &fixtures {
        let tait = BigInt::from(count_tait(g));
        let chi = euler_characteristic(g);
        let poly = p3(g);
        let chi_ok = chi.as_ref().is_ok_and(|c| *c == tait);
        let at_one = poly
            .as_ref()
            .ok()
            .and_then(|p| p.evaluate(&BigRational::one()).ok());
        let p3_ok = at_one == Some(BigRational::from_integer(tait.clone()));
        let bar_ok = poly.as_ref().is_ok_and(|p| p.is_bar_invariant());
        chi_prop.record(chi_ok);
        p3_prop.record(p3_ok);
        bar_prop.record(bar_ok);
        report.details.push(format!(
            "{name}: edges {} tait {} euler {} p3(1) {}",
            g.num_edges(),
            tait,
            chi.map_or_else(|e| e.to_string(), |c| c.to_string()),
            at_one.map_or("-".to_string(), |v| v.to_string()),
        ));
        if !(chi_ok && p3_ok && bar_ok) {
            report.fail_with(|| serialize_map(g));
        }
    }
    report.properties = vec![chi_prop, p3_prop, bar_prop];
    report
}

/// Random pairs of order-two elements of SU(3). Even trials use orthogonal
/// eigenlines, built by conjugating `Φ` and `diag(−1, 1, −1)` with a Haar
/// random `U`; odd trials use lines with overlap drawn from `[0.05, 1]`, a
/// few of them equal.
pub fn order_two_products(trials: usize, tol: f64, seed: u64) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerifyReport::new("lemma5", trials, Some(tol), Some(seed));
    let mut orth = PropertyResult::new("orthogonal_lines_product_conjugate_to_phi");
    let mut triple = PropertyResult::new("product_line_orthogonal_to_both");
    let mut non_orth = PropertyResult::new("non_orthogonal_lines_product_not_conjugate");
    let mut bicond = PropertyResult::new("biconditional");
    let mut min_margin = f64::INFINITY;
    let second = UnitaryMatrix3::diagonal(-1.0, 1.0, -1.0);
    for trial in 0..trials {
        let (s, t, orthogonal, equal) = if trial % 2 == 0 {
            let u = random_su3(&mut rng);
            let conj = |m: &UnitaryMatrix3| u.mul(m).mul(&u.adjoint());
            (conj(&UnitaryMatrix3::phi()), conj(&second), true, false)
        } else {
            let a = random_unit_vector(&mut rng);
            let equal = trial % 50 == 1;
            let b = if equal {
                a.scale(random_phase(&mut rng))
            } else {
                let w = random_orthogonal_unit(&a, &mut rng);
                let c: f64 = rng.random_range(0.05..=1.0);
                let s = (1.0 - c * c).max(0.0).sqrt();
                Complex3Vector(a.0 * (random_phase(&mut rng) * c) + w.0 * C64::new(s, 0.0))
            };
            (
                reflection_from_line(&a).expect("unit"),
                reflection_from_line(&b).expect("unit"),
                false,
                equal,
            )
        };
        let rep = match check_order_two_product(&s, &t, tol) {
            Ok(rep) => rep,
            Err(e) => {
                bicond.record(false);
                report.fail_with(|| format!("trial {trial}: {e}\nS = {}\nT = {}", s.0, t.0));
                continue;
            }
        };
        bicond.record(rep.holds);
        if orthogonal {
            orth.record(rep.product_conjugate_to_phi);
            triple.record(
                rep.product_line_overlaps
                    .is_some_and(|(x, y)| x < tol && y < tol),
            );
            let residual = rep.residual().unwrap_or(f64::INFINITY);
            orth.deviation(residual);
            triple.deviation(residual);
            bicond.deviation(residual);
        } else {
            non_orth.record(!rep.product_conjugate_to_phi);
            if !equal {
                min_margin = min_margin.min(rep.product_order_two_defect);
            }
        }
        if !rep.holds {
            report.fail_with(|| format!("trial {trial}: {rep:?}\nS = {}\nT = {}", s.0, t.0));
        }
    }
    report.details.push(format!(
        "smallest ||(ST)^2 - I|| over non-orthogonal distinct lines: {min_margin:.3e}"
    ));
    report.properties = vec![orth, triple, non_orth, bicond];
    report
}

/// Samples admissible decorations of theta, K4, prism(3) and the cube in turn,
/// maps them to representations and back.
pub fn roundtrip(trials: usize, tol: f64, seed: u64) -> VerifyReport {
    let graphs: Vec<(&str, CombinatorialMap)> = vec![
        ("theta", catalog::theta()),
        ("k4", catalog::k4()),
        ("prism(3)", catalog::prism(3).unwrap()),
        ("cube", catalog::cube()),
    ];
    let mut report = VerifyReport::new("roundtrip", trials, Some(tol), Some(seed));
    let mut sampled = PropertyResult::new("sampler_succeeds");
    let mut admissible = PropertyResult::new("decoration_admissible");
    let mut relation = PropertyResult::new("vertex_product_is_identity");
    let mut same = PropertyResult::new("roundtrip_same_line");
    let mut per_graph = vec![0usize; graphs.len()];
    for trial in 0..trials {
        let gi = trial % graphs.len();
        let (name, g) = &graphs[gi];
        let sample_seed = seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(trial as u64);
        let d = match sample_admissible_decoration(g, SAMPLER_RETRIES, sample_seed) {
            Ok(d) => d,
            Err(e) => {
                sampled.record(false);
                report.fail_with(|| format!("{name} sample seed {sample_seed}: {e}"));
                continue;
            }
        };
        sampled.record(true);
        per_graph[gi] += 1;
        let rep = match decoration_to_representation(g, &d, tol) {
            Ok(r) => r,
            Err(e) => {
                admissible.record(false);
                report.fail_with(|| format!("{name} sample seed {sample_seed}: {e}"));
                continue;
            }
        };
        admissible.record(true);
        let (dev, _) = vertex_relation_defect(g, &rep);
        relation.record(dev < tol);
        relation.deviation(dev);
        let back = match representation_to_decoration(&rep, tol) {
            Ok(b) => b,
            Err(e) => {
                same.record(false);
                report.fail_with(|| format!("{name} sample seed {sample_seed}: {e}"));
                continue;
            }
        };
        let worst = d
            .edges
            .iter()
            .zip(&back.edges)
            .chain(d.loops.iter().zip(&back.loops))
            .map(|(x, y)| 1.0 - x.overlap(y))
            .fold(0.0f64, f64::max);
        same.record(worst < tol);
        same.deviation(worst);
        if dev >= tol || worst >= tol {
            report.fail_with(|| {
                format!("{name} sample seed {sample_seed}: relation {dev:e} roundtrip {worst:e}")
            });
        }
    }
    for ((name, _), n) in graphs.iter().zip(per_graph) {
        report.details.push(format!("{name}: {n} decorations"));
    }
    report.properties = vec![sampled, admissible, relation, same];
    report
}

/// Checks `Σ weight · |Tait(G_i)| = |Tait(G)|` over the frontier after every
/// expansion step of a trace, and the local identity at each internal node.
/// Returns the number of frontiers checked and the first failure, if any.
pub fn check_trace_conservation(trace: &ReductionTrace<BigInt>) -> Result<usize, String> {
    let counts: Vec<BigInt> = trace
        .nodes()
        .iter()
        .map(|n| BigInt::from(count_tait(&n.graph)))
        .collect();
    let weights = trace.path_weights();
    let root = counts[0].clone();
    let mut checked = 0;
    for (id, node) in trace.nodes().iter().enumerate() {
        if let TraceStep::Move {
            multiplier,
            children,
            ..
        } = &node.step
        {
            let sum: BigInt = children.iter().map(|&c| &counts[c]).sum();
            if counts[id] != multiplier * sum {
                return Err(format!("node {id}: local identity fails"));
            }
        }
    }
    let mut frontier = vec![0usize];
    let total =
        |frontier: &[usize]| -> BigInt { frontier.iter().map(|&i| &weights[i] * &counts[i]).sum() };
    for id in 0..trace.nodes().len() {
        let children = trace.children(id);
        if children.is_empty() {
            continue;
        }
        let pos = frontier
            .iter()
            .position(|&f| f == id)
            .ok_or_else(|| format!("node {id} expanded before it was reached"))?;
        frontier.swap_remove(pos);
        frontier.extend_from_slice(children);
        checked += 1;
        if total(&frontier) != root {
            return Err(format!(
                "frontier after expanding node {id}: sum differs from {root}"
            ));
        }
    }
    Ok(checked)
}

/// Conservation on every planar catalog graph with at most
/// [`CONSERVATION_MAX_EDGES`] edges.
pub fn conservation() -> VerifyReport {
    let graphs: Vec<(String, CombinatorialMap)> = catalog::planar_catalog()
        .into_iter()
        .filter(|(_, g)| g.num_edges() <= CONSERVATION_MAX_EDGES)
        .collect();
    let mut report = VerifyReport::new("conservation", graphs.len(), None, None);
    let mut prop = PropertyResult::new("frontier_sum_invariant");
    let mut dec = PropertyResult::new("edges_strictly_decrease");
    for (name, g) in &graphs {
        let (value, trace) = match reduce(g, &RelationWeights::euler()) {
            Ok(r) => r,
            Err(e) => {
                prop.record(false);
                report.fail_with(|| format!("{name}: {e}\n{}", serialize_map(g)));
                continue;
            }
        };
        let decreasing = (0..trace.nodes().len()).all(|id| {
            trace
                .children(id)
                .iter()
                .all(|&c| trace.node(c).graph.num_edges() < trace.node(id).graph.num_edges())
        });
        dec.record(decreasing);
        match check_trace_conservation(&trace) {
            Ok(steps) => {
                let ok = BigUint::try_from(value.clone()).ok() == Some(count_tait(g));
                prop.record(ok);
                report.details.push(format!(
                    "{name}: edges {} nodes {} frontiers {steps} value {value}",
                    g.num_edges(),
                    trace.nodes().len()
                ));
                if !ok {
                    report.fail_with(|| serialize_map(g));
                }
            }
            Err(msg) => {
                prop.record(false);
                report.fail_with(|| format!("{name}: {msg}\n{}", serialize_map(g)));
            }
        }
        if !decreasing {
            report.fail_with(|| serialize_map(g));
        }
    }
    report.properties = vec![prop, dec];
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_campaigns_pass() {
        for report in [euler_equals_tait(), conservation()] {
            assert!(report.passed(), "{report}");
            assert!(report.properties.iter().all(|p| p.checked > 0), "{report}");
        }
    }

    #[test]
    fn conservation_skips_large_graphs() {
        let report = conservation();
        assert!(!report.details.iter().any(|d| d.starts_with("dodecahedron")));
        assert!(report.details.iter().any(|d| d.starts_with("cube")));
    }

    #[test]
    fn short_numerical_campaigns_pass() {
        let l = order_two_products(60, 1e-9, 7);
        assert!(l.passed(), "{l}");
        assert_eq!(l.properties[3].checked, 60);
        let r = roundtrip(8, 1e-9, 7);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn campaigns_are_reproducible() {
        assert_eq!(
            order_two_products(20, 1e-9, 3),
            order_two_products(20, 1e-9, 3)
        );
        assert_eq!(roundtrip(4, 1e-9, 3), roundtrip(4, 1e-9, 3));
    }

    #[test]
    fn a_wrong_trace_is_caught() {
        let (_, mut trace) = reduce(&catalog::theta(), &RelationWeights::euler()).unwrap();
        assert_eq!(check_trace_conservation(&trace), Ok(2));
        trace.nodes_mut_for_tests()[0].step = match &trace.node(0).step {
            TraceStep::Move {
                kind,
                face,
                children,
                ..
            } => TraceStep::Move {
                kind: *kind,
                face: face.clone(),
                multiplier: BigInt::from(3),
                children: children.clone(),
            },
            TraceStep::Empty => unreachable!(),
        };
        assert!(check_trace_conservation(&trace).is_err());
    }

    #[test]
    fn report_text_names_the_seed_and_result() {
        let text = order_two_products(4, 1e-9, 11).to_string();
        assert!(text.contains("seed: 11"));
        assert!(text.ends_with("result: PASS\n"));
    }
}
