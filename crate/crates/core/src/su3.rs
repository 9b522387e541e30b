//! Decorations as points of CP² and their realization as order-two elements
//! of SU(3).
//!
//! A line spanned by a unit vector `v` corresponds to the reflection
//! `2 v v† − I`, the unique element of SU(3) conjugate to
//! `Φ = diag(1, −1, −1)` whose 1-eigenspace is that line. Three lines at a
//! vertex are pairwise orthogonal exactly when the product of their
//! reflections is the identity.

use std::collections::VecDeque;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::map::{CombinatorialMap, EdgeId, VertexId};

pub type C64 = Complex<f64>;

/// Tolerance for acceptance checks.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Tolerance for algebraically exact constructions.
pub const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Su3Error {
    #[error("vector has norm {norm}, expected 1")]
    NonUnit { norm: f64 },
    #[error("matrix is not in SU(3): unitarity defect {unitarity}, |det - 1| = {det}")]
    NotSpecialUnitary { unitarity: f64, det: f64 },
    #[error("matrix is not conjugate to diag(1,-1,-1)")]
    NotConjugateToPhi,
    #[error(
        "decoration is not admissible at vertex {vertex}: largest incident overlap {overlap:e}"
    )]
    Inadmissible { vertex: usize, overlap: f64 },
    #[error(
        "decoration has {got} edge lines and {got_loops} loop lines, map has {edges} and {loops}"
    )]
    ShapeMismatch {
        edges: usize,
        loops: usize,
        got: usize,
        got_loops: usize,
    },
    #[error("vertex relation fails at vertex {vertex}: deviation {deviation:e}")]
    VertexRelation { vertex: usize, deviation: f64 },
    #[error("edge {edge}: matrix has no one-dimensional 1-eigenspace")]
    EigenspaceFailed { edge: usize },
    #[error("edge {edge} is a self-loop; no line is orthogonal to itself")]
    SelfLoop { edge: usize },
    #[error("no admissible decoration found after {retries} attempts")]
    RetriesExhausted { retries: usize },
}

/// A vector in C³; as a point of CP² it is taken up to phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex3Vector(pub Vector3<C64>);

impl Complex3Vector {
    pub fn new(a: C64, b: C64, c: C64) -> Self {
        Complex3Vector(Vector3::new(a, b, c))
    }

    pub fn basis(i: usize) -> Self {
        let mut v = Vector3::zeros();
        v[i] = C64::new(1.0, 0.0);
        Complex3Vector(v)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn normalized(&self) -> Self {
        Complex3Vector(self.0 / C64::new(self.norm(), 0.0))
    }

    /// Hermitian product `u† v`.
    pub fn inner(&self, other: &Complex3Vector) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn scale(&self, s: C64) -> Self {
        Complex3Vector(self.0 * s)
    }

    /// `|⟨u, v⟩|` for unit vectors: 1 on the same line, 0 when orthogonal.
    pub fn overlap(&self, other: &Complex3Vector) -> f64 {
        self.inner(other).norm()
    }

    pub fn same_line(&self, other: &Complex3Vector, tol: f64) -> bool {
        1.0 - self.overlap(other) < tol
    }

    /// The line orthogonal to both `self` and `other`, as a unit vector.
    pub fn orthogonal_complement(&self, other: &Complex3Vector) -> Complex3Vector {
        Complex3Vector(self.0.cross(&other.0).map(|z| z.conj())).normalized()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryMatrix3(pub Matrix3<C64>);

impl UnitaryMatrix3 {
    pub fn identity() -> Self {
        UnitaryMatrix3(Matrix3::identity())
    }

    pub fn diagonal(a: f64, b: f64, c: f64) -> Self {
        UnitaryMatrix3(Matrix3::from_diagonal(
            &Vector3::new(a, b, c).map(|x| C64::new(x, 0.0)),
        ))
    }

    /// `diag(1, −1, −1)`.
    pub fn phi() -> Self {
        Self::diagonal(1.0, -1.0, -1.0)
    }

    pub fn mul(&self, other: &UnitaryMatrix3) -> UnitaryMatrix3 {
        UnitaryMatrix3(self.0 * other.0)
    }

    pub fn adjoint(&self) -> UnitaryMatrix3 {
        UnitaryMatrix3(self.0.adjoint())
    }

    pub fn apply(&self, v: &Complex3Vector) -> Complex3Vector {
        Complex3Vector(self.0 * v.0)
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn det(&self) -> C64 {
        self.0.determinant()
    }

    /// Frobenius distance to another matrix.
    pub fn distance(&self, other: &UnitaryMatrix3) -> f64 {
        (self.0 - other.0).norm()
    }

    pub fn distance_to_identity(&self) -> f64 {
        self.distance(&Self::identity())
    }

    /// `‖U†U − I‖`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.0.adjoint() * self.0 - Matrix3::identity()).norm()
    }

    pub fn check_special_unitary(&self, tol: f64) -> Result<(), Su3Error> {
        let unitarity = self.unitarity_defect();
        let det = (self.det() - C64::new(1.0, 0.0)).norm();
        if unitarity < tol && det < tol {
            Ok(())
        } else {
            Err(Su3Error::NotSpecialUnitary { unitarity, det })
        }
    }

    /// `‖M² − I‖`.
    pub fn order_two_defect(&self) -> f64 {
        self.mul(self).distance_to_identity()
    }

    /// Unit vector spanning the 1-eigenspace, read off the projector
    /// `(M + I)/2`. Meaningful only for matrices conjugate to Φ.
    pub fn one_eigenline(&self) -> Complex3Vector {
        let projector = (self.0 + Matrix3::identity()) * C64::new(0.5, 0.0);
        let best = (0..3)
            .max_by(|&i, &j| {
                projector
                    .column(i)
                    .norm()
                    .total_cmp(&projector.column(j).norm())
            })
            .unwrap();
        Complex3Vector(projector.column(best).into_owned()).normalized()
    }
}

/// `2 v v† − I`: order two, determinant one, fixing exactly the line of `v`.
pub fn reflection_from_line(v: &Complex3Vector) -> Result<UnitaryMatrix3, Su3Error> {
    let norm = v.norm();
    if (norm - 1.0).abs() > DEFAULT_TOL {
        return Err(Su3Error::NonUnit { norm });
    }
    let outer = v.0 * v.0.adjoint();
    Ok(UnitaryMatrix3(
        outer * C64::new(2.0, 0.0) - Matrix3::identity(),
    ))
}

/// Order two and not the identity. In SU(3) this is the same as being
/// conjugate to Φ, i.e. having eigenvalues (1, −1, −1).
pub fn is_conjugate_to_phi(m: &UnitaryMatrix3, tol: f64) -> Result<bool, Su3Error> {
    m.check_special_unitary(tol)?;
    Ok(m.order_two_defect() < tol && m.distance_to_identity() > tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductReport {
    /// `|⟨v_S, v_T⟩|`
    pub overlap: f64,
    pub eigenspaces_orthogonal: bool,
    pub product_conjugate_to_phi: bool,
    /// `‖(ST)² − I‖`
    pub product_order_two_defect: f64,
    /// `|⟨v_ST, v_S⟩|` and `|⟨v_ST, v_T⟩|` when `ST` is conjugate to Φ.
    pub product_line_overlaps: Option<(f64, f64)>,
    /// The equivalence holds and, when `ST` is conjugate to Φ, its
    /// 1-eigenspace is orthogonal to both others.
    pub holds: bool,
}

impl ProductReport {
    /// Largest residual among quantities that vanish exactly in the
    /// orthogonal case; `None` otherwise.
    pub fn residual(&self) -> Option<f64> {
        self.product_line_overlaps.map(|(a, b)| {
            self.overlap
                .max(self.product_order_two_defect)
                .max(a)
                .max(b)
        })
    }
}

/// For `S`, `T` conjugate to Φ: `ST` is conjugate to Φ exactly when their
/// 1-eigenspaces are orthogonal, and then the 1-eigenspace of `ST` is
/// orthogonal to both.
pub fn check_order_two_product(
    s: &UnitaryMatrix3,
    t: &UnitaryMatrix3,
    tol: f64,
) -> Result<ProductReport, Su3Error> {
    if !is_conjugate_to_phi(s, tol)? || !is_conjugate_to_phi(t, tol)? {
        return Err(Su3Error::NotConjugateToPhi);
    }
    let (vs, vt) = (s.one_eigenline(), t.one_eigenline());
    let overlap = vs.overlap(&vt);
    let eigenspaces_orthogonal = overlap < tol;
    let st = s.mul(t);
    let product_conjugate_to_phi = is_conjugate_to_phi(&st, tol)?;
    let product_line_overlaps = product_conjugate_to_phi.then(|| {
        let v = st.one_eigenline();
        (v.overlap(&vs), v.overlap(&vt))
    });
    let holds = eigenspaces_orthogonal == product_conjugate_to_phi
        && product_line_overlaps.is_none_or(|(a, b)| a < tol && b < tol);
    Ok(ProductReport {
        overlap,
        eigenspaces_orthogonal,
        product_conjugate_to_phi,
        product_order_two_defect: st.order_two_defect(),
        product_line_overlaps,
        holds,
    })
}

/// One unit vector per edge (indexed by [`EdgeId`]) and per free loop.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoration {
    pub edges: Vec<Complex3Vector>,
    pub loops: Vec<Complex3Vector>,
}

/// One matrix per edge and per free loop: the images of the meridians.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub edges: Vec<UnitaryMatrix3>,
    pub loops: Vec<UnitaryMatrix3>,
}

fn check_shape(map: &CombinatorialMap, edges: usize, loops: usize) -> Result<(), Su3Error> {
    if edges != map.num_vertex_edges() || loops != map.free_loops() {
        return Err(Su3Error::ShapeMismatch {
            edges: map.num_vertex_edges(),
            loops: map.free_loops(),
            got: edges,
            got_loops: loops,
        });
    }
    Ok(())
}

/// Largest pairwise overlap of the lines at `v`.
fn vertex_overlap(map: &CombinatorialMap, d: &Decoration, v: VertexId) -> f64 {
    let [a, b, c] = map.incident_edges(v).map(|e| &d.edges[e.0]);
    a.overlap(b).max(b.overlap(c)).max(a.overlap(c))
}

/// Largest pairwise overlap at any vertex, or the first vertex exceeding `tol`.
pub fn check_admissible(map: &CombinatorialMap, d: &Decoration, tol: f64) -> Result<f64, Su3Error> {
    check_shape(map, d.edges.len(), d.loops.len())?;
    for v in d.edges.iter().chain(&d.loops) {
        if (v.norm() - 1.0).abs() > tol {
            return Err(Su3Error::NonUnit { norm: v.norm() });
        }
    }
    let mut worst: f64 = 0.0;
    for v in map.vertices() {
        let overlap = vertex_overlap(map, d, v);
        if overlap > tol {
            return Err(Su3Error::Inadmissible {
                vertex: v.0,
                overlap,
            });
        }
        worst = worst.max(overlap);
    }
    Ok(worst)
}

/// Largest `‖ρ(e₁)ρ(e₂)ρ(e₃) − I‖` over vertices, product in rotation order.
pub fn vertex_relation_defect(
    map: &CombinatorialMap,
    r: &Representation,
) -> (f64, Option<VertexId>) {
    let mut worst = (0.0, None);
    for v in map.vertices() {
        let [a, b, c] = map.incident_edges(v).map(|e| &r.edges[e.0]);
        let dev = a.mul(b).mul(c).distance_to_identity();
        if dev > worst.0 || worst.1.is_none() {
            worst = (dev, Some(v));
        }
    }
    worst
}

pub fn decoration_to_representation(
    map: &CombinatorialMap,
    d: &Decoration,
    tol: f64,
) -> Result<Representation, Su3Error> {
    check_admissible(map, d, tol)?;
    let r = Representation {
        edges: d
            .edges
            .iter()
            .map(reflection_from_line)
            .collect::<Result<_, _>>()?,
        loops: d
            .loops
            .iter()
            .map(reflection_from_line)
            .collect::<Result<_, _>>()?,
    };
    if let (dev, Some(v)) = vertex_relation_defect(map, &r) {
        if dev > tol {
            return Err(Su3Error::VertexRelation {
                vertex: v.0,
                deviation: dev,
            });
        }
    }
    Ok(r)
}

pub fn representation_to_decoration(r: &Representation, tol: f64) -> Result<Decoration, Su3Error> {
    let line = |(i, m): (usize, &UnitaryMatrix3)| {
        if is_conjugate_to_phi(m, tol)? {
            Ok(m.one_eigenline())
        } else {
            Err(Su3Error::EigenspaceFailed { edge: i })
        }
    };
    let n = r.edges.len();
    Ok(Decoration {
        edges: r
            .edges
            .iter()
            .enumerate()
            .map(line)
            .collect::<Result<_, _>>()?,
        loops: r
            .loops
            .iter()
            .enumerate()
            .map(|(i, m)| line((n + i, m)))
            .collect::<Result<_, _>>()?,
    })
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniformly distributed unit vector (Haar measure on the sphere in C³).
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> Complex3Vector {
    loop {
        let v = Complex3Vector::new(gaussian(rng), gaussian(rng), gaussian(rng));
        if v.norm() > 1e-6 {
            return v.normalized();
        }
    }
}

/// Uniform unit vector orthogonal to the unit vector `u`.
pub fn random_orthogonal_unit<R: Rng + ?Sized>(u: &Complex3Vector, rng: &mut R) -> Complex3Vector {
    loop {
        let g = Complex3Vector::new(gaussian(rng), gaussian(rng), gaussian(rng));
        let p = Complex3Vector(g.0 - u.0 * u.inner(&g));
        if p.norm() > 1e-6 {
            return p.normalized();
        }
    }
}

pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Haar-random element of SU(3): Gram–Schmidt on a complex Gaussian matrix,
/// then the determinant's phase is divided out of the last column.
pub fn random_su3<R: Rng + ?Sized>(rng: &mut R) -> UnitaryMatrix3 {
    let a = random_unit_vector(rng);
    let b = random_orthogonal_unit(&a, rng);
    let c = a.orthogonal_complement(&b);
    let mut m = Matrix3::from_columns(&[a.0, b.0, c.0]);
    let det = m.determinant();
    let fix = det.conj() / C64::new(det.norm(), 0.0);
    m.set_column(2, &(m.column(2) * fix));
    UnitaryMatrix3(m)
}

/// Samples an admissible decoration by propagating constraints vertex by
/// vertex in breadth-first order. At a vertex with no decorated edge a
/// Haar-random orthonormal frame is placed; with one decorated line `u`, the
/// second line is drawn uniformly from {a fresh Haar-random line orthogonal
/// to `u`} ∪ {already used lines orthogonal to `u`} and the third is forced;
/// with two or three the remaining line is forced or checked. A conflict
/// restarts the attempt.
///
/// Reusing existing lines matters: for graphs with cycles of length three or
/// more, fresh continuous choices close up consistently with probability zero.
pub fn sample_admissible_decoration(
    map: &CombinatorialMap,
    max_retries: usize,
    seed: u64,
) -> Result<Decoration, Su3Error> {
    if let Some(e) = map.edges().find(|&e| map.is_self_loop(e)) {
        return Err(Su3Error::SelfLoop { edge: e.0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = bfs_vertices(map);
    for _ in 0..max_retries {
        if let Some(edges) = try_sample(map, &order, &mut rng) {
            let loops = (0..map.free_loops())
                .map(|_| random_unit_vector(&mut rng))
                .collect();
            return Ok(Decoration { edges, loops });
        }
    }
    Err(Su3Error::RetriesExhausted {
        retries: max_retries,
    })
}

fn bfs_vertices(map: &CombinatorialMap) -> Vec<VertexId> {
    let mut seen = vec![false; map.num_vertices()];
    let mut order = Vec::with_capacity(map.num_vertices());
    for s in map.vertices() {
        if seen[s.0] {
            continue;
        }
        seen[s.0] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for h in map.rotation(v) {
                let w = map.vertex_of(map.twin(h));
                if !seen[w.0] {
                    seen[w.0] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

fn try_sample<R: Rng>(
    map: &CombinatorialMap,
    order: &[VertexId],
    rng: &mut R,
) -> Option<Vec<Complex3Vector>> {
    let mut lines: Vec<Option<Complex3Vector>> = vec![None; map.num_vertex_edges()];
    let mut used: Vec<Complex3Vector> = Vec::new();
    for &v in order {
        let es = map.incident_edges(v);
        let fixed: Vec<Complex3Vector> = es.iter().filter_map(|e| lines[e.0]).collect();
        let mut open: Vec<EdgeId> = es
            .iter()
            .copied()
            .filter(|e| lines[e.0].is_none())
            .collect();
        match fixed.len() {
            0 => {
                let u = random_unit_vector(rng);
                let w = random_orthogonal_unit(&u, rng);
                let z = u.orthogonal_complement(&w);
                for (e, l) in open.iter().zip([u, w, z]) {
                    lines[e.0] = Some(l);
                }
                used.extend([u, w, z]);
            }
            1 => {
                let u = fixed[0];
                let mut candidates: Vec<Option<Complex3Vector>> = vec![None];
                for x in &used {
                    if x.overlap(&u) < DEFAULT_TOL
                        && !candidates
                            .iter()
                            .flatten()
                            .any(|c| c.same_line(x, DEFAULT_TOL))
                    {
                        candidates.push(Some(*x));
                    }
                }
                let w = candidates
                    .choose(rng)
                    .copied()
                    .flatten()
                    .unwrap_or_else(|| random_orthogonal_unit(&u, rng));
                let z = u.orthogonal_complement(&w);
                if rng.random_bool(0.5) {
                    open.swap(0, 1);
                }
                lines[open[0].0] = Some(w);
                lines[open[1].0] = Some(z);
                used.extend([w, z]);
            }
            2 => {
                if fixed[0].overlap(&fixed[1]) > DEFAULT_TOL {
                    return None;
                }
                let z = fixed[0].orthogonal_complement(&fixed[1]);
                lines[open[0].0] = Some(z);
                used.push(z);
            }
            _ => {
                let (a, b, c) = (fixed[0], fixed[1], fixed[2]);
                if a.overlap(&b).max(b.overlap(&c)).max(a.overlap(&c)) > DEFAULT_TOL {
                    return None;
                }
            }
        }
    }
    lines.into_iter().collect()
}
