//! Harmonic spaces, primitive forms and the primitive decomposition on
//! invariant (constant-coefficient) forms, together with the verifiers of the
//! Lefschetz-type decomposition statements.

mod checks;
mod membership;
mod subspace;

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::Zero;
use serde::Serialize;

pub use checks::{inapplicability, verify, CheckId, Dimension, Status, VerificationReport, Witness};
pub use membership::{harmonic_membership, Membership};
pub use subspace::{mono, Subspace};

use crate::error::{Error, Result};
use crate::exterior::{Bidegree, Form, Space};
use crate::linalg::Matrix;
use crate::model::ManifoldSpec;
use crate::operators::{ConstCalculus, Differential, OperatorId};
use crate::scalar::{inverse_factorial, GaussianRational};

type Q = GaussianRational;

/// `a = Σ_r (1/r!) L^r β_{k−2r}` with every `β` primitive.
#[derive(Clone, PartialEq, Debug)]
pub struct PrimitiveDecomposition {
    pub input: Form<Q>,
    pub degree: usize,
    /// `r ↦ β_{k−2r}`; zero components are omitted.
    pub components: BTreeMap<usize, Form<Q>>,
}

impl PrimitiveDecomposition {
    pub fn reconstruct(&self, omega: &Form<Q>) -> Form<Q> {
        self.components.iter().map(|(r, beta)| omega.power(*r).wedge(beta).scale_const(&inverse_factorial(*r))).sum()
    }
}

/// Hodge theory of the invariant forms of a constant-coefficient spec.
pub struct Hodge {
    spec: ManifoldSpec,
    calc: ConstCalculus,
    harmonic: Mutex<HashMap<(Differential, Bidegree), Subspace>>,
    primitive: Mutex<HashMap<Space, Subspace>>,
}

impl Hodge {
    pub fn new(spec: &ManifoldSpec) -> Result<Self> {
        Ok(Self {
            spec: spec.clone(),
            calc: ConstCalculus::new(spec)?,
            harmonic: Mutex::new(HashMap::new()),
            primitive: Mutex::new(HashMap::new()),
        })
    }

    pub fn spec(&self) -> &ManifoldSpec {
        &self.spec
    }

    pub fn calculus(&self) -> &ConstCalculus {
        &self.calc
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn omega(&self) -> &Form<Q> {
        self.calc.omega()
    }

    fn matrix(&self, id: OperatorId, source: Space) -> Result<Matrix<Q>> {
        Ok((*self.calc.raw_matrix(id, source)?).clone())
    }

    /// Kernel of an operator on a space.
    pub fn kernel(&self, id: OperatorId, source: Space) -> Result<Subspace> {
        Ok(Subspace::kernel(source, self.n(), &self.matrix(id, source)?))
    }

    /// Invariant `H^{p,q}_D = ker Δ_D`, cross-checked against
    /// `ker D ∩ ker(D̄ ∘ *)`.
    pub fn harmonic_space(&self, which: Differential, pq: Bidegree) -> Result<Subspace> {
        if let Some(s) = self.harmonic.lock().expect("cache lock").get(&(which, pq)) {
            return Ok(s.clone());
        }
        let n = self.n();
        let source = Space::Bidegree(pq);
        if !pq.is_valid(n) {
            return Err(Error::InvalidInput(format!("bidegree {pq} outside 0..={n}")));
        }
        let h = self.kernel(OperatorId::Laplacian(which), source)?;

        let star_target = self.calc.target(OperatorId::Star, source);
        let d = self.matrix(OperatorId::Diff(which), source)?;
        let dual =
            &self.matrix(OperatorId::Diff(which.conj()), star_target)? * &self.matrix(OperatorId::Star, source)?;
        let both = Subspace::kernel(source, n, &d.vstack(&dual));
        if both != h {
            return Err(Error::CrossCheckMismatch(format!(
                "ker Delta_{which} on {pq} is {h:?}, but ker {which} ∩ ker {}* is {both:?}",
                which.conj()
            )));
        }
        self.harmonic.lock().expect("cache lock").insert((which, pq), h.clone());
        Ok(h)
    }

    /// Primitive forms in a space: `ker Λ`, checked against `ker L^{n−k+1}`
    /// for `k ≤ n`. Without a unitary scale only the second description is
    /// available.
    pub fn primitive_space(&self, space: Space) -> Result<Subspace> {
        if let Some(s) = self.primitive.lock().expect("cache lock").get(&space) {
            return Ok(s.clone());
        }
        let n = self.n();
        let k = space.degree();
        let by_l =
            if k <= n { Some(Subspace::kernel(space, n, &self.l_power_matrix(space, n - k + 1)?)) } else { None };
        let p = if self.calc.scale().is_some() {
            let by_lambda = self.kernel(OperatorId::Lambda, space)?;
            match &by_l {
                Some(l) if *l != by_lambda => {
                    return Err(Error::CrossCheckMismatch(format!(
                        "ker Lambda on {space} is {by_lambda:?}, ker L^{} is {l:?}",
                        n - k + 1
                    )));
                }
                None if !by_lambda.is_zero() => {
                    return Err(Error::CrossCheckMismatch(format!("Lambda is not injective on {space}")));
                }
                _ => by_lambda,
            }
        } else {
            by_l.unwrap_or_else(|| Subspace::zero(space, n))
        };
        self.primitive.lock().expect("cache lock").insert(space, p.clone());
        Ok(p)
    }

    pub fn primitive_subspace(&self, pq: Bidegree) -> Result<Subspace> {
        self.primitive_space(Space::Bidegree(pq))
    }

    /// Matrix of `L^r` on a space.
    pub fn l_power_matrix(&self, source: Space, r: usize) -> Result<Matrix<Q>> {
        let mut m = Matrix::identity(source.dim(self.n()));
        let mut space = source;
        for _ in 0..r {
            m = &self.matrix(OperatorId::L, space)? * &m;
            space = self.calc.target(OperatorId::L, space);
        }
        Ok(m)
    }

    /// The space receiving `L^r` from `source`.
    pub fn l_power_target(&self, source: Space, r: usize) -> Space {
        (0..r).fold(source, |s, _| self.calc.target(OperatorId::L, s))
    }

    /// `L^r(V)`.
    pub fn l_power_image(&self, v: &Subspace, r: usize) -> Result<Subspace> {
        let m = self.l_power_matrix(v.ambient(), r)?;
        let target = self.l_power_target(v.ambient(), r);
        let images: Vec<Vec<Q>> = v.rows().iter().map(|row| m.mul_vec(row)).collect();
        Ok(Subspace::from_vectors(target, self.n(), &images))
    }

    /// The line `ℂ·ω^k`.
    pub fn omega_power_line(&self, k: usize) -> Result<Subspace> {
        let space = Space::Bidegree(Bidegree::new(k, k));
        Subspace::span(space, self.n(), &[self.omega().power(k)])
    }

    /// Solves `a = Σ (1/r!) L^r β_{k−2r}` with each `β` primitive.
    pub fn primitive_decompose(&self, a: &Form<Q>) -> Result<PrimitiveDecomposition> {
        let n = self.n();
        if a.is_zero() {
            return Ok(PrimitiveDecomposition { input: a.clone(), degree: 0, components: BTreeMap::new() });
        }
        let k = a.degree().ok_or_else(|| Error::InvalidInput(format!("{a} is not homogeneous")))?;
        if k > 2 * n || a.max_index() > n {
            return Err(Error::InvalidInput(format!("{a} is not a form in complex dimension {n}")));
        }
        let target = Space::Degree(k);
        let mut columns = Vec::new();
        let mut blocks = Vec::new();
        for r in k.saturating_sub(n)..=k / 2 {
            let space = Space::Degree(k - 2 * r);
            let p = self.primitive_space(space)?;
            let m = self.l_power_matrix(space, r)?.scale(&inverse_factorial(r));
            for row in p.rows() {
                columns.push(m.mul_vec(row));
            }
            blocks.push((r, p));
        }
        let system = Matrix::from_columns(&columns, target.dim(n));
        let rhs = a.coordinates(&target.basis(n)).expect("degree checked");
        let x = system
            .solve(&rhs)
            .ok_or_else(|| Error::SolveFailure(format!("no primitive decomposition found for {a}")))?;
        let mut components = BTreeMap::new();
        let mut offset = 0;
        for (r, p) in blocks {
            let mut beta: Form<Q> = Form::zero();
            for (c, f) in x[offset..offset + p.dim()].iter().zip(p.forms()) {
                if !c.is_zero() {
                    beta = beta + f.scale_const(c);
                }
            }
            offset += p.dim();
            if !beta.is_zero() {
                components.insert(r, beta);
            }
        }
        let out = PrimitiveDecomposition { input: a.clone(), degree: k, components };
        if out.reconstruct(self.omega()) != *a {
            return Err(Error::CrossCheckMismatch(format!("primitive decomposition of {a} does not reconstruct")));
        }
        Ok(out)
    }

    /// `(n+1)×(n+1)` table of `dim H^{p,q}_D`, indexed `[p][q]`.
    pub fn hodge_table(&self, which: Differential) -> Result<HodgeTable> {
        let n = self.n();
        let mut rows = vec![vec![0; n + 1]; n + 1];
        for pq in Bidegree::all(n) {
            rows[pq.p][pq.q] = self.harmonic_space(which, pq)?.dim();
        }
        Ok(HodgeTable { spec_name: self.spec.name.clone(), operator: which.to_string(), rows })
    }

    /// Expresses generators in the echelon basis of `v`: row `i` holds the
    /// coordinates of `generators[i]`. `None` unless the generators lie in
    /// `v` and span it.
    pub fn change_of_basis(v: &Subspace, generators: &[Form<Q>]) -> Option<Matrix<Q>> {
        let rows = generators.iter().map(|g| v.coordinates_of(g)).collect::<Option<Vec<_>>>()?;
        let m = Matrix::from_rows(rows, v.dim());
        (m.rank() == v.dim()).then_some(m)
    }
}

/// Invariant harmonic dimensions `h^{p,q}_D`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct HodgeTable {
    pub spec_name: String,
    pub operator: String,
    pub rows: Vec<Vec<usize>>,
}
