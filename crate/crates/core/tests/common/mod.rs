//! Shared oracles for the integration tests. Everything here is computed
//! from the real coframe (structure equations e^a and the fundamental form)
//! without going through the Hodge star of the engine.

#![allow(dead_code)]

use std::collections::BTreeMap;

use akforms::catalog::{self, CatalogEntry};
use akforms::linalg::Matrix;
use akforms::model::{FrameForm, Pairing, RealFramePresentation};
use akforms::scalar::factorial;
use akforms::{
    Bidegree, ConstCalculus, Differential, Form, GaussianRational as Q, Hodge, Monomial, OperatorId, Space, Subspace,
};
use num_traits::{One, Signed, Zero};

pub const CONSTANT_ENTRIES: [&str; 5] = ["iwasawa_ak", "h12_t3", "kt4", "torus4_flat", "torus6_flat"];

/// Real-frame form: sorted 1-based index lists to coefficients.
pub type RealForm = BTreeMap<Vec<usize>, Q>;

pub struct Ctx {
    pub key: &'static str,
    pub entry: CatalogEntry,
    pub hodge: Hodge,
    pub real: RealFramePresentation,
    /// ω = λ Σ e^{a b} over the pairs, so |e^I|² = λ^{−|I|}.
    pub lambda: Q,
}

impl Ctx {
    pub fn new(key: &'static str) -> Self {
        let entry = catalog::get(key).unwrap();
        let hodge = Hodge::new(&entry.spec).unwrap();
        let n = entry.spec.n;
        let real = match &entry.real {
            Some(r) => r.presentation.clone(),
            None => RealFramePresentation::new(vec![FrameForm::zero(); 2 * n], Pairing::standard(n)).unwrap(),
        };
        let omega = real_of(&real.pairing, hodge.omega());
        let lambda = omega.values().next().map(|c| Q::real(c.re().abs())).unwrap();
        for (idx, c) in &omega {
            assert_eq!(Q::real(c.re().abs()), lambda, "{key}: omega is not uniform on {idx:?}");
        }
        Self { key, entry, hodge, real, lambda }
    }

    pub fn n(&self) -> usize {
        self.entry.spec.n
    }

    pub fn calc(&self) -> &ConstCalculus {
        self.hodge.calculus()
    }

    pub fn matrix(&self, id: OperatorId, source: Space) -> Matrix<Q> {
        self.calc().matrix(id, source).unwrap().matrix
    }

    pub fn basis(&self, space: Space) -> Vec<Form<Q>> {
        space.basis(self.n()).into_iter().map(Form::basis).collect()
    }

    pub fn bidegrees(&self) -> Vec<Bidegree> {
        Bidegree::all(self.n()).collect()
    }

    /// `d` computed in the real frame by the Leibniz rule, then rewritten in
    /// the complex basis.
    pub fn real_d(&self, a: &Form<Q>) -> Form<Q> {
        let diffs: Vec<RealForm> = self.real.differentials.iter().map(frame_to_real).collect();
        let r = real_of(&self.real.pairing, a);
        let mut out = RealForm::new();
        for (idx, c) in &r {
            for j in 0..idx.len() {
                for (t, ct) in &diffs[idx[j] - 1] {
                    let mut cat = idx[..j].to_vec();
                    cat.extend(t);
                    cat.extend(&idx[j + 1..]);
                    if let Some((sign, sorted)) = sort_sign(&cat) {
                        let s = if (j % 2 == 1) != (sign < 0) { -Q::one() } else { Q::one() };
                        add_to(&mut out, sorted, &(&s * &(c * ct)));
                    }
                }
            }
        }
        self.real.pairing.complexify_form(&FrameForm::from_terms(out.iter().map(|(k, v)| (k.as_slice(), v.clone()))))
    }

    /// Gram matrix of the monomial basis of `space` from the real frame.
    pub fn gram(&self, space: Space) -> Matrix<Q> {
        let basis = space.basis(self.n());
        let reals: Vec<RealForm> = basis.iter().map(|m| real_of(&self.real.pairing, &Form::basis(*m))).collect();
        let mut g = Matrix::zeros(basis.len(), basis.len());
        for (i, a) in reals.iter().enumerate() {
            for (j, b) in reals.iter().enumerate() {
                let mut s = Q::zero();
                for (idx, ca) in a {
                    if let Some(cb) = b.get(idx) {
                        let scale = self.lambda.inv().unwrap().pow(idx.len() as u32);
                        s = s + ca.clone() * cb.conj() * scale;
                    }
                }
                g.set(i, j, s);
            }
        }
        g
    }

    /// Hermitian adjoint of a matrix `source → target` for the real-frame metric.
    pub fn gram_adjoint(&self, m: &Matrix<Q>, source: Space, target: Space) -> Matrix<Q> {
        let b = &m.conj_transpose() * &self.gram(target);
        left_solve(&self.gram(source), &b)
    }
}

pub fn contexts() -> Vec<Ctx> {
    CONSTANT_ENTRIES.iter().map(|k| Ctx::new(k)).collect()
}

pub fn frame_to_real(f: &FrameForm) -> RealForm {
    f.entries().into_iter().collect()
}

pub fn real_of(p: &Pairing, a: &Form<Q>) -> RealForm {
    frame_to_real(&p.realify_form(a))
}

fn add_to(f: &mut RealForm, idx: Vec<usize>, c: &Q) {
    let e = f.entry(idx.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        f.remove(&idx);
    }
}

/// Sorts an index list, returning the permutation sign; `None` on repeats.
pub fn sort_sign(idx: &[usize]) -> Option<(i32, Vec<usize>)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, v))
}

/// `X` with `A X = B`, column by column.
pub fn left_solve(a: &Matrix<Q>, b: &Matrix<Q>) -> Matrix<Q> {
    let cols: Vec<Vec<Q>> = (0..b.cols()).map(|j| a.solve(&b.column(j)).expect("invertible")).collect();
    Matrix::from_columns(&cols, a.cols())
}

pub fn is_hermitian(a: &Matrix<Q>) -> bool {
    a.conj_transpose() == *a
}

/// Exact positive semidefiniteness of a Hermitian matrix by symmetric
/// elimination.
pub fn is_psd(a: &Matrix<Q>) -> bool {
    let n = a.rows();
    let mut m: Vec<Vec<Q>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    for i in 0..n {
        let p = m[i][i].clone();
        if !p.is_real() || p.re().is_negative() {
            return false;
        }
        if p.is_zero() {
            if m[i][i + 1..].iter().any(|x| !x.is_zero()) {
                return false;
            }
            continue;
        }
        let inv = p.inv().unwrap();
        for r in i + 1..n {
            let f = &m[r][i] * &inv;
            if f.is_zero() {
                continue;
            }
            for c in i + 1..n {
                let v = &m[r][c] - &(&f * &m[i][c]);
                m[r][c] = v;
            }
        }
    }
    true
}

pub fn j_oracle(a: &Form<Q>) -> Form<Q> {
    Form::from_terms(a.iter().map(|(m, c)| {
        let pq = m.bidegree();
        (*m, c * &Q::i_pow(pq.p as i64 - pq.q as i64))
    }))
}

pub fn power_of_l(calc: &ConstCalculus, a: &Form<Q>, r: usize) -> Form<Q> {
    (0..r).fold(a.clone(), |acc, _| calc.lefschetz(&acc))
}

/// Outcome of one property suite.
#[derive(Debug, Default)]
pub struct Suite {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self { name, ..Default::default() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn d(calc: &ConstCalculus, which: Differential, a: &Form<Q>) -> Form<Q> {
    calc.differential(which, a).unwrap()
}

/// The seven bidegree components of d² = 0, plus d against the real frame.
pub fn suite_d_squared(ctxs: &[Ctx]) -> Suite {
    use Differential::*;
    let mut s = Suite::new("d^2 = 0 by bidegree");
    for ctx in ctxs {
        let c = ctx.calc();
        for m in (0..=2 * ctx.n()).flat_map(|k| Space::Degree(k).basis(ctx.n())) {
            let a = Form::basis(m);
            let dd = |x: Differential, y: Differential| d(c, x, &d(c, y, &a));
            let relations = [
                dd(Mu, Mu),
                dd(Mu, Del) + dd(Del, Mu),
                dd(Del, Del) + dd(Mu, Delbar) + dd(Delbar, Mu),
                dd(Mu, Mubar) + dd(Del, Delbar) + dd(Delbar, Del) + dd(Mubar, Mu),
                dd(Delbar, Delbar) + dd(Mubar, Del) + dd(Del, Mubar),
                dd(Mubar, Delbar) + dd(Delbar, Mubar),
                dd(Mubar, Mubar),
            ];
            for (i, r) in relations.iter().enumerate() {
                s.check(r.is_zero(), || format!("{}: relation {} on {m} gives {r}", ctx.key, i + 1));
            }
            let engine = d(c, D, &a);
            let oracle = ctx.real_d(&a);
            s.check(engine == oracle, || format!("{}: d{m} = {engine}, real frame gives {oracle}", ctx.key));
        }
    }
    s
}

pub fn suite_star_star(ctxs: &[Ctx]) -> Suite {
    let mut s = Suite::new("** = (-1)^k");
    for ctx in ctxs {
        let c = ctx.calc();
        for m in (0..=2 * ctx.n()).flat_map(|k| Space::Degree(k).basis(ctx.n())) {
            let a = Form::basis(m);
            let twice = c.star(&c.star(&a).unwrap()).unwrap();
            let sign = if m.degree() % 2 == 0 { Q::one() } else { -Q::one() };
            s.check(twice == a.scale_const(&sign), || format!("{}: **{m} = {twice}", ctx.key));
        }
    }
    s
}

/// Λ = −*L* as an operator, and Λ = (−1)^{k+1} L^† for the Gram adjoint.
pub fn suite_lambda(ctxs: &[Ctx]) -> Suite {
    let mut s = Suite::new("Lambda = -*L*");
    for ctx in ctxs {
        let c = ctx.calc();
        for pq in ctx.bidegrees() {
            let src = Space::Bidegree(pq);
            let tgt = c.target(OperatorId::Lambda, src);
            let lam = ctx.matrix(OperatorId::Lambda, src);
            for (j, a) in ctx.basis(src).iter().enumerate() {
                let composed = -c.star(&c.lefschetz(&c.star(a).unwrap())).unwrap();
                let column = Form::from_coordinates(&tgt.basis(ctx.n()), &lam.column(j));
                s.check(composed == column, || format!("{}: Lambda {a}: matrix {column}, -*L* {composed}", ctx.key));
            }
            if tgt == Space::Empty {
                continue;
            }
            let l_adj = ctx.gram_adjoint(&ctx.matrix(OperatorId::L, tgt), tgt, src);
            let sign = if pq.degree() % 2 == 1 { Q::one() } else { -Q::one() };
            s.check(lam == l_adj.scale(&sign), || format!("{}: Lambda on {pq} is not (-1)^(k+1) L^dagger", ctx.key));
        }
    }
    s
}

pub fn suite_primitive_kernels(ctxs: &[Ctx]) -> Suite {
    let mut s = Suite::new("ker Lambda = ker L^(n-k+1)");
    for ctx in ctxs {
        let n = ctx.n();
        for pq in ctx.bidegrees() {
            let src = Space::Bidegree(pq);
            let k = pq.degree();
            let by_lambda = Subspace::kernel(src, n, &ctx.matrix(OperatorId::Lambda, src));
            let expected = if k <= n {
                let mut v: Vec<Form<Q>> = ctx.basis(src);
                for _ in 0..=n - k {
                    v = v.iter().map(|f| ctx.calc().lefschetz(f)).collect();
                }
                let tgt = ctx.hodge.l_power_target(src, n - k + 1);
                let cols: Vec<Vec<Q>> = v.iter().map(|f| f.coordinates(&tgt.basis(n)).unwrap()).collect();
                Subspace::kernel(src, n, &Matrix::from_columns(&cols, tgt.dim(n)))
            } else {
                Subspace::zero(src, n)
            };
            s.check(by_lambda == expected, || format!("{}: on {pq} ker Lambda {by_lambda:?} vs {expected:?}", ctx.key));
        }
    }
    s
}

/// `*L^r β = (−1)^{k(k+1)/2} r!/(n−k−r)! L^{n−k−r} J β` on primitive bases.
pub fn suite_star_primitive(ctxs: &[Ctx]) -> Suite {
    let mut s = Suite::new("star of L^r on primitive forms");
    for ctx in ctxs {
        let n = ctx.n();
        let c = ctx.calc();
        for pq in ctx.bidegrees().into_iter().filter(|b| b.degree() <= n) {
            let k = pq.degree();
            let src = Space::Bidegree(pq);
            let prim = Subspace::kernel(src, n, &ctx.matrix(OperatorId::Lambda, src));
            for beta in prim.forms() {
                for r in 0..=n - k {
                    let lhs = c.star(&power_of_l(c, &beta, r)).unwrap();
                    let sign = if (k * (k + 1) / 2) % 2 == 0 { Q::one() } else { -Q::one() };
                    let coef = sign * factorial(r) * factorial(n - k - r).inv().unwrap();
                    let rhs = power_of_l(c, &j_oracle(&beta), n - k - r).scale_const(&coef);
                    s.check(lhs == rhs, || format!("{}: r={r}, beta={beta}: {lhs} vs {rhs}", ctx.key));
                }
            }
        }
    }
    s
}

fn operator_spaces(ctx: &Ctx, which: Differential) -> Vec<Space> {
    if which == Differential::D {
        (0..=2 * ctx.n()).map(Space::Degree).collect()
    } else {
        ctx.bidegrees().into_iter().map(Space::Bidegree).collect()
    }
}

/// D* equals the Gram adjoint `G_s^{-1} M_D^H G_t`.
pub fn suite_adjoint(ctxs: &[Ctx]) -> Suite {
    let mut s = Suite::new("adjoint = Gram conjugate transpose");
    for ctx in ctxs {
        for which in Differential::ALL {
            for src in operator_spaces(ctx, which) {
                let tgt = ctx.calc().target(OperatorId::Diff(which), src);
                if tgt == Space::Empty {
                    continue;
                }
                let expected = ctx.gram_adjoint(&ctx.matrix(OperatorId::Diff(which), src), src, tgt);
                let engine = ctx.matrix(OperatorId::Adjoint(which), tgt);
                for j in 0..engine.cols() {
                    s.check(engine.column(j) == expected.column(j), || {
                        format!("{}: {which}* on {tgt}, column {j}", ctx.key)
                    });
                }
            }
        }
    }
    s
}

pub fn suite_laplacian(ctxs: &[Ctx]) -> Suite {
    let mut s = Suite::new("Laplacians Hermitian PSD");
    for ctx in ctxs {
        for which in Differential::ALL {
            for src in operator_spaces(ctx, which) {
                let a = &ctx.gram(src) * &ctx.matrix(OperatorId::Laplacian(which), src);
                s.check(is_hermitian(&a), || format!("{}: G Delta_{which} on {src} not Hermitian", ctx.key));
                s.check(is_psd(&a), || format!("{}: Delta_{which} on {src} not PSD", ctx.key));
            }
        }
    }
    s
}

pub fn check_decomposition(ctx: &Ctx, a: &Form<Q>) -> Result<(), String> {
    let c = ctx.calc();
    let dec = ctx.hodge.primitive_decompose(a).map_err(|e| e.to_string())?;
    let mut sum: Form<Q> = Form::zero();
    for (r, beta) in &dec.components {
        if !c.lambda(beta).unwrap().is_zero() {
            return Err(format!("component {r} of {a} is not primitive: {beta}"));
        }
        sum = sum + power_of_l(c, beta, *r).scale_const(&factorial(*r).inv().unwrap());
    }
    if sum != *a {
        return Err(format!("{a} reconstructs to {sum}"));
    }
    Ok(())
}

pub fn suite_decompose(ctxs: &[Ctx]) -> Suite {
    let mut s = Suite::new("primitive decomposition reconstructs");
    for ctx in ctxs {
        for m in (0..=2 * ctx.n()).flat_map(|k| Space::Degree(k).basis(ctx.n())) {
            let r = check_decomposition(ctx, &Form::basis(m));
            s.check(r.is_ok(), || format!("{}: {}", ctx.key, r.unwrap_err()));
        }
    }
    s
}

/// `[L, L^†] = (k − n) id` with the Gram adjoint.
pub fn suite_commutator(ctxs: &[Ctx]) -> Suite {
    let mut s = Suite::new("[L, L^dagger] = (k-n) id");
    for ctx in ctxs {
        let n = ctx.n();
        for k in 0..=2 * n {
            let src = Space::Degree(k);
            let adj = |space: Space| {
                let up = ctx.calc().target(OperatorId::L, space);
                if up == Space::Empty {
                    Matrix::zeros(space.dim(n), 0)
                } else {
                    ctx.gram_adjoint(&ctx.matrix(OperatorId::L, space), space, up)
                }
            };
            let dim = src.dim(n);
            let l_then_adj = if ctx.calc().target(OperatorId::L, src) == Space::Empty {
                Matrix::zeros(dim, dim)
            } else {
                &adj(src) * &ctx.matrix(OperatorId::L, src)
            };
            let down = if k >= 2 { Space::Degree(k - 2) } else { Space::Empty };
            let adj_then_l = if down == Space::Empty {
                Matrix::zeros(dim, dim)
            } else {
                &ctx.matrix(OperatorId::L, down) * &adj(down)
            };
            let comm = &adj_then_l - &l_then_adj;
            let expected = Matrix::identity(dim).scale(&Q::integer(k as i64 - n as i64));
            for j in 0..dim {
                s.check(comm.column(j) == expected.column(j), || format!("{}: degree {k}, column {j}", ctx.key));
            }
        }
    }
    s
}

/// conj maps H_D^{p,q} onto H_{D̄}^{q,p}; * maps it onto H_{D̄}^{n−q,n−p}.
pub fn suite_dualities(ctxs: &[Ctx]) -> Suite {
    let mut s = Suite::new("conjugation and star dualities");
    for ctx in ctxs {
        let n = ctx.n();
        let c = ctx.calc();
        for which in Differential::ALL {
            for pq in ctx.bidegrees() {
                let h = ctx.hodge.harmonic_space(which, pq).unwrap();
                let conj_target = ctx.hodge.harmonic_space(which.conj(), pq.conj()).unwrap();
                let star_pq = Bidegree::new(n - pq.q, n - pq.p);
                let star_target = ctx.hodge.harmonic_space(which.conj(), star_pq).unwrap();
                let conj: Vec<Form<Q>> = h.forms().iter().map(|f| f.conj()).collect();
                let star: Vec<Form<Q>> = h.forms().iter().map(|f| c.star(f).unwrap()).collect();
                let conj_span = Subspace::span(Space::Bidegree(pq.conj()), n, &conj).unwrap();
                let star_span = Subspace::span(Space::Bidegree(star_pq), n, &star).unwrap();
                s.check(conj_span == conj_target, || format!("{}: conj H_{which}^{pq}", ctx.key));
                s.check(star_span == star_target, || format!("{}: * H_{which}^{pq}", ctx.key));
            }
        }
    }
    s
}

pub fn all_suites(ctxs: &[Ctx]) -> Vec<Suite> {
    vec![
        suite_d_squared(ctxs),
        suite_star_star(ctxs),
        suite_lambda(ctxs),
        suite_primitive_kernels(ctxs),
        suite_star_primitive(ctxs),
        suite_adjoint(ctxs),
        suite_laplacian(ctxs),
        suite_decompose(ctxs),
        suite_commutator(ctxs),
        suite_dualities(ctxs),
    ]
}

pub fn mono(holo: &[usize], anti: &[usize]) -> Form<Q> {
    Form::basis(Monomial::new(holo, anti))
}

impl Ctx {
    /// Hermitian inner product from the real frame.
    pub fn inner(&self, a: &Form<Q>, b: &Form<Q>) -> Q {
        let ra = real_of(&self.real.pairing, a);
        let rb = real_of(&self.real.pairing, b);
        let mut s = Q::zero();
        for (idx, ca) in &ra {
            if let Some(cb) = rb.get(idx) {
                s = s + ca.clone() * cb.conj() * self.lambda.inv().unwrap().pow(idx.len() as u32);
            }
        }
        s
    }

    /// `a` from a list of `(basis position, re, im)` in the degree-`k` basis.
    pub fn form(&self, k: usize, coeffs: &[(usize, i64, i64)]) -> Form<Q> {
        let k = k % (2 * self.n() + 1);
        let basis = Space::Degree(k).basis(self.n());
        Form::from_terms(coeffs.iter().map(|&(i, re, im)| (basis[i % basis.len()], Q::from_ints(re, im))))
    }
}

/// `H^{p,q}_D` without the Hodge star: `ker D ∩ (D(preimage))^⊥` for the
/// real-frame metric.
pub fn harmonic_oracle(ctx: &Ctx, which: Differential, pq: Bidegree) -> Subspace {
    let n = ctx.n();
    let src = Space::Bidegree(pq);
    let mut rows = ctx.matrix(OperatorId::Diff(which), src);
    let g = ctx.gram(src);
    let pre: Vec<Space> = match which.shift() {
        Some((dp, dq)) => {
            let (p, q) = (pq.p as isize - dp, pq.q as isize - dq);
            if p >= 0 && q >= 0 && p as usize <= n && q as usize <= n {
                vec![Space::Bidegree(Bidegree::new(p as usize, q as usize))]
            } else {
                Vec::new()
            }
        }
        None if pq.degree() > 0 => vec![Space::Degree(pq.degree() - 1)],
        None => Vec::new(),
    };
    for space in pre {
        let m = ctx.matrix(OperatorId::Diff(which), space);
        let image: Vec<Form<Q>> = (0..m.cols())
            .map(|j| {
                let tgt = ctx.calc().target(OperatorId::Diff(which), space);
                Form::from_coordinates(&tgt.basis(n), &m.column(j)).project(pq)
            })
            .collect();
        let cols: Vec<Vec<Q>> = image.iter().map(|f| f.coordinates(&src.basis(n)).unwrap()).collect();
        let proj = Matrix::from_columns(&cols, src.dim(n));
        rows = rows.vstack(&(&proj.conj_transpose() * &g));
    }
    Subspace::kernel(src, n, &rows)
}
