//! Finite-dimensional post-Lie algebras by structure constants and the hat
//! construction: the Lie algebra `L + L'` with a Rota-Baxter operator of
//! weight -1, written in the basis `y_i = e_i`, `x_i = e_i + e_i'` where the
//! operator acts as `R(y_i) = y_i`, `R(x_i) = 0`.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::poly::{format_rational, rat, Rational};

/// Coordinates over a fixed basis.
pub type Vector = Vec<Rational>;

/// Structure constants `t[i][j][k]`: `e_i op e_j = sum_k t[i][j][k] e_k`.
pub type Table = Vec<Vec<Vector>>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Rational::one();
    v
}

pub fn zero_table(n: usize) -> Table {
    vec![vec![zero_vector(n); n]; n]
}

fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn axpy(acc: &mut [Rational], c: &Rational, v: &[Rational]) {
    if c.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(v) {
        *a += c * b;
    }
}

fn scaled(c: &Rational, v: &[Rational]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

fn sum(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn diff(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Bilinear extension of a structure-constant table.
pub fn apply_table(t: &Table, u: &[Rational], v: &[Rational]) -> Vector {
    let n = u.len();
    let mut out = zero_vector(n);
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            axpy(&mut out, &(ui * vj), &t[i][j]);
        }
    }
    out
}

/// Renders `2*e1 - 1/2*e3` over the given basis labels.
pub fn format_vector(v: &[Rational], names: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in v.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let negative = c < &Rational::zero();
        let abs = if negative { -c } else { c.clone() };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&format_rational(&abs));
            out.push('*');
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("an algebra needs at least one basis element")]
    Empty,
    #[error("expected {expected} basis names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("{table} table has wrong shape for dimension {dim}")]
    Shape { table: &'static str, dim: usize },
    #[error("input algebra is not post-Lie: {0}")]
    NotPostLie(String),
}

/// A failed identity, with the basis elements it failed on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: String,
    pub elements: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at ({}): {} != {}",
            self.identity,
            self.elements.join(", "),
            self.lhs,
            self.rhs
        )
    }
}

/// A post-Lie algebra `(L, [,], .)` over a basis `e_1..e_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostLieAlgebra {
    names: Vec<String>,
    bracket: Table,
    product: Table,
}

impl PostLieAlgebra {
    /// Raw constructor; checks shapes only. Use [`validate_post_lie`] for the
    /// axioms.
    pub fn new(names: Vec<String>, bracket: Table, product: Table) -> Result<Self, AlgebraError> {
        let n = names.len();
        if n == 0 {
            return Err(AlgebraError::Empty);
        }
        for (table, t) in [("bracket", &bracket), ("product", &product)] {
            let ok = t.len() == n && t.iter().all(|row| row.len() == n && row.iter().all(|v| v.len() == n));
            if !ok {
                return Err(AlgebraError::Shape { table, dim: n });
            }
        }
        Ok(PostLieAlgebra {
            names,
            bracket,
            product,
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn bracket_table(&self) -> &Table {
        &self.bracket
    }

    pub fn product_table(&self) -> &Table {
        &self.product
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vector {
        apply_table(&self.bracket, u, v)
    }

    pub fn product(&self, u: &[Rational], v: &[Rational]) -> Vector {
        apply_table(&self.product, u, v)
    }

    pub fn basis(&self, i: usize) -> Vector {
        unit_vector(self.dim(), i)
    }

    pub fn format(&self, v: &[Rational]) -> String {
        format_vector(v, &self.names)
    }

    /// Same algebra in the basis `e_{perm[0]}, e_{perm[1]}, ...`.
    pub fn relabel(&self, perm: &[usize]) -> PostLieAlgebra {
        let n = self.dim();
        let permute = |t: &Table| -> Table {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| t[perm[i]][perm[j]][perm[k]].clone()).collect())
                        .collect()
                })
                .collect()
        };
        PostLieAlgebra {
            names: perm.iter().map(|&i| self.names[i].clone()).collect(),
            bracket: permute(&self.bracket),
            product: permute(&self.product),
        }
    }
}

fn basis_labels(names: &[String], ix: &[usize]) -> Vec<String> {
    ix.iter().map(|&i| names[i].clone()).collect()
}

/// Antisymmetry and Jacobi of a bracket table over basis triples.
fn lie_violations(t: &Table, names: &[String], what: &str) -> Vec<Violation> {
    let n = t.len();
    let fmt = |v: &[Rational]| format_vector(v, names);
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let sym = sum(&t[i][j], &t[j][i]);
            if !is_zero_vector(&sym) {
                out.push(Violation {
                    identity: format!("antisymmetry of {what}"),
                    elements: basis_labels(names, &[i, j]),
                    lhs: fmt(&t[i][j]),
                    rhs: fmt(&scaled(&rat(-1), &t[j][i])),
                });
            }
        }
    }
    let e = |i: usize| unit_vector(n, i);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let jac = sum(
                    &sum(
                        &apply_table(t, &e(i), &t[j][k]),
                        &apply_table(t, &e(j), &t[k][i]),
                    ),
                    &apply_table(t, &e(k), &t[i][j]),
                );
                if !is_zero_vector(&jac) {
                    out.push(Violation {
                        identity: format!("Jacobi identity of {what}"),
                        elements: basis_labels(names, &[i, j, k]),
                        lhs: fmt(&jac),
                        rhs: "0".into(),
                    });
                }
            }
        }
    }
    out
}

/// Checks that `[,]` is a Lie bracket and both post-Lie identities
///
/// ```text
/// (x.y).z - x.(y.z) - (y.x).z + y.(x.z) = [y,x].z
/// x.[y,z] = [x.y,z] + [y,x.z]
/// ```
///
/// hold on every basis triple.
pub fn validate_post_lie(p: &PostLieAlgebra) -> Vec<Violation> {
    let n = p.dim();
    let mut out = lie_violations(&p.bracket, &p.names, "[,]");
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (x, y, z) = (p.basis(a), p.basis(b), p.basis(c));
                let xy = p.product(&x, &y);
                let yx = p.product(&y, &x);
                let lhs = sum(
                    &diff(
                        &diff(&p.product(&xy, &z), &p.product(&x, &p.product(&y, &z))),
                        &p.product(&yx, &z),
                    ),
                    &p.product(&y, &p.product(&x, &z)),
                );
                let rhs = p.product(&p.bracket(&y, &x), &z);
                if lhs != rhs {
                    out.push(Violation {
                        identity: "post-Lie identity 1: (x.y).z - x.(y.z) - (y.x).z + y.(x.z) = [y,x].z"
                            .into(),
                        elements: basis_labels(&p.names, &[a, b, c]),
                        lhs: p.format(&lhs),
                        rhs: p.format(&rhs),
                    });
                }
                let lhs = p.product(&x, &p.bracket(&y, &z));
                let rhs = sum(
                    &p.bracket(&xy, &z),
                    &p.bracket(&y, &p.product(&x, &z)),
                );
                if lhs != rhs {
                    out.push(Violation {
                        identity: "post-Lie identity 2: x.[y,z] = [x.y,z] + [y,x.z]".into(),
                        elements: basis_labels(&p.names, &[a, b, c]),
                        lhs: p.format(&lhs),
                        rhs: p.format(&rhs),
                    });
                }
            }
        }
    }
    out
}

/// Scalars of the hat bracket:
/// `[a,b] = s a.b + t b.a + r[a,b]`, `[a,b'] = s (a.b)'`,
/// `[a',b] = t (b.a)'`, `[a',b'] = r [a,b]'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SignConvention {
    pub sigma: i8,
    pub tau: i8,
    pub rho: i8,
}

impl SignConvention {
    /// The convention for weight -1 that makes `a -> a'` a post-Lie
    /// morphism.
    pub const WEIGHT_MINUS_ONE: SignConvention = SignConvention {
        sigma: -1,
        tau: 1,
        rho: -1,
    };

    pub fn all() -> impl Iterator<Item = SignConvention> {
        [-1i8, 1].into_iter().flat_map(|sigma| {
            [-1i8, 1].into_iter().flat_map(move |tau| {
                [-1i8, 1]
                    .into_iter()
                    .map(move |rho| SignConvention { sigma, tau, rho })
            })
        })
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.sigma, self.tau, self.rho)
    }
}

/// The weight of every hat algebra built here.
pub const WEIGHT: i64 = -1;

/// A Lie algebra on generators `y_1..y_n, x_1..x_n` (ordinals `0..2n`) with
/// the Rota-Baxter operator `R(y_i) = y_i`, `R(x_i) = 0` of weight -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RbLieAlgebra {
    n: usize,
    labels: Vec<String>,
    bracket: Table,
}

impl RbLieAlgebra {
    /// Raw constructor over ordinals `y1..yn, x1..xn`; no validation.
    pub fn from_table(n: usize, labels: Vec<String>, bracket: Table) -> Self {
        RbLieAlgebra { n, labels, bracket }
    }

    /// Half the dimension: the dimension of the input post-Lie algebra.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Basis labels of the source post-Lie algebra.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generator_names(&self) -> Vec<String> {
        (1..=self.n)
            .map(|i| format!("y{i}"))
            .chain((1..=self.n).map(|i| format!("x{i}")))
            .collect()
    }

    pub fn bracket_table(&self) -> &Table {
        &self.bracket
    }

    /// `[g_i, g_j]` over generator ordinals.
    pub fn bracket_of(&self, i: usize, j: usize) -> &Vector {
        &self.bracket[i][j]
    }

    pub fn set_bracket(&mut self, i: usize, j: usize, v: Vector) {
        self.bracket[i][j] = v;
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vector {
        apply_table(&self.bracket, u, v)
    }

    pub fn r(&self, v: &[Rational]) -> Vector {
        let mut out = v.to_vec();
        for c in &mut out[self.n..] {
            *c = Rational::zero();
        }
        out
    }

    pub fn generator(&self, i: usize) -> Vector {
        unit_vector(self.dim(), i)
    }

    /// Image `e_i' = x_i - y_i` of a post-Lie element with coordinates `v`.
    pub fn embed_vector(&self, v: &[Rational]) -> Vector {
        let mut out = zero_vector(self.dim());
        for (i, c) in v.iter().enumerate() {
            out[i] = -c;
            out[self.n + i] = c.clone();
        }
        out
    }

    pub fn format(&self, v: &[Rational]) -> String {
        format_vector(v, &self.generator_names())
    }
}

/// Builds `L + L'` with the bracket fixed by `signs`, then changes basis to
/// `y_i = e_i`, `x_i = e_i + e_i'`.
pub fn hat_with(p: &PostLieAlgebra, signs: SignConvention) -> RbLieAlgebra {
    let n = p.dim();
    let (s, t, r) = (rat(signs.sigma as i64), rat(signs.tau as i64), rat(signs.rho as i64));
    // (a, a') coordinates -> bracket in (a, a') coordinates
    let br = |u: &(Vector, Vector), v: &(Vector, Vector)| -> (Vector, Vector) {
        let (p0, p1) = u;
        let (q0, q1) = v;
        let plain = sum(
            &sum(&scaled(&s, &p.product(p0, q0)), &scaled(&t, &p.product(q0, p0))),
            &scaled(&r, &p.bracket(p0, q0)),
        );
        let primed = sum(
            &sum(&scaled(&s, &p.product(p0, q1)), &scaled(&t, &p.product(q0, p1))),
            &scaled(&r, &p.bracket(p1, q1)),
        );
        (plain, primed)
    };
    // y_i = (e_i, 0), x_i = (e_i, e_i)
    let gen = |g: usize| -> (Vector, Vector) {
        if g < n {
            (unit_vector(n, g), zero_vector(n))
        } else {
            (unit_vector(n, g - n), unit_vector(n, g - n))
        }
    };
    // (plain, primed) -> (y coords, x coords) = (plain - primed, primed)
    let to_yx = |(plain, primed): (Vector, Vector)| -> Vector {
        let mut out = diff(&plain, &primed);
        out.extend(primed);
        out
    };
    let bracket = (0..2 * n)
        .map(|i| (0..2 * n).map(|j| to_yx(br(&gen(i), &gen(j)))).collect())
        .collect();
    RbLieAlgebra {
        n,
        labels: p.names.clone(),
        bracket,
    }
}

/// The hat algebra under the weight -1 convention. Fails when `p` violates
/// the post-Lie axioms.
pub fn hat(p: &PostLieAlgebra) -> Result<RbLieAlgebra, AlgebraError> {
    let violations = validate_post_lie(p);
    if let Some(v) = violations.first() {
        return Err(AlgebraError::NotPostLie(v.to_string()));
    }
    Ok(hat_with(p, SignConvention::WEIGHT_MINUS_ONE))
}

/// Checks antisymmetry, Jacobi, the Rota-Baxter identity of weight -1
/// `[Ra,Rb] = R([Ra,b] + [a,Rb] - [a,b])`, idempotence `R^2 = R`, and that
/// `Span{x}` and `Span{y}` are subalgebras; all on generators.
pub fn validate_rb_lie(h: &RbLieAlgebra) -> Vec<Violation> {
    let names = h.generator_names();
    let d = h.dim();
    let n = h.n;
    let mut out = lie_violations(&h.bracket, &names, "the hat bracket");
    let lambda = rat(WEIGHT);
    for i in 0..d {
        let a = h.generator(i);
        if h.r(&h.r(&a)) != h.r(&a) {
            out.push(Violation {
                identity: "R^2 = R".into(),
                elements: vec![names[i].clone()],
                lhs: h.format(&h.r(&h.r(&a))),
                rhs: h.format(&h.r(&a)),
            });
        }
        for j in 0..d {
            let b = h.generator(j);
            let lhs = h.bracket(&h.r(&a), &h.r(&b));
            let inner = sum(
                &sum(&h.bracket(&h.r(&a), &b), &h.bracket(&a, &h.r(&b))),
                &scaled(&lambda, &h.bracket(&a, &b)),
            );
            let rhs = h.r(&inner);
            if lhs != rhs {
                out.push(Violation {
                    identity: "Rota-Baxter identity [Ra,Rb] = R([Ra,b] + [a,Rb] - [a,b])".into(),
                    elements: vec![names[i].clone(), names[j].clone()],
                    lhs: h.format(&lhs),
                    rhs: h.format(&rhs),
                });
            }
        }
    }
    for (kind, range) in [("y", 0..n), ("x", n..d)] {
        for i in range.clone() {
            for j in range.clone() {
                let v = &h.bracket[i][j];
                let outside = v
                    .iter()
                    .enumerate()
                    .any(|(k, c)| !c.is_zero() && !range.contains(&k));
                if outside {
                    out.push(Violation {
                        identity: format!("Span{{{kind}}} closed under the bracket"),
                        elements: vec![names[i].clone(), names[j].clone()],
                        lhs: h.format(v),
                        rhs: format!("an element of Span{{{kind}}}"),
                    });
                }
            }
        }
    }
    out
}

/// Checks that `a -> a' = x_a - y_a` intertwines `(., [,])` of `p` with the
/// derived post-Lie structure `u > v = [Ru, v]`, `{u,v} = -[u,v]` of `h`.
pub fn morphism_violations(p: &PostLieAlgebra, h: &RbLieAlgebra) -> Vec<Violation> {
    let n = p.dim();
    let lambda = rat(WEIGHT);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (ei, ej) = (p.basis(i), p.basis(j));
            let (ui, uj) = (h.embed_vector(&ei), h.embed_vector(&ej));
            let product = h.bracket(&h.r(&ui), &uj);
            let expected = h.embed_vector(&p.product(&ei, &ej));
            if product != expected {
                out.push(Violation {
                    identity: "image of a.b equals [R a', b']".into(),
                    elements: basis_labels(&p.names, &[i, j]),
                    lhs: h.format(&product),
                    rhs: h.format(&expected),
                });
            }
            let bracket = scaled(&lambda, &h.bracket(&ui, &uj));
            let expected = h.embed_vector(&p.bracket(&ei, &ej));
            if bracket != expected {
                out.push(Violation {
                    identity: "image of [a,b] equals -[a',b']".into(),
                    elements: basis_labels(&p.names, &[i, j]),
                    lhs: h.format(&bracket),
                    rhs: h.format(&expected),
                });
            }
        }
    }
    out
}

/// Result of searching all eight sign conventions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignResolution {
    pub passing: Vec<SignConvention>,
}

impl SignResolution {
    pub fn unique(&self) -> Option<SignConvention> {
        match self.passing.as_slice() {
            [only] => Some(*only),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no sign convention yields a Rota-Baxter Lie algebra with a post-Lie embedding")]
pub struct NoSignConvention;

/// Every `(sigma, tau, rho)` for which the hat algebra validates and the
/// embedding is a post-Lie morphism.
pub fn resolve_sign_convention(p: &PostLieAlgebra) -> Result<SignResolution, NoSignConvention> {
    let passing: Vec<_> = SignConvention::all()
        .filter(|&s| {
            let h = hat_with(p, s);
            validate_rb_lie(&h).is_empty() && morphism_violations(p, &h).is_empty()
        })
        .collect();
    if passing.is_empty() {
        return Err(NoSignConvention);
    }
    Ok(SignResolution { passing })
}

/// Intersects [`resolve_sign_convention`] over several algebras.
pub fn resolve_sign_convention_all(
    algebras: &[PostLieAlgebra],
) -> Result<SignResolution, NoSignConvention> {
    let mut passing: Vec<SignConvention> = SignConvention::all().collect();
    for p in algebras {
        let r = resolve_sign_convention(p)?;
        passing.retain(|s| r.passing.contains(s));
    }
    if passing.is_empty() {
        return Err(NoSignConvention);
    }
    Ok(SignResolution { passing })
}

/// Small algebras used by tests, benches and the startup self-check.
pub mod samples {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("e{i}")).collect()
    }

    fn set(t: &mut Table, i: usize, j: usize, v: &[(usize, i64)]) {
        let n = t.len();
        let mut out = zero_vector(n);
        for &(k, c) in v {
            out[k] = rat(c);
        }
        t[i][j] = out;
    }

    fn set_antisym(t: &mut Table, i: usize, j: usize, v: &[(usize, i64)]) {
        set(t, i, j, v);
        let neg: Vec<(usize, i64)> = v.iter().map(|&(k, c)| (k, -c)).collect();
        set(t, j, i, &neg);
    }

    /// `[e1,e2] = e2`, zero product.
    pub fn e_algebra() -> PostLieAlgebra {
        let mut b = zero_table(2);
        set_antisym(&mut b, 0, 1, &[(1, 1)]);
        PostLieAlgebra::new(names(2), b, zero_table(2)).unwrap()
    }

    /// One-dimensional, zero bracket, `e.e = e`.
    pub fn p1_algebra() -> PostLieAlgebra {
        let mut p = zero_table(1);
        set(&mut p, 0, 0, &[(0, 1)]);
        PostLieAlgebra::new(names(1), zero_table(1), p).unwrap()
    }

    /// `sl2` in the basis `e, f, h` with zero product.
    pub fn sl2_algebra() -> PostLieAlgebra {
        let mut b = zero_table(3);
        set_antisym(&mut b, 0, 1, &[(2, 1)]);
        set_antisym(&mut b, 2, 0, &[(0, 2)]);
        set_antisym(&mut b, 2, 1, &[(1, -2)]);
        PostLieAlgebra::new(
            vec!["e".into(), "f".into(), "h".into()],
            b,
            zero_table(3),
        )
        .unwrap()
    }

    pub fn abelian(n: usize) -> PostLieAlgebra {
        PostLieAlgebra::new(names(n), zero_table(n), zero_table(n)).unwrap()
    }

    /// Post-Lie structure induced by the projection of `[e1,e2] = e2` onto
    /// `Span{e1}` along `Span{e2}`: `e1.e2 = e2`, `[e1,e2] = -e2`. Has both a
    /// nonzero bracket and a nonzero product.
    pub fn d2_algebra() -> PostLieAlgebra {
        let mut b = zero_table(2);
        set_antisym(&mut b, 0, 1, &[(1, -1)]);
        let mut p = zero_table(2);
        set(&mut p, 0, 1, &[(1, 1)]);
        PostLieAlgebra::new(names(2), b, p).unwrap()
    }
}
