//! The identity suite behind `so4sph verify` and the acceptance run. Each
//! layer returns rows with a descriptive label and a pass/fail/skip status.
//! Rendered reports contain no timings, so identical inputs give identical
//! bytes.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{rat, Matrix, MatrixPolynomial, Polynomial, Var, GR};
use crate::error::Result;
use crate::family::{build_family, coeffs_by_racah, coeffs_by_recursion, FamilyPackage, HFunction};
use crate::group::{
    chebyshev_u, h_inner_product, max_abs_c, phi_pi, rep_exp, seeded_rng, wedge_cover, CMatrix, Rotation,
    SphericalFunction, TOL_COMPOSITE, TOL_SINGLE,
};
use crate::hyp::{hyp_solve, l_eigensolve, polynomial_solutions};
use crate::operators::{apply, build_operator_with, commutator_check, conjugate, OperatorName};
use crate::orthogonality::{
    commutant, gram_table, ldu_decompose, symmetry_check, symmetry_check_monomials, trace_norm_check, WeightMatrix,
};
use crate::special::{factorial, gegenbauer};
use crate::structures::{
    build_l_n, build_structures, eigen_ledger, lambda_matrix, lambda_wk, mu_matrix, mu_wk, StructureSet,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Layer {
    Hahn,
    Coefficients,
    Operators,
    Degrees,
    Orthogonality,
    Weight,
    Group,
}

impl Layer {
    pub fn name(self) -> &'static str {
        match self {
            Self::Hahn => "hahn",
            Self::Coefficients => "coefficients",
            Self::Operators => "operators",
            Self::Degrees => "degrees",
            Self::Orthogonality => "orthogonality",
            Self::Weight => "weight",
            Self::Group => "group",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub layer: Layer,
    pub label: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(layer: Layer, label: impl Into<String>, outcome: impl FnOnce() -> Result<(bool, String)>) -> Self {
        let (status, detail) = match outcome() {
            Ok((true, d)) => (Status::Pass, d),
            Ok((false, d)) => (Status::Fail, d),
            Err(e) => (Status::Fail, format!("error: {e}")),
        };
        Self { layer, label: label.into(), status, detail }
    }

    fn skip(layer: Layer, label: impl Into<String>, why: &str) -> Self {
        Self { layer, label: label.into(), status: Status::Skip, detail: why.into() }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Counts cases and remembers the first failure.
struct Tally {
    cases: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Self { cases: 0, first_failure: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }

    fn finish(self) -> Result<(bool, String)> {
        Ok(match self.first_failure {
            None => (true, format!("{} cases exact", self.cases)),
            Some(f) => (false, format!("fails at {f}")),
        })
    }
}

fn u_at(u: &Matrix, j: isize, k: isize) -> GR {
    let n = u.rows() as isize;
    if j < 0 || k < 0 || j >= n || k >= n {
        GR::zero()
    } else {
        u[(j as usize, k as usize)].clone()
    }
}

pub fn hahn_layer(s: &StructureSet) -> Vec<Check> {
    let ell = s.ell;
    let l = ell as i64;
    let n = ell + 1;
    let ly = Layer::Hahn;
    let g = GR::from_int;
    let mut out = Vec::new();
    out.push(Check::new(ly, "Hahn columns diagonalize C0+C1 with eigenvalues -j(j+1)", || {
        let lhs = &(&s.c0 + &s.c1) * &s.u;
        let rhs = &s.u * &Matrix::diag((0..n as i64).map(|j| g(-j * (j + 1))).collect());
        Ok((lhs == rhs, format!("{n} columns")))
    }));
    out.push(Check::new(ly, "Hahn orthogonality with squared norms (l+j+1)!(l-j)!/((2j+1)l!l!)", || {
        Ok((&s.u.transpose() * &s.u == s.ustar_u, format!("{n}x{n} Gram")))
    }));
    out.push(Check::new(ly, "Hahn three-term recursion in j", || {
        let mut t = Tally::new();
        for j in 0..n as i64 {
            for k in 0..n as i64 {
                let (ji, ki) = (j as isize, k as isize);
                let lhs = &g(j * (l - j + 1) + (j + 1) * (l - j) - k * (k + 1)) * &u_at(&s.u, ji, ki);
                let rhs = &(&g(j * (l - j + 1)) * &u_at(&s.u, ji - 1, ki))
                    + &(&g((j + 1) * (l - j)) * &u_at(&s.u, ji + 1, ki));
                t.check(lhs == rhs, || format!("j={j} k={k}"));
            }
        }
        t.finish()
    }));
    out.push(Check::new(ly, "Hahn three-term recursion in k", || {
        let mut t = Tally::new();
        for j in 0..n as i64 {
            for k in 0..n as i64 {
                let (ji, ki) = (j as isize, k as isize);
                let lhs = &g(l - 2 * j) * &u_at(&s.u, ji, ki);
                let rhs = &(&GR::from_frac(k * (l + k + 1), 2 * k + 1) * &u_at(&s.u, ji, ki - 1))
                    + &(&GR::from_frac((k + 1) * (l - k), 2 * k + 1) * &u_at(&s.u, ji, ki + 1));
                t.check(lhs == rhs, || format!("j={j} k={k}"));
            }
        }
        t.finish()
    }));
    out.push(Check::new(ly, "Hahn mixed first-order relation in (j, k)", || {
        let mut t = Tally::new();
        for j in 0..n as i64 {
            for k in 0..n as i64 {
                let (ji, ki) = (j as isize, k as isize);
                let lhs = &g(k * (l - j) - k * (k + j + 1) + 2 * (j + 1) * (l - j)) * &u_at(&s.u, ji, ki);
                // The k-term enters with a plus sign; with a minus the
                // relation already fails at j=0, k=1.
                let rhs = &(&g(2 * (j + 1) * (l - j)) * &u_at(&s.u, ji + 1, ki))
                    + &(&g(k * (k + l + 1)) * &u_at(&s.u, ji, ki - 1));
                t.check(lhs == rhs, || format!("j={j} k={k}"));
            }
        }
        t.finish()
    }));
    let conj = |m: &Matrix| &(&s.u_inv * m) * &s.u;
    out.push(Check::new(ly, "U^-1 A0 U = Q0 + Q1", || Ok((conj(&s.a0) == &s.q0 + &s.q1, String::new()))));
    out.push(Check::new(ly, "U^-1 (C1 + C0) U = -V0", || Ok((conj(&(&s.c1 + &s.c0)) == -&s.v0, String::new()))));
    out.push(Check::new(ly, "U^-1 (C1 - C0) U = Q1 J - Q0 (J + 1)", || {
        let rhs = &(&s.q1 * &s.j) - &(&s.q0 * &(&s.j + &Matrix::identity(n)));
        Ok((conj(&(&s.c1 - &s.c0)) == rhs, String::new()))
    }));
    out
}

/// `(-2i)^j k! j! / ((k-j)! (2j)!)` for `j ≤ k`, zero beyond.
pub fn a_w0_closed_form(k: usize, j: usize) -> GR {
    if j > k {
        return GR::zero();
    }
    let c = num_rational::BigRational::new(
        factorial(k as u64) * factorial(j as u64),
        factorial((k - j) as u64) * factorial(2 * j as u64),
    );
    GR::i().scale(&rat(-2, 1)).pow(j as u32).scale(&c)
}

/// `Ψ_jk = (2j+1)(-2i)^j k! j!/(k+j+1)! C^{j+1}_{k-j}(u)` above the diagonal.
pub fn psi_entry_closed_form(j: usize, k: usize) -> Polynomial {
    if j > k {
        return Polynomial::zero(Var::U);
    }
    let c = num_rational::BigRational::new(
        factorial(k as u64) * factorial(j as u64) * num_bigint::BigInt::from(2 * j + 1),
        factorial((k + j + 1) as u64),
    );
    gegenbauer(k - j, (j + 1) as u32).scale(&GR::i().scale(&rat(-2, 1)).pow(j as u32).scale(&c))
}

pub fn coefficient_layer(ell: usize, w_max: usize, fam: &FamilyPackage) -> Vec<Check> {
    let ly = Layer::Coefficients;
    let mut out = Vec::new();
    out.push(Check::new(ly, "a^{w,k} by recursion equals the Racah closed form", || {
        let mut t = Tally::new();
        for w in 0..=w_max {
            for k in 0..=ell {
                let a = coeffs_by_recursion(ell, w, k)?;
                let b = coeffs_by_racah(ell, w, k)?;
                t.check(a == b, || format!("w={w} k={k}"));
            }
        }
        t.finish()
    }));
    out.push(Check::new(ly, "a^{0,k}_j = (-2i)^j k! j!/((k-j)!(2j)!)", || {
        let mut t = Tally::new();
        for k in 0..=ell {
            let a = coeffs_by_recursion(ell, 0, k)?;
            for j in 0..=ell {
                t.check(a.a[j] == a_w0_closed_form(k, j), || format!("k={k} j={j}"));
            }
        }
        t.finish()
    }));
    if ell >= 2 {
        out.push(Check::new(ly, "a^{0,2} starts (1, -2i, -2/3)", || {
            let a = coeffs_by_recursion(ell, 0, 2)?.a;
            let want = [GR::one(), GR::from_parts((0, 1), (-2, 1)), GR::from_frac(-2, 3)];
            Ok((a[..3] == want, format!("{}, {}, {}", a[0], a[1], a[2])))
        }));
    } else {
        out.push(Check::skip(ly, "a^{0,2} starts (1, -2i, -2/3)", "needs l >= 2"));
    }
    out.push(Check::new(ly, "a^{w,k}_j = 0 for j > w + k", || {
        let mut t = Tally::new();
        for w in 0..=w_max {
            for k in 0..=ell {
                let a = coeffs_by_recursion(ell, w, k)?;
                for j in (w + k + 1)..=ell {
                    t.check(a.a[j].is_zero(), || format!("w={w} k={k} j={j}"));
                }
            }
        }
        t.finish()
    }));
    out.push(Check::new(ly, "L(lambda_w(k)) a^{w,k} = mu_w(k) a^{w,k}", || {
        let mut t = Tally::new();
        for w in 0..=w_max {
            for k in 0..=ell {
                let a = coeffs_by_recursion(ell, w, k)?.a;
                let mu = GR::real(mu_wk(ell, w, k));
                let lhs = build_l_n(ell, w + k).mul_vec(&a);
                let rhs: Vec<GR> = a.iter().map(|x| x * &mu).collect();
                t.check(lhs == rhs, || format!("w={w} k={k}"));
            }
        }
        t.finish()
    }));
    out.push(Check::new(ly, "Psi entries are the scaled Gegenbauer polynomials C^{j+1}_{k-j}", || {
        let mut t = Tally::new();
        for j in 0..=ell {
            for k in 0..=ell {
                t.check(fam.psi[(j, k)] == psi_entry_closed_form(j, k), || format!("j={j} k={k}"));
            }
        }
        t.finish()
    }));
    out.push(Check::new(ly, "Psi is upper triangular with constant nonzero determinant", || {
        let d = fam.psi.det();
        Ok((fam.psi.is_upper_triangular() && d.is_constant() && !d.is_zero(), format!("det = {d}")))
    }));
    out.push(Check::new(ly, "eigenvalue ledger: both parameterizations agree, pairs distinct", || {
        let mut t = Tally::new();
        let mut seen = Vec::new();
        for w in 0..=w_max {
            for k in 0..=ell {
                let e = eigen_ledger(ell, w, k)?;
                t.check(e.is_consistent(), || format!("w={w} k={k}"));
                let key = (e.lambda, e.mu.clone());
                t.check(!seen.contains(&key), || format!("repeat at w={w} k={k}"));
                seen.push(key);
            }
        }
        t.finish()
    }));
    out
}

pub fn operator_layer(s: &StructureSet, fam: &FamilyPackage, w_max: usize) -> Vec<Check> {
    let ell = s.ell;
    let ly = Layer::Operators;
    let ops: Vec<_> = OperatorName::ALL.iter().map(|&n| build_operator_with(n, s)).collect();
    let mut out = Vec::new();
    let eig = |label: &str, op: usize, tilde: bool, mu: bool| {
        Check::new(ly, label, || {
            let mut t = Tally::new();
            for w in 0..=w_max {
                let p = if tilde { &fam.pw_tilde[&w] } else { &fam.pw[&w] };
                let e = if mu { mu_matrix(ell, w) } else { lambda_matrix(ell, w) };
                t.check(apply(&ops[op], p)? == p.right_mul_const(&e), || format!("w={w}"));
            }
            t.finish()
        })
    };
    out.push(eig("Dbar P_w = P_w Lambda_w", 0, false, false));
    out.push(eig("Ebar P_w = P_w M_w", 1, false, true));
    out.push(eig("Dtilde Ptilde_w = Ptilde_w Lambda_w", 2, true, false));
    out.push(eig("Etilde Ptilde_w = Ptilde_w M_w", 3, true, true));
    out.push(Check::new(ly, "Psi^-1 Dbar Psi = Dtilde", || Ok((conjugate(&ops[0], &fam.psi)? == ops[2], String::new()))));
    out.push(Check::new(ly, "Psi^-1 Ebar Psi = Etilde", || Ok((conjugate(&ops[1], &fam.psi)? == ops[3], String::new()))));
    out.push(Check::new(ly, "[Dbar, Ebar] = 0 on u^d e_j, d <= 12", || Ok((commutator_check(&ops[0], &ops[1], 12), String::new()))));
    out.push(Check::new(ly, "[Dtilde, Etilde] = 0 on u^d e_j, d <= 12", || Ok((commutator_check(&ops[2], &ops[3], 12), String::new()))));
    out.push(Check::new(ly, "P_w'(1) = -C^-1 (V + lambda) P_w(1) per column", || {
        let mut t = Tally::new();
        let c_inv = s.c.inverse().expect("C is diagonal with odd entries");
        let one = GR::one();
        for w in 0..=w_max {
            let p = &fam.pw[&w];
            let (d1, p1) = (p.derivative().eval(&one), p.eval(&one));
            for k in 0..=ell {
                let lam = GR::from_int(lambda_wk(w, k));
                let want = -&(&c_inv * &(&(&s.v + &Matrix::identity(ell + 1).scale(&lam)) * &p1));
                t.check(d1.column(k) == want.column(k), || format!("w={w} k={k}"));
            }
        }
        t.finish()
    }));
    out.push(Check::new(ly, "Ptilde_w'(1) = (S1 - C)^-1 (lambda - Lambda0) Ptilde_w(1) per column", || {
        let mut t = Tally::new();
        let m = (&s.s1 - &s.c).inverse().expect("triangular with odd diagonal");
        let one = GR::one();
        for w in 0..=w_max {
            let p = &fam.pw_tilde[&w];
            let (d1, p1) = (p.derivative().eval(&one), p.eval(&one));
            for k in 0..=ell {
                let lam = GR::from_int(lambda_wk(w, k));
                let want = &m * &(&(&Matrix::identity(ell + 1).scale(&lam) - &s.lambda0) * &p1);
                t.check(d1.column(k) == want.column(k), || format!("w={w} k={k}"));
            }
        }
        t.finish()
    }));
    out
}

pub fn degree_layer(ell: usize, fam: &FamilyPackage, w_max: usize) -> Vec<Check> {
    let ly = Layer::Degrees;
    let mut out = Vec::new();
    out.push(Check::new(ly, "deg Ptilde_w = w with diagonal nonsingular leading coefficient", || {
        let mut t = Tally::new();
        for w in 0..=w_max {
            let p = &fam.pw_tilde[&w];
            let lead = p.coeff(w);
            let ok = p.degree() == Some(w)
                && lead.is_diagonal()
                && (0..=ell).all(|j| !lead[(j, j)].is_zero());
            t.check(ok, || format!("w={w}"));
        }
        t.finish()
    }));
    out.push(Check::new(ly, "polynomial solutions at lambda = -n(n+2): degrees n-k, leading along e_k", || {
        let mut t = Tally::new();
        for n in 0..=w_max {
            let sols = polynomial_solutions(ell, n)?;
            let want: Vec<(usize, usize)> = (0..=n.min(ell)).rev().map(|k| (n - k, k)).collect();
            let got: Vec<(usize, usize)> = sols.iter().map(|p| (p.degree, p.leading_index)).collect();
            t.check(got == want, || format!("n={n}: {got:?}"));
        }
        t.finish()
    }));
    out.push(Check::new(ly, "L(-n(n+2)) has exactly min(n+1, l+1) ledger eigenvectors", || {
        let mut t = Tally::new();
        for n in 0..=w_max {
            t.check(l_eigensolve(ell, n)?.len() == n.min(ell) + 1, || format!("n={n}"));
        }
        t.finish()
    }));
    out.push(Check::new(ly, "series solution from Ptilde_w(s=0) e_k reproduces column k", || {
        let mut t = Tally::new();
        for w in 0..=w_max {
            let ps = fam.pw_tilde[&w].to_s()?;
            for k in 0..=ell {
                let col = ps.column(k);
                let f0 = col.eval(&GR::zero()).column(0);
                let sol = hyp_solve(ell, &GR::from_int(lambda_wk(w, k)), &f0, w + 3)?;
                t.check(sol.degree == Some(w) && sol.polynomial().as_ref() == Some(&col), || format!("w={w} k={k}"));
            }
        }
        t.finish()
    }));
    out.push(Check::new(ly, "no polynomial solution at lambda = -5 within 50 terms", || {
        let mut t = Tally::new();
        for k in 0..=ell {
            let e: Vec<GR> = (0..=ell).map(|j| if j == k { GR::one() } else { GR::zero() }).collect();
            t.check(!hyp_solve(ell, &GR::from_int(-5), &e, 50)?.is_polynomial, || format!("F0=e_{k}"));
        }
        t.finish()
    }));
    out
}

pub fn orthogonality_layer(ell: usize, fam: &FamilyPackage, w_max: usize, weight: &mut WeightMatrix) -> Vec<Check> {
    let ly = Layer::Orthogonality;
    let s = build_structures(ell);
    let mut out = Vec::new();
    let gram = gram_table(weight, fam, w_max);
    out.push(Check::new(ly, "<Ptilde_w, Ptilde_w'> = 0 for w != w', diagonal positive for w = w'", || {
        let g = gram.as_ref().map_err(Clone::clone)?;
        Ok((g.is_orthogonal(), format!("{} blocks", g.entries.len())))
    }));
    out.push(Check::new(ly, "trivial function has squared norm l+1", || {
        let v = trace_norm_check(ell)?;
        Ok((v == rat(ell as i64 + 1, 1), format!("{v}")))
    }));
    for (label, e) in [
        ("Lambda_w'* G(w,w') = G(w,w') Lambda_w", lambda_matrix as fn(usize, usize) -> Matrix),
        ("M_w'* G(w,w') = G(w,w') M_w", mu_matrix),
    ] {
        out.push(Check::new(ly, label, || {
            let g = gram.as_ref().map_err(Clone::clone)?;
            let mut t = Tally::new();
            for a in 0..=w_max {
                for b in 0..=w_max {
                    let gm = g.get(a, b);
                    t.check(&e(ell, b).conj_transpose() * gm == gm * &e(ell, a), || format!("w={a} w'={b}"));
                }
            }
            t.finish()
        }));
    }
    for name in [OperatorName::Dtilde, OperatorName::Etilde] {
        let op = build_operator_with(name, &s);
        let short = if name == OperatorName::Dtilde { "Dtilde" } else { "Etilde" };
        out.push(Check::new(ly, format!("<{short} F, G> = <F, {short} G> on the family"), || {
            Ok((symmetry_check(&op, weight, fam, w_max)?, format!("w <= {w_max}")))
        }));
        out.push(Check::new(ly, format!("<{short} F, G> = <F, {short} G> on monomials"), || {
            Ok((symmetry_check_monomials(&op, weight, 6)?, "degree <= 6".into()))
        }));
    }
    out
}

pub fn weight_layer(weight: &WeightMatrix) -> Vec<Check> {
    let ly = Layer::Weight;
    let ell = weight.ell;
    let mut out = Vec::new();
    out.push(Check::new(ly, "weight polynomial part is Hermitian", || {
        Ok((weight.poly_part.conj_transpose() == weight.poly_part, String::new()))
    }));
    out.push(Check::new(ly, "LDU: L D U reassembles the weight, D_jj = c_j (1-u^2)^j with c_j > 0", || {
        let d = ldu_decompose(ell)?;
        let shape = (0..=ell).all(|j| {
            let c = d.d[(j, j)].coeff(0);
            c.is_real() && c.re().is_positive() && d.d[(j, j)] == Polynomial::one_minus_sq_pow(j, Var::U).scale(&c)
        });
        Ok((d.reassemble() == weight.poly_part && d.l == d.u.conj_transpose() && shape, String::new()))
    }));
    out.push(Check::new(ly, "commutant of W has dimension 1 at l=0, 2 at l=2, >= 2 otherwise", || {
        let c = commutant(weight)?;
        let w = &weight.poly_part;
        let commutes = c.basis.iter().all(|b| {
            let b = MatrixPolynomial::from_const(b, Var::U);
            &b * w == w * &b
        });
        let dim_ok = match ell {
            0 => c.dimension == 1,
            2 => c.dimension == 2,
            _ => c.dimension >= 2,
        };
        let ok = commutes && dim_ok && c.basis.len() == c.dimension && c.basis[0] == Matrix::identity(ell + 1);
        Ok((ok, format!("dimension {}", c.dimension)))
    }));
    out.push(Check::new(ly, "R* W R is block diagonal for the computed R", || {
        let c = commutant(weight)?;
        let Some(r) = c.reduction else {
            return Ok((ell == 0, "no reduction (commutant is scalar)".into()));
        };
        let rp = MatrixPolynomial::from_const(&r.r, Var::U);
        let reduced = &(&rp.conj_transpose() * &weight.poly_part) * &rp;
        let k = r.block_sizes.0;
        let blocks = (0..=ell).all(|i| (0..=ell).all(|j| (i < k) == (j < k) || reduced[(i, j)].is_zero()));
        let ok = reduced == r.reduced && blocks && k > 0 && k <= ell && !r.r.det().is_zero();
        Ok((ok, format!("blocks {}+{}", k, r.block_sizes.1)))
    }));
    out
}

/// Number of random `(k_1, g, k_2)` samples in the group layer.
pub const GROUP_SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupTolerances {
    /// Single evaluations such as `Φ(e)`.
    pub single: f64,
    /// Products of several evaluations.
    pub composite: f64,
    pub zonal: f64,
    pub quadrature: f64,
}

impl Default for GroupTolerances {
    fn default() -> Self {
        Self { single: TOL_SINGLE, composite: TOL_COMPOSITE, zonal: 1e-8, quadrature: 1e-8 }
    }
}

fn close(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs_c(&(a - b))
}

fn tol_result(err: f64, tol: f64, cases: usize) -> Result<(bool, String)> {
    Ok((err < tol, format!("{cases} cases, max error {err:.1e} (tol {tol:.0e})")))
}

const QUADRATURE_LABEL: &str = "inequivalent H pairs are orthogonal under Gauss-Chebyshev quadrature";

fn quadrature_check(ell: usize, w_max: usize, tol: &GroupTolerances) -> Check {
    Check::new(Layer::Group, QUADRATURE_LABEL, || {
        let hs = (0..=w_max)
            .flat_map(|w| (0..=ell).map(move |k| HFunction::new(ell, w, k)))
            .collect::<Result<Vec<_>>>()?;
        let mut err: f64 = 0.0;
        let mut cases = 0;
        for (i, a) in hs.iter().enumerate() {
            for b in &hs[i + 1..] {
                err = err.max(h_inner_product(a, b, 64).norm());
                cases += 1;
            }
        }
        tol_result(err, tol.quadrature, cases)
    })
}

pub fn group_layer(ell: usize, w_max: usize, seed: u64, tol: &GroupTolerances) -> Vec<Check> {
    let ly = Layer::Group;
    let labels = [
        "Phi_pi restricted to K equals pi",
        "Phi(e) = I",
        "Phi(k1 g k2) = pi(k1) Phi(g) pi(k2)",
        "Phi(-g) = (-1)^(m1+m2) Phi(g)",
        "zonal case: Phi(a(theta)) = C_n^1(cos theta)/(n+1)",
        QUADRATURE_LABEL,
    ];
    if ell % 2 == 1 {
        let mut out: Vec<Check> =
            labels[..5].iter().map(|l| Check::skip(ly, *l, "odd l is not an SO(3) K-type")).collect();
        out.push(quadrature_check(ell, w_max, tol));
        return out;
    }
    let mut out = Vec::new();
    let funcs: Result<Vec<SphericalFunction>> =
        (0..=w_max).flat_map(|w| (0..=ell).map(move |k| SphericalFunction::new(ell, w, k))).collect();
    let funcs = match funcs {
        Ok(f) => f,
        Err(e) => return labels.iter().map(|l| Check::new(ly, *l, || Err(e.clone()))).collect(),
    };
    let rep = &funcs[0].rep;
    let mut rng = seeded_rng(seed);
    out.push(Check::new(ly, labels[0], || {
        let mut err: f64 = 0.0;
        for _ in 0..20 {
            let k = Rotation::random(3, &mut rng);
            err = err.max(close(&phi_pi(rep, &k.embed())?, &rep_exp(rep, &k)?));
            let (a, _) = wedge_cover(&k.embed())?;
            err = err.max(crate::group::max_abs(&(a.matrix() - k.matrix())));
        }
        tol_result(err, tol.single, 20)
    }));
    out.push(Check::new(ly, labels[1], || {
        let id = CMatrix::identity(ell + 1, ell + 1);
        let mut err: f64 = 0.0;
        for f in &funcs {
            err = err.max(close(&f.eval(&Rotation::identity(4))?, &id));
        }
        tol_result(err, tol.single, funcs.len())
    }));
    let mut equi: f64 = 0.0;
    let mut parity: f64 = 0.0;
    let mut failure = None;
    for i in 0..GROUP_SAMPLES {
        let f = &funcs[i % funcs.len()];
        let g = Rotation::random(4, &mut rng);
        let k1 = Rotation::random(3, &mut rng);
        let k2 = Rotation::random(3, &mut rng);
        let step = || -> Result<(f64, f64)> {
            let phi = f.eval(&g)?;
            let lhs = f.eval(&k1.embed().mul(&g).mul(&k2.embed()))?;
            let rhs = rep_exp(rep, &k1)? * &phi * rep_exp(rep, &k2)?;
            let sign = if (f.h.w + ell - f.h.k).is_multiple_of(2) { 1.0 } else { -1.0 };
            let neg = f.eval(&g.neg())?;
            Ok((close(&lhs, &rhs), close(&neg, &(phi.clone() * Complex64::new(sign, 0.0)))))
        };
        match step() {
            Ok((a, b)) => {
                equi = equi.max(a);
                parity = parity.max(b);
            }
            Err(e) => failure = Some(e),
        }
    }
    let (e2, e3) = match failure {
        Some(e) => (Err(e.clone()), Err(e)),
        None => (tol_result(equi, tol.composite, GROUP_SAMPLES), tol_result(parity, tol.composite, GROUP_SAMPLES)),
    };
    out.push(Check::new(ly, labels[2], || e2));
    out.push(Check::new(ly, labels[3], || e3));
    if ell == 0 {
        out.push(Check::new(ly, labels[4], || {
            let mut err: f64 = 0.0;
            let mut cases = 0;
            for n in 0..=6 {
                let f = SphericalFunction::new(0, n, 0)?;
                for i in 0..=12 {
                    let theta = i as f64 * std::f64::consts::PI / 12.0;
                    let phi = f.eval(&Rotation::a_theta(theta))?;
                    let want = chebyshev_u(n, theta.cos()) / (n + 1) as f64;
                    err = err.max((phi[(0, 0)] - Complex64::new(want, 0.0)).norm());
                    cases += 1;
                }
            }
            tol_result(err, tol.zonal, cases)
        }));
    } else {
        out.push(Check::skip(ly, labels[4], "only for l = 0"));
    }
    out.push(quadrature_check(ell, w_max, tol));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub ell: usize,
    pub w_max: usize,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub timings: Vec<(Layer, Duration)>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "verify l={} wmax={}", self.ell, self.w_max);
        let width = self.checks.iter().map(|c| c.label.chars().count()).max().unwrap_or(0);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            let pad = width - c.label.chars().count();
            let line = format!("{tag}  {:<13} {}{}  {}", c.layer.name(), c.label, " ".repeat(pad), c.detail);
            let _ = writeln!(s, "{}", line.trim_end());
        }
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        let skipped = self.checks.iter().filter(|c| c.status == Status::Skip).count();
        let _ = writeln!(s, "{} checks, {} failed, {} skipped", self.checks.len(), failed, skipped);
        s
    }
}

pub const DEFAULT_SEED: u64 = 20240607;

/// Every layer for one `ℓ`.
pub fn run_all(ell: usize, w_max: usize, tol: &GroupTolerances) -> Result<Report> {
    let mut timings = Vec::new();
    let mut checks = Vec::new();
    let s = build_structures(ell);
    let fam = build_family(ell, w_max)?;
    let mut weight = WeightMatrix::from_psi(ell, &fam.psi);
    let mut timed = |layer: Layer, f: &mut dyn FnMut() -> Vec<Check>| {
        let t = Instant::now();
        checks.extend(f());
        timings.push((layer, t.elapsed()));
    };
    timed(Layer::Hahn, &mut || hahn_layer(&s));
    timed(Layer::Coefficients, &mut || coefficient_layer(ell, w_max, &fam));
    timed(Layer::Operators, &mut || operator_layer(&s, &fam, w_max));
    timed(Layer::Degrees, &mut || degree_layer(ell, &fam, w_max));
    timed(Layer::Orthogonality, &mut || orthogonality_layer(ell, &fam, w_max, &mut weight));
    timed(Layer::Weight, &mut || weight_layer(&weight));
    timed(Layer::Group, &mut || group_layer(ell, w_max, DEFAULT_SEED, tol));
    Ok(Report { ell, w_max, checks, timings })
}
