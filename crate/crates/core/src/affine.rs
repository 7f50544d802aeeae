//! Twisted codes from the affine groups `Gbar_k` over GF(p), `p > k >= 2`.
//!
//! `Gbar_k` consists of the `(k+1) x (k+1)` matrices
//!
//! ```text
//! [ 1  v B^i ]
//! [ 0   B^i  ]      v in GF(p)^k, i in 1..=p,
//! ```
//!
//! where `B = I + A` and `A` is the nilpotent down-shift. It acts on the
//! points `(1, x)` by right multiplication. The twisted code uses the `p`
//! automorphisms that add `r * (last row of Omega(k, i))` to the translation
//! part, `Omega(k, i) = I + B + ... + B^(i-1)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codes::{
    build_twisted_code, check_code_size, check_distance_invariance, check_distance_invariance_at,
    hamming_distance, min_distance_by_support, min_distance_pairwise, repetition_lower_bound,
    support_sums, Code, IndexedDomain, Representation, Symbol, TwistedSpec,
};
use crate::error::{Error, Result};
use crate::fields::{Field, PrimeField};
use crate::group::{EnumeratedGroup, GroupOps};
use crate::linalg::Matrix;
use crate::report::{CheckLevel, VerificationReport};

/// Cap on `|C| * length` for an affine build.
pub const MAX_CODE_SYMBOLS: usize = 1 << 29;

/// Pair `(p, k)` with `p` an odd prime and `p > k >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineParams {
    p: u32,
    k: usize,
}

impl AffineParams {
    pub fn new(p: u32, k: usize) -> Result<Self> {
        PrimeField::new(p)?;
        if k < 2 || k as u64 >= p as u64 {
            return Err(Error::Usage(format!(
                "need p > k >= 2, got p = {p}, k = {k}"
            )));
        }
        Ok(AffineParams { p, k })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `|Gbar_k| = p^(k+1)`.
    pub fn group_order(&self) -> usize {
        (self.p as usize).pow(self.k as u32 + 1)
    }

    /// `|Omega| = p^k`.
    pub fn num_points(&self) -> usize {
        (self.p as usize).pow(self.k as u32)
    }

    /// Refuses instances whose code exceeds [`MAX_CODE_SYMBOLS`].
    pub fn check_size(&self) -> Result<()> {
        let total = (self.p as u128).pow(2 * self.k as u32 + 2);
        if total > MAX_CODE_SYMBOLS as u128 {
            return Err(Error::SizeGuard(format!(
                "the code for p = {}, k = {} has {total} symbols, above the limit of {MAX_CODE_SYMBOLS}",
                self.p, self.k
            )));
        }
        Ok(())
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("validated")
    }

    pub fn expected_delta_tw(&self) -> usize {
        self.group_order() - self.p as usize
    }

    pub fn expected_delta_rep(&self) -> usize {
        self.group_order() - (self.p as usize).pow(2)
    }
}

/// `A_k`: zero first row, row `s` equal to `e_(s-1)`.
pub fn matrix_a(params: AffineParams) -> Matrix<PrimeField> {
    let mut a = Matrix::zeros(params.field(), params.k, params.k);
    for s in 1..params.k {
        a.set(s, s - 1, 1);
    }
    a
}

/// `B_k^i` from the binomial closed form: entry `(s, t)` is `binom(i, s - t)`.
pub fn b_power(params: AffineParams, i: u64) -> Matrix<PrimeField> {
    let f = params.field();
    let mut m = Matrix::zeros(f, params.k, params.k);
    for s in 0..params.k {
        for t in 0..=s {
            m.set(s, t, f.binomial(i, (s - t) as u64));
        }
    }
    m
}

/// `Omega(k, i)` from the closed form: entry `(s, t)` is `binom(i, s - t + 1)`.
pub fn omega_sum(params: AffineParams, i: u64) -> Result<Matrix<PrimeField>> {
    if i == 0 {
        return Err(Error::Usage("Omega(k, i) needs i >= 1".into()));
    }
    let f = params.field();
    let mut m = Matrix::zeros(f, params.k, params.k);
    for s in 0..params.k {
        for t in 0..=s {
            m.set(s, t, f.binomial(i, (s - t + 1) as u64));
        }
    }
    Ok(m)
}

/// An element of `Gbar_k` with its decomposition cached: `translation` is
/// `v` and `power` is `i` normalized to `1..=p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineElement {
    matrix: Matrix<PrimeField>,
    translation: Vec<u32>,
    power: u32,
}

impl AffineElement {
    pub fn matrix(&self) -> &Matrix<PrimeField> {
        &self.matrix
    }

    /// The vector `v` with top row `v B^i`.
    pub fn translation(&self) -> &[u32] {
        &self.translation
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    /// `v B^i`, the top row without its leading 1.
    pub fn top(&self) -> &[u32] {
        &self.matrix.row(0)[1..]
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }
}

/// A point `(1, x_1, ..., x_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePoint(pub Vec<u32>);

/// Precomputed powers of `B_k` and partial sums, shared by all operations on
/// one `Gbar_k`.
#[derive(Debug, Clone)]
pub struct AffineGroup {
    params: AffineParams,
    field: PrimeField,
    /// `B^0 ..= B^p`.
    b_powers: Vec<Matrix<PrimeField>>,
    /// `Omega(k, 1) ..= Omega(k, p)` at index `i - 1`.
    omegas: Vec<Matrix<PrimeField>>,
}

impl AffineGroup {
    pub fn new(params: AffineParams) -> Self {
        let p = params.p as u64;
        AffineGroup {
            params,
            field: params.field(),
            b_powers: (0..=p).map(|i| b_power(params, i)).collect(),
            omegas: (1..=p)
                .map(|i| omega_sum(params, i).expect("i >= 1"))
                .collect(),
        }
    }

    pub fn params(&self) -> AffineParams {
        self.params
    }

    fn normalize_power(&self, i: u64) -> u32 {
        let r = (i % self.params.p as u64) as u32;
        if r == 0 {
            self.params.p
        } else {
            r
        }
    }

    pub fn b(&self, i: u32) -> &Matrix<PrimeField> {
        &self.b_powers[i as usize]
    }

    pub fn omega(&self, i: u32) -> &Matrix<PrimeField> {
        &self.omegas[i as usize - 1]
    }

    fn assemble(&self, top: &[u32], power: u32) -> Matrix<PrimeField> {
        let k = self.params.k;
        let b = self.b(power);
        let mut m = Matrix::zeros(self.field, k + 1, k + 1);
        m.set(0, 0, 1);
        for c in 0..k {
            m.set(0, c + 1, top[c]);
            for r in 0..k {
                m.set(r + 1, c + 1, b.get(r, c));
            }
        }
        m
    }

    /// `[[1, v B^i], [0, B^i]]`.
    pub fn element(&self, translation: &[u32], i: u64) -> Result<AffineElement> {
        if translation.len() != self.params.k || translation.iter().any(|&x| x >= self.params.p) {
            return Err(Error::Usage(
                "translation vector must lie in GF(p)^k".into(),
            ));
        }
        let power = self.normalize_power(i);
        let top = self.b(power).apply(translation)?;
        Ok(AffineElement {
            matrix: self.assemble(&top, power),
            translation: translation.to_vec(),
            power,
        })
    }

    /// Recovers `(v, i)` from a matrix of the block form.
    pub fn decompose(&self, matrix: Matrix<PrimeField>) -> Result<AffineElement> {
        let k = self.params.k;
        if (matrix.rows(), matrix.cols()) != (k + 1, k + 1) || matrix.field() != &self.field {
            return Err(Error::Usage("not a matrix of Gbar_k's shape".into()));
        }
        if matrix.get(0, 0) != 1 || (1..=k).any(|r| matrix.get(r, 0) != 0) {
            return Err(Error::Domain("first column is not (1, 0, ..., 0)".into()));
        }
        // Entry (1, 0) of B^i is i mod p.
        let power = self.normalize_power(matrix.get(2, 1) as u64);
        let b = self.b(power);
        if (0..k).any(|r| (0..k).any(|c| matrix.get(r + 1, c + 1) != b.get(r, c))) {
            return Err(Error::Domain("lower block is not a power of B_k".into()));
        }
        let top = matrix.row(0)[1..].to_vec();
        let translation = self.b(self.params.p - power).apply(&top)?;
        Ok(AffineElement {
            matrix,
            translation,
            power,
        })
    }

    /// The twist `tau_{w_r} tau_{w_0}^{-1}`: translation part becomes
    /// `w_r Omega(k, i) + v B^i` with `w_r = (0, ..., 0, r)`.
    pub fn tau_twist(&self, r: u32, g: &AffineElement) -> AffineElement {
        let f = &self.field;
        let k = self.params.k;
        let r = r % self.params.p;
        if r == 0 {
            return g.clone();
        }
        let last = self.omega(g.power).row(k - 1);
        let top: Vec<u32> = g
            .top()
            .iter()
            .zip(last)
            .map(|(&a, &o)| f.add(a, f.mul(r, o)))
            .collect();
        let matrix = self.assemble(&top, g.power);
        let translation = self
            .b(self.params.p - g.power)
            .apply(&top)
            .expect("dimensions agree");
        AffineElement {
            matrix,
            translation,
            power: g.power,
        }
    }

    /// All `p^(k+1)` elements, identity first, then by `i` in `1..=p` and
    /// `v` in lexicographic order.
    pub fn enumerate(&self) -> EnumeratedGroup<AffineElement> {
        let id = self.identity();
        let mut all = Vec::with_capacity(self.params.group_order());
        for i in 1..=self.params.p as u64 {
            for v in 0..self.params.num_points() {
                let e = self.element(&self.vector_of(v), i).expect("in range");
                all.push(e);
            }
        }
        EnumeratedGroup::from_elements(id, all)
    }

    /// Coordinates of the point with lexicographic index `idx`.
    pub fn vector_of(&self, mut idx: usize) -> Vec<u32> {
        let p = self.params.p as usize;
        let mut v = vec![0u32; self.params.k];
        for slot in v.iter_mut().rev() {
            *slot = (idx % p) as u32;
            idx /= p;
        }
        v
    }

    pub fn index_of_vector(&self, v: &[u32]) -> usize {
        v.iter()
            .fold(0usize, |acc, &x| acc * self.params.p as usize + x as usize)
    }

    /// The points `(1, x)` in lexicographic order of `x`.
    pub fn points(&self) -> IndexedDomain<AffinePoint> {
        let pts = (0..self.params.num_points())
            .map(|i| {
                let mut coords = vec![1u32];
                coords.extend(self.vector_of(i));
                AffinePoint(coords)
            })
            .collect();
        IndexedDomain::new(pts).expect("points are distinct")
    }

    pub fn act_on_point(&self, g: &AffineElement, x: &AffinePoint) -> Result<AffinePoint> {
        if x.0.len() != self.params.k + 1 || x.0[0] != 1 {
            return Err(Error::Usage("point must have the form (1, x)".into()));
        }
        Ok(AffinePoint(g.matrix.apply(&x.0)?))
    }

    /// `x B^i + v B^i` written into `out` without allocating.
    fn act_on_vector(&self, g: &AffineElement, x: &[u32], out: &mut [u32]) {
        let f = &self.field;
        let b = self.b(g.power);
        out.copy_from_slice(g.top());
        for (t, &xt) in x.iter().enumerate() {
            if xt == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(xt, b.get(t, c)));
            }
        }
    }

    /// Fixed points of `g != 1` from the closed-form conditions: `p` points
    /// when `i != p` and the last coordinate of `v B^i` is 0, none otherwise.
    pub fn fixed_point_count(&self, g: &AffineElement) -> Result<usize> {
        if g.is_identity() {
            return Err(Error::Usage(
                "fixed_point_count is defined for g != 1".into(),
            ));
        }
        let fixes = g.power != self.params.p && g.top()[self.params.k - 1] == 0;
        Ok(if fixes { self.params.p as usize } else { 0 })
    }

    /// Fixed points by acting on every point.
    pub fn fixed_points_enumerated(&self, g: &AffineElement) -> usize {
        let mut out = vec![0u32; self.params.k];
        (0..self.params.num_points())
            .filter(|&i| {
                let x = self.vector_of(i);
                self.act_on_vector(g, &x, &mut out);
                out == x
            })
            .count()
    }

    /// Natural action of the `r`-twisted elements on the points.
    pub fn twisted_representation(
        &self,
        group: &EnumeratedGroup<AffineElement>,
        r: u32,
    ) -> Result<Representation> {
        let n = self.params.num_points();
        let vectors: Vec<Vec<u32>> = (0..n).map(|i| self.vector_of(i)).collect();
        Representation::build(group.len(), n, |t, images| {
            let g = self.tau_twist(r, group.element(t));
            let mut out = vec![0u32; self.params.k];
            for (img, x) in images.iter_mut().zip(&vectors) {
                self.act_on_vector(&g, x, &mut out);
                *img = self.index_of_vector(&out) as Symbol;
            }
        })
    }

    pub fn identity(&self) -> AffineElement {
        self.element(&vec![0; self.params.k], self.params.p as u64)
            .expect("valid")
    }
}

impl GroupOps for AffineGroup {
    type Elem = AffineElement;

    fn identity(&self) -> AffineElement {
        AffineGroup::identity(self)
    }

    fn mul(&self, a: &AffineElement, b: &AffineElement) -> AffineElement {
        let m = a.matrix.mul(&b.matrix).expect("same shape");
        self.decompose(m).expect("Gbar_k is closed")
    }
}

/// Everything built for one `(p, k)`.
pub struct AffineConstruction {
    pub ctx: AffineGroup,
    pub group: EnumeratedGroup<AffineElement>,
    /// Representation `r` comes from the twist by `w_r`; index 0 is the
    /// natural action.
    pub reps: Vec<Representation>,
}

impl AffineConstruction {
    pub fn new(params: AffineParams) -> Result<Self> {
        let ctx = AffineGroup::new(params);
        let group = ctx.enumerate();
        if group.len() != params.group_order() {
            return Err(Error::consistency(
                "enumerate_group",
                format!(
                    "{} elements, expected {}",
                    group.len(),
                    params.group_order()
                ),
            ));
        }
        let reps = (0..params.p)
            .map(|r| ctx.twisted_representation(&group, r))
            .collect::<Result<Vec<_>>>()?;
        Ok(AffineConstruction { ctx, group, reps })
    }

    pub fn spec(&self) -> TwistedSpec<'_> {
        TwistedSpec::new(self.reps.iter().collect()).expect("same domain")
    }

    pub fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        self.group.product_index(&self.ctx, i, j)
    }
}

fn pair_sample(n: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect()
}

pub(crate) fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
}

pub(crate) fn anchor_sample(n: usize, count: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut anchors = vec![0];
    anchors.extend((1..count.min(n)).map(|_| rng.gen_range(0..n)));
    anchors
}

const SAMPLED_PAIRS: usize = 10_000;
const SAMPLED_ANCHORS: usize = 8;

/// Closed-form lemma checks for one `(p, k)`, independent of enumeration.
pub fn lemma_checks(params: AffineParams, report: &mut VerificationReport) -> Result<()> {
    let ctx = AffineGroup::new(params);
    let p = params.p;
    let k = params.k;
    let a = matrix_a(params);
    report.check(
        "lemma.a_nilpotent",
        a.pow(k as u64)?.is_zero() && !a.pow(k as u64 - 1)?.is_zero(),
    );
    let id = Matrix::identity(params.field(), k);
    let b = id.add(&a)?;
    let mut iterated = id.clone();
    let mut b_ok = true;
    let mut literal = Matrix::zeros(params.field(), k, k);
    let mut omega_ok = true;
    for i in 1..=2 * p as u64 {
        // literal = I + B + ... + B^(i-1), iterated = B^i
        literal = literal.add(&iterated)?;
        iterated = iterated.mul(&b)?;
        b_ok &= iterated == b_power(params, i);
        omega_ok &= literal == omega_sum(params, i)?;
    }
    report.check("lemma.b_power_closed_form", b_ok);
    report.check(
        "lemma.b_power_order_p",
        b_power(params, p as u64).is_identity(),
    );
    report.check("lemma.omega_closed_form", omega_ok);
    report.check("lemma.omega_p_zero", omega_sum(params, p as u64)?.is_zero());
    let mut rec_ok = true;
    for i in 1..=p {
        for j in 1..=p {
            let lhs = omega_sum(params, (i + j) as u64)?;
            let rhs = ctx.omega(i).add(&ctx.b(i).mul(ctx.omega(j))?)?;
            rec_ok &= lhs == rhs;
        }
    }
    report.check("lemma.omega_recurrence", rec_ok);
    Ok(())
}

/// Builds the twisted code for `(p, k)` and verifies it.
pub fn build_affine_twisted(
    params: AffineParams,
    level: CheckLevel,
) -> Result<(Code, VerificationReport)> {
    params.check_size()?;
    let p = params.p as usize;
    let pk = params.num_points();
    let mut report = VerificationReport::new(
        "affine",
        vec![
            ("p".into(), params.p.to_string()),
            ("k".into(), params.k.to_string()),
        ],
    );
    let mut lemmas = VerificationReport::default();
    report.timed("lemmas", || lemma_checks(params, &mut lemmas))?;
    report.checks.extend(lemmas.checks);

    let cons = report.timed("enumerate", || AffineConstruction::new(params))?;
    let ctx = &cons.ctx;
    let group = &cons.group;
    let n = group.len();
    report.check("group.order", n == params.group_order());
    report.check("group.identity_first", group.element(0).is_identity());

    let pairs = match level {
        CheckLevel::All => all_pairs(n),
        CheckLevel::Fast => pair_sample(n, SAMPLED_PAIRS, 0xaff1),
    };
    let closed = report.timed("closure", || {
        pairs
            .iter()
            .all(|&(i, j)| cons.product_index(i, j).is_some())
    });
    report.check("group.closed", closed);
    let products: Vec<Option<usize>> = pairs
        .iter()
        .map(|&(i, j)| cons.product_index(i, j))
        .collect();

    // Twists are automorphisms: twist(r, g) twist(r, h) = twist(r, gh).
    let twist_ok = report.timed("twist_homomorphism", || {
        (0..params.p).all(|r| {
            pairs.iter().zip(&products).all(|(&(i, j), &gh)| {
                let Some(gh) = gh else { return false };
                let lhs = ctx.mul(
                    &ctx.tau_twist(r, group.element(i)),
                    &ctx.tau_twist(r, group.element(j)),
                );
                lhs == ctx.tau_twist(r, group.element(gh))
            })
        })
    });
    report.check("twist.homomorphism", twist_ok);
    report.check(
        "twist.bijective",
        (0..params.p).all(|r| {
            let images: rustc_hash::FxHashSet<_> = group
                .elements()
                .iter()
                .map(|g| ctx.tau_twist(r, g))
                .collect();
            images.len() == n && images.iter().all(|g| group.index_of(g).is_some())
        }),
    );
    report.check(
        "twist.fixes_pure_translations",
        group
            .elements()
            .iter()
            .filter(|g| g.power == params.p)
            .all(|g| (0..params.p).all(|r| &ctx.tau_twist(r, g) == g)),
    );
    let rep_ok = cons
        .reps
        .iter()
        .all(|rep| rep.respects_products(&pairs, |i, j| cons.product_index(i, j)));
    report.check("representation.homomorphism", rep_ok);

    // (1, x) tau_0(phi_u B^i) = (1, (u + x) B^i)
    let f = params.field();
    let action_ok = group.elements().iter().all(|g| {
        (0..pk).all(|xi| {
            let x = ctx.vector_of(xi);
            let shifted: Vec<u32> = x
                .iter()
                .zip(g.translation())
                .map(|(&a, &b)| f.add(a, b))
                .collect();
            let expect = ctx.b(g.power).apply(&shifted).expect("k-vector");
            let mut pt = vec![1u32];
            pt.extend(&x);
            ctx.act_on_point(g, &AffinePoint(pt))
                .map(|y| y.0[1..] == expect[..])
                == Ok(true)
        })
    });
    report.check("action.permutational_isomorphism", action_ok);

    let spec = cons.spec();
    let natural = &cons.reps[0];
    let fixed_ok = report.timed("fixed_points", || {
        (1..n).all(|t| {
            let g = group.element(t);
            let closed = ctx.fixed_point_count(g).expect("g != 1");
            let counted = pk - natural.support_size(t);
            closed == counted && (counted == 0 || counted == p)
        })
    });
    report.check("lemma.fixed_points", fixed_ok);

    // Support of each twist, element by element.
    let mut r_zero = 0usize;
    let mut table_ok = true;
    let mut sums_ok = true;
    let sums = support_sums(&spec);
    for t in 1..n {
        let g = group.element(t);
        let supports: Vec<usize> = cons.reps.iter().map(|rep| rep.support_size(t)).collect();
        if g.power == params.p {
            table_ok &= supports.iter().all(|&s| s == pk);
            sums_ok &= sums[t] == p * pk;
        } else {
            let vk = g.top()[params.k - 1];
            let i = g.power;
            let r_star = f.div(f.neg(vk), i).expect("i is a unit");
            if r_star == 0 {
                r_zero += 1;
            }
            table_ok &= supports.iter().enumerate().all(|(r, &s)| {
                if r as u32 == r_star {
                    s == pk - p
                } else {
                    s == pk
                }
            });
            sums_ok &= sums[t] == p * pk - p;
        }
    }
    report.check("table2.supports", table_ok);
    report.check("support_sum.dichotomy", sums_ok);
    report.info("table2.r_zero_cases", r_zero);

    let code = report.timed("build_code", || build_twisted_code(group, &spec))?;
    report.code_size = code.len();
    report.length = code.length();
    report.alphabet = code.alphabet();
    report.r = spec.r();
    report.check("code.fpa", code.letter_multiplicity() == Some(p));
    report.check(
        "code.size",
        check_code_size(&spec, &code) && code.len() == n,
    );
    let lemma22 = code.len() == n
        && (0..n).all(|t| hamming_distance(code.word(0), code.word(t)).ok() == Some(sums[t]));
    report.check("code.identity_distance_is_support", lemma22);

    report.delta_tw = report.timed("support_scan", || min_distance_by_support(&spec))?;
    report.delta_rep = repetition_lower_bound(&spec)?;
    report.check(
        "delta.repetition_bound",
        report.delta_tw >= report.delta_rep,
    );
    report.check("delta.strict", report.delta_tw > report.delta_rep);
    report.check(
        "delta.formula",
        report.delta_tw == params.expected_delta_tw()
            && report.delta_rep == params.expected_delta_rep()
            && report.gap() == (p * p - p) as isize,
    );

    match level {
        CheckLevel::All => {
            let invariant =
                report.timed("distance_invariance", || check_distance_invariance(&code));
            report.check("code.distance_invariant", invariant);
            let pairwise = report.timed("pairwise", || min_distance_pairwise(&code));
            report.check("delta.pairwise", pairwise == report.delta_tw);
        }
        CheckLevel::Fast => {
            let anchors = anchor_sample(code.len(), SAMPLED_ANCHORS, 0xd157);
            let invariant = report.timed("distance_invariance", || {
                check_distance_invariance_at(&code, &anchors)
            });
            report.check("code.distance_invariant_sampled", invariant);
        }
    }
    Ok((code, report))
}
