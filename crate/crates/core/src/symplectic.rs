//! Twisted codes from `Sp(4, q)`, `q = 2^n`, acting on the projective points
//! of `GF(q)^4`, twisted by the outer automorphism coming from the exterior
//! square.
//!
//! Elements are packed into a `u64`: row `r`, column `c` occupies the four
//! bits at `16 r + 4 c`. Row vectors are packed the same way into a `u16`.
//! This caps the field at `GF(16)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::affine::{all_pairs, anchor_sample};
use crate::codes::{
    build_twisted_code, check_code_size, check_distance_invariance, check_distance_invariance_at,
    hamming_distance, min_distance_by_support, min_distance_pairwise, repetition_lower_bound,
    support_sums, BlockClosure, Code, DistanceStrategy, IndexedDomain, Representation, Symbol,
    TwistedSpec,
};
use crate::error::{Error, Result};
use crate::fields::{format_polynomial, BinaryField, Field};
use crate::group::{EnumeratedGroup, GroupOps};
use crate::linalg::{Matrix, WEDGE_PAIRS};
use crate::report::{CheckLevel, VerificationReport};

/// Largest `n` the packed layout supports.
pub const MAX_PACKED_DEGREE: u32 = 4;
/// Largest `n` enumerated without an explicit override.
pub const MAX_GUARDED_DEGREE: u32 = 2;

const NO_POINT: u16 = u16::MAX;

/// `GF(q)^4` with the symplectic form on the basis `(e1, f1, e2, f2)`.
#[derive(Debug, Clone)]
pub struct SymplecticSpace {
    field: BinaryField,
    q: u32,
    allow_large: bool,
    gram: Matrix<BinaryField>,
    mul: Vec<u8>,
    inv: Vec<u8>,
    /// `scale[a << 16 | row]` is the packed row multiplied by `a`.
    scale: Vec<u16>,
    /// Canonical packed representatives in lexicographic order.
    points: Vec<u16>,
    /// Projective point index of every nonzero packed vector.
    point_of: Vec<u16>,
}

/// A canonical representative of a projective point: the leftmost nonzero
/// coordinate is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint(pub [u32; 4]);

/// A 4x4 matrix preserving the form, packed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymplecticElement(u64);

fn pack_vector(v: &[u32]) -> u16 {
    v.iter()
        .enumerate()
        .fold(0u16, |acc, (c, &x)| acc | ((x as u16) << (4 * c)))
}

fn unpack_vector(v: u16) -> [u32; 4] {
    std::array::from_fn(|c| ((v >> (4 * c)) & 0xf) as u32)
}

impl SymplecticElement {
    pub fn packed(self) -> u64 {
        self.0
    }

    pub fn row(self, r: usize) -> u16 {
        (self.0 >> (16 * r)) as u16
    }

    pub fn get(self, r: usize, c: usize) -> u32 {
        ((self.0 >> (16 * r + 4 * c)) & 0xf) as u32
    }

    fn from_rows(rows: [u16; 4]) -> Self {
        SymplecticElement(
            rows.iter()
                .enumerate()
                .fold(0u64, |acc, (r, &row)| acc | ((row as u64) << (16 * r))),
        )
    }

    pub fn identity() -> Self {
        Self::from_rows([0x0001, 0x0010, 0x0100, 0x1000])
    }

    pub fn is_identity(self) -> bool {
        self == Self::identity()
    }

    pub fn to_matrix(self, space: &SymplecticSpace) -> Matrix<BinaryField> {
        let entries = (0..16).map(|i| self.get(i / 4, i % 4)).collect();
        Matrix::new(space.field, 4, 4, entries).expect("4x4")
    }

    /// Packs a matrix, rejecting anything that does not preserve the form.
    pub fn from_matrix(space: &SymplecticSpace, m: &Matrix<BinaryField>) -> Result<Self> {
        if (m.rows(), m.cols()) != (4, 4) || m.field() != &space.field {
            return Err(Error::Usage(
                "expected a 4x4 matrix over the space's field".into(),
            ));
        }
        let g = Self::from_rows(std::array::from_fn(|r| pack_vector(m.row(r))));
        if !space.preserves_form(g) {
            return Err(Error::Domain(
                "matrix does not preserve the symplectic form".into(),
            ));
        }
        Ok(g)
    }
}

impl SymplecticSpace {
    /// `GF(2^n)` with the default reduction polynomial.
    pub fn new(n: u32) -> Result<Self> {
        Self::with_field(BinaryField::with_default(n)?)
    }

    pub fn with_field(field: BinaryField) -> Result<Self> {
        let n = field.degree();
        if n > MAX_PACKED_DEGREE {
            return Err(Error::Usage(format!(
                "Sp(4, 2^n) is supported for n <= {MAX_PACKED_DEGREE}, got n = {n}"
            )));
        }
        let q = field.order();
        let qs = q as usize;
        let mul: Vec<u8> = field.mul_table().into_iter().map(|x| x as u8).collect();
        let mut inv = vec![0u8; qs];
        for a in 1..q {
            inv[a as usize] = field.inv(a).expect("nonzero") as u8;
        }
        let mut scale = vec![0u16; qs << 16];
        for a in 0..qs {
            for row in 0..1usize << 16 {
                let coords = unpack_vector(row as u16);
                if coords.iter().any(|&x| x >= q) {
                    continue;
                }
                let scaled: Vec<u32> = coords
                    .iter()
                    .map(|&x| mul[a * qs + x as usize] as u32)
                    .collect();
                scale[a << 16 | row] = pack_vector(&scaled);
            }
        }
        let mut space = SymplecticSpace {
            gram: Matrix::identity(field, 4),
            field,
            q,
            allow_large: false,
            mul,
            inv,
            scale,
            points: Vec::new(),
            point_of: vec![NO_POINT; 1 << 16],
        };
        let mut gram = Matrix::zeros(space.field, 4, 4);
        for (a, b) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            gram.set(a, b, 1);
        }
        space.gram = gram;
        let mut canon: Vec<[u32; 4]> = Vec::new();
        for v in space.all_vectors().filter(|&v| v != 0) {
            if space.canonical(v) == v {
                canon.push(unpack_vector(v));
            }
        }
        canon.sort();
        space.points = canon.iter().map(|c| pack_vector(c)).collect();
        let vectors: Vec<u16> = space.all_vectors().filter(|&v| v != 0).collect();
        for v in vectors {
            let c = space.canonical(v);
            let idx = canon
                .binary_search(&unpack_vector(c))
                .expect("canonical form is listed");
            space.point_of[v as usize] = idx as u16;
        }
        Ok(space)
    }

    /// Lifts the size guard on enumeration.
    pub fn allow_large(mut self, allow: bool) -> Self {
        self.allow_large = allow;
        self
    }

    pub fn field(&self) -> &BinaryField {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.field.degree()
    }

    pub fn gram(&self) -> &Matrix<BinaryField> {
        &self.gram
    }

    /// `q^3 + q^2 + q + 1`.
    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// `q^4 (q^2 - 1) (q^4 - 1)`.
    pub fn group_order(&self) -> u64 {
        let q = self.q as u64;
        q.pow(4) * (q * q - 1) * (q.pow(4) - 1)
    }

    pub fn expected_delta_tw(&self) -> usize {
        let q = self.q as usize;
        2 * q.pow(3) + q * q
    }

    pub fn expected_delta_rep(&self) -> usize {
        2 * (self.q as usize).pow(3)
    }

    fn all_vectors(&self) -> impl Iterator<Item = u16> {
        let q = self.q as usize;
        (0..q.pow(4)).map(move |mut i| {
            let mut coords = [0u32; 4];
            for c in coords.iter_mut().rev() {
                *c = (i % q) as u32;
                i /= q;
            }
            pack_vector(&coords)
        })
    }

    #[inline]
    fn fmul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize] as u32
    }

    #[inline]
    fn scale_row(&self, a: u32, row: u16) -> u16 {
        self.scale[(a as usize) << 16 | row as usize]
    }

    fn canonical(&self, v: u16) -> u16 {
        let coords = unpack_vector(v);
        match coords.iter().find(|&&x| x != 0) {
            Some(&lead) => self.scale_row(self.inv[lead as usize] as u32, v),
            None => 0,
        }
    }

    fn check_vector(&self, v: &[u32]) -> Result<u16> {
        if v.len() != 4 || v.iter().any(|&x| x >= self.q) {
            return Err(Error::Usage("expected a vector in GF(q)^4".into()));
        }
        Ok(pack_vector(v))
    }

    /// Canonical representative of the 1-space spanned by `v`.
    pub fn canonicalize(&self, v: &[u32]) -> Result<ProjectivePoint> {
        let packed = self.check_vector(v)?;
        if packed == 0 {
            return Err(Error::Domain("the zero vector spans no 1-space".into()));
        }
        Ok(ProjectivePoint(unpack_vector(self.canonical(packed))))
    }

    /// `B(u, v) = u0 v1 + u1 v0 + u2 v3 + u3 v2`.
    pub fn symplectic_form(&self, u: &[u32], v: &[u32]) -> Result<u32> {
        self.check_vector(u)?;
        self.check_vector(v)?;
        Ok(self.form_unchecked(u, v))
    }

    fn form_unchecked(&self, u: &[u32], v: &[u32]) -> u32 {
        self.fmul(u[0], v[1])
            ^ self.fmul(u[1], v[0])
            ^ self.fmul(u[2], v[3])
            ^ self.fmul(u[3], v[2])
    }

    fn form_packed(&self, u: u16, v: u16) -> u32 {
        self.form_unchecked(&unpack_vector(u), &unpack_vector(v))
    }

    #[inline]
    pub fn apply_packed(&self, v: u16, g: SymplecticElement) -> u16 {
        let mut out = 0u16;
        for c in 0..4 {
            let a = ((v >> (4 * c)) & 0xf) as u32;
            if a != 0 {
                out ^= self.scale_row(a, g.row(c));
            }
        }
        out
    }

    pub fn apply(&self, v: &[u32], g: SymplecticElement) -> Result<[u32; 4]> {
        Ok(unpack_vector(self.apply_packed(self.check_vector(v)?, g)))
    }

    #[inline]
    pub fn multiply(&self, a: SymplecticElement, b: SymplecticElement) -> SymplecticElement {
        SymplecticElement::from_rows(std::array::from_fn(|r| self.apply_packed(a.row(r), b)))
    }

    /// `g^-1 = J g^T J`.
    pub fn inverse(&self, g: SymplecticElement) -> SymplecticElement {
        let swap = |i: usize| i ^ 1;
        let entries: Vec<u32> = (0..16).map(|i| g.get(swap(i % 4), swap(i / 4))).collect();
        SymplecticElement::from_rows(std::array::from_fn(|r| {
            pack_vector(&entries[4 * r..4 * r + 4])
        }))
    }

    /// `g J g^T = J`, i.e. the rows of `g` pair like the basis.
    pub fn preserves_form(&self, g: SymplecticElement) -> bool {
        (0..4).all(|a| (0..4).all(|b| self.form_packed(g.row(a), g.row(b)) == self.gram.get(a, b)))
    }

    /// `x -> x + lambda B(x, v) v`.
    pub fn transvection(&self, v: &[u32], lambda: u32) -> Result<SymplecticElement> {
        let pv = self.check_vector(v)?;
        if pv == 0 || lambda == 0 || lambda >= self.q {
            return Err(Error::Usage(
                "transvection needs v != 0 and lambda != 0".into(),
            ));
        }
        let rows = std::array::from_fn(|a| {
            let mut e = [0u32; 4];
            e[a] = 1;
            let coeff = self.fmul(lambda, self.form_unchecked(&e, v));
            pack_vector(&e) ^ self.scale_row(coeff, pv)
        });
        Ok(SymplecticElement::from_rows(rows))
    }

    /// One transvection per canonical direction and nonzero scalar.
    pub fn transvections(&self) -> Vec<SymplecticElement> {
        self.points
            .iter()
            .flat_map(|&v| {
                (1..self.q).map(move |lambda| {
                    self.transvection(&unpack_vector(v), lambda)
                        .expect("nonzero")
                })
            })
            .collect()
    }

    pub fn projective_points(&self) -> IndexedDomain<ProjectivePoint> {
        IndexedDomain::new(
            self.points
                .iter()
                .map(|&v| ProjectivePoint(unpack_vector(v)))
                .collect(),
        )
        .expect("distinct canonical points")
    }

    pub fn point_index(&self, p: &ProjectivePoint) -> Option<usize> {
        let v = self.check_vector(&p.0).ok()?;
        match self.point_of[v as usize] {
            NO_POINT => None,
            i => Some(i as usize),
        }
    }

    /// Image of point `j` under `g`.
    #[inline]
    pub fn act_on_point(&self, j: usize, g: SymplecticElement) -> usize {
        self.point_of[self.apply_packed(self.points[j], g) as usize] as usize
    }

    pub fn fixed_projective_count(&self, g: SymplecticElement) -> usize {
        (0..self.points.len())
            .filter(|&j| self.act_on_point(j, g) == j)
            .count()
    }

    /// `g != 1`, `rank(g - 1) = 1` and `(g - 1)^2 = 0`.
    pub fn is_transvection(&self, g: SymplecticElement) -> bool {
        let d = SymplecticElement(g.0 ^ SymplecticElement::identity().0);
        if d.0 == 0 || self.multiply(d, d).0 != 0 {
            return false;
        }
        let mut line = None;
        (0..4).map(|r| d.row(r)).filter(|&row| row != 0).all(|row| {
            let p = self.point_of[row as usize];
            *line.get_or_insert(p) == p
        })
    }

    fn order_limit(&self) -> Result<usize> {
        if self.n() > MAX_GUARDED_DEGREE && !self.allow_large {
            return Err(Error::SizeGuard(format!(
                "|Sp(4, {})| = {} elements; enumeration for n > {MAX_GUARDED_DEGREE} needs an explicit override",
                self.q,
                self.group_order()
            )));
        }
        usize::try_from(self.group_order())
            .map_err(|_| Error::SizeGuard("group order does not fit in memory".into()))
    }

    /// Closure of the identity under all transvections.
    pub fn generate_group(&self) -> Result<EnumeratedGroup<SymplecticElement>> {
        let limit = self.order_limit()?;
        let gens = self.transvections();
        let group = EnumeratedGroup::close_under(
            SymplecticElement::identity(),
            gens.len(),
            limit,
            |x, j| self.multiply(*x, gens[j]),
        )?;
        if group.len() != limit {
            return Err(Error::consistency(
                "generate_group",
                format!("closure has {} elements, expected {limit}", group.len()),
            ));
        }
        if let Some(bad) = group
            .elements()
            .par_iter()
            .position_any(|&g| !self.preserves_form(g))
        {
            return Err(Error::consistency(
                "generate_group",
                format!("element {bad} does not preserve the form"),
            ));
        }
        Ok(group)
    }

    /// Action on the projective points, one image list per element.
    pub fn representation<F>(&self, group_order: usize, element: F) -> Result<Representation>
    where
        F: Fn(usize) -> SymplecticElement + Sync,
    {
        Representation::build(group_order, self.num_points(), |t, images| {
            let g = element(t);
            for (j, img) in images.iter_mut().enumerate() {
                *img = self.act_on_point(j, g) as Symbol;
            }
        })
    }
}

impl GroupOps for SymplecticSpace {
    type Elem = SymplecticElement;

    fn identity(&self) -> SymplecticElement {
        SymplecticElement::identity()
    }

    fn mul(&self, a: &SymplecticElement, b: &SymplecticElement) -> SymplecticElement {
        self.multiply(*a, *b)
    }
}

/// The outer automorphism as a table over an enumerated group.
#[derive(Debug, Clone)]
pub struct OuterAutomorphism {
    images: Vec<SymplecticElement>,
    image_index: Vec<u32>,
    basis: Matrix<BinaryField>,
    steps: Vec<&'static str>,
}

impl OuterAutomorphism {
    pub fn image(&self, element: usize) -> SymplecticElement {
        self.images[element]
    }

    pub fn image_index(&self, element: usize) -> usize {
        self.image_index[element] as usize
    }

    pub fn image_indices(&self) -> &[u32] {
        &self.image_index
    }

    /// Rows `omega, c1, d1, c2, d2, z` of the exterior square; `tau(g)` is
    /// the action of `Lambda^2 g` on `c1, d1, c2, d2` modulo `omega`.
    pub fn basis(&self) -> &Matrix<BinaryField> {
        &self.basis
    }

    /// Verification steps that passed, in order.
    pub fn steps(&self) -> &[&'static str] {
        &self.steps
    }
}

pub const STEP_FORM_VECTOR: &str = "a.form_vector";
pub const STEP_PERP_QUOTIENT: &str = "b.perp_quotient";
pub const STEP_SYMPLECTIC_BASIS: &str = "c.symplectic_basis";
pub const STEP_VERIFY: &str = "d.verify";

/// Gram matrix of the pairing induced on the exterior square:
/// `<b_ij, b_kl> = J_ik J_jl + J_il J_jk`.
pub fn wedge_pairing(space: &SymplecticSpace) -> Matrix<BinaryField> {
    let j = space.gram();
    let f = space.field();
    let mut g = Matrix::zeros(*f, 6, 6);
    for (a, &(i, jj)) in WEDGE_PAIRS.iter().enumerate() {
        for (b, &(k, l)) in WEDGE_PAIRS.iter().enumerate() {
            let v = f.add(
                f.mul(j.get(i, k), j.get(jj, l)),
                f.mul(j.get(i, l), j.get(jj, k)),
            );
            g.set(a, b, v);
        }
    }
    g
}

fn pair(g: &Matrix<BinaryField>, x: &[u32], y: &[u32]) -> u32 {
    let f = g.field();
    let gy = g.apply(y).expect("length 6");
    x.iter()
        .zip(&gy)
        .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
}

fn row_space(field: &BinaryField, rows: &[Vec<u32>]) -> Matrix<BinaryField> {
    Matrix::from_rows(*field, rows).expect("equal lengths")
}

/// Exterior square of a packed element through the multiplication table.
fn exterior_square_fast(space: &SymplecticSpace, g: SymplecticElement) -> [[u32; 6]; 6] {
    let mut out = [[0u32; 6]; 6];
    for (a, &(i, j)) in WEDGE_PAIRS.iter().enumerate() {
        for (b, &(k, l)) in WEDGE_PAIRS.iter().enumerate() {
            out[a][b] = space.fmul(g.get(i, k), g.get(j, l)) ^ space.fmul(g.get(i, l), g.get(j, k));
        }
    }
    out
}

fn row_times(space: &SymplecticSpace, x: &[u32; 6], m: &[[u32; 6]; 6]) -> [u32; 6] {
    let mut out = [0u32; 6];
    for (s, &a) in x.iter().enumerate() {
        if a != 0 {
            for (o, &e) in out.iter_mut().zip(&m[s]) {
                *o ^= space.fmul(a, e);
            }
        }
    }
    out
}

fn to_array(m: &Matrix<BinaryField>) -> [[u32; 6]; 6] {
    std::array::from_fn(|r| std::array::from_fn(|c| m.get(r, c)))
}

struct TauMap<'a> {
    space: &'a SymplecticSpace,
    basis_rows: [[u32; 6]; 4],
    coords: [[u32; 6]; 6],
}

impl TauMap<'_> {
    /// `Some(tau(g))` when `Lambda^2 g` fixes `omega` and keeps the basis
    /// inside `omega`-perp.
    fn apply(&self, g: SymplecticElement) -> Option<SymplecticElement> {
        let l = exterior_square_fast(self.space, g);
        let fixed = (0..6).all(|c| l[0][c] ^ l[5][c] == if c == 0 || c == 5 { 1 } else { 0 });
        if !fixed {
            return None;
        }
        let mut rows = [0u16; 4];
        for (a, c) in self.basis_rows.iter().enumerate() {
            let y = row_times(self.space, c, &l);
            let x = row_times(self.space, &y, &self.coords);
            if x[5] != 0 {
                return None;
            }
            rows[a] = pack_vector(&x[1..5]);
        }
        Some(SymplecticElement::from_rows(rows))
    }
}

/// Builds `tau` on every element of `group`, checking each construction
/// step; a failure names the step.
pub fn build_outer_automorphism(
    space: &SymplecticSpace,
    group: &EnumeratedGroup<SymplecticElement>,
) -> Result<OuterAutomorphism> {
    let f = *space.field();
    let gens = space.transvections();
    let gmat = wedge_pairing(space);
    let mut steps = Vec::new();

    // (a)
    let omega = vec![1, 0, 0, 0, 0, 1];
    if pair(&gmat, &omega, &omega) != 0 {
        return Err(Error::consistency(STEP_FORM_VECTOR, "<omega, omega> != 0"));
    }
    let lifted: Vec<Matrix<BinaryField>> = gens
        .iter()
        .map(|g| g.to_matrix(space).exterior_square().expect("4x4"))
        .collect();
    if let Some(i) = lifted
        .iter()
        .position(|l| l.apply(&omega).ok() != Some(omega.clone()))
    {
        return Err(Error::consistency(
            STEP_FORM_VECTOR,
            format!("generator {i} does not fix omega"),
        ));
    }
    if lifted.iter().any(|l| {
        l.mul(&gmat)
            .and_then(|x| x.mul(&l.transpose()))
            .ok()
            .as_ref()
            != Some(&gmat)
    }) {
        return Err(Error::consistency(
            STEP_FORM_VECTOR,
            "pairing is not preserved",
        ));
    }
    steps.push(STEP_FORM_VECTOR);

    // (b)
    let omega_col = Matrix::new(f, 6, 1, gmat.apply(&omega).expect("length 6")).expect("6x1");
    let w = omega_col
        .left_nullspace()
        .ok_or_else(|| Error::consistency(STEP_PERP_QUOTIENT, "omega-perp is zero"))?;
    if w.rows() != 5 {
        return Err(Error::consistency(
            STEP_PERP_QUOTIENT,
            format!("omega-perp has dimension {}", w.rows()),
        ));
    }
    let w_rows: Vec<Vec<u32>> = (0..5).map(|r| w.row(r).to_vec()).collect();
    let mut with_omega = w_rows.clone();
    with_omega.push(omega.clone());
    if row_space(&f, &with_omega).rank() != 5 {
        return Err(Error::consistency(
            STEP_PERP_QUOTIENT,
            "omega is not in omega-perp",
        ));
    }
    if w_rows.iter().any(|x| pair(&gmat, x, x) != 0) {
        return Err(Error::consistency(
            STEP_PERP_QUOTIENT,
            "pairing is not alternating on omega-perp",
        ));
    }
    let w_gram = Matrix::from_rows(
        f,
        &w_rows
            .iter()
            .map(|x| w_rows.iter().map(|y| pair(&gmat, x, y)).collect())
            .collect::<Vec<_>>(),
    )
    .expect("5x5");
    if w_gram.rank() != 4 {
        return Err(Error::consistency(
            STEP_PERP_QUOTIENT,
            format!(
                "pairing on omega-perp has rank {}, expected 4",
                w_gram.rank()
            ),
        ));
    }
    for l in &lifted {
        if w_rows
            .iter()
            .any(|x| pair(&gmat, &l.apply(x).expect("length 6"), &omega) != 0)
        {
            return Err(Error::consistency(
                STEP_PERP_QUOTIENT,
                "omega-perp is not invariant",
            ));
        }
    }
    steps.push(STEP_PERP_QUOTIENT);

    // (c) Pair off vectors of omega-perp: c with the first partner d, scaled
    // so <c, d> = 1, then project the rest onto the orthogonal complement.
    let mut pool = w_rows;
    let mut chosen: Vec<Vec<u32>> = Vec::new();
    for _ in 0..2 {
        let found = (0..pool.len()).find_map(|a| {
            (0..pool.len())
                .find(|&b| b != a && pair(&gmat, &pool[a], &pool[b]) != 0)
                .map(|b| (a, b))
        });
        let Some((a, b)) = found else {
            return Err(Error::consistency(
                STEP_SYMPLECTIC_BASIS,
                "no hyperbolic pair left",
            ));
        };
        let c = pool[a].clone();
        let s = f.inv(pair(&gmat, &c, &pool[b])).expect("nonzero");
        let d: Vec<u32> = pool[b].iter().map(|&x| f.mul(s, x)).collect();
        pool = pool
            .into_iter()
            .enumerate()
            .filter(|&(i, _)| i != a && i != b)
            .map(|(_, x)| {
                let xd = pair(&gmat, &x, &d);
                let xc = pair(&gmat, &x, &c);
                x.iter()
                    .zip(c.iter().zip(&d))
                    .map(|(&xi, (&ci, &di))| f.add(f.sub(xi, f.mul(xd, ci)), f.mul(xc, di)))
                    .collect()
            })
            .collect();
        chosen.push(c);
        chosen.push(d);
    }
    let induced = Matrix::from_rows(
        f,
        &chosen
            .iter()
            .map(|x| chosen.iter().map(|y| pair(&gmat, x, y)).collect())
            .collect::<Vec<_>>(),
    )
    .expect("4x4");
    if &induced != space.gram() {
        return Err(Error::consistency(
            STEP_SYMPLECTIC_BASIS,
            "induced Gram matrix is not standard",
        ));
    }
    let mut basis_rows = vec![omega.clone()];
    basis_rows.extend(chosen.iter().cloned());
    let z = (0..6)
        .map(|s| {
            let mut e = vec![0u32; 6];
            e[s] = 1;
            e
        })
        .find(|e| {
            let mut rows = basis_rows.clone();
            rows.push(e.clone());
            row_space(&f, &rows).rank() == 6
        })
        .ok_or_else(|| Error::consistency(STEP_SYMPLECTIC_BASIS, "basis does not extend"))?;
    basis_rows.push(z);
    let basis = row_space(&f, &basis_rows);
    let coords = basis
        .inverse()
        .map_err(|_| Error::consistency(STEP_SYMPLECTIC_BASIS, "basis is singular"))?;
    steps.push(STEP_SYMPLECTIC_BASIS);

    // (d)
    let tau = TauMap {
        space,
        basis_rows: std::array::from_fn(|a| std::array::from_fn(|c| chosen[a][c])),
        coords: to_array(&coords),
    };
    let images: Vec<SymplecticElement> = group
        .elements()
        .par_iter()
        .map(|&g| tau.apply(g))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| {
            Error::consistency(STEP_VERIFY, "an element leaves omega-perp or moves omega")
        })?;
    if !images[0].is_identity() {
        return Err(Error::consistency(STEP_VERIFY, "tau(1) != 1"));
    }
    if let Some(i) = images
        .par_iter()
        .position_any(|&h| !space.preserves_form(h))
    {
        return Err(Error::consistency(
            STEP_VERIFY,
            format!("tau(g_{i}) is not symplectic"),
        ));
    }
    let image_index: Vec<u32> = images
        .par_iter()
        .map(|h| group.index_of(h).map(|i| i as u32))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::consistency(STEP_VERIFY, "an image lies outside the group"))?;
    let distinct: FxHashSet<u32> = image_index.iter().copied().collect();
    if distinct.len() != images.len() {
        return Err(Error::consistency(STEP_VERIFY, "tau is not injective"));
    }
    let gen_images: Vec<SymplecticElement> = gens
        .iter()
        .map(|&g| tau.apply(g).expect("checked on the whole group"))
        .collect();
    let hom_ok = (0..gens.len()).into_par_iter().all(|a| {
        (0..gens.len()).all(|b| {
            tau.apply(space.multiply(gens[a], gens[b]))
                == Some(space.multiply(gen_images[a], gen_images[b]))
        })
    });
    if !hom_ok {
        return Err(Error::consistency(
            STEP_VERIFY,
            "tau is not multiplicative on generators",
        ));
    }
    let q = space.q() as usize;
    if let Some(i) = gen_images
        .iter()
        .position(|&h| space.fixed_projective_count(h) != q + 1)
    {
        return Err(Error::consistency(
            STEP_VERIFY,
            format!("image of transvection {i} does not fix exactly q + 1 points"),
        ));
    }
    if gen_images.iter().all(|&h| space.is_transvection(h)) {
        return Err(Error::consistency(
            STEP_VERIFY,
            "tau preserves transvections",
        ));
    }
    steps.push(STEP_VERIFY);

    Ok(OuterAutomorphism {
        images,
        image_index,
        basis,
        steps,
    })
}

/// Number of sampled pairs for the automorphism check when exhaustive
/// checking is out of reach.
pub const SAMPLED_TAU_PAIRS: usize = 100_000;
const EXHAUSTIVE_PAIR_LIMIT: usize = 1_000_000;
const SAMPLED_ANCHORS: usize = 16;

/// Everything built for one `n`.
pub struct SymplecticConstruction {
    pub space: SymplecticSpace,
    pub group: EnumeratedGroup<SymplecticElement>,
    pub tau: OuterAutomorphism,
    /// The natural action and its twist by `tau`.
    pub reps: [Representation; 2],
}

impl SymplecticConstruction {
    pub fn new(space: SymplecticSpace) -> Result<Self> {
        let group = space.generate_group()?;
        let tau = build_outer_automorphism(&space, &group)?;
        let natural = space.representation(group.len(), |t| *group.element(t))?;
        let twisted = Representation::build(group.len(), space.num_points(), |t, images| {
            images.copy_from_slice(natural.images(tau.image_index(t)))
        })?;
        Ok(SymplecticConstruction {
            space,
            group,
            tau,
            reps: [natural, twisted],
        })
    }

    pub fn spec(&self) -> TwistedSpec<'_> {
        TwistedSpec::new(self.reps.iter().collect()).expect("same domain")
    }

    /// Pairs `(i, j)` checked for `tau(g_i g_j) = tau(g_i) tau(g_j)`:
    /// all pairs for small groups, a seeded sample otherwise.
    pub fn tau_pairs(&self, seed: u64) -> Vec<(usize, usize)> {
        let n = self.group.len();
        if n * n <= EXHAUSTIVE_PAIR_LIMIT {
            all_pairs(n)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..SAMPLED_TAU_PAIRS)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect()
        }
    }

    pub fn tau_respects(&self, pairs: &[(usize, usize)]) -> bool {
        pairs.par_iter().all(|&(i, j)| {
            let gh = self
                .space
                .multiply(*self.group.element(i), *self.group.element(j));
            let Some(k) = self.group.index_of(&gh) else {
                return false;
            };
            self.tau.image(k) == self.space.multiply(self.tau.image(i), self.tau.image(j))
        })
    }
}

/// Builds the twisted code for `Sp(4, 2^n)` and verifies it.
pub fn build_symplectic_twisted(
    space: SymplecticSpace,
    level: CheckLevel,
) -> Result<(Code, VerificationReport)> {
    let q = space.q() as usize;
    let m = space.num_points();
    let mut report = VerificationReport::new(
        "symplectic",
        vec![
            ("n".into(), space.n().to_string()),
            ("poly".into(), format_polynomial(space.field().polynomial())),
        ],
    );
    report.check("space.points", m == q.pow(3) + q * q + q + 1);
    let cons = report.timed("construct", || SymplecticConstruction::new(space))?;
    let space = &cons.space;
    let group = &cons.group;
    let n = group.len();
    report.check("group.order", n as u64 == space.group_order());
    report.check("group.identity_first", group.element(0).is_identity());
    report.check(
        "group.form_preserved",
        group
            .elements()
            .par_iter()
            .all(|&g| space.preserves_form(g)),
    );
    let inverses_ok = anchor_sample(n, 100, 0x1a7e).iter().all(|&i| {
        let g = *group.element(i);
        let h = space.inverse(g);
        group.index_of(&h).is_some() && space.multiply(g, h).is_identity()
    });
    report.check("group.inverses", inverses_ok);
    for step in cons.tau.steps() {
        report.check(&format!("tau.{step}"), true);
    }

    let pairs = cons.tau_pairs(0x7a0);
    let hom = report.timed("tau_homomorphism", || cons.tau_respects(&pairs));
    report.check("tau.homomorphism", hom);
    report.info("tau.homomorphism_pairs", pairs.len());

    let is_tv: Vec<bool> = report.timed("classify", || {
        group
            .elements()
            .par_iter()
            .map(|&g| space.is_transvection(g))
            .collect()
    });
    let natural = &cons.reps[0];
    let line = q * q + q + 1;
    let trichotomy = (1..n).into_par_iter().all(|t| {
        let fixed = m - natural.support_size(t);
        if is_tv[t] {
            fixed == line
        } else {
            fixed != line && fixed <= 2 * q + 2
        }
    });
    report.check("lemma.fixed_spaces", trichotomy);
    report.check(
        "lemma.transvection_count",
        is_tv.iter().filter(|&&b| b).count() == q.pow(4) - 1,
    );
    let tau_tv_ok = (1..n).filter(|&t| is_tv[t]).all(|t| {
        let image = cons.tau.image_index(t);
        !is_tv[image] && m - natural.support_size(image) == q + 1
    });
    report.check("tau.transvection_images", tau_tv_ok);
    report.check("tau.outer", tau_tv_ok && is_tv.iter().any(|&b| b));

    let spec = cons.spec();
    let sums = report.timed("support_sums", || support_sums(&spec));
    report.delta_tw = min_distance_by_support(&spec)?;
    report.delta_rep = repetition_lower_bound(&spec)?;
    let related = |t: usize| is_tv[t] || is_tv[cons.tau.image_index(t)];
    let target = (m - line) + (m - q - 1);
    report.check(
        "delta.minimizers_transvection_related",
        (1..n)
            .filter(|&t| sums[t] == report.delta_tw)
            .all(|t| related(t) && sums[t] == target),
    );
    let bound = 2 * (m - 2 * q - 2);
    report.check(
        "delta.non_transvection_bound",
        (1..n)
            .filter(|&t| !related(t))
            .all(|t| sums[t] >= bound && (q < 4 || sums[t] > report.delta_tw)),
    );

    let code = report.timed("build_code", || build_twisted_code(group, &spec))?;
    report.code_size = code.len();
    report.length = code.length();
    report.alphabet = code.alphabet();
    report.r = spec.r();
    report.check("code.fpa", code.letter_multiplicity() == Some(2));
    report.check(
        "code.size",
        check_code_size(&spec, &code) && code.len() == n,
    );
    report.check(
        "code.identity_distance_is_support",
        (0..n).all(|t| hamming_distance(code.word(0), code.word(t)).ok() == Some(sums[t])),
    );
    report.check(
        "delta.repetition_bound",
        report.delta_tw >= report.delta_rep,
    );
    report.check("delta.strict", report.delta_tw > report.delta_rep);
    report.check(
        "delta.formula",
        report.delta_tw == space.expected_delta_tw()
            && report.delta_rep == space.expected_delta_rep()
            && report.gap() == (q * q) as isize,
    );

    let exhaustive = n * n <= EXHAUSTIVE_PAIR_LIMIT;
    match level {
        CheckLevel::All if exhaustive => {
            let invariant =
                report.timed("distance_invariance", || check_distance_invariance(&code));
            report.check("code.distance_invariant", invariant);
            let pairwise = report.timed("pairwise", || min_distance_pairwise(&code));
            report.check("delta.pairwise", pairwise == report.delta_tw);
        }
        CheckLevel::All => {
            let anchors = anchor_sample(n, 4 * SAMPLED_ANCHORS, 0xd157);
            let invariant = report.timed("distance_invariance", || {
                check_distance_invariance_at(&code, &anchors)
            });
            report.check("code.distance_invariant_sampled", invariant);
            let closure = report.timed("closure_distance", || BlockClosure.min_distance(&code))?;
            report.check("delta.closure", closure == report.delta_tw);
        }
        CheckLevel::Fast => {
            let anchors = anchor_sample(n, SAMPLED_ANCHORS, 0xd157);
            let invariant = report.timed("distance_invariance", || {
                check_distance_invariance_at(&code, &anchors)
            });
            report.check("code.distance_invariant_sampled", invariant);
        }
    }
    Ok((code, report))
}
