//! The polar presentation of `PG(2, q)`: affine points are elements of `K`,
//! points at infinity are directions `u ∈ S`, and affine lines are
//! `L(u, mu) = { x : <u, x> = mu }` with `u ∈ S`, `mu ∈ F`.
//!
//! Collineations are semilinear maps given by a 3×3 matrix over `F` and a
//! Frobenius exponent. They act through homogeneous coordinates
//! `x ↦ (<i, x> : <1, x> : 1)` and `u ↦ (<i, u> : <1, u> : 0)`; the Frobenius
//! is applied coordinate-wise first, then the matrix (column vectors).

use alloc::vec::Vec;

use crate::gf2tower::{FieldElement, FieldTower, Level};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjPoint {
    /// The point `(x : 1)`.
    Affine(FieldElement),
    /// The point `(u : 0)` in direction `u ∈ S`.
    Infinite(FieldElement),
}

/// A line of the plane. Affine lines come first in the canonical order,
/// sorted by `(u, mu)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Line {
    Affine { u: FieldElement, mu: FieldElement },
    Infinity,
}

impl Line {
    /// The line `L(u, 0) = uF` through the origin.
    pub fn through_origin(u: FieldElement) -> Self {
        Line::Affine {
            u,
            mu: FieldElement::ZERO,
        }
    }
}

pub type Homogeneous = [FieldElement; 3];
pub type Matrix = [[FieldElement; 3]; 3];

/// A semilinear collineation `p ↦ M · φ^e(p)` where `φ` squares every
/// coordinate. The exponent is kept modulo `m`, the order of the Frobenius
/// on `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Collineation {
    matrix: Matrix,
    frob: u32,
}

impl Collineation {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn frob(&self) -> u32 {
        self.frob
    }

    pub fn is_linear(&self) -> bool {
        self.frob == 0
    }
}

impl FieldTower {
    /// `<x, y> = x ȳ + x̄ y`; symmetric, alternating, values in `F`.
    pub fn bilinear(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.bilinear_at(Level::Full, x, y)
    }

    /// The same form for `K' / F'` when `level` is `Sub`.
    pub fn bilinear_at(&self, level: Level, x: FieldElement, y: FieldElement) -> FieldElement {
        let a = self.mul(x, self.conj_at(level, y));
        let b = self.mul(self.conj_at(level, x), y);
        self.add(a, b)
    }

    /// Every line of the plane in canonical order (affine lines, then infinity).
    pub fn lines(&self) -> Vec<Line> {
        let mut out = Vec::with_capacity((self.q() * self.q() + self.q() + 1) as usize);
        for &u in self.unit_circle(Level::Full) {
            for &mu in self.base_field(Level::Full) {
                out.push(Line::Affine { u, mu });
            }
        }
        out.push(Line::Infinity);
        out
    }

    /// Validates a line: `u ∈ S` and `mu ∈ F`.
    pub fn check_line(&self, line: &Line) -> Result<()> {
        if let Line::Affine { u, mu } = *line {
            self.check(u)?;
            self.check(mu)?;
            if self.norm_kf(u) != FieldElement::ONE {
                return Err(Error::InvalidParameter(
                    "line direction not on the unit circle",
                ));
            }
            if !self.is_in_base(mu) {
                return Err(Error::NotInBaseField { value: mu });
            }
        }
        Ok(())
    }

    pub fn is_incident(&self, line: &Line, p: &ProjPoint) -> bool {
        match (*line, *p) {
            (Line::Infinity, ProjPoint::Infinite(_)) => true,
            (Line::Infinity, ProjPoint::Affine(_)) => false,
            (Line::Affine { u, mu }, ProjPoint::Affine(x)) => self.bilinear(u, x) == mu,
            (Line::Affine { u, .. }, ProjPoint::Infinite(w)) => self.bilinear(u, w).is_zero(),
        }
    }

    /// The `q` affine points of an affine line, in canonical order:
    /// `{ mu·u·i + lambda·u : lambda ∈ F }`.
    pub fn line_points(&self, line: &Line) -> Result<Vec<FieldElement>> {
        let Line::Affine { u, mu } = *line else {
            return Err(Error::InvalidParameter(
                "the line at infinity has no affine points",
            ));
        };
        self.check_line(line)?;
        let x0 = self.mul(mu, self.mul(u, self.i_elem()));
        let mut pts: Vec<_> = self
            .base_field(Level::Full)
            .iter()
            .map(|&l| self.add(x0, self.mul(l, u)))
            .collect();
        pts.sort_unstable();
        Ok(pts)
    }

    /// The unique line through two distinct points.
    pub fn line_through(&self, p: &ProjPoint, q: &ProjPoint) -> Result<Line> {
        if p == q {
            return Err(Error::IdenticalPoints);
        }
        match (*p, *q) {
            (ProjPoint::Infinite(_), ProjPoint::Infinite(_)) => Ok(Line::Infinity),
            (ProjPoint::Affine(x), ProjPoint::Infinite(u))
            | (ProjPoint::Infinite(u), ProjPoint::Affine(x)) => Ok(Line::Affine {
                u,
                mu: self.bilinear(u, x),
            }),
            (ProjPoint::Affine(x), ProjPoint::Affine(y)) => {
                let (_, u) = self.polar_decompose(self.add(x, y))?;
                Ok(Line::Affine {
                    u,
                    mu: self.bilinear(u, x),
                })
            }
        }
    }

    /// `x ↦ (<i,x> : <1,x> : 1)`, `u ↦ (<i,u> : <1,u> : 0)`.
    pub fn to_homogeneous(&self, p: &ProjPoint) -> Homogeneous {
        let (x, z) = match *p {
            ProjPoint::Affine(x) => (x, FieldElement::ONE),
            ProjPoint::Infinite(u) => (u, FieldElement::ZERO),
        };
        [
            self.bilinear(self.i_elem(), x),
            self.bilinear(FieldElement::ONE, x),
            z,
        ]
    }

    /// Inverse of [`Self::to_homogeneous`] on any nonzero triple over `F`.
    pub fn from_homogeneous(&self, v: &Homogeneous) -> Result<ProjPoint> {
        for &c in v {
            self.check(c)?;
            if !self.is_in_base(c) {
                return Err(Error::NotInBaseField { value: c });
            }
        }
        if v.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroVector);
        }
        let w = self.add(v[0], self.mul(v[1], self.i_elem()));
        if v[2].is_zero() {
            let (_, u) = self.polar_decompose(w)?;
            Ok(ProjPoint::Infinite(u))
        } else {
            Ok(ProjPoint::Affine(self.div(w, v[2])?))
        }
    }

    /// The homogeneous line coordinates `[a : b : c]` of a line, so that
    /// `(X : Y : Z)` is incident iff `aX + bY + cZ = 0`.
    pub fn line_coordinates(&self, line: &Line) -> Homogeneous {
        match *line {
            Line::Infinity => [FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE],
            Line::Affine { u, mu } => [
                self.bilinear(u, FieldElement::ONE),
                self.bilinear(u, self.i_elem()),
                mu,
            ],
        }
    }

    pub fn identity_collineation(&self) -> Collineation {
        let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
        Collineation {
            matrix: [[o, z, z], [z, o, z], [z, z, o]],
            frob: 0,
        }
    }

    /// Validates entries in `F` and invertibility; reduces `frob` modulo `m`.
    pub fn collineation(&self, matrix: Matrix, frob: u32) -> Result<Collineation> {
        for row in &matrix {
            for &c in row {
                self.check(c)?;
                if !self.is_in_base(c) {
                    return Err(Error::NotInBaseField { value: c });
                }
            }
        }
        if self.det(&matrix).is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Collineation {
            matrix,
            frob: frob % self.m(),
        })
    }

    pub fn det(&self, a: &Matrix) -> FieldElement {
        let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
            self.add(
                self.mul(a[r1][c1], a[r2][c2]),
                self.mul(a[r1][c2], a[r2][c1]),
            )
        };
        let t0 = self.mul(a[0][0], minor(1, 2, 1, 2));
        let t1 = self.mul(a[0][1], minor(1, 2, 0, 2));
        let t2 = self.mul(a[0][2], minor(1, 2, 0, 1));
        self.add(self.add(t0, t1), t2)
    }

    pub fn mat_mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let mut out = [[FieldElement::ZERO; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).fold(FieldElement::ZERO, |acc, k| {
                    self.add(acc, self.mul(a[i][k], b[k][j]))
                });
            }
        }
        out
    }

    fn mat_vec(&self, a: &Matrix, v: &Homogeneous) -> Homogeneous {
        let mut out = [FieldElement::ZERO; 3];
        for (i, cell) in out.iter_mut().enumerate() {
            *cell = (0..3).fold(FieldElement::ZERO, |acc, k| {
                self.add(acc, self.mul(a[i][k], v[k]))
            });
        }
        out
    }

    fn mat_frob(&self, a: &Matrix, e: u32) -> Matrix {
        a.map(|row| row.map(|c| self.frob(c, e)))
    }

    fn mat_inverse(&self, a: &Matrix) -> Result<Matrix> {
        let d = self.inv(self.det(a)).map_err(|_| Error::SingularMatrix)?;
        let mut out = [[FieldElement::ZERO; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                // Cofactor of a[j][i]; signs vanish in characteristic 2.
                let rows: Vec<usize> = (0..3).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..3).filter(|&c| c != i).collect();
                let cof = self.add(
                    self.mul(a[rows[0]][cols[0]], a[rows[1]][cols[1]]),
                    self.mul(a[rows[0]][cols[1]], a[rows[1]][cols[0]]),
                );
                *cell = self.mul(cof, d);
            }
        }
        Ok(out)
    }

    /// `a ∘ b` (apply `b` first): `(M1, e1) ∘ (M2, e2) = (M1 · φ^{e1}(M2), e1 + e2)`.
    pub fn compose(&self, a: &Collineation, b: &Collineation) -> Collineation {
        let matrix = self.mat_mul(&a.matrix, &self.mat_frob(&b.matrix, a.frob));
        Collineation {
            matrix,
            frob: (a.frob + b.frob) % self.m(),
        }
    }

    pub fn inverse(&self, c: &Collineation) -> Collineation {
        let back = (self.m() - c.frob) % self.m();
        let inv = self
            .mat_inverse(&c.matrix)
            .expect("collineations are invertible");
        Collineation {
            matrix: self.mat_frob(&inv, back),
            frob: back,
        }
    }

    pub fn power(&self, c: &Collineation, k: u64) -> Collineation {
        let mut acc = self.identity_collineation();
        let mut base = *c;
        let mut k = k;
        while k != 0 {
            if k & 1 != 0 {
                acc = self.compose(&acc, &base);
            }
            base = self.compose(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Projective normal form: the first nonzero entry of the matrix is 1.
    pub fn canonical(&self, c: &Collineation) -> Collineation {
        let lead = c
            .matrix
            .iter()
            .flatten()
            .copied()
            .find(|x| !x.is_zero())
            .expect("invertible matrix has a nonzero entry");
        let s = self.inv(lead).expect("nonzero");
        Collineation {
            matrix: c.matrix.map(|row| row.map(|x| self.mul(x, s))),
            frob: c.frob,
        }
    }

    /// Equality as maps of the projective plane.
    pub fn same_map(&self, a: &Collineation, b: &Collineation) -> bool {
        self.canonical(a) == self.canonical(b)
    }

    pub fn is_identity_map(&self, c: &Collineation) -> bool {
        self.same_map(c, &self.identity_collineation())
    }

    pub fn apply_collineation(&self, c: &Collineation, p: &ProjPoint) -> ProjPoint {
        let v = self.to_homogeneous(p).map(|x| self.frob(x, c.frob));
        let w = self.mat_vec(&c.matrix, &v);
        self.from_homogeneous(&w)
            .expect("invertible matrix maps points to points")
    }

    /// Image of an affine point; `None` if it lands at infinity.
    pub fn apply_affine(&self, c: &Collineation, x: FieldElement) -> Option<FieldElement> {
        match self.apply_collineation(c, &ProjPoint::Affine(x)) {
            ProjPoint::Affine(y) => Some(y),
            ProjPoint::Infinite(_) => None,
        }
    }

    /// Image of a line, via two of its points.
    pub fn apply_to_line(&self, c: &Collineation, line: &Line) -> Line {
        let (p, q) = match *line {
            Line::Infinity => {
                let s = self.unit_circle(Level::Full);
                (ProjPoint::Infinite(s[0]), ProjPoint::Infinite(s[1]))
            }
            Line::Affine { u, mu } => (
                ProjPoint::Infinite(u),
                ProjPoint::Affine(self.mul(mu, self.mul(u, self.i_elem()))),
            ),
        };
        let (p, q) = (
            self.apply_collineation(c, &p),
            self.apply_collineation(c, &q),
        );
        self.line_through(&p, &q)
            .expect("collineations are injective")
    }
}
