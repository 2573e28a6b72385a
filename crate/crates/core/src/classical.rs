//! Classical `G*`-algebras, coded directly from the finite-dimensional
//! formulas: the Weil algebra `W(𝔤) = Λ(𝔤*)⊗S(𝔤*)` tensored with polynomial
//! forms on a linear representation. Nothing here touches the vertex engine;
//! it serves as the independent oracle for every weight-zero computation.

use std::collections::BTreeMap;

use crate::homology::{kernel_basis, rank_of, RationalMatrix, SparseVec, Subspace};
use crate::lie::LieAlgebra;
use crate::rational::Q;

type Mono = Vec<u8>;
pub type Poly = BTreeMap<Mono, Q>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Theta,
    Z,
    X,
    Dx,
}

#[derive(Clone, Debug)]
struct Gen {
    kind: Kind,
    odd: bool,
    degree: i32,
    charge: i32,
}

/// A derivation of given parity, determined by its values on generators.
#[derive(Clone, Debug)]
struct Derivation {
    odd: bool,
    degree: i32,
    images: Vec<Poly>,
}

fn add_into(p: &mut Poly, m: Mono, x: Q) {
    if x.is_zero() {
        return;
    }
    let e = p.entry(m).or_insert(Q::ZERO);
    *e += &x;
    if e.is_zero() {
        let k: Vec<Mono> = p.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
        for k in k {
            p.remove(&k);
        }
    }
}

pub struct ClassicalModel {
    gens: Vec<Gen>,
    n: usize,
    lie: LieAlgebra,
    d_w: Derivation,
    d_a: Derivation,
    iota_w: Vec<Derivation>,
    iota_a: Vec<Derivation>,
    l_w: Vec<Derivation>,
    l_a: Vec<Derivation>,
}

impl ClassicalModel {
    /// `W(𝔤)⊗Ω_poly(ℂ^N)` for the representation `rho` (`None` for a point).
    pub fn new(lie: &LieAlgebra, rho: Option<&[Vec<Vec<Q>>]>) -> Self {
        let n = lie.dim();
        let big_n = rho.map_or(0, |r| r.first().map_or(0, |m| m.len()));
        let mut gens = Vec::new();
        for _ in 0..n {
            gens.push(Gen { kind: Kind::Theta, odd: true, degree: 1, charge: 0 });
        }
        for _ in 0..n {
            gens.push(Gen { kind: Kind::Z, odd: false, degree: 2, charge: 0 });
        }
        for _ in 0..big_n {
            gens.push(Gen { kind: Kind::X, odd: false, degree: 0, charge: 1 });
        }
        for _ in 0..big_n {
            gens.push(Gen { kind: Kind::Dx, odd: true, degree: 1, charge: 1 });
        }
        let total = gens.len();
        let (theta, z, x, dx) = (|i| i, |i| n + i, |l| 2 * n + l, |l| 2 * n + big_n + l);
        let unit = |len: usize, idx: &[usize]| -> Mono {
            let mut m = vec![0u8; len];
            for &i in idx {
                m[i] += 1;
            }
            m
        };
        let mono = |idx: &[usize]| unit(total, idx);
        let zero = || vec![Poly::new(); total];
        let c = |i: usize, j: usize, k: usize| lie.c(i, j, k).clone();

        // d θ_j = −½ Σ c^j_{ik} θ_i θ_k + z_j,  d z_j = −Σ c^j_{ik} z_k θ_i
        let mut d_w = Derivation { odd: true, degree: 1, images: zero() };
        for j in 0..n {
            let mut p = Poly::new();
            for i in 0..n {
                for k in 0..n {
                    if i < k {
                        add_into(&mut p, mono(&[theta(i), theta(k)]), -c(i, k, j));
                    }
                }
            }
            add_into(&mut p, mono(&[z(j)]), Q::ONE);
            d_w.images[theta(j)] = p;
            let mut p = Poly::new();
            for i in 0..n {
                for k in 0..n {
                    // z_k θ_i is already in generator order.
                    add_into(&mut p, mono(&[theta(i), z(k)]), -c(i, k, j));
                }
            }
            d_w.images[z(j)] = p;
        }
        let mut d_a = Derivation { odd: true, degree: 1, images: zero() };
        for l in 0..big_n {
            d_a.images[x(l)] = Poly::from([(mono(&[dx(l)]), Q::ONE)]);
        }
        let mut iota_w = Vec::new();
        let mut l_w = Vec::new();
        let mut iota_a = Vec::new();
        let mut l_a = Vec::new();
        for a in 0..n {
            let mut io = Derivation { odd: true, degree: -1, images: zero() };
            io.images[theta(a)] = Poly::from([(mono(&[]), Q::ONE)]);
            iota_w.push(io);
            let mut la = Derivation { odd: false, degree: 0, images: zero() };
            for j in 0..n {
                for k in 0..n {
                    add_into(&mut la.images[theta(j)], mono(&[theta(k)]), -c(a, k, j));
                    add_into(&mut la.images[z(j)], mono(&[z(k)]), -c(a, k, j));
                }
            }
            l_w.push(la);
            let mut io = Derivation { odd: true, degree: -1, images: zero() };
            let mut la = Derivation { odd: false, degree: 0, images: zero() };
            if let Some(rho) = rho {
                for l in 0..big_n {
                    for k in 0..big_n {
                        add_into(&mut io.images[dx(l)], mono(&[x(k)]), -rho[a][l][k].clone());
                        add_into(&mut la.images[x(l)], mono(&[x(k)]), -rho[a][l][k].clone());
                        add_into(&mut la.images[dx(l)], mono(&[dx(k)]), -rho[a][l][k].clone());
                    }
                }
            }
            iota_a.push(io);
            l_a.push(la);
        }
        ClassicalModel { gens, n, lie: lie.clone(), d_w, d_a, iota_w, iota_a, l_w, l_a }
    }

    fn mul_mono(&self, a: &Mono, b: &Mono) -> Option<(Mono, bool)> {
        let mut sign = false;
        let mut odd_after = 0usize;
        // Moving each odd factor of b left past the odd factors of a that sit later.
        for i in (0..a.len()).rev() {
            if self.gens[i].odd && b[i] > 0 {
                sign ^= odd_after % 2 == 1;
            }
            if self.gens[i].odd && a[i] > 0 {
                odd_after += 1;
            }
        }
        let mut out = a.clone();
        for i in 0..a.len() {
            out[i] += b[i];
            if self.gens[i].odd && out[i] > 1 {
                return None;
            }
        }
        Some((out, sign))
    }

    fn mul(&self, p: &Poly, q: &Poly) -> Poly {
        let mut out = Poly::new();
        for (a, x) in p {
            for (b, y) in q {
                if let Some((m, s)) = self.mul_mono(a, b) {
                    let v = x * y;
                    add_into(&mut out, m, if s { -v } else { v });
                }
            }
        }
        out
    }

    fn parity(&self, m: &Mono) -> bool {
        m.iter().enumerate().filter(|(i, e)| self.gens[*i].odd && **e > 0).count() % 2 == 1
    }

    fn apply_mono(&self, d: &Derivation, m: &Mono) -> Poly {
        let seq: Vec<usize> = m.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat(i).take(e as usize)).collect();
        let mut out = Poly::new();
        for s in 0..seq.len() {
            let img = &d.images[seq[s]];
            if img.is_empty() {
                continue;
            }
            let mut prefix = vec![0u8; m.len()];
            for &g in &seq[..s] {
                prefix[g] += 1;
            }
            let mut suffix = vec![0u8; m.len()];
            for &g in &seq[s + 1..] {
                suffix[g] += 1;
            }
            let sign = d.odd && self.parity(&prefix);
            let term = self.mul(&self.mul(&Poly::from([(prefix, Q::ONE)]), img), &Poly::from([(suffix, Q::ONE)]));
            for (k, v) in term {
                add_into(&mut out, k, if sign { -v } else { v });
            }
        }
        out
    }

    fn apply(&self, d: &Derivation, p: &Poly) -> Poly {
        let mut out = Poly::new();
        for (m, x) in p {
            for (k, v) in self.apply_mono(d, m) {
                add_into(&mut out, k, v * x);
            }
        }
        out
    }

    fn sum(a: &Derivation, b: &Derivation) -> Derivation {
        let mut images = a.images.clone();
        for (i, p) in b.images.iter().enumerate() {
            for (k, v) in p {
                add_into(&mut images[i], k.clone(), v.clone());
            }
        }
        Derivation { odd: a.odd, degree: a.degree, images }
    }

    /// Graded commutator `[D1, D2]`, again a derivation.
    fn bracket(&self, a: &Derivation, b: &Derivation) -> Derivation {
        let mut images = Vec::new();
        let minus = !(a.odd && b.odd);
        for g in 0..self.gens.len() {
            let mut p = self.apply(a, &b.images[g]);
            for (k, v) in self.apply(b, &a.images[g]) {
                add_into(&mut p, k, if minus { -v } else { v });
            }
            images.push(p);
        }
        Derivation { odd: a.odd ^ b.odd, degree: a.degree + b.degree, images }
    }

    fn same(&self, a: &Derivation, b: &Derivation) -> bool {
        a.images == b.images
    }

    fn combo(&self, ds: &[Derivation], coeffs: impl Fn(usize) -> Q) -> Derivation {
        let mut out = Derivation { odd: ds[0].odd, degree: ds[0].degree, images: vec![Poly::new(); self.gens.len()] };
        for (k, d) in ds.iter().enumerate() {
            let s = coeffs(k);
            for (i, p) in d.images.iter().enumerate() {
                for (m, v) in p {
                    add_into(&mut out.images[i], m.clone(), v * &s);
                }
            }
        }
        out
    }

    fn d(&self) -> Derivation {
        Self::sum(&self.d_w, &self.d_a)
    }

    fn iota(&self, a: usize) -> Derivation {
        Self::sum(&self.iota_w[a], &self.iota_a[a])
    }

    fn l(&self, a: usize) -> Derivation {
        Self::sum(&self.l_w[a], &self.l_a[a])
    }

    /// The `G*`-algebra relations, checked on generators. Returns the names of
    /// the relations that fail.
    pub fn axiom_violations(&self) -> Vec<String> {
        let n = self.n;
        let mut bad = Vec::new();
        let d = self.d();
        let zero = |x: &Derivation| x.images.iter().all(|p| p.is_empty());
        if !zero(&self.bracket(&d, &d)) {
            bad.push("d^2 = 0".into());
        }
        let iotas: Vec<_> = (0..n).map(|a| self.iota(a)).collect();
        let ls: Vec<_> = (0..n).map(|a| self.l(a)).collect();
        for a in 0..n {
            if !self.same(&self.bracket(&d, &iotas[a]), &ls[a]) {
                bad.push(format!("[d, iota_{a}] = L_{a}"));
            }
            if !zero(&self.bracket(&d, &ls[a])) {
                bad.push(format!("[d, L_{a}] = 0"));
            }
            for b in 0..n {
                if !zero(&self.bracket(&iotas[a], &iotas[b])) {
                    bad.push(format!("[iota_{a}, iota_{b}] = 0"));
                }
                let c = |k: usize| self.lie.c(a, b, k).clone();
                if !self.same(&self.bracket(&ls[a], &iotas[b]), &self.combo(&iotas, c)) {
                    bad.push(format!("[L_{a}, iota_{b}] = iota_[{a},{b}]"));
                }
                if !self.same(&self.bracket(&ls[a], &ls[b]), &self.combo(&ls, c)) {
                    bad.push(format!("[L_{a}, L_{b}] = L_[{a},{b}]"));
                }
            }
        }
        bad
    }

    /// Monomials of one degree and charge, optionally without `θ`.
    fn basis(&self, degree: i32, charge: i32, cartan: bool) -> Vec<Mono> {
        let mut out = Vec::new();
        let mut cur = vec![0u8; self.gens.len()];
        self.fill(0, degree, charge, cartan, &mut cur, &mut out);
        out
    }

    fn fill(&self, i: usize, degree: i32, charge: i32, cartan: bool, cur: &mut Mono, out: &mut Vec<Mono>) {
        if i == self.gens.len() {
            if degree == 0 && charge == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let g = &self.gens[i];
        let mut max = if g.odd { 1 } else { u8::MAX };
        if cartan && g.kind == Kind::Theta {
            max = 0;
        }
        let mut e = 0u8;
        loop {
            let (dd, cc) = (degree - g.degree * e as i32, charge - g.charge * e as i32);
            if dd < 0 || cc < 0 {
                break;
            }
            cur[i] = e;
            self.fill(i + 1, dd, cc, cartan, cur, out);
            if e == max || (g.degree == 0 && g.charge == 0) {
                break;
            }
            e += 1;
        }
        cur[i] = 0;
    }

    fn matrix(&self, src: &[Mono], dst: &[Mono], f: impl Fn(&Mono) -> Poly) -> RationalMatrix {
        let index: BTreeMap<&Mono, usize> = dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let cols = src
            .iter()
            .map(|m| {
                let mut v: SparseVec = f(m).into_iter().map(|(k, x)| (index[&k], x)).collect();
                v.sort_by_key(|e| e.0);
                v
            })
            .collect();
        RationalMatrix::from_columns(dst.len(), cols)
    }

    fn joint_kernel(&self, src: &[Mono], ops: &[(&Derivation, Vec<Mono>)]) -> Subspace {
        let mut space = Subspace::full(src.len());
        for (d, dst) in ops {
            let m = self.matrix(src, dst, |x| self.apply_mono(d, x));
            space = space.kernel_of(&m);
        }
        space
    }

    /// `W(𝔤)⊗A` basic subspace at one degree and charge: `ι`-kernel, then `L`.
    pub fn basic(&self, degree: i32, charge: i32) -> (Vec<Mono>, Subspace) {
        let src = self.basis(degree, charge, false);
        let lower = self.basis(degree - 1, charge, false);
        let iotas: Vec<_> = (0..self.n).map(|a| self.iota(a)).collect();
        let ls: Vec<_> = (0..self.n).map(|a| self.l(a)).collect();
        let mut ops: Vec<(&Derivation, Vec<Mono>)> = iotas.iter().map(|d| (d, lower.clone())).collect();
        ops.extend(ls.iter().map(|d| (d, src.clone())));
        let k = self.joint_kernel(&src, &ops);
        (src, k)
    }

    pub fn horizontal_dim(&self, degree: i32, charge: i32) -> usize {
        let src = self.basis(degree, charge, false);
        let lower = self.basis(degree - 1, charge, false);
        let iotas: Vec<_> = (0..self.n).map(|a| self.iota(a)).collect();
        let ops: Vec<(&Derivation, Vec<Mono>)> = iotas.iter().map(|d| (d, lower.clone())).collect();
        self.joint_kernel(&src, &ops).dim()
    }

    /// `(S(𝔤*)⊗A)^G` at one degree and charge.
    pub fn cartan(&self, degree: i32, charge: i32) -> (Vec<Mono>, Subspace) {
        let src = self.basis(degree, charge, true);
        let ls: Vec<_> = (0..self.n).map(|a| self.l(a)).collect();
        let ops: Vec<(&Derivation, Vec<Mono>)> = ls.iter().map(|d| (d, src.clone())).collect();
        let k = self.joint_kernel(&src, &ops);
        (src, k)
    }

    /// `d_G = d_A − Σ z_a ι_a`.
    fn cartan_d(&self, m: &Mono) -> Poly {
        let mut out = self.apply_mono(&self.d_a, m);
        for a in 0..self.n {
            let mut za = vec![0u8; self.gens.len()];
            za[self.n + a] = 1;
            let t = self.mul(&Poly::from([(za, Q::ONE)]), &self.apply_mono(&self.iota_a[a], m));
            for (k, v) in t {
                add_into(&mut out, k, -v);
            }
        }
        out
    }

    /// Cohomology of a complex of subspaces `spaces[i]` (in degree `lo + i`)
    /// with the operator `f`, reported for the interior degrees.
    fn cohomology(
        &self,
        spaces: &[(Vec<Mono>, Subspace)],
        f: &dyn Fn(&Mono) -> Poly,
    ) -> Vec<(usize, usize, RationalMatrix)> {
        // maps[i]: spaces[i] → spaces[i+1] in subspace coordinates.
        let maps: Vec<RationalMatrix> = spaces
            .windows(2)
            .map(|w| {
                let (src, s) = &w[0];
                let (dst, t) = &w[1];
                let full = self.matrix(src, dst, f);
                let images: Vec<SparseVec> = s.basis.iter().map(|v| full.apply(v)).collect();
                let coords = t.coordinates(&images).expect("differential preserves the subcomplex");
                RationalMatrix::from_columns(t.dim(), coords)
            })
            .collect();
        (1..spaces.len() - 1)
            .map(|i| {
                let z = kernel_basis(&maps[i]).len();
                let b = rank_of(maps[i - 1].columns());
                (z - b, b, maps[i - 1].clone())
            })
            .collect()
    }

    /// Weil-model basic cohomology dims for degrees `degrees`.
    pub fn basic_cohomology(&self, degrees: std::ops::RangeInclusive<i32>, charge: i32) -> Vec<(i32, usize)> {
        let (lo, hi) = (*degrees.start(), *degrees.end());
        let spaces: Vec<_> = (lo - 1..=hi + 1).map(|k| self.basic(k, charge)).collect();
        let d = self.d();
        self.cohomology(&spaces, &|m| self.apply_mono(&d, m))
            .into_iter()
            .zip(lo..)
            .map(|((h, _, _), k)| (k, h))
            .collect()
    }

    /// Cartan-model cohomology dims for degrees `degrees`.
    pub fn cartan_cohomology(&self, degrees: std::ops::RangeInclusive<i32>, charge: i32) -> Vec<(i32, usize)> {
        let (lo, hi) = (*degrees.start(), *degrees.end());
        let spaces: Vec<_> = (lo - 1..=hi + 1).map(|k| self.cartan(k, charge)).collect();
        self.cohomology(&spaces, &|m| self.cartan_d(m))
            .into_iter()
            .zip(lo..)
            .map(|((h, _, _), k)| (k, h))
            .collect()
    }

    /// `dim S^d(𝔤*)^G`.
    pub fn invariant_polynomials(&self, d: i32) -> usize {
        self.cartan(2 * d, 0).1.dim()
    }

    /// Rank of the Chern–Weil map `S^d(𝔤*)^G → H^{2d}_G(A)` in charge `charge`.
    /// Only charge 0 can receive polynomials in `z` alone.
    pub fn chern_weil_rank(&self, d: i32) -> usize {
        let deg = 2 * d;
        let spaces: Vec<_> = (deg - 1..=deg + 1).map(|k| self.cartan(k, 0)).collect();
        let (src, _) = &spaces[1];
        let h = self.cohomology(&spaces, &|m| self.cartan_d(m));
        let boundaries = &h[0].2;
        let (_, cart) = &spaces[1];
        // Invariant polynomials in z alone, as vectors of the degree-2d basis.
        let pure: Vec<usize> =
            (0..src.len()).filter(|&i| src[i].iter().enumerate().all(|(g, &e)| e == 0 || self.gens[g].kind == Kind::Z)).collect();
        let polys: Vec<SparseVec> = cart
            .basis
            .iter()
            .filter(|v| v.iter().all(|(i, _)| pure.contains(i)))
            .cloned()
            .collect();
        let coords = cart.coordinates(&polys).expect("invariants lie in the Cartan space");
        let mut with: Vec<SparseVec> = boundaries.columns().to_vec();
        let b = rank_of(&with);
        with.extend(coords);
        rank_of(&with) - b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2_standard() -> Vec<Vec<Vec<Q>>> {
        let m = |a: [[i64; 2]; 2]| a.iter().map(|r| r.iter().map(|&x| Q::int(x)).collect()).collect();
        vec![m([[0, 1], [0, 0]]), m([[1, 0], [0, -1]]), m([[0, 0], [1, 0]])]
    }

    #[test]
    fn axioms_hold() {
        assert!(ClassicalModel::new(&LieAlgebra::sl2(), None).axiom_violations().is_empty());
        let m = ClassicalModel::new(&LieAlgebra::sl2(), Some(&sl2_standard()));
        assert_eq!(m.axiom_violations(), Vec::<String>::new());
    }

    #[test]
    fn broken_representation_is_caught() {
        let mut rho = sl2_standard();
        rho[1][0][0] = Q::int(2);
        assert!(!ClassicalModel::new(&LieAlgebra::sl2(), Some(&rho)).axiom_violations().is_empty());
    }

    #[test]
    fn weil_algebra_of_a_point() {
        let m = ClassicalModel::new(&LieAlgebra::sl2(), None);
        let inv: Vec<usize> = (0..=4).map(|d| m.invariant_polynomials(d)).collect();
        assert_eq!(inv, vec![1, 0, 1, 0, 1]);
        let basic: Vec<usize> = (0..=6).map(|k| m.basic(k, 0).1.dim()).collect();
        assert_eq!(basic, vec![1, 0, 0, 0, 1, 0, 0]);
        assert_eq!(m.basic_cohomology(0..=4, 0), m.cartan_cohomology(0..=4, 0));
        assert_eq!(m.chern_weil_rank(2), 1);
    }

    #[test]
    fn circle_action_on_the_line() {
        // H_T(ℂ) = H_T(pt): the line is equivariantly contractible.
        let rho = vec![vec![vec![Q::ONE]]];
        let m = ClassicalModel::new(&LieAlgebra::abelian(1), Some(&rho));
        assert!(m.axiom_violations().is_empty());
        let total: Vec<usize> = (0..=4).map(|k| (0..=2).map(|q| m.cartan_cohomology(k..=k, q)[0].1).sum()).collect();
        assert_eq!(total, vec![1, 0, 1, 0, 1]);
    }
}
