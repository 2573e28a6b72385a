//! Finite-dimensional Lie algebras with exact structure constants.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::homology::{kernel_basis, RationalMatrix, SparseVec};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("cannot parse Lie algebra file: {0}")]
    Parse(String),
    #[error("malformed Lie algebra: {0}")]
    Shape(String),
    #[error("antisymmetry violated at (i, j, k) = ({0}, {1}, {2})")]
    Antisymmetry(usize, usize, usize),
    #[error("Jacobi identity violated at (i, j, k, l) = ({0}, {1}, {2}, {3})")]
    Jacobi(usize, usize, usize, usize),
    #[error("vector of length {got} given to an algebra of dimension {dim}")]
    Dimension { dim: usize, got: usize },
    #[error("form is degenerate; metric-dependent fields (L_S, B, C, bfL, gamma_dgamma, primitive) are unavailable")]
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    pub name: String,
    pub basis: Vec<String>,
    /// `sc[i][j][k] = c^k_{ij}`, so that `[e_i, e_j] = Σ_k c^k_{ij} e_k`.
    sc: Vec<Vec<Vec<Q>>>,
    /// Form declared in the source file, if any.
    pub declared_form: Option<BilinearForm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    pub matrix: Vec<Vec<Q>>,
}

#[derive(Deserialize)]
struct LieFile {
    name: String,
    dim: usize,
    basis: Vec<String>,
    #[serde(default)]
    brackets: Vec<BracketEntry>,
    #[serde(default)]
    form: Option<serde_json::Value>,
}

#[derive(Deserialize)]
struct BracketEntry {
    i: usize,
    j: usize,
    k: usize,
    c: Q,
}

/// Parses and validates a Lie algebra document.
pub fn load_lie_algebra(text: &str) -> Result<LieAlgebra, LieError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| LieError::Parse(e.to_string()))?;
    lie_from_value(&value)
}

pub fn lie_from_value(value: &serde_json::Value) -> Result<LieAlgebra, LieError> {
    let file: LieFile = serde_json::from_value(value.clone()).map_err(|e| LieError::Parse(e.to_string()))?;
    let n = file.dim;
    if n == 0 {
        return Err(LieError::Shape("dimension must be positive".into()));
    }
    if file.basis.len() != n {
        return Err(LieError::Shape(format!("{} basis labels for dimension {n}", file.basis.len())));
    }
    let mut seen = std::collections::HashSet::new();
    for b in &file.basis {
        if b.is_empty() || !b.chars().all(|c| c.is_alphanumeric() || c == '_') || !seen.insert(b) {
            return Err(LieError::Shape(format!("basis label {b:?} is empty, repeated or not alphanumeric")));
        }
    }
    // Canonical entries keyed by (min, max, k), holding c^k_{min,max}.
    let mut entries: BTreeMap<(usize, usize, usize), Q> = BTreeMap::new();
    for e in &file.brackets {
        if e.i >= n || e.j >= n || e.k >= n {
            return Err(LieError::Shape(format!("bracket index ({}, {}, {}) out of range", e.i, e.j, e.k)));
        }
        if e.i == e.j {
            if !e.c.is_zero() {
                return Err(LieError::Antisymmetry(e.i, e.j, e.k));
            }
            continue;
        }
        let (key, val) = if e.i < e.j { ((e.i, e.j, e.k), e.c.clone()) } else { ((e.j, e.i, e.k), -e.c.clone()) };
        match entries.get(&key) {
            Some(old) if *old != val => return Err(LieError::Antisymmetry(key.0, key.1, key.2)),
            _ => {
                entries.insert(key, val);
            }
        }
    }
    let mut sc = vec![vec![vec![Q::ZERO; n]; n]; n];
    for ((i, j, k), c) in entries {
        sc[j][i][k] = -c.clone();
        sc[i][j][k] = c;
    }
    let mut lie = LieAlgebra { name: file.name, basis: file.basis, sc, declared_form: None };
    lie.validate()?;
    lie.declared_form = match &file.form {
        None | Some(serde_json::Value::Null) => None,
        Some(serde_json::Value::String(s)) if s == "killing" => Some(lie.killing_form()),
        Some(v) => {
            let rows: Vec<Vec<Q>> = serde_json::from_value(v.clone()).map_err(|e| LieError::Parse(format!("form: {e}")))?;
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(LieError::Shape(format!("form must be {n}x{n}")));
            }
            Some(BilinearForm { matrix: rows })
        }
    };
    Ok(lie)
}

impl LieAlgebra {
    /// Builds an algebra from a dense table of structure constants and validates it.
    pub fn from_structure_constants(name: &str, basis: &[&str], sc: Vec<Vec<Vec<Q>>>) -> Result<Self, LieError> {
        let lie = LieAlgebra { name: name.into(), basis: basis.iter().map(|s| s.to_string()).collect(), sc, declared_form: None };
        lie.validate()?;
        Ok(lie)
    }

    pub fn abelian(n: usize) -> Self {
        let basis = (1..=n).map(|i| format!("t{i}")).collect();
        LieAlgebra { name: format!("t{n}"), basis, sc: vec![vec![vec![Q::ZERO; n]; n]; n], declared_form: None }
    }

    /// sl₂ in the basis x, h, y with `[h,x] = 2x`, `[h,y] = −2y`, `[x,y] = h`.
    pub fn sl2() -> Self {
        let mut sc = vec![vec![vec![Q::ZERO; 3]; 3]; 3];
        let (x, h, y) = (0, 1, 2);
        let mut set = |i: usize, j: usize, k: usize, c: i64| {
            sc[i][j][k] = Q::int(c);
            sc[j][i][k] = Q::int(-c);
        };
        set(h, x, x, 2);
        set(h, y, y, -2);
        set(x, y, h, 1);
        LieAlgebra { name: "sl2".into(), basis: vec!["x".into(), "h".into(), "y".into()], sc, declared_form: None }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.sc[i][j][k]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == label)
    }

    pub fn is_abelian(&self) -> bool {
        self.sc.iter().flatten().flatten().all(|c| c.is_zero())
    }

    /// Exhaustive antisymmetry and Jacobi checks.
    pub fn validate(&self) -> Result<(), LieError> {
        let n = self.dim();
        if self.sc.len() != n || self.sc.iter().any(|r| r.len() != n || r.iter().any(|s| s.len() != n)) {
            return Err(LieError::Shape("structure constant table has the wrong shape".into()));
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.sc[i][j][k] != -self.sc[j][i][k].clone() {
                        return Err(LieError::Antisymmetry(i.min(j), i.max(j), k));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s: Q = (0..n)
                            .map(|m| {
                                &self.sc[i][j][m] * &self.sc[m][k][l]
                                    + &self.sc[j][k][m] * &self.sc[m][i][l]
                                    + &self.sc[k][i][m] * &self.sc[m][j][l]
                            })
                            .sum();
                        if !s.is_zero() {
                            return Err(LieError::Jacobi(i, j, k, l));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn bracket(&self, u: &[Q], v: &[Q]) -> Result<Vec<Q>, LieError> {
        let n = self.dim();
        for w in [u, v] {
            if w.len() != n {
                return Err(LieError::Dimension { dim: n, got: w.len() });
            }
        }
        let mut out = vec![Q::ZERO; n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                let s = &u[i] * &v[j];
                for (k, o) in out.iter_mut().enumerate() {
                    if !self.sc[i][j][k].is_zero() {
                        *o += &s * &self.sc[i][j][k];
                    }
                }
            }
        }
        Ok(out)
    }

    /// `ad(e_i)` as a matrix: column `a` holds `[e_i, e_a]`.
    pub fn ad(&self, i: usize) -> Vec<Vec<Q>> {
        let n = self.dim();
        (0..n).map(|b| (0..n).map(|a| self.sc[i][a][b].clone()).collect()).collect()
    }

    pub fn killing_form(&self) -> BilinearForm {
        let n = self.dim();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut t = Q::ZERO;
                        for a in 0..n {
                            for b in 0..n {
                                if !self.sc[i][b][a].is_zero() && !self.sc[j][a][b].is_zero() {
                                    t += &self.sc[i][b][a] * &self.sc[j][a][b];
                                }
                            }
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        BilinearForm { matrix }
    }

    pub fn unit(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::ZERO; self.dim()];
        v[i] = Q::ONE;
        v
    }

    /// Exact basis of `Hom_𝔤(𝔤, Sym^d 𝔤)`, as coordinate vectors over the
    /// basis `(i, μ) ↦ [e_i ↦ μ]` of `Lin(𝔤, Sym^d 𝔤)` with `μ` running
    /// through `sym_monomials(n, d)`.
    pub fn module_hom_space(&self, d: usize) -> Vec<SparseVec> {
        let n = self.dim();
        let monos = sym_monomials(n, d);
        let index: BTreeMap<Vec<usize>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let s = monos.len();
        let coord = |i: usize, mu: usize| i * s + mu;
        let mut blocks = Vec::new();
        for xi in 0..n {
            let mut columns = Vec::with_capacity(n * s);
            for i in 0..n {
                for (mu, m) in monos.iter().enumerate() {
                    let mut entries: Vec<(usize, Q)> = Vec::new();
                    for (nu, c) in self.act_on_sym(xi, m) {
                        entries.push((coord(i, index[&nu]), c));
                    }
                    for j in 0..n {
                        let c = &self.sc[xi][j][i];
                        if !c.is_zero() {
                            entries.push((coord(j, mu), -c.clone()));
                        }
                    }
                    columns.push(crate::homology::collect_sparse(entries));
                }
            }
            blocks.push(RationalMatrix::from_columns(n * s, columns));
        }
        kernel_basis(&RationalMatrix::vstack(&blocks))
    }

    /// `ad(e_xi)` applied as a derivation to a symmetric monomial.
    pub fn act_on_sym(&self, xi: usize, mono: &[usize]) -> Vec<(Vec<usize>, Q)> {
        let mut acc: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
        for t in 0..mono.len() {
            for k in 0..self.dim() {
                let c = &self.sc[xi][mono[t]][k];
                if c.is_zero() {
                    continue;
                }
                let mut m = mono.to_vec();
                m[t] = k;
                m.sort_unstable();
                *acc.entry(m).or_default() += c;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }
}

/// Sorted index multisets of size `d` over `0..n`, in lexicographic order.
pub fn sym_monomials(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, d, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, 0, &mut Vec::new(), &mut out);
    out
}

impl BilinearForm {
    pub fn identity(n: usize) -> Self {
        BilinearForm { matrix: (0..n).map(|i| (0..n).map(|j| if i == j { Q::ONE } else { Q::ZERO }).collect()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.matrix[i][j]
    }

    pub fn eval(&self, u: &[Q], v: &[Q]) -> Q {
        let n = self.dim();
        let mut t = Q::ZERO;
        for i in 0..n {
            for j in 0..n {
                if !u[i].is_zero() && !v[j].is_zero() && !self.matrix[i][j].is_zero() {
                    t += &u[i] * &self.matrix[i][j] * &v[j];
                }
            }
        }
        t
    }

    pub fn scaled(&self, s: &Q) -> BilinearForm {
        BilinearForm { matrix: self.matrix.iter().map(|r| r.iter().map(|x| x * s).collect()).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    /// First basis triple `(u, v, w)` with `B([u,v],w) + B(v,[u,w]) ≠ 0`.
    pub fn invariance_violation(&self, lie: &LieAlgebra) -> Option<(usize, usize, usize)> {
        let n = lie.dim();
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    let s: Q = (0..n)
                        .map(|m| lie.c(u, v, m) * &self.matrix[m][w] + lie.c(u, w, m) * &self.matrix[v][m])
                        .sum();
                    if !s.is_zero() {
                        return Some((u, v, w));
                    }
                }
            }
        }
        None
    }

    /// Exact inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<Vec<Vec<Q>>, LieError> {
        let n = self.dim();
        let mut a: Vec<Vec<Q>> = self
            .matrix
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Q::ONE } else { Q::ZERO }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(LieError::Degenerate)?;
            a.swap(col, piv);
            let inv = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..2 * n {
                        let sub = &f * &a[col][c];
                        a[r][c] -= sub;
                    }
                }
            }
        }
        Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
    }
}

pub fn form_inverse(form: &BilinearForm) -> Result<Vec<Vec<Q>>, LieError> {
    form.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SL2: &str = r#"{"name":"sl2","dim":3,"basis":["x","h","y"],
        "brackets":[{"i":1,"j":0,"k":0,"c":"2"},{"i":1,"j":2,"k":2,"c":"-2"},{"i":0,"j":2,"k":1,"c":"1"}],
        "form":"killing"}"#;

    #[test]
    fn loads_sl2_and_brackets() {
        let l = load_lie_algebra(SL2).unwrap();
        assert_eq!(l.dim(), 3);
        assert_eq!(l, LieAlgebra { declared_form: l.declared_form.clone(), ..LieAlgebra::sl2() });
        let h = l.bracket(&l.unit(0), &l.unit(2)).unwrap();
        assert_eq!(h, l.unit(1));
        let u = vec![Q::int(1), Q::new(1, 2), Q::int(-3)];
        assert!(l.bracket(&u, &u).unwrap().iter().all(|c| c.is_zero()));
        assert!(l.bracket(&u, &[Q::ONE]).is_err());
    }

    #[test]
    fn rejects_antisymmetry_conflict() {
        let bad = r#"{"name":"bad","dim":3,"basis":["a","b","c"],
            "brackets":[{"i":1,"j":2,"k":1,"c":"1"},{"i":2,"j":1,"k":1,"c":"1"}]}"#;
        let err = load_lie_algebra(bad).unwrap_err();
        assert_eq!(err, LieError::Antisymmetry(1, 2, 1));
        assert!(err.to_string().contains("(1, 2, 1)"));
    }

    #[test]
    fn rejects_jacobi_violation() {
        // [a,b] = a, [b,c] = a, [a,c] = b fails Jacobi.
        let bad = r#"{"name":"bad","dim":3,"basis":["a","b","c"],
            "brackets":[{"i":0,"j":1,"k":0,"c":"1"},{"i":1,"j":2,"k":0,"c":"1"},{"i":0,"j":2,"k":1,"c":"1"}]}"#;
        assert!(matches!(load_lie_algebra(bad), Err(LieError::Jacobi(..))));
    }

    #[test]
    fn killing_form_of_sl2() {
        let k = LieAlgebra::sl2().killing_form();
        assert_eq!(k.get(1, 1), &Q::int(8));
        assert_eq!(k.get(0, 2), &Q::int(4));
        assert_eq!(k.get(0, 0), &Q::ZERO);
        assert!(k.is_symmetric());
        assert_eq!(k.invariance_violation(&LieAlgebra::sl2()), None);
        assert!(LieAlgebra::abelian(2).killing_form().matrix.iter().flatten().all(|x| x.is_zero()));
    }

    #[test]
    fn form_inverses() {
        assert_eq!(BilinearForm::identity(3).inverse().unwrap(), BilinearForm::identity(3).matrix);
        let k = LieAlgebra::sl2().killing_form();
        let inv = k.inverse().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: Q = (0..3).map(|m| &inv[i][m] * k.get(m, j)).sum();
                assert_eq!(s, if i == j { Q::ONE } else { Q::ZERO });
            }
        }
        assert_eq!(LieAlgebra::abelian(1).killing_form().inverse(), Err(LieError::Degenerate));
    }

    #[test]
    fn hom_space_dimensions() {
        assert_eq!(LieAlgebra::abelian(2).module_hom_space(0).len(), 2);
        assert_eq!(LieAlgebra::sl2().module_hom_space(0).len(), 0);
        assert_eq!(LieAlgebra::sl2().module_hom_space(1).len(), 1);
    }
}
