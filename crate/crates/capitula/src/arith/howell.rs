use super::{inv_mod, prime_power, ArithError};

/// Dense matrix over Z/p^e.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueMatrix {
    p: u64,
    exp: u32,
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ResidueMatrix {
    pub fn new(modulus: u64, cols: usize, rows: &[Vec<i64>]) -> Result<Self, ArithError> {
        let (p, exp) = prime_power(modulus).ok_or(ArithError::NotPrimePower(modulus))?;
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r.iter().map(|&x| x.rem_euclid(modulus as i64) as u64));
        }
        Ok(ResidueMatrix { p, exp, modulus, rows: rows.len(), cols, data })
    }

    pub(crate) fn from_reduced(p: u64, exp: u32, cols: usize, rows: Vec<Vec<u64>>) -> Self {
        let modulus = p.pow(exp);
        let n = rows.len();
        let data = rows.into_iter().flatten().collect();
        ResidueMatrix { p, exp, modulus, rows: n, cols, data }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn prime(&self) -> u64 {
        self.p
    }
    pub fn exponent(&self) -> u32 {
        self.exp
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Canonical Howell form: one row per pivot column, pivots are powers of p,
/// entries above a pivot reduced into `[0, pivot)`, zero rows dropped.
pub fn howell_form(m: &ResidueMatrix) -> ResidueMatrix {
    let mut s = Submodule::new(m.p, m.exp, m.cols);
    for i in 0..m.rows {
        s.insert(m.row(i));
    }
    s.to_matrix()
}

/// A Z/p^e-submodule of (Z/p^e)^cols kept in Howell form, so that reduction
/// of a vector against it is canonical.
#[derive(Debug, Clone)]
pub struct Submodule {
    p: u64,
    exp: u32,
    modulus: u64,
    cols: usize,
    rows: Vec<Option<Vec<u64>>>,
    // valuation of the pivot in each column, `exp` where there is none
    vals: Vec<u32>,
    reduced: bool,
}

impl PartialEq for Submodule {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.exp == other.exp
            && self.cols == other.cols
            && self.canonical_rows() == other.canonical_rows()
    }
}
impl Eq for Submodule {}

impl Submodule {
    pub fn new(p: u64, exp: u32, cols: usize) -> Self {
        Submodule {
            p,
            exp,
            modulus: p.pow(exp),
            cols,
            rows: vec![None; cols],
            vals: vec![exp; cols],
            reduced: true,
        }
    }

    pub fn full(p: u64, exp: u32, cols: usize) -> Self {
        let mut s = Submodule::new(p, exp, cols);
        for c in 0..cols {
            let mut v = vec![0; cols];
            v[c] = 1;
            s.rows[c] = Some(v);
            s.vals[c] = 0;
        }
        s
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
    pub fn exponent(&self) -> u32 {
        self.exp
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    fn mulm(&self, a: u64, b: u64) -> u64 {
        if self.modulus <= u32::MAX as u64 {
            a * b % self.modulus
        } else {
            ((a as u128 * b as u128) % self.modulus as u128) as u64
        }
    }

    fn val(&self, mut x: u64) -> u32 {
        let mut v = 0;
        while x % self.p == 0 && v < self.exp {
            x /= self.p;
            v += 1;
        }
        v
    }

    // x -= f * row, entrywise from column `from`
    fn axpy(&self, x: &mut [u64], f: u64, row: &[u64], from: usize) {
        if f == 0 {
            return;
        }
        let m = self.modulus;
        for k in from..self.cols {
            if row[k] != 0 {
                let t = self.mulm(f, row[k]);
                x[k] = if x[k] >= t { x[k] - t } else { x[k] + m - t };
            }
        }
    }

    fn scale(&self, x: &mut [u64], f: u64, from: usize) {
        for k in from..self.cols {
            x[k] = self.mulm(x[k], f);
        }
    }

    /// Adds `v` to the module; returns whether the module grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut changed = false;
        let mut work: Vec<Vec<u64>> = vec![v.iter().map(|&x| x % self.modulus).collect()];
        while let Some(mut x) = work.pop() {
            let mut c = 0;
            while c < self.cols {
                if x[c] == 0 {
                    c += 1;
                    continue;
                }
                let v = self.val(x[c]);
                let w = self.vals[c];
                if v >= w {
                    let row = self.rows[c].as_ref().expect("pivot row");
                    let f = x[c] / self.p.pow(w);
                    let row = row.clone();
                    self.axpy(&mut x, f, &row, c);
                    c += 1;
                    continue;
                }
                // x becomes the new pivot row at c
                let unit = x[c] / self.p.pow(v);
                let inv = inv_mod(unit, self.modulus).expect("unit part");
                self.scale(&mut x, inv, c);
                let pv = self.p.pow(v);
                // Howell completion of the new row
                let mut ann = x.clone();
                self.scale(&mut ann, self.p.pow(self.exp - v), c);
                if ann.iter().any(|&a| a != 0) {
                    work.push(ann);
                }
                let old = self.rows[c].replace(x);
                self.vals[c] = v;
                changed = true;
                self.reduced = false;
                if let Some(mut old) = old {
                    // old pivot p^w with w > v: subtract p^{w-v} * new row
                    let new = self.rows[c].as_ref().unwrap().clone();
                    let f = old[c] / pv;
                    self.axpy(&mut old, f, &new, c);
                    debug_assert_eq!(old[c], 0);
                    if old.iter().any(|&a| a != 0) {
                        work.push(old);
                    }
                }
                break;
            }
        }
        changed
    }

    /// Canonical representative of `v` modulo the module.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut x: Vec<u64> = v.iter().map(|&a| a % self.modulus).collect();
        for c in 0..self.cols {
            if let Some(row) = &self.rows[c] {
                let pw = self.p.pow(self.vals[c]);
                let f = x[c] / pw;
                self.axpy(&mut x, f, row, c);
            }
        }
        x
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&a| a == 0)
    }

    /// log_p of the module's order.
    pub fn order_log(&self) -> u32 {
        self.vals.iter().map(|&v| self.exp - v).sum()
    }

    /// log_p of the order of (Z/p^e)^cols / module.
    pub fn index_log(&self) -> u32 {
        self.vals.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_none())
    }

    pub fn pivot_valuations(&self) -> &[u32] {
        &self.vals
    }

    fn canonicalize(&mut self) {
        if self.reduced {
            return;
        }
        for c in 0..self.cols {
            let Some(row) = self.rows[c].clone() else { continue };
            let pw = self.p.pow(self.vals[c]);
            for c2 in 0..c {
                if let Some(mut r2) = self.rows[c2].take() {
                    let f = r2[c] / pw;
                    self.axpy(&mut r2, f, &row, c);
                    self.rows[c2] = Some(r2);
                }
            }
        }
        self.reduced = true;
    }

    /// Rows of the reduced Howell form in pivot order.
    pub fn canonical_rows(&self) -> Vec<Vec<u64>> {
        let mut me = self.clone();
        me.canonicalize();
        me.rows.into_iter().flatten().collect()
    }

    /// Generators of the module (not necessarily reduced above pivots).
    pub fn generators(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.rows.iter().flatten()
    }

    pub fn to_matrix(&self) -> ResidueMatrix {
        ResidueMatrix::from_reduced(self.p, self.exp, self.cols, self.canonical_rows())
    }

    /// Sum of two submodules of the same ambient module.
    pub fn sum(&self, other: &Submodule) -> Submodule {
        let mut s = self.clone();
        for r in other.generators() {
            s.insert(r);
        }
        s
    }

    /// The submodule p^j times this one.
    pub fn scaled(&self, j: u32) -> Submodule {
        let mut s = Submodule::new(self.p, self.exp, self.cols);
        if j >= self.exp {
            return s;
        }
        let f = self.p.pow(j);
        for r in self.generators() {
            let v: Vec<u64> = r.iter().map(|&a| self.mulm(a, f)).collect();
            s.insert(&v);
        }
        s
    }

    /// `{c : sum_i c_i images[i] ∈ target}` as a submodule of (Z/p^e)^{images.len()}.
    pub fn preimage(images: &[Vec<u64>], target: &Submodule) -> Submodule {
        let t = target.cols;
        let s = images.len();
        let mut aug = Submodule::new(target.p, target.exp, t + s);
        for (i, im) in images.iter().enumerate() {
            let mut v = vec![0; t + s];
            v[..t].copy_from_slice(im);
            v[t + i] = 1;
            aug.insert(&v);
        }
        for g in target.generators() {
            let mut v = vec![0; t + s];
            v[..t].copy_from_slice(g);
            aug.insert(&v);
        }
        let mut ker = Submodule::new(target.p, target.exp, s);
        for c in t..t + s {
            if let Some(r) = &aug.rows[c] {
                ker.insert(&r[t..]);
            }
        }
        ker
    }

    /// Cyclic invariants (as exponents of p, descending) of `self / sub`,
    /// where `sub ⊆ self`; computed from the orders of p^j·self + sub.
    pub fn quotient_invariants(&self, sub: &Submodule) -> Vec<u32> {
        let base = sub.order_log();
        let sizes: Vec<u32> = (0..=self.exp)
            .map(|j| self.scaled(j).sum(sub).order_log() - base)
            .collect();
        // sizes[j] - sizes[j+1] = number of cyclic factors of order >= p^{j+1}
        let mut out = Vec::new();
        for j in (0..self.exp as usize).rev() {
            let at_least = sizes[j] - sizes[j + 1];
            let above = if j + 1 < self.exp as usize { sizes[j + 1] - sizes[j + 2] } else { 0 };
            for _ in 0..(at_least - above) {
                out.push(j as u32 + 1);
            }
        }
        out
    }
}
