use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

pub const MAXM: usize = 12;

type Coords = [u16; MAXM];

/// Finite field F_{p^m} presented as F_p[X]/(f) with f primitive, so X generates the unit group.
pub struct FieldData {
    pub p: u32,
    pub m: usize,
    pub q: u64,
    modulus: [u32; MAXM],
    qm1_primes: Vec<(u64, u32)>,
    gen: Coords,
}

impl fmt::Debug for FieldData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.m)
    }
}

impl PartialEq for FieldData {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.m == o.m
    }
}
impl Eq for FieldData {}
impl Hash for FieldData {
    fn hash<H: Hasher>(&self, h: &mut H) {
        (self.p, self.m).hash(h)
    }
}

fn memo() -> &'static Mutex<HashMap<(u32, usize), &'static FieldData>> {
    static MEMO: OnceLock<Mutex<HashMap<(u32, usize), &'static FieldData>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The field with p^m elements. Interned: repeated calls return the same reference.
pub fn field(p: u32, m: usize) -> Result<&'static FieldData> {
    if p <= 3 || !is_prime(p as u64) {
        return Err(Error::Input(format!("residue characteristic {p} must be a prime > 3")));
    }
    if m == 0 || m > MAXM {
        return Err(Error::Input(format!("tower degree {m} out of range 1..={MAXM}")));
    }
    let q = (p as u128).pow(m as u32);
    if q >= 1u128 << 62 {
        return Err(Error::Input(format!("field {p}^{m} too large")));
    }
    if let Some(f) = memo().lock().unwrap().get(&(p, m)) {
        return Ok(*f);
    }
    let fd = build(p, m, q as u64);
    let mut guard = memo().lock().unwrap();
    let entry = guard.entry((p, m)).or_insert_with(|| Box::leak(Box::new(fd)));
    Ok(*entry)
}

fn build(p: u32, m: usize, q: u64) -> FieldData {
    let qm1_primes = factor(q - 1);
    let mut fd = FieldData { p, m, q, modulus: [0; MAXM], qm1_primes, gen: [0; MAXM] };
    if m == 1 {
        for g in 2..p {
            let mut c = [0u16; MAXM];
            c[0] = g as u16;
            if is_generator(&fd, &c) {
                fd.gen = c;
                break;
            }
        }
        return fd;
    }
    let mut x = [0u16; MAXM];
    x[1] = 1;
    let mut low = vec![0u32; m];
    loop {
        let mut i = 0;
        loop {
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            i += 1;
        }
        if low[0] == 0 {
            continue;
        }
        for (k, v) in low.iter().enumerate() {
            fd.modulus[k] = *v;
        }
        if is_generator(&fd, &x) {
            fd.gen = x;
            return fd;
        }
    }
}

fn is_generator(fd: &FieldData, a: &Coords) -> bool {
    let one = raw_one();
    if raw_pow(fd, a, fd.q - 1) != one {
        return false;
    }
    fd.qm1_primes.iter().all(|(l, _)| raw_pow(fd, a, (fd.q - 1) / l) != one)
}

fn raw_one() -> Coords {
    let mut c = [0u16; MAXM];
    c[0] = 1;
    c
}

fn raw_mul(fd: &FieldData, a: &Coords, b: &Coords) -> Coords {
    let m = fd.m;
    let p = fd.p as u64;
    let mut out = [0u16; MAXM];
    if m == 1 {
        out[0] = ((a[0] as u64 * b[0] as u64) % p) as u16;
        return out;
    }
    let mut prod = [0u64; 2 * MAXM];
    for i in 0..m {
        if a[i] == 0 {
            continue;
        }
        for j in 0..m {
            prod[i + j] += a[i] as u64 * b[j] as u64;
        }
    }
    for k in (m..2 * m - 1).rev() {
        let c = prod[k] % p;
        prod[k] = 0;
        if c == 0 {
            continue;
        }
        for i in 0..m {
            prod[k - m + i] += c * ((p - fd.modulus[i] as u64) % p);
        }
    }
    for i in 0..m {
        out[i] = (prod[i] % p) as u16;
    }
    out
}

fn raw_pow(fd: &FieldData, a: &Coords, mut e: u64) -> Coords {
    let mut base = *a;
    let mut acc = raw_one();
    while e > 0 {
        if e & 1 == 1 {
            acc = raw_mul(fd, &acc, &base);
        }
        base = raw_mul(fd, &base, &base);
        e >>= 1;
    }
    acc
}

/// Element of a finite field, stored as coordinates in the power basis of X.
#[derive(Clone, Copy)]
pub struct Fq {
    f: &'static FieldData,
    c: Coords,
}

impl PartialEq for Fq {
    fn eq(&self, o: &Self) -> bool {
        std::ptr::eq(self.f, o.f) && self.c == o.c
    }
}
impl Eq for Fq {}

impl Hash for Fq {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.c.hash(h)
    }
}

impl PartialOrd for Fq {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Fq {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.index().cmp(&o.index())
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

impl FieldData {
    pub fn zero(&'static self) -> Fq {
        Fq { f: self, c: [0; MAXM] }
    }
    pub fn one(&'static self) -> Fq {
        Fq { f: self, c: raw_one() }
    }
    pub fn from_int(&'static self, n: i64) -> Fq {
        let mut c = [0u16; MAXM];
        c[0] = n.rem_euclid(self.p as i64) as u16;
        Fq { f: self, c }
    }
    pub fn gen(&'static self) -> Fq {
        Fq { f: self, c: self.gen }
    }
    pub fn from_coords(&'static self, coords: &[u32]) -> Fq {
        let mut c = [0u16; MAXM];
        for (i, v) in coords.iter().enumerate().take(self.m) {
            c[i] = (v % self.p) as u16;
        }
        Fq { f: self, c }
    }
    pub fn from_index(&'static self, mut idx: u64) -> Fq {
        let mut c = [0u16; MAXM];
        for ci in c.iter_mut().take(self.m) {
            *ci = (idx % self.p as u64) as u16;
            idx /= self.p as u64;
        }
        Fq { f: self, c }
    }
    /// Monic modulus coefficients, low to high, including the leading 1.
    pub fn modulus(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.modulus[..self.m].to_vec();
        v.push(1);
        v
    }
    /// Primitive n-th root of unity g^((q-1)/n), if n divides q - 1.
    pub fn zeta(&'static self, n: u64) -> Option<Fq> {
        if n == 0 || !(self.q - 1).is_multiple_of(n) {
            return None;
        }
        Some(self.gen().pow((self.q - 1) / n))
    }
    pub fn elements(&'static self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(move |i| self.from_index(i))
    }
}

impl Fq {
    pub fn field(&self) -> &'static FieldData {
        self.f
    }
    pub fn coords(&self) -> &[u16] {
        &self.c[..self.f.m]
    }
    pub fn index(&self) -> u64 {
        let p = self.f.p as u64;
        self.c[..self.f.m].iter().rev().fold(0u64, |acc, &d| acc * p + d as u64)
    }
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&d| d == 0)
    }
    pub fn is_one(&self) -> bool {
        self.c == raw_one()
    }
    pub fn in_prime_field(&self) -> bool {
        self.c[1..].iter().all(|&d| d == 0)
    }
    pub fn zero(&self) -> Fq {
        self.f.zero()
    }
    pub fn one(&self) -> Fq {
        self.f.one()
    }
    pub fn add(&self, o: &Fq) -> Fq {
        debug_assert!(std::ptr::eq(self.f, o.f));
        let p = self.f.p;
        let mut c = [0u16; MAXM];
        for i in 0..self.f.m {
            c[i] = ((self.c[i] as u32 + o.c[i] as u32) % p) as u16;
        }
        Fq { f: self.f, c }
    }
    pub fn neg(&self) -> Fq {
        let p = self.f.p;
        let mut c = [0u16; MAXM];
        for i in 0..self.f.m {
            c[i] = ((p - self.c[i] as u32) % p) as u16;
        }
        Fq { f: self.f, c }
    }
    pub fn sub(&self, o: &Fq) -> Fq {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Fq) -> Fq {
        debug_assert!(std::ptr::eq(self.f, o.f));
        Fq { f: self.f, c: raw_mul(self.f, &self.c, &o.c) }
    }
    pub fn scale(&self, n: i64) -> Fq {
        self.mul(&self.f.from_int(n))
    }
    pub fn pow(&self, e: u64) -> Fq {
        Fq { f: self.f, c: raw_pow(self.f, &self.c, e) }
    }
    pub fn powi(&self, e: i64) -> Fq {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inv().expect("inverse of zero").pow(e.unsigned_abs())
        }
    }
    pub fn inv(&self) -> Option<Fq> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.f.q - 2))
        }
    }
    pub fn div(&self, o: &Fq) -> Option<Fq> {
        o.inv().map(|i| self.mul(&i))
    }

    /// Discrete logarithm to the base of the field generator.
    pub fn dlog(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let fd = self.f;
        let n = fd.q - 1;
        let g = fd.gen();
        let mut residues = Vec::new();
        for &(l, k) in &fd.qm1_primes {
            let lk = l.pow(k);
            let gamma = g.pow(n / l);
            let mut x = 0u64;
            let mut lpow = 1u64;
            for _ in 0..k {
                let shifted = self.mul(&g.pow(x).inv().unwrap());
                let h = shifted.pow(n / (lpow * l));
                let d = bsgs(&gamma, &h, l).expect("discrete log in subgroup");
                x += d * lpow;
                lpow *= l;
            }
            residues.push((x % lk, lk));
        }
        Some(crt(&residues))
    }

    /// Canonical n-th root: the one g^j with least j, if any.
    pub fn nth_root(&self, n: u64) -> Option<Fq> {
        if self.is_zero() {
            return Some(*self);
        }
        let qm1 = self.f.q - 1;
        let j = self.dlog()?;
        let d = num_integer::gcd(n, qm1);
        if j % d != 0 {
            return None;
        }
        let modulus = qm1 / d;
        let nd = (n / d) % modulus;
        let jd = (j / d) % modulus;
        let k = if modulus == 1 { 0 } else { (jd as u128 * mod_inv(nd, modulus) as u128 % modulus as u128) as u64 };
        Some(self.f.gen().pow(k))
    }

    pub fn is_nth_power(&self, n: u64) -> bool {
        if self.is_zero() {
            return true;
        }
        let d = num_integer::gcd(n, self.f.q - 1);
        self.pow((self.f.q - 1) / d).is_one()
    }

    /// All n-th roots, sorted.
    pub fn nth_roots(&self, n: u64) -> Vec<Fq> {
        let Some(r) = self.nth_root(n) else { return vec![] };
        if self.is_zero() {
            return vec![r];
        }
        let d = num_integer::gcd(n, self.f.q - 1);
        let z = self.f.zeta(d).unwrap();
        let mut out: Vec<Fq> = (0..d).map(|i| r.mul(&z.pow(i))).collect();
        out.sort();
        out
    }

    /// Literal form: a prime-field integer, or g^j.
    pub fn to_literal(&self) -> String {
        if self.in_prime_field() {
            format!("{}", self.c[0])
        } else {
            format!("g^{}", self.dlog().unwrap())
        }
    }
}

fn bsgs(base: &Fq, target: &Fq, order: u64) -> Option<u64> {
    let s = (order as f64).sqrt().ceil() as u64 + 1;
    let mut table = HashMap::new();
    let mut cur = base.one();
    for j in 0..s {
        table.entry(cur.c).or_insert(j);
        cur = cur.mul(base);
    }
    let step = base.pow((order - s % order) % order);
    let mut y = *target;
    for i in 0..=s {
        if let Some(&j) = table.get(&y.c) {
            return Some((i * s + j) % order);
        }
        y = y.mul(&step);
    }
    None
}

pub fn mod_inv(a: u64, m: u64) -> u64 {
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (m as i128, (a % m) as i128);
    while nr != 0 {
        let qt = r / nr;
        (t, nt) = (nt, t - qt * nt);
        (r, nr) = (nr, r - qt * nr);
    }
    t.rem_euclid(m as i128) as u64
}

fn crt(res: &[(u64, u64)]) -> u64 {
    let mut x: u128 = 0;
    let mut m: u128 = 1;
    for &(r, mi) in res {
        let mi = mi as u128;
        let inv = mod_inv((m % mi) as u64, mi as u64) as u128;
        let diff = ((r as u128 + mi) - (x % mi)) % mi;
        let t = diff * inv % mi;
        x += m * t;
        m *= mi;
    }
    x as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_has_full_order() {
        for &(p, m) in &[(13u32, 1usize), (13, 2), (13, 3), (37, 1), (7, 4)] {
            let f = field(p, m).unwrap();
            let g = f.gen();
            assert!(g.pow(f.q - 1).is_one());
            for (l, _) in factor(f.q - 1) {
                assert!(!g.pow((f.q - 1) / l).is_one());
            }
        }
    }

    #[test]
    fn dlog_inverts_pow() {
        let f = field(13, 3).unwrap();
        for j in [0u64, 1, 5, 100, 2000, f.q - 2] {
            assert_eq!(f.gen().pow(j).dlog(), Some(j));
        }
    }

    #[test]
    fn roots_of_unity_mod_13() {
        let f = field(13, 1).unwrap();
        let z3 = f.zeta(3).unwrap();
        assert!(z3.pow(3).is_one() && !z3.is_one());
        assert!(f.zeta(4).is_some());
        assert!(f.from_int(27).nth_root(2).is_some());
        assert!(f.zeta(5).is_none());
    }

    #[test]
    fn nth_roots_are_roots() {
        let f = field(13, 2).unwrap();
        for a in f.elements().skip(1).step_by(7) {
            for n in [2u64, 3, 4, 6] {
                for r in a.nth_roots(n) {
                    assert_eq!(r.pow(n), a);
                }
                assert_eq!(a.is_nth_power(n), !a.nth_roots(n).is_empty());
            }
        }
    }

    #[test]
    fn field_is_interned() {
        assert!(std::ptr::eq(field(13, 2).unwrap(), field(13, 2).unwrap()));
    }
}
