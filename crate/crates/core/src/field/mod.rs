//! Exact arithmetic in `F_p`, `F_q = F_{p^k}` and the extension fields
//! `F_{q^e}` where points live.
//!
//! An element is stored as a *code*: the integer `sum d_i p^i` of its digit
//! vector `(d_0, .., d_{k-1})` in the polynomial basis `1, t, .., t^{k-1}`,
//! where `t` is the class of `x` modulo the field's modulus. For `p = 2` the
//! code is the bit-packed digit vector, so addition is XOR.
//!
//! Every field `F_{p^k}` is built from the lexicographically least monic
//! irreducible polynomial of degree `k` over `F_p` (coefficients compared
//! from `x^{k-1}` down to `x^0`), which makes a field determined by its
//! cardinality. Contexts are cached and shared.

pub mod upoly;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Shared handle to an immutable field context.
pub type Field = Arc<FieldCtx>;

/// Largest field for which log/antilog tables are built.
const TABLE_LIMIT: u32 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

struct LogTables {
    log: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(Q-1)`, doubled so sums of logs need no reduction.
    exp: Vec<u32>,
    /// Zech logarithms `log(1 + g^i)`; empty for characteristic 2.
    zech: Vec<u32>,
}

pub struct FieldCtx {
    p: u32,
    k: u32,
    size: u32,
    modulus: Vec<u32>,
    radix: Vec<u32>,
    /// Full modulus as a bit mask, characteristic 2 only.
    modulus_bits: u64,
    tables: Option<LogTables>,
    embeddings: Mutex<HashMap<u32, Arc<Vec<u32>>>>,
}

/// A field element tagged with the cardinality of its field.
///
/// Fields of equal cardinality are identical here (canonical moduli), so the
/// tag is enough to detect mixing elements of different fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    code: u32,
    size: u32,
}

impl FieldElem {
    pub fn code(self) -> u32 {
        self.code
    }

    /// Cardinality of the owning field.
    pub fn field_size(self) -> u32 {
        self.size
    }

    pub fn is_zero(self) -> bool {
        self.code == 0
    }
}

/// Operations accepted by [`FieldCtx::field_arith`].
#[derive(Clone, Copy, Debug)]
pub enum ArithOp {
    Add(FieldElem),
    Sub(FieldElem),
    Mul(FieldElem),
    Neg,
    Inv,
    Pow(u64),
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), Field>> {
    static FIELDS: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
    FIELDS.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Returns the canonical context for `F_{p^k}`.
pub fn make_field(p: u32, k: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    let size = (p as u64).checked_pow(k).filter(|&s| s <= 1 << 31);
    let Some(size) = size else {
        return Err(Error::FieldTooLarge { p, k });
    };
    if let Some(f) = cache().lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        let prime = make_field(p, 1)?;
        least_irreducible(&prime, k)
    };
    let ctx = Arc::new(FieldCtx::build(p, k, size as u32, modulus));
    let mut guard = cache().lock().unwrap();
    Ok(guard.entry((p, k)).or_insert(ctx).clone())
}

fn least_irreducible(prime: &FieldCtx, k: u32) -> Vec<u32> {
    let p = prime.p();
    let count = (p as u64).pow(k);
    for low in 0..count {
        let mut coeffs: Vec<u32> = Vec::with_capacity(k as usize + 1);
        let mut v = low;
        for _ in 0..k {
            coeffs.push((v % p as u64) as u32);
            v /= p as u64;
        }
        if coeffs[0] == 0 {
            continue;
        }
        coeffs.push(1);
        if upoly::is_irreducible(prime, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldCtx {
    fn build(p: u32, k: u32, size: u32, modulus: Vec<u32>) -> Self {
        let radix = (0..=k).map(|i| p.pow(i.min(31))).collect::<Vec<_>>();
        let modulus_bits = if p == 2 {
            modulus
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | ((c as u64) << i))
        } else {
            0
        };
        let mut ctx = FieldCtx {
            p,
            k,
            size,
            modulus,
            radix,
            modulus_bits,
            tables: None,
            embeddings: Mutex::new(HashMap::new()),
        };
        if k > 1 && size <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        ctx
    }

    fn build_tables(&self) -> LogTables {
        let order = self.size - 1;
        let factors = upoly::prime_factors(order as u64);
        let g = (1..self.size)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&l| self.pow_slow(g, (order as u64) / l) != 1)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![NO_LOG; self.size as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x;
            log[x as usize] = i;
            x = self.mul_slow(x, g);
        }
        for i in order..2 * order {
            exp[i as usize] = exp[(i - order) as usize];
        }
        let zech = if self.p == 2 {
            Vec::new()
        } else {
            (0..order)
                .map(|i| {
                    let s = self.add_digits(exp[i as usize], 1);
                    if s == 0 {
                        NO_LOG
                    } else {
                        log[s as usize]
                    }
                })
                .collect()
        };
        LogTables { log, exp, zech }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Monic modulus, lowest coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `p^i`, the code of `t^i`.
    pub fn radix(&self, i: u32) -> u32 {
        self.radix[i as usize]
    }

    pub fn elem(&self, code: u32) -> FieldElem {
        assert!(code < self.size, "code {code} outside F_{}", self.size);
        FieldElem {
            code,
            size: self.size,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElem {
        self.elem(1)
    }

    /// Digit vector `(d_0, .., d_{k-1})` of a code.
    pub fn digits(&self, mut code: u32) -> Vec<u32> {
        (0..self.k)
            .map(|_| {
                let d = code % self.p;
                code /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<u32> {
        if digits.len() > self.k as usize || digits.iter().any(|&d| d >= self.p) {
            return Err(Error::Invalid(format!(
                "digit vector {digits:?} is not an element of F_{}",
                self.size
            )));
        }
        Ok(digits
            .iter()
            .rev()
            .fold(0u32, |acc, &d| acc * self.p + d))
    }

    /// All elements, ascending by code (lexicographic on digit vectors read
    /// from the top digit).
    pub fn enumerate(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.size).map(move |c| self.elem(c))
    }

    fn check(&self, a: FieldElem) -> Result<()> {
        if a.size != self.size {
            return Err(Error::FieldMismatch {
                expected: self.size as u64,
                found: a.size as u64,
            });
        }
        Ok(())
    }

    /// Checked arithmetic on tagged elements.
    pub fn field_arith(&self, a: FieldElem, op: ArithOp) -> Result<FieldElem> {
        self.check(a)?;
        let code = match op {
            ArithOp::Add(b) => {
                self.check(b)?;
                self.add(a.code, b.code)
            }
            ArithOp::Sub(b) => {
                self.check(b)?;
                self.sub(a.code, b.code)
            }
            ArithOp::Mul(b) => {
                self.check(b)?;
                self.mul(a.code, b.code)
            }
            ArithOp::Neg => self.neg(a.code),
            ArithOp::Inv => {
                if a.code == 0 {
                    return Err(Error::DivisionByZero);
                }
                self.inv(a.code)
            }
            ArithOp::Pow(e) => self.pow(a.code, e),
        };
        Ok(self.elem(code))
    }

    // ---- code-level arithmetic (unchecked, used in hot loops) ----

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.k == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        match &self.tables {
            Some(t) => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let order = self.size - 1;
                let (la, lb) = (t.log[a as usize], t.log[b as usize]);
                let diff = if lb >= la { lb - la } else { lb + order - la };
                let z = t.zech[diff as usize];
                if z == NO_LOG {
                    0
                } else {
                    t.exp[(la + z) as usize]
                }
            }
            None => self.add_digits(a, b),
        }
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0u32;
        for i in 0..self.k {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * self.radix[i as usize];
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 || a == 0 {
            return a;
        }
        if self.k == 1 {
            return self.p - a;
        }
        let mut x = a;
        let mut out = 0u32;
        for i in 0..self.k {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * self.radix[i as usize];
            x /= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        if self.p == 2 {
            let (a, b) = (a as u64, b as u64);
            let mut prod = 0u64;
            for i in 0..self.k {
                if (b >> i) & 1 == 1 {
                    prod ^= a << i;
                }
            }
            let k = self.k;
            for i in (k..2 * k - 1).rev() {
                if (prod >> i) & 1 == 1 {
                    prod ^= self.modulus_bits << (i - k);
                }
            }
            return prod as u32;
        }
        let da = self.digits(a);
        let db = self.digits(b);
        let k = self.k as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = prod[i] % p;
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let m = self.modulus[j] as u64;
                prod[i - k + j] = (prod[i - k + j] + (p - c) * m) % p;
            }
        }
        prod[..k]
            .iter()
            .rev()
            .fold(0u32, |acc, &d| acc * self.p + d as u32)
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            e >>= 1;
            base = self.mul_slow(base, base);
        }
        acc
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let order = (self.size - 1) as u128;
                let l = (t.log[a as usize] as u128 * e as u128) % order;
                t.exp[l as usize]
            }
            None => {
                let e = e % (self.size as u64 - 1);
                if e == 0 {
                    1
                } else {
                    self.pow_slow(a, e)
                }
            }
        }
    }

    /// Multiplicative inverse of a nonzero code.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        match &self.tables {
            Some(t) => {
                let order = self.size - 1;
                let l = t.log[a as usize];
                t.exp[((order - l) % order) as usize]
            }
            None => self.pow_slow(a, self.size as u64 - 2),
        }
    }

    /// Multiplication by an integer (reduced mod p).
    pub fn mul_int(&self, a: u32, c: u64) -> u32 {
        self.mul(a, (c % self.p as u64) as u32)
    }

    // ---- subfields, Frobenius, embeddings ----

    /// `a^{p^j}`: the `j`-th power of the absolute Frobenius.
    pub fn frob_pow(&self, a: u32, j: u32) -> u32 {
        let mut x = a;
        let j = j % self.k;
        if j == 0 {
            return a;
        }
        match &self.tables {
            Some(t) if a != 0 => {
                let order = (self.size - 1) as u64;
                let mut l = t.log[a as usize] as u64;
                for _ in 0..j {
                    l = (l * self.p as u64) % order;
                }
                t.exp[l as usize]
            }
            _ => {
                for _ in 0..j {
                    x = self.pow(x, self.p as u64);
                }
                x
            }
        }
    }

    /// `a^{|over|}` for a subfield `over` of this field.
    pub fn frobenius(&self, a: FieldElem, over: &FieldCtx) -> Result<FieldElem> {
        self.check(a)?;
        if over.p != self.p || !self.k.is_multiple_of(over.k) {
            return Err(Error::NotSubfield {
                p: self.p,
                sub: over.k,
                sup: self.k,
            });
        }
        Ok(self.elem(self.frob_pow(a.code, over.k)))
    }

    /// Code table of the embedding `sub -> self`, indexed by `sub` codes.
    ///
    /// The image of `t` is the least root (by code) of `sub`'s modulus.
    pub fn embedding_from(&self, sub: &FieldCtx) -> Result<Arc<Vec<u32>>> {
        if sub.p != self.p || !self.k.is_multiple_of(sub.k) {
            return Err(Error::NotSubfield {
                p: self.p,
                sub: sub.k,
                sup: self.k,
            });
        }
        if let Some(t) = self.embeddings.lock().unwrap().get(&sub.k) {
            return Ok(t.clone());
        }
        let table: Vec<u32> = if sub.k == 1 {
            (0..sub.size).collect()
        } else {
            let root = upoly::roots(self, &sub.modulus)
                .and_then(|r| r.first().copied())
                .expect("a field contains the roots of its subfields' moduli");
            let powers: Vec<u32> = (0..sub.k).map(|i| self.pow(root, i as u64)).collect();
            (0..sub.size)
                .map(|c| {
                    sub.digits(c)
                        .iter()
                        .zip(&powers)
                        .fold(0, |acc, (&d, &w)| self.add(acc, self.mul_int(w, d as u64)))
                })
                .collect()
        };
        let table = Arc::new(table);
        self.embeddings
            .lock()
            .unwrap()
            .insert(sub.k, table.clone());
        Ok(table)
    }

    /// Tagged embedding of `a` (an element of a subfield) into this field.
    pub fn embed(&self, a: FieldElem) -> Result<FieldElem> {
        let sub_k = exact_log(a.size as u64, self.p as u64).ok_or(Error::FieldMismatch {
            expected: self.size as u64,
            found: a.size as u64,
        })?;
        let sub = make_field(self.p, sub_k)?;
        let table = self.embedding_from(&sub)?;
        Ok(self.elem(table[a.code as usize]))
    }

    /// The extension of degree `e` of this field, with its embedding.
    pub fn extension(self: &Arc<Self>, e: u32) -> Result<Extension> {
        if e == 0 {
            return Err(Error::ZeroDegree);
        }
        let big = make_field(self.p, self.k * e)?;
        let embed = big.embedding_from(self)?;
        Ok(Extension {
            base: self.clone(),
            e,
            field: big,
            embed,
        })
    }

    /// Formats a code as an integer when it lies in the prime field,
    /// otherwise as a digit tuple `[d0,d1,..]`.
    pub fn format_code(&self, code: u32) -> String {
        if code < self.p {
            code.to_string()
        } else {
            let d = self.digits(code);
            let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} (modulus {:?})", self.p, self.k, self.modulus)
    }
}

fn exact_log(mut n: u64, base: u64) -> Option<u32> {
    let mut k = 0;
    while n > 1 {
        if !n.is_multiple_of(base) {
            return None;
        }
        n /= base;
        k += 1;
    }
    (k > 0).then_some(k)
}

/// `F_{q^e}` together with the embedding of its base field `F_q`.
#[derive(Clone)]
pub struct Extension {
    pub base: Field,
    pub e: u32,
    pub field: Field,
    embed: Arc<Vec<u32>>,
}

impl Extension {
    /// Image of a base-field code.
    #[inline]
    pub fn embed(&self, code: u32) -> u32 {
        self.embed[code as usize]
    }

    /// Frobenius relative to the base: `a^q`.
    #[inline]
    pub fn frob(&self, a: u32) -> u32 {
        self.field.frob_pow(a, self.base.k())
    }

    /// Preimage of an element of the embedded base field.
    pub fn restrict(&self, a: u32) -> Option<u32> {
        self.embed.iter().position(|&x| x == a).map(|i| i as u32)
    }

    /// Trace to the base field, `sum_{i<e} a^{q^i}`, as a base-field code.
    pub fn trace(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.e {
            acc = self.field.add(acc, x);
            x = self.frob(x);
        }
        self.restrict(acc).expect("trace lies in the base field")
    }
}

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Extension(F_{}^{} / e={})", self.base.p(), self.base.k(), self.e)
    }
}
