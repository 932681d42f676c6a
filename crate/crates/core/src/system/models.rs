use std::collections::BTreeSet;
use std::path::Path;

use super::TranspositionSystem;
use crate::error::{Error, Result};
use crate::exact::is_prime;
use crate::io;

const MAX_MODEL_SIZE: usize = 4096;

fn model_err(spec: &str, reason: impl Into<String>) -> Error {
    Error::InvalidModel { spec: spec.to_string(), reason: reason.into() }
}

fn odd_prime(spec: &str, text: &str) -> Result<u64> {
    let p: u64 = text.trim().parse().map_err(|_| model_err(spec, format!("`{text}` is not an integer")))?;
    if p < 3 || !is_prime(p) {
        return Err(model_err(spec, format!("{p} is not an odd prime")));
    }
    Ok(p)
}

/// Parses `dihedral:<p>`, `frobenius:<p>,<d>`, `burnside23` or `file:<path>`.
pub fn construct_model(spec: &str) -> Result<TranspositionSystem> {
    let spec = spec.trim();
    if spec == "burnside23" {
        return burnside23();
    }
    let (kind, rest) = spec.split_once(':').ok_or_else(|| model_err(spec, "unknown model"))?;
    match kind {
        "dihedral" => dihedral(odd_prime(spec, rest)?),
        "frobenius" => {
            let (p, d) = rest.split_once(',').ok_or_else(|| model_err(spec, "expected frobenius:<p>,<d>"))?;
            let p = odd_prime(spec, p)?;
            let d: u32 = d.trim().parse().map_err(|_| model_err(spec, "rank must be a positive integer"))?;
            if d == 0 {
                return Err(model_err(spec, "rank must be a positive integer"));
            }
            frobenius(p, d)
        }
        "file" => io::read_system(Path::new(rest)),
        _ => Err(model_err(spec, "unknown model")),
    }
}

/// Reflections `r^i s` of the dihedral group of order `2p`; `conj[i][j] = 2j - i mod p`.
pub fn dihedral(p: u64) -> Result<TranspositionSystem> {
    if p < 3 || !is_prime(p) {
        return Err(model_err(&format!("dihedral:{p}"), "p must be an odd prime"));
    }
    let n = p as usize;
    let conj = (0..n).map(|i| (0..n).map(|j| (2 * j + n - i) % n).collect()).collect();
    let labels = (0..n).map(|i| format!("r^{i}s")).collect();
    TranspositionSystem::from_table(p, labels, conj)
}

/// Involutions `v t` of `Z_p^d ⋊ <t>` with `t` inverting; `conj[v][w] = 2w - v`.
///
/// Vectors are indexed little-endian: `(v_1, .., v_d) -> v_1 + p v_2 + ..`.
pub fn frobenius(p: u64, d: u32) -> Result<TranspositionSystem> {
    let spec = format!("frobenius:{p},{d}");
    if p < 3 || !is_prime(p) {
        return Err(model_err(&spec, "p must be an odd prime"));
    }
    let n = (p as usize)
        .checked_pow(d)
        .filter(|&n| n <= MAX_MODEL_SIZE)
        .ok_or_else(|| model_err(&spec, format!("more than {MAX_MODEL_SIZE} transpositions")))?;
    let p = p as usize;
    let digits = |mut x: usize| -> Vec<usize> {
        (0..d).map(|_| {
            let r = x % p;
            x /= p;
            r
        }).collect()
    };
    let index = |v: &[usize]| v.iter().rev().fold(0, |acc, &c| acc * p + c);
    let conj = (0..n)
        .map(|v| {
            let dv = digits(v);
            (0..n)
                .map(|w| {
                    let dw = digits(w);
                    let img: Vec<usize> = dv.iter().zip(&dw).map(|(&a, &b)| (2 * b + p - a) % p).collect();
                    index(&img)
                })
                .collect()
        })
        .collect();
    let labels = (0..n)
        .map(|v| {
            let parts: Vec<String> = digits(v).iter().map(|c| c.to_string()).collect();
            format!("({})t", parts.join(","))
        })
        .collect();
    TranspositionSystem::from_table(p as u64, labels, conj)
}

/// Element `(a, b, c)` of the Heisenberg group over `Z_3`, a model of `B(2, 3)`:
/// `(a, b, c)(a', b', c') = (a + a', b + b', c + c' + a b')`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Heis([u8; 3]);

impl Heis {
    const ID: Heis = Heis([0, 0, 0]);

    fn mul(self, o: Heis) -> Heis {
        let [a, b, c] = self.0;
        let [x, y, z] = o.0;
        Heis([(a + x) % 3, (b + y) % 3, (c + z + a * y) % 3])
    }

    fn all() -> impl Iterator<Item = Heis> {
        (0..27u8).map(|k| Heis([k / 9, (k / 3) % 3, k % 3]))
    }

    fn inverse(self) -> Heis {
        Heis::all().find(|&h| self.mul(h) == Heis::ID).expect("group element has an inverse")
    }
}

/// Candidate automorphism `(a, b, c) -> (-a, -b, u c + v a b)`.
fn candidate_tau(u: u8, v: u8) -> impl Fn(Heis) -> Heis {
    move |Heis([a, b, c])| Heis([(3 - a) % 3, (3 - b) % 3, (u * c + v * a * b) % 3])
}

/// Searches the nine central corrections for the involutory automorphism of
/// `B(2, 3)` inverting both generators and returns its image table.
fn inverting_automorphism() -> Result<Vec<(Heis, Heis)>> {
    let x = Heis([1, 0, 0]);
    let y = Heis([0, 1, 0]);
    let mut found = Vec::new();
    for u in 0..3 {
        for v in 0..3 {
            let tau = candidate_tau(u, v);
            let hom = Heis::all().all(|g| Heis::all().all(|h| tau(g.mul(h)) == tau(g).mul(tau(h))));
            let inv = Heis::all().all(|g| tau(tau(g)) == g);
            let inverts = tau(x) == x.inverse() && tau(y) == y.inverse();
            if hom && inv && inverts {
                found.push(Heis::all().map(|g| (g, tau(g))).collect::<Vec<_>>());
            }
        }
    }
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        k => Err(model_err("burnside23", format!("expected a unique inverting automorphism, found {k}"))),
    }
}

/// `T = t^G` in `G = B(2, 3) ⋊ <t>`, where `t` inverts both free generators.
///
/// Elements of `G` are pairs `(g, e)` standing for `g t^e`, with `t g t = tau(g)`.
pub fn burnside23() -> Result<TranspositionSystem> {
    let table = inverting_automorphism()?;
    let tau = |g: Heis| table.iter().find(|(h, _)| *h == g).map(|(_, t)| *t).unwrap();
    type Elt = (Heis, u8);
    let mul = |(g, e): Elt, (h, f): Elt| -> Elt {
        let h = if e == 1 { tau(h) } else { h };
        (g.mul(h), (e + f) % 2)
    };
    // (g t)^-1 = t g^-1 = tau(g^-1) t
    let inv = |(g, e): Elt| -> Elt {
        if e == 0 {
            (g.inverse(), 0)
        } else {
            (tau(g.inverse()), 1)
        }
    };
    let group: Vec<Elt> = Heis::all().flat_map(|g| [(g, 0), (g, 1)]).collect();
    let t: Elt = (Heis::ID, 1);
    let class: BTreeSet<Elt> = group.iter().map(|&k| mul(mul(inv(k), t), k)).collect();
    let class: Vec<Elt> = class.into_iter().collect();
    let index = |x: Elt| class.iter().position(|&c| c == x).expect("conjugate stays in the class");
    let conj = class
        .iter()
        .map(|&x| class.iter().map(|&a| index(mul(mul(inv(a), x), a))).collect())
        .collect();
    let labels = class
        .iter()
        .map(|(Heis([a, b, c]), _)| format!("({a},{b},{c})t"))
        .collect();
    TranspositionSystem::from_table(3, labels, conj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_strings() {
        assert_eq!(construct_model("dihedral:5").unwrap().n(), 5);
        assert_eq!(construct_model("frobenius:5,2").unwrap().n(), 25);
        assert_eq!(construct_model("frobenius:3,2").unwrap().n(), 9);
        for bad in ["dihedral:4", "dihedral:2", "dihedral:x", "frobenius:5", "frobenius:5,0", "cyclic:5", "burnside"] {
            assert!(construct_model(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn frobenius_indexing() {
        let f = frobenius(5, 2).unwrap();
        assert_eq!(f.labels()[1], "(1,0)t");
        assert_eq!(f.labels()[5], "(0,1)t");
        // (1,0)^(0,1) = 2(0,1) - (1,0) = (4,2) -> 4 + 5*2
        assert_eq!(f.conj(1, 5), 14);
        assert!(f.validate().passed());
        assert!(frobenius(3, 2).unwrap().validate().passed());
    }

    #[test]
    fn heisenberg_is_a_group_of_exponent_three() {
        assert_eq!(Heis::all().count(), 27);
        for g in Heis::all() {
            assert_eq!(g.mul(g).mul(g), Heis::ID);
            for h in Heis::all() {
                for k in Heis::all() {
                    assert_eq!(g.mul(h).mul(k), g.mul(h.mul(k)));
                }
            }
        }
        // Non-abelian: x y != y x.
        let x = Heis([1, 0, 0]);
        let y = Heis([0, 1, 0]);
        assert_ne!(x.mul(y), y.mul(x));
    }

    #[test]
    fn inverting_automorphism_fixes_the_commutator() {
        let table = inverting_automorphism().unwrap();
        let z = Heis([0, 0, 1]);
        assert!(table.contains(&(z, z)));
    }

    #[test]
    fn burnside23_class_of_t() {
        let sys = burnside23().unwrap();
        // |t^G| = |G| / |C_G(t)| = 54 / 6: the centraliser holds t and the centre <z>.
        assert_eq!(sys.n(), 9);
        assert_eq!(sys.labels()[0], "(0,0,0)t");
        assert!(sys.validate().passed());
        assert_eq!(sys.blocks(0).unwrap().blocks.len(), 4);
    }
}
