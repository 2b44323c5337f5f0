//! Closed-form Schur elements for the spetsial Hecke algebras, as Laurent
//! polynomials in x.

use crate::exactnum::{CycNum, LPoly};

use super::types::{conjugate, DihLabel, HeckeType, IrrLabel};

fn qint(h: i64) -> LPoly {
    // [h]_x = (x^h - 1)/(x - 1), valid for any integer h
    if h >= 0 {
        LPoly::from_coeffs(0, vec![CycNum::one(); h as usize])
    } else {
        // [−k]_x = −x^{−k}[k]_x
        let k = (-h) as usize;
        LPoly::from_coeffs(-(k as i64), vec![CycNum::from_int(-1); k])
    }
}

fn monomial_inverse(c: &CycNum, k: i64) -> LPoly {
    LPoly::monomial(c.inv().expect("nonzero"), -k)
}

/// Parameter Q_k as a Laurent monomial: ζ_e^{k+1} for k < e-1, x for k = e-1.
fn ak_param(e: u32, k: usize) -> (CycNum, i64) {
    if k + 1 == e as usize {
        (CycNum::one(), 1)
    } else {
        (CycNum::zeta(e, k as i64 + 1), 0)
    }
}

fn hook_ij(li: &[usize], lj_conj: &[usize], a: usize, b: usize) -> i64 {
    let row = li.get(a).copied().unwrap_or(0) as i64;
    let col = lj_conj.get(b).copied().unwrap_or(0) as i64;
    row - (b as i64 + 1) + col - (a as i64 + 1) + 1
}

fn ak_schur(e: u32, mp: &[Vec<usize>]) -> LPoly {
    let e_us = e as usize;
    let n: usize = mp.iter().map(|p| p.iter().sum::<usize>()).sum();
    let params: Vec<LPoly> = (0..e_us)
        .map(|k| {
            let (c, d) = ak_param(e, k);
            LPoly::monomial(c, d)
        })
        .collect();
    let mut u: Vec<usize> = mp.iter().flatten().copied().collect();
    u.sort_unstable_by(|a, b| b.cmp(a));
    let nu: i64 = u.iter().enumerate().map(|(r, &x)| (r * x) as i64).sum();
    // Π Q = ζ^{1+...+(e-1)} x
    let (mut pc, mut pd) = (CycNum::one(), 0i64);
    for k in 0..e_us {
        let (c, d) = ak_param(e, k);
        pc = &pc * &c;
        pd += d;
    }
    let sign = if (n * (e_us - 1)).is_multiple_of(2) { 1 } else { -1 };
    let mut val = LPoly::monomial(CycNum::from_int(sign), -nu);
    val = &val * &monomial_inverse(&pc.pow(n as u64), pd * n as i64);
    let conj: Vec<Vec<usize>> = mp.iter().map(|p| conjugate(p)).collect();
    for i in 0..e_us {
        for (a, &row) in mp[i].iter().enumerate() {
            for b in 0..row {
                val = &val * &params[i];
                val = &val * &qint(hook_ij(&mp[i], &conj[i], a, b));
                for j in 0..e_us {
                    if j != i {
                        let h = hook_ij(&mp[i], &conj[j], a, b);
                        let t = &(&LPoly::monomial(CycNum::one(), h) * &params[i]) - &params[j];
                        val = &val * &t;
                    }
                }
            }
        }
    }
    val
}

fn cyclic_schur(e: u32, j: u32) -> LPoly {
    let u = |k: u32| -> LPoly {
        if k == e {
            LPoly::x()
        } else {
            LPoly::constant(CycNum::zeta(e, k as i64))
        }
    };
    let uj = u(j);
    let mut val = LPoly::one();
    for i in 1..=e {
        if i != j {
            let num = &uj - &u(i);
            let den = if i == e { monomial_inverse(&CycNum::from_int(-1), 1) } else { monomial_inverse(&-CycNum::zeta(e, i as i64), 0) };
            val = &(&val * &num) * &den;
        }
    }
    val
}

fn type_a_schur(p: &[usize]) -> LPoly {
    let conj = conjugate(p);
    let n_lambda: i64 = p.iter().enumerate().map(|(i, &r)| (i * r) as i64).sum();
    let mut val = LPoly::monomial(CycNum::one(), -n_lambda);
    for (a, &row) in p.iter().enumerate() {
        for b in 0..row {
            val = &val * &qint(hook_ij(p, &conj, a, b));
        }
    }
    val
}

fn dihedral_schur(m: u32, d: DihLabel) -> LPoly {
    let x = LPoly::x();
    let one = LPoly::one();
    // (x+1)(x^m - 1)/(x - 1) = (x+1)(1 + x + ... + x^{m-1})
    let triv = &(&x + &one) * &qint(m as i64);
    match d {
        DihLabel::Triv => triv,
        DihLabel::Sgn => triv.shift(-(m as i64)),
        DihLabel::Eps(_) => {
            let s = &(&x + &one) * &(&x + &one);
            s.scale(&CycNum::frac(m as i64, 2)).shift(-1)
        }
        DihLabel::Rho(j) => {
            let c = &CycNum::zeta(m, j as i64) + &CycNum::zeta(m, -(j as i64));
            let quad = LPoly::from_coeffs(0, vec![CycNum::one(), -c.clone(), CycNum::one()]);
            let k = &CycNum::from_int(m as i64) * &(&CycNum::from_int(2) - &c).inv().expect("c != 2");
            quad.scale(&k).shift(-1)
        }
    }
}

/// Schur element of `label` for the spetsial Hecke algebra of type `ty`.
pub fn schur_element(ty: &HeckeType, label: &IrrLabel) -> LPoly {
    match (ty, label) {
        (HeckeType::Cyclic(e), IrrLabel::Cyclic(j)) => cyclic_schur(*e, *j),
        (HeckeType::A(_), IrrLabel::Partition(p)) => type_a_schur(p),
        (HeckeType::AK { e, .. }, IrrLabel::Multi(mp)) => ak_schur(*e, mp),
        (HeckeType::Dihedral(m), IrrLabel::Dihedral(d)) => dihedral_schur(*m, *d),
        (HeckeType::Product(ts), IrrLabel::Product(ls)) => {
            ts.iter().zip(ls).fold(LPoly::one(), |acc, (t, l)| &acc * &schur_element(t, l))
        }
        _ => panic!("label {:?} does not belong to {:?}", label, ty),
    }
}

/// Poincaré polynomial P_W(x) = Schur element of the trivial character.
pub fn poincare(ty: &HeckeType) -> LPoly {
    schur_element(ty, &ty.trivial_label())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_two_matches_type_a() {
        let c = HeckeType::Cyclic(2);
        assert_eq!(schur_element(&c, &IrrLabel::Cyclic(2)), LPoly::from_ints(0, &[1, 1]));
        assert_eq!(schur_element(&c, &IrrLabel::Cyclic(1)), LPoly::from_ints(-1, &[1, 1]));
        assert_eq!(type_a_schur(&[2]), LPoly::from_ints(0, &[1, 1]));
        assert_eq!(type_a_schur(&[1, 1]), LPoly::from_ints(-1, &[1, 1]));
    }

    #[test]
    fn ak_reduces_to_cyclic() {
        for e in 2..5u32 {
            for j in 0..e as usize {
                let mut mp = vec![vec![]; e as usize];
                mp[j] = vec![1];
                assert_eq!(ak_schur(e, &mp), cyclic_schur(e, j as u32 + 1));
            }
        }
    }

    #[test]
    fn poincare_polynomials() {
        // S_3: (1+x)(1+x+x^2)
        assert_eq!(poincare(&HeckeType::A(2)), LPoly::from_ints(0, &[1, 2, 2, 1]));
        // B_2: (1+x)(1+x+x^2+x^3)
        assert_eq!(poincare(&HeckeType::AK { e: 2, n: 2 }), LPoly::from_ints(0, &[1, 2, 2, 2, 1]));
        assert_eq!(poincare(&HeckeType::Dihedral(6)), LPoly::from_ints(0, &[1, 2, 2, 2, 2, 2, 1]));
    }
}
