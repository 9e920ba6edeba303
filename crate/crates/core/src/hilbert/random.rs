//! Seeded instances that satisfy the lemma hypotheses by construction.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::{
    complement, complement_within, extend_basis, gaussian, hstack, orthonormalize, project, random_subspace,
    random_unitary, random_vector, CMatrix, CVector,
};
use super::{Flavor, HilbertError, LemmaInstance, Result};
use num::complex::Complex64;

/// Deterministic instance of dimension `n` with `len` unitaries.
pub fn random_instance(flavor: Flavor, n: usize, len: usize, seed: u64) -> Result<LemmaInstance> {
    if len == 0 || n < len {
        return Err(HilbertError::Infeasible { n, len });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = match flavor {
        Flavor::OldLemma => old_instance(n, len, &mut rng),
        Flavor::NewLemma => new_instance(n, len, &mut rng),
    };
    Ok(scramble(inst, &mut rng))
}

/// Replaces `S_k` by `W S_k`, `A_j` by `A_j W^*` and `h` by `W h`; every hypothesis is invariant.
fn scramble(mut inst: LemmaInstance, rng: &mut ChaCha8Rng) -> LemmaInstance {
    let w = random_unitary(inst.dimension(), rng);
    for b in &mut inst.chain {
        *b = orthonormalize(&(&w * &*b));
    }
    let wa = w.adjoint();
    for a in &mut inst.unitaries {
        *a = &*a * &wa;
    }
    inst.h = &w * &inst.h;
    inst
}

fn coordinate_basis(n: usize, from: usize, to: usize) -> CMatrix {
    CMatrix::from_fn(n, to - from, |i, j| {
        if i == from + j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
    })
}

/// `M_j = span(e_1..e_(d_j))` with `d_1 < ... < d_J <= n - 1`; `h` has an `e_n` part.
fn old_instance(n: usize, len: usize, rng: &mut ChaCha8Rng) -> LemmaInstance {
    let mut dims: Vec<usize> = index::sample(rng, n, len).into_vec();
    dims.sort_unstable();
    let v = random_unitary(n, rng);
    // N_j = A_j M_j
    let targets: Vec<CMatrix> = dims.iter().map(|&d| v.columns(0, d).into_owned()).collect();
    let g = random_vector(n, rng);

    let mut unitaries = Vec::with_capacity(len);
    for j in 0..len {
        let dprev = if j == 0 { 0 } else { dims[j - 1] };
        // K_(j-1): a dprev-dimensional subspace of N_j orthogonal to g
        let k = if dprev == 0 {
            CMatrix::zeros(n, 0)
        } else {
            let allowed = orthogonal_to(&targets[j], &g, rng);
            random_subspace(&allowed, dprev, rng)
        };
        let rest = complement_within(&targets[j], &k);
        // image of e_n: inside N_(j+1) minus N_j, or outside N_J at the top
        let y = if j + 1 < len {
            let fresh = complement_within(&targets[j + 1], &targets[j]);
            random_subspace(&fresh, 1, rng)
        } else {
            random_subspace(&complement(&targets[j], rng), 1, rng)
        };
        let fill = complement(&hstack(&[&k, &rest, &y], n), rng);
        // columns: e_1..e_(d_j) -> K, rest; e_(d_j+1)..e_(n-1) -> fill; e_n -> y
        unitaries.push(hstack(&[&k, &rest, &fill, &y], n));
    }

    let beta = gaussian(rng);
    let mut h = CVector::zeros(n);
    h[n - 1] = beta;
    if dims[0] > 0 {
        let m1 = coordinate_basis(n, 0, dims[0]);
        h += &m1 * random_vector(dims[0], rng);
    }
    let chain = dims.iter().map(|&d| coordinate_basis(n, 0, d)).collect();
    LemmaInstance { flavor: Flavor::OldLemma, chain, unitaries, g, h }
}

/// Orthonormal basis of `span(t) ∩ v^perp` for orthonormal `t`.
fn orthogonal_to(t: &CMatrix, v: &CVector, rng: &mut ChaCha8Rng) -> CMatrix {
    let c = t.adjoint() * v;
    if c.norm() < 1e-14 {
        return t.clone();
    }
    let dir = CMatrix::from_columns(&[c.normalize()]);
    t * complement(&dir, rng)
}

/// `L_1 = ... = L_(J-1) = span(e_1..e_d)`, `L_J` inside it, `A_j L = N` for `j >= 2`.
fn new_instance(n: usize, len: usize, rng: &mut ChaCha8Rng) -> LemmaInstance {
    let d = if n == 1 { 1 } else { rng.random_range(1..n) };
    let l = coordinate_basis(n, 0, d);
    let v = random_unitary(n, rng);
    let target = v.columns(0, d).into_owned();
    let l_last = if len == 1 { l.clone() } else { random_subspace(&l, rng.random_range(0..=d), rng) };
    let mut chain: Vec<CMatrix> = vec![l.clone(); len.saturating_sub(1)];
    chain.push(l_last);

    // h must lie in L once some A_j with 2 <= j < J maps L onto N.
    let h = if len >= 3 {
        &l * random_vector(d, rng)
    } else {
        random_vector(n, rng)
    };

    let mut unitaries = Vec::with_capacity(len);
    // A_1 sends h into N; the rest is arbitrary.
    let a1 = {
        let source = orthonormalize(&CMatrix::from_columns(&[h.clone()]));
        let source = hstack(&[&source, &complement(&source, rng)], n);
        let dest = random_subspace(&target, 1, rng);
        let dest = hstack(&[&dest, &complement(&dest, rng)], n);
        dest * source.adjoint()
    };
    unitaries.push(a1);
    for _ in 1..len {
        let inside = &target * random_unitary(d, rng);
        let outside = complement(&target, rng) * random_unitary(n - d, rng);
        unitaries.push(hstack(&[&inside, &outside], n));
    }

    // g avoids A_j L_j for j >= 2
    let mut forbidden = CMatrix::zeros(n, 0);
    for j in 1..len {
        let img = &unitaries[j] * &chain[j];
        let extra = extend_basis(&forbidden, &img);
        forbidden = hstack(&[&forbidden, &extra], n);
    }
    let raw = random_vector(n, rng);
    let g = &raw - project(&forbidden, &raw);
    LemmaInstance { flavor: Flavor::NewLemma, chain, unitaries, g, h }
}

#[cfg(test)]
mod tests {
    use super::super::{lemma_bound, verify_hypotheses};
    use super::*;

    #[test]
    fn hypotheses_hold_by_construction() {
        for flavor in [Flavor::OldLemma, Flavor::NewLemma] {
            for seed in 0..40 {
                for (n, len) in [(1, 1), (2, 2), (8, 3), (5, 5), (16, 8)] {
                    let inst = random_instance(flavor, n, len, seed).unwrap();
                    let r = verify_hypotheses(&inst).unwrap();
                    assert!(r.pass, "{flavor:?} seed {seed} n {n} J {len}: {:?}", r.violations);
                    assert!(lemma_bound(&inst).unwrap().holds);
                }
            }
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let a = random_instance(Flavor::OldLemma, 8, 3, 1).unwrap();
        let b = random_instance(Flavor::OldLemma, 8, 3, 1).unwrap();
        assert_eq!(a.to_json().to_string(), b.to_json().to_string());
        let c = random_instance(Flavor::OldLemma, 8, 3, 2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn infeasible_shapes() {
        assert_eq!(
            random_instance(Flavor::OldLemma, 2, 5, 1),
            Err(HilbertError::Infeasible { n: 2, len: 5 })
        );
        assert!(random_instance(Flavor::NewLemma, 3, 0, 1).is_err());
    }

    #[test]
    fn old_instances_are_not_trivial() {
        let mut nonzero = 0;
        for seed in 0..20 {
            let inst = random_instance(Flavor::OldLemma, 8, 4, seed).unwrap();
            if lemma_bound(&inst).unwrap().ratio > 1e-3 {
                nonzero += 1;
            }
        }
        assert!(nonzero > 10);
    }
}
