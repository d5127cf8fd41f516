//! Algorithm 2 Steps 4–9: breadth-first collection of ℓ+1 distinct
//! supersingular j-invariants with their local polynomials, per-coefficient
//! Lagrange interpolation in y, and descent of every coefficient to F_p.

use crate::bivariate::BivariatePoly;
use crate::error::{Error, Result};
use crate::fields::{FieldDescriptor, FieldElement};
use crate::localphi::{LocalEngine, LocalPoly};
use crate::poly::FPoly;
use crate::ssinit::{supersingular_count, supersingular_j};
use rand::Rng;
use std::collections::VecDeque;
use std::sync::Arc;

/// The visited nodes of the isogeny-graph walk, in visit order, each with
/// its local polynomial.
#[derive(Debug, Clone)]
pub struct WalkState {
    pub visited: Vec<FieldElement>,
    pub locals: Vec<LocalPoly>,
}

impl WalkState {
    fn ell(&self) -> u64 {
        self.locals[0].coeffs.len() as u64 - 2
    }

    fn fp2(&self) -> &Arc<FieldDescriptor> {
        self.visited[0].field()
    }
}

/// Steps 4–7: walk from j₀ until ℓ+1 distinct nodes are visited. The
/// frontier is a FIFO of discovered roots, each node's roots enqueued in
/// canonical serialization order, so the walk is breadth-first and
/// deterministic given the discovery sequence.
pub fn collect_j_invariants<R: Rng>(
    p: u64,
    ell: u64,
    j0: &FieldElement,
    rng: &mut R,
) -> Result<WalkState> {
    let count = supersingular_count(p);
    if count < ell + 1 {
        return Err(Error::SupersingularCountTooSmall { p, ell, count });
    }
    let mut engine = LocalEngine::new(p, ell)?;
    let mut walk = WalkState { visited: vec![], locals: vec![] };
    let mut frontier: VecDeque<FieldElement> = VecDeque::new();
    frontier.push_back(j0.clone());
    while (walk.visited.len() as u64) < ell + 1 {
        let Some(j) = frontier.pop_front() else {
            // the supersingular graph is connected, so this cannot happen
            // for valid inputs
            return Err(Error::FrontierExhausted);
        };
        if walk.visited.contains(&j) {
            continue;
        }
        let local = engine.local_modular_poly(&j, rng)?;
        let mut roots = local.roots.clone();
        roots.sort_by(|a, b| a.canonical_cmp(b));
        for root in roots {
            if !walk.visited.contains(&root) {
                frontier.push_back(root);
            }
        }
        walk.visited.push(j);
        walk.locals.push(local);
    }
    Ok(walk)
}

/// Step 8: for k ≥ 1, p_k is the Lagrange interpolation of the column
/// values v_{ki}; p₀ is y^{ℓ+1} plus the interpolation of v_{0i} − j_i^{ℓ+1}
/// (the monic part cannot be pinned by ℓ+1 points). Every coefficient must
/// descend to F_p.
pub fn interpolate_bivariate(walk: &WalkState) -> Result<BivariatePoly<u64>> {
    let ell = walk.ell();
    let l = ell as usize;
    let fp2 = walk.fp2();
    let nodes = &walk.visited;
    if nodes.len() != l + 1 {
        return Err(Error::InvalidParameter("need exactly l+1 interpolation nodes".into()));
    }

    // Lagrange scaffolding shared by all columns
    let master = FPoly::from_roots(fp2, nodes);
    let mut basis = Vec::with_capacity(nodes.len());
    for j_i in nodes {
        let (quotient, rem) = master.divrem(&FPoly::linear_root(j_i))?;
        debug_assert!(rem.is_zero());
        let weight = quotient.eval(j_i).try_inv()?;
        basis.push(quotient.scale(&weight));
    }

    let mut grid: BivariatePoly<u64> = BivariatePoly::new_zero(ell);
    grid.set(l + 1, 0, 1);

    for k in 0..=l {
        let mut p_k = FPoly::zero(fp2);
        for (i, b) in basis.iter().enumerate() {
            let mut v = walk.locals[i].coeffs[k].clone();
            if k == 0 {
                v = &v - &nodes[i].pow_u64(ell + 1);
            }
            p_k = p_k.add(&b.scale(&v));
        }
        if k == 0 {
            // add back the monic y^{l+1}
            let mut coeffs = vec![fp2.zero(); l + 2];
            coeffs[l + 1] = fp2.one();
            p_k = p_k.add(&FPoly::new(fp2, coeffs));
        }
        for (m, c) in p_k.coeffs().iter().enumerate() {
            if c.frobenius_p2() != *c {
                return Err(Error::DescentFailure);
            }
            grid.set(k, m, c.coeffs()[0]);
        }
    }
    Ok(grid)
}

/// Algorithm 2 end to end: supersingular seed, graph walk, interpolation,
/// plus the x↔y symmetry tripwire (a classical property of φ_ℓ recomputed
/// here as an independent check on the interpolation).
pub fn modular_poly_mod_p<R: Rng>(p: u64, ell: u64, rng: &mut R) -> Result<BivariatePoly<u64>> {
    if ell < 3 || !crate::arith::is_prime(ell) {
        return Err(Error::InvalidParameter("l must be an odd prime".into()));
    }
    if p == ell {
        return Err(Error::InvalidParameter("p and l must be distinct".into()));
    }
    let count = supersingular_count(p);
    if count < ell + 1 {
        return Err(Error::SupersingularCountTooSmall { p, ell, count });
    }
    let j0 = supersingular_j(p, rng)?;
    let walk = collect_j_invariants(p, ell, &j0, rng)?;
    let grid = interpolate_bivariate(&walk)?;
    if !grid.is_symmetric() || !grid.shape_ok() {
        return Err(Error::DescentFailure);
    }
    Ok(grid)
}

/// Evaluate the columns of a mod-p grid at y ∈ F_{p²}: the coefficient
/// vector of φ_ℓ(x, y₀), lowest x-degree first.
pub fn eval_columns_at(grid: &BivariatePoly<u64>, y: &FieldElement) -> Vec<FieldElement> {
    let fp2 = y.field();
    let n = grid.size();
    (0..n)
        .map(|k| {
            let mut acc = fp2.zero();
            for m in (0..n).rev() {
                acc = &(&acc * y) + &fp2.from_u64(*grid.get(k, m));
            }
            acc
        })
        .collect()
}
