//! Approximation for maximum flows decomposable into at most `p`
//! path-flows, in three flavours: unrestricted multisets of paths,
//! pairwise arc-disjoint paths, and pairwise internally vertex-disjoint
//! paths.
//!
//! The algorithm tries, for each path count `i <= p`, the largest value
//! `nu` such that `i` disjoint source-sink paths survive in a reduced
//! digraph `D_nu` keeping only capacity where `nu` units fit; sending
//! `nu` units along each of the `i` paths yields a candidate of value
//! `i * nu`, and the best candidate is within a factor `1/H(p)` of the
//! optimum, `H` being the harmonic sum.

use num::{BigInt, BigRational};

use crate::decomp::{decompose, ComponentKind};
use crate::error::{Error, Result};
use crate::maxflow::{max_flow, split_vertices, SplitMap};
use crate::netcore::{ArcId, Digraph, Flow, Network, VertexId};

/// Which disjointness constraint the path-flows must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitVariant {
    /// Any multiset of source-sink path-flows.
    Unrestricted,
    /// Pairwise arc-disjoint path-flows.
    ArcDisjoint,
    /// Path-flows meeting pairwise only at the source and the sink.
    VertexDisjoint,
}

/// One path-flow of a solution: a simple source-sink path and the value
/// pushed along it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFlow {
    pub vertices: Vec<VertexId>,
    pub arcs: Vec<ArcId>,
    pub value: u64,
}

/// A flow together with a decomposition into at most `p` path-flows.
///
/// `nu_star` and `i_star` are present when the solution came from the
/// uniform-value approximation (all paths then carry `nu_star` and
/// `flow.value() == i_star * nu_star`); exact solvers returning paths of
/// mixed values leave them empty.
#[derive(Debug, Clone)]
pub struct PSplitSolution {
    pub flow: Flow,
    pub paths: Vec<PathFlow>,
    pub p_used: usize,
    pub nu_star: Option<u64>,
    pub i_star: Option<usize>,
}

impl PSplitSolution {
    pub fn empty(net: &Network) -> PSplitSolution {
        PSplitSolution {
            flow: Flow::zero(net),
            paths: Vec::new(),
            p_used: 0,
            nu_star: Some(0),
            i_star: Some(0),
        }
    }
}

/// Exact harmonic sum `H(p) = 1 + 1/2 + ... + 1/p` as a rational.
pub fn harmonic(p: usize) -> Result<BigRational> {
    if p == 0 {
        return Err(Error::Precondition("harmonic sum needs p >= 1".into()));
    }
    let mut sum = BigRational::from_integer(BigInt::from(0));
    for i in 1..=p {
        sum += BigRational::new(BigInt::from(1), BigInt::from(i));
    }
    Ok(sum)
}

/// The reduced digraph `D_nu`: in the unrestricted variant every arc is
/// replaced by `floor(c / nu)` parallel unit copies; in the disjoint
/// variants an arc survives (once) exactly when `c >= nu`. The second
/// component maps each new arc to the original arc it copies.
pub fn build_d_nu(
    net: &Network,
    nu: u64,
    variant: SplitVariant,
) -> Result<(Digraph, Vec<ArcId>)> {
    let (arcs, origin) = d_nu_arcs(net, nu, variant, None)?;
    Ok((Digraph::new(net.vertex_count(), arcs)?, origin))
}

/// Arc list of `D_nu` with copies optionally capped (capping at the
/// number of wanted paths does not change whether that many disjoint
/// paths exist, but keeps the graph small when capacities are huge).
fn d_nu_arcs(
    net: &Network,
    nu: u64,
    variant: SplitVariant,
    cap_copies: Option<u64>,
) -> Result<(Vec<(VertexId, VertexId)>, Vec<ArcId>)> {
    if nu == 0 {
        return Err(Error::Precondition("nu must be at least 1".into()));
    }
    const MAX_COPIES: u64 = 1_000_000;
    let mut arcs = Vec::new();
    let mut origin = Vec::new();
    for a in 0..net.arc_count() {
        let copies = match variant {
            SplitVariant::Unrestricted => net.cap(a) / nu,
            SplitVariant::ArcDisjoint | SplitVariant::VertexDisjoint => {
                u64::from(net.cap(a) >= nu)
            }
        };
        let copies = copies.min(cap_copies.unwrap_or(u64::MAX));
        if arcs.len() as u64 + copies > MAX_COPIES {
            return Err(Error::Budget(format!(
                "reduced digraph for nu = {nu} needs more than {MAX_COPIES} arcs"
            )));
        }
        for _ in 0..copies {
            arcs.push(net.digraph().arc(a));
            origin.push(a);
        }
    }
    Ok((arcs, origin))
}

/// Feasibility network for "`i` disjoint paths survive at value `nu`":
/// unit capacities on the copies, with internal vertices additionally
/// split to throughput one in the vertex-disjoint variant. Returns the
/// network, the original arc behind each feasibility arc (`None` for
/// split-vertex helper arcs), and the number of plain arcs.
fn feasibility_network(
    net: &Network,
    i: usize,
    nu: u64,
    variant: SplitVariant,
) -> Result<(Network, Vec<ArcId>, usize, Option<SplitMap>)> {
    let (arcs, origin) = d_nu_arcs(net, nu, variant, Some(i as u64))?;
    let with_caps: Vec<(VertexId, VertexId, u64)> =
        arcs.iter().map(|&(u, v)| (u, v, 1)).collect();
    let unit = Network::from_arcs(net.vertex_count(), net.source(), net.sink(), &with_caps)?;
    match variant {
        SplitVariant::VertexDisjoint => {
            let (split, map) = split_vertices(&unit, 1, &[net.source(), net.sink()])?;
            let plain = map.original_arc_count;
            Ok((split, origin, plain, Some(map)))
        }
        _ => {
            let plain = unit.arc_count();
            Ok((unit, origin, plain, None))
        }
    }
}

fn feasible(net: &Network, i: usize, nu: u64, variant: SplitVariant) -> Result<bool> {
    let (feas, _, _, _) = feasibility_network(net, i, nu, variant)?;
    Ok(max_flow(&feas).value() >= i as u64)
}

/// Largest `nu <= hi` such that `i` disjoint paths survive, or `None`
/// when even `nu = 1` fails. Feasibility is monotone decreasing in `nu`,
/// so binary search applies.
fn best_nu(net: &Network, i: usize, hi: u64, variant: SplitVariant) -> Result<Option<u64>> {
    if hi == 0 || !feasible(net, i, 1, variant)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (1u64, hi);
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if feasible(net, i, mid, variant)? {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(Some(lo))
}

/// `1/H(p)`-approximation for the maximum flow decomposable into at most
/// `p` path-flows of the requested variant.
///
/// For each `i <= p` the largest uniform value `c_i` carried by `i`
/// disjoint paths is found by binary search; the best `i * c_i` wins,
/// ties going to the smaller path count. Returns an empty solution when
/// the network has no source-sink path.
pub fn approx_p_split(net: &Network, p: usize, variant: SplitVariant) -> Result<PSplitSolution> {
    if p == 0 {
        return Err(Error::Precondition("path budget p must be at least 1".into()));
    }
    if !net.digraph().has_path(net.source(), net.sink()) {
        return Ok(PSplitSolution::empty(net));
    }

    let mut best: Option<(u64, usize, u64)> = None; // (value, i, nu)
    let mut prev_c = net.max_cap();
    for i in 1..=p {
        let c_i = match best_nu(net, i, prev_c, variant)? {
            Some(c) => c,
            None => break, // more paths cannot help once i are infeasible
        };
        debug_assert!(c_i <= prev_c, "c_i must be non-increasing in i");
        prev_c = c_i;
        let value = (i as u64)
            .checked_mul(c_i)
            .ok_or(Error::Overflow("candidate value i * c_i"))?;
        if best.map_or(true, |(v, _, _)| value > v) {
            best = Some((value, i, c_i));
        }
    }
    let (_, i_star, nu_star) =
        best.expect("a source-sink path guarantees feasibility at i = 1, nu = 1");

    let paths = witness_paths(net, i_star, nu_star, variant)?;
    debug_assert_eq!(paths.len(), i_star);
    let mut values = vec![0u64; net.arc_count()];
    for path in &paths {
        for &a in &path.arcs {
            values[a] += nu_star;
        }
    }
    let flow = Flow::from_arc_values(net, values)?;
    debug_assert_eq!(flow.value(), i_star as u64 * nu_star);
    debug_assert!(disjointness_holds(&paths, net, variant));

    Ok(PSplitSolution {
        flow,
        paths,
        p_used: i_star,
        nu_star: Some(nu_star),
        i_star: Some(i_star),
    })
}

/// Extract `i` disjoint paths from the feasibility network at the chosen
/// `nu` and map them back to original arc ids, each carrying `nu` units.
fn witness_paths(
    net: &Network,
    i: usize,
    nu: u64,
    variant: SplitVariant,
) -> Result<Vec<PathFlow>> {
    let (feas, origin, plain, _) = feasibility_network(net, i, nu, variant)?;
    let flow = max_flow(&feas);
    debug_assert!(flow.value() >= i as u64);
    let decomposition = decompose(&feas, &flow);
    let mut paths = Vec::with_capacity(i);
    for component in decomposition.paths().take(i) {
        debug_assert_eq!(component.kind, ComponentKind::Path);
        // Unit capacities make every extracted path carry exactly one unit.
        debug_assert_eq!(component.value, 1);
        let arcs: Vec<ArcId> = component
            .arcs
            .iter()
            .filter(|&&a| a < plain) // drop split-vertex helper arcs
            .map(|&a| origin[a])
            .collect();
        let mut vertices = Vec::with_capacity(arcs.len() + 1);
        vertices.push(net.source());
        for &a in &arcs {
            debug_assert_eq!(net.digraph().tail(a), *vertices.last().unwrap());
            vertices.push(net.digraph().head(a));
        }
        debug_assert_eq!(*vertices.last().unwrap(), net.sink());
        paths.push(PathFlow { vertices, arcs, value: nu });
    }
    if paths.len() < i {
        return Err(Error::Internal(
            "feasibility flow decomposed into fewer paths than its value".into(),
        ));
    }
    Ok(paths)
}

fn disjointness_holds(paths: &[PathFlow], net: &Network, variant: SplitVariant) -> bool {
    match variant {
        SplitVariant::Unrestricted => true,
        SplitVariant::ArcDisjoint => {
            let mut seen = vec![false; net.arc_count()];
            paths.iter().flat_map(|p| p.arcs.iter()).all(|&a| !std::mem::replace(&mut seen[a], true))
        }
        SplitVariant::VertexDisjoint => {
            let mut seen = vec![false; net.vertex_count()];
            paths
                .iter()
                .flat_map(|p| p.vertices.iter().filter(|&&v| v != net.source() && v != net.sink()))
                .all(|&v| !std::mem::replace(&mut seen[v], true))
        }
    }
}
