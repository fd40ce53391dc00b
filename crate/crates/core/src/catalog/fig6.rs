use crate::partition::{Edge, Node, PartitionedGraph};

use super::{grid_id, p3_grid, CatalogError};

/// Occupancies of the distance-32 half grid, row `n0`, entry `n2`.
const TABLE: [&[u64]; 17] = [
    &[4, 4, 30, 35, 455, 273, 2002, 715, 1430, 715, 2002, 273, 455, 140, 120, 16, 1],
    &[4, 60, 105, 455, 1365, 3003, 5005, 715, 715, 5005, 3003, 1365, 1820, 420, 240, 16],
    &[30, 105, 2730, 2730, 30030, 15015, 10010, 715, 10010, 15015, 30030, 2730, 2730, 420, 120],
    &[35, 455, 2730, 10010, 1001, 5005, 15015, 15015, 5005, 1001, 10010, 2730, 1820, 140],
    &[455, 1365, 30030, 1001, 1001, 10010, 2145, 10010, 1001, 1001, 30030, 1365, 455],
    &[273, 3003, 15015, 5005, 10010, 286, 286, 10010, 5005, 15015, 3003, 273],
    &[2002, 5005, 10010, 15015, 2145, 286, 2145, 15015, 10010, 5005, 2002],
    &[715, 715, 715, 15015, 10010, 10010, 15015, 715, 715, 715],
    &[1430, 715, 10010, 5005, 1001, 5005, 10010, 715, 1430],
    &[715, 5005, 15015, 1001, 1001, 15015, 5005, 715],
    &[2002, 3003, 30030, 10010, 30030, 3003, 2002],
    &[273, 1365, 2730, 2730, 1365, 273],
    &[455, 1820, 2730, 1820, 455],
    &[140, 420, 420, 140],
    &[120, 240, 120],
    &[16, 16],
    &[1],
];

pub(crate) const FIG6_TOTAL: u64 = 680_913;

/// `d1 = sqrt(jsq * n2 / n1)` and `d2 = sqrt(jsq * n1 / n2)`, when both are integers.
pub fn infer_degrees(n1: u64, n2: u64, jsq: u64) -> Result<(u64, u64), CatalogError> {
    let err = || CatalogError::NonIntegralDegrees { n1, n2, jsq };
    if n1 == 0 || n2 == 0 || jsq == 0 {
        return Err(err());
    }
    let root = |num: u128, den: u128| -> Option<u64> {
        if !num.is_multiple_of(den) {
            return None;
        }
        let q = num / den;
        let r = num_integer::Roots::sqrt(&q);
        (r * r == q).then(|| u64::try_from(r).ok()).flatten()
    };
    let d1 = root(jsq as u128 * n2 as u128, n1 as u128).ok_or_else(err)?;
    let d2 = root(jsq as u128 * n1 as u128, n2 as u128).ok_or_else(err)?;
    Ok((d1, d2))
}

/// The Δ = 2, distance-32 half grid with hand-tuned occupancies.
///
/// Edges and couplings are those of `p3_grid(16)`; degrees are inferred from
/// the tabulated occupancies.
pub fn fig6_grid() -> PartitionedGraph {
    let total: u64 = TABLE.iter().flat_map(|r| r.iter()).sum();
    assert_eq!(total, FIG6_TOTAL, "occupancy table is corrupt");
    let occ = |id: &str| -> u64 {
        let (a, b) = id.trim_matches(|c| c == '(' || c == ')').split_once(',').expect("grid id");
        TABLE[a.parse::<usize>().expect("grid id")][b.parse::<usize>().expect("grid id")]
    };
    let base = p3_grid(16);
    let mut nodes = Vec::with_capacity(base.nodes.len());
    for (n0, row) in TABLE.iter().enumerate() {
        for (n2, &o) in row.iter().enumerate() {
            nodes.push(Node { id: grid_id(n0 as u64, n2 as u64), occupancy: o });
        }
    }
    let edges = base
        .edges
        .iter()
        .map(|e| {
            let (du, dv) = infer_degrees(occ(&e.u), occ(&e.v), e.coupling_square()).expect("table degrees are integral");
            Edge::new(e.u.clone(), e.v.clone(), du, dv)
        })
        .collect();
    PartitionedGraph::new(nodes, edges, base.input, base.output).with_delta(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infer_degrees_examples() {
        assert_eq!(infer_degrees(15, 20, 12), Ok((4, 3)));
        assert_eq!(infer_degrees(1, 6, 6), Ok((6, 1)));
        assert_eq!(infer_degrees(7, 7, 9), Ok((3, 3)));
        assert_eq!(infer_degrees(2, 3, 6), Ok((3, 2)));
        assert_eq!(infer_degrees(2, 3, 5), Err(CatalogError::NonIntegralDegrees { n1: 2, n2: 3, jsq: 5 }));
        assert!(infer_degrees(0, 3, 6).is_err());
    }

    #[test]
    fn table_shape() {
        for (n0, row) in TABLE.iter().enumerate() {
            assert_eq!(row.len(), 17 - n0);
        }
        // swapping input and output maps (n0, n2) to (n2, n0)
        for (n0, row) in TABLE.iter().enumerate() {
            for (n2, &v) in row.iter().enumerate() {
                assert_eq!(v, TABLE[n2][n0], "({n0},{n2})");
            }
        }
    }

    #[test]
    fn fig6_is_valid_and_transfer_ready() {
        let g = fig6_grid();
        assert!(g.validate().is_transfer_ready());
        assert_eq!(g.vertex_count(), FIG6_TOTAL.into());
        assert_eq!(g.nodes.len(), 153);
        assert_eq!(g.node_distances().unwrap().transfer_distance, 32);
        assert_eq!(g.coupling_squares(), p3_grid(16).coupling_squares());
    }
}
