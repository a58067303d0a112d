use super::CellDecomposition;

/// `m × n` square grid on the torus.
///
/// Vertex `(x, y)` has id `y * m + x`. Horizontal edge `(x, y) → (x + 1, y)` has id
/// `2 * (y * m + x)`, vertical edge `(x, y) → (x, y + 1)` the next id. Rotations
/// run east, north, west, south. `grid_torus(1, 1)` has two looping edges.
pub fn grid_torus(m: usize, n: usize) -> CellDecomposition {
    let vid = |x: usize, y: usize| (y % n) * m + (x % m);
    let hor = |x: usize, y: usize| 2 * vid(x, y);
    let ver = |x: usize, y: usize| 2 * vid(x, y) + 1;
    let mut edges = Vec::with_capacity(2 * m * n);
    for y in 0..n {
        for x in 0..m {
            edges.push((vid(x, y), vid(x + 1, y)));
            edges.push((vid(x, y), vid(x, y + 1)));
        }
    }
    let mut rotations = vec![Vec::new(); m * n];
    for y in 0..n {
        for x in 0..m {
            rotations[vid(x, y)] = vec![
                2 * hor(x, y),
                2 * ver(x, y),
                2 * hor(x + m - 1, y) + 1,
                2 * ver(x, y + n - 1) + 1,
            ];
        }
    }
    CellDecomposition::new(m * n, edges, rotations, &[]).expect("grid torus is well-formed")
}

/// Tetrahedron on the sphere: vertex 3 in the middle of the triangle 0, 1, 2,
/// edges `i → j` for `i < j`.
pub fn tetrahedron() -> CellDecomposition {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let e = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
    let dart = |at: usize, to: usize| 2 * e(at, to) + usize::from(at > to);
    let rotations = vec![
        vec![dart(0, 1), dart(0, 3), dart(0, 2)],
        vec![dart(1, 2), dart(1, 3), dart(1, 0)],
        vec![dart(2, 0), dart(2, 3), dart(2, 1)],
        vec![dart(3, 0), dart(3, 1), dart(3, 2)],
    ];
    CellDecomposition::new(4, pairs.to_vec(), rotations, &[]).expect("tetrahedron is well-formed")
}

/// Two vertices joined by two parallel edges `0 → 1`; two faces.
pub fn digon_sphere() -> CellDecomposition {
    CellDecomposition::new(2, vec![(0, 1), (0, 1)], vec![vec![0, 2], vec![1, 3]], &[])
        .expect("digon is well-formed")
}

/// Two vertices joined by four edges `0 → 1`, with two square faces.
pub fn two_vertex_torus() -> CellDecomposition {
    CellDecomposition::new(2, vec![(0, 1); 4], vec![vec![0, 2, 4, 6], vec![1, 3, 5, 7]], &[])
        .expect("two-vertex torus is well-formed")
}

/// A single edge `0 → 1` on the sphere; its one face meets the edge twice.
pub fn valence_one_sphere() -> CellDecomposition {
    CellDecomposition::new(2, vec![(0, 1)], vec![vec![0], vec![1]], &[]).expect("single edge is well-formed")
}
