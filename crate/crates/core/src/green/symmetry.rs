//! Point symmetries of the lattice Green's function.

use crate::lattice::LatticePoint;

/// The three generating maps: swap, negation, and `(x1, x2) -> (x1 + x2, -x2)`.
pub fn generators(p: LatticePoint) -> [LatticePoint; 3] {
    [
        LatticePoint::new(p.x2, p.x1),
        LatticePoint::new(-p.x1, -p.x2),
        LatticePoint::new(p.x1 + p.x2, -p.x2),
    ]
}

/// The full orbit of `p` under the group generated by [`generators`].
pub fn orbit(p: LatticePoint) -> Vec<LatticePoint> {
    let mut seen = vec![p];
    let mut next = 0;
    while next < seen.len() {
        for q in generators(seen[next]) {
            if !seen.contains(&q) {
                seen.push(q);
            }
        }
        next += 1;
    }
    seen
}

/// The orbit member `(i, j)` with `i >= j >= 0`.
pub fn canonicalize(p: LatticePoint) -> LatticePoint {
    let orbit = orbit(p);
    let mut reps = orbit.iter().filter(|q| q.x1 >= q.x2 && q.x2 >= 0);
    let rep = *reps.next().expect("every orbit meets the canonical wedge");
    debug_assert!(reps.all(|q| *q == rep), "canonical representative is unique");
    rep
}
