use crate::percentile::NumericVector;
use crate::sensitivity::NeighborEnumerator;

/// One record moved to `0`, `Λ`, another record's value or a grid point.
///
/// The utility is piecewise linear in the moved value with kinks only at
/// current values and the domain ends, so these points attain every
/// neighbour extremum; the grid guards against a missed kink.
#[derive(Clone, Copy, Debug)]
pub struct CriticalGridNeighbors {
    pub grid: usize,
}

impl Default for CriticalGridNeighbors {
    fn default() -> Self {
        Self { grid: 64 }
    }
}

impl CriticalGridNeighbors {
    fn points(&self, x: &NumericVector) -> Vec<f64> {
        let lambda = x.lambda();
        let mut points = vec![0.0, lambda];
        points.extend(x.values());
        if self.grid >= 2 {
            let step = lambda / (self.grid - 1) as f64;
            points.extend((0..self.grid).map(|g| (g as f64 * step).min(lambda)));
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        points
    }
}

impl NeighborEnumerator<NumericVector> for CriticalGridNeighbors {
    fn neighbors(&self, x: &NumericVector) -> Vec<NumericVector> {
        let points = self.points(x);
        let mut out = Vec::with_capacity(x.len() * points.len());
        for r in x.records() {
            for &v in &points {
                if v != r.value {
                    out.push(x.with_value(r.label, v).expect("point inside the domain"));
                }
            }
        }
        out
    }
}

/// One record moved to another integer in `0..=Λ`; `Λ` must be an integer.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntegerNeighbors;

impl NeighborEnumerator<NumericVector> for IntegerNeighbors {
    fn neighbors(&self, x: &NumericVector) -> Vec<NumericVector> {
        let top = x.lambda().floor() as u64;
        let mut out = Vec::new();
        for r in x.records() {
            for v in 0..=top {
                let v = v as f64;
                if v != r.value {
                    out.push(x.with_value(r.label, v).expect("integer inside the domain"));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_points_include_values_and_ends() {
        let x = NumericVector::new(&[0.5, 3.0], 4.0).unwrap();
        let n = CriticalGridNeighbors { grid: 3 };
        assert_eq!(n.points(&x), vec![0.0, 0.5, 2.0, 3.0, 4.0]);
        assert_eq!(n.neighbors(&x).len(), 8);
    }

    #[test]
    fn integer_neighbours_are_symmetric() {
        let x = NumericVector::new(&[1.0, 3.0], 3.0).unwrap();
        for y in IntegerNeighbors.neighbors(&x) {
            assert!(IntegerNeighbors.neighbors(&y).contains(&x));
        }
    }
}
