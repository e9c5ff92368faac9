use super::{ElementIndex, Group};
use crate::{Error, Result};

/// Default upper bound on the number of elements in an enumerated ball.
pub const DEFAULT_BALL_CAP: usize = 200_000;

/// Cayley-graph ball `{g : l(g) <= radius}` in BFS order.
#[derive(Debug, Clone)]
pub struct Ball<G: Group> {
    radius: usize,
    index: G::Index,
    lengths: Vec<usize>,
}

impl<G: Group> Ball<G> {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn elements(&self) -> &[G::Elem] {
        self.index.elements()
    }

    /// BFS layer (word length) of each element, aligned with [`Ball::elements`].
    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn position(&self, g: &G::Elem) -> Option<usize> {
        self.index.get(g)
    }

    /// Position of `g`, surfacing element-identification failures.
    pub fn try_position(&self, g: &G::Elem) -> Result<Option<usize>> {
        self.index.lookup(g)
    }

    /// Word length of `g` if it lies in the ball.
    pub fn length_of(&self, g: &G::Elem) -> Option<usize> {
        self.position(g).map(|i| self.lengths[i])
    }

    /// Elements of the sphere of the given radius.
    pub fn sphere(&self, r: usize) -> Vec<G::Elem> {
        self.elements()
            .iter()
            .zip(&self.lengths)
            .filter(|(_, &l)| l == r)
            .map(|(g, _)| g.clone())
            .collect()
    }
}

/// Enumerates the ball of radius `radius` by breadth-first search, right
/// multiplying by generators. Order: BFS layer, then discovery order.
///
/// Fails with [`Error::BallCap`] as soon as more than `cap` elements are
/// found.
pub fn enumerate_ball<G: Group>(group: &G, radius: usize, cap: usize) -> Result<Ball<G>> {
    let mut index = group.new_index();
    let mut lengths = Vec::new();
    index.insert(group.identity())?;
    lengths.push(0);
    let mut layer_start = 0;
    for r in 0..radius {
        let layer_end = index.len();
        for i in layer_start..layer_end {
            let g = index.elements()[i].clone();
            for s in group.generators() {
                let h = group.multiply(&g, &s.elem);
                let (_, fresh) = index.insert(h)?;
                if fresh {
                    lengths.push(r + 1);
                    if lengths.len() > cap {
                        return Err(Error::BallCap {
                            radius,
                            found: lengths.len(),
                            cap,
                        });
                    }
                }
            }
        }
        layer_start = layer_end;
        if layer_start == index.len() {
            break;
        }
    }
    Ok(Ball {
        radius,
        index,
        lengths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_free_group, TorusQuotient};

    #[test]
    fn cap_is_enforced() {
        let f = make_free_group(2).unwrap();
        match enumerate_ball(&f, 5, 100) {
            Err(Error::BallCap { cap, found, .. }) => {
                assert_eq!(cap, 100);
                assert!(found > 100);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn finite_group_ball_saturates() {
        let q = TorusQuotient::new(1, 6).unwrap();
        let ball = enumerate_ball(&q, 10, 100).unwrap();
        assert_eq!(ball.len(), 6);
        assert_eq!(*ball.lengths().iter().max().unwrap(), 3);
    }

    #[test]
    fn lengths_follow_bfs_layers() {
        let f = make_free_group(2).unwrap();
        let ball = enumerate_ball(&f, 4, 1000).unwrap();
        for (g, &l) in ball.elements().iter().zip(ball.lengths()) {
            assert_eq!(g.len(), l);
        }
        assert!(ball.lengths().windows(2).all(|w| w[0] <= w[1]));
    }
}
