use super::{ColoringProblem, KsError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    /// A value per ray satisfying every basis constraint.
    Sat(Vec<bool>),
    Unsat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchCertificate {
    pub result: SearchResult,
    /// Decision nodes tried, counting both branches.
    pub nodes_explored: u64,
    pub max_depth: usize,
}

impl SearchCertificate {
    pub fn is_unsat(&self) -> bool {
        self.result == SearchResult::Unsat
    }

    pub fn assignment(&self) -> Option<&[bool]> {
        match &self.result {
            SearchResult::Sat(f) => Some(f),
            SearchResult::Unsat => None,
        }
    }
}

/// True iff every basis has exactly one member assigned `true`.
///
/// Kept deliberately naive: this is the oracle the solver is checked against.
pub fn check_assignment(p: &ColoringProblem, f: &[bool]) -> Result<bool, KsError> {
    let mut ok = true;
    for b in p.bases() {
        let mut ones = 0;
        for id in b.members() {
            match f.get(id) {
                Some(true) => ones += 1,
                Some(false) => {}
                None => return Err(KsError::RayOutOfRange { id, count: f.len() }),
            }
        }
        ok &= ones == 1;
    }
    Ok(ok)
}

struct Search<'a> {
    problem: &'a ColoringProblem,
    bases_of: Vec<Vec<usize>>,
    order: Vec<usize>,
    value: Vec<Option<bool>>,
    trail: Vec<usize>,
    nodes: u64,
    max_depth: usize,
}

impl<'a> Search<'a> {
    fn new(problem: &'a ColoringProblem) -> Self {
        let n = problem.ray_count();
        let mut bases_of = vec![Vec::new(); n];
        for (k, b) in problem.bases().iter().enumerate() {
            for id in b.members() {
                bases_of[id].push(k);
            }
        }
        let mut order: Vec<usize> = (0..n).filter(|&v| !bases_of[v].is_empty()).collect();
        // descending degree, ties by id (sort is stable)
        order.sort_by_key(|&v| std::cmp::Reverse(bases_of[v].len()));
        Search { problem, bases_of, order, value: vec![None; n], trail: Vec::new(), nodes: 0, max_depth: 0 }
    }

    /// Assigns `var` and runs unit propagation. Returns false on conflict.
    fn assign(&mut self, var: usize, val: bool) -> bool {
        let mut queue = vec![(var, val)];
        while let Some((v, x)) = queue.pop() {
            match self.value[v] {
                Some(y) if y == x => continue,
                Some(_) => return false,
                None => {
                    self.value[v] = Some(x);
                    self.trail.push(v);
                }
            }
            for &k in &self.bases_of[v] {
                let members = self.problem.bases()[k].members();
                let mut ones = 0;
                let mut free = Vec::with_capacity(3);
                for m in members {
                    match self.value[m] {
                        Some(true) => ones += 1,
                        Some(false) => {}
                        None => free.push(m),
                    }
                }
                match (ones, free.len()) {
                    (2.., _) => return false,
                    (1, _) => queue.extend(free.into_iter().map(|m| (m, false))),
                    (0, 0) => return false,
                    (0, 1) => queue.push((free[0], true)),
                    _ => {}
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.value[v] = None;
        }
    }

    fn run(&mut self, depth: usize) -> bool {
        let Some(&var) = self.order.iter().find(|&&v| self.value[v].is_none()) else {
            return true;
        };
        for val in [true, false] {
            self.nodes += 1;
            self.max_depth = self.max_depth.max(depth + 1);
            let mark = self.trail.len();
            if self.assign(var, val) && self.run(depth + 1) {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// Complete backtracking search with unit propagation.
///
/// Variables are branched in descending order of basis membership (ties by
/// id), trying `true` before `false`, so results and node counts are
/// reproducible. Rays that appear in no basis are assigned `false`.
pub fn solve_coloring(p: &ColoringProblem) -> SearchCertificate {
    let mut search = Search::new(p);
    let sat = search.run(0);
    let result = if sat {
        SearchResult::Sat(search.value.iter().map(|v| v.unwrap_or(false)).collect())
    } else {
        SearchResult::Unsat
    };
    SearchCertificate { result, nodes_explored: search.nodes, max_depth: search.max_depth }
}

#[cfg(test)]
mod tests {
    use super::super::Basis;
    use super::*;

    fn single() -> ColoringProblem {
        ColoringProblem::new(3, vec![Basis::new([0, 1, 2]).unwrap()]).unwrap()
    }

    #[test]
    fn single_basis_is_sat() {
        let c = solve_coloring(&single());
        assert_eq!(c.result, SearchResult::Sat(vec![true, false, false]));
        assert!(check_assignment(&single(), c.assignment().unwrap()).unwrap());
    }

    #[test]
    fn empty_problem_is_all_zero() {
        let p = ColoringProblem::new(4, vec![]).unwrap();
        let c = solve_coloring(&p);
        assert_eq!(c.result, SearchResult::Sat(vec![false; 4]));
        assert_eq!(c.nodes_explored, 0);
    }

    #[test]
    fn checker_cases() {
        let p = single();
        assert!(check_assignment(&p, &[true, false, false]).unwrap());
        assert!(!check_assignment(&p, &[true, true, false]).unwrap());
        assert!(!check_assignment(&p, &[false, false, false]).unwrap());
        assert!(matches!(check_assignment(&p, &[true, false]), Err(KsError::RayOutOfRange { id: 2, .. })));
    }

    #[test]
    fn small_problems_match_enumeration() {
        let b = |x| Basis::new(x).unwrap();
        let problems = [
            vec![b([0, 1, 2]), b([0, 3, 4]), b([1, 3, 5]), b([2, 4, 5])],
            vec![b([0, 1, 3]), b([1, 2, 4]), b([0, 2, 5]), b([3, 4, 5])],
            vec![b([0, 1, 2]), b([0, 1, 3]), b([2, 3, 4]), b([4, 5, 0])],
        ];
        for bases in problems {
            let p = ColoringProblem::new(6, bases).unwrap();
            let brute = (0u32..64).any(|m| {
                let f: Vec<bool> = (0..6).map(|i| m >> i & 1 == 1).collect();
                check_assignment(&p, &f).unwrap()
            });
            let c = solve_coloring(&p);
            assert_eq!(!c.is_unsat(), brute);
            if let Some(f) = c.assignment() {
                assert!(check_assignment(&p, f).unwrap());
            }
        }
    }
}
