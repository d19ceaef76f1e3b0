use super::transition::dominates;
use super::SolutionPath;

/// Mutually non-dominated solutions under minimisation of `(Ff, Fs)`, kept
/// in insertion order. Each objective vector is held once: a later path
/// with the same `(Ff, Fs)` as a member is turned away.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParetoArchive {
    solutions: Vec<SolutionPath>,
}

impl ParetoArchive {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `candidate` unless a member dominates it or already has its
    /// objective values; evicts every member it dominates. Returns whether
    /// it was accepted.
    pub fn insert(&mut self, candidate: SolutionPath) -> bool {
        let cand = candidate.objectives();
        if self
            .solutions
            .iter()
            .any(|s| dominates(s.objectives(), cand) || s.objectives() == cand)
        {
            return false;
        }
        self.solutions.retain(|s| !dominates(cand, s.objectives()));
        self.solutions.push(candidate);
        true
    }

    pub fn solutions(&self) -> &[SolutionPath] {
        &self.solutions
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// The member with the smallest `Ff` (ties: smaller `Fs`, then oldest).
    pub fn best_speed(&self) -> Option<&SolutionPath> {
        self.best_by(|s| (s.ff, s.fs))
    }

    /// The member with the smallest `Fs` (ties: smaller `Ff`, then oldest).
    pub fn best_safety(&self) -> Option<&SolutionPath> {
        self.best_by(|s| (s.fs, s.ff))
    }

    fn best_by(&self, key: impl Fn(&SolutionPath) -> (f64, f64)) -> Option<&SolutionPath> {
        self.solutions.iter().reduce(|best, s| {
            let (a, b) = (key(s), key(best));
            if a.0 < b.0 || (a.0 == b.0 && a.1 < b.1) {
                s
            } else {
                best
            }
        })
    }

    /// Whether no member dominates another.
    pub fn is_mutually_non_dominated(&self) -> bool {
        self.solutions.iter().all(|a| {
            self.solutions
                .iter()
                .all(|b| !dominates(a.objectives(), b.objectives()))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sol(ff: f64, fs: f64, tag: usize) -> SolutionPath {
        SolutionPath {
            nodes: vec![0, tag],
            ff,
            fs,
        }
    }

    #[test]
    fn empty_accepts() {
        let mut a = ParetoArchive::new();
        assert!(a.insert(sol(3.0, 4.0, 1)));
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn incomparable_both_kept() {
        let mut a = ParetoArchive::new();
        a.insert(sol(10.0, 20.0, 1));
        assert!(a.insert(sol(5.0, 25.0, 2)));
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn dominated_rejected_dominating_evicts() {
        let mut a = ParetoArchive::new();
        a.insert(sol(10.0, 20.0, 1));
        a.insert(sol(12.0, 15.0, 2));
        assert!(!a.insert(sol(11.0, 21.0, 3)));
        assert_eq!(a.len(), 2);
        assert!(a.insert(sol(9.0, 14.0, 4)));
        assert_eq!(a.solutions(), &[sol(9.0, 14.0, 4)]);
    }

    #[test]
    fn equal_objectives_kept_once() {
        let mut a = ParetoArchive::new();
        assert!(a.insert(sol(1.0, 2.0, 1)));
        assert!(!a.insert(sol(1.0, 2.0, 1)));
        // same objectives, different route
        assert!(!a.insert(sol(1.0, 2.0, 2)));
        assert_eq!(a.solutions(), &[sol(1.0, 2.0, 1)]);
    }

    #[test]
    fn best_selectors() {
        let mut a = ParetoArchive::new();
        a.insert(sol(10.0, 20.0, 1));
        a.insert(sol(5.0, 25.0, 2));
        a.insert(sol(15.0, 12.0, 3));
        assert_eq!(a.best_speed().unwrap().ff, 5.0);
        assert_eq!(a.best_safety().unwrap().fs, 12.0);
        assert!(a.is_mutually_non_dominated());
    }
}
