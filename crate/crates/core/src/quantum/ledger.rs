use core::ops::AddAssign;

/// Running count of oracle applications charged to one algorithm run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryLedger {
    oracle_queries: u64,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge(&mut self, queries: u64) {
        self.oracle_queries += queries;
    }

    pub fn queries(&self) -> u64 {
        self.oracle_queries
    }
}

impl AddAssign for QueryLedger {
    fn add_assign(&mut self, rhs: Self) {
        self.oracle_queries += rhs.oracle_queries;
    }
}
