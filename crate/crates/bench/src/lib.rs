//! Inputs shared by the benchmarks.

use scaleplan_core::household::{self, full_team, record_instance};
use scaleplan_core::{lexical_seed, Domain, ProblemInstance, SeedAction, Team};

/// The two-goal kitchen task with `n` distractor objects, on the domain
/// that also carries the distractor schemas.
pub struct Case {
    pub domain: Domain,
    pub instance: ProblemInstance,
    pub team: Team,
    pub seeds: Vec<SeedAction>,
}

pub fn distractor_case(n: usize) -> Case {
    let domain = household::distractor_domain();
    let record = household::distractor_record(n);
    let instance = record_instance(&record, &domain);
    let team = full_team(&record.scene, &domain);
    let seeds = lexical_seed(&record.description, &domain, &instance)
        .expect("the kitchen task names its objects")
        .seeds;
    Case {
        domain,
        instance,
        team,
        seeds,
    }
}
