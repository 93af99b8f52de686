//! The reproduction suite for the worked examples and the randomized
//! property harness, both producing a [`Report`].

pub mod checks;
mod examples;
mod fuzz;
mod report;

pub use examples::run_paper_examples;
pub use fuzz::{run_fuzz, FuzzConfig, MIN_INTERIOR_THETAS};
pub use report::{Finding, Report, Repro, Timing, Verdict, VerifyError, Witness};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_examples_pass() {
        let r = run_paper_examples();
        assert!(r.passed(), "{}", r.render());
        assert!(r.first_error().is_none());
    }

    #[test]
    fn fuzz_is_deterministic() {
        let cfg = FuzzConfig {
            n: 4,
            trials: 12,
            p: 1,
            q: 2,
            seed: 9,
            ..FuzzConfig::default()
        };
        let a = run_fuzz(&cfg).unwrap();
        let b = run_fuzz(&cfg).unwrap();
        assert!(a.passed(), "{}", a.render());
        assert_eq!(a.deterministic(), b.deterministic());
    }

    #[test]
    fn fuzz_rejects_sizes_over_the_cap() {
        let cfg = FuzzConfig {
            n: 9,
            cap: 8,
            ..FuzzConfig::default()
        };
        assert!(matches!(run_fuzz(&cfg), Err(VerifyError::Lattice(_))));
    }

    #[test]
    fn failing_verdict_becomes_an_error() {
        let mut r = Report::new("x", vec![]);
        r.verdict("a4-b4", "fact", false, "no");
        assert!(matches!(
            r.first_error(),
            Some(VerifyError::FixtureMismatch { .. })
        ));
    }
}
