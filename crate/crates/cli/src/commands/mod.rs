pub mod constants;
pub mod entropy;
pub mod estimate;
pub mod simulate;

use crate::Outcome;

pub(crate) fn outcome(pass: bool) -> Outcome {
    if pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

pub(crate) fn verdict_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
