pub mod generate;
pub mod oracle;

use std::path::PathBuf;

use paso::AnswerSet;

use oracle::Interp;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../examples")
}

pub fn to_interp(h: &AnswerSet) -> Interp {
    h.iter().map(|(a, ann)| (a.clone(), (ann.lo().clone(), ann.hi().clone()))).collect()
}
