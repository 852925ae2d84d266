//! Mapping an annotated instance to the homonym it represents.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::AnnotatedInstance;
use crate::lexicon::{Lexicon, SenseMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resolution<'a> {
    Homonym(&'a str),
    /// The instance's word is not in the set of homonymous words.
    NotHomonymous,
    /// None of the gold keys is in the sense map.
    Unmapped,
    /// A data error; the instance cannot take part in any check.
    DataError(DataErrorKind, BTreeSet<String>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataErrorKind {
    /// Gold keys of a single token map to more than one homonym.
    ConflictingHomonyms,
    /// The gold key maps to a homonym of some other word.
    ForeignHomonym,
}

/// An instance excluded from a check because its annotation is unusable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DataError {
    pub instance_id: String,
    pub kind: DataErrorKind,
    pub gold_keys: Vec<String>,
    pub homonyms: BTreeSet<String>,
}

/// Instances of homonymous words that did not take part in a check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    /// Instances whose gold keys are all missing from the sense map.
    pub unmapped: Vec<String>,
    pub data_errors: Vec<DataError>,
}

impl Skipped {
    pub fn absorb(&mut self, other: Skipped) {
        self.unmapped.extend(other.unmapped);
        self.data_errors.extend(other.data_errors);
    }

    pub fn sort(&mut self) {
        self.unmapped.sort();
        self.data_errors.sort();
    }
}

pub fn resolve<'a>(inst: &AnnotatedInstance, sense_map: &'a SenseMap, lexicon: &Lexicon) -> Resolution<'a> {
    let word = inst.word();
    if !lexicon.is_homonymous(&word) {
        return Resolution::NotHomonymous;
    }
    let mut homonyms: Vec<&'a str> = inst
        .gold_keys
        .iter()
        .filter_map(|k| sense_map.homonym_of(k.as_str()))
        .collect();
    homonyms.sort_unstable();
    homonyms.dedup();
    match homonyms.as_slice() {
        [] => Resolution::Unmapped,
        [h] if lexicon.represents(&word, h) => Resolution::Homonym(h),
        [h] => Resolution::DataError(
            DataErrorKind::ForeignHomonym,
            core::iter::once(String::from(*h)).collect(),
        ),
        many => Resolution::DataError(
            DataErrorKind::ConflictingHomonyms,
            many.iter().map(|h| String::from(*h)).collect(),
        ),
    }
}

/// Resolves `inst`, recording it in `skipped` when it cannot take part.
/// Returns `None` for skipped and non-homonymous instances.
pub fn resolve_or_skip<'a>(
    inst: &AnnotatedInstance,
    sense_map: &'a SenseMap,
    lexicon: &Lexicon,
    skipped: &mut Skipped,
) -> Option<&'a str> {
    match resolve(inst, sense_map, lexicon) {
        Resolution::Homonym(h) => Some(h),
        Resolution::NotHomonymous => None,
        Resolution::Unmapped => {
            skipped.unmapped.push(inst.id.clone());
            None
        }
        Resolution::DataError(kind, homonyms) => {
            skipped.data_errors.push(DataError {
                instance_id: inst.id.clone(),
                kind,
                gold_keys: inst.gold_keys.iter().map(|k| k.as_str().into()).collect(),
                homonyms,
            });
            None
        }
    }
}
