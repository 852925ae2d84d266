//! One homonym per sense cluster: no cluster should mix senses of two
//! homonyms.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::{SenseCluster, SenseClustering};
use crate::lexicon::{Lexicon, SenseKey, SenseMap, Word};
use crate::ohpt::CheckSummary;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterStatus {
    Pure,
    Impure,
    /// No key of the cluster is in the sense map.
    Unverifiable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterVerdict {
    pub cluster_id: String,
    pub word: Word,
    /// Keys found in the sense map, with their homonym.
    pub checked_keys: Vec<(SenseKey, String)>,
    pub unchecked_keys: Vec<SenseKey>,
    pub homonym_ids: BTreeSet<String>,
    pub pure: bool,
    pub status: ClusterStatus,
}

pub fn check_cluster(cluster: &SenseCluster, sense_map: &SenseMap) -> ClusterVerdict {
    let mut checked_keys = Vec::new();
    let mut unchecked_keys = Vec::new();
    for key in &cluster.keys {
        match sense_map.homonym_of(key.as_str()) {
            Some(h) => checked_keys.push((key.clone(), h.to_owned())),
            None => unchecked_keys.push(key.clone()),
        }
    }
    let homonym_ids: BTreeSet<String> = checked_keys.iter().map(|(_, h)| h.clone()).collect();
    let pure = homonym_ids.len() <= 1;
    let status = if checked_keys.is_empty() {
        ClusterStatus::Unverifiable
    } else if pure {
        ClusterStatus::Pure
    } else {
        ClusterStatus::Impure
    };
    ClusterVerdict {
        cluster_id: cluster.id.clone(),
        word: cluster.word.clone(),
        checked_keys,
        unchecked_keys,
        homonym_ids,
        pure,
        status,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OhpscReport {
    /// Verdicts of participating clusters, sorted by cluster id. Includes
    /// unverifiable clusters.
    pub verdicts: Vec<ClusterVerdict>,
    /// Ids of clusters whose word is not a homonymous word of the lexicon.
    pub excluded_clusters: Vec<String>,
    pub unverifiable: usize,
    /// Over verifiable clusters only.
    pub summary: CheckSummary,
}

impl OhpscReport {
    pub fn from_verdicts(mut verdicts: Vec<ClusterVerdict>, mut excluded_clusters: Vec<String>) -> Self {
        verdicts.sort_by(|a, b| a.cluster_id.cmp(&b.cluster_id));
        excluded_clusters.sort();
        let unverifiable = verdicts
            .iter()
            .filter(|v| v.status == ClusterStatus::Unverifiable)
            .count();
        let impure = verdicts.iter().filter(|v| v.status == ClusterStatus::Impure).count();
        OhpscReport {
            summary: CheckSummary::new(verdicts.len() - unverifiable, impure),
            verdicts,
            excluded_clusters,
            unverifiable,
        }
    }

    pub fn exceptions(&self) -> impl Iterator<Item = &ClusterVerdict> {
        self.verdicts.iter().filter(|v| v.status == ClusterStatus::Impure)
    }
}

/// Splits clusters into participating (word is homonymous) and excluded.
pub fn participating<'c>(clustering: &'c SenseClustering, lexicon: &Lexicon) -> (Vec<&'c SenseCluster>, Vec<String>) {
    let mut inside = Vec::new();
    let mut excluded = Vec::new();
    for c in clustering.clusters() {
        if lexicon.is_homonymous(&c.word) {
            inside.push(c);
        } else {
            excluded.push(c.id.clone());
        }
    }
    (inside, excluded)
}

pub fn check_ohpsc(clustering: &SenseClustering, sense_map: &SenseMap, lexicon: &Lexicon) -> OhpscReport {
    let (inside, excluded) = participating(clustering, lexicon);
    let verdicts = inside.into_iter().map(|c| check_cluster(c, sense_map)).collect();
    OhpscReport::from_verdicts(verdicts, excluded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{HomonymEntry, Pos, SenseMapRow};
    use alloc::string::ToString;
    use alloc::vec;

    fn world() -> (Lexicon, SenseMap) {
        let entries = [("tap_blow", "tap"), ("tap_faucet", "tap"), ("pose_1", "pose")]
            .iter()
            .map(|(id, lemma)| HomonymEntry {
                homonym_id: id.to_string(),
                lemma: lemma.to_string(),
                pos_set: [Pos::Noun].into_iter().collect(),
                origin_language: String::new(),
                origin_form: String::new(),
                gloss: String::new(),
                translation_hint: String::new(),
            });
        let lex = Lexicon::from_entries(entries).unwrap();
        let rows = [
            ("tap%1:11:00::", "tap_blow"),
            ("tap%1:04:00::", "tap_blow"),
            ("tap%1:06:00::", "tap_faucet"),
        ];
        let map = SenseMap::build(
            rows.iter().enumerate().map(|(i, (k, h))| SenseMapRow {
                key: k.to_string(),
                homonym_id: h.to_string(),
                line: i + 1,
            }),
            &lex,
        );
        (lex, map)
    }

    fn cluster(id: &str, lemma: &str, keys: &[&str]) -> SenseCluster {
        SenseCluster {
            id: id.into(),
            word: Word::new(lemma, Pos::Noun).unwrap(),
            keys: keys.iter().map(|k| SenseKey::parse(k).unwrap()).collect(),
        }
    }

    #[test]
    fn tap_mixture_is_impure() {
        let (lex, map) = world();
        let clustering = SenseClustering::from_clusters(vec![
            cluster("c1", "tap", &["tap%1:11:00::", "tap%1:06:00::"]),
            cluster("c2", "tap", &["tap%1:04:00::"]),
            cluster("c3", "tap", &["tap%1:99:00::"]),
            cluster("c4", "pose", &["pose%1:01:00::"]),
        ])
        .unwrap();
        let r = check_ohpsc(&clustering, &map, &lex);
        let statuses: Vec<_> = r.verdicts.iter().map(|v| (v.cluster_id.as_str(), v.status)).collect();
        assert_eq!(
            statuses,
            vec![
                ("c1", ClusterStatus::Impure),
                ("c2", ClusterStatus::Pure),
                ("c3", ClusterStatus::Unverifiable),
            ]
        );
        assert_eq!(r.excluded_clusters, vec!["c4".to_string()]);
        assert_eq!(r.summary.instances, 2);
        assert_eq!(r.summary.inconsistent, 1);
        assert_eq!(r.unverifiable, 1);
    }

    #[test]
    fn singleton_cluster_is_pure() {
        let (_, map) = world();
        let v = check_cluster(&cluster("s", "tap", &["tap%1:06:00::"]), &map);
        assert!(v.pure);
        assert_eq!(v.status, ClusterStatus::Pure);
    }
}
