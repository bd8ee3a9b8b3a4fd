use std::collections::BTreeMap;
use std::fmt;

use chrono::NaiveDateTime;

use super::KnowledgeError;
use crate::graph::NodeId;

pub type UserId = String;

const ISO: &str = "%Y-%m-%dT%H:%M:%S";
const LEGACY: &str = "t%Y.%m.%d.%H.%M.%S";

/// Parses `2014-01-28T09:30:15` or the dotted form `t2014.01.28.09.30.15`.
pub fn parse_timestamp(text: &str) -> Result<NaiveDateTime, KnowledgeError> {
    let text = text.trim();
    NaiveDateTime::parse_from_str(text, ISO)
        .or_else(|_| NaiveDateTime::parse_from_str(text, LEGACY))
        .map_err(|_| KnowledgeError::Timestamp(text.to_string()))
}

pub fn format_timestamp(t: &NaiveDateTime) -> String {
    t.format(ISO).to_string()
}

/// One observation: a user detected at a node at a given second.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventRecord {
    pub user: UserId,
    pub node: NodeId,
    pub timestamp: NaiveDateTime,
}

impl EventRecord {
    pub fn new(user: impl Into<UserId>, node: impl Into<NodeId>, timestamp: NaiveDateTime) -> Self {
        EventRecord {
            user: user.into(),
            node: node.into(),
            timestamp,
        }
    }
}

impl fmt::Display for EventRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{}",
            self.user,
            self.node,
            format_timestamp(&self.timestamp)
        )
    }
}

/// Append-only event log; each user's events are non-decreasing in time.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventLog {
    events: Vec<EventRecord>,
    latest: BTreeMap<UserId, NaiveDateTime>,
}

impl EventLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record_event(&mut self, e: EventRecord) -> Result<(), KnowledgeError> {
        if let Some(prev) = self.latest.get(&e.user) {
            if e.timestamp < *prev {
                return Err(KnowledgeError::OutOfOrder {
                    user: e.user,
                    previous: format_timestamp(prev),
                    timestamp: format_timestamp(&e.timestamp),
                });
            }
        }
        self.latest.insert(e.user.clone(), e.timestamp);
        self.events.push(e);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[EventRecord] {
        &self.events
    }

    pub fn user_events<'a>(&'a self, user: &'a str) -> impl Iterator<Item = &'a EventRecord> + 'a {
        self.events.iter().filter(move |e| e.user == user)
    }

    pub fn users(&self) -> impl Iterator<Item = &UserId> {
        self.latest.keys()
    }

    /// Reads `user,node,timestamp` rows. A leading header row with exactly
    /// those names is skipped.
    pub fn from_csv(text: &str) -> Result<Self, KnowledgeError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut log = EventLog::new();
        for (i, row) in reader.records().enumerate() {
            let row = row.map_err(|e| KnowledgeError::Csv {
                line: e.position().map_or(i + 1, |p| p.line() as usize),
                message: e.to_string(),
            })?;
            let line = row.position().map_or(i + 1, |p| p.line() as usize);
            if i == 0 && row.iter().eq(["user", "node", "timestamp"]) {
                continue;
            }
            if row.len() != 3 {
                return Err(KnowledgeError::Csv {
                    line,
                    message: format!("expected 3 fields, found {}", row.len()),
                });
            }
            let timestamp = parse_timestamp(&row[2]).map_err(|e| KnowledgeError::Csv {
                line,
                message: e.to_string(),
            })?;
            log.record_event(EventRecord::new(&row[0], &row[1], timestamp))
                .map_err(|e| KnowledgeError::Csv {
                    line,
                    message: e.to_string(),
                })?;
        }
        Ok(log)
    }

    /// Writes the log with a `user,node,timestamp` header, in record order.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
        writer.write_record(["user", "node", "timestamp"]).unwrap();
        for e in &self.events {
            writer
                .write_record([
                    e.user.as_str(),
                    e.node.as_str(),
                    &format_timestamp(&e.timestamp),
                ])
                .unwrap();
        }
        String::from_utf8(writer.into_inner().unwrap()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(s: &str) -> NaiveDateTime {
        parse_timestamp(s).unwrap()
    }

    #[test]
    fn legacy_timestamp_form() {
        assert_eq!(ts("t2014.01.28.09.30.15"), ts("2014-01-28T09:30:15"));
        assert!(parse_timestamp("2014-01-28 09:30").is_err());
    }

    #[test]
    fn record_appends() {
        let mut log = EventLog::new();
        log.record_event(EventRecord::new(
            "idKR55",
            "p018",
            ts("2014-01-28T09:30:15"),
        ))
        .unwrap();
        assert_eq!(log.len(), 1);
    }

    #[test]
    fn out_of_order_rejected_per_user() {
        let mut log = EventLog::new();
        log.record_event(EventRecord::new("a", "g1", ts("2014-01-28T09:30:15")))
            .unwrap();
        log.record_event(EventRecord::new("b", "g1", ts("2014-01-28T08:00:00")))
            .unwrap();
        log.record_event(EventRecord::new("a", "r1", ts("2014-01-28T09:30:15")))
            .unwrap();
        let err = log
            .record_event(EventRecord::new("a", "g1", ts("2014-01-28T09:30:14")))
            .unwrap_err();
        assert!(matches!(err, KnowledgeError::OutOfOrder { .. }));
        assert_eq!(log.len(), 3);
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let text = "user,node,timestamp\nidKR55,g2,2014-01-28T09:30:00\nidKR55,p0018,t2014.01.28.09.30.15\n";
        let log = EventLog::from_csv(text).unwrap();
        assert_eq!(log.len(), 2);
        assert_eq!(
            log.to_csv(),
            "user,node,timestamp\nidKR55,g2,2014-01-28T09:30:00\nidKR55,p0018,2014-01-28T09:30:15\n"
        );
        assert_eq!(EventLog::from_csv(&log.to_csv()).unwrap(), log);
        let bad = EventLog::from_csv("a,g1\n").unwrap_err();
        assert!(matches!(bad, KnowledgeError::Csv { line: 1, .. }));
        let bad = EventLog::from_csv("a,g1,2014-01-28T09:30:00\na,g1,yesterday\n").unwrap_err();
        assert!(matches!(bad, KnowledgeError::Csv { line: 2, .. }));
        let bad =
            EventLog::from_csv("a,g1,2014-01-28T09:30:00\na,g1,2014-01-28T09:00:00\n").unwrap_err();
        assert!(matches!(bad, KnowledgeError::Csv { line: 2, .. }));
    }
}
