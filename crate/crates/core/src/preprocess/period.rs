use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A calendar quarter, written `YYYYQn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Period {
    year: i32,
    quarter: u8,
}

impl Period {
    pub fn new(year: i32, quarter: u8) -> Option<Self> {
        (1..=4).contains(&quarter).then_some(Self { year, quarter })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn quarter(self) -> u8 {
        self.quarter
    }

    pub fn next(self) -> Self {
        self.offset(1)
    }

    pub fn offset(self, quarters: i64) -> Self {
        let idx = self.ordinal() + quarters;
        Self {
            year: idx.div_euclid(4) as i32,
            quarter: (idx.rem_euclid(4) + 1) as u8,
        }
    }

    /// Quarters elapsed since year 0 Q1.
    pub fn ordinal(self) -> i64 {
        self.year as i64 * 4 + (self.quarter as i64 - 1)
    }

    /// `n` consecutive quarters starting at `self`.
    pub fn range(self, n: usize) -> Vec<Period> {
        (0..n as i64).map(|i| self.offset(i)).collect()
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}Q{}", self.year, self.quarter)
    }
}

impl FromStr for Period {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Domain(format!("malformed period `{s}`, expected YYYYQn"));
        let (year, quarter) = s.split_once('Q').ok_or_else(bad)?;
        if year.len() != 4 || !year.bytes().all(|b| b.is_ascii_digit()) || quarter.len() != 1 {
            return Err(bad());
        }
        let year: i32 = year.parse().map_err(|_| bad())?;
        let quarter: u8 = quarter.parse().map_err(|_| bad())?;
        Period::new(year, quarter).ok_or_else(bad)
    }
}

impl Serialize for Period {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Period {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p: Period = "2000Q1".parse().unwrap();
        assert_eq!(p, Period::new(2000, 1).unwrap());
        assert_eq!(p.to_string(), "2000Q1");
        for bad in ["2000Q5", "2000Q0", "00Q1", "2000-1", "2000q1", "2000Q12", ""] {
            assert!(bad.parse::<Period>().is_err(), "{bad}");
        }
    }

    #[test]
    fn arithmetic_wraps_years() {
        let p: Period = "2001Q4".parse().unwrap();
        assert_eq!(p.next().to_string(), "2002Q1");
        assert_eq!(p.offset(-4).to_string(), "2000Q4");
        assert_eq!(p.offset(2).ordinal() - p.ordinal(), 2);
        let start: Period = "2000Q2".parse().unwrap();
        let r = start.range(95);
        assert_eq!(r.last().unwrap().to_string(), "2023Q4");
    }
}
