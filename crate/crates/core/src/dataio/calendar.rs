use std::collections::BTreeSet;
use std::path::Path;

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, Timelike, Weekday};

use crate::error::{Error, Result};

/// Calendar covariates for one hourly timestamp.
///
/// `day_of_week` counts from Monday = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CalendarFeatures {
    pub month: u32,
    pub day_of_week: u32,
    pub day_of_year: u32,
    pub holiday: bool,
    pub hour_of_day: u32,
}

impl CalendarFeatures {
    pub fn new(ts: NaiveDateTime, holidays: &HolidayCalendar) -> Self {
        let date = ts.date();
        Self {
            month: date.month(),
            day_of_week: date.weekday().num_days_from_monday(),
            day_of_year: date.ordinal(),
            holiday: holidays.is_holiday(date),
            hour_of_day: ts.hour(),
        }
    }
}

/// Which dates count as holidays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HolidayCalendar {
    /// US federal holidays from their date rules, with weekend observance.
    UsFederal,
    /// An explicit list, typically read from a file.
    Dates(BTreeSet<NaiveDate>),
}

impl Default for HolidayCalendar {
    fn default() -> Self {
        HolidayCalendar::UsFederal
    }
}

impl HolidayCalendar {
    pub fn is_holiday(&self, date: NaiveDate) -> bool {
        match self {
            HolidayCalendar::UsFederal => us_federal_holidays(date.year()).contains(&date),
            HolidayCalendar::Dates(set) => set.contains(&date),
        }
    }

    /// One `YYYY-MM-DD` per line; blank lines and `#` comments ignored.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut dates = BTreeSet::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let date = NaiveDate::parse_from_str(line, "%Y-%m-%d").map_err(|e| {
                Error::SchemaMismatch(format!("{}:{}: {e}", path.display(), i + 1))
            })?;
            dates.insert(date);
        }
        Ok(HolidayCalendar::Dates(dates))
    }
}

fn nth_weekday(year: i32, month: u32, weekday: Weekday, n: u8) -> NaiveDate {
    NaiveDate::from_weekday_of_month_opt(year, month, weekday, n).expect("valid nth weekday")
}

fn last_weekday(year: i32, month: u32, weekday: Weekday) -> NaiveDate {
    NaiveDate::from_weekday_of_month_opt(year, month, weekday, 5)
        .unwrap_or_else(|| nth_weekday(year, month, weekday, 4))
}

/// Saturday holidays are observed the Friday before, Sunday ones the Monday after.
fn observed(date: NaiveDate) -> NaiveDate {
    match date.weekday() {
        Weekday::Sat => date - Duration::days(1),
        Weekday::Sun => date + Duration::days(1),
        _ => date,
    }
}

/// Observed US federal holiday dates falling in `year`.
pub fn us_federal_holidays(year: i32) -> Vec<NaiveDate> {
    let ymd = |m, d| NaiveDate::from_ymd_opt(year, m, d).unwrap();
    let mut fixed = vec![ymd(1, 1), ymd(7, 4), ymd(11, 11), ymd(12, 25)];
    if year >= 2021 {
        fixed.push(ymd(6, 19));
    }
    let mut out: Vec<NaiveDate> = fixed.into_iter().map(observed).collect();
    // Jan 1 of the following year observed on Dec 31.
    let next_new_year = NaiveDate::from_ymd_opt(year + 1, 1, 1).unwrap();
    if next_new_year.weekday() == Weekday::Sat {
        out.push(ymd(12, 31));
    }
    out.extend([
        nth_weekday(year, 1, Weekday::Mon, 3),
        nth_weekday(year, 2, Weekday::Mon, 3),
        last_weekday(year, 5, Weekday::Mon),
        nth_weekday(year, 9, Weekday::Mon, 1),
        nth_weekday(year, 10, Weekday::Mon, 2),
        nth_weekday(year, 11, Weekday::Thu, 4),
    ]);
    out.retain(|d| d.year() == year);
    out.sort();
    out.dedup();
    out
}
