//! Calendar bucket labels for `BIN c BY interval`.

use chrono::{Datelike, NaiveDateTime, Weekday};

use vql_core::BinInterval;

/// Label of the bucket a time value falls into: `"2021"` by year,
/// `"2021-03"` by month, `"2021-03-02"` by day, and the English day
/// name by weekday.
pub fn bin_label(t: &NaiveDateTime, interval: BinInterval) -> String {
    match interval {
        BinInterval::Year => t.format("%Y").to_string(),
        BinInterval::Month => t.format("%Y-%m").to_string(),
        BinInterval::Day => t.format("%Y-%m-%d").to_string(),
        BinInterval::Weekday => weekday_name(t.weekday()).to_string(),
    }
}

pub fn weekday_name(w: Weekday) -> &'static str {
    match w {
        Weekday::Mon => "Monday",
        Weekday::Tue => "Tuesday",
        Weekday::Wed => "Wednesday",
        Weekday::Thu => "Thursday",
        Weekday::Fri => "Friday",
        Weekday::Sat => "Saturday",
        Weekday::Sun => "Sunday",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use relational_model::parse_time;

    #[test]
    fn labels_per_interval() {
        let t = parse_time("2021-03-02").unwrap();
        assert_eq!(bin_label(&t, BinInterval::Year), "2021");
        assert_eq!(bin_label(&t, BinInterval::Month), "2021-03");
        assert_eq!(bin_label(&t, BinInterval::Day), "2021-03-02");
        assert_eq!(bin_label(&t, BinInterval::Weekday), "Tuesday");
    }

    #[test]
    fn month_label_zero_pads() {
        let t = parse_time("1999-01-31").unwrap();
        assert_eq!(bin_label(&t, BinInterval::Month), "1999-01");
    }

    #[test]
    fn weekday_spans_the_whole_week() {
        // 2021-03-01 was a Monday.
        for (day, name) in (1..=7).zip([
            "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday",
        ]) {
            let t = parse_time(&format!("2021-03-{day:02}")).unwrap();
            assert_eq!(bin_label(&t, BinInterval::Weekday), name);
        }
    }
}
