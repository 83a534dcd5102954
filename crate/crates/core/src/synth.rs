//! Synthetic data written in the competition file layouts.
//!
//! The generated series are stand-ins for the public load, temperature and
//! solar files: they exercise the exact ingestion paths and give the models
//! realistic structure to learn (seasonal and diurnal temperature, heating
//! and cooling load, weekday and holiday effects, clear-sky PV shaped by a
//! persistent cloud process seen through an imperfect forecast). They are
//! not the competition data, and metrics on them are not comparable to
//! published numbers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use chrono::{Datelike, Duration, NaiveDate, Timelike};

use crate::attack::{derive_seed, NoiseRng};
use crate::dataio::HolidayCalendar;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub seed: u64,
    /// First and last day (inclusive) of the load/temperature history.
    pub load_days: (NaiveDate, NaiveDate),
    /// First and last day (inclusive) of the solar file.
    pub solar_days: (NaiveDate, NaiveDate),
    pub stations: usize,
    /// Zones written besides the aggregate zone 21.
    pub zones: usize,
    /// Mean of the aggregate zone, kW.
    pub load_scale_kw: f64,
    /// Blank cells sprinkled into the aggregate zone.
    pub missing_load_cells: usize,
    pub solar_zones: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 2012,
            load_days: (
                NaiveDate::from_ymd_opt(2004, 1, 1).unwrap(),
                NaiveDate::from_ymd_opt(2008, 6, 30).unwrap(),
            ),
            solar_days: (
                NaiveDate::from_ymd_opt(2012, 4, 1).unwrap(),
                NaiveDate::from_ymd_opt(2014, 4, 6).unwrap(),
            ),
            stations: 11,
            zones: 4,
            load_scale_kw: 400.0,
            missing_load_cells: 2,
            solar_zones: 1,
        }
    }
}

impl SynthConfig {
    /// A short span for fast tests: `days` days of load history and of solar.
    pub fn small(days: i64) -> Self {
        let d = Self::default();
        Self {
            load_days: (d.load_days.0, d.load_days.0 + Duration::days(days - 1)),
            solar_days: (d.solar_days.0, d.solar_days.0 + Duration::days(days - 1)),
            ..d
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthPaths {
    pub load: PathBuf,
    pub temperature: PathBuf,
    pub solar: PathBuf,
}

pub const LOAD_FILE: &str = "Load_history.csv";
pub const TEMPERATURE_FILE: &str = "temperature_history.csv";
pub const SOLAR_FILE: &str = "solar_predictors.csv";

struct Ar1 {
    phi: f64,
    sd: f64,
    state: f64,
}

impl Ar1 {
    /// `stationary_sd` is the long-run standard deviation.
    fn new(phi: f64, stationary_sd: f64) -> Self {
        Self {
            phi,
            sd: stationary_sd * (1.0 - phi * phi).sqrt(),
            state: 0.0,
        }
    }

    fn step(&mut self, rng: &mut NoiseRng) -> f64 {
        self.state = self.phi * self.state + self.sd * rng.normal();
        self.state
    }
}

fn thousands(v: i64) -> String {
    let digits = v.abs().to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(c);
    }
    if v < 0 {
        out.insert(0, '-');
    }
    if out.contains(',') {
        format!("\"{out}\"")
    } else {
        out
    }
}

fn daily_shape(hour: f64) -> f64 {
    0.62 + 0.22 * (-((hour - 8.0) / 2.5).powi(2)).exp() + 0.38 * (-((hour - 19.0) / 3.0).powi(2)).exp()
}

/// Writes the load, temperature and solar files into `dir`.
pub fn write_gefcom_files(dir: &Path, cfg: &SynthConfig) -> Result<SynthPaths> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = SynthPaths {
        load: dir.join(LOAD_FILE),
        temperature: dir.join(TEMPERATURE_FILE),
        solar: dir.join(SOLAR_FILE),
    };
    let (load_csv, temp_csv) = load_and_temperature(cfg);
    std::fs::write(&paths.load, load_csv).map_err(|e| Error::io(&paths.load, e))?;
    std::fs::write(&paths.temperature, temp_csv).map_err(|e| Error::io(&paths.temperature, e))?;
    std::fs::write(&paths.solar, solar(cfg)).map_err(|e| Error::io(&paths.solar, e))?;
    Ok(paths)
}

fn load_and_temperature(cfg: &SynthConfig) -> (String, String) {
    let mut rng = NoiseRng::new(derive_seed(cfg.seed, &[1]));
    let holidays = HolidayCalendar::UsFederal;
    let (start, end) = cfg.load_days;
    let days = (end - start).num_days() as usize + 1;
    let hours = days * 24;

    let mut weather = Ar1::new(0.985, 3.5);
    let regional: Vec<f64> = (0..hours)
        .map(|i| {
            let t = start.and_hms_opt(0, 0, 0).unwrap() + Duration::hours(i as i64);
            let doy = t.ordinal() as f64;
            let h = t.hour() as f64;
            13.0 + 12.0 * (std::f64::consts::TAU * (doy - 110.0) / 365.25).sin()
                + 4.5 * (std::f64::consts::TAU * (h - 9.0) / 24.0).sin()
                + weather.step(&mut rng)
        })
        .collect();

    let offsets: Vec<f64> = (0..cfg.stations).map(|_| 1.5 * rng.normal()).collect();
    let mut temp_csv = String::from("station_id,year,month,day");
    let hour_cols: String = (1..=24).map(|h| format!(",h{h}")).collect();
    temp_csv.push_str(&hour_cols);
    temp_csv.push('\n');
    for (s, offset) in offsets.iter().enumerate() {
        for d in 0..days {
            let date = start + Duration::days(d as i64);
            write!(temp_csv, "{},{},{},{}", s + 1, date.year(), date.month(), date.day()).unwrap();
            for h in 0..24 {
                let c = regional[d * 24 + h] + offset + 0.8 * rng.normal();
                write!(temp_csv, ",{}", (c * 9.0 / 5.0 + 32.0).round() as i64).unwrap();
            }
            temp_csv.push('\n');
        }
    }

    // zone shares of the aggregate
    let shares: Vec<f64> = (0..cfg.zones.max(1)).map(|z| 1.0 + 0.3 * z as f64).collect();
    let share_sum: f64 = shares.iter().sum();
    let mut zone_noise: Vec<Ar1> = shares.iter().map(|_| Ar1::new(0.9, 0.035)).collect();
    let mut zones = vec![vec![0.0; hours]; shares.len()];
    for i in 0..hours {
        let t = start.and_hms_opt(0, 0, 0).unwrap() + Duration::hours(i as i64);
        let temp = regional[i] + offsets.iter().sum::<f64>() / offsets.len().max(1) as f64;
        let heating = 0.022 * (16.0 - temp).max(0.0);
        let cooling = 0.035 * (temp - 21.0).max(0.0);
        let weekend = matches!(t.weekday(), chrono::Weekday::Sat | chrono::Weekday::Sun);
        let holiday = holidays.is_holiday(t.date());
        let day_factor = if holiday { 0.85 } else if weekend { 0.9 } else { 1.0 };
        let level = daily_shape(t.hour() as f64) * day_factor + heating + cooling;
        for (z, share) in shares.iter().enumerate() {
            let base = cfg.load_scale_kw * share / share_sum / 0.8;
            zones[z][i] = base * level * (1.0 + zone_noise[z].step(&mut rng));
        }
    }
    let aggregate: Vec<i64> = (0..hours)
        .map(|i| zones.iter().map(|z| z[i].round() as i64).sum())
        .collect();
    let blanks: Vec<usize> = (0..cfg.missing_load_cells)
        .map(|_| 24 + rng.below((hours.saturating_sub(48)).max(1) as u64) as usize)
        .collect();

    let mut load_csv = String::from("zone_id,year,month,day");
    load_csv.push_str(&hour_cols);
    load_csv.push('\n');
    let mut write_zone = |id: usize, values: &dyn Fn(usize) -> Option<i64>| {
        for d in 0..days {
            let date = start + Duration::days(d as i64);
            write!(load_csv, "{},{},{},{}", id, date.year(), date.month(), date.day()).unwrap();
            for h in 0..24 {
                match values(d * 24 + h) {
                    Some(v) => write!(load_csv, ",{}", thousands(v)).unwrap(),
                    None => load_csv.push(','),
                }
            }
            load_csv.push('\n');
        }
    };
    for (z, series) in zones.iter().enumerate() {
        write_zone(z + 1, &|i| Some(series[i].round() as i64));
    }
    write_zone(21, &|i| (!blanks.contains(&i)).then_some(aggregate[i]));
    (load_csv, temp_csv)
}

fn solar(cfg: &SynthConfig) -> String {
    let mut rng = NoiseRng::new(derive_seed(cfg.seed, &[2]));
    let (start, end) = cfg.solar_days;
    let hours = ((end - start).num_days() as usize + 1) * 24;
    let latitude = (-35.0f64).to_radians();
    let mut out = String::from(
        "ZONEID,TIMESTAMP,VAR78,VAR79,VAR134,VAR157,VAR164,VAR165,VAR166,VAR167,VAR169,VAR175,VAR178,VAR228,POWER\n",
    );
    for zone in 1..=cfg.solar_zones.max(1) {
        let mut cloud = Ar1::new(0.96, 1.4);
        let mut weather = Ar1::new(0.98, 2.5);
        let mut pressure = Ar1::new(0.995, 600.0);
        let mut wind_u = Ar1::new(0.95, 3.0);
        let mut wind_v = Ar1::new(0.95, 3.0);
        let mut forecast_err = Ar1::new(0.8, 0.7);
        for i in 0..hours {
            // hour-ending stamps, as in the competition files
            let stamp = start.and_hms_opt(1, 0, 0).unwrap() + Duration::hours(i as i64);
            let mid = stamp - Duration::minutes(30);
            let doy = mid.ordinal() as f64;
            let solar_hour = mid.hour() as f64 + mid.minute() as f64 / 60.0;
            let decl = 23.44f64.to_radians() * (std::f64::consts::TAU * (284.0 + doy) / 365.0).sin();
            let hour_angle = (15.0 * (solar_hour - 12.0)).to_radians();
            let sin_elev = latitude.sin() * decl.sin() + latitude.cos() * decl.cos() * hour_angle.cos();
            let clear = if sin_elev > 0.0 { 1050.0 * sin_elev.powf(1.15) } else { 0.0 };

            let c_latent = cloud.step(&mut rng) - 0.4;
            let cover = 1.0 / (1.0 + (-c_latent).exp());
            let cover_fc = 1.0 / (1.0 + (-(c_latent + forecast_err.step(&mut rng))).exp());
            let ghi = clear * (1.0 - 0.78 * cover.powf(2.2));
            let ghi_fc = clear * (1.0 - 0.78 * cover_fc.powf(2.2));

            let temp_c = 16.0
                + 6.0 * (std::f64::consts::TAU * (doy - 15.0) / 365.25).cos()
                + 5.0 * (std::f64::consts::TAU * (solar_hour - 9.0) / 24.0).sin()
                + weather.step(&mut rng)
                - 2.0 * cover;
            let cell = temp_c + ghi / 800.0 * 20.0;
            let power = (ghi / 1000.0 * 0.85 * (1.0 - 0.004 * (cell - 25.0)) + 0.01 * rng.normal())
                .clamp(0.0, 1.0);
            let power = if clear <= 0.0 { 0.0 } else { power };

            let liquid = (0.25 * cover_fc + 0.03 * rng.normal()).max(0.0);
            let ice = (0.08 * cover_fc * cover_fc + 0.01 * rng.normal()).max(0.0);
            let humidity = (55.0 + 35.0 * cover_fc - 1.2 * (temp_c - 16.0)).clamp(5.0, 100.0);
            let thermal = (300.0 + 4.0 * temp_c + 60.0 * cover_fc) * 3600.0;
            let top = clear * 1.25 * 3600.0;
            let precip = if cover_fc > 0.85 { 0.0004 * rng.unit() } else { 0.0 };
            writeln!(
                out,
                "{zone},{},{:.6},{:.6},{:.1},{:.3},{:.6},{:.4},{:.4},{:.3},{:.1},{:.1},{:.1},{:.7},{:.6}",
                stamp.format("%Y%m%d %H:%M"),
                liquid,
                ice,
                101_325.0 + pressure.step(&mut rng),
                humidity,
                cover_fc,
                wind_u.step(&mut rng),
                wind_v.step(&mut rng),
                temp_c + 273.15,
                ghi_fc * 3600.0,
                thermal,
                top,
                precip,
                power
            )
            .unwrap();
        }
    }
    out
}
