//! Observed option chains: spline interpolation of unobserved premiums and
//! the paired-strike reports comparing `x` with the observed ratio `x_obs`.
//!
//! Strikes are paired through the future, `K_call · K_put = F²`. The calls
//! table quotes `x = K_c/F - 1` and the puts table `x = F/K_p - 1`.

use std::io::Write;

use chrono::NaiveDate;

use crate::error::{invalid, LevyError, Result};
use crate::levy_models::{LevyModel, MarketParams};
use crate::numfmt::fmt_sig;
use crate::pricing_fourier::{euro_call_batch, put_from_call, FourierConfig};
use crate::spline::{NaturalSpline, MIN_SPLINE_POINTS};

/// Interpolated or observed denominators below this are not used in ratios.
pub const RATIO_FLOOR: f64 = 1e-10;

/// Median `|x - x_obs|` up to which a chain reads as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainRecord {
    pub strike: f64,
    pub call_mid: Option<f64>,
    pub put_mid: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptionChain {
    pub future: f64,
    pub valuation_date: Option<NaiveDate>,
    pub expiry_date: Option<NaiveDate>,
    pub records: Vec<ChainRecord>,
}

impl OptionChain {
    pub fn new(
        future: f64,
        valuation_date: Option<NaiveDate>,
        expiry_date: Option<NaiveDate>,
        records: Vec<ChainRecord>,
    ) -> Result<Self> {
        let chain = OptionChain {
            future,
            valuation_date,
            expiry_date,
            records,
        };
        chain.validate()?;
        Ok(chain)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.future > 0.0 && self.future.is_finite()) {
            return Err(invalid(format!("future must be positive, got {}", self.future)));
        }
        for w in self.records.windows(2) {
            if w[1].strike <= w[0].strike {
                return Err(invalid(format!(
                    "strikes must be strictly increasing: {} then {}",
                    w[0].strike, w[1].strike
                )));
            }
        }
        for r in &self.records {
            if !(r.strike > 0.0 && r.strike.is_finite()) {
                return Err(invalid(format!("strike must be positive, got {}", r.strike)));
            }
            for p in [r.call_mid, r.put_mid].into_iter().flatten() {
                if !(p >= 0.0 && p.is_finite()) {
                    return Err(invalid(format!(
                        "price at strike {} must be nonnegative, got {p}",
                        r.strike
                    )));
                }
            }
        }
        let calls = self.calls().len();
        let puts = self.puts().len();
        if calls < MIN_SPLINE_POINTS {
            return Err(LevyError::InsufficientPoints {
                need: MIN_SPLINE_POINTS,
                got: calls,
            });
        }
        if puts < MIN_SPLINE_POINTS {
            return Err(LevyError::InsufficientPoints {
                need: MIN_SPLINE_POINTS,
                got: puts,
            });
        }
        Ok(())
    }

    pub fn calls(&self) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .filter_map(|r| r.call_mid.map(|c| (r.strike, c)))
            .collect()
    }

    pub fn puts(&self) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .filter_map(|r| r.put_mid.map(|p| (r.strike, p)))
            .collect()
    }

    /// European chain priced from `model` on futures-style inputs (`delta = r`).
    pub fn synthetic(
        model: &LevyModel,
        future: f64,
        r: f64,
        t: f64,
        call_strikes: &[f64],
        put_strikes: &[f64],
        cfg: &FourierConfig,
    ) -> Result<Self> {
        let market = MarketParams::futures(future, r, t)?;
        let model = model.mean_correct(r, r)?;
        let mut strikes: Vec<f64> = call_strikes.iter().chain(put_strikes).copied().collect();
        strikes.sort_by(f64::total_cmp);
        strikes.dedup();
        let calls = euro_call_batch(&market, &model, &strikes, cfg)?;
        let records = strikes
            .iter()
            .zip(calls)
            .map(|(&k, c)| ChainRecord {
                strike: k,
                call_mid: call_strikes.contains(&k).then_some(c),
                put_mid: put_strikes
                    .contains(&k)
                    .then(|| put_from_call(&market, k, c)),
            })
            .collect();
        Self::new(future, None, None, records)
    }
}

fn parse_date(s: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .or_else(|_| NaiveDate::parse_from_str(s, "%m/%d/%Y"))
        .ok()
}

/// Reads the chain CSV: `#F=`, `#valuation=`, `#expiry=` header lines, then
/// columns `strike,call_mid,put_mid` with blanks for unobserved premiums.
pub fn parse_chain_csv(text: &str) -> Result<OptionChain> {
    let mut future = None;
    let mut valuation = None;
    let mut expiry = None;
    for (i, line) in text.lines().enumerate() {
        let Some(meta) = line.trim().strip_prefix('#') else {
            continue;
        };
        let Some((key, value)) = meta.split_once('=') else {
            continue;
        };
        let value = value.trim();
        let bad = |what: &str| LevyError::Format {
            line: i + 1,
            message: format!("cannot parse {what} from {value:?}"),
        };
        match key.trim() {
            "F" => future = Some(value.parse::<f64>().map_err(|_| bad("future price"))?),
            "valuation" => valuation = Some(parse_date(value).ok_or_else(|| bad("valuation date"))?),
            "expiry" => expiry = Some(parse_date(value).ok_or_else(|| bad("expiry date"))?),
            _ => {}
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes());
    let header_line = reader
        .headers()
        .map_err(|e| LevyError::Format {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?
        .clone();
    let expected = ["strike", "call_mid", "put_mid"];
    if header_line.iter().collect::<Vec<_>>() != expected {
        return Err(LevyError::Format {
            line: reader.position().line() as usize,
            message: format!("expected header strike,call_mid,put_mid, got {:?}", header_line),
        });
    }

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| LevyError::Format {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let field = |idx: usize, name: &str| -> Result<Option<f64>> {
            let raw = row.get(idx).unwrap_or("");
            if raw.is_empty() {
                return Ok(None);
            }
            raw.parse::<f64>().map(Some).map_err(|_| LevyError::Format {
                line,
                message: format!("cannot parse {name} from {raw:?}"),
            })
        };
        let strike = field(0, "strike")?.ok_or_else(|| LevyError::Format {
            line,
            message: "missing strike".into(),
        })?;
        records.push(ChainRecord {
            strike,
            call_mid: field(1, "call_mid")?,
            put_mid: field(2, "put_mid")?,
        });
    }

    let future = future.ok_or_else(|| LevyError::Format {
        line: 1,
        message: "missing #F= header line".into(),
    })?;
    OptionChain::new(future, valuation, expiry, records)
}

/// Writes a chain in the format [`parse_chain_csv`] reads. Premiums use the
/// shortest representation that parses back to the same `f64`.
pub fn write_chain_csv(chain: &OptionChain, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "#F={}", chain.future)?;
    if let Some(d) = chain.valuation_date {
        writeln!(out, "#valuation={}", d.format("%Y-%m-%d"))?;
    }
    if let Some(d) = chain.expiry_date {
        writeln!(out, "#expiry={}", d.format("%Y-%m-%d"))?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["strike", "call_mid", "put_mid"])?;
    let opt = |v: Option<f64>| v.map(|p| p.to_string()).unwrap_or_default();
    for r in &chain.records {
        w.write_record([r.strike.to_string(), opt(r.call_mid), opt(r.put_mid)])?;
    }
    w.flush()
}

/// Paired put strike and moneyness for a call strike: `(F²/K_c, K_c/F - 1)`.
pub fn pair_for_call(future: f64, k_call: f64) -> (f64, f64) {
    (future * future / k_call, k_call / future - 1.0)
}

/// Paired call strike and moneyness for a put strike: `(F²/K_p, F/K_p - 1)`.
pub fn pair_for_put(future: f64, k_put: f64) -> (f64, f64) {
    (future * future / k_put, future / k_put - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkReportRow {
    pub k_primary: f64,
    pub k_paired: f64,
    pub x: f64,
    pub x_obs: f64,
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkReport {
    pub rows: Vec<SkReportRow>,
    /// Rows dropped because the paired strike fell outside the spline range
    /// or the ratio denominator was below the floor.
    pub omitted: usize,
}

impl SkReport {
    pub fn write_csv(&self, out: impl Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k_primary", "k_paired", "x", "x_obs", "excess"])?;
        for r in &self.rows {
            w.write_record([r.k_primary, r.k_paired, r.x, r.x_obs, r.excess].map(|v| fmt_sig(v, 10)))?;
        }
        w.flush()
    }
}

/// Observed calls against spline-interpolated puts at `K_p = F²/K_c`.
pub fn table_calls_vs_interp_puts(chain: &OptionChain) -> Result<SkReport> {
    chain.validate()?;
    let put_spline = NaturalSpline::fit(&chain.puts())?;
    let f = chain.future;
    let mut rows = Vec::new();
    let mut omitted = 0;
    for (k_c, c_obs) in chain.calls() {
        let (k_p, x) = pair_for_call(f, k_c);
        match put_spline.eval(k_p) {
            Ok(p_int) if p_int >= RATIO_FLOOR => {
                let x_obs = c_obs / p_int - 1.0;
                rows.push(SkReportRow {
                    k_primary: k_c,
                    k_paired: k_p,
                    x,
                    x_obs,
                    excess: x - x_obs,
                });
            }
            _ => omitted += 1,
        }
    }
    Ok(SkReport { rows, omitted })
}

/// Observed puts against spline-interpolated calls at `K_c = F²/K_p`.
pub fn table_puts_vs_interp_calls(chain: &OptionChain) -> Result<SkReport> {
    chain.validate()?;
    let call_spline = NaturalSpline::fit(&chain.calls())?;
    let f = chain.future;
    let mut rows = Vec::new();
    let mut omitted = 0;
    for (k_p, p_obs) in chain.puts() {
        let (k_c, x) = pair_for_put(f, k_p);
        match call_spline.eval(k_c) {
            Ok(c_int) if p_obs >= RATIO_FLOOR => {
                let x_obs = c_int / p_obs - 1.0;
                rows.push(SkReportRow {
                    k_primary: k_p,
                    k_paired: k_c,
                    x,
                    x_obs,
                    excess: x - x_obs,
                });
            }
            _ => omitted += 1,
        }
    }
    Ok(SkReport { rows, omitted })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ConsistentWithSymmetry,
    /// Out-of-the-money calls richer than the x% rule (`x_obs > x`).
    CallSkew,
    /// Out-of-the-money puts richer than the x% rule (`x_obs < x`).
    PutSkew,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ConsistentWithSymmetry => "consistent-with-symmetry",
            Verdict::CallSkew => "call-skew",
            Verdict::PutSkew => "put-skew",
        }
    }
}

/// Row counts by moneyness (`x > 0` is out of the money in both tables).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SideCounts {
    pub obs_below_x: usize,
    pub obs_above_x: usize,
    pub equal: usize,
}

impl SideCounts {
    fn add(&mut self, row: &SkReportRow) {
        if row.x_obs < row.x {
            self.obs_below_x += 1;
        } else if row.x_obs > row.x {
            self.obs_above_x += 1;
        } else {
            self.equal += 1;
        }
    }

    pub fn total(&self) -> usize {
        self.obs_below_x + self.obs_above_x + self.equal
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainSummary {
    pub rows: usize,
    pub omitted: usize,
    pub otm: SideCounts,
    pub itm: SideCounts,
    /// Median of `x - x_obs` over the OTM rows (all rows if none are OTM).
    pub median_excess: f64,
    pub median_abs_excess: f64,
    pub verdict: Verdict,
}

impl ChainSummary {
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            s.push_str(k);
            s.push('=');
            s.push_str(&v);
            s.push('\n');
        };
        kv("rows", self.rows.to_string());
        kv("omitted", self.omitted.to_string());
        kv("otm_x_obs_below_x", self.otm.obs_below_x.to_string());
        kv("otm_x_obs_above_x", self.otm.obs_above_x.to_string());
        kv("itm_x_obs_below_x", self.itm.obs_below_x.to_string());
        kv("itm_x_obs_above_x", self.itm.obs_above_x.to_string());
        kv("median_excess", fmt_sig(self.median_excess, 10));
        kv("median_abs_excess", fmt_sig(self.median_abs_excess, 10));
        kv("verdict", self.verdict.as_str().to_string());
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub calls_table: SkReport,
    pub puts_table: SkReport,
    pub summary: ChainSummary,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn chain_report(chain: &OptionChain) -> Result<ChainReport> {
    let calls_table = table_calls_vs_interp_puts(chain)?;
    let puts_table = table_puts_vs_interp_calls(chain)?;
    let all: Vec<&SkReportRow> = calls_table.rows.iter().chain(&puts_table.rows).collect();
    if all.is_empty() {
        return Err(LevyError::EmptyTable);
    }
    let mut otm = SideCounts::default();
    let mut itm = SideCounts::default();
    for row in &all {
        if row.x > 0.0 {
            otm.add(row)
        } else {
            itm.add(row)
        }
    }
    let basis: Vec<&SkReportRow> = if otm.total() > 0 {
        all.iter().copied().filter(|r| r.x > 0.0).collect()
    } else {
        all.clone()
    };
    let median_excess = median(basis.iter().map(|r| r.excess).collect());
    let median_abs_excess = median(basis.iter().map(|r| r.excess.abs()).collect());
    let verdict = if median_abs_excess <= SYMMETRY_TOL {
        Verdict::ConsistentWithSymmetry
    } else if median_excess < 0.0 {
        Verdict::CallSkew
    } else {
        Verdict::PutSkew
    };
    let summary = ChainSummary {
        rows: all.len(),
        omitted: calls_table.omitted + puts_table.omitted,
        otm,
        itm,
        median_excess,
        median_abs_excess,
        verdict,
    };
    Ok(ChainReport {
        calls_table,
        puts_table,
        summary,
    })
}

pub fn diagnose(chain: &OptionChain) -> Result<ChainSummary> {
    chain_report(chain).map(|r| r.summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    const F: f64 = 1303.82;

    #[test]
    fn reference_rows() {
        let (kp, x) = pair_for_call(F, 1230.0);
        assert!((kp - 1382.07).abs() <= 0.01);
        assert!((x - -0.05662).abs() <= 1e-5);
        let (_, x) = pair_for_call(F, 1305.0);
        assert!((x - 0.000905).abs() <= 1e-6);
        let (kc, x) = pair_for_put(F, 1250.0);
        assert!((kc - 1359.957).abs() <= 1e-3);
        assert!((x - 0.043056).abs() <= 1e-6);
        let (kc, x) = pair_for_put(F, 1375.0);
        assert!((kc - 1236.325).abs() <= 1e-3);
        assert!((x - -0.05177).abs() <= 1e-5);
    }

    #[test]
    fn at_the_money_forward_is_zero() {
        assert_eq!(pair_for_call(F, F).1, 0.0);
        assert_eq!(pair_for_put(F, F).1, 0.0);
    }

    fn toy_chain() -> OptionChain {
        let records = (0..9)
            .map(|i| {
                let k = 90.0 + 2.5 * i as f64;
                ChainRecord {
                    strike: k,
                    call_mid: Some((100.0 - k).max(0.0) + 2.0 + 0.01 * i as f64),
                    put_mid: Some((k - 100.0).max(0.0) + 2.0 - 0.01 * i as f64),
                }
            })
            .collect();
        OptionChain::new(100.0, None, None, records).unwrap()
    }

    #[test]
    fn csv_round_trip() {
        let mut chain = toy_chain();
        chain.valuation_date = NaiveDate::from_ymd_opt(2006, 8, 31);
        chain.expiry_date = NaiveDate::from_ymd_opt(2006, 9, 15);
        let mut buf = Vec::new();
        write_chain_csv(&chain, &mut buf).unwrap();
        let back = parse_chain_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, chain);
    }

    #[test]
    fn csv_accepts_blanks_and_us_dates() {
        let text = "#F=100\n#valuation=08/31/2006\n#expiry=2006-09-15\nstrike,call_mid,put_mid\n\
                    90,10.5,\n95,6.1,1.2\n100,3.0,2.9\n105,1.1,6.0\n110,,10.2\n115,0.2,14.9\n";
        let chain = parse_chain_csv(text).unwrap();
        assert_eq!(chain.records.len(), 6);
        assert_eq!(chain.records[0].put_mid, None);
        assert_eq!(chain.records[4].call_mid, None);
        assert_eq!(chain.valuation_date, NaiveDate::from_ymd_opt(2006, 8, 31));
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        let text = "#F=100\nstrike,call_mid,put_mid\n90,1,1\n95,abc,1\n";
        match parse_chain_csv(text) {
            Err(LevyError::Format { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_chain_csv("strike,call_mid,put_mid\n"),
            Err(LevyError::Format { .. })
        ));
        assert!(parse_chain_csv("").is_err());
    }

    #[test]
    fn chain_needs_support() {
        let records = (0..5)
            .map(|i| ChainRecord {
                strike: 90.0 + i as f64,
                call_mid: Some(1.0),
                put_mid: (i < 3).then_some(1.0),
            })
            .collect();
        assert!(matches!(
            OptionChain::new(100.0, None, None, records),
            Err(LevyError::InsufficientPoints { got: 3, .. })
        ));
    }

    #[test]
    fn rows_satisfy_pairing() {
        let report = chain_report(&toy_chain()).unwrap();
        for r in report.calls_table.rows.iter().chain(&report.puts_table.rows) {
            assert!((r.k_primary * r.k_paired - 1e4).abs() <= 1e4 * 1e-12);
        }
        assert_eq!(
            report.summary.rows + report.summary.omitted,
            2 * toy_chain().records.len()
        );
    }

    #[test]
    fn single_usable_row() {
        // Only K_c = 100 pairs inside the put knots; the one put whose pair
        // lands among the call knots has a zero premium and is dropped.
        let rec = |k: f64, c: Option<f64>, p: Option<f64>| ChainRecord {
            strike: k,
            call_mid: c,
            put_mid: p,
        };
        let records = vec![
            rec(60.0, Some(41.0), None),
            rec(70.0, Some(31.0), None),
            rec(80.0, Some(21.0), None),
            rec(94.0, None, Some(4.0)),
            rec(96.0, None, Some(3.0)),
            rec(98.0, None, Some(2.0)),
            rec(100.0, Some(2.5), None),
            rec(100.5, None, Some(0.0)),
        ];
        let chain = OptionChain::new(100.0, None, None, records).unwrap();
        let report = chain_report(&chain).unwrap();
        let summary = &report.summary;
        assert_eq!(summary.rows, 1);
        assert_eq!(summary.omitted, 7);
        let row = report.calls_table.rows[0];
        assert_eq!((row.k_primary, row.x), (100.0, 0.0));
        assert_eq!(summary.itm.total(), 1);
        assert_eq!(summary.median_excess, row.excess);
        let expected = if row.excess < 0.0 { Verdict::CallSkew } else { Verdict::PutSkew };
        assert_eq!(summary.verdict, expected);
    }

    #[test]
    fn empty_table() {
        let mut records: Vec<ChainRecord> = [80.0, 85.0, 90.0, 95.0]
            .iter()
            .map(|&k| ChainRecord { strike: k, call_mid: Some(1.0), put_mid: None })
            .collect();
        records.extend([126.0, 130.0, 135.0, 140.0].iter().map(|&k| ChainRecord {
            strike: k,
            call_mid: None,
            put_mid: Some(1.0),
        }));
        let chain = OptionChain::new(100.0, None, None, records).unwrap();
        assert_eq!(diagnose(&chain), Err(LevyError::EmptyTable));
    }
}
