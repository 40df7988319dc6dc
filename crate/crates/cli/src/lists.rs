//! Parameter lists given as `a,b,c` or `start:stop:step`, or a mix of both.

use std::str::FromStr;

use anyhow::{bail, Context, Result};

fn parse_one<T: FromStr>(s: &str) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    s.trim().parse::<T>().with_context(|| format!("cannot parse '{s}'"))
}

/// Integer values; ranges include `stop` when it lies on the grid.
pub fn parse_u32_list(spec: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for item in spec.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts[..] {
            [v] => out.push(parse_one(v)?),
            [a, b, c] => {
                let (start, stop, step): (u32, u32, u32) = (parse_one(a)?, parse_one(b)?, parse_one(c)?);
                if step == 0 || stop < start {
                    bail!("range '{item}' needs step > 0 and start <= stop");
                }
                out.extend((start..=stop).step_by(step as usize));
            }
            _ => bail!("'{item}' is neither a value nor start:stop:step"),
        }
    }
    Ok(out)
}

/// Real values; ranges include `stop` up to rounding in the step.
pub fn parse_f64_list(spec: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in spec.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts[..] {
            [v] => out.push(parse_one(v)?),
            [a, b, c] => {
                let (start, stop, step): (f64, f64, f64) = (parse_one(a)?, parse_one(b)?, parse_one(c)?);
                if !(step > 0.0) || stop < start || !start.is_finite() || !stop.is_finite() {
                    bail!("range '{item}' needs step > 0 and start <= stop");
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize;
                out.extend((0..=count).map(|i| start + i as f64 * step));
            }
            _ => bail!("'{item}' is neither a value nor start:stop:step"),
        }
    }
    Ok(out)
}
