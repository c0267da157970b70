//! `a,b,c` lists and `start:stop:count` grids.

use crate::CliError;

fn number(text: &str, flag: &str) -> Result<f64, CliError> {
    let x: f64 = text
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{flag}: `{text}` is not a number")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Config(format!("{flag}: `{text}` is not finite")))
    }
}

pub fn parse_list(text: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    let values = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| number(s, flag))
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(CliError::Config(format!("{flag}: empty list")));
    }
    Ok(values)
}

/// Evenly spaced, endpoints included; `count = 1` yields `start`.
pub fn parse_range(text: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(CliError::Config(format!(
            "{flag}: expected start:stop:count, got `{text}`"
        )));
    };
    let (start, stop) = (number(start, flag)?, number(stop, flag)?);
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{flag}: count `{count}` is not a positive integer")))?;
    match count {
        0 => Err(CliError::Config(format!("{flag}: count must be positive"))),
        1 => Ok(vec![start]),
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            Ok((0..count)
                .map(|i| if i == count - 1 { stop } else { start + step * i as f64 })
                .collect())
        }
    }
}
