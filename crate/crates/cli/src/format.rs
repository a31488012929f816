//! Number parsing and printing shared by every subcommand.

/// Parses a non-negative integer written plainly (`1000000`, `1_000_000`) or
/// in scientific notation (`1e9`, `2.5e6`). The value must be an exact integer.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let t = s.trim().replace('_', "");
    let (mantissa, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (
            m,
            e.strip_prefix('+')
                .unwrap_or(e)
                .parse::<u32>()
                .map_err(|_| format!("`{s}`: bad exponent"))?,
        ),
        None => (t.as_str(), 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if (int.is_empty() && frac.is_empty())
        || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())
    {
        return Err(format!("`{s}` is not a non-negative integer"));
    }
    let frac = frac.trim_end_matches('0');
    if frac.len() as u32 > exp {
        return Err(format!("`{s}` is not an integer"));
    }
    let digits = format!("{int}{frac}");
    let scale = exp - frac.len() as u32;
    let too_big = || format!("`{s}` exceeds 64 bits");
    let mut v: u128 = digits.parse().map_err(|_| too_big())?;
    for _ in 0..scale {
        v = v.checked_mul(10).ok_or_else(too_big)?;
        if v > u64::MAX as u128 {
            return Err(too_big());
        }
    }
    u64::try_from(v).map_err(|_| too_big())
}

/// 12 significant digits, fixed notation for moderate magnitudes and
/// scientific otherwise. Non-finite values print as `nan`, `inf`, `-inf`.
pub fn sig12(v: f64) -> String {
    sig(v, 12)
}

pub fn sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}
