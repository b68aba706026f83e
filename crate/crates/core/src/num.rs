use alloc::format;

/// Six-decimal rendering shared by every text output; never prints `-0.000000`.
pub struct Fixed6(pub f64);

impl core::fmt::Display for Fixed6 {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = alloc::format!("{:.6}", self.0);
        match s.strip_prefix('-') {
            Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => f.write_str(rest),
            _ => f.write_str(&s),
        }
    }
}

/// Rounds to the 6-decimal grid used by every text format, so parsed values
/// survive a serialize/parse cycle bit-for-bit.
pub(crate) fn quantize(x: f64) -> f64 {
    let q: f64 = format!("{x:.6}").parse().unwrap_or(x);
    // "-0.000000" parses to -0.0
    if q == 0.0 {
        0.0
    } else {
        q
    }
}
