//! The `ECSEQ v1` family file.
//!
//! ```text
//! ECSEQ v1 n=<n> t=<t> d=<d> N=<N> M=<M>
//! <provenance as one JSON object with sorted keys, or {}>
//! <M lines of lowercase hex, N bits each, most significant bit first>
//! ```

use std::io::{BufRead, Write};

use crate::bits::BitSeq;
use crate::error::{Error, Result};
use crate::sequence::{Provenance, SequenceFamily};

pub const MAGIC: &str = "ECSEQ v1";

/// JSON with object keys in sorted order, on one line.
pub fn to_sorted_json<T: serde::Serialize>(value: &T) -> Result<String> {
    // serde_json's Value map is a BTreeMap unless `preserve_order` is enabled
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string(&v)?)
}

pub fn to_sorted_json_pretty<T: serde::Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string_pretty(&v)?)
}

pub fn header_line(f: &SequenceFamily) -> String {
    format!(
        "{MAGIC} n={} t={} d={} N={} M={}",
        f.n,
        f.t,
        f.d,
        f.len(),
        f.size()
    )
}

pub fn write_family<W: Write>(f: &SequenceFamily, mut w: W) -> Result<()> {
    writeln!(w, "{}", header_line(f))?;
    match &f.provenance {
        Some(p) => writeln!(w, "{}", to_sorted_json(p)?)?,
        None => writeln!(w, "{{}}")?,
    }
    for row in &f.rows {
        writeln!(w, "{}", row.to_hex())?;
    }
    Ok(())
}

pub fn family_to_bytes(f: &SequenceFamily) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    write_family(f, &mut out)?;
    Ok(out)
}

struct Header {
    n: u32,
    t: i64,
    d: u32,
    len: usize,
    size: usize,
}

fn parse_header(line: &str) -> Result<Header> {
    let rest = line
        .strip_prefix(MAGIC)
        .ok_or_else(|| Error::Format(format!("missing {MAGIC:?} header")))?;
    let fields: Vec<&str> = rest.split_whitespace().collect();
    let keys = ["n", "t", "d", "N", "M"];
    if fields.len() != keys.len() {
        return Err(Error::Format("header must carry n, t, d, N, M".into()));
    }
    let mut vals = [0i64; 5];
    for ((field, key), val) in fields.iter().zip(keys).zip(vals.iter_mut()) {
        let v = field
            .strip_prefix(key)
            .and_then(|s| s.strip_prefix('='))
            .ok_or_else(|| Error::Format(format!("expected {key}=..., found {field:?}")))?;
        *val = v
            .parse()
            .map_err(|_| Error::Format(format!("bad integer in {field:?}")))?;
    }
    let [n, t, d, len, size] = vals;
    let nonneg = |v: i64, what: &str| -> Result<u64> {
        u64::try_from(v).map_err(|_| Error::Format(format!("{what} must be nonnegative")))
    };
    let h = Header {
        n: nonneg(n, "n")? as u32,
        t,
        d: nonneg(d, "d")? as u32,
        len: nonneg(len, "N")? as usize,
        size: nonneg(size, "M")? as usize,
    };
    if !(1..=62).contains(&h.n) || (1i64 << h.n) + 1 + h.t != h.len as i64 {
        return Err(Error::Format("header N differs from 2^n + 1 + t".into()));
    }
    Ok(h)
}

pub fn read_family<R: BufRead>(r: R) -> Result<SequenceFamily> {
    let mut lines = r.lines();
    let mut next = |what: &str| -> Result<String> {
        lines
            .next()
            .transpose()?
            .ok_or_else(|| Error::Format(format!("file ends before the {what}")))
    };
    let h = parse_header(&next("header")?)?;
    let prov_line = next("provenance line")?;
    let prov_value: serde_json::Value = serde_json::from_str(&prov_line)
        .map_err(|e| Error::Format(format!("provenance is not JSON: {e}")))?;
    let provenance = match prov_value.as_object() {
        Some(m) if m.is_empty() => None,
        Some(_) => {
            let p: Provenance = serde_json::from_value(prov_value)
                .map_err(|e| Error::Format(format!("bad provenance: {e}")))?;
            if p.curve.field.n != h.n || p.curve.t != h.t || p.place.d != h.d {
                return Err(Error::Format("provenance disagrees with the header".into()));
            }
            Some(p)
        }
        None => return Err(Error::Format("provenance must be a JSON object".into())),
    };
    let mut rows = Vec::with_capacity(h.size);
    for k in 0..h.size {
        let line = next(&format!("row {}", k + 1))?;
        rows.push(BitSeq::from_hex(h.len, line.trim_end())?);
    }
    for extra in lines {
        if !extra?.trim().is_empty() {
            return Err(Error::Format(format!("more than M={} rows", h.size)));
        }
    }
    Ok(SequenceFamily {
        n: h.n,
        t: h.t,
        d: h.d,
        rows,
        provenance,
    })
}

pub fn family_from_bytes(bytes: &[u8]) -> Result<SequenceFamily> {
    read_family(bytes)
}
