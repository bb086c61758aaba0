//! CSV tables with header `n,m,e`.

use iwagrowth::asymptotics::{Axis, GrowthPoint, GrowthTable};
use iwagrowth::{Error, Result};

fn field<T: std::str::FromStr>(row: usize, name: &str, raw: &str) -> Result<T> {
    raw.trim().parse().map_err(|_| Error::Parse(format!("row {row}: column {name} has `{raw}`, expected an integer")))
}

/// Parse a table. An empty `m` cell reads as `0`, or as `n` on the
/// diagonal axis.
pub fn read_table(text: &str, p: u64, axis: Axis) -> Result<GrowthTable> {
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes());
    let headers = rd.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse(format!("missing column `{name}`")));
    let (cn, cm, ce) = (col("n")?, col("m")?, col("e")?);
    let mut points = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| Error::Parse(format!("row {row}: {e}")))?;
        let n: u32 = field(row, "n", &rec[cn])?;
        let m: u32 = match rec[cm].trim() {
            "" if axis == Axis::Diagonal => n,
            "" => 0,
            s => field(row, "m", s)?,
        };
        let e: i128 = field(row, "e", &rec[ce])?;
        points.push(GrowthPoint { n, m, e });
    }
    if points.is_empty() {
        return Err(Error::Parse("the table has no rows".into()));
    }
    GrowthTable::new(p, axis, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_and_validates() {
        let t = read_table("n,m,e\n0,,1\n1,,2\n", 3, Axis::N).unwrap();
        assert_eq!(t.values(), vec![1, 2]);
        let t = read_table("n,m,e\n1,,6\n2,,27\n", 3, Axis::Diagonal).unwrap();
        assert_eq!(t.points[1].m, 2);
        assert!(read_table("n,m,e\n0,0,1\nn=2,e=-1\n", 3, Axis::N).is_err());
        assert!(read_table("n,m,e\n0,0,-1\n", 3, Axis::N).is_err());
        assert!(read_table("n,e\n0,1\n", 3, Axis::N).is_err());
        assert!(read_table("n,m,e\n", 3, Axis::N).is_err());
    }
}
