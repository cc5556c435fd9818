//! Message files: one `index: (c_1,...,c_m)` line per time index over the
//! encoder's source alphabet. Indices left out are zero.

use std::collections::BTreeMap;

use crate::spec::{parse_coords, ParseError};

/// First index and contiguous coordinates, or `(0, [])` for an empty file.
pub fn parse_message(text: &str, orders: &[u64]) -> Result<(i64, Vec<Vec<u64>>), ParseError> {
    let mut entries: BTreeMap<i64, Vec<u64>> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let (index, body) =
            content.split_once(':').ok_or_else(|| ParseError::new(line, format!("expected `index: symbol`, found `{content}`")))?;
        let index: i64 = index.trim().parse().map_err(|_| ParseError::new(line, format!("bad index `{}`", index.trim())))?;
        let coords = parse_coords(body.trim(), orders).map_err(|m| ParseError::new(line, m))?;
        if entries.insert(index, coords).is_some() {
            return Err(ParseError::new(line, format!("index {index} given twice")));
        }
    }
    let (Some((&first, _)), Some((&last, _))) = (entries.first_key_value(), entries.last_key_value()) else {
        return Ok((0, Vec::new()));
    };
    let symbols = (first..=last).map(|n| entries.remove(&n).unwrap_or_else(|| vec![0; orders.len()])).collect();
    Ok((first, symbols))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaps_are_zero() {
        let (first, syms) = parse_message("3: (1,2)\n1: (0,1)\n", &[2, 4]).unwrap();
        assert_eq!(first, 1);
        assert_eq!(syms, vec![vec![0, 1], vec![0, 0], vec![1, 2]]);
        assert_eq!(parse_message("# nothing\n", &[2]).unwrap(), (0, vec![]));
        assert_eq!(parse_message("0: 3", &[4]).unwrap(), (0, vec![vec![3]]));
    }

    #[test]
    fn errors() {
        assert_eq!(parse_message("0: (2,0)", &[2, 4]).unwrap_err().line, 1);
        assert_eq!(parse_message("0: (1,0)\n0: (1,1)", &[2, 4]).unwrap_err().line, 2);
        assert_eq!(parse_message("\nx: 1", &[2]).unwrap_err().line, 2);
        assert_eq!(parse_message("1 1", &[2]).unwrap_err().line, 1);
    }
}
