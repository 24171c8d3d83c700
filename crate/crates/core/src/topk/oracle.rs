use super::{check_k, Row, TopKResult};
use crate::error::Result;

/// Reference selection by full sort.
///
/// Orders by value descending with ties broken by lower index, takes the
/// first k, and returns them in ascending index order.
pub fn oracle_topk(row: &Row<'_>, k: usize) -> Result<TopKResult> {
    let values = row.values();
    check_k(k, values.len())?;

    let mut order: Vec<u32> = (0..values.len() as u32).collect();
    order.sort_by(|&a, &b| {
        values[b as usize]
            .partial_cmp(&values[a as usize])
            .expect("row is NaN-free")
            .then(a.cmp(&b))
    });
    order.truncate(k);
    order.sort_unstable();

    Ok(TopKResult {
        values: order.iter().map(|&i| values[i as usize]).collect(),
        indices: order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_largest() {
        let v = [1.0, 3.0, 2.0];
        let r = oracle_topk(&Row::new(&v).unwrap(), 2).unwrap();
        assert_eq!(r.indices, vec![1, 2]);
        assert_eq!(r.values, vec![3.0, 2.0]);
    }

    #[test]
    fn ties_break_to_lower_index() {
        let v = [5.0, 5.0, 1.0];
        let r = oracle_topk(&Row::new(&v).unwrap(), 1).unwrap();
        assert_eq!(r.indices, vec![0]);
    }

    #[test]
    fn rejects_bad_k() {
        let v = [5.0];
        assert!(oracle_topk(&Row::new(&v).unwrap(), 2).is_err());
    }
}
