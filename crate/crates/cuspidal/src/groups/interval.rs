//! Geodesic intervals computed from normal forms, without materializing a
//! ball. Used for hull work on groups whose balls are too large to build.

use std::collections::HashSet;

use crate::error::{Error, Result};

use super::model::{factor_offsets, syllables, Family, GroupModel};
use super::word::Word;

/// All elements lying on some geodesic from the identity to `w`, as
/// normal forms, sorted. Fails with a resource error if the interval
/// would exceed `cap` elements.
pub fn geodesic_interval_elements(model: &GroupModel, w: &Word, cap: usize) -> Result<Vec<Word>> {
    let nf = model.normal_form(w);
    let mut out: HashSet<Vec<i16>> = HashSet::new();
    interval_rec(model.family(), 0, nf.letters(), cap, &mut out)?;
    let mut words: Vec<Word> = out.into_iter().map(Word::from_trusted).collect();
    words.sort();
    Ok(words)
}

/// Number of distinct geodesic words from the identity to `w` in the
/// standard generators, saturating at `u64::MAX`.
pub fn geodesic_count(model: &GroupModel, w: &Word) -> u64 {
    let nf = model.normal_form(w);
    count_rec(model.family(), 0, nf.letters())
}

fn check_cap(out: &HashSet<Vec<i16>>, cap: usize) -> Result<()> {
    if out.len() > cap {
        return Err(Error::Resource { needed: out.len() as u64, budget: cap as u64 });
    }
    Ok(())
}

fn interval_rec(
    family: &Family,
    base: usize,
    letters: &[i16],
    cap: usize,
    out: &mut HashSet<Vec<i16>>,
) -> Result<()> {
    match family {
        Family::Free { .. } => {
            for k in 0..=letters.len() {
                out.insert(letters[..k].to_vec());
            }
            check_cap(out, cap)
        }
        Family::FreeAbelian { rank } => {
            let mut exps = vec![0i64; *rank];
            for &l in letters {
                exps[Word::letter_gen(l) - base] += if l > 0 { 1 } else { -1 };
            }
            // Box between 0 and the exponent vector, coordinatewise.
            let mut cur = vec![0i64; *rank];
            loop {
                let mut v = Vec::new();
                for (g, &e) in cur.iter().enumerate() {
                    let letter = ((base + g) as i16 + 1) * if exps[g] < 0 { -1 } else { 1 };
                    for _ in 0..e {
                        v.push(letter);
                    }
                }
                out.insert(v);
                check_cap(out, cap)?;
                // Odometer over 0..=|exps[g]|.
                let mut g = 0;
                loop {
                    if g == *rank {
                        return Ok(());
                    }
                    if cur[g] < exps[g].abs() {
                        cur[g] += 1;
                        break;
                    }
                    cur[g] = 0;
                    g += 1;
                }
            }
        }
        Family::FreeProduct { factors } => {
            let offsets = factor_offsets(factors, base);
            let sylls = syllables(factors, base, letters);
            out.insert(Vec::new());
            let mut prefix: Vec<i16> = Vec::new();
            for (f, syl) in &sylls {
                let mut inner: HashSet<Vec<i16>> = HashSet::new();
                interval_rec(&factors[*f], offsets[*f], syl, cap, &mut inner)?;
                for x in inner {
                    let mut v = prefix.clone();
                    v.extend_from_slice(&x);
                    out.insert(v);
                }
                check_cap(out, cap)?;
                prefix.extend_from_slice(syl);
            }
            Ok(())
        }
        Family::External(m) => {
            let target = m.evaluate_at(base, letters);
            let from_e = m.bfs_orbit(m.identity);
            let to_w = m.bfs_orbit(target);
            let total = from_e[target as usize];
            for v in 0..m.vertex_count() {
                if from_e[v] + to_w[v] == total {
                    out.insert(m.canonical_at(base, v as u32));
                }
            }
            check_cap(out, cap)
        }
    }
}

fn count_rec(family: &Family, base: usize, letters: &[i16]) -> u64 {
    match family {
        Family::Free { .. } => 1,
        Family::FreeAbelian { rank } => {
            let mut exps = vec![0u64; *rank];
            for &l in letters {
                exps[Word::letter_gen(l) - base] += 1;
            }
            multinomial(&exps)
        }
        Family::FreeProduct { factors } => {
            let offsets = factor_offsets(factors, base);
            let mut acc: u64 = 1;
            for (f, syl) in syllables(factors, base, letters) {
                acc = acc.saturating_mul(count_rec(&factors[f], offsets[f], &syl));
            }
            acc
        }
        Family::External(m) => {
            let target = m.evaluate_at(base, letters);
            m.count_orbit_geodesics(target)
        }
    }
}

/// (k1+...+kn)! / (k1! ... kn!), saturating.
fn multinomial(ks: &[u64]) -> u64 {
    let mut acc: u128 = 1;
    let mut n: u64 = 0;
    for &k in ks {
        for i in 1..=k {
            n += 1;
            acc = acc.saturating_mul(n as u128) / i as u128;
            if acc > u64::MAX as u128 {
                return u64::MAX;
            }
        }
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::ball::{cayley_ball, DEFAULT_VERTEX_BUDGET};
    use crate::groups::model::Family as F;

    #[test]
    fn free_interval_is_prefix_chain() {
        let m = GroupModel::free(2);
        let w = m.parse_word("a b a^-1").unwrap();
        let iv = geodesic_interval_elements(&m, &w, 1000).unwrap();
        assert_eq!(iv.len(), 4);
        assert_eq!(geodesic_count(&m, &w), 1);
    }

    #[test]
    fn abelian_interval_is_box() {
        let m = GroupModel::free_abelian(2);
        let w = m.parse_word("a^3 b^-3").unwrap();
        let iv = geodesic_interval_elements(&m, &w, 1000).unwrap();
        assert_eq!(iv.len(), 16); // 4 x 4 box
        assert_eq!(geodesic_count(&m, &w), 20); // C(6,3)
    }

    #[test]
    fn interval_matches_ball_interval() {
        let m = GroupModel::free_abelian(2);
        let w = m.parse_word("a^2 b^2").unwrap();
        let ball = cayley_ball(&m, 5, &[], DEFAULT_VERTEX_BUDGET).unwrap();
        let u = ball.origin();
        let v = ball.vertex_of(&w).unwrap();
        let graph_iv = ball.graph().geodesic_interval(u, v).unwrap();
        let group_iv = geodesic_interval_elements(&m, &w, 1000).unwrap();
        let mut graph_words: Vec<Word> =
            graph_iv.iter().map(|&x| ball.word_of(x).clone()).collect();
        graph_words.sort();
        assert_eq!(graph_words, group_iv);
        assert_eq!(
            ball.graph().count_geodesics(u, v).unwrap(),
            geodesic_count(&m, &w)
        );
    }

    #[test]
    fn product_interval_concatenates_syllable_boxes() {
        let m = GroupModel::free_product(vec![F::Free { rank: 1 }, F::FreeAbelian { rank: 2 }]);
        // a^2 (b c): interval = prefixes of a^2, then a^2 x (box of b c).
        let w = m.parse_word("a^2 b c").unwrap();
        let iv = geodesic_interval_elements(&m, &w, 1000).unwrap();
        // {e, a, a^2} + a^2{b, c, bc} = 6 elements.
        assert_eq!(iv.len(), 6);
        assert_eq!(geodesic_count(&m, &w), 2);
    }

    #[test]
    fn interval_cap_is_enforced() {
        let m = GroupModel::free_abelian(3);
        let w = m.parse_word("a^9 b^9 c^9").unwrap();
        assert!(geodesic_interval_elements(&m, &w, 100).is_err());
    }
}
