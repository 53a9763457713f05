use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Monomial orders understood by the Gröbner engine.
///
/// Variable indices refer to the ring layout `[c_1..c_k, x_0?, x_1..x_n]`.
/// Unless stated otherwise the x-variables rank above the parameters and
/// within each block variables rank in declaration order, so the last
/// x-variable is the smallest x.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonomialOrder {
    /// One graded reverse lexicographic block, parameters ranked lowest.
    Grevlex,
    /// Pure lexicographic, x-variables above parameters.
    Lex,
    /// Grevlex on x, then grevlex on the parameters; any monomial involving
    /// an x beats every pure-parameter monomial.
    EliminateX,
    /// Grevlex on the listed variables, then grevlex on the rest.
    Eliminate(Vec<usize>),
}

impl MonomialOrder {
    pub fn parse(name: &str) -> Option<MonomialOrder> {
        match name {
            "grevlex" => Some(MonomialOrder::Grevlex),
            "lex" => Some(MonomialOrder::Lex),
            "eliminate-x" | "elim" => Some(MonomialOrder::EliminateX),
            _ => None,
        }
    }

    pub fn compile(&self, nparams: usize, nvars: usize) -> TermOrder {
        let xs: Vec<usize> = (nparams..nparams + nvars).collect();
        let cs: Vec<usize> = (0..nparams).collect();
        let all: Vec<usize> = xs.iter().chain(cs.iter()).copied().collect();
        let blocks = match self {
            MonomialOrder::Grevlex => vec![Block {
                vars: all,
                lex: false,
            }],
            MonomialOrder::Lex => vec![Block {
                vars: all,
                lex: true,
            }],
            MonomialOrder::EliminateX => vec![
                Block {
                    vars: xs,
                    lex: false,
                },
                Block {
                    vars: cs,
                    lex: false,
                },
            ],
            MonomialOrder::Eliminate(listed) => {
                let mut first: Vec<usize> =
                    all.iter().copied().filter(|v| listed.contains(v)).collect();
                first.dedup();
                let rest: Vec<usize> = all
                    .iter()
                    .copied()
                    .filter(|v| !listed.contains(v))
                    .collect();
                vec![
                    Block {
                        vars: first,
                        lex: false,
                    },
                    Block {
                        vars: rest,
                        lex: false,
                    },
                ]
            }
        };
        TermOrder {
            blocks: blocks.into_iter().filter(|b| !b.vars.is_empty()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Block {
    vars: Vec<usize>,
    lex: bool,
}

/// A monomial order compiled against a concrete variable layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermOrder {
    blocks: Vec<Block>,
}

impl TermOrder {
    /// The same order with variable `v` split off into a leading block, so
    /// that it is eliminated first.
    pub fn with_leading_var(&self, v: usize) -> TermOrder {
        let mut blocks = vec![Block {
            vars: vec![v],
            lex: false,
        }];
        for b in &self.blocks {
            let vars: Vec<usize> = b.vars.iter().copied().filter(|&w| w != v).collect();
            if !vars.is_empty() {
                blocks.push(Block { vars, lex: b.lex });
            }
        }
        TermOrder { blocks }
    }

    /// True if some block compares lexicographically.
    pub fn has_lex(&self) -> bool {
        self.blocks.iter().any(|b| b.lex)
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        for block in &self.blocks {
            let o = if block.lex {
                cmp_lex(&block.vars, a, b)
            } else {
                cmp_grevlex(&block.vars, a, b)
            };
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }
}

fn cmp_lex(vars: &[usize], a: &[u32], b: &[u32]) -> Ordering {
    for &v in vars {
        match a[v].cmp(&b[v]) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn cmp_grevlex(vars: &[usize], a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = vars.iter().map(|&v| a[v] as u64).sum();
    let db: u64 = vars.iter().map(|&v| b[v] as u64).sum();
    if da != db {
        return da.cmp(&db);
    }
    for &v in vars.iter().rev() {
        match a[v].cmp(&b[v]) {
            Ordering::Equal => continue,
            // a smaller exponent in the last variable means a larger monomial
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_basics() {
        // layout [c, x, y]
        let o = MonomialOrder::Grevlex.compile(1, 2);
        // x*y vs x^2: same degree; last differing var in rank order is c? no:
        // rank x > y > c, compare c first (both 0), then y: 1 vs 0 -> x^2 bigger
        assert_eq!(o.cmp(&[0, 2, 0], &[0, 1, 1]), Ordering::Greater);
        // x vs c: c is the lowest variable
        assert_eq!(o.cmp(&[0, 1, 0], &[1, 0, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 0, 0], &[1, 0, 0]), Ordering::Less);
    }

    #[test]
    fn elimination_block() {
        let o = MonomialOrder::EliminateX.compile(1, 2);
        assert_eq!(o.cmp(&[0, 0, 1], &[5, 0, 0]), Ordering::Greater);
        let o = MonomialOrder::Eliminate(vec![0]).compile(1, 2);
        assert_eq!(o.cmp(&[1, 0, 0], &[0, 3, 3]), Ordering::Greater);
    }

    #[test]
    fn lex_order() {
        let o = MonomialOrder::Lex.compile(0, 2);
        assert_eq!(o.cmp(&[1, 0], &[0, 5]), Ordering::Greater);
    }
}
