use serde::{Deserialize, Serialize};

/// How an over-long dialog context is cut down to a token budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TruncationStrategy {
    /// Keep the first `limit` tokens.
    InputA,
    /// Drop the middle: keep `ceil(limit/2)` leading and `floor(limit/2)`
    /// trailing tokens.
    InputB,
}

pub fn select_context_tokens<T: Clone>(
    tokens: &[T],
    limit: usize,
    strategy: TruncationStrategy,
) -> Vec<T> {
    if tokens.len() <= limit {
        return tokens.to_vec();
    }
    match strategy {
        TruncationStrategy::InputA => tokens[..limit].to_vec(),
        TruncationStrategy::InputB => {
            let head = limit.div_ceil(2);
            let tail = limit / 2;
            let mut out = Vec::with_capacity(limit);
            out.extend_from_slice(&tokens[..head]);
            out.extend_from_slice(&tokens[tokens.len() - tail..]);
            out
        }
    }
}
