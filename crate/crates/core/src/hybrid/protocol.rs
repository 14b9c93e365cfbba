use serde::{Deserialize, Serialize};

pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub doc_id: String,
    pub doc_tokens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRequest {
    pub query_id: String,
    pub dialog_tokens: Vec<String>,
    pub candidates: Vec<Candidate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocScore {
    pub doc_id: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub query_id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scores: Vec<DocScore>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Startup handshake line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ready {
    pub ready: bool,
}

impl ScoreRequest {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("request serializes")
    }
}

impl ScoreResponse {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("response serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn error_response_shape() {
        let r: ScoreResponse = serde_json::from_str(r#"{"query_id":"q","error":"boom"}"#).unwrap();
        assert!(r.scores.is_empty());
        assert_eq!(r.error.as_deref(), Some("boom"));
        assert_eq!(r.to_line(), r#"{"query_id":"q","error":"boom"}"#);
    }

    fn arb_request() -> impl Strategy<Value = ScoreRequest> {
        let tok = "[a-z0-9\u{e9}\"\\\\ ]{0,8}";
        (
            tok,
            prop::collection::vec(tok, 0..10),
            prop::collection::vec((tok, prop::collection::vec(tok, 0..6)), 0..5),
        )
            .prop_map(|(query_id, dialog_tokens, cands)| ScoreRequest {
                query_id,
                dialog_tokens,
                candidates: cands
                    .into_iter()
                    .map(|(doc_id, doc_tokens)| Candidate { doc_id, doc_tokens })
                    .collect(),
            })
    }

    proptest! {
        #[test]
        fn request_codec_is_byte_stable(req in arb_request()) {
            let line = req.to_line();
            prop_assert!(!line.contains('\n'));
            let back: ScoreRequest = serde_json::from_str(&line).unwrap();
            prop_assert_eq!(&back, &req);
            prop_assert_eq!(back.to_line(), line);
        }

        #[test]
        fn response_codec_is_byte_stable(scores in prop::collection::vec(("[a-z]{1,5}", -1e6f64..1e6), 0..8)) {
            let resp = ScoreResponse {
                query_id: "q".into(),
                scores: scores.into_iter().map(|(doc_id, score)| DocScore { doc_id, score }).collect(),
                error: None,
            };
            let line = resp.to_line();
            let back: ScoreResponse = serde_json::from_str(&line).unwrap();
            prop_assert_eq!(&back, &resp);
            prop_assert_eq!(back.to_line(), line);
        }
    }
}
