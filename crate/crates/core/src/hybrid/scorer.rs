use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpStream, ToSocketAddrs};
use std::process::{Child, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use super::protocol::{Ready, ScoreRequest, ScoreResponse, PROTOCOL_VERSION};
use crate::error::{Error, Result, ScorerFailure};

/// A bidirectional line channel to a scorer.
pub trait Transport: Send {
    fn send_line(&mut self, line: &str) -> Result<(), ScorerFailure>;
    fn recv_line(&mut self, timeout: Duration) -> Result<String, ScorerFailure>;
}

/// Lines read on a background thread so receives can time out.
pub struct LineTransport {
    writer: Box<dyn Write + Send>,
    lines: Receiver<std::io::Result<String>>,
    child: Option<Child>,
    socket: Option<TcpStream>,
}

impl LineTransport {
    pub fn new<R, W>(reader: R, writer: W) -> Self
    where
        R: Read + Send + 'static,
        W: Write + Send + 'static,
    {
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(reader).lines() {
                let stop = line.is_err();
                if tx.send(line).is_err() || stop {
                    break;
                }
            }
        });
        LineTransport {
            writer: Box::new(writer),
            lines: rx,
            child: None,
            socket: None,
        }
    }

    /// Runs `command` through `sh -c` with piped stdin/stdout.
    pub fn spawn(command: &str) -> Result<Self, ScorerFailure> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| ScorerFailure::Transport(format!("spawn `{command}`: {e}")))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let mut t = LineTransport::new(stdout, stdin);
        t.child = Some(child);
        Ok(t)
    }

    pub fn connect<A: ToSocketAddrs>(addr: A) -> Result<Self, ScorerFailure> {
        let stream = TcpStream::connect(addr).map_err(|e| ScorerFailure::Transport(e.to_string()))?;
        let reader = stream
            .try_clone()
            .map_err(|e| ScorerFailure::Transport(e.to_string()))?;
        let handle = stream
            .try_clone()
            .map_err(|e| ScorerFailure::Transport(e.to_string()))?;
        let mut t = LineTransport::new(reader, stream);
        t.socket = Some(handle);
        Ok(t)
    }
}

impl Transport for LineTransport {
    fn send_line(&mut self, line: &str) -> Result<(), ScorerFailure> {
        let io = |e: std::io::Error| ScorerFailure::Transport(e.to_string());
        self.writer.write_all(line.as_bytes()).map_err(io)?;
        self.writer.write_all(b"\n").map_err(io)?;
        self.writer.flush().map_err(io)
    }

    fn recv_line(&mut self, timeout: Duration) -> Result<String, ScorerFailure> {
        match self.lines.recv_timeout(timeout) {
            Ok(Ok(line)) => Ok(line),
            Ok(Err(e)) => Err(ScorerFailure::Transport(e.to_string())),
            Err(RecvTimeoutError::Timeout) => Err(ScorerFailure::Timeout(timeout.as_millis() as u64)),
            Err(RecvTimeoutError::Disconnected) => Err(ScorerFailure::Closed),
        }
    }
}

impl Drop for LineTransport {
    fn drop(&mut self) {
        if let Some(socket) = self.socket.take() {
            let _ = socket.shutdown(std::net::Shutdown::Both);
        }
        self.writer = Box::new(std::io::sink());
        if let Some(mut child) = self.child.take() {
            let _ = child.kill();
            let _ = child.wait();
        }
    }
}

/// A ready scorer. Requests are strictly sequential: one in flight at a time.
pub struct ScorerHandle {
    transport: Box<dyn Transport>,
    timeout: Duration,
    protocol_version: u32,
    healthy: bool,
}

impl ScorerHandle {
    /// Wraps a transport and waits for the `{"ready": true}` handshake.
    pub fn new(mut transport: Box<dyn Transport>, timeout: Duration) -> Result<Self> {
        let fail = |kind| Error::Scorer {
            query_id: "<handshake>".into(),
            kind,
        };
        let line = transport.recv_line(timeout).map_err(fail)?;
        match serde_json::from_str::<Ready>(&line) {
            Ok(Ready { ready: true }) => Ok(ScorerHandle {
                transport,
                timeout,
                protocol_version: PROTOCOL_VERSION,
                healthy: true,
            }),
            _ => Err(fail(ScorerFailure::Protocol(format!(
                "expected ready line, got `{line}`"
            )))),
        }
    }

    pub fn spawn(command: &str, timeout: Duration) -> Result<Self> {
        let t = LineTransport::spawn(command).map_err(|kind| Error::Scorer {
            query_id: "<spawn>".into(),
            kind,
        })?;
        Self::new(Box::new(t), timeout)
    }

    pub fn connect<A: ToSocketAddrs>(addr: A, timeout: Duration) -> Result<Self> {
        let t = LineTransport::connect(addr).map_err(|kind| Error::Scorer {
            query_id: "<connect>".into(),
            kind,
        })?;
        Self::new(Box::new(t), timeout)
    }

    pub fn protocol_version(&self) -> u32 {
        self.protocol_version
    }

    pub fn timeout(&self) -> Duration {
        self.timeout
    }

    /// False after a timeout or transport failure: a late response could
    /// otherwise be paired with the next request.
    pub fn is_healthy(&self) -> bool {
        self.healthy
    }

    /// One round trip. The returned map covers exactly the request's
    /// candidates.
    pub fn score(&mut self, request: &ScoreRequest) -> Result<HashMap<String, f64>> {
        let qid = request.query_id.clone();
        let fail = |kind| Error::Scorer {
            query_id: qid.clone(),
            kind,
        };
        if !self.healthy {
            return Err(fail(ScorerFailure::Transport(
                "scorer unusable after an earlier failure".into(),
            )));
        }
        let sent = self.transport.send_line(&request.to_line());
        let line = sent.and_then(|_| self.transport.recv_line(self.timeout));
        let line = match line {
            Ok(l) => l,
            Err(kind) => {
                self.healthy = false;
                return Err(fail(kind));
            }
        };
        let resp: ScoreResponse = serde_json::from_str(&line)
            .map_err(|e| fail(ScorerFailure::Protocol(format!("unparseable response: {e}"))))?;
        if resp.query_id != request.query_id {
            self.healthy = false;
            return Err(fail(ScorerFailure::Protocol(format!(
                "response for `{}`",
                resp.query_id
            ))));
        }
        if let Some(msg) = resp.error {
            return Err(fail(ScorerFailure::Remote(msg)));
        }
        let mut scores = HashMap::with_capacity(resp.scores.len());
        for s in resp.scores {
            if !s.score.is_finite() {
                return Err(fail(ScorerFailure::Protocol(format!(
                    "non-finite score for `{}`",
                    s.doc_id
                ))));
            }
            if scores.insert(s.doc_id.clone(), s.score).is_some() {
                return Err(fail(ScorerFailure::Protocol(format!("`{}` scored twice", s.doc_id))));
            }
        }
        let expected = request.candidates.len();
        let covered = request
            .candidates
            .iter()
            .filter(|c| scores.contains_key(&c.doc_id))
            .count();
        if covered != expected || scores.len() != expected {
            return Err(fail(ScorerFailure::Protocol(format!(
                "expected scores for exactly {expected} candidates, got {} ({covered} matching)",
                scores.len()
            ))));
        }
        Ok(scores)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::hybrid::{Candidate, DocScore};

    /// In-process scorer double.
    pub(crate) struct FnTransport<F> {
        pending: Vec<String>,
        respond: F,
    }

    impl<F> FnTransport<F>
    where
        F: FnMut(ScoreRequest) -> Option<String> + Send,
    {
        pub(crate) fn new(respond: F) -> Self {
            FnTransport {
                pending: vec![r#"{"ready":true}"#.into()],
                respond,
            }
        }
    }

    impl<F> Transport for FnTransport<F>
    where
        F: FnMut(ScoreRequest) -> Option<String> + Send,
    {
        fn send_line(&mut self, line: &str) -> Result<(), ScorerFailure> {
            let req: ScoreRequest = serde_json::from_str(line).unwrap();
            if let Some(out) = (self.respond)(req) {
                self.pending.push(out);
            }
            Ok(())
        }

        fn recv_line(&mut self, timeout: Duration) -> Result<String, ScorerFailure> {
            if self.pending.is_empty() {
                Err(ScorerFailure::Timeout(timeout.as_millis() as u64))
            } else {
                Ok(self.pending.remove(0))
            }
        }
    }

    pub(crate) fn constant_scorer(value: f64) -> ScorerHandle {
        let t = FnTransport::new(move |req: ScoreRequest| {
            Some(
                ScoreResponse {
                    query_id: req.query_id,
                    scores: req
                        .candidates
                        .into_iter()
                        .map(|c| DocScore { doc_id: c.doc_id, score: value })
                        .collect(),
                    error: None,
                }
                .to_line(),
            )
        });
        ScorerHandle::new(Box::new(t), Duration::from_millis(50)).unwrap()
    }

    fn request(n: usize) -> ScoreRequest {
        ScoreRequest {
            query_id: "q1".into(),
            dialog_tokens: vec!["keyboard".into()],
            candidates: (0..n)
                .map(|i| Candidate {
                    doc_id: format!("d{i}"),
                    doc_tokens: vec![],
                })
                .collect(),
        }
    }

    #[test]
    fn echo_zero_scores() {
        let mut s = constant_scorer(0.0);
        let scores = s.score(&request(20)).unwrap();
        assert_eq!(scores.len(), 20);
        assert!(scores.values().all(|&v| v == 0.0));
    }

    #[test]
    fn missing_doc_is_protocol_error() {
        let t = FnTransport::new(|req: ScoreRequest| {
            Some(format!(r#"{{"query_id":"{}","scores":[{{"doc_id":"d0","score":1.0}}]}}"#, req.query_id))
        });
        let mut s = ScorerHandle::new(Box::new(t), Duration::from_millis(10)).unwrap();
        let err = s.score(&request(2)).unwrap_err();
        assert!(matches!(err, Error::Scorer { ref query_id, kind: ScorerFailure::Protocol(_) } if query_id == "q1"));
    }

    #[test]
    fn extra_doc_and_remote_error() {
        let t = FnTransport::new(|req: ScoreRequest| {
            Some(format!(
                r#"{{"query_id":"{}","scores":[{{"doc_id":"d0","score":1.0}},{{"doc_id":"zz","score":1.0}}]}}"#,
                req.query_id
            ))
        });
        let mut s = ScorerHandle::new(Box::new(t), Duration::from_millis(10)).unwrap();
        assert!(s.score(&request(1)).is_err());

        let t = FnTransport::new(|req: ScoreRequest| {
            Some(ScoreResponse { query_id: req.query_id, scores: vec![], error: Some("oom".into()) }.to_line())
        });
        let mut s = ScorerHandle::new(Box::new(t), Duration::from_millis(10)).unwrap();
        let err = s.score(&request(1)).unwrap_err();
        assert!(matches!(err, Error::Scorer { kind: ScorerFailure::Remote(_), .. }));
        assert!(s.is_healthy());
    }

    #[test]
    fn silence_times_out_and_poisons_handle() {
        let t = FnTransport::new(|_| None);
        let mut s = ScorerHandle::new(Box::new(t), Duration::from_millis(5)).unwrap();
        let err = s.score(&request(1)).unwrap_err();
        assert!(matches!(err, Error::Scorer { kind: ScorerFailure::Timeout(5), .. }));
        assert!(!s.is_healthy());
    }

    #[test]
    fn handshake_required() {
        struct Silent;
        impl Transport for Silent {
            fn send_line(&mut self, _: &str) -> Result<(), ScorerFailure> {
                Ok(())
            }
            fn recv_line(&mut self, _: Duration) -> Result<String, ScorerFailure> {
                Ok(r#"{"ready":false}"#.into())
            }
        }
        assert!(ScorerHandle::new(Box::new(Silent), Duration::from_millis(5)).is_err());
    }

    #[test]
    fn line_transport_over_pipes() {
        let mut t = LineTransport::spawn(r#"echo '{"ready":true}'; read line; echo "$line""#).unwrap();
        assert_eq!(t.recv_line(Duration::from_secs(5)).unwrap(), r#"{"ready":true}"#);
        t.send_line("hello").unwrap();
        assert_eq!(t.recv_line(Duration::from_secs(5)).unwrap(), "hello");
        assert_eq!(t.recv_line(Duration::from_secs(5)), Err(ScorerFailure::Closed));
    }
}
