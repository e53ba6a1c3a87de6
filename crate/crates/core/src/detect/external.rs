// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Line-delimited JSON protocol with an external NER process.
//!
//! The child prints `{"proto": 1}` on startup, then answers every
//! `{"id", "text"}` request line with one `{"id", "entities": [...]}` line,
//! and exits 0 when its stdin closes. A pool of children serves concurrent
//! callers, one in-flight document per child.

use std::io::{self, BufRead, BufReader, Read, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::{Arc, Condvar, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::corpus::{Document, EntityCategory, EntitySpan};
use crate::text;

use super::{gazetteer_match, Gazetteer};

pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ExternalError {
    #[error("empty detector command")]
    EmptyCommand,
    #[error("cannot parse detector command {0:?}")]
    BadCommand(String),
    #[error("failed to launch {command:?}: {source}")]
    Spawn { command: String, source: io::Error },
    #[error("handshake failed: {detail}; stderr: {stderr:?}")]
    Handshake { detail: String, stderr: String },
    #[error("protocol violation: {detail}; stderr: {stderr:?}")]
    Protocol { detail: String, stderr: String },
    #[error("detector process exited ({status}); stderr: {stderr:?}")]
    Exited { status: String, stderr: String },
    #[error("I/O error talking to detector: {source}; stderr: {stderr:?}")]
    Io { source: io::Error, stderr: String },
}

#[derive(Debug, Serialize, Deserialize)]
struct Handshake {
    proto: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct Request<'a> {
    id: &'a str,
    text: &'a str,
}

#[derive(Debug, Serialize, Deserialize)]
struct WireEntity {
    start: usize,
    end: usize,
    category: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct Response {
    id: String,
    entities: Vec<WireEntity>,
}

struct Worker {
    child: Child,
    stdin: Option<ChildStdin>,
    stdout: BufReader<ChildStdout>,
    stderr: Arc<Mutex<String>>,
}

impl Worker {
    fn spawn(argv: &[String]) -> Result<Self, ExternalError> {
        let command = argv.join(" ");
        let mut child = Command::new(&argv[0])
            .args(&argv[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|source| ExternalError::Spawn { command, source })?;

        let stderr = Arc::new(Mutex::new(String::new()));
        if let Some(mut pipe) = child.stderr.take() {
            let sink = Arc::clone(&stderr);
            thread::spawn(move || {
                let mut buf = [0u8; 4096];
                while let Ok(n) = pipe.read(&mut buf) {
                    if n == 0 {
                        break;
                    }
                    let mut s = sink.lock().unwrap_or_else(|e| e.into_inner());
                    s.push_str(&String::from_utf8_lossy(&buf[..n]));
                }
            });
        }
        let stdin = child.stdin.take();
        let stdout = BufReader::new(child.stdout.take().expect("stdout is piped"));
        let mut worker = Worker { child, stdin, stdout, stderr };

        let line = match worker.read_line() {
            Ok(Some(line)) => line,
            Ok(None) => {
                return Err(ExternalError::Handshake { detail: "no handshake line".into(), stderr: worker.diagnostics() })
            }
            Err(source) => return Err(ExternalError::Io { source, stderr: worker.diagnostics() }),
        };
        match serde_json::from_str::<Handshake>(&line) {
            Ok(h) if h.proto == PROTOCOL_VERSION => Ok(worker),
            Ok(h) => Err(ExternalError::Handshake {
                detail: format!("unsupported protocol version {}", h.proto),
                stderr: worker.diagnostics(),
            }),
            Err(e) => Err(ExternalError::Handshake {
                detail: format!("bad handshake {line:?}: {e}"),
                stderr: worker.diagnostics(),
            }),
        }
    }

    fn read_line(&mut self) -> io::Result<Option<String>> {
        let mut line = String::new();
        if self.stdout.read_line(&mut line)? == 0 {
            return Ok(None);
        }
        Ok(Some(line.trim_end_matches(['\n', '\r']).to_string()))
    }

    fn diagnostics(&self) -> String {
        // give the stderr drain a moment to catch up with a dying child
        thread::sleep(Duration::from_millis(20));
        self.stderr.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    fn exited(&mut self) -> ExternalError {
        let deadline = Instant::now() + Duration::from_millis(500);
        let status = loop {
            match self.child.try_wait() {
                Ok(Some(status)) => break status.to_string(),
                Ok(None) if Instant::now() < deadline => thread::sleep(Duration::from_millis(10)),
                Ok(None) => break "still running, stdout closed".to_string(),
                Err(e) => break e.to_string(),
            }
        };
        ExternalError::Exited { status, stderr: self.diagnostics() }
    }

    fn request(&mut self, doc: &Document) -> Result<Vec<EntitySpan>, ExternalError> {
        let mut payload = serde_json::to_string(&Request { id: &doc.id, text: &doc.text }).expect("serializable");
        payload.push('\n');
        let write = self.stdin.as_mut().expect("stdin open while worker is live").write_all(payload.as_bytes());
        if let Err(source) = write.and_then(|_| self.stdin.as_mut().expect("open").flush()) {
            if source.kind() == io::ErrorKind::BrokenPipe {
                return Err(self.exited());
            }
            return Err(ExternalError::Io { source, stderr: self.diagnostics() });
        }
        let line = match self.read_line() {
            Ok(Some(line)) => line,
            Ok(None) => return Err(self.exited()),
            Err(source) => return Err(ExternalError::Io { source, stderr: self.diagnostics() }),
        };
        let response: Response = serde_json::from_str(&line).map_err(|e| ExternalError::Protocol {
            detail: format!("unparseable response {line:?}: {e}"),
            stderr: self.diagnostics(),
        })?;
        if response.id != doc.id {
            return Err(ExternalError::Protocol {
                detail: format!("response for {:?} while waiting for {:?}", response.id, doc.id),
                stderr: self.diagnostics(),
            });
        }
        let len = text::char_len(&doc.text);
        let mut spans = Vec::with_capacity(response.entities.len());
        for entity in response.entities {
            let category: EntityCategory = entity.category.parse().map_err(|e: crate::corpus::UnknownCategory| {
                ExternalError::Protocol { detail: e.to_string(), stderr: String::new() }
            })?;
            if entity.start >= entity.end || entity.end > len {
                return Err(ExternalError::Protocol {
                    detail: format!("entity range {}..{} invalid for text of length {len}", entity.start, entity.end),
                    stderr: String::new(),
                });
            }
            spans.push(EntitySpan::from_text(&doc.text, entity.start, entity.end, category).expect("range checked"));
        }
        Ok(spans)
    }
}

impl Drop for Worker {
    fn drop(&mut self) {
        drop(self.stdin.take());
        let deadline = Instant::now() + Duration::from_secs(2);
        while Instant::now() < deadline {
            if let Ok(Some(_)) = self.child.try_wait() {
                return;
            }
            thread::sleep(Duration::from_millis(5));
        }
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

struct Pool {
    idle: Vec<Worker>,
    live: usize,
}

/// Pool of detector child processes.
pub struct ExternalDetector {
    argv: Vec<String>,
    capacity: usize,
    pool: Mutex<Pool>,
    available: Condvar,
}

impl std::fmt::Debug for ExternalDetector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExternalDetector").field("argv", &self.argv).field("capacity", &self.capacity).finish()
    }
}

impl ExternalDetector {
    /// Launch one child eagerly (to validate the command and handshake); up to
    /// `workers` children are started on demand.
    pub fn spawn(command: &str, workers: usize) -> Result<Self, ExternalError> {
        let argv = shlex::split(command).ok_or_else(|| ExternalError::BadCommand(command.to_string()))?;
        if argv.is_empty() {
            return Err(ExternalError::EmptyCommand);
        }
        let first = Worker::spawn(&argv)?;
        Ok(Self {
            argv,
            capacity: workers.max(1),
            pool: Mutex::new(Pool { idle: vec![first], live: 1 }),
            available: Condvar::new(),
        })
    }

    fn checkout(&self) -> Result<Worker, ExternalError> {
        let mut pool = self.pool.lock().unwrap_or_else(|e| e.into_inner());
        loop {
            if let Some(worker) = pool.idle.pop() {
                return Ok(worker);
            }
            if pool.live < self.capacity {
                pool.live += 1;
                drop(pool);
                return Worker::spawn(&self.argv).inspect_err(|_| self.retire());
            }
            pool = self.available.wait(pool).unwrap_or_else(|e| e.into_inner());
        }
    }

    fn retire(&self) {
        let mut pool = self.pool.lock().unwrap_or_else(|e| e.into_inner());
        pool.live -= 1;
        self.available.notify_one();
    }

    fn give_back(&self, worker: Worker) {
        let mut pool = self.pool.lock().unwrap_or_else(|e| e.into_inner());
        pool.idle.push(worker);
        self.available.notify_one();
    }

    /// Raw spans from the child (validated against the text, not yet de-overlapped).
    pub fn detect(&self, doc: &Document) -> Result<Vec<EntitySpan>, ExternalError> {
        let mut worker = self.checkout()?;
        match worker.request(doc) {
            Ok(spans) => {
                self.give_back(worker);
                Ok(spans)
            }
            Err(err) => {
                // a worker that broke protocol is not reused
                drop(worker);
                self.retire();
                Err(err)
            }
        }
    }
}

/// Child side of the protocol backed by a gazetteer.
///
/// Writes the handshake, then answers requests until `input` is exhausted.
pub fn serve_gazetteer<R: BufRead, W: Write>(gazetteer: &Gazetteer, input: R, mut output: W) -> io::Result<()> {
    serde_json::to_writer(&mut output, &Handshake { proto: PROTOCOL_VERSION })?;
    output.write_all(b"\n")?;
    output.flush()?;
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let request: Request<'_> =
            serde_json::from_str(&line).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        let entities = gazetteer_match(request.text, gazetteer)
            .into_iter()
            .map(|s| WireEntity { start: s.start, end: s.end, category: s.category.tag().to_string() })
            .collect();
        serde_json::to_writer(&mut output, &Response { id: request.id.to_string(), entities })?;
        output.write_all(b"\n")?;
        output.flush()?;
    }
    Ok(())
}
