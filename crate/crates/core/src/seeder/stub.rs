//! Scripted local chat-completion endpoint for tests and offline runs.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;

use serde_json::json;

/// One scripted reply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StubReply {
    /// 200 with this string as the assistant message content.
    Content(String),
    /// Bare HTTP status with an error body.
    Status(u16),
}

/// Serves scripted replies in order on `127.0.0.1`; the last reply repeats
/// once the script runs out. Request bodies are recorded.
pub struct StubServer {
    addr: std::net::SocketAddr,
    requests: Arc<Mutex<Vec<String>>>,
    stop: Arc<AtomicBool>,
    handle: Option<JoinHandle<()>>,
}

fn read_request(stream: &mut TcpStream) -> std::io::Result<String> {
    let mut reader = BufReader::new(stream);
    let mut length = 0usize;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        let line = line.trim_end();
        if line.is_empty() {
            break;
        }
        if let Some((name, value)) = line.split_once(':') {
            if name.eq_ignore_ascii_case("content-length") {
                length = value.trim().parse().unwrap_or(0);
            }
        }
    }
    let mut body = vec![0u8; length];
    reader.read_exact(&mut body)?;
    Ok(String::from_utf8_lossy(&body).into_owned())
}

fn respond(stream: &mut TcpStream, reply: &StubReply) -> std::io::Result<()> {
    let (status, body) = match reply {
        StubReply::Content(content) => (
            200,
            json!({
                "id": "stub",
                "object": "chat.completion",
                "choices": [{"index": 0, "message": {"role": "assistant", "content": content}, "finish_reason": "stop"}],
            })
            .to_string(),
        ),
        StubReply::Status(code) => (*code, json!({"error": {"message": "scripted failure"}}).to_string()),
    };
    write!(
        stream,
        "HTTP/1.1 {status} Stub\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )?;
    stream.flush()
}

impl StubServer {
    pub fn start(script: Vec<StubReply>) -> std::io::Result<Self> {
        assert!(!script.is_empty(), "stub script needs at least one reply");
        let listener = TcpListener::bind("127.0.0.1:0")?;
        let addr = listener.local_addr()?;
        let requests = Arc::new(Mutex::new(Vec::new()));
        let stop = Arc::new(AtomicBool::new(false));
        let (rec, halt) = (requests.clone(), stop.clone());
        let handle = std::thread::spawn(move || {
            for stream in listener.incoming() {
                if halt.load(Ordering::SeqCst) {
                    break;
                }
                let Ok(mut stream) = stream else { continue };
                let Ok(body) = read_request(&mut stream) else {
                    continue;
                };
                let n = {
                    let mut r = rec.lock().unwrap_or_else(|e| e.into_inner());
                    r.push(body);
                    r.len()
                };
                let reply = &script[(n - 1).min(script.len() - 1)];
                let _ = respond(&mut stream, reply);
            }
        });
        Ok(StubServer {
            addr,
            requests,
            stop,
            handle: Some(handle),
        })
    }

    /// Convenience: a script of assistant message contents.
    pub fn with_contents<S: Into<String>>(
        contents: impl IntoIterator<Item = S>,
    ) -> std::io::Result<Self> {
        Self::start(
            contents
                .into_iter()
                .map(|c| StubReply::Content(c.into()))
                .collect(),
        )
    }

    /// Base URL to use as the endpoint.
    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }

    pub fn request_bodies(&self) -> Vec<String> {
        self.requests
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .clone()
    }

    pub fn request_count(&self) -> usize {
        self.requests
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .len()
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // Wake the accept loop so it sees the flag.
        let _ = TcpStream::connect(self.addr);
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}
