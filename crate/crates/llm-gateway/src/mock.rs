//! Scripted in-process chat-completion server for tests.
//!
//! Binds a real `TcpListener` on a loopback port and answers each
//! connection with the next reply in its script, so client code runs
//! its genuine HTTP path with zero external network. Compiled
//! unconditionally so downstream integration tests (and other crates'
//! test binaries) can use it.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;
use std::time::Duration;

/// One scripted HTTP reply.
#[derive(Debug, Clone)]
pub struct MockReply {
    /// HTTP status code to send.
    pub status: u16,
    /// Response body (JSON for 200s; anything for errors).
    pub body: String,
    /// Delay before answering, to exercise client timeouts.
    pub delay: Duration,
}

impl MockReply {
    /// A 200 chat-completion reply whose assistant content is `content`.
    pub fn chat(content: &str) -> Self {
        let body = serde_json::json!({
            "id": "mock-completion",
            "object": "chat.completion",
            "choices": [{
                "index": 0,
                "message": { "role": "assistant", "content": content },
                "finish_reason": "stop"
            }]
        });
        Self {
            status: 200,
            body: body.to_string(),
            delay: Duration::ZERO,
        }
    }

    /// An arbitrary status/body reply (e.g. 429 for rate limiting).
    pub fn status(status: u16, body: &str) -> Self {
        Self {
            status,
            body: body.to_string(),
            delay: Duration::ZERO,
        }
    }

    /// Adds a pre-response delay.
    pub fn with_delay(mut self, delay: Duration) -> Self {
        self.delay = delay;
        self
    }
}

/// A running scripted server. Each incoming request consumes the next
/// scripted reply; requests beyond the script get HTTP 500 so an
/// over-calling client fails loudly. Request bodies are recorded for
/// assertions. The listener thread stops when the server is dropped.
pub struct MockServer {
    addr: SocketAddr,
    requests: Arc<Mutex<Vec<String>>>,
    stop: Arc<AtomicBool>,
    handle: Option<JoinHandle<()>>,
}

impl MockServer {
    /// Starts a server on an ephemeral loopback port with `script` as
    /// its reply sequence.
    pub fn start(script: Vec<MockReply>) -> std::io::Result<Self> {
        let listener = TcpListener::bind("127.0.0.1:0")?;
        let addr = listener.local_addr()?;
        let requests: Arc<Mutex<Vec<String>>> = Arc::new(Mutex::new(Vec::new()));
        let stop = Arc::new(AtomicBool::new(false));

        let thread_requests = Arc::clone(&requests);
        let thread_stop = Arc::clone(&stop);
        let handle = std::thread::spawn(move || {
            let mut script = script.into_iter();
            for stream in listener.incoming() {
                if thread_stop.load(Ordering::SeqCst) {
                    break;
                }
                let Ok(stream) = stream else { continue };
                let reply = script.next().unwrap_or_else(|| MockReply {
                    status: 500,
                    body: r#"{"error":"mock script exhausted"}"#.to_string(),
                    delay: Duration::ZERO,
                });
                serve_one(stream, reply, &thread_requests);
            }
        });

        Ok(Self {
            addr,
            requests,
            stop,
            handle: Some(handle),
        })
    }

    /// Chat-completions URL of this server.
    pub fn endpoint(&self) -> String {
        format!("http://{}/v1/chat/completions", self.addr)
    }

    /// Bodies of every request received so far, in order.
    pub fn request_bodies(&self) -> Vec<String> {
        self.requests.lock().expect("request log poisoned").clone()
    }

    /// Number of requests received so far.
    pub fn request_count(&self) -> usize {
        self.requests.lock().expect("request log poisoned").len()
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // Wake the accept loop so it observes the stop flag.
        let _ = TcpStream::connect(self.addr);
        if let Some(handle) = self.handle.take() {
            let _ = handle.join();
        }
    }
}

/// Handles a single connection: reads one HTTP request, records its
/// body, writes the scripted reply, closes.
fn serve_one(stream: TcpStream, reply: MockReply, requests: &Arc<Mutex<Vec<String>>>) {
    let _ = stream.set_read_timeout(Some(Duration::from_secs(10)));
    let mut reader = BufReader::new(stream);

    let mut content_length = 0usize;
    let mut line = String::new();
    // Request line + headers, ended by an empty line.
    loop {
        line.clear();
        if reader.read_line(&mut line).unwrap_or(0) == 0 {
            return;
        }
        let trimmed = line.trim_end();
        if trimmed.is_empty() {
            break;
        }
        if let Some((name, value)) = trimmed.split_once(':') {
            if name.eq_ignore_ascii_case("content-length") {
                content_length = value.trim().parse().unwrap_or(0);
            }
        }
    }
    let mut body = vec![0u8; content_length];
    if content_length > 0 && reader.read_exact(&mut body).is_err() {
        return;
    }
    requests
        .lock()
        .expect("request log poisoned")
        .push(String::from_utf8_lossy(&body).into_owned());

    if !reply.delay.is_zero() {
        std::thread::sleep(reply.delay);
    }
    let reason = match reply.status {
        200 => "OK",
        429 => "Too Many Requests",
        500 => "Internal Server Error",
        _ => "Mock",
    };
    let response = format!(
        "HTTP/1.1 {} {}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
        reply.status,
        reason,
        reply.body.len(),
        reply.body
    );
    let mut stream = reader.into_inner();
    let _ = stream.write_all(response.as_bytes());
    let _ = stream.flush();
}
