//! The HTTP client against a scripted local server.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use pseudokit::llm::{ChatEndpoint, ChatMessage, ChatRequest, HttpEndpoint, LlmEndpoint, Role, TransportError};

struct Seen {
    path: String,
    authorization: Option<String>,
    body: serde_json::Value,
}

/// Serve one canned (status, body) per connection, recording each request.
fn serve(replies: Vec<(u16, String)>) -> (String, Arc<Mutex<Vec<Seen>>>, thread::JoinHandle<()>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let base = format!("http://{}/v1", listener.local_addr().unwrap());
    let seen = Arc::new(Mutex::new(Vec::new()));
    let log = Arc::clone(&seen);
    let handle = thread::spawn(move || {
        for (status, body) in replies {
            let (stream, _) = listener.accept().unwrap();
            let mut reader = BufReader::new(stream);
            let mut request_line = String::new();
            reader.read_line(&mut request_line).unwrap();
            let mut length = 0;
            let mut authorization = None;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                let line = line.trim_end();
                if line.is_empty() {
                    break;
                }
                let (name, value) = line.split_once(": ").unwrap();
                match name.to_ascii_lowercase().as_str() {
                    "content-length" => length = value.parse().unwrap(),
                    "authorization" => authorization = Some(value.to_string()),
                    _ => {}
                }
            }
            let mut raw = vec![0; length];
            reader.read_exact(&mut raw).unwrap();
            log.lock().unwrap().push(Seen {
                path: request_line.split_whitespace().nth(1).unwrap().to_string(),
                authorization,
                body: serde_json::from_slice(&raw).unwrap(),
            });
            let mut stream = reader.into_inner();
            write!(
                stream,
                "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            )
            .unwrap();
        }
    });
    (base, seen, handle)
}

fn endpoint(base: &str, key_env: &str, retries: u32) -> HttpEndpoint {
    let mut config = LlmEndpoint::new(base, "gpt-3.5-turbo");
    config.api_key_env = key_env.into();
    config.max_retries = retries;
    config.backoff = Duration::from_millis(1);
    config.timeout = Duration::from_secs(5);
    HttpEndpoint::new(config)
}

fn request() -> ChatRequest {
    ChatRequest {
        model: "gpt-3.5-turbo".into(),
        messages: vec![ChatMessage::new(Role::User, "Paris")],
        temperature: 0.0,
    }
}

const OK: &str = r#"{"choices":[{"message":{"role":"assistant","content":"Madrid"}}]}"#;

#[test]
fn retries_server_errors_and_sends_bearer_token() {
    std::env::set_var("PSEUDOKIT_HTTP_TEST_KEY", "sekrit");
    let (base, seen, server) = serve(vec![(500, "{}".into()), (429, "{}".into()), (200, OK.into())]);
    let reply = endpoint(&base, "PSEUDOKIT_HTTP_TEST_KEY", 3).complete(&request()).unwrap();
    server.join().unwrap();
    assert_eq!(reply, "Madrid");
    let seen = seen.lock().unwrap();
    assert_eq!(seen.len(), 3);
    for s in seen.iter() {
        assert_eq!(s.path, "/v1/chat/completions");
        assert_eq!(s.authorization.as_deref(), Some("Bearer sekrit"));
        assert_eq!(s.body["model"], "gpt-3.5-turbo");
        assert_eq!(s.body["temperature"], 0.0);
        assert_eq!(s.body["messages"][0], serde_json::json!({"role": "user", "content": "Paris"}));
    }
}

#[test]
fn client_errors_are_not_retried() {
    let (base, seen, server) = serve(vec![(400, "bad".into())]);
    let err = endpoint(&base, "PSEUDOKIT_HTTP_UNSET_KEY", 3).complete(&request()).unwrap_err();
    server.join().unwrap();
    assert_eq!(err, TransportError::Status { status: 400, body: "bad".into() });
    let seen = seen.lock().unwrap();
    assert_eq!(seen.len(), 1);
    assert_eq!(seen[0].authorization, None);
}

#[test]
fn retry_budget_is_bounded() {
    let (base, seen, server) = serve(vec![(503, "{}".into()), (503, "{}".into())]);
    let err = endpoint(&base, "PSEUDOKIT_HTTP_UNSET_KEY", 1).complete(&request()).unwrap_err();
    server.join().unwrap();
    assert!(matches!(err, TransportError::Exhausted { attempts: 2, .. }), "{err:?}");
    assert_eq!(seen.lock().unwrap().len(), 2);
}

#[test]
fn malformed_body_is_reported() {
    let (base, _, server) = serve(vec![(200, r#"{"choices":[]}"#.into())]);
    let err = endpoint(&base, "PSEUDOKIT_HTTP_UNSET_KEY", 0).complete(&request()).unwrap_err();
    server.join().unwrap();
    assert!(matches!(err, TransportError::Malformed(_)));
}
