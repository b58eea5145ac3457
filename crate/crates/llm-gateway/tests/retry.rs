//! Live-request behavior against a local stub endpoint.

use llm_gateway::{Gateway, GatewayError, ModelConfig};
use std::io::{Read, Write};
use std::net::TcpListener;

/// Serves canned HTTP responses, one per accepted connection.
fn stub_server(responses: Vec<String>) -> String {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    std::thread::spawn(move || {
        for response in responses {
            let (mut stream, _) = listener.accept().unwrap();
            let mut buf = [0u8; 4096];
            // One read is enough for these small test requests.
            let _ = stream.read(&mut buf);
            stream.write_all(response.as_bytes()).unwrap();
        }
    });
    format!("http://{addr}")
}

fn http(status_line: &str, body: &str) -> String {
    format!(
        "HTTP/1.1 {status_line}\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}",
        body.len()
    )
}

fn ok_completion(text: &str) -> String {
    let body =
        serde_json::json!({ "choices": [{ "message": { "role": "assistant", "content": text } }] });
    http("200 OK", &body.to_string())
}

fn config(endpoint: String, retries: usize) -> ModelConfig {
    let mut cfg = ModelConfig::new(endpoint, "stub-model");
    cfg.max_retries = retries;
    cfg.timeout_secs = 5;
    cfg
}

#[test]
fn transient_rate_limit_is_retried_to_success() {
    let endpoint = stub_server(vec![
        http("429 Too Many Requests", "{}"),
        ok_completion("VISUALIZE bar SELECT a, b FROM t"),
    ]);
    let dir = tempfile::tempdir().unwrap();
    let gateway = Gateway::new(dir.path());
    let text = gateway.complete("prompt", &config(endpoint, 2)).unwrap();
    assert_eq!(text, "VISUALIZE bar SELECT a, b FROM t");
}

#[test]
fn exhausted_retries_surface_rate_limiting() {
    let endpoint = stub_server(vec![
        http("429 Too Many Requests", "{}"),
        http("429 Too Many Requests", "{}"),
    ]);
    let dir = tempfile::tempdir().unwrap();
    let gateway = Gateway::new(dir.path());
    let err = gateway.complete("prompt", &config(endpoint, 1)).unwrap_err();
    assert!(matches!(err, GatewayError::RateLimited { attempts: 2 }), "{err}");
}

#[test]
fn client_errors_are_not_retried() {
    let endpoint = stub_server(vec![http("400 Bad Request", "{\"error\":\"bad model\"}")]);
    let dir = tempfile::tempdir().unwrap();
    let gateway = Gateway::new(dir.path());
    let err = gateway.complete("prompt", &config(endpoint, 3)).unwrap_err();
    match err {
        GatewayError::ProviderError { status, body_excerpt } => {
            assert_eq!(status, 400);
            assert!(body_excerpt.contains("bad model"));
        }
        other => panic!("unexpected error {other}"),
    }
}

#[test]
fn responses_are_cached_and_replayable() {
    let endpoint = stub_server(vec![ok_completion("VISUALIZE pie SELECT a, b FROM t")]);
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(endpoint, 0);
    let live = Gateway::new(dir.path());
    let first = live.complete("prompt", &cfg).unwrap();
    // The stub only answers once; the second call must hit the cache.
    let second = live.complete("prompt", &cfg).unwrap();
    assert_eq!(first, second);
    let replay = Gateway::replay(dir.path());
    assert_eq!(replay.complete("prompt", &cfg).unwrap(), first);
    let miss = replay.complete("other prompt", &cfg).unwrap_err();
    assert!(matches!(miss, GatewayError::ReplayMiss { .. }));
}
