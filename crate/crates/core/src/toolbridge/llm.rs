// SPDX-License-Identifier: Apache-2.0

//! Chat-completion client and the prompts sent through it.

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::adapter::{Adapter, AdapterKind};
use super::{fixture_path, ToolError};
use crate::templates::{render, TemplateStore, TESTBENCH_SYSTEM, TESTBENCH_USER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::System,
            content: content.into(),
        }
    }

    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::User,
            content: content.into(),
        }
    }
}

/// Mock fixture key: SHA-256 of the JSON-encoded message list.
pub fn message_key(messages: &[ChatMessage]) -> String {
    let encoded = serde_json::to_vec(messages).expect("messages serialize");
    hex::encode(Sha256::digest(encoded))
}

/// Sends `messages` and returns the first choice's content.
///
/// HTTP 429 is retried with capped exponential backoff and seeded jitter;
/// any other non-2xx status fails immediately.
pub fn llm_chat(messages: &[ChatMessage], adapter: &Adapter) -> Result<String, ToolError> {
    let cfg = adapter.config();
    cfg.expect_kind(AdapterKind::Llm)?;
    if messages.is_empty() {
        return Err(ToolError::EmptyInput("messages"));
    }
    adapter
        .requests
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .push(messages.to_vec());
    let _slot = adapter.begin();
    if cfg.mock_mode {
        return mock_reply(messages, adapter);
    }

    let endpoint = cfg.endpoint.as_deref().ok_or_else(|| ToolError::InvalidAdapter {
        adapter: cfg.name.clone(),
        reason: "no endpoint".into(),
    })?;
    let token = match &cfg.credential_env {
        Some(var) => Some(std::env::var(var).map_err(|_| ToolError::MissingCredential(var.clone()))?),
        None => None,
    };
    let body = json!({
        "model": cfg.model.as_deref().unwrap_or_default(),
        "messages": messages,
    })
    .to_string();
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .http_status_as_error(false)
        .timeout_global(Some(Duration::from_secs_f64(cfg.timeout)))
        .build()
        .into();
    let mut rng = ChaCha8Rng::seed_from_u64(adapter.seed());

    let mut attempt = 0u32;
    loop {
        let mut req = agent.post(endpoint).header("Content-Type", "application/json");
        if let Some(token) = &token {
            req = req.header("Authorization", &format!("Bearer {token}"));
        }
        let mut resp = req.send(body.as_str()).map_err(|e| ToolError::Transport(e.to_string()))?;
        let status = resp.status().as_u16();
        if status == 429 {
            if attempt >= cfg.retry.max_retries {
                return Err(ToolError::RateLimited { attempts: attempt + 1 });
            }
            let delay = backoff(&cfg.retry, attempt, &mut rng);
            log::warn!("{}: rate limited, retrying in {delay:?}", cfg.name);
            std::thread::sleep(delay);
            attempt += 1;
            continue;
        }
        if !(200..300).contains(&status) {
            return Err(ToolError::HttpError(status));
        }
        let text = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| ToolError::Transport(e.to_string()))?;
        return first_choice(&text);
    }
}

/// Delay before retry number `attempt + 1`: `base * 2^attempt`, capped, then
/// scaled by a factor drawn from [0.5, 1].
fn backoff(policy: &super::RetryPolicy, attempt: u32, rng: &mut ChaCha8Rng) -> Duration {
    let exp = policy
        .base_delay_ms
        .saturating_mul(1u64 << attempt.min(32))
        .min(policy.max_delay_ms);
    let half = exp / 2;
    Duration::from_millis(half + rng.gen_range(0..=exp - half))
}

fn first_choice(body: &str) -> Result<String, ToolError> {
    let v: Value = serde_json::from_str(body).map_err(|e| ToolError::MalformedResponse(e.to_string()))?;
    v.get("choices")
        .and_then(|c| c.get(0))
        .and_then(|c| c.get("message"))
        .and_then(|m| m.get("content"))
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| ToolError::MalformedResponse("no choices[0].message.content".into()))
}

fn mock_reply(messages: &[ChatMessage], adapter: &Adapter) -> Result<String, ToolError> {
    let key = message_key(messages);
    if let Some(text) = adapter.responses.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(text.clone());
    }
    if let Some(path) = fixture_path(adapter.config(), &format!("{key}.txt")) {
        match std::fs::read_to_string(&path) {
            Ok(text) => return Ok(text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(ToolError::WorkdirError(format!("{}: {e}", path.display()))),
        }
    }
    Err(ToolError::MissingFixture {
        adapter: adapter.name().to_string(),
        key,
    })
}

/// Prompt asking an LLM to add numbered pass/fail constraints to a testbench.
pub fn build_testbench_augmentation_prompt(
    reference_code: &str,
    testbench: &str,
    instruction: &str,
    templates: &TemplateStore,
) -> Result<Vec<ChatMessage>, ToolError> {
    for (value, what) in [
        (reference_code, "reference code"),
        (testbench, "testbench"),
        (instruction, "instruction"),
    ] {
        if value.trim().is_empty() {
            return Err(ToolError::EmptyInput(what));
        }
    }
    let system = templates.load(TESTBENCH_SYSTEM)?;
    let user = render(
        &templates.load(TESTBENCH_USER)?,
        &[
            ("reference_code", reference_code),
            ("testbench", testbench),
            ("instruction", instruction),
        ],
    );
    Ok(vec![ChatMessage::system(system), ChatMessage::user(user)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toolbridge::{RetryPolicy, ToolAdapter};
    use std::io::{BufRead, BufReader, Read, Write};
    use std::net::TcpListener;

    #[test]
    fn mock_registered_and_file_fixtures() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ToolAdapter::mock("llm", AdapterKind::Llm);
        cfg.fixtures_dir = Some(dir.path().to_path_buf());
        let a = Adapter::new(cfg, 7).unwrap();
        let m1 = vec![ChatMessage::user("one")];
        let m2 = vec![ChatMessage::user("two")];
        a.register_response(&m1, "reply one");
        std::fs::write(dir.path().join(format!("{}.txt", message_key(&m2))), "reply two").unwrap();
        assert_eq!(llm_chat(&m1, &a).unwrap(), "reply one");
        assert_eq!(llm_chat(&m2, &a).unwrap(), "reply two");
        assert!(matches!(
            llm_chat(&[ChatMessage::user("three")], &a),
            Err(ToolError::MissingFixture { .. })
        ));
        assert_eq!(a.recorded_requests().len(), 3);
        assert_eq!(a.calls(), 3);
    }

    #[test]
    fn key_depends_on_roles_and_order() {
        let a = vec![ChatMessage::system("x"), ChatMessage::user("y")];
        let b = vec![ChatMessage::user("x"), ChatMessage::user("y")];
        let c = vec![ChatMessage::user("y"), ChatMessage::system("x")];
        assert_ne!(message_key(&a), message_key(&b));
        assert_ne!(message_key(&a), message_key(&c));
        assert_eq!(message_key(&a), message_key(&a.clone()));
    }

    #[test]
    fn choice_extraction() {
        assert_eq!(
            first_choice(r#"{"choices":[{"message":{"role":"assistant","content":"hi"}}]}"#).unwrap(),
            "hi"
        );
        assert!(matches!(first_choice(r#"{"id":"x"}"#), Err(ToolError::MalformedResponse(_))));
        assert!(matches!(first_choice("not json"), Err(ToolError::MalformedResponse(_))));
    }

    #[test]
    fn backoff_is_capped_and_seeded() {
        let policy = RetryPolicy { max_retries: 10, base_delay_ms: 100, max_delay_ms: 1000 };
        let mut r1 = ChaCha8Rng::seed_from_u64(3);
        let mut r2 = ChaCha8Rng::seed_from_u64(3);
        for attempt in 0..10 {
            let d = backoff(&policy, attempt, &mut r1);
            assert_eq!(d, backoff(&policy, attempt, &mut r2));
            let cap = (100u64 << attempt).min(1000);
            assert!(d.as_millis() as u64 >= cap / 2 && d.as_millis() as u64 <= cap);
        }
    }

    /// Serves the given (status, body) pairs to successive connections and
    /// returns the request bodies it saw.
    fn serve(responses: Vec<(u16, &'static str)>) -> (String, std::thread::JoinHandle<Vec<String>>) {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let url = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
        let handle = std::thread::spawn(move || {
            let mut bodies = Vec::new();
            for (status, body) in responses {
                let (stream, _) = listener.accept().unwrap();
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut len = 0usize;
                loop {
                    let mut line = String::new();
                    reader.read_line(&mut line).unwrap();
                    if line == "\r\n" || line.is_empty() {
                        break;
                    }
                    if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                        len = v.trim().parse().unwrap();
                    }
                }
                let mut buf = vec![0u8; len];
                reader.read_exact(&mut buf).unwrap();
                bodies.push(String::from_utf8(buf).unwrap());
                let mut stream = stream;
                write!(
                    stream,
                    "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                )
                .unwrap();
            }
            bodies
        });
        (url, handle)
    }

    fn http_adapter(url: String) -> Adapter {
        let mut cfg = ToolAdapter::mock("llm", AdapterKind::Llm);
        cfg.mock_mode = false;
        cfg.endpoint = Some(url);
        cfg.model = Some("m".into());
        cfg.timeout = 10.0;
        cfg.retry = RetryPolicy { max_retries: 2, base_delay_ms: 1, max_delay_ms: 5 };
        Adapter::new(cfg, 1).unwrap()
    }

    #[test]
    fn retries_after_429() {
        let ok = r#"{"choices":[{"message":{"role":"assistant","content":"done"}}]}"#;
        let (url, server) = serve(vec![(429, "{}"), (200, ok)]);
        let a = http_adapter(url);
        let msgs = vec![ChatMessage::system("s"), ChatMessage::user("u")];
        assert_eq!(llm_chat(&msgs, &a).unwrap(), "done");
        let bodies = server.join().unwrap();
        assert_eq!(bodies.len(), 2);
        let sent: Value = serde_json::from_str(&bodies[0]).unwrap();
        assert_eq!(sent["model"], "m");
        assert_eq!(sent["messages"][1]["role"], "user");
        assert_eq!(sent["messages"][1]["content"], "u");
    }

    #[test]
    fn gives_up_after_retry_cap() {
        let (url, server) = serve(vec![(429, "{}"), (429, "{}"), (429, "{}")]);
        let a = http_adapter(url);
        let r = llm_chat(&[ChatMessage::user("u")], &a);
        assert!(matches!(r, Err(ToolError::RateLimited { attempts: 3 })));
        server.join().unwrap();
    }

    #[test]
    fn other_statuses_and_missing_choices() {
        let (url, server) = serve(vec![(500, "{}"), (200, r#"{"object":"chat.completion"}"#)]);
        let a = http_adapter(url);
        assert!(matches!(llm_chat(&[ChatMessage::user("u")], &a), Err(ToolError::HttpError(500))));
        assert!(matches!(
            llm_chat(&[ChatMessage::user("u")], &a),
            Err(ToolError::MalformedResponse(_))
        ));
        server.join().unwrap();
    }

    #[test]
    fn testbench_prompt() {
        let store = TemplateStore::bundled();
        let m = build_testbench_augmentation_prompt("module r; endmodule", "module tb; endmodule", "make a ROM", &store)
            .unwrap();
        assert_eq!(m.len(), 2);
        assert!(m[0].content.contains("CONSTRAINT <id> PASS"));
        for part in ["module r; endmodule", "module tb; endmodule", "make a ROM"] {
            assert!(m[1].content.contains(part));
        }
        assert!(matches!(
            build_testbench_augmentation_prompt("r", " ", "i", &store),
            Err(ToolError::EmptyInput("testbench"))
        ));

        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join(TESTBENCH_SYSTEM), "SYS").unwrap();
        std::fs::write(dir.path().join(TESTBENCH_USER), "{testbench}|{reference_code}").unwrap();
        let m = build_testbench_augmentation_prompt("r", "t", "i", &TemplateStore::from_dir(dir.path())).unwrap();
        assert_eq!(m[0].content, "SYS");
        assert_eq!(m[1].content, "t|r");
    }
}
