use std::fs::File;
use std::io::Write as _;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{validate_proposal, SeedProposal, SeedSource, SeederError};
use crate::filter::SeedAction;
use crate::pddl::{Domain, ProblemInstance};

pub const API_KEY_VAR: &str = "SCALEPLAN_API_KEY";
pub const API_BASE_VAR: &str = "SCALEPLAN_API_BASE";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeederConfig {
    /// Base URL; `/chat/completions` is appended. Falls back to
    /// `SCALEPLAN_API_BASE` when unset.
    pub endpoint_url: Option<String>,
    pub model_name: String,
    pub max_retries: usize,
    /// Seconds.
    pub timeout: f64,
    pub temperature: f64,
}

impl Default for SeederConfig {
    fn default() -> Self {
        SeederConfig {
            endpoint_url: None,
            model_name: "gpt-4o-mini".to_string(),
            max_retries: 2,
            timeout: 30.0,
            temperature: 0.0,
        }
    }
}

impl SeederConfig {
    pub fn endpoint(&self) -> Result<String, SeederError> {
        let base = match &self.endpoint_url {
            Some(u) => u.clone(),
            None => std::env::var(API_BASE_VAR).map_err(|_| {
                SeederError::Config(format!("no endpoint configured and {API_BASE_VAR} unset"))
            })?,
        };
        Ok(format!("{}/chat/completions", base.trim_end_matches('/')))
    }

    fn check(&self) -> Result<(), SeederError> {
        if self.timeout.is_nan() || self.timeout <= 0.0 {
            return Err(SeederError::Config("timeout must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

impl ChatMessage {
    pub fn new(role: &str, content: impl Into<String>) -> Self {
        ChatMessage {
            role: role.to_string(),
            content: content.into(),
        }
    }
}

/// A chat-completion backend. Implementations count the requests they send.
pub trait ChatClient: Send + Sync {
    fn complete(&self, messages: &[ChatMessage]) -> Result<String, SeederError>;
    fn requests(&self) -> usize;
}

/// OpenAI-compatible client over blocking HTTP.
pub struct HttpChatClient {
    config: SeederConfig,
    url: String,
    api_key: Option<String>,
    agent: ureq::Agent,
    requests: AtomicUsize,
    trace: Option<Mutex<File>>,
}

impl HttpChatClient {
    /// Reads the bearer token from `SCALEPLAN_API_KEY` when set.
    pub fn new(config: SeederConfig) -> Result<Self, SeederError> {
        config.check()?;
        let url = config.endpoint()?;
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs_f64(config.timeout)))
            .http_status_as_error(false)
            .build()
            .into();
        Ok(HttpChatClient {
            config,
            url,
            api_key: std::env::var(API_KEY_VAR).ok().filter(|k| !k.is_empty()),
            agent,
            requests: AtomicUsize::new(0),
            trace: None,
        })
    }

    /// Appends request/response transcripts as JSON lines to `path`.
    pub fn with_trace(mut self, path: &Path) -> std::io::Result<Self> {
        let file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)?;
        self.trace = Some(Mutex::new(file));
        Ok(self)
    }

    fn log(&self, entry: Value) {
        if let Some(trace) = &self.trace {
            let mut f = trace.lock().unwrap_or_else(|e| e.into_inner());
            let _ = writeln!(f, "{entry}");
        }
    }
}

impl ChatClient for HttpChatClient {
    fn complete(&self, messages: &[ChatMessage]) -> Result<String, SeederError> {
        let n = self.requests.fetch_add(1, Ordering::SeqCst) + 1;
        let body = json!({
            "model": self.config.model_name,
            "messages": messages,
            "temperature": self.config.temperature,
            "response_format": {"type": "json_object"},
        });
        self.log(json!({"request": n, "url": self.url, "body": body}));

        let mut req = self.agent.post(&self.url);
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req
            .send_json(&body)
            .map_err(|e| SeederError::Transport(e.to_string()))?;
        let status = resp.status().as_u16();
        let text = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| SeederError::Transport(e.to_string()))?;
        self.log(json!({"response": n, "status": status, "body": text}));
        if !(200..300).contains(&status) {
            return Err(SeederError::Transport(format!("HTTP {status}")));
        }
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| SeederError::Transport(format!("response is not JSON: {e}")))?;
        value["choices"][0]["message"]["content"]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| SeederError::Transport("response has no message content".into()))
    }

    fn requests(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }
}

/// Why a reply was refused; the message is fed back to the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    Malformed(String),
    Invalid(Vec<String>),
}

impl Rejection {
    fn feedback(&self) -> String {
        match self {
            Rejection::Malformed(m) => {
                format!("Your reply could not be used: {m}. Reply with the JSON object only.")
            }
            Rejection::Invalid(v) => format!(
                "Your reply was rejected:\n- {}\nUse only the listed actions and objects.",
                v.join("\n- ")
            ),
        }
    }
}

/// Strips a surrounding Markdown code fence, if any.
fn unfence(text: &str) -> &str {
    let t = text.trim();
    let Some(rest) = t.strip_prefix("```") else {
        return t;
    };
    let rest = rest.trim_start_matches(|c: char| c.is_ascii_alphabetic());
    rest.strip_suffix("```").unwrap_or(rest).trim()
}

/// Parses the reply as a JSON object.
pub fn reply_json(reply: &str) -> Result<Value, Rejection> {
    let v: Value = serde_json::from_str(unfence(reply))
        .map_err(|e| Rejection::Malformed(format!("invalid JSON ({e})")))?;
    if !v.is_object() {
        return Err(Rejection::Malformed("expected a JSON object".into()));
    }
    Ok(v)
}

/// Sends `messages`, then re-prompts with the rejection reason until
/// `accept` succeeds or `max_retries + 1` requests were made. Transport
/// failures are returned at once.
pub fn complete_validated<T>(
    client: &dyn ChatClient,
    mut messages: Vec<ChatMessage>,
    max_retries: usize,
    mut accept: impl FnMut(&str) -> Result<T, Rejection>,
) -> Result<T, SeederError> {
    let attempts = max_retries + 1;
    let mut last = Rejection::Malformed("no reply".into());
    for _ in 0..attempts {
        let reply = client.complete(&messages)?;
        match accept(&reply) {
            Ok(v) => return Ok(v),
            Err(r) => {
                messages.push(ChatMessage::new("assistant", reply));
                messages.push(ChatMessage::new("user", r.feedback()));
                last = r;
            }
        }
    }
    Err(match last {
        Rejection::Malformed(message) => SeederError::MalformedResponse { attempts, message },
        Rejection::Invalid(violations) => SeederError::HallucinationRejected {
            attempts,
            violations,
        },
    })
}

fn seed_prompt(task_text: &str, domain: &Domain, instance: &ProblemInstance) -> Vec<ChatMessage> {
    let mut actions = String::new();
    for a in &domain.actions {
        let params: Vec<String> = a
            .params
            .iter()
            .map(|p| format!("?{} - {}", p.name, p.ty))
            .collect();
        actions.push_str(&format!("- {}({})\n", a.name, params.join(", ")));
    }
    let mut objects = String::new();
    for (o, t) in &instance.objects {
        objects.push_str(&format!("- {o} - {t}\n"));
    }
    let system = "You select the final actions needed to accomplish a household robot task. \
        Reply with a JSON object of the form {\"seeds\": [{\"action\": NAME, \"args\": [OBJECT or \"*\", ...]}]} \
        using only the listed action names and object names. Use \"*\" for an argument you cannot determine.";
    let user = format!("Actions:\n{actions}\nObjects:\n{objects}\nTask: {task_text}");
    vec![
        ChatMessage::new("system", system),
        ChatMessage::new("user", user),
    ]
}

#[derive(Deserialize)]
struct SeedReply {
    seeds: Vec<SeedAction>,
    #[serde(default)]
    rationale: Option<String>,
}

/// Asks the model for seed actions and validates them against the domain
/// and instance, re-prompting with the violations on failure.
pub fn llm_seed(
    task_text: &str,
    domain: &Domain,
    instance: &ProblemInstance,
    client: &dyn ChatClient,
    config: &SeederConfig,
) -> Result<SeedProposal, SeederError> {
    config.check()?;
    complete_validated(
        client,
        seed_prompt(task_text, domain, instance),
        config.max_retries,
        |reply| {
            let v = reply_json(reply)?;
            let parsed: SeedReply = serde_json::from_value(v)
                .map_err(|e| Rejection::Malformed(format!("unexpected shape ({e})")))?;
            if parsed.seeds.is_empty() {
                return Err(Rejection::Malformed("`seeds` is empty".into()));
            }
            let proposal = SeedProposal {
                seeds: parsed.seeds,
                rationale: parsed.rationale.unwrap_or_default(),
                source: SeedSource::Llm,
            };
            validate_proposal(proposal, domain, instance).map_err(|v| {
                Rejection::Invalid(v.iter().map(|x| format!("seed {}: {x}", x.seed)).collect())
            })
        },
    )
}
