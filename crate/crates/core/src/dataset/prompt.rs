// SPDX-License-Identifier: Apache-2.0

//! Porting prompt construction and response parsing.
//!
//! The system prompt asks for two numbered parts: `(1)` the HLS-C code and
//! `(2)` a standalone instruction describing the hardware.

use std::sync::OnceLock;

use regex::Regex;

use super::DatasetError;
use crate::templates::{TemplateStore, PORTING_SYSTEM};
use crate::toolbridge::ChatMessage;

/// `[system: porting template, user: verilog_text]`.
pub fn build_porting_prompt(verilog_text: &str, templates: &TemplateStore) -> Result<Vec<ChatMessage>, DatasetError> {
    if verilog_text.trim().is_empty() {
        return Err(DatasetError::EmptyInput("verilog source"));
    }
    let system = templates.load(PORTING_SYSTEM)?;
    Ok(vec![ChatMessage::system(system), ChatMessage::user(verilog_text)])
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PortingResponse {
    pub hls_code: String,
    pub instruction: String,
}

fn heading(n: u8) -> &'static Regex {
    static H: OnceLock<[Regex; 2]> = OnceLock::new();
    let hs = H.get_or_init(|| {
        [1, 2].map(|n| {
            // "(1)", "**(1) Equivalent HLS Code:**", "### (2) Corresponding Prompt" ...
            Regex::new(&format!(
                r"(?mi)^[ \t>#*_]*\({n}\)[ \t*_]*(?:(?:equivalent\s+hls(?:-c)?\s+code|corresponding\s+prompt|prompt|instruction)[ \t]*:?)?[ \t*_:]*"
            ))
            .unwrap()
        })
    });
    &hs[n as usize - 1]
}

fn fence() -> &'static Regex {
    static F: OnceLock<Regex> = OnceLock::new();
    F.get_or_init(|| Regex::new(r"(?ms)^[ \t]*```[^\n]*\n(.*?)^[ \t]*```[ \t]*$").unwrap())
}

/// First fenced block in `text`: (start, end, body).
fn first_fenced(text: &str) -> Option<(usize, usize, &str)> {
    let c = fence().captures(text)?;
    let whole = c.get(0)?;
    Some((whole.start(), whole.end(), c.get(1)?.as_str()))
}

/// Removes a surrounding code fence, if the text is exactly one fenced block.
fn unfence(text: &str) -> &str {
    match first_fenced(text) {
        Some((s, e, body)) if text[..s].trim().is_empty() && text[e..].trim().is_empty() => body,
        _ => text,
    }
}

/// Splits a two-part porting response into code and instruction.
pub fn parse_porting_response(response: &str) -> Result<PortingResponse, DatasetError> {
    let h1 = heading(1).find(response);
    let h2 = heading(2).find_iter(response).find(|m| h1.is_none_or(|h| m.start() > h.start()));

    // Code: first fenced block before the instruction heading, else section (1) text.
    let code_region = &response[..h2.map_or(response.len(), |m| m.start())];
    let code = match first_fenced(code_region) {
        Some((_, _, body)) => body.to_string(),
        None => match h1 {
            Some(h) => code_region[h.end()..].to_string(),
            None => return Err(DatasetError::MissingCodeSection),
        },
    };
    if code.trim().is_empty() {
        return Err(DatasetError::MissingCodeSection);
    }

    let instruction = match h2 {
        Some(m) => unfence(&response[m.end()..]).to_string(),
        None => {
            // No heading: accept prose after the code block.
            let after = first_fenced(response).map_or("", |(_, e, _)| &response[e..]);
            after.to_string()
        }
    };
    let instruction = instruction.trim();
    if instruction.is_empty() {
        return Err(DatasetError::MissingInstructionSection);
    }
    Ok(PortingResponse {
        hls_code: code.trim_end().to_string() + "\n",
        instruction: instruction.to_string(),
    })
}
