//! Lenient HTML scanning: in-namespace link targets and visible text, with
//! navigation boxes left out.

use std::fmt;

use normnet_core::canonical::FilterConfig;
use percent_encoding::percent_decode_str;

/// Input the scanner cannot recover from, located by byte offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HtmlError {
    pub offset: usize,
    pub message: &'static str,
}

impl fmt::Display for HtmlError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HTML parse error at byte {}: {}",
            self.offset, self.message
        )
    }
}

impl std::error::Error for HtmlError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token<'a> {
    Start {
        name: String,
        attrs: Vec<(String, String)>,
        self_closing: bool,
    },
    End {
        name: String,
    },
    Text(&'a str),
}

const VOID: &[&str] = &[
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "param", "source",
    "track", "wbr",
];
const INLINE: &[&str] = &[
    "a", "abbr", "b", "bdi", "cite", "code", "em", "i", "small", "span", "strong", "sub", "sup",
    "u",
];
const RAW_TEXT: &[&str] = &["script", "style"];

fn find_ci(hay: &[u8], needle: &[u8], from: usize) -> Option<usize> {
    (from..=hay.len().saturating_sub(needle.len()))
        .find(|&i| hay[i..i + needle.len()].eq_ignore_ascii_case(needle))
}

/// Splits `html` into tags and text. Only unterminated comments, tags,
/// quoted attribute values and script/style bodies are errors.
pub fn tokenize<'a>(html: &'a str) -> Result<Vec<Token<'a>>, HtmlError> {
    let b = html.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let mut text_start = 0;
    let flush = |out: &mut Vec<Token<'a>>, from: usize, to: usize| {
        if to > from {
            out.push(Token::Text(&html[from..to]));
        }
    };
    while i < b.len() {
        if b[i] != b'<' {
            i += 1;
            continue;
        }
        let at = i;
        let next = b.get(i + 1).copied();
        if html[i..].starts_with("<!--") {
            flush(&mut out, text_start, at);
            let end = html[i + 4..].find("-->").ok_or(HtmlError {
                offset: at,
                message: "unterminated comment",
            })?;
            i = i + 4 + end + 3;
            text_start = i;
        } else if matches!(next, Some(b'!') | Some(b'?')) {
            flush(&mut out, text_start, at);
            let end = html[i..].find('>').ok_or(HtmlError {
                offset: at,
                message: "unterminated declaration",
            })?;
            i += end + 1;
            text_start = i;
        } else if next == Some(b'/') && b.get(i + 2).is_some_and(u8::is_ascii_alphabetic) {
            flush(&mut out, text_start, at);
            let end = html[i..].find('>').ok_or(HtmlError {
                offset: at,
                message: "unterminated tag",
            })?;
            let name: String = html[i + 2..i + end]
                .split(|c: char| c.is_ascii_whitespace() || c == '/')
                .next()
                .unwrap_or("")
                .to_ascii_lowercase();
            out.push(Token::End { name });
            i += end + 1;
            text_start = i;
        } else if next.is_some_and(|c| c.is_ascii_alphabetic()) {
            flush(&mut out, text_start, at);
            let (token, after) = start_tag(html, at)?;
            i = after;
            if let Token::Start {
                name,
                self_closing: false,
                ..
            } = &token
            {
                if RAW_TEXT.contains(&name.as_str()) {
                    let close = format!("</{name}");
                    let end = find_ci(b, close.as_bytes(), i).ok_or(HtmlError {
                        offset: at,
                        message: "unterminated script or style element",
                    })?;
                    let name = name.clone();
                    out.push(token);
                    let gt = html[end..].find('>').ok_or(HtmlError {
                        offset: end,
                        message: "unterminated tag",
                    })?;
                    out.push(Token::End { name });
                    i = end + gt + 1;
                    text_start = i;
                    continue;
                }
            }
            out.push(token);
            text_start = i;
        } else {
            i += 1;
        }
    }
    flush(&mut out, text_start, b.len());
    Ok(out)
}

fn start_tag(html: &str, at: usize) -> Result<(Token<'_>, usize), HtmlError> {
    let b = html.as_bytes();
    let unterminated = HtmlError {
        offset: at,
        message: "unterminated tag",
    };
    let mut i = at + 1;
    let name_start = i;
    while i < b.len() && !b[i].is_ascii_whitespace() && b[i] != b'>' && b[i] != b'/' {
        i += 1;
    }
    let name = html[name_start..i].to_ascii_lowercase();
    let mut attrs = Vec::new();
    loop {
        while i < b.len() && b[i].is_ascii_whitespace() {
            i += 1;
        }
        match b.get(i) {
            None => return Err(unterminated),
            Some(b'>') => {
                return Ok((
                    Token::Start {
                        name,
                        attrs,
                        self_closing: false,
                    },
                    i + 1,
                ))
            }
            Some(b'/') => {
                if b.get(i + 1) == Some(&b'>') {
                    return Ok((
                        Token::Start {
                            name,
                            attrs,
                            self_closing: true,
                        },
                        i + 2,
                    ));
                }
                i += 1;
                continue;
            }
            _ => {}
        }
        let key_start = i;
        while i < b.len() && !b[i].is_ascii_whitespace() && !matches!(b[i], b'=' | b'>' | b'/') {
            i += 1;
        }
        let key = html[key_start..i].to_ascii_lowercase();
        while i < b.len() && b[i].is_ascii_whitespace() {
            i += 1;
        }
        let mut value = String::new();
        if b.get(i) == Some(&b'=') {
            i += 1;
            while i < b.len() && b[i].is_ascii_whitespace() {
                i += 1;
            }
            match b.get(i) {
                Some(&q @ (b'"' | b'\'')) => {
                    let end = html[i + 1..].find(q as char).ok_or(HtmlError {
                        offset: i,
                        message: "unterminated attribute value",
                    })?;
                    value = decode_entities(&html[i + 1..i + 1 + end]);
                    i += end + 2;
                }
                Some(_) => {
                    let v_start = i;
                    while i < b.len() && !b[i].is_ascii_whitespace() && b[i] != b'>' {
                        i += 1;
                    }
                    value = decode_entities(&html[v_start..i]);
                }
                None => return Err(unterminated),
            }
        }
        if !key.is_empty() {
            attrs.push((key, value));
        }
    }
}

/// Replaces character references; unknown ones are kept verbatim.
pub fn decode_entities(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        rest = &rest[amp..];
        let decoded = rest.find(';').filter(|&e| e <= 10).and_then(|e| {
            let body = &rest[1..e];
            let c = match body {
                "amp" => Some('&'),
                "lt" => Some('<'),
                "gt" => Some('>'),
                "quot" => Some('"'),
                "apos" => Some('\''),
                "nbsp" => Some(' '),
                _ => {
                    let code = match body.strip_prefix('#') {
                        Some(hex) if hex.starts_with(['x', 'X']) => {
                            u32::from_str_radix(&hex[1..], 16).ok()
                        }
                        Some(dec) => dec.parse().ok(),
                        None => None,
                    };
                    code.and_then(char::from_u32)
                }
            };
            c.map(|c| (c, e))
        });
        match decoded {
            Some((c, e)) => {
                out.push(c);
                rest = &rest[e + 1..];
            }
            None => {
                out.push('&');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

/// Canonical title of an in-namespace link, or `None` for anything else.
pub fn link_target(href: &str, cfg: &FilterConfig) -> Option<String> {
    let (path, query) = match href
        .split_once('#')
        .map_or(href, |(p, _)| p)
        .split_once('?')
    {
        Some((p, q)) => (p, Some(q)),
        None => (href.split_once('#').map_or(href, |(p, _)| p), None),
    };
    let raw = if let Some(title) =
        query.and_then(|q| q.split('&').find_map(|kv| kv.strip_prefix("title=")))
    {
        title
    } else if let Some(i) = path.find("/wiki/") {
        &path[i + 6..]
    } else if path.contains("://") || path.starts_with('/') {
        return None;
    } else {
        path.strip_prefix("./").unwrap_or(path)
    };
    let spaced = raw.replace('+', " ");
    let decoded = percent_decode_str(&spaced).decode_utf8().ok()?;
    let bare = cfg.strip_namespace(&decoded)?;
    let title = cfg.normalize_title(bare);
    (!title.is_empty()).then_some(title)
}

/// Links and visible text of one page.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedPage {
    /// Canonical link targets in document order, duplicates kept.
    pub links: Vec<String>,
    pub text: String,
}

fn is_navbox(attrs: &[(String, String)], cfg: &FilterConfig) -> bool {
    attrs
        .iter()
        .any(|(k, v)| matches!(k.as_str(), "class" | "id" | "role") && cfg.is_navbox_marker(v))
}

pub fn parse_page(html: &str, cfg: &FilterConfig) -> Result<ParsedPage, HtmlError> {
    let mut page = ParsedPage::default();
    // open elements with a flag for navbox or raw-text containers
    let mut stack: Vec<(String, bool)> = Vec::new();
    let hidden = |stack: &[(String, bool)]| stack.iter().any(|(_, h)| *h);
    for token in tokenize(html)? {
        match token {
            Token::Start {
                name,
                attrs,
                self_closing,
            } => {
                let hide = is_navbox(&attrs, cfg) || RAW_TEXT.contains(&name.as_str());
                if name == "a" && !hide && !hidden(&stack) {
                    if let Some((_, href)) = attrs.iter().find(|(k, _)| k == "href") {
                        page.links.extend(link_target(href, cfg));
                    }
                }
                if !INLINE.contains(&name.as_str()) {
                    page.text.push(' ');
                }
                if !self_closing && !VOID.contains(&name.as_str()) {
                    stack.push((name, hide));
                }
            }
            Token::End { name } => {
                if let Some(pos) = stack.iter().rposition(|(n, _)| *n == name) {
                    stack.truncate(pos);
                }
                if !INLINE.contains(&name.as_str()) {
                    page.text.push(' ');
                }
            }
            Token::Text(t) => {
                if !hidden(&stack) {
                    page.text.push_str(&decode_entities(t));
                }
            }
        }
    }
    Ok(page)
}

/// In-namespace link targets outside navigation boxes, in document order.
pub fn extract_links(html: &str, cfg: &FilterConfig) -> Result<Vec<String>, HtmlError> {
    parse_page(html, cfg).map(|p| p.links)
}
