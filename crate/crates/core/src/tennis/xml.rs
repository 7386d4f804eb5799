// Copyright 2026 The courtmine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Match XML: `match → set → game → point → hit`.
//!
//! Anything the model does not know (result tables, match facts, extra
//! attributes) is kept verbatim so a parsed match serializes back to an
//! equivalent document.

use std::borrow::Cow;
use std::fmt::{self, Write as _};

use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::error::{Error, Position, Result};

/// A generic XML node kept for elements the match model does not interpret.
#[derive(Debug, Clone, PartialEq)]
pub enum XmlNode {
    Element(XmlElement),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct XmlElement {
    pub name: String,
    pub attributes: Vec<(String, String)>,
    pub children: Vec<XmlNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hand {
    Forehand,
    Backhand,
}

impl Hand {
    pub fn as_str(&self) -> &'static str {
        match self {
            Hand::Forehand => "forehand",
            Hand::Backhand => "backhand",
        }
    }
}

impl fmt::Display for Hand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hit {
    /// Ordinal within the point, starting at 1.
    pub id: u32,
    pub hand: Hand,
    pub kind: String,
    /// `hh:mm:ss`.
    pub time: Option<String>,
    /// Meters across the court, origin at the centre.
    pub x: f64,
    /// Meters along the court, origin at the centre.
    pub y: f64,
    pub extra_attributes: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Point {
    pub id: Option<String>,
    pub top: Option<String>,
    pub service: Option<String>,
    pub score_a: Option<String>,
    pub score_b: Option<String>,
    pub winner: Option<String>,
    pub error: Option<String>,
    pub hits: Vec<Hit>,
    pub extra_attributes: Vec<(String, String)>,
    pub extra_children: Vec<XmlNode>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Game {
    pub id: Option<String>,
    pub service: Option<String>,
    pub score_a: Option<String>,
    pub score_b: Option<String>,
    pub points: Vec<Point>,
    pub extra_attributes: Vec<(String, String)>,
    pub extra_children: Vec<XmlNode>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatchSet {
    pub id: Option<String>,
    pub score_a: Option<String>,
    pub score_b: Option<String>,
    pub games: Vec<Game>,
    pub extra_attributes: Vec<(String, String)>,
    pub extra_children: Vec<XmlNode>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Player {
    pub id: String,
    pub name: Option<String>,
    pub extra_attributes: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Match {
    pub attributes: Vec<(String, String)>,
    pub players: Vec<Player>,
    pub sets: Vec<MatchSet>,
    /// `result`, `match_facts` and any other unrecognised children.
    pub metadata: Vec<XmlNode>,
}

impl Match {
    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.sets
            .iter()
            .flat_map(|s| &s.games)
            .flat_map(|g| &g.points)
    }
}

/// Decodes raw bytes according to the encoding named in the XML prolog
/// (UTF-8 when absent).
pub fn decode_document(bytes: &[u8]) -> Result<String> {
    if let Some(rest) = bytes.strip_prefix(b"\xEF\xBB\xBF") {
        return decode_document(rest);
    }
    let label = declared_encoding(bytes).unwrap_or_else(|| "utf-8".to_string());
    let encoding = encoding_rs::Encoding::for_label(label.as_bytes()).ok_or_else(|| Error::Xml {
        position: Position { line: 1, column: 1 },
        message: format!("unsupported encoding {label:?}"),
    })?;
    let (text, _, had_errors) = encoding.decode(bytes);
    if had_errors {
        return Err(Error::Xml {
            position: Position { line: 1, column: 1 },
            message: format!("document is not valid {}", encoding.name()),
        });
    }
    Ok(text.into_owned())
}

fn declared_encoding(bytes: &[u8]) -> Option<String> {
    let head = &bytes[..bytes.len().min(200)];
    let head = String::from_utf8_lossy(head);
    let decl = head.strip_prefix("<?xml")?;
    let decl = &decl[..decl.find("?>")?];
    let at = decl.find("encoding")?;
    let rest = decl[at + "encoding".len()..].trim_start().strip_prefix('=')?.trim_start();
    let quote = rest.chars().next().filter(|c| *c == '"' || *c == '\'')?;
    let rest = &rest[1..];
    Some(rest[..rest.find(quote)?].to_string())
}

pub fn parse_match_bytes(bytes: &[u8]) -> Result<Match> {
    parse_match_xml(&decode_document(bytes)?)
}

/// Parses a match document.
pub fn parse_match_xml(text: &str) -> Result<Match> {
    let root = parse_tree(text)?;
    if root.name != "match" {
        return Err(schema(&root.name, "root element must be <match>"));
    }
    build_match(root)
}

fn xml_error(text: &str, offset: u64, message: impl ToString) -> Error {
    Error::Xml {
        position: Position::from_offset(text, offset as usize),
        message: message.to_string(),
    }
}

fn start_element(text: &str, reader: &Reader<&[u8]>, e: &BytesStart<'_>) -> Result<XmlElement> {
    let name = String::from_utf8_lossy(e.name().as_ref()).into_owned();
    let mut attributes = Vec::new();
    for attr in e.attributes() {
        let attr = attr.map_err(|err| xml_error(text, reader.buffer_position(), err))?;
        let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
        let value = attr
            .unescape_value()
            .map_err(|err| xml_error(text, reader.buffer_position(), err))?
            .into_owned();
        attributes.push((key, value));
    }
    Ok(XmlElement {
        name,
        attributes,
        children: Vec::new(),
    })
}

fn parse_tree(text: &str) -> Result<XmlElement> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);
    let mut stack: Vec<XmlElement> = Vec::new();
    let mut root: Option<XmlElement> = None;

    let mut attach = |stack: &mut Vec<XmlElement>, node: XmlNode, offset: u64| -> Result<()> {
        match stack.last_mut() {
            Some(parent) => parent.children.push(node),
            None => match node {
                XmlNode::Element(el) if root.is_none() => root = Some(el),
                XmlNode::Element(_) => return Err(xml_error(text, offset, "multiple root elements")),
                XmlNode::Text(_) => return Err(xml_error(text, offset, "text outside the root element")),
            },
        }
        Ok(())
    };

    loop {
        let event = reader
            .read_event()
            .map_err(|err| xml_error(text, reader.error_position(), err))?;
        let offset = reader.buffer_position();
        match event {
            Event::Start(e) => stack.push(start_element(text, &reader, &e)?),
            Event::Empty(e) => {
                let el = start_element(text, &reader, &e)?;
                attach(&mut stack, XmlNode::Element(el), offset)?;
            }
            Event::End(_) => {
                let el = stack
                    .pop()
                    .ok_or_else(|| xml_error(text, offset, "unexpected closing tag"))?;
                attach(&mut stack, XmlNode::Element(el), offset)?;
            }
            Event::Text(t) => {
                let value = t.unescape().map_err(|err| xml_error(text, offset, err))?;
                if !value.trim().is_empty() {
                    attach(&mut stack, XmlNode::Text(value.into_owned()), offset)?;
                }
            }
            Event::CData(c) => {
                let value = String::from_utf8_lossy(&c.into_inner()).into_owned();
                attach(&mut stack, XmlNode::Text(value), offset)?;
            }
            Event::Eof => break,
            Event::Decl(_) | Event::PI(_) | Event::Comment(_) | Event::DocType(_) => {}
        }
    }
    if let Some(open) = stack.last() {
        return Err(xml_error(
            text,
            text.len() as u64,
            format!("unclosed element <{}>", open.name),
        ));
    }
    root.ok_or_else(|| xml_error(text, 0, "document has no root element"))
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Pulls known attributes out of an element, leaving the rest in order.
struct Attrs {
    path: String,
    rest: Vec<(String, String)>,
}

impl Attrs {
    fn new(path: String, attributes: Vec<(String, String)>) -> Self {
        Attrs {
            path,
            rest: attributes,
        }
    }

    fn take(&mut self, key: &str) -> Option<String> {
        let at = self.rest.iter().position(|(k, _)| k == key)?;
        Some(self.rest.remove(at).1)
    }

    fn require(&mut self, key: &str) -> Result<String> {
        self.take(key)
            .ok_or_else(|| schema(&self.path, format!("missing required attribute {key:?}")))
    }
}

fn build_match(root: XmlElement) -> Result<Match> {
    let mut m = Match {
        attributes: root.attributes,
        ..Match::default()
    };
    let (mut players, mut sets) = (0, 0);
    for child in root.children {
        match child {
            XmlNode::Element(el) if el.name == "player" => {
                players += 1;
                let mut attrs = Attrs::new(format!("match/player[{players}]"), el.attributes);
                let id = attrs.require("id")?;
                let name = attrs.take("name");
                m.players.push(Player {
                    id,
                    name,
                    extra_attributes: attrs.rest,
                });
            }
            XmlNode::Element(el) if el.name == "set" => {
                sets += 1;
                m.sets.push(build_set(el, format!("match/set[{sets}]"))?);
            }
            other => m.metadata.push(other),
        }
    }
    Ok(m)
}

fn build_set(el: XmlElement, path: String) -> Result<MatchSet> {
    let mut attrs = Attrs::new(path.clone(), el.attributes);
    let mut set = MatchSet {
        id: attrs.take("id"),
        score_a: attrs.take("score_A"),
        score_b: attrs.take("score_B"),
        ..MatchSet::default()
    };
    set.extra_attributes = attrs.rest;
    for child in el.children {
        match child {
            XmlNode::Element(g) if g.name == "game" => {
                let p = format!("{path}/game[{}]", set.games.len() + 1);
                set.games.push(build_game(g, p)?);
            }
            other => set.extra_children.push(other),
        }
    }
    Ok(set)
}

fn build_game(el: XmlElement, path: String) -> Result<Game> {
    let mut attrs = Attrs::new(path.clone(), el.attributes);
    let mut game = Game {
        id: attrs.take("id"),
        service: attrs.take("service"),
        score_a: attrs.take("score_A"),
        score_b: attrs.take("score_B"),
        ..Game::default()
    };
    game.extra_attributes = attrs.rest;
    for child in el.children {
        match child {
            XmlNode::Element(p) if p.name == "point" => {
                let sub = format!("{path}/point[{}]", game.points.len() + 1);
                game.points.push(build_point(p, sub)?);
            }
            other => game.extra_children.push(other),
        }
    }
    Ok(game)
}

fn build_point(el: XmlElement, path: String) -> Result<Point> {
    let mut attrs = Attrs::new(path.clone(), el.attributes);
    let mut point = Point {
        id: attrs.take("id"),
        top: attrs.take("top"),
        service: attrs.take("service"),
        score_a: attrs.take("score_A"),
        score_b: attrs.take("score_B"),
        winner: attrs.take("winner"),
        error: attrs.take("error"),
        ..Point::default()
    };
    point.extra_attributes = attrs.rest;
    for child in el.children {
        match child {
            XmlNode::Element(h) if h.name == "hit" => {
                let sub = format!("{path}/hit[{}]", point.hits.len() + 1);
                let hit = build_hit(h, &sub)?;
                let expected = point.hits.len() as u32 + 1;
                if hit.id != expected {
                    return Err(schema(
                        &sub,
                        format!("hit id {} out of sequence, expected {expected}", hit.id),
                    ));
                }
                point.hits.push(hit);
            }
            other => point.extra_children.push(other),
        }
    }
    Ok(point)
}

fn build_hit(el: XmlElement, path: &str) -> Result<Hit> {
    let mut attrs = Attrs::new(path.to_string(), el.attributes);
    let id_text = attrs.require("id")?;
    let id = id_text
        .trim()
        .parse::<u32>()
        .ok()
        .filter(|&v| v > 0)
        .ok_or_else(|| schema(path, format!("hit id {id_text:?} is not a positive integer")))?;
    let hand = match attrs.require("hand")?.as_str() {
        "forehand" => Hand::Forehand,
        "backhand" => Hand::Backhand,
        other => return Err(schema(path, format!("unknown hand {other:?}"))),
    };
    let kind = attrs.require("type")?;
    if kind.is_empty() || kind.chars().any(|c| c.is_whitespace() || c == '=' || c == ',') {
        return Err(schema(path, format!("hit type {kind:?} is not a single token")));
    }
    let time = attrs.take("time");
    if let Some(t) = &time {
        let parts: Vec<&str> = t.split(':').collect();
        if parts.len() != 3 || parts.iter().any(|p| p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit())) {
            return Err(schema(path, format!("time {t:?} is not hh:mm:ss")));
        }
    }
    let mut coord = |key: &str| -> Result<f64> {
        let raw = attrs.require(key)?;
        raw.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| schema(path, format!("{key}={raw:?} is not a finite number")))
    };
    let x = coord("x")?;
    let y = coord("y")?;
    Ok(Hit {
        id,
        hand,
        kind,
        time,
        x,
        y,
        extra_attributes: attrs.rest,
    })
}

/// Serializes a match back to UTF-8 XML.
pub fn write_match_xml(m: &Match) -> String {
    let mut out = String::from("<?xml version='1.0' encoding='UTF-8' ?>\n");
    open(&mut out, 0, "match", &m.attributes, false);
    for p in &m.players {
        let mut attrs = vec![("id".to_string(), p.id.clone())];
        push_opt(&mut attrs, "name", &p.name);
        attrs.extend(p.extra_attributes.iter().cloned());
        open(&mut out, 1, "player", &attrs, true);
    }
    for node in &m.metadata {
        write_node(&mut out, 1, node);
    }
    for s in &m.sets {
        let mut attrs = Vec::new();
        push_opt(&mut attrs, "id", &s.id);
        push_opt(&mut attrs, "score_A", &s.score_a);
        push_opt(&mut attrs, "score_B", &s.score_b);
        attrs.extend(s.extra_attributes.iter().cloned());
        open(&mut out, 1, "set", &attrs, false);
        for g in &s.games {
            write_game(&mut out, g);
        }
        for node in &s.extra_children {
            write_node(&mut out, 2, node);
        }
        close(&mut out, 1, "set");
    }
    close(&mut out, 0, "match");
    out
}

fn write_game(out: &mut String, g: &Game) {
    let mut attrs = Vec::new();
    push_opt(&mut attrs, "id", &g.id);
    push_opt(&mut attrs, "service", &g.service);
    push_opt(&mut attrs, "score_A", &g.score_a);
    push_opt(&mut attrs, "score_B", &g.score_b);
    attrs.extend(g.extra_attributes.iter().cloned());
    open(out, 2, "game", &attrs, false);
    for p in &g.points {
        let mut attrs = Vec::new();
        push_opt(&mut attrs, "id", &p.id);
        push_opt(&mut attrs, "top", &p.top);
        push_opt(&mut attrs, "service", &p.service);
        push_opt(&mut attrs, "score_A", &p.score_a);
        push_opt(&mut attrs, "score_B", &p.score_b);
        push_opt(&mut attrs, "winner", &p.winner);
        push_opt(&mut attrs, "error", &p.error);
        attrs.extend(p.extra_attributes.iter().cloned());
        open(out, 3, "point", &attrs, false);
        for h in &p.hits {
            let mut attrs = vec![
                ("id".to_string(), h.id.to_string()),
                ("hand".to_string(), h.hand.to_string()),
                ("type".to_string(), h.kind.clone()),
            ];
            push_opt(&mut attrs, "time", &h.time);
            attrs.push(("x".to_string(), h.x.to_string()));
            attrs.push(("y".to_string(), h.y.to_string()));
            attrs.extend(h.extra_attributes.iter().cloned());
            open(out, 4, "hit", &attrs, true);
        }
        for node in &p.extra_children {
            write_node(out, 4, node);
        }
        close(out, 3, "point");
    }
    for node in &g.extra_children {
        write_node(out, 3, node);
    }
    close(out, 2, "game");
}

fn push_opt(attrs: &mut Vec<(String, String)>, key: &str, value: &Option<String>) {
    if let Some(v) = value {
        attrs.push((key.to_string(), v.clone()));
    }
}

fn open(out: &mut String, depth: usize, name: &str, attrs: &[(String, String)], empty: bool) {
    let _ = write!(out, "{:width$}<{name}", "", width = depth * 2);
    for (k, v) in attrs {
        let _ = write!(out, " {k}=\"{}\"", escape(Cow::from(v.as_str())));
    }
    out.push_str(if empty { "/>\n" } else { ">\n" });
}

fn close(out: &mut String, depth: usize, name: &str) {
    let _ = writeln!(out, "{:width$}</{name}>", "", width = depth * 2);
}

fn write_node(out: &mut String, depth: usize, node: &XmlNode) {
    match node {
        XmlNode::Text(t) => {
            let _ = writeln!(out, "{:width$}{}", "", escape(t.trim()), width = depth * 2);
        }
        XmlNode::Element(el) if el.children.is_empty() => open(out, depth, &el.name, &el.attributes, true),
        XmlNode::Element(el) => {
            if let [XmlNode::Text(t)] = el.children.as_slice() {
                let _ = write!(out, "{:width$}<{}", "", el.name, width = depth * 2);
                for (k, v) in &el.attributes {
                    let _ = write!(out, " {k}=\"{}\"", escape(v.as_str()));
                }
                let _ = writeln!(out, ">{}</{}>", escape(t.trim()), el.name);
                return;
            }
            open(out, depth, &el.name, &el.attributes, false);
            for child in &el.children {
                write_node(out, depth + 1, child);
            }
            close(out, depth, &el.name);
        }
    }
}
