//! Plain-text event lists, one event per line:
//!
//! ```text
//! # comment
//! qubits 6                     optional register size
//! excited 0 3                  optional initial |1⟩ qubits
//! 0 1 ee 1.0 0.785             old new kind Ω t
//! 1 2 xy 1.0 0.39 0.5          old new kind Ω t θ
//! many 2 3,4,5 1,0.5,2 0.6     old news couplings t
//! groups 0 3,4 1,1 1 5 2 0.6   old news couplings old news couplings t
//! ```
//!
//! Numbers are written in shortest round-trip form, so a written file
//! parses back to identical events.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use quilt_core::qstate::HamiltonianKind;
use quilt_core::scheme::{CollisionEvent, Event, SimultaneousCollision};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventFile {
    pub n_qubits: Option<usize>,
    pub excited: Option<Vec<usize>>,
    pub events: Vec<Event>,
}

impl EventFile {
    pub fn max_index(&self) -> Option<usize> {
        self.events.iter().flat_map(Event::participants).max()
    }
}

pub fn read_event_file(path: &Path) -> Result<EventFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_events(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn parse_events(text: &str) -> Result<EventFile> {
    let mut file = EventFile::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let mut parse = || -> Result<()> {
            match fields[0] {
                "qubits" => file.n_qubits = Some(single(&fields[1..])?),
                "excited" => file.excited = Some(fields[1..].iter().map(|f| num(f)).collect::<Result<_>>()?),
                "many" => file.events.push(parse_many(&fields[1..])?),
                "groups" => file.events.push(parse_groups(&fields[1..])?),
                _ => file.events.push(parse_collision(&fields)?),
            }
            Ok(())
        };
        parse().with_context(|| format!("line {}: {raw:?}", lineno + 1))?;
    }
    Ok(file)
}

fn num<T: FromStr>(s: &str) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    s.parse::<T>().with_context(|| format!("bad number {s:?}"))
}

fn list<T: FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    s.split(',').map(num).collect()
}

fn single(fields: &[&str]) -> Result<usize> {
    match fields {
        [n] => num(n),
        _ => bail!("expected one number"),
    }
}

fn parse_collision(f: &[&str]) -> Result<Event> {
    let kind = match (f.get(2).copied(), f.len()) {
        (Some("ee"), 5) => HamiltonianKind::ExcitationExchange,
        (Some("xy"), 6) => HamiltonianKind::Xy { theta: num(f[5])? },
        _ => bail!("expected `old new ee Ω t` or `old new xy Ω t θ`"),
    };
    Ok(Event::Collision(CollisionEvent {
        old: num(f[0])?,
        new: num(f[1])?,
        kind,
        coupling: num(f[3])?,
        duration: num(f[4])?,
    }))
}

fn group(old: &str, new: &str, couplings: &str, duration: f64) -> Result<SimultaneousCollision> {
    let g = SimultaneousCollision { old: num(old)?, new: list(new)?, couplings: list(couplings)?, duration };
    if g.new.len() != g.couplings.len() {
        return Err(anyhow!("{} new qubits but {} couplings", g.new.len(), g.couplings.len()));
    }
    Ok(g)
}

fn parse_many(f: &[&str]) -> Result<Event> {
    match f {
        [old, new, couplings, t] => Ok(Event::ManyToOne(group(old, new, couplings, num(t)?)?)),
        _ => bail!("expected `many old news couplings t`"),
    }
}

fn parse_groups(f: &[&str]) -> Result<Event> {
    match f {
        [o1, n1, c1, o2, n2, c2, t] => {
            let t = num(t)?;
            Ok(Event::TwoGroups(group(o1, n1, c1, t)?, group(o2, n2, c2, t)?))
        }
        _ => bail!("expected `groups old news couplings old news couplings t`"),
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn format_event(event: &Event) -> String {
    match event {
        Event::Collision(c) => match c.kind {
            HamiltonianKind::ExcitationExchange => format!("{} {} ee {} {}", c.old, c.new, c.coupling, c.duration),
            HamiltonianKind::Xy { theta } => format!("{} {} xy {} {} {theta}", c.old, c.new, c.coupling, c.duration),
        },
        Event::ManyToOne(g) => format!("many {} {} {} {}", g.old, join(&g.new), join(&g.couplings), g.duration),
        Event::TwoGroups(a, b) => format!(
            "groups {} {} {} {} {} {} {}",
            a.old,
            join(&a.new),
            join(&a.couplings),
            b.old,
            join(&b.new),
            join(&b.couplings),
            a.duration
        ),
    }
}

pub fn format_events(file: &EventFile) -> String {
    let mut out = String::new();
    if let Some(n) = file.n_qubits {
        writeln!(out, "qubits {n}").unwrap();
    }
    if let Some(excited) = &file.excited {
        let list: Vec<String> = excited.iter().map(usize::to_string).collect();
        writeln!(out, "excited {}", list.join(" ")).unwrap();
    }
    for e in &file.events {
        writeln!(out, "{}", format_event(e)).unwrap();
    }
    out
}
